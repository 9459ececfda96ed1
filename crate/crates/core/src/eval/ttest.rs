use alloc::format;

use super::special::student_t_two_tailed;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTest {
    pub t: f64,
    pub df: usize,
    /// Two-tailed.
    pub p: f64,
}

/// Paired t-test on `a − b`.
///
/// Degenerate differences: all zero gives `t = 0, p = 1`; constant but
/// nonzero gives `t = ±∞, p = 0`.
pub fn paired_ttest(a: &[f64], b: &[f64]) -> Result<TTest> {
    if a.len() != b.len() {
        return Err(Error::Argument(format!(
            "paired samples differ in length: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::Argument(format!("paired t-test needs n ≥ 2, got {n}")));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::Argument("paired samples must be finite".into()));
    }
    let nf = n as f64;
    let mean = a.iter().zip(b).map(|(x, y)| x - y).sum::<f64>() / nf;
    let ss: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y - mean) * (x - y - mean))
        .sum();
    let sd = libm::sqrt(ss / (nf - 1.0));
    let df = n - 1;
    if sd == 0.0 {
        return Ok(if mean == 0.0 {
            TTest { t: 0.0, df, p: 1.0 }
        } else {
            TTest {
                t: f64::INFINITY.copysign(mean),
                df,
                p: 0.0,
            }
        });
    }
    let t = mean / (sd / libm::sqrt(nf));
    Ok(TTest {
        t,
        df,
        p: student_t_two_tailed(t, df as f64),
    })
}
