use super::Matrix;
use crate::{Error, Result};

/// Probabilities are clamped here before taking logs.
pub const PROB_FLOOR: f64 = 1e-12;

/// Mean negative log-likelihood of the true classes.
pub fn cross_entropy_loss(probs: &Matrix, labels: &[usize]) -> Result<f64> {
    if labels.len() != probs.rows {
        return Err(Error::dim("labels", probs.rows, labels.len()));
    }
    let mut total = 0.0;
    for (b, &y) in labels.iter().enumerate() {
        if y >= probs.cols {
            return Err(Error::Label(y));
        }
        total -= libm::log(probs.row(b)[y].max(PROB_FLOOR));
    }
    Ok(total / probs.rows as f64)
}

/// Gradient of the mean loss w.r.t. the logits: `(p − onehot(y)) / batch`.
pub fn cross_entropy_grad(probs: &Matrix, labels: &[usize]) -> Result<Matrix> {
    if labels.len() != probs.rows {
        return Err(Error::dim("labels", probs.rows, labels.len()));
    }
    let mut g = probs.clone();
    let inv = 1.0 / probs.rows as f64;
    for (b, &y) in labels.iter().enumerate() {
        if y >= probs.cols {
            return Err(Error::Label(y));
        }
        let row = g.row_mut(b);
        row[y] -= 1.0;
        for v in row.iter_mut() {
            *v *= inv;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn reference_losses() {
        let perfect = Matrix::from_vec(1, 2, vec![0.0, 1.0]).unwrap();
        assert_eq!(cross_entropy_loss(&perfect, &[1]).unwrap(), 0.0);
        let uniform = Matrix::from_vec(2, 2, vec![0.5; 4]).unwrap();
        let l = cross_entropy_loss(&uniform, &[0, 1]).unwrap();
        assert!((l - core::f64::consts::LN_2).abs() < 1e-15);
        let l = cross_entropy_loss(&perfect, &[0]).unwrap();
        assert!((l + libm::log(1e-12)).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_label() {
        let p = Matrix::from_vec(1, 2, vec![0.5, 0.5]).unwrap();
        assert_eq!(cross_entropy_loss(&p, &[2]).unwrap_err(), Error::Label(2));
    }
}
