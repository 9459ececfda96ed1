//! EDD v1: a little-endian container of labeled 384-point samples.
//!
//! ```text
//! "EDD1" | u32 n_samples | u32 n_points (384) | u32 sample_rate_hz (128)
//! n_samples × ( u16 subject_id | u8 label | f32 × n_points )
//! ```

use std::path::Path;

use somno_core::data::{EegSample, Label, LabeledSet};
use somno_core::{SAMPLE_LEN, SAMPLE_RATE_HZ};

use crate::bytes::Reader;
use crate::error::{DecodeError, Error, Result};

pub const MAGIC: [u8; 4] = *b"EDD1";
pub const HEADER_LEN: usize = 16;
const RECORD_LEN: usize = 2 + 1 + 4 * SAMPLE_LEN;

pub fn encode_edd(set: &LabeledSet) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + set.len() * RECORD_LEN);
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&(set.len() as u32).to_le_bytes());
    out.extend_from_slice(&(SAMPLE_LEN as u32).to_le_bytes());
    out.extend_from_slice(&SAMPLE_RATE_HZ.to_le_bytes());
    for s in &set.samples {
        out.extend_from_slice(&s.subject_id.to_le_bytes());
        out.push(s.label.index() as u8);
        for v in &s.values {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn decode_edd(bytes: &[u8]) -> Result<LabeledSet, DecodeError> {
    let mut r = Reader::new(bytes);
    let magic = r.take::<4>("magic")?;
    if magic != MAGIC {
        return Err(DecodeError::new(
            0,
            format!("bad magic {magic:?}, expected \"EDD1\""),
        ));
    }
    let n = r.u32("sample count")? as usize;
    let points = r.u32("point count")?;
    if points as usize != SAMPLE_LEN {
        return Err(DecodeError::new(
            8,
            format!("n_points is {points}, must be {SAMPLE_LEN}"),
        ));
    }
    let rate = r.u32("sample rate")?;
    if rate != SAMPLE_RATE_HZ {
        return Err(DecodeError::new(
            12,
            format!("sample rate is {rate} Hz, must be {SAMPLE_RATE_HZ}"),
        ));
    }
    let expected = n.checked_mul(RECORD_LEN).and_then(|b| b.checked_add(HEADER_LEN));
    if expected != Some(bytes.len()) {
        let need = expected.map_or("overflowing".into(), |e| e.to_string());
        // First byte of the incomplete record, or of the surplus.
        let complete = (r.remaining() / RECORD_LEN).min(n);
        let offset = HEADER_LEN + complete * RECORD_LEN;
        return Err(DecodeError::new(
            offset,
            format!(
                "header announces {n} samples ({need} bytes) but file has {} bytes",
                bytes.len()
            ),
        ));
    }
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let start = r.pos;
        let subject = r.u16("subject id")?;
        let label_pos = r.pos;
        let label = r.u8("label")?;
        let label = Label::from_index(label as usize)
            .map_err(|_| DecodeError::new(label_pos, format!("sample {i}: label {label} is not 0 or 1")))?;
        let mut values = Vec::with_capacity(SAMPLE_LEN);
        for _ in 0..SAMPLE_LEN {
            values.push(r.f32("sample values")?);
        }
        let sample = EegSample::new(values, subject, label)
            .map_err(|e| DecodeError::new(start, format!("sample {i}: {e}")))?;
        samples.push(sample);
    }
    r.finish()?;
    Ok(LabeledSet::new(samples))
}

pub fn save_edd(set: &LabeledSet, path: &Path) -> Result<()> {
    std::fs::write(path, encode_edd(set)).map_err(|e| Error::io(path, e))
}

pub fn load_edd(path: &Path) -> Result<LabeledSet> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_edd(&bytes).map_err(|e| e.at(path))
}
