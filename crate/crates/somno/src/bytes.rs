use crate::error::DecodeError;

/// Little-endian cursor that reports the offset of every short read.
pub(crate) struct Reader<'a> {
    bytes: &'a [u8],
    pub pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Reader { bytes, pos: 0 }
    }

    pub fn take<const N: usize>(&mut self, what: &str) -> Result<[u8; N], DecodeError> {
        let end = self.pos + N;
        let chunk = self.bytes.get(self.pos..end).ok_or_else(|| {
            DecodeError::new(
                self.pos,
                format!(
                    "truncated {what}: need {N} bytes, {} left",
                    self.bytes.len() - self.pos
                ),
            )
        })?;
        self.pos = end;
        Ok(chunk.try_into().expect("slice of length N"))
    }

    pub fn u8(&mut self, what: &str) -> Result<u8, DecodeError> {
        Ok(self.take::<1>(what)?[0])
    }

    pub fn u16(&mut self, what: &str) -> Result<u16, DecodeError> {
        self.take(what).map(u16::from_le_bytes)
    }

    pub fn u32(&mut self, what: &str) -> Result<u32, DecodeError> {
        self.take(what).map(u32::from_le_bytes)
    }

    pub fn u64(&mut self, what: &str) -> Result<u64, DecodeError> {
        self.take(what).map(u64::from_le_bytes)
    }

    pub fn f32(&mut self, what: &str) -> Result<f32, DecodeError> {
        self.take(what).map(f32::from_le_bytes)
    }

    pub fn f64(&mut self, what: &str) -> Result<f64, DecodeError> {
        self.take(what).map(f64::from_le_bytes)
    }

    pub fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    pub fn finish(&self) -> Result<(), DecodeError> {
        match self.remaining() {
            0 => Ok(()),
            n => Err(DecodeError::new(self.pos, format!("{n} trailing bytes"))),
        }
    }
}
