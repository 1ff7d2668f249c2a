//! Fixed-width big-endian bit fields.

use bitvec::prelude::*;

pub type Bits = BitVec<u8, Msb0>;

#[derive(Default)]
pub struct Writer {
    pub bits: Bits,
}

impl Writer {
    pub fn put(&mut self, value: u64, width: u32) {
        debug_assert!(width == 64 || value >> width == 0, "{value} does not fit in {width} bits");
        for i in (0..width).rev() {
            self.bits.push(value >> i & 1 == 1);
        }
    }

    pub fn flag(&mut self, b: bool) {
        self.bits.push(b);
    }
}

/// Bits needed to write every value up to `max`.
pub fn width_for(max: u64) -> u32 {
    (64 - max.leading_zeros()).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncated;

pub struct Reader<'a> {
    bits: &'a BitSlice<u8, Msb0>,
    at: usize,
}

impl<'a> Reader<'a> {
    pub fn new(bits: &'a BitSlice<u8, Msb0>) -> Reader<'a> {
        Reader { bits, at: 0 }
    }

    pub fn get(&mut self, width: u32) -> Result<u64, Truncated> {
        let end = self.at + width as usize;
        let field = self.bits.get(self.at..end).ok_or(Truncated)?;
        self.at = end;
        Ok(field.iter().fold(0, |acc, b| acc << 1 | u64::from(*b)))
    }

    pub fn flag(&mut self) -> Result<bool, Truncated> {
        Ok(self.get(1)? == 1)
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.at
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields_round_trip() {
        let mut w = Writer::default();
        w.put(5, 3);
        w.flag(true);
        w.put(1023, 10);
        w.put(0, 1);
        let mut r = Reader::new(&w.bits);
        assert_eq!(r.get(3), Ok(5));
        assert_eq!(r.flag(), Ok(true));
        assert_eq!(r.get(10), Ok(1023));
        assert_eq!(r.get(1), Ok(0));
        assert_eq!(r.remaining(), 0);
        assert_eq!(r.get(1), Err(Truncated));
    }

    #[test]
    fn widths() {
        assert_eq!(width_for(0), 1);
        assert_eq!(width_for(1), 1);
        assert_eq!(width_for(255), 8);
        assert_eq!(width_for(256), 9);
    }
}
