//! Varshamov-Tenengolts syndromes modulo `2L` and single-substitution
//! correction.

use crate::bitseq::BitSeq;
use crate::error::{Error, Result};

/// A syndrome value in `Z_{2L}` with its fixed-width binary form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VtTag {
    value: usize,
    base: usize,
}

impl VtTag {
    pub fn new(value: usize, base: usize) -> Result<Self> {
        if base == 0 || value >= 2 * base {
            return Err(Error::Undecodable(format!(
                "syndrome {value} outside Z_{}",
                2 * base
            )));
        }
        Ok(Self { value, base })
    }

    pub fn value(&self) -> usize {
        self.value
    }

    /// Modulus base `L`; values live in `Z_{2L}`.
    pub fn base(&self) -> usize {
        self.base
    }

    pub fn modulus(&self) -> usize {
        2 * self.base
    }

    /// `ceil(log2(2L))`.
    pub fn width(&self) -> usize {
        tag_width(self.base)
    }

    pub fn to_bits(&self) -> BitSeq {
        BitSeq::from_uint(self.value as u128, self.width())
    }

    /// Reads a `width`-bit tag; values `>= 2L` are rejected.
    pub fn from_bits(bits: &BitSeq, base: usize) -> Result<Self> {
        if bits.len() != tag_width(base) {
            return Err(Error::Length {
                expected: tag_width(base),
                actual: bits.len(),
            });
        }
        Self::new(bits.to_uint() as usize, base)
    }
}

/// Bits needed for a syndrome modulo `2L`: `ceil(log2(2L))`.
pub fn tag_width(base: usize) -> usize {
    let modulus = 2 * base;
    (usize::BITS - (modulus - 1).leading_zeros()) as usize
}

/// `sum_i i * x_i mod 2L` over 1-indexed positions.
pub fn syndrome(x: &BitSeq, base: usize) -> VtTag {
    debug_assert!(x.len() <= base, "word longer than the modulus base");
    let modulus = 2 * base;
    let value = x
        .iter()
        .enumerate()
        .filter(|(_, b)| *b)
        .fold(0usize, |acc, (i, _)| (acc + i + 1) % modulus);
    VtTag { value, base }
}

/// Recovers the word with syndrome `expected` from `y`, assuming at most one
/// substitution.
///
/// With `d = expected - syndrome(y) mod 2L`: `d = 0` means no error, a 0 at
/// position `d` was lowered from 1 when `1 <= d <= len`, and a 1 at position
/// `2L - d` was raised from 0 when `2L - len <= d < 2L`. Any other case, or a
/// bit that does not hold the implied value, is reported as undecodable.
pub fn vt_correct(y: &BitSeq, expected: VtTag, base: usize) -> Result<BitSeq> {
    Ok(vt_correct_position(y, expected, base)?
        .map(|p| {
            let mut x = y.clone();
            x.toggle(p).expect("position lies inside the word");
            x
        })
        .unwrap_or_else(|| y.clone()))
}

/// Position that [`vt_correct`] flips, or `None` when `y` is clean.
pub fn vt_correct_position(y: &BitSeq, expected: VtTag, base: usize) -> Result<Option<usize>> {
    if expected.base() != base {
        return Err(Error::Undecodable(format!(
            "tag base {} does not match {base}",
            expected.base()
        )));
    }
    if y.len() > base {
        return Err(Error::Length {
            expected: base,
            actual: y.len(),
        });
    }
    let modulus = 2 * base;
    let len = y.len();
    let d = (expected.value() + modulus - syndrome(y, base).value()) % modulus;
    if d == 0 {
        return Ok(None);
    }
    if d <= len && y.bit(d) == Some(false) {
        return Ok(Some(d));
    }
    if d + len >= modulus {
        let p = modulus - d;
        if y.bit(p) == Some(true) {
            return Ok(Some(p));
        }
    }
    Err(Error::Undecodable(format!(
        "syndrome difference {d} does not match a single substitution in {len} bits"
    )))
}
