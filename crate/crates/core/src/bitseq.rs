//! Finite binary sequences with the 1-indexed subblock/window vocabulary used
//! throughout the crate.
//!
//! Positions in the public API are 1-indexed: `window(x, i, ell)` is
//! `x_i .. x_{i+ell-1}` and `subblock(x, i, ell)` is
//! `x_{(i-1)ell+1} .. x_{i*ell}`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{Band, CodeParams};

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSeq {
    bits: Vec<bool>,
}

impl BitSeq {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(capacity: usize) -> Self {
        Self {
            bits: Vec::with_capacity(capacity),
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn ones(len: usize) -> Self {
        Self {
            bits: vec![true; len],
        }
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Big-endian `width`-bit representation of `value`.
    ///
    /// Panics if `value` does not fit.
    pub fn from_uint(value: u128, width: usize) -> Self {
        assert!(
            width >= 128 || value >> width == 0,
            "{value} does not fit in {width} bits"
        );
        Self {
            bits: (0..width)
                .rev()
                .map(|shift| shift < 128 && (value >> shift) & 1 == 1)
                .collect(),
        }
    }

    /// Big-endian integer value. Panics above 128 bits.
    pub fn to_uint(&self) -> u128 {
        assert!(self.len() <= 128, "sequence too long for u128");
        self.bits
            .iter()
            .fold(0u128, |acc, &b| (acc << 1) | u128::from(b))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_bools(self) -> Vec<bool> {
        self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    /// Bit at 1-indexed position `i`.
    pub fn bit(&self, i: usize) -> Option<bool> {
        i.checked_sub(1).and_then(|j| self.bits.get(j).copied())
    }

    /// Flips the bit at 1-indexed position `i` in place.
    pub fn toggle(&mut self, i: usize) -> Result<()> {
        let max = self.len();
        match i.checked_sub(1).and_then(|j| self.bits.get_mut(j)) {
            Some(b) => {
                *b = !*b;
                Ok(())
            }
            None => Err(Error::IndexOutOfRange { index: i, max }),
        }
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitSeq) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn concat(&self, other: &BitSeq) -> BitSeq {
        let mut out = Vec::with_capacity(self.len() + other.len());
        out.extend_from_slice(&self.bits);
        out.extend_from_slice(&other.bits);
        BitSeq { bits: out }
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn prefix(&self, len: usize) -> BitSeq {
        BitSeq::from(&self.bits[..len.min(self.len())])
    }

    pub fn suffix(&self, len: usize) -> BitSeq {
        BitSeq::from(&self.bits[self.len() - len.min(self.len())..])
    }

    /// `len` bits starting at 1-indexed position `start`.
    pub fn slice(&self, start: usize, len: usize) -> Result<BitSeq> {
        let max_start = (self.len() + 1).saturating_sub(len);
        if start == 0 || start > max_start {
            return Err(Error::IndexOutOfRange {
                index: start,
                max: max_start,
            });
        }
        Ok(BitSeq::from(&self.bits[start - 1..start - 1 + len]))
    }

    /// The `i`th subblock of length `ell`.
    pub fn subblock(&self, i: usize, ell: usize) -> Result<BitSeq> {
        if ell == 0 || self.len() % ell != 0 {
            return Err(Error::Length {
                expected: ell * self.len().div_ceil(ell.max(1)),
                actual: self.len(),
            });
        }
        let m = self.len() / ell;
        if i == 0 || i > m {
            return Err(Error::IndexOutOfRange { index: i, max: m });
        }
        self.slice((i - 1) * ell + 1, ell)
    }

    /// Iterator over consecutive non-overlapping chunks of length `ell`.
    pub fn chunks(&self, ell: usize) -> impl Iterator<Item = BitSeq> + '_ {
        self.bits.chunks(ell).map(BitSeq::from)
    }

    /// The `i`th window of length `ell`.
    pub fn window(&self, i: usize, ell: usize) -> Result<BitSeq> {
        self.slice(i, ell)
    }

    /// Complements positions `1..=t`; `t = 0` is the identity.
    pub fn flip_prefix(&self, t: usize) -> Result<BitSeq> {
        if t > self.len() {
            return Err(Error::IndexOutOfRange {
                index: t,
                max: self.len(),
            });
        }
        let mut out = self.clone();
        out.bits[..t].iter_mut().for_each(|b| *b = !*b);
        Ok(out)
    }

    pub fn complement(&self) -> BitSeq {
        BitSeq {
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }

    /// `x_1 y_1 x_2 y_2 ... x_n y_n`.
    pub fn interleave(&self, other: &BitSeq) -> Result<BitSeq> {
        if self.len() != other.len() {
            return Err(Error::Length {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(BitSeq {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .flat_map(|(&a, &b)| [a, b])
                .collect(),
        })
    }

    /// Inverse of [`BitSeq::interleave`]: (odd positions, even positions).
    pub fn deinterleave(&self) -> Result<(BitSeq, BitSeq)> {
        if self.len() % 2 != 0 {
            return Err(Error::Length {
                expected: self.len() + 1,
                actual: self.len(),
            });
        }
        let odd = self.bits.iter().step_by(2).copied().collect();
        let even = self.bits.iter().skip(1).step_by(2).copied().collect();
        Ok((BitSeq { bits: odd }, BitSeq { bits: even }))
    }

    /// Smallest 1-indexed window start whose weight falls outside `band`.
    pub fn first_forbidden_window(&self, ell: usize, band: Band) -> Option<Violation> {
        if ell == 0 || self.len() < ell {
            return None;
        }
        let mut weight = self.bits[..ell].iter().filter(|&&b| b).count();
        for start in 0..=self.len() - ell {
            if start > 0 {
                weight = weight + usize::from(self.bits[start + ell - 1])
                    - usize::from(self.bits[start - 1]);
            }
            if !band.contains(weight) {
                return Some(Violation {
                    index: start + 1,
                    weight,
                });
            }
        }
        None
    }

    /// Membership in the subblock or sliding-window class of `constraint`.
    pub fn check(&self, constraint: Constraint, mode: Mode) -> Verdict {
        let Constraint { ell, band } = constraint;
        match mode {
            Mode::Subblock => {
                if ell == 0 || self.len() % ell != 0 {
                    return Verdict::LengthMismatch {
                        len: self.len(),
                        ell,
                    };
                }
                self.bits
                    .chunks(ell)
                    .enumerate()
                    .find_map(|(i, block)| {
                        let weight = block.iter().filter(|&&b| b).count();
                        (!band.contains(weight)).then_some(Violation {
                            index: i + 1,
                            weight,
                        })
                    })
                    .map_or(Verdict::Member, Verdict::Violation)
            }
            Mode::Window => {
                if ell == 0 || self.len() < ell {
                    return Verdict::LengthMismatch {
                        len: self.len(),
                        ell,
                    };
                }
                self.first_forbidden_window(ell, band)
                    .map_or(Verdict::Member, Verdict::Violation)
            }
        }
    }
}

/// Checks `x` against the `(ell, [a, b])` constraint carried by `params`.
pub fn check_membership(x: &BitSeq, params: &CodeParams, mode: Mode) -> Verdict {
    x.check(params.constraint(), mode)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Non-overlapping subblocks of length `ell`.
    Subblock,
    /// Every length-`ell` sliding window.
    Window,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "subblock" | "s" => Ok(Mode::Subblock),
            "window" | "w" => Ok(Mode::Window),
            other => Err(format!("unknown mode {other:?} (expected subblock|window)")),
        }
    }
}

/// A window/subblock length together with its admissible weight band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Constraint {
    pub ell: usize,
    pub band: Band,
}

impl Constraint {
    pub fn new(ell: usize, band: Band) -> Self {
        Self { ell, band }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// 1-indexed subblock or window number.
    pub index: usize,
    pub weight: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum Verdict {
    Member,
    Violation(Violation),
    LengthMismatch { len: usize, ell: usize },
}

impl Verdict {
    pub fn is_member(&self) -> bool {
        matches!(self, Verdict::Member)
    }

    pub fn violation(&self) -> Option<Violation> {
        match self {
            Verdict::Violation(v) => Some(*v),
            _ => None,
        }
    }
}

impl From<&[bool]> for BitSeq {
    fn from(bits: &[bool]) -> Self {
        Self {
            bits: bits.to_vec(),
        }
    }
}

impl FromIterator<bool> for BitSeq {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self {
            bits: iter.into_iter().collect(),
        }
    }
}

impl FromStr for BitSeq {
    type Err = Error;

    /// Parses a string of `0`/`1` characters. Spaces and underscores are
    /// accepted as visual separators.
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .enumerate()
            .filter(|(_, c)| *c != ' ' && *c != '_')
            .map(|(column, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                found => Err(Error::Parse {
                    column: column + 1,
                    found,
                }),
            })
            .collect()
    }
}

impl fmt::Display for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitSeq({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitSeq {
        s.parse().unwrap()
    }

    fn example_one() -> BitSeq {
        bs("001111 110000 011001")
    }

    #[test]
    fn weight_examples() {
        assert_eq!(bs("00111").weight(), 3);
        assert_eq!(BitSeq::new().weight(), 0);
        assert_eq!(bs("110000000000").weight(), 2);
    }

    #[test]
    fn subblock_examples() {
        let x = example_one();
        assert_eq!(x.subblock(2, 6).unwrap(), bs("110000"));
        assert_eq!(x.subblock(1, 18).unwrap(), x);
        assert_eq!(bs("0101").subblock(2, 2).unwrap(), bs("01"));
    }

    #[test]
    fn subblock_errors() {
        let x = example_one();
        assert!(matches!(x.subblock(4, 6), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(x.subblock(0, 6), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(x.subblock(1, 5), Err(Error::Length { .. })));
    }

    #[test]
    fn window_examples() {
        let x = example_one();
        assert_eq!(x.window(3, 6).unwrap(), bs("111111"));
        assert_eq!(x.window(9, 6).unwrap(), bs("000001"));
        assert_eq!(x.window(1, 18).unwrap(), x);
        assert!(x.window(14, 6).is_err());
        assert!(x.window(0, 6).is_err());
    }

    #[test]
    fn flip_prefix_examples() {
        assert_eq!(bs("001111").flip_prefix(5).unwrap(), bs("110001"));
        assert_eq!(
            bs("110000000000").flip_prefix(8).unwrap(),
            bs("001111110000")
        );
        assert_eq!(bs("0110").flip_prefix(0).unwrap(), bs("0110"));
        assert!(bs("0110").flip_prefix(5).is_err());
    }

    #[test]
    fn interleave_examples() {
        assert_eq!(bs("10").interleave(&bs("01")).unwrap(), bs("1001"));
        assert_eq!(bs("1").interleave(&bs("0")).unwrap(), bs("10"));
        let x = bs("111");
        let z = x.interleave(&x.complement()).unwrap();
        assert_eq!(z, bs("101010"));
        assert_eq!(z.weight() * 2, z.len());
        assert!(bs("1").interleave(&bs("01")).is_err());
        assert_eq!(z.deinterleave().unwrap(), (bs("111"), bs("000")));
    }

    #[test]
    fn membership_examples() {
        let x = example_one();
        let c = Constraint::new(6, Band::new(2, 5).unwrap());
        assert_eq!(x.check(c, Mode::Subblock), Verdict::Member);
        assert_eq!(
            x.check(c, Mode::Window),
            Verdict::Violation(Violation {
                index: 3,
                weight: 6
            })
        );
        let zeros = BitSeq::zeros(12);
        let c = Constraint::new(4, Band::new(1, 4).unwrap());
        assert_eq!(zeros.check(c, Mode::Window).violation().unwrap().index, 1);
        assert!(matches!(
            bs("0101").check(Constraint::new(3, c.band), Mode::Subblock),
            Verdict::LengthMismatch { .. }
        ));
    }

    #[test]
    fn membership_via_params() {
        let params = CodeParams::new(18, 6, 2, 5).unwrap();
        assert!(check_membership(&example_one(), &params, Mode::Subblock).is_member());
        assert!(!check_membership(&example_one(), &params, Mode::Window).is_member());
    }

    #[test]
    fn parse_rejects_other_characters() {
        assert_eq!(
            "0120".parse::<BitSeq>(),
            Err(Error::Parse {
                column: 3,
                found: '2'
            })
        );
    }

    #[test]
    fn uint_round_trip() {
        assert_eq!(BitSeq::from_uint(5, 4), bs("0101"));
        assert_eq!(bs("0101").to_uint(), 5);
        assert_eq!(BitSeq::from_uint(0, 0), BitSeq::new());
    }

    #[test]
    fn window_membership_implies_subblock_membership() {
        // Exhaustive for every n <= 12 with ell | n and every band.
        for n in 1..=12usize {
            for ell in (1..=n).filter(|ell| n % ell == 0) {
                for lo in 0..=ell {
                    for hi in lo..=ell {
                        let c = Constraint::new(ell, Band::new(lo, hi).unwrap());
                        for v in 0..1u32 << n {
                            let x = BitSeq::from_uint(u128::from(v), n);
                            if x.check(c, Mode::Window).is_member() {
                                assert!(x.check(c, Mode::Subblock).is_member(), "{x}");
                            }
                        }
                    }
                }
            }
        }
    }
}
