//! Binomial coefficients and lexicographic rank/unrank over classes of
//! fixed-length binary words.
//!
//! A class only needs to answer one question: how many words of the class
//! extend a given prefix. Rank and unrank then follow the usual enumerative
//! scheme, bit by bit, in `O(len * cost(completions))`.

use std::sync::OnceLock;

use crate::bitseq::BitSeq;
use crate::error::{Error, Result};
use crate::params::Band;

/// Largest `n` for which `binomial(n, k)` is tabulated. `C(127, 63)` fits in u128.
pub const MAX_BINOMIAL_N: usize = 127;

fn pascal() -> &'static [Vec<u128>] {
    static TABLE: OnceLock<Vec<Vec<u128>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut rows: Vec<Vec<u128>> = Vec::with_capacity(MAX_BINOMIAL_N + 1);
        for n in 0..=MAX_BINOMIAL_N {
            let mut row = vec![1u128; n + 1];
            for k in 1..n {
                row[k] = rows[n - 1][k - 1] + rows[n - 1][k];
            }
            rows.push(row);
        }
        rows
    })
}

/// `C(n, k)`, zero when `k > n`. Panics for `n > MAX_BINOMIAL_N`.
pub fn binomial(n: usize, k: usize) -> u128 {
    assert!(n <= MAX_BINOMIAL_N, "binomial table limited to n <= {MAX_BINOMIAL_N}");
    if k > n {
        0
    } else {
        pascal()[n][k]
    }
}

/// Number of ways to place `j` ones among `free` positions, summed over the
/// `j` for which `accept(j)` holds.
fn sum_binomials(free: usize, mut accept: impl FnMut(usize) -> bool) -> u128 {
    (0..=free).filter(|&j| accept(j)).map(|j| binomial(free, j)).sum()
}

/// A set of binary words of one fixed length, counted by completions.
pub trait WordClass {
    fn word_len(&self) -> usize;

    /// Number of class members whose first `prefix.len()` bits equal `prefix`.
    fn completions(&self, prefix: &[bool]) -> u128;

    fn size(&self) -> u128 {
        self.completions(&[])
    }

    fn contains(&self, word: &[bool]) -> bool {
        word.len() == self.word_len() && self.completions(word) == 1
    }

    /// Lexicographic rank (0 before 1) of `word` among class members.
    fn rank(&self, word: &BitSeq) -> Option<u128> {
        let bits = word.as_slice();
        if !self.contains(bits) {
            return None;
        }
        let mut scratch = Vec::with_capacity(bits.len());
        let mut rank = 0u128;
        for &bit in bits {
            if bit {
                scratch.push(false);
                rank += self.completions(&scratch);
                scratch.pop();
            }
            scratch.push(bit);
        }
        Some(rank)
    }

    /// The member with lexicographic rank `rank`.
    fn unrank(&self, mut rank: u128) -> Result<BitSeq> {
        let size = self.size();
        if rank >= size {
            return Err(Error::LabelOutOfRange { label: rank, size });
        }
        let mut word = vec![false; self.word_len()];
        for i in 0..word.len() {
            let with_zero = self.completions(&word[..=i]);
            if rank >= with_zero {
                rank -= with_zero;
                word[i] = true;
            }
        }
        Ok(BitSeq::from_bools(word))
    }
}

/// Words of length `len` whose weight lies inside (or, with `inside = false`,
/// outside) `band`.
#[derive(Debug, Clone, Copy)]
pub struct WeightClass {
    len: usize,
    band: Band,
    inside: bool,
}

impl WeightClass {
    pub fn inside(len: usize, band: Band) -> Self {
        Self { len, band, inside: true }
    }

    pub fn outside(len: usize, band: Band) -> Self {
        Self { len, band, inside: false }
    }

    /// Balanced words of even length `len`.
    pub fn balanced(len: usize) -> Self {
        let half = len / 2;
        Self::inside(len, Band::new(half, half).expect("lo == hi"))
    }
}

impl WordClass for WeightClass {
    fn word_len(&self) -> usize {
        self.len
    }

    fn completions(&self, prefix: &[bool]) -> u128 {
        if prefix.len() > self.len {
            return 0;
        }
        let fixed = prefix.iter().filter(|&&b| b).count();
        sum_binomials(self.len - prefix.len(), |j| {
            self.band.contains(fixed + j) == self.inside
        })
    }
}

/// Words of length `ell + 1` in which the first or the last length-`ell`
/// window has weight outside `band`.
#[derive(Debug, Clone, Copy)]
pub struct TwoWindowClass {
    ell: usize,
    band: Band,
}

impl TwoWindowClass {
    pub fn new(ell: usize, band: Band) -> Self {
        Self { ell, band }
    }

    fn offending(&self, head: usize, inner: usize, tail: usize) -> bool {
        !self.band.contains(head + inner) || !self.band.contains(inner + tail)
    }
}

impl WordClass for TwoWindowClass {
    fn word_len(&self) -> usize {
        self.ell + 1
    }

    fn completions(&self, prefix: &[bool]) -> u128 {
        let len = self.ell + 1;
        let p = prefix.len();
        if p > len {
            return 0;
        }
        // Layout: bit 1 | bits 2..=ell (inner) | bit ell+1.
        let heads: &[usize] = match prefix.first() {
            Some(&b) => if b { &[1] } else { &[0] },
            None => &[0, 1],
        };
        let tails: &[usize] = match (p == len).then(|| prefix[len - 1]) {
            Some(b) => if b { &[1] } else { &[0] },
            None => &[0, 1],
        };
        let inner_fixed_end = p.min(self.ell);
        let inner_fixed = if inner_fixed_end > 1 {
            prefix[1..inner_fixed_end].iter().filter(|&&b| b).count()
        } else {
            0
        };
        let inner_free = (self.ell - 1) - inner_fixed_end.saturating_sub(1);
        let mut total = 0u128;
        for &head in heads {
            for &tail in tails {
                total += sum_binomials(inner_free, |j| {
                    self.offending(head, inner_fixed + j, tail)
                });
            }
        }
        total
    }
}
