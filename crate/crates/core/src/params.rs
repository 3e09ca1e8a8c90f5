//! Code parameters: lengths, integer weight bands and rational weight profiles.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::bitseq::Constraint;
use crate::error::{Error, Result};

/// Exact non-negative rational, used for the weight fractions `p1`, `p2`.
pub type Fraction = Ratio<u64>;

/// Inclusive integer weight interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Band {
    lo: usize,
    hi: usize,
}

impl Band {
    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo > hi {
            return Err(Error::infeasible("band", format!("lower bound {lo} exceeds upper bound {hi}")));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn contains(&self, weight: usize) -> bool {
        (self.lo..=self.hi).contains(&weight)
    }

    /// Number of integers in the band.
    pub fn width(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_subset_of(&self, other: &Band) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Weight fractions `0 <= p1 < 1/2 < p2 <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Profile {
    p1: Fraction,
    p2: Fraction,
}

impl Profile {
    pub fn new(p1: Fraction, p2: Fraction) -> Result<Self> {
        let half = Fraction::new(1, 2);
        if !(p1 < half && half < p2 && p2 <= Fraction::from_integer(1)) {
            return Err(Error::infeasible(
                "profile",
                format!("need 0 <= p1 < 1/2 < p2 <= 1, got p1={p1}, p2={p2}"),
            ));
        }
        Ok(Self { p1, p2 })
    }

    pub fn p1(&self) -> Fraction {
        self.p1
    }

    pub fn p2(&self) -> Fraction {
        self.p2
    }

    /// `ceil(p1 * len)`.
    pub fn lower(&self, len: usize) -> usize {
        (self.p1 * Fraction::from_integer(len as u64)).ceil().to_integer() as usize
    }

    /// `floor(p2 * len)`.
    pub fn upper(&self, len: usize) -> usize {
        (self.p2 * Fraction::from_integer(len as u64)).floor().to_integer() as usize
    }

    /// Integer target band `[ceil(p1 len), floor(p2 len)]`.
    pub fn target(&self, len: usize) -> Band {
        Band {
            lo: self.lower(len),
            hi: self.upper(len),
        }
    }

    pub fn spread(&self) -> Fraction {
        self.p2 - self.p1
    }

    /// `(p + 1/2) / 2` applied to both fractions.
    pub fn tightened(&self) -> Profile {
        let half = Fraction::new(1, 2);
        Profile {
            p1: (self.p1 + half) * half,
            p2: (self.p2 + half) * half,
        }
    }

    /// `min(1/2 - p1, p2 - 1/2)`.
    pub fn margin(&self) -> Fraction {
        let half = Fraction::new(1, 2);
        (half - self.p1).min(self.p2 - half)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p1, self.p2)
    }
}

impl Serialize for Profile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.p1.to_string(), self.p2.to_string()).serialize(s)
    }
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_fraction(s: &str) -> Result<Fraction> {
    let bad = || Error::infeasible("fraction", format!("cannot parse {s:?} as num/den"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: u64 = num.parse().map_err(|_| bad())?;
    let den: u64 = den.parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(bad());
    }
    Ok(Fraction::new(num, den))
}

impl FromStr for Profile {
    type Err = Error;

    /// `"p1,p2"`, each a `num/den` fraction.
    fn from_str(s: &str) -> Result<Self> {
        let (p1, p2) = s
            .split_once(',')
            .ok_or_else(|| Error::infeasible("profile", format!("expected p1,p2 in {s:?}")))?;
        Profile::new(parse_fraction(p1)?, parse_fraction(p2)?)
    }
}

/// Codeword length, subblock/window length and weight band, optionally with
/// the fractional profile the band was derived from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    n: usize,
    ell: usize,
    band: Band,
    profile: Option<Profile>,
}

impl CodeParams {
    /// Validates `0 <= a < b <= ell <= n`.
    pub fn new(n: usize, ell: usize, a: usize, b: usize) -> Result<Self> {
        if a >= b {
            return Err(Error::infeasible("band", format!("need a < b, got a={a}, b={b}")));
        }
        if b > ell {
            return Err(Error::infeasible("band", format!("need b <= ell, got b={b}, ell={ell}")));
        }
        if ell > n || ell == 0 {
            return Err(Error::infeasible("lengths", format!("need 0 < ell <= n, got ell={ell}, n={n}")));
        }
        Ok(Self {
            n,
            ell,
            band: Band { lo: a, hi: b },
            profile: None,
        })
    }

    /// Band `[ceil(p1 ell), floor(p2 ell)]` taken from `profile`.
    pub fn from_profile(n: usize, ell: usize, profile: Profile) -> Result<Self> {
        let band = profile.target(ell);
        Self::new(n, ell, band.lo, band.hi)?.with_profile(profile)
    }

    /// Attaches a profile; requires `a <= p1 ell` and `b >= p2 ell`.
    pub fn with_profile(mut self, profile: Profile) -> Result<Self> {
        let inner = profile.target(self.ell);
        if !inner.is_subset_of(&self.band) {
            return Err(Error::infeasible(
                "profile",
                format!(
                    "band {} must contain [p1 ell, p2 ell] = {inner} for profile {profile}",
                    self.band
                ),
            ));
        }
        self.profile = Some(profile);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn a(&self) -> usize {
        self.band.lo
    }

    pub fn b(&self) -> usize {
        self.band.hi
    }

    pub fn band(&self) -> Band {
        self.band
    }

    pub fn constraint(&self) -> Constraint {
        Constraint::new(self.ell, self.band)
    }

    pub fn explicit_profile(&self) -> Option<Profile> {
        self.profile
    }

    /// The attached profile, or `(a/ell, b/ell)` when none was given.
    pub fn profile(&self) -> Result<Profile> {
        match self.profile {
            Some(p) => Ok(p),
            None => Profile::new(
                Fraction::new(self.band.lo as u64, self.ell as u64),
                Fraction::new(self.band.hi as u64, self.ell as u64),
            ),
        }
    }

    /// Number of subblocks `m = n / ell`.
    pub fn subblocks(&self) -> Result<usize> {
        let (m, rem) = self.n.div_rem(&self.ell);
        if rem != 0 {
            return Err(Error::infeasible(
                "subblocks",
                format!("n={} is not a multiple of ell={}", self.n, self.ell),
            ));
        }
        Ok(m)
    }
}
