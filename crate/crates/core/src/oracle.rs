//! Exact counts, exhaustive enumeration and bound checks.
//!
//! Everything here is computed from first principles (big-integer binomials,
//! a transfer DP over window states, brute-force scans) and shares no code
//! path with the encoders, so it can serve as ground truth in tests.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Serialize, Serializer};

use crate::bitseq::{BitSeq, Constraint, Mode};
use crate::codec::Codec;
use crate::error::{Error, Result};
use crate::params::{Band, Fraction};

/// Default cap on the number of DP states (`2^(ell-1)`) for [`count_swcc`].
pub const DEFAULT_STATE_CAP: usize = 1 << 24;

/// Default cap on the number of words scanned by [`enumerate_class`].
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 24;

fn big_binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    // Each prefix of the product is itself a binomial, so the division is exact.
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn validate(n: usize, ell: usize, a: usize, b: usize) -> Result<Band> {
    if a > b {
        return Err(Error::infeasible("band", format!("need a <= b, got a={a}, b={b}")));
    }
    if b > ell {
        return Err(Error::infeasible("band", format!("need b <= ell, got b={b}, ell={ell}")));
    }
    if ell == 0 || ell > n {
        return Err(Error::infeasible("lengths", format!("need 0 < ell <= n, got ell={ell}, n={n}")));
    }
    Band::new(a, b)
}

/// `|S(n, ell, [a, b])| = (sum_{i=a..b} C(ell, i))^(n/ell)`.
pub fn count_secc(n: usize, ell: usize, a: usize, b: usize) -> Result<BigUint> {
    validate(n, ell, a, b)?;
    if n % ell != 0 {
        return Err(Error::infeasible(
            "subblocks",
            format!("n={n} is not a multiple of ell={ell}"),
        ));
    }
    let per_block: BigUint = (a..=b).map(|i| big_binomial(ell, i)).sum();
    Ok(num_traits::pow(per_block, n / ell))
}

/// `|W(n, ell, [a, b])|` with the default state cap.
pub fn count_swcc(n: usize, ell: usize, a: usize, b: usize) -> Result<BigUint> {
    count_swcc_capped(n, ell, a, b, DEFAULT_STATE_CAP)
}

/// `|W(n, ell, [a, b])|` by dynamic programming over the trailing `ell - 1`
/// bits, seeded with every valid first window.
pub fn count_swcc_capped(
    n: usize,
    ell: usize,
    a: usize,
    b: usize,
    state_cap: usize,
) -> Result<BigUint> {
    let band = validate(n, ell, a, b)?;
    let state_bits = ell - 1;
    if state_bits >= usize::BITS as usize - 1 || 1usize << state_bits > state_cap {
        return Err(Error::BudgetExceeded(format!(
            "2^{state_bits} window states exceed the cap of {state_cap}"
        )));
    }
    let states = 1usize << state_bits;
    let mask = states - 1;
    let mut counts = vec![BigUint::zero(); states];
    for w in 0..1u64 << ell {
        if band.contains(w.count_ones() as usize) {
            counts[w as usize & mask] += 1u32;
        }
    }
    for _ in ell..n {
        let mut next = vec![BigUint::zero(); states];
        for (s, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for bit in 0..2usize {
                let window = (s << 1) | bit;
                if band.contains(window.count_ones() as usize) {
                    next[window & mask] += c;
                }
            }
        }
        counts = next;
    }
    Ok(counts.into_iter().sum())
}

/// Every member of the class, in lexicographic order. The class is scanned by
/// brute force, so `2^n` must not exceed `budget`.
pub fn enumerate_class(
    n: usize,
    ell: usize,
    a: usize,
    b: usize,
    mode: Mode,
    budget: u64,
) -> Result<impl Iterator<Item = BitSeq>> {
    let band = validate(n, ell, a, b)?;
    if mode == Mode::Subblock && n % ell != 0 {
        return Err(Error::infeasible(
            "subblocks",
            format!("n={n} is not a multiple of ell={ell}"),
        ));
    }
    if n >= 64 || 1u64 << n > budget {
        return Err(Error::BudgetExceeded(format!(
            "2^{n} words exceed the enumeration budget of {budget}"
        )));
    }
    let constraint = Constraint::new(ell, band);
    Ok((0..1u64 << n)
        .map(move |v| BitSeq::from_uint(u128::from(v), n))
        .filter(move |x| x.check(constraint, mode).is_member()))
}

fn as_decimal<S: Serializer>(value: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

fn as_decimal_opt<S: Serializer>(
    value: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

/// Direct check of `|W| >= 2^(n-1)` (and `|S|` when `ell` divides `n`),
/// next to the asymptotic sufficient condition `ell >= ln(n) / c^2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalfspaceReport {
    pub n: usize,
    pub ell: usize,
    pub a: usize,
    pub b: usize,
    #[serde(serialize_with = "as_decimal")]
    pub threshold: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub swcc_count: BigUint,
    pub swcc_holds: bool,
    #[serde(serialize_with = "as_decimal_opt")]
    pub secc_count: Option<BigUint>,
    pub secc_holds: Option<bool>,
    /// `min(1/2 - a/ell, b/ell - 1/2)`.
    pub c: f64,
    /// `ln(n) / c^2`; infinite when `c <= 0`.
    pub required_ell: f64,
    pub sufficient_condition: bool,
}

impl HalfspaceReport {
    /// Whether every computed count meets `2^(n-1)`.
    pub fn holds(&self) -> bool {
        self.swcc_holds && self.secc_holds.unwrap_or(true)
    }
}

pub fn verify_halfspace_bound(n: usize, ell: usize, a: usize, b: usize) -> Result<HalfspaceReport> {
    validate(n, ell, a, b)?;
    let threshold = BigUint::one() << (n - 1);
    let swcc_count = count_swcc(n, ell, a, b)?;
    let secc_count = (n % ell == 0).then(|| count_secc(n, ell, a, b)).transpose()?;
    let half = Fraction::new(1, 2);
    let lo = Fraction::new(a as u64, ell as u64);
    let hi = Fraction::new(b as u64, ell as u64);
    let c = if lo < half && hi > half {
        (half - lo).min(hi - half).to_f64().unwrap_or(0.0)
    } else {
        0.0
    };
    let required_ell = if c > 0.0 {
        (n as f64).ln() / (c * c)
    } else {
        f64::INFINITY
    };
    Ok(HalfspaceReport {
        n,
        ell,
        a,
        b,
        swcc_holds: swcc_count >= threshold,
        secc_holds: secc_count.as_ref().map(|s| *s >= threshold),
        swcc_count,
        secc_count,
        threshold,
        c,
        required_ell,
        sufficient_condition: ell as f64 >= required_ell,
    })
}

/// Which payloads [`measure_rate`] pushes through the codec.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplePolicy {
    /// Every payload; refused beyond 2^20.
    Exhaustive,
    Random { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub scheme: &'static str,
    pub payload_len: usize,
    pub codeword_len: usize,
    pub redundancy: usize,
    /// `payload_len / codeword_len`.
    pub rate: f64,
    /// `log2(|class|) / codeword_len` for the class the codec targets, when
    /// countable.
    pub class_rate: Option<f64>,
    pub samples: usize,
    /// Samples whose codeword satisfied the constraint and decoded back.
    pub verified: usize,
}

fn log2_big(x: &BigUint) -> Option<f64> {
    if x.is_zero() {
        return None;
    }
    let bits = x.bits();
    // Keep 64 significant bits for the mantissa.
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_f64()?;
    Some(top.log2() + shift as f64)
}

pub fn measure_rate(codec: &dyn Codec, policy: SamplePolicy) -> Result<RateReport> {
    let k = codec.payload_len();
    let payloads: Box<dyn Iterator<Item = BitSeq>> = match policy {
        SamplePolicy::Exhaustive => {
            if k > 20 {
                return Err(Error::BudgetExceeded(format!(
                    "2^{k} payloads are too many for an exhaustive sample"
                )));
            }
            Box::new((0..1u128 << k).map(move |v| BitSeq::from_uint(v, k)))
        }
        SamplePolicy::Random { samples, seed } => {
            let mut rng = StdRng::seed_from_u64(seed);
            Box::new((0..samples).map(move |_| (0..k).map(|_| rng.gen::<bool>()).collect()))
        }
    };
    let (constraint, mode) = codec.constraint();
    let mut samples = 0;
    let mut verified = 0;
    for x in payloads {
        samples += 1;
        let c = codec.encode(&x)?;
        if c.check(constraint, mode).is_member() && codec.decode(&c).ok() == Some(x) {
            verified += 1;
        }
    }
    let n = codec.codeword_len();
    let (ell, band) = (constraint.ell, constraint.band);
    let count = match mode {
        Mode::Subblock => count_secc(n, ell, band.lo(), band.hi()).ok(),
        Mode::Window => count_swcc(n, ell, band.lo(), band.hi()).ok(),
    };
    Ok(RateReport {
        scheme: codec.scheme(),
        payload_len: k,
        codeword_len: n,
        redundancy: codec.redundancy(),
        rate: k as f64 / n as f64,
        class_rate: count.as_ref().and_then(log2_big).map(|l| l / n as f64),
        samples,
        verified,
    })
}
