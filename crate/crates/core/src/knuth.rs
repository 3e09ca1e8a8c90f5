//! Subblock encoders built on prefix flipping.
//!
//! Each payload subblock `z` is replaced by `f_t(z)`, the word with its first
//! `t` bits complemented, for the first `t` on a coarse walk
//! `{0, k, 2k, .., len}` that lands the weight inside the target band. The
//! chosen `t` travels in a short suffix: a balanced word from a table
//! ([`SCodec`]), or the walk rank followed by its complement
//! ([`SPrimeCodec`]). [`PolarityCodec`] is the one-bit special case for a
//! lower bound only.

use crate::bitseq::{BitSeq, Constraint, Mode};
use crate::codec::{expect_len, Codec};
use crate::combinatorics::{binomial, WeightClass, WordClass};
use crate::error::{Error, Result};
use crate::params::{Band, CodeParams, Fraction, Profile};

/// Candidate flip lengths `{0, domain_len} ∪ {ik : 0 < ik < domain_len}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    step: usize,
    domain_len: usize,
    indices: Vec<usize>,
}

impl Walk {
    pub fn new(domain_len: usize, step: usize) -> Result<Self> {
        if step == 0 {
            return Err(Error::infeasible("walk step", "step must be at least 1"));
        }
        let mut indices: Vec<usize> = (0..domain_len).step_by(step).collect();
        indices.push(domain_len);
        Ok(Self {
            step,
            domain_len,
            indices,
        })
    }

    /// Walk and integer target band for a `domain_len`-bit block under
    /// `profile`. The target is `[ceil(p1 len), floor(p2 len)]` and the step
    /// is `min(floor((p2 - p1) len), target width)`, so no step can jump over
    /// the target.
    pub fn for_profile(domain_len: usize, profile: &Profile) -> Result<(Walk, Band)> {
        let (lo, hi) = (profile.lower(domain_len), profile.upper(domain_len));
        if lo > hi {
            return Err(Error::infeasible(
                "walk target",
                format!("empty target [{lo}, {hi}] for block length {domain_len}"),
            ));
        }
        let target = Band::new(lo, hi)?;
        let raw = (profile.spread() * Fraction::from_integer(domain_len as u64))
            .floor()
            .to_integer() as usize;
        let step = raw.min(target.width());
        if step == 0 {
            return Err(Error::infeasible(
                "walk step",
                format!("(p2 - p1) * {domain_len} < 1 for profile {profile}"),
            ));
        }
        Ok((Walk::new(domain_len, step)?, target))
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn domain_len(&self) -> usize {
        self.domain_len
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Position of `t` in the sorted index list.
    pub fn rank_of(&self, t: usize) -> Option<usize> {
        self.indices.binary_search(&t).ok()
    }
}

/// Smallest walk index `t` with `weight(f_t(x))` inside `target`.
pub fn find_walk_index(x: &BitSeq, walk: &Walk, target: Band) -> Result<usize> {
    expect_len(x, walk.domain_len())?;
    let bits = x.as_slice();
    let mut weight = x.weight();
    let mut flipped = 0;
    for &t in walk.indices() {
        // Incrementally flip bits flipped..t.
        for &b in &bits[flipped..t] {
            if b {
                weight -= 1;
            } else {
                weight += 1;
            }
        }
        flipped = t;
        if target.contains(weight) {
            return Ok(t);
        }
    }
    Err(Error::NoIndexFound {
        lo: target.lo(),
        hi: target.hi(),
    })
}

/// Bijection between walk ranks `0..count` and the first `count` balanced
/// words of length `r_bal` in lexicographic order.
#[derive(Debug, Clone)]
pub struct BalancedSuffixTable {
    r_bal: usize,
    entries: Vec<BitSeq>,
}

impl BalancedSuffixTable {
    pub fn new(r_bal: usize, count: usize) -> Result<Self> {
        if r_bal % 2 != 0 || (count as u128) > binomial(r_bal, r_bal / 2) {
            return Err(Error::infeasible(
                "balanced suffix",
                format!("{count} indices do not fit in balanced words of length {r_bal}"),
            ));
        }
        let class = WeightClass::balanced(r_bal);
        let entries = (0..count as u128)
            .map(|r| class.unrank(r))
            .collect::<Result<_>>()?;
        Ok(Self { r_bal, entries })
    }

    pub fn r_bal(&self) -> usize {
        self.r_bal
    }

    pub fn entries(&self) -> &[BitSeq] {
        &self.entries
    }

    pub fn suffix(&self, rank: usize) -> &BitSeq {
        &self.entries[rank]
    }

    pub fn rank_of(&self, suffix: &BitSeq) -> Option<usize> {
        let rank = WeightClass::balanced(self.r_bal).rank(suffix)?;
        usize::try_from(rank)
            .ok()
            .filter(|&r| r < self.entries.len())
    }
}

fn even_length(ell: usize) -> Result<()> {
    if ell % 2 != 0 {
        return Err(Error::infeasible(
            "even payload",
            format!("subblock length {ell} must be even"),
        ));
    }
    Ok(())
}

/// Encoder/decoder S: flip-walk balancing with a table-driven balanced suffix.
#[derive(Debug, Clone)]
pub struct SCodec {
    params: CodeParams,
    m: usize,
    walk: Walk,
    target: Band,
    table: BalancedSuffixTable,
}

impl SCodec {
    pub fn new(params: &CodeParams) -> Result<Self> {
        let m = params.subblocks()?;
        let profile = params.profile()?;
        let ell = params.ell();
        even_length(ell)?;
        // Smallest even r_bal whose balanced words can index the walk over
        // the remaining ell - r_bal bits.
        let mut r_bal = 2;
        loop {
            if r_bal + 2 > ell {
                return Err(Error::infeasible(
                    "suffix length",
                    format!("no even suffix length fits subblock length {ell}"),
                ));
            }
            let (walk, target) = Walk::for_profile(ell - r_bal, &profile)?;
            if binomial(r_bal, r_bal / 2) >= walk.len() as u128 {
                let table = BalancedSuffixTable::new(r_bal, walk.len())?;
                return Ok(Self {
                    params: *params,
                    m,
                    walk,
                    target,
                    table,
                });
            }
            r_bal += 2;
        }
    }

    pub fn r_bal(&self) -> usize {
        self.table.r_bal()
    }

    pub fn walk(&self) -> &Walk {
        &self.walk
    }

    pub fn target(&self) -> Band {
        self.target
    }

    pub fn table(&self) -> &BalancedSuffixTable {
        &self.table
    }

    pub fn subblock_payload_len(&self) -> usize {
        self.params.ell() - self.r_bal()
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }
}

impl Codec for SCodec {
    fn scheme(&self) -> &'static str {
        "s"
    }

    fn payload_len(&self) -> usize {
        self.m * self.subblock_payload_len()
    }

    fn codeword_len(&self) -> usize {
        self.m * self.params.ell()
    }

    fn constraint(&self) -> (Constraint, Mode) {
        (self.params.constraint(), Mode::Subblock)
    }

    fn encode(&self, payload: &BitSeq) -> Result<BitSeq> {
        expect_len(payload, self.payload_len())?;
        let mut out = BitSeq::with_capacity(self.codeword_len());
        for z in payload.chunks(self.subblock_payload_len()) {
            let t = find_walk_index(&z, &self.walk, self.target)?;
            let rank = self.walk.rank_of(t).expect("t comes from the walk");
            out.extend_from(&z.flip_prefix(t)?);
            out.extend_from(self.table.suffix(rank));
        }
        Ok(out)
    }

    fn decode(&self, codeword: &BitSeq) -> Result<BitSeq> {
        expect_len(codeword, self.codeword_len())?;
        let body = self.subblock_payload_len();
        let mut out = BitSeq::with_capacity(self.payload_len());
        for (i, block) in codeword.chunks(self.params.ell()).enumerate() {
            let rank = self
                .table
                .rank_of(&block.suffix(self.r_bal()))
                .ok_or(Error::UnknownSuffix { block: i + 1 })?;
            let t = self.walk.indices()[rank];
            out.extend_from(&block.prefix(body).flip_prefix(t)?);
        }
        Ok(out)
    }
}

/// Encoder/decoder S': the suffix is the `r`-bit walk rank `G` followed by
/// its complement, so no lookup table is needed.
#[derive(Debug, Clone)]
pub struct SPrimeCodec {
    params: CodeParams,
    m: usize,
    r: usize,
    walk: Walk,
    target: Band,
}

impl SPrimeCodec {
    pub fn new(params: &CodeParams) -> Result<Self> {
        let m = params.subblocks()?;
        let profile = params.profile()?;
        let ell = params.ell();
        even_length(ell)?;
        let reciprocal = profile.spread().recip().floor().to_integer();
        let mut r = bits_for(reciprocal + 1);
        loop {
            if 2 * r + 2 > ell {
                return Err(Error::infeasible(
                    "suffix length",
                    format!("rank suffix of 2*{r} bits does not fit subblock length {ell}"),
                ));
            }
            let (walk, target) = Walk::for_profile(ell - 2 * r, &profile)?;
            if (walk.len() as u128) <= 1u128 << r {
                return Ok(Self {
                    params: *params,
                    m,
                    r,
                    walk,
                    target,
                });
            }
            r += 1;
        }
    }

    /// Width of the rank field; the suffix is `2r` bits.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn walk(&self) -> &Walk {
        &self.walk
    }

    pub fn subblock_payload_len(&self) -> usize {
        self.params.ell() - 2 * self.r
    }

    /// `G || complement(G)` for walk rank `rank`.
    pub fn suffix_for_rank(&self, rank: usize) -> BitSeq {
        let gamma = BitSeq::from_uint(rank as u128, self.r);
        gamma.concat(&gamma.complement())
    }

    /// Walk rank carried by a `2r`-bit suffix, if it is well formed.
    pub fn rank_from_suffix(&self, suffix: &BitSeq) -> Option<usize> {
        let gamma = suffix.prefix(self.r);
        if suffix.len() != 2 * self.r || suffix.suffix(self.r) != gamma.complement() {
            return None;
        }
        let rank = gamma.to_uint() as usize;
        (rank < self.walk.len()).then_some(rank)
    }
}

/// Smallest `r` with `2^r >= count`.
fn bits_for(count: u64) -> usize {
    (u64::BITS - count.saturating_sub(1).leading_zeros()) as usize
}

impl Codec for SPrimeCodec {
    fn scheme(&self) -> &'static str {
        "s-prime"
    }

    fn payload_len(&self) -> usize {
        self.m * self.subblock_payload_len()
    }

    fn codeword_len(&self) -> usize {
        self.m * self.params.ell()
    }

    fn constraint(&self) -> (Constraint, Mode) {
        (self.params.constraint(), Mode::Subblock)
    }

    fn encode(&self, payload: &BitSeq) -> Result<BitSeq> {
        expect_len(payload, self.payload_len())?;
        let mut out = BitSeq::with_capacity(self.codeword_len());
        for z in payload.chunks(self.subblock_payload_len()) {
            let t = find_walk_index(&z, &self.walk, self.target)?;
            let rank = self.walk.rank_of(t).expect("t comes from the walk");
            out.extend_from(&z.flip_prefix(t)?);
            out.extend_from(&self.suffix_for_rank(rank));
        }
        Ok(out)
    }

    fn decode(&self, codeword: &BitSeq) -> Result<BitSeq> {
        expect_len(codeword, self.codeword_len())?;
        let body = self.subblock_payload_len();
        let mut out = BitSeq::with_capacity(self.payload_len());
        for (i, block) in codeword.chunks(self.params.ell()).enumerate() {
            let rank = self
                .rank_from_suffix(&block.suffix(2 * self.r))
                .ok_or(Error::UnknownSuffix { block: i + 1 })?;
            let t = self.walk.indices()[rank];
            out.extend_from(&block.prefix(body).flip_prefix(t)?);
        }
        Ok(out)
    }
}

/// Polarity-bit code for a lower weight bound `a < ell/2`: a light subblock
/// is complemented and flagged with a trailing 1.
#[derive(Debug, Clone)]
pub struct PolarityCodec {
    params: CodeParams,
    m: usize,
}

impl PolarityCodec {
    pub fn new(params: &CodeParams) -> Result<Self> {
        let m = params.subblocks()?;
        if 2 * params.a() >= params.ell() {
            return Err(Error::infeasible(
                "polarity bound",
                format!("need a < ell/2, got a={}, ell={}", params.a(), params.ell()),
            ));
        }
        if params.b() != params.ell() {
            return Err(Error::infeasible(
                "polarity bound",
                "the polarity code constrains the lower bound only; set b = ell",
            ));
        }
        Ok(Self { params: *params, m })
    }
}

impl Codec for PolarityCodec {
    fn scheme(&self) -> &'static str {
        "polarity"
    }

    fn payload_len(&self) -> usize {
        self.m * (self.params.ell() - 1)
    }

    fn codeword_len(&self) -> usize {
        self.m * self.params.ell()
    }

    fn constraint(&self) -> (Constraint, Mode) {
        (self.params.constraint(), Mode::Subblock)
    }

    fn encode(&self, payload: &BitSeq) -> Result<BitSeq> {
        expect_len(payload, self.payload_len())?;
        let mut out = BitSeq::with_capacity(self.codeword_len());
        for z in payload.chunks(self.params.ell() - 1) {
            let flip = z.weight() < self.params.a();
            out.extend_from(&if flip { z.complement() } else { z });
            out.push(flip);
        }
        Ok(out)
    }

    fn decode(&self, codeword: &BitSeq) -> Result<BitSeq> {
        expect_len(codeword, self.codeword_len())?;
        let body = self.params.ell() - 1;
        let mut out = BitSeq::with_capacity(self.payload_len());
        for block in codeword.chunks(self.params.ell()) {
            let z = block.prefix(body);
            out.extend_from(&if block.bit(block.len()) == Some(true) {
                z.complement()
            } else {
                z
            });
        }
        Ok(out)
    }
}
