//! Single-substitution-correcting wrappers around the S and W encoders.
//!
//! Both attach a VT syndrome (modulo `2 ell`) of every length-`ell` data
//! block together with its complement, so the tag has constant weight and a
//! flip inside the tag is caught by the complement check.
//!
//! - [`SEccCodec`]: per subblock `z || p || complement(p)`.
//! - [`WEccCodec`]: after every `ell` data bits, `interleave(p, complement(p))`.
//!   Interleaving keeps every tag prefix within one of balanced, which is what
//!   keeps the windows that straddle a tag inside the band.

use crate::bitseq::{BitSeq, Constraint, Mode};
use crate::codec::{expect_len, Codec};
use crate::error::{Error, Result};
use crate::knuth::SCodec;
use crate::params::{Band, CodeParams, Fraction, Profile};
use crate::srt::WCodec;
use crate::vt::{syndrome, tag_width, vt_correct_position, VtTag};

/// Base parameters plus the derived tag width `t = ceil(log2(2 ell))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EccParams {
    base: CodeParams,
    t_syn: usize,
}

impl EccParams {
    pub fn new(base: CodeParams) -> Self {
        Self {
            base,
            t_syn: tag_width(base.ell()),
        }
    }

    pub fn base(&self) -> &CodeParams {
        &self.base
    }

    pub fn t_syn(&self) -> usize {
        self.t_syn
    }

    /// `(p + 1/2) / 2` applied to the base profile.
    pub fn tightened(&self) -> Result<Profile> {
        Ok(self.base.profile()?.tightened())
    }

    /// `ell (1/2 - p1) >= 2t + 1` and `ell (p2 - 1/2) >= 2t + 1`.
    ///
    /// Sufficient for [`straddle_safe`] with the tightened band, but far from
    /// necessary at small `ell`.
    pub fn margins_hold(&self) -> Result<bool> {
        let profile = self.base.profile()?;
        let half = Fraction::new(1, 2);
        let ell = Fraction::from_integer(self.base.ell() as u64);
        let need = Fraction::from_integer(2 * self.t_syn as u64 + 1);
        Ok(ell * (half - profile.p1()) >= need && ell * (profile.p2() - half) >= need)
    }
}

/// Exact check that inserting a `2t`-bit interleaved tag after every block of
/// a sequence whose `ell`-windows lie in `inner` keeps every `ell`-window of
/// the result inside `outer`.
///
/// A window either covers a data suffix of length `ell - i` and a tag prefix
/// of length `i` (or mirrored: tag suffix then data prefix), for
/// `1 <= i <= 2t`, or a whole tag and `ell - 2t` consecutive data bits. An
/// interleaved tag piece of length `i` has weight `floor(i/2)` or `ceil(i/2)`.
pub fn straddle_safe(ell: usize, outer: Band, inner: Band, t: usize) -> bool {
    if 2 * t >= ell || !inner.is_subset_of(&outer) {
        return false;
    }
    let partial = (1..=2 * t).all(|i| {
        inner.lo().saturating_sub(i) + i / 2 >= outer.lo()
            && (ell - i).min(inner.hi()) + i.div_ceil(2) <= outer.hi()
    });
    let whole = inner.lo().saturating_sub(2 * t) + t >= outer.lo()
        && (ell - 2 * t).min(inner.hi()) + t <= outer.hi();
    partial && whole
}

/// Reads a tag that passed the complement check and corrects `data` in place.
fn correct_block(data: &mut BitSeq, p: &BitSeq, base: usize) -> Result<usize> {
    let tag = VtTag::from_bits(p, base)?;
    match vt_correct_position(data, tag, base)? {
        Some(pos) => {
            data.toggle(pos)?;
            Ok(1)
        }
        None => Ok(0),
    }
}

/// Encoder/decoder S with a syndrome tag in every subblock.
#[derive(Debug, Clone)]
pub struct SEccCodec {
    params: EccParams,
    m: usize,
    inner: SCodec,
}

impl SEccCodec {
    /// The inner S code runs at subblock length `ell - 2t` with the same
    /// profile.
    pub fn new(base: &CodeParams) -> Result<Self> {
        let params = EccParams::new(*base);
        let (ell, t) = (base.ell(), params.t_syn());
        let m = base.subblocks()?;
        let ell2 = ell
            .checked_sub(2 * t)
            .filter(|&l| l > 0)
            .ok_or_else(|| {
                Error::infeasible("tag width", format!("ell={ell} leaves no room for a 2*{t}-bit tag"))
            })?;
        let profile = base.profile()?;
        let inner = SCodec::new(&CodeParams::from_profile(m * ell2, ell2, profile)?)?;
        if inner.subblock_payload_len() == 0 {
            return Err(Error::infeasible("payload", format!("ell - 2t - r_bal = 0 at ell={ell}")));
        }
        let target = inner.target();
        let (lo, hi) = (target.lo() + t, target.hi() + t);
        if !base.band().contains(lo) || !base.band().contains(hi) {
            return Err(Error::infeasible(
                "tagged weight",
                format!("subblock weights [{lo}, {hi}] leave the band {}", base.band()),
            ));
        }
        Ok(Self { params, m, inner })
    }

    pub fn ecc_params(&self) -> &EccParams {
        &self.params
    }

    pub fn inner(&self) -> &SCodec {
        &self.inner
    }

    /// Data bits per subblock before the tag, `ell - 2t`.
    pub fn data_len(&self) -> usize {
        self.params.base().ell() - 2 * self.params.t_syn()
    }
}

impl Codec for SEccCodec {
    fn scheme(&self) -> &'static str {
        "s-ecc"
    }

    fn payload_len(&self) -> usize {
        self.inner.payload_len()
    }

    fn codeword_len(&self) -> usize {
        self.m * self.params.base().ell()
    }

    fn constraint(&self) -> (Constraint, Mode) {
        (self.params.base().constraint(), Mode::Subblock)
    }

    fn encode(&self, payload: &BitSeq) -> Result<BitSeq> {
        let ell = self.params.base().ell();
        let y = self.inner.encode(payload)?;
        let mut out = BitSeq::with_capacity(self.codeword_len());
        for z in y.chunks(self.data_len()) {
            let p = syndrome(&z, ell).to_bits();
            out.extend_from(&z);
            out.extend_from(&p);
            out.extend_from(&p.complement());
        }
        Ok(out)
    }

    fn decode(&self, codeword: &BitSeq) -> Result<BitSeq> {
        self.decode_counting(codeword).map(|(x, _)| x)
    }

    fn decode_counting(&self, codeword: &BitSeq) -> Result<(BitSeq, usize)> {
        expect_len(codeword, self.codeword_len())?;
        let (ell, t) = (self.params.base().ell(), self.params.t_syn());
        let mut data = BitSeq::with_capacity(self.m * self.data_len());
        let mut corrected = 0;
        for block in codeword.chunks(ell) {
            let mut z = block.prefix(self.data_len());
            let p = block.slice(self.data_len() + 1, t)?;
            let q = block.suffix(t);
            // A mismatch means the one error sits in the tag.
            if q == p.complement() {
                corrected += correct_block(&mut z, &p, ell)?;
            }
            data.extend_from(&z);
        }
        Ok((self.inner.decode(&data)?, corrected))
    }
}

/// Encoder/decoder W with an interleaved syndrome tag after every block.
#[derive(Debug, Clone)]
pub struct WEccCodec {
    params: EccParams,
    m: usize,
    inner_band: Band,
    inner: WCodec,
}

impl WEccCodec {
    /// Runs the inner W code under the band of the tightened profile.
    pub fn new(base: &CodeParams) -> Result<Self> {
        let tightened = base.profile()?.tightened();
        let band = tightened.target(base.ell());
        let inner = CodeParams::new(base.n(), base.ell(), band.lo(), band.hi())?
            .with_profile(tightened)?;
        Self::build(base, inner)
    }

    /// Runs the inner W code under an explicit band `inner`.
    pub fn with_inner_band(base: &CodeParams, inner: Band) -> Result<Self> {
        Self::build(base, CodeParams::new(base.n(), base.ell(), inner.lo(), inner.hi())?)
    }

    fn build(base: &CodeParams, inner_params: CodeParams) -> Result<Self> {
        let params = EccParams::new(*base);
        let m = base.subblocks()?;
        let (ell, t) = (base.ell(), params.t_syn());
        let inner_band = inner_params.band();
        if 2 * t >= ell {
            return Err(Error::infeasible("tag width", format!("2*{t} tag bits do not fit ell={ell}")));
        }
        if !inner_band.is_subset_of(&base.band()) {
            return Err(Error::infeasible(
                "inner band",
                format!("inner band {inner_band} is not inside {}", base.band()),
            ));
        }
        if !straddle_safe(ell, base.band(), inner_band, t) {
            return Err(Error::infeasible(
                "straddle safety",
                format!(
                    "a window across a {}-bit tag can leave {} when blocks lie in {inner_band}",
                    2 * t,
                    base.band()
                ),
            ));
        }
        let inner = WCodec::new(&inner_params)?;
        Ok(Self {
            params,
            m,
            inner_band,
            inner,
        })
    }

    pub fn ecc_params(&self) -> &EccParams {
        &self.params
    }

    pub fn inner_band(&self) -> Band {
        self.inner_band
    }

    pub fn inner(&self) -> &WCodec {
        &self.inner
    }

    /// Length of one data block plus its tag, `ell + 2t`.
    pub fn block_len(&self) -> usize {
        self.params.base().ell() + 2 * self.params.t_syn()
    }

    /// Whether the base profile satisfies the margin conditions.
    pub fn margins_hold(&self) -> bool {
        self.params.margins_hold().unwrap_or(false)
    }
}

impl Codec for WEccCodec {
    fn scheme(&self) -> &'static str {
        "w-ecc"
    }

    fn payload_len(&self) -> usize {
        self.params.base().n() - 1
    }

    fn codeword_len(&self) -> usize {
        self.m * self.block_len()
    }

    fn constraint(&self) -> (Constraint, Mode) {
        (self.params.base().constraint(), Mode::Window)
    }

    fn encode(&self, payload: &BitSeq) -> Result<BitSeq> {
        let ell = self.params.base().ell();
        let y = self.inner.encode(payload)?;
        let mut out = BitSeq::with_capacity(self.codeword_len());
        for block in y.chunks(ell) {
            let p = syndrome(&block, ell).to_bits();
            out.extend_from(&block);
            out.extend_from(&p.interleave(&p.complement())?);
        }
        Ok(out)
    }

    fn decode(&self, codeword: &BitSeq) -> Result<BitSeq> {
        self.decode_counting(codeword).map(|(x, _)| x)
    }

    fn decode_counting(&self, codeword: &BitSeq) -> Result<(BitSeq, usize)> {
        expect_len(codeword, self.codeword_len())?;
        let (ell, t) = (self.params.base().ell(), self.params.t_syn());
        let mut y = BitSeq::with_capacity(self.params.base().n());
        let mut corrected = 0;
        for block in codeword.chunks(self.block_len()) {
            let mut data = block.prefix(ell);
            let (p, q) = block.suffix(2 * t).deinterleave()?;
            if q == p.complement() {
                corrected += correct_block(&mut data, &p, ell)?;
            }
            y.extend_from(&data);
        }
        Ok((self.inner.decode(&y)?, corrected))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::parse_fraction;

    fn bs(s: &str) -> BitSeq {
        s.parse().unwrap()
    }

    fn profile(p1: &str, p2: &str) -> Profile {
        Profile::new(parse_fraction(p1).unwrap(), parse_fraction(p2).unwrap()).unwrap()
    }

    #[test]
    fn tag_layouts() {
        let p = bs("0101");
        assert_eq!(p.concat(&p.complement()), bs("01011010"));
        let p = bs("110");
        assert_eq!(p.interleave(&p.complement()).unwrap(), bs("101001"));
    }

    #[test]
    fn s_ecc_dimensions() {
        let base = CodeParams::from_profile(24, 24, profile("1/4", "3/4")).unwrap();
        let codec = SEccCodec::new(&base).unwrap();
        assert_eq!(codec.ecc_params().t_syn(), 6);
        assert_eq!(codec.data_len(), 12);
        assert_eq!(codec.inner().r_bal(), 4);
        assert_eq!(codec.payload_len(), 8);
        assert_eq!(codec.redundancy(), 4 + 2 * 6);
    }

    #[test]
    fn s_ecc_corrects_every_single_flip() {
        let base = CodeParams::from_profile(24, 24, profile("1/4", "3/4")).unwrap();
        let codec = SEccCodec::new(&base).unwrap();
        for v in 0..1u32 << 8 {
            let x = BitSeq::from_uint(u128::from(v), 8);
            let c = codec.encode(&x).unwrap();
            assert!(c.check(base.constraint(), Mode::Subblock).is_member());
            assert_eq!(codec.decode_counting(&c).unwrap(), (x.clone(), 0));
            for pos in 1..=c.len() {
                let mut y = c.clone();
                y.toggle(pos).unwrap();
                let (got, fixed) = codec.decode_counting(&y).unwrap();
                assert_eq!(got, x, "flip at {pos}");
                assert_eq!(fixed, usize::from(pos <= codec.data_len()));
            }
        }
    }

    #[test]
    fn margins_fail_at_desk_scale() {
        let base = CodeParams::new(32, 16, 1, 15).unwrap();
        assert!(!EccParams::new(base).margins_hold().unwrap());
        // the tightened band [4, 12] is infeasible for the window map
        assert!(WEccCodec::new(&base).is_err());
        let codec = WEccCodec::with_inner_band(&base, Band::new(2, 14).unwrap()).unwrap();
        assert!(!codec.margins_hold());
        assert_eq!(codec.block_len(), 26);
        assert_eq!(codec.redundancy(), 1 + 2 * 2 * 5);
    }

    #[test]
    fn margins_imply_straddle_safety() {
        for ell in 12..=40 {
            let t = tag_width(ell);
            for a in 0..ell / 2 {
                for b in ell / 2 + 1..=ell {
                    let base = CodeParams::new(ell, ell, a, b).unwrap();
                    let params = EccParams::new(base);
                    if !params.margins_hold().unwrap() {
                        continue;
                    }
                    let inner = params.tightened().unwrap().target(ell);
                    assert!(straddle_safe(ell, base.band(), inner, t), "ell={ell} [{a},{b}]");
                }
            }
        }
    }

    #[test]
    fn straddle_rejects_tight_outer_band() {
        assert!(straddle_safe(16, Band::new(1, 15).unwrap(), Band::new(2, 14).unwrap(), 5));
        assert!(!straddle_safe(16, Band::new(4, 12).unwrap(), Band::new(4, 12).unwrap(), 5));
        assert!(!straddle_safe(10, Band::new(1, 9).unwrap(), Band::new(2, 8).unwrap(), 5));
    }

    #[test]
    fn w_ecc_round_trip_and_single_flips() {
        let base = CodeParams::new(32, 16, 1, 15).unwrap();
        let codec = WEccCodec::with_inner_band(&base, Band::new(2, 14).unwrap()).unwrap();
        let payloads = [
            BitSeq::zeros(31),
            BitSeq::ones(31),
            bs("0101010101010101010101010101010"),
            bs("0000000000000000111111111111111"),
        ];
        for x in payloads {
            let c = codec.encode(&x).unwrap();
            assert_eq!(c.len(), 52);
            assert!(c.check(base.constraint(), Mode::Window).is_member(), "{c}");
            assert_eq!(codec.decode(&c).unwrap(), x);
            for p1 in 1..=26 {
                let mut y = c.clone();
                y.toggle(p1).unwrap();
                y.toggle(26 + (p1 * 7) % 26 + 1).unwrap();
                assert_eq!(codec.decode(&y).unwrap(), x);
            }
        }
    }
}
