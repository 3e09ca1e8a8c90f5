//! Sequence replacement: a sliding-window constrained code with one
//! redundant bit.
//!
//! The encoder prepends a 0 and then repeatedly cuts out the leftmost
//! forbidden window, replacing it by a shorter header
//! `11 || position || label` at the front of the word. A word that shrinks to
//! `ell + 1` bits while still holding a forbidden window is swapped for
//! `10 || psi(word)` in one step. Whatever remains is padded back to `n` bits
//! by repeating its last window. The decoder peels headers off the front in
//! reverse order.
//!
//! Both maps are lexicographic rank/unrank pairs:
//! - [`WindowCodec`] (phi): forbidden `ell`-bit windows <-> `k`-bit labels.
//! - [`TailCodec`] (psi): `(ell+1)`-bit words with a forbidden window <->
//!   `(ell-2)`-bit words whose weight keeps `10 || word` inside the band.

use crate::bitseq::{BitSeq, Constraint, Mode};
use crate::codec::{expect_len, Codec};
use crate::combinatorics::{TwoWindowClass, WeightClass, WordClass, MAX_BINOMIAL_N};
use crate::error::{Error, Result};
use crate::params::{Band, CodeParams, Profile};

/// `|F(ell, band)|`: number of `ell`-bit words with weight outside `band`.
pub fn count_forbidden(ell: usize, a: usize, b: usize) -> Result<u128> {
    if ell > MAX_BINOMIAL_N {
        return Err(Error::infeasible("window length", format!("ell={ell} too large")));
    }
    Ok(WeightClass::outside(ell, Band::new(a, b)?).size())
}

/// Smallest `w` with `2^w >= count`.
fn bits_for(count: u128) -> usize {
    (u128::BITS - count.saturating_sub(1).leading_zeros()) as usize
}

/// Lexicographic ranking of forbidden windows.
#[derive(Debug, Clone)]
pub struct WindowCodec {
    ell: usize,
    band: Band,
    class: WeightClass,
    size: u128,
}

impl WindowCodec {
    pub fn new(ell: usize, band: Band) -> Result<Self> {
        let size = count_forbidden(ell, band.lo(), band.hi())?;
        Ok(Self {
            ell,
            band,
            class: WeightClass::outside(ell, band),
            size,
        })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn band(&self) -> Band {
        self.band
    }

    /// Number of forbidden windows.
    pub fn size(&self) -> u128 {
        self.size
    }

    /// Fewest label bits that can address every forbidden window.
    pub fn min_label_width(&self) -> usize {
        bits_for(self.size)
    }

    pub fn phi_rank(&self, window: &BitSeq) -> Result<u128> {
        expect_len(window, self.ell)?;
        self.class.rank(window).ok_or(Error::NotForbidden {
            weight: window.weight(),
        })
    }

    pub fn phi_unrank(&self, label: u128) -> Result<BitSeq> {
        self.class.unrank(label)
    }
}

/// Injective map from `G(ell+1, band)` into `(ell-2)`-bit words with weight
/// in the profile's band for length `ell - 2`.
#[derive(Debug, Clone)]
pub struct TailCodec {
    ell: usize,
    band: Band,
    target_band: Band,
    source: TwoWindowClass,
    target: WeightClass,
    source_size: u128,
    target_size: u128,
}

impl TailCodec {
    /// Checks exactly that `|G| <= |target|` and that `10 || t` lies in
    /// `band` for every target word `t`.
    pub fn new(ell: usize, band: Band, profile: &Profile) -> Result<Self> {
        if ell < 3 || ell + 1 > MAX_BINOMIAL_N {
            return Err(Error::infeasible("window length", format!("ell={ell} outside 3..={}", MAX_BINOMIAL_N - 1)));
        }
        let (lo, hi) = (profile.lower(ell - 2), profile.upper(ell - 2));
        if lo > hi {
            return Err(Error::infeasible(
                "tail target",
                format!("empty target band [{lo}, {hi}] at length {}", ell - 2),
            ));
        }
        let target_band = Band::new(lo, hi)?;
        if !band.contains(lo + 1) || !band.contains(hi + 1) {
            return Err(Error::infeasible(
                "tail weight",
                format!("10 followed by weight {target_band} leaves the band {band}"),
            ));
        }
        let source = TwoWindowClass::new(ell, band);
        let target = WeightClass::inside(ell - 2, target_band);
        let (source_size, target_size) = (source.size(), target.size());
        if source_size > target_size {
            return Err(Error::infeasible(
                "tail capacity",
                format!("|G| = {source_size} exceeds {target_size} target words"),
            ));
        }
        Ok(Self {
            ell,
            band,
            target_band,
            source,
            target,
            source_size,
            target_size,
        })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn band(&self) -> Band {
        self.band
    }

    pub fn target_band(&self) -> Band {
        self.target_band
    }

    /// `|G(ell+1, band)|`.
    pub fn source_size(&self) -> u128 {
        self.source_size
    }

    pub fn target_size(&self) -> u128 {
        self.target_size
    }

    pub fn psi_map(&self, word: &BitSeq) -> Result<BitSeq> {
        expect_len(word, self.ell + 1)?;
        let rank = self.source.rank(word).ok_or(Error::NoForbiddenWindow)?;
        self.target.unrank(rank)
    }

    pub fn psi_inverse(&self, image: &BitSeq) -> Result<BitSeq> {
        expect_len(image, self.ell - 2)?;
        let rank = self.target.rank(image).ok_or_else(|| {
            Error::Malformed(format!(
                "tail word weight {} outside {}",
                image.weight(),
                self.target_band
            ))
        })?;
        if rank >= self.source_size {
            return Err(Error::LabelOutOfRange {
                label: rank,
                size: self.source_size,
            });
        }
        self.source.unrank(rank)
    }
}

/// Encoder/decoder W: `n - 1` payload bits to an `n`-bit word with every
/// `ell`-window weight inside the band.
#[derive(Debug, Clone)]
pub struct WCodec {
    params: CodeParams,
    pos_width: usize,
    label_width: usize,
    phi: WindowCodec,
    psi: TailCodec,
}

impl WCodec {
    /// Header layout `11 || pos (ceil(log2 n) bits) || label (k bits)` with
    /// `k = ell - 3 - ceil(log2 n)`, so each header is `ell - 1` bits.
    pub fn new(params: &CodeParams) -> Result<Self> {
        let (n, ell, band) = (params.n(), params.ell(), params.band());
        if n <= ell {
            return Err(Error::infeasible(
                "lengths",
                format!("need n > ell, got n={n}, ell={ell}"),
            ));
        }
        let pos_width = bits_for(n as u128);
        let label_width = ell
            .checked_sub(3 + pos_width)
            .filter(|&k| k >= 1)
            .ok_or_else(|| {
                Error::infeasible(
                    "label width",
                    format!("k = ell - 3 - {pos_width} must be at least 1 (ell={ell})"),
                )
            })?;
        let phi = WindowCodec::new(ell, band)?;
        if label_width < 128 && phi.size() > 1u128 << label_width {
            return Err(Error::infeasible(
                "window capacity",
                format!(
                    "|F| = {} forbidden windows exceed 2^{label_width} labels",
                    phi.size()
                ),
            ));
        }
        let psi = TailCodec::new(ell, band, &params.profile()?)?;
        Ok(Self {
            params: *params,
            pos_width,
            label_width,
            phi,
            psi,
        })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn pos_width(&self) -> usize {
        self.pos_width
    }

    /// `k`, the width of the phi label.
    pub fn label_width(&self) -> usize {
        self.label_width
    }

    pub fn phi(&self) -> &WindowCodec {
        &self.phi
    }

    pub fn psi(&self) -> &TailCodec {
        &self.psi
    }

    fn header(&self, position: usize, window: &BitSeq) -> Result<BitSeq> {
        let mut h = BitSeq::ones(2);
        h.extend_from(&BitSeq::from_uint(position as u128, self.pos_width));
        h.extend_from(&BitSeq::from_uint(
            self.phi.phi_rank(window)?,
            self.label_width,
        ));
        Ok(h)
    }
}

impl Codec for WCodec {
    fn scheme(&self) -> &'static str {
        "w"
    }

    fn payload_len(&self) -> usize {
        self.params.n() - 1
    }

    fn codeword_len(&self) -> usize {
        self.params.n()
    }

    fn constraint(&self) -> (Constraint, Mode) {
        (self.params.constraint(), Mode::Window)
    }

    fn encode(&self, payload: &BitSeq) -> Result<BitSeq> {
        expect_len(payload, self.payload_len())?;
        let (n, ell, band) = (self.params.n(), self.params.ell(), self.params.band());

        let mut y = BitSeq::zeros(1).concat(payload);
        while let Some(v) = y.first_forbidden_window(ell, band) {
            if y.len() <= ell + 1 {
                break;
            }
            let i = v.index;
            let window = y.window(i, ell)?;
            let mut next = self.header(i, &window)?;
            let bits = y.as_slice();
            next.extend_from(&BitSeq::from(&bits[..i - 1]));
            next.extend_from(&BitSeq::from(&bits[i - 1 + ell..]));
            y = next;
        }
        if y.len() == ell + 1 && y.first_forbidden_window(ell, band).is_some() {
            y = BitSeq::from_bools(vec![true, false]).concat(&self.psi.psi_map(&y)?);
        }

        let z = y.suffix(ell);
        let pad = n - y.len();
        for j in 0..pad {
            y.push(z.as_slice()[j % ell]);
        }
        Ok(y)
    }

    fn decode(&self, codeword: &BitSeq) -> Result<BitSeq> {
        expect_len(codeword, self.codeword_len())?;
        let (n, ell) = (self.params.n(), self.params.ell());
        let malformed = |e: Error| match e {
            Error::Malformed(_) => e,
            other => Error::Malformed(other.to_string()),
        };

        let mut c = codeword.clone();
        let mut steps = 0usize;
        loop {
            match (c.bit(1), c.bit(2)) {
                (Some(false), _) => break,
                (Some(true), Some(true)) => {
                    if c.len() < ell - 1 {
                        return Err(Error::Malformed("truncated replacement header".into()));
                    }
                    let header = c.prefix(ell - 1);
                    let position = header.slice(3, self.pos_width)?.to_uint() as usize;
                    let label = header.suffix(self.label_width).to_uint();
                    let window = self.phi.phi_unrank(label).map_err(malformed)?;
                    let rest = c.suffix(c.len() - (ell - 1));
                    if position == 0 || position > rest.len() + 1 {
                        return Err(Error::Malformed(format!(
                            "header position {position} outside 1..={}",
                            rest.len() + 1
                        )));
                    }
                    let bits = rest.as_slice();
                    let mut next = BitSeq::from(&bits[..position - 1]);
                    next.extend_from(&window);
                    next.extend_from(&BitSeq::from(&bits[position - 1..]));
                    c = next;
                }
                (Some(true), Some(false)) => {
                    // Only the last encoder step can be a special replacement.
                    if steps > 0 {
                        return Err(Error::Malformed("special header after a regular one".into()));
                    }
                    if c.len() < ell {
                        return Err(Error::Malformed("truncated special header".into()));
                    }
                    c = self
                        .psi
                        .psi_inverse(&c.slice(3, ell - 2)?)
                        .map_err(malformed)?;
                }
                _ => return Err(Error::Malformed("ran out of bits".into())),
            }
            steps += 1;
            if steps > n {
                return Err(Error::Malformed("too many replacement headers".into()));
            }
        }
        if c.len() < n {
            return Err(Error::Malformed(format!(
                "reconstruction has {} bits, expected at least {n}",
                c.len()
            )));
        }
        c.slice(2, n - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitSeq {
        s.parse().unwrap()
    }

    fn band(a: usize, b: usize) -> Band {
        Band::new(a, b).unwrap()
    }

    fn w_codec(n: usize, ell: usize, a: usize, b: usize) -> WCodec {
        WCodec::new(&CodeParams::new(n, ell, a, b).unwrap()).unwrap()
    }

    #[test]
    fn count_forbidden_examples() {
        assert_eq!(count_forbidden(10, 1, 9).unwrap(), 2);
        assert_eq!(count_forbidden(6, 0, 6).unwrap(), 0);
        assert_eq!(count_forbidden(12, 3, 9).unwrap(), 158);
    }

    #[test]
    fn phi_examples() {
        let phi = WindowCodec::new(10, band(1, 9)).unwrap();
        assert_eq!(phi.phi_rank(&BitSeq::zeros(10)).unwrap(), 0);
        assert_eq!(phi.phi_rank(&BitSeq::ones(10)).unwrap(), 1);
        assert_eq!(phi.phi_unrank(1).unwrap(), BitSeq::ones(10));
        assert!(matches!(phi.phi_unrank(2), Err(Error::LabelOutOfRange { .. })));
        assert_eq!(
            phi.phi_rank(&bs("1000000000")),
            Err(Error::NotForbidden { weight: 1 })
        );
        let phi = WindowCodec::new(6, band(1, 5)).unwrap();
        assert_eq!(phi.phi_rank(&bs("111111")).unwrap(), 1);
        assert_eq!(phi.min_label_width(), 1);
    }

    #[test]
    fn psi_small_case() {
        let profile = CodeParams::new(16, 10, 1, 9).unwrap().profile().unwrap();
        let psi = TailCodec::new(10, band(1, 9), &profile).unwrap();
        assert_eq!(psi.target_band(), band(1, 7));
        assert_eq!(psi.source_size(), 6);
        assert!(psi.source_size() <= 1 << (10 - 3));
        let members = [
            "00000000000",
            "00000000001",
            "10000000000",
            "11111111111",
            "11111111110",
            "01111111111",
        ];
        let mut images = std::collections::HashSet::new();
        for m in members {
            let y = bs(m);
            let q = psi.psi_map(&y).unwrap();
            assert_eq!(q.len(), 8);
            assert!((1..=7).contains(&q.weight()));
            assert!(images.insert(q.clone()));
            assert_eq!(psi.psi_inverse(&q).unwrap(), y);
        }
        assert_eq!(psi.psi_map(&bs("01000000000")), Err(Error::NoForbiddenWindow));
        // the seventh target word is not an image
        let unused = WeightClass::inside(8, band(1, 7)).unrank(6).unwrap();
        assert!(matches!(psi.psi_inverse(&unused), Err(Error::LabelOutOfRange { .. })));
        assert!(psi.psi_inverse(&BitSeq::zeros(8)).is_err());
    }

    #[test]
    fn w_parameters() {
        let codec = w_codec(16, 10, 1, 9);
        assert_eq!(codec.pos_width(), 4);
        assert_eq!(codec.label_width(), 3);
        assert_eq!(2 + codec.pos_width() + codec.label_width(), 10 - 1);
        assert!(matches!(
            WCodec::new(&CodeParams::new(16, 10, 2, 8).unwrap()),
            Err(Error::Infeasible { check: "window capacity", .. })
        ));
        assert!(matches!(
            WCodec::new(&CodeParams::new(16, 6, 1, 5).unwrap()),
            Err(Error::Infeasible { check: "label width", .. })
        ));
        assert!(matches!(
            WCodec::new(&CodeParams::new(10, 10, 1, 9).unwrap()),
            Err(Error::Infeasible { check: "lengths", .. })
        ));
    }

    #[test]
    fn w_passthrough() {
        let codec = w_codec(16, 10, 1, 9);
        let x = bs("010101010101010");
        let c = codec.encode(&x).unwrap();
        assert_eq!(c, bs("0").concat(&x));
        assert_eq!(codec.decode(&c).unwrap(), x);
    }

    #[test]
    fn w_all_zero_trace() {
        let codec = w_codec(16, 10, 1, 9);
        let x = BitSeq::zeros(15);
        let c = codec.encode(&x).unwrap();
        // header 11 | 0001 | 000, the six surviving zeros, one extension bit
        assert_eq!(c, bs("11 0001 000 000000 1"));
        assert!(c.check(codec.params().constraint(), Mode::Window).is_member());
        assert_eq!(codec.decode(&c).unwrap(), x);
    }

    #[test]
    fn w_special_replacement_path() {
        // n = ell + 1: the only way out of a forbidden window is psi.
        let codec = w_codec(11, 10, 1, 9);
        assert_eq!(codec.pos_width(), 4);
        let x = BitSeq::zeros(10);
        let c = codec.encode(&x).unwrap();
        assert_eq!(c.prefix(2), bs("10"));
        assert!(c.check(codec.params().constraint(), Mode::Window).is_member());
        assert_eq!(codec.decode(&c).unwrap(), x);
    }

    #[test]
    fn w_decode_rejects_position_zero() {
        let codec = w_codec(16, 10, 1, 9);
        let c = bs("11 0000 000 0000000");
        assert!(matches!(codec.decode(&c), Err(Error::Malformed(_))));
        // label 7 is beyond the two forbidden windows
        let c = bs("11 0001 111 0000000");
        assert!(matches!(codec.decode(&c), Err(Error::Malformed(_))));
    }

    #[test]
    fn w_exhaustive_small() {
        let codec = w_codec(12, 8, 1, 7);
        let constraint = codec.params().constraint();
        for v in 0..1u32 << 11 {
            let x = BitSeq::from_uint(u128::from(v), 11);
            let c = codec.encode(&x).unwrap();
            assert_eq!(c.len(), 12);
            assert!(c.check(constraint, Mode::Window).is_member(), "{x} -> {c}");
            assert_eq!(codec.decode(&c).unwrap(), x);
        }
    }
}
