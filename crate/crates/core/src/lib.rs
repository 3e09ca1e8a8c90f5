//! Encoders, decoders and counting oracles for binary codes whose weight is
//! constrained per subblock (SECC) or over every sliding window (SWCC).
//!
//! ```
//! use swcc_core::{BitSeq, Codec, CodeParams, Mode, WCodec};
//!
//! let params = CodeParams::new(16, 10, 1, 9).unwrap();
//! let codec = WCodec::new(&params).unwrap();
//! let x: BitSeq = "000000000000000".parse().unwrap();
//! let c = codec.encode(&x).unwrap();
//! assert_eq!(c.len(), 16);
//! assert!(c.check(params.constraint(), Mode::Window).is_member());
//! assert_eq!(codec.decode(&c).unwrap(), x);
//! ```

pub mod bitseq;
pub mod codec;
pub mod combinatorics;
pub mod ecc;
pub mod error;
pub mod knuth;
pub mod oracle;
pub mod params;
pub mod srt;
pub mod vt;

pub use bitseq::{check_membership, BitSeq, Constraint, Mode, Verdict, Violation};
pub use codec::Codec;
pub use ecc::{straddle_safe, EccParams, SEccCodec, WEccCodec};
pub use error::{Error, Result};
pub use knuth::{find_walk_index, PolarityCodec, SCodec, SPrimeCodec, Walk};
pub use params::{parse_fraction, Band, CodeParams, Fraction, Profile};
pub use srt::{count_forbidden, TailCodec, WCodec, WindowCodec};
pub use vt::{syndrome, tag_width, vt_correct, VtTag};
