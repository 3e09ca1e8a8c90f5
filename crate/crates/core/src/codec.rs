use crate::bitseq::{BitSeq, Constraint, Mode};
use crate::error::{Error, Result};

/// Fixed-length block code mapping payloads to constrained codewords.
pub trait Codec {
    /// Short scheme name as used on the command line.
    fn scheme(&self) -> &'static str;

    fn payload_len(&self) -> usize;

    fn codeword_len(&self) -> usize;

    /// The weight constraint every codeword satisfies, and how it is applied.
    fn constraint(&self) -> (Constraint, Mode);

    fn encode(&self, payload: &BitSeq) -> Result<BitSeq>;

    fn decode(&self, codeword: &BitSeq) -> Result<BitSeq>;

    /// Decodes and reports how many substitutions were corrected. Codes
    /// without error correction always report zero.
    fn decode_counting(&self, codeword: &BitSeq) -> Result<(BitSeq, usize)> {
        self.decode(codeword).map(|x| (x, 0))
    }

    fn redundancy(&self) -> usize {
        self.codeword_len() - self.payload_len()
    }
}

pub(crate) fn expect_len(x: &BitSeq, expected: usize) -> Result<()> {
    if x.len() != expected {
        return Err(Error::Length {
            expected,
            actual: x.len(),
        });
    }
    Ok(())
}
