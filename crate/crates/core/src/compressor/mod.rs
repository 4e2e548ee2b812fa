//! Computable complexity surrogates: fixed 5-bit, order-0 Huffman, deflate
//! with a preset dictionary, and an adaptive context model.

pub mod context;
pub mod deflate;
pub mod huffman;

use std::fmt;
use std::str::FromStr;

pub use context::{context_measure, ContextModel};
pub use deflate::{deflate_compress, deflate_measure, inflate};
pub use huffman::{huffman_build, huffman_measure, HuffmanTable};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompressorId {
    Fixed5,
    Huffman,
    Deflate,
    /// Adaptive context model of the given order.
    Context(usize),
}

impl CompressorId {
    /// Whether `measure` uses conditioning bytes (as a deflate dictionary or
    /// as context-model priming).
    pub fn conditions(self) -> bool {
        matches!(self, CompressorId::Deflate | CompressorId::Context(_))
    }
}

impl fmt::Display for CompressorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompressorId::Fixed5 => f.write_str("fixed5"),
            CompressorId::Huffman => f.write_str("huffman"),
            CompressorId::Deflate => f.write_str("deflate"),
            CompressorId::Context(k) => write!(f, "context{k}"),
        }
    }
}

impl FromStr for CompressorId {
    type Err = Error;

    /// Accepts `fixed5`, `huffman`, `deflate` (alias `gzip`), `context`
    /// (order 3), `context<k>` and `context(<k>)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let unknown = || Error::Unknown { kind: "compressor", name: s.clone() };
        Ok(match s.as_str() {
            "fixed5" => CompressorId::Fixed5,
            "huffman" => CompressorId::Huffman,
            "deflate" | "gzip" => CompressorId::Deflate,
            "context" => CompressorId::Context(context::DEFAULT_ORDER),
            other => {
                let order = other
                    .strip_prefix("context")
                    .map(|r| r.trim_start_matches('(').trim_end_matches(')'))
                    .ok_or_else(unknown)?;
                let k: usize = order.parse().map_err(|_| unknown())?;
                if k > context::MAX_ORDER {
                    return Err(Error::InvalidParameter(format!("context order {k} exceeds {}", context::MAX_ORDER)));
                }
                CompressorId::Context(k)
            }
        })
    }
}

/// The measured description length of one byte sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexityMeasurement {
    pub compressor: CompressorId,
    pub input_chars: usize,
    pub output_bits: u64,
}

impl ComplexityMeasurement {
    pub fn bits_per_char(&self) -> f64 {
        self.output_bits as f64 / self.input_chars as f64
    }
}

/// Measures `bytes` with the chosen surrogate.
///
/// `conditioning` becomes the deflate preset dictionary or the context
/// model's priming text; fixed5 and Huffman ignore it. Fixed5 is a length
/// meter (5 bits per byte) and does not check the alphabet; use
/// [`crate::corpus::encode_fixed5`] for an actual encoding. Huffman fits a
/// table to `bytes` and includes the serialized table.
pub fn measure(id: CompressorId, bytes: &[u8], conditioning: Option<&[u8]>) -> Result<ComplexityMeasurement> {
    let input_chars = bytes.len();
    let output_bits = match id {
        CompressorId::Fixed5 => 5 * bytes.len() as u64,
        CompressorId::Huffman => {
            if bytes.is_empty() {
                0
            } else {
                huffman_measure(bytes, &HuffmanTable::from_text(bytes)?, true)?.output_bits
            }
        }
        CompressorId::Deflate => deflate_measure(bytes, conditioning).output_bits,
        CompressorId::Context(k) => {
            let model = ContextModel::primed(k, conditioning.unwrap_or(&[]))?;
            context_measure(bytes, &model).output_bits
        }
    };
    Ok(ComplexityMeasurement { compressor: id, input_chars, output_bits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::synth::{generate_corpus, Genre};

    #[test]
    fn parse_and_display() {
        for (s, id) in [
            ("fixed5", CompressorId::Fixed5),
            ("Huffman", CompressorId::Huffman),
            ("gzip", CompressorId::Deflate),
            ("context", CompressorId::Context(3)),
            ("context(2)", CompressorId::Context(2)),
            ("context5", CompressorId::Context(5)),
        ] {
            assert_eq!(s.parse::<CompressorId>().unwrap(), id);
            assert_eq!(id.to_string().parse::<CompressorId>().unwrap(), id);
        }
        assert!("lzma".parse::<CompressorId>().is_err());
        assert!("context99".parse::<CompressorId>().is_err());
    }

    #[test]
    fn fixed5_is_five_bits_per_char() {
        assert_eq!(measure(CompressorId::Fixed5, b"abc", None).unwrap().output_bits, 15);
    }

    #[test]
    fn measurements_are_deterministic() {
        let x = crate::corpus::synth::generate_text(Genre::Press, 3, 8_000).into_bytes();
        for id in [CompressorId::Huffman, CompressorId::Deflate, CompressorId::Context(3)] {
            assert_eq!(measure(id, &x, Some(b"prime")).unwrap(), measure(id, &x, Some(b"prime")).unwrap());
        }
    }

    #[test]
    fn priming_never_costs_more_than_sixteen_bits() {
        let c = generate_corpus(Genre::Novel, 21, 12, 10_000);
        let d: Vec<u8> = c.documents()[..10].iter().flat_map(|d| d.text().iter().copied()).collect();
        for held in &c.documents()[10..] {
            let x = held.text();
            assert!(x.len() >= 1000);
            let primed = measure(CompressorId::Context(3), x, Some(&d)).unwrap().output_bits;
            let cold = measure(CompressorId::Context(3), x, None).unwrap().output_bits;
            assert!(primed <= cold + 16, "{primed} vs {cold}");
        }
    }
}
