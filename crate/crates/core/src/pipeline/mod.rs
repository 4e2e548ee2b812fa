//! End-to-end experiments: source coder + channel code + BPSK/AWGN, SNR
//! sweeps, and the per-corpus rate comparison.

pub mod fig4;
pub mod source;
pub mod sweep;
pub mod transmit;

use std::fmt;
use std::str::FromStr;

use crate::compressor::{context, CompressorId};
use crate::{Error, Result};

pub use fig4::{report_fig4, write_fig4_csv, Fig4Row};
pub use source::{SourceCodec, SourceStream};
pub use sweep::{sweep, sweep_split, ReferenceLine, SweepConfig, SweepReport};
pub use transmit::{ldpc_ladder, rs_parity_grid, run_transmission, TransmissionRecord, Transmitter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceCoder {
    Fixed5,
    Huffman,
    Deflate,
    /// Context model of the given order, primed on the knowledge base.
    Context(usize),
}

impl SourceCoder {
    pub fn compressor(self) -> CompressorId {
        match self {
            SourceCoder::Fixed5 => CompressorId::Fixed5,
            SourceCoder::Huffman => CompressorId::Huffman,
            SourceCoder::Deflate => CompressorId::Deflate,
            SourceCoder::Context(k) => CompressorId::Context(k),
        }
    }
}

impl fmt::Display for SourceCoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.compressor().fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelCoder {
    /// Reed-Solomon over GF(2^8), length 255 with shortened tail blocks.
    Rs,
    /// (3, dc) LDPC of length 1024 from the rate ladder.
    Ldpc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ParityPolicy {
    /// Smallest grid parity meeting the WER target at each SNR.
    #[default]
    Optimized,
    /// RS parity symbols per block, or the LDPC check degree.
    Fixed(usize),
}

/// `<source>+<channel>[:<parity>]`, e.g. `huffman+rs`, `context+ldpc`,
/// `fixed5+rs:32`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SchemeSpec {
    pub source: SourceCoder,
    pub channel: ChannelCoder,
    pub parity: ParityPolicy,
}

impl SchemeSpec {
    pub fn new(source: SourceCoder, channel: ChannelCoder) -> Self {
        Self { source, channel, parity: ParityPolicy::Optimized }
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let channel = match self.channel {
            ChannelCoder::Rs => "rs",
            ChannelCoder::Ldpc => "ldpc",
        };
        write!(f, "{}+{channel}", self.source)?;
        if let ParityPolicy::Fixed(p) = self.parity {
            write!(f, ":{p}")?;
        }
        Ok(())
    }
}

impl FromStr for SchemeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::Unknown { kind: "scheme", name: s.to_string() };
        let (body, parity) = match s.trim().split_once(':') {
            Some((b, p)) => (b, ParityPolicy::Fixed(p.trim().parse().map_err(|_| unknown())?)),
            None => (s.trim(), ParityPolicy::Optimized),
        };
        let (source, channel) = body.split_once('+').ok_or_else(unknown)?;
        let source = match source.parse::<CompressorId>()? {
            CompressorId::Fixed5 => SourceCoder::Fixed5,
            CompressorId::Huffman => SourceCoder::Huffman,
            CompressorId::Deflate => SourceCoder::Deflate,
            CompressorId::Context(k) => SourceCoder::Context(k),
        };
        let channel = match channel.trim().to_ascii_lowercase().as_str() {
            "rs" => ChannelCoder::Rs,
            "ldpc" => ChannelCoder::Ldpc,
            _ => return Err(unknown()),
        };
        Ok(Self { source, channel, parity })
    }
}

/// Parses a comma-separated scheme list.
pub fn parse_schemes(list: &str) -> Result<Vec<SchemeSpec>> {
    list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

/// The four schemes of the standard comparison.
pub fn default_schemes() -> Vec<SchemeSpec> {
    vec![
        SchemeSpec::new(SourceCoder::Fixed5, ChannelCoder::Rs),
        SchemeSpec::new(SourceCoder::Huffman, ChannelCoder::Rs),
        SchemeSpec::new(SourceCoder::Deflate, ChannelCoder::Rs),
        SchemeSpec::new(SourceCoder::Context(context::DEFAULT_ORDER), ChannelCoder::Ldpc),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scheme_parsing() {
        let s: SchemeSpec = "context+ldpc".parse().unwrap();
        assert_eq!(s, SchemeSpec::new(SourceCoder::Context(3), ChannelCoder::Ldpc));
        assert_eq!(s.to_string(), "context3+ldpc");
        let f: SchemeSpec = "fixed5+rs:32".parse().unwrap();
        assert_eq!(f.parity, ParityPolicy::Fixed(32));
        assert_eq!(f.to_string().parse::<SchemeSpec>().unwrap(), f);
        assert_eq!(parse_schemes("fixed5+rs,huffman+rs,deflate+rs,context+ldpc").unwrap(), default_schemes());
        for bad in ["fixed5", "fixed5+turbo", "lzma+rs", "huffman+rs:x"] {
            assert!(bad.parse::<SchemeSpec>().is_err(), "{bad}");
        }
    }
}
