//! Source coding of whole documents into one bitstream.
//!
//! Each document is a length header followed by its payload. The header is
//! 16 bits holding the character count when it is below 2^15, otherwise 32
//! bits with the top bit set.

use crate::compressor::{deflate_compress, inflate, ContextModel, HuffmanTable};
use crate::corpus::{decode_fixed5, encode_fixed5, Alphabet32, Corpus, Document};
use crate::{Error, Result};

use super::SourceCoder;

const SHORT_LIMIT: usize = 1 << 15;
const LONG_LIMIT: usize = 1 << 31;

/// One document's share of the source stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentLayout {
    /// Bit range of the whole document (header included).
    pub start: usize,
    pub end: usize,
    /// Header plus any side information (Huffman table) in bits.
    pub preamble: usize,
    /// End bit of each character, relative to the payload start, when the
    /// code is symbol-by-symbol; `None` for stream codes.
    pub char_ends: Option<Vec<usize>>,
}

impl DocumentLayout {
    pub fn payload_start(&self) -> usize {
        self.start + self.preamble
    }

    /// Bit span of characters `[from, to)` in stream coordinates. Stream codes
    /// are mapped proportionally.
    pub fn char_span(&self, from: usize, to: usize, chars: usize) -> (usize, usize) {
        let base = self.payload_start();
        match &self.char_ends {
            Some(ends) => {
                let lo = if from == 0 { 0 } else { ends[from - 1] };
                (base + lo, base + ends[to - 1])
            }
            None => {
                let len = self.end - base;
                let lo = len * from / chars;
                let hi = (len * to).div_ceil(chars).max(lo + 1).min(len);
                (base + lo, base + hi)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceStream {
    pub bits: Vec<u8>,
    pub layouts: Vec<DocumentLayout>,
}

/// A source coder with its shared state (the primed model, if any).
#[derive(Debug, Clone)]
pub struct SourceCodec {
    coder: SourceCoder,
    alphabet: Alphabet32,
    model: Option<ContextModel>,
}

fn push_value(bits: &mut Vec<u8>, value: u64, n: u32) {
    bits.extend((0..n).rev().map(|i| ((value >> i) & 1) as u8));
}

fn read_value(bits: &[u8], pos: &mut usize, n: usize) -> Result<u64> {
    let slice = bits.get(*pos..*pos + n).ok_or_else(|| Error::Corrupt("source stream truncated".into()))?;
    *pos += n;
    Ok(slice.iter().fold(0, |acc, &b| (acc << 1) | (b & 1) as u64))
}

pub(crate) fn bytes_to_bits(bytes: &[u8]) -> Vec<u8> {
    let mut bits = Vec::with_capacity(bytes.len() * 8);
    for &b in bytes {
        push_value(&mut bits, b as u64, 8);
    }
    bits
}

/// Packs bits MSB first; the last byte is zero-padded.
pub(crate) fn bits_to_bytes(bits: &[u8]) -> Vec<u8> {
    bits.chunks(8).map(|c| c.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | ((b & 1) << (7 - i)))).collect()
}

fn header_bits(chars: usize) -> Result<Vec<u8>> {
    let mut bits = Vec::new();
    if chars < SHORT_LIMIT {
        push_value(&mut bits, chars as u64, 16);
    } else if chars < LONG_LIMIT {
        push_value(&mut bits, (chars as u64) | (1 << 31), 32);
    } else {
        return Err(Error::InvalidParameter(format!("document of {chars} characters is too long")));
    }
    Ok(bits)
}

fn read_header(bits: &[u8], pos: &mut usize) -> Result<usize> {
    let short = read_value(bits, pos, 16)? as usize;
    if short & 0x8000 == 0 {
        return Ok(short);
    }
    let low = read_value(bits, pos, 16)? as usize;
    Ok(((short & 0x7FFF) << 16) | low)
}

impl SourceCodec {
    /// `knowledge` primes the context model and is ignored by the other
    /// coders.
    pub fn new(coder: SourceCoder, knowledge: &Corpus) -> Result<Self> {
        let model = match coder {
            SourceCoder::Context(k) => Some(ContextModel::primed(k, &knowledge.serialize())?),
            _ => None,
        };
        Ok(Self { coder, alphabet: Alphabet32::new(), model })
    }

    pub fn coder(&self) -> SourceCoder {
        self.coder
    }

    /// Payload bits (table included) plus per-character end offsets where the
    /// code has them.
    fn encode_payload(&self, text: &[u8]) -> Result<(Vec<u8>, usize, Option<Vec<usize>>)> {
        Ok(match self.coder {
            SourceCoder::Fixed5 => {
                let bits = encode_fixed5(text, &self.alphabet)?;
                (bits, 0, Some((1..=text.len()).map(|i| 5 * i).collect()))
            }
            SourceCoder::Huffman => {
                let table = HuffmanTable::from_text(text)?;
                let mut bits = table.serialize();
                let side = bits.len();
                bits.extend(table.encode(text)?);
                let mut ends = Vec::with_capacity(text.len());
                let mut at = 0;
                for &b in text {
                    at += table.length(b).ok_or(Error::MissingSymbol(b))? as usize;
                    ends.push(at);
                }
                (bits, side, Some(ends))
            }
            SourceCoder::Deflate => (bytes_to_bits(&deflate_compress(text, None)), 0, None),
            SourceCoder::Context(_) => (bytes_to_bits(&self.model().encode(text)), 0, None),
        })
    }

    fn model(&self) -> &ContextModel {
        self.model.as_ref().expect("context coder carries a model")
    }

    pub fn encode(&self, documents: &[Document]) -> Result<SourceStream> {
        let mut bits = Vec::new();
        let mut layouts = Vec::with_capacity(documents.len());
        for doc in documents {
            let start = bits.len();
            bits.extend(header_bits(doc.char_count())?);
            let header = bits.len() - start;
            let (payload, side, char_ends) = self.encode_payload(doc.text())?;
            bits.extend(payload);
            layouts.push(DocumentLayout { start, end: bits.len(), preamble: header + side, char_ends });
        }
        Ok(SourceStream { bits, layouts })
    }

    /// Decodes `count` documents from the front of `bits`.
    pub fn decode(&self, bits: &[u8], count: usize) -> Result<Vec<Vec<u8>>> {
        let mut pos = 0;
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let chars = read_header(bits, &mut pos)?;
            let rest = bits.get(pos..).unwrap_or(&[]);
            let (text, used) = match self.coder {
                SourceCoder::Fixed5 => {
                    let need = 5 * chars;
                    let slice = rest.get(..need).ok_or_else(|| Error::Corrupt("fixed5 payload truncated".into()))?;
                    (decode_fixed5(slice, &self.alphabet), need)
                }
                SourceCoder::Huffman => {
                    let (table, side) = HuffmanTable::deserialize(rest)?;
                    let text = table.decode(&rest[side..], chars)?;
                    let used = side + text.iter().map(|&b| table.length(b).unwrap_or(0) as usize).sum::<usize>();
                    (text, used)
                }
                // Stream codes ignore trailing data; re-encoding the result
                // recovers the payload length.
                SourceCoder::Deflate => {
                    let text = inflate(&bits_to_bytes(rest), None)?;
                    if text.len() != chars {
                        return Err(Error::Corrupt("deflate length disagrees with header".into()));
                    }
                    let used = 8 * deflate_compress(&text, None).len();
                    (text, used)
                }
                SourceCoder::Context(_) => {
                    let text = self.model().decode(&bits_to_bytes(rest), chars)?;
                    let used = 8 * self.model().encode(&text).len();
                    (text, used)
                }
            };
            if used > rest.len() {
                return Err(Error::Corrupt("payload runs past the stream".into()));
            }
            pos += used;
            out.push(text);
        }
        Ok(out)
    }
}
