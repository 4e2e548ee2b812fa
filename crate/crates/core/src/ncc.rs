//! Normalized conditional complexity of a test set given a knowledge base.
//!
//! For each test document x the conditional cost is `C(x,D) - C(D)`, clamped
//! at zero and divided by the character count of x. The NCC is the mean of
//! those rates over the test set.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::compressor::{context_measure, measure, CompressorId, ContextModel};
use crate::corpus::{Corpus, Document, DOCUMENT_SEPARATOR};
use crate::{Error, Result};

/// How `C(x,D)` is formed from a surrogate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JointStrategy {
    /// `measure(x | D) + C(D)`: deflate dictionary or primed context model.
    /// Surrogates that cannot condition fall back to concatenation.
    #[default]
    Conditioning,
    /// `measure(serialize(D) ++ 0x00 ++ x)`.
    Concatenation,
}

impl fmt::Display for JointStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JointStrategy::Conditioning => "conditioning",
            JointStrategy::Concatenation => "concatenation",
        })
    }
}

impl FromStr for JointStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "conditioning" | "dictionary" | "primed" => Ok(JointStrategy::Conditioning),
            "concatenation" | "concat" => Ok(JointStrategy::Concatenation),
            other => Err(Error::Unknown { kind: "joint strategy", name: other.to_string() }),
        }
    }
}

/// Source of description lengths for one knowledge base. Real surrogates
/// implement it through [`Surrogate`]; tests can supply fixed tables.
pub trait ComplexitySource: Sync {
    fn label(&self) -> String;
    /// `C(D)`, or `None` for an empty knowledge base.
    fn knowledge_bits(&self) -> Option<u64>;
    /// `C(x,D)`; with an empty knowledge base this is the plain `C(x)`.
    fn joint_bits(&self, x: &[u8]) -> Result<u64>;
    /// Output on empty input (framing cost), reported for reference.
    fn empty_bits(&self) -> Result<u64>;
}

/// A compressor bound to a knowledge base, with `C(D)` and any priming
/// computed once.
#[derive(Debug, Clone)]
pub struct Surrogate {
    id: CompressorId,
    strategy: JointStrategy,
    knowledge: Vec<u8>,
    knowledge_bits: Option<u64>,
    primed: Option<ContextModel>,
}

impl Surrogate {
    pub fn new(id: CompressorId, knowledge: &Corpus, strategy: JointStrategy) -> Result<Self> {
        let serialized = knowledge.serialize();
        let knowledge_bits = if knowledge.is_empty() { None } else { Some(measure(id, &serialized, None)?.output_bits) };
        let primed = match (id, strategy) {
            (CompressorId::Context(k), JointStrategy::Conditioning) if !knowledge.is_empty() => {
                Some(ContextModel::primed(k, &serialized)?)
            }
            _ => None,
        };
        Ok(Self { id, strategy, knowledge: serialized, knowledge_bits, primed })
    }

    pub fn compressor(&self) -> CompressorId {
        self.id
    }

    pub fn strategy(&self) -> JointStrategy {
        self.strategy
    }
}

impl ComplexitySource for Surrogate {
    fn label(&self) -> String {
        self.id.to_string()
    }

    fn knowledge_bits(&self) -> Option<u64> {
        self.knowledge_bits
    }

    fn joint_bits(&self, x: &[u8]) -> Result<u64> {
        if x.is_empty() {
            return Err(Error::EmptyInput("sequence"));
        }
        let Some(cd) = self.knowledge_bits else {
            return Ok(measure(self.id, x, None)?.output_bits);
        };
        if self.strategy == JointStrategy::Conditioning && self.id.conditions() {
            let conditional = match &self.primed {
                Some(model) => context_measure(x, model).output_bits,
                None => measure(self.id, x, Some(&self.knowledge))?.output_bits,
            };
            return Ok(conditional + cd);
        }
        let mut joined = Vec::with_capacity(self.knowledge.len() + 1 + x.len());
        joined.extend_from_slice(&self.knowledge);
        joined.push(DOCUMENT_SEPARATOR);
        joined.extend_from_slice(x);
        Ok(measure(self.id, &joined, None)?.output_bits)
    }

    fn empty_bits(&self) -> Result<u64> {
        Ok(measure(self.id, &[], None)?.output_bits)
    }
}

pub fn knowledge_complexity(id: CompressorId, knowledge: &Corpus) -> Result<u64> {
    if knowledge.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(measure(id, &knowledge.serialize(), None)?.output_bits)
}

pub fn joint_complexity(id: CompressorId, x: &[u8], knowledge: &Corpus, strategy: JointStrategy) -> Result<u64> {
    Surrogate::new(id, knowledge, strategy)?.joint_bits(x)
}

/// `max(0, C(x,D) - C(D)) / l(x)` in bits per character.
pub fn conditional_rate(id: CompressorId, x: &[u8], knowledge: &Corpus, strategy: JointStrategy) -> Result<f64> {
    let source = Surrogate::new(id, knowledge, strategy)?;
    let joint = source.joint_bits(x)?;
    Ok(joint.saturating_sub(source.knowledge_bits().unwrap_or(0)) as f64 / x.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NccEntry {
    pub id: String,
    pub chars: usize,
    pub words: usize,
    pub joint_bits: u64,
    /// `C(x,D) - C(D)`, clamped at zero.
    pub conditional_bits: u64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NccReport {
    pub compressor: String,
    /// `C(D)`; zero for an empty knowledge base, where no subtraction happens.
    pub knowledge_bits: u64,
    pub empty_bits: u64,
    /// Sorted by document id.
    pub entries: Vec<NccEntry>,
    /// Unweighted mean of the per-document rates, bits per character.
    pub ncc: f64,
    /// Total conditional bits over total words.
    pub ncc_bits_per_word: f64,
    /// Total conditional bits over total characters.
    pub weighted_ncc: f64,
}

impl NccReport {
    pub fn total_chars(&self) -> usize {
        self.entries.iter().map(|e| e.chars).sum()
    }

    pub fn total_words(&self) -> usize {
        self.entries.iter().map(|e| e.words).sum()
    }

    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "id,chars,words,C_joint_bits,C_cond_bits,rate_bpc")?;
        for e in &self.entries {
            writeln!(out, "{},{},{},{},{},{:.6}", e.id, e.chars, e.words, e.joint_bits, e.conditional_bits, e.rate)?;
        }
        writeln!(out)?;
        writeln!(out, "ncc_bpc,ncc_bpw,compressor,C_D_bits")?;
        writeln!(out, "{:.6},{:.6},{},{}", self.ncc, self.ncc_bits_per_word, self.compressor, self.knowledge_bits)
    }
}

/// NCC of `test` against any complexity source.
pub fn ncc_from_source(source: &dyn ComplexitySource, test: &[Document]) -> Result<NccReport> {
    if test.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let cd = source.knowledge_bits();
    let mut entries = test
        .par_iter()
        .map(|doc| {
            let joint = source.joint_bits(doc.text())?;
            let conditional = joint.saturating_sub(cd.unwrap_or(0));
            Ok(NccEntry {
                id: doc.id().to_string(),
                chars: doc.char_count(),
                words: doc.word_count(),
                joint_bits: joint,
                conditional_bits: conditional,
                rate: conditional as f64 / doc.char_count() as f64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| a.id.cmp(&b.id));
    let ncc = entries.iter().map(|e| e.rate).sum::<f64>() / entries.len() as f64;
    let bits: u64 = entries.iter().map(|e| e.conditional_bits).sum();
    let words: usize = entries.iter().map(|e| e.words).sum();
    let chars: usize = entries.iter().map(|e| e.chars).sum();
    Ok(NccReport {
        compressor: source.label(),
        knowledge_bits: cd.unwrap_or(0),
        empty_bits: source.empty_bits()?,
        ncc,
        ncc_bits_per_word: if words == 0 { f64::NAN } else { bits as f64 / words as f64 },
        weighted_ncc: bits as f64 / chars as f64,
        entries,
    })
}

pub fn ncc_bound(id: CompressorId, test: &Corpus, knowledge: &Corpus, strategy: JointStrategy) -> Result<NccReport> {
    if test.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    ncc_from_source(&Surrogate::new(id, knowledge, strategy)?, test.documents())
}
