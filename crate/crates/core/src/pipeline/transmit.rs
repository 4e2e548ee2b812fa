//! Coded transmission of a source stream over BPSK/AWGN.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::channel::{transmit_hard, transmit_llr, ChannelConfig};
use crate::corpus::{tokenize_words, word_spans, Corpus, Document};
use crate::fec::ldpc::{COLUMN_WEIGHT, DEFAULT_LENGTH, LLR_CLIP, RATE_LADDER};
use crate::fec::{optimize_parity, Evaluation, LdpcCode, ParityPlan, PlanOutcome, RsCode, RsDecoded};
use crate::{seed, Error, Result};

use super::source::{bits_to_bytes, bytes_to_bits, SourceCodec, SourceStream};
use super::{ChannelCoder, ParityPolicy, SchemeSpec, SourceCoder};

/// RS codeword length before shortening.
pub const RS_LENGTH: usize = 255;
/// Largest RS parity (symbols per block) the optimizer considers.
pub const RS_MAX_PARITY: usize = 128;
/// Seed of the LDPC ensemble members; the code is part of the scheme, not
/// of the experiment.
pub const LDPC_CODE_SEED: u64 = 1;

/// Even parities 2..=RS_MAX_PARITY.
pub fn rs_parity_grid() -> Vec<usize> {
    (1..=RS_MAX_PARITY / 2).map(|i| 2 * i).collect()
}

/// The LDPC rate ladder as `(check degree, code)`, ascending in parity bits.
pub fn ldpc_ladder() -> &'static [(usize, LdpcCode)] {
    static LADDER: OnceLock<Vec<(usize, LdpcCode)>> = OnceLock::new();
    LADDER.get_or_init(|| {
        let mut codes: Vec<(usize, LdpcCode)> = RATE_LADDER
            .iter()
            .map(|&dc| (dc, LdpcCode::regular(DEFAULT_LENGTH, COLUMN_WEIGHT, dc, LDPC_CODE_SEED).expect("ladder code")))
            .collect();
        codes.sort_by_key(|(_, c)| c.n() - c.k());
        codes
    })
}

/// Outcome of one simulated setting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointStats {
    pub evaluation: Evaluation,
    /// Framed source bits per pass (RS framing byte and padding included).
    pub source_bits: u64,
    /// Transmitted bits per pass: source plus parity.
    pub channel_bits: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionRecord {
    pub scheme: String,
    /// Eb/N0 in dB, with Eb counted per framed source bit.
    pub snr_db: f64,
    /// RS parity symbols or LDPC parity bits per block.
    pub parity: usize,
    pub feasible: bool,
    pub source_bits: u64,
    pub channel_bits: u64,
    /// Words per pass.
    pub words: u64,
    pub trials: u64,
    pub word_errors: u64,
    pub epsilon: f64,
    pub seed: u64,
    pub plan: Option<ParityPlan>,
}

impl TransmissionRecord {
    pub fn wer(&self) -> f64 {
        if self.trials == 0 {
            return 1.0;
        }
        self.word_errors as f64 / self.trials as f64
    }

    pub fn reliable(&self) -> bool {
        self.feasible && self.trials > 0 && self.wer() <= self.epsilon
    }

    pub fn src_bits_per_word(&self) -> f64 {
        self.source_bits as f64 / self.words as f64
    }

    pub fn coded_bits_per_word(&self) -> f64 {
        self.channel_bits as f64 / self.words as f64
    }

    pub fn parity_bits(&self) -> u64 {
        self.channel_bits - self.source_bits
    }
}

/// Result of pushing one pass through the channel.
struct PassResult {
    /// Recovered source stream, same length as the sent one.
    recovered: Vec<u8>,
    /// Source-stream bit ranges of blocks whose payload came back wrong.
    failed: Vec<(usize, usize)>,
}

/// A scheme bound to the documents it carries.
#[derive(Debug, Clone)]
pub struct Transmitter {
    scheme: SchemeSpec,
    codec: SourceCodec,
    documents: Vec<Document>,
    stream: SourceStream,
    spans: Vec<Vec<(usize, usize)>>,
    words: u64,
}

impl Transmitter {
    pub fn new(scheme: SchemeSpec, documents: &[Document], knowledge: &Corpus) -> Result<Self> {
        if documents.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        if matches!(scheme.source, SourceCoder::Context(_)) && knowledge.is_empty() {
            return Err(Error::InvalidParameter("context priming needs a non-empty knowledge base".into()));
        }
        let codec = SourceCodec::new(scheme.source, knowledge)?;
        let stream = codec.encode(documents)?;
        let spans: Vec<_> = documents.iter().map(|d| word_spans(d.text())).collect();
        let words = spans.iter().map(|s| s.len() as u64).sum();
        if words == 0 {
            return Err(Error::EmptyInput("words"));
        }
        Ok(Self { scheme, codec, documents: documents.to_vec(), stream, spans, words })
    }

    pub fn scheme(&self) -> &SchemeSpec {
        &self.scheme
    }

    pub fn words(&self) -> u64 {
        self.words
    }

    pub fn stream(&self) -> &SourceStream {
        &self.stream
    }

    /// Parity values the optimizer may choose from, ascending.
    pub fn grid(&self) -> Vec<usize> {
        match self.scheme.channel {
            ChannelCoder::Rs => rs_parity_grid(),
            ChannelCoder::Ldpc => ldpc_ladder().iter().map(|(_, c)| c.n() - c.k()).collect(),
        }
    }

    fn ldpc_code(&self, parity: usize) -> Result<&'static LdpcCode> {
        ldpc_ladder()
            .iter()
            .map(|(_, c)| c)
            .find(|c| c.n() - c.k() == parity)
            .ok_or_else(|| Error::InvalidParameter(format!("no ladder code with {parity} parity bits")))
    }

    /// Framed source bits and channel bits per pass at `parity`.
    pub fn framing(&self, parity: usize) -> Result<(u64, u64)> {
        let bits = self.stream.bits.len();
        match self.scheme.channel {
            ChannelCoder::Rs => {
                if parity == 0 || parity >= RS_LENGTH || !parity.is_multiple_of(2) {
                    return Err(Error::InvalidParameter(format!("RS parity {parity}")));
                }
                let frame = 1 + bits.div_ceil(8);
                let blocks = frame.div_ceil(RS_LENGTH - parity);
                Ok((8 * frame as u64, 8 * (frame + blocks * parity) as u64))
            }
            ChannelCoder::Ldpc => {
                let code = self.ldpc_code(parity)?;
                let blocks = bits.div_ceil(code.k());
                Ok((bits as u64, (bits + blocks * parity) as u64))
            }
        }
    }

    fn pass(&self, parity: usize, config: &ChannelConfig, pass: u64) -> Result<PassResult> {
        let sent = &self.stream.bits;
        let block_seed = |b: usize| seed::derive(config.seed, &[pass, b as u64]);
        match self.scheme.channel {
            ChannelCoder::Rs => {
                let mut frame = vec![(8 * sent.len().div_ceil(8) - sent.len()) as u8];
                frame.extend(bits_to_bytes(sent));
                let k = RS_LENGTH - parity;
                let full = RsCode::gf256(RS_LENGTH, k)?;
                let chunks: Vec<&[u8]> = frame.chunks(k).collect();
                let out = chunks
                    .par_iter()
                    .enumerate()
                    .map(|(b, chunk)| {
                        let code = if chunk.len() == k { full.clone() } else { full.shortened(chunk.len())? };
                        let cw = code.encode(chunk)?;
                        let rx = bits_to_bytes(&transmit_hard(&bytes_to_bits(&cw), &config.with_seed(block_seed(b))));
                        let recovered = match code.decode(&rx)? {
                            RsDecoded::Corrected { message, .. } => message,
                            RsDecoded::Failure => rx[..chunk.len()].to_vec(),
                        };
                        Ok(recovered)
                    })
                    .collect::<Result<Vec<Vec<u8>>>>()?;
                let mut recovered_frame = Vec::with_capacity(frame.len());
                let mut failed = Vec::new();
                for (b, (got, chunk)) in out.iter().zip(&chunks).enumerate() {
                    if got != chunk {
                        // frame byte 0 is the pad header, not source data
                        let lo = (8 * b * k).saturating_sub(8);
                        let hi = (8 * (b * k + chunk.len()) - 8).min(sent.len());
                        failed.push((lo, hi));
                    }
                    recovered_frame.extend_from_slice(got);
                }
                let mut recovered = bytes_to_bits(&recovered_frame[1..]);
                recovered.truncate(sent.len());
                Ok(PassResult { recovered, failed })
            }
            ChannelCoder::Ldpc => {
                let code = self.ldpc_code(parity)?;
                let k = code.k();
                let chunks: Vec<&[u8]> = sent.chunks(k).collect();
                let out = chunks
                    .par_iter()
                    .enumerate()
                    .map(|(b, chunk)| {
                        let mut message = chunk.to_vec();
                        message.resize(k, 0);
                        let cw = code.encode(&message)?;
                        // shortened positions are known zeros and not sent
                        let mut tx = cw[..chunk.len()].to_vec();
                        tx.extend_from_slice(&cw[k..]);
                        let rx = transmit_llr(&tx, &config.with_seed(block_seed(b)));
                        let mut llr = Vec::with_capacity(code.n());
                        llr.extend_from_slice(&rx[..chunk.len()]);
                        llr.resize(k, LLR_CLIP);
                        llr.extend_from_slice(&rx[chunk.len()..]);
                        let decoded = code.decode(&llr)?;
                        Ok(decoded.message[..chunk.len()].to_vec())
                    })
                    .collect::<Result<Vec<Vec<u8>>>>()?;
                let mut recovered = Vec::with_capacity(sent.len());
                let mut failed = Vec::new();
                for (b, (got, chunk)) in out.iter().zip(&chunks).enumerate() {
                    if got != chunk {
                        failed.push((b * k, b * k + chunk.len()));
                    }
                    recovered.extend_from_slice(got);
                }
                Ok(PassResult { recovered, failed })
            }
        }
    }

    /// Word errors in one pass.
    fn count_errors(&self, result: &PassResult) -> u64 {
        let sent = &self.stream.bits;
        if result.failed.is_empty() {
            let Ok(texts) = self.codec.decode(&result.recovered, self.documents.len()) else {
                return self.words;
            };
            return self
                .documents
                .iter()
                .zip(&texts)
                .map(|(doc, got)| {
                    let want = tokenize_words(doc.text());
                    let have = tokenize_words(got);
                    (0..want.len()).filter(|&i| have.get(i) != Some(&want[i])).count() as u64
                })
                .sum();
        }
        let hits = |lo: usize, hi: usize| result.failed.iter().any(|&(a, b)| a < hi && lo < b);
        let differs = |lo: usize, hi: usize| sent[lo..hi] != result.recovered[lo..hi];
        let symbolwise = self.scheme.source == SourceCoder::Fixed5;
        let mut errors = 0;
        for ((doc, layout), spans) in self.documents.iter().zip(&self.stream.layouts).zip(&self.spans) {
            let (ps, pe) = (layout.start, layout.payload_start());
            let preamble_lost = if symbolwise { differs(ps, pe) } else { hits(ps, pe) };
            if preamble_lost {
                errors += spans.len() as u64;
                continue;
            }
            for &(from, to) in spans {
                let (lo, hi) = layout.char_span(from, to, doc.char_count());
                if if symbolwise { differs(lo, hi) } else { hits(lo, hi) } {
                    errors += 1;
                }
            }
        }
        errors
    }

    /// Simulates passes over the documents at `parity` until at least
    /// `min_trials` words were sent. With `stop_above = Some(eps)` the run
    /// ends as soon as the final WER is certain to exceed `eps`.
    pub fn evaluate(
        &self,
        parity: usize,
        eb_n0_db: f64,
        min_trials: u64,
        stop_above: Option<f64>,
        seed: u64,
    ) -> Result<PointStats> {
        let (source_bits, channel_bits) = self.framing(parity)?;
        let config = ChannelConfig::from_eb_n0(eb_n0_db, source_bits, channel_bits, seed);
        let passes = min_trials.div_ceil(self.words).max(1);
        let planned = passes * self.words;
        let mut word_errors = 0;
        let mut trials = 0;
        for pass in 0..passes {
            word_errors += self.count_errors(&self.pass(parity, &config, pass)?);
            trials += self.words;
            if stop_above.is_some_and(|eps| word_errors as f64 > eps * planned as f64) {
                break;
            }
        }
        Ok(PointStats { evaluation: Evaluation { parity, word_errors, trials }, source_bits, channel_bits })
    }

    /// Runs the scheme at one SNR, choosing parity by its policy.
    pub fn run(&self, eb_n0_db: f64, epsilon: f64, min_trials: u64, seed: u64) -> Result<TransmissionRecord> {
        let name = self.scheme.to_string();
        let (stats, plan) = match self.scheme.parity {
            ParityPolicy::Fixed(value) => {
                let parity = match self.scheme.channel {
                    ChannelCoder::Rs => value,
                    ChannelCoder::Ldpc => {
                        let (_, code) = ldpc_ladder()
                            .iter()
                            .find(|(dc, _)| *dc == value)
                            .ok_or_else(|| Error::InvalidParameter(format!("no ladder code with check degree {value}")))?;
                        code.n() - code.k()
                    }
                };
                (self.evaluate(parity, eb_n0_db, min_trials, None, seed)?, None)
            }
            ParityPolicy::Optimized => {
                let plan = optimize_parity(&name, eb_n0_db, epsilon, &self.grid(), |p| {
                    Ok(self.evaluate(p, eb_n0_db, min_trials, Some(epsilon), seed)?.evaluation)
                })?;
                let chosen = plan.evaluation();
                let (source_bits, channel_bits) = self.framing(chosen.parity)?;
                (PointStats { evaluation: *chosen, source_bits, channel_bits }, Some(plan))
            }
        };
        let feasible = plan.as_ref().is_none_or(|p| matches!(p.outcome, PlanOutcome::Feasible { .. }));
        Ok(TransmissionRecord {
            scheme: name,
            snr_db: eb_n0_db,
            parity: stats.evaluation.parity,
            feasible,
            source_bits: stats.source_bits,
            channel_bits: stats.channel_bits,
            words: self.words,
            trials: stats.evaluation.trials,
            word_errors: stats.evaluation.word_errors,
            epsilon,
            seed,
            plan,
        })
    }
}

/// One-shot form of [`Transmitter::run`].
pub fn run_transmission(
    scheme: SchemeSpec,
    documents: &[Document],
    knowledge: &Corpus,
    eb_n0_db: f64,
    epsilon: f64,
    min_trials: u64,
    seed: u64,
) -> Result<TransmissionRecord> {
    Transmitter::new(scheme, documents, knowledge)?.run(eb_n0_db, epsilon, min_trials, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::synth::{generate_corpus, Genre};
    use crate::corpus::{split_corpus, CorpusRole};

    fn setup() -> (Corpus, Corpus) {
        split_corpus(&generate_corpus(Genre::Novel, 11, 12, 1500), 0.25, 3).unwrap()
    }

    fn all_schemes() -> Vec<SchemeSpec> {
        ["fixed5+rs", "huffman+rs", "deflate+rs", "context+rs", "fixed5+ldpc", "huffman+ldpc", "deflate+ldpc", "context+ldpc"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect()
    }

    #[test]
    fn noiseless_runs_are_lossless_at_the_parity_floor() {
        let (d, t) = setup();
        for scheme in all_schemes() {
            let tx = Transmitter::new(scheme.clone(), t.documents(), &d).unwrap();
            let rec = tx.run(f64::INFINITY, 1e-3, 1, 0).unwrap();
            assert_eq!(rec.word_errors, 0, "{scheme}");
            assert_eq!(rec.parity, tx.grid()[0], "{scheme}");
            assert!(rec.coded_bits_per_word() >= rec.src_bits_per_word());
            assert_eq!(rec.channel_bits, rec.source_bits + rec.parity_bits());
        }
    }

    #[test]
    fn fixed5_rs_rate_is_arithmetic() {
        let (d, t) = setup();
        let tx = Transmitter::new("fixed5+rs:32".parse().unwrap(), t.documents(), &d).unwrap();
        let rec = tx.run(f64::INFINITY, 1e-3, 1, 0).unwrap();
        let chars = t.char_count();
        let frame = 1 + (16 * t.len() + 5 * chars).div_ceil(8);
        assert_eq!(rec.source_bits, 8 * frame as u64);
        let blocks = frame.div_ceil(223);
        assert_eq!(rec.channel_bits, 8 * (frame + 32 * blocks) as u64);
    }

    #[test]
    fn framing_counts_ldpc_shortening() {
        let (d, t) = setup();
        let tx = Transmitter::new("huffman+ldpc".parse().unwrap(), t.documents(), &d).unwrap();
        let bits = tx.stream().bits.len();
        for (_, code) in ldpc_ladder() {
            let p = code.n() - code.k();
            let (s, c) = tx.framing(p).unwrap();
            assert_eq!(s, bits as u64);
            assert_eq!(c, (bits + bits.div_ceil(code.k()) * p) as u64);
        }
    }

    #[test]
    fn hopeless_snr_is_infeasible() {
        let (d, t) = setup();
        let tx = Transmitter::new("huffman+rs".parse().unwrap(), t.documents(), &d).unwrap();
        let rec = tx.run(-4.0, 1e-3, 100, 1).unwrap();
        assert!(!rec.feasible);
        assert!(!rec.reliable());
        assert_eq!(rec.parity, RS_MAX_PARITY);
    }

    #[test]
    fn fixed5_damage_stays_local() {
        let (d, t) = setup();
        let fixed5 = Transmitter::new("fixed5+rs:2".parse().unwrap(), t.documents(), &d).unwrap();
        let huffman = Transmitter::new("huffman+rs:2".parse().unwrap(), t.documents(), &d).unwrap();
        let a = fixed5.run(4.0, 1e-3, 1, 5).unwrap();
        let b = huffman.run(4.0, 1e-3, 1, 5).unwrap();
        assert!(a.wer() > 0.0 && a.wer() < 0.5, "{}", a.wer());
        assert!(b.wer() > 0.0);
    }

    #[test]
    fn evaluation_is_deterministic() {
        let (d, t) = setup();
        let tx = Transmitter::new("context+ldpc".parse().unwrap(), t.documents(), &d).unwrap();
        let p = tx.grid()[2];
        let a = tx.evaluate(p, 2.0, 500, None, 9).unwrap();
        assert_eq!(a, tx.evaluate(p, 2.0, 500, None, 9).unwrap());
    }

    #[test]
    fn context_needs_knowledge() {
        let (_, t) = setup();
        let empty = Corpus::empty(CorpusRole::Knowledge);
        assert!(Transmitter::new("context+rs".parse().unwrap(), t.documents(), &empty).is_err());
    }
}
