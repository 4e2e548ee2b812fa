use std::collections::{BTreeMap, BTreeSet};

use super::Corpus;
use crate::{Error, Result};

/// Additive smoothing constant for Markov estimation.
pub const DEFAULT_SMOOTHING: f64 = 0.1;

/// Order-k character Markov model with add-alpha smoothing.
///
/// Smoothing is applied over the symbols actually observed in the training
/// corpus, so a source that only ever emits two symbols is estimated on a
/// two-symbol alphabet. Contexts never span a document boundary.
#[derive(Debug, Clone)]
pub struct MarkovModel {
    order: usize,
    smoothing: f64,
    alphabet: BTreeSet<u8>,
    transitions: BTreeMap<Vec<u8>, BTreeMap<u8, u64>>,
}

impl MarkovModel {
    pub fn fit(corpus: &Corpus, order: usize, smoothing: f64) -> Result<Self> {
        if corpus.is_empty() || corpus.char_count() == 0 {
            return Err(Error::EmptyCorpus);
        }
        if !(smoothing > 0.0) {
            return Err(Error::InvalidParameter("smoothing must be positive".into()));
        }
        let mut alphabet = BTreeSet::new();
        let mut transitions: BTreeMap<Vec<u8>, BTreeMap<u8, u64>> = BTreeMap::new();
        for doc in corpus.documents() {
            let text = doc.text();
            alphabet.extend(text.iter().copied());
            for i in order..text.len() {
                *transitions
                    .entry(text[i - order..i].to_vec())
                    .or_default()
                    .entry(text[i])
                    .or_insert(0) += 1;
            }
        }
        Ok(Self { order, smoothing, alphabet, transitions })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    /// Smoothed conditional probability of `symbol` after `context`.
    pub fn probability(&self, context: &[u8], symbol: u8) -> f64 {
        let a = self.alphabet.len() as f64;
        match self.transitions.get(context) {
            Some(row) => {
                let total: u64 = row.values().sum();
                let count = row.get(&symbol).copied().unwrap_or(0);
                (count as f64 + self.smoothing) / (total as f64 + self.smoothing * a)
            }
            None => 1.0 / a,
        }
    }

    /// Conditional entropy rate in bits per character, weighting each
    /// context by its empirical frequency.
    pub fn entropy_rate(&self) -> f64 {
        let a = self.alphabet.len() as f64;
        let grand: u64 = self.transitions.values().flat_map(|r| r.values()).sum();
        if grand == 0 || self.alphabet.len() < 2 {
            return 0.0;
        }
        let mut h = 0.0;
        for row in self.transitions.values() {
            let total: u64 = row.values().sum();
            let denom = total as f64 + self.smoothing * a;
            let mut hc = 0.0;
            for &c in row.values() {
                let p = (c as f64 + self.smoothing) / denom;
                hc -= p * p.log2();
            }
            let unseen = self.alphabet.len() - row.len();
            if unseen > 0 {
                let p = self.smoothing / denom;
                hc -= unseen as f64 * p * p.log2();
            }
            h += total as f64 / grand as f64 * hc;
        }
        h.clamp(0.0, a.log2())
    }
}

/// Entropy rate in bits/char of an order-`order` Markov fit to `corpus`.
pub fn markov_entropy(corpus: &Corpus, order: usize) -> Result<f64> {
    Ok(MarkovModel::fit(corpus, order, DEFAULT_SMOOTHING)?.entropy_rate())
}
