//! Adaptive order-k context model over bytes, with an ideal code-length
//! meter and a matching range coder.
//!
//! Every context starts from a uniform prior (count 1 for each of the 256
//! byte values). Coding a symbol adds [`INCREMENT`] to its count; when a
//! context's total exceeds [`MAX_TOTAL`] its learned counts are halved. The
//! meter and the range coder read probabilities from the same tables, so the
//! coder's output tracks the meter up to termination overhead.

use std::collections::HashMap;

use super::{ComplexityMeasurement, CompressorId};
use crate::{Error, Result};

pub const DEFAULT_ORDER: usize = 3;
pub const MAX_ORDER: usize = 8;
pub const INCREMENT: u32 = 32;
pub const MAX_TOTAL: u32 = 1 << 16;
/// Bits added to the ideal code length for arithmetic-coder termination.
pub const TERMINATION_BITS: u64 = 2;

#[derive(Debug, Clone, Default)]
struct Counts {
    /// Learned counts on top of the prior, sorted by symbol.
    learned: Vec<(u8, u32)>,
    /// 256 plus the sum of learned counts.
    total: u32,
}

impl Counts {
    fn fresh() -> Self {
        Self { learned: Vec::new(), total: 256 }
    }

    /// (cumulative frequency, frequency) of `symbol`.
    fn interval(&self, symbol: u8) -> (u32, u32) {
        let mut cum = symbol as u32;
        let mut freq = 1;
        for &(s, c) in &self.learned {
            if s < symbol {
                cum += c;
            } else {
                if s == symbol {
                    freq += c;
                }
                break;
            }
        }
        (cum, freq)
    }

    /// Symbol whose interval contains `target`, with its interval.
    fn find(&self, target: u32) -> (u8, u32, u32) {
        let mut cum = 0u32;
        let mut next_sym = 0u32;
        for &(s, c) in &self.learned {
            // Prior-only symbols next_sym..s occupy one slot each.
            let gap = s as u32 - next_sym;
            if target < cum + gap {
                return ((next_sym + target - cum) as u8, target, 1);
            }
            cum += gap;
            if target < cum + 1 + c {
                return (s, cum, 1 + c);
            }
            cum += 1 + c;
            next_sym = s as u32 + 1;
        }
        let sym = (next_sym + target - cum).min(255);
        (sym as u8, cum + sym - next_sym, 1)
    }

    fn update(&mut self, symbol: u8) {
        match self.learned.binary_search_by_key(&symbol, |&(s, _)| s) {
            Ok(i) => self.learned[i].1 += INCREMENT,
            Err(i) => self.learned.insert(i, (symbol, INCREMENT)),
        }
        self.total += INCREMENT;
        if self.total > MAX_TOTAL {
            self.learned.iter_mut().for_each(|e| e.1 /= 2);
            self.learned.retain(|e| e.1 > 0);
            self.total = 256 + self.learned.iter().map(|e| e.1).sum::<u32>();
        }
    }
}

/// Adaptive frequency tables keyed by the previous `order` bytes. History
/// before the start of a sequence reads as zero bytes.
#[derive(Debug, Clone)]
pub struct ContextModel {
    order: usize,
    tables: HashMap<u64, Counts>,
}

impl ContextModel {
    pub fn new(order: usize) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::InvalidParameter(format!("context order {order} exceeds {MAX_ORDER}")));
        }
        Ok(Self { order, tables: HashMap::new() })
    }

    /// A model of `order` that has adapted to `knowledge`.
    pub fn primed(order: usize, knowledge: &[u8]) -> Result<Self> {
        let mut m = Self::new(order)?;
        m.prime(knowledge);
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn contexts(&self) -> usize {
        self.tables.len()
    }

    /// Adapts the model to `bytes` as if they had been coded.
    pub fn prime(&mut self, bytes: &[u8]) {
        let mut ctx = 0u64;
        for &b in bytes {
            self.tables.entry(ctx).or_insert_with(Counts::fresh).update(b);
            ctx = self.push(ctx, b);
        }
    }

    fn push(&self, ctx: u64, b: u8) -> u64 {
        match self.order {
            0 => 0,
            8 => (ctx << 8) | b as u64,
            k => ((ctx << 8) | b as u64) & ((1u64 << (8 * k)) - 1),
        }
    }

    /// Ideal adaptive code length of `text` in bits (unrounded), adapting a
    /// private copy of the tables.
    pub fn ideal_bits(&self, text: &[u8]) -> f64 {
        let mut scratch = self.clone();
        let mut bits = 0.0;
        let mut ctx = 0u64;
        for &b in text {
            let counts = scratch.tables.entry(ctx).or_insert_with(Counts::fresh);
            let (_, freq) = counts.interval(b);
            bits -= (freq as f64 / counts.total as f64).log2();
            counts.update(b);
            ctx = scratch.push(ctx, b);
        }
        bits
    }

    /// Range-codes `text`. The decoder needs the same starting model and
    /// the symbol count.
    pub fn encode(&self, text: &[u8]) -> Vec<u8> {
        let mut scratch = self.clone();
        let mut enc = RangeEncoder::new();
        let mut ctx = 0u64;
        for &b in text {
            let counts = scratch.tables.entry(ctx).or_insert_with(Counts::fresh);
            let (cum, freq) = counts.interval(b);
            enc.encode(cum, freq, counts.total);
            counts.update(b);
            ctx = scratch.push(ctx, b);
        }
        enc.finish()
    }

    pub fn decode(&self, stream: &[u8], symbols: usize) -> Result<Vec<u8>> {
        let mut scratch = self.clone();
        let mut dec = RangeDecoder::new(stream);
        let mut out = Vec::with_capacity(symbols);
        let mut ctx = 0u64;
        for _ in 0..symbols {
            let counts = scratch.tables.entry(ctx).or_insert_with(Counts::fresh);
            let target = dec.target(counts.total);
            let (sym, cum, freq) = counts.find(target);
            dec.consume(cum, freq);
            counts.update(sym);
            out.push(sym);
            ctx = scratch.push(ctx, sym);
        }
        if dec.overrun() {
            return Err(Error::Corrupt("range coder stream truncated".into()));
        }
        Ok(out)
    }
}

const TOP: u32 = 1 << 24;

/// Carry-propagating range encoder (32-bit range, 64-bit low).
struct RangeEncoder {
    low: u64,
    range: u32,
    cache: u8,
    cache_size: u64,
    out: Vec<u8>,
    first: bool,
}

impl RangeEncoder {
    fn new() -> Self {
        Self { low: 0, range: u32::MAX, cache: 0, cache_size: 1, out: Vec::new(), first: true }
    }

    fn encode(&mut self, cum: u32, freq: u32, total: u32) {
        let r = self.range / total;
        self.low += r as u64 * cum as u64;
        self.range = r * freq;
        while self.range < TOP {
            self.range <<= 8;
            self.shift_low();
        }
    }

    fn emit(&mut self, b: u8) {
        // The leading byte is always zero; the decoder assumes it.
        if self.first {
            self.first = false;
        } else {
            self.out.push(b);
        }
    }

    fn shift_low(&mut self) {
        if (self.low as u32) < 0xFF00_0000 || (self.low >> 32) != 0 {
            let carry = (self.low >> 32) as u8;
            let mut temp = self.cache;
            loop {
                self.emit(temp.wrapping_add(carry));
                temp = 0xFF;
                self.cache_size -= 1;
                if self.cache_size == 0 {
                    break;
                }
            }
            self.cache = ((self.low >> 24) & 0xFF) as u8;
        }
        self.cache_size += 1;
        self.low = (self.low & 0x00FF_FFFF) << 8;
    }

    fn finish(mut self) -> Vec<u8> {
        for _ in 0..5 {
            self.shift_low();
        }
        self.out
    }
}

struct RangeDecoder<'a> {
    data: &'a [u8],
    pos: usize,
    code: u32,
    range: u32,
    r: u32,
    overrun: usize,
}

impl<'a> RangeDecoder<'a> {
    fn new(data: &'a [u8]) -> Self {
        let mut d = Self { data, pos: 0, code: 0, range: u32::MAX, r: 0, overrun: 0 };
        for _ in 0..4 {
            d.code = (d.code << 8) | d.next() as u32;
        }
        d
    }

    fn next(&mut self) -> u8 {
        match self.data.get(self.pos) {
            Some(&b) => {
                self.pos += 1;
                b
            }
            None => {
                self.overrun += 1;
                0
            }
        }
    }

    fn target(&mut self, total: u32) -> u32 {
        self.r = self.range / total;
        (self.code / self.r).min(total - 1)
    }

    fn consume(&mut self, cum: u32, freq: u32) {
        self.code = self.code.wrapping_sub(self.r * cum);
        self.range = self.r * freq;
        while self.range < TOP {
            self.code = (self.code << 8) | self.next() as u32;
            self.range <<= 8;
        }
    }

    fn overrun(&self) -> bool {
        // The encoder flush leaves slack, so a few phantom bytes are normal.
        self.overrun > 4
    }
}

/// Ideal adaptive code length of `text` under `model`, rounded up, plus
/// termination bits. The model is not modified.
pub fn context_measure(text: &[u8], model: &ContextModel) -> ComplexityMeasurement {
    ComplexityMeasurement {
        compressor: CompressorId::Context(model.order()),
        input_chars: text.len(),
        output_bits: model.ideal_bits(text).ceil() as u64 + TERMINATION_BITS,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::synth::{generate_text, random_bytes, Genre};

    /// Independent re-derivation of the adaptive code length: one dense
    /// 256-entry count array per context, no sparse bookkeeping.
    fn dense_oracle(order: usize, prime: &[u8], text: &[u8]) -> f64 {
        let mut tables: HashMap<Vec<u8>, Vec<u32>> = HashMap::new();
        let run = |bytes: &[u8], tables: &mut HashMap<Vec<u8>, Vec<u32>>, count: bool| -> f64 {
            let mut hist = vec![0u8; order];
            let mut bits = 0.0;
            for &b in bytes {
                let t = tables.entry(hist.clone()).or_insert_with(|| vec![0; 256]);
                let total: u32 = 256 + t.iter().sum::<u32>();
                if count {
                    bits -= ((1 + t[b as usize]) as f64 / total as f64).log2();
                }
                t[b as usize] += INCREMENT;
                if total + INCREMENT > MAX_TOTAL {
                    t.iter_mut().for_each(|c| *c /= 2);
                }
                if order > 0 {
                    hist.remove(0);
                    hist.push(b);
                }
            }
            bits
        };
        run(prime, &mut tables, false);
        run(text, &mut tables, true)
    }

    #[test]
    fn matches_dense_oracle() {
        let d = generate_text(Genre::Press, 1, 20_000).into_bytes();
        let x = generate_text(Genre::Press, 2, 3_000).into_bytes();
        for order in [0, 1, 3] {
            let m = ContextModel::primed(order, &d).unwrap();
            let got = m.ideal_bits(&x);
            let want = dense_oracle(order, &d, &x);
            assert!((got - want).abs() < 1e-6, "order {order}: {got} vs {want}");
        }
    }

    #[test]
    fn alternating_text_adapts_fast() {
        let text: Vec<u8> = b"ab".iter().cycle().take(1000).copied().collect();
        let m = ContextModel::new(2).unwrap();
        let rate = context_measure(&text, &m).output_bits as f64 / 1000.0;
        assert!(rate < 0.2, "{rate}");
    }

    #[test]
    fn empty_text_costs_termination_only() {
        let m = ContextModel::new(3).unwrap();
        assert!(context_measure(b"", &m).output_bits <= 2);
    }

    #[test]
    fn priming_on_the_text_itself_helps() {
        let x = generate_text(Genre::Novel, 4, 5_000).into_bytes();
        let cold = context_measure(&x, &ContextModel::new(3).unwrap()).output_bits;
        let warm = context_measure(&x, &ContextModel::primed(3, &x).unwrap()).output_bits;
        assert!(warm < cold, "{warm} vs {cold}");
    }

    #[test]
    fn measuring_does_not_mutate_model() {
        let m = ContextModel::primed(3, b"hello world").unwrap();
        let before = m.contexts();
        let _ = context_measure(b"something new entirely", &m);
        assert_eq!(m.contexts(), before);
    }

    #[test]
    fn range_coder_round_trips_and_tracks_ideal_length() {
        let d = generate_text(Genre::Legislative, 5, 50_000).into_bytes();
        for (order, prime, x) in [
            (3, &d[..], generate_text(Genre::Legislative, 6, 10_000).into_bytes()),
            (0, &[][..], random_bytes(1, 4_000)),
            (2, &[][..], vec![7u8; 3_000]),
            (3, &[][..], Vec::new()),
            (8, &d[..], b"x".to_vec()),
        ] {
            let m = ContextModel::primed(order, prime).unwrap();
            let z = m.encode(&x);
            assert_eq!(m.decode(&z, x.len()).unwrap(), x);
            let ideal = m.ideal_bits(&x);
            let actual = z.len() as f64 * 8.0;
            assert!(actual >= ideal - 1.0 && actual <= ideal * 1.01 + 48.0, "{actual} vs {ideal}");
        }
    }

    #[test]
    fn counts_find_inverts_interval() {
        let mut c = Counts::fresh();
        for &b in b"zzzaab\x00\xff" {
            c.update(b);
        }
        for s in 0..=255u8 {
            let (cum, freq) = c.interval(s);
            for t in [cum, cum + freq - 1] {
                assert_eq!(c.find(t), (s, cum, freq));
            }
        }
    }

    #[test]
    fn rejects_excessive_order() {
        assert!(ContextModel::new(9).is_err());
    }
}
