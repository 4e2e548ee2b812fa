//! Order-0 Huffman coding with deterministic, canonical tables.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{ComplexityMeasurement, CompressorId};
use crate::{Error, Result};

/// Bits per serialized table entry: 8-bit symbol plus 6-bit code length.
const ENTRY_BITS: u64 = 14;
const COUNT_BITS: u64 = 8;

/// A canonical prefix code over bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuffmanTable {
    /// Code length per byte value; 0 means absent.
    lengths: [u8; 256],
    /// Canonical codeword per byte value, right-aligned.
    codes: [u64; 256],
    counts: Vec<u64>,
}

/// Builds an optimal prefix code for `counts` (indexed by byte value).
///
/// Equal-weight merges prefer the node created earlier (leaves are created in
/// symbol order); codewords are then assigned canonically by (length,
/// symbol). A lone symbol gets a 1-bit codeword.
pub fn huffman_build(counts: &[u64]) -> Result<HuffmanTable> {
    if counts.len() > 256 {
        return Err(Error::InvalidParameter("more than 256 symbols".into()));
    }
    let lengths_vec = code_lengths(counts)?;
    let mut lengths = [0u8; 256];
    lengths[..lengths_vec.len()].copy_from_slice(&lengths_vec);
    Ok(HuffmanTable::from_lengths(lengths, counts.to_vec()))
}

/// Unrestricted Huffman code lengths; zero-count symbols get length 0.
fn code_lengths(counts: &[u64]) -> Result<Vec<u8>> {
    let live: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] > 0).collect();
    let mut lengths = vec![0u8; counts.len()];
    match live.len() {
        0 => return Err(Error::EmptyInput("huffman counts")),
        1 => {
            lengths[live[0]] = 1;
            return Ok(lengths);
        }
        _ => {}
    }
    // Nodes: leaves first (in symbol order), then internal nodes in creation
    // order. The heap key (weight, node index) implements the tie-break.
    let mut parent: Vec<usize> = vec![usize::MAX; live.len()];
    let mut heap: BinaryHeap<Reverse<(u64, usize)>> =
        live.iter().enumerate().map(|(node, &sym)| Reverse((counts[sym], node))).collect();
    while heap.len() > 1 {
        let Reverse((wa, a)) = heap.pop().unwrap();
        let Reverse((wb, b)) = heap.pop().unwrap();
        let node = parent.len();
        parent.push(usize::MAX);
        parent[a] = node;
        parent[b] = node;
        heap.push(Reverse((wa + wb, node)));
    }
    let mut depth = vec![0u8; parent.len()];
    for node in (0..parent.len()).rev() {
        if parent[node] != usize::MAX {
            depth[node] = depth[parent[node]] + 1;
        }
    }
    for (leaf, &sym) in live.iter().enumerate() {
        lengths[sym] = depth[leaf];
    }
    Ok(lengths)
}

/// Canonical codewords for a length assignment, as in deflate: shorter codes
/// first, ties broken by symbol value.
pub(crate) fn canonical_codes(lengths: &[u8]) -> Vec<u64> {
    let max = lengths.iter().copied().max().unwrap_or(0) as usize;
    let mut bl_count = vec![0u64; max + 1];
    for &l in lengths {
        if l > 0 {
            bl_count[l as usize] += 1;
        }
    }
    let mut next = vec![0u64; max + 2];
    let mut code = 0u64;
    for bits in 1..=max {
        code = (code + bl_count[bits - 1]) << 1;
        next[bits] = code;
    }
    lengths
        .iter()
        .map(|&l| {
            if l == 0 {
                0
            } else {
                let c = next[l as usize];
                next[l as usize] += 1;
                c
            }
        })
        .collect()
}

/// Length-limited optimal code lengths (package-merge). Used by the deflate
/// encoder, whose code lengths are capped at 15 (7 for the code-length
/// alphabet). Fewer than two live symbols are padded to two so the result is
/// always a complete code.
pub(crate) fn limited_code_lengths(freqs: &[u64], max_len: u8) -> Vec<u8> {
    let mut freqs = freqs.to_vec();
    let mut live: Vec<usize> = (0..freqs.len()).filter(|&i| freqs[i] > 0).collect();
    for i in 0..freqs.len() {
        if live.len() >= 2 {
            break;
        }
        if freqs[i] == 0 {
            freqs[i] = 1;
            live.push(i);
        }
    }
    live.sort_by_key(|&i| (freqs[i], i));
    let n = live.len();
    assert!(n <= 1usize << max_len, "too many symbols for length limit");

    #[derive(Clone, Copy)]
    enum Item {
        Leaf(usize),
        Package(usize, usize),
    }
    // levels[l] holds (weight, item) sorted by weight; packages refer to
    // indices in levels[l - 1].
    let leaves: Vec<(u64, Item)> = live.iter().map(|&s| (freqs[s], Item::Leaf(s))).collect();
    let mut levels: Vec<Vec<(u64, Item)>> = vec![leaves.clone()];
    for _ in 1..max_len {
        let prev = levels.last().unwrap();
        let packages: Vec<(u64, Item)> = (0..prev.len() / 2)
            .map(|j| (prev[2 * j].0 + prev[2 * j + 1].0, Item::Package(2 * j, 2 * j + 1)))
            .collect();
        let mut merged = Vec::with_capacity(leaves.len() + packages.len());
        let (mut a, mut b) = (0, 0);
        while a < leaves.len() || b < packages.len() {
            if b >= packages.len() || (a < leaves.len() && leaves[a].0 <= packages[b].0) {
                merged.push(leaves[a]);
                a += 1;
            } else {
                merged.push(packages[b]);
                b += 1;
            }
        }
        levels.push(merged);
    }
    let mut lengths = vec![0u8; freqs.len()];
    let mut stack: Vec<(usize, usize)> = (0..2 * n - 2).map(|i| (levels.len() - 1, i)).collect();
    while let Some((level, idx)) = stack.pop() {
        match levels[level][idx].1 {
            Item::Leaf(s) => lengths[s] += 1,
            Item::Package(x, y) => {
                stack.push((level - 1, x));
                stack.push((level - 1, y));
            }
        }
    }
    lengths
}

impl HuffmanTable {
    fn from_lengths(lengths: [u8; 256], counts: Vec<u64>) -> Self {
        let codes_vec = canonical_codes(&lengths);
        let mut codes = [0u64; 256];
        codes.copy_from_slice(&codes_vec);
        Self { lengths, codes, counts }
    }

    /// Table fitted to the byte histogram of `text`.
    pub fn from_text(text: &[u8]) -> Result<Self> {
        huffman_build(&byte_counts(text))
    }

    pub fn length(&self, symbol: u8) -> Option<u8> {
        match self.lengths[symbol as usize] {
            0 => None,
            l => Some(l),
        }
    }

    /// `(symbol, length)` pairs in canonical order.
    pub fn code_lengths(&self) -> Vec<(u8, u8)> {
        let mut v: Vec<(u8, u8)> = (0..=255u8).filter_map(|s| self.length(s).map(|l| (s, l))).collect();
        v.sort_by_key(|&(s, l)| (l, s));
        v
    }

    /// Codeword of `symbol` as a bit string of '0'/'1'.
    pub fn codeword(&self, symbol: u8) -> Option<String> {
        self.length(symbol)
            .map(|l| (0..l).rev().map(|i| if (self.codes[symbol as usize] >> i) & 1 == 1 { '1' } else { '0' }).collect())
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn kraft_sum(&self) -> f64 {
        self.lengths.iter().filter(|&&l| l > 0).map(|&l| (-(l as f64)).exp2()).sum()
    }

    /// Mean codeword length under the building counts.
    pub fn average_length(&self) -> f64 {
        let total: u64 = self.counts.iter().sum();
        let bits: u64 = self.counts.iter().zip(&self.lengths).map(|(&c, &l)| c * l as u64).sum();
        bits as f64 / total as f64
    }

    /// Size of [`HuffmanTable::serialize`] in bits.
    pub fn serialized_bits(&self) -> u64 {
        let entries = self.lengths.iter().filter(|&&l| l > 0).count() as u64;
        COUNT_BITS + ENTRY_BITS * entries
    }

    /// Canonical code-length list: entry count minus one (8 bits), then per
    /// entry the symbol (8 bits) and its length (6 bits), in canonical order.
    /// One bit per `u8`.
    pub fn serialize(&self) -> Vec<u8> {
        let entries = self.code_lengths();
        let mut bits = Vec::with_capacity(self.serialized_bits() as usize);
        push_bits(&mut bits, (entries.len() - 1) as u64, COUNT_BITS as u32);
        for (s, l) in entries {
            push_bits(&mut bits, s as u64, 8);
            push_bits(&mut bits, l as u64, 6);
        }
        bits
    }

    /// Parses a serialized table from the front of `bits`, returning the
    /// table and the number of bits consumed.
    pub fn deserialize(bits: &[u8]) -> Result<(Self, usize)> {
        let mut pos = 0;
        let mut take = |n: u32| -> Result<u64> {
            let slice = bits.get(pos..pos + n as usize).ok_or_else(|| Error::Corrupt("truncated huffman table".into()))?;
            pos += n as usize;
            Ok(slice.iter().fold(0u64, |acc, &b| (acc << 1) | (b & 1) as u64))
        };
        let entries = take(COUNT_BITS as u32)? as usize + 1;
        let mut lengths = [0u8; 256];
        for _ in 0..entries {
            let s = take(8)? as usize;
            let l = take(6)? as u8;
            if l == 0 || lengths[s] != 0 {
                return Err(Error::Corrupt("bad huffman table entry".into()));
            }
            lengths[s] = l;
        }
        let table = Self::from_lengths(lengths, Vec::new());
        if table.kraft_sum() > 1.0 + 1e-12 {
            return Err(Error::Corrupt("huffman table violates Kraft inequality".into()));
        }
        Ok((table, pos))
    }

    /// Encodes `text`, one bit per `u8`.
    pub fn encode(&self, text: &[u8]) -> Result<Vec<u8>> {
        let mut bits = Vec::new();
        for &b in text {
            let l = self.length(b).ok_or(Error::MissingSymbol(b))?;
            push_bits(&mut bits, self.codes[b as usize], l as u32);
        }
        Ok(bits)
    }

    /// Decodes exactly `symbols` symbols from the front of `bits`.
    pub fn decode(&self, bits: &[u8], symbols: usize) -> Result<Vec<u8>> {
        let max = self.lengths.iter().copied().max().unwrap_or(0) as usize;
        // (length, code) -> symbol
        let mut lookup = std::collections::HashMap::new();
        for s in 0..256 {
            if self.lengths[s] > 0 {
                lookup.insert((self.lengths[s], self.codes[s]), s as u8);
            }
        }
        let mut out = Vec::with_capacity(symbols);
        let mut pos = 0;
        while out.len() < symbols {
            let mut code = 0u64;
            let mut found = None;
            for len in 1..=max {
                let bit = *bits.get(pos).ok_or_else(|| Error::Corrupt("huffman stream truncated".into()))?;
                pos += 1;
                code = (code << 1) | (bit & 1) as u64;
                if let Some(&s) = lookup.get(&(len as u8, code)) {
                    found = Some(s);
                    break;
                }
            }
            out.push(found.ok_or_else(|| Error::Corrupt("invalid huffman codeword".into()))?);
        }
        Ok(out)
    }
}

pub(crate) fn push_bits(bits: &mut Vec<u8>, value: u64, n: u32) {
    bits.extend((0..n).rev().map(|i| ((value >> i) & 1) as u8));
}

pub fn byte_counts(text: &[u8]) -> [u64; 256] {
    let mut counts = [0u64; 256];
    for &b in text {
        counts[b as usize] += 1;
    }
    counts
}

/// Bits needed to code `text` with `table`, optionally plus the table itself.
pub fn huffman_measure(text: &[u8], table: &HuffmanTable, include_table: bool) -> Result<ComplexityMeasurement> {
    let mut bits = 0u64;
    for &b in text {
        bits += table.length(b).ok_or(Error::MissingSymbol(b))? as u64;
    }
    if include_table {
        bits += table.serialized_bits();
    }
    Ok(ComplexityMeasurement { compressor: CompressorId::Huffman, input_chars: text.len(), output_bits: bits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn counts_of(pairs: &[(u8, u64)]) -> Vec<u64> {
        let mut c = vec![0u64; 256];
        for &(s, n) in pairs {
            c[s as usize] = n;
        }
        c
    }

    fn entropy(counts: &[u64]) -> f64 {
        let total: u64 = counts.iter().sum();
        counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / total as f64;
                -p * p.log2()
            })
            .sum()
    }

    /// Enumerates every length vector with lengths in 1..=n-1 satisfying
    /// Kraft; any such vector is realizable by a prefix code.
    fn brute_force_min_cost(weights: &[u64]) -> u64 {
        let n = weights.len();
        let mut best = u64::MAX;
        let mut lens = vec![1u32; n];
        loop {
            let kraft: f64 = lens.iter().map(|&l| (-(l as f64)).exp2()).sum();
            if kraft <= 1.0 + 1e-12 {
                best = best.min(lens.iter().zip(weights).map(|(&l, &w)| l as u64 * w).sum());
            }
            let mut i = 0;
            loop {
                if i == n {
                    return best;
                }
                lens[i] += 1;
                if lens[i] < n as u32 {
                    break;
                }
                lens[i] = 1;
                i += 1;
            }
        }
    }

    #[test]
    fn two_equal_symbols_get_one_bit_each() {
        let t = huffman_build(&counts_of(&[(b'a', 1), (b'b', 1)])).unwrap();
        assert_eq!((t.length(b'a'), t.length(b'b')), (Some(1), Some(1)));
        assert_eq!(t.codeword(b'a').unwrap(), "0");
    }

    #[test]
    fn single_symbol_gets_one_bit() {
        let t = huffman_build(&counts_of(&[(b'a', 5)])).unwrap();
        assert_eq!(t.length(b'a'), Some(1));
        assert_eq!(huffman_measure(b"aaaaa", &t, false).unwrap().output_bits, 5);
    }

    #[test]
    fn dyadic_source_matches_brute_force() {
        let counts = counts_of(&[(b'a', 4), (b'b', 2), (b'c', 1), (b'd', 1)]);
        let t = huffman_build(&counts).unwrap();
        let lens: Vec<_> = b"abcd".iter().map(|&s| t.length(s).unwrap()).collect();
        assert_eq!(lens, vec![1, 2, 3, 3]);
        assert_eq!(brute_force_min_cost(&[4, 2, 1, 1]), 14);
        assert!((t.average_length() - 1.75).abs() < 1e-12);
        assert!((entropy(&counts) - 1.75).abs() < 1e-12);
    }

    #[test]
    fn matches_brute_force_on_small_alphabets() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.random_range(2..=5);
            let w: Vec<u64> = (0..n).map(|_| rng.random_range(1..50)).collect();
            let t = huffman_build(&w).unwrap();
            let cost: u64 = w.iter().enumerate().map(|(s, &c)| c * t.length(s as u8).unwrap() as u64).sum();
            assert_eq!(cost, brute_force_min_cost(&w), "weights {w:?}");
        }
    }

    #[test]
    fn empty_counts_error() {
        assert!(huffman_build(&[0u64; 256]).is_err());
        assert!(huffman_build(&[]).is_err());
    }

    #[test]
    fn measure_examples() {
        let t = huffman_build(&counts_of(&[(b'a', 1), (b'b', 1)])).unwrap();
        assert_eq!(huffman_measure(b"aaaa", &t, false).unwrap().output_bits, 4);
        assert_eq!(huffman_measure(b"", &t, false).unwrap().output_bits, 0);
        assert_eq!(huffman_measure(b"", &t, true).unwrap().output_bits, 8 + 2 * 14);
        assert!(matches!(huffman_measure(b"c", &t, false), Err(Error::MissingSymbol(b'c'))));
    }

    #[test]
    fn english_sample_is_within_one_bit_of_entropy() {
        let text = crate::corpus::synth::generate_text(crate::corpus::synth::Genre::Novel, 5, 10_000);
        let bytes = &text.as_bytes()[..10_000];
        let counts = byte_counts(bytes);
        let h0 = entropy(&counts);
        let t = huffman_build(&counts).unwrap();
        let rate = huffman_measure(bytes, &t, false).unwrap().output_bits as f64 / 10_000.0;
        assert!(h0 <= rate && rate < h0 + 1.0, "{h0} {rate}");
    }

    #[test]
    fn serialize_round_trip_and_coding() {
        let text = b"it was the best of times, it was the worst of times";
        let t = HuffmanTable::from_text(text).unwrap();
        let ser = t.serialize();
        assert_eq!(ser.len() as u64, t.serialized_bits());
        let (back, used) = HuffmanTable::deserialize(&ser).unwrap();
        assert_eq!(used, ser.len());
        assert_eq!(back.code_lengths(), t.code_lengths());
        let bits = t.encode(text).unwrap();
        assert_eq!(back.decode(&bits, text.len()).unwrap(), text);
    }

    #[test]
    fn package_merge_respects_limit_and_matches_unlimited_when_loose() {
        // Fibonacci weights force a deep tree.
        let mut fib = vec![1u64, 1];
        while fib.len() < 20 {
            let n = fib.len();
            fib.push(fib[n - 1] + fib[n - 2]);
        }
        let lens = limited_code_lengths(&fib, 7);
        assert!(lens.iter().all(|&l| l <= 7 && l > 0));
        let kraft: f64 = lens.iter().map(|&l| (-(l as f64)).exp2()).sum();
        assert!((kraft - 1.0).abs() < 1e-12);

        let w = [10u64, 7, 3, 3, 1, 0, 5];
        let limited = limited_code_lengths(&w, 15);
        let free = code_lengths(&w).unwrap();
        let cost = |l: &[u8]| -> u64 { l.iter().zip(&w).map(|(&a, &b)| a as u64 * b).sum() };
        assert_eq!(cost(&limited), cost(&free));
        assert_eq!(limited[5], 0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn kraft_equality_and_entropy_bounds(weights in proptest::collection::vec(1u64..10_000, 2..=32)) {
                let t = huffman_build(&weights).unwrap();
                prop_assert!((t.kraft_sum() - 1.0).abs() < 1e-12);
                let h = entropy(&weights);
                let l = t.average_length();
                prop_assert!(h <= l + 1e-12 && l < h + 1.0);
            }
        }
    }
}
