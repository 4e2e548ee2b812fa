//! An RFC 1951 deflate encoder with preset-dictionary support, and the
//! matching inflater.
//!
//! The encoder is LZ77 over a 32 KiB window (hash chains, one-step lazy
//! matching) followed by per-block selection of the cheapest of stored,
//! fixed-Huffman, and dynamic-Huffman coding. A preset dictionary is placed in
//! the window ahead of the input so back-references may reach into it; the
//! dictionary itself is not emitted.

use super::huffman::{canonical_codes, limited_code_lengths};
use super::{ComplexityMeasurement, CompressorId};
use crate::{Error, Result};

pub const WINDOW_SIZE: usize = 32 * 1024;
const MIN_MATCH: usize = 3;
const MAX_MATCH: usize = 258;
const HASH_BITS: u32 = 15;
const MAX_CHAIN: usize = 256;
const TOKENS_PER_BLOCK: usize = 16 * 1024;
const MAX_STORED: usize = 65_535;

const LENGTH_BASE: [u16; 29] = [
    3, 4, 5, 6, 7, 8, 9, 10, 11, 13, 15, 17, 19, 23, 27, 31, 35, 43, 51, 59, 67, 83, 99, 115, 131, 163, 195, 227, 258,
];
const LENGTH_EXTRA: [u8; 29] = [0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3, 4, 4, 4, 4, 5, 5, 5, 5, 0];
const DIST_BASE: [u16; 30] = [
    1, 2, 3, 4, 5, 7, 9, 13, 17, 25, 33, 49, 65, 97, 129, 193, 257, 385, 513, 769, 1025, 1537, 2049, 3073, 4097, 6145,
    8193, 12289, 16385, 24577,
];
const DIST_EXTRA: [u8; 30] = [0, 0, 0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6, 7, 7, 8, 8, 9, 9, 10, 10, 11, 11, 12, 12, 13, 13];
const CL_ORDER: [usize; 19] = [16, 17, 18, 0, 8, 7, 9, 6, 10, 5, 11, 4, 12, 3, 13, 2, 14, 1, 15];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token {
    Literal(u8),
    Match { len: u16, dist: u16 },
}

fn length_symbol(len: u16) -> (usize, u16) {
    let i = LENGTH_BASE.partition_point(|&b| b <= len) - 1;
    (257 + i, len - LENGTH_BASE[i])
}

fn dist_symbol(dist: u16) -> (usize, u16) {
    let i = DIST_BASE.partition_point(|&b| b <= dist) - 1;
    (i, dist - DIST_BASE[i])
}

/// Truncates a preset dictionary to its final window's worth of bytes.
pub fn window_tail(dictionary: &[u8]) -> &[u8] {
    &dictionary[dictionary.len().saturating_sub(WINDOW_SIZE)..]
}

struct Matcher<'a> {
    buf: &'a [u8],
    head: Vec<i32>,
    prev: Vec<i32>,
}

impl<'a> Matcher<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Self { buf, head: vec![-1; 1 << HASH_BITS], prev: vec![-1; buf.len()] }
    }

    fn hash(&self, pos: usize) -> Option<usize> {
        let b = self.buf.get(pos..pos + 3)?;
        let h = (b[0] as u32) << 10 ^ (b[1] as u32) << 5 ^ b[2] as u32;
        Some((h.wrapping_mul(0x9E37_79B1) >> (32 - HASH_BITS)) as usize)
    }

    fn insert(&mut self, pos: usize) {
        if let Some(h) = self.hash(pos) {
            self.prev[pos] = self.head[h];
            self.head[h] = pos as i32;
        }
    }

    /// Longest match for `pos` among already-inserted positions.
    fn longest(&self, pos: usize) -> (usize, usize) {
        let Some(h) = self.hash(pos) else { return (0, 0) };
        let max_len = MAX_MATCH.min(self.buf.len() - pos);
        let mut best = (0, 0);
        let mut cand = self.head[h];
        let mut chain = 0;
        while cand >= 0 && chain < MAX_CHAIN {
            let c = cand as usize;
            let dist = pos - c;
            if dist > WINDOW_SIZE {
                break;
            }
            if self.buf[c + best.0.min(max_len - 1)] == self.buf[pos + best.0.min(max_len - 1)] {
                let len = self.buf[c..].iter().zip(&self.buf[pos..pos + max_len]).take_while(|(a, b)| a == b).count();
                if len > best.0 {
                    best = (len, dist);
                    if len == max_len {
                        break;
                    }
                }
            }
            cand = self.prev[c];
            chain += 1;
        }
        if best.0 >= MIN_MATCH {
            best
        } else {
            (0, 0)
        }
    }
}

fn tokenize(dictionary: &[u8], data: &[u8]) -> Vec<Token> {
    let mut buf = Vec::with_capacity(dictionary.len() + data.len());
    buf.extend_from_slice(dictionary);
    buf.extend_from_slice(data);
    let mut m = Matcher::new(&buf);
    for p in 0..dictionary.len() {
        m.insert(p);
    }
    let mut tokens = Vec::new();
    let mut i = dictionary.len();
    while i < buf.len() {
        let (len, dist) = m.longest(i);
        m.insert(i);
        if (MIN_MATCH..MAX_MATCH).contains(&len) && i + 1 < buf.len() {
            let (next_len, _) = m.longest(i + 1);
            if next_len > len {
                tokens.push(Token::Literal(buf[i]));
                i += 1;
                continue;
            }
        }
        if len >= MIN_MATCH {
            tokens.push(Token::Match { len: len as u16, dist: dist as u16 });
            for j in i + 1..i + len {
                m.insert(j);
            }
            i += len;
        } else {
            tokens.push(Token::Literal(buf[i]));
            i += 1;
        }
    }
    tokens
}

/// LSB-first bit packer.
#[derive(Default)]
struct BitWriter {
    out: Vec<u8>,
    acc: u64,
    n: u32,
}

impl BitWriter {
    fn bits(&self) -> u64 {
        self.out.len() as u64 * 8 + self.n as u64
    }

    fn put(&mut self, value: u64, n: u32) {
        debug_assert!(n <= 32);
        self.acc |= (value & ((1u64 << n) - 1)) << self.n;
        self.n += n;
        while self.n >= 8 {
            self.out.push(self.acc as u8);
            self.acc >>= 8;
            self.n -= 8;
        }
    }

    /// Writes a Huffman code, most significant code bit first.
    fn put_code(&mut self, code: u64, len: u8) {
        let mut rev = 0u64;
        for i in 0..len {
            rev |= ((code >> i) & 1) << (len - 1 - i);
        }
        self.put(rev, len as u32);
    }

    fn align(&mut self) {
        if self.n > 0 {
            self.put(0, 8 - self.n);
        }
    }

    fn finish(mut self) -> Vec<u8> {
        self.align();
        self.out
    }
}

fn fixed_litlen_lengths() -> Vec<u8> {
    (0..288).map(|s| match s {
        0..=143 => 8,
        144..=255 => 9,
        256..=279 => 7,
        _ => 8,
    }).collect()
}

fn fixed_dist_lengths() -> Vec<u8> {
    vec![5; 30]
}

/// Run-length coded code-length sequence: (symbol, extra value).
fn rle_lengths(lengths: &[u8]) -> Vec<(u8, u8)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < lengths.len() {
        let l = lengths[i];
        let mut run = lengths[i..].iter().take_while(|&&x| x == l).count();
        i += run;
        if l == 0 {
            while run >= 11 {
                let r = run.min(138);
                out.push((18, (r - 11) as u8));
                run -= r;
            }
            if run >= 3 {
                out.push((17, (run - 3) as u8));
                run = 0;
            }
        } else {
            out.push((l, 0));
            run -= 1;
            while run >= 3 {
                let r = run.min(6);
                out.push((16, (r - 3) as u8));
                run -= r;
            }
        }
        out.extend(std::iter::repeat_n((l, 0), run));
    }
    out
}

struct DynamicHeader {
    litlen: Vec<u8>,
    dist: Vec<u8>,
    cl: Vec<u8>,
    rle: Vec<(u8, u8)>,
    hlit: usize,
    hdist: usize,
    hclen: usize,
}

impl DynamicHeader {
    fn new(lit_freq: &[u64], dist_freq: &[u64]) -> Self {
        let litlen = limited_code_lengths(lit_freq, 15);
        let dist = limited_code_lengths(dist_freq, 15);
        let hlit = 257.max(litlen.iter().rposition(|&l| l > 0).unwrap_or(0) + 1);
        let hdist = 1.max(dist.iter().rposition(|&l| l > 0).unwrap_or(0) + 1);
        let mut all = litlen[..hlit].to_vec();
        all.extend_from_slice(&dist[..hdist]);
        let rle = rle_lengths(&all);
        let mut cl_freq = [0u64; 19];
        for &(s, _) in &rle {
            cl_freq[s as usize] += 1;
        }
        let cl = limited_code_lengths(&cl_freq, 7);
        let hclen = 4.max(CL_ORDER.iter().rposition(|&s| cl[s] > 0).unwrap_or(0) + 1);
        Self { litlen, dist, cl, rle, hlit, hdist, hclen }
    }

    fn header_bits(&self) -> u64 {
        let mut bits = 5 + 5 + 4 + 3 * self.hclen as u64;
        for &(s, _) in &self.rle {
            bits += self.cl[s as usize] as u64 + extra_cl_bits(s) as u64;
        }
        bits
    }

    fn write(&self, w: &mut BitWriter) {
        w.put((self.hlit - 257) as u64, 5);
        w.put((self.hdist - 1) as u64, 5);
        w.put((self.hclen - 4) as u64, 4);
        for &s in &CL_ORDER[..self.hclen] {
            w.put(self.cl[s] as u64, 3);
        }
        let codes = canonical_codes(&self.cl);
        for &(s, extra) in &self.rle {
            w.put_code(codes[s as usize], self.cl[s as usize]);
            w.put(extra as u64, extra_cl_bits(s));
        }
    }
}

fn extra_cl_bits(symbol: u8) -> u32 {
    match symbol {
        16 => 2,
        17 => 3,
        18 => 7,
        _ => 0,
    }
}

fn symbol_cost(tokens: &[Token], litlen: &[u8], dist: &[u8]) -> u64 {
    let mut bits = litlen[256] as u64;
    for t in tokens {
        match *t {
            Token::Literal(b) => bits += litlen[b as usize] as u64,
            Token::Match { len, dist: d } => {
                let (ls, _) = length_symbol(len);
                let (ds, _) = dist_symbol(d);
                bits += (litlen[ls] + LENGTH_EXTRA[ls - 257]) as u64 + (dist[ds] + DIST_EXTRA[ds]) as u64;
            }
        }
    }
    bits
}

fn write_symbols(w: &mut BitWriter, tokens: &[Token], litlen: &[u8], dist: &[u8]) {
    let lcodes = canonical_codes(litlen);
    let dcodes = canonical_codes(dist);
    for t in tokens {
        match *t {
            Token::Literal(b) => w.put_code(lcodes[b as usize], litlen[b as usize]),
            Token::Match { len, dist: d } => {
                let (ls, lx) = length_symbol(len);
                w.put_code(lcodes[ls], litlen[ls]);
                w.put(lx as u64, LENGTH_EXTRA[ls - 257] as u32);
                let (ds, dx) = dist_symbol(d);
                w.put_code(dcodes[ds], dist[ds]);
                w.put(dx as u64, DIST_EXTRA[ds] as u32);
            }
        }
    }
    w.put_code(lcodes[256], litlen[256]);
}

fn stored_cost(start_bit: u64, raw_len: usize) -> u64 {
    let blocks = raw_len.div_ceil(MAX_STORED).max(1) as u64;
    let first_pad = (8 - (start_bit + 3) % 8) % 8;
    let later_pad = 5;
    blocks * (3 + 32) + first_pad + (blocks - 1) * later_pad + 8 * raw_len as u64
}

fn write_stored(w: &mut BitWriter, raw: &[u8], last: bool) {
    let chunks: Vec<&[u8]> = if raw.is_empty() { vec![raw] } else { raw.chunks(MAX_STORED).collect() };
    let n = chunks.len();
    for (i, chunk) in chunks.into_iter().enumerate() {
        w.put((last && i + 1 == n) as u64, 1);
        w.put(0, 2);
        w.align();
        let len = chunk.len() as u16;
        w.put(len as u64, 16);
        w.put(!len as u64, 16);
        for &b in chunk {
            w.put(b as u64, 8);
        }
    }
}

/// Compresses `data` to a raw deflate stream. With a dictionary, matches may
/// refer into its final [`WINDOW_SIZE`] bytes.
pub fn deflate_compress(data: &[u8], dictionary: Option<&[u8]>) -> Vec<u8> {
    let dictionary = window_tail(dictionary.unwrap_or(&[]));
    let tokens = tokenize(dictionary, data);
    let mut w = BitWriter::default();
    let chunks: Vec<&[Token]> = if tokens.is_empty() { vec![&tokens[..]] } else { tokens.chunks(TOKENS_PER_BLOCK).collect() };
    let n_chunks = chunks.len();
    let mut raw_pos = 0usize;
    let (fixed_lit, fixed_dist) = (fixed_litlen_lengths(), fixed_dist_lengths());
    for (ci, chunk) in chunks.into_iter().enumerate() {
        let last = ci + 1 == n_chunks;
        let raw_len: usize = chunk
            .iter()
            .map(|t| match t {
                Token::Literal(_) => 1,
                Token::Match { len, .. } => *len as usize,
            })
            .sum();
        let raw = &data[raw_pos..raw_pos + raw_len];
        raw_pos += raw_len;

        let mut lit_freq = [0u64; 286];
        let mut dist_freq = [0u64; 30];
        lit_freq[256] = 1;
        for t in chunk {
            match *t {
                Token::Literal(b) => lit_freq[b as usize] += 1,
                Token::Match { len, dist } => {
                    lit_freq[length_symbol(len).0] += 1;
                    dist_freq[dist_symbol(dist).0] += 1;
                }
            }
        }
        let dynamic = DynamicHeader::new(&lit_freq, &dist_freq);
        let dyn_cost = 3 + dynamic.header_bits() + symbol_cost(chunk, &dynamic.litlen, &dynamic.dist);
        let fixed_cost = 3 + symbol_cost(chunk, &fixed_lit, &fixed_dist);
        let store_cost = stored_cost(w.bits(), raw_len);

        if store_cost < dyn_cost.min(fixed_cost) {
            write_stored(&mut w, raw, last);
        } else if fixed_cost <= dyn_cost {
            w.put(last as u64, 1);
            w.put(1, 2);
            write_symbols(&mut w, chunk, &fixed_lit, &fixed_dist);
        } else {
            w.put(last as u64, 1);
            w.put(2, 2);
            dynamic.write(&mut w);
            write_symbols(&mut w, chunk, &dynamic.litlen, &dynamic.dist);
        }
    }
    w.finish()
}

struct BitReader<'a> {
    data: &'a [u8],
    pos: usize,
    bit: u32,
}

impl<'a> BitReader<'a> {
    fn new(data: &'a [u8]) -> Self {
        Self { data, pos: 0, bit: 0 }
    }

    fn bit(&mut self) -> Result<u32> {
        let byte = *self.data.get(self.pos).ok_or_else(|| Error::Corrupt("deflate stream truncated".into()))?;
        let b = (byte >> self.bit) & 1;
        self.bit += 1;
        if self.bit == 8 {
            self.bit = 0;
            self.pos += 1;
        }
        Ok(b as u32)
    }

    fn bits(&mut self, n: u32) -> Result<u32> {
        let mut v = 0;
        for i in 0..n {
            v |= self.bit()? << i;
        }
        Ok(v)
    }

    fn align(&mut self) {
        if self.bit != 0 {
            self.bit = 0;
            self.pos += 1;
        }
    }
}

/// Canonical decoding table: codes per length and symbols in code order.
struct Decoder {
    count: [u16; 16],
    symbols: Vec<u16>,
}

impl Decoder {
    fn new(lengths: &[u8]) -> Result<Self> {
        let mut count = [0u16; 16];
        for &l in lengths {
            count[l as usize] += 1;
        }
        count[0] = 0;
        let mut left: i32 = 1;
        for &c in &count[1..] {
            left = (left << 1) - c as i32;
            if left < 0 {
                return Err(Error::Corrupt("over-subscribed huffman code".into()));
            }
        }
        let mut offs = [0u16; 16];
        for l in 1..15 {
            offs[l + 1] = offs[l] + count[l];
        }
        let mut symbols = vec![0u16; lengths.len()];
        for (s, &l) in lengths.iter().enumerate() {
            if l > 0 {
                symbols[offs[l as usize] as usize] = s as u16;
                offs[l as usize] += 1;
            }
        }
        Ok(Self { count, symbols })
    }

    fn decode(&self, r: &mut BitReader) -> Result<u16> {
        let (mut code, mut first, mut index) = (0i32, 0i32, 0i32);
        for len in 1..16 {
            code |= r.bit()? as i32;
            let count = self.count[len] as i32;
            if code - count < first {
                return Ok(self.symbols[(index + (code - first)) as usize]);
            }
            index += count;
            first += count;
            first <<= 1;
            code <<= 1;
        }
        Err(Error::Corrupt("invalid huffman code".into()))
    }
}

/// Decodes a raw deflate stream. `dictionary` must be the one used for
/// compression (only its final window matters).
pub fn inflate(stream: &[u8], dictionary: Option<&[u8]>) -> Result<Vec<u8>> {
    let dictionary = window_tail(dictionary.unwrap_or(&[]));
    let mut out = dictionary.to_vec();
    let mut r = BitReader::new(stream);
    loop {
        let last = r.bit()? == 1;
        match r.bits(2)? {
            0 => {
                r.align();
                let hdr = stream.get(r.pos..r.pos + 4).ok_or_else(|| Error::Corrupt("truncated stored header".into()))?;
                let len = u16::from_le_bytes([hdr[0], hdr[1]]);
                let nlen = u16::from_le_bytes([hdr[2], hdr[3]]);
                if len != !nlen {
                    return Err(Error::Corrupt("stored length check failed".into()));
                }
                r.pos += 4;
                let body = stream.get(r.pos..r.pos + len as usize).ok_or_else(|| Error::Corrupt("truncated stored block".into()))?;
                out.extend_from_slice(body);
                r.pos += len as usize;
            }
            1 => inflate_block(&mut r, &mut out, &Decoder::new(&fixed_litlen_lengths())?, &Decoder::new(&fixed_dist_lengths())?)?,
            2 => {
                let hlit = r.bits(5)? as usize + 257;
                let hdist = r.bits(5)? as usize + 1;
                let hclen = r.bits(4)? as usize + 4;
                let mut cl = [0u8; 19];
                for &s in &CL_ORDER[..hclen] {
                    cl[s] = r.bits(3)? as u8;
                }
                let cl_dec = Decoder::new(&cl)?;
                let mut lengths = Vec::with_capacity(hlit + hdist);
                while lengths.len() < hlit + hdist {
                    let sym = cl_dec.decode(&mut r)?;
                    match sym {
                        0..=15 => lengths.push(sym as u8),
                        16 => {
                            let prev = *lengths.last().ok_or_else(|| Error::Corrupt("repeat with no previous length".into()))?;
                            let n = 3 + r.bits(2)?;
                            lengths.extend(std::iter::repeat_n(prev, n as usize));
                        }
                        17 => {
                            let n = 3 + r.bits(3)?;
                            lengths.extend(std::iter::repeat_n(0, n as usize));
                        }
                        _ => {
                            let n = 11 + r.bits(7)?;
                            lengths.extend(std::iter::repeat_n(0, n as usize));
                        }
                    }
                }
                if lengths.len() != hlit + hdist {
                    return Err(Error::Corrupt("code lengths overrun".into()));
                }
                let lit = Decoder::new(&lengths[..hlit])?;
                let dist = Decoder::new(&lengths[hlit..])?;
                inflate_block(&mut r, &mut out, &lit, &dist)?;
            }
            _ => return Err(Error::Corrupt("reserved block type".into())),
        }
        if last {
            break;
        }
    }
    out.drain(..dictionary.len());
    Ok(out)
}

fn inflate_block(r: &mut BitReader, out: &mut Vec<u8>, lit: &Decoder, dist: &Decoder) -> Result<()> {
    loop {
        let sym = lit.decode(r)?;
        match sym {
            0..=255 => out.push(sym as u8),
            256 => return Ok(()),
            257..=285 => {
                let i = (sym - 257) as usize;
                let len = LENGTH_BASE[i] as usize + r.bits(LENGTH_EXTRA[i] as u32)? as usize;
                let ds = dist.decode(r)? as usize;
                if ds >= 30 {
                    return Err(Error::Corrupt("bad distance symbol".into()));
                }
                let d = DIST_BASE[ds] as usize + r.bits(DIST_EXTRA[ds] as u32)? as usize;
                if d > out.len() {
                    return Err(Error::Corrupt("distance beyond window".into()));
                }
                let start = out.len() - d;
                for k in 0..len {
                    out.push(out[start + k]);
                }
            }
            _ => return Err(Error::Corrupt("bad literal/length symbol".into())),
        }
    }
}

/// Compressed size of `bytes` in bits (whole bytes of the raw stream).
pub fn deflate_measure(bytes: &[u8], dictionary: Option<&[u8]>) -> ComplexityMeasurement {
    ComplexityMeasurement {
        compressor: CompressorId::Deflate,
        input_chars: bytes.len(),
        output_bits: deflate_compress(bytes, dictionary).len() as u64 * 8,
    }
}
