//! Regular Gallager LDPC codes with sum-product decoding.
//!
//! LLR convention: positive means bit 0 is more likely. Codewords are
//! systematic: the first `k` bits are the message.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;

use crate::{Error, Result};

pub const LLR_CLIP: f64 = 40.0;
pub const DEFAULT_MAX_ITERATIONS: usize = 50;
pub const DEFAULT_LENGTH: usize = 1024;
pub const COLUMN_WEIGHT: usize = 3;
/// Check-node degrees from highest to lowest rate; row weight 6 is the
/// rate-1/2 member.
pub const RATE_LADDER: [usize; 6] = [48, 24, 12, 8, 6, 4];

const CYCLE_FIX_ATTEMPTS: usize = 4000;

#[derive(Debug, Clone)]
pub struct LdpcCode {
    n: usize,
    k: usize,
    m: usize,
    max_iterations: usize,
    // check -> variables, flattened; edge ids are indices into `edge_var`
    check_start: Vec<usize>,
    edge_var: Vec<usize>,
    // variable -> edge ids
    var_start: Vec<usize>,
    var_edges: Vec<usize>,
    // parity bit i = <parity_rows[i], message> over GF(2)
    parity_rows: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LdpcDecoded {
    pub message: Vec<u8>,
    pub codeword: Vec<u8>,
    pub converged: bool,
    pub iterations: usize,
}

fn words(bits: usize) -> usize {
    bits.div_ceil(64)
}

fn get_bit(row: &[u64], i: usize) -> bool {
    row[i / 64] >> (i % 64) & 1 == 1
}

impl LdpcCode {
    /// Gallager ensemble: `dv` bands, each a seeded column permutation cut
    /// into `ceil(n / dc)` checks. Short cycles of length 4 are removed by
    /// swapping assignments within a band where possible.
    pub fn regular(n: usize, dv: usize, dc: usize, seed: u64) -> Result<Self> {
        if dv < 2 || dc < 2 || n < dc {
            return Err(Error::InvalidParameter(format!("ldpc({n}, {dv}, {dc})")));
        }
        let per_band = n.div_ceil(dc);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // row_of[band][col] = row within the band
        let mut row_of: Vec<Vec<usize>> = (0..dv)
            .map(|band| {
                let mut perm: Vec<usize> = (0..n).collect();
                if band > 0 {
                    perm.shuffle(&mut rng);
                }
                let mut rows = vec![0; n];
                for (slot, &col) in perm.iter().enumerate() {
                    rows[col] = slot * per_band / n;
                }
                rows
            })
            .collect();
        remove_four_cycles(&mut row_of, per_band, &mut rng);
        let edges: Vec<(usize, usize)> = row_of
            .iter()
            .enumerate()
            .flat_map(|(band, rows)| rows.iter().enumerate().map(move |(col, &r)| (band * per_band + r, col)))
            .collect();
        Self::from_edges(dv * per_band, n, &edges)
    }

    /// (3, 6)-regular code of the default length.
    pub fn rate_half(seed: u64) -> Result<Self> {
        Self::regular(DEFAULT_LENGTH, COLUMN_WEIGHT, 6, seed)
    }

    /// Builds a code from the nonzero entries of H. Columns are reordered so
    /// that the information bits come first; the stored H reflects that
    /// order, which makes `from_edges(to_edges())` reproduce the code.
    pub fn from_edges(m: usize, n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidParameter("empty parity-check matrix".into()));
        }
        let w = words(n);
        let mut dense = vec![vec![0u64; w]; m];
        for &(r, c) in edges {
            if r >= m || c >= n {
                return Err(Error::InvalidParameter(format!("entry ({r}, {c}) outside {m}x{n}")));
            }
            dense[r][c / 64] ^= 1 << (c % 64);
        }
        // Reduced row echelon form, scanning columns from the right so that
        // trailing independent columns become the parity positions.
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in (0..n).rev() {
            let Some(found) = (rank..m).find(|&r| get_bit(&dense[r], col)) else { continue };
            dense.swap(rank, found);
            let pivot_row = dense[rank].clone();
            for (r, row) in dense.iter_mut().enumerate() {
                if r != rank && get_bit(row, col) {
                    row.iter_mut().zip(&pivot_row).for_each(|(a, b)| *a ^= b);
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == m {
                break;
            }
        }
        let k = n - rank;
        if k == 0 {
            return Err(Error::InvalidParameter("parity-check matrix has full column rank".into()));
        }
        let mut is_pivot = vec![false; n];
        pivots.iter().for_each(|&c| is_pivot[c] = true);
        let mut order: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut pivot_sorted = pivots.clone();
        pivot_sorted.sort_unstable();
        order.extend(&pivot_sorted);
        let mut new_index = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        // parity bit at new position k + j belongs to pivot_sorted[j]
        let row_of_pivot: std::collections::HashMap<usize, usize> =
            pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
        let parity_rows = pivot_sorted
            .iter()
            .map(|c| {
                let row = &dense[row_of_pivot[c]];
                let mut packed = vec![0u64; words(k)];
                for (t, &old) in order[..k].iter().enumerate() {
                    if get_bit(row, old) {
                        packed[t / 64] |= 1 << (t % 64);
                    }
                }
                packed
            })
            .collect();

        let mut checks: Vec<Vec<usize>> = vec![Vec::new(); m];
        for &(r, c) in edges {
            checks[r].push(new_index[c]);
        }
        let mut check_start = vec![0];
        let mut edge_var = Vec::with_capacity(edges.len());
        for row in &mut checks {
            row.sort_unstable();
            row.dedup();
            edge_var.extend_from_slice(row);
            check_start.push(edge_var.len());
        }
        let mut per_var: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (e, &v) in edge_var.iter().enumerate() {
            per_var[v].push(e);
        }
        let mut var_start = vec![0];
        let mut var_edges = Vec::with_capacity(edge_var.len());
        for list in per_var {
            var_edges.extend(list);
            var_start.push(var_edges.len());
        }
        Ok(Self {
            n,
            k,
            m,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            check_start,
            edge_var,
            var_start,
            var_edges,
            parity_rows,
        })
    }

    pub fn with_max_iterations(mut self, iterations: usize) -> Self {
        self.max_iterations = iterations.max(1);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of check rows (some may be linearly dependent).
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn max_iterations(&self) -> usize {
        self.max_iterations
    }

    pub fn check(&self, r: usize) -> &[usize] {
        &self.edge_var[self.check_start[r]..self.check_start[r + 1]]
    }

    pub fn column_weight(&self, c: usize) -> usize {
        self.var_start[c + 1] - self.var_start[c]
    }

    /// Nonzero entries of H as (row, col), row-major.
    pub fn to_edges(&self) -> Vec<(usize, usize)> {
        (0..self.m).flat_map(|r| self.check(r).iter().map(move |&c| (r, c))).collect()
    }

    pub fn syndrome_ok(&self, bits: &[u8]) -> bool {
        bits.len() == self.n && (0..self.m).all(|r| self.check(r).iter().fold(0, |acc, &c| acc ^ bits[c]) == 0)
    }

    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        if message.len() != self.k {
            return Err(Error::WrongLength { expected: self.k, actual: message.len() });
        }
        let mut packed = vec![0u64; words(self.k)];
        for (i, &b) in message.iter().enumerate() {
            if b & 1 == 1 {
                packed[i / 64] |= 1 << (i % 64);
            }
        }
        let mut out = message.iter().map(|b| b & 1).collect::<Vec<u8>>();
        for row in &self.parity_rows {
            let ones: u32 = row.iter().zip(&packed).map(|(a, b)| (a & b).count_ones()).sum();
            out.push((ones & 1) as u8);
        }
        Ok(out)
    }

    /// Flooding sum-product decoding. Stops as soon as the hard decision
    /// satisfies every check; always runs at least one iteration.
    pub fn decode(&self, llr: &[f64]) -> Result<LdpcDecoded> {
        if llr.len() != self.n {
            return Err(Error::WrongLength { expected: self.n, actual: llr.len() });
        }
        let channel: Vec<f64> = llr.iter().map(|l| l.clamp(-LLR_CLIP, LLR_CLIP)).collect();
        let mut v2c: Vec<f64> = self.edge_var.iter().map(|&v| channel[v]).collect();
        let mut c2v = vec![0.0; v2c.len()];
        let mut hard = vec![0u8; self.n];
        let mut tanh = Vec::new();
        let mut suffix = Vec::new();
        let limit = (1.0f64 - 1e-15).min((LLR_CLIP / 2.0).tanh());
        for iteration in 1..=self.max_iterations {
            for r in 0..self.m {
                let (lo, hi) = (self.check_start[r], self.check_start[r + 1]);
                tanh.clear();
                tanh.extend(v2c[lo..hi].iter().map(|m| (m / 2.0).tanh()));
                suffix.clear();
                suffix.resize(tanh.len() + 1, 1.0);
                for i in (0..tanh.len()).rev() {
                    suffix[i] = suffix[i + 1] * tanh[i];
                }
                let mut prefix = 1.0;
                for (i, e) in (lo..hi).enumerate() {
                    let p = (prefix * suffix[i + 1]).clamp(-limit, limit);
                    c2v[e] = (2.0 * p.atanh()).clamp(-LLR_CLIP, LLR_CLIP);
                    prefix *= tanh[i];
                }
            }
            for v in 0..self.n {
                let edges = &self.var_edges[self.var_start[v]..self.var_start[v + 1]];
                let total = channel[v] + edges.iter().map(|&e| c2v[e]).sum::<f64>();
                hard[v] = u8::from(total < 0.0);
                for &e in edges {
                    v2c[e] = (total - c2v[e]).clamp(-LLR_CLIP, LLR_CLIP);
                }
            }
            if self.syndrome_ok(&hard) {
                return Ok(self.finish(hard, true, iteration));
            }
        }
        Ok(self.finish(hard, false, self.max_iterations))
    }

    fn finish(&self, codeword: Vec<u8>, converged: bool, iterations: usize) -> LdpcDecoded {
        LdpcDecoded { message: codeword[..self.k].to_vec(), codeword, converged, iterations }
    }

    /// Sparse coordinate text: a `# rows cols` header, then one `row col`
    /// pair per line.
    pub fn to_sparse_text(&self) -> String {
        let mut out = format!("# {} {}\n", self.m, self.n);
        for (r, c) in self.to_edges() {
            let _ = writeln!(out, "{r} {c}");
        }
        out
    }

    pub fn from_sparse_text(text: &str) -> Result<Self> {
        let mut dims = None;
        let mut edges = Vec::new();
        let parse = |s: &str| s.parse::<usize>().map_err(|_| Error::Corrupt(format!("bad sparse entry {s:?}")));
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (body, header) = match line.strip_prefix('#') {
                Some(rest) => (rest.trim(), true),
                None => (line, false),
            };
            let fields: Vec<&str> = body.split_whitespace().collect();
            if fields.len() != 2 {
                if header {
                    continue;
                }
                return Err(Error::Corrupt(format!("bad sparse line {line:?}")));
            }
            let pair = (parse(fields[0])?, parse(fields[1])?);
            if header {
                dims.get_or_insert(pair);
            } else {
                edges.push(pair);
            }
        }
        let (m, n) = dims.unwrap_or_else(|| {
            edges.iter().fold((0, 0), |(m, n), &(r, c)| (m.max(r + 1), n.max(c + 1)))
        });
        Self::from_edges(m, n, &edges)
    }
}

fn remove_four_cycles(row_of: &mut [Vec<usize>], per_band: usize, rng: &mut ChaCha8Rng) {
    let n = row_of[0].len();
    let mut members: Vec<Vec<Vec<usize>>> = row_of
        .iter()
        .map(|rows| {
            let mut m = vec![Vec::new(); per_band];
            rows.iter().enumerate().for_each(|(c, &r)| m[r].push(c));
            m
        })
        .collect();
    let mut mark = vec![false; n];
    let mut start = 0;
    for _ in 0..CYCLE_FIX_ATTEMPTS {
        let Some((col, band)) = find_four_cycle(row_of, &members, &mut mark, start) else { return };
        start = col;
        let other = rng.random_range(0..n);
        let (ra, rb) = (row_of[band][col], row_of[band][other]);
        if ra == rb {
            continue;
        }
        let list = &mut members[band];
        list[ra].retain(|&c| c != col);
        list[ra].push(other);
        list[rb].retain(|&c| c != other);
        list[rb].push(col);
        row_of[band][col] = rb;
        row_of[band][other] = ra;
    }
}

/// Returns a column on a 4-cycle and one of the bands the cycle uses.
fn find_four_cycle(
    row_of: &[Vec<usize>],
    members: &[Vec<Vec<usize>>],
    mark: &mut [bool],
    start: usize,
) -> Option<(usize, usize)> {
    let n = mark.len();
    let bands = row_of.len();
    for step in 0..n {
        let col = (start + step) % n;
        for a in 0..bands {
            let row = &members[a][row_of[a][col]];
            row.iter().for_each(|&c| mark[c] = true);
            let hit = (a + 1..bands).any(|b| members[b][row_of[b][col]].iter().any(|&c| c != col && mark[c]));
            row.iter().for_each(|&c| mark[c] = false);
            if hit {
                return Some((col, a));
            }
        }
    }
    None
}
