//! BPSK over AWGN: modulation, noise, LLRs and uncoded BER estimation.
//!
//! Noise samples come from `rand_distr::StandardNormal` (Ziggurat) driven by
//! a `ChaCha8Rng` seeded from the config.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::fec::ldpc::LLR_CLIP;
use crate::{seed, Error, Result};

/// Smallest `n_bits` accepted by [`ber_uncoded`].
pub const MIN_BER_BITS: u64 = 10_000;
const BER_CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    /// Symbol SNR (Es/N0) in dB; `f64::INFINITY` disables noise.
    pub snr_db: f64,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn new(snr_db: f64, seed: u64) -> Self {
        Self { snr_db, seed }
    }

    pub fn noiseless(seed: u64) -> Self {
        Self::new(f64::INFINITY, seed)
    }

    /// Config whose Es/N0 corresponds to `eb_n0_db` when `info_bits` are
    /// carried by `channel_bits` symbols.
    pub fn from_eb_n0(eb_n0_db: f64, info_bits: u64, channel_bits: u64, seed: u64) -> Self {
        let rate = info_bits as f64 / channel_bits.max(1) as f64;
        Self::new(eb_n0_db + 10.0 * rate.log10(), seed)
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// Noise variance per real dimension with unit symbol energy.
    pub fn sigma2(&self) -> f64 {
        if self.snr_db == f64::INFINITY {
            0.0
        } else {
            1.0 / (2.0 * 10f64.powf(self.snr_db / 10.0))
        }
    }
}

/// Bit 0 maps to +1, bit 1 to -1.
pub fn bpsk_modulate(bits: &[u8]) -> Vec<f64> {
    bits.iter().map(|&b| if b & 1 == 0 { 1.0 } else { -1.0 }).collect()
}

pub fn awgn_apply(symbols: &[f64], config: &ChannelConfig) -> Vec<f64> {
    let sigma = config.sigma2().sqrt();
    if sigma == 0.0 {
        return symbols.to_vec();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    symbols
        .iter()
        .map(|x| {
            let z: f64 = rng.sample(StandardNormal);
            x + sigma * z
        })
        .collect()
}

/// `2y / sigma^2`; positive favours bit 0. Without noise the LLR saturates
/// at the decoder clip value.
pub fn llr(samples: &[f64], config: &ChannelConfig) -> Vec<f64> {
    let s2 = config.sigma2();
    samples
        .iter()
        .map(|&y| {
            if s2 == 0.0 {
                if y < 0.0 {
                    -LLR_CLIP
                } else {
                    LLR_CLIP
                }
            } else {
                2.0 * y / s2
            }
        })
        .collect()
}

pub fn hard_decision(values: &[f64]) -> Vec<u8> {
    values.iter().map(|&v| u8::from(v < 0.0)).collect()
}

/// Modulate, add noise and slice.
pub fn transmit_hard(bits: &[u8], config: &ChannelConfig) -> Vec<u8> {
    hard_decision(&awgn_apply(&bpsk_modulate(bits), config))
}

pub fn transmit_llr(bits: &[u8], config: &ChannelConfig) -> Vec<f64> {
    llr(&awgn_apply(&bpsk_modulate(bits), config), config)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerEstimate {
    pub snr_db: f64,
    pub trials: u64,
    pub bit_errors: u64,
}

impl BerEstimate {
    pub fn ber(&self) -> f64 {
        self.bit_errors as f64 / self.trials as f64
    }

    /// Binomial standard error of [`BerEstimate::ber`].
    pub fn stderr(&self) -> f64 {
        let p = self.ber();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// Monte Carlo BER of uncoded BPSK. Random bits and noise are drawn in
/// chunks whose seeds derive from the config seed.
pub fn ber_uncoded(config: &ChannelConfig, n_bits: u64) -> Result<BerEstimate> {
    if n_bits < MIN_BER_BITS {
        return Err(Error::InvalidParameter(format!("need at least {MIN_BER_BITS} bits, got {n_bits}")));
    }
    let mut bit_errors = 0;
    let mut done = 0u64;
    let mut chunk = 0u64;
    while done < n_bits {
        let len = (n_bits - done).min(BER_CHUNK as u64) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(config.seed, &[chunk, 0]));
        let bits: Vec<u8> = (0..len).map(|_| rng.random_range(0..2u8)).collect();
        let noisy = transmit_hard(&bits, &config.with_seed(seed::derive(config.seed, &[chunk, 1])));
        bit_errors += bits.iter().zip(&noisy).filter(|(a, b)| a != b).count() as u64;
        done += len as u64;
        chunk += 1;
    }
    Ok(BerEstimate { snr_db: config.snr_db, trials: n_bits, bit_errors })
}

/// One estimate per grid point, all sharing `seed`.
pub fn ber_sweep(grid: &[f64], n_bits: u64, seed: u64) -> Result<Vec<BerEstimate>> {
    grid.iter().map(|&snr| ber_uncoded(&ChannelConfig::new(snr, seed), n_bits)).collect()
}

pub fn write_ber_csv(mut out: impl Write, estimates: &[BerEstimate]) -> std::io::Result<()> {
    writeln!(out, "snr_db,trials,bit_errors,ber,stderr")?;
    for e in estimates {
        writeln!(out, "{:.3},{},{},{:.6e},{:.6e}", e.snr_db, e.trials, e.bit_errors, e.ber(), e.stderr())?;
    }
    Ok(())
}

/// Parses `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_snr_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidParameter(format!("bad SNR grid {spec:?}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = spec.split(':').collect();
    let grid = match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if !(step > 0.0) || stop < start {
                return Err(bad());
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            (0..count).map(|i| start + i as f64 * step).collect()
        }
        [list] => list.split(',').map(num).collect::<Result<Vec<_>>>()?,
        _ => return Err(bad()),
    };
    if grid.is_empty() || grid.iter().any(|v| v.is_nan()) {
        return Err(bad());
    }
    Ok(grid)
}
