//! Bit error rate of the rate-1/2 (3,6) LDPC code under belief propagation,
//! against uncoded BPSK at the same Eb/N0.
//!
//! cargo run --release --example ldpc_waterfall [blocks]

use rayon::prelude::*;
use semcomp::channel::{transmit_hard, transmit_llr, ChannelConfig};
use semcomp::fec::LdpcCode;

fn main() -> semcomp::Result<()> {
    let blocks: u64 = std::env::args().nth(1).and_then(|b| b.parse().ok()).unwrap_or(200);
    let code = LdpcCode::rate_half(21)?;
    println!("n={} k={} rate={:.3}", code.n(), code.k(), code.rate());
    println!("eb_n0_db,coded_ber,uncoded_ber,unconverged");
    for tenth in (0..=30).step_by(5) {
        let eb_n0 = tenth as f64 / 10.0;
        let results: Vec<(u64, u64, bool)> = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let msg: Vec<u8> = (0..code.k()).map(|i| (i as u64 * 7 + b).is_multiple_of(3) as u8).collect();
                let cw = code.encode(&msg).unwrap();
                let coded = ChannelConfig::from_eb_n0(eb_n0, code.k() as u64, code.n() as u64, b);
                let out = code.decode(&transmit_llr(&cw, &coded)).unwrap();
                let errs = out.message.iter().zip(&msg).filter(|(a, b)| a != b).count() as u64;
                let raw = transmit_hard(&msg, &ChannelConfig::new(eb_n0, b));
                let raw_errs = raw.iter().zip(&msg).filter(|(a, b)| a != b).count() as u64;
                (errs, raw_errs, out.converged)
            })
            .collect();
        let bits = (blocks * code.k() as u64) as f64;
        let coded: u64 = results.iter().map(|r| r.0).sum();
        let raw: u64 = results.iter().map(|r| r.1).sum();
        let stuck = results.iter().filter(|r| !r.2).count();
        println!("{eb_n0:.1},{:.3e},{:.3e},{stuck}", coded as f64 / bits, raw as f64 / bits);
    }
    Ok(())
}
