//! Simulated uncoded BPSK bit error rate next to Q(sqrt(2 Es/N0)).
//!
//! cargo run --release --example ber_curve [bits]

use semcomp::channel::ber_sweep;
use statrs::function::erf::erfc;

fn main() -> semcomp::Result<()> {
    let bits = std::env::args().nth(1).and_then(|b| b.parse().ok()).unwrap_or(1_000_000);
    let grid: Vec<f64> = (0..=8).map(f64::from).collect();
    println!("snr_db,ber,theory,z");
    for est in ber_sweep(&grid, bits, 11)? {
        let theory = 0.5 * erfc(10f64.powf(est.snr_db / 10.0).sqrt());
        let z = (est.ber() - theory) / (theory * (1.0 - theory) / est.trials as f64).sqrt();
        println!("{:.1},{:.4e},{:.4e},{:+.2}", est.snr_db, est.ber(), theory, z);
    }
    Ok(())
}
