//! Coded bits per word against Eb/N0 for the four standard schemes on a
//! synthetic corpus of about 10^5 characters.
//!
//! cargo run --release --example snr_sweep [genre] [trials]

use semcomp::corpus::synth::{generate_corpus, Genre};
use semcomp::pipeline::{default_schemes, sweep, SweepConfig};

fn main() -> semcomp::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let genre = match args.get(1).map(String::as_str) {
        Some("press") => Genre::Press,
        Some("legislative") => Genre::Legislative,
        _ => Genre::Novel,
    };
    let trials = args.get(2).and_then(|t| t.parse().ok()).unwrap_or(10_000);
    let corpus = generate_corpus(genre, 2024, 50, 2000);
    let config = SweepConfig { trials, test_fraction: 0.2, ..SweepConfig::default() };
    let report = sweep(&default_schemes(), &corpus, &config)?;
    report.write_csv(std::io::stdout().lock()).expect("stdout");
    Ok(())
}
