//! Per-genre comparison of the conditional complexity bound, the order-1
//! Markov entropy and the rate a primed context coder actually achieves.
//!
//! cargo run --release --example genre_report [compressor]

use semcomp::compressor::CompressorId;
use semcomp::corpus::synth::{generate_corpus, Genre};
use semcomp::pipeline::{report_fig4, write_fig4_csv};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let id: CompressorId = std::env::args().nth(1).as_deref().unwrap_or("context3").parse()?;
    let corpora: Vec<_> =
        Genre::ALL.iter().map(|&g| (g.name().to_string(), generate_corpus(g, 2024, 100, 2000))).collect();
    let rows = report_fig4(&corpora, id, 0.1, 7)?;
    write_fig4_csv(std::io::stdout().lock(), &rows)?;
    Ok(())
}
