//! Builds an order-0 Huffman code for a text and compares its average
//! length with the empirical entropy.
//!
//! cargo run --example huffman_table [text-file]

use semcomp::compressor::HuffmanTable;
use semcomp::corpus::synth::{generate_text, Genre};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read(path)?,
        None => generate_text(Genre::Novel, 1, 20_000).into_bytes(),
    };
    let table = HuffmanTable::from_text(&text)?;
    let total: u64 = table.counts().iter().sum();
    let entropy: f64 = table
        .counts()
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * p.log2()
        })
        .sum();

    let mut lengths = table.code_lengths();
    lengths.sort_by_key(|&(s, l)| (l, s));
    for (symbol, _) in lengths.iter().take(12) {
        println!("{:?} {}", *symbol as char, table.codeword(*symbol).unwrap());
    }
    println!("...");
    println!("symbols {}  kraft {:.6}", lengths.len(), table.kraft_sum());
    println!("entropy {entropy:.4}  average {:.4}  table {} bits", table.average_length(), table.serialized_bits());

    let bits = table.encode(&text)?;
    assert_eq!(table.decode(&bits, text.len())?, text);
    println!("{} chars -> {} bits", text.len(), bits.len());
    Ok(())
}
