//! Conditional complexity of held-out documents against a knowledge base,
//! for every surrogate compressor.
//!
//! cargo run --release --example ncc_bound

use semcomp::compressor::CompressorId;
use semcomp::corpus::split_corpus;
use semcomp::corpus::synth::{generate_corpus, Genre};
use semcomp::ncc::{ncc_bound, JointStrategy};

fn main() -> semcomp::Result<()> {
    let corpus = generate_corpus(Genre::Press, 2024, 100, 2000);
    let (knowledge, test) = split_corpus(&corpus, 0.1, 7)?;
    println!("{} knowledge docs, {} test docs", knowledge.len(), test.len());
    println!("{:<10} {:>12} {:>10} {:>10}", "compressor", "strategy", "bits/char", "bits/word");
    for id in [CompressorId::Fixed5, CompressorId::Huffman, CompressorId::Deflate, CompressorId::Context(3)] {
        for strategy in [JointStrategy::Conditioning, JointStrategy::Concatenation] {
            let report = ncc_bound(id, &test, &knowledge, strategy)?;
            println!("{:<10} {:>12} {:>10.4} {:>10.3}", id.to_string(), strategy.to_string(), report.ncc, report.ncc_bits_per_word);
        }
    }
    // Without a knowledge base the bound is plain compression.
    let empty = semcomp::corpus::Corpus::empty(semcomp::corpus::CorpusRole::Knowledge);
    let cold = ncc_bound(CompressorId::Context(3), &test, &empty, JointStrategy::Conditioning)?;
    println!("context3 with no knowledge: {:.4} bits/char", cold.ncc);
    Ok(())
}
