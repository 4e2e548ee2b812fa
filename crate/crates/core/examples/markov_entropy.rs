//! Entropy rates of smoothed Markov models fitted to a corpus directory, or
//! to the synthetic genres when no path is given.
//!
//! cargo run --release --example markov_entropy [corpus-dir]

use semcomp::corpus::synth::{generate_corpus, Genre};
use semcomp::corpus::{load_corpus, markov_entropy, Corpus, CorpusRole, LoadOptions};

fn main() -> semcomp::Result<()> {
    let corpora: Vec<(String, Corpus)> = match std::env::args().nth(1) {
        Some(path) => vec![(path.clone(), load_corpus(&path, CorpusRole::Knowledge, LoadOptions::default())?)],
        None => Genre::ALL.iter().map(|&g| (g.name().to_string(), generate_corpus(g, 2024, 50, 4000))).collect(),
    };
    println!("corpus,order0,order1,order2,order3");
    for (name, corpus) in &corpora {
        let rates: Vec<String> =
            (0..=3).map(|k| markov_entropy(corpus, k).map(|h| format!("{h:.4}"))).collect::<semcomp::Result<_>>()?;
        println!("{name},{}", rates.join(","));
    }
    Ok(())
}
