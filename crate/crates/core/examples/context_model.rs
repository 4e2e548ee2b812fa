//! Adaptive context models of increasing order, cold and primed.
//!
//! cargo run --release --example context_model

use semcomp::compressor::ContextModel;
use semcomp::corpus::synth::{generate_text, Genre};

fn main() -> semcomp::Result<()> {
    let knowledge = generate_text(Genre::Press, 1, 500_000).into_bytes();
    let text = generate_text(Genre::Press, 2, 10_000).into_bytes();
    println!("order  cold bpc  primed bpc  contexts");
    for order in 0..=5 {
        let cold = ContextModel::new(order)?;
        let primed = ContextModel::primed(order, &knowledge)?;
        let c = 8.0 * cold.encode(&text).len() as f64 / text.len() as f64;
        let stream = primed.encode(&text);
        assert_eq!(primed.decode(&stream, text.len())?, text);
        let p = 8.0 * stream.len() as f64 / text.len() as f64;
        println!("{order:>5}  {c:>8.3}  {p:>10.3}  {:>8}", primed.contexts());
    }
    Ok(())
}
