//! Deflate with and without a preset dictionary drawn from related text.
//!
//! cargo run --release --example deflate_dictionary

use semcomp::compressor::{deflate_compress, inflate};
use semcomp::corpus::synth::{generate_text, Genre};

fn main() -> semcomp::Result<()> {
    let dictionary = generate_text(Genre::Legislative, 1, 200_000).into_bytes();
    let message = generate_text(Genre::Legislative, 2, 4_000).into_bytes();
    let unrelated = generate_text(Genre::Novel, 3, 200_000).into_bytes();

    let plain = deflate_compress(&message, None);
    let primed = deflate_compress(&message, Some(&dictionary));
    let mismatched = deflate_compress(&message, Some(&unrelated));
    assert_eq!(inflate(&primed, Some(&dictionary))?, message);

    let bpc = |s: &[u8]| 8.0 * s.len() as f64 / message.len() as f64;
    println!("no dictionary        {:>6} bytes  {:.3} bits/char", plain.len(), bpc(&plain));
    println!("same-genre dictionary {:>5} bytes  {:.3} bits/char", primed.len(), bpc(&primed));
    println!("other-genre dictionary {:>4} bytes  {:.3} bits/char", mismatched.len(), bpc(&mismatched));
    Ok(())
}
