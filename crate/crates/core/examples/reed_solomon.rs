//! RS(255,223) over GF(256): correction up to 16 symbol errors, and what
//! happens beyond that.
//!
//! cargo run --release --example reed_solomon

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semcomp::fec::{RsCode, RsDecoded};

fn main() -> semcomp::Result<()> {
    let rs = RsCode::gf256(255, 223)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    println!("errors  corrected  failures  miscorrected  (of 200)");
    for errors in [0, 8, 16, 17, 20, 40] {
        let (mut ok, mut fail, mut wrong) = (0, 0, 0);
        for _ in 0..200 {
            let msg: Vec<u8> = (0..rs.k()).map(|_| rng.random()).collect();
            let mut word = rs.encode(&msg)?;
            for pos in sample(&mut rng, rs.n(), errors) {
                word[pos] ^= rng.random_range(1..=255u8);
            }
            match rs.decode(&word)? {
                RsDecoded::Corrected { message, .. } if message == msg => ok += 1,
                RsDecoded::Corrected { .. } => wrong += 1,
                RsDecoded::Failure => fail += 1,
            }
        }
        println!("{errors:>6}  {ok:>9}  {fail:>8}  {wrong:>12}");
    }

    let short = rs.shortened(40)?;
    println!("shortened code: n={} k={} t={}", short.n(), short.k(), short.t());
    Ok(())
}
