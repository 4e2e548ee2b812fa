//! The parity search for one scheme across a few channel qualities, with
//! every grid point it had to measure.
//!
//! cargo run --release --example parity_optimizer [scheme]

use semcomp::corpus::split_corpus;
use semcomp::corpus::synth::{generate_corpus, Genre};
use semcomp::fec::PlanOutcome;
use semcomp::pipeline::{SchemeSpec, Transmitter};

fn main() -> semcomp::Result<()> {
    let scheme: SchemeSpec = std::env::args().nth(1).as_deref().unwrap_or("deflate+rs").parse()?;
    let corpus = generate_corpus(Genre::Novel, 2024, 40, 2000);
    let (knowledge, test) = split_corpus(&corpus, 0.2, 7)?;
    let tx = Transmitter::new(scheme.clone(), test.documents(), &knowledge)?;
    println!("{scheme}: {} words, grid {:?}", tx.words(), tx.grid());
    for snr in [3.0, 5.0, 7.0, 9.0] {
        let record = tx.run(snr, 1e-3, 5_000, 7)?;
        let plan = record.plan.as_ref().expect("optimized policy");
        let probes: Vec<String> =
            plan.evaluations.iter().map(|e| format!("{}:{}/{}", e.parity, e.word_errors, e.trials)).collect();
        match &plan.outcome {
            PlanOutcome::Feasible { chosen, witness } => println!(
                "{snr:>4} dB  parity {:>3}  witness {:?}  probes {}",
                chosen.parity,
                witness.map(|w| w.parity),
                probes.join(" ")
            ),
            PlanOutcome::Infeasible { .. } => println!("{snr:>4} dB  infeasible  probes {}", probes.join(" ")),
        }
        if !plan.monotonicity_violations.is_empty() {
            println!("      non-monotone pairs {:?}", plan.monotonicity_violations);
        }
    }
    Ok(())
}
