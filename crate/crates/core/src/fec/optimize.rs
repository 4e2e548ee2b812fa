//! Smallest-parity search over an ascending parity grid.

use std::collections::BTreeMap;
use std::io::Write;

use crate::{Error, Result};

/// Word errors observed at one parity setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Evaluation {
    pub parity: usize,
    pub word_errors: u64,
    pub trials: u64,
}

impl Evaluation {
    pub fn wer(&self) -> f64 {
        if self.trials == 0 {
            return 1.0;
        }
        self.word_errors as f64 / self.trials as f64
    }

    pub fn meets(&self, epsilon: f64) -> bool {
        self.trials > 0 && self.wer() <= epsilon
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlanOutcome {
    /// `chosen` meets the target; `witness` is the next smaller grid value,
    /// re-measured, and fails it (absent at the grid floor).
    Feasible { chosen: Evaluation, witness: Option<Evaluation> },
    /// Even the largest grid value misses the target.
    Infeasible { ceiling: Evaluation },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParityPlan {
    pub scheme: String,
    pub snr_db: f64,
    pub epsilon: f64,
    pub outcome: PlanOutcome,
    /// Every grid point that was measured, ascending by parity.
    pub evaluations: Vec<Evaluation>,
    /// Pairs (smaller, larger) of measured parities where the larger one did
    /// worse than the target while the smaller met it.
    pub monotonicity_violations: Vec<(usize, usize)>,
}

impl ParityPlan {
    pub fn is_feasible(&self) -> bool {
        matches!(self.outcome, PlanOutcome::Feasible { .. })
    }

    /// The chosen evaluation, or the ceiling one when infeasible.
    pub fn evaluation(&self) -> &Evaluation {
        match &self.outcome {
            PlanOutcome::Feasible { chosen, .. } => chosen,
            PlanOutcome::Infeasible { ceiling } => ceiling,
        }
    }

    pub fn parity(&self) -> usize {
        self.evaluation().parity
    }
}

/// Binary search for the smallest grid value whose measured WER is at most
/// `epsilon`. `evaluate` must use the same random numbers for every parity
/// so that measurements at different grid points are comparable.
pub fn optimize_parity(
    scheme: &str,
    snr_db: f64,
    epsilon: f64,
    grid: &[usize],
    mut evaluate: impl FnMut(usize) -> Result<Evaluation>,
) -> Result<ParityPlan> {
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("parity grid must be non-empty and strictly ascending".into()));
    }
    let mut seen: BTreeMap<usize, Evaluation> = BTreeMap::new();
    let mut eval_at = |i: usize, seen: &mut BTreeMap<usize, Evaluation>| -> Result<Evaluation> {
        if let Some(e) = seen.get(&i) {
            return Ok(*e);
        }
        let e = evaluate(grid[i])?;
        seen.insert(i, e);
        Ok(e)
    };

    let top = grid.len() - 1;
    let ceiling = eval_at(top, &mut seen)?;
    let outcome = if !ceiling.meets(epsilon) {
        PlanOutcome::Infeasible { ceiling }
    } else {
        let (mut lo, mut hi) = (0, top);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if eval_at(mid, &mut seen)?.meets(epsilon) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let chosen = eval_at(hi, &mut seen)?;
        let witness = if hi > 0 { Some(eval_at(hi - 1, &mut seen)?) } else { None };
        // a miss right above the choice is the cheapest violation to spot
        if hi + 1 < top {
            eval_at(hi + 1, &mut seen)?;
        }
        PlanOutcome::Feasible { chosen, witness }
    };

    let evaluations: Vec<Evaluation> = seen.values().copied().collect();
    let mut monotonicity_violations = Vec::new();
    for (i, a) in evaluations.iter().enumerate() {
        for b in &evaluations[i + 1..] {
            if a.meets(epsilon) && !b.meets(epsilon) {
                monotonicity_violations.push((a.parity, b.parity));
            }
        }
    }
    Ok(ParityPlan { scheme: scheme.to_string(), snr_db, epsilon, outcome, evaluations, monotonicity_violations })
}

pub fn write_plans_csv(mut out: impl Write, plans: &[ParityPlan]) -> std::io::Result<()> {
    writeln!(out, "scheme,snr_db,parity,wer,trials,feasible")?;
    for p in plans {
        let e = p.evaluation();
        writeln!(out, "{},{:.3},{},{:.6e},{},{}", p.scheme, p.snr_db, e.parity, e.wer(), e.trials, p.is_feasible())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn threshold_eval(threshold: usize) -> impl FnMut(usize) -> Result<Evaluation> {
        move |parity| Ok(Evaluation { parity, word_errors: if parity >= threshold { 0 } else { 50 }, trials: 1000 })
    }

    #[test]
    fn noiseless_picks_the_floor() {
        let grid: Vec<usize> = (1..=16).map(|i| 2 * i).collect();
        let plan = optimize_parity("rs", f64::INFINITY, 1e-3, &grid, threshold_eval(0)).unwrap();
        assert_eq!(plan.parity(), 2);
        assert!(matches!(plan.outcome, PlanOutcome::Feasible { witness: None, .. }));
    }

    #[test]
    fn unreachable_target_is_infeasible() {
        let plan = optimize_parity("rs", -5.0, 1e-3, &[2, 4, 8], threshold_eval(100)).unwrap();
        assert!(!plan.is_feasible());
        assert_eq!(plan.parity(), 8);
        assert_eq!(plan.evaluations.len(), 1);
    }

    #[test]
    fn reports_non_monotone_measurements() {
        let grid = [1, 2, 3, 4, 5];
        let plan = optimize_parity("x", 0.0, 0.01, &grid, |p| {
            Ok(Evaluation { parity: p, word_errors: u64::from(p == 2 || p == 5), trials: 10 })
        });
        // the top fails, so nothing else is measured
        assert!(!plan.unwrap().is_feasible());
        let plan = optimize_parity("x", 0.0, 0.01, &grid, |p| {
            Ok(Evaluation { parity: p, word_errors: u64::from(p == 2 || p == 4), trials: 10 })
        })
        .unwrap();
        assert_eq!(plan.parity(), 3);
        assert_eq!(plan.monotonicity_violations, vec![(3, 4)]);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(optimize_parity("x", 0.0, 0.1, &[], threshold_eval(0)).is_err());
        assert!(optimize_parity("x", 0.0, 0.1, &[4, 2], threshold_eval(0)).is_err());
    }

    proptest! {
        #[test]
        fn matches_linear_scan_on_monotone_curves(threshold in 0usize..40, len in 1usize..20) {
            let grid: Vec<usize> = (0..len).map(|i| 2 * i + 2).collect();
            let plan = optimize_parity("x", 0.0, 1e-3, &grid, threshold_eval(threshold)).unwrap();
            let linear = grid.iter().copied().find(|&p| p >= threshold);
            match linear {
                Some(p) => {
                    prop_assert_eq!(plan.parity(), p);
                    if let PlanOutcome::Feasible { witness: Some(w), .. } = plan.outcome {
                        prop_assert!(!w.meets(1e-3));
                    }
                }
                None => prop_assert!(!plan.is_feasible()),
            }
            prop_assert!(plan.monotonicity_violations.is_empty());
        }
    }
}
