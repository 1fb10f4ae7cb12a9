//! Prediction-specific metric pairs and Pareto dominance.
//!
//! All ratios are stored in cost-minimization orientation (at least 1). The
//! one-max search module inverts reward ratios before building a pair, so the
//! same dominance predicate serves every problem.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Absolute tolerance for treating two ratios as equal.
pub const EQ_TOL: f64 = 1e-9;

/// (consistency under `y`, robustness under `y`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricsPair {
    pub consistency: f64,
    pub robustness: f64,
}

impl MetricsPair {
    pub const fn new(consistency: f64, robustness: f64) -> Self {
        MetricsPair {
            consistency,
            robustness,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.consistency.is_finite() && self.robustness.is_finite()
    }

    /// Largest coordinate-wise absolute difference.
    pub fn max_abs_diff(&self, other: &MetricsPair) -> f64 {
        (self.consistency - other.consistency)
            .abs()
            .max((self.robustness - other.robustness).abs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    CostMinimization,
    RewardMaximization,
}

impl Objective {
    /// Competitive ratio in cost orientation: ALG/OPT for costs, OPT/ALG for rewards.
    pub fn competitive_ratio(self, alg: f64, opt: f64) -> f64 {
        match self {
            Objective::CostMinimization => alg / opt,
            Objective::RewardMaximization => opt / alg,
        }
    }
}

/// `a` dominates `b`: no worse in both coordinates, strictly better in one.
pub fn dominates(a: &MetricsPair, b: &MetricsPair) -> bool {
    dominates_with_tol(a, b, EQ_TOL)
}

/// Dominance where differences within `tol` count as ties.
pub fn dominates_with_tol(a: &MetricsPair, b: &MetricsPair, tol: f64) -> bool {
    let no_worse = a.consistency <= b.consistency + tol && a.robustness <= b.robustness + tol;
    let strictly_better = a.consistency < b.consistency - tol || a.robustness < b.robustness - tol;
    no_worse && strictly_better
}

/// Non-dominated subset of `points`, sorted by consistency ascending.
///
/// Points equal within [`EQ_TOL`] are reported once.
pub fn pareto_front(points: &[MetricsPair]) -> Result<Vec<MetricsPair>> {
    if points.is_empty() {
        return Err(Error::Empty("pareto_front input"));
    }
    let mut sorted: Vec<MetricsPair> = points.to_vec();
    sorted.sort_by(|a, b| {
        a.consistency
            .total_cmp(&b.consistency)
            .then(a.robustness.total_cmp(&b.robustness))
    });

    let mut front: Vec<MetricsPair> = Vec::new();
    for p in sorted {
        // Robustness strictly decreases along the front, so the last entry holds the minimum.
        match front.last() {
            None => front.push(p),
            Some(last) => {
                if p.robustness < last.robustness - EQ_TOL {
                    // A tie in consistency with a strictly better robustness
                    // knocks earlier points off the front.
                    while let Some(last) = front.last() {
                        if last.consistency >= p.consistency - EQ_TOL {
                            front.pop();
                        } else {
                            break;
                        }
                    }
                    front.push(p);
                }
            }
        }
    }
    Ok(front)
}

/// Cumulative online outcome divided by cumulative offline optimum.
///
/// For reward maximization this is the fraction of the hindsight optimum
/// recovered; for cost minimization it is a competitive ratio.
pub fn empirical_ratio(alg_total: f64, opt_total: f64, _objective: Objective) -> Result<f64> {
    if !(opt_total > 0.0) || !opt_total.is_finite() {
        return Err(Error::out_of_range("opt_total", opt_total, "(0, inf)"));
    }
    if !(alg_total >= 0.0) || !alg_total.is_finite() {
        return Err(Error::out_of_range("alg_total", alg_total, "[0, inf)"));
    }
    Ok(alg_total / opt_total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn mp(c: f64, r: f64) -> MetricsPair {
        MetricsPair::new(c, r)
    }

    #[test]
    fn dominance_examples() {
        assert!(!dominates(&mp(1.0, 2.0), &mp(1.0, 2.0)));
        assert!(dominates(&mp(1.0, 1.99), &mp(1.0, 2.05)));
        assert!(!dominates(&mp(1.2, 2.2), &mp(1.1, 2.5)));
        assert!(!dominates(&mp(1.1, 2.5), &mp(1.2, 2.2)));
    }

    #[test]
    fn front_examples() {
        let anti = vec![mp(1.0, 3.0), mp(2.0, 2.0), mp(3.0, 1.0)];
        assert_eq!(pareto_front(&anti).unwrap(), anti);

        assert_eq!(
            pareto_front(&[mp(1.0, 3.0), mp(1.0, 2.0)]).unwrap(),
            vec![mp(1.0, 2.0)]
        );

        let pts = [mp(1.2, 2.2), mp(1.49, 2.98), mp(1.0, 1.99)];
        assert_eq!(pareto_front(&pts).unwrap(), vec![mp(1.0, 1.99)]);

        assert_eq!(pareto_front(&[]), Err(Error::Empty("pareto_front input")));
    }

    #[test]
    fn near_tie_in_consistency_is_resolved() {
        let pts = [mp(1.0, 2.0), mp(1.0 + 1e-10, 1.5)];
        assert_eq!(pareto_front(&pts).unwrap(), vec![mp(1.0 + 1e-10, 1.5)]);
    }

    #[test]
    fn empirical_ratio_examples() {
        let r = empirical_ratio(87.2, 100.0, Objective::RewardMaximization).unwrap();
        assert!((r - 0.872).abs() < 1e-12);
        assert_eq!(
            empirical_ratio(5.5, 5.5, Objective::CostMinimization).unwrap(),
            1.0
        );
        let r = empirical_ratio(4.0, 3.0, Objective::CostMinimization).unwrap();
        assert!((r - 4.0 / 3.0).abs() < 1e-15);
        assert!(empirical_ratio(1.0, 0.0, Objective::CostMinimization).is_err());
        assert!(empirical_ratio(1.0, -2.0, Objective::RewardMaximization).is_err());
        assert!(empirical_ratio(-1.0, 2.0, Objective::RewardMaximization).is_err());
    }

    #[test]
    fn objective_orientation() {
        assert_eq!(Objective::CostMinimization.competitive_ratio(4.0, 2.0), 2.0);
        assert_eq!(Objective::RewardMaximization.competitive_ratio(2.0, 4.0), 2.0);
    }

    fn brute_front(points: &[MetricsPair]) -> Vec<MetricsPair> {
        let mut keep: Vec<MetricsPair> = points
            .iter()
            .filter(|p| !points.iter().any(|q| dominates(q, p)))
            .copied()
            .collect();
        keep.sort_by(|a, b| a.consistency.total_cmp(&b.consistency));
        keep.dedup_by(|a, b| a.max_abs_diff(b) <= EQ_TOL);
        keep
    }

    fn arb_points() -> impl Strategy<Value = Vec<MetricsPair>> {
        // Coarse lattice so that exact ties occur but near-ties do not.
        prop::collection::vec((0u32..20, 0u32..20), 1..40).prop_map(|v| {
            v.into_iter()
                .map(|(a, b)| mp(1.0 + a as f64 * 0.125, 1.0 + b as f64 * 0.125))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn front_matches_quadratic_filter(points in arb_points()) {
            prop_assert_eq!(pareto_front(&points).unwrap(), brute_front(&points));
        }

        #[test]
        fn front_is_idempotent_antichain(points in arb_points()) {
            let front = pareto_front(&points).unwrap();
            for a in &front {
                for b in &front {
                    prop_assert!(!dominates(a, b));
                }
            }
            prop_assert_eq!(pareto_front(&front).unwrap(), front);
        }

        #[test]
        fn dominance_irreflexive_antisymmetric(a in (1.0f64..3.0, 1.0f64..3.0), b in (1.0f64..3.0, 1.0f64..3.0)) {
            let (a, b) = (mp(a.0, a.1), mp(b.0, b.1));
            prop_assert!(!dominates(&a, &a));
            prop_assert!(!(dominates(&a, &b) && dominates(&b, &a)));
        }
    }
}
