use predspec_core::dsr::{dsr_metrics, DsrConfig, PurchaseDay};
use predspec_core::linprog::{solve_lp, LinearProgram, LpStatus};
use predspec_core::oms::{oms_eps_metrics, oms_metrics, OmsConfig};
use predspec_core::oracles::{dsr_metrics_sweep, oms_metrics_sweep, rsr_metrics_sweep};
use predspec_core::rsr::*;
use predspec_core::sched2::{
    round_robin_cost, sched_opt, two_stage_cost, two_stage_metrics, JobPairActual,
    JobPairPrediction,
};
use proptest::prelude::*;

fn b100() -> DsrConfig {
    DsrConfig::new(100).unwrap()
}

#[test]
fn equalizing_distributions_equalize() {
    for b in [2u64, 10, 40] {
        let c = DsrConfig::new(b).unwrap();
        for m in 1..=b {
            for n in m..=b {
                let pi = equalizing_distribution(m, n, &c).unwrap();
                assert!((pi.total() - 1.0).abs() < 1e-9);
                let r_m = rsr_ratio(&pi, m, &c).unwrap();
                for x in m..=n {
                    assert!((rsr_ratio(&pi, x, &c).unwrap() - r_m).abs() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn lp_endpoints() {
    let c = b100();
    let xi = gamma_xi(&c);
    let karlin = karlin_distribution(&c);
    for y in [20u64, 150] {
        let (beta, pi) = lp_min_consistency(y, &c, xi + 1e-10).unwrap();
        assert!((beta - rsr_ratio(&karlin, y, &c).unwrap()).abs() < 1e-6);
        for d in 1..=100 {
            assert!((pi.mass_at(d) - karlin.mass_at(d)).abs() < 1e-5, "day {d}");
        }
    }
    for y in [1u64, 40, 99] {
        let nu = rsr_robustness(&equalizing_distribution(y + 1, 100, &c).unwrap(), &c);
        let (beta, _) = lp_min_consistency(y, &c, nu + 0.1).unwrap();
        assert!((beta - 1.0).abs() < 1e-9);
        let (gamma, _) = lp_min_robustness(y, &c, 1.0).unwrap();
        assert!((gamma - nu).abs() < 1e-8);
    }
    assert!(lp_min_consistency(50, &c, xi - 0.01).is_err());
}

#[test]
fn lp_problems_are_never_unbounded() {
    let c = DsrConfig::new(30).unwrap();
    for y in [1u64, 10, 29, 30, 45] {
        for g in [1.7, 2.0, 4.0] {
            let (beta, _) = lp_min_consistency(y, &c, g).unwrap();
            let (gamma, _) = lp_min_robustness(y, &c, beta).unwrap();
            assert!(gamma <= g + 1e-8);
        }
    }
}

#[test]
fn dsr_sweep_agrees_with_closed_form() {
    let c = b100();
    for m in 1..=260 {
        for y in (1..=300).step_by(7) {
            let a = dsr_metrics(PurchaseDay(m), y, &c);
            let s = dsr_metrics_sweep(PurchaseDay(m), y, &c);
            assert!(a.max_abs_diff(&s) < 1e-12);
        }
    }
}

#[test]
fn round_robin_is_four_thirds_competitive() {
    let mut worst: f64 = 0.0;
    for i in 1..=60 {
        for j in 1..=60 {
            let a = JobPairActual::new(i as f64 * 0.1, j as f64 * 0.1).unwrap();
            worst = worst.max(round_robin_cost(&a) / sched_opt(&a));
        }
    }
    assert!(worst <= 4.0 / 3.0 + 1e-12);
    assert!((worst - 4.0 / 3.0).abs() < 1e-12);
}

fn arb_distribution() -> impl Strategy<Value = RentBuyDistribution> {
    prop::collection::vec((1u64..250, 0.01f64..1.0), 1..12).prop_map(|v| {
        let total: f64 = v.iter().map(|p| p.1).sum();
        RentBuyDistribution::from_masses(v.into_iter().map(|(d, m)| (d, m / total))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn collapsing_the_tail_never_hurts(pi in arb_distribution(), y in 1u64..100) {
        let c = b100();
        let before = rsr_metrics(&pi, y, &c).unwrap();
        let after = rsr_metrics(&collapse_tail(&pi, &c), y, &c).unwrap();
        prop_assert!(after.robustness <= before.robustness + 1e-12);
        prop_assert!((after.consistency - before.consistency).abs() < 1e-12);
    }

    #[test]
    fn prefix_sweep_matches_direct_sweep(pi in arb_distribution(), y in 1u64..400) {
        let c = b100();
        let fast = rsr_metrics(&pi, y, &c).unwrap();
        let slow = rsr_metrics_sweep(&pi, y, &c);
        prop_assert!(fast.max_abs_diff(&slow) < 1e-12);
    }

    #[test]
    fn prsr_respects_budget(y in 1u64..600, t in 0.0f64..1.0) {
        let c = b100();
        let gamma_bar = gamma_xi(&c) + t * (8.0 - gamma_xi(&c));
        let pi = prsr(y, &c, gamma_bar).unwrap();
        prop_assert!((pi.total() - 1.0).abs() < 1e-9);
        prop_assert!(pi.masses().iter().all(|&(_, m)| m >= 0.0));
        prop_assert!(rsr_robustness(&pi, &c) <= gamma_bar + 1e-8);
    }

    #[test]
    fn operation_b_hits_target(y in 1u64..100, t in 0.0f64..=1.0) {
        let c = b100();
        let start = equalizing_distribution(y + 1, 100, &c).unwrap();
        let nu = rsr_robustness(&start, &c);
        let g = gamma_xi(&c) + t * (nu - gamma_xi(&c));
        let out = operation_b(&start, g, y, &c).unwrap();
        prop_assert!((rsr_robustness(&out, &c) - g).abs() < 1e-8);
    }

    #[test]
    fn oms_closed_form_matches_fine_sweep(phi in 10.0f64..=20.0, y in 10.0f64..=20.0) {
        let c = OmsConfig::new(10.0, 20.0).unwrap();
        let sweep = oms_metrics_sweep(phi, y, &c, 10_000);
        prop_assert!(sweep.max_abs_diff(&oms_metrics(phi, y, &c)) < 1e-6);
    }

    #[test]
    fn eps_consistency_is_monotone_in_eps(phi in 10.0f64..=20.0, y in 10.0f64..=20.0, e in 0.01f64..2.0) {
        let c = OmsConfig::new(10.0, 20.0).unwrap();
        let small = oms_eps_metrics(phi, y, e, &c).consistency;
        let large = oms_eps_metrics(phi, y, 2.0 * e, &c).consistency;
        prop_assert!(small <= large + 1e-15);
        prop_assert!(oms_eps_metrics(phi, y, e, &c).consistency >= oms_metrics(phi, y, &c).consistency - 1e-15);
    }

    #[test]
    fn two_stage_respects_robustness(
        y1 in 0.5f64..5.0, y2 in 0.5f64..5.0, lambda in 0.02f64..0.9,
        x1 in 0.01f64..15.0, x2 in 0.01f64..15.0,
    ) {
        let p = JobPairPrediction::new(y1, y2).unwrap();
        let a = JobPairActual::new(x1, x2).unwrap();
        let r = two_stage_cost(&a, &p, lambda).unwrap() / sched_opt(&a);
        prop_assert!(r <= two_stage_metrics(&p, lambda).unwrap().robustness + 1e-9);
        prop_assert!(r >= 1.0 - 1e-12);
    }

    #[test]
    fn random_lps_are_feasible_at_optimum(
        n in 2usize..8,
        seed in prop::collection::vec(0.0f64..1.0, 8 * 8 * 2 + 8 + 8),
    ) {
        // Rows built around a known feasible point keep the LP feasible;
        // positive costs keep it bounded.
        let x0: Vec<f64> = seed[..n].to_vec();
        let mut it = seed[16..].iter().copied();
        let cost: Vec<f64> = seed[8..8 + n].iter().map(|v| v + 0.1).collect();
        let mut lp = LinearProgram::new(cost.clone());
        for _ in 0..n {
            let row: Vec<f64> = (0..n).map(|_| it.next().unwrap() * 2.0 - 1.0).collect();
            let at: f64 = row.iter().zip(&x0).map(|(a, x)| a * x).sum();
            lp.geq(row, at - 0.1);
        }
        let eq: Vec<f64> = (0..n).map(|_| it.next().unwrap()).collect();
        let at: f64 = eq.iter().zip(&x0).map(|(a, x)| a * x).sum();
        lp.eq(eq, at);
        let sol = solve_lp(&lp).unwrap();
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        prop_assert!(lp.max_violation(&sol.values) <= 1e-8);
        let base: f64 = cost.iter().zip(&x0).map(|(c, x)| c * x).sum();
        prop_assert!(sol.objective_value <= base + 1e-8);
    }
}
