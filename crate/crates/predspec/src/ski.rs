//! Synthetic ski-rental trials.
//!
//! Each trial draws a season length `x` uniformly from `[1, k·b]`. With
//! probability `p` the prediction is exact; otherwise it is a rounded normal
//! draw around `x`. Deterministic rules are scored directly; randomized rules
//! sample one purchase day per trial.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt;

use anyhow::{ensure, Result};
use predspec_core::dsr::{
    classic_decision, dsr_cost, dsr_opt, kd_decision, pdsr_decision, DsrConfig, PurchaseDay,
};
use predspec_core::rsr::{karlin_distribution, kr_distribution, prsr, RentBuyDistribution};
use rand::Rng;

use crate::rng::{standard_normal, stream_rng};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SyntheticSkiConfig {
    pub b: u64,
    pub x_max_multiplier: u64,
    /// Probability that a trial's prediction is exact.
    pub p: f64,
    pub sigma: f64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SyntheticSkiConfig {
    fn default() -> Self {
        SyntheticSkiConfig {
            b: 100,
            x_max_multiplier: 10,
            p: 1.0,
            sigma: 500.0,
            trials: 10_000,
            seed: 0,
        }
    }
}

impl SyntheticSkiConfig {
    pub fn validate(&self) -> Result<()> {
        ensure!(self.b >= 2, "b must be at least 2, got {}", self.b);
        ensure!(self.x_max_multiplier >= 1, "x_max_multiplier must be positive");
        ensure!((0.0..=1.0).contains(&self.p), "p must be in [0, 1], got {}", self.p);
        ensure!(self.sigma >= 0.0 && self.sigma.is_finite(), "sigma must be non-negative");
        ensure!(self.trials > 0, "trials must be positive");
        Ok(())
    }
}

/// One trial: actual season length and predicted season length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SkiInstance {
    pub x: u64,
    pub y: u64,
}

// Trial `t` draws its instance from stream `2t` and its purchase-day uniform
// from stream `2t + 1`, so the instances do not depend on which algorithms run.
fn instance_stream(trial: usize) -> u64 {
    2 * trial as u64
}

fn sampling_stream(trial: usize) -> u64 {
    2 * trial as u64 + 1
}

/// Instances for every trial, reproducible from the seed.
pub fn gen_synthetic_ski(cfg: &SyntheticSkiConfig) -> Result<Vec<SkiInstance>> {
    cfg.validate()?;
    let x_max = cfg.x_max_multiplier * cfg.b;
    Ok((0..cfg.trials)
        .map(|t| {
            let mut rng = stream_rng(cfg.seed, instance_stream(t));
            let x = rng.gen_range(1..=x_max);
            let accurate = rng.gen::<f64>() < cfg.p;
            let z = standard_normal(&mut rng);
            let y = if accurate {
                x
            } else {
                (x as f64 + cfg.sigma * z).round().max(1.0) as u64
            };
            SkiInstance { x, y }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SkiAlgorithm {
    /// Buy on day `b`.
    Classic,
    Kd { lambda: f64 },
    Pdsr { lambda: f64 },
    Karlin,
    Kr { lambda: f64 },
    Prsr { gamma_bar: f64 },
}

impl fmt::Display for SkiAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkiAlgorithm::Classic => write!(f, "classic"),
            SkiAlgorithm::Kd { lambda } => write!(f, "kd(lambda={lambda})"),
            SkiAlgorithm::Pdsr { lambda } => write!(f, "pdsr(lambda={lambda})"),
            SkiAlgorithm::Karlin => write!(f, "karlin"),
            SkiAlgorithm::Kr { lambda } => write!(f, "kr(lambda={lambda})"),
            SkiAlgorithm::Prsr { gamma_bar } => write!(f, "prsr(gamma_bar={gamma_bar})"),
        }
    }
}

/// Mean competitive ratio of one algorithm over all trials.
#[derive(Clone, Debug, PartialEq)]
pub struct SkiResult {
    pub algorithm: SkiAlgorithm,
    pub mean_cr: f64,
    /// Standard error of the mean.
    pub std_err: f64,
}

/// Purchase rule for one algorithm, with randomized distributions cached by
/// prediction (most only depend on whether `y < b`).
struct Rule<'a> {
    alg: SkiAlgorithm,
    cfg: &'a DsrConfig,
    cache: HashMap<u64, RentBuyDistribution>,
}

impl Rule<'_> {
    fn cached(
        &mut self,
        key: u64,
        make: impl FnOnce() -> predspec_core::Result<RentBuyDistribution>,
    ) -> Result<&RentBuyDistribution> {
        if let Entry::Vacant(slot) = self.cache.entry(key) {
            slot.insert(make()?);
        }
        Ok(&self.cache[&key])
    }

    fn decide(&mut self, y: u64, u: f64) -> Result<PurchaseDay> {
        let cfg = self.cfg;
        let below = u64::from(y < cfg.price());
        Ok(match self.alg {
            SkiAlgorithm::Classic => classic_decision(cfg),
            SkiAlgorithm::Kd { lambda } => kd_decision(y, cfg, lambda)?,
            SkiAlgorithm::Pdsr { lambda } => pdsr_decision(y, cfg, lambda)?,
            SkiAlgorithm::Karlin => {
                PurchaseDay(self.cached(0, || Ok(karlin_distribution(cfg)))?.quantile(u))
            }
            SkiAlgorithm::Kr { lambda } => {
                PurchaseDay(self.cached(below, || kr_distribution(y, cfg, lambda))?.quantile(u))
            }
            SkiAlgorithm::Prsr { gamma_bar } => {
                PurchaseDay(self.cached(y, || prsr(y, cfg, gamma_bar))?.quantile(u))
            }
        })
    }
}

/// Scores every algorithm on the same instances.
///
/// Randomized rules share one uniform per trial (drawn from the trial's
/// sampling stream), which keeps comparisons between them low-variance.
pub fn run_ski_experiment(
    instances: &[SkiInstance],
    algorithms: &[SkiAlgorithm],
    cfg: &SyntheticSkiConfig,
) -> Result<Vec<SkiResult>> {
    let dsr = DsrConfig::new(cfg.b)?;
    ensure!(!instances.is_empty(), "no instances to evaluate");
    let uniforms: Vec<f64> = (0..instances.len())
        .map(|t| stream_rng(cfg.seed, sampling_stream(t)).gen::<f64>())
        .collect();
    algorithms
        .iter()
        .map(|&alg| {
            let mut rule = Rule { alg, cfg: &dsr, cache: HashMap::new() };
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for (inst, &u) in instances.iter().zip(&uniforms) {
                let m = rule.decide(inst.y, u)?;
                let cr = dsr_cost(m, inst.x, &dsr) / dsr_opt(inst.x, &dsr);
                sum += cr;
                sum_sq += cr * cr;
            }
            let n = instances.len() as f64;
            let mean = sum / n;
            let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
            Ok(SkiResult { algorithm: alg, mean_cr: mean, std_err: (var / n).sqrt() })
        })
        .collect()
}

/// The six algorithms compared in the synthetic study.
pub fn default_algorithms(lambda: f64, kr_lambda: f64, gamma_bar: f64) -> Vec<SkiAlgorithm> {
    vec![
        SkiAlgorithm::Classic,
        SkiAlgorithm::Kd { lambda },
        SkiAlgorithm::Pdsr { lambda },
        SkiAlgorithm::Karlin,
        SkiAlgorithm::Kr { lambda: kr_lambda },
        SkiAlgorithm::Prsr { gamma_bar },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p: f64, trials: usize) -> SyntheticSkiConfig {
        SyntheticSkiConfig { p, trials, seed: 11, ..Default::default() }
    }

    #[test]
    fn accurate_predictions_when_p_is_one() {
        let inst = gen_synthetic_ski(&cfg(1.0, 500)).unwrap();
        assert!(inst.iter().all(|i| i.x == i.y));
        assert!(inst.iter().all(|i| (1..=1000).contains(&i.x)));
    }

    #[test]
    fn zero_noise_rounds_to_truth() {
        let c = SyntheticSkiConfig { sigma: 0.0, ..cfg(0.0, 300) };
        assert!(gen_synthetic_ski(&c).unwrap().iter().all(|i| i.x == i.y));
    }

    #[test]
    fn noisy_predictions_are_positive() {
        let inst = gen_synthetic_ski(&cfg(0.0, 2000)).unwrap();
        assert!(inst.iter().all(|i| i.y >= 1));
        assert!(inst.iter().any(|i| i.y != i.x));
    }

    #[test]
    fn seeded_runs_repeat() {
        let c = cfg(0.5, 400);
        let a = gen_synthetic_ski(&c).unwrap();
        assert_eq!(a, gen_synthetic_ski(&c).unwrap());
        let algs = default_algorithms(0.5, 1.5f64.ln(), 3.0);
        let r1 = run_ski_experiment(&a, &algs, &c).unwrap();
        let r2 = run_ski_experiment(&a, &algs, &c).unwrap();
        assert_eq!(r1, r2);
        assert!(r1.iter().all(|r| r.mean_cr >= 1.0 - 1e-12));
    }

    #[test]
    fn rejects_bad_config() {
        assert!(gen_synthetic_ski(&SyntheticSkiConfig { p: 1.5, ..Default::default() }).is_err());
        assert!(gen_synthetic_ski(&SyntheticSkiConfig { trials: 0, ..Default::default() }).is_err());
    }
}
