//! Dynamic power management over idle intervals.
//!
//! A device idles for `t` time units and may step down through deeper sleep
//! states. Each state has a power rate and a wake-up cost. The offline optimum
//! picks the state on the lower envelope `min_k (rate_k·t + wake_k)`.
//!
//! Online policies come from randomized ski rental: the transition from state
//! `k` to `k + 1` is a rent-or-buy problem with break-even time
//! `b_k = (wake_{k+1} - wake_k) / (rate_k - rate_{k+1})`. A base distribution
//! over purchase days at price `B` is rescaled to each stage (day `d` becomes
//! time `(d - 1)·b_k/B`). All stages use one shared uniform draw, so the
//! transition times are comonotone; a running maximum keeps them ordered.

use std::fmt;

use anyhow::{bail, ensure, Result};
use predspec_core::dsr::DsrConfig;
use predspec_core::rsr::{karlin_distribution, kr_distribution, prsr, RentBuyDistribution};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng::{standard_normal, stream_rng};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerState {
    pub rate: f64,
    pub wake_cost: f64,
}

/// Power states from active (index 0) to deepest sleep.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerStateTable {
    states: Vec<PowerState>,
}

impl PowerStateTable {
    /// Requires at least two states, strictly decreasing rates, strictly
    /// increasing wake costs, and a free wake-up from the active state.
    pub fn new(states: Vec<PowerState>) -> Result<Self> {
        ensure!(states.len() >= 2, "a power-state table needs at least two states");
        ensure!(
            states[0].wake_cost == 0.0,
            "the active state must have wake cost 0, got {}",
            states[0].wake_cost
        );
        for (k, s) in states.iter().enumerate() {
            ensure!(
                s.rate >= 0.0 && s.rate.is_finite() && s.wake_cost >= 0.0 && s.wake_cost.is_finite(),
                "state {k} has a negative or non-finite rate or wake cost"
            );
        }
        for (k, w) in states.windows(2).enumerate() {
            ensure!(
                w[1].rate < w[0].rate,
                "state {} must have a lower power rate than state {k}",
                k + 1
            );
            ensure!(
                w[1].wake_cost > w[0].wake_cost,
                "state {} must have a higher wake cost than state {k}",
                k + 1
            );
        }
        let table = PowerStateTable { states };
        let b = table.break_evens();
        ensure!(
            b.windows(2).all(|w| w[0] < w[1]),
            "break-even times must increase (every state must lie on the lower envelope)"
        );
        Ok(table)
    }

    pub fn states(&self) -> &[PowerState] {
        &self.states
    }

    /// Break-even time of each stage `k → k + 1`.
    pub fn break_evens(&self) -> Vec<f64> {
        self.states
            .windows(2)
            .map(|w| (w[1].wake_cost - w[0].wake_cost) / (w[0].rate - w[1].rate))
            .collect()
    }
}

/// Cost of the best single state for an interval known in advance.
pub fn dpm_offline_opt(interval: f64, table: &PowerStateTable) -> f64 {
    table
        .states
        .iter()
        .map(|s| s.rate * interval + s.wake_cost)
        .fold(f64::INFINITY, f64::min)
}

/// Cost of following the given transition times over one idle interval.
///
/// The device moves to state `k + 1` at time `transitions[k]` if still idle
/// strictly after it, and pays the wake cost of the state it ends in.
pub fn dpm_cost_with_transitions(interval: f64, transitions: &[f64], table: &PowerStateTable) -> f64 {
    let mut energy = 0.0;
    let mut state = 0;
    let mut since = 0.0;
    for (k, &t_k) in transitions.iter().enumerate() {
        if interval <= t_k {
            break;
        }
        energy += table.states[k].rate * (t_k - since);
        since = t_k;
        state = k + 1;
    }
    energy + table.states[state].rate * (interval - since) + table.states[state].wake_cost
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DpmPolicy {
    Karlin,
    Kr { lambda: f64 },
    Prsr { gamma_bar: f64 },
}

impl fmt::Display for DpmPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DpmPolicy::Karlin => write!(f, "karlin"),
            DpmPolicy::Kr { lambda } => write!(f, "kr(lambda={lambda})"),
            DpmPolicy::Prsr { gamma_bar } => write!(f, "prsr(gamma_bar={gamma_bar})"),
        }
    }
}

impl DpmPolicy {
    /// Base distribution at price `B` for a prediction of `y_days` days.
    pub fn distribution(&self, y_days: u64, base: &DsrConfig) -> Result<RentBuyDistribution> {
        Ok(match *self {
            DpmPolicy::Karlin => karlin_distribution(base),
            DpmPolicy::Kr { lambda } => kr_distribution(y_days, base, lambda)?,
            DpmPolicy::Prsr { gamma_bar } => prsr(y_days, base, gamma_bar)?,
        })
    }
}

/// Per-stage distributions for one predicted interval length.
pub struct StagePlan {
    scales: Vec<f64>,
    stages: Vec<RentBuyDistribution>,
}

impl StagePlan {
    /// Converts the predicted interval into day units of each stage and
    /// builds that stage's base distribution.
    pub fn new(
        predicted: f64,
        table: &PowerStateTable,
        base: &DsrConfig,
        policy: &DpmPolicy,
    ) -> Result<Self> {
        ensure!(predicted.is_finite(), "prediction must be finite");
        let big_b = base.price() as f64;
        let scales: Vec<f64> = table.break_evens().iter().map(|b_k| b_k / big_b).collect();
        let stages = scales
            .iter()
            .map(|s| {
                let y_days = (predicted / s).round().max(1.0) as u64;
                policy.distribution(y_days, base)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StagePlan { scales, stages })
    }

    /// Transition times for one uniform draw, kept non-decreasing.
    pub fn transitions(&self, u: f64) -> Vec<f64> {
        let mut last = 0.0f64;
        self.stages
            .iter()
            .zip(&self.scales)
            .map(|(pi, s)| {
                last = last.max((pi.quantile(u) - 1) as f64 * s);
                last
            })
            .collect()
    }
}

/// Cost of one randomized run on one interval.
pub fn dpm_run(interval: f64, table: &PowerStateTable, plan: &StagePlan, u: f64) -> f64 {
    dpm_cost_with_transitions(interval, &plan.transitions(u), table)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DpmConfig {
    /// Price `B` of the base ski-rental instance.
    pub base_price: u64,
    /// Standard deviation of additive prediction noise (0 = exact predictions).
    pub sigma: f64,
    /// Uniform draws per interval.
    pub samples: usize,
    pub seed: u64,
}

impl Default for DpmConfig {
    fn default() -> Self {
        DpmConfig { base_price: 100, sigma: 0.0, samples: 1000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DpmResult {
    pub policy: DpmPolicy,
    /// Mean over intervals of expected cost / offline optimum.
    pub mean_cr: f64,
    /// Total expected cost over total offline cost.
    pub aggregate_cr: f64,
}

/// Predicted interval lengths: the truth plus optional Gaussian noise.
pub fn predictions(intervals: &[f64], cfg: &DpmConfig) -> Vec<f64> {
    intervals
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            if cfg.sigma == 0.0 {
                t
            } else {
                let mut rng = stream_rng(cfg.seed, 2 * i as u64);
                (t + cfg.sigma * standard_normal(&mut rng)).max(f64::MIN_POSITIVE)
            }
        })
        .collect()
}

/// Evaluates each policy over the trace, sharing predictions and uniforms.
pub fn run_dpm(
    intervals: &[f64],
    table: &PowerStateTable,
    policies: &[DpmPolicy],
    cfg: &DpmConfig,
) -> Result<Vec<DpmResult>> {
    if intervals.is_empty() {
        bail!("idle trace is empty");
    }
    ensure!(cfg.samples > 0, "samples must be positive");
    let base = DsrConfig::new(cfg.base_price)?;
    let preds = predictions(intervals, cfg);
    let uniforms: Vec<Vec<f64>> = (0..intervals.len())
        .map(|i| {
            let mut rng = stream_rng(cfg.seed, 2 * i as u64 + 1);
            (0..cfg.samples).map(|_| rng.gen::<f64>()).collect()
        })
        .collect();
    policies
        .iter()
        .map(|policy| {
            let mut ratio_sum = 0.0;
            let mut cost_sum = 0.0;
            let mut opt_sum = 0.0;
            for ((&t, &y), us) in intervals.iter().zip(&preds).zip(&uniforms) {
                let plan = StagePlan::new(y, table, &base, policy)?;
                let cost = us.iter().map(|&u| dpm_run(t, table, &plan, u)).sum::<f64>()
                    / us.len() as f64;
                let opt = dpm_offline_opt(t, table);
                ratio_sum += cost / opt;
                cost_sum += cost;
                opt_sum += opt;
            }
            Ok(DpmResult {
                policy: *policy,
                mean_cr: ratio_sum / intervals.len() as f64,
                aggregate_cr: cost_sum / opt_sum,
            })
        })
        .collect()
}
