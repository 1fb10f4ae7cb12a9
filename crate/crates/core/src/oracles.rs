//! Brute-force Pareto frontiers used as ground truth.
//!
//! Every oracle measures consistency and robustness by evaluating the raw
//! cost or reward model over season lengths or price levels. None of them
//! calls the closed-form metric functions, so agreement with those functions
//! is a check between two independent implementations.

use alloc::vec::Vec;

use crate::dsr::{dsr_cost, dsr_opt, DsrConfig, PurchaseDay};
use crate::metrics::{dominates_with_tol, pareto_front, MetricsPair};
use crate::oms::{oms_reward, OmsConfig};
use crate::rsr::{meta_rsr, rsr_expected_cost, RentBuyDistribution};
use crate::{Error, Result};

/// What was chosen to produce a frontier point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Decision {
    PurchaseDay(u64),
    Threshold(f64),
    RobustnessTarget(f64),
}

/// All evaluated decisions for one prediction and their Pareto front.
#[derive(Clone, Debug, PartialEq)]
pub struct FrontierScan {
    pub prediction: f64,
    pub points: Vec<(Decision, MetricsPair)>,
    pub front: Vec<MetricsPair>,
}

impl FrontierScan {
    pub fn from_points(prediction: f64, points: Vec<(Decision, MetricsPair)>) -> Result<Self> {
        let metrics: Vec<MetricsPair> = points.iter().map(|&(_, m)| m).collect();
        let front = pareto_front(&metrics)?;
        Ok(FrontierScan {
            prediction,
            points,
            front,
        })
    }
}

/// True iff no scanned point dominates `point` by more than `tol`.
pub fn verify_nondominated(point: &MetricsPair, scan: &FrontierScan, tol: f64) -> bool {
    !scan
        .points
        .iter()
        .any(|(_, q)| dominates_with_tol(q, point, tol))
}

/// Deterministic ski rental metrics by sweeping every season length that matters.
///
/// For `x >= max(M, b)` the cost and the optimum are both constant, so the
/// sweep over `x = 1..=max(M, b)` is exhaustive.
pub fn dsr_metrics_sweep(m: PurchaseDay, y: u64, cfg: &DsrConfig) -> MetricsPair {
    let ratio = |x: u64| dsr_cost(m, x, cfg) / dsr_opt(x, cfg);
    let horizon = m.0.max(cfg.price());
    let robustness = (1..=horizon).map(ratio).fold(f64::NEG_INFINITY, f64::max);
    MetricsPair::new(ratio(y), robustness)
}

/// Every purchase day in `[1, y + b + 1]`.
///
/// Beyond `y + b + 1` both metrics only get worse, so the range is complete.
pub fn dsr_frontier(y: u64, cfg: &DsrConfig) -> Result<FrontierScan> {
    if y == 0 {
        return Err(Error::out_of_range("y", 0.0, "[1, inf)"));
    }
    let points = (1..=y + cfg.price() + 1)
        .map(|m| {
            (
                Decision::PurchaseDay(m),
                dsr_metrics_sweep(PurchaseDay(m), y, cfg),
            )
        })
        .collect();
    FrontierScan::from_points(y as f64, points)
}

/// Randomized ski rental metrics by evaluating the expected cost at each season length.
pub fn rsr_metrics_sweep(pi: &RentBuyDistribution, y: u64, cfg: &DsrConfig) -> MetricsPair {
    let ratio = |x: u64| rsr_expected_cost(pi, x, cfg) / dsr_opt(x, cfg);
    let horizon = pi.max_day().max(cfg.price()) + 1;
    let robustness = (1..=horizon).map(ratio).fold(f64::NEG_INFINITY, f64::max);
    MetricsPair::new(ratio(y), robustness)
}

/// One LP-optimal point per robustness budget.
///
/// Each point's metrics are re-measured from the LP's distribution by sweep.
pub fn rsr_frontier(y: u64, cfg: &DsrConfig, gamma_grid: &[f64]) -> Result<FrontierScan> {
    let mut points = Vec::with_capacity(gamma_grid.len());
    for &g in gamma_grid {
        let outcome = meta_rsr(y, cfg, g)?;
        points.push((
            Decision::RobustnessTarget(g),
            rsr_metrics_sweep(&outcome.distribution, y, cfg),
        ));
    }
    FrontierScan::from_points(y as f64, points)
}

/// Offset used to probe the floor-sale side of a threshold.
const BELOW: f64 = 1e-9;

/// Equally spaced prices on `[lo, hi]`, including both ends.
fn price_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let n = n.max(2);
    (0..n).map(move |k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
}

fn sup_ratio(phi: f64, xs: impl Iterator<Item = f64>, cfg: &OmsConfig) -> f64 {
    xs.map(|x| x / oms_reward(phi, x, cfg))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Worst ratio over maximum prices in `[lo, hi]`: a `grid`-point sweep plus
/// the band ends, `phi`, and a price just below `phi`.
fn band_sup(phi: f64, lo: f64, hi: f64, grid: usize, cfg: &OmsConfig) -> f64 {
    let probes = [lo, hi, phi, phi - BELOW];
    let extra = probes.into_iter().filter(move |&x| x >= lo && x <= hi);
    sup_ratio(phi, price_grid(lo, hi, grid).chain(extra), cfg)
}

/// One-max search metrics by sweeping the reward model over `x_grid` prices.
pub fn oms_metrics_sweep(phi: f64, y: f64, cfg: &OmsConfig, x_grid: usize) -> MetricsPair {
    let robustness = band_sup(phi, cfg.lower(), cfg.upper(), x_grid, cfg);
    MetricsPair::new(y / oms_reward(phi, y, cfg), robustness)
}

/// `(ε-consistency, robustness)` by sweeping the reward model.
pub fn oms_eps_metrics_sweep(
    phi: f64,
    y: f64,
    eps: f64,
    cfg: &OmsConfig,
    x_grid: usize,
) -> MetricsPair {
    let lo = cfg.lower().max(y - eps);
    let hi = cfg.upper().min(y + eps);
    MetricsPair::new(
        band_sup(phi, lo, hi, x_grid, cfg),
        band_sup(phi, cfg.lower(), cfg.upper(), x_grid, cfg),
    )
}

/// Price sweep used inside frontier scans.
pub const FRONTIER_X_GRID: usize = 101;

/// Thresholds on a `grid_size`-point grid over `[L, U]` plus `√(LU)`, `y`,
/// and any `extra` candidates (e.g. the thresholds under test).
///
/// With `eps = Some(ε)` consistency is replaced by ε-consistency.
pub fn oms_frontier(
    y: f64,
    cfg: &OmsConfig,
    grid_size: usize,
    extra: &[f64],
    eps: Option<f64>,
) -> Result<FrontierScan> {
    let (l, u) = (cfg.lower(), cfg.upper());
    if !(y >= l && y <= u) {
        return Err(Error::out_of_range("y", y, "[L, U]"));
    }
    if let Some(&bad) = extra.iter().find(|&&p| !(p >= l && p <= u)) {
        return Err(Error::out_of_range("threshold", bad, "[L, U]"));
    }
    let thresholds = price_grid(l, u, grid_size)
        .chain([cfg.geometric_mean(), y])
        .chain(extra.iter().copied());
    let points = thresholds
        .map(|phi| {
            let m = match eps {
                None => oms_metrics_sweep(phi, y, cfg, FRONTIER_X_GRID),
                Some(e) => oms_eps_metrics_sweep(phi, y, e, cfg, FRONTIER_X_GRID),
            };
            (Decision::Threshold(phi), m)
        })
        .collect();
    FrontierScan::from_points(y, points)
}
