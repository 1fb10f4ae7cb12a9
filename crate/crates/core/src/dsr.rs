//! Deterministic discrete-time ski rental.
//!
//! Renting costs 1 per day and buying costs `b`. A deterministic rule is a
//! purchase day `M`: the skier rents on days `1..M` and buys at the start of
//! day `M` if still skiing.

use crate::math::ceil;
use crate::metrics::MetricsPair;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DsrConfig {
    price: u64,
}

impl DsrConfig {
    pub fn new(price: u64) -> Result<Self> {
        if price < 2 {
            return Err(Error::out_of_range("b", price as f64, "[2, inf)"));
        }
        Ok(DsrConfig { price })
    }

    /// Purchase price `b`.
    pub fn price(&self) -> u64 {
        self.price
    }

    pub(crate) fn b(&self) -> f64 {
        self.price as f64
    }
}

/// Buy at the start of this day (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PurchaseDay(pub u64);

/// Cost of buying on day `m` when the season lasts `x` days.
pub fn dsr_cost(m: PurchaseDay, x: u64, cfg: &DsrConfig) -> f64 {
    if m.0 > x {
        x as f64
    } else {
        cfg.b() + m.0 as f64 - 1.0
    }
}

/// Offline optimum `min(b, x)`.
pub fn dsr_opt(x: u64, cfg: &DsrConfig) -> f64 {
    x.min(cfg.price) as f64
}

fn check_open_unit(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < 1.0 {
        Ok(())
    } else {
        Err(Error::out_of_range("lambda", lambda, "(0, 1)"))
    }
}

fn check_prediction(y: u64) -> Result<()> {
    if y == 0 {
        Err(Error::out_of_range("y", 0.0, "[1, inf)"))
    } else {
        Ok(())
    }
}

/// Always buy on day `b`.
pub fn classic_decision(cfg: &DsrConfig) -> PurchaseDay {
    PurchaseDay(cfg.price)
}

/// Kumar et al.'s rule: day `⌈λb⌉` if `y >= b`, otherwise day `⌈b/λ⌉`.
pub fn kd_decision(y: u64, cfg: &DsrConfig, lambda: f64) -> Result<PurchaseDay> {
    check_open_unit(lambda)?;
    check_prediction(y)?;
    let day = if y >= cfg.price {
        ceil(lambda * cfg.b())
    } else {
        ceil(cfg.b() / lambda)
    };
    Ok(PurchaseDay(day.max(1.0) as u64))
}

/// Upper end of the prediction band in which PDSR buys on day `y + 1`.
fn pdsr_switch(cfg: &DsrConfig, lambda: f64) -> f64 {
    let b = cfg.b();
    (b * (lambda + 1.0) - 1.0).min((b - 1.0) / lambda)
}

/// Prediction-specific deterministic rule.
///
/// Buys on day `b` when `y < b`, on day `y + 1` when
/// `b <= y <= min{b(λ+1) - 1, (b-1)/λ}`, and on day `⌈λb⌉` otherwise. The band
/// boundary is compared as a real number against the integer `y`.
pub fn pdsr_decision(y: u64, cfg: &DsrConfig, lambda: f64) -> Result<PurchaseDay> {
    check_open_unit(lambda)?;
    check_prediction(y)?;
    if y < cfg.price {
        return Ok(PurchaseDay(cfg.price));
    }
    if (y as f64) <= pdsr_switch(cfg, lambda) {
        Ok(PurchaseDay(y + 1))
    } else {
        Ok(PurchaseDay(ceil(lambda * cfg.b()).max(1.0) as u64))
    }
}

/// Closed-form consistency and robustness of purchase day `m` under prediction `y`.
pub fn dsr_metrics(m: PurchaseDay, y: u64, cfg: &DsrConfig) -> MetricsPair {
    let b = cfg.b();
    let md = m.0 as f64;
    let yd = y as f64;
    let buy_cost = md - 1.0 + b;
    let consistency = match (m.0 <= y, y < cfg.price) {
        (true, true) => buy_cost / yd,
        (false, true) => 1.0,
        (true, false) => buy_cost / b,
        (false, false) => yd / b,
    };
    let robustness = if m.0 <= cfg.price {
        buy_cost / md
    } else {
        buy_cost / b
    };
    MetricsPair::new(consistency, robustness)
}

/// PDSR's guarantee, case by case.
pub fn pdsr_theoretical_metrics(y: u64, cfg: &DsrConfig, lambda: f64) -> Result<MetricsPair> {
    check_open_unit(lambda)?;
    check_prediction(y)?;
    let b = cfg.b();
    let yd = y as f64;
    if y < cfg.price {
        Ok(MetricsPair::new(1.0, 2.0 - 1.0 / b))
    } else if yd <= pdsr_switch(cfg, lambda) {
        Ok(MetricsPair::new(yd / b, 1.0 + yd / b))
    } else {
        let m = ceil(lambda * b).max(1.0);
        Ok(MetricsPair::new((m - 1.0 + b) / b, (m - 1.0 + b) / m))
    }
}
