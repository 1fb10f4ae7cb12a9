//! One-max search with a predicted maximum price.
//!
//! Prices lie in `[L, U]`. A threshold rule accepts the first price at least
//! `phi`; if no such price arrives, the analysis model pays the floor `L`.
//! Ratios are reported as OPT/ALG so that they share the cost orientation
//! used elsewhere in the crate.

use crate::math::sqrt;
use crate::metrics::MetricsPair;
use crate::{Error, Result};

/// Price floor and ceiling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OmsConfig {
    lower: f64,
    upper: f64,
}

impl OmsConfig {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower > 0.0 && lower.is_finite()) {
            return Err(Error::out_of_range("L", lower, "(0, inf)"));
        }
        if !(upper > lower && upper.is_finite()) {
            return Err(Error::out_of_range("U", upper, "(L, inf)"));
        }
        Ok(OmsConfig { lower, upper })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    /// `θ = U / L`.
    pub fn theta(&self) -> f64 {
        self.upper / self.lower
    }

    /// `√(LU)`, the classic threshold.
    pub fn geometric_mean(&self) -> f64 {
        sqrt(self.lower * self.upper)
    }

    fn check_price(&self, name: &'static str, v: f64) -> Result<()> {
        if v >= self.lower && v <= self.upper {
            Ok(())
        } else {
            Err(Error::out_of_range(name, v, "[L, U]"))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdKind {
    ElYaniv,
    Sun,
    Pst,
    EpsPst,
    Custom,
}

/// An acceptance threshold together with the parameters that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdPolicy {
    pub phi: f64,
    pub kind: ThresholdKind,
    pub lambda: Option<f64>,
    pub eps: Option<f64>,
    /// The prediction level at which PST-style rules stop using `√(LU)`.
    pub switch_point: Option<f64>,
    /// Set when `ε` exceeds the range in which ε-PST is known to be optimal.
    pub eps_outside_guarantee: bool,
}

impl ThresholdPolicy {
    /// A fixed threshold, e.g. `phi = y` for blind trust.
    pub fn custom(phi: f64, cfg: &OmsConfig) -> Result<Self> {
        cfg.check_price("phi", phi)?;
        Ok(Self::plain(phi, ThresholdKind::Custom))
    }

    fn plain(phi: f64, kind: ThresholdKind) -> Self {
        ThresholdPolicy {
            phi,
            kind,
            lambda: None,
            eps: None,
            switch_point: None,
            eps_outside_guarantee: false,
        }
    }
}

/// Clamps a constructed threshold into `[L, U]`, rejecting anything that is
/// more than rounding noise away from the range.
fn clamp_threshold(phi: f64, cfg: &OmsConfig) -> Result<f64> {
    let slack = 1e-12 * cfg.upper.max(1.0);
    if !phi.is_finite() || phi < cfg.lower - slack || phi > cfg.upper + slack {
        return Err(Error::out_of_range("threshold", phi, "[L, U]"));
    }
    Ok(phi.clamp(cfg.lower, cfg.upper))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if (0.0..=1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::out_of_range("lambda", lambda, "[0, 1]"))
    }
}

/// Analysis-model reward: `phi` if the maximum price reaches it, else `L`.
pub fn oms_reward(phi: f64, x_max: f64, cfg: &OmsConfig) -> f64 {
    if phi <= x_max {
        phi
    } else {
        cfg.lower
    }
}

/// `(y / reward(phi, y), max(phi / L, U / phi))`.
pub fn oms_metrics(phi: f64, y: f64, cfg: &OmsConfig) -> MetricsPair {
    MetricsPair::new(y / oms_reward(phi, y, cfg), oms_robustness(phi, cfg))
}

/// Worst-case ratio over all maximum prices in `[L, U]`.
pub fn oms_robustness(phi: f64, cfg: &OmsConfig) -> f64 {
    (phi / cfg.lower).max(cfg.upper / phi)
}

/// Worst ratio over maximum prices within `ε` of the prediction.
///
/// Prices just below `phi` pay the floor, so the supremum over that branch
/// is taken at its closed end `min(phi, y + ε)`.
pub fn eps_consistency(phi: f64, y: f64, eps: f64, cfg: &OmsConfig) -> f64 {
    let lo = cfg.lower.max(y - eps);
    let hi = cfg.upper.min(y + eps);
    if phi > hi {
        hi / cfg.lower
    } else if phi <= lo {
        hi / phi
    } else {
        (phi / cfg.lower).max(hi / phi)
    }
}

/// `ε`-consistency paired with robustness.
pub fn oms_eps_metrics(phi: f64, y: f64, eps: f64, cfg: &OmsConfig) -> MetricsPair {
    MetricsPair::new(eps_consistency(phi, y, eps, cfg), oms_robustness(phi, cfg))
}

/// El-Yaniv's prediction-free threshold `√(LU)`.
pub fn elyaniv_threshold(cfg: &OmsConfig) -> ThresholdPolicy {
    ThresholdPolicy::plain(cfg.geometric_mean(), ThresholdKind::ElYaniv)
}

/// Sun et al.'s consistency level `β`; `γ = θ/β`. At `λ = 0` the limit is 1.
pub fn sun_beta(cfg: &OmsConfig, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return 1.0;
    }
    let theta = cfg.theta();
    let a = 1.0 - lambda;
    2.0 * lambda * theta / (sqrt(a * a + 4.0 * lambda * theta) - a)
}

/// Sun et al.'s learning-augmented threshold.
pub fn sun_threshold(y: f64, cfg: &OmsConfig, lambda: f64) -> Result<ThresholdPolicy> {
    check_lambda(lambda)?;
    cfg.check_price("y", y)?;
    let l = cfg.lower;
    let beta = sun_beta(cfg, lambda);
    let gamma = cfg.theta() / beta;
    let phi = if y < l * beta {
        l * beta
    } else if y < l * gamma {
        lambda * l * gamma + (1.0 - lambda) * y / beta
    } else {
        l * gamma
    };
    Ok(ThresholdPolicy {
        lambda: Some(lambda),
        ..ThresholdPolicy::plain(clamp_threshold(phi, cfg)?, ThresholdKind::Sun)
    })
}

/// PST's switch point `λL + (1 - λ)√(LU)`.
pub fn pst_switch_point(cfg: &OmsConfig, lambda: f64) -> f64 {
    lambda * cfg.lower + (1.0 - lambda) * cfg.geometric_mean()
}

/// Prediction-specific thresholding.
///
/// `√(LU)` for low predictions, the prediction itself in the middle band, and
/// a convex combination of `√(LU)` and `y` for predictions above `√(LU)`.
pub fn pst_threshold(y: f64, cfg: &OmsConfig, lambda: f64) -> Result<ThresholdPolicy> {
    check_lambda(lambda)?;
    cfg.check_price("y", y)?;
    let g = cfg.geometric_mean();
    let m = pst_switch_point(cfg, lambda);
    let phi = if y <= m {
        g
    } else if y <= g {
        y
    } else {
        let w = (1.0 - lambda) * sqrt(cfg.theta());
        let mu = w / (w + lambda);
        mu * g + (1.0 - mu) * y
    };
    Ok(ThresholdPolicy {
        lambda: Some(lambda),
        switch_point: Some(m),
        ..ThresholdPolicy::plain(clamp_threshold(phi, cfg)?, ThresholdKind::Pst)
    })
}

/// PST's guarantee, case by case.
pub fn pst_theoretical_metrics(y: f64, cfg: &OmsConfig, lambda: f64) -> Result<MetricsPair> {
    check_lambda(lambda)?;
    cfg.check_price("y", y)?;
    let (l, u) = (cfg.lower, cfg.upper);
    let g = cfg.geometric_mean();
    let m = pst_switch_point(cfg, lambda);
    Ok(if y < m {
        MetricsPair::new(y / l, sqrt(cfg.theta()))
    } else if y <= g {
        MetricsPair::new(1.0, u / y)
    } else {
        let a = 1.0 - lambda;
        let top = a * u + lambda * y;
        MetricsPair::new(
            (a * sqrt(cfg.theta()) * y + lambda * y) / top,
            top / (a * g + lambda * l),
        )
    })
}

/// ε-PST's switch point `λ(L + 3ε) + (1 - λ)(√(LU) - ε)`.
pub fn eps_pst_switch_point(cfg: &OmsConfig, lambda: f64, eps: f64) -> f64 {
    lambda * (cfg.lower + 3.0 * eps) + (1.0 - lambda) * (cfg.geometric_mean() - eps)
}

/// Largest tolerance for which ε-PST is known to be optimal: `(√(LU) - L)/4`.
pub fn eps_guarantee_limit(cfg: &OmsConfig) -> f64 {
    (cfg.geometric_mean() - cfg.lower) / 4.0
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::out_of_range("eps", eps, "(0, inf)"))
    }
}

fn eps_pst_mu(cfg: &OmsConfig, m: f64, eps: f64) -> f64 {
    let (l, u) = (cfg.lower, cfg.upper);
    let top = u - 2.0 * eps;
    (top - l * u / (m - eps)) / (top - cfg.geometric_mean())
}

/// Error-tolerant prediction-specific thresholding.
pub fn eps_pst_threshold(
    y: f64,
    cfg: &OmsConfig,
    lambda: f64,
    eps: f64,
) -> Result<ThresholdPolicy> {
    check_lambda(lambda)?;
    check_eps(eps)?;
    cfg.check_price("y", y)?;
    let (l, u) = (cfg.lower, cfg.upper);
    let g = cfg.geometric_mean();
    let m = eps_pst_switch_point(cfg, lambda, eps);
    let phi = if y <= m - 2.0 * eps {
        g
    } else if y < m {
        m - eps
    } else if y <= g + eps {
        y - eps
    } else if y < u - eps {
        let mu = eps_pst_mu(cfg, m, eps);
        mu * g + (1.0 - mu) * (y - eps)
    } else {
        l * u / (m - eps)
    };
    Ok(ThresholdPolicy {
        lambda: Some(lambda),
        eps: Some(eps),
        switch_point: Some(m),
        eps_outside_guarantee: eps > eps_guarantee_limit(cfg),
        ..ThresholdPolicy::plain(clamp_threshold(phi, cfg)?, ThresholdKind::EpsPst)
    })
}

/// ε-PST's guarantee in `(ε-consistency, robustness)` form, case by case.
pub fn eps_pst_theoretical_metrics(
    y: f64,
    cfg: &OmsConfig,
    lambda: f64,
    eps: f64,
) -> Result<MetricsPair> {
    check_lambda(lambda)?;
    check_eps(eps)?;
    cfg.check_price("y", y)?;
    let (l, u) = (cfg.lower, cfg.upper);
    let g = cfg.geometric_mean();
    let m = eps_pst_switch_point(cfg, lambda, eps);
    Ok(if y <= m - 2.0 * eps {
        MetricsPair::new((y + eps) / l, sqrt(cfg.theta()))
    } else if y < m {
        MetricsPair::new((m - eps) / l, u / (m - eps))
    } else if y <= g + eps {
        MetricsPair::new((y + eps) / (y - eps), u / (y - eps))
    } else if y < u - eps {
        let mu = eps_pst_mu(cfg, m, eps);
        let phi = mu * g + (1.0 - mu) * (y - eps);
        MetricsPair::new((y + eps) / phi, phi / l)
    } else {
        MetricsPair::new((m - eps) / l, u / (m - eps))
    })
}

/// ε-PST's worst case over all predictions: `((M - ε)/L, U/(M - ε))`.
pub fn eps_pst_global_metrics(cfg: &OmsConfig, lambda: f64, eps: f64) -> Result<MetricsPair> {
    check_lambda(lambda)?;
    check_eps(eps)?;
    let me = eps_pst_switch_point(cfg, lambda, eps) - eps;
    Ok(MetricsPair::new(me / cfg.lower, cfg.upper / me))
}

/// Result of running a threshold over a price path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OtaOutcome {
    pub price: f64,
    /// `None` when the threshold was never met and the last price was taken.
    pub index: Option<usize>,
}

/// Accepts the first price at least `phi`, otherwise sells at the final price.
pub fn run_ota(phi: f64, prices: &[f64]) -> Result<OtaOutcome> {
    let last = *prices.last().ok_or(Error::Empty("price sequence"))?;
    Ok(match prices.iter().position(|&p| p >= phi) {
        Some(i) => OtaOutcome {
            price: prices[i],
            index: Some(i),
        },
        None => OtaOutcome {
            price: last,
            index: None,
        },
    })
}
