//! Monthly one-max-search trading on daily closes.
//!
//! Each calendar month is one round: the trader sells exactly once, using a
//! threshold computed from a prediction of the month's maximum close. If the
//! threshold is never met, the last close of the month is taken. The score is
//! the cumulative sale proceeds over the cumulative monthly maxima.

use std::fmt;

use anyhow::{ensure, Result};
use predspec_core::metrics::{empirical_ratio, Objective};
use predspec_core::oms::{
    elyaniv_threshold, eps_pst_threshold, pst_threshold, run_ota, sun_threshold, OmsConfig,
    ThresholdPolicy,
};

/// One month of closes in date order.
#[derive(Clone, Debug, PartialEq)]
pub struct VixRound {
    /// `YYYY-MM`.
    pub month_id: String,
    pub daily_closes: Vec<f64>,
}

impl VixRound {
    pub fn max_close(&self) -> f64 {
        self.daily_closes.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Rounds plus the global price range.
#[derive(Clone, Debug, PartialEq)]
pub struct VixData {
    pub rounds: Vec<VixRound>,
    pub lower: f64,
    pub upper: f64,
}

impl VixData {
    pub fn oms_config(&self) -> Result<OmsConfig> {
        Ok(OmsConfig::new(self.lower, self.upper)?)
    }
}

/// `error_level·prev + (1 - error_level)·truth`.
pub fn make_prediction(prev_round_max: f64, true_round_max: f64, error_level: f64) -> f64 {
    error_level * prev_round_max + (1.0 - error_level) * true_round_max
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VixAlgorithm {
    /// Threshold equal to the prediction.
    BlindTrust,
    ElYaniv,
    Sun { lambda: f64 },
    Pst { lambda: f64 },
    EpsPst { lambda: f64, eps: f64 },
}

impl fmt::Display for VixAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VixAlgorithm::BlindTrust => write!(f, "blind-trust"),
            VixAlgorithm::ElYaniv => write!(f, "el-yaniv"),
            VixAlgorithm::Sun { lambda } => write!(f, "sun(lambda={lambda})"),
            VixAlgorithm::Pst { lambda } => write!(f, "pst(lambda={lambda})"),
            VixAlgorithm::EpsPst { lambda, eps } => write!(f, "eps-pst(lambda={lambda},eps={eps})"),
        }
    }
}

impl VixAlgorithm {
    pub fn threshold(&self, y: f64, cfg: &OmsConfig) -> Result<ThresholdPolicy> {
        Ok(match *self {
            VixAlgorithm::BlindTrust => ThresholdPolicy::custom(y, cfg)?,
            VixAlgorithm::ElYaniv => elyaniv_threshold(cfg),
            VixAlgorithm::Sun { lambda } => sun_threshold(y, cfg, lambda)?,
            VixAlgorithm::Pst { lambda } => pst_threshold(y, cfg, lambda)?,
            VixAlgorithm::EpsPst { lambda, eps } => eps_pst_threshold(y, cfg, lambda, eps)?,
        })
    }
}

/// Cumulative ratio after each traded round.
#[derive(Clone, Debug, PartialEq)]
pub struct VixSeries {
    pub algorithm: VixAlgorithm,
    /// `(month_id, cumulative ratio)` per traded round.
    pub cumulative: Vec<(String, f64)>,
}

impl VixSeries {
    pub fn final_ratio(&self) -> f64 {
        self.cumulative.last().map(|c| c.1).unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VixRunConfig {
    pub error_level: f64,
    /// Use the first month only as the prediction source for the second.
    pub lead_in: bool,
}

/// Trades every round with every algorithm.
///
/// Predictions interpolate between the previous month's maximum and the
/// current month's maximum and are clamped to `[L, U]`. Without a lead-in
/// month, the first round uses its own first close as the previous maximum.
pub fn run_vix(
    data: &VixData,
    algorithms: &[VixAlgorithm],
    cfg: &VixRunConfig,
) -> Result<Vec<VixSeries>> {
    ensure!(
        (0.0..=1.0).contains(&cfg.error_level),
        "error level must be in [0, 1], got {}",
        cfg.error_level
    );
    let start = usize::from(cfg.lead_in);
    ensure!(data.rounds.len() > start, "not enough rounds to trade");
    let oms = data.oms_config()?;
    algorithms
        .iter()
        .map(|alg| {
            let mut earned = 0.0;
            let mut best = 0.0;
            let mut cumulative = Vec::with_capacity(data.rounds.len() - start);
            for i in start..data.rounds.len() {
                let round = &data.rounds[i];
                let prev = if i == 0 {
                    round.daily_closes[0]
                } else {
                    data.rounds[i - 1].max_close()
                };
                let truth = round.max_close();
                let y = make_prediction(prev, truth, cfg.error_level).clamp(oms.lower(), oms.upper());
                let phi = alg.threshold(y, &oms)?.phi;
                earned += run_ota(phi, &round.daily_closes)?.price;
                best += truth;
                cumulative.push((
                    round.month_id.clone(),
                    empirical_ratio(earned, best, Objective::RewardMaximization)?,
                ));
            }
            Ok(VixSeries { algorithm: *alg, cumulative })
        })
        .collect()
}

/// Baselines and the two prediction-specific rules at the given parameters.
pub fn default_algorithms(lambda: f64, eps: f64) -> Vec<VixAlgorithm> {
    vec![
        VixAlgorithm::BlindTrust,
        VixAlgorithm::ElYaniv,
        VixAlgorithm::Sun { lambda },
        VixAlgorithm::Pst { lambda },
        VixAlgorithm::EpsPst { lambda, eps },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data() -> VixData {
        let r = |id: &str, c: &[f64]| VixRound { month_id: id.into(), daily_closes: c.to_vec() };
        VixData {
            rounds: vec![
                r("2021-01", &[12.0, 15.0, 13.0]),
                r("2021-02", &[14.0, 19.0, 11.0]),
                r("2021-03", &[10.0, 12.0, 20.0]),
            ],
            lower: 10.0,
            upper: 20.0,
        }
    }

    #[test]
    fn prediction_interpolates() {
        assert_eq!(make_prediction(10.0, 20.0, 1.0), 10.0);
        assert_eq!(make_prediction(10.0, 20.0, 0.0), 20.0);
        assert_eq!(make_prediction(10.0, 20.0, 0.5), 15.0);
    }

    #[test]
    fn el_yaniv_ignores_error_level() {
        let d = data();
        let run = |e| {
            run_vix(&d, &[VixAlgorithm::ElYaniv], &VixRunConfig { error_level: e, lead_in: false })
                .unwrap()
        };
        assert_eq!(run(0.0), run(1.0));
        // √200 ≈ 14.14: sells 15, 19, 20 against maxima 15, 19, 20.
        assert!((run(0.3)[0].final_ratio() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn blind_trust_with_perfect_predictions_hits_each_max() {
        let d = data();
        let s = run_vix(&d, &[VixAlgorithm::BlindTrust], &VixRunConfig { error_level: 0.0, lead_in: false })
            .unwrap();
        assert_eq!(s[0].cumulative.len(), 3);
        assert!((s[0].final_ratio() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lead_in_skips_first_round() {
        let d = data();
        let s = run_vix(&d, &default_algorithms(0.5, 0.5), &VixRunConfig { error_level: 1.0, lead_in: true })
            .unwrap();
        assert!(s.iter().all(|s| s.cumulative.len() == 2 && s.cumulative[0].0 == "2021-02"));
        assert!(s.iter().all(|s| s.final_ratio() > 0.0 && s.final_ratio() <= 1.0));
    }
}
