//! Randomized discrete-time ski rental.
//!
//! A randomized rule is a distribution over purchase days. This module holds
//! the expected-cost model, equalizing distributions (every horizon in a day
//! range sees the same expected ratio), the two mass-moving transformations
//! used by PRSR, the classic Karlin and Kumar et al. baselines, and the
//! LP-based bi-level construction over the support `[b] ∪ {y + 1}`.

use alloc::vec;
use alloc::vec::Vec;

use crate::dsr::DsrConfig;
use crate::linprog::{solve_lp, solve_linear_system, LinearProgram};
use crate::math::{ceil, floor, ln, powf};
use crate::metrics::MetricsPair;
use crate::{Error, Result};

/// Masses in `[-CLAMP_TOL, 0)` are treated as rounding noise and zeroed.
pub const CLAMP_TOL: f64 = 1e-12;
/// Allowed deviation of the total mass from one.
pub const SUM_TOL: f64 = 1e-9;

/// Probability of buying at the start of each day. Finite support, sorted by day.
#[derive(Clone, Debug, PartialEq)]
pub struct RentBuyDistribution {
    masses: Vec<(u64, f64)>,
}

impl RentBuyDistribution {
    /// Builds a distribution from `(day, mass)` pairs.
    ///
    /// Days must be positive. Duplicate days are merged, masses within
    /// [`CLAMP_TOL`] of zero are dropped, and the result is renormalized.
    /// The input total must already be one within [`SUM_TOL`].
    pub fn from_masses(pairs: impl IntoIterator<Item = (u64, f64)>) -> Result<Self> {
        let mut masses: Vec<(u64, f64)> = Vec::new();
        for (day, mass) in pairs {
            if day == 0 {
                return Err(Error::out_of_range("day", 0.0, "[1, inf)"));
            }
            if !mass.is_finite() {
                return Err(Error::out_of_range("mass", mass, "finite values"));
            }
            if mass < -CLAMP_TOL {
                return Err(Error::NegativeMass { day, mass });
            }
            if mass > CLAMP_TOL {
                masses.push((day, mass));
            }
        }
        masses.sort_by_key(|&(d, _)| d);
        masses.dedup_by(|later, earlier| {
            if later.0 == earlier.0 {
                earlier.1 += later.1;
                true
            } else {
                false
            }
        });
        masses.retain(|&(_, m)| m > 0.0);
        let total: f64 = masses.iter().map(|&(_, m)| m).sum();
        if masses.is_empty() || (total - 1.0).abs() > SUM_TOL {
            return Err(Error::out_of_range("total mass", total, "1 ± 1e-9"));
        }
        for (_, m) in masses.iter_mut() {
            *m /= total;
        }
        Ok(RentBuyDistribution { masses })
    }

    pub fn point_mass(day: u64) -> Result<Self> {
        Self::from_masses([(day, 1.0)])
    }

    /// `(day, mass)` pairs with positive mass, sorted by day.
    pub fn masses(&self) -> &[(u64, f64)] {
        &self.masses
    }

    pub fn mass_at(&self, day: u64) -> f64 {
        self.masses
            .binary_search_by_key(&day, |&(d, _)| d)
            .map(|i| self.masses[i].1)
            .unwrap_or(0.0)
    }

    pub fn max_day(&self) -> u64 {
        self.masses.last().map(|&(d, _)| d).unwrap_or(0)
    }

    pub fn total(&self) -> f64 {
        self.masses.iter().map(|&(_, m)| m).sum()
    }

    /// Inverse-CDF lookup for a uniform draw `u ∈ [0, 1)`.
    pub fn quantile(&self, u: f64) -> u64 {
        let target = u * self.total();
        let mut acc = 0.0;
        for &(day, m) in &self.masses {
            acc += m;
            if target < acc {
                return day;
            }
        }
        self.max_day()
    }

    fn dense(&self, len: usize) -> Vec<f64> {
        let mut v = vec![0.0; len + 1];
        for &(d, m) in &self.masses {
            v[d as usize] += m;
        }
        v
    }
}

/// Cost of buying on `day` when the season lasts `x` days.
#[inline]
fn day_cost(day: u64, x: u64, b: f64) -> f64 {
    if day > x {
        x as f64
    } else {
        b + day as f64 - 1.0
    }
}

#[inline]
fn opt(x: u64, cfg: &DsrConfig) -> f64 {
    x.min(cfg.price()) as f64
}

/// Expected cost `Σ_i π_i (x·1{i > x} + (b + i - 1)·1{i ≤ x})`.
pub fn rsr_expected_cost(pi: &RentBuyDistribution, x: u64, cfg: &DsrConfig) -> f64 {
    let b = cfg.b();
    pi.masses.iter().map(|&(d, m)| m * day_cost(d, x, b)).sum()
}

/// Expected cost over the offline optimum for season length `x`.
pub fn rsr_ratio(pi: &RentBuyDistribution, x: u64, cfg: &DsrConfig) -> Result<f64> {
    if x == 0 {
        return Err(Error::out_of_range("x", 0.0, "[1, inf)"));
    }
    Ok(rsr_expected_cost(pi, x, cfg) / opt(x, cfg))
}

/// Ratio profile `R(π, x)` for `x = 1..=horizon`, by a single prefix sweep.
fn ratio_profile(pi: &RentBuyDistribution, horizon: u64, cfg: &DsrConfig) -> Vec<f64> {
    let b = cfg.b();
    let total = pi.total();
    let mut out = Vec::with_capacity(horizon as usize);
    let mut bought_mass = 0.0;
    let mut bought_cost = 0.0;
    let mut next = 0;
    for x in 1..=horizon {
        while next < pi.masses.len() && pi.masses[next].0 <= x {
            let (d, m) = pi.masses[next];
            bought_mass += m;
            bought_cost += m * (b + d as f64 - 1.0);
            next += 1;
        }
        let cost = bought_cost + x as f64 * (total - bought_mass);
        out.push(cost / opt(x, cfg));
    }
    out
}

/// Largest `R(π, x)` over all season lengths.
///
/// Past `max(max_day, b)` the numerator is constant and the denominator is
/// `b`, so the finite sweep is exact.
pub fn rsr_robustness(pi: &RentBuyDistribution, cfg: &DsrConfig) -> f64 {
    let horizon = pi.max_day().max(cfg.price());
    ratio_profile(pi, horizon, cfg)
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `(R(π, y), sup_x R(π, x))`.
pub fn rsr_metrics(pi: &RentBuyDistribution, y: u64, cfg: &DsrConfig) -> Result<MetricsPair> {
    Ok(MetricsPair::new(
        rsr_ratio(pi, y, cfg)?,
        rsr_robustness(pi, cfg),
    ))
}

/// `e_b = (1 + 1/(b - 1))^b`.
pub fn e_b(cfg: &DsrConfig) -> f64 {
    let b = cfg.b();
    powf(1.0 + 1.0 / (b - 1.0), b)
}

/// Optimal randomized competitive ratio `e_b / (e_b - 1)`.
pub fn gamma_xi(cfg: &DsrConfig) -> f64 {
    let e = e_b(cfg);
    e / (e - 1.0)
}

/// The distribution on `{m, ..., n}` whose ratio is the same for every `x` in that range.
pub fn equalizing_distribution(m: u64, n: u64, cfg: &DsrConfig) -> Result<RentBuyDistribution> {
    if m < 1 || m > n || n > cfg.price() {
        return Err(Error::out_of_range(
            "equalizing range",
            n as f64,
            "1 <= m <= n <= b",
        ));
    }
    let b = cfg.b();
    let q = b / (b - 1.0);
    let md = m as f64;
    let first = 1.0 / (1.0 + (md + b - 1.0) / md * (powf(q, (n - m) as f64) - 1.0));
    let step = first * (md + b - 1.0) / (md * (b - 1.0));
    let pairs = core::iter::once((m, first))
        .chain(((m + 1)..=n).map(|i| (i, step * powf(q, (i - m - 1) as f64))));
    RentBuyDistribution::from_masses(pairs)
}

/// Karlin's distribution, the equalizing distribution on `[1, b]`.
pub fn karlin_distribution(cfg: &DsrConfig) -> RentBuyDistribution {
    equalizing_distribution(1, cfg.price(), cfg).expect("[1, b] is a valid range")
}

/// Kumar et al.'s randomized rule with trade-off parameter `λ ∈ (1/b, 1)`.
pub fn kr_distribution(y: u64, cfg: &DsrConfig, lambda: f64) -> Result<RentBuyDistribution> {
    let b = cfg.b();
    if !(lambda > 1.0 / b && lambda < 1.0) {
        return Err(Error::out_of_range("lambda", lambda, "(1/b, 1)"));
    }
    let m = if y < cfg.price() {
        ceil(b / lambda)
    } else {
        floor(lambda * b)
    } as u64;
    let r = (b - 1.0) / b;
    let norm = b * (1.0 - powf(r, m as f64));
    RentBuyDistribution::from_masses((1..=m).map(|i| (i, powf(r, (m - i) as f64) / norm)))
}

/// Moves all mass beyond day `b` onto day `b`.
pub fn collapse_tail(pi: &RentBuyDistribution, cfg: &DsrConfig) -> RentBuyDistribution {
    let b = cfg.price();
    let masses = pi.masses.iter().map(|&(d, m)| (d.min(b), m)).collect::<Vec<_>>();
    RentBuyDistribution::from_masses(masses).expect("collapsing preserves validity")
}

/// Coefficients of `R(·, x)` over the given support days.
fn ratio_row(support: &[u64], x: u64, cfg: &DsrConfig) -> Vec<f64> {
    let b = cfg.b();
    let o = opt(x, cfg);
    support.iter().map(|&d| day_cost(d, x, b) / o).collect()
}

/// Consistency boosting for `y >= b`.
///
/// Starting from `π^eq[1, n]`, mass is moved from the highest support day
/// `r` to day `y + 1` while `R(π, y + 1)` stays below the initial robustness.
/// The last move is partial, sized by a 2×2 solve so that `R(π, y + 1)`
/// equals the initial robustness. Reaching `r = 1` returns the two-point
/// distribution `{1: 1/b, b + 1: (b - 1)/b}`.
pub fn operation_a(
    initial: &RentBuyDistribution,
    y: u64,
    cfg: &DsrConfig,
) -> Result<RentBuyDistribution> {
    let bp = cfg.price();
    if y < bp {
        return Err(Error::out_of_range("y", y as f64, "[b, inf)"));
    }
    let n = initial.max_day();
    if n > bp {
        return Err(Error::out_of_range(
            "initial support",
            n as f64,
            "days within [1, b]",
        ));
    }
    let b = cfg.b();
    let gamma = rsr_robustness(initial, cfg);
    let top = (y + 1) as usize;
    let mut pi = initial.dense(top);
    // R(π, y + 1): every support day is at most y + 1 and min(b, y + 1) = b.
    let ratio_at_top = |pi: &[f64]| -> f64 {
        pi.iter()
            .enumerate()
            .skip(1)
            .map(|(d, m)| m * (b + d as f64 - 1.0))
            .sum::<f64>()
            / b
    };

    let mut r = n;
    loop {
        if r == 1 {
            return RentBuyDistribution::from_masses([(1, 1.0 / b), (bp + 1, (b - 1.0) / b)]);
        }
        if r + bp <= y + 1 {
            break;
        }
        let ri = r as usize;
        let trial_top = pi[top] + pi[ri];
        let mut trial = pi.clone();
        trial[top] = trial_top;
        trial[ri] = 0.0;
        if ratio_at_top(&trial) < gamma {
            pi = trial;
            r -= 1;
            continue;
        }
        // Partial move: π'_r + π'_{y+1} = movable mass and R(π', y + 1) = γ.
        let movable = pi[ri] + pi[top];
        let fixed: f64 = (1..ri).map(|d| pi[d] * (b + d as f64 - 1.0)).sum::<f64>() / b;
        let a = vec![
            vec![1.0, 1.0],
            vec![(b + r as f64 - 1.0) / b, (b + y as f64) / b],
        ];
        let sol = solve_linear_system(&a, &[movable, gamma - fixed])?;
        pi[ri] = sol[0];
        pi[top] = sol[1];
        break;
    }
    RentBuyDistribution::from_masses(
        pi.into_iter()
            .enumerate()
            .skip(1)
            .map(|(d, m)| (d as u64, m)),
    )
}

/// Solves for a distribution on `support` with `Σπ = 1` and `R(π, x)` equal
/// to a common value on `eq_days`. With `gamma = None` the common value is an
/// unknown (so `eq_days` has as many days as `support`); otherwise it is fixed
/// and `eq_days` has one day fewer.
fn equalize_on(
    support: &[u64],
    eq_days: &[u64],
    gamma: Option<f64>,
    cfg: &DsrConfig,
) -> Result<(Vec<f64>, f64)> {
    let k = support.len();
    let free_gamma = gamma.is_none();
    let dim = if free_gamma { k + 1 } else { k };
    if eq_days.len() + 1 != dim {
        return Err(Error::DimensionMismatch("equalizing system"));
    }
    let mut a = Vec::with_capacity(dim);
    let mut rhs = Vec::with_capacity(dim);
    let mut sum_row = vec![1.0; k];
    if free_gamma {
        sum_row.push(0.0);
    }
    a.push(sum_row);
    rhs.push(1.0);
    for &x in eq_days {
        let mut row = ratio_row(support, x, cfg);
        match gamma {
            None => {
                row.push(-1.0);
                rhs.push(0.0);
            }
            Some(g) => rhs.push(g),
        }
        a.push(row);
    }
    let sol = solve_linear_system(&a, &rhs)?;
    let g = gamma.unwrap_or_else(|| sol[k]);
    Ok((sol[..k].to_vec(), g))
}

/// Robustness seeking for `y < b`.
///
/// Starting from `π^eq[y + 1, b]`, grows the support `{1..r} ∪ {y+1..b}`
/// until its equalized ratio drops to at most `gamma`, then fixes the ratio
/// at exactly `gamma` on `{1..r-1} ∪ {y+1..b}`.
pub fn operation_b(
    initial: &RentBuyDistribution,
    gamma: f64,
    y: u64,
    cfg: &DsrConfig,
) -> Result<RentBuyDistribution> {
    let bp = cfg.price();
    if y == 0 || y >= bp {
        return Err(Error::out_of_range("y", y as f64, "[1, b)"));
    }
    let floor_gamma = gamma_xi(cfg);
    if gamma < floor_gamma - 1e-12 {
        return Err(Error::Infeasible);
    }
    let upper: Vec<u64> = ((y + 1)..=bp).collect();
    let gamma_nu = rsr_robustness(initial, cfg);
    if gamma >= gamma_nu {
        return Ok(initial.clone());
    }
    let mut r = 1;
    loop {
        let support: Vec<u64> = (1..=r).chain(upper.iter().copied()).collect();
        let (_, equalized) = equalize_on(&support, &support, None, cfg)?;
        if equalized > gamma + 1e-12 && r < y {
            r += 1;
            continue;
        }
        let eq_days: Vec<u64> = (1..r).chain(upper.iter().copied()).collect();
        let (masses, _) = equalize_on(&support, &eq_days, Some(gamma), cfg)?;
        return RentBuyDistribution::from_masses(support.into_iter().zip(masses));
    }
}

/// Quantities PRSR derives from its robustness budget.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RsrTargets {
    pub gamma_bar: f64,
    pub e_b: f64,
    /// Smallest `n` such that `π^eq[1, n]` is `gamma_bar`-robust.
    pub n: u64,
    /// Robustness of `π^eq[1, n]`.
    pub gamma_prime: f64,
    /// Robustness of `π^eq[y + 1, b]`; only defined for `y < b`.
    pub gamma_nu: Option<f64>,
    pub gamma_xi: f64,
}

/// Budget checks and derived targets for PRSR; `γ̄ ∈ [e_b/(e_b - 1), b - 2)`.
pub fn prsr_targets(y: u64, cfg: &DsrConfig, gamma_bar: f64) -> Result<RsrTargets> {
    if y == 0 {
        return Err(Error::out_of_range("y", 0.0, "[1, inf)"));
    }
    let b = cfg.b();
    let xi = gamma_xi(cfg);
    if !(gamma_bar >= xi - 1e-12 && gamma_bar < b - 2.0) {
        return Err(Error::out_of_range(
            "gamma_bar",
            gamma_bar,
            "[e_b/(e_b-1), b-2)",
        ));
    }
    let q = b / (b - 1.0);
    let exact_n = ln(1.0 + 1.0 / (gamma_bar - 1.0)) / ln(q);
    // At γ̄ = e_b/(e_b - 1) the logarithm is b up to rounding.
    let n = (ceil(exact_n - 1e-9).max(1.0) as u64).min(cfg.price());
    let gamma_prime = 1.0 / (powf(q, n as f64) - 1.0) + 1.0;
    let gamma_nu = if y < cfg.price() {
        Some(rsr_robustness(&equalizing_distribution(y + 1, cfg.price(), cfg)?, cfg))
    } else {
        None
    };
    Ok(RsrTargets {
        gamma_bar,
        e_b: e_b(cfg),
        n,
        gamma_prime,
        gamma_nu,
        gamma_xi: xi,
    })
}

/// Prediction-specific randomized ski rental.
pub fn prsr(y: u64, cfg: &DsrConfig, gamma_bar: f64) -> Result<RentBuyDistribution> {
    let t = prsr_targets(y, cfg, gamma_bar)?;
    match t.gamma_nu {
        None => operation_a(&equalizing_distribution(1, t.n, cfg)?, y, cfg),
        Some(nu) => {
            let start = equalizing_distribution(y + 1, cfg.price(), cfg)?;
            operation_b(&start, nu.min(t.gamma_prime), y, cfg)
        }
    }
}

/// Support `[b] ∪ {y + 1}` used by the LP formulation.
fn lp_support(y: u64, cfg: &DsrConfig) -> Vec<u64> {
    let mut days: Vec<u64> = (1..=cfg.price()).collect();
    if y >= cfg.price() {
        days.push(y + 1);
    }
    days
}

fn lp_distribution(support: &[u64], values: &[f64]) -> Result<RentBuyDistribution> {
    RentBuyDistribution::from_masses(support.iter().copied().zip(values.iter().copied()))
}

/// Minimum consistency of any `gamma_bar`-robust distribution under `y`.
pub fn lp_min_consistency(
    y: u64,
    cfg: &DsrConfig,
    gamma_bar: f64,
) -> Result<(f64, RentBuyDistribution)> {
    if y == 0 {
        return Err(Error::out_of_range("y", 0.0, "[1, inf)"));
    }
    let support = lp_support(y, cfg);
    let k = support.len();
    // Variables: masses on the support, then β.
    let mut objective = vec![0.0; k + 1];
    objective[k] = 1.0;
    let mut lp = LinearProgram::new(objective);
    for &x in &support {
        let mut row = ratio_row(&support, x, cfg);
        row.push(0.0);
        lp.leq(row, gamma_bar);
    }
    let mut row = ratio_row(&support, y, cfg);
    row.push(-1.0);
    lp.leq(row, 0.0);
    let mut sum = vec![1.0; k];
    sum.push(0.0);
    lp.eq(sum, 1.0);

    let (values, beta) = solve_lp(&lp)?.into_optimal()?;
    Ok((beta, lp_distribution(&support, &values[..k])?))
}

/// Minimum robustness of any distribution whose consistency under `y` is at most `beta`.
pub fn lp_min_robustness(
    y: u64,
    cfg: &DsrConfig,
    beta: f64,
) -> Result<(f64, RentBuyDistribution)> {
    if y == 0 {
        return Err(Error::out_of_range("y", 0.0, "[1, inf)"));
    }
    let support = lp_support(y, cfg);
    let k = support.len();
    let mut objective = vec![0.0; k + 1];
    objective[k] = 1.0;
    let mut lp = LinearProgram::new(objective);
    for &x in &support {
        let mut row = ratio_row(&support, x, cfg);
        row.push(-1.0);
        lp.leq(row, 0.0);
    }
    let mut row = ratio_row(&support, y, cfg);
    row.push(0.0);
    lp.leq(row, beta);
    let mut sum = vec![1.0; k];
    sum.push(0.0);
    lp.eq(sum, 1.0);

    let (values, gamma) = solve_lp(&lp)?.into_optimal()?;
    Ok((gamma, lp_distribution(&support, &values[..k])?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetaRsrOutcome {
    pub distribution: RentBuyDistribution,
    /// Consistency and robustness of `distribution`, measured by sweep.
    pub metrics: MetricsPair,
    pub beta_star: f64,
    pub gamma_star: f64,
}

/// Bi-level construction: minimize consistency under the robustness budget,
/// then minimize robustness at that consistency.
pub fn meta_rsr(y: u64, cfg: &DsrConfig, gamma_bar: f64) -> Result<MetaRsrOutcome> {
    let (beta_star, _) = lp_min_consistency(y, cfg, gamma_bar)?;
    let (gamma_star, distribution) = lp_min_robustness(y, cfg, beta_star)?;
    let metrics = rsr_metrics(&distribution, y, cfg)?;
    Ok(MetaRsrOutcome {
        distribution,
        metrics,
        beta_star,
        gamma_star,
    })
}

/// Purchase day for a uniform draw `u ∈ [0, 1)`.
pub fn sample_purchase_day(pi: &RentBuyDistribution, u: f64) -> u64 {
    pi.quantile(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(b: u64) -> DsrConfig {
        DsrConfig::new(b).unwrap()
    }

    #[test]
    fn expected_cost_examples() {
        let c2 = cfg(2);
        let pm = RentBuyDistribution::point_mass(1).unwrap();
        assert_eq!(rsr_expected_cost(&pm, 5, &c2), 2.0);
        let eq = equalizing_distribution(1, 2, &c2).unwrap();
        assert!((rsr_expected_cost(&eq, 1, &c2) - 4.0 / 3.0).abs() < 1e-15);
        let uni = RentBuyDistribution::from_masses([(1, 0.5), (2, 0.5)]).unwrap();
        assert!((rsr_expected_cost(&uni, 1, &cfg(100)) - 50.5).abs() < 1e-12);
    }

    #[test]
    fn ratio_examples() {
        let c2 = cfg(2);
        let pm = RentBuyDistribution::point_mass(1).unwrap();
        assert_eq!(rsr_ratio(&pm, 1, &c2).unwrap(), 2.0);
        let eq = equalizing_distribution(1, 2, &c2).unwrap();
        assert!((rsr_ratio(&eq, 1, &c2).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!((rsr_ratio(&eq, 2, &c2).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!(rsr_ratio(&eq, 0, &c2).is_err());
        let c = cfg(10);
        let k = karlin_distribution(&c);
        let tail: Vec<f64> = (10..40).map(|x| rsr_ratio(&k, x, &c).unwrap()).collect();
        assert!(tail.windows(2).all(|w| w[1] <= w[0] + 1e-15));
    }

    #[test]
    fn metrics_examples() {
        let c2 = cfg(2);
        let eq = equalizing_distribution(1, 2, &c2).unwrap();
        let m = rsr_metrics(&eq, 1, &c2).unwrap();
        assert!((m.consistency - 4.0 / 3.0).abs() < 1e-15);
        assert!((m.robustness - 4.0 / 3.0).abs() < 1e-15);

        let two = RentBuyDistribution::from_masses([(1, 0.5), (3, 0.5)]).unwrap();
        let m = rsr_metrics(&two, 2, &c2).unwrap();
        assert!((m.consistency - 1.0).abs() < 1e-15);
        assert!((m.robustness - 1.5).abs() < 1e-15);

        let c = cfg(100);
        for y in [1, 30, 99] {
            let eq = equalizing_distribution(y + 1, 100, &c).unwrap();
            assert!((rsr_metrics(&eq, y, &c).unwrap().consistency - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn karlin_small_cases() {
        let k = karlin_distribution(&cfg(2));
        assert_eq!(k.masses().len(), 2);
        assert!((k.mass_at(1) - 1.0 / 3.0).abs() < 1e-15);
        assert!((k.mass_at(2) - 2.0 / 3.0).abs() < 1e-15);
        assert!((gamma_xi(&cfg(2)) - 4.0 / 3.0).abs() < 1e-15);
        for b in [2, 5, 17, 100, 400] {
            let c = cfg(b);
            let r = rsr_robustness(&karlin_distribution(&c), &c);
            assert!((r - gamma_xi(&c)).abs() < 1e-10, "b={b}");
        }
    }

    #[test]
    fn equalizing_point_mass_and_bounds() {
        let c = cfg(10);
        let d = equalizing_distribution(4, 4, &c).unwrap();
        assert_eq!(d.masses(), &[(4, 1.0)]);
        assert!(equalizing_distribution(0, 4, &c).is_err());
        assert!(equalizing_distribution(5, 4, &c).is_err());
        assert!(equalizing_distribution(1, 11, &c).is_err());
    }

    #[test]
    fn kr_examples() {
        let c2 = cfg(2);
        let d = kr_distribution(5, &c2, 0.9).unwrap();
        assert_eq!(d.masses(), &[(1, 1.0)]);
        let c = cfg(100);
        for (y, lambda) in [(5, 0.3), (150, 0.3), (50, 0.9), (500, 0.02)] {
            let d = kr_distribution(y, &c, lambda).unwrap();
            assert!((d.total() - 1.0).abs() < 1e-12);
        }
        assert!(kr_distribution(5, &c, 0.01).is_err());
        assert!(kr_distribution(5, &c, 1.0).is_err());
        // For y >= b the rule is the equalizing distribution on [1, ⌊λb⌋].
        let kr = kr_distribution(300, &c, 0.4).unwrap();
        let eq = equalizing_distribution(1, 40, &c).unwrap();
        for (a, e) in kr.masses().iter().zip(eq.masses()) {
            assert_eq!(a.0, e.0);
            assert!((a.1 - e.1).abs() < 1e-12);
        }
    }

    #[test]
    fn operation_a_literal_run_on_b2() {
        // b = 2, y = 2: moving π_2 to day 3 overshoots the robustness 4/3, so the
        // partial move is zero and the input comes back.
        let c2 = cfg(2);
        let start = equalizing_distribution(1, 2, &c2).unwrap();
        let out = operation_a(&start, 2, &c2).unwrap();
        assert_eq!(out.masses().len(), 2);
        assert!((out.mass_at(1) - 1.0 / 3.0).abs() < 1e-12);
        assert!((out.mass_at(2) - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn operation_a_early_exit() {
        let c = cfg(100);
        let start = equalizing_distribution(1, 41, &c).unwrap();
        let out = operation_a(&start, 150, &c).unwrap();
        assert_eq!(out.masses().len(), start.masses().len());
        for (a, e) in out.masses().iter().zip(start.masses()) {
            assert_eq!(a.0, e.0);
            assert!((a.1 - e.1).abs() < 1e-15);
        }
        assert!(operation_a(&start, 99, &c).is_err());
    }

    #[test]
    fn operation_a_two_point_branch() {
        // With a short equalizing support at y = b there is enough slack at
        // x = b + 1 to move everything above day 1.
        let c = cfg(100);
        let start = equalizing_distribution(1, 3, &c).unwrap();
        let out = operation_a(&start, 100, &c).unwrap();
        assert_eq!(out.masses().len(), 2);
        assert!((out.mass_at(1) - 0.01).abs() < 1e-15);
        assert!((out.mass_at(101) - 0.99).abs() < 1e-15);
    }

    #[test]
    fn operation_a_does_not_raise_robustness() {
        let c = cfg(100);
        for n in [20, 41, 60, 100] {
            let start = equalizing_distribution(1, n, &c).unwrap();
            let g0 = rsr_robustness(&start, &c);
            for y in [100, 101, 110, 120, 130, 140] {
                let out = operation_a(&start, y, &c).unwrap();
                let m = rsr_metrics(&out, y, &c).unwrap();
                assert!(m.robustness <= g0 + 1e-9, "n={n} y={y}");
                assert!(m.consistency <= rsr_ratio(&start, y, &c).unwrap() + 1e-12);
            }
        }
    }

    #[test]
    fn operation_b_endpoints() {
        let c = cfg(100);
        let y = 40;
        let start = equalizing_distribution(y + 1, 100, &c).unwrap();
        let nu = rsr_robustness(&start, &c);
        assert_eq!(operation_b(&start, nu, y, &c).unwrap(), start);

        let xi = gamma_xi(&c);
        let out = operation_b(&start, xi, y, &c).unwrap();
        let k = karlin_distribution(&c);
        for day in 1..=100 {
            assert!((out.mass_at(day) - k.mass_at(day)).abs() < 1e-9, "day {day}");
        }
        assert_eq!(operation_b(&start, xi - 0.01, y, &c), Err(Error::Infeasible));
    }

    #[test]
    fn operation_b_intermediate_equalizes() {
        let c = cfg(100);
        let y = 40;
        let start = equalizing_distribution(y + 1, 100, &c).unwrap();
        let nu = rsr_robustness(&start, &c);
        let xi = gamma_xi(&c);
        for frac in [0.1, 0.5, 0.9] {
            let g = xi + frac * (nu - xi);
            let out = operation_b(&start, g, y, &c).unwrap();
            let r_max = out.masses().iter().map(|&(d, _)| d).filter(|&d| d <= y).max().unwrap();
            for x in (1..r_max).chain((y + 1)..=100) {
                let r = rsr_ratio(&out, x, &c).unwrap();
                assert!((r - g).abs() < 1e-9, "x={x} ratio={r} target={g}");
            }
            assert!((rsr_robustness(&out, &c) - g).abs() < 1e-8);
        }
    }

    #[test]
    fn prsr_targets_example() {
        let c = cfg(100);
        let t = prsr_targets(150, &c, 3.0).unwrap();
        assert_eq!(t.n, 41);
        assert!((t.gamma_prime - 2.9610).abs() < 1e-4, "{}", t.gamma_prime);
        assert!(t.gamma_nu.is_none());
        assert!(prsr_targets(5, &c, 98.0).is_err());
        assert!(prsr_targets(5, &c, 1.5).is_err());
        let at_floor = prsr_targets(5, &c, gamma_xi(&c)).unwrap();
        assert_eq!(at_floor.n, 100);
    }

    #[test]
    fn sampling() {
        let pm = RentBuyDistribution::point_mass(7).unwrap();
        for u in [0.0, 0.3, 0.999_999] {
            assert_eq!(sample_purchase_day(&pm, u), 7);
        }
        let two = RentBuyDistribution::from_masses([(1, 0.5), (3, 0.5)]).unwrap();
        assert_eq!(sample_purchase_day(&two, 0.49), 1);
        assert_eq!(sample_purchase_day(&two, 0.5), 3);
    }

    #[test]
    fn from_masses_validation() {
        assert!(RentBuyDistribution::from_masses([(1, 0.5), (2, 0.5 - 1e-13), (3, -1e-13)]).is_ok());
        assert!(matches!(
            RentBuyDistribution::from_masses([(1, 1.1), (2, -0.1)]),
            Err(Error::NegativeMass { day: 2, .. })
        ));
        assert!(RentBuyDistribution::from_masses([(1, 0.5)]).is_err());
        assert!(RentBuyDistribution::from_masses([(0, 1.0)]).is_err());
        let merged = RentBuyDistribution::from_masses([(2, 0.25), (1, 0.5), (2, 0.25)]).unwrap();
        assert_eq!(merged.masses(), &[(1, 0.5), (2, 0.5)]);
    }
}
