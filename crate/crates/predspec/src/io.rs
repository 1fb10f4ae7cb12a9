//! On-disk formats.
//!
//! - Idle traces: one positive decimal per line; blank lines are ignored.
//! - Daily closes: CSV with header `date,close` and ISO-8601 dates.
//! - Power-state tables: JSON array of `{"rate": .., "wake_cost": ..}`.
//! - Distributions: JSON array of `{"day": .., "prob": ..}` sorted by day.
//! - Frontier scans: JSON object with every scanned point and the front.

use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use chrono::{Datelike, NaiveDate};
use predspec_core::metrics::MetricsPair;
use predspec_core::oracles::{Decision, FrontierScan};
use predspec_core::rsr::RentBuyDistribution;
use serde::{Deserialize, Serialize};

use crate::dpm::{PowerState, PowerStateTable};
use crate::vix::{VixData, VixRound};

/// Parses an idle trace and multiplies every interval by `scale`.
pub fn parse_idle_intervals(text: &str, scale: f64) -> Result<Vec<f64>> {
    ensure!(scale > 0.0 && scale.is_finite(), "scale must be positive, got {scale}");
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line
            .parse()
            .with_context(|| format!("line {}: not a number: {line:?}", i + 1))?;
        ensure!(v > 0.0 && v.is_finite(), "line {}: interval must be positive, got {v}", i + 1);
        out.push(v * scale);
    }
    ensure!(!out.is_empty(), "idle trace contains no intervals");
    Ok(out)
}

pub fn load_idle_intervals(path: &Path, scale: f64) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_idle_intervals(&text, scale).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Deserialize)]
struct CloseRow {
    date: String,
    close: f64,
}

/// Groups closes by calendar month; `L` and `U` are the global extremes.
///
/// Rows must be in date order. A calendar month with no rows between the
/// first and last month is an error, as is any malformed row.
pub fn parse_vix_csv<R: std::io::Read>(reader: R) -> Result<VixData> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    ensure!(
        headers.iter().collect::<Vec<_>>() == ["date", "close"],
        "expected header `date,close`, got `{}`",
        headers.iter().collect::<Vec<_>>().join(",")
    );
    let mut rounds: Vec<VixRound> = Vec::new();
    let mut last: Option<NaiveDate> = None;
    for (i, row) in rdr.deserialize::<CloseRow>().enumerate() {
        let line = i + 2;
        let row = row.with_context(|| format!("line {line}: malformed row"))?;
        let date = NaiveDate::parse_from_str(&row.date, "%Y-%m-%d")
            .with_context(|| format!("line {line}: bad date {:?}", row.date))?;
        ensure!(
            row.close > 0.0 && row.close.is_finite(),
            "line {line}: close must be positive, got {}",
            row.close
        );
        if let Some(prev) = last {
            ensure!(date > prev, "line {line}: dates must be strictly increasing");
            let months = |d: NaiveDate| d.year() * 12 + d.month0() as i32;
            let gap = months(date) - months(prev);
            ensure!(gap <= 1, "line {line}: no rows for the month(s) before {}", row.date);
            if gap == 1 {
                rounds.push(VixRound { month_id: String::new(), daily_closes: Vec::new() });
            }
        } else {
            rounds.push(VixRound { month_id: String::new(), daily_closes: Vec::new() });
        }
        let round = rounds.last_mut().expect("a round was just opened");
        if round.month_id.is_empty() {
            round.month_id = date.format("%Y-%m").to_string();
        }
        round.daily_closes.push(row.close);
        last = Some(date);
    }
    ensure!(!rounds.is_empty(), "no rows after the header");
    let all = rounds.iter().flat_map(|r| r.daily_closes.iter().copied());
    let lower = all.clone().fold(f64::INFINITY, f64::min);
    let upper = all.fold(f64::NEG_INFINITY, f64::max);
    ensure!(upper > lower, "closes must not all be equal");
    Ok(VixData { rounds, lower, upper })
}

pub fn load_vix_csv(path: &Path) -> Result<VixData> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    parse_vix_csv(file).with_context(|| format!("parsing {}", path.display()))
}

pub fn parse_state_table(text: &str) -> Result<PowerStateTable> {
    let states: Vec<PowerState> = serde_json::from_str(text).context("state table JSON")?;
    PowerStateTable::new(states)
}

pub fn load_state_table(path: &Path) -> Result<PowerStateTable> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_state_table(&text).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct DayMass {
    day: u64,
    prob: f64,
}

pub fn distribution_to_json(pi: &RentBuyDistribution) -> Result<String> {
    let rows: Vec<DayMass> = pi
        .masses()
        .iter()
        .map(|&(day, prob)| DayMass { day, prob })
        .collect();
    Ok(serde_json::to_string(&rows)?)
}

pub fn distribution_from_json(text: &str) -> Result<RentBuyDistribution> {
    let rows: Vec<DayMass> = serde_json::from_str(text).context("distribution JSON")?;
    Ok(RentBuyDistribution::from_masses(rows.into_iter().map(|r| (r.day, r.prob)))?)
}

#[derive(Debug, Serialize)]
pub struct DecisionJson {
    pub kind: &'static str,
    pub value: f64,
}

impl From<Decision> for DecisionJson {
    fn from(d: Decision) -> Self {
        match d {
            Decision::PurchaseDay(m) => DecisionJson { kind: "purchase_day", value: m as f64 },
            Decision::Threshold(phi) => DecisionJson { kind: "threshold", value: phi },
            Decision::RobustnessTarget(g) => DecisionJson { kind: "robustness_target", value: g },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PointJson {
    pub decision: DecisionJson,
    pub consistency: f64,
    pub robustness: f64,
    pub on_front: bool,
}

#[derive(Debug, Serialize)]
pub struct PairJson {
    pub consistency: f64,
    pub robustness: f64,
}

impl From<MetricsPair> for PairJson {
    fn from(m: MetricsPair) -> Self {
        PairJson { consistency: m.consistency, robustness: m.robustness }
    }
}

/// The named algorithm's point, checked against the scan.
#[derive(Debug, Serialize)]
pub struct AlgorithmPointJson {
    pub name: String,
    pub consistency: f64,
    pub robustness: f64,
    pub on_front: bool,
}

#[derive(Debug, Serialize)]
pub struct FrontierJson {
    pub problem: String,
    pub prediction: f64,
    pub params: String,
    pub algorithm: Option<AlgorithmPointJson>,
    pub points: Vec<PointJson>,
    pub front: Vec<PairJson>,
}

impl FrontierJson {
    pub fn new(
        problem: &str,
        params: String,
        scan: &FrontierScan,
        algorithm: Option<AlgorithmPointJson>,
    ) -> Self {
        let on_front = |m: &MetricsPair| scan.front.iter().any(|f| f.max_abs_diff(m) <= 1e-9);
        FrontierJson {
            problem: problem.to_string(),
            prediction: scan.prediction,
            params,
            algorithm,
            points: scan
                .points
                .iter()
                .map(|(d, m)| PointJson {
                    decision: (*d).into(),
                    consistency: m.consistency,
                    robustness: m.robustness,
                    on_front: on_front(m),
                })
                .collect(),
            front: scan.front.iter().map(|&m| m.into()).collect(),
        }
    }
}

/// Rejects a path that does not exist before any work is done.
pub fn require_file(path: &Path) -> Result<()> {
    if !path.is_file() {
        bail!("file not found: {}", path.display());
    }
    Ok(())
}
