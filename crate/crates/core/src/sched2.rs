//! Two-job non-clairvoyant preemptive scheduling on a single machine.
//!
//! The objective is total completion time. Round robin shares the machine
//! equally; the two-stage schedule runs round robin for a prediction-scaled
//! budget and then, if nothing contradicted the prediction, processes the
//! jobs in predicted order. Any contradiction switches to round robin forever.

use crate::metrics::MetricsPair;
use crate::{Error, Result};

/// Tolerance for deciding that accumulated work equals a prediction.
pub const WORK_TOL: f64 = 1e-12;

/// Predicted processing times with `y1 <= y2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JobPairPrediction {
    y1: f64,
    y2: f64,
    swapped: bool,
}

impl JobPairPrediction {
    /// Sorts the prediction; [`JobPairPrediction::align`] applies the same
    /// permutation to actual times supplied in the original order.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_positive("y1", a)?;
        check_positive("y2", b)?;
        Ok(if a <= b {
            JobPairPrediction { y1: a, y2: b, swapped: false }
        } else {
            JobPairPrediction { y1: b, y2: a, swapped: true }
        })
    }

    pub fn y1(&self) -> f64 {
        self.y1
    }

    pub fn y2(&self) -> f64 {
        self.y2
    }

    /// Whether canonicalization swapped the two jobs.
    pub fn swapped(&self) -> bool {
        self.swapped
    }

    /// Actual times in the caller's original job order, re-indexed to match.
    pub fn align(&self, a: f64, b: f64) -> Result<JobPairActual> {
        if self.swapped {
            JobPairActual::new(b, a)
        } else {
            JobPairActual::new(a, b)
        }
    }

    /// Optimal cost if the prediction were exact.
    pub fn predicted_opt(&self) -> f64 {
        2.0 * self.y1 + self.y2
    }
}

/// Actual processing times, indexed like the (canonical) prediction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JobPairActual {
    pub x1: f64,
    pub x2: f64,
}

impl JobPairActual {
    pub fn new(x1: f64, x2: f64) -> Result<Self> {
        check_positive("x1", x1)?;
        check_positive("x2", x2)?;
        Ok(JobPairActual { x1, x2 })
    }
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::out_of_range(name, v, "(0, inf)"))
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < 1.0 {
        Ok(())
    } else {
        Err(Error::out_of_range("lambda", lambda, "(0, 1)"))
    }
}

/// Shortest job first: `2 min + max`.
pub fn sched_opt(actual: &JobPairActual) -> f64 {
    2.0 * actual.x1.min(actual.x2) + actual.x1.max(actual.x2)
}

/// Round robin from time zero: `3 min + max`.
pub fn round_robin_cost(actual: &JobPairActual) -> f64 {
    3.0 * actual.x1.min(actual.x2) + actual.x1.max(actual.x2)
}

/// Completion-time sum when round robin starts at time `t` with the given
/// remaining work on both jobs.
fn round_robin_from(t: f64, r1: f64, r2: f64) -> f64 {
    let (short, long) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    let first = t + 2.0 * short;
    first + (first + (long - short))
}

fn same_work(a: f64, b: f64) -> bool {
    (a - b).abs() <= WORK_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Simulated total completion time of the two-stage schedule.
///
/// Stage 1 shares the machine until each job has `λ(2y1 + y2)` work. A job
/// finishing with work different from its prediction, or reaching its
/// predicted work without finishing, is a misprediction and triggers round
/// robin on the remaining work. Otherwise stage 2 runs the jobs in predicted
/// order.
pub fn two_stage_cost(
    actual: &JobPairActual,
    pred: &JobPairPrediction,
    lambda: f64,
) -> Result<f64> {
    check_lambda(lambda)?;
    let (x1, x2) = (actual.x1, actual.x2);
    let y1 = pred.y1;
    let share = lambda * pred.predicted_opt();

    // Stage 1 is itself round robin. Any event inside it (a completion, or
    // job 1 reaching its prediction) leaves round robin in charge, and after
    // a completion the survivor runs alone under any rule.
    if share >= y1 || share >= x1.min(x2) {
        return Ok(round_robin_cost(actual));
    }
    let t = 2.0 * share;

    // Stage 2: job 1 alone.
    if x1 < y1 || same_work(x1, y1) {
        // Job 1 completes (early completions leave only job 2, so the
        // fallback changes nothing).
        let c1 = t + (x1 - share);
        return Ok(c1 + c1 + (x2 - share));
    }
    // Job 1 reaches its predicted work unfinished: round robin on the rest.
    Ok(round_robin_from(t + (y1 - share), x1 - y1, x2 - share))
}

/// The guarantee of the two-stage schedule.
pub fn two_stage_metrics(pred: &JobPairPrediction, lambda: f64) -> Result<MetricsPair> {
    check_lambda(lambda)?;
    let (y1, opt) = (pred.y1, pred.predicted_opt());
    Ok(MetricsPair::new(
        1.0 + (y1 / opt).min(lambda),
        1.0 + (1.0 / 3.0f64).max(y1 / (y1 + 2.0 * lambda * opt)),
    ))
}
