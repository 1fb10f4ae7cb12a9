//! Learning-augmented online algorithms analysed per prediction value.
//!
//! Every algorithm here receives a prediction `y` and is judged by the pair
//! (consistency under `y`, robustness under `y`): the worst-case ratio when the
//! prediction is exact and the worst-case ratio over all instances. The crate
//! covers deterministic and randomized ski rental, one-max search (with an
//! error-tolerant variant) and two-job non-clairvoyant scheduling, along with
//! the small dense LP solver used by the optimization-based ski rental
//! algorithm and brute-force frontier oracles.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
mod math;

pub mod dsr;
pub mod linprog;
pub mod metrics;
pub mod oms;
pub mod oracles;
pub mod rsr;
pub mod sched2;

pub use error::{Error, Result};
pub use metrics::{dominates, empirical_ratio, pareto_front, MetricsPair, Objective};
