//! Experiment harnesses, file formats, and the command-line front end for
//! `predspec-core`.
//!
//! - [`ski`]: synthetic ski-rental trials over noisy predictions.
//! - [`dpm`]: dynamic power management over idle intervals, driven by
//!   randomized ski-rental policies.
//! - [`vix`]: monthly one-max-search trading on daily closes.
//! - [`io`]: loaders and writers for the on-disk formats.
//! - [`cli`]: argument parsing and command dispatch for the `predspec` binary.

pub mod cli;
pub mod dpm;
pub mod io;
pub mod records;
pub mod rng;
pub mod ski;
pub mod vix;
