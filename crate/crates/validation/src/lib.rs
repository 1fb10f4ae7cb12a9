//! Acceptance checks for the workspace.
//!
//! The checks live in `tests/acceptance.rs`, a standalone target that prints
//! one PASS/FAIL line per check and exits non-zero if any check fails. Run it
//! with `cargo test -p predspec-validation --test acceptance`.
