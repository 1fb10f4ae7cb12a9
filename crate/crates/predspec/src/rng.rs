//! Seeded random streams.
//!
//! Every trial gets its own generator derived from `(seed, stream)`, so
//! results do not depend on the order in which trials are evaluated.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generator for one independent stream under a base seed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard normal draw by Box–Muller.
///
/// Consumes exactly two uniforms per call, which keeps the stream layout
/// fixed: the `k`-th Gaussian always uses uniforms `2k` and `2k + 1`.
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // `gen::<f64>()` is in [0, 1); flip it so the logarithm stays finite.
    let u1 = 1.0 - rng.gen::<f64>();
    let u2 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
