//! Seeded Monte-Carlo integration against an isotropic 3-D Gaussian.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::QuadratureResult;
use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 1_000;

/// Estimates `E[g(q)]` for `q ~ N(mean, sigma^2 I)`.
///
/// The error estimate is the sample standard error. Each call owns its
/// generator, so a given `(seed, samples)` pair always yields the same bits.
pub fn mc_integrate_gaussian3d<G>(
    mut g: G,
    mean: [f64; 3],
    sigma: f64,
    samples: usize,
    seed: u64,
) -> Result<QuadratureResult>
where
    G: FnMut([f64; 3]) -> f64,
{
    if samples < MIN_SAMPLES {
        return Err(Error::domain("samples", samples as f64));
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::domain("sigma", sigma));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Welford running mean and sum of squared deviations.
    let mut avg = 0.0;
    let mut m2 = 0.0;
    for i in 0..samples {
        let mut q = mean;
        for c in q.iter_mut() {
            let z: f64 = StandardNormal.sample(&mut rng);
            *c += sigma * z;
        }
        let v = g(q);
        let delta = v - avg;
        avg += delta / (i + 1) as f64;
        m2 += delta * (v - avg);
    }
    let n = samples as f64;
    let variance = m2 / (n - 1.0);
    Ok(QuadratureResult {
        value: avg,
        error_estimate: libm::sqrt(variance / n),
        evaluations: samples,
    })
}
