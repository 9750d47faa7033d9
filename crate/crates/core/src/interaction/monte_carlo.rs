//! Importance-sampled Monte Carlo for double integrals with a kernel that
//! blows up on the diagonal.
//!
//! Pairs are drawn as x ~ p, y ~ ½p + ½h(·|x), where p is the normalised
//! base measure and h is a radial density ∝ ρ^{a−N} on the unit ball around
//! x. The radial component keeps the second moment finite for kernels of
//! order σ < 1/2 when the integrand is supported away from the diagonal.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{BaseMeasure, InteractionEstimate, InteractionMethod};
use crate::error::{Error, Result};
use crate::measure::dist_sq;
use crate::rng;
use crate::special::unit_sphere_area;

const BATCH: usize = 4096;
const BATCHES_PER_ROUND: usize = 16;
const MIN_SAMPLES: u64 = 1 << 15;

/// Exponent of the radial proposal for a kernel of order `sigma`.
pub(crate) fn radial_exponent(sigma: f64) -> f64 {
    (0.5 * (1.0 - 2.0 * sigma)).clamp(0.05, 1.0)
}

pub(crate) struct McSettings {
    pub seed: u64,
    pub budget: u64,
    pub rel_tol: f64,
    pub radial_exponent: f64,
}

/// Estimates ∬ g(x, y) dμ(x) dμ(y), where g returns (value, error bound).
pub(crate) fn pair_integral<G>(
    dim: usize,
    measure: BaseMeasure,
    settings: &McSettings,
    g: G,
) -> Result<InteractionEstimate>
where
    G: Fn(&[f64], &[f64]) -> (f64, f64) + Sync,
{
    let scale = measure.std_dev();
    let mass = measure.total_mass(dim);
    let a = settings.radial_exponent;
    let n = dim as f64;
    let log_norm = -0.5 * n * (2.0 * std::f64::consts::PI * scale * scale).ln();
    let sphere = unit_sphere_area(dim);
    let base_density =
        |y: &[f64]| (log_norm - 0.5 * y.iter().map(|v| v * v).sum::<f64>() / (scale * scale)).exp();
    let radial_density = |rho: f64| {
        if rho <= 1.0 {
            a * rho.powf(a - n) / sphere
        } else {
            0.0
        }
    };

    let run_batch = |batch: u64| -> (f64, f64, f64) {
        let mut rng = rng::stream(settings.seed, batch);
        let mut x = vec![0.0; dim];
        let mut y = vec![0.0; dim];
        let mut dir = vec![0.0; dim];
        let (mut sum, mut sum_sq, mut err) = (0.0, 0.0, 0.0);
        for _ in 0..BATCH {
            for v in x.iter_mut() {
                *v = scale * rng.sample::<f64, _>(StandardNormal);
            }
            if rng.random::<bool>() {
                for v in y.iter_mut() {
                    *v = scale * rng.sample::<f64, _>(StandardNormal);
                }
            } else {
                let mut norm = 0.0;
                while norm == 0.0 {
                    for d in dir.iter_mut() {
                        *d = rng.sample(StandardNormal);
                    }
                    norm = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
                }
                let u: f64 = 1.0 - rng.random::<f64>();
                let rho = u.powf(1.0 / a);
                for k in 0..dim {
                    y[k] = x[k] + rho * dir[k] / norm;
                }
            }
            let r2 = dist_sq(&x, &y);
            if r2 == 0.0 {
                continue;
            }
            let (val, e) = g(&x, &y);
            if val == 0.0 && e == 0.0 {
                continue;
            }
            let p = base_density(&y);
            let q = 0.5 * p + 0.5 * radial_density(r2.sqrt());
            let w = mass * mass * p / q;
            sum += w * val;
            sum_sq += (w * val) * (w * val);
            err += w * e;
        }
        (sum, sum_sq, err)
    };

    if settings.budget < BATCH as u64 {
        return Err(Error::BudgetExhausted {
            needed: MIN_SAMPLES,
            budget: settings.budget,
        });
    }
    let per_round = (settings.budget / BATCH as u64).clamp(1, BATCHES_PER_ROUND as u64);
    let min_samples = MIN_SAMPLES.min(per_round * BATCH as u64);
    let (mut sum, mut sum_sq, mut kerr) = (0.0, 0.0, 0.0);
    let mut samples: u64 = 0;
    let mut next_batch: u64 = 0;
    loop {
        let round: Vec<(f64, f64, f64)> = (next_batch..next_batch + per_round)
            .into_par_iter()
            .map(run_batch)
            .collect();
        next_batch += per_round;
        for (s, s2, e) in round {
            sum += s;
            sum_sq += s2;
            kerr += e;
        }
        samples += per_round * BATCH as u64;
        let nf = samples as f64;
        let mean = sum / nf;
        let var = (sum_sq / nf - mean * mean).max(0.0);
        let se = (var / nf).sqrt();
        let error = se + kerr / nf;
        let target = settings.rel_tol * mean.abs();
        if samples >= min_samples && error <= target {
            return Ok(estimate(mean, error, samples));
        }
        if samples + per_round * BATCH as u64 > settings.budget {
            if mean == 0.0 && var == 0.0 {
                return Ok(estimate(0.0, 0.0, samples));
            }
            let needed = if target > 0.0 {
                (nf * (se / target).powi(2)).ceil() as u64
            } else {
                u64::MAX
            };
            return Err(Error::BudgetExhausted {
                needed: needed.max(samples + 1),
                budget: settings.budget,
            });
        }
    }
}

fn estimate(value: f64, error: f64, samples: u64) -> InteractionEstimate {
    InteractionEstimate {
        value,
        error,
        method: InteractionMethod::MonteCarlo,
        samples_or_cells: samples,
    }
}
