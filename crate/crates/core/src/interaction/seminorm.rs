//! Direct evaluation of [u]² = ∬ |u(x) − u(y)|² K_{2s}(x, y) dγ(x) dγ(y).
//!
//! In one dimension the double integral is written as
//! 2 ∫_{h>0} ∫ |u(x) − u(x−h)|² K_{2s}(x, x−h) γ(x)γ(x−h) dx dh, with the
//! outer variable on a mesh graded toward h = 0 and split at differences of
//! breakpoints, and the inner variable split at b and b + h for every
//! breakpoint b of u.

use super::{
    check_order, monte_carlo, BaseMeasure, InteractionConfig, InteractionEstimate,
    InteractionMethod,
};
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::kernel::{kernel_k_unchecked, QuadratureSpec};
use crate::measure::dist_sq;
use crate::quad::{gl6, gl8};

/// Half-width of the spatial window in one dimension.
const WINDOW: f64 = 12.0;
/// Largest separation h kept: γ(x)γ(x − h) ≤ e^{−h²/4}/(2π) is negligible beyond.
const MAX_SEPARATION: f64 = 18.0;

pub fn seminorm_sq_direct(
    u: &ScalarField,
    s: f64,
    cfg: &InteractionConfig,
) -> Result<InteractionEstimate> {
    check_order(s)?;
    cfg.validate()?;
    if u.dimension() == 1 {
        seminorm_1d(u, s, cfg)
    } else {
        let settings = monte_carlo::McSettings {
            seed: cfg.seed,
            budget: cfg.budget,
            rel_tol: cfg.mc_rel_tol,
            radial_exponent: monte_carlo::radial_exponent(2.0 * s),
        };
        let spec = cfg.spec;
        monte_carlo::pair_integral(u.dimension(), BaseMeasure::Gaussian, &settings, |x, y| {
            let d = u.eval(x) - u.eval(y);
            if d == 0.0 || dist_sq(x, y) == 0.0 {
                return (0.0, 0.0);
            }
            let k = kernel_k_unchecked(2.0 * s, x, y, &spec);
            (d * d * k.value, d * d * k.error_bound)
        })
    }
}

fn split_cells(points: &mut Vec<f64>, max_width: f64) -> Vec<(f64, f64)> {
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut cells = Vec::new();
    for w in points.windows(2) {
        let n = ((w[1] - w[0]) / max_width).ceil().max(1.0) as usize;
        let step = (w[1] - w[0]) / n as f64;
        for i in 0..n {
            let a = w[0] + i as f64 * step;
            let b = if i + 1 == n {
                w[1]
            } else {
                w[0] + (i + 1) as f64 * step
            };
            cells.push((a, b));
        }
    }
    cells
}

fn inner_cells(u: &ScalarField, h: f64) -> Vec<(f64, f64)> {
    let lo = -WINDOW + h;
    let hi = WINDOW;
    if lo >= hi {
        return Vec::new();
    }
    let mut pts = vec![lo, hi];
    for &b in u.breakpoints() {
        for p in [b, b + h] {
            if p > lo && p < hi {
                pts.push(p);
            }
        }
    }
    let mut cells = split_cells(&mut pts, 1.0);
    if u.is_piecewise_constant() {
        cells.retain(|&(a, b)| {
            let m = 0.5 * (a + b);
            u.eval(&[m]) != u.eval(&[m - h])
        });
    }
    cells
}

/// Inner integral at separation h: (value, error, kernel evaluations).
fn inner(u: &ScalarField, s: f64, h: f64, spec: &QuadratureSpec) -> (f64, f64, u64) {
    let gauss = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let f = |x: f64| -> (f64, f64) {
        let d = u.eval(&[x]) - u.eval(&[x - h]);
        if d == 0.0 {
            return (0.0, 0.0);
        }
        let w = d * d * gauss(x) * gauss(x - h);
        let k = kernel_k_unchecked(2.0 * s, &[x], &[x - h], spec);
        (w * k.value, w * k.error_bound)
    };
    let (mut value, mut error, mut evals) = (0.0, 0.0, 0u64);
    for (a, b) in inner_cells(u, h) {
        let (mut q8, mut q6, mut kerr) = (0.0, 0.0, 0.0);
        for (x, w) in gl8().mapped(a, b) {
            let (v, e) = f(x);
            q8 += w * v;
            kerr += w * e;
        }
        for (x, w) in gl6().mapped(a, b) {
            q6 += w * f(x).0;
        }
        value += q8;
        error += (q8 - q6).abs() + kerr;
        evals += 14;
    }
    (value, error, evals)
}

/// The innermost cell [0, δ] holds the h → 0 singularity, where the inner
/// integral behaves like a power of h. Successive dyadic cells then shrink by
/// a constant ratio r and [0, δ] carries I₁·r/(1 − r), with I₁ the integral
/// over [δ, 2δ]. Returns the tail and, as its error, the change when r is
/// taken from the next pair of cells instead.
fn innermost_tail(outer: &[(f64, f64)], q8: &[f64]) -> Option<(f64, f64)> {
    if outer.len() < 4 || outer[0].0 != 0.0 {
        return None;
    }
    let w: Vec<f64> = outer[..4].iter().map(|c| c.1 - c.0).collect();
    let dyadic = |a: f64, b: f64| ((b / a) - 2.0).abs() < 1e-9;
    if (w[1] / w[0] - 1.0).abs() > 1e-9 || !dyadic(w[1], w[2]) || !dyadic(w[2], w[3]) {
        return None;
    }
    let tail_from = |r: f64| (r > 0.0 && r < 1.0).then(|| q8[1] * r / (1.0 - r));
    let t1 = tail_from(q8[1] / q8[2])?;
    let t2 = tail_from(q8[2] / q8[3])?;
    Some((t1, (t1 - t2).abs()))
}

fn seminorm_1d(u: &ScalarField, s: f64, cfg: &InteractionConfig) -> Result<InteractionEstimate> {
    use rayon::prelude::*;

    let mut pts = vec![0.0, MAX_SEPARATION];
    for k in 0..=cfg.grading_levels {
        pts.push(0.5f64.powi(k as i32));
    }
    let bps = u.breakpoints();
    for &a in bps {
        for &b in bps {
            let d = b - a;
            if d > 0.0 && d < MAX_SEPARATION {
                pts.push(d);
            }
        }
    }
    let outer = split_cells(&mut pts, 1.0);

    let nodes: Vec<(usize, bool, f64, f64)> = outer
        .iter()
        .enumerate()
        .flat_map(|(i, &(a, b))| {
            let g8 = gl8().mapped(a, b).map(move |(h, w)| (i, true, h, w));
            let g6 = gl6().mapped(a, b).map(move |(h, w)| (i, false, h, w));
            g8.chain(g6).collect::<Vec<_>>()
        })
        .collect();
    let needed: u64 = nodes
        .iter()
        .map(|&(_, _, h, _)| 14 * inner_cells(u, h).len() as u64)
        .sum();
    if needed > cfg.budget {
        return Err(Error::BudgetExhausted {
            needed,
            budget: cfg.budget,
        });
    }
    let spec = cfg.spec;
    let values: Vec<(f64, f64, u64)> = nodes
        .par_iter()
        .map(|&(_, _, h, _)| inner(u, s, h, &spec))
        .collect();

    let mut q8 = vec![0.0; outer.len()];
    let mut q6 = vec![0.0; outer.len()];
    let mut inner_err = vec![0.0; outer.len()];
    for (&(i, high, _, w), &(v, e, _)) in nodes.iter().zip(&values) {
        if high {
            q8[i] += w * v;
            inner_err[i] += w * e;
        } else {
            q6[i] += w * v;
        }
    }
    let mut value = 0.0;
    let mut error = 0.0;
    for i in 0..outer.len() {
        value += q8[i];
        error += (q8[i] - q6[i]).abs() + inner_err[i];
    }
    if let Some((tail, tail_err)) = innermost_tail(&outer, &q8) {
        value += tail - q8[0];
        error += tail_err - (q8[0] - q6[0]).abs();
    }
    Ok(InteractionEstimate {
        value: 2.0 * value,
        error: 2.0 * error,
        method: InteractionMethod::GradedQuadrature1d,
        samples_or_cells: values.iter().map(|v| v.2).sum(),
    })
}
