//! Tensor Gauss–Legendre quadrature on one-dimensional meshes graded
//! geometrically toward endpoints where the two operands meet.

use rayon::prelude::*;

use crate::measure::IntervalUnion;
use crate::quad::{gl6, gl8};

/// Widest cell away from graded regions.
const MAX_CELL_WIDTH: f64 = 1.0;

/// Number of geometric levels used toward an endpoint at distance `d` from
/// the other operand, for a grading region of width `g`.
fn grading_levels(d: f64, g: f64, max_levels: usize) -> usize {
    if d <= 0.0 {
        max_levels
    } else if d >= g {
        0
    } else {
        ((g / d).log2().ceil() as usize + 2).min(max_levels)
    }
}

/// Cells covering `own ∩ (−cutoff, cutoff)`, refined by ratio 2 toward every
/// endpoint that touches or nearly touches `other`.
pub(crate) fn mesh(
    own: &IntervalUnion,
    other: &IntervalUnion,
    cutoff: f64,
    max_levels: usize,
) -> Vec<(f64, f64)> {
    let mut cells = Vec::new();
    for &(a0, b0) in own.clipped(-cutoff, cutoff).parts() {
        let width = b0 - a0;
        let left = if a0 > -cutoff {
            other.distance_to(a0)
        } else {
            f64::INFINITY
        };
        let right = if b0 < cutoff {
            other.distance_to(b0)
        } else {
            f64::INFINITY
        };
        let both = left.is_finite() && right.is_finite();
        let g = if both {
            (0.5 * width).min(MAX_CELL_WIDTH)
        } else {
            width.min(MAX_CELL_WIDTH)
        };
        let nl = grading_levels(left, g, max_levels);
        let nr = grading_levels(right, g, max_levels);
        let lo = if nl > 0 { a0 + g } else { a0 };
        let hi = if nr > 0 { b0 - g } else { b0 };
        if nl > 0 {
            push_graded(&mut cells, a0, g, nl, false);
        }
        if hi > lo {
            let n = ((hi - lo) / MAX_CELL_WIDTH).ceil().max(1.0) as usize;
            let h = (hi - lo) / n as f64;
            for i in 0..n {
                let c0 = lo + i as f64 * h;
                let c1 = if i + 1 == n {
                    hi
                } else {
                    lo + (i + 1) as f64 * h
                };
                cells.push((c0, c1));
            }
        }
        if nr > 0 {
            push_graded(&mut cells, b0, g, nr, true);
        }
    }
    cells
}

/// Cells [e, e + g·2^{−L}], …, [e + g/2, e + g] (mirrored when `mirror`),
/// appended in increasing order.
fn push_graded(cells: &mut Vec<(f64, f64)>, e: f64, g: f64, levels: usize, mirror: bool) {
    let mut offsets = Vec::with_capacity(levels + 1);
    offsets.push(0.0);
    for k in (0..levels).rev() {
        offsets.push(g * 0.5f64.powi(k as i32));
    }
    if mirror {
        for w in offsets.windows(2).rev() {
            cells.push((e - w[1], e - w[0]));
        }
    } else {
        for w in offsets.windows(2) {
            cells.push((e + w[0], e + w[1]));
        }
    }
}

struct CellRule {
    x8: [f64; 8],
    w8: [f64; 8],
    x6: [f64; 6],
    w6: [f64; 6],
}

fn cell_rules(cells: &[(f64, f64)], density: &(dyn Fn(f64) -> f64 + Sync)) -> Vec<CellRule> {
    cells
        .iter()
        .map(|&(a, b)| {
            let mut r = CellRule {
                x8: [0.0; 8],
                w8: [0.0; 8],
                x6: [0.0; 6],
                w6: [0.0; 6],
            };
            for (k, (x, w)) in gl8().mapped(a, b).enumerate() {
                r.x8[k] = x;
                r.w8[k] = w * density(x);
            }
            for (k, (x, w)) in gl6().mapped(a, b).enumerate() {
                r.x6[k] = x;
                r.w6[k] = w * density(x);
            }
            r
        })
        .collect()
}

/// Kernel evaluations used by [`tensor_integral`] on the given meshes.
pub(crate) fn evaluations(cells_a: usize, cells_b: usize) -> u64 {
    (cells_a as u64) * (cells_b as u64) * 100
}

pub(crate) struct TensorResult {
    pub value: f64,
    pub error: f64,
    pub pairs: u64,
}

/// 8×8 and 6×6 Gauss–Legendre product rules on one cell pair:
/// (Q₈, |Q₈ − Q₆| + propagated kernel error).
fn pair_rule<K>(p: &CellRule, q: &CellRule, kernel: &K) -> (f64, f64)
where
    K: Fn(f64, f64) -> (f64, f64),
{
    let mut q8 = 0.0;
    let mut kerr = 0.0;
    for i in 0..8 {
        for j in 0..8 {
            let (k, e) = kernel(p.x8[i], q.x8[j]);
            let w = p.w8[i] * q.w8[j];
            q8 += w * k;
            kerr += w * e;
        }
    }
    let mut q6 = 0.0;
    for i in 0..6 {
        for j in 0..6 {
            q6 += p.w6[i] * q.w6[j] * kernel(p.x6[i], q.x6[j]).0;
        }
    }
    (q8, (q8 - q6).abs() + kerr)
}

fn halves((a, b): (f64, f64), at_start: bool) -> [(f64, f64); 2] {
    let m = 0.5 * (a + b);
    // [near the shared point, far from it]
    if at_start {
        [(a, m), (m, b)]
    } else {
        [(m, b), (a, m)]
    }
}

/// Cell pair meeting at a point where the kernel behaves like |x − y|^{−(1+σ)}.
/// Halving both cells leaves a corner pair carrying 2^{σ−1} of the whole plus
/// three pairs the product rules resolve, so the whole is their sum divided
/// by 1 − 2^{σ−1}. The closure is applied after one and after two halvings;
/// their difference is the error estimate.
fn corner_pair<K>(
    a: (f64, f64),
    b: (f64, f64),
    order: f64,
    density: &(dyn Fn(f64) -> f64 + Sync),
    kernel: &K,
) -> (f64, f64)
where
    K: Fn(f64, f64) -> (f64, f64),
{
    let ratio = 2f64.powf(order - 1.0);
    let a_starts = a.0 == b.1;
    let (mut ca, mut cb) = (a, b);
    let mut resolved = 0.0;
    let mut error = 0.0;
    let mut estimates = [0.0; 2];
    for est in &mut estimates {
        let ha = halves(ca, a_starts);
        let hb = halves(cb, !a_starts);
        for (i, j) in [(0, 1), (1, 0), (1, 1)] {
            let ra = &cell_rules(&[ha[i]], density)[0];
            let rb = &cell_rules(&[hb[j]], density)[0];
            let (v, e) = pair_rule(ra, rb, kernel);
            resolved += v;
            error += e;
        }
        ca = ha[0];
        cb = hb[0];
        *est = resolved;
    }
    let once = estimates[0] / (1.0 - ratio);
    let twice = estimates[0] + (estimates[1] - estimates[0]) / (1.0 - ratio);
    (twice, error + (twice - once).abs())
}

/// ∑ over cell pairs of the 8×8 Gauss–Legendre product rule applied to
/// `kernel(x, y)·ρ(x)ρ(y)`. Each pair's error is |Q₈ − Q₆| plus the
/// propagated kernel error bounds. Pairs of cells sharing an endpoint are
/// handled by [`corner_pair`] with singularity order `order`.
pub(crate) fn tensor_integral<K>(
    cells_a: &[(f64, f64)],
    cells_b: &[(f64, f64)],
    density: &(dyn Fn(f64) -> f64 + Sync),
    order: f64,
    kernel: K,
) -> TensorResult
where
    K: Fn(f64, f64) -> (f64, f64) + Sync,
{
    let ra = cell_rules(cells_a, density);
    let rb = cell_rules(cells_b, density);
    let nb = rb.len();
    let per_pair: Vec<(f64, f64)> = (0..ra.len() * nb)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / nb, idx % nb);
            let (a, b) = (cells_a[i], cells_b[j]);
            if a.1 == b.0 || b.1 == a.0 {
                corner_pair(a, b, order, density, &kernel)
            } else {
                pair_rule(&ra[i], &rb[j], &kernel)
            }
        })
        .collect();
    let mut value = 0.0;
    let mut error = 0.0;
    for (v, e) in per_pair {
        value += v;
        error += e;
    }
    TensorResult {
        value,
        error,
        pairs: (ra.len() * nb) as u64,
    }
}
