//! Gaussian and λ measures, the set language, closed-form measures and samplers.

mod intervals;
mod set;

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use intervals::{Bound, IntervalUnion};
pub use set::{Region, SetExpr, NORMAL_TOL};

use crate::error::{Error, Result};
use crate::rng::{self, StreamRng};
use crate::special::{chi_square_cdf, normal_interval_mass, std_normal_cdf};

/// Below this Gaussian mass, rejection sampling from γ|_A is refused.
pub const MIN_RESTRICTION_MASS: f64 = 1e-6;

/// Upper limit on the number of cells in an axis-aligned decomposition.
const MAX_AXIS_CELLS: usize = 1 << 20;

/// Point of ℝᴺ with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument(
                "a point needs at least one coordinate".into(),
            ));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(
                "point coordinates must be finite".into(),
            ));
        }
        Ok(Self(coords))
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

pub(crate) fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub(crate) fn dist_sq(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Positive measure on ℝᴺ with a radial Gaussian-type density.
pub trait WeightMeasure: Sync {
    fn dimension(&self) -> usize;
    fn density(&self, x: &[f64]) -> f64;
    /// Density of the one-dimensional factor (the density is a product).
    fn density_1d(&self, x: f64) -> f64;
}

/// Standard Gaussian measure γ with density (2π)^{−N/2} e^{−|x|²/2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaussianMeasure {
    pub dimension: usize,
}

impl WeightMeasure for GaussianMeasure {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn density(&self, x: &[f64]) -> f64 {
        (2.0 * PI).powf(-0.5 * self.dimension as f64) * (-0.5 * norm_sq(x)).exp()
    }

    fn density_1d(&self, x: f64) -> f64 {
        (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
    }
}

/// The measure λ with density (2π)^{−N/2} e^{−|x|²/4}; total mass 2^{N/2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LambdaMeasure {
    pub dimension: usize,
}

impl LambdaMeasure {
    pub fn total_mass(&self) -> f64 {
        2f64.powf(0.5 * self.dimension as f64)
    }

    /// λ((a, b)) in one dimension.
    pub fn interval_mass(&self, a: f64, b: f64) -> f64 {
        2f64.sqrt() * normal_interval_mass(a / 2f64.sqrt(), b / 2f64.sqrt())
    }
}

impl WeightMeasure for LambdaMeasure {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn density(&self, x: &[f64]) -> f64 {
        (2.0 * PI).powf(-0.5 * self.dimension as f64) * (-0.25 * norm_sq(x)).exp()
    }

    fn density_1d(&self, x: f64) -> f64 {
        (-0.25 * x * x).exp() / (2.0 * PI).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureMethod {
    ClosedForm,
    MonteCarlo,
}

/// A Gaussian measure with its error (zero in closed form, one standard
/// error in Monte Carlo mode).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    pub value: f64,
    pub error: f64,
    pub method: MeasureMethod,
}

impl MeasureValue {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            error: 0.0,
            method: MeasureMethod::ClosedForm,
        }
    }
}

/// Monte Carlo controls for measures that have no closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            seed: 0,
        }
    }
}

/// γ(set) with the default Monte Carlo fallback.
pub fn gauss_measure(set: &Region) -> MeasureValue {
    gauss_measure_with(set, &McConfig::default())
}

/// γ(set). Closed form for anything that reduces to interval unions (N = 1),
/// axis-aligned box/half-space algebra, single half-spaces, centered balls
/// and complements of those; Monte Carlo otherwise.
pub fn gauss_measure_with(set: &Region, mc: &McConfig) -> MeasureValue {
    match closed_form_measure(set.expr(), set.dimension()) {
        Some(v) => MeasureValue::exact(v),
        None => monte_carlo_measure(set, mc),
    }
}

fn closed_form_measure(expr: &SetExpr, dim: usize) -> Option<f64> {
    if let SetExpr::Complement(inner) = expr {
        return closed_form_measure(inner, dim).map(|v| 1.0 - v);
    }
    if dim == 1 {
        return Some(expr.to_intervals().gauss_mass());
    }
    if expr.is_structurally_empty() {
        return Some(0.0);
    }
    if expr.is_structurally_full() {
        return Some(1.0);
    }
    match expr {
        SetExpr::HalfSpace { offset, .. } => return Some(std_normal_cdf(*offset)),
        SetExpr::Ball { center, radius } if center.iter().all(|&c| c == 0.0) => {
            return Some(chi_square_cdf(dim, radius * radius));
        }
        _ => {}
    }
    if expr.is_axis_aligned() {
        return axis_cells(expr, dim).map(|cells| {
            cells
                .iter()
                .map(|cell| {
                    cell.iter()
                        .map(|&(a, b)| normal_interval_mass(a, b))
                        .product::<f64>()
                })
                .sum()
        });
    }
    None
}

/// Disjoint axis-aligned cells whose union is the set, for axis-aligned
/// expressions. Returns `None` when the expression is not axis-aligned or the
/// grid would be too large.
pub fn axis_cells(expr: &SetExpr, dim: usize) -> Option<Vec<Vec<(f64, f64)>>> {
    if !expr.is_axis_aligned() {
        return None;
    }
    let mut cuts = vec![Vec::new(); dim];
    expr.collect_breakpoints(&mut cuts);
    let mut axes: Vec<Vec<(f64, f64)>> = Vec::with_capacity(dim);
    let mut total = 1usize;
    for c in &mut cuts {
        c.retain(|x| x.is_finite());
        c.sort_by(f64::total_cmp);
        c.dedup();
        let mut pieces = Vec::with_capacity(c.len() + 1);
        let mut lo = f64::NEG_INFINITY;
        for &x in c.iter() {
            pieces.push((lo, x));
            lo = x;
        }
        pieces.push((lo, f64::INFINITY));
        total = total.checked_mul(pieces.len())?;
        axes.push(pieces);
    }
    if total > MAX_AXIS_CELLS {
        return None;
    }
    let representative = |(a, b): (f64, f64)| match (a.is_finite(), b.is_finite()) {
        (true, true) => 0.5 * (a + b),
        (true, false) => a + 1.0,
        (false, true) => b - 1.0,
        (false, false) => 0.0,
    };
    let mut cells = Vec::new();
    let mut index = vec![0usize; dim];
    let mut probe = vec![0.0; dim];
    'outer: loop {
        for (axis, &i) in index.iter().enumerate() {
            probe[axis] = representative(axes[axis][i]);
        }
        if expr.contains(&probe) {
            cells.push(
                index
                    .iter()
                    .enumerate()
                    .map(|(axis, &i)| axes[axis][i])
                    .collect(),
            );
        }
        for axis in 0..dim {
            index[axis] += 1;
            if index[axis] < axes[axis].len() {
                continue 'outer;
            }
            index[axis] = 0;
        }
        break;
    }
    Some(cells)
}

const MC_BATCH: u64 = 1 << 16;

fn monte_carlo_measure(set: &Region, mc: &McConfig) -> MeasureValue {
    let dim = set.dimension();
    let batches = mc.samples.div_ceil(MC_BATCH);
    let hits: u64 = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = rng::stream(mc.seed, b);
            let n = MC_BATCH.min(mc.samples - b * MC_BATCH);
            let mut x = vec![0.0; dim];
            let mut count = 0u64;
            for _ in 0..n {
                fill_gaussian(&mut rng, &mut x);
                count += set.contains(&x) as u64;
            }
            count
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    let n = mc.samples.max(1) as f64;
    let p = hits as f64 / n;
    MeasureValue {
        value: p,
        error: (p * (1.0 - p) / n).sqrt().max(1.0 / n),
        method: MeasureMethod::MonteCarlo,
    }
}

pub(crate) fn fill_gaussian(rng: &mut StreamRng, x: &mut [f64]) {
    for v in x.iter_mut() {
        *v = rng.sample(StandardNormal);
    }
}

/// Rejection draw from γ conditioned on `set`. The caller checks viability.
pub(crate) fn fill_restricted(rng: &mut StreamRng, set: &Region, x: &mut [f64]) {
    loop {
        fill_gaussian(rng, x);
        if set.contains(x) {
            return;
        }
    }
}

/// `n` i.i.d. draws from γ (conditioned on `restrict` when given),
/// deterministic in `seed`.
pub fn sample_gaussian(
    dim: usize,
    n: usize,
    seed: u64,
    restrict: Option<&Region>,
) -> Result<Vec<Point>> {
    if let Some(r) = restrict {
        if r.dimension() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: r.dimension(),
            });
        }
        let mass = gauss_measure(r);
        if mass.value < MIN_RESTRICTION_MASS {
            return Err(Error::RestrictionTooSmall {
                mass: mass.value,
                threshold: MIN_RESTRICTION_MASS,
            });
        }
    }
    let mut rng = rng::stream(seed, 0);
    let mut out = Vec::with_capacity(n);
    let mut x = vec![0.0; dim];
    for _ in 0..n {
        match restrict {
            Some(r) => fill_restricted(&mut rng, r, &mut x),
            None => fill_gaussian(&mut rng, &mut x),
        }
        out.push(Point(x.clone()));
    }
    Ok(out)
}
