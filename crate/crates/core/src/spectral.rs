//! Expansions in the orthonormal Hermite basis of L²(γ) and the spectral
//! form of the Gaussian fractional seminorm.
//!
//! The basis functions are h_α(x) = ∏ He_{αᵢ}(xᵢ)/√(αᵢ!), eigenfunctions of
//! the Ornstein–Uhlenbeck operator with eigenvalue |α| = Σ αᵢ. For
//! u = Σ c_α h_α,
//!
//! ```text
//! [u]²_s = (2Γ(1−s)/s) Σ_{|α|≥1} |α|^s c_α².
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldKind, ScalarField};
use crate::measure::{axis_cells, gauss_measure, IntervalUnion, Region};
use crate::quad::GaussHermite;
use crate::special::{gamma_fn, gamma_neg_abs, std_normal_pdf};

/// Largest per-coordinate degree accepted by [`hermite_value`].
pub const HERMITE_DEGREE_CAP: usize = 200;

/// Largest total degree for expansions computed by quadrature.
pub const QUADRATURE_DEGREE_CAP: usize = 500;

/// Endpoints beyond this magnitude contribute below f64 resolution.
const ENDPOINT_CUTOFF: f64 = 38.0;

/// h_0(x), …, h_n(x) by the normalised three-term recurrence
/// h_{k+1} = (x h_k − √k h_{k−1})/√(k+1).
fn hermite_row(n: usize, x: f64, start: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(start);
    if n == 0 {
        return out;
    }
    out.push(x * start);
    for k in 1..n {
        let next = (x * out[k] - (k as f64).sqrt() * out[k - 1]) / ((k + 1) as f64).sqrt();
        out.push(next);
    }
    out
}

/// Normalised Hermite function h_α(x).
pub fn hermite_value(alpha: &[usize], x: &[f64]) -> Result<f64> {
    if alpha.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: alpha.len(),
            got: x.len(),
        });
    }
    let mut v = 1.0;
    for (&a, &xi) in alpha.iter().zip(x) {
        if a > HERMITE_DEGREE_CAP {
            return Err(Error::DegreeCap {
                degree: a,
                cap: HERMITE_DEGREE_CAP,
            });
        }
        v *= hermite_row(a, xi, 1.0)[a];
    }
    Ok(v)
}

/// All multi-indices of length `dim` with total degree ≤ `degree`, ordered
/// by total degree and then lexicographically.
pub fn multi_indices(dim: usize, degree: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for total in 0..=degree {
        let mut current = vec![0usize; dim];
        fill_indices(&mut out, &mut current, 0, total);
    }
    out
}

fn fill_indices(out: &mut Vec<Vec<usize>>, current: &mut Vec<usize>, pos: usize, remaining: usize) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(current.clone());
        return;
    }
    for k in (0..=remaining).rev() {
        current[pos] = k;
        fill_indices(out, current, pos + 1, remaining - k);
    }
}

/// Truncated Hermite expansion. `tail_bound` estimates Σ_{|α|>D} c_α² as
/// ‖u‖² − Σ_{|α|≤D} c_α².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermiteExpansion {
    pub dimension: usize,
    pub degree: usize,
    pub entries: Vec<(Vec<usize>, f64)>,
    pub tail_bound: f64,
}

impl HermiteExpansion {
    pub fn coefficient(&self, alpha: &[usize]) -> f64 {
        self.entries
            .iter()
            .find(|(a, _)| a.as_slice() == alpha)
            .map_or(0.0, |e| e.1)
    }

    /// Σ_{|α|≤D} c_α².
    pub fn captured_norm_sq(&self) -> f64 {
        self.entries.iter().map(|(_, c)| c * c).sum()
    }

    /// ‖u‖², the captured part plus the tail.
    pub fn norm_sq(&self) -> f64 {
        self.captured_norm_sq() + self.tail_bound
    }

    /// Σ_{|α|≤d} c_α² for d = 0, …, D.
    pub fn partial_norms(&self) -> Vec<f64> {
        let mut by_degree = vec![0.0; self.degree + 1];
        for (a, c) in &self.entries {
            by_degree[a.iter().sum::<usize>()] += c * c;
        }
        let mut acc = 0.0;
        by_degree
            .into_iter()
            .map(|v| {
                acc += v;
                acc
            })
            .collect()
    }

    /// ⟨u, v⟩ over the common truncation.
    pub fn inner_product(&self, other: &HermiteExpansion) -> Result<f64> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: other.dimension,
            });
        }
        if self.dimension == 1 {
            let mut b = vec![0.0; other.degree + 1];
            for (a, c) in &other.entries {
                b[a[0]] = *c;
            }
            return Ok(self
                .entries
                .iter()
                .filter(|(a, _)| a[0] <= other.degree)
                .map(|(a, c)| c * b[a[0]])
                .sum());
        }
        Ok(self
            .entries
            .iter()
            .map(|(a, c)| c * other.coefficient(a))
            .sum())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("expansion serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let e: HermiteExpansion = serde_json::from_str(s)
            .map_err(|err| Error::InvalidArgument(format!("bad expansion JSON: {err}")))?;
        if e.entries
            .iter()
            .any(|(a, _)| a.len() != e.dimension || a.iter().sum::<usize>() > e.degree)
        {
            return Err(Error::InvalidArgument(
                "multi-index inconsistent with dimension or degree".into(),
            ));
        }
        Ok(e)
    }
}

/// Expands `u` up to total degree `degree`. Indicators of interval unions
/// (N = 1) and of axis-aligned sets use exact coefficients; everything else
/// uses tensor Gauss–Hermite quadrature of order `order ≥ 2·degree`.
pub fn expand(u: &ScalarField, degree: usize, order: usize) -> Result<HermiteExpansion> {
    if let FieldKind::Indicator(region) = u.kind() {
        if let Some(e) = expand_indicator(region, degree)? {
            return Ok(e);
        }
    }
    expand_by_quadrature(u, degree, order)
}

/// ∫_a^b h_n dγ for n = 0..=degree, from ∫_a^∞ He_n dγ = He_{n−1}(a)γ₁(a).
fn interval_coefficients(a: f64, b: f64, degree: usize) -> Vec<f64> {
    let mut out = vec![0.0; degree + 1];
    out[0] = crate::special::normal_interval_mass(a, b);
    if degree == 0 {
        return out;
    }
    for (end, sign) in [(a, 1.0), (b, -1.0)] {
        if !end.is_finite() || end.abs() > ENDPOINT_CUTOFF {
            continue;
        }
        // g_k = h_k(end)·γ₁(end) stays bounded, so start the recurrence there.
        let g = hermite_row(degree - 1, end, std_normal_pdf(end));
        for n in 1..=degree {
            out[n] += sign * g[n - 1] / (n as f64).sqrt();
        }
    }
    out
}

fn expand_indicator(region: &Region, degree: usize) -> Result<Option<HermiteExpansion>> {
    let dim = region.dimension();
    let mass = gauss_measure(region);
    if let Some(iv) = region.as_intervals() {
        return Ok(Some(indicator_1d(&iv, degree)));
    }
    let Some(cells) = axis_cells(region.expr(), dim) else {
        return Ok(None);
    };
    let per_axis: Vec<Vec<Vec<f64>>> = cells
        .iter()
        .map(|cell| {
            cell.iter()
                .map(|&(a, b)| interval_coefficients(a, b, degree))
                .collect()
        })
        .collect();
    let entries: Vec<(Vec<usize>, f64)> = multi_indices(dim, degree)
        .into_iter()
        .map(|alpha| {
            let c = per_axis
                .iter()
                .map(|axes| {
                    alpha
                        .iter()
                        .enumerate()
                        .map(|(k, &ak)| axes[k][ak])
                        .product::<f64>()
                })
                .sum();
            (alpha, c)
        })
        .collect();
    let captured: f64 = entries.iter().map(|(_, c)| c * c).sum();
    Ok(Some(HermiteExpansion {
        dimension: dim,
        degree,
        entries,
        tail_bound: (mass.value - captured).max(0.0),
    }))
}

fn indicator_1d(iv: &IntervalUnion, degree: usize) -> HermiteExpansion {
    let mut coeffs = vec![0.0; degree + 1];
    for &(a, b) in iv.parts() {
        for (c, v) in coeffs.iter_mut().zip(interval_coefficients(a, b, degree)) {
            *c += v;
        }
    }
    let captured: f64 = coeffs.iter().map(|c| c * c).sum();
    HermiteExpansion {
        dimension: 1,
        degree,
        entries: coeffs
            .into_iter()
            .enumerate()
            .map(|(n, c)| (vec![n], c))
            .collect(),
        tail_bound: (iv.gauss_mass() - captured).max(0.0),
    }
}

fn expand_by_quadrature(u: &ScalarField, degree: usize, order: usize) -> Result<HermiteExpansion> {
    if degree > QUADRATURE_DEGREE_CAP {
        return Err(Error::QuadratureOrder(format!(
            "degree {degree} exceeds {QUADRATURE_DEGREE_CAP}, the limit for quadrature-based expansion"
        )));
    }
    if order < 2 * degree.max(1) {
        return Err(Error::QuadratureOrder(format!(
            "order {order} is below twice the degree {degree}"
        )));
    }
    let dim = u.dimension();
    let grid = (order as f64).powi(dim as i32);
    if grid > 2e7 {
        return Err(Error::QuadratureOrder(format!(
            "tensor grid of {order}^{dim} points is too large"
        )));
    }
    let rule = GaussHermite::new(order);
    let m = order;
    // h_k(x_i) for every node.
    let table: Vec<Vec<f64>> = rule
        .nodes
        .iter()
        .map(|&x| hermite_row(degree, x, 1.0))
        .collect();

    // Values times weights on the tensor grid, first axis fastest.
    let total = m.pow(dim as u32);
    let mut vals = vec![0.0; total];
    let mut point = vec![0.0; dim];
    let mut norm_sq = 0.0;
    for (flat, v) in vals.iter_mut().enumerate() {
        let mut rem = flat;
        let mut w = 1.0;
        for k in 0..dim {
            let i = rem % m;
            rem /= m;
            point[k] = rule.nodes[i];
            w *= rule.weights[i];
        }
        let f = u.eval(&point);
        if !f.is_finite() {
            return Err(Error::InvalidArgument(
                "function is not finite at a quadrature node".into(),
            ));
        }
        norm_sq += w * f * f;
        *v = w * f;
    }
    // Contract one axis at a time: the leading axis of length m becomes a
    // trailing axis of length degree + 1.
    let mut data = vals;
    let mut shape: Vec<usize> = vec![m; dim];
    for _ in 0..dim {
        let len = shape[0];
        let rest: usize = shape[1..].iter().product();
        let mut next = vec![0.0; rest * (degree + 1)];
        for r in 0..rest {
            for (i, row) in table.iter().enumerate().take(len) {
                let v = data[r * len + i];
                if v == 0.0 {
                    continue;
                }
                for k in 0..=degree {
                    next[k * rest + r] += v * row[k];
                }
            }
        }
        data = next;
        shape.remove(0);
        shape.push(degree + 1);
    }
    let entries: Vec<(Vec<usize>, f64)> = multi_indices(dim, degree)
        .into_iter()
        .map(|alpha| {
            let mut idx = 0;
            let mut stride = 1;
            for &a in &alpha {
                idx += a * stride;
                stride *= degree + 1;
            }
            let c = data[idx];
            (alpha, c)
        })
        .collect();
    let captured: f64 = entries.iter().map(|(_, c)| c * c).sum();
    let defect = norm_sq - captured;
    if defect < -1e-10 * norm_sq.max(1.0) {
        return Err(Error::QuadratureOrder(format!(
            "Parseval defect {defect:e} is negative"
        )));
    }
    Ok(HermiteExpansion {
        dimension: dim,
        degree,
        entries,
        tail_bound: defect.max(0.0),
    })
}

/// Spectral seminorm [u]²_s of the truncated expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralSeminorm {
    pub s: f64,
    /// (2Γ(1−s)/s) Σ_{1≤|α|≤D} |α|^s c_α².
    pub value: f64,
    /// (2Γ(1−s)/s)(D+1)^s·tail_bound: the missing part is at least this,
    /// and equals it to first order as s → 0.
    pub truncation: f64,
}

impl SpectralSeminorm {
    /// s·([u]² truncated + truncation estimate).
    pub fn scaled_estimate(&self) -> f64 {
        self.s * (self.value + self.truncation)
    }
}

pub fn spectral_seminorm_sq(e: &HermiteExpansion, s: f64) -> Result<SpectralSeminorm> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "s must lie in (0, 1), got {s}"
        )));
    }
    let pref = 2.0 * gamma_fn(1.0 - s)? / s;
    let sum: f64 = e
        .entries
        .iter()
        .filter_map(|(a, c)| {
            let n = a.iter().sum::<usize>();
            (n >= 1).then(|| (n as f64).powf(s) * c * c)
        })
        .sum();
    Ok(SpectralSeminorm {
        s,
        value: pref * sum,
        truncation: pref * ((e.degree + 1) as f64).powf(s) * e.tail_bound,
    })
}

/// lim_{s→0} s[u]²_s = 2(‖u‖² − c₀²).
pub fn ms_limit(e: &HermiteExpansion) -> f64 {
    let c0 = e.coefficient(&vec![0; e.dimension]);
    2.0 * (e.norm_sq() - c0 * c0).max(0.0)
}

/// Coefficients of the fractional Ornstein–Uhlenbeck operator applied to u:
/// c_α ↦ |Γ(−s)|·|α|^s·c_α. The tail is scaled by the smallest possible
/// factor, |Γ(−s)|²(D+1)^{2s}.
pub fn apply_frac_ou(e: &HermiteExpansion, s: f64) -> Result<HermiteExpansion> {
    let g = gamma_neg_abs(s)?;
    let entries = e
        .entries
        .iter()
        .map(|(a, c)| {
            let n = a.iter().sum::<usize>();
            (
                a.clone(),
                if n == 0 {
                    0.0
                } else {
                    g * (n as f64).powf(s) * c
                },
            )
        })
        .collect();
    Ok(HermiteExpansion {
        dimension: e.dimension,
        degree: e.degree,
        entries,
        tail_bound: g * g * ((e.degree + 1) as f64).powf(2.0 * s) * e.tail_bound,
    })
}
