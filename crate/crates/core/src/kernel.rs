//! The Mehler kernel of the Ornstein–Uhlenbeck semigroup and the
//! subordinated jump kernel
//!
//! ```text
//! K_σ(x, y) = ∫₀^∞ M_t(x, y) t^{−σ/2−1} dt.
//! ```
//!
//! The time integral is evaluated in log-time `v = ln t`. Near `t = 0` the
//! integrand behaves like a Gauss–Weierstrass kernel in `|x − y|`, which in
//! log-time becomes a smooth bump centred at `t ≈ |x−y|²/(2(N+σ))` followed
//! by a double-exponential decay to the left; both are resolved by adaptive
//! Gauss–Legendre. Beyond `tail_time` the kernel is replaced by its limit 1
//! and the deviation is bounded analytically.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{dist_sq, norm_sq};
use crate::quad::{adaptive, GaussHermite};
use crate::special::kernel_lower_constant;

/// Controls for the time integral defining K_σ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Boundary between the near-field and far-field time integrals.
    pub split_time: f64,
    /// Relative accuracy target for each kernel value.
    pub rel_tol: f64,
    /// Beyond this time the kernel is replaced by 1 with an explicit bound.
    pub tail_time: f64,
    /// Integrate the near field in log-time (otherwise plain time).
    pub near_zero_substitution: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            split_time: 1.0,
            rel_tol: 1e-8,
            tail_time: 40.0,
            near_zero_substitution: true,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.split_time > 0.0
            && self.split_time <= self.tail_time
            && self.tail_time.is_finite())
        {
            return Err(Error::InvalidArgument(format!(
                "need 0 < split_time <= tail_time < inf, got {} and {}",
                self.split_time, self.tail_time
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(Error::InvalidArgument(format!(
                "rel_tol must lie in (0, 1e-2], got {}",
                self.rel_tol
            )));
        }
        Ok(())
    }
}

/// A kernel value with an error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: f64,
    pub error_bound: f64,
}

/// Mehler kernel M_t(x, y).
pub fn mehler(t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "Mehler kernel needs t > 0, got {t}"
        )));
    }
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let r2 = dist_sq(x, y);
    let s2 = norm_sq(x) + norm_sq(y);
    Ok(log_mehler(t, r2, s2, 1.0, x.len() as f64).exp())
}

/// ln M_t in the rearranged form
/// `−a|x−y|²/(2q) + a(|x|²+|y|²)/(2(1+a)) − (N/2) ln q`, with `a = e^{−t}`,
/// `q = 1 − e^{−2t}`, which is free of cancellation for small and large t.
/// `weight` scales the second term (0 gives the radial majorant).
#[inline]
fn log_mehler(t: f64, r2: f64, s2: f64, weight: f64, n: f64) -> f64 {
    let a = (-t).exp();
    let q = if t < 0.5 {
        -(-2.0 * t).exp_m1()
    } else {
        1.0 - a * a
    };
    let ln_q = if t < 0.5 { q.ln() } else { (-a * a).ln_1p() };
    -a * r2 / (2.0 * q) + weight * a * s2 / (2.0 * (1.0 + a)) - 0.5 * n * ln_q
}

/// Gauss–Weierstrass kernel H_t(r) = (4πt)^{−N/2} e^{−r²/(4t)}.
pub fn heat_kernel(t: f64, r: f64, dim: usize) -> f64 {
    (4.0 * std::f64::consts::PI * t).powf(-0.5 * dim as f64) * (-r * r / (4.0 * t)).exp()
}

/// ∫ M_t(x, ·) dγ by tensor Gauss–Hermite quadrature. Should equal 1.
pub fn semigroup_mass(t: f64, x: &[f64]) -> Result<f64> {
    semigroup_mass_with_order(t, x, 200)
}

pub fn semigroup_mass_with_order(t: f64, x: &[f64], order: usize) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "semigroup time must be positive, got {t}"
        )));
    }
    let dim = x.len();
    if dim == 0 || dim > 3 {
        return Err(Error::InvalidArgument(
            "tensor Gauss-Hermite supports 1 <= N <= 3".into(),
        ));
    }
    let rule = GaussHermite::new(order);
    let m = rule.nodes.len();
    let mut idx = vec![0usize; dim];
    let mut y = vec![0.0; dim];
    let mut sum = 0.0;
    'outer: loop {
        let mut w = 1.0;
        for (k, &i) in idx.iter().enumerate() {
            y[k] = rule.nodes[i];
            w *= rule.weights[i];
        }
        if w > 0.0 {
            sum += w * mehler(t, x, &y)?;
        }
        for k in 0..dim {
            idx[k] += 1;
            if idx[k] < m {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    Ok(sum)
}

/// Pointwise lower bound C_{N,σ} / |x − y|^{N+σ}.
pub fn kernel_lower_bound(sigma: f64, x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    kernel_lower_constant(n, sigma) * dist_sq(x, y).powf(-0.5 * (n as f64 + sigma))
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma < 2.0) {
        return Err(Error::InvalidArgument(format!(
            "sigma must lie in (0, 2), got {sigma}"
        )));
    }
    Ok(())
}

/// K_σ(x, y) with a certified error bound. Fails with the best estimate
/// attached when the bound exceeds `rel_tol · value`.
pub fn kernel_k(sigma: f64, x: &[f64], y: &[f64], spec: &QuadratureSpec) -> Result<KernelValue> {
    check_sigma(sigma)?;
    spec.validate()?;
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let r2 = dist_sq(x, y);
    if r2 == 0.0 {
        return Err(Error::SingularInput);
    }
    let (kv, ok) = subordinated(sigma, x.len(), r2, norm_sq(x) + norm_sq(y), 1.0, spec);
    if ok {
        Ok(kv)
    } else {
        Err(Error::ToleranceNotMet { best: kv })
    }
}

/// Same as [`kernel_k`] but never fails on tolerance: the error bound is
/// simply reported. Used inside spatial integrators.
pub(crate) fn kernel_k_unchecked(
    sigma: f64,
    x: &[f64],
    y: &[f64],
    spec: &QuadratureSpec,
) -> KernelValue {
    subordinated(
        sigma,
        x.len(),
        dist_sq(x, y),
        norm_sq(x) + norm_sq(y),
        1.0,
        spec,
    )
    .0
}

/// Radial majorant K̃_σ(r) = ∫₀^∞ exp(−eᵗr²/(2(e^{2t}−1))) t^{−σ/2−1}(1−e^{−2t})^{−N/2} dt.
pub fn radial_kernel(sigma: f64, r: f64, dim: usize, spec: &QuadratureSpec) -> Result<KernelValue> {
    check_sigma(sigma)?;
    spec.validate()?;
    if !(r > 0.0) {
        return Err(Error::SingularInput);
    }
    let (kv, ok) = subordinated(sigma, dim, r * r, 0.0, 0.0, spec);
    if ok {
        Ok(kv)
    } else {
        Err(Error::ToleranceNotMet { best: kv })
    }
}

/// e^{|x|²/4} e^{|y|²/4} K̃_σ(|x − y|), an upper bound for K_σ(x, y).
pub fn kernel_upper_bound(
    sigma: f64,
    x: &[f64],
    y: &[f64],
    spec: &QuadratureSpec,
) -> Result<KernelValue> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let r = dist_sq(x, y).sqrt();
    let radial = radial_kernel(sigma, r, x.len(), spec)?;
    let scale = (0.25 * (norm_sq(x) + norm_sq(y))).exp();
    Ok(KernelValue {
        value: scale * radial.value,
        error_bound: scale * radial.error_bound,
    })
}

/// Drop, in nats below the near-field peak, at which the left end of the
/// log-time integral is truncated.
const NEAR_FIELD_DROP: f64 = 60.0;

const MAX_SEGMENTS: usize = 400;

/// Core evaluator shared by K_σ and K̃_σ. Returns the value and whether the
/// error bound met the tolerance.
fn subordinated(
    sigma: f64,
    dim: usize,
    r2: f64,
    s2: f64,
    weight: f64,
    spec: &QuadratureSpec,
) -> (KernelValue, bool) {
    let n = dim as f64;
    let half_sigma = 0.5 * sigma;
    let log_split = spec.split_time.ln();
    let log_tail = spec.tail_time.ln();

    // Near t = 0 the integrand in log-time is ≈ exp(−u + w ln u) with
    // u = r²/(4t), w = (N+σ)/2, peaking at u = w.
    let w = 0.5 * (n + sigma);
    let mut u = w + NEAR_FIELD_DROP;
    for _ in 0..6 {
        u = w + NEAR_FIELD_DROP + w * (u / w).ln();
    }
    let v_lo = (r2 / (4.0 * u)).ln().min(log_split - 1.0);
    let v_peak = (r2 / (2.0 * (n + sigma))).ln();

    let f_log = |v: f64| -> f64 {
        let t = v.exp();
        (log_mehler(t, r2, s2, weight, n) - half_sigma * v).exp()
    };
    let f_lin = |t: f64| -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        (log_mehler(t, r2, s2, weight, n) - (half_sigma + 1.0) * t.ln()).exp()
    };

    // Tail beyond T: ∫_T^∞ t^{−σ/2−1} dt = (2/σ) T^{−σ/2}, and
    // |M_t − 1| ≤ expm1(B) for t ≥ T with B bounding |ln M_t|.
    let a_t = (-spec.tail_time).exp();
    let q_t = -(-2.0 * spec.tail_time).exp_m1();
    let log_bound = a_t * (r2 + weight * s2) / (2.0 * q_t) - 0.5 * n * q_t.ln();
    let tail_value = spec.tail_time.powf(-half_sigma) / half_sigma;
    let tail_error = tail_value * log_bound.exp_m1();

    let target = 0.5 * spec.rel_tol;
    let (near, trunc) = if spec.near_zero_substitution {
        let mut bps = vec![v_lo];
        for c in [v_peak - 2.0, v_peak, v_peak + 2.0] {
            if c > v_lo && c < log_split {
                bps.push(c);
            }
        }
        bps.push(log_split);
        bps.push(log_tail);
        let res = adaptive(f_log, &bps, 0.0, target, tail_value, MAX_SEGMENTS);
        (res, f_log(v_lo))
    } else {
        let t_lo = v_lo.exp();
        let mut bps = vec![t_lo];
        let mut t = t_lo;
        while t * 4.0 < spec.split_time {
            t *= 4.0;
            bps.push(t);
        }
        bps.push(spec.split_time);
        bps.push(spec.tail_time);
        let res = adaptive(f_lin, &bps, 0.0, target, tail_value, 4 * MAX_SEGMENTS);
        (res, f_log(v_lo))
    };

    let value = near.value + tail_value;
    let error_bound = near.error + trunc + tail_error;
    let ok = near.converged && error_bound <= spec.rel_tol * value;
    (KernelValue { value, error_bound }, ok)
}
