//! Special functions used by the closed-form measures and kernel constants.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use statrs::function::gamma;

use crate::error::{Error, Result};

/// Γ(z) for z > 0.
pub fn gamma_fn(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::GammaDomain(z));
    }
    Ok(gamma::gamma(z))
}

/// |Γ(−s)| for s ∈ (0, 1), via |Γ(−s)| = Γ(1−s)/s.
pub fn gamma_neg_abs(s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "|Γ(-s)| needs s in (0,1), got {s}"
        )));
    }
    Ok(gamma_fn(1.0 - s)? / s)
}

/// Standard normal cumulative distribution Φ(t).
pub fn std_normal_cdf(t: f64) -> f64 {
    0.5 * libm::erfc(-t * FRAC_1_SQRT_2)
}

/// Upper tail 1 − Φ(t), accurate for large positive t.
pub fn std_normal_sf(t: f64) -> f64 {
    0.5 * libm::erfc(t * FRAC_1_SQRT_2)
}

/// Standard normal density.
pub fn std_normal_pdf(t: f64) -> f64 {
    (-0.5 * t * t).exp() / (2.0 * PI).sqrt()
}

/// γ₁((a, b)) without cancellation in either tail.
pub fn normal_interval_mass(a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    if a >= 0.0 {
        std_normal_sf(a) - std_normal_sf(b)
    } else if b <= 0.0 {
        std_normal_cdf(b) - std_normal_cdf(a)
    } else {
        1.0 - std_normal_cdf(a) - std_normal_sf(b)
    }
}

/// P(χ²_k ≤ x), the Gaussian mass of a centered ball of radius √x in k dimensions.
pub fn chi_square_cdf(k: usize, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    gamma::gamma_lr(0.5 * k as f64, 0.5 * x)
}

/// Constant of the pointwise lower bound K_s(x,y) ≥ C / |x−y|^{N+s}.
pub fn kernel_lower_constant(dim: usize, s: f64) -> f64 {
    let n = dim as f64;
    2f64.powf(s + 0.5 * n) * gamma::gamma(0.5 * (s + n))
}

/// Surface area of the unit sphere in ℝᴺ.
pub fn unit_sphere_area(dim: usize) -> f64 {
    let n = dim as f64;
    2.0 * PI.powf(0.5 * n) / gamma::gamma(0.5 * n)
}
