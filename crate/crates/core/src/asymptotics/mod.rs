//! Small-order asymptotics: the closed-form limit set function, sweeps of
//! s·P_s toward s = 0 with extrapolation, set-function properties of the
//! limit, explicit lower bounds, and a set of infinite perimeter.

mod divergent;
mod sweep;

use serde::{Deserialize, Serialize};

pub use divergent::{beta, beta_series_mass, divergent_example, DivergentBound, SeriesMass};
pub use sweep::{
    fit_model, sweep, sweep_functional, FitSummary, Functional, SweepResult, SweepRow,
};

use crate::error::{Error, Result};
use crate::measure::{gauss_measure_with, McConfig, MeasureMethod, MeasureValue, Region, SetExpr};

/// μ(E; Ω) = 2[γ(E)γ(Ω∖E) + γ(E∩Ω)γ(Eᶜ∩Ωᶜ)] and the measures it is built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitValue {
    pub mu: f64,
    /// Propagated Monte Carlo error (0 in closed form).
    pub error: f64,
    pub gamma_e: MeasureValue,
    pub gamma_omega_minus_e: MeasureValue,
    pub gamma_e_in_omega: MeasureValue,
    pub gamma_ec_out_omega: MeasureValue,
}

impl LimitValue {
    pub fn is_closed_form(&self) -> bool {
        [
            self.gamma_e,
            self.gamma_omega_minus_e,
            self.gamma_e_in_omega,
            self.gamma_ec_out_omega,
        ]
        .iter()
        .all(|m| m.method == MeasureMethod::ClosedForm)
    }
}

/// Sum of the three products in a fixed order so that E and Eᶜ, whose
/// products are permutations of each other, give bit-identical results.
fn sorted_sum(mut terms: [f64; 3]) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms[0] + terms[1] + terms[2]
}

fn check_dims(e: &Region, omega: &Region) -> Result<()> {
    if e.dimension() != omega.dimension() {
        return Err(Error::DimensionMismatch {
            expected: e.dimension(),
            got: omega.dimension(),
        });
    }
    Ok(())
}

pub fn mu_limit(e: &Region, omega: &Region) -> Result<LimitValue> {
    mu_limit_with(e, omega, &McConfig::default())
}

pub fn mu_limit_with(e: &Region, omega: &Region, mc: &McConfig) -> Result<LimitValue> {
    check_dims(e, omega)?;
    let ec = e.complement();
    let oc = omega.complement();
    // Atoms of the partition generated by E and Ω.
    let a = gauss_measure_with(&e.intersect(omega), mc);
    let b = gauss_measure_with(&e.intersect(&oc), mc);
    let c = gauss_measure_with(&ec.intersect(omega), mc);
    let d = gauss_measure_with(&ec.intersect(&oc), mc);
    let mu = 2.0 * sorted_sum([a.value * c.value, a.value * d.value, b.value * c.value]);
    let error = 2.0
        * (a.error * (c.value + d.value)
            + (a.value + b.value) * c.error
            + a.value * d.error
            + b.error * c.value);
    let gamma_e = MeasureValue {
        value: a.value + b.value,
        error: a.error + b.error,
        method: if a.method == b.method {
            a.method
        } else {
            MeasureMethod::MonteCarlo
        },
    };
    Ok(LimitValue {
        mu,
        error,
        gamma_e,
        gamma_omega_minus_e: c,
        gamma_e_in_omega: a,
        gamma_ec_out_omega: d,
    })
}

/// μ(A∪B) − μ(A) − μ(B) for Ω = ℝᴺ, together with −4γ(A)γ(B).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdditivityDefect {
    pub defect: f64,
    pub expected: f64,
    /// Combined standard error of `defect − expected` (0 in closed form).
    pub error: f64,
}

pub fn additivity_defect(a: &Region, b: &Region) -> Result<AdditivityDefect> {
    additivity_defect_with(a, b, &McConfig::default())
}

pub fn additivity_defect_with(a: &Region, b: &Region, mc: &McConfig) -> Result<AdditivityDefect> {
    check_dims(a, b)?;
    let overlap = a.intersect(b);
    let overlap_mass = gauss_measure_with(&overlap, mc);
    if overlap_mass.value > 4.0 * overlap_mass.error + f64::EPSILON {
        return Err(Error::NotDisjoint);
    }
    let ga = gauss_measure_with(a, mc);
    let gb = gauss_measure_with(b, mc);
    let gu = gauss_measure_with(&a.union(b), mc);
    let mu = |g: f64| 2.0 * g * (1.0 - g);
    let defect = mu(gu.value) - mu(ga.value) - mu(gb.value);
    let expected = -4.0 * ga.value * gb.value;
    let slope = |g: f64| (2.0 - 4.0 * g).abs();
    let error = slope(gu.value) * gu.error
        + slope(ga.value) * ga.error
        + slope(gb.value) * gb.error
        + 4.0 * (gb.value * ga.error + ga.value * gb.error);
    Ok(AdditivityDefect {
        defect,
        expected,
        error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubadditivityReport {
    pub mu_union: f64,
    pub mu_a: f64,
    pub mu_b: f64,
    /// μ(A) + μ(B) − μ(A∪B).
    pub slack: f64,
    pub error: f64,
    pub holds: bool,
}

pub fn check_subadditivity(a: &Region, b: &Region, omega: &Region) -> Result<SubadditivityReport> {
    check_subadditivity_with(a, b, omega, &McConfig::default())
}

pub fn check_subadditivity_with(
    a: &Region,
    b: &Region,
    omega: &Region,
    mc: &McConfig,
) -> Result<SubadditivityReport> {
    check_dims(a, b)?;
    let la = mu_limit_with(a, omega, mc)?;
    let lb = mu_limit_with(b, omega, mc)?;
    let lu = mu_limit_with(&a.union(b), omega, mc)?;
    let slack = la.mu + lb.mu - lu.mu;
    let error = la.error + lb.error + lu.error;
    Ok(SubadditivityReport {
        mu_union: lu.mu,
        mu_a: la.mu,
        mu_b: lb.mu,
        slack,
        error,
        holds: slack >= -(4.0 * error + 1e-14),
    })
}

/// E = B(0, ½) ⊂ F = ℝ with Ω = B(0, 1) in one dimension: μ(E) > 0 = μ(F),
/// so μ is not monotone under inclusion.
pub fn monotonicity_witness() -> Result<(LimitValue, LimitValue)> {
    let omega = Region::new(1, SetExpr::ball(vec![0.0], 1.0))?;
    let e = Region::new(1, SetExpr::ball(vec![0.0], 0.5))?;
    Ok((mu_limit(&e, &omega)?, mu_limit(&Region::full(1), &omega)?))
}

/// A lower bound in two forms: as stated for the model, and a variant whose
/// exponent also covers pairs with x·y < 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub stated: f64,
    pub certified: f64,
}

fn truncated_mass(set: &Region, radius: f64, mc: &McConfig) -> Result<f64> {
    let ball = Region::new(
        set.dimension(),
        SetExpr::ball(vec![0.0; set.dimension()], radius),
    )?;
    Ok(gauss_measure_with(&set.intersect(&ball), mc).value)
}

/// Floor for s·L_s(A, B) valid for every s ∈ (0, 1):
/// 2·exp(−κR²)·γ(A∩B_R)·γ(B∩B_R), with κ = 2/(e²−1) (stated) or
/// κ = 2e/(e²−1) (certified).
pub fn interaction_floor(a: &Region, b: &Region, radius: f64) -> Result<LowerBound> {
    check_dims(a, b)?;
    let mc = McConfig::default();
    let e2 = std::f64::consts::E * std::f64::consts::E;
    let products = truncated_mass(a, radius, &mc)? * truncated_mass(b, radius, &mc)?;
    let r2 = radius * radius;
    Ok(LowerBound {
        stated: 2.0 * (-2.0 * r2 / (e2 - 1.0)).exp() * products,
        certified: 2.0 * (-2.0 * std::f64::consts::E * r2 / (e2 - 1.0)).exp() * products,
    })
}

/// Row bound s·P_s(E; Ω) ≥ 2·exp(−κ_s R²)·s^{s/2}·Σ products of the three
/// interacting pairs truncated to B_R, with κ_s = 2e^{−2/s}/(1−e^{−2/s})
/// (stated) or κ_s = 2e^{−1/s}/(1−e^{−2/s}) (certified).
pub fn liminf_row_bound(e: &Region, omega: &Region, s: f64, radius: f64) -> Result<LowerBound> {
    check_dims(e, omega)?;
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "s must lie in (0, 1), got {s}"
        )));
    }
    let mc = McConfig::default();
    let ec = e.complement();
    let oc = omega.complement();
    let a = truncated_mass(&e.intersect(omega), radius, &mc)?;
    let b = truncated_mass(&e.intersect(&oc), radius, &mc)?;
    let c = truncated_mass(&ec.intersect(omega), radius, &mc)?;
    let d = truncated_mass(&ec.intersect(&oc), radius, &mc)?;
    let products = a * c + a * d + b * c;
    let q = -(-2.0 / s).exp_m1();
    let r2 = radius * radius;
    let factor = 2.0 * s.powf(0.5 * s) * products;
    Ok(LowerBound {
        stated: factor * (-2.0 * (-2.0 / s).exp() * r2 / q).exp(),
        certified: factor * (-2.0 * (-1.0 / s).exp() * r2 / q).exp(),
    })
}
