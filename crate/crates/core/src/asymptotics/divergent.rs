//! A bounded set made of infinitely many shrinking intervals whose
//! perimeter is infinite for every order.
//!
//! With β₁ = 1/ln²2 and β_k = 1/(k ln²k), M = Σβ_k is finite while
//! Σβ_k^{1−s} diverges. Put σ_m = β₁ + … + β_m, I_m = (σ_m, σ_{m+1}),
//! Ω = (0, M) and E = ∪_j I_{2j}. Adjacent intervals I_{2j}, I_{2j+1}
//! contribute at least (1/2π)e^{−M²}/(1−s)·β_{2j+2}^{1−s} each.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interaction::{perimeter, InteractionConfig, InteractionEstimate};
use crate::measure::{IntervalUnion, Region};

pub fn beta(k: usize) -> f64 {
    assert!(k >= 1);
    if k == 1 {
        let l = 2f64.ln();
        1.0 / (l * l)
    } else {
        let kf = k as f64;
        let l = kf.ln();
        1.0 / (kf * l * l)
    }
}

/// M = Σβ_k enclosed by the integral test applied to the tail after `terms`
/// summands: S_K + 1/ln(K+1) ≤ M ≤ S_K + 1/ln K.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesMass {
    pub partial_sum: f64,
    pub terms: usize,
    pub lower: f64,
    pub upper: f64,
}

impl SeriesMass {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

pub fn beta_series_mass(terms: usize) -> Result<SeriesMass> {
    if terms < 2 {
        return Err(Error::InvalidArgument("need at least two terms".into()));
    }
    // Smallest terms first.
    let partial_sum: f64 = (1..=terms).rev().map(beta).sum();
    let k = terms as f64;
    Ok(SeriesMass {
        partial_sum,
        terms,
        lower: partial_sum + 1.0 / (k + 1.0).ln(),
        upper: partial_sum + 1.0 / k.ln(),
    })
}

/// Lower bounds for P_s of the truncated set E_J = I_2 ∪ I_4 ∪ … ∪ I_{2J}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergentBound {
    pub pairs: usize,
    pub s: f64,
    /// (1/2π)e^{−M²}/(1−s)·Σ_{j≤J} β_{2j+2}^{1−s}.
    pub lower_bound: f64,
    /// (1/2π)e^{−M²}/(s(1−s))·Σ_{j≤J}[β_{2j+2}^{1−s} + β_{2j+1}^{1−s} − (β_{2j+1}+β_{2j+2})^{1−s}],
    /// which dominates `lower_bound`.
    pub bracket_bound: f64,
    /// Upper end of the enclosure of M used in e^{−M²}.
    pub mass: f64,
    pub direct: Option<InteractionEstimate>,
}

/// Terms summed when bracketing M.
const MASS_TERMS: usize = 1_000_000;

/// The interval-union E_J and Ω = (0, M).
pub fn divergent_sets(pairs: usize) -> Result<(Region, Region)> {
    let m = beta_series_mass(MASS_TERMS)?.upper;
    let mut sigma = vec![0.0; 2 * pairs + 2];
    let mut acc = 0.0;
    for (i, v) in sigma.iter_mut().enumerate().skip(1) {
        acc += beta(i);
        *v = acc;
    }
    let parts = (1..=pairs)
        .map(|j| (sigma[2 * j], sigma[2 * j + 1]))
        .collect();
    Ok((
        Region::intervals(IntervalUnion::new(parts)?),
        Region::interval(0.0, m),
    ))
}

/// Analytic lower bounds and, when `direct` is given, the quadrature value
/// of P_s(E_J; Ω) under that configuration.
pub fn divergent_example(
    pairs: usize,
    s: f64,
    direct: Option<&InteractionConfig>,
) -> Result<DivergentBound> {
    if pairs < 2 {
        return Err(Error::InvalidArgument(
            "need at least two interval pairs".into(),
        ));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "s must lie in (0, 1), got {s}"
        )));
    }
    let mass = beta_series_mass(MASS_TERMS)?.upper;
    let pref = (-mass * mass).exp() / (2.0 * std::f64::consts::PI);
    let p = 1.0 - s;
    let mut simple = 0.0;
    let mut bracket = 0.0;
    for j in (1..=pairs).rev() {
        let b1 = beta(2 * j + 1);
        let b2 = beta(2 * j + 2);
        simple += b2.powf(p);
        bracket += b2.powf(p) + b1.powf(p) - (b1 + b2).powf(p);
    }
    let direct = match direct {
        Some(cfg) => {
            let (e, omega) = divergent_sets(pairs)?;
            Some(perimeter(&e, &omega, s, cfg)?.total)
        }
        None => None,
    };
    Ok(DivergentBound {
        pairs,
        s,
        lower_bound: pref / (1.0 - s) * simple,
        bracket_bound: pref / (s * (1.0 - s)) * bracket,
        mass,
        direct,
    })
}
