//! Rows of s·F_s(E; Ω) along a decreasing list of orders, and a
//! three-parameter extrapolation to s = 0.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interaction::{j_lambda, perimeter, InteractionConfig, InteractionMethod};
use crate::measure::Region;

const MIN_ROWS: usize = 4;

/// Which three-part functional is swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Functional {
    /// The Ornstein–Uhlenbeck perimeter P_s with measure γ.
    Perimeter,
    /// The Euclidean-kernel functional with measure λ.
    JLambda,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub s: f64,
    /// s·F_s(E; Ω).
    pub value: f64,
    pub error: f64,
    pub method: InteractionMethod,
}

/// Weighted least-squares fit of a + b·s·ln s + c·s. Residuals are divided
/// by s, so rows nearer the limit dominate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Standard error of `a` from the weighted residuals.
    pub a_std_error: f64,
    /// Root mean square of the unweighted residuals.
    pub residual_rms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub functional: Functional,
    pub rows: Vec<SweepRow>,
    pub extrapolated_limit: f64,
    /// max(largest row error, standard error of the fitted intercept).
    pub uncertainty: f64,
    pub fit: FitSummary,
    /// A row was non-finite or its error exceeded its value.
    pub divergent: bool,
}

pub fn fit_model(s: &[f64], y: &[f64]) -> Result<FitSummary> {
    if s.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: s.len(),
            got: y.len(),
        });
    }
    if s.len() < MIN_ROWS {
        return Err(Error::TooFewRows {
            required: MIN_ROWS,
            got: s.len(),
        });
    }
    let n = s.len();
    let x = DMatrix::from_fn(n, 3, |i, j| {
        let si = s[i];
        let col = [1.0, si * si.ln(), si][j];
        col / si
    });
    let rhs = DVector::from_fn(n, |i, _| y[i] / s[i]);
    let xtx = x.transpose() * &x;
    let chol = xtx
        .clone()
        .cholesky()
        .ok_or_else(|| Error::InvalidArgument("extrapolation design matrix is singular".into()))?;
    let coef = chol.solve(&(x.transpose() * &rhs));
    let weighted = &rhs - &x * &coef;
    let dof = (n - 3).max(1) as f64;
    let sigma2 = weighted.norm_squared() / dof;
    let cov00 = chol.inverse()[(0, 0)];
    let raw: f64 = (0..n)
        .map(|i| {
            let fit = coef[0] + coef[1] * s[i] * s[i].ln() + coef[2] * s[i];
            (y[i] - fit).powi(2)
        })
        .sum();
    Ok(FitSummary {
        a: coef[0],
        b: coef[1],
        c: coef[2],
        a_std_error: (sigma2 * cov00).sqrt(),
        residual_rms: (raw / n as f64).sqrt(),
    })
}

fn check_s_list(s_list: &[f64]) -> Result<()> {
    if s_list.len() < MIN_ROWS {
        return Err(Error::TooFewRows {
            required: MIN_ROWS,
            got: s_list.len(),
        });
    }
    if s_list.iter().any(|&s| !(s > 0.0 && s < 1.0)) {
        return Err(Error::InvalidArgument("every s must lie in (0, 1)".into()));
    }
    if s_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidArgument(
            "s values must be strictly decreasing".into(),
        ));
    }
    Ok(())
}

/// Sweep of s·P_s(E; Ω).
pub fn sweep(
    e: &Region,
    omega: &Region,
    s_list: &[f64],
    cfg: &InteractionConfig,
) -> Result<SweepResult> {
    sweep_functional(Functional::Perimeter, e, omega, s_list, cfg)
}

pub fn sweep_functional(
    functional: Functional,
    e: &Region,
    omega: &Region,
    s_list: &[f64],
    cfg: &InteractionConfig,
) -> Result<SweepResult> {
    check_s_list(s_list)?;
    let rows: Vec<SweepRow> = s_list
        .par_iter()
        .map(|&s| {
            let p = match functional {
                Functional::Perimeter => perimeter(e, omega, s, cfg)?,
                Functional::JLambda => j_lambda(e, omega, s, cfg)?,
            };
            Ok(SweepRow {
                s,
                value: s * p.total.value,
                error: s * p.total.error,
                method: p.total.method,
            })
        })
        .collect::<Result<_>>()?;
    let divergent = rows
        .iter()
        .any(|r| !r.value.is_finite() || !r.error.is_finite() || r.error > r.value.abs());
    let s: Vec<f64> = rows.iter().map(|r| r.s).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.value).collect();
    let fit = if divergent {
        FitSummary {
            a: f64::NAN,
            b: f64::NAN,
            c: f64::NAN,
            a_std_error: f64::NAN,
            residual_rms: f64::NAN,
        }
    } else {
        fit_model(&s, &y)?
    };
    let max_row_error = rows.iter().map(|r| r.error).fold(0.0, f64::max);
    Ok(SweepResult {
        functional,
        extrapolated_limit: fit.a,
        uncertainty: max_row_error.max(fit.a_std_error),
        fit,
        rows,
        divergent,
    })
}

impl SweepResult {
    /// CSV with header `s,value,error,method`, followed by a `#`-prefixed
    /// block describing the fit.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,value,error,method\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{}", r.s, r.value, r.error, r.method.name());
        }
        let _ = writeln!(
            out,
            "# model: a + b*s*ln(s) + c*s, residuals weighted by 1/s"
        );
        let _ = writeln!(out, "# a,{}", self.fit.a);
        let _ = writeln!(out, "# b,{}", self.fit.b);
        let _ = writeln!(out, "# c,{}", self.fit.c);
        let _ = writeln!(out, "# a_std_error,{}", self.fit.a_std_error);
        let _ = writeln!(out, "# residual_rms,{}", self.fit.residual_rms);
        let _ = writeln!(out, "# extrapolated_limit,{}", self.extrapolated_limit);
        let _ = writeln!(out, "# uncertainty,{}", self.uncertainty);
        let _ = writeln!(out, "# divergent,{}", self.divergent);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep result serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidArgument(format!("bad sweep JSON: {e}")))
    }
}
