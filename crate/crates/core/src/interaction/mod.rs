//! Nonlocal interactions L(A, B) = ∫_A ∫_B k(x, y) dμ(y) dμ(x), the
//! three-part perimeter built from them, and the direct double-integral
//! seminorm.
//!
//! In one dimension every operand is an interval union and the double
//! integral is done by tensor Gauss–Legendre on graded meshes. In higher
//! dimensions an importance-sampled Monte Carlo estimator is used.

mod graded;
mod monte_carlo;
mod seminorm;

use serde::{Deserialize, Serialize};

pub use seminorm::seminorm_sq_direct;

use crate::error::{Error, Result};
use crate::kernel::{kernel_k_unchecked, QuadratureSpec};
use crate::measure::{
    dist_sq, GaussianMeasure, IntervalUnion, LambdaMeasure, Region, WeightMeasure,
};
use crate::rng;
use crate::special::kernel_lower_constant;

/// Points drawn to check that two operands do not overlap (N ≥ 2).
const DISJOINT_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InteractionMethod {
    #[serde(rename = "graded-quadrature-1d")]
    GradedQuadrature1d,
    MonteCarlo,
    Hybrid,
}

impl InteractionMethod {
    pub fn name(self) -> &'static str {
        match self {
            InteractionMethod::GradedQuadrature1d => "graded-quadrature-1d",
            InteractionMethod::MonteCarlo => "monte-carlo",
            InteractionMethod::Hybrid => "hybrid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteractionEstimate {
    pub value: f64,
    /// Quadrature error estimate, or one Monte Carlo standard error.
    pub error: f64,
    pub method: InteractionMethod,
    /// Cell pairs (quadrature) or sample pairs (Monte Carlo).
    pub samples_or_cells: u64,
}

impl InteractionEstimate {
    pub fn zero(method: InteractionMethod) -> Self {
        Self {
            value: 0.0,
            error: 0.0,
            method,
            samples_or_cells: 0,
        }
    }

    /// Sum of independent estimates. Errors add linearly.
    pub fn sum(parts: &[InteractionEstimate]) -> Self {
        let method = match parts.first() {
            Some(first) if parts.iter().all(|p| p.method == first.method) => first.method,
            Some(_) => InteractionMethod::Hybrid,
            None => InteractionMethod::GradedQuadrature1d,
        };
        Self {
            value: parts.iter().map(|p| p.value).sum(),
            error: parts.iter().map(|p| p.error).sum(),
            method,
            samples_or_cells: parts.iter().map(|p| p.samples_or_cells).sum(),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            value: c * self.value,
            error: c.abs() * self.error,
            ..*self
        }
    }
}

/// Kernel in the double integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairKernel {
    /// The subordinated Ornstein–Uhlenbeck kernel K_σ.
    Subordinated(f64),
    /// The pointwise lower bound C_{N,σ}|x − y|^{−(N+σ)} of K_σ.
    LowerBound(f64),
    /// |x − y|^{−(N+σ)}.
    Euclidean(f64),
}

impl PairKernel {
    pub fn order(&self) -> f64 {
        match *self {
            PairKernel::Subordinated(s) | PairKernel::LowerBound(s) | PairKernel::Euclidean(s) => s,
        }
    }

    fn eval(&self, x: &[f64], y: &[f64], spec: &QuadratureSpec) -> (f64, f64) {
        let n = x.len() as f64;
        match *self {
            PairKernel::Subordinated(s) => {
                let k = kernel_k_unchecked(s, x, y, spec);
                (k.value, k.error_bound)
            }
            PairKernel::LowerBound(s) => (
                kernel_lower_constant(x.len(), s) * dist_sq(x, y).powf(-0.5 * (n + s)),
                0.0,
            ),
            PairKernel::Euclidean(s) => (dist_sq(x, y).powf(-0.5 * (n + s)), 0.0),
        }
    }
}

/// Measure on both factors of the double integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseMeasure {
    Gaussian,
    Lambda,
}

impl BaseMeasure {
    pub(crate) fn density_1d(&self, x: f64) -> f64 {
        match self {
            BaseMeasure::Gaussian => GaussianMeasure { dimension: 1 }.density_1d(x),
            BaseMeasure::Lambda => LambdaMeasure { dimension: 1 }.density_1d(x),
        }
    }

    /// Standard deviation of the normalised measure.
    pub(crate) fn std_dev(&self) -> f64 {
        match self {
            BaseMeasure::Gaussian => 1.0,
            BaseMeasure::Lambda => std::f64::consts::SQRT_2,
        }
    }

    pub(crate) fn total_mass(&self, dim: usize) -> f64 {
        match self {
            BaseMeasure::Gaussian => 1.0,
            BaseMeasure::Lambda => LambdaMeasure { dimension: dim }.total_mass(),
        }
    }

    /// Radius beyond which the one-dimensional density is below ~1e−31 and
    /// is dropped from quadrature meshes.
    pub(crate) fn cutoff(&self) -> f64 {
        12.0 * self.std_dev()
    }
}

/// Controls shared by all spatial integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionConfig {
    pub spec: QuadratureSpec,
    /// Maximum number of kernel evaluations.
    pub budget: u64,
    pub seed: u64,
    /// Relative standard error at which Monte Carlo stops.
    pub mc_rel_tol: f64,
    /// Geometric refinement levels toward contact points.
    pub grading_levels: usize,
}

impl Default for InteractionConfig {
    fn default() -> Self {
        Self {
            spec: QuadratureSpec::default(),
            budget: 10_000_000,
            seed: 0,
            mc_rel_tol: 1e-2,
            grading_levels: 40,
        }
    }
}

impl InteractionConfig {
    fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if !(self.mc_rel_tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "mc_rel_tol must be positive, got {}",
                self.mc_rel_tol
            )));
        }
        if self.grading_levels == 0 || self.grading_levels > 60 {
            return Err(Error::InvalidArgument(
                "grading_levels must lie in 1..=60".into(),
            ));
        }
        Ok(())
    }
}

pub(crate) fn check_order(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "s must lie in (0, 1), got {s}"
        )));
    }
    Ok(())
}

/// L^γ_s(A, B) with the subordinated kernel K_s.
pub fn interaction(
    a: &Region,
    b: &Region,
    s: f64,
    cfg: &InteractionConfig,
) -> Result<InteractionEstimate> {
    check_order(s)?;
    interaction_with(
        a,
        b,
        PairKernel::Subordinated(s),
        BaseMeasure::Gaussian,
        cfg,
    )
}

/// ∫_A ∫_B k dμ dμ for an arbitrary kernel and base measure.
pub fn interaction_with(
    a: &Region,
    b: &Region,
    kernel: PairKernel,
    measure: BaseMeasure,
    cfg: &InteractionConfig,
) -> Result<InteractionEstimate> {
    cfg.validate()?;
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch {
            expected: a.dimension(),
            got: b.dimension(),
        });
    }
    let sigma = kernel.order();
    if !(sigma > 0.0 && sigma < 2.0) {
        return Err(Error::InvalidArgument(format!(
            "kernel order must lie in (0, 2), got {sigma}"
        )));
    }
    match (a.as_intervals(), b.as_intervals()) {
        (Some(ia), Some(ib)) => interaction_1d(&ia, &ib, kernel, measure, cfg),
        _ => interaction_mc(a, b, kernel, measure, cfg),
    }
}

fn interaction_1d(
    a: &IntervalUnion,
    b: &IntervalUnion,
    kernel: PairKernel,
    measure: BaseMeasure,
    cfg: &InteractionConfig,
) -> Result<InteractionEstimate> {
    if !a.intersect(b).is_empty() {
        return Err(Error::NotDisjoint);
    }
    let cutoff = measure.cutoff();
    let cells_a = graded::mesh(a, b, cutoff, cfg.grading_levels);
    let cells_b = graded::mesh(b, a, cutoff, cfg.grading_levels);
    if cells_a.is_empty() || cells_b.is_empty() {
        return Ok(InteractionEstimate::zero(
            InteractionMethod::GradedQuadrature1d,
        ));
    }
    let needed = graded::evaluations(cells_a.len(), cells_b.len());
    if needed > cfg.budget {
        return Err(Error::BudgetExhausted {
            needed,
            budget: cfg.budget,
        });
    }
    let spec = cfg.spec;
    let r = graded::tensor_integral(
        &cells_a,
        &cells_b,
        &|x| measure.density_1d(x),
        kernel.order(),
        |x, y| kernel.eval(&[x], &[y], &spec),
    );
    Ok(InteractionEstimate {
        value: r.value,
        error: r.error,
        method: InteractionMethod::GradedQuadrature1d,
        samples_or_cells: r.pairs,
    })
}

/// Statistical disjointness check on `DISJOINT_SAMPLES` Gaussian points,
/// after the structural one.
fn check_disjoint(a: &Region, b: &Region, seed: u64) -> Result<()> {
    if a.intersect(b).is_known_empty() {
        return Ok(());
    }
    let mut rng = rng::stream(seed, u64::MAX);
    let mut x = vec![0.0; a.dimension()];
    for _ in 0..DISJOINT_SAMPLES {
        crate::measure::fill_gaussian(&mut rng, &mut x);
        if a.contains(&x) && b.contains(&x) {
            return Err(Error::NotDisjoint);
        }
    }
    Ok(())
}

fn interaction_mc(
    a: &Region,
    b: &Region,
    kernel: PairKernel,
    measure: BaseMeasure,
    cfg: &InteractionConfig,
) -> Result<InteractionEstimate> {
    check_disjoint(a, b, cfg.seed)?;
    if a.is_known_empty() || b.is_known_empty() {
        return Ok(InteractionEstimate::zero(InteractionMethod::MonteCarlo));
    }
    let settings = monte_carlo::McSettings {
        seed: cfg.seed,
        budget: cfg.budget,
        rel_tol: cfg.mc_rel_tol,
        radial_exponent: monte_carlo::radial_exponent(kernel.order()),
    };
    let spec = cfg.spec;
    monte_carlo::pair_integral(a.dimension(), measure, &settings, |x, y| {
        if a.contains(x) && b.contains(y) {
            kernel.eval(x, y, &spec)
        } else {
            (0.0, 0.0)
        }
    })
}

/// The three interactions making up a nonlocal perimeter relative to Ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerimeterBreakdown {
    /// E∩Ω against Eᶜ∩Ω.
    pub local: InteractionEstimate,
    /// E∩Ω against Eᶜ∩Ωᶜ.
    pub nonlocal_out: InteractionEstimate,
    /// E∩Ωᶜ against Eᶜ∩Ω.
    pub nonlocal_in: InteractionEstimate,
    pub total: InteractionEstimate,
}

fn breakdown(
    e: &Region,
    omega: &Region,
    kernel: PairKernel,
    measure: BaseMeasure,
    cfg: &InteractionConfig,
) -> Result<PerimeterBreakdown> {
    if e.dimension() != omega.dimension() {
        return Err(Error::DimensionMismatch {
            expected: e.dimension(),
            got: omega.dimension(),
        });
    }
    if omega.is_known_empty() {
        return Err(Error::InvalidSet("Omega must be nonempty".into()));
    }
    let ec = e.complement();
    let oc = omega.complement();
    let e_in = e.intersect(omega);
    let ec_in = ec.intersect(omega);
    let e_out = e.intersect(&oc);
    let ec_out = ec.intersect(&oc);
    let part = |x: &Region, y: &Region, stream: u64| -> Result<InteractionEstimate> {
        let c = InteractionConfig {
            seed: cfg.seed.wrapping_add(stream),
            ..*cfg
        };
        if x.is_known_empty() || y.is_known_empty() {
            let method = if x.dimension() == 1 {
                InteractionMethod::GradedQuadrature1d
            } else {
                InteractionMethod::MonteCarlo
            };
            return Ok(InteractionEstimate::zero(method));
        }
        interaction_with(x, y, kernel, measure, &c)
    };
    let local = part(&e_in, &ec_in, 0)?;
    let nonlocal_out = part(&e_in, &ec_out, 1)?;
    let nonlocal_in = part(&e_out, &ec_in, 2)?;
    let total = InteractionEstimate::sum(&[local, nonlocal_out, nonlocal_in]);
    Ok(PerimeterBreakdown {
        local,
        nonlocal_out,
        nonlocal_in,
        total,
    })
}

/// P^γ_s(E; Ω) split into its local and two nonlocal parts.
pub fn perimeter(
    e: &Region,
    omega: &Region,
    s: f64,
    cfg: &InteractionConfig,
) -> Result<PerimeterBreakdown> {
    check_order(s)?;
    breakdown(
        e,
        omega,
        PairKernel::Subordinated(s),
        BaseMeasure::Gaussian,
        cfg,
    )
}

/// The same three-part functional with kernel |x − y|^{−(N+s)} and the
/// measure λ on both factors.
pub fn j_lambda(
    e: &Region,
    omega: &Region,
    s: f64,
    cfg: &InteractionConfig,
) -> Result<PerimeterBreakdown> {
    check_order(s)?;
    breakdown(e, omega, PairKernel::Euclidean(s), BaseMeasure::Lambda, cfg)
}
