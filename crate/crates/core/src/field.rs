//! Pointwise-evaluable real functions on ℝᴺ: indicators of regions, Hermite
//! basis functions, and arbitrary closures.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::measure::Region;
use crate::spectral::{hermite_value, HERMITE_DEGREE_CAP};

type Eval = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum FieldKind {
    Indicator(Region),
    Hermite(Vec<usize>),
    Custom,
}

/// A function u: ℝᴺ → ℝ. In one dimension it may carry the locations where
/// it jumps or kinks so that quadrature can place breakpoints there.
#[derive(Clone)]
pub struct ScalarField {
    dimension: usize,
    kind: FieldKind,
    breakpoints: Vec<f64>,
    eval: Eval,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            FieldKind::Indicator(_) => "indicator".to_string(),
            FieldKind::Hermite(a) => format!("hermite{a:?}"),
            FieldKind::Custom => "custom".to_string(),
        };
        f.debug_struct("ScalarField")
            .field("dimension", &self.dimension)
            .field("kind", &kind)
            .finish()
    }
}

impl ScalarField {
    pub fn from_fn<F>(dimension: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self {
            dimension,
            kind: FieldKind::Custom,
            breakpoints: Vec::new(),
            eval: Arc::new(f),
        }
    }

    /// Declares points (N = 1) where the function is not smooth.
    pub fn with_breakpoints(mut self, mut points: Vec<f64>) -> Self {
        points.retain(|p| p.is_finite());
        points.sort_by(f64::total_cmp);
        points.dedup();
        self.breakpoints = points;
        self
    }

    pub fn constant(dimension: usize, c: f64) -> Self {
        Self::from_fn(dimension, move |_| c)
    }

    pub fn indicator(region: &Region) -> Self {
        let breakpoints = region
            .as_intervals()
            .map(|u| u.finite_endpoints())
            .unwrap_or_default();
        let r = region.clone();
        Self {
            dimension: region.dimension(),
            kind: FieldKind::Indicator(region.clone()),
            breakpoints,
            eval: Arc::new(move |x| if r.contains(x) { 1.0 } else { 0.0 }),
        }
    }

    /// The normalised Hermite basis function with multi-index `alpha`.
    pub fn hermite(alpha: Vec<usize>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidArgument(
                "multi-index must be nonempty".into(),
            ));
        }
        if let Some(&d) = alpha.iter().find(|&&d| d > HERMITE_DEGREE_CAP) {
            return Err(Error::DegreeCap {
                degree: d,
                cap: HERMITE_DEGREE_CAP,
            });
        }
        let a = alpha.clone();
        Ok(Self {
            dimension: alpha.len(),
            kind: FieldKind::Hermite(alpha),
            breakpoints: Vec::new(),
            eval: Arc::new(move |x| hermite_value(&a, x).unwrap_or(f64::NAN)),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Piecewise constant between breakpoints (indicators only).
    pub fn is_piecewise_constant(&self) -> bool {
        matches!(self.kind, FieldKind::Indicator(_))
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }
}
