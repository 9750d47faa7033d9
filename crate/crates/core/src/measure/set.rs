//! Compositional set descriptions.

use serde::{Deserialize, Serialize};

use super::intervals::IntervalUnion;
use crate::error::{Error, Result};

/// Tolerance on the Euclidean length of half-space normals.
pub const NORMAL_TOL: f64 = 1e-12;

/// Boolean expression over a handful of geometric primitives.
///
/// Membership conventions (irrelevant for every measure, but fixed so that
/// `indicator` is deterministic): half-spaces `{x : n·x ≤ offset}` are
/// closed, balls, boxes and interval pieces are open.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SetRepr", into = "SetRepr")]
pub enum SetExpr {
    HalfSpace { normal: Vec<f64>, offset: f64 },
    Ball { center: Vec<f64>, radius: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Intervals(IntervalUnion),
    Full,
    Empty,
    Complement(Box<SetExpr>),
    Union(Box<SetExpr>, Box<SetExpr>),
    Intersection(Box<SetExpr>, Box<SetExpr>),
    Difference(Box<SetExpr>, Box<SetExpr>),
}

impl SetExpr {
    pub fn half_space(normal: Vec<f64>, offset: f64) -> Self {
        SetExpr::HalfSpace { normal, offset }
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Self {
        SetExpr::Ball { center, radius }
    }

    pub fn cuboid(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        SetExpr::Box { lo, hi }
    }

    /// Single interval (a, b) on the line; either end may be infinite.
    pub fn interval(a: f64, b: f64) -> Self {
        SetExpr::Intervals(IntervalUnion::interval(a, b))
    }

    pub fn complement(&self) -> Self {
        SetExpr::Complement(Box::new(self.clone()))
    }

    pub fn union(&self, other: &Self) -> Self {
        SetExpr::Union(Box::new(self.clone()), Box::new(other.clone()))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        SetExpr::Intersection(Box::new(self.clone()), Box::new(other.clone()))
    }

    pub fn minus(&self, other: &Self) -> Self {
        SetExpr::Difference(Box::new(self.clone()), Box::new(other.clone()))
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if dim == 0 {
            return Err(Error::InvalidSet("dimension must be at least 1".into()));
        }
        let check_len = |v: &[f64], what: &str| -> Result<()> {
            if v.len() != dim {
                return Err(Error::InvalidSet(format!(
                    "{what} has {} coordinates, dimension is {dim}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidSet(format!(
                    "{what} has non-finite coordinates"
                )));
            }
            Ok(())
        };
        match self {
            SetExpr::HalfSpace { normal, offset } => {
                check_len(normal, "half-space normal")?;
                let norm = normal.iter().map(|x| x * x).sum::<f64>().sqrt();
                if (norm - 1.0).abs() > NORMAL_TOL {
                    return Err(Error::InvalidSet(format!(
                        "half-space normal has length {norm}"
                    )));
                }
                if offset.is_nan() {
                    return Err(Error::InvalidSet("half-space offset is NaN".into()));
                }
            }
            SetExpr::Ball { center, radius } => {
                check_len(center, "ball center")?;
                if !(*radius > 0.0) || !radius.is_finite() {
                    return Err(Error::InvalidSet(format!(
                        "ball radius must be positive, got {radius}"
                    )));
                }
            }
            SetExpr::Box { lo, hi } => {
                if lo.len() != dim || hi.len() != dim {
                    return Err(Error::InvalidSet(format!(
                        "box corners must have {dim} coordinates"
                    )));
                }
                if lo.iter().zip(hi).any(|(a, b)| !(a < b)) {
                    return Err(Error::InvalidSet(
                        "box requires lo < hi componentwise".into(),
                    ));
                }
            }
            SetExpr::Intervals(_) => {
                if dim != 1 {
                    return Err(Error::InvalidSet(
                        "interval unions are only valid in dimension 1".into(),
                    ));
                }
            }
            SetExpr::Full | SetExpr::Empty => {}
            SetExpr::Complement(x) => x.validate(dim)?,
            SetExpr::Union(a, b) | SetExpr::Intersection(a, b) | SetExpr::Difference(a, b) => {
                a.validate(dim)?;
                b.validate(dim)?;
            }
        }
        Ok(())
    }

    /// Membership test. The caller guarantees `x` has the right dimension.
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            SetExpr::HalfSpace { normal, offset } => {
                normal.iter().zip(x).map(|(n, xi)| n * xi).sum::<f64>() <= *offset
            }
            SetExpr::Ball { center, radius } => {
                center
                    .iter()
                    .zip(x)
                    .map(|(c, xi)| (xi - c) * (xi - c))
                    .sum::<f64>()
                    < radius * radius
            }
            SetExpr::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(xi, (a, b))| a < xi && xi < b),
            SetExpr::Intervals(u) => u.contains(x[0]),
            SetExpr::Full => true,
            SetExpr::Empty => false,
            SetExpr::Complement(a) => !a.contains(x),
            SetExpr::Union(a, b) => a.contains(x) || b.contains(x),
            SetExpr::Intersection(a, b) => a.contains(x) && b.contains(x),
            SetExpr::Difference(a, b) => a.contains(x) && !b.contains(x),
        }
    }

    /// Exact reduction to an interval union, for one-dimensional sets.
    pub fn to_intervals(&self) -> IntervalUnion {
        match self {
            SetExpr::HalfSpace { normal, offset } => {
                if normal[0] > 0.0 {
                    IntervalUnion::interval(f64::NEG_INFINITY, *offset)
                } else {
                    IntervalUnion::interval(-offset, f64::INFINITY)
                }
            }
            SetExpr::Ball { center, radius } => {
                IntervalUnion::interval(center[0] - radius, center[0] + radius)
            }
            SetExpr::Box { lo, hi } => IntervalUnion::interval(lo[0], hi[0]),
            SetExpr::Intervals(u) => u.clone(),
            SetExpr::Full => IntervalUnion::full(),
            SetExpr::Empty => IntervalUnion::empty(),
            SetExpr::Complement(a) => a.to_intervals().complement(),
            SetExpr::Union(a, b) => a.to_intervals().union(&b.to_intervals()),
            SetExpr::Intersection(a, b) => a.to_intervals().intersect(&b.to_intervals()),
            SetExpr::Difference(a, b) => a.to_intervals().difference(&b.to_intervals()),
        }
    }

    /// Structurally obvious emptiness: `Empty`, `X ∩ Xᶜ`, `X ∖ X` and what
    /// follows from those through the Boolean operators.
    pub fn is_structurally_empty(&self) -> bool {
        match self {
            SetExpr::Empty => true,
            SetExpr::Complement(a) => matches!(**a, SetExpr::Full),
            SetExpr::Union(a, b) => a.is_structurally_empty() && b.is_structurally_empty(),
            SetExpr::Intersection(a, b) => {
                a.is_structurally_empty() || b.is_structurally_empty() || is_complement_pair(a, b)
            }
            SetExpr::Difference(a, b) => {
                a.is_structurally_empty() || a == b || b.is_structurally_full()
            }
            _ => false,
        }
    }

    pub fn is_structurally_full(&self) -> bool {
        match self {
            SetExpr::Full => true,
            SetExpr::Complement(a) => a.is_structurally_empty(),
            SetExpr::Union(a, b) => {
                a.is_structurally_full() || b.is_structurally_full() || is_complement_pair(a, b)
            }
            SetExpr::Intersection(a, b) => a.is_structurally_full() && b.is_structurally_full(),
            SetExpr::Difference(a, b) => a.is_structurally_full() && b.is_structurally_empty(),
            _ => false,
        }
    }

    /// Every primitive is an axis-aligned box or half-space.
    pub fn is_axis_aligned(&self) -> bool {
        match self {
            SetExpr::HalfSpace { normal, .. } => axis_of(normal).is_some(),
            SetExpr::Ball { .. } => false,
            SetExpr::Box { .. } | SetExpr::Intervals(_) | SetExpr::Full | SetExpr::Empty => true,
            SetExpr::Complement(a) => a.is_axis_aligned(),
            SetExpr::Union(a, b) | SetExpr::Intersection(a, b) | SetExpr::Difference(a, b) => {
                a.is_axis_aligned() && b.is_axis_aligned()
            }
        }
    }

    /// Collects per-axis breakpoints of axis-aligned primitives.
    pub(crate) fn collect_breakpoints(&self, cuts: &mut [Vec<f64>]) {
        match self {
            SetExpr::HalfSpace { normal, offset } => {
                if let Some((axis, sign)) = axis_of(normal) {
                    cuts[axis].push(sign * offset);
                }
            }
            SetExpr::Box { lo, hi } => {
                for (axis, (a, b)) in lo.iter().zip(hi).enumerate() {
                    cuts[axis].push(*a);
                    cuts[axis].push(*b);
                }
            }
            SetExpr::Intervals(u) => cuts[0].extend(u.finite_endpoints()),
            SetExpr::Ball { .. } | SetExpr::Full | SetExpr::Empty => {}
            SetExpr::Complement(a) => a.collect_breakpoints(cuts),
            SetExpr::Union(a, b) | SetExpr::Intersection(a, b) | SetExpr::Difference(a, b) => {
                a.collect_breakpoints(cuts);
                b.collect_breakpoints(cuts);
            }
        }
    }
}

fn is_complement_pair(a: &SetExpr, b: &SetExpr) -> bool {
    matches!(a, SetExpr::Complement(x) if **x == *b)
        || matches!(b, SetExpr::Complement(x) if **x == *a)
}

/// For a normal equal to ±e_i, returns (i, ±1).
pub(crate) fn axis_of(normal: &[f64]) -> Option<(usize, f64)> {
    let mut found = None;
    for (i, &v) in normal.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        if found.is_some() || (v.abs() - 1.0).abs() > NORMAL_TOL {
            return None;
        }
        found = Some((i, v.signum()));
    }
    found
}

/// JSON wire form of [`SetExpr`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum SetRepr {
    Halfspace { normal: Vec<f64>, offset: f64 },
    Ball { center: Vec<f64>, r: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Intervals(IntervalUnion),
    Full(bool),
    Empty(bool),
    Not(Box<SetRepr>),
    And(Box<(SetRepr, SetRepr)>),
    Or(Box<(SetRepr, SetRepr)>),
    Diff(Box<(SetRepr, SetRepr)>),
}

impl TryFrom<SetRepr> for SetExpr {
    type Error = Error;

    fn try_from(r: SetRepr) -> Result<Self> {
        let pair = |p: Box<(SetRepr, SetRepr)>| -> Result<(Box<SetExpr>, Box<SetExpr>)> {
            let (a, b) = *p;
            Ok((Box::new(a.try_into()?), Box::new(b.try_into()?)))
        };
        Ok(match r {
            SetRepr::Halfspace { normal, offset } => SetExpr::HalfSpace { normal, offset },
            SetRepr::Ball { center, r } => SetExpr::Ball { center, radius: r },
            SetRepr::Box { lo, hi } => SetExpr::Box { lo, hi },
            SetRepr::Intervals(u) => SetExpr::Intervals(u),
            SetRepr::Full(true) | SetRepr::Empty(false) => SetExpr::Full,
            SetRepr::Empty(true) | SetRepr::Full(false) => SetExpr::Empty,
            SetRepr::Not(x) => SetExpr::Complement(Box::new((*x).try_into()?)),
            SetRepr::And(p) => {
                let (a, b) = pair(p)?;
                SetExpr::Intersection(a, b)
            }
            SetRepr::Or(p) => {
                let (a, b) = pair(p)?;
                SetExpr::Union(a, b)
            }
            SetRepr::Diff(p) => {
                let (a, b) = pair(p)?;
                SetExpr::Difference(a, b)
            }
        })
    }
}

impl From<SetExpr> for SetRepr {
    fn from(e: SetExpr) -> Self {
        let pair =
            |a: Box<SetExpr>, b: Box<SetExpr>| Box::new((SetRepr::from(*a), SetRepr::from(*b)));
        match e {
            SetExpr::HalfSpace { normal, offset } => SetRepr::Halfspace { normal, offset },
            SetExpr::Ball { center, radius } => SetRepr::Ball { center, r: radius },
            SetExpr::Box { lo, hi } => SetRepr::Box { lo, hi },
            SetExpr::Intervals(u) => SetRepr::Intervals(u),
            SetExpr::Full => SetRepr::Full(true),
            SetExpr::Empty => SetRepr::Empty(true),
            SetExpr::Complement(x) => SetRepr::Not(Box::new((*x).into())),
            SetExpr::Union(a, b) => SetRepr::Or(pair(a, b)),
            SetExpr::Intersection(a, b) => SetRepr::And(pair(a, b)),
            SetExpr::Difference(a, b) => SetRepr::Diff(pair(a, b)),
        }
    }
}

/// A set expression together with its ambient dimension. This is also the
/// root of the JSON set document: `{"dimension": N, "set": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RegionRepr", into = "RegionRepr")]
pub struct Region {
    dimension: usize,
    expr: SetExpr,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionRepr {
    dimension: usize,
    set: SetExpr,
}

impl TryFrom<RegionRepr> for Region {
    type Error = Error;
    fn try_from(r: RegionRepr) -> Result<Self> {
        Region::new(r.dimension, r.set)
    }
}

impl From<Region> for RegionRepr {
    fn from(r: Region) -> Self {
        RegionRepr {
            dimension: r.dimension,
            set: r.expr,
        }
    }
}

impl Region {
    pub fn new(dimension: usize, expr: SetExpr) -> Result<Self> {
        expr.validate(dimension)?;
        Ok(Self { dimension, expr })
    }

    pub fn full(dimension: usize) -> Self {
        Self {
            dimension,
            expr: SetExpr::Full,
        }
    }

    pub fn empty(dimension: usize) -> Self {
        Self {
            dimension,
            expr: SetExpr::Empty,
        }
    }

    /// One-dimensional region from an interval union.
    pub fn intervals(u: IntervalUnion) -> Self {
        Self {
            dimension: 1,
            expr: SetExpr::Intervals(u),
        }
    }

    /// One-dimensional region (a, b).
    pub fn interval(a: f64, b: f64) -> Self {
        Self::intervals(IntervalUnion::interval(a, b))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn expr(&self) -> &SetExpr {
        &self.expr
    }

    pub fn indicator(&self, x: &[f64]) -> Result<u8> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: x.len(),
            });
        }
        Ok(self.expr.contains(x) as u8)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.expr.contains(x)
    }

    fn combine(&self, other: &Region, f: impl FnOnce(&SetExpr, &SetExpr) -> SetExpr) -> Region {
        assert_eq!(
            self.dimension, other.dimension,
            "combining regions of different dimension"
        );
        Region {
            dimension: self.dimension,
            expr: f(&self.expr, &other.expr),
        }
    }

    pub fn complement(&self) -> Region {
        Region {
            dimension: self.dimension,
            expr: self.expr.complement(),
        }
    }

    /// # Panics
    /// If the dimensions differ.
    pub fn union(&self, other: &Region) -> Region {
        self.combine(other, SetExpr::union)
    }

    /// # Panics
    /// If the dimensions differ.
    pub fn intersect(&self, other: &Region) -> Region {
        self.combine(other, SetExpr::intersect)
    }

    /// # Panics
    /// If the dimensions differ.
    pub fn minus(&self, other: &Region) -> Region {
        self.combine(other, SetExpr::minus)
    }

    /// Exact interval-union form in dimension 1.
    pub fn as_intervals(&self) -> Option<IntervalUnion> {
        (self.dimension == 1).then(|| self.expr.to_intervals())
    }

    /// Known to be empty without sampling.
    pub fn is_known_empty(&self) -> bool {
        match self.as_intervals() {
            Some(u) => u.is_empty(),
            None => self.expr.is_structurally_empty(),
        }
    }
}
