use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::normal_interval_mass;

/// Finite union of open intervals on the line, kept sorted and pairwise
/// separated. Endpoints may be infinite. All Boolean operations are exact up
/// to sets of measure zero (endpoints are never tracked).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<(Bound, Bound)>", into = "Vec<(Bound, Bound)>")]
pub struct IntervalUnion {
    parts: Vec<(f64, f64)>,
}

impl IntervalUnion {
    /// Strict constructor: endpoints must be strictly increasing across the
    /// whole list.
    pub fn new(parts: Vec<(f64, f64)>) -> Result<Self> {
        let mut prev = f64::NEG_INFINITY;
        for (i, &(a, b)) in parts.iter().enumerate() {
            if a.is_nan() || b.is_nan() {
                return Err(Error::InvalidSet("NaN interval endpoint".into()));
            }
            if !(a < b) {
                return Err(Error::InvalidSet(format!(
                    "interval {i} is empty: ({a}, {b})"
                )));
            }
            if i > 0 && !(a > prev) {
                return Err(Error::InvalidSet(format!(
                    "interval {i} starts at {a}, not after previous end {prev}"
                )));
            }
            prev = b;
        }
        Ok(Self { parts })
    }

    /// Normalising constructor: sorts, drops empty pieces, merges overlapping
    /// or touching pieces.
    pub fn from_unsorted(mut parts: Vec<(f64, f64)>) -> Self {
        parts.retain(|&(a, b)| a < b);
        parts.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(parts.len());
        for (a, b) in parts {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Self { parts: merged }
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    pub fn full() -> Self {
        Self {
            parts: vec![(f64::NEG_INFINITY, f64::INFINITY)],
        }
    }

    pub fn interval(a: f64, b: f64) -> Self {
        Self::from_unsorted(vec![(a, b)])
    }

    pub fn parts(&self) -> &[(f64, f64)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.parts.iter().any(|&(a, b)| a < x && x < b)
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.parts.len() + 1);
        let mut cursor = f64::NEG_INFINITY;
        for &(a, b) in &self.parts {
            if a > cursor {
                out.push((cursor, a));
            }
            cursor = b;
        }
        if cursor < f64::INFINITY {
            out.push((cursor, f64::INFINITY));
        }
        Self { parts: out }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut all = self.parts.clone();
        all.extend_from_slice(&other.parts);
        Self::from_unsorted(all)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            let (a1, b1) = self.parts[i];
            let (a2, b2) = other.parts[j];
            let lo = a1.max(a2);
            let hi = b1.min(b2);
            if lo < hi {
                out.push((lo, hi));
            }
            if b1 < b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_unsorted(out)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersect(&other.complement())
    }

    /// Lebesgue length (may be infinite).
    pub fn length(&self) -> f64 {
        self.parts.iter().map(|&(a, b)| b - a).sum()
    }

    /// Standard Gaussian mass.
    pub fn gauss_mass(&self) -> f64 {
        self.parts
            .iter()
            .map(|&(a, b)| normal_interval_mass(a, b))
            .sum()
    }

    /// Gaussian mass of the part inside (−r, r).
    pub fn gauss_mass_within(&self, r: f64) -> f64 {
        self.intersect(&Self::interval(-r, r)).gauss_mass()
    }

    /// Restriction to a bounded window.
    pub fn clipped(&self, lo: f64, hi: f64) -> Self {
        self.intersect(&Self::interval(lo, hi))
    }

    /// Distance from `x` to the union (0 when x is inside or on the boundary).
    pub fn distance_to(&self, x: f64) -> f64 {
        self.parts
            .iter()
            .map(|&(a, b)| {
                if x < a {
                    a - x
                } else if x > b {
                    x - b
                } else {
                    0.0
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Finite endpoints in increasing order.
    pub fn finite_endpoints(&self) -> Vec<f64> {
        self.parts
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .filter(|x| x.is_finite())
            .collect()
    }
}

/// Interval endpoint on the wire: a JSON number, or one of the strings
/// `"inf"`, `"+inf"`, `"-inf"`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Number(f64),
    Named(InfName),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum InfName {
    #[serde(rename = "-inf")]
    NegInf,
    #[serde(rename = "inf", alias = "+inf")]
    PosInf,
}

impl From<Bound> for f64 {
    fn from(b: Bound) -> f64 {
        match b {
            Bound::Number(x) => x,
            Bound::Named(InfName::NegInf) => f64::NEG_INFINITY,
            Bound::Named(InfName::PosInf) => f64::INFINITY,
        }
    }
}

impl From<f64> for Bound {
    fn from(x: f64) -> Bound {
        if x == f64::INFINITY {
            Bound::Named(InfName::PosInf)
        } else if x == f64::NEG_INFINITY {
            Bound::Named(InfName::NegInf)
        } else {
            Bound::Number(x)
        }
    }
}

impl TryFrom<Vec<(Bound, Bound)>> for IntervalUnion {
    type Error = Error;

    fn try_from(v: Vec<(Bound, Bound)>) -> Result<Self> {
        Self::new(v.into_iter().map(|(a, b)| (a.into(), b.into())).collect())
    }
}

impl From<IntervalUnion> for Vec<(Bound, Bound)> {
    fn from(u: IntervalUnion) -> Self {
        u.parts
            .into_iter()
            .map(|(a, b)| (a.into(), b.into()))
            .collect()
    }
}
