//! Sampled representations of bounded subsets of the phase space.
//!
//! A bounded set is stood in for by a finite point cloud ([`SampledSet`]).
//! Every set-level quantity computed here (semidistance, neighbourhood
//! membership, covering numbers) is therefore exact for the cloud and an
//! approximation "up to sampling density" for the set it represents.

mod cover;
mod io;
mod region;

use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cover::CoveringProfile;
pub use region::{union_diameter_bound, Region, RegionFamily};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("state point must have at least one coordinate")]
    EmptyPoint,
    #[error("non-finite coordinate {value} at index {index}")]
    NonFinite { index: usize, value: f64 },
    #[error("sampled set `{0}` has no points")]
    EmptySet(String),
    #[error("covering diameter must be positive, got {0}")]
    InvalidDelta(f64),
    #[error("covering budget must be at least 1")]
    InvalidBudget,
    #[error("nonautonomous set: {0}")]
    InvalidTimes(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error("json: {0}")]
    Json(String),
}

/// A point of the phase space: Euclidean coordinates or spectral coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct StatePoint {
    coords: Vec<f64>,
}

impl StatePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self, MetricError> {
        if coords.is_empty() {
            return Err(MetricError::EmptyPoint);
        }
        if let Some((index, &value)) = coords.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(MetricError::NonFinite { index, value });
        }
        Ok(Self { coords })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "state dimension must be positive");
        Self { coords: vec![0.0; dim] }
    }

    /// Unit vector along coordinate `index` scaled by `scale`.
    pub fn axis(dim: usize, index: usize, scale: f64) -> Self {
        let mut p = Self::zeros(dim);
        p.coords[index] = scale;
        p
    }

    /// Skips validation; callers guarantee finiteness and non-emptiness.
    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty() && coords.iter().all(|v| v.is_finite()));
        Self { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// Lexicographic order on coordinates; the tie-breaker used by every
    /// deterministic selection in the crate.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        lex_cmp(&self.coords, &other.coords)
    }
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

impl TryFrom<Vec<f64>> for StatePoint {
    type Error = MetricError;
    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<StatePoint> for Vec<f64> {
    fn from(p: StatePoint) -> Self {
        p.coords
    }
}

impl fmt::Display for StatePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Finite point cloud standing for a bounded set.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledSet {
    points: Vec<StatePoint>,
    label: String,
}

impl SampledSet {
    pub fn new(points: Vec<StatePoint>, label: impl Into<String>) -> Result<Self, MetricError> {
        let label = label.into();
        let Some(first) = points.first() else {
            return Err(MetricError::EmptySet(label));
        };
        let dim = first.dim();
        if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
            return Err(MetricError::DimensionMismatch { left: dim, right: bad.dim() });
        }
        Ok(Self { points, label })
    }

    pub fn singleton(point: StatePoint, label: impl Into<String>) -> Self {
        Self { points: vec![point], label: label.into() }
    }

    pub fn from_coords(rows: Vec<Vec<f64>>, label: impl Into<String>) -> Result<Self, MetricError> {
        let points = rows.into_iter().map(StatePoint::new).collect::<Result<Vec<_>, _>>()?;
        Self::new(points, label)
    }

    pub fn points(&self) -> &[StatePoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<StatePoint> {
        self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, StatePoint> {
        self.points.iter()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn union(&self, other: &SampledSet) -> Result<SampledSet, MetricError> {
        check_dims(self.dim(), other.dim())?;
        let mut points = self.points.clone();
        points.extend(other.points.iter().cloned());
        Ok(SampledSet { points, label: format!("{}+{}", self.label, other.label) })
    }

    /// Union of several clouds. `None` when the iterator is empty.
    pub fn union_all<'a>(
        sets: impl IntoIterator<Item = &'a SampledSet>,
        label: impl Into<String>,
    ) -> Result<Option<SampledSet>, MetricError> {
        let mut points = Vec::new();
        let mut dim = None;
        for s in sets {
            match dim {
                None => dim = Some(s.dim()),
                Some(d) => check_dims(d, s.dim())?,
            }
            points.extend(s.points.iter().cloned());
        }
        if points.is_empty() {
            return Ok(None);
        }
        Ok(Some(SampledSet { points, label: label.into() }))
    }
}

impl<'a> IntoIterator for &'a SampledSet {
    type Item = &'a StatePoint;
    type IntoIter = std::slice::Iter<'a, StatePoint>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// A family of sampled sets indexed by a strictly increasing time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct NonautonomousSet {
    times: Vec<f64>,
    sets: Vec<SampledSet>,
}

impl NonautonomousSet {
    pub fn new(times: Vec<f64>, sets: Vec<SampledSet>) -> Result<Self, MetricError> {
        if times.len() != sets.len() {
            return Err(MetricError::InvalidTimes(format!("{} times but {} sets", times.len(), sets.len())));
        }
        if times.is_empty() {
            return Err(MetricError::InvalidTimes("empty time grid".into()));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(MetricError::InvalidTimes("non-finite time".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(MetricError::InvalidTimes("times must be strictly increasing".into()));
        }
        Ok(Self { times, sets })
    }

    /// The same set at every grid time.
    pub fn constant(times: Vec<f64>, set: &SampledSet) -> Result<Self, MetricError> {
        let sets = vec![set.clone(); times.len()];
        Self::new(times, sets)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn sets(&self) -> &[SampledSet] {
        &self.sets
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &SampledSet)> {
        self.times.iter().copied().zip(self.sets.iter())
    }

    /// Set attached to grid time `t` (matched to within 1e-12 relative).
    pub fn at(&self, t: f64) -> Option<&SampledSet> {
        let tol = 1e-12 * t.abs().max(1.0);
        self.times.iter().position(|&s| (s - t).abs() <= tol).map(|i| &self.sets[i])
    }
}

fn check_dims(left: usize, right: usize) -> Result<(), MetricError> {
    if left == right {
        Ok(())
    } else {
        Err(MetricError::DimensionMismatch { left, right })
    }
}

/// The metric on coordinate vectors.
///
/// `SineModes` treats coordinates as coefficients against `sin(kx)` on
/// `(0, π)`, so every mode carries the weight `‖sin(kx)‖² = π/2` and
/// distances are L²(0,π) distances of the represented functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    #[default]
    Euclidean,
    SineModes,
}

impl Metric {
    /// Squared-norm weight applied to every coordinate.
    pub fn weight(self) -> f64 {
        match self {
            Metric::Euclidean => 1.0,
            Metric::SineModes => FRAC_PI_2,
        }
    }

    pub(crate) fn dist2_raw(self, a: &[f64], b: &[f64]) -> f64 {
        let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        s * self.weight()
    }

    pub fn distance(self, x: &StatePoint, y: &StatePoint) -> Result<f64, MetricError> {
        check_dims(x.dim(), y.dim())?;
        Ok(self.dist2_raw(&x.coords, &y.coords).sqrt())
    }

    pub fn norm(self, x: &StatePoint) -> f64 {
        self.norm_of(&x.coords)
    }

    pub(crate) fn norm_of(self, coords: &[f64]) -> f64 {
        (coords.iter().map(|c| c * c).sum::<f64>() * self.weight()).sqrt()
    }

    /// `dist(x, B) = inf_{b ∈ B} ρ(x, b)`.
    pub fn dist_to_set(self, x: &StatePoint, set: &SampledSet) -> Result<f64, MetricError> {
        check_dims(x.dim(), set.dim())?;
        Ok(self.dist2_to_set_raw(&x.coords, set).sqrt())
    }

    fn dist2_to_set_raw(self, x: &[f64], set: &SampledSet) -> f64 {
        set.points.iter().map(|b| self.dist2_raw(x, &b.coords)).fold(f64::INFINITY, f64::min)
    }

    /// Nearest point of `set` to `x`, ties broken by first occurrence.
    pub fn nearest<'a>(self, x: &StatePoint, set: &'a SampledSet) -> Result<&'a StatePoint, MetricError> {
        check_dims(x.dim(), set.dim())?;
        let mut best = &set.points[0];
        let mut best_d = f64::INFINITY;
        for p in &set.points {
            let d = self.dist2_raw(&x.coords, &p.coords);
            if d < best_d {
                best_d = d;
                best = p;
            }
        }
        Ok(best)
    }

    /// Hausdorff semidistance `sup_{a ∈ A} inf_{b ∈ B} ρ(a, b)`. Not symmetric.
    pub fn semidistance(self, a: &SampledSet, b: &SampledSet) -> Result<f64, MetricError> {
        check_dims(a.dim(), b.dim())?;
        let worst =
            crate::par::map(&a.points, |p| self.dist2_to_set_raw(&p.coords, b)).into_iter().fold(0.0_f64, f64::max);
        Ok(worst.sqrt())
    }

    /// Symmetric Hausdorff distance: the larger of the two semidistances.
    pub fn hausdorff(self, a: &SampledSet, b: &SampledSet) -> Result<f64, MetricError> {
        Ok(self.semidistance(a, b)?.max(self.semidistance(b, a)?))
    }

    /// Membership in the closed neighbourhood `N_ε(B) = {x : dist(x, B) ≤ ε}`.
    pub fn eps_neighborhood_contains(self, set: &SampledSet, x: &StatePoint, eps: f64) -> Result<bool, MetricError> {
        Ok(self.dist_to_set(x, set)? <= eps)
    }

    pub fn diameter(self, set: &SampledSet) -> f64 {
        let pts = &set.points;
        let per_row =
            crate::par::map(pts, |p| pts.iter().map(|q| self.dist2_raw(&p.coords, &q.coords)).fold(0.0_f64, f64::max));
        per_row.into_iter().fold(0.0_f64, f64::max).sqrt()
    }

    /// Largest norm over the cloud, `‖B‖ = sup_{b ∈ B} ‖b‖`.
    pub fn set_norm(self, set: &SampledSet) -> f64 {
        set.points.iter().map(|p| self.norm(p)).fold(0.0, f64::max)
    }
}
