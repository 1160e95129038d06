//! Exact regions used as absorbing candidates.
//!
//! A sampled cloud cannot stand for a ball in ℝ⁶⁴ or a box in the plane
//! well enough to test "the image lies inside". Balls and boxes are
//! therefore described analytically; clouds remain available as a variant.

use serde::{Deserialize, Serialize};

use super::{check_dims, Metric, MetricError, SampledSet, StatePoint};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum Region {
    Ball {
        center: StatePoint,
        radius: f64,
    },
    /// Coordinate box, `lower ≤ x ≤ upper` componentwise.
    Box {
        lower: StatePoint,
        upper: StatePoint,
    },
    Union {
        parts: Vec<Region>,
    },
    #[serde(skip_deserializing)]
    Sampled(SampledSet),
}

impl Region {
    pub fn ball(center: StatePoint, radius: f64) -> Self {
        Region::Ball { center, radius }
    }

    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, MetricError> {
        let lower = StatePoint::new(lower)?;
        let upper = StatePoint::new(upper)?;
        check_dims(lower.dim(), upper.dim())?;
        Ok(Region::Box { lower, upper })
    }

    pub fn dim(&self) -> usize {
        match self {
            Region::Ball { center, .. } => center.dim(),
            Region::Box { lower, .. } => lower.dim(),
            Region::Union { parts } => parts.first().map_or(0, Region::dim),
            Region::Sampled(s) => s.dim(),
        }
    }

    /// Distance from `x` to the region; zero inside.
    pub fn excess(&self, metric: Metric, x: &StatePoint) -> Result<f64, MetricError> {
        check_dims(x.dim(), self.dim())?;
        Ok(match self {
            Region::Ball { center, radius } => (metric.distance(x, center)? - radius).max(0.0),
            Region::Box { lower, upper } => {
                let gap: Vec<f64> = x
                    .coords()
                    .iter()
                    .zip(lower.coords().iter().zip(upper.coords()))
                    .map(|(&v, (&lo, &hi))| {
                        if v < lo {
                            lo - v
                        } else if v > hi {
                            v - hi
                        } else {
                            0.0
                        }
                    })
                    .collect();
                metric.norm_of(&gap)
            }
            Region::Union { parts } => {
                let mut best = f64::INFINITY;
                for part in parts {
                    best = best.min(part.excess(metric, x)?);
                }
                best
            }
            Region::Sampled(s) => metric.dist_to_set(x, s)?,
        })
    }

    /// Largest excess over a cloud: the semidistance from the cloud to the region.
    pub fn set_excess(&self, metric: Metric, set: &SampledSet) -> Result<f64, MetricError> {
        let mut worst = 0.0_f64;
        for p in set.iter() {
            worst = worst.max(self.excess(metric, p)?);
        }
        Ok(worst)
    }

    /// Sufficient test for `other ⊆ N_tol(self)`. Exact for points, balls
    /// in balls, boxes in boxes and boxes in balls; a ball or box inside a
    /// union is only recognised when one part contains it.
    pub fn contains_region(&self, metric: Metric, other: &Region, tol: f64) -> Result<bool, MetricError> {
        check_dims(self.dim(), other.dim())?;
        let w = metric.weight().sqrt();
        Ok(match (other, self) {
            (Region::Sampled(s), _) => self.set_excess(metric, s)? <= tol,
            (Region::Union { parts }, _) => {
                for part in parts {
                    if !self.contains_region(metric, part, tol)? {
                        return Ok(false);
                    }
                }
                true
            }
            (_, Region::Union { parts }) => {
                for part in parts {
                    if part.contains_region(metric, other, tol)? {
                        return Ok(true);
                    }
                }
                false
            }
            (Region::Ball { center: c, radius: r }, Region::Ball { center, radius }) => {
                metric.distance(c, center)? + r <= radius + tol
            }
            (Region::Ball { center: c, radius: r }, Region::Box { lower, upper }) => {
                let half = r / w;
                let shrunk: Vec<f64> = c
                    .coords()
                    .iter()
                    .zip(lower.coords().iter().zip(upper.coords()))
                    .map(|(&v, (&lo, &hi))| {
                        if v - half < lo {
                            lo - (v - half)
                        } else if v + half > hi {
                            v + half - hi
                        } else {
                            0.0
                        }
                    })
                    .collect();
                metric.norm_of(&shrunk) <= tol
            }
            (Region::Box { lower: lo, upper: hi }, Region::Ball { center, radius }) => {
                let far: Vec<f64> = lo
                    .coords()
                    .iter()
                    .zip(hi.coords())
                    .zip(center.coords())
                    .map(|((&a, &b), &c)| (a - c).abs().max((b - c).abs()))
                    .collect();
                metric.norm_of(&far) <= radius + tol
            }
            (Region::Box { lower: lo, upper: hi }, Region::Box { lower, upper }) => {
                let gap: Vec<f64> = (0..lo.dim())
                    .map(|i| (lower.coords()[i] - lo.coords()[i]).max(0.0).max(hi.coords()[i] - upper.coords()[i]))
                    .collect();
                metric.norm_of(&gap) <= tol
            }
            (Region::Ball { center, radius }, Region::Sampled(s)) => {
                *radius <= tol && metric.dist_to_set(center, s)? <= tol - radius
            }
            (Region::Box { lower, upper }, Region::Sampled(s)) => {
                let span = metric.distance(lower, upper)?;
                span <= tol && metric.dist_to_set(lower, s)? <= tol - span
            }
        })
    }

    /// A center and radius of a ball enclosing the region.
    fn enclosing_ball(&self, metric: Metric) -> (StatePoint, f64) {
        match self {
            Region::Ball { center, radius } => (center.clone(), *radius),
            Region::Box { lower, upper } => {
                let mid: Vec<f64> = lower.coords().iter().zip(upper.coords()).map(|(a, b)| 0.5 * (a + b)).collect();
                let half: Vec<f64> = lower.coords().iter().zip(upper.coords()).map(|(a, b)| 0.5 * (b - a)).collect();
                (StatePoint::from_vec_unchecked(mid), metric.norm_of(&half))
            }
            Region::Sampled(s) => {
                let c = s.points()[0].clone();
                let r = s.iter().map(|p| metric.dist2_raw(p.coords(), c.coords())).fold(0.0, f64::max).sqrt();
                (c, r)
            }
            Region::Union { parts } => {
                let balls: Vec<_> = parts.iter().map(|p| p.enclosing_ball(metric)).collect();
                let c = balls[0].0.clone();
                let r = balls
                    .iter()
                    .map(|(ci, ri)| metric.dist2_raw(ci.coords(), c.coords()).sqrt() + ri)
                    .fold(0.0, f64::max);
                (c, r)
            }
        }
    }

    /// Upper bound on the diameter. Exact for balls, boxes and clouds.
    pub fn diameter_bound(&self, metric: Metric) -> f64 {
        match self {
            Region::Ball { radius, .. } => 2.0 * radius,
            Region::Box { .. } => 2.0 * self.enclosing_ball(metric).1,
            Region::Sampled(s) => metric.diameter(s),
            Region::Union { parts } => union_diameter_bound(metric, parts.iter()),
        }
    }
}

/// Diameter bound for a union given by its parts: the largest
/// `‖c_i − c_j‖ + r_i + r_j` over enclosing balls, and each part's own bound.
pub fn union_diameter_bound<'a>(metric: Metric, parts: impl Iterator<Item = &'a Region>) -> f64 {
    let parts: Vec<&Region> = parts.collect();
    let balls: Vec<_> = parts.iter().map(|p| p.enclosing_ball(metric)).collect();
    let mut best = parts.iter().map(|p| p.diameter_bound(metric)).fold(0.0, f64::max);
    for (i, (ci, ri)) in balls.iter().enumerate() {
        for (cj, rj) in &balls[i + 1..] {
            best = best.max(metric.dist2_raw(ci.coords(), cj.coords()).sqrt() + ri + rj);
        }
    }
    best
}

impl From<SampledSet> for Region {
    fn from(s: SampledSet) -> Self {
        Region::Sampled(s)
    }
}

/// Regions indexed by a strictly increasing time grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionFamily {
    times: Vec<f64>,
    regions: Vec<Region>,
}

impl RegionFamily {
    pub fn new(times: Vec<f64>, regions: Vec<Region>) -> Result<Self, MetricError> {
        if times.len() != regions.len() || times.is_empty() {
            return Err(MetricError::InvalidTimes("need one region per time, at least one".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) || times.iter().any(|t| !t.is_finite()) {
            return Err(MetricError::InvalidTimes("times must be finite and strictly increasing".into()));
        }
        Ok(Self { times, regions })
    }

    pub fn constant(times: Vec<f64>, region: Region) -> Result<Self, MetricError> {
        let regions = vec![region; times.len()];
        Self::new(times, regions)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn at(&self, t: f64) -> Option<&Region> {
        let tol = 1e-12 * t.abs().max(1.0);
        self.times.iter().position(|&s| (s - t).abs() <= tol).map(|i| &self.regions[i])
    }
}

impl From<super::NonautonomousSet> for RegionFamily {
    fn from(k: super::NonautonomousSet) -> Self {
        let times = k.times().to_vec();
        let regions = k.sets().iter().cloned().map(Region::Sampled).collect();
        Self { times, regions }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[f64]) -> StatePoint {
        StatePoint::new(c.to_vec()).unwrap()
    }

    #[test]
    fn ball_and_box_excess() {
        let b = Region::ball(pt(&[0.0, 0.0]), 1.0);
        assert_eq!(b.excess(Metric::Euclidean, &pt(&[3.0, 4.0])).unwrap(), 4.0);
        assert_eq!(b.excess(Metric::Euclidean, &pt(&[0.5, 0.0])).unwrap(), 0.0);
        let bx = Region::boxed(vec![0.0, 0.0], vec![1.0, 2.0]).unwrap();
        assert_eq!(bx.excess(Metric::Euclidean, &pt(&[0.5, 3.0])).unwrap(), 1.0);
        assert_eq!(bx.excess(Metric::Euclidean, &pt(&[0.5, 1.0])).unwrap(), 0.0);
        assert_eq!(bx.excess(Metric::Euclidean, &pt(&[4.0, 6.0])).unwrap(), 5.0);
    }

    #[test]
    fn union_takes_nearest_part() {
        let u = Region::Union { parts: vec![Region::ball(pt(&[0.0]), 0.1), Region::ball(pt(&[-1.0]), 0.1)] };
        assert!((u.excess(Metric::Euclidean, &pt(&[-0.5])).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(u.excess(Metric::Euclidean, &pt(&[-1.05])).unwrap(), 0.0);
    }

    #[test]
    fn containment() {
        let m = Metric::Euclidean;
        let big = Region::ball(pt(&[0.0, 0.0]), 2.0);
        let small = Region::ball(pt(&[0.5, 0.0]), 1.0);
        assert!(big.contains_region(m, &small, 0.0).unwrap());
        assert!(!small.contains_region(m, &big, 0.0).unwrap());
        let b1 = Region::boxed(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let b2 = Region::boxed(vec![0.0, 0.0], vec![1.0, 2.0]).unwrap();
        assert!(b2.contains_region(m, &b1, 0.0).unwrap());
        assert!(!b1.contains_region(m, &b2, 0.0).unwrap());
        assert!(b1.contains_region(m, &b2, 1.0).unwrap());
        assert!(big.contains_region(m, &b1, 0.0).unwrap());
        assert!(b2.contains_region(m, &Region::ball(pt(&[0.5, 1.0]), 0.5), 0.0).unwrap());
        let cloud = SampledSet::from_coords(vec![vec![0.5, 0.5], vec![1.0, 1.0]], "c").unwrap();
        assert!(b1.contains_region(m, &Region::Sampled(cloud), 0.0).unwrap());
    }

    #[test]
    fn diameter_bounds() {
        let m = Metric::Euclidean;
        let bx = Region::boxed(vec![0.0, 0.0], vec![3.0, 4.0]).unwrap();
        assert!((bx.diameter_bound(m) - 5.0).abs() < 1e-12);
        let u = Region::Union { parts: vec![Region::ball(pt(&[0.0, 0.0]), 1.0), Region::ball(pt(&[10.0, 0.0]), 1.0)] };
        assert!((u.diameter_bound(m) - 12.0).abs() < 1e-12);
    }

    #[test]
    fn region_json_shape() {
        let r = Region::ball(pt(&[0.0, 1.0]), 2.0);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v, serde_json::json!({"shape": "ball", "center": [0.0, 1.0], "radius": 2.0}));
        let back: Region = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
