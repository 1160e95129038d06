//! Greedy ball coverings and the budgeted noncompactness proxy.
//!
//! A finite cloud is compact, so the Kuratowski measure of any sampled set
//! is zero. What the diagnostics need instead is a scale: how small can the
//! balls be when only `k` of them are allowed. Centers are chosen
//! farthest-point-first (Gonzalez), which covers within a factor two of the
//! optimal `k`-center radius.

use serde::Serialize;

use super::{lex_cmp, Metric, MetricError, SampledSet, StatePoint};

/// Result of [`Metric::greedy_cover`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoveringProfile {
    /// Requested ball diameter; every point lies within `delta / 2` of a center.
    pub delta: f64,
    pub ball_count: usize,
    pub centers: Vec<StatePoint>,
    /// Realized covering radius (largest point-to-nearest-center distance).
    pub radius: f64,
}

/// Farthest-first traversal.
///
/// Starts from the lexicographically smallest point, then repeatedly adds
/// the point farthest from the current centers (ties to the lexicographically
/// smaller point). Stops after `max_centers` centers or once every point is
/// within `stop_radius`. Returns center indices and the covering radius
/// after each addition.
fn farthest_first(metric: Metric, set: &SampledSet, max_centers: usize, stop_radius: f64) -> (Vec<usize>, Vec<f64>) {
    let pts = set.points();
    let first =
        (0..pts.len()).min_by(|&i, &j| lex_cmp(pts[i].coords(), pts[j].coords())).expect("sampled sets are nonempty");
    let mut centers = vec![first];
    let mut best2: Vec<f64> = pts.iter().map(|p| metric.dist2_raw(p.coords(), pts[first].coords())).collect();
    let mut radii = Vec::new();
    loop {
        let mut far = 0;
        for i in 1..pts.len() {
            let better = match best2[i].total_cmp(&best2[far]) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Equal => lex_cmp(pts[i].coords(), pts[far].coords()).is_lt(),
                std::cmp::Ordering::Less => false,
            };
            if better {
                far = i;
            }
        }
        let radius = best2[far].sqrt();
        radii.push(radius);
        if radius <= stop_radius || centers.len() >= max_centers {
            break;
        }
        centers.push(far);
        let c = pts[far].coords();
        for (b, p) in best2.iter_mut().zip(pts) {
            let d = metric.dist2_raw(p.coords(), c);
            if d < *b {
                *b = d;
            }
        }
    }
    (centers, radii)
}

impl Metric {
    /// Covers the cloud by balls of diameter `delta` (radius `delta / 2`)
    /// centred at sample points chosen farthest-point-first.
    pub fn greedy_cover(self, set: &SampledSet, delta: f64) -> Result<CoveringProfile, MetricError> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(MetricError::InvalidDelta(delta));
        }
        let (centers, radii) = farthest_first(self, set, usize::MAX, delta / 2.0);
        Ok(CoveringProfile {
            delta,
            ball_count: centers.len(),
            centers: centers.iter().map(|&i| set.points()[i].clone()).collect(),
            radius: *radii.last().expect("at least one radius"),
        })
    }

    /// Budgeted covering proxy for the Kuratowski measure.
    ///
    /// Returns the smallest ball radius at which the greedy cover needs at
    /// most `budget` balls. Since the farthest-first order does not depend
    /// on the radius threshold, this is the covering radius after `budget`
    /// centers, computed exactly rather than by bisection. Nonincreasing in
    /// `budget`; zero once `budget` reaches the number of distinct points.
    pub fn kuratowski_proxy(self, set: &SampledSet, budget: usize) -> Result<f64, MetricError> {
        if budget == 0 {
            return Err(MetricError::InvalidBudget);
        }
        let (_, radii) = farthest_first(self, set, budget, 0.0);
        Ok(*radii.last().expect("at least one radius"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(values: impl IntoIterator<Item = f64>) -> SampledSet {
        SampledSet::from_coords(values.into_iter().map(|v| vec![v]).collect(), "line").unwrap()
    }

    /// Exact minimum number of closed intervals of length `delta` covering
    /// sorted 1-D samples (sweep from the left).
    fn interval_cover_count(mut xs: Vec<f64>, delta: f64) -> usize {
        xs.sort_by(f64::total_cmp);
        let mut count = 0;
        let mut reach = f64::NEG_INFINITY;
        for x in xs {
            if x > reach {
                count += 1;
                reach = x + delta;
            }
        }
        count
    }

    #[test]
    fn singleton_cover_and_proxy() {
        let s = line([3.0]);
        let c = Metric::Euclidean.greedy_cover(&s, 0.1).unwrap();
        assert_eq!(c.ball_count, 1);
        assert_eq!(Metric::Euclidean.kuratowski_proxy(&s, 1).unwrap(), 0.0);
    }

    #[test]
    fn two_clusters() {
        let mut xs = Vec::new();
        for i in 0..=10 {
            let off = -0.1 + 0.02 * i as f64;
            xs.push(off);
            xs.push(10.0 + off);
        }
        let oracle = interval_cover_count(xs.clone(), 1.0);
        assert_eq!(oracle, 2);
        let c = Metric::Euclidean.greedy_cover(&line(xs), 1.0).unwrap();
        assert_eq!(c.ball_count, oracle);
    }

    #[test]
    fn uniform_interval_cover_within_factor_two() {
        let xs: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        let exact = interval_cover_count(xs.clone(), 0.25);
        assert_eq!(exact, 4);
        let c = Metric::Euclidean.greedy_cover(&line(xs.clone()), 0.25).unwrap();
        assert!(c.ball_count >= exact && c.ball_count <= 2 * exact, "{}", c.ball_count);
        assert!(c.ball_count <= xs.len());
        let set = line(xs);
        for p in set.iter() {
            let d = c.centers.iter().map(|q| Metric::Euclidean.distance(p, q).unwrap()).fold(f64::INFINITY, f64::min);
            assert!(d <= c.delta / 2.0);
        }
    }

    #[test]
    fn invalid_arguments() {
        let s = line([0.0, 1.0]);
        assert!(Metric::Euclidean.greedy_cover(&s, 0.0).is_err());
        assert!(Metric::Euclidean.greedy_cover(&s, -1.0).is_err());
        assert!(Metric::Euclidean.kuratowski_proxy(&s, 0).is_err());
    }

    #[test]
    fn drift_union_proxy_is_its_span() {
        for k in [10, 11, 25, 100] {
            let s = line((10..=k).map(f64::from));
            assert_eq!(Metric::Euclidean.kuratowski_proxy(&s, 1).unwrap(), f64::from(k - 10));
        }
    }

    #[test]
    fn interval_proxy_budget_four() {
        let xs: Vec<f64> = (0..200).map(|i| i as f64 / 199.0).collect();
        let p = Metric::Euclidean.kuratowski_proxy(&line(xs), 4).unwrap();
        assert!((p - 0.25).abs() <= 0.05, "{p}");
    }

    #[test]
    fn proxy_agrees_with_bisection_over_greedy_cover() {
        // Bisection on the diameter passed to greedy_cover, 1e-6 tolerance or
        // 30 halvings; the proxy is half the smallest feasible diameter.
        let xs: Vec<f64> = (0..57).map(|i| ((i * 37) % 57) as f64 * 0.173 + (i as f64).sin()).collect();
        let set = line(xs);
        let m = Metric::Euclidean;
        for budget in 1..6 {
            let mut lo = 0.0;
            let mut hi = 2.0 * m.diameter(&set) + 1.0;
            for _ in 0..30 {
                if hi - lo <= 1e-6 {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if m.greedy_cover(&set, mid).unwrap().ball_count <= budget {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let proxy = m.kuratowski_proxy(&set, budget).unwrap();
            assert!((hi / 2.0 - proxy).abs() <= 1e-4, "budget {budget}: {} vs {proxy}", hi / 2.0);
        }
    }

    #[test]
    fn greedy_proxy_is_not_exactly_monotone_under_inclusion() {
        // {0,4,6,10} with 3 balls: centers 0, 10, 4 leave 6 at distance 2.
        // Adding 5 lets the third center sit in the middle: radius 1.
        let small = line([0.0, 4.0, 6.0, 10.0]);
        let big = line([0.0, 4.0, 5.0, 6.0, 10.0]);
        let m = Metric::Euclidean;
        assert_eq!(m.kuratowski_proxy(&small, 3).unwrap(), 2.0);
        assert_eq!(m.kuratowski_proxy(&big, 3).unwrap(), 1.0);
    }
}
