//! Builders for sampled test sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::metric::{Metric, MetricError, SampledSet, StatePoint};

/// `n` points drawn uniformly from the closed ball of radius `radius`
/// (in `metric`) around `center`. The center itself is the first point.
pub fn ball(center: &StatePoint, radius: f64, n: usize, metric: Metric, seed: u64) -> Result<SampledSet, MetricError> {
    let d = center.dim();
    let scale = radius / metric.weight().sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = vec![center.clone()];
    while points.len() < n.max(1) {
        let dir: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let len = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        if len == 0.0 {
            continue;
        }
        let r = scale * rng.gen::<f64>().powf(1.0 / d as f64);
        let c = center.coords().iter().zip(&dir).map(|(c, v)| c + r * v / len).collect();
        points.push(StatePoint::new(c)?);
    }
    SampledSet::new(points, format!("ball(r={radius})"))
}

/// Points on the sphere of radius `radius` around `center`, one per
/// signed coordinate axis (`2·dim` points).
pub fn axis_sphere(center: &StatePoint, radius: f64, metric: Metric) -> Result<SampledSet, MetricError> {
    let d = center.dim();
    let scale = radius / metric.weight().sqrt();
    let mut points = Vec::with_capacity(2 * d);
    for i in 0..d {
        for s in [1.0, -1.0] {
            let mut c = center.coords().to_vec();
            c[i] += s * scale;
            points.push(StatePoint::new(c)?);
        }
    }
    SampledSet::new(points, format!("sphere(r={radius})"))
}

/// Tensor grid with `counts[i]` evenly spaced values on `[lower[i], upper[i]]`.
pub fn grid(lower: &[f64], upper: &[f64], counts: &[usize]) -> Result<SampledSet, MetricError> {
    if lower.len() != upper.len() || lower.len() != counts.len() {
        return Err(MetricError::DimensionMismatch { left: lower.len(), right: upper.len().max(counts.len()) });
    }
    let axes: Vec<Vec<f64>> = lower
        .iter()
        .zip(upper)
        .zip(counts)
        .map(
            |((&lo, &hi), &n)| {
                if n <= 1 {
                    vec![lo]
                } else {
                    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
                }
            },
        )
        .collect();
    let mut rows: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in &axes {
        rows = rows
            .into_iter()
            .flat_map(|r| {
                axis.iter().map(move |&v| {
                    let mut r = r.clone();
                    r.push(v);
                    r
                })
            })
            .collect();
    }
    SampledSet::from_coords(rows, "grid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_respects_radius_and_seed() {
        let c = StatePoint::new(vec![1.0, -1.0, 0.5]).unwrap();
        for metric in [Metric::Euclidean, Metric::SineModes] {
            let b = ball(&c, 2.0, 200, metric, 4).unwrap();
            assert_eq!(b.len(), 200);
            assert!(b.iter().all(|p| metric.distance(p, &c).unwrap() <= 2.0 + 1e-12));
            assert_eq!(b, ball(&c, 2.0, 200, metric, 4).unwrap());
            assert_ne!(b, ball(&c, 2.0, 200, metric, 5).unwrap());
        }
    }

    #[test]
    fn grid_shape() {
        let g = grid(&[0.0, 0.0], &[1.0, 2.0], &[3, 5]).unwrap();
        assert_eq!(g.len(), 15);
        assert_eq!(g.points()[0].coords(), &[0.0, 0.0]);
        assert_eq!(g.points()[14].coords(), &[1.0, 2.0]);
        assert!(grid(&[0.0], &[1.0, 2.0], &[3]).is_err());
    }

    #[test]
    fn sphere_points() {
        let s = axis_sphere(&StatePoint::zeros(3), 2.0, Metric::SineModes).unwrap();
        assert_eq!(s.len(), 6);
        assert!(s.iter().all(|p| (Metric::SineModes.norm(p) - 2.0).abs() < 1e-12));
    }
}
