//! Closed-form example systems.

use std::f64::consts::FRAC_PI_2;

use crate::metric::{Metric, SampledSet, StatePoint};
use crate::process::{Process, ProcessError, ProcessKind, Sampling};

/// `U(t,τ;x) = {t − τ}` for `t > τ` on the real line.
#[derive(Clone, Copy, Debug, Default)]
pub struct DriftExample;

pub fn drift_evolve(t: f64, tau: f64, x: f64) -> Result<f64, ProcessError> {
    if !(tau <= t) {
        return Err(ProcessError::InvalidInterval { t, tau });
    }
    Ok(if t == tau { x } else { t - tau })
}

impl Process for DriftExample {
    fn name(&self) -> &str {
        "drift"
    }

    fn kind(&self) -> ProcessKind {
        ProcessKind::General
    }

    fn dimension(&self) -> usize {
        1
    }

    fn metric(&self) -> Metric {
        Metric::Euclidean
    }

    fn advance(&self, t: f64, tau: f64, x: &StatePoint, _: Sampling) -> Result<Vec<StatePoint>, ProcessError> {
        Ok(vec![StatePoint::from_vec_unchecked(vec![drift_evolve(t, tau, x.coords()[0])?])])
    }
}

/// Left shift on ℓ² truncated to `dim` coordinates, discrete time.
#[derive(Clone, Copy, Debug)]
pub struct ShiftSemiflow {
    dim: usize,
}

impl ShiftSemiflow {
    pub fn new(dim: usize) -> Result<Self, ProcessError> {
        if dim < 2 {
            return Err(ProcessError::InvalidArgument("shift truncation needs N >= 2".into()));
        }
        Ok(Self { dim })
    }
}

/// `x` shifted left `n` times with zero padding.
pub fn shift_evolve(n: i64, x: &StatePoint) -> Result<StatePoint, ProcessError> {
    if n < 0 {
        return Err(ProcessError::InvalidTime(format!("shift steps must be >= 0, got {n}")));
    }
    let c = x.coords();
    let n = (n as usize).min(c.len());
    let mut out = c[n..].to_vec();
    out.resize(c.len(), 0.0);
    Ok(StatePoint::from_vec_unchecked(out))
}

impl Process for ShiftSemiflow {
    fn name(&self) -> &str {
        "shift"
    }

    fn kind(&self) -> ProcessKind {
        ProcessKind::Semiflow
    }

    fn is_strict(&self) -> bool {
        true
    }

    fn dimension(&self) -> usize {
        self.dim
    }

    fn metric(&self) -> Metric {
        Metric::Euclidean
    }

    fn advance(&self, t: f64, tau: f64, x: &StatePoint, _: Sampling) -> Result<Vec<StatePoint>, ProcessError> {
        let n = crate::process::whole_steps(t, tau)?;
        Ok(vec![shift_evolve(n as i64, x)?])
    }
}

/// `x' = 0`, `y' = −x` for `y > 0` (and `y' = −1` on `x = 0`), resting at
/// `y = 0`, on `Z = [0,1] × [0,∞)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct PlanarOde;

pub fn planar_evolve(t: f64, z0: &StatePoint) -> Result<StatePoint, ProcessError> {
    if !(t >= 0.0) {
        return Err(ProcessError::InvalidTime(format!("elapsed time must be >= 0, got {t}")));
    }
    let c = z0.coords();
    if c.len() != 2 || !(0.0..=1.0).contains(&c[0]) || c[1] < 0.0 {
        return Err(ProcessError::OutsideDomain(format!("{z0} is not in [0,1] x [0,inf)")));
    }
    let (x0, y0) = (c[0], c[1]);
    let speed = if x0 == 0.0 { 1.0 } else { x0 };
    let y = if t >= y0 / speed { 0.0 } else { (y0 - speed * t).max(0.0) };
    Ok(StatePoint::from_vec_unchecked(vec![x0, y]))
}

impl Process for PlanarOde {
    fn name(&self) -> &str {
        "planar-ode"
    }

    fn kind(&self) -> ProcessKind {
        ProcessKind::Semiflow
    }

    fn is_strict(&self) -> bool {
        true
    }

    fn dimension(&self) -> usize {
        2
    }

    fn metric(&self) -> Metric {
        Metric::Euclidean
    }

    fn advance(&self, t: f64, tau: f64, x: &StatePoint, _: Sampling) -> Result<Vec<StatePoint>, ProcessError> {
        Ok(vec![planar_evolve(t - tau, x)?])
    }
}

/// Heat equation on `(0, π)` in `N` sine modes, switching on the sign of
/// the first mode: decay to `0` while `a₁ > 0`, otherwise relaxation of the
/// first mode towards `−1` (the state `−sin x`).
#[derive(Clone, Copy, Debug)]
pub struct HeatSwitch {
    modes: usize,
    plus_only: bool,
}

/// Coefficient of `sin x`, i.e. `(2/π)(u, sin x)` in `L²(0, π)`.
pub fn alpha_of(u: &StatePoint) -> f64 {
    u.coords()[0]
}

pub fn heat_switch_evolve(t: f64, u: &StatePoint) -> Result<StatePoint, ProcessError> {
    heat_evolve(t, u, false)
}

fn heat_evolve(t: f64, u: &StatePoint, plus_only: bool) -> Result<StatePoint, ProcessError> {
    if !(t >= 0.0) {
        return Err(ProcessError::InvalidTime(format!("elapsed time must be >= 0, got {t}")));
    }
    let plus = plus_only || alpha_of(u) > 0.0;
    let out = u
        .coords()
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let k = (i + 1) as f64;
            if i == 0 && !plus {
                (a + 1.0) * (-t).exp() - 1.0
            } else {
                a * (-k * k * t).exp()
            }
        })
        .collect();
    Ok(StatePoint::from_vec_unchecked(out))
}

impl HeatSwitch {
    pub fn new(modes: usize) -> Result<Self, ProcessError> {
        if modes < 2 {
            return Err(ProcessError::InvalidArgument("heat-switch needs N >= 2 modes".into()));
        }
        Ok(Self { modes, plus_only: false })
    }

    /// The linear heat semigroup without switching.
    pub fn plus_only(modes: usize) -> Result<Self, ProcessError> {
        Ok(Self { plus_only: true, ..Self::new(modes)? })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// `{0, −v¹}`.
    pub fn attractor_points(&self) -> SampledSet {
        SampledSet::new(vec![StatePoint::zeros(self.modes), StatePoint::axis(self.modes, 0, -1.0)], "{0,-v1}")
            .expect("two points of equal dimension")
    }

    /// `‖v¹‖_H = √(π/2)`.
    pub fn v1_norm() -> f64 {
        FRAC_PI_2.sqrt()
    }
}

impl Process for HeatSwitch {
    fn name(&self) -> &str {
        "heat-switch"
    }

    fn kind(&self) -> ProcessKind {
        ProcessKind::Semiflow
    }

    fn is_strict(&self) -> bool {
        true
    }

    fn dimension(&self) -> usize {
        self.modes
    }

    fn metric(&self) -> Metric {
        Metric::SineModes
    }

    fn advance(&self, t: f64, tau: f64, x: &StatePoint, _: Sampling) -> Result<Vec<StatePoint>, ProcessError> {
        Ok(vec![heat_evolve(t - tau, x, self.plus_only)?])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[f64]) -> StatePoint {
        StatePoint::new(c.to_vec()).unwrap()
    }

    #[test]
    fn drift_examples() {
        assert_eq!(drift_evolve(0.0, 0.0, 7.0).unwrap(), 7.0);
        assert_eq!(drift_evolve(0.0, -10.0, 3.3).unwrap(), 10.0);
        assert!(drift_evolve(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn drift_backward_union_and_proxy() {
        let b = SampledSet::from_coords(vec![vec![0.5]], "B").unwrap();
        for k in [10, 20, 40] {
            let mut pts = Vec::new();
            for s in -k..=-10 {
                let img = DriftExample.evolve(0.0, f64::from(s), &b, Sampling::default()).unwrap();
                assert_eq!(Metric::Euclidean.kuratowski_proxy(&img, 1).unwrap(), 0.0);
                pts.extend(img.into_points());
            }
            let union = SampledSet::new(pts, "union").unwrap();
            assert_eq!(union.iter().map(|x| x.coords()[0]).fold(f64::NAN, f64::min), 10.0);
            assert_eq!(Metric::Euclidean.kuratowski_proxy(&union, 1).unwrap(), f64::from(k - 10));
        }
    }

    #[test]
    fn shift_examples() {
        let x = p(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(shift_evolve(0, &x).unwrap(), x);
        assert_eq!(shift_evolve(1, &x).unwrap(), p(&[2.0, 3.0, 4.0, 0.0]));
        assert_eq!(shift_evolve(9, &x).unwrap(), StatePoint::zeros(4));
        assert!(shift_evolve(-1, &x).is_err());
        let r = 1.5;
        for k in 0..7 {
            let xk = StatePoint::axis(8, k, 2.0 * r);
            let out = shift_evolve(k as i64, &xk).unwrap();
            assert_eq!(out, StatePoint::axis(8, 0, 2.0 * r));
            assert_eq!(Metric::Euclidean.norm(&out), 2.0 * r);
        }
        let s = ShiftSemiflow::new(4).unwrap();
        assert!(s.advance(1.5, 0.0, &x, Sampling::default()).is_err());
        assert!(ShiftSemiflow::new(1).is_err());
    }

    #[test]
    fn planar_examples() {
        assert_eq!(planar_evolve(2.5, &p(&[0.0, 2.5])).unwrap(), p(&[0.0, 0.0]));
        for n in [1u32, 2, 4, 8, 64, 1024] {
            let m = 3.0;
            let nf = f64::from(n);
            let out = planar_evolve(m * nf / 2.0, &p(&[1.0 / nf, 2.0 * m])).unwrap();
            assert_eq!(out, p(&[1.0 / nf, 1.5 * m]));
        }
        assert_eq!(planar_evolve(17.0, &p(&[0.4, 0.0])).unwrap(), p(&[0.4, 0.0]));
        assert!(planar_evolve(1.0, &p(&[1.5, 0.0])).is_err());
        assert!(planar_evolve(1.0, &p(&[0.5, -1.0])).is_err());
        assert!(planar_evolve(-1.0, &p(&[0.5, 1.0])).is_err());
    }

    #[test]
    fn heat_switch_examples() {
        let zero = StatePoint::zeros(3);
        let t = 2.0;
        let out = heat_switch_evolve(t, &zero).unwrap();
        assert!((out.coords()[0] - ((-t).exp() - 1.0)).abs() < 1e-15);
        let v1 = StatePoint::axis(3, 0, 1.0);
        assert!((heat_switch_evolve(t, &v1).unwrap().coords()[0] - (-t).exp()).abs() < 1e-15);
        let minus = StatePoint::axis(3, 0, -1.0);
        assert_eq!(heat_switch_evolve(t, &minus).unwrap(), minus);
        assert_eq!(alpha_of(&v1), 1.0);
        assert_eq!(alpha_of(&zero), 0.0);
        assert_eq!(alpha_of(&p(&[0.0, 3.0, 0.0])), 0.0);
    }

    #[test]
    fn alpha_matches_projection_quadrature() {
        // (2/π)∫ u(x) sin x dx by the midpoint rule.
        let u = p(&[0.7, -1.2, 0.4]);
        let n = 20000;
        let h = std::f64::consts::PI / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let x = (i as f64 + 0.5) * h;
            let ux: f64 = u.coords().iter().enumerate().map(|(k, a)| a * ((k + 1) as f64 * x).sin()).sum();
            acc += ux * x.sin() * h;
        }
        assert!((2.0 / std::f64::consts::PI * acc - alpha_of(&u)).abs() < 1e-7);
    }

    fn coeffs(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-5.0f64..5.0, n)
    }

    proptest! {
        #[test]
        fn shift_is_nonexpansive(c in coeffs(12), n in 0i64..20) {
            let x = StatePoint::new(c).unwrap();
            let y = shift_evolve(n, &x).unwrap();
            prop_assert!(Metric::Euclidean.norm(&y) <= Metric::Euclidean.norm(&x));
        }

        #[test]
        fn planar_trajectory_laws(x0 in 0.0f64..=1.0, y0 in 0.0f64..10.0, s in 0.0f64..20.0, t in 0.0f64..20.0) {
            let z = StatePoint::new(vec![x0, y0]).unwrap();
            let a = planar_evolve(s, &z).unwrap();
            let b = planar_evolve(s + t, &z).unwrap();
            prop_assert_eq!(a.coords()[0], x0);
            prop_assert!(b.coords()[1] <= a.coords()[1]);
            let c = planar_evolve(t, &a).unwrap();
            prop_assert!((b.coords()[1] - c.coords()[1]).abs() <= 1e-12);
            // continuity in t
            let d = planar_evolve(s + 1e-9, &z).unwrap();
            prop_assert!((d.coords()[1] - a.coords()[1]).abs() <= 1e-9 * 1.0001);
        }

        #[test]
        fn heat_switch_contraction_and_regimes(c in coeffs(6), t in 0.0f64..10.0) {
            let u = StatePoint::new(c).unwrap();
            let out = heat_switch_evolve(t, &u).unwrap();
            let m = Metric::SineModes;
            if alpha_of(&u) > 0.0 {
                prop_assert!(alpha_of(&out) > 0.0);
                prop_assert!(m.norm(&out) <= m.norm(&u) * (-t).exp() * (1.0 + 1e-12));
            } else {
                prop_assert!(alpha_of(&out) <= 0.0);
                let shift = StatePoint::axis(6, 0, -1.0);
                let d_out = m.distance(&out, &shift).unwrap();
                let d_in = m.distance(&u, &shift).unwrap();
                prop_assert!(d_out <= d_in * (-t).exp() * (1.0 + 1e-12) + 1e-15);
            }
        }

        #[test]
        fn heat_switch_semigroup(c in coeffs(5), s in 0.0f64..3.0, t in 0.0f64..3.0) {
            let u = StatePoint::new(c).unwrap();
            let direct = heat_switch_evolve(s + t, &u).unwrap();
            let composed = heat_switch_evolve(t, &heat_switch_evolve(s, &u).unwrap()).unwrap();
            prop_assert!(Metric::SineModes.distance(&direct, &composed).unwrap() <= 1e-9);
        }
    }
}
