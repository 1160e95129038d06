use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::forcing::Forcing;
use super::nonlinearity::{mollified_with, Nonlinearity};
use super::quadrature::composite_gl4;
use super::SolverError;
use crate::metric::StatePoint;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub modes: usize,
    pub dt: f64,
    /// Kernel width is `1 / mollifier_index`; 0 evaluates `h` directly.
    pub mollifier_index: usize,
    /// Position inside `[h(s−), h(s+)]` used exactly at jumps.
    pub selection_theta: f64,
    /// Multiple of 4, at least `4 · modes`.
    pub quad_points: usize,
    pub norm_cap: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self::new(8)
    }
}

impl SolverConfig {
    pub fn new(modes: usize) -> Self {
        Self { modes, dt: 1e-3, mollifier_index: 0, selection_theta: 0.5, quad_points: 8 * modes, norm_cap: 1e8 }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |m: &str| Err(SolverError::InvalidConfig(m.into()));
        if self.modes == 0 {
            return bad("modes must be ≥ 1");
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad("dt must be positive");
        }
        if !(0.0..=1.0).contains(&self.selection_theta) {
            return bad("selection_theta must lie in [0, 1]");
        }
        if self.quad_points < 4 * self.modes || !self.quad_points.is_multiple_of(4) {
            return bad("quad_points must be a multiple of 4 and at least 4·modes");
        }
        if !(self.norm_cap > 0.0) {
            return bad("norm_cap must be positive");
        }
        Ok(())
    }
}

/// `‖u‖_H` for `u = Σ a_k sin(kx)`.
pub fn h_norm(a: &[f64]) -> f64 {
    (FRAC_PI_2 * a.iter().map(|v| v * v).sum::<f64>()).sqrt()
}

/// Quadrature nodes and the sine table for one configuration.
#[derive(Clone, Debug)]
pub struct Galerkin {
    cfg: SolverConfig,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `sines[k][q] = sin((k+1) x_q)`.
    sines: Vec<Vec<f64>>,
}

impl Galerkin {
    pub fn new(cfg: &SolverConfig) -> Result<Self, SolverError> {
        cfg.validate()?;
        let (nodes, weights) = composite_gl4(0.0, PI, cfg.quad_points / 4);
        let sines = (1..=cfg.modes).map(|k| nodes.iter().map(|x| (k as f64 * x).sin()).collect()).collect();
        Ok(Self { cfg: cfg.clone(), nodes, weights, sines })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    /// Coefficients of the projected right-hand side `(2/π)∫(f0 − h(u)) sin(kx)`.
    pub fn nonlinear_term(
        &self,
        a: &[f64],
        t: f64,
        nl: &Nonlinearity,
        forcing: &Forcing,
    ) -> Result<Vec<f64>, SolverError> {
        let mut g = Vec::with_capacity(self.nodes.len());
        for (q, &x) in self.nodes.iter().enumerate() {
            let u: f64 = a.iter().zip(&self.sines).map(|(c, s)| c * s[q]).sum();
            let jumps = nl.jump_points(x, t);
            let h = if self.cfg.mollifier_index == 0 {
                nl.select(x, t, u, self.cfg.selection_theta, &jumps)
            } else {
                mollified_with(nl, self.cfg.mollifier_index, x, t, u, &jumps)
            };
            let v = forcing.f0(x, t) - h;
            if !v.is_finite() {
                return Err(SolverError::NonFinite { t });
            }
            g.push(self.weights[q] * v);
        }
        Ok(self.sines.iter().map(|s| 2.0 / PI * s.iter().zip(&g).map(|(s, g)| s * g).sum::<f64>()).collect())
    }

    /// One splitting step of length `h` from time `t`.
    pub fn step(
        &self,
        a: &[f64],
        t: f64,
        h: f64,
        nl: &Nonlinearity,
        forcing: &Forcing,
    ) -> Result<Vec<f64>, SolverError> {
        if a.len() != self.cfg.modes {
            return Err(SolverError::DimensionMismatch { expected: self.cfg.modes, got: a.len() });
        }
        let n = self.nonlinear_term(a, t, nl, forcing)?;
        let next: Vec<f64> = a
            .iter()
            .zip(&n)
            .enumerate()
            .map(|(i, (a, n))| {
                let k2 = ((i + 1) * (i + 1)) as f64;
                (-k2 * h).exp() * (a + h * n)
            })
            .collect();
        if next.iter().any(|v| !v.is_finite()) {
            return Err(SolverError::NonFinite { t: t + h });
        }
        Ok(next)
    }

    /// Integrates from `(t0, a0)` to `t1`, calling `visit` at every grid time
    /// including both ends. Each unit interval from `t0` is split into equal
    /// steps no longer than `dt`.
    pub fn integrate(
        &self,
        a0: &[f64],
        t0: f64,
        t1: f64,
        nl: &Nonlinearity,
        forcing: &Forcing,
        mut visit: impl FnMut(f64, &[f64]),
    ) -> Result<Vec<f64>, SolverError> {
        if a0.len() != self.cfg.modes {
            return Err(SolverError::DimensionMismatch { expected: self.cfg.modes, got: a0.len() });
        }
        if !(t1 >= t0) {
            return Err(SolverError::InvalidConfig(format!("end time {t1} precedes start {t0}")));
        }
        let mut a = a0.to_vec();
        visit(t0, &a);
        let mut seg = 0usize;
        loop {
            let start = t0 + seg as f64;
            if start >= t1 {
                break;
            }
            let len = (t1 - start).min(1.0);
            let n = ((len / self.cfg.dt) - 1e-9).ceil().max(1.0) as usize;
            let h = len / n as f64;
            for j in 0..n {
                let t = start + j as f64 * h;
                a = self.step(&a, t, h, nl, forcing)?;
                let t_next = if j + 1 == n { start + len } else { start + (j + 1) as f64 * h };
                let norm = h_norm(&a);
                if norm > self.cfg.norm_cap {
                    return Err(SolverError::BlowUp { t: t_next, norm });
                }
                visit(t_next, &a);
            }
            seg += 1;
        }
        Ok(a)
    }
}

/// Dense solution on the step grid with its `H`-norm trace.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub coeffs: Vec<Vec<f64>>,
    pub norms: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<StatePoint> {
        self.coeffs.last().map(|c| StatePoint::from_vec_unchecked(c.clone()))
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, StatePoint)> + '_ {
        self.times.iter().zip(&self.coeffs).map(|(&t, c)| (t, StatePoint::from_vec_unchecked(c.clone())))
    }
}

/// One step of the scheme from `a` at time `t` with step `cfg.dt`.
pub fn galerkin_step(
    a: &[f64],
    t: f64,
    cfg: &SolverConfig,
    nl: &Nonlinearity,
    forcing: &Forcing,
) -> Result<Vec<f64>, SolverError> {
    Galerkin::new(cfg)?.step(a, t, cfg.dt, nl, forcing)
}

pub fn solve_trajectory(
    u0: &StatePoint,
    t0: f64,
    t_end: f64,
    cfg: &SolverConfig,
    nl: &Nonlinearity,
    forcing: &Forcing,
) -> Result<Trajectory, SolverError> {
    if !(t_end > t0) {
        return Err(SolverError::InvalidConfig(format!("end time {t_end} must exceed start {t0}")));
    }
    let g = Galerkin::new(cfg)?;
    let mut traj = Trajectory { times: Vec::new(), coeffs: Vec::new(), norms: Vec::new() };
    g.integrate(u0.coords(), t0, t_end, nl, forcing, |t, a| {
        traj.times.push(t);
        traj.coeffs.push(a.to_vec());
        traj.norms.push(h_norm(a));
    })?;
    Ok(traj)
}

/// Largest per-mode residual `|(a_k^{j+1} − a_k^j)/h + k² a_k^j − N_k^j|`
/// of the discrete weak form along `traj`.
pub fn weak_form_residual(
    traj: &Trajectory,
    cfg: &SolverConfig,
    nl: &Nonlinearity,
    forcing: &Forcing,
) -> Result<f64, SolverError> {
    let g = Galerkin::new(cfg)?;
    let mut worst: f64 = 0.0;
    for j in 0..traj.len().saturating_sub(1) {
        let (t, t_next) = (traj.times[j], traj.times[j + 1]);
        let h = t_next - t;
        let a = &traj.coeffs[j];
        let n = g.nonlinear_term(a, t, nl, forcing)?;
        for (i, (&b, &a)) in traj.coeffs[j + 1].iter().zip(a).enumerate() {
            let k2 = ((i + 1) * (i + 1)) as f64;
            worst = worst.max(((b - a) / h + k2 * a - n[i]).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inclusion::{ForcingSpec, NonlinearitySpec};

    fn e1(modes: usize, scale: f64) -> StatePoint {
        StatePoint::axis(modes, 0, scale)
    }

    #[test]
    fn pure_heat_mode_decays_exactly() {
        let cfg = SolverConfig::new(4);
        let a = galerkin_step(&[1.0, 0.0, 0.0, 0.0], 0.0, &cfg, &Nonlinearity::zero(), &Forcing::zero()).unwrap();
        assert!((a[0] - (-cfg.dt).exp()).abs() < 1e-10);
        let traj = solve_trajectory(&e1(4, 1.0), 0.0, 2.5, &cfg, &Nonlinearity::zero(), &Forcing::zero()).unwrap();
        let last = traj.coeffs.last().unwrap();
        assert!((last[0] - (-2.5f64).exp()).abs() < 1e-10);
        assert_eq!(*traj.times.last().unwrap(), 2.5);
        assert_eq!(traj.len(), 2501);
    }

    #[test]
    fn steady_forcing_drives_mode_to_one() {
        let cfg = SolverConfig::new(4);
        let f = Forcing::from_spec(&ForcingSpec::Steady { amplitude: 1.0, mode: 1 }).unwrap();
        let traj = solve_trajectory(&StatePoint::zeros(4), 0.0, 12.0, &cfg, &Nonlinearity::zero(), &f).unwrap();
        for (t, a) in traj.times.iter().zip(&traj.coeffs).step_by(500) {
            // a1' = −a1 + 1, a1(0) = 0
            assert!((a[0] - (1.0 - (-t).exp())).abs() < 1e-3, "t={t}");
            assert!(a[1..].iter().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn zero_data_stays_zero() {
        let cfg = SolverConfig::new(4);
        let traj =
            solve_trajectory(&StatePoint::zeros(4), -1.0, 1.0, &cfg, &Nonlinearity::zero(), &Forcing::zero()).unwrap();
        assert!(traj.coeffs.iter().all(|a| a.iter().all(|&v| v == 0.0)));
    }

    #[test]
    fn heaviside_norm_decreases() {
        let cfg = SolverConfig::new(6);
        let traj = solve_trajectory(&e1(6, 2.0), 0.0, 3.0, &cfg, &Nonlinearity::heaviside(), &Forcing::zero()).unwrap();
        assert!(traj.norms.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(traj.norms.last().unwrap() < &0.1);
    }

    #[test]
    fn segments_restart_on_unit_intervals() {
        let cfg = SolverConfig { dt: 0.3, ..SolverConfig::new(2) };
        let traj = solve_trajectory(&e1(2, 1.0), 0.5, 2.0, &cfg, &Nonlinearity::zero(), &Forcing::zero()).unwrap();
        let want = [0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0];
        assert_eq!(traj.times.len(), want.len());
        for (a, b) in traj.times.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn blow_up_guard_and_validation() {
        let cfg = SolverConfig { norm_cap: 0.5, ..SolverConfig::new(2) };
        let err = solve_trajectory(&e1(2, 1.0), 0.0, 1.0, &cfg, &Nonlinearity::zero(), &Forcing::zero()).unwrap_err();
        assert!(matches!(err, SolverError::BlowUp { .. }));
        assert!(SolverConfig { quad_points: 6, ..SolverConfig::new(2) }.validate().is_err());
        assert!(SolverConfig { selection_theta: 1.5, ..SolverConfig::new(2) }.validate().is_err());
        assert!(solve_trajectory(
            &e1(3, 1.0),
            0.0,
            1.0,
            &SolverConfig::new(2),
            &Nonlinearity::zero(),
            &Forcing::zero()
        )
        .is_err());
    }

    #[test]
    fn residual_is_first_order() {
        let nl = Nonlinearity::heaviside();
        let f = Forcing::zero();
        let u0 = StatePoint::new(vec![1.0, -0.5, 0.25, 0.1]).unwrap();
        let mut prev = None;
        for dt in [2e-3, 1e-3] {
            let cfg = SolverConfig { dt, mollifier_index: 8, ..SolverConfig::new(4) };
            let traj = solve_trajectory(&u0, 0.0, 0.5, &cfg, &nl, &f).unwrap();
            let r = weak_form_residual(&traj, &cfg, &nl, &f).unwrap();
            if let Some(p) = prev {
                let ratio: f64 = p / r;
                assert!((ratio - 2.0).abs() < 0.3, "ratio {ratio}");
            }
            prev = Some(r);
        }
    }

    #[test]
    fn discrete_energy_inequality() {
        // ‖u‖² shrinks by e^{−2dt} per step up to the explicit O(dt²) term
        let nl = Nonlinearity::from_spec(&NonlinearitySpec::Heaviside).unwrap();
        let cfg = SolverConfig::new(6);
        let u0 = StatePoint::new(vec![1.5, 0.0, -0.7, 0.0, 0.3, 0.0]).unwrap();
        let traj = solve_trajectory(&u0, 0.0, 1.0, &cfg, &nl, &Forcing::zero()).unwrap();
        for w in traj.norms.windows(2) {
            let (e0, e1) = (w[0] * w[0], w[1] * w[1]);
            assert!(e1 <= e0 * (-2.0 * cfg.dt).exp() * (1.0 + 1e-9) + PI * cfg.dt * cfg.dt);
        }
    }
}
