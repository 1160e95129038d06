use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::quadrature::integrate;
use super::SolverError;

type FFn = dyn Fn(f64, f64) -> f64 + Send + Sync;
type NormFn = dyn Fn(f64) -> f64 + Send + Sync;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum ForcingSpec {
    Zero,
    /// `f0 = amplitude · sin(mode · x)`.
    Steady {
        amplitude: f64,
        mode: u32,
    },
    /// `f0 = amplitude · sin(x) · (1 + sin t)`.
    Pulsating {
        amplitude: f64,
    },
    /// Built in code; the label only keys caches.
    Custom {
        label: String,
    },
}

/// Interior forcing `f0(x, t)` on `(0, π)` with its `V*` norm.
#[derive(Clone)]
pub struct Forcing {
    pub spec: ForcingSpec,
    f0: Arc<FFn>,
    vstar: Arc<NormFn>,
    /// Upper bound of `‖f(t)‖_{V*}` over `t ≤ t_bar`.
    pub sup_past: f64,
    pub t_bar: f64,
}

impl fmt::Debug for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Forcing")
            .field("spec", &self.spec)
            .field("sup_past", &self.sup_past)
            .field("t_bar", &self.t_bar)
            .finish()
    }
}

/// `‖Σ b_k sin(kx)‖_{V*}` for the Dirichlet Laplacian on `(0, π)`.
pub fn vstar_norm_of_modes(b: &[f64]) -> f64 {
    let s: f64 = b.iter().enumerate().map(|(i, v)| v * v / ((i + 1) * (i + 1)) as f64).sum();
    (FRAC_PI_2 * s).sqrt()
}

impl Forcing {
    pub fn custom(
        label: impl Into<String>,
        f0: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        vstar: impl Fn(f64) -> f64 + Send + Sync + 'static,
        sup_past: f64,
        t_bar: f64,
    ) -> Self {
        Self {
            spec: ForcingSpec::Custom { label: label.into() },
            f0: Arc::new(f0),
            vstar: Arc::new(vstar),
            sup_past,
            t_bar,
        }
    }

    pub fn from_spec(spec: &ForcingSpec) -> Result<Self, SolverError> {
        let mut f = match *spec {
            ForcingSpec::Zero => Self::zero(),
            ForcingSpec::Steady { amplitude, mode } => {
                if mode == 0 || !amplitude.is_finite() {
                    return Err(SolverError::InvalidConfig(
                        "steady forcing needs mode ≥ 1 and finite amplitude".into(),
                    ));
                }
                let k = f64::from(mode);
                let norm = (FRAC_PI_2).sqrt() * amplitude.abs() / k;
                Self::custom("", move |x, _| amplitude * (k * x).sin(), move |_| norm, norm, 0.0)
            }
            ForcingSpec::Pulsating { amplitude } => {
                if !amplitude.is_finite() {
                    return Err(SolverError::InvalidConfig("amplitude must be finite".into()));
                }
                let base = (FRAC_PI_2).sqrt() * amplitude.abs();
                Self::custom(
                    "",
                    move |x, t| amplitude * x.sin() * (1.0 + t.sin()),
                    move |t| base * (1.0 + t.sin()).abs(),
                    2.0 * base,
                    0.0,
                )
            }
            ForcingSpec::Custom { .. } => {
                return Err(SolverError::InvalidConfig("custom forcings are built in code".into()))
            }
        };
        f.spec = spec.clone();
        Ok(f)
    }

    pub fn zero() -> Self {
        let mut f = Self::custom("", |_, _| 0.0, |_| 0.0, 0.0, 0.0);
        f.spec = ForcingSpec::Zero;
        f
    }

    pub fn f0(&self, x: f64, t: f64) -> f64 {
        (self.f0)(x, t)
    }

    pub fn vstar(&self, t: f64) -> f64 {
        (self.vstar)(t)
    }

    /// `∫_a^b ‖f(s)‖²_{V*} ds`.
    pub fn l2_vstar_sq(&self, a: f64, b: f64) -> f64 {
        let panels = ((b - a).ceil() as usize).max(1) * 8;
        integrate(|s| self.vstar(s).powi(2), a, b, panels)
    }

    /// `‖f(t)‖_{V*}` recomputed from the first `modes` sine coefficients of
    /// `f0(·, t)`.
    pub fn vstar_by_quadrature(&self, t: f64, modes: usize) -> f64 {
        let b: Vec<f64> = (1..=modes)
            .map(|k| 2.0 / PI * integrate(|x| self.f0(x, t) * (k as f64 * x).sin(), 0.0, PI, 4 * modes))
            .collect();
        vstar_norm_of_modes(&b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_norms_match_quadrature() {
        let specs = [
            ForcingSpec::Zero,
            ForcingSpec::Steady { amplitude: 2.0, mode: 3 },
            ForcingSpec::Pulsating { amplitude: -1.5 },
        ];
        for spec in &specs {
            let f = Forcing::from_spec(spec).unwrap();
            for t in [-3.0, 0.0, 0.7, 4.0] {
                let q = f.vstar_by_quadrature(t, 8);
                assert!((f.vstar(t) - q).abs() < 1e-10, "{spec:?} t={t}");
                if t <= f.t_bar {
                    assert!(f.vstar(t) <= f.sup_past + 1e-12);
                }
            }
        }
    }

    #[test]
    fn l2_norm_of_pulsating() {
        let f = Forcing::from_spec(&ForcingSpec::Pulsating { amplitude: 1.0 }).unwrap();
        // ∫_0^1 (π/2)(1 + sin s)² ds
        let want = FRAC_PI_2 * (1.0 + 2.0 * (1.0 - 1f64.cos()) + 0.5 - 0.25 * 2f64.sin());
        assert!((f.l2_vstar_sq(0.0, 1.0) - want).abs() < 1e-12);
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = ForcingSpec::Steady { amplitude: 1.0, mode: 2 };
        let s = serde_json::to_string(&spec).unwrap();
        assert_eq!(s, r#"{"name":"steady","amplitude":1.0,"mode":2}"#);
        assert_eq!(serde_json::from_str::<ForcingSpec>(&s).unwrap(), spec);
    }
}
