use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::quadrature::GL8;
use super::SolverError;

type HFn = dyn Fn(f64, f64, f64) -> f64 + Send + Sync;
type JumpFn = dyn Fn(f64, f64) -> Vec<f64> + Send + Sync;

/// Named nonlinearities addressable from scenario files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum NonlinearitySpec {
    Zero,
    /// `h(s) = H(s)`, the derivative of `max(s, 0)`.
    Heaviside,
    /// `h(s) = −H(s)`; not monotone, so solutions through `u = 0` branch.
    NegHeaviside,
    /// `h(s) = λ sin s + H(s − 1)`.
    SinePlusStep {
        lambda: f64,
    },
    /// Built in code; the name only keys caches.
    Custom {
        label: String,
    },
}

/// `h(x, t, s)` standing for `j′`, with its interval hull at jumps playing
/// the Clarke subgradient.
///
/// `h` may be evaluated at any `s`; its value exactly at a jump is ignored
/// in favour of the selection `h(s−) + θ (h(s+) − h(s−))`.
#[derive(Clone)]
pub struct Nonlinearity {
    pub spec: NonlinearitySpec,
    h: Arc<HFn>,
    jumps: Arc<JumpFn>,
    /// `|h| ≤ c1 + c2 |s|`.
    pub c1: f64,
    pub c2: f64,
    /// `h(s) s ≥ d1 − d2 s²`.
    pub d1: f64,
    pub d2: f64,
}

impl fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Nonlinearity")
            .field("spec", &self.spec)
            .field("c1", &self.c1)
            .field("c2", &self.c2)
            .field("d1", &self.d1)
            .field("d2", &self.d2)
            .finish()
    }
}

fn step(s: f64) -> f64 {
    if s >= 0.0 {
        1.0
    } else {
        0.0
    }
}

impl Nonlinearity {
    pub fn custom(
        label: impl Into<String>,
        h: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        jumps: impl Fn(f64, f64) -> Vec<f64> + Send + Sync + 'static,
        (c1, c2, d1, d2): (f64, f64, f64, f64),
    ) -> Self {
        Self {
            spec: NonlinearitySpec::Custom { label: label.into() },
            h: Arc::new(h),
            jumps: Arc::new(jumps),
            c1,
            c2,
            d1,
            d2,
        }
    }

    pub fn from_spec(spec: &NonlinearitySpec) -> Result<Self, SolverError> {
        let mut nl = match *spec {
            NonlinearitySpec::Zero => Self::custom("", |_, _, _| 0.0, |_, _| Vec::new(), (0.0, 0.0, 0.0, 0.0)),
            NonlinearitySpec::Heaviside => Self::custom("", |_, _, s| step(s), |_, _| vec![0.0], (1.0, 0.0, 0.0, 0.0)),
            NonlinearitySpec::NegHeaviside => {
                Self::custom("", |_, _, s| -step(s), |_, _| vec![0.0], (1.0, 0.0, -0.5, 0.5))
            }
            NonlinearitySpec::SinePlusStep { lambda } => {
                if !lambda.is_finite() {
                    return Err(SolverError::InvalidConfig("lambda must be finite".into()));
                }
                Self::custom(
                    "",
                    move |_, _, s| lambda * s.sin() + step(s - 1.0),
                    |_, _| vec![1.0],
                    (lambda.abs() + 1.0, 0.0, -0.5 * lambda * lambda, 0.5),
                )
            }
            NonlinearitySpec::Custom { .. } => {
                return Err(SolverError::InvalidConfig("custom nonlinearities are built in code".into()))
            }
        };
        nl.spec = spec.clone();
        Ok(nl)
    }

    pub fn heaviside() -> Self {
        Self::from_spec(&NonlinearitySpec::Heaviside).expect("valid")
    }

    pub fn zero() -> Self {
        Self::from_spec(&NonlinearitySpec::Zero).expect("valid")
    }

    pub fn h(&self, x: f64, t: f64, s: f64) -> f64 {
        (self.h)(x, t, s)
    }

    pub fn jump_points(&self, x: f64, t: f64) -> Vec<f64> {
        (self.jumps)(x, t)
    }

    /// `h` with the selection `θ` applied when `s` sits exactly on a jump.
    pub fn select(&self, x: f64, t: f64, s: f64, theta: f64, jumps: &[f64]) -> f64 {
        if jumps.contains(&s) {
            let d = 1e-12 * s.abs().max(1.0);
            let lo = self.h(x, t, s - d);
            let hi = self.h(x, t, s + d);
            lo + theta * (hi - lo)
        } else {
            self.h(x, t, s)
        }
    }

    /// Growth bound of the mollified nonlinearity with kernel width `1/n_moll`.
    pub fn c1_mollified(&self, n_moll: usize) -> f64 {
        if n_moll == 0 {
            self.c1
        } else {
            self.c1 + self.c2 / n_moll as f64
        }
    }

    /// Samples both structural inequalities on a grid of `s`, at a few
    /// positions and times. Returns the worst violation of each (≤ 0 means
    /// none found).
    pub fn validate(&self, s_max: f64, samples: usize, times: &[f64]) -> (f64, f64) {
        let mut growth = f64::NEG_INFINITY;
        let mut sign = f64::NEG_INFINITY;
        let xs = [0.1, 1.0, std::f64::consts::FRAC_PI_2, 2.5, 3.0];
        for &t in times {
            for &x in &xs {
                for i in 0..=samples {
                    let s = -s_max + 2.0 * s_max * i as f64 / samples as f64;
                    let jumps = self.jump_points(x, t);
                    for theta in [0.0, 0.5, 1.0] {
                        let h = self.select(x, t, s, theta, &jumps);
                        growth = growth.max(h.abs() - (self.c1 + self.c2 * s.abs()));
                        sign = sign.max((self.d1 - self.d2 * s * s) - h * s);
                    }
                }
            }
        }
        (growth, sign)
    }
}

fn bump(z: f64) -> f64 {
    let q = 1.0 - z * z;
    if q <= 0.0 {
        0.0
    } else {
        (-1.0 / q).exp()
    }
}

/// `(ϱ_n ∗ h(x,t,·))(s)` with the bump kernel supported on `[−1/n, 1/n]`.
///
/// The window is split at `0` and at every jump of `h`, each piece gets an
/// 8-point Gauss–Legendre rule, and the result is divided by the discrete
/// kernel mass so constants are reproduced exactly.
pub fn mollified_h(nl: &Nonlinearity, n_moll: usize, x: f64, t: f64, s: f64) -> f64 {
    let jumps = nl.jump_points(x, t);
    mollified_with(nl, n_moll, x, t, s, &jumps)
}

pub(crate) fn mollified_with(nl: &Nonlinearity, n_moll: usize, x: f64, t: f64, s: f64, jumps: &[f64]) -> f64 {
    let w = 1.0 / n_moll as f64;
    let mut cuts = [0.0; 8];
    let mut n_cuts = 0;
    cuts[n_cuts] = -w;
    n_cuts += 1;
    cuts[n_cuts] = 0.0;
    n_cuts += 1;
    cuts[n_cuts] = w;
    n_cuts += 1;
    let mut extra = Vec::new();
    for &j in jumps {
        let eta = s - j;
        if eta > -w && eta < w && eta != 0.0 {
            if n_cuts < cuts.len() {
                cuts[n_cuts] = eta;
                n_cuts += 1;
            } else {
                extra.push(eta);
            }
        }
    }
    let mut cuts: Vec<f64> = cuts[..n_cuts].iter().copied().chain(extra).collect();
    cuts.sort_by(f64::total_cmp);
    let mut num = 0.0;
    let mut den = 0.0;
    for pair in cuts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let (mut pn, mut pd) = (0.0, 0.0);
        for &(z, wt) in &GL8 {
            let e1 = mid - half * z;
            let e2 = mid + half * z;
            let k1 = wt * bump(e1 / w);
            let k2 = wt * bump(e2 / w);
            pn += k1 * nl.h(x, t, s - e1) + k2 * nl.h(x, t, s - e2);
            pd += k1 + k2;
        }
        num += pn;
        den += pd;
    }
    num / den
}
