use std::f64::consts::PI;

use serde::Serialize;

use super::forcing::Forcing;
use super::galerkin::h_norm;
use super::nonlinearity::Nonlinearity;
use super::quadrature::integrate;
use super::SolverError;
use crate::metric::SampledSet;

/// First Dirichlet eigenvalue on `(0, π)`.
pub const LAMBDA1: f64 = 1.0;

/// Structural constants `(c1, c2, d1, d2)` valid for `ϱ_n ∗ h`.
///
/// Shifting the argument by `|η| ≤ w = 1/n` costs
/// `d2 w s² + d2 (w + w²)` in the sign condition and `c2 w` in the growth
/// condition, with the cross terms split by `|s| ≤ (s² + 1)/2`.
pub fn effective_constants(nl: &Nonlinearity, n_moll: usize) -> (f64, f64, f64, f64) {
    if n_moll == 0 {
        return (nl.c1, nl.c2, nl.d1, nl.d2);
    }
    let w = 1.0 / n_moll as f64;
    let c1 = nl.c1 + nl.c2 * w;
    let d2 = nl.d2 * (1.0 + w) + 0.5 * nl.c2 * w;
    let d1 = nl.d1 - nl.d2 * (w + w * w) - nl.c1 * w - 0.5 * nl.c2 * w - nl.c2 * w * w;
    (c1, nl.c2, d1, d2)
}

/// Absorbing-ball data for the energy inequality
/// `d/dt ‖u‖² + C1 ‖u‖² ≤ C2 ‖f‖²_{V*} + C3`.
#[derive(Clone, Debug, Serialize)]
pub struct EnergyCertificate {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub eps: f64,
    /// Growth constants carried along for the flattening bound.
    pub growth: (f64, f64),
    #[serde(skip)]
    forcing: Forcing,
}

/// Certificate for the nonlinearity evaluated directly.
pub fn energy_certificate(nl: &Nonlinearity, forcing: &Forcing) -> Result<EnergyCertificate, SolverError> {
    EnergyCertificate::from_constants((nl.c1, nl.c2, nl.d1, nl.d2), forcing)
}

/// Certificate covering every ensemble branch whose mollifier index is 0
/// or at least `n_moll_min`.
pub fn energy_certificate_mollified(
    nl: &Nonlinearity,
    forcing: &Forcing,
    n_moll_min: usize,
) -> Result<EnergyCertificate, SolverError> {
    let (c1, c2, d1, d2) = effective_constants(nl, n_moll_min);
    EnergyCertificate::from_constants((c1, c2, d1.min(nl.d1), d2.max(nl.d2)), forcing)
}

impl EnergyCertificate {
    pub fn from_constants((c1, c2, d1, d2): (f64, f64, f64, f64), forcing: &Forcing) -> Result<Self, SolverError> {
        if !(d2 < LAMBDA1) {
            return Err(SolverError::InvalidConfig(format!("d2 = {d2} must be below λ1 = {LAMBDA1}")));
        }
        let eps = 0.5 - d2 / (2.0 * LAMBDA1);
        Ok(Self {
            c1: LAMBDA1 - d2,
            c2: LAMBDA1 / (LAMBDA1 - d2),
            c3: (-2.0 * d1 * PI).max(0.0),
            eps,
            growth: (c1, c2),
            forcing: forcing.clone(),
        })
    }

    pub fn forcing(&self) -> &Forcing {
        &self.forcing
    }

    /// Nondecreasing forcing envelope.
    pub fn f_envelope(&self, t: f64) -> f64 {
        let f = &self.forcing;
        let past = f.sup_past.powi(2) / self.c1;
        if t < f.t_bar {
            return past;
        }
        let tb = f.t_bar;
        let panels = ((t - tb).ceil() as usize).max(1) * 16;
        let tail = integrate(|s| (self.c1 * (s - tb)).exp() * f.vstar(s).powi(2), tb, t, panels);
        past + tail
    }

    /// Radius of the absorbing ball at time `t`.
    pub fn r(&self, t: f64) -> f64 {
        (self.c3 / self.c1 + self.c2 * self.f_envelope(t)).sqrt() + 1.0
    }

    /// Latest start time from which images of a set of norm `e_norm` lie in
    /// the ball of radius `R(t)` at time `t`.
    pub fn tau_bar(&self, t: f64, e_norm: f64) -> f64 {
        let log_term = if e_norm > 0.0 { t - 2.0 / self.c1 * e_norm.ln() } else { f64::INFINITY };
        (t - 1.0).min(log_term).min(self.forcing.t_bar)
    }

    /// `e^{−C1(t−t0)} ‖u0‖² + C3/C1 + C2 F(t)`.
    pub fn decay_bound(&self, t0: f64, u0_norm_sq: f64, t: f64) -> f64 {
        (-self.c1 * (t - t0)).exp() * u0_norm_sq + self.c3 / self.c1 + self.c2 * self.f_envelope(t)
    }
}

/// `(‖u0‖² + ‖f‖²_{L²(t0,t0+1;V*)} + c1² π) e^{(2c2+1)(t−t0)}` for `t ∈ [t0, t0+1]`.
pub fn gronwall_bound(nl: &Nonlinearity, n_moll: usize, forcing: &Forcing, t0: f64, u0_norm_sq: f64, t: f64) -> f64 {
    let (c1, c2, _, _) = effective_constants(nl, n_moll);
    let f2 = forcing.l2_vstar_sq(t0, t0 + 1.0);
    (u0_norm_sq + f2 + c1 * c1 * PI) * ((2.0 * c2 + 1.0) * (t - t0)).exp()
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatteningCertificate {
    pub t: f64,
    pub m: usize,
    pub delta: f64,
    pub eps: f64,
    /// Largest `‖(I − P_m) u(t)‖²_H` over the ensemble.
    pub measured_tail: f64,
    /// The four analytic terms in order: decay, nonlinearity, spread forcing,
    /// recent forcing.
    pub terms: [f64; 4],
    pub bound: f64,
    pub holds: bool,
    /// Smallest `m` for which the first three terms are each `≤ ε/4`, when
    /// the fourth already is.
    pub recipe_m: Option<usize>,
}

fn flattening_terms(cert: &EnergyCertificate, m: usize, t: f64, delta: f64) -> [f64; 4] {
    let lam = ((m + 1) * (m + 1)) as f64;
    let r2 = cert.r(t).powi(2);
    let (c1, c2) = cert.growth;
    let f = cert.forcing();
    [
        (-lam).exp() * r2,
        (4.0 * c2 * c2 * r2 + 4.0 * c1 * c1 * PI) / (LAMBDA1 * lam),
        2.0 * (-lam * delta).exp() * f.l2_vstar_sq(t - 2.0, t),
        2.0 * f.l2_vstar_sq(t - delta, t),
    ]
}

/// Analytic tail bound for `P_m`-complements at time `t`.
pub fn flattening_bound(cert: &EnergyCertificate, m: usize, t: f64, delta: f64) -> f64 {
    flattening_terms(cert, m, t, delta).iter().sum()
}

/// Compares the measured tail energy of `endpoints` (ensemble states at
/// time `t`, started at `start_tau` from a set of norm `e_norm`) with the
/// analytic bound.
#[allow(clippy::too_many_arguments)]
pub fn flattening_certificate(
    cert: &EnergyCertificate,
    endpoints: &SampledSet,
    start_tau: f64,
    e_norm: f64,
    m: usize,
    t: f64,
    delta: f64,
    eps: f64,
) -> Result<FlatteningCertificate, SolverError> {
    let tau_bar = cert.tau_bar(t - 2.0, e_norm);
    if start_tau > tau_bar {
        return Err(SolverError::NotAbsorbed { tau: start_tau, tau_bar });
    }
    if !(delta > 0.0 && delta <= 2.0) || !(eps > 0.0) {
        return Err(SolverError::InvalidConfig("need 0 < delta ≤ 2 and eps > 0".into()));
    }
    let measured_tail = endpoints
        .iter()
        .map(|p| {
            let c = p.coords();
            h_norm(&c[m.min(c.len())..]).powi(2)
        })
        .fold(0.0, f64::max);
    let terms = flattening_terms(cert, m, t, delta);
    let bound: f64 = terms.iter().sum();
    let recipe_m = if terms[3] <= eps / 4.0 {
        (0..100_000).find(|&mm| flattening_terms(cert, mm, t, delta)[..3].iter().all(|v| *v <= eps / 4.0))
    } else {
        None
    };
    Ok(FlatteningCertificate { t, m, delta, eps, measured_tail, terms, bound, holds: measured_tail <= bound, recipe_m })
}
