use serde::{Deserialize, Serialize};

use super::{Process, ProcessError, Sampling};
use crate::metric::{SampledSet, StatePoint};

/// One probe `(t, s, τ, x)` with `τ ≤ s ≤ t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomProbe {
    pub t: f64,
    pub s: f64,
    pub tau: f64,
    pub x: StatePoint,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomEntry {
    pub probe: AxiomProbe,
    /// Symmetric distance between `U(τ,τ;x)` and `{x}`.
    pub identity_residual: f64,
    /// `dist(U(t,τ;x), U(t,s;U(s,τ;x)))`.
    pub sub_composition_residual: f64,
    /// `dist(U(t,s;U(s,τ;x)), U(t,τ;x))`; only meaningful for strict processes.
    pub reverse_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub entries: Vec<AxiomEntry>,
    pub tol: f64,
    pub identity_ok: bool,
    pub sub_composition_ok: bool,
    /// `None` for processes not declared strict.
    pub strict_ok: Option<bool>,
}

/// Residuals of the process axioms at each probe.
///
/// The composite `U(t,s;U(s,τ;x))` is evaluated with `oracle_factor`
/// times the branch budget, so a sampled left-hand side can be compared
/// against a richer right-hand side.
pub fn check_axioms<P: Process + ?Sized>(
    p: &P,
    probes: &[AxiomProbe],
    tol: f64,
    sampling: Sampling,
    oracle_factor: usize,
) -> Result<AxiomReport, ProcessError> {
    let metric = p.metric();
    let oracle = Sampling { branch_budget: sampling.branch_budget * oracle_factor.max(1), ..sampling };
    let mut entries = Vec::with_capacity(probes.len());
    for probe in probes {
        if !(probe.tau <= probe.s && probe.s <= probe.t) {
            return Err(ProcessError::InvalidArgument(format!(
                "probe needs tau <= s <= t, got ({}, {}, {})",
                probe.t, probe.s, probe.tau
            )));
        }
        let x = SampledSet::singleton(probe.x.clone(), "x");
        let id = p.evolve(probe.tau, probe.tau, &x, sampling)?;
        let identity_residual = metric.hausdorff(&id, &x)?;
        let direct = p.evolve(probe.t, probe.tau, &x, sampling)?;
        let mid = p.evolve(probe.s, probe.tau, &x, oracle)?;
        let composite = p.evolve(probe.t, probe.s, &mid, oracle)?;
        entries.push(AxiomEntry {
            probe: probe.clone(),
            identity_residual,
            sub_composition_residual: metric.semidistance(&direct, &composite)?,
            reverse_residual: metric.semidistance(&composite, &direct)?,
        });
    }
    let identity_ok = entries.iter().all(|e| e.identity_residual == 0.0);
    let sub_composition_ok = entries.iter().all(|e| e.sub_composition_residual <= tol);
    let strict_ok = p.is_strict().then(|| entries.iter().all(|e| e.reverse_residual <= tol));
    Ok(AxiomReport { entries, tol, identity_ok, sub_composition_ok, strict_ok })
}
