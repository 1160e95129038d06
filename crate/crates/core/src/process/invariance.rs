use serde::Serialize;

use super::{Process, ProcessError, Sampling};
use crate::metric::NonautonomousSet;

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceEntry {
    pub s: f64,
    pub t: f64,
    /// `dist(A(t), U(t,s;A(s)))`.
    pub negative_residual: f64,
    /// `max` of the negative residual and `dist(U(t,s;A(s)), A(t))`.
    pub full_residual: f64,
    pub negative: bool,
    pub full: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub entries: Vec<InvarianceEntry>,
    pub tol: f64,
    pub negatively_invariant: bool,
    pub invariant: bool,
}

pub fn invariance_check<P: Process + ?Sized>(
    p: &P,
    a: &NonautonomousSet,
    pairs: &[(f64, f64)],
    tol: f64,
    sampling: Sampling,
) -> Result<InvarianceReport, ProcessError> {
    let metric = p.metric();
    let mut entries = Vec::with_capacity(pairs.len());
    for &(s, t) in pairs {
        if !(s <= t) {
            return Err(ProcessError::InvalidInterval { t, tau: s });
        }
        let a_s = a.at(s).ok_or(ProcessError::MissingTime(s))?;
        let a_t = a.at(t).ok_or(ProcessError::MissingTime(t))?;
        let image = p.evolve(t, s, a_s, sampling)?;
        let negative_residual = metric.semidistance(a_t, &image)?;
        let full_residual = negative_residual.max(metric.semidistance(&image, a_t)?);
        entries.push(InvarianceEntry {
            s,
            t,
            negative_residual,
            full_residual,
            negative: negative_residual <= tol,
            full: full_residual <= tol,
        });
    }
    Ok(InvarianceReport {
        negatively_invariant: entries.iter().all(|e| e.negative),
        invariant: entries.iter().all(|e| e.full),
        entries,
        tol,
    })
}
