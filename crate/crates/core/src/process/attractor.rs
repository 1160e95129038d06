use serde::Serialize;

use super::{
    attraction_test, omega_limit, AttractionOutcome, OmegaConfig, OmegaLimitResult, Process, ProcessError, TauSchedule,
};
use crate::metric::{NonautonomousSet, SampledSet};

#[derive(Clone, Debug)]
pub struct AttractorConfig {
    pub omega: OmegaConfig,
    /// Tolerance for the monotonicity of `B0` and the attraction verdicts.
    pub tol: f64,
    pub test_sets: Vec<SampledSet>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AttractorResult {
    pub attractor: NonautonomousSet,
    pub omega: Vec<OmegaLimitResult>,
    pub attraction: Vec<AttractionOutcome>,
    /// `sup_t dist(A(t), B0(t))`.
    pub inside_b0: f64,
}

/// `A(t) = ω(t, B0(t))` for each requested time, with attraction verdicts
/// for every configured test set.
pub fn attractor_construct<P: Process + ?Sized>(
    p: &P,
    b0: &NonautonomousSet,
    times: &[f64],
    sched: &TauSchedule,
    cfg: &AttractorConfig,
) -> Result<AttractorResult, ProcessError> {
    let metric = p.metric();
    for (i, (s, bs)) in b0.iter().enumerate() {
        for (t, bt) in b0.iter().skip(i + 1) {
            if metric.semidistance(bs, bt)? > cfg.tol {
                return Err(ProcessError::NotMonotone { s, t });
            }
        }
    }
    let mut omega = Vec::with_capacity(times.len());
    let mut sets = Vec::with_capacity(times.len());
    let mut inside_b0 = 0.0_f64;
    for &t in times {
        let seeds = b0.at(t).ok_or(ProcessError::MissingTime(t))?;
        let r = omega_limit(p, t, seeds, sched, &cfg.omega)?;
        let limit = match (&r.limit_set, r.converged) {
            (Some(l), true) => l.clone().with_label(format!("A({t})")),
            _ => return Err(ProcessError::NotConverged { t }),
        };
        inside_b0 = inside_b0.max(metric.semidistance(&limit, seeds)?);
        sets.push(limit);
        omega.push(r);
    }
    let attractor = NonautonomousSet::new(times.to_vec(), sets)?;
    let mut attraction = Vec::new();
    for &t in times {
        for e in &cfg.test_sets {
            attraction.push(attraction_test(p, &attractor, e, t, sched, cfg.tol, cfg.omega.sampling)?);
        }
    }
    Ok(AttractorResult { attractor, omega, attraction, inside_b0 })
}

/// `dist(A(t), C(t))` for each time, for a competitor family `C` that
/// attracts the test sets. Small values witness minimality of `A`.
pub fn minimality_gaps<P: Process + ?Sized>(
    p: &P,
    a: &NonautonomousSet,
    competitor: &NonautonomousSet,
) -> Result<Vec<(f64, f64)>, ProcessError> {
    let metric = p.metric();
    a.iter()
        .map(|(t, at)| {
            let ct = competitor.at(t).ok_or(ProcessError::MissingTime(t))?;
            Ok((t, metric.semidistance(at, ct)?))
        })
        .collect()
}
