use serde::Serialize;

use super::{images_along, Process, ProcessError, Sampling, TauSchedule};
use crate::metric::SampledSet;

#[derive(Clone, Debug, Serialize)]
pub struct FlatteningReport {
    pub t: f64,
    pub m: usize,
    /// `(τ_n, sup ‖(I − P_m) x‖)` over the image at each scheduled start.
    pub per_tau: Vec<(f64, f64)>,
    pub sup_tail: f64,
}

/// Largest norm of the coordinates beyond the first `m` over the backward
/// union `∪_n U(t, τ_n; B)`. `P_m` is truncation to the first `m`
/// coordinates.
pub fn flattening_test<P: Process + ?Sized>(
    p: &P,
    b: &SampledSet,
    t: f64,
    m: usize,
    sched: &TauSchedule,
    sampling: Sampling,
) -> Result<FlatteningReport, ProcessError> {
    if m >= p.dimension() {
        return Err(ProcessError::InvalidArgument(format!(
            "flattening index m={m} must be below the dimension {}",
            p.dimension()
        )));
    }
    let metric = p.metric();
    let images = images_along(p, t, b, sched, sampling)?;
    let per_tau: Vec<(f64, f64)> = sched
        .taus(t)
        .into_iter()
        .zip(&images)
        .map(|(tau, img)| (tau, img.iter().map(|x| metric.norm_of(&x.coords()[m..])).fold(0.0, f64::max)))
        .collect();
    let sup_tail = per_tau.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(FlatteningReport { t, m, per_tau, sup_tail })
}
