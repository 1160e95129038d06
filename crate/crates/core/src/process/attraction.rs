use serde::Serialize;

use super::{images_along, nonincreasing_tail, Process, ProcessError, Sampling, TauSchedule};
use crate::metric::{NonautonomousSet, SampledSet};

#[derive(Clone, Debug, Serialize)]
pub struct AttractionOutcome {
    pub t: f64,
    pub set_label: String,
    pub curve: Vec<(f64, f64)>,
    pub tol: f64,
    pub verdict: bool,
}

/// `dist(U(t,τ_n;B), K(t))` along the schedule. The verdict asks for the
/// last value to be within `tol` and the final quartile not to increase.
pub fn attraction_test<P: Process + ?Sized>(
    p: &P,
    k: &NonautonomousSet,
    b: &SampledSet,
    t: f64,
    sched: &TauSchedule,
    tol: f64,
    sampling: Sampling,
) -> Result<AttractionOutcome, ProcessError> {
    let target = k.at(t).ok_or(ProcessError::MissingTime(t))?;
    let metric = p.metric();
    let images = images_along(p, t, b, sched, sampling)?;
    let dists = crate::par::map(&images, |img| metric.semidistance(img, target));
    let mut curve = Vec::with_capacity(images.len());
    for (tau, d) in sched.taus(t).into_iter().zip(dists) {
        curve.push((tau, d?));
    }
    let values: Vec<f64> = curve.iter().map(|c| c.1).collect();
    let verdict = values.last().is_some_and(|&v| v <= tol) && nonincreasing_tail(&values, tol);
    Ok(AttractionOutcome { t, set_label: b.label().to_string(), curve, tol, verdict })
}
