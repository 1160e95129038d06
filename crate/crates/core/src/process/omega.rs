use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{images_along, nonincreasing_tail, Process, ProcessError, Sampling, TauSchedule};
use crate::metric::{Metric, SampledSet, StatePoint};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OmegaConfig {
    pub cluster_eps: f64,
    /// Distinct schedule points that must revisit a location.
    pub min_hits: usize,
    /// Attraction-curve tolerance used by the convergence verdict.
    /// Defaults to `cluster_eps` when not positive.
    pub tol: f64,
    /// Trailing schedule points inspected for outward drift.
    pub growth_window: usize,
    pub sampling: Sampling,
}

impl Default for OmegaConfig {
    fn default() -> Self {
        Self { cluster_eps: 1e-3, min_hits: 3, tol: 0.0, growth_window: 5, sampling: Sampling::default() }
    }
}

impl OmegaConfig {
    pub fn with_eps(cluster_eps: f64) -> Self {
        Self { cluster_eps, ..Self::default() }
    }

    fn effective_tol(&self) -> f64 {
        if self.tol > 0.0 {
            self.tol
        } else {
            self.cluster_eps
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OmegaLimitResult {
    pub t: f64,
    /// `None` when no location recurs across the final half of the schedule.
    pub limit_set: Option<SampledSet>,
    pub converged: bool,
    /// `(τ_n, dist(U(t,τ_n;B), limit_set))`; empty without a limit set.
    pub attraction_curve: Vec<(f64, f64)>,
    /// Diameter of `∪_{half ≤ i ≤ j} U(t,τ_i;B)` for each late `j`.
    pub late_union_diameters: Vec<f64>,
}

/// Sampled pullback ω-limit `ω(t, B)`.
///
/// Images are collected along the schedule. A point of a late image (final
/// half of the schedule) is an accumulation candidate when at least
/// `min_hits` distinct late images come within `cluster_eps` of it. The
/// limit set is an `cluster_eps`-net of the candidates, built deepest-τ
/// first, so a cluster collapses to a representative while a continuum is
/// kept at net resolution.
pub fn omega_limit<P: Process + ?Sized>(
    p: &P,
    t: f64,
    b: &SampledSet,
    sched: &TauSchedule,
    cfg: &OmegaConfig,
) -> Result<OmegaLimitResult, ProcessError> {
    if !(cfg.cluster_eps > 0.0) {
        return Err(ProcessError::InvalidArgument("cluster_eps must be positive".into()));
    }
    let metric = p.metric();
    let images = images_along(p, t, b, sched, cfg.sampling)?;
    let taus = sched.taus(t);
    let half = images.len() / 2;
    let late = &images[half..];

    let late_union_diameters = late_diameters(metric, late);
    let window = cfg.growth_window.max(2).min(late_union_diameters.len());
    let tail = &late_union_diameters[late_union_diameters.len() - window..];
    let drifting = window >= 2 && tail.windows(2).all(|w| w[1] > w[0] + cfg.cluster_eps);

    let eps2 = cfg.cluster_eps * cfg.cluster_eps;
    let mut reps: Vec<StatePoint> = Vec::new();
    for img in late.iter().rev() {
        for cand in img.iter() {
            let c = cand.coords();
            if reps.iter().any(|r| metric.dist2_raw(r.coords(), c) <= eps2) {
                continue;
            }
            let hits = late
                .iter()
                .filter(|other| other.iter().any(|q| metric.dist2_raw(q.coords(), c) <= eps2))
                .take(cfg.min_hits)
                .count();
            if hits >= cfg.min_hits {
                reps.push(cand.clone());
            }
        }
    }

    if reps.is_empty() {
        return Ok(OmegaLimitResult {
            t,
            limit_set: None,
            converged: false,
            attraction_curve: Vec::new(),
            late_union_diameters,
        });
    }
    let limit = SampledSet::new(reps, format!("omega({t},{})", b.label()))?;
    let dists = crate::par::map(&images, |img| metric.semidistance(img, &limit));
    let mut curve = Vec::with_capacity(images.len());
    for (tau, d) in taus.iter().zip(dists) {
        curve.push((*tau, d?));
    }
    let values: Vec<f64> = curve.iter().map(|c| c.1).collect();
    let tol = cfg.effective_tol();
    let settled = values.last().is_some_and(|&v| v <= tol) && nonincreasing_tail(&values, tol);
    Ok(OmegaLimitResult {
        t,
        limit_set: Some(limit),
        converged: !drifting && settled,
        attraction_curve: curve,
        late_union_diameters,
    })
}

fn late_diameters(metric: Metric, late: &[SampledSet]) -> Vec<f64> {
    // repeated points cannot change the diameter
    let mut distinct = HashSet::new();
    let mut seen: Vec<&[f64]> = Vec::new();
    let mut best2 = 0.0_f64;
    let mut out = Vec::with_capacity(late.len());
    for img in late {
        for p in img.iter() {
            let c = p.coords();
            if !distinct.insert(c.iter().map(|v| v.to_bits()).collect::<Vec<u64>>()) {
                continue;
            }
            for q in &seen {
                best2 = best2.max(metric.dist2_raw(c, q));
            }
            seen.push(c);
        }
        out.push(best2.sqrt());
    }
    out
}
