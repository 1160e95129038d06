use serde::Serialize;

use super::{Process, ProcessError, Sampling, SAMPLING_CAVEAT};
use crate::metric::{SampledSet, StatePoint};

/// A sequence `η_n` together with its claimed limit.
#[derive(Clone, Debug)]
pub struct EtaSequence {
    pub seq: Vec<StatePoint>,
    pub limit: StatePoint,
}

impl EtaSequence {
    /// `η_n = limit + scale_n · direction` for the given scales.
    pub fn along(limit: StatePoint, direction: &StatePoint, scales: impl IntoIterator<Item = f64>) -> Self {
        let seq = scales
            .into_iter()
            .map(|s| {
                let c = limit.coords().iter().zip(direction.coords()).map(|(a, d)| a + s * d).collect();
                StatePoint::from_vec_unchecked(c)
            })
            .collect();
        Self { seq, limit }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosednessWitness {
    pub t: f64,
    pub t_star: f64,
    pub eta_seq: Vec<StatePoint>,
    pub xi_seq: Vec<StatePoint>,
    pub limit_eta: StatePoint,
    pub limit_xi: StatePoint,
    /// `dist(limit_xi, U(t, t − t★; limit_eta))`.
    pub gap: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ClosednessOutcome {
    Violation { witness: ClosednessWitness, tol: f64, caveat: &'static str },
    Pass { witness: ClosednessWitness, tol: f64, caveat: &'static str },
    Inconclusive { reason: String },
}

impl ClosednessOutcome {
    pub fn is_violation(&self) -> bool {
        matches!(self, ClosednessOutcome::Violation { .. })
    }

    pub fn witness(&self) -> Option<&ClosednessWitness> {
        match self {
            ClosednessOutcome::Violation { witness, .. } | ClosednessOutcome::Pass { witness, .. } => Some(witness),
            ClosednessOutcome::Inconclusive { .. } => None,
        }
    }
}

/// Probes the graph of `η ↦ U(t, t − t★; η)` for closedness along one
/// sequence. `ξ_n` is continued by nearest neighbour through the images,
/// starting from the lexicographically smallest point of the first one.
/// Both sequences must settle to within `conv_tol` before a verdict is
/// given.
pub fn closedness_probe<P: Process + ?Sized>(
    p: &P,
    t: f64,
    t_star: f64,
    eta: &EtaSequence,
    tol: f64,
    conv_tol: f64,
    sampling: Sampling,
) -> Result<ClosednessOutcome, ProcessError> {
    if !(t_star > 0.0) {
        return Err(ProcessError::InvalidArgument("t_star must be positive".into()));
    }
    if eta.seq.len() < 2 {
        return Err(ProcessError::InvalidArgument("eta sequence needs at least two points".into()));
    }
    let metric = p.metric();
    let tau = t - t_star;
    let last_eta = eta.seq.last().expect("checked length");
    if metric.distance(last_eta, &eta.limit)? > conv_tol {
        return Ok(ClosednessOutcome::Inconclusive { reason: "eta sequence has not reached its limit".into() });
    }
    let images = crate::par::map(&eta.seq, |e| p.evolve(t, tau, &SampledSet::singleton(e.clone(), "eta"), sampling));
    let images = images.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut xi_seq = Vec::with_capacity(images.len());
    let first = images[0].iter().min_by(|a, b| a.lex_cmp(b)).expect("nonempty image").clone();
    xi_seq.push(first);
    for img in &images[1..] {
        let prev = xi_seq.last().expect("nonempty");
        xi_seq.push(metric.nearest(prev, img)?.clone());
    }
    let n = xi_seq.len();
    if metric.distance(&xi_seq[n - 1], &xi_seq[n - 2])? > conv_tol {
        return Ok(ClosednessOutcome::Inconclusive { reason: "selected xi sequence did not settle".into() });
    }
    let limit_xi = xi_seq[n - 1].clone();
    let target = p.evolve(t, tau, &SampledSet::singleton(eta.limit.clone(), "eta"), sampling)?;
    let gap = metric.dist_to_set(&limit_xi, &target)?;
    let witness =
        ClosednessWitness { t, t_star, eta_seq: eta.seq.clone(), xi_seq, limit_eta: eta.limit.clone(), limit_xi, gap };
    Ok(if gap > tol {
        ClosednessOutcome::Violation { witness, tol, caveat: SAMPLING_CAVEAT }
    } else {
        ClosednessOutcome::Pass { witness, tol, caveat: SAMPLING_CAVEAT }
    })
}
