//! Multivalued processes and the diagnostics built on them.
//!
//! A process maps `(t, τ, x)` with `τ ≤ t` to a nonempty set of states.
//! Implementations only provide [`Process::advance`] for `τ < t`; the
//! identity at `t = τ` is supplied by [`Process::evolve`] and cannot be
//! overridden, so the first axiom holds exactly for every process.
//!
//! All set inclusions below are tested on finite branch samples, so
//! verdicts are necessary-condition checks: sound for refutation, sampled
//! for confirmation.

mod attraction;
mod attractor;
mod axioms;
mod closedness;
mod dissipativity;
mod finite;
mod flattening;
mod invariance;
mod omega;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::{Metric, MetricError, SampledSet, StatePoint};

pub use attraction::{attraction_test, AttractionOutcome};
pub use attractor::{attractor_construct, minimality_gaps, AttractorConfig, AttractorResult};
pub use axioms::{check_axioms, AxiomEntry, AxiomProbe, AxiomReport};
pub use closedness::{closedness_probe, ClosednessOutcome, ClosednessWitness, EtaSequence};
pub use dissipativity::{
    dissipativity_classify, point_dissipativity_test, AbsorptionWitness, DissipativityConfig, DissipativityReport,
    EnteringTime, PointDissipativityReport, PointEntering,
};
pub(crate) use finite::whole_steps;
pub use finite::FiniteRelationProcess;
pub use flattening::{flattening_test, FlatteningReport};
pub use invariance::{invariance_check, InvarianceEntry, InvarianceReport};
pub use omega::{omega_limit, OmegaConfig, OmegaLimitResult};

/// Caveat attached to every report.
pub const SAMPLING_CAVEAT: &str = "sets are finite samples and multivalued images are finite branch \
samples: inclusion verdicts are necessary-condition checks (sound for refutation, sampled for confirmation)";

#[derive(Debug, Error)]
pub enum ProcessError {
    #[error("invalid interval: need tau <= t, got t={t}, tau={tau}")]
    InvalidInterval { t: f64, tau: f64 },
    #[error("{0}")]
    InvalidTime(String),
    #[error("state outside the phase space: {0}")]
    OutsideDomain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("solver: {0}")]
    Solver(String),
    #[error("omega-limit did not converge at t={t}")]
    NotConverged { t: f64 },
    #[error("absorbing family is not monotone: B0({s}) is not inside B0({t})")]
    NotMonotone { s: f64, t: f64 },
    #[error("time {0} is not on the nonautonomous set's grid")]
    MissingTime(f64),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProcessKind {
    General,
    Strict,
    Semiflow,
}

/// Branch budget and seed forwarded to every evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sampling {
    pub branch_budget: usize,
    pub rng_seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Self { branch_budget: 1, rng_seed: 0 }
    }
}

impl Sampling {
    pub fn new(branch_budget: usize, rng_seed: u64) -> Self {
        Self { branch_budget, rng_seed }
    }
}

/// An evaluatable m-process.
pub trait Process: Send + Sync {
    fn name(&self) -> &str;

    fn kind(&self) -> ProcessKind;

    fn dimension(&self) -> usize;

    fn metric(&self) -> Metric;

    /// Whether `U(t,τ;x) = U(t,s;U(s,τ;x))` is expected to hold.
    fn is_strict(&self) -> bool {
        self.kind() == ProcessKind::Strict
    }

    /// Images of a single state for `τ < t`. Must be nonempty and a pure
    /// function of its arguments.
    fn advance(&self, t: f64, tau: f64, x: &StatePoint, sampling: Sampling) -> Result<Vec<StatePoint>, ProcessError>;

    /// `U(t, τ; seeds)`: union of the images of every seed point.
    fn evolve(&self, t: f64, tau: f64, seeds: &SampledSet, sampling: Sampling) -> Result<SampledSet, ProcessError> {
        evolve_checked(self, t, tau, seeds, sampling)
    }
}

fn evolve_checked<P: Process + ?Sized>(
    p: &P,
    t: f64,
    tau: f64,
    seeds: &SampledSet,
    sampling: Sampling,
) -> Result<SampledSet, ProcessError> {
    if !(tau <= t) || !t.is_finite() || !tau.is_finite() {
        return Err(ProcessError::InvalidInterval { t, tau });
    }
    if seeds.dim() != p.dimension() {
        return Err(MetricError::DimensionMismatch { left: p.dimension(), right: seeds.dim() }.into());
    }
    if t == tau {
        return Ok(seeds.clone());
    }
    let images = crate::par::map(seeds.points(), |x| p.advance(t, tau, x, sampling));
    let mut points = Vec::new();
    for img in images {
        points.extend(img?);
    }
    Ok(SampledSet::new(points, format!("U({t},{tau};{})", seeds.label()))?)
}

/// Images of each seed point kept separate, in seed order.
pub fn evolve_per_point<P: Process + ?Sized>(
    p: &P,
    t: f64,
    tau: f64,
    seeds: &SampledSet,
    sampling: Sampling,
) -> Result<Vec<SampledSet>, ProcessError> {
    if !(tau <= t) {
        return Err(ProcessError::InvalidInterval { t, tau });
    }
    if seeds.dim() != p.dimension() {
        return Err(MetricError::DimensionMismatch { left: p.dimension(), right: seeds.dim() }.into());
    }
    if t == tau {
        return Ok(seeds.iter().map(|x| SampledSet::singleton(x.clone(), "seed")).collect());
    }
    crate::par::map(seeds.points(), |x| {
        let img = p.advance(t, tau, x, sampling)?;
        Ok(SampledSet::new(img, "image")?)
    })
    .into_iter()
    .collect()
}

/// Pullback times `τ_n = t − offset_n` with strictly increasing offsets.
///
/// Stored as offsets so the same schedule can be anchored at any query time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauSchedule {
    offsets: Vec<f64>,
}

impl TauSchedule {
    pub fn from_offsets(offsets: Vec<f64>) -> Result<Self, ProcessError> {
        if offsets.is_empty() {
            return Err(ProcessError::InvalidArgument("empty tau schedule".into()));
        }
        if offsets.iter().any(|o| !o.is_finite() || *o < 0.0) {
            return Err(ProcessError::InvalidArgument("schedule offsets must be finite and >= 0".into()));
        }
        if offsets.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ProcessError::InvalidArgument("schedule offsets must be strictly increasing".into()));
        }
        Ok(Self { offsets })
    }

    /// Schedule given by explicit pullback times for query time `t`.
    pub fn from_taus(t: f64, taus: &[f64]) -> Result<Self, ProcessError> {
        Self::from_offsets(taus.iter().map(|tau| t - tau).collect())
    }

    /// `offset_n = h · r^n`, `n = 0..steps`.
    pub fn geometric(h: f64, r: f64, steps: usize) -> Result<Self, ProcessError> {
        if !(h > 0.0) || !(r > 1.0) {
            return Err(ProcessError::InvalidArgument("geometric schedule needs h > 0 and r > 1".into()));
        }
        Self::from_offsets((0..steps).map(|n| h * r.powi(n as i32)).collect())
    }

    /// `offset_n = start + n · step`, `n = 0..count`.
    pub fn arithmetic(start: f64, step: f64, count: usize) -> Result<Self, ProcessError> {
        if !(step > 0.0) {
            return Err(ProcessError::InvalidArgument("arithmetic schedule needs step > 0".into()));
        }
        Self::from_offsets((0..count).map(|n| start + n as f64 * step).collect())
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    /// Strictly decreasing pullback times for query time `t`.
    pub fn taus(&self, t: f64) -> Vec<f64> {
        self.offsets.iter().map(|o| t - o).collect()
    }
}

impl Default for TauSchedule {
    /// `h = 1`, `r = 1.5`, 20 steps.
    fn default() -> Self {
        Self::geometric(1.0, 1.5, 20).expect("valid defaults")
    }
}

/// Images `U(t, τ_n; set)` for every scheduled `τ_n`, in schedule order.
pub(crate) fn images_along<P: Process + ?Sized>(
    p: &P,
    t: f64,
    set: &SampledSet,
    sched: &TauSchedule,
    sampling: Sampling,
) -> Result<Vec<SampledSet>, ProcessError> {
    let taus = sched.taus(t);
    crate::par::map(&taus, |&tau| p.evolve(t, tau, set, sampling)).into_iter().collect()
}

/// `true` when the tail of `values` (the last quarter, at least two entries)
/// never increases by more than `slack`.
pub(crate) fn nonincreasing_tail(values: &[f64], slack: f64) -> bool {
    let q = (values.len() / 4).max(2).min(values.len());
    values[values.len() - q..].windows(2).all(|w| w[1] <= w[0] + slack)
}
