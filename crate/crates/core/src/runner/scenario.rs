use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::inclusion::{EnsembleDesign, ForcingSpec, NonlinearitySpec, SolverConfig};
use crate::metric::{Metric, MetricError, NonautonomousSet, Region, SampledSet, StatePoint};
use crate::process::{ProcessError, TauSchedule};
use crate::sets;

fn one() -> usize {
    1
}

/// A JSON scenario: one system, one schedule, a list of diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub system: SystemSpec,
    pub schedule: ScheduleSpec,
    pub seed: u64,
    #[serde(default = "one")]
    pub branch_budget: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    pub diagnostics: Vec<DiagnosticSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SystemSpec {
    Drift,
    Shift {
        dim: usize,
    },
    PlanarOde,
    HeatSwitch {
        modes: usize,
        #[serde(default)]
        plus_only: bool,
    },
    Inclusion {
        #[serde(default)]
        solver: SolverConfig,
        nonlinearity: NonlinearitySpec,
        forcing: ForcingSpec,
        #[serde(default)]
        design: EnsembleDesign,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cache_dir: Option<PathBuf>,
    },
    FiniteRelation {
        states: usize,
        max_out: usize,
        relation_seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScheduleSpec {
    Geometric { h: f64, ratio: f64, steps: usize },
    Arithmetic { start: f64, step: f64, count: usize },
    Offsets { offsets: Vec<f64> },
}

impl ScheduleSpec {
    pub fn build(&self) -> Result<TauSchedule, ProcessError> {
        match self {
            ScheduleSpec::Geometric { h, ratio, steps } => TauSchedule::geometric(*h, *ratio, *steps),
            ScheduleSpec::Arithmetic { start, step, count } => TauSchedule::arithmetic(*start, *step, *count),
            ScheduleSpec::Offsets { offsets } => TauSchedule::from_offsets(offsets.clone()),
        }
    }
}

/// A finite test set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SetSpec {
    Points {
        points: Vec<Vec<f64>>,
        #[serde(default)]
        label: Option<String>,
    },
    /// Uniform sample of a ball, drawn with the scenario seed.
    Ball {
        center: Vec<f64>,
        radius: f64,
        n: usize,
    },
    /// `±radius` along every coordinate axis.
    Sphere {
        center: Vec<f64>,
        radius: f64,
    },
    Grid {
        lower: Vec<f64>,
        upper: Vec<f64>,
        counts: Vec<usize>,
    },
    Union {
        parts: Vec<SetSpec>,
    },
}

impl SetSpec {
    pub fn build(&self, metric: Metric, seed: u64) -> Result<SampledSet, MetricError> {
        match self {
            SetSpec::Points { points, label } => {
                SampledSet::from_coords(points.clone(), label.clone().unwrap_or_else(|| "points".into()))
            }
            SetSpec::Ball { center, radius, n } => {
                sets::ball(&StatePoint::new(center.clone())?, *radius, *n, metric, seed)
            }
            SetSpec::Sphere { center, radius } => sets::axis_sphere(&StatePoint::new(center.clone())?, *radius, metric),
            SetSpec::Grid { lower, upper, counts } => sets::grid(lower, upper, counts),
            SetSpec::Union { parts } => {
                let built = parts.iter().map(|p| p.build(metric, seed)).collect::<Result<Vec<_>, _>>()?;
                SampledSet::union_all(&built, "union")?.ok_or_else(|| MetricError::EmptySet("union".into()))
            }
        }
    }
}

/// A time-indexed family of finite sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilySpec {
    Constant { times: Vec<f64>, set: SetSpec },
    Timed { times: Vec<f64>, sets: Vec<SetSpec> },
}

impl FamilySpec {
    pub fn build(&self, metric: Metric, seed: u64) -> Result<NonautonomousSet, MetricError> {
        match self {
            FamilySpec::Constant { times, set } => NonautonomousSet::constant(times.clone(), &set.build(metric, seed)?),
            FamilySpec::Timed { times, sets } => {
                let built = sets.iter().map(|s| s.build(metric, seed)).collect::<Result<Vec<_>, _>>()?;
                NonautonomousSet::new(times.clone(), built)
            }
        }
    }
}

/// Absorbing candidate for dissipativity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CandidateSpec {
    Constant {
        region: Region,
    },
    Timed {
        regions: Vec<Region>,
    },
    /// The certified ball `B(0, R(t))`; inclusion systems only.
    EnergyBall,
}

macro_rules! expected {
    ($name:ident { $($field:ident : $ty:ty),* $(,)? }) => {
        #[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct $name {
            $(
                #[serde(default, skip_serializing_if = "Option::is_none")]
                pub $field: Option<$ty>,
            )*
        }
    };
}

expected!(AxiomsExpected { identity_ok: bool, sub_composition_ok: bool, strict_ok: bool });
expected!(OmegaExpected { converged: bool, limit_size: usize });
expected!(AttractionExpected { attracting: bool });
expected!(DissipativityExpected { absorbing: bool, monotone: bool, backward_bounded: bool, point_dissipative: bool });
expected!(PointExpected { all_entered: bool });
expected!(FlatteningExpected { flat: bool });
expected!(ClosednessExpected { violation: bool });
expected!(InvarianceExpected { negatively_invariant: bool, invariant: bool });
expected!(AttractorExpected { limit_sizes: Vec<usize>, inside_b0: bool });
expected!(ProxyExpected { compact: bool });
expected!(EnergyExpected { absorbed: bool, decay_bound_holds: bool });

fn default_tol() -> f64 {
    1e-6
}

fn default_factor() -> usize {
    2
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    pub t: f64,
    pub s: f64,
    pub tau: f64,
    pub x: Vec<f64>,
}

/// One requested diagnostic with its expected verdicts. Omitted verdicts
/// are reported but not compared.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DiagnosticSpec {
    CheckAxioms(AxiomsSpec),
    OmegaLimit(OmegaSpec),
    Attraction(AttractionSpec),
    Dissipativity(DissipativitySpec),
    PointDissipativity(PointSpec),
    Flattening(FlatteningSpec),
    Closedness(ClosednessSpec),
    Invariance(InvarianceSpec),
    Attractor(AttractorSpec),
    KuratowskiProxy(ProxySpec),
    EnergyAbsorption(EnergySpec),
}

impl DiagnosticSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            DiagnosticSpec::CheckAxioms(_) => "check-axioms",
            DiagnosticSpec::OmegaLimit(_) => "omega-limit",
            DiagnosticSpec::Attraction(_) => "attraction",
            DiagnosticSpec::Dissipativity(_) => "dissipativity",
            DiagnosticSpec::PointDissipativity(_) => "point-dissipativity",
            DiagnosticSpec::Flattening(_) => "flattening",
            DiagnosticSpec::Closedness(_) => "closedness",
            DiagnosticSpec::Invariance(_) => "invariance",
            DiagnosticSpec::Attractor(_) => "attractor",
            DiagnosticSpec::KuratowskiProxy(_) => "kuratowski-proxy",
            DiagnosticSpec::EnergyAbsorption(_) => "energy-absorption",
        }
    }

    pub const KINDS: [&'static str; 11] = [
        "check-axioms",
        "omega-limit",
        "attraction",
        "dissipativity",
        "point-dissipativity",
        "flattening",
        "closedness",
        "invariance",
        "attractor",
        "kuratowski-proxy",
        "energy-absorption",
    ];
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxiomsSpec {
    pub probes: Vec<ProbeSpec>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_factor")]
    pub oracle_factor: usize,
    #[serde(default)]
    pub expected: AxiomsExpected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaSpec {
    pub t: f64,
    pub set: SetSpec,
    pub cluster_eps: f64,
    #[serde(default)]
    pub min_hits: Option<usize>,
    #[serde(default)]
    pub growth_window: Option<usize>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub expected: OmegaExpected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttractionSpec {
    pub t: f64,
    pub target: SetSpec,
    pub set: SetSpec,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub expected: AttractionExpected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DissipativitySpec {
    pub candidate: CandidateSpec,
    pub test_sets: Vec<SetSpec>,
    pub times: Vec<f64>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub diameter_cap: Option<f64>,
    #[serde(default)]
    pub point_horizon_cap: Option<f64>,
    #[serde(default)]
    pub expected: DissipativityExpected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub region: Region,
    pub points: SetSpec,
    pub horizon: Vec<f64>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_true")]
    pub refine: bool,
    #[serde(default)]
    pub expected: PointExpected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatteningSpec {
    pub t: f64,
    pub set: SetSpec,
    pub m: usize,
    /// `flat` means the backward tail stays within this norm.
    pub threshold: f64,
    #[serde(default)]
    pub expected: FlatteningExpected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosednessSpec {
    pub t: f64,
    pub t_star: f64,
    pub limit: Vec<f64>,
    pub direction: Vec<f64>,
    pub scales: Vec<f64>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_tol")]
    pub conv_tol: f64,
    #[serde(default)]
    pub expected: ClosednessExpected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvarianceSpec {
    pub family: FamilySpec,
    pub pairs: Vec<(f64, f64)>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub expected: InvarianceExpected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttractorSpec {
    pub b0: FamilySpec,
    pub times: Vec<f64>,
    pub cluster_eps: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub test_sets: Vec<SetSpec>,
    #[serde(default)]
    pub expected: AttractorExpected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProxySpec {
    /// Proxy of `∪_τ U(t, τ; set)` over the schedule.
    pub t: f64,
    pub set: SetSpec,
    #[serde(default = "one")]
    pub budget: usize,
    /// `compact` means the proxy is at most this.
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub expected: ProxyExpected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergySpec {
    pub times: Vec<f64>,
    pub set: SetSpec,
    #[serde(default)]
    pub expected: EnergyExpected,
}
