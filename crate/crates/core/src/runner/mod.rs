//! Scenario-driven runs: parse a JSON scenario, build the named system,
//! execute each diagnostic and write `report.json`, `manifest.json`,
//! `curves/*.csv` and `plots/*.svg`.

mod diagnostics;
mod scenario;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use diagnostics::DiagnosticOutcome;
pub use scenario::*;

use crate::inclusion::{Forcing, InclusionProcess, Nonlinearity, TrajectoryCache};
use crate::process::{FiniteRelationProcess, Process, Sampling};
use crate::report::write_text;
use crate::systems::{DriftExample, HeatSwitch, PlanarOde, ShiftSemiflow};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_SYSTEM: i32 = 3;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("scenario error: {0}")]
    Schema(String),
    #[error("system error: {0}")]
    System(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Schema(_) => EXIT_SCHEMA,
            RunError::System(_) => EXIT_SYSTEM,
        }
    }
}

/// A built system.
#[allow(clippy::large_enum_variant)]
pub enum System {
    Drift(DriftExample),
    Shift(ShiftSemiflow),
    PlanarOde(PlanarOde),
    HeatSwitch(HeatSwitch),
    Inclusion(InclusionProcess),
    FiniteRelation(FiniteRelationProcess),
}

impl System {
    pub fn build(spec: &SystemSpec) -> Result<Self, RunError> {
        let bad = |e: &dyn std::fmt::Display| RunError::Schema(format!("system: {e}"));
        Ok(match spec {
            SystemSpec::Drift => System::Drift(DriftExample),
            SystemSpec::Shift { dim } => System::Shift(ShiftSemiflow::new(*dim).map_err(|e| bad(&e))?),
            SystemSpec::PlanarOde => System::PlanarOde(PlanarOde),
            SystemSpec::HeatSwitch { modes, plus_only } => System::HeatSwitch(
                if *plus_only { HeatSwitch::plus_only(*modes) } else { HeatSwitch::new(*modes) }
                    .map_err(|e| bad(&e))?,
            ),
            SystemSpec::Inclusion { solver, nonlinearity, forcing, design, cache_dir } => {
                let nl = Nonlinearity::from_spec(nonlinearity).map_err(|e| bad(&e))?;
                let f = Forcing::from_spec(forcing).map_err(|e| bad(&e))?;
                let mut p =
                    InclusionProcess::new(solver.clone(), nl, f).map_err(|e| bad(&e))?.with_design(design.clone());
                if let Some(dir) = cache_dir {
                    p = p.with_cache(TrajectoryCache::new(dir));
                }
                System::Inclusion(p)
            }
            SystemSpec::FiniteRelation { states, max_out, relation_seed } => System::FiniteRelation(
                FiniteRelationProcess::random(*states, *max_out, *relation_seed).map_err(|e| bad(&e))?,
            ),
        })
    }

    pub fn process(&self) -> &dyn Process {
        match self {
            System::Drift(p) => p,
            System::Shift(p) => p,
            System::PlanarOde(p) => p,
            System::HeatSwitch(p) => p,
            System::Inclusion(p) => p,
            System::FiniteRelation(p) => p,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SystemInfo {
    pub name: &'static str,
    pub description: &'static str,
    pub parameters: Value,
}

/// Registered systems in a fixed order.
pub fn list_systems() -> Vec<SystemInfo> {
    vec![
        SystemInfo {
            name: "drift",
            description: "U(t,tau;x) = {t - tau} on the real line; no pullback attractor",
            parameters: json!({}),
        },
        SystemInfo {
            name: "shift",
            description: "left shift on l2 truncated to dim coordinates, integer time",
            parameters: json!({ "dim": "integer >= 2" }),
        },
        SystemInfo {
            name: "planar-ode",
            description: "x' = 0, y' = -x on [0,1] x [0,inf); point-dissipative but not dissipative",
            parameters: json!({}),
        },
        SystemInfo {
            name: "heat-switch",
            description: "sine-mode heat flow switching on the sign of the first mode",
            parameters: json!({ "modes": "integer >= 2", "plus_only": "bool, default false" }),
        },
        SystemInfo {
            name: "inclusion",
            description: "Galerkin ensemble for u' - u_xx + dj(u) in f on (0, pi)",
            parameters: json!({
                "solver": { "modes": "integer >= 1", "dt": "real > 0", "mollifier_index": "integer >= 0",
                            "selection_theta": "real in [0,1]", "quad_points": "multiple of 4, >= 4 modes",
                            "norm_cap": "real > 0" },
                "nonlinearity": { "name": ["zero", "heaviside", "neg-heaviside", "sine-plus-step {lambda}"] },
                "forcing": { "name": ["zero", "steady {amplitude, mode}", "pulsating {amplitude}"] },
                "design": { "mollifier_choices": "list of integers", "theta_range": "[lo, hi]" },
                "cache_dir": "optional path"
            }),
        },
        SystemInfo {
            name: "finite-relation",
            description: "random relation on a finite state set, integer time",
            parameters: json!({ "states": "integer >= 1", "max_out": "integer >= 1", "relation_seed": "integer" }),
        },
    ]
}

pub fn parse_scenario(text: &str) -> Result<Scenario, RunError> {
    serde_json::from_str(text).map_err(|e| RunError::Schema(e.to_string()))
}

pub fn load_scenario(path: &Path) -> Result<Scenario, RunError> {
    let text = fs::read_to_string(path).map_err(|e| RunError::Schema(format!("{}: {e}", path.display())))?;
    parse_scenario(&text)
}

/// `sha256` of the scenario's canonical JSON.
pub fn scenario_hash(s: &Scenario) -> String {
    hex::encode(Sha256::digest(serde_json::to_vec(s).expect("scenario serializes")))
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub toolkit_version: &'static str,
    pub scenario: String,
    pub scenario_hash: String,
    pub system: SystemSpec,
    pub seed: u64,
    pub branch_budget: usize,
    pub all_matched: bool,
    pub diagnostics: Vec<DiagnosticOutcome>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictSummary {
    pub index: usize,
    pub kind: &'static str,
    pub matched: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub scenario_hash: String,
    pub toolkit_version: &'static str,
    pub started_unix_seconds: u64,
    pub wall_clock_seconds: f64,
    pub verdicts: Vec<VerdictSummary>,
    pub all_matched: bool,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub output_dir: PathBuf,
    pub report: Report,
    pub manifest: RunManifest,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.all_matched {
            EXIT_OK
        } else {
            EXIT_MISMATCH
        }
    }
}

/// Evaluates every diagnostic without writing anything.
pub fn evaluate(scenario: &Scenario) -> Result<Report, RunError> {
    let system = System::build(&scenario.system)?;
    let sched = scenario.schedule.build().map_err(|e| RunError::Schema(format!("schedule: {e}")))?;
    if scenario.branch_budget == 0 {
        return Err(RunError::Schema("branch_budget must be >= 1".into()));
    }
    let ctx = diagnostics::Context {
        system: &system,
        sched,
        sampling: Sampling::new(scenario.branch_budget, scenario.seed),
        seed: scenario.seed,
    };
    let outcomes = scenario
        .diagnostics
        .iter()
        .enumerate()
        .map(|(i, d)| diagnostics::execute(&ctx, i, d))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        toolkit_version: crate::VERSION,
        scenario: scenario.name.clone(),
        scenario_hash: scenario_hash(scenario),
        system: scenario.system.clone(),
        seed: scenario.seed,
        branch_budget: scenario.branch_budget,
        all_matched: outcomes.iter().all(|o| o.matched),
        diagnostics: outcomes,
    })
}

fn io_err(path: &Path, e: std::io::Error) -> RunError {
    RunError::System(format!("{}: {e}", path.display()))
}

/// Runs `scenario` and writes its artifacts under `output_dir`.
pub fn run_scenario(scenario: &Scenario, output_dir: &Path) -> Result<RunOutcome, RunError> {
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let clock = Instant::now();
    let report = evaluate(scenario)?;
    let curves = output_dir.join("curves");
    let plots = output_dir.join("plots");
    for dir in [&curves, &plots] {
        if dir.is_dir() {
            fs::remove_dir_all(dir).map_err(|e| io_err(dir, e))?;
        }
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    for o in &report.diagnostics {
        for c in &o.curves {
            c.write(&curves, &plots).map_err(|e| io_err(&curves, e))?;
        }
    }
    let report_path = output_dir.join("report.json");
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    write_text(&report_path, &text).map_err(|e| io_err(&report_path, e))?;
    let manifest = RunManifest {
        scenario_hash: report.scenario_hash.clone(),
        toolkit_version: crate::VERSION,
        started_unix_seconds: started,
        wall_clock_seconds: clock.elapsed().as_secs_f64(),
        verdicts: report
            .diagnostics
            .iter()
            .map(|o| VerdictSummary { index: o.index, kind: o.kind, matched: o.matched })
            .collect(),
        all_matched: report.all_matched,
    };
    let manifest_path = output_dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    write_text(&manifest_path, &text).map_err(|e| io_err(&manifest_path, e))?;
    Ok(RunOutcome { output_dir: output_dir.to_path_buf(), report, manifest })
}

/// Loads, applies overrides and runs. Without `--output` or an
/// `output_dir` in the file, artifacts go to `pullback-out/<name>`.
pub fn run(path: &Path, output: Option<&Path>, seed: Option<u64>) -> Result<RunOutcome, RunError> {
    let mut scenario = load_scenario(path)?;
    if let Some(s) = seed {
        scenario.seed = s;
    }
    let dir = match (output, &scenario.output_dir) {
        (Some(o), _) => o.to_path_buf(),
        (None, Some(d)) => d.clone(),
        (None, None) => Path::new("pullback-out").join(&scenario.name),
    };
    run_scenario(&scenario, &dir)
}
