use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::forcing::Forcing;
use super::galerkin::{h_norm, solve_trajectory, Galerkin, SolverConfig, Trajectory};
use super::nonlinearity::Nonlinearity;
use super::SolverError;
use crate::metric::{Metric, StatePoint};
use crate::process::{Process, ProcessError, ProcessKind, Sampling};

/// How ensemble branches pick `(mollifier_index, selection_theta)`.
///
/// Branch 0 is the base configuration. Branch `i ≥ 1` draws from its own
/// ChaCha stream, so a larger budget only appends branches.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnsembleDesign {
    pub mollifier_choices: Vec<usize>,
    pub theta_range: (f64, f64),
}

impl Default for EnsembleDesign {
    fn default() -> Self {
        Self { mollifier_choices: vec![0, 16, 32, 64, 128], theta_range: (0.0, 1.0) }
    }
}

impl EnsembleDesign {
    pub fn branch(&self, base: &SolverConfig, index: usize, rng_seed: u64) -> SolverConfig {
        if index == 0 || self.mollifier_choices.is_empty() {
            return base.clone();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        rng.set_stream(index as u64);
        let n_moll = self.mollifier_choices[rng.gen_range(0..self.mollifier_choices.len())];
        let (lo, hi) = self.theta_range;
        let theta = lo + (hi - lo) * rng.gen::<f64>();
        SolverConfig { mollifier_index: n_moll, selection_theta: theta, ..base.clone() }
    }

    /// Smallest nonzero mollifier index any branch can use, or 0.
    pub fn finest_width_index(&self, base: &SolverConfig) -> usize {
        self.mollifier_choices.iter().chain([&base.mollifier_index]).copied().filter(|&n| n > 0).min().unwrap_or(0)
    }
}

/// Content-addressed CSV store of trajectories.
#[derive(Clone, Debug)]
pub struct TrajectoryCache {
    dir: PathBuf,
}

#[derive(Serialize)]
struct CacheKey<'a> {
    cfg: &'a SolverConfig,
    nonlinearity: &'a super::NonlinearitySpec,
    forcing: &'a super::ForcingSpec,
    u0: &'a [f64],
    t0: f64,
    t_end: f64,
}

impl TrajectoryCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(
        cfg: &SolverConfig,
        nl: &Nonlinearity,
        forcing: &Forcing,
        u0: &StatePoint,
        t0: f64,
        t_end: f64,
    ) -> String {
        let key = CacheKey { cfg, nonlinearity: &nl.spec, forcing: &forcing.spec, u0: u0.coords(), t0, t_end };
        let json = serde_json::to_vec(&key).expect("cache key serializes");
        hex::encode(Sha256::digest(&json))
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(&key[..2]).join(format!("{key}.csv"))
    }

    pub fn get_or_solve(
        &self,
        u0: &StatePoint,
        t0: f64,
        t_end: f64,
        cfg: &SolverConfig,
        nl: &Nonlinearity,
        forcing: &Forcing,
    ) -> Result<Trajectory, SolverError> {
        let path = self.path_for(&Self::key(cfg, nl, forcing, u0, t0, t_end));
        if let Ok(text) = fs::read_to_string(&path) {
            if let Some(traj) = parse_csv(&text, cfg.modes) {
                return Ok(traj);
            }
        }
        let traj = solve_trajectory(u0, t0, t_end, cfg, nl, forcing)?;
        write_csv(&path, &traj).map_err(|e| SolverError::Cache(format!("{}: {e}", path.display())))?;
        Ok(traj)
    }
}

fn write_csv(path: &Path, traj: &Trajectory) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let modes = traj.coeffs.first().map_or(0, Vec::len);
    let mut out = String::from("t");
    for k in 1..=modes {
        out.push_str(&format!(",a{k}"));
    }
    out.push('\n');
    for (t, a) in traj.times.iter().zip(&traj.coeffs) {
        out.push_str(&t.to_string());
        for v in a {
            out.push(',');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    let tmp = path.with_extension("csv.tmp");
    fs::File::create(&tmp)?.write_all(out.as_bytes())?;
    fs::rename(tmp, path)
}

fn parse_csv(text: &str, modes: usize) -> Option<Trajectory> {
    let mut traj = Trajectory { times: Vec::new(), coeffs: Vec::new(), norms: Vec::new() };
    for line in text.lines().skip(1) {
        let mut vals = line.split(',').map(|v| v.parse::<f64>().ok());
        traj.times.push(vals.next()??);
        let a: Vec<f64> = vals.collect::<Option<_>>()?;
        if a.len() != modes {
            return None;
        }
        traj.norms.push(h_norm(&a));
        traj.coeffs.push(a);
    }
    (!traj.is_empty()).then_some(traj)
}

/// The solution map of the inclusion, sampled by an ensemble of
/// (mollifier, selection) branches. Images are under-approximations.
#[derive(Clone, Debug)]
pub struct InclusionProcess {
    pub cfg: SolverConfig,
    pub nonlinearity: Nonlinearity,
    pub forcing: Forcing,
    pub design: EnsembleDesign,
    cache: Option<TrajectoryCache>,
}

impl InclusionProcess {
    pub fn new(cfg: SolverConfig, nonlinearity: Nonlinearity, forcing: Forcing) -> Result<Self, SolverError> {
        cfg.validate()?;
        Ok(Self { cfg, nonlinearity, forcing, design: EnsembleDesign::default(), cache: None })
    }

    pub fn with_design(mut self, design: EnsembleDesign) -> Self {
        self.design = design;
        self
    }

    pub fn with_cache(mut self, cache: TrajectoryCache) -> Self {
        self.cache = Some(cache);
        self
    }

    /// End state of branch `index` started from `x` at `tau`.
    pub fn branch_endpoint(
        &self,
        t: f64,
        tau: f64,
        x: &StatePoint,
        index: usize,
        rng_seed: u64,
    ) -> Result<StatePoint, SolverError> {
        let cfg = self.design.branch(&self.cfg, index, rng_seed);
        let end = match &self.cache {
            Some(cache) => cache
                .get_or_solve(x, tau, t, &cfg, &self.nonlinearity, &self.forcing)?
                .coeffs
                .pop()
                .expect("trajectories include their end point"),
            None => Galerkin::new(&cfg)?.integrate(x.coords(), tau, t, &self.nonlinearity, &self.forcing, |_, _| {})?,
        };
        Ok(StatePoint::from_vec_unchecked(end))
    }

    /// Full trajectory of branch `index`.
    pub fn branch_trajectory(
        &self,
        t: f64,
        tau: f64,
        x: &StatePoint,
        index: usize,
        rng_seed: u64,
    ) -> Result<Trajectory, SolverError> {
        let cfg = self.design.branch(&self.cfg, index, rng_seed);
        match &self.cache {
            Some(cache) => cache.get_or_solve(x, tau, t, &cfg, &self.nonlinearity, &self.forcing),
            None => solve_trajectory(x, tau, t, &cfg, &self.nonlinearity, &self.forcing),
        }
    }
}

impl Process for InclusionProcess {
    fn name(&self) -> &str {
        "inclusion"
    }

    fn kind(&self) -> ProcessKind {
        ProcessKind::Strict
    }

    fn dimension(&self) -> usize {
        self.cfg.modes
    }

    fn metric(&self) -> Metric {
        Metric::SineModes
    }

    fn advance(&self, t: f64, tau: f64, x: &StatePoint, sampling: Sampling) -> Result<Vec<StatePoint>, ProcessError> {
        (0..sampling.branch_budget.max(1))
            .map(|i| self.branch_endpoint(t, tau, x, i, sampling.rng_seed).map_err(ProcessError::from))
            .collect()
    }
}
