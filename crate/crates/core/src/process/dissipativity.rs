use serde::{Deserialize, Serialize};

use super::{evolve_per_point, Process, ProcessError, ProcessKind, Sampling, TauSchedule, SAMPLING_CAVEAT};
use crate::metric::{union_diameter_bound, Metric, Region, RegionFamily, SampledSet, StatePoint};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DissipativityConfig {
    /// Inclusion tolerance: `A ⊆ N_tol(B)`.
    pub tol: f64,
    /// Cap for the backward-boundedness verdict.
    pub diameter_cap: f64,
    /// Per-point absorption is additionally searched on offsets doubling
    /// past the schedule up to this elapsed time.
    pub point_horizon_cap: Option<f64>,
    pub sampling: Sampling,
}

impl Default for DissipativityConfig {
    fn default() -> Self {
        Self { tol: 1e-6, diameter_cap: 1e6, point_horizon_cap: None, sampling: Sampling::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EnteringTime {
    pub t: f64,
    pub set_label: String,
    /// Largest scheduled `τ̄` from which every deeper scheduled start is absorbed.
    pub tau_bar: Option<f64>,
    /// `t − τ̄`.
    pub elapsed: Option<f64>,
}

/// Worst absorption failure observed at one scheduled start time.
#[derive(Clone, Debug, Serialize)]
pub struct AbsorptionWitness {
    pub t: f64,
    pub set_label: String,
    pub tau: f64,
    pub seed: StatePoint,
    pub image: StatePoint,
    /// Distance of `image` to the candidate.
    pub excess: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DissipativityReport {
    pub absorbing: bool,
    pub entering_times: Vec<EnteringTime>,
    pub witnesses: Vec<AbsorptionWitness>,
    pub monotone: bool,
    pub backward_bounded: bool,
    pub max_backward_diameter: f64,
    pub point_dissipative: bool,
    pub caveat: &'static str,
}

struct PerTau {
    absorbed: Vec<bool>,
    worst: Option<(usize, StatePoint, f64)>,
}

/// Excess of each seed's images over `region`, with the worst image.
fn excess_per_seed(
    metric: Metric,
    region: &Region,
    images: &[SampledSet],
) -> Result<Vec<(f64, StatePoint)>, ProcessError> {
    let mut out = Vec::with_capacity(images.len());
    for img in images {
        let mut worst = (f64::NEG_INFINITY, img.points()[0].clone());
        for q in img.iter() {
            let e = region.excess(metric, q)?;
            if e > worst.0 {
                worst = (e, q.clone());
            }
        }
        out.push(worst);
    }
    Ok(out)
}

fn per_tau<P: Process + ?Sized>(
    p: &P,
    t: f64,
    tau: f64,
    region: &Region,
    set: &SampledSet,
    cfg: &DissipativityConfig,
) -> Result<PerTau, ProcessError> {
    let images = evolve_per_point(p, t, tau, set, cfg.sampling)?;
    let excess = excess_per_seed(p.metric(), region, &images)?;
    let mut worst: Option<(usize, StatePoint, f64)> = None;
    for (i, (e, img)) in excess.iter().enumerate() {
        if *e > cfg.tol && worst.as_ref().is_none_or(|w| *e > w.2) {
            worst = Some((i, img.clone(), *e));
        }
    }
    Ok(PerTau { absorbed: excess.iter().map(|(e, _)| *e <= cfg.tol).collect(), worst })
}

/// First index from which every later flag holds.
fn entering_index(flags: impl DoubleEndedIterator<Item = bool> + ExactSizeIterator) -> Option<usize> {
    let n = flags.len();
    let trailing = flags.rev().take_while(|&f| f).count();
    (trailing > 0).then_some(n - trailing)
}

/// Classifies a candidate absorbing family against test sets.
///
/// `absorbing` asks for every `(t, E)` that the deepest scheduled starts
/// all map `E` into `N_tol(candidate(t))`. `monotone` and
/// `backward_bounded` are evaluated on the candidate's own time grid.
pub fn dissipativity_classify<P: Process + ?Sized>(
    p: &P,
    candidate: &RegionFamily,
    test_sets: &[SampledSet],
    times: &[f64],
    sched: &TauSchedule,
    cfg: &DissipativityConfig,
) -> Result<DissipativityReport, ProcessError> {
    let metric = p.metric();
    let mut entering_times = Vec::new();
    let mut witnesses = Vec::new();
    let mut absorbing = true;
    let mut point_dissipative = true;

    for &t in times {
        let region = candidate.at(t).ok_or(ProcessError::MissingTime(t))?;
        for set in test_sets {
            let taus = sched.taus(t);
            let rows = crate::par::map(&taus, |&tau| per_tau(p, t, tau, region, set, cfg));
            let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
            let set_ok = rows.iter().map(|r| r.absorbed.iter().all(|&a| a));
            let idx = entering_index(set_ok.collect::<Vec<_>>().into_iter());
            absorbing &= idx.is_some();
            entering_times.push(EnteringTime {
                t,
                set_label: set.label().to_string(),
                tau_bar: idx.map(|i| taus[i]),
                elapsed: idx.map(|i| sched.offsets()[i]),
            });
            for (tau, row) in taus.iter().zip(&rows) {
                if let Some((i, image, excess)) = &row.worst {
                    witnesses.push(AbsorptionWitness {
                        t,
                        set_label: set.label().to_string(),
                        tau: *tau,
                        seed: set.points()[*i].clone(),
                        image: image.clone(),
                        excess: *excess,
                    });
                }
            }
            point_dissipative &= points_absorbed(p, t, region, set, sched, &rows, cfg)?;
        }
    }

    let regions = candidate.regions();
    let mut monotone = true;
    for i in 0..regions.len() {
        for j in i + 1..regions.len() {
            monotone &= regions[j].contains_region(metric, &regions[i], cfg.tol)?;
        }
    }
    let mut max_backward_diameter = 0.0_f64;
    for i in 0..regions.len() {
        max_backward_diameter = max_backward_diameter.max(union_diameter_bound(metric, regions[..=i].iter()));
    }

    Ok(DissipativityReport {
        absorbing,
        entering_times,
        witnesses,
        monotone,
        backward_bounded: max_backward_diameter.is_finite() && max_backward_diameter <= cfg.diameter_cap,
        max_backward_diameter,
        point_dissipative,
        caveat: SAMPLING_CAVEAT,
    })
}

/// Every seed of `set` is eventually absorbed, each at its own time.
fn points_absorbed<P: Process + ?Sized>(
    p: &P,
    t: f64,
    region: &Region,
    set: &SampledSet,
    sched: &TauSchedule,
    rows: &[PerTau],
    cfg: &DissipativityConfig,
) -> Result<bool, ProcessError> {
    let mut extra = Vec::new();
    if let Some(cap) = cfg.point_horizon_cap {
        let mut o = *sched.offsets().last().expect("nonempty schedule");
        while o * 2.0 <= cap {
            o *= 2.0;
            extra.push(o);
        }
    }
    let extra_rows = crate::par::map(&extra, |&o| per_tau(p, t, t - o, region, set, cfg));
    let extra_rows = extra_rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok((0..set.len()).all(|i| {
        let flags: Vec<bool> = rows.iter().chain(&extra_rows).map(|r| r.absorbed[i]).collect();
        entering_index(flags.into_iter()).is_some()
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct PointEntering {
    pub point: StatePoint,
    /// Elapsed time after which every sampled image stays in the candidate.
    pub entering: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointDissipativityReport {
    pub entries: Vec<PointEntering>,
    pub all_entered: bool,
    pub caveat: &'static str,
}

/// Per-point entering times of a semiflow `S(s; x) = U(s, 0; x)` into
/// `N_tol(candidate)`, sampled on the increasing elapsed-time grid
/// `horizon`. With `refine`, the entering time is bisected between the last
/// failing and the first passing grid time (continuous-time systems).
pub fn point_dissipativity_test<P: Process + ?Sized>(
    p: &P,
    candidate: &Region,
    points: &[StatePoint],
    horizon: &[f64],
    tol: f64,
    refine: bool,
    sampling: Sampling,
) -> Result<PointDissipativityReport, ProcessError> {
    if p.kind() != ProcessKind::Semiflow {
        return Err(ProcessError::InvalidArgument(format!("{} is not a semiflow", p.name())));
    }
    if horizon.is_empty() || horizon.windows(2).any(|w| w[1] <= w[0]) || horizon[0] < 0.0 {
        return Err(ProcessError::InvalidArgument("horizon must be nonempty, nonnegative and increasing".into()));
    }
    let metric = p.metric();
    let absorbed_at = |x: &StatePoint, s: f64| -> Result<bool, ProcessError> {
        let img = p.evolve(s, 0.0, &SampledSet::singleton(x.clone(), "x"), sampling)?;
        Ok(candidate.set_excess(metric, &img)? <= tol)
    };
    let entries = crate::par::map(points, |x| -> Result<PointEntering, ProcessError> {
        let flags = horizon.iter().map(|&s| absorbed_at(x, s)).collect::<Result<Vec<_>, _>>()?;
        let entering = match entering_index(flags.into_iter()) {
            None => None,
            Some(0) => Some(horizon[0]),
            Some(i) if refine => {
                let (mut lo, mut hi) = (horizon[i - 1], horizon[i]);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if absorbed_at(x, mid)? {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                Some(hi)
            }
            Some(i) => Some(horizon[i]),
        };
        Ok(PointEntering { point: x.clone(), entering })
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let all_entered = entries.iter().all(|e| e.entering.is_some());
    Ok(PointDissipativityReport { entries, all_entered, caveat: SAMPLING_CAVEAT })
}
