//! Acceptance suite. Runs as a plain binary and prints one line per
//! criterion; exits nonzero if any criterion fails.

use std::collections::HashMap;
use std::error::Error;
use std::f64::consts::FRAC_PI_2;
use std::path::Path;
use std::time::Instant;

use pullback_lab::inclusion::{
    energy_certificate_mollified, flattening_certificate, gronwall_bound, h_norm, solve_trajectory, weak_form_residual,
    EnsembleDesign, Forcing, ForcingSpec, InclusionProcess, Nonlinearity, SolverConfig,
};
use pullback_lab::metric::{Metric, NonautonomousSet, Region, RegionFamily, SampledSet, StatePoint};
use pullback_lab::process::{
    attraction_test, attractor_construct, check_axioms, closedness_probe, dissipativity_classify, invariance_check,
    minimality_gaps, omega_limit, point_dissipativity_test, AttractorConfig, AxiomProbe, DissipativityConfig,
    EtaSequence, FiniteRelationProcess, OmegaConfig, Process, Sampling, TauSchedule,
};
use pullback_lab::systems::{planar_evolve, shift_evolve, DriftExample, HeatSwitch, PlanarOde, ShiftSemiflow};
use pullback_lab::{runner, sets};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, Box<dyn Error>>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+).into());
        }
    };
}

fn pt(c: Vec<f64>) -> StatePoint {
    StatePoint::new(c).unwrap()
}

fn one() -> Sampling {
    Sampling::default()
}

fn drift_dichotomy() -> Outcome {
    let b = SampledSet::from_coords(vec![vec![0.0]], "B")?;
    let omega =
        omega_limit(&DriftExample, 0.0, &b, &TauSchedule::arithmetic(1.0, 1.0, 30)?, &OmegaConfig::with_eps(0.1))?;
    ensure!(!omega.converged, "omega_limit converged on the drift example");
    let mut proxies = Vec::new();
    for k in [20usize, 40, 80] {
        let sched = TauSchedule::arithmetic(10.0, 1.0, k - 9)?;
        let mut union: Option<SampledSet> = None;
        for tau in sched.taus(0.0) {
            let img = DriftExample.evolve(0.0, tau, &b, one())?;
            let single = Metric::Euclidean.kuratowski_proxy(&img, 1)?;
            ensure!(single == 0.0, "single image proxy {single} at tau {tau}");
            union = Some(match union {
                None => img,
                Some(u) => u.union(&img)?,
            });
        }
        let proxy = Metric::Euclidean.kuratowski_proxy(&union.unwrap(), 1)?;
        let expected = (k - 10) as f64;
        ensure!((proxy - expected).abs() <= 1e-9, "K={k}: proxy {proxy}, expected {expected}");
        proxies.push(proxy);
    }
    Ok(format!("converged=false, union proxies {proxies:?} for K=20,40,80, single images 0"))
}

fn shift_counterexample() -> Outcome {
    const N: usize = 64;
    let shift = ShiftSemiflow::new(N)?;
    let horizon: Vec<f64> = (0..=N).map(|n| n as f64).collect();
    let mut witnesses = 0;
    for r in [1.0, 2.5] {
        let ball = Region::ball(StatePoint::zeros(N), r);
        let pts: Vec<StatePoint> = (0..N).map(|k| StatePoint::axis(N, k, 2.0 * r)).collect();
        let pd = point_dissipativity_test(&shift, &ball, &pts, &horizon, 0.0, false, one())?;
        ensure!(pd.all_entered, "R={r}: some point never entered");
        for (k, e) in pd.entries.iter().enumerate() {
            ensure!(e.entering == Some((k + 1) as f64), "R={r}: 2R e_{} entered at {:?}", k + 1, e.entering);
        }

        let family = RegionFamily::constant(vec![0.0], ball)?;
        let test = SampledSet::new(pts.clone(), "2R axes")?;
        let sched = TauSchedule::arithmetic(0.0, 1.0, N)?;
        let cfg = DissipativityConfig { tol: 0.0, ..DissipativityConfig::default() };
        let rep = dissipativity_classify(&shift, &family, &[test], &[0.0], &sched, &cfg)?;
        ensure!(!rep.absorbing, "R={r}: unit ball reported absorbing");
        ensure!(rep.witnesses.len() == N, "R={r}: {} witnesses, expected {N}", rep.witnesses.len());
        for w in &rep.witnesses {
            let norm = Metric::Euclidean.norm(&w.image);
            ensure!(norm == 2.0 * r && w.excess == r, "R={r}: witness at tau {} has norm {norm}", w.tau);
        }
        for k in 0..N {
            let img = shift_evolve(k as i64, &StatePoint::axis(N, k, 2.0 * r))?;
            ensure!(img == StatePoint::axis(N, 0, 2.0 * r), "R={r}: S(k; 2R e_(k+1)) is not 2R e_1 at k={k}");
        }
        witnesses += rep.witnesses.len();
    }
    Ok(format!("entering step k+1 for 2R e_(k+1); {witnesses} witnesses of norm exactly 2R (N=64, R=1,2.5)"))
}

fn planar_quintuple() -> Outcome {
    // point dissipative, with exact entering times y0/x0
    let band = Region::boxed(vec![0.0, 0.0], vec![1.0, 0.0])?;
    let seeds = [(0.5, 2.0), (0.25, 3.0), (0.125, 1.0), (1.0, 5.0), (0.75, 0.3), (0.0, 1.5)];
    let pts: Vec<StatePoint> = seeds.iter().map(|&(x, y)| pt(vec![x, y])).collect();
    let horizon: Vec<f64> = (0..=48).map(|n| n as f64 * 0.5).collect();
    for refine in [false, true] {
        let pd = point_dissipativity_test(&PlanarOde, &band, &pts, &horizon, 0.0, refine, one())?;
        for (&(x0, y0), e) in seeds.iter().zip(&pd.entries) {
            let exact = y0 / if x0 == 0.0 { 1.0 } else { x0 };
            let got = e.entering.ok_or("point never entered the band")?;
            let ok =
                if refine { (got - exact).abs() <= 1e-12 * exact.max(1.0) } else { got == (2.0 * exact).ceil() / 2.0 };
            ensure!(ok, "({x0},{y0}) refine={refine}: entering {got}, exact {exact}");
        }
    }

    // asymptotically compact
    for m in [1.0, 4.0] {
        let grid = sets::grid(&[0.0, 0.0], &[1.0, m], &[11, 4 * m as usize + 1])?;
        let om =
            omega_limit(&PlanarOde, 0.0, &grid, &TauSchedule::geometric(2.0, 2.0, 11)?, &OmegaConfig::with_eps(0.05))?;
        ensure!(om.converged, "omega_limit did not converge on [0,1]x[0,{m}]");
        let limit = om.limit_set.ok_or("no limit set")?;
        ensure!(limit.iter().all(|p| p.coords()[1] == 0.0), "limit off the bottom edge");
    }

    // strict
    let probes: Vec<AxiomProbe> = [(3.0, 1.5, 0.0, 0.3, 2.0), (1.0, 0.25, -2.0, 0.0, 1.0), (9.0, 4.0, 1.0, 0.9, 7.0)]
        .iter()
        .map(|&(t, s, tau, x, y)| AxiomProbe { t, s, tau, x: pt(vec![x, y]) })
        .collect();
    let ax = check_axioms(&PlanarOde, &probes, 1e-12, one(), 1)?;
    ensure!(ax.identity_ok && ax.sub_composition_ok && ax.strict_ok == Some(true), "planar axioms failed");
    let mut worst: f64 = 0.0;
    for i in 0..=10 {
        for j in 0..=10 {
            let z = pt(vec![i as f64 / 10.0, j as f64 * 0.7]);
            for (s, t) in [(0.3, 1.1), (2.0, 0.5), (5.0, 5.0)] {
                let a = planar_evolve(s + t, &z)?;
                let b = planar_evolve(t, &planar_evolve(s, &z)?)?;
                worst = worst.max(Metric::Euclidean.distance(&a, &b)?);
            }
        }
    }
    ensure!(worst <= 1e-12, "semigroup residual {worst}");

    // not dissipative: y_n(Mn/2) = 3M/2 for the seed (1/n, 2M)
    let big_m = 4.0;
    let ns: Vec<f64> = (0..8).map(|j| f64::powi(2.0, j)).collect();
    for &n in &ns {
        let z = planar_evolve(big_m * n / 2.0, &pt(vec![1.0 / n, 2.0 * big_m]))?;
        ensure!(z.coords()[1] == 1.5 * big_m, "y_n(Mn/2) = {} for n={n}", z.coords()[1]);
    }
    let test = SampledSet::from_coords(ns.iter().map(|n| vec![1.0 / n, 2.0 * big_m]).collect(), "K_M")?;
    let family = RegionFamily::constant(vec![0.0], Region::boxed(vec![0.0, 0.0], vec![1.0, big_m])?)?;
    let sched = TauSchedule::from_offsets(ns.iter().map(|n| big_m * n / 2.0).collect())?;
    let cfg = DissipativityConfig { tol: 0.0, point_horizon_cap: Some(1e5), ..DissipativityConfig::default() };
    let rep = dissipativity_classify(&PlanarOde, &family, &[test], &[0.0], &sched, &cfg)?;
    ensure!(!rep.absorbing && rep.point_dissipative, "dissipativity verdicts wrong");
    ensure!(rep.witnesses.iter().all(|w| w.excess >= big_m / 2.0), "witness excess below M/2");

    // not closed
    let mut gaps = Vec::new();
    let y0 = 1.0;
    for t_star in [0.5, 1.0, 2.0] {
        let eta = EtaSequence::along(pt(vec![0.0, y0]), &pt(vec![1.0, 0.0]), (1..=4000).map(|n| 1.0 / n as f64));
        let out = closedness_probe(&PlanarOde, 0.0, t_star, &eta, 1e-6, 1e-3, one())?;
        ensure!(out.is_violation(), "t*={t_star}: no violation");
        let gap = out.witness().unwrap().gap;
        let lower = f64::min(t_star, y0);
        ensure!(gap >= lower * (1.0 - 1e-3) && gap <= lower + 1e-9, "t*={t_star}: gap {gap}, expected {lower}");
        gaps.push(gap);
    }
    Ok(format!(
        "point-dissipative, compact, strict (residual {worst:.1e}), not dissipative (y=3M/2), not closed (gaps {:.4?})",
        gaps
    ))
}

fn heat_switch() -> Outcome {
    const N: usize = 16;
    let heat = HeatSwitch::new(N)?;
    let sm = Metric::SineModes;
    let v1 = HeatSwitch::v1_norm();

    // (a)
    for alpha0 in [0.8, 2.0, -0.3, -1.7, 0.0] {
        let mut c = vec![0.0; N];
        c[0] = alpha0;
        c[3] = 0.5;
        let u0 = SampledSet::singleton(pt(c), "u0");
        for t in [0.1, 1.0, 10.0] {
            let a = heat.evolve(t, 0.0, &u0, one())?.points()[0].coords()[0];
            let e = (-t).exp();
            let want = if alpha0 > 0.0 { alpha0 * e } else { alpha0 * e - 1.0 + e };
            ensure!((a - want).abs() <= 1e-10, "alpha at t={t} from {alpha0}: {a} vs {want}");
        }
    }

    // (b)
    let minus_v1 = StatePoint::axis(N, 0, -1.0);
    let mut entering = Vec::new();
    for rho in [1.0, 10.0] {
        let b = sets::ball(&StatePoint::zeros(N), rho, 60, sm, 7)?.union(&sets::axis_sphere(
            &StatePoint::zeros(N),
            rho,
            sm,
        )?)?;
        for eps in [0.1, 0.01] {
            let n_eps = Region::Union {
                parts: vec![Region::ball(StatePoint::zeros(N), eps), Region::ball(minus_v1.clone(), eps)],
            };
            let t_b = 2.0 * ((rho + FRAC_PI_2.sqrt()) / eps).ln();
            let sched = TauSchedule::arithmetic(0.0, 0.05, (1.5 * t_b / 0.05) as usize)?;
            let family = RegionFamily::constant(vec![0.0], n_eps)?;
            let cfg = DissipativityConfig { tol: 0.0, ..DissipativityConfig::default() };
            let rep = dissipativity_classify(&heat, &family, std::slice::from_ref(&b), &[0.0], &sched, &cfg)?;
            let elapsed = rep.entering_times[0].elapsed.ok_or("never entered N_eps")?;
            ensure!(elapsed <= t_b, "rho={rho} eps={eps}: entering {elapsed} > t_B {t_b}");
            entering.push(elapsed);
        }
    }

    // (c)
    let a = heat_attractor(&heat)?;
    for set in a.sets() {
        ensure!(set.len() == 2, "attractor has {} clusters", set.len());
        let d = sm.hausdorff(set, &heat.attractor_points())?;
        ensure!(d <= 1e-6, "attractor is {d} from {{0,-v1}}");
    }

    // (d)
    let pair = NonautonomousSet::constant(vec![0.0, 1.0], &heat.attractor_points())?;
    let inv = invariance_check(&heat, &pair, &[(0.0, 1.0)], 1e-6, one())?;
    let res = inv.entries[0].negative_residual;
    let res_oracle = (1.0 - (-1.0f64).exp()) * v1;
    ensure!(!inv.negatively_invariant, "{{0,-v1}} reported negatively invariant");
    ensure!(res >= 0.5 * v1 && (res - res_oracle).abs() <= 1e-12, "negative residual {res}");

    // (e)
    let eta =
        EtaSequence::along(StatePoint::zeros(N), &StatePoint::axis(N, 0, 1.0), (10..40).map(|j| f64::powi(2.0, -j)));
    let out = closedness_probe(&heat, 0.0, 1.0, &eta, 1e-6, 1e-6, one())?;
    let gap = out.witness().ok_or("closedness inconclusive")?.gap;
    ensure!(out.is_violation() && (gap - res_oracle).abs() <= 1e-6, "closedness gap {gap}, expected {res_oracle}");
    Ok(format!("alpha laws to 1e-10, entering {entering:.2?} <= t_B, two clusters, residual {res:.4}, gap {gap:.6}"))
}

fn heat_test_sets(n: usize) -> Result<Vec<SampledSet>, Box<dyn Error>> {
    Ok(vec![
        sets::ball(&StatePoint::zeros(n), 1.5, 30, Metric::SineModes, 21)?,
        sets::axis_sphere(&StatePoint::zeros(n), 1.0, Metric::SineModes)?,
    ])
}

fn heat_attractor(heat: &HeatSwitch) -> Result<NonautonomousSet, Box<dyn Error>> {
    let n = heat.modes();
    let b = sets::ball(&StatePoint::zeros(n), 2.0, 40, Metric::SineModes, 5)?
        .union(&SampledSet::singleton(StatePoint::axis(n, 0, -1.0), "-v1"))?;
    let times = [-1.0, 0.0];
    let b0 = NonautonomousSet::constant(times.to_vec(), &b)?;
    let cfg = AttractorConfig { omega: OmegaConfig::with_eps(1e-3), tol: 1e-6, test_sets: heat_test_sets(n)? };
    Ok(attractor_construct(heat, &b0, &times, &TauSchedule::default(), &cfg)?.attractor)
}

fn inclusion_certificates() -> Outcome {
    let nl = Nonlinearity::heaviside();
    let forcing = Forcing::from_spec(&ForcingSpec::Pulsating { amplitude: 1.0 })?;
    let sm = Metric::SineModes;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    // (a)
    let u0 = pt(vec![1.0, -0.5, 0.25, 0.1, 0.0, -0.2, 0.05, 0.0]);
    let mut res = Vec::new();
    for dt in [2e-3, 1e-3] {
        let cfg = SolverConfig { dt, mollifier_index: 8, ..SolverConfig::new(8) };
        let traj = solve_trajectory(&u0, 0.0, 0.5, &cfg, &nl, &forcing)?;
        res.push(weak_form_residual(&traj, &cfg, &nl, &forcing)?);
    }
    let ratio = res[0] / res[1];
    ensure!((ratio - 2.0).abs() <= 0.3, "residual ratio {ratio}");

    // (b)
    let mut margin = f64::INFINITY;
    for _ in 0..20 {
        let u0 = pt((0..8).map(|_| rng.gen_range(-1.5..1.5)).collect());
        let t0 = rng.gen_range(-2.0..2.0);
        for n_moll in [0, 16] {
            let cfg = SolverConfig { mollifier_index: n_moll, ..SolverConfig::new(8) };
            let traj = solve_trajectory(&u0, t0, t0 + 1.0, &cfg, &nl, &forcing)?;
            let u0_sq = h_norm(u0.coords()).powi(2);
            for (t, n) in traj.times.iter().zip(&traj.norms) {
                margin = margin.min(gronwall_bound(&nl, n_moll, &forcing, t0, u0_sq, *t) - n * n);
            }
        }
    }
    ensure!(margin > 0.0, "Gronwall margin {margin}");

    // (c)
    let design = EnsembleDesign::default();
    let p = InclusionProcess::new(SolverConfig::new(8), nl.clone(), forcing.clone())?.with_design(design.clone());
    let cert = energy_certificate_mollified(&nl, &forcing, design.finest_width_index(&p.cfg))?;
    let e = sets::ball(&StatePoint::zeros(8), 2.0, 3, sm, 11)?;
    let e_norm = sm.set_norm(&e);
    let mut decay_margin = f64::INFINITY;
    let mut worst_ratio: f64 = 0.0;
    for t in [1.0, 2.5] {
        let tau = cert.tau_bar(t, e_norm);
        for x in e.iter() {
            let u0_sq = sm.norm(x).powi(2);
            for i in 0..32 {
                let traj = p.branch_trajectory(t, tau, x, i, 17)?;
                for (s, n) in traj.times.iter().zip(&traj.norms) {
                    decay_margin = decay_margin.min(cert.decay_bound(tau, u0_sq, *s) - n * n);
                }
                worst_ratio = worst_ratio.max(traj.norms.last().unwrap() / cert.r(t));
            }
        }
    }
    ensure!(decay_margin >= 0.0, "decay bound violated by {}", -decay_margin);
    ensure!(worst_ratio <= 1.0, "endpoint norm exceeds R(t) by factor {worst_ratio}");

    // (d)
    let p12 = InclusionProcess::new(SolverConfig::new(12), nl.clone(), forcing.clone())?.with_design(design.clone());
    let cert12 = energy_certificate_mollified(&nl, &forcing, design.finest_width_index(&p12.cfg))?;
    let e12 = sets::ball(&StatePoint::zeros(12), 2.0, 3, sm, 12)?;
    let e12_norm = sm.set_norm(&e12);
    let t = 3.0;
    let start = cert12.tau_bar(t - 2.0, e12_norm);
    let mut ends = Vec::new();
    for x in e12.iter() {
        for i in 0..32 {
            ends.push(p12.branch_endpoint(t, start, x, i, 17)?);
        }
    }
    let ends = SampledSet::new(ends, "endpoints")?;
    let mut tails = Vec::new();
    for m in [2, 4, 8] {
        let fc = flattening_certificate(&cert12, &ends, start, e12_norm, m, t, 1.0, 0.1)?;
        ensure!(fc.holds, "m={m}: tail {} above bound {}", fc.measured_tail, fc.bound);
        tails.push((fc.measured_tail, fc.bound));
    }

    // (e)
    let probes: Vec<AxiomProbe> = [(2.0, 1.0, 0.0), (1.5, 0.5, -0.5)]
        .iter()
        .map(|&(t, s, tau)| AxiomProbe { t, s, tau, x: pt(vec![1.0, 0.5, 0.0, -0.25, 0.1, 0.0, 0.0, 0.3]) })
        .collect();
    let ax = check_axioms(&p, &probes, 1e-3, Sampling::new(4, 3), 2)?;
    let sub = ax.entries.iter().map(|e| e.sub_composition_residual).fold(0.0, f64::max);
    ensure!(ax.identity_ok, "identity not exact");
    ensure!(sub <= 1e-3, "sub-composition residual {sub}");
    Ok(format!(
        "residual ratio {ratio:.3}, Gronwall margin {margin:.3}, decay margin {decay_margin:.3e}, max |u|/R {worst_ratio:.3}, \
         tails/bounds {}, sub-composition {sub:.1e}",
        tails.iter().map(|(a, b)| format!("{a:.1e}/{b:.1e}")).collect::<Vec<_>>().join(" ")
    ))
}

/// `ω(t,B)` of a finite relation by iterating reachable sets as bitmasks
/// until a mask repeats; the limit is the union over the cycle.
fn omega_oracle(succ: &[Vec<usize>], start: u64) -> (u64, usize, usize) {
    let step = |mask: u64| -> u64 {
        (0..succ.len()).filter(|i| mask >> i & 1 == 1).fold(0u64, |acc, i| succ[i].iter().fold(acc, |a, &j| a | 1 << j))
    };
    let mut seen = HashMap::new();
    let mut masks = Vec::new();
    let mut mask = start;
    loop {
        if let Some(&first) = seen.get(&mask) {
            let omega = masks[first..].iter().fold(0u64, |a, m| a | m);
            return (omega, first, masks.len() - first);
        }
        seen.insert(mask, masks.len());
        masks.push(mask);
        mask = step(mask);
    }
}

fn omega_equivalence() -> Outcome {
    let sched = TauSchedule::arithmetic(1.0, 1.0, 512)?;
    let cfg = OmegaConfig::with_eps(0.5);
    let mut sizes = Vec::new();
    for seed in 0..50u64 {
        let max_out = 1 + (seed % 3) as usize;
        let p = FiniteRelationProcess::random(64, max_out, seed)?;
        let starts = [seed % 64, (seed * 7 + 3) % 64, (seed * 13 + 5) % 64];
        let b = SampledSet::from_coords(starts.iter().map(|&s| vec![s as f64]).collect(), "B")?;
        let (oracle, pre, period) = omega_oracle(p.successors(), starts.iter().fold(0u64, |a, &s| a | 1 << s));
        let om = omega_limit(&p, 0.0, &b, &sched, &cfg)?;
        let got = om.limit_set.map_or(0u64, |l| l.iter().fold(0u64, |a, x| a | 1 << x.coords()[0] as u64));
        ensure!(got == oracle, "seed {seed}: omega {got:#x} vs oracle {oracle:#x} (preperiod {pre}, period {period})");
        sizes.push(oracle.count_ones());
    }
    Ok(format!("50/50 instances match; limit sizes {}..={}", sizes.iter().min().unwrap(), sizes.iter().max().unwrap()))
}

fn minimality() -> Outcome {
    const N: usize = 8;
    let heat = HeatSwitch::new(N)?;
    let sm = Metric::SineModes;
    let a = heat_attractor(&heat)?;
    let times = a.times().to_vec();
    let zero = StatePoint::zeros(N);
    let mv1 = StatePoint::axis(N, 0, -1.0);
    let near = |p: &StatePoint, k: usize, d: f64| {
        let mut c = p.coords().to_vec();
        c[k] += d;
        pt(c)
    };
    let extra = sets::ball(&zero, 3.0, 10, sm, 44)?;
    let candidates: Vec<Vec<StatePoint>> = vec![
        vec![zero.clone(), mv1.clone()],
        [vec![zero.clone(), mv1.clone()], extra.points().to_vec()].concat(),
        vec![near(&zero, 1, 1e-9), near(&mv1, 0, -1e-9)],
        vec![zero.clone()],
        vec![mv1.clone()],
        vec![near(&zero, 1, 1e-3), mv1.clone()],
        vec![zero.clone(), near(&mv1, 2, 1e-3)],
        extra.points().to_vec(),
        [vec![zero.clone()], extra.points().to_vec()].concat(),
    ];
    let tests = heat_test_sets(N)?;
    let sched = TauSchedule::arithmetic(1.0, 1.0, 30)?;
    let (mut passed, mut failed) = (0, 0);
    for (i, c) in candidates.into_iter().enumerate() {
        let c = NonautonomousSet::constant(times.clone(), &SampledSet::new(c, format!("C{i}"))?)?;
        let mut attracts = true;
        for &t in &times {
            for e in &tests {
                attracts &= attraction_test(&heat, &c, e, t, &sched, 1e-6, one())?.verdict;
            }
        }
        if attracts {
            passed += 1;
            for (t, gap) in minimality_gaps(&heat, &a, &c)? {
                ensure!(gap <= 1e-6, "competitor C{i} attracts but misses A({t}) by {gap}");
            }
        } else {
            failed += 1;
        }
    }
    ensure!(passed >= 2 && failed >= 2, "degenerate competitor pool ({passed} pass, {failed} fail)");
    let closure = Region::ball(zero, 2.0);
    for set in a.sets() {
        ensure!(closure.set_excess(sm, set)? == 0.0, "A(t) leaves the closure of B0(t)");
    }
    Ok(format!("{passed} attracting competitors contain A(t) to 1e-6, {failed} rejected; A(t) inside closure of B0"))
}

fn determinism() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut paths: Vec<_> = std::fs::read_dir(&dir)?.filter_map(|e| e.ok().map(|e| e.path())).collect();
    paths.retain(|p| p.extension().is_some_and(|x| x == "json"));
    paths.sort();
    ensure!(!paths.is_empty(), "no shipped scenarios in {}", dir.display());
    let tmp = tempfile::tempdir()?;
    for path in &paths {
        let mut reports = Vec::new();
        for run in 0..3 {
            let out = tmp.path().join(format!("{}-{run}", path.file_stem().unwrap().to_string_lossy()));
            let outcome = runner::run(path, Some(&out), None)?;
            ensure!(outcome.report.all_matched, "{} has mismatched diagnostics", path.display());
            reports.push(std::fs::read(out.join("report.json"))?);
        }
        ensure!(reports.windows(2).all(|w| w[0] == w[1]), "{} report.json differs across runs", path.display());
    }
    Ok(format!("{} scenarios x 3 runs, byte-identical reports", paths.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("drift dichotomy", drift_dichotomy),
        ("shift counterexample", shift_counterexample),
        ("planar ODE verdicts", planar_quintuple),
        ("heat-switch system", heat_switch),
        ("inclusion solver certificates", inclusion_certificates),
        ("omega-limit oracle equivalence", omega_equivalence),
        ("attractor minimality", minimality),
        ("report determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name} ({secs:.2}s): {detail}", i + 1),
            Err(e) => {
                failures += 1;
                println!("criterion {} FAIL {name} ({secs:.2}s): {e}", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
