use serde::Serialize;
use serde_json::{json, Map, Value};

use super::scenario::*;
use super::{RunError, System};
use crate::inclusion::energy_certificate_mollified;
use crate::metric::{Metric, NonautonomousSet, Region, RegionFamily, SampledSet, StatePoint};
use crate::process::*;
use crate::report::{Curve, Series};

/// Result of one diagnostic.
#[derive(Clone, Debug, Serialize)]
pub struct DiagnosticOutcome {
    pub index: usize,
    pub kind: &'static str,
    pub verdicts: Map<String, Value>,
    pub expected: Value,
    pub matched: bool,
    pub details: Value,
    #[serde(skip)]
    pub curves: Vec<Curve>,
}

pub(crate) struct Context<'a> {
    pub system: &'a System,
    pub sched: TauSchedule,
    pub sampling: Sampling,
    pub seed: u64,
}

impl Context<'_> {
    fn p(&self) -> &dyn Process {
        self.system.process()
    }

    fn metric(&self) -> Metric {
        self.p().metric()
    }

    fn set(&self, s: &SetSpec) -> Result<SampledSet, RunError> {
        s.build(self.metric(), self.seed).map_err(|e| RunError::Schema(format!("set: {e}")))
    }

    fn family(&self, f: &FamilySpec) -> Result<NonautonomousSet, RunError> {
        f.build(self.metric(), self.seed).map_err(|e| RunError::Schema(format!("family: {e}")))
    }
}

fn point(c: &[f64]) -> Result<StatePoint, RunError> {
    StatePoint::new(c.to_vec()).map_err(|e| RunError::Schema(format!("point: {e}")))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("diagnostic output serializes")
}

fn sys(e: impl std::fmt::Display) -> RunError {
    RunError::System(e.to_string())
}

struct Partial {
    verdicts: Map<String, Value>,
    details: Value,
    curves: Vec<Curve>,
}

fn verdicts(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

pub(crate) fn execute(ctx: &Context, index: usize, spec: &DiagnosticSpec) -> Result<DiagnosticOutcome, RunError> {
    let kind = spec.kind();
    let name = |suffix: &str| format!("{index:02}-{kind}-{suffix}");
    let (partial, expected) = match spec {
        DiagnosticSpec::CheckAxioms(d) => (axioms(ctx, d, &name)?, to_value(&d.expected)),
        DiagnosticSpec::OmegaLimit(d) => (omega(ctx, d, &name)?, to_value(&d.expected)),
        DiagnosticSpec::Attraction(d) => (attraction(ctx, d, &name)?, to_value(&d.expected)),
        DiagnosticSpec::Dissipativity(d) => (dissipativity(ctx, d, &name)?, to_value(&d.expected)),
        DiagnosticSpec::PointDissipativity(d) => (point_dissipativity(ctx, d, &name)?, to_value(&d.expected)),
        DiagnosticSpec::Flattening(d) => (flattening(ctx, d, &name)?, to_value(&d.expected)),
        DiagnosticSpec::Closedness(d) => (closedness(ctx, d, &name)?, to_value(&d.expected)),
        DiagnosticSpec::Invariance(d) => (invariance(ctx, d, &name)?, to_value(&d.expected)),
        DiagnosticSpec::Attractor(d) => (attractor(ctx, d, &name)?, to_value(&d.expected)),
        DiagnosticSpec::KuratowskiProxy(d) => (proxy(ctx, d, &name)?, to_value(&d.expected)),
        DiagnosticSpec::EnergyAbsorption(d) => (energy(ctx, d, &name)?, to_value(&d.expected)),
    };
    let matched = expected.as_object().is_none_or(|exp| exp.iter().all(|(k, v)| partial.verdicts.get(k) == Some(v)));
    Ok(DiagnosticOutcome {
        index,
        kind,
        verdicts: partial.verdicts,
        expected,
        matched,
        details: partial.details,
        curves: partial.curves,
    })
}

fn axioms(ctx: &Context, d: &AxiomsSpec, name: &dyn Fn(&str) -> String) -> Result<Partial, RunError> {
    let probes = d
        .probes
        .iter()
        .map(|p| Ok(AxiomProbe { t: p.t, s: p.s, tau: p.tau, x: point(&p.x)? }))
        .collect::<Result<Vec<_>, RunError>>()?;
    let r = check_axioms(ctx.p(), &probes, d.tol, ctx.sampling, d.oracle_factor).map_err(sys)?;
    let idx = |f: fn(&AxiomEntry) -> f64| r.entries.iter().enumerate().map(|(i, e)| (i as f64, f(e))).collect();
    let curve = Curve::new(name("residuals"), "probe", "residual")
        .with_series(Series::new("identity", idx(|e| e.identity_residual)))
        .with_series(Series::new("sub-composition", idx(|e| e.sub_composition_residual)))
        .with_series(Series::new("reverse", idx(|e| e.reverse_residual)));
    Ok(Partial {
        verdicts: verdicts(vec![
            ("identity_ok", json!(r.identity_ok)),
            ("sub_composition_ok", json!(r.sub_composition_ok)),
            ("strict_ok", json!(r.strict_ok)),
        ]),
        details: to_value(&r),
        curves: vec![curve],
    })
}

fn omega(ctx: &Context, d: &OmegaSpec, name: &dyn Fn(&str) -> String) -> Result<Partial, RunError> {
    let b = ctx.set(&d.set)?;
    let defaults = OmegaConfig::default();
    let cfg = OmegaConfig {
        cluster_eps: d.cluster_eps,
        min_hits: d.min_hits.unwrap_or(defaults.min_hits),
        tol: d.tol.unwrap_or(defaults.tol),
        growth_window: d.growth_window.unwrap_or(defaults.growth_window),
        sampling: ctx.sampling,
    };
    let r = omega_limit(ctx.p(), d.t, &b, &ctx.sched, &cfg).map_err(sys)?;
    let size = r.limit_set.as_ref().map_or(0, SampledSet::len);
    let curves = vec![
        Curve::new(name("attraction"), "tau", "dist to limit set")
            .with_series(Series::new(format!("t={}", d.t), r.attraction_curve.clone())),
        Curve::new(name("late-union-diameter"), "late index", "diameter").with_series(Series::new(
            "late union",
            r.late_union_diameters.iter().enumerate().map(|(i, v)| (i as f64, *v)).collect(),
        )),
    ];
    Ok(Partial {
        verdicts: verdicts(vec![("converged", json!(r.converged)), ("limit_size", json!(size))]),
        details: to_value(&r),
        curves,
    })
}

fn attraction(ctx: &Context, d: &AttractionSpec, name: &dyn Fn(&str) -> String) -> Result<Partial, RunError> {
    let target = ctx.set(&d.target)?;
    let k = NonautonomousSet::constant(vec![d.t], &target).map_err(|e| RunError::Schema(e.to_string()))?;
    let b = ctx.set(&d.set)?;
    let r = attraction_test(ctx.p(), &k, &b, d.t, &ctx.sched, d.tol, ctx.sampling).map_err(sys)?;
    let curve = Curve::new(name("curve"), "tau", "dist to target").with_series(Series::new(b.label(), r.curve.clone()));
    Ok(Partial {
        verdicts: verdicts(vec![("attracting", json!(r.verdict))]),
        details: to_value(&r),
        curves: vec![curve],
    })
}

fn dissipativity(ctx: &Context, d: &DissipativitySpec, name: &dyn Fn(&str) -> String) -> Result<Partial, RunError> {
    let schema = |e: crate::metric::MetricError| RunError::Schema(format!("candidate: {e}"));
    let family = match &d.candidate {
        CandidateSpec::Constant { region } => {
            RegionFamily::constant(d.times.clone(), region.clone()).map_err(schema)?
        }
        CandidateSpec::Timed { regions } => RegionFamily::new(d.times.clone(), regions.clone()).map_err(schema)?,
        CandidateSpec::EnergyBall => {
            let System::Inclusion(p) = ctx.system else {
                return Err(RunError::Schema("energy-ball candidates need the inclusion system".into()));
            };
            let cert = energy_certificate_mollified(&p.nonlinearity, &p.forcing, p.design.finest_width_index(&p.cfg))
                .map_err(sys)?;
            let regions = d.times.iter().map(|&t| Region::ball(StatePoint::zeros(p.cfg.modes), cert.r(t))).collect();
            RegionFamily::new(d.times.clone(), regions).map_err(schema)?
        }
    };
    let tests = d.test_sets.iter().map(|s| ctx.set(s)).collect::<Result<Vec<_>, _>>()?;
    let defaults = DissipativityConfig::default();
    let cfg = DissipativityConfig {
        tol: d.tol,
        diameter_cap: d.diameter_cap.unwrap_or(defaults.diameter_cap),
        point_horizon_cap: d.point_horizon_cap,
        sampling: ctx.sampling,
    };
    let r = dissipativity_classify(ctx.p(), &family, &tests, &d.times, &ctx.sched, &cfg).map_err(sys)?;
    let mut curve = Curve::new(name("excess"), "tau", "worst excess");
    for &t in &d.times {
        for s in &tests {
            let pts = r
                .witnesses
                .iter()
                .filter(|w| w.t == t && w.set_label == s.label())
                .map(|w| (w.tau, w.excess))
                .collect();
            curve = curve.with_series(Series::new(format!("{} t={t}", s.label()), pts));
        }
    }
    Ok(Partial {
        verdicts: verdicts(vec![
            ("absorbing", json!(r.absorbing)),
            ("monotone", json!(r.monotone)),
            ("backward_bounded", json!(r.backward_bounded)),
            ("point_dissipative", json!(r.point_dissipative)),
        ]),
        details: to_value(&r),
        curves: vec![curve],
    })
}

fn point_dissipativity(ctx: &Context, d: &PointSpec, name: &dyn Fn(&str) -> String) -> Result<Partial, RunError> {
    let pts = ctx.set(&d.points)?;
    let r = point_dissipativity_test(ctx.p(), &d.region, pts.points(), &d.horizon, d.tol, d.refine, ctx.sampling)
        .map_err(sys)?;
    let entered = r.entries.iter().enumerate().filter_map(|(i, e)| e.entering.map(|v| (i as f64, v))).collect();
    let curve = Curve::new(name("entering"), "point", "entering time").with_series(Series::new("entered", entered));
    Ok(Partial {
        verdicts: verdicts(vec![("all_entered", json!(r.all_entered))]),
        details: to_value(&r),
        curves: vec![curve],
    })
}

fn flattening(ctx: &Context, d: &FlatteningSpec, name: &dyn Fn(&str) -> String) -> Result<Partial, RunError> {
    let b = ctx.set(&d.set)?;
    let r = flattening_test(ctx.p(), &b, d.t, d.m, &ctx.sched, ctx.sampling).map_err(sys)?;
    let curve = Curve::new(name("tail"), "tau", format!("sup tail beyond m={}", d.m))
        .with_series(Series::new(b.label(), r.per_tau.clone()));
    Ok(Partial {
        verdicts: verdicts(vec![("flat", json!(r.sup_tail <= d.threshold))]),
        details: to_value(&r),
        curves: vec![curve],
    })
}

fn closedness(ctx: &Context, d: &ClosednessSpec, name: &dyn Fn(&str) -> String) -> Result<Partial, RunError> {
    let eta = EtaSequence::along(point(&d.limit)?, &point(&d.direction)?, d.scales.iter().copied());
    let r = closedness_probe(ctx.p(), d.t, d.t_star, &eta, d.tol, d.conv_tol, ctx.sampling).map_err(sys)?;
    let mut curves = Vec::new();
    if let Some(w) = r.witness() {
        let m = ctx.metric();
        let dist = |seq: &[StatePoint], lim: &StatePoint| -> Vec<(f64, f64)> {
            seq.iter().enumerate().map(|(i, x)| (i as f64, m.distance(x, lim).unwrap_or(f64::NAN))).collect()
        };
        curves.push(
            Curve::new(name("sequences"), "n", "distance to limit")
                .with_series(Series::new("eta", dist(&w.eta_seq, &w.limit_eta)))
                .with_series(Series::new("xi", dist(&w.xi_seq, &w.limit_xi))),
        );
    }
    let inconclusive = matches!(r, ClosednessOutcome::Inconclusive { .. });
    Ok(Partial {
        verdicts: verdicts(vec![("violation", json!(r.is_violation())), ("inconclusive", json!(inconclusive))]),
        details: to_value(&r),
        curves,
    })
}

fn invariance(ctx: &Context, d: &InvarianceSpec, name: &dyn Fn(&str) -> String) -> Result<Partial, RunError> {
    let a = ctx.family(&d.family)?;
    let r = invariance_check(ctx.p(), &a, &d.pairs, d.tol, ctx.sampling).map_err(sys)?;
    let idx = |f: fn(&InvarianceEntry) -> f64| r.entries.iter().enumerate().map(|(i, e)| (i as f64, f(e))).collect();
    let curve = Curve::new(name("residuals"), "pair", "residual")
        .with_series(Series::new("negative", idx(|e| e.negative_residual)))
        .with_series(Series::new("full", idx(|e| e.full_residual)));
    Ok(Partial {
        verdicts: verdicts(vec![
            ("negatively_invariant", json!(r.negatively_invariant)),
            ("invariant", json!(r.invariant)),
        ]),
        details: to_value(&r),
        curves: vec![curve],
    })
}

fn attractor(ctx: &Context, d: &AttractorSpec, name: &dyn Fn(&str) -> String) -> Result<Partial, RunError> {
    let b0 = ctx.family(&d.b0)?;
    let test_sets = d.test_sets.iter().map(|s| ctx.set(s)).collect::<Result<Vec<_>, _>>()?;
    let cfg = AttractorConfig {
        omega: OmegaConfig { sampling: ctx.sampling, ..OmegaConfig::with_eps(d.cluster_eps) },
        tol: d.tol,
        test_sets,
    };
    let r = attractor_construct(ctx.p(), &b0, &d.times, &ctx.sched, &cfg).map_err(sys)?;
    let sizes: Vec<usize> = r.attractor.sets().iter().map(SampledSet::len).collect();
    let mut curve = Curve::new(name("attraction"), "tau", "dist to A(t)");
    for o in &r.omega {
        curve = curve.with_series(Series::new(format!("B0, t={}", o.t), o.attraction_curve.clone()));
    }
    for a in &r.attraction {
        curve = curve.with_series(Series::new(format!("{}, t={}", a.set_label, a.t), a.curve.clone()));
    }
    Ok(Partial {
        verdicts: verdicts(vec![
            ("limit_sizes", json!(sizes)),
            ("inside_b0", json!(r.inside_b0 <= d.tol)),
            ("attracting", json!(r.attraction.iter().all(|a| a.verdict))),
        ]),
        details: to_value(&r),
        curves: vec![curve],
    })
}

fn proxy(ctx: &Context, d: &ProxySpec, name: &dyn Fn(&str) -> String) -> Result<Partial, RunError> {
    let b = ctx.set(&d.set)?;
    let m = ctx.metric();
    let mut union: Option<SampledSet> = None;
    let mut growth = Vec::new();
    let mut single = Vec::new();
    for (&off, tau) in ctx.sched.offsets().iter().zip(ctx.sched.taus(d.t)) {
        let img = ctx.p().evolve(d.t, tau, &b, ctx.sampling).map_err(sys)?;
        single.push((off, m.kuratowski_proxy(&img, d.budget).map_err(sys)?));
        let u = match union {
            Some(u) => u.union(&img).map_err(sys)?,
            None => img,
        };
        growth.push((off, m.kuratowski_proxy(&u, d.budget).map_err(sys)?));
        union = Some(u);
    }
    let value = growth.last().map_or(0.0, |g| g.1);
    let curve = Curve::new(name("growth"), "t - tau", "covering proxy")
        .with_series(Series::new("backward union", growth.clone()))
        .with_series(Series::new("single image", single.clone()));
    Ok(Partial {
        verdicts: verdicts(vec![("compact", json!(value <= d.tol))]),
        details: json!({ "budget": d.budget, "proxy": value, "union_growth": growth, "single_images": single }),
        curves: vec![curve],
    })
}

fn energy(ctx: &Context, d: &EnergySpec, name: &dyn Fn(&str) -> String) -> Result<Partial, RunError> {
    let System::Inclusion(p) = ctx.system else {
        return Err(RunError::Schema("energy-absorption needs the inclusion system".into()));
    };
    let cert =
        energy_certificate_mollified(&p.nonlinearity, &p.forcing, p.design.finest_width_index(&p.cfg)).map_err(sys)?;
    let e = ctx.set(&d.set)?;
    let m = ctx.metric();
    let e_norm = m.set_norm(&e);
    let mut absorbed = true;
    let mut decay_ok = true;
    let mut rows = Vec::new();
    let mut worst_decay_margin = f64::INFINITY;
    for &t in &d.times {
        let tau = cert.tau_bar(t, e_norm);
        let mut max_norm = 0.0_f64;
        for x in e.iter() {
            let u0_sq = m.norm(x).powi(2);
            for i in 0..ctx.sampling.branch_budget.max(1) {
                let traj = p.branch_trajectory(t, tau, x, i, ctx.sampling.rng_seed).map_err(sys)?;
                for (s, n) in traj.times.iter().zip(&traj.norms) {
                    let margin = cert.decay_bound(tau, u0_sq, *s) - n * n;
                    worst_decay_margin = worst_decay_margin.min(margin);
                }
                max_norm = max_norm.max(*traj.norms.last().expect("nonempty trajectory"));
            }
        }
        let r = cert.r(t);
        absorbed &= max_norm <= r;
        rows.push(json!({ "t": t, "tau_bar": tau, "max_norm": max_norm, "radius": r }));
    }
    decay_ok &= worst_decay_margin >= 0.0;
    let pts = |key: &str| -> Vec<(f64, f64)> {
        rows.iter().map(|r| (r["t"].as_f64().unwrap_or(f64::NAN), r[key].as_f64().unwrap_or(f64::NAN))).collect()
    };
    let curve = Curve::new(name("absorption"), "t", "H norm")
        .with_series(Series::new("max image norm", pts("max_norm")))
        .with_series(Series::new("R(t)", pts("radius")));
    Ok(Partial {
        verdicts: verdicts(vec![("absorbed", json!(absorbed)), ("decay_bound_holds", json!(decay_ok))]),
        details: json!({ "certificate": cert, "set_norm": e_norm, "times": rows, "worst_decay_margin": worst_decay_margin }),
        curves: vec![curve],
    })
}
