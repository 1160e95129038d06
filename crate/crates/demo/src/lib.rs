//! Browser bindings for three small views: the heat-switch collapse, the
//! planar flow on a grid and a farthest-first cover of clicked points.

use pullback_lab::metric::{Metric, SampledSet, StatePoint};
use pullback_lab::sets;
use pullback_lab::systems::{heat_switch_evolve, planar_evolve, HeatSwitch};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const HEAT_MODES: usize = 8;

/// `(t, α(t), dist to {0, −v¹})` along the heat-switch trajectory from
/// `α(0) = alpha0` with a second-mode bump `a2`.
pub fn heat_collapse(alpha0: f64, a2: f64, t_max: f64, samples: usize) -> Result<Vec<[f64; 3]>, String> {
    if t_max.is_nan() || t_max <= 0.0 || samples < 2 {
        return Err("need t_max > 0 and at least two samples".into());
    }
    let mut c = vec![0.0; HEAT_MODES];
    c[0] = alpha0;
    c[1] = a2;
    let u0 = StatePoint::new(c).map_err(|e| e.to_string())?;
    let target = HeatSwitch::new(HEAT_MODES).map_err(|e| e.to_string())?.attractor_points();
    (0..samples)
        .map(|i| {
            let t = t_max * i as f64 / (samples - 1) as f64;
            let u = heat_switch_evolve(t, &u0).map_err(|e| e.to_string())?;
            let d = Metric::SineModes.dist_to_set(&u, &target).map_err(|e| e.to_string())?;
            Ok([t, u.coords()[0], d])
        })
        .collect()
}

/// Images at elapsed time `t` of an `nx × ny` grid on `[0,1] × [0,m]`.
pub fn planar_grid(m: f64, nx: usize, ny: usize, t: f64) -> Result<Vec<[f64; 4]>, String> {
    let grid = sets::grid(&[0.0, 0.0], &[1.0, m], &[nx, ny]).map_err(|e| e.to_string())?;
    grid.iter()
        .map(|z| {
            let img = planar_evolve(t, z).map_err(|e| e.to_string())?;
            Ok([z.coords()[0], z.coords()[1], img.coords()[0], img.coords()[1]])
        })
        .collect()
}

/// Farthest-first cover of planar points with `budget` centers.
pub fn cover(points: &[[f64; 2]], budget: usize) -> Result<(Vec<[f64; 2]>, f64), String> {
    if points.is_empty() {
        return Ok((Vec::new(), 0.0));
    }
    let set =
        SampledSet::from_coords(points.iter().map(|p| p.to_vec()).collect(), "clicks").map_err(|e| e.to_string())?;
    let radius = Metric::Euclidean.kuratowski_proxy(&set, budget.max(1)).map_err(|e| e.to_string())?;
    // a cover at twice the proxy radius reproduces the budgeted centers
    let centers = if radius > 0.0 {
        Metric::Euclidean.greedy_cover(&set, 2.0 * radius).map_err(|e| e.to_string())?.centers
    } else {
        let mut uniq = set.into_points();
        uniq.sort_by(|a, b| a.lex_cmp(b));
        uniq.dedup();
        uniq
    };
    Ok((centers.iter().map(|c| [c.coords()[0], c.coords()[1]]).collect(), radius))
}

fn to_js(v: Result<Value, String>) -> Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = heatCollapse)]
pub fn heat_collapse_js(alpha0: f64, a2: f64, t_max: f64, samples: usize) -> Result<String, JsError> {
    to_js(heat_collapse(alpha0, a2, t_max, samples).map(|rows| json!(rows)))
}

#[wasm_bindgen(js_name = planarGrid)]
pub fn planar_grid_js(m: f64, nx: usize, ny: usize, t: f64) -> Result<String, JsError> {
    to_js(planar_grid(m, nx, ny, t).map(|rows| json!(rows)))
}

/// `points` is a flat `[x0, y0, x1, y1, ...]` array.
#[wasm_bindgen(js_name = greedyCover)]
pub fn greedy_cover_js(points: &[f64], budget: usize) -> Result<String, JsError> {
    let pts: Vec<[f64; 2]> = points.chunks_exact(2).map(|c| [c[0], c[1]]).collect();
    to_js(cover(&pts, budget).map(|(centers, radius)| json!({ "centers": centers, "radius": radius })))
}
