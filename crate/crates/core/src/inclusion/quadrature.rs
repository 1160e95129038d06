//! Gauss–Legendre rules.

/// Positive nodes and weights of the 4-point rule on [-1, 1].
const GL4: [(f64, f64); 2] =
    [(0.339_981_043_584_856_3, 0.652_145_154_862_546_1), (0.861_136_311_594_052_6, 0.347_854_845_137_453_9)];

/// Positive nodes and weights of the 8-point rule on [-1, 1].
pub(crate) const GL8: [(f64, f64); 4] = [
    (0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_3),
];

/// Composite 4-point Gauss–Legendre rule on `[a, b]` with `panels` panels.
pub fn composite_gl4(a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(4 * panels);
    let mut weights = Vec::with_capacity(4 * panels);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        for &(x, w) in GL4.iter().rev() {
            nodes.push(mid - half * x);
            weights.push(half * w);
        }
        for &(x, w) in &GL4 {
            nodes.push(mid + half * x);
            weights.push(half * w);
        }
    }
    (nodes, weights)
}

/// `∫_a^b f` by the composite 8-point rule with `panels` panels.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        for &(x, w) in &GL8 {
            acc += half * w * (f(mid - half * x) + f(mid + half * x));
        }
    }
    acc
}
