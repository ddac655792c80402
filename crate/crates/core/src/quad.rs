//! One-dimensional Gauss-Legendre rules and composite-panel helpers.
//!
//! Everything downstream (area rules over domains, contour rules, time
//! quadrature for the control kernels) is assembled from these pieces.

/// Nodes and weights of a quadrature rule on an interval.
#[derive(Debug, Clone)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1d {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Affine image of the rule on `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> Rule1d {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Rule1d {
            nodes: self.nodes.iter().map(|x| mid + half * x).collect(),
            weights: self.weights.iter().map(|w| half * w).collect(),
        }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gauss-Legendre rule of order `n` on `[-1, 1]`.
///
/// Newton iteration on the Legendre recurrence, seeded with the Chebyshev
/// angle approximation; exact for polynomials of degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> Rule1d {
    assert!(n >= 1, "rule order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess for the i-th root (descending).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_with_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    Rule1d { nodes, weights }
}

/// Value and derivative of the Legendre polynomial `P_n` at `x`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite rule: `panels` equal panels on `[a, b]`, `pts` GL points each.
pub fn composite(a: f64, b: f64, panels: usize, pts: usize) -> Rule1d {
    let base = gauss_legendre(pts);
    let mut nodes = Vec::with_capacity(panels * pts);
    let mut weights = Vec::with_capacity(panels * pts);
    for k in 0..panels {
        let lo = a + (b - a) * k as f64 / panels as f64;
        let hi = a + (b - a) * (k + 1) as f64 / panels as f64;
        let r = base.mapped(lo, hi);
        nodes.extend(r.nodes);
        weights.extend(r.weights);
    }
    Rule1d { nodes, weights }
}

/// Composite rule over explicit panel boundaries.
pub fn composite_on(breaks: &[f64], pts: usize) -> Rule1d {
    let base = gauss_legendre(pts);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let r = base.mapped(w[0], w[1]);
        nodes.extend(r.nodes);
        weights.extend(r.weights);
    }
    Rule1d { nodes, weights }
}

/// Panel boundaries on `[a, b]` geometrically refined toward `b`.
///
/// Widths of the panels adjacent to `b` shrink by factor 2 for `levels`
/// steps; the rest of the interval is split into `base` equal panels.
pub fn geometric_toward(a: f64, b: f64, base: usize, levels: usize) -> Vec<f64> {
    let len = b - a;
    let mut breaks: Vec<f64> = (0..=base)
        .map(|k| a + len * k as f64 / base as f64)
        .collect();
    // subdivide the last panel geometrically
    let last = breaks.pop().unwrap();
    let start = *breaks.last().unwrap();
    let mut off = last - start;
    for _ in 0..levels {
        off *= 0.5;
        breaks.push(last - off);
    }
    breaks.push(last);
    breaks
}

/// Panel boundaries on `[a, b]` refined toward both endpoints.
pub fn geometric_both(a: f64, b: f64, base: usize, levels: usize) -> Vec<f64> {
    let fwd = geometric_toward(a, b, base, levels);
    let bwd: Vec<f64> = geometric_toward(-b, -a, base, levels)
        .into_iter()
        .map(|x| -x)
        .collect();
    let mut all: Vec<f64> = fwd.into_iter().chain(bwd).collect();
    all.sort_by(|p, q| p.partial_cmp(q).unwrap());
    all.dedup_by(|p, q| (*p - *q).abs() < 1e-15 * (b - a).abs().max(1.0));
    all
}
