//! Quadrature grids over domains, contours, intervals and the half-line.
//!
//! A [`GridQuadrature`] is the universal sampled-measure object: complex
//! nodes, strictly positive weights, a measure tag, and (for contour rules)
//! the complex tangent increments needed for `∫ f du` integrals.

use crate::error::{Error, Result};
use crate::geometry::{alpha, dilation_factor, Contour, Domain};
use crate::quad::{self, Rule1d};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

/// Measure carried by a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// Lebesgue measure on an interval.
    Lebesgue1D,
    /// `dt/t` on the positive half-line.
    LogHalfLine,
    /// Planar area measure.
    Area2D,
    /// Arc length along a contour.
    ArcLength,
}

impl Measure {
    pub fn tag(&self) -> &'static str {
        match self {
            Measure::Lebesgue1D => "lebesgue1d",
            Measure::LogHalfLine => "loghalfline",
            Measure::Area2D => "area2d",
            Measure::ArcLength => "arclength",
        }
    }
}

/// Nodes and weights against a tagged measure.
#[derive(Debug, Clone)]
pub struct GridQuadrature {
    pub nodes: Vec<Complex64>,
    pub weights: Vec<f64>,
    pub measure: Measure,
    /// Complex tangent increments `du` (contour rules only).
    pub du: Option<Vec<Complex64>>,
    /// Reported accuracy estimate from a reference integrand.
    pub tol: f64,
}

impl GridQuadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫ f dμ` with the grid's weights.
    pub fn integrate<F: FnMut(Complex64) -> Complex64>(&self, mut f: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| w * f(z))
            .sum()
    }

    pub fn integrate_abs<F: FnMut(Complex64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| w * f(z))
            .sum()
    }

    /// `∫ f(u) du` along a contour rule.
    pub fn integrate_du<F: FnMut(Complex64) -> Complex64>(&self, mut f: F) -> Complex64 {
        let du = self
            .du
            .as_ref()
            .expect("integrate_du requires a contour rule");
        self.nodes
            .iter()
            .zip(du)
            .map(|(&z, &t)| t * f(z))
            .sum()
    }

    fn assert_weights_positive(&self) {
        debug_assert!(self.weights.iter().all(|w| *w > 0.0 && w.is_finite()));
    }

    /// CSV serialization with columns `re, im, weight, tag`.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "re,im,weight,tag")?;
        for (z, w) in self.nodes.iter().zip(&self.weights) {
            writeln!(out, "{},{},{},{}", z.re, z.im, w, self.measure.tag())?;
        }
        Ok(())
    }
}

/// Tensor rule over the (possibly dilated) square in its 45°-rotated frame.
///
/// `D = π/2 + e^{iπ/4}·(-s, s)²` with `s = π/(2√2)`; the rotation is an
/// isometry so area weights transfer unchanged. Panels refine geometrically
/// toward all four corners so that vertex-weighted integrands stay resolved
/// while nodes keep clear of the vertices themselves.
fn square_rule(lam: f64, resolution: usize, corner_levels: usize) -> GridQuadrature {
    let s = lam * FRAC_PI_2 / SQRT_2;
    let breaks = quad::geometric_both(-s, s, resolution.max(1), corner_levels);
    let axis = quad::composite_on(&breaks, 32);
    let rot = Complex64::from_polar(1.0, FRAC_PI_4);
    let center = Complex64::new(lam * FRAC_PI_2, 0.0);
    let n = axis.len();
    let mut nodes = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for (i, &p) in axis.nodes.iter().enumerate() {
        for (j, &q) in axis.nodes.iter().enumerate() {
            nodes.push(center + rot * Complex64::new(p, q));
            weights.push(axis.weights[i] * axis.weights[j]);
        }
    }
    let area: f64 = weights.iter().sum();
    let exact = lam * lam * PI * PI / 2.0;
    let tol = ((area - exact).abs() * 10.0).max(1e-13 * exact);
    GridQuadrature {
        nodes,
        weights,
        measure: Measure::Area2D,
        du: None,
        tol,
    }
}

/// Polar tensor rule on a truncated sector with vertex `vertex` opening
/// toward `direction ∈ {+1, -1}` (the mirrored sector uses `π - z`).
/// The angular panels refine geometrically toward both edge rays.
fn sector_rule(vertex: Complex64, mirror: bool, radius: f64, resolution: usize) -> GridQuadrature {
    let radial = quad::composite(0.0, radius, (2 * resolution).max(8), 32);
    let theta_breaks = quad::geometric_both(-FRAC_PI_4, FRAC_PI_4, resolution.max(2), 12);
    let angular = quad::composite_on(&theta_breaks, 32);
    let mut nodes = Vec::with_capacity(radial.len() * angular.len());
    let mut weights = Vec::with_capacity(radial.len() * angular.len());
    for (&r, &wr) in radial.nodes.iter().zip(&radial.weights) {
        for (&th, &wt) in angular.nodes.iter().zip(&angular.weights) {
            let ray = Complex64::from_polar(r, th);
            let z = if mirror { vertex - ray } else { vertex + ray };
            nodes.push(z);
            weights.push(wr * wt * r);
        }
    }
    let area: f64 = weights.iter().sum();
    let exact = radius * radius * FRAC_PI_4;
    let tol = ((area - exact).abs() * 10.0).max(1e-13 * exact);
    GridQuadrature {
        nodes,
        weights,
        measure: Measure::Area2D,
        du: None,
        tol,
    }
}

/// Log-polar rule on a half-plane, covering radii `e^{-U} .. e^{U}`.
///
/// The substitution `r = e^u` gives `dA = r² du dθ`, uniformly accurate for
/// integrands with algebraic decay at 0 and ∞.
fn half_plane_rule(upper: bool, radius: f64, resolution: usize) -> GridQuadrature {
    let u_max = radius.ln();
    let radial = quad::composite(-u_max, u_max, (3 * resolution).max(24), 32);
    let angular = quad::composite(-FRAC_PI_2, FRAC_PI_2, resolution.max(4), 32);
    let mut nodes = Vec::with_capacity(radial.len() * angular.len());
    let mut weights = Vec::with_capacity(radial.len() * angular.len());
    for (&u, &wu) in radial.nodes.iter().zip(&radial.weights) {
        let r = u.exp();
        for (&th, &wt) in angular.nodes.iter().zip(&angular.weights) {
            let z = if upper {
                Complex64::from_polar(r, th + FRAC_PI_2)
            } else {
                Complex64::from_polar(r, th)
            };
            nodes.push(z);
            weights.push(wu * wt * r * r);
        }
    }
    // reference integrand e^{-r²}: exact mass over the covered annulus
    let r_min: f64 = (-u_max).exp();
    let exact = FRAC_PI_2 * ((-r_min * r_min).exp() - (-radius * radius).exp());
    let measured: f64 = nodes
        .iter()
        .zip(&weights)
        .map(|(z, w)| w * (-z.norm_sqr()).exp())
        .sum();
    let tol = ((measured - exact).abs() * 10.0).max(1e-14);
    GridQuadrature {
        nodes,
        weights,
        measure: Measure::Area2D,
        du: None,
        tol,
    }
}

/// Rule over the transition band `E` in `(ξ, y)` coordinates,
/// `x = π/2 + ξ α(y)`, `ξ ∈ (-1, 1)`, with Jacobian `α(y)`.
fn band_rule(resolution: usize) -> GridQuadrature {
    let xi = quad::composite(-1.0, 1.0, resolution.max(2) + 1, 16);
    let y_breaks = quad::geometric_both(-FRAC_PI_2, FRAC_PI_2, (2 * resolution).max(4), 12);
    let yr = quad::composite_on(&y_breaks, 16);
    let mut nodes = Vec::with_capacity(xi.len() * yr.len());
    let mut weights = Vec::with_capacity(xi.len() * yr.len());
    for (&y, &wy) in yr.nodes.iter().zip(&yr.weights) {
        let a = alpha(y);
        for (&q, &wq) in xi.nodes.iter().zip(&xi.weights) {
            nodes.push(Complex64::new(FRAC_PI_2 + q * a, y));
            weights.push(wy * wq * a);
        }
    }
    // area of E: ∫ 2α(y) dy = 2/π ∫ (π²/4 - y²) dy = π²/3... computed exactly:
    let exact = 2.0 / PI * (PI * PI / 4.0 * PI - (FRAC_PI_2.powi(3) * 2.0 / 3.0));
    let area: f64 = weights.iter().sum();
    let tol = ((area - exact).abs() * 10.0).max(1e-13);
    GridQuadrature {
        nodes,
        weights,
        measure: Measure::Area2D,
        du: None,
        tol,
    }
}

/// Area rule over a domain. Unbounded domains require `truncation_r`.
///
/// `resolution` scales the panel count; every rule uses 32-point
/// Gauss-Legendre panels. Nodes never touch the boundary.
pub fn make_area_rule(
    domain: Domain,
    resolution: usize,
    truncation_r: Option<f64>,
) -> Result<GridQuadrature> {
    if resolution == 0 {
        return Err(Error::InvalidParameter("resolution must be positive".into()));
    }
    if let Some(r) = truncation_r {
        if !(r > 0.0) {
            return Err(Error::InvalidParameter("truncation radius must be positive".into()));
        }
    }
    let rule = match domain {
        Domain::SquareD => square_rule(1.0, resolution, 14),
        Domain::DilatedSquare { a } => square_rule(dilation_factor(a), resolution, 14),
        Domain::SectorDelta => {
            let r = truncation_r.ok_or(Error::MissingTruncation("sector"))?;
            sector_rule(Complex64::new(0.0, 0.0), false, r, resolution)
        }
        Domain::SectorPiMinusDelta => {
            let r = truncation_r.ok_or(Error::MissingTruncation("mirrored sector"))?;
            sector_rule(Complex64::new(PI, 0.0), true, r, resolution)
        }
        Domain::TruncatedSector { radius } => {
            sector_rule(Complex64::new(0.0, 0.0), false, radius, resolution)
        }
        Domain::RightHalfPlane => {
            let r = truncation_r.ok_or(Error::MissingTruncation("right half-plane"))?;
            half_plane_rule(false, r, resolution)
        }
        Domain::UpperHalfPlane => {
            let r = truncation_r.ok_or(Error::MissingTruncation("upper half-plane"))?;
            half_plane_rule(true, r, resolution)
        }
        Domain::TransitionBandE => band_rule(resolution),
    };
    rule.assert_weights_positive();
    Ok(rule)
}

/// Arc-length rule along an oriented contour, carrying the tangent `du`.
pub fn make_boundary_rule(contour: &Contour, nodes_per_side: usize) -> GridQuadrature {
    let pts = nodes_per_side.clamp(4, 64);
    let panels = nodes_per_side.div_ceil(pts);
    let base = quad::composite(0.0, 1.0, panels.max(1), pts);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let mut du = Vec::new();
    for side in &contour.sides {
        let v = side.velocity();
        for (&t, &w) in base.nodes.iter().zip(&base.weights) {
            nodes.push(side.at(t));
            weights.push(w * v.norm());
            du.push(w * v);
        }
    }
    let perimeter: f64 = weights.iter().sum();
    let tol = ((perimeter - contour.total_length()).abs() * 10.0).max(1e-14);
    GridQuadrature {
        nodes,
        weights,
        measure: Measure::ArcLength,
        du: Some(du),
        tol,
    }
}

/// Lebesgue rule on `(0, τ)`, panels refined toward `t = τ` where the
/// control kernels concentrate.
pub fn interval_rule(tau: f64, panels: usize, end_levels: usize) -> GridQuadrature {
    let breaks = quad::geometric_toward(0.0, tau, panels.max(1), end_levels);
    let r = quad::composite_on(&breaks, 32);
    to_real_grid(r, Measure::Lebesgue1D)
}

/// `dt/t` rule on the half-line realized through `t = e^s`, `s ∈ [-S, S]`,
/// optionally forcing a panel break at a jump location `t = cutoff`.
pub fn half_line_log_rule(s_max: f64, panels: usize, cutoff: Option<f64>) -> GridQuadrature {
    let mut breaks: Vec<f64> = (0..=panels)
        .map(|k| -s_max + 2.0 * s_max * k as f64 / panels as f64)
        .collect();
    if let Some(c) = cutoff {
        let sc = c.ln();
        if sc > -s_max && sc < s_max {
            breaks.push(sc);
            breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        }
    }
    let r = quad::composite_on(&breaks, 32);
    // In s-coordinates dt/t = ds, so weights transfer unchanged; nodes are t = e^s.
    let nodes: Vec<Complex64> = r.nodes.iter().map(|&s| Complex64::new(s.exp(), 0.0)).collect();
    let grid = GridQuadrature {
        nodes,
        weights: r.weights,
        measure: Measure::LogHalfLine,
        du: None,
        tol: 1e-12,
    };
    grid.assert_weights_positive();
    grid
}

fn to_real_grid(r: Rule1d, measure: Measure) -> GridQuadrature {
    GridQuadrature {
        nodes: r.nodes.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        weights: r.weights,
        measure,
        du: None,
        tol: 1e-13,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry;

    #[test]
    fn square_area() {
        let g = make_area_rule(Domain::SquareD, 2, None).unwrap();
        let area = g.integrate(|_| Complex64::new(1.0, 0.0)).re;
        assert!((area - PI * PI / 2.0).abs() < g.tol.max(1e-10), "area {area}");
    }

    #[test]
    fn square_symmetry_integral() {
        let g = make_area_rule(Domain::SquareD, 2, None).unwrap();
        let v = g.integrate(|z| z - FRAC_PI_2);
        assert!(v.norm() < 1e-10, "centered first moment {v}");
    }

    #[test]
    fn sector_rule_refines_consistently() {
        // e^{-Re(z²)} on the truncated sector against a 4x refined oracle
        let coarse = make_area_rule(Domain::TruncatedSector { radius: 10.0 }, 2, None).unwrap();
        let fine = make_area_rule(Domain::TruncatedSector { radius: 10.0 }, 8, None).unwrap();
        let f = |z: Complex64| Complex64::new((-(z * z).re).exp(), 0.0);
        let a = coarse.integrate(f).re;
        let b = fine.integrate(f).re;
        assert!((a - b).abs() < 1e-6, "coarse {a} fine {b}");
        assert!(a.is_finite() && a > 0.0);
    }

    #[test]
    fn log_half_line_gamma_integral() {
        // Lebesgue integral of t e^{-2t} through the dt/t grid: Γ(2)/4 = 1/4
        let g = half_line_log_rule(12.0, 48, None);
        let v2 = g.integrate(|t| t * t * (-2.0 * t.re).exp());
        assert!((v2.re - 0.25).abs() < 1e-10, "got {}", v2.re);
        // integrand with mass near t = 0 pays the e^{-S} truncation tail
        let v = g.integrate(|t| t * (-2.0 * t.re).exp());
        assert!((v.re - 0.5).abs() < 2.0 * (-12.0f64).exp(), "got {}", v.re);
        let wide = half_line_log_rule(18.0, 72, None);
        let vw = wide.integrate(|t| t * (-2.0 * t.re).exp());
        assert!((vw.re - 0.5).abs() < 1e-7, "got {}", vw.re);
    }

    #[test]
    fn boundary_rule_perimeter_and_residue() {
        let c = Contour::square(0.0);
        let g = make_boundary_rule(&c, 48);
        let per = g.integrate_abs(|_| 1.0);
        assert!((per - 2.0 * SQRT_2 * PI).abs() < 1e-10);
        let closed = g.integrate_du(|_| Complex64::new(1.0, 0.0));
        assert!(closed.norm() < 1e-10, "∮ du = {closed}");
        let center = Complex64::new(FRAC_PI_2, 0.0);
        let residue = g.integrate_du(|u| 1.0 / (u - center));
        let expect = Complex64::new(0.0, 2.0 * PI);
        assert!((residue - expect).norm() < 1e-8, "residue {residue}");
    }

    #[test]
    fn winding_number_is_one() {
        let c = Contour::square(0.0);
        let g = make_boundary_rule(&c, 48);
        let center = Complex64::new(FRAC_PI_2, 0.0);
        let w = g.integrate_du(|u| 1.0 / (u - center)) / Complex64::new(0.0, 2.0 * PI);
        assert!((w.re - 1.0).abs() < 1e-8 && w.im.abs() < 1e-8);
    }

    #[test]
    fn unbounded_needs_truncation() {
        assert!(make_area_rule(Domain::SectorDelta, 2, None).is_err());
        assert!(make_area_rule(Domain::RightHalfPlane, 2, None).is_err());
        assert!(make_area_rule(Domain::SectorDelta, 2, Some(16.0)).is_ok());
    }

    #[test]
    fn nodes_stay_interior() {
        let g = make_area_rule(Domain::SquareD, 2, None).unwrap();
        assert!(g.nodes.iter().all(|&z| Domain::SquareD.contains(z)));
        let s = make_area_rule(Domain::SectorDelta, 2, Some(16.0)).unwrap();
        assert!(s.nodes.iter().all(|&z| Domain::SectorDelta.contains(z)));
        // vertex clearance for the square rule (weighted-norm requirement)
        let min_dist = g
            .nodes
            .iter()
            .map(|&z| (z - geometry::z0()).norm().min((z - geometry::z1()).norm()))
            .fold(f64::INFINITY, f64::min);
        assert!(min_dist > 1e-8, "closest node to vertex: {min_dist}");
    }

    #[test]
    fn refinement_changes_little() {
        let g1 = make_area_rule(Domain::SquareD, 2, None).unwrap();
        let g2 = make_area_rule(Domain::SquareD, 4, None).unwrap();
        let f = |z: Complex64| (z * z).exp();
        let a = g1.integrate(f);
        let b = g2.integrate(f);
        assert!((a - b).norm() <= g1.tol.max(1e-9));
    }

    #[test]
    fn csv_roundtrip_header() {
        let g = half_line_log_rule(2.0, 4, None);
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("re,im,weight,tag"));
        assert!(text.contains("loghalfline"));
    }
}
