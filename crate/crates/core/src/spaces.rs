//! Norms and functionals of the function spaces in play: area (Bergman)
//! norms with optional weights, contour (Smirnov) norms over shrinking
//! square contours, the `L log⁺L` boundary functional, and the pointwise
//! Bergman growth bound.

use crate::error::{Error, Result};
use crate::field::{ComplexField, Weight};
use crate::geometry::{z0, z1, Contour, Domain};
use crate::grid::{make_boundary_rule, Measure};
use num_complex::Complex64;
use serde::Serialize;

/// Radius below which the mass near a weight singularity is tallied
/// separately in norm reports.
const NEAR_VERTEX_RADIUS: f64 = 0.05;

#[derive(Debug, Clone, Serialize)]
pub struct NormReport {
    pub value: f64,
    /// Portion of the squared norm collected within
    /// [`NEAR_VERTEX_RADIUS`] of a weight singularity.
    pub near_singular_mass: f64,
    /// Grid accuracy estimate propagated from the rule.
    pub rule_tol: f64,
}

/// Weighted Bergman norm of a sampled field over its own grid:
/// `(∫ |f|² ω dA)^{1/2}`.
///
/// The rule's nodes must avoid the weight's singularities (the standard
/// area rules do); a node placed exactly on one is rejected.
pub fn bergman_norm(f: &ComplexField, weight: Weight) -> Result<NormReport> {
    debug_assert_eq!(f.grid.measure, Measure::Area2D);
    let mut total = 0.0;
    let mut near = 0.0;
    for ((&z, &w), v) in f.grid.nodes.iter().zip(&f.grid.weights).zip(&f.values) {
        let om = weight.eval(z);
        if !om.is_finite() {
            return Err(Error::NonFinite(format!("weight at node {z}")));
        }
        let contrib = w * v.norm_sqr() * om;
        if !contrib.is_finite() {
            return Err(Error::NonFinite(format!("integrand at node {z}")));
        }
        total += contrib;
        if matches!(weight, Weight::VertexSingular) {
            let d = (z - z0()).norm().min((z - z1()).norm());
            if d < NEAR_VERTEX_RADIUS {
                near += contrib;
            }
        }
    }
    Ok(NormReport {
        value: total.sqrt(),
        near_singular_mass: near,
        rule_tol: f.grid.tol,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SmirnovReport {
    pub value: f64,
    pub per_eps: Vec<(f64, f64)>,
    /// Whether the contour integrals increase as the contour approaches
    /// the boundary (monotone in shrinking ε).
    pub monotone: bool,
}

/// Default shrink sequence: `ε_k = 0.2·2^{-k}`, `k = 0..8`, preceded by the
/// boundary contour itself for data with a continuous boundary extension.
pub fn default_shrink_sequence() -> Vec<f64> {
    let mut v = vec![0.0];
    v.extend((0..=8).map(|k| 0.2 * 0.5f64.powi(k)));
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

/// Smirnov `E^p` norm over a family of shrinking square contours:
/// `sup_ε (∫_{ω_ε} |f|^p |dz|)^{1/p}`, `p ∈ {1, 2}`.
pub fn smirnov_norm<F>(f: F, p: u32, shrink_sequence: &[f64], nodes_per_side: usize) -> Result<SmirnovReport>
where
    F: Fn(Complex64) -> Complex64,
{
    if p != 1 && p != 2 {
        return Err(Error::InvalidParameter("p must be 1 or 2".into()));
    }
    let mut per_eps = Vec::with_capacity(shrink_sequence.len());
    let mut sup = 0.0f64;
    for &eps in shrink_sequence {
        let rule = make_boundary_rule(&Contour::square(eps), nodes_per_side);
        let mut acc = 0.0;
        for (&z, &w) in rule.nodes.iter().zip(&rule.weights) {
            let m = f(z).norm();
            if !m.is_finite() {
                return Err(Error::NonFinite(format!("sample at {z} on ω_{eps}")));
            }
            acc += w * m.powi(p as i32);
        }
        per_eps.push((eps, acc));
        sup = sup.max(acc);
    }
    // sorted by shrinking ε (toward the boundary) the integrals should grow
    let mut sorted = per_eps.clone();
    sorted.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let monotone = sorted.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-9 * w[0].1.abs().max(1.0));
    Ok(SmirnovReport {
        value: sup.powf(1.0 / p as f64),
        per_eps,
        monotone,
    })
}

/// Zygmund boundary functional `∫_γ |f| log⁺|f| |dz|` on the `ε = 0`
/// contour. Finiteness (on top of `E¹`) is the membership criterion for
/// the `L log⁺L` Smirnov class.
pub fn llogl_functional(f_boundary: &ComplexField) -> f64 {
    debug_assert_eq!(f_boundary.grid.measure, Measure::ArcLength);
    f_boundary
        .grid
        .nodes
        .iter()
        .zip(&f_boundary.grid.weights)
        .zip(&f_boundary.values)
        .map(|((_, &w), v)| {
            let m = v.norm();
            w * m * m.ln().max(0.0)
        })
        .sum()
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub worst_ratio: f64,
    pub worst_re: f64,
    pub worst_im: f64,
}

/// Pointwise Bergman bound check: `|f(z)| √π d(z, ∂Ω) <= ‖f‖` at every
/// node. Returns the worst ratio of left to right side.
pub fn pointwise_growth_check(f: &ComplexField, domain: Domain, norm: f64) -> GrowthReport {
    let mut worst = 0.0f64;
    let mut at = Complex64::new(0.0, 0.0);
    for (&z, v) in f.grid.nodes.iter().zip(&f.values) {
        let d = domain.boundary_distance(z);
        let lhs = v.norm() * std::f64::consts::PI.sqrt() * d;
        let ratio = if norm > 0.0 { lhs / norm } else { 0.0 };
        if ratio > worst {
            worst = ratio;
            at = z;
        }
    }
    GrowthReport {
        worst_ratio: worst,
        worst_re: at.re,
        worst_im: at.im,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_area_rule;
    use std::f64::consts::{PI, SQRT_2};
    use std::sync::Arc;

    fn square_field<F>(f: F, res: usize) -> ComplexField
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        let g = Arc::new(make_area_rule(Domain::SquareD, res, None).unwrap());
        ComplexField::from_fn(g, f)
    }

    #[test]
    fn unit_function_norm_on_square() {
        let f = square_field(|_| Complex64::new(1.0, 0.0), 2);
        let r = bergman_norm(&f, Weight::Unit).unwrap();
        assert!((r.value - PI / SQRT_2).abs() < 1e-9, "got {}", r.value);
    }

    #[test]
    fn vertex_weight_collapses_for_matching_function() {
        let f = square_field(|z| (z - z0()) * (z - z1()), 2);
        let r = bergman_norm(&f, Weight::VertexSingular).unwrap();
        assert!((r.value - PI / SQRT_2).abs() < 1e-9, "got {}", r.value);
        assert!(r.near_singular_mass > 0.0);
    }

    #[test]
    fn half_plane_pole_norm() {
        // ∫∫_{Re s>0} |s+1|^{-4} dA = π/4, norm = √π/2
        let g = Arc::new(make_area_rule(Domain::RightHalfPlane, 4, Some(1.0e5)).unwrap());
        let f = ComplexField::from_fn(g, |s| ((s + 1.0) * (s + 1.0)).finv());
        let r = bergman_norm(&f, Weight::Unit).unwrap();
        assert!((r.value - PI.sqrt() / 2.0).abs() < 1e-4, "got {}", r.value);
    }

    #[test]
    fn norm_homogeneity_and_monotonicity() {
        let f = square_field(|z| (z * z).exp(), 2);
        let n1 = bergman_norm(&f, Weight::Unit).unwrap().value;
        let scaled = square_field(|z| 3.5 * (z * z).exp(), 2);
        let n2 = bergman_norm(&scaled, Weight::Unit).unwrap().value;
        assert!((n2 - 3.5 * n1).abs() < 1e-12 * n2);
        // subdomain (the transition band ⊂ D) norm does not exceed the full norm
        let band = Arc::new(make_area_rule(Domain::TransitionBandE, 2, None).unwrap());
        let fb = ComplexField::from_fn(band, |z| (z * z).exp());
        let nb = bergman_norm(&fb, Weight::Unit).unwrap().value;
        assert!(nb <= n1 + 1e-12);
    }

    #[test]
    fn smirnov_constant_and_zero() {
        let seq = default_shrink_sequence();
        let one = smirnov_norm(|_| Complex64::new(1.0, 0.0), 1, &seq, 64).unwrap();
        assert!((one.value - 2.0 * SQRT_2 * PI).abs() < 1e-10, "got {}", one.value);
        assert!(one.monotone);
        let zero = smirnov_norm(|_| Complex64::new(0.0, 0.0), 2, &seq, 64).unwrap();
        assert_eq!(zero.value, 0.0);
    }

    #[test]
    fn smirnov_polynomial_matches_boundary_integral() {
        let seq = default_shrink_sequence();
        let f = |z: Complex64| z - Complex64::new(PI / 2.0, 0.0);
        let r = smirnov_norm(f, 2, &seq, 64).unwrap();
        // direct ε = 0 integral: ∫ |z-π/2|² |dz| = 2π³/(3√2)
        let exact = (2.0 * PI.powi(3) / (3.0 * SQRT_2)).sqrt();
        assert!((r.value - exact).abs() < 1e-8 * exact, "got {} want {exact}", r.value);
    }

    #[test]
    fn llogl_values() {
        let rule = Arc::new(make_boundary_rule(&Contour::square(0.0), 64));
        let one = ComplexField::from_fn(rule.clone(), |_| Complex64::new(1.0, 0.0));
        assert_eq!(llogl_functional(&one), 0.0);
        let half = ComplexField::from_fn(rule.clone(), |_| Complex64::new(0.5, 0.0));
        assert_eq!(llogl_functional(&half), 0.0);
        // |f| = e: integrand e·1, total e·perimeter = e·2√2π ≈ 24.154016
        let e = ComplexField::from_fn(rule, |_| Complex64::new(std::f64::consts::E, 0.0));
        let v = llogl_functional(&e);
        let exact = std::f64::consts::E * 2.0 * SQRT_2 * PI;
        assert!((v - exact).abs() < 1e-10 * exact, "got {v} want {exact}");
    }

    #[test]
    fn smirnov_order_chain() {
        // finite E² data has finite L log⁺L functional and finite E¹ norm
        let seq = default_shrink_sequence();
        let f = |z: Complex64| ((z - Complex64::new(PI / 2.0, 0.0)) * 2.0).cos();
        let e2 = smirnov_norm(f, 2, &seq, 64).unwrap();
        assert!(e2.value.is_finite());
        let e1 = smirnov_norm(f, 1, &seq, 64).unwrap();
        assert!(e1.value.is_finite());
        let rule = Arc::new(make_boundary_rule(&Contour::square(0.0), 64));
        let fb = ComplexField::from_fn(rule, f);
        assert!(llogl_functional(&fb).is_finite());
    }

    #[test]
    fn growth_bound_for_constants_and_pole() {
        let f = square_field(|_| Complex64::new(1.0, 0.0), 2);
        let n = bergman_norm(&f, Weight::Unit).unwrap().value;
        let rep = pointwise_growth_check(&f, Domain::SquareD, n);
        assert!(rep.worst_ratio <= 1.0, "ratio {}", rep.worst_ratio);
        assert!(rep.worst_ratio > 0.5); // attained near the center

        let zero = square_field(|_| Complex64::new(0.0, 0.0), 1);
        let rep0 = pointwise_growth_check(&zero, Domain::SquareD, 0.0);
        assert_eq!(rep0.worst_ratio, 0.0);

        // pole just outside the closed square near z0
        let pole = z0() + Complex64::new(0.1, 0.0);
        let f2 = square_field(move |z| (z - pole).finv(), 4);
        let n2 = bergman_norm(&f2, Weight::Unit).unwrap().value;
        let rep2 = pointwise_growth_check(&f2, Domain::SquareD, n2);
        assert!(rep2.worst_ratio <= 1.0, "ratio {}", rep2.worst_ratio);
    }
}
