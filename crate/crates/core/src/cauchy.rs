//! Cauchy decomposition of boundary data on the square into four sector
//! pieces.
//!
//! A boundary trace on `∂D` splits through the Cauchy formula into one
//! piece per side, `f_side(z) = (1/iπ) ∫_side f(u)/(u - z) du`, each
//! holomorphic off its closed segment; the `γ_1` pieces belong to the
//! sector `Δ` and the `γ_2` pieces to `π - Δ` after division by the
//! multiplier `P(z) = z + 2iπ`. Every side is handled by one
//! implementation through the similarity `m(z) = (z - A)/(B - A)`, which
//! maps the oriented side `[A, B]` onto `[0, 1]` and the interior of `D`
//! into the upper half-plane; under it the piece is the Cauchy transform
//! of the pushed-forward trace: `f_side(z) = (C f̃)(m(z))`.
//!
//! Side maps (`s = start`, `e = end` of each oriented side):
//!   `γ_{1,+}`: `m(z) = (z - z0)/(0 - z0) = 1 - z(1-i)/π`
//!   `γ_{1,-}`: `m(z) = z/z1 = z(1+i)/π`
//!   `γ_{2,-}`: `m(z) = (z - z1)/(π - z1)`
//!   `γ_{2,+}`: `m(z) = (z - π)/(z0 - π)`

use crate::error::{Error, Result};
use crate::geometry::{dilation_factor, segment_distance, Contour, Domain, Side, SideLabel};
use crate::quad;
use crate::signal::LineSignal;
use crate::transforms::cauchy_transform;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
use std::sync::Arc;

/// Multiplier with its only zero at `-2iπ`, outside both closed sectors.
pub fn multiplier_p(z: Complex64) -> Complex64 {
    z + Complex64::new(0.0, 2.0 * PI)
}

type SideFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Per-side sampled boundary values of a function on the `ε = 0` contour.
#[derive(Clone)]
pub struct BoundaryTrace {
    pub contour: Contour,
    side_fns: Vec<(SideLabel, SideFn, Vec<f64>)>,
}

impl BoundaryTrace {
    /// Trace of a globally defined function.
    pub fn from_fn<F>(f: F) -> BoundaryTrace
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        let contour = Contour::square(0.0);
        let f = Arc::new(f);
        let side_fns = contour
            .sides
            .iter()
            .map(|side| {
                let f = f.clone();
                let s = *side;
                let closure: SideFn = Arc::new(move |t: f64| f(s.at(t)));
                (side.label, closure, Vec::new())
            })
            .collect();
        BoundaryTrace { contour, side_fns }
    }

    /// Trace given side by side in the boundary parameter `t ∈ [0, 1]`,
    /// with optional interior breakpoints per side.
    pub fn from_side_fns(sides: Vec<(SideLabel, SideFn, Vec<f64>)>) -> BoundaryTrace {
        BoundaryTrace {
            contour: Contour::square(0.0),
            side_fns: sides,
        }
    }

    fn side_entry(&self, label: SideLabel) -> &(SideLabel, SideFn, Vec<f64>) {
        self.side_fns
            .iter()
            .find(|(l, _, _)| *l == label)
            .expect("trace carries all four sides")
    }

    pub fn eval(&self, label: SideLabel, t: f64) -> Complex64 {
        (self.side_entry(label).1)(t)
    }

    /// Adaptive parameter rule on a side, refined toward the side ends and
    /// any breakpoints (the trace may blow up at the vertices).
    fn side_rule(&self, label: SideLabel, levels: usize) -> quad::Rule1d {
        let (_, _, bps) = self.side_entry(label);
        let mut marks = vec![0.0, 1.0];
        marks.extend(bps.iter().copied());
        marks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        marks.dedup();
        let mut breaks = Vec::new();
        for w in marks.windows(2) {
            breaks.extend(quad::geometric_toward(w[0], w[1], 2, levels));
            breaks.extend(
                quad::geometric_toward(-w[1], -w[0], 2, levels)
                    .into_iter()
                    .map(|x| -x),
            );
        }
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        quad::composite_on(&breaks, 16)
    }

    /// `∫_∂D |f| |dz|`; finiteness is the prerequisite for decomposition.
    pub fn l1_norm(&self) -> f64 {
        self.side_fns
            .iter()
            .map(|(label, f, _)| {
                let rule = self.side_rule(*label, 30);
                let len = self.contour.side(*label).length();
                rule.nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&t, &w)| w * len * f(t).norm())
                    .sum::<f64>()
            })
            .sum()
    }

    /// `∫_∂D |f| log⁺|f| |dz|` on the boundary contour.
    pub fn llogl(&self) -> f64 {
        self.side_fns
            .iter()
            .map(|(label, f, _)| {
                let rule = self.side_rule(*label, 30);
                let len = self.contour.side(*label).length();
                rule.nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&t, &w)| {
                        let m = f(t).norm();
                        w * len * m * m.ln().max(0.0)
                    })
                    .sum::<f64>()
            })
            .sum()
    }

    /// Push-forward of the side trace under the side's similarity map:
    /// a compactly supported function on `[0, 1]`.
    pub fn pushforward(&self, label: SideLabel) -> LineSignal {
        let (_, f, bps) = self.side_entry(label).clone();
        LineSignal::new((0.0, 1.0), move |t| f(t)).with_breakpoints(bps)
    }
}

/// One side's Cauchy integral, holomorphic off the closed side segment.
#[derive(Clone)]
pub struct CauchyPiece {
    pub side: Side,
    trace: SideFn,
    breakpoints: Vec<f64>,
}

impl CauchyPiece {
    /// Sector this piece belongs to after division by the multiplier.
    pub fn sector(&self) -> Domain {
        self.side.label.sector()
    }

    /// Similarity map of the side: `m(z) = (z - A)/(B - A)`, sending the
    /// oriented side onto `[0, 1]` and the interior side of `D` into the
    /// upper half-plane.
    pub fn similarity(&self, z: Complex64) -> Complex64 {
        (z - self.side.start) / (self.side.end - self.side.start)
    }

    pub fn similarity_inverse(&self, w: Complex64) -> Complex64 {
        self.side.start + w * (self.side.end - self.side.start)
    }

    /// `(1/iπ) ∫_side f(u)/(u - z) du` by adaptive panel quadrature with
    /// singularity subtraction near the segment.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let a = self.side.start;
        let b = self.side.end;
        let v = b - a;
        let t_star = (((z - a) * v.conj()).re / v.norm_sqr()).clamp(0.0, 1.0);
        let dist = (z - self.side.at(t_star)).norm();

        let mut marks = vec![0.0, 1.0, t_star];
        marks.extend(self.breakpoints.iter().copied());
        marks.sort_by(|p, q| p.partial_cmp(q).unwrap());
        marks.dedup_by(|p, q| (*p - *q).abs() < 1e-14);
        let levels = ((1.0 / dist.max(1e-14)).log2().ceil() as usize + 6).clamp(8, 52);
        let mut breaks = Vec::new();
        for w in marks.windows(2) {
            breaks.extend(quad::geometric_toward(w[0], w[1], 2, levels));
            breaks.extend(
                quad::geometric_toward(-w[1], -w[0], 2, levels)
                    .into_iter()
                    .map(|x| -x),
            );
        }
        breaks.sort_by(|p, q| p.partial_cmp(q).unwrap());
        breaks.dedup_by(|p, q| (*p - *q).abs() < 1e-15);
        let rule = quad::composite_on(&breaks, 16);

        let subtract = dist < 0.05;
        let f_star = if subtract {
            (self.trace)(t_star)
        } else {
            Complex64::new(0.0, 0.0)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let u = self.side.at(t);
            acc += w * v * ((self.trace)(t) - f_star) / (u - z);
        }
        if subtract {
            acc += f_star * ((b - z) / (a - z)).ln();
        }
        acc / Complex64::new(0.0, PI)
    }

    /// The piece divided by the multiplier `P(z) = z + 2iπ`.
    pub fn eval_over_p(&self, z: Complex64) -> Complex64 {
        self.eval(z) / multiplier_p(z)
    }
}

/// Split a boundary trace into its four side pieces.
pub fn decompose(trace: &BoundaryTrace) -> Result<[CauchyPiece; 4]> {
    let l1 = trace.l1_norm();
    if !l1.is_finite() {
        return Err(Error::DivergentFunctional(
            "boundary trace is not integrable".into(),
        ));
    }
    let piece = |label: SideLabel| {
        let (_, f, bps) = trace.side_entry(label).clone();
        CauchyPiece {
            side: *trace.contour.side(label),
            trace: f,
            breakpoints: bps,
        }
    };
    Ok([
        piece(SideLabel::Gamma1Plus),
        piece(SideLabel::Gamma1Minus),
        piece(SideLabel::Gamma2Plus),
        piece(SideLabel::Gamma2Minus),
    ])
}

/// Cauchy reconstruction `(1/2) Σ pieces` at an interior point.
pub fn reconstruct(pieces: &[CauchyPiece; 4], z: Complex64) -> Complex64 {
    0.5 * pieces.iter().map(|p| p.eval(z)).sum::<Complex64>()
}

/// Grid-search estimate of the smallest constant with
/// `|z| + 1 <= C_a d(z, ∂D)` over the sector cover outside the dilated
/// square.
pub fn far_field_constant(a: f64) -> f64 {
    let lam = dilation_factor(a);
    let da = Domain::DilatedSquare { a };
    let mut best = 0.0f64;
    for &(sector_mirror, vertex) in &[(false, 0.0), (true, PI)] {
        for ir in 0..600 {
            let r = lam * PI / SQRT_2 * 0.9 + ir as f64 * 0.08;
            for it in 0..=120 {
                let th = -FRAC_PI_4 + FRAC_PI_2 * it as f64 / 120.0;
                let ray = Complex64::from_polar(r, th);
                let z = if sector_mirror {
                    Complex64::new(vertex, 0.0) - ray
                } else {
                    ray
                };
                if da.contains(z) {
                    continue;
                }
                let d = Domain::SquareD.boundary_distance(z);
                if d > 0.0 {
                    best = best.max((z.norm() + 1.0) / d);
                }
            }
        }
    }
    best
}

#[derive(Debug, Clone, Serialize)]
pub struct FarFieldReport {
    /// Empirical sup of `|piece(z)| (|z| + 1)` over the probes.
    pub empirical_sup: f64,
    /// Analytic chain bound `‖f‖_{L¹(∂D)} C_a / π`.
    pub analytic_bound: f64,
    pub c_a: f64,
    pub probes: usize,
}

/// Verify the far-field decay of a piece: `|piece(z)|(|z|+1)` stays below
/// the Cauchy-kernel chain bound on probes outside the dilated square.
pub fn far_field_bound(
    piece: &CauchyPiece,
    trace_l1: f64,
    a: f64,
    probes: &[Complex64],
) -> Result<FarFieldReport> {
    let da = Domain::DilatedSquare { a };
    for &z in probes {
        if da.contains(z) {
            return Err(Error::OutsideDomain(format!(
                "probe {z} lies inside the dilated square"
            )));
        }
    }
    let c_a = far_field_constant(a);
    let empirical_sup = probes
        .par_iter()
        .map(|&z| piece.eval(z).norm() * (z.norm() + 1.0))
        .reduce(|| 0.0, f64::max);
    Ok(FarFieldReport {
        empirical_sup,
        analytic_bound: trace_l1 * c_a / PI,
        c_a,
        probes: probes.len(),
    })
}

/// Probes on rays through the sector at the given radii, filtered to lie
/// outside the dilated square.
pub fn sector_ray_probes(sector: Domain, radii: &[f64], n_angles: usize, a: f64) -> Vec<Complex64> {
    let da = Domain::DilatedSquare { a };
    let mut out = Vec::new();
    for &r in radii {
        for k in 0..n_angles {
            let th = -FRAC_PI_4 + FRAC_PI_2 * (k as f64 + 0.5) / n_angles as f64;
            let ray = Complex64::from_polar(r, th);
            let z = match sector {
                Domain::SectorPiMinusDelta => Complex64::new(PI, 0.0) - ray,
                _ => ray,
            };
            if !da.contains(z) {
                out.push(z);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct NearFieldReport {
    /// `‖piece/P‖` over the dilated square by direct contour quadrature.
    pub norm_direct: f64,
    /// Same integral through the half-plane Cauchy-transform route.
    pub norm_halfplane: f64,
    /// Relative disagreement of the two routes.
    pub agreement: f64,
}

/// Mesh over the dilated square in the side's half-plane frame: the image
/// `m(D_a)` is the square `[1-λ, 1] × (0, λ)` with the singular support
/// `[0, 1]` on its bottom edge. Panels refine toward `y = 0` and toward
/// the support endpoints.
fn halfplane_mesh(a: f64, resolution: usize, levels: usize) -> (Vec<Complex64>, Vec<f64>) {
    let lam = dilation_factor(a);
    let mut xb = Vec::new();
    for w in [(1.0 - lam, 0.0), (0.0, 1.0)] {
        xb.extend(quad::geometric_toward(w.0, w.1, resolution.max(2), levels / 2));
        xb.extend(
            quad::geometric_toward(-w.1, -w.0, resolution.max(2), levels / 2)
                .into_iter()
                .map(|x| -x),
        );
    }
    xb.sort_by(|p, q| p.partial_cmp(q).unwrap());
    xb.dedup_by(|p, q| (*p - *q).abs() < 1e-15);
    let xr = quad::composite_on(&xb, 12);
    // y panels: geometric from the top down to y -> 0
    let mut yb: Vec<f64> = quad::geometric_toward(-lam, 0.0, resolution.max(2), levels)
        .into_iter()
        .map(|y| -y)
        .collect();
    yb.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let yr = quad::composite_on(&yb, 12);
    let mut nodes = Vec::with_capacity(xr.len() * yr.len());
    let mut weights = Vec::with_capacity(xr.len() * yr.len());
    for (&x, &wx) in xr.nodes.iter().zip(&xr.weights) {
        for (&y, &wy) in yr.nodes.iter().zip(&yr.weights) {
            nodes.push(Complex64::new(x, y));
            weights.push(wx * wy);
        }
    }
    (nodes, weights)
}

/// Compare the two evaluations of `‖piece/P‖_{A²(D_a)}`: direct contour
/// quadrature in the square frame against the Cauchy transform of the
/// pushed-forward trace in the half-plane frame, over the same mesh.
pub fn near_field_membership(
    piece: &CauchyPiece,
    trace: &BoundaryTrace,
    a: f64,
    resolution: usize,
) -> Result<NearFieldReport> {
    let (w_nodes, w_weights) = halfplane_mesh(a, resolution, 20);
    // the inverse similarity scales lengths by |B-A|
    let jac = piece.side.length().powi(2);
    let signal = trace.pushforward(piece.side.label);

    let direct: f64 = w_nodes
        .par_iter()
        .zip(&w_weights)
        .map(|(&w, &wt)| {
            let z = piece.similarity_inverse(w);
            wt * jac * piece.eval(z).norm_sqr() / multiplier_p(z).norm_sqr()
        })
        .sum();
    let halfplane: f64 = w_nodes
        .par_iter()
        .zip(&w_weights)
        .map(|(&w, &wt)| {
            let z = piece.similarity_inverse(w);
            let c = cauchy_transform(&signal, w).expect("mesh stays in the upper half-plane");
            wt * jac * c.norm_sqr() / multiplier_p(z).norm_sqr()
        })
        .sum();
    let norm_direct = direct.sqrt();
    let norm_halfplane = halfplane.sqrt();
    let agreement = (norm_direct - norm_halfplane).abs() / norm_halfplane.max(f64::MIN_POSITIVE);
    Ok(NearFieldReport {
        norm_direct,
        norm_halfplane,
        agreement,
    })
}

/// Squared norm of `Σ pieces / P` over the truncated sector: the near
/// part integrates over the dilated square in its rotated frame with
/// panels refined toward the singular sides, the far part in polar
/// coordinates between the dilated square and the truncation radius.
pub fn paired_sector_norm(
    pieces: &[&CauchyPiece],
    sector: Domain,
    a: f64,
    radius: f64,
    resolution: usize,
) -> f64 {
    let lam = dilation_factor(a);
    let mirror = matches!(sector, Domain::SectorPiMinusDelta);
    let s = lam * FRAC_PI_2 / SQRT_2;
    let rot = Complex64::from_polar(1.0, FRAC_PI_4);
    let center = Complex64::new(lam * FRAC_PI_2, 0.0);

    let sum_at = |z: Complex64| -> Complex64 { pieces.iter().map(|p| p.eval_over_p(z)).sum() };
    // the mirrored sector's mesh is the image of the Δ-frame mesh under
    // z -> π - z; the pieces are evaluated at the mapped nodes
    let mirror_fix = move |z: Complex64| if mirror { Complex64::new(PI, 0.0) - z } else { z };

    // near part: rotated frame, refinement toward the two segment-bearing
    // edges (top and left)
    let axis = quad::composite_on(&quad::geometric_both(-s, s, resolution.max(2), 14), 12);
    let near: f64 = axis
        .nodes
        .par_iter()
        .zip(&axis.weights)
        .map(|(&p, &wp)| {
            let mut acc = 0.0;
            for (&q, &wq) in axis.nodes.iter().zip(&axis.weights) {
                let z = center + rot * Complex64::new(p, q);
                acc += wp * wq * sum_at(mirror_fix(z)).norm_sqr();
            }
            acc
        })
        .sum();

    // far part: polar between the dilated square boundary and the radius
    let theta = quad::composite_on(
        &quad::geometric_both(-FRAC_PI_4, FRAC_PI_4, resolution.max(2), 10),
        12,
    );
    let far: f64 = theta
        .nodes
        .par_iter()
        .zip(&theta.weights)
        .map(|(&th, &wt)| {
            let r_inner = lam * PI / (th.cos() + th.sin().abs());
            if r_inner >= radius {
                return 0.0;
            }
            let radial = quad::composite(r_inner, radius, (2 * resolution).max(6), 12);
            let mut acc = 0.0;
            for (&r, &wr) in radial.nodes.iter().zip(&radial.weights) {
                let ray = Complex64::from_polar(r, th);
                let z = if mirror {
                    Complex64::new(PI, 0.0) - ray
                } else {
                    ray
                };
                acc += wt * wr * r * sum_at(z).norm_sqr();
            }
            acc
        })
        .sum();
    (near + far).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{z0, z1};

    #[test]
    fn constant_trace_center_pieces() {
        let trace = BoundaryTrace::from_fn(|_| Complex64::new(1.0, 0.0));
        let pieces = decompose(&trace).unwrap();
        let c = Complex64::new(FRAC_PI_2, 0.0);
        for p in &pieces {
            let v = p.eval(c);
            assert!(
                (v - Complex64::new(0.5, 0.0)).norm() < 1e-10,
                "{:?}: {v}",
                p.side.label
            );
        }
        assert!((reconstruct(&pieces, c) - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        // off-center reconstruction
        let z = Complex64::new(FRAC_PI_2, FRAC_PI_4);
        assert!((reconstruct(&pieces, z) - Complex64::new(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn linear_trace_reproduces_function() {
        let f = |z: Complex64| z - Complex64::new(FRAC_PI_2, 0.0);
        let trace = BoundaryTrace::from_fn(f);
        let pieces = decompose(&trace).unwrap();
        let c = Complex64::new(FRAC_PI_2, 0.0);
        assert!(reconstruct(&pieces, c).norm() < 1e-10);
        for z in [
            Complex64::new(1.0, 0.3),
            Complex64::new(2.4, -0.5),
            Complex64::new(FRAC_PI_2, 1.2),
        ] {
            let got = reconstruct(&pieces, z);
            assert!((got - f(z)).norm() < 1e-9, "z={z}: {got} vs {}", f(z));
        }
    }

    #[test]
    fn similarity_maps_paper_values() {
        let trace = BoundaryTrace::from_fn(|_| Complex64::new(1.0, 0.0));
        let pieces = decompose(&trace).unwrap();
        let g1p = pieces
            .iter()
            .find(|p| p.side.label == SideLabel::Gamma1Plus)
            .unwrap();
        // endpoint 0 of the side maps to 1, the vertex z0 maps to 0
        assert!((g1p.similarity(Complex64::new(0.0, 0.0)) - 1.0).norm() < 1e-14);
        assert!(g1p.similarity(z0()).norm() < 1e-14);
        // interior of D maps to the upper half-plane, for every side
        let c = Complex64::new(FRAC_PI_2, 0.0);
        for p in &pieces {
            assert!(p.similarity(c).im > 0.0, "{:?}", p.side.label);
        }
    }

    #[test]
    fn piece_is_holomorphic_off_segment() {
        // finite-difference dbar residual away from the segment
        let trace = BoundaryTrace::from_fn(|z| (z * 0.5).exp());
        let pieces = decompose(&trace).unwrap();
        let p = &pieces[0];
        let h = 1e-4;
        for z in [Complex64::new(1.2, 0.1), Complex64::new(2.0, -0.8)] {
            let d = segment_distance(z, p.side.start, p.side.end);
            assert!(d > 0.1, "test point too close");
            let fx = (p.eval(z + h) - p.eval(z - h)) / (2.0 * h);
            let fy =
                (p.eval(z + Complex64::new(0.0, h)) - p.eval(z - Complex64::new(0.0, h))) / (2.0 * h);
            let dbar = 0.5 * (fx + Complex64::new(0.0, 1.0) * fy);
            assert!(dbar.norm() < 1e-6, "z={z}: dbar {dbar}");
        }
    }

    #[test]
    fn multiplier_values() {
        let p0 = multiplier_p(Complex64::new(0.0, 0.0));
        assert!((p0.norm() - 2.0 * PI).abs() < 1e-14);
        let ppi = multiplier_p(Complex64::new(PI, 0.0));
        assert!((ppi.norm() - PI * 5f64.sqrt()).abs() < 1e-13);
        // finite weighted far-field integral of 1/P with the decay weight
        let theta = quad::composite(-FRAC_PI_4, FRAC_PI_4, 8, 16);
        let radial = quad::composite(3.0, 200.0, 64, 16);
        let mut total = 0.0;
        for (&th, &wt) in theta.nodes.iter().zip(&theta.weights) {
            for (&r, &wr) in radial.nodes.iter().zip(&radial.weights) {
                let z = Complex64::from_polar(r, th);
                total += wt
                    * wr
                    * r
                    * multiplier_p(z).norm_sqr().recip()
                    * (1.0 + z.norm()).powi(-2);
            }
        }
        assert!(total.is_finite() && total < 1.0, "integral {total}");
    }

    #[test]
    fn far_field_scaling() {
        let trace = BoundaryTrace::from_fn(|_| Complex64::new(1.0, 0.0));
        let l1 = trace.l1_norm();
        assert!((l1 - 2.0 * SQRT_2 * PI).abs() < 1e-9);
        let pieces = decompose(&trace).unwrap();
        let p = &pieces[0];
        let probes = sector_ray_probes(Domain::SectorDelta, &[3.0, 5.0, 10.0], 9, 0.5);
        assert!(!probes.is_empty());
        let rep = far_field_bound(p, l1, 0.5, &probes).unwrap();
        assert!(rep.empirical_sup.is_finite() && rep.empirical_sup > 0.0);
        assert!(
            rep.empirical_sup <= rep.analytic_bound,
            "emp {} vs bound {}",
            rep.empirical_sup,
            rep.analytic_bound
        );
        // per-radius consistency of the empirical constant
        let mut per_radius = Vec::new();
        for &r in &[3.0, 5.0, 10.0] {
            let pr = sector_ray_probes(Domain::SectorDelta, &[r], 9, 0.5);
            let m = pr
                .iter()
                .map(|&z| p.eval(z).norm() * (z.norm() + 1.0))
                .fold(0.0f64, f64::max);
            per_radius.push(m);
        }
        let lo = per_radius.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = per_radius.iter().cloned().fold(0.0f64, f64::max);
        assert!(hi / lo < 4.0, "per-radius spread {per_radius:?}");
        // zero trace gives zero bounds
        let zero = BoundaryTrace::from_fn(|_| Complex64::new(0.0, 0.0));
        let zp = decompose(&zero).unwrap();
        let rz = far_field_bound(&zp[0], 0.0, 0.5, &probes).unwrap();
        assert!(rz.empirical_sup < 1e-14);
        // interior probe rejected
        assert!(far_field_bound(p, l1, 0.5, &[Complex64::new(3.0, 0.0)]).is_err());
    }

    #[test]
    fn far_field_constant_decreases_with_margin() {
        let c_half = far_field_constant(0.5);
        let c_one = far_field_constant(1.0);
        assert!(c_half.is_finite() && c_one.is_finite());
        assert!(c_one < c_half, "C_0.5 = {c_half}, C_1.0 = {c_one}");
    }

    #[test]
    fn near_field_two_routes_agree() {
        let trace = BoundaryTrace::from_fn(|_| Complex64::new(1.0, 0.0));
        let pieces = decompose(&trace).unwrap();
        let g1p = pieces
            .iter()
            .find(|p| p.side.label == SideLabel::Gamma1Plus)
            .unwrap();
        let rep = near_field_membership(g1p, &trace, 0.5, 2).unwrap();
        assert!(
            rep.agreement < 1e-4,
            "routes disagree: {} vs {}",
            rep.norm_direct,
            rep.norm_halfplane
        );
    }

    #[test]
    fn unbounded_llogl_trace_has_finite_sector_norms() {
        // trace with log singularities at the off-diagonal vertices
        let trace = BoundaryTrace::from_fn(|z| {
            let d = (z - z0()).norm().min((z - z1()).norm()).max(1e-300);
            Complex64::new((4.0 / d).ln().max(0.0), 0.0)
        });
        assert!(trace.l1_norm().is_finite());
        assert!(trace.llogl().is_finite());
        let pieces = decompose(&trace).unwrap();
        let refs: Vec<&CauchyPiece> = pieces
            .iter()
            .filter(|p| p.sector() == Domain::SectorDelta)
            .collect();
        let n1 = paired_sector_norm(&refs, Domain::SectorDelta, 0.5, 16.0, 2);
        assert!(n1.is_finite() && n1 > 0.0, "norm {n1}");
    }

    #[test]
    fn multiplier_transparency() {
        // decompose(P·f)/P = decompose(f)·P/P pointwise: linearity of the
        // Cauchy integral in the trace
        let f = |z: Complex64| (0.3 * z).exp();
        let pf = move |z: Complex64| multiplier_p(z) * f(z);
        let pieces_f = decompose(&BoundaryTrace::from_fn(f)).unwrap();
        let pieces_pf = decompose(&BoundaryTrace::from_fn(pf)).unwrap();
        for z in [Complex64::new(1.1, 0.2), Complex64::new(2.2, -0.4)] {
            let rec_f = reconstruct(&pieces_f, z);
            let rec_pf = reconstruct(&pieces_pf, z);
            let lhs = rec_pf / multiplier_p(z);
            let rhs = rec_f * multiplier_p(z) / multiplier_p(z);
            assert!((lhs - rhs).norm() < 1e-9, "z={z}");
        }
    }

    #[test]
    fn growth_ceiling_near_boundary() {
        // |f(z)| d log(1/d) stays bounded approaching the midpoint of the
        // singular side for the log-singular trace
        let trace = BoundaryTrace::from_fn(|z| {
            let d = (z - z0()).norm().min((z - z1()).norm()).max(1e-300);
            Complex64::new((4.0 / d).ln().max(0.0), 0.0)
        });
        let pieces = decompose(&trace).unwrap();
        let mid = 0.5 * (z0() + Complex64::new(0.0, 0.0));
        let inward = Complex64::from_polar(1.0, -FRAC_PI_4); // normal into D
        let mut worst = 0.0f64;
        for k in 2..10 {
            let d = 0.5f64.powi(k);
            let z = mid + d * inward;
            let val = reconstruct(&pieces, z).norm();
            worst = worst.max(val * d * (1.0 / d).ln());
        }
        assert!(worst.is_finite() && worst < 50.0, "ceiling {worst}");
    }
}
