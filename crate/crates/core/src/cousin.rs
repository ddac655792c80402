//! Constructive splitting of a vertex-weighted Bergman function on the
//! square into two sector-holomorphic halves.
//!
//! The cover is `Ω = Δ ∪ (π - Δ)` with `D = Δ ∩ (π - Δ)`. An explicit
//! partition of unity subordinate to the cover is built from a smooth step
//! ramped across the parabolic transition band `E`; its dbar derivative
//! blows up no faster than `1/(|z - z0||z - z1|)` at the vertices. The
//! splitting multiplies by `P(z) = 1 + z²`, assembles the dbar datum
//! `v = -φ0 ∂χ1/∂z̄` supported in `E`, solves `∂u/∂z̄ = v` by the
//! Cauchy-Pompeiu area integral, and returns
//! `f1 = (χ2 φ0 - u)/P`, `f2 = (χ1 φ0 + u)/P` with `f1 + f2 = φ` on `D`.
//!
//! Conventions: `∂/∂z̄ = (∂_x + i ∂_y)/2` and the Pompeiu kernel is
//! `1/(π(z - ζ))`.

use crate::error::{Error, Result};
use crate::field::Evaluator;
use crate::geometry::{alpha, alpha_prime, z0, z1, Domain};
use crate::grid::{make_area_rule, GridQuadrature};
use crate::quad;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

/// Auxiliary multiplier `P(z) = 1 + z²`; its zeros `±i` avoid both closed
/// sectors, and division by it turns the weighted dbar solution into an
/// unweighted square-integrable one.
pub fn multiplier_q(z: Complex64) -> Complex64 {
    1.0 + z * z
}

/// Smooth step `ψ`: 0 below 0, 1 above 1, strictly increasing between,
/// built from `σ(t) = e^{-1/t}`.
pub fn psi(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

/// `ψ'`, bounded on the line (max 2 at t = 1/2).
pub fn psi_prime(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        let da = a / (t * t);
        let db = b / ((1.0 - t) * (1.0 - t));
        (da * b + a * db) / ((a + b) * (a + b))
    }
}

/// The explicit partition of unity subordinate to the sector cover.
#[derive(Debug, Clone, Copy, Default)]
pub struct PartitionOfUnity;

impl PartitionOfUnity {
    /// Ramp argument `q = (x + α(y) - π/2)/(2α(y))` inside the band.
    fn ramp(x: f64, y: f64) -> f64 {
        let a = alpha(y);
        (x + a - FRAC_PI_2) / (2.0 * a)
    }

    /// `χ1`: 0 on the `π - Δ` side, 1 on the `Δ` side, ramped across `E`.
    pub fn chi1(&self, z: Complex64) -> f64 {
        let (x, y) = (z.re, z.im);
        if y.abs() < FRAC_PI_2 {
            psi(Self::ramp(x, y))
        } else if x > FRAC_PI_2 {
            1.0
        } else {
            0.0
        }
    }

    pub fn chi2(&self, z: Complex64) -> f64 {
        1.0 - self.chi1(z)
    }

    /// `∂χ1/∂z̄` by the chain rule through `ψ'` and `α'`:
    /// `ψ'(q)/(4α) · (1 - i (x - π/2) α'/α)`. Zero off the band.
    pub fn dbar_chi1(&self, z: Complex64) -> Result<Complex64> {
        if (z - z0()).norm() < 1e-12 || (z - z1()).norm() < 1e-12 {
            return Err(Error::OutsideDomain(
                "dbar of the cutoff is singular at the square's vertices".into(),
            ));
        }
        let (x, y) = (z.re, z.im);
        if y.abs() >= FRAC_PI_2 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let a = alpha(y);
        if (x - FRAC_PI_2).abs() >= a {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let dp = psi_prime(Self::ramp(x, y));
        let factor = Complex64::new(1.0, -(x - FRAC_PI_2) * alpha_prime(y) / a);
        Ok(dp / (4.0 * a) * factor)
    }

    /// Max of the vertex-compensated gradient `|∂χ1/∂z̄||z - z0||z - z1|`
    /// over a polar grid in the band near both vertices and a coarse grid
    /// over the rest.
    pub fn vertex_bound_sup(&self, samples: usize) -> f64 {
        let mut best = 0.0f64;
        for k in 0..samples {
            let y = -FRAC_PI_2 + PI * (k as f64 + 0.5) / samples as f64;
            let a = alpha(y);
            for j in 0..64 {
                let x = FRAC_PI_2 + a * (-1.0 + 2.0 * (j as f64 + 0.5) / 64.0);
                let z = Complex64::new(x, y);
                if let Ok(d) = self.dbar_chi1(z) {
                    let w = (z - z0()).norm() * (z - z1()).norm();
                    best = best.max(d.norm() * w);
                }
            }
        }
        best
    }

    /// Max of `|∂χ1/∂z̄||z - z0|` on the annulus
    /// `2^{-k-1} <= |z - z0| <= 2^{-k}`; staying bounded away from zero as
    /// the annuli shrink witnesses the sharpness of the vertex bound.
    pub fn annulus_probe(&self, k: u32) -> f64 {
        let lo = 0.5f64.powi(k as i32 + 1);
        let hi = 0.5f64.powi(k as i32);
        let mut best = 0.0f64;
        for ir in 0..24 {
            let r = lo + (hi - lo) * (ir as f64 + 0.5) / 24.0;
            for it in 0..256 {
                // interior directions from the top vertex point downward
                let th = -PI * 0.75 + FRAC_PI_2 * (it as f64 + 0.5) / 256.0;
                let z = z0() + Complex64::from_polar(r, th);
                if let Ok(d) = self.dbar_chi1(z) {
                    best = best.max(d.norm() * r);
                }
            }
        }
        best
    }
}

/// Build the partition and verify first-derivative continuity across the
/// band boundary by finite differences.
pub fn build_partition(grid_probe: usize) -> Result<PartitionOfUnity> {
    let pu = PartitionOfUnity;
    let h = 1e-6;
    for k in 0..grid_probe {
        let y = -1.4 + 2.8 * k as f64 / (grid_probe.max(2) - 1) as f64;
        let a = alpha(y);
        for x_edge in [FRAC_PI_2 - a, FRAC_PI_2 + a] {
            let inner = Complex64::new(x_edge + h * (FRAC_PI_2 - x_edge).signum(), y);
            let outer = Complex64::new(x_edge - h * (FRAC_PI_2 - x_edge).signum(), y);
            let di = pu.dbar_chi1(inner)?.norm();
            let doo = pu.dbar_chi1(outer)?.norm();
            // derivatives vanish to all orders at the band boundary
            if (di - doo).abs() > 1e-6 {
                return Err(Error::NonFinite(format!(
                    "cutoff gradient jumps across the band at y = {y}"
                )));
            }
        }
    }
    Ok(pu)
}

/// The dbar datum `v = -φ0 ∂χ1/∂z̄`, sampled on a band rule over `E`.
pub struct DbarDatum {
    pub grid: GridQuadrature,
    pub values: Vec<Complex64>,
    pub pu: PartitionOfUnity,
    phi0: Evaluator,
}

impl DbarDatum {
    pub fn new(phi0: Evaluator, resolution: usize) -> Result<DbarDatum> {
        let pu = PartitionOfUnity;
        let grid = make_area_rule(Domain::TransitionBandE, resolution, None)?;
        let values: Result<Vec<Complex64>> = grid
            .nodes
            .iter()
            .map(|&z| Ok(-phi0(z) * pu.dbar_chi1(z)?))
            .collect();
        let values = values?;
        if values.iter().any(|v| !v.norm().is_finite()) {
            return Err(Error::NonFinite("dbar datum".into()));
        }
        Ok(DbarDatum {
            grid,
            values,
            pu,
            phi0,
        })
    }

    /// Pointwise datum value (zero off the band).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        if !Domain::TransitionBandE.contains(z) {
            return Complex64::new(0.0, 0.0);
        }
        match self.pu.dbar_chi1(z) {
            Ok(d) => -(self.phi0)(z) * d,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// `∫∫ |v|²` over the band.
    pub fn norm_sqr(&self) -> f64 {
        self.grid
            .weights
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v.norm_sqr())
            .sum()
    }
}

/// Cauchy-Pompeiu solution `u(z) = (1/π) ∫∫_E v(ζ)/(z - ζ) dA(ζ)` of
/// `∂u/∂z̄ = v`.
///
/// Far from the band the precomputed ambient rule is summed directly;
/// within reach of the band the integral is taken in polar coordinates
/// around the target, where the kernel singularity cancels against the
/// area element.
pub struct PompeiuSolver {
    datum: Arc<DbarDatum>,
    /// `(node, weight · value)` with negligible entries pruned.
    terms: Vec<(Complex64, Complex64)>,
    near_threshold: f64,
}

impl PompeiuSolver {
    pub fn new(datum: DbarDatum) -> PompeiuSolver {
        let vmax = datum
            .values
            .iter()
            .map(|v| v.norm())
            .fold(0.0f64, f64::max);
        let cut = vmax * 1e-14;
        let terms = datum
            .grid
            .nodes
            .iter()
            .zip(&datum.grid.weights)
            .zip(&datum.values)
            .filter(|((_, _), v)| v.norm() > cut)
            .map(|((&z, &w), &v)| (z, w * v))
            .collect();
        PompeiuSolver {
            datum: Arc::new(datum),
            terms,
            near_threshold: 0.25,
        }
    }

    pub fn datum(&self) -> &DbarDatum {
        &self.datum
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        if self.terms.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let band = Domain::TransitionBandE;
        if band.contains(z) || band.boundary_distance(z) < self.near_threshold {
            let vertex_dist = (z - z0()).norm().min((z - z1()).norm());
            self.eval_polar(z, vertex_dist.min(1.0))
        } else {
            self.eval_far(z)
        }
    }

    fn eval_far(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(zeta, wv) in &self.terms {
            acc += wv / (z - zeta);
        }
        acc / PI
    }

    /// Polar integration around the target: with `ζ = z + ρ e^{iφ}` the
    /// integrand becomes `-v(ζ) e^{-iφ}/π`, smooth through the center.
    ///
    /// The datum is discontinuous at the two vertices where the band
    /// pinches, and near a vertex its detail shrinks to the vertex
    /// distance, so the radial panels resolve that scale, and both rules
    /// carry breaks aligned with the vertex directions and distances.
    fn eval_polar(&self, z: Complex64, scale_hint: f64) -> Complex64 {
        let d0 = z0() - z;
        let d1 = z1() - z;
        let r_max = d0.norm().max(d1.norm()) + 0.3;

        let scale = scale_hint.max(1e-4);
        let mut rbreaks: Vec<f64> = vec![0.0];
        // geometric from the center out to the local feature scale
        let mut x = scale / 512.0;
        while x < 0.17 * scale {
            rbreaks.push(x);
            x *= 2.0;
        }
        // uniform at the feature scale through the cone region
        let fine_step = 0.17 * scale;
        let fine_end = (3.0 * scale_hint + 0.3).min(r_max);
        let mut r = fine_step;
        while r < fine_end {
            rbreaks.push(r);
            r += fine_step;
        }
        // coarser beyond
        let mut rc = fine_end;
        while rc < r_max {
            rbreaks.push(rc);
            rc += 0.2;
        }
        rbreaks.push(r_max);
        for rv in [d0.norm(), d1.norm()] {
            if rv > 1e-9 && rv < r_max {
                let mut off = (rv.min(r_max - rv)).min(0.2);
                for _ in 0..12 {
                    rbreaks.push(rv - off);
                    rbreaks.push(rv + off);
                    off *= 0.5;
                }
                rbreaks.push(rv);
            }
        }
        rbreaks.retain(|&q| (0.0..=r_max).contains(&q));
        rbreaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        rbreaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let radial = quad::composite_on(&rbreaks, 10);

        let n_base = 48;
        let mut pbreaks: Vec<f64> = (0..=n_base)
            .map(|k| 2.0 * PI * k as f64 / n_base as f64)
            .collect();
        for dv in [d0, d1] {
            if dv.norm() > 1e-9 {
                let phi_v = dv.arg().rem_euclid(2.0 * PI);
                let mut off = 0.4;
                for _ in 0..14 {
                    pbreaks.push((phi_v - off).rem_euclid(2.0 * PI));
                    pbreaks.push((phi_v + off).rem_euclid(2.0 * PI));
                    off *= 0.5;
                }
                pbreaks.push(phi_v);
            }
        }
        pbreaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pbreaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        if pbreaks.first().map_or(true, |&p| p > 1e-12) {
            pbreaks.insert(0, 0.0);
        }
        if pbreaks.last().map_or(true, |&p| p < 2.0 * PI - 1e-12) {
            pbreaks.push(2.0 * PI);
        }
        let angular = quad::composite_on(&pbreaks, 10);

        let mut acc = Complex64::new(0.0, 0.0);
        for (&phi, &wphi) in angular.nodes.iter().zip(&angular.weights) {
            let dir = Complex64::from_polar(1.0, phi);
            let mut line = Complex64::new(0.0, 0.0);
            for (&rho, &w) in radial.nodes.iter().zip(&radial.weights) {
                let zeta = z + rho * dir;
                if Domain::TransitionBandE.contains(zeta) {
                    line += w * self.datum.eval(zeta);
                }
            }
            acc -= wphi * line * dir.conj();
        }
        acc / PI
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitReport {
    pub identity_error: f64,
    pub dbar_residual_f1: f64,
    pub dbar_residual_f2: f64,
    pub norm_f1: f64,
    pub norm_f2: f64,
    pub hormander_lhs: f64,
    pub hormander_rhs: f64,
    pub hormander_ratio: f64,
    pub hormander_satisfied: bool,
    pub weighted_norm_phi: f64,
}

/// The two sector-holomorphic halves with their verification report.
pub struct CousinSplit {
    pub f1: Box<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    pub f2: Box<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    pub report: SplitReport,
}

/// Dyadic annulus masses of the vertex-weighted square integral of `φ`
/// near the vertices; non-decaying masses flag a divergent weighted norm.
pub fn vertex_annulus_masses(phi: &Evaluator, k_max: u32) -> Vec<f64> {
    let mut out = Vec::new();
    for k in 2..=k_max {
        let lo = 0.5f64.powi(k as i32 + 1);
        let hi = 0.5f64.powi(k as i32);
        let radial = quad::composite(lo, hi, 2, 12);
        let mut mass = 0.0;
        for &(vertex, th0) in &[(z0(), -0.75 * PI), (z1(), 0.25 * PI)] {
            let angular = quad::composite(th0, th0 + FRAC_PI_2, 2, 12);
            for (&r, &wr) in radial.nodes.iter().zip(&radial.weights) {
                for (&th, &wt) in angular.nodes.iter().zip(&angular.weights) {
                    let z = vertex + Complex64::from_polar(r, th);
                    if !Domain::SquareD.contains(z) {
                        continue;
                    }
                    let w = ((z - z0()) * (z - z1())).norm_sqr().recip();
                    mass += wr * wt * r * phi(z).norm_sqr() * w;
                }
            }
        }
        out.push(mass);
    }
    out
}

/// Split `φ` (finite vertex-weighted Bergman norm on the square) into
/// `f1` holomorphic on `Δ` and `f2` holomorphic on `π - Δ` with
/// `f1 + f2 = φ` on `D`.
///
/// The evaluator of `φ` is used in a small neighborhood of the closed
/// square (finite-difference stencils step outside).
pub fn cousin_split(phi: Evaluator, resolution: usize, radius: f64) -> Result<CousinSplit> {
    // reject data with divergent vertex-weighted norm: the dyadic annulus
    // masses near the vertices must decay
    let masses = vertex_annulus_masses(&phi, 10);
    let tail = &masses[masses.len() - 3..];
    if tail[2] > 0.6 * tail[1] || tail[1] > 0.6 * tail[0] {
        return Err(Error::DivergentFunctional(format!(
            "vertex-weighted norm diverges: annulus masses {tail:?} do not decay"
        )));
    }
    let square = make_area_rule(Domain::SquareD, resolution.max(1), None)?;
    let weighted_norm_phi = square
        .nodes
        .iter()
        .zip(&square.weights)
        .map(|(&z, &w)| {
            w * phi(z).norm_sqr() * ((z - z0()) * (z - z1())).norm_sqr().recip()
        })
        .sum::<f64>()
        .sqrt();

    let phi0: Evaluator = {
        let phi = phi.clone();
        Arc::new(move |z| phi(z) * multiplier_q(z))
    };
    let datum = DbarDatum::new(phi0.clone(), resolution.max(1) + 1)?;
    let v_norm_sqr = datum.norm_sqr();
    let pu = datum.pu;
    let solver = Arc::new(PompeiuSolver::new(datum));

    let in_square = |z: Complex64| Domain::SquareD.contains(z);
    let h1 = {
        let phi0 = phi0.clone();
        move |z: Complex64| {
            if in_square(z) {
                pu.chi2(z) * phi0(z)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let g2 = {
        let phi0 = phi0.clone();
        move |z: Complex64| {
            if in_square(z) {
                pu.chi1(z) * phi0(z)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let f1: Box<dyn Fn(Complex64) -> Complex64 + Send + Sync> = {
        let solver = solver.clone();
        let h1 = h1.clone();
        Box::new(move |z| (h1(z) - solver.eval(z)) / multiplier_q(z))
    };
    let f2: Box<dyn Fn(Complex64) -> Complex64 + Send + Sync> = {
        let solver = solver.clone();
        let g2 = g2.clone();
        Box::new(move |z| (g2(z) + solver.eval(z)) / multiplier_q(z))
    };

    // identity on an interior grid (exact by construction up to roundoff)
    let mut identity_error = 0.0f64;
    for i in 0..9 {
        for j in 0..9 {
            let z = interior_probe(i, j, 9);
            let err = (phi(z) - (f1(z) + f2(z))).norm();
            identity_error = identity_error.max(err);
        }
    }

    // holomorphy: fourth-order dbar residuals on sector probes
    let probes1 = sector_probes(false, radius);
    let probes2 = sector_probes(true, radius);
    let dbar_residual_f1 = probes1
        .par_iter()
        .map(|&z| dbar_fd(&f1, z).norm())
        .reduce(|| 0.0, f64::max);
    let dbar_residual_f2 = probes2
        .par_iter()
        .map(|&z| dbar_fd(&f2, z).norm())
        .reduce(|| 0.0, f64::max);

    // truncated sector norms and the weighted dbar-solution integral;
    // the halves are smooth over the sectors, so plain polar grids do
    let delta = plain_sector_grid(false, radius, 40, 40);
    let mirror = plain_sector_grid(true, radius, 40, 40);
    let norm_and_weighted = |grid: &GridQuadrature,
                             f: &(dyn Fn(Complex64) -> Complex64 + Send + Sync)|
     -> (f64, f64) {
        grid.nodes
            .par_iter()
            .zip(&grid.weights)
            .map(|(&z, &w)| {
                let fv = f(z).norm_sqr();
                let uv = solver.eval(z).norm_sqr();
                (w * fv, w * uv / (1.0 + z.norm_sqr()).powi(2))
            })
            .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1))
    };
    let (n1_sqr, u_w1) = norm_and_weighted(&delta, f1.as_ref());
    let (n2_sqr, u_w2) = norm_and_weighted(&mirror, f2.as_ref());
    let hormander_lhs = u_w1 + u_w2;
    let hormander_rhs = 0.5 * v_norm_sqr;
    Ok(CousinSplit {
        f1,
        f2,
        report: SplitReport {
            identity_error,
            dbar_residual_f1,
            dbar_residual_f2,
            norm_f1: n1_sqr.sqrt(),
            norm_f2: n2_sqr.sqrt(),
            hormander_lhs,
            hormander_rhs,
            hormander_ratio: hormander_lhs / hormander_rhs.max(f64::MIN_POSITIVE),
            hormander_satisfied: hormander_lhs <= hormander_rhs,
            weighted_norm_phi,
        },
    })
}

/// Plain polar tensor grid over a truncated sector, for smooth
/// integrands.
pub fn plain_sector_grid(mirror: bool, radius: f64, nr: usize, nth: usize) -> GridQuadrature {
    let radial = quad::composite(0.0, radius, nr.div_ceil(12).max(2), 12);
    let angular = quad::composite(
        -PI / 4.0,
        PI / 4.0,
        nth.div_ceil(12).max(2),
        12,
    );
    let mut nodes = Vec::with_capacity(radial.len() * angular.len());
    let mut weights = Vec::with_capacity(radial.len() * angular.len());
    for (&r, &wr) in radial.nodes.iter().zip(&radial.weights) {
        for (&th, &wt) in angular.nodes.iter().zip(&angular.weights) {
            let ray = Complex64::from_polar(r, th);
            nodes.push(if mirror {
                Complex64::new(PI, 0.0) - ray
            } else {
                ray
            });
            weights.push(wr * wt * r);
        }
    }
    GridQuadrature {
        nodes,
        weights,
        measure: crate::grid::Measure::Area2D,
        du: None,
        tol: 1e-9,
    }
}

fn interior_probe(i: usize, j: usize, n: usize) -> Complex64 {
    // rotated-frame grid shrunk away from the boundary
    let s = PI / (2.0 * std::f64::consts::SQRT_2) - 0.08;
    let p = -s + 2.0 * s * i as f64 / (n - 1) as f64;
    let q = -s + 2.0 * s * j as f64 / (n - 1) as f64;
    Complex64::new(FRAC_PI_2, 0.0) + Complex64::from_polar(1.0, PI / 4.0) * Complex64::new(p, q)
}

/// Residual probes in the open sector, kept clear of its boundary rays:
/// the compact halves are extended by zero across those rays, so a
/// finite-difference stencil must not straddle them.
fn sector_probes(mirror: bool, radius: f64) -> Vec<Complex64> {
    let sector = if mirror {
        Domain::SectorPiMinusDelta
    } else {
        Domain::SectorDelta
    };
    let mut out = Vec::new();
    for ir in 0..7 {
        let r = 0.25 + (radius * 0.6 - 0.25) * ir as f64 / 6.0;
        for it in 0..7 {
            let th = -PI / 4.0 + 0.06 + (PI / 2.0 - 0.12) * it as f64 / 6.0;
            let ray = Complex64::from_polar(r, th);
            let z = if mirror {
                Complex64::new(PI, 0.0) - ray
            } else {
                ray
            };
            if sector.boundary_distance(z) >= 0.1 {
                out.push(z);
            }
        }
    }
    out
}

/// Fourth-order central-difference Wirtinger derivative `∂f/∂z̄`.
fn dbar_fd(f: &(dyn Fn(Complex64) -> Complex64 + Send + Sync), z: Complex64) -> Complex64 {
    let h = 0.005;
    let d1 = |signs: [Complex64; 4]| {
        (-signs[3] + 8.0 * signs[2] - 8.0 * signs[1] + signs[0]) / (12.0 * h)
    };
    let fx = d1([
        f(z - 2.0 * h),
        f(z - h),
        f(z + h),
        f(z + 2.0 * h),
    ]);
    let ih = Complex64::new(0.0, h);
    let fy = d1([
        f(z - 2.0 * ih),
        f(z - ih),
        f(z + ih),
        f(z + 2.0 * ih),
    ]);
    0.5 * (fx + Complex64::new(0.0, 1.0) * fy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_step_properties() {
        assert_eq!(psi(-0.5), 0.0);
        assert_eq!(psi(1.5), 1.0);
        assert!((psi(0.5) - 0.5).abs() < 1e-15);
        assert!((psi_prime(0.5) - 2.0).abs() < 1e-12);
        assert_eq!(psi_prime(0.0), 0.0);
        // ψ' bounded
        for k in 1..100 {
            assert!(psi_prime(k as f64 / 100.0) <= 2.0 + 1e-12);
        }
    }

    #[test]
    fn chi_ramp_values() {
        let pu = PartitionOfUnity;
        // α(0) = π/4: at x = π/4 the ramp argument is 0, at 3π/4 it is 1
        assert_eq!(pu.chi1(Complex64::new(PI / 4.0, 0.0)), 0.0);
        assert_eq!(pu.chi1(Complex64::new(3.0 * PI / 4.0, 0.0)), 1.0);
        assert!((pu.chi1(Complex64::new(FRAC_PI_2, 0.0)) - 0.5).abs() < 1e-15);
        // partition sums to one on a 100x100 grid
        for i in 0..100 {
            for j in 0..100 {
                let z = Complex64::new(
                    -1.0 + 5.2 * i as f64 / 99.0,
                    -2.0 + 4.0 * j as f64 / 99.0,
                );
                let s = pu.chi1(z) + pu.chi2(z);
                assert_eq!(s, 1.0, "at {z}");
            }
        }
    }

    #[test]
    fn chi_support_localization() {
        let pu = PartitionOfUnity;
        // χ1 = 1 on Δ minus the band, χ1 = 0 on the mirrored sector minus it
        for k in 0..50 {
            let y = -1.5 + 3.0 * k as f64 / 49.0;
            let a = if y.abs() < FRAC_PI_2 { alpha(y) } else { 0.0 };
            let right = Complex64::new(FRAC_PI_2 + a + 0.01, y);
            let left = Complex64::new(FRAC_PI_2 - a - 0.01, y);
            assert_eq!(pu.chi1(right), 1.0, "right of band at y={y}");
            assert_eq!(pu.chi1(left), 0.0, "left of band at y={y}");
        }
    }

    #[test]
    fn dbar_chi_center_value() {
        let pu = PartitionOfUnity;
        // only the x-derivative acts at the symmetric center:
        // |dbar χ1| = ψ'(1/2)/π = 2/π
        let d = pu.dbar_chi1(Complex64::new(FRAC_PI_2, 0.0)).unwrap();
        assert!((d.norm() - 2.0 / PI).abs() < 1e-12, "got {}", d.norm());
        assert!(d.im.abs() < 1e-15);
        // zero outside the band
        let off = pu.dbar_chi1(Complex64::new(1.0, 1.2)).unwrap();
        assert_eq!(off, Complex64::new(0.0, 0.0));
        // vertex rejected
        assert!(pu.dbar_chi1(z0()).is_err());
    }

    #[test]
    fn dbar_chi_matches_finite_differences() {
        let pu = PartitionOfUnity;
        let h = 1e-5;
        for &z in &[
            Complex64::new(1.5, 0.3),
            Complex64::new(FRAC_PI_2, -0.9),
            Complex64::new(1.8, 1.1),
        ] {
            let fx = (pu.chi1(z + h) - pu.chi1(z - h)) / (2.0 * h);
            let fy = (pu.chi1(z + Complex64::new(0.0, h)) - pu.chi1(z - Complex64::new(0.0, h)))
                / (2.0 * h);
            let fd = 0.5 * Complex64::new(fx, fy);
            let an = pu.dbar_chi1(z).unwrap();
            assert!((fd - an).norm() < 1e-7, "z={z}: {fd} vs {an}");
        }
    }

    #[test]
    fn vertex_bound_finite_and_annuli_positive() {
        let pu = PartitionOfUnity;
        let sup = pu.vertex_bound_sup(400);
        assert!(sup.is_finite() && sup > 0.0, "sup {sup}");
        // stays bounded away from zero on shrinking annuli (frozen probe
        // values converge to ~0.50 from above)
        for k in 1..=8 {
            let v = pu.annulus_probe(k);
            assert!(v > 0.45, "annulus {k}: {v}");
            assert!(v < 1.0, "annulus {k}: {v}");
        }
    }

    #[test]
    fn partition_smoothness_probe() {
        assert!(build_partition(40).is_ok());
    }

    #[test]
    fn pompeiu_disc_identity() {
        // v = indicator of a disc: u(z) = r²/(z - c) outside it
        let c = Complex64::new(FRAC_PI_2, 0.05);
        let r = 0.12;
        // dedicated polar rule around the disc center
        let radial = quad::composite(0.0, r, 6, 16);
        let angular = quad::composite(0.0, 2.0 * PI, 12, 16);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (&rho, &wr) in radial.nodes.iter().zip(&radial.weights) {
            for (&th, &wt) in angular.nodes.iter().zip(&angular.weights) {
                nodes.push(c + Complex64::from_polar(rho, th));
                weights.push(wr * wt * rho);
            }
        }
        for &z in &[
            Complex64::new(2.5, 0.4),
            Complex64::new(0.6, -0.5),
            Complex64::new(4.0, 2.0),
        ] {
            let mut acc = Complex64::new(0.0, 0.0);
            for (&zeta, &w) in nodes.iter().zip(&weights) {
                acc += w / (z - zeta);
            }
            let u = acc / PI;
            let want = r * r / (z - c);
            assert!((u - want).norm() < 1e-10, "z={z}: {u} vs {want}");
        }
    }

    #[test]
    fn pompeiu_solves_dbar() {
        // datum from the vertex-collapsing source
        let phi0: Evaluator = Arc::new(|z| (z - z0()) * (z - z1()) * multiplier_q(z));
        let datum = DbarDatum::new(phi0, 2).unwrap();
        let solver = PompeiuSolver::new(datum);
        for &z in &[
            Complex64::new(FRAC_PI_2, 0.0),
            Complex64::new(1.4, 0.4),
            Complex64::new(1.9, -0.7),
        ] {
            let v_here = solver.datum().eval(z);
            let resid = (dbar_fd(&|w| solver.eval(w), z) - v_here).norm();
            assert!(resid < 1e-4, "z={z}: residual {resid}");
        }
        // zero datum gives the zero solution
        let zero_datum = DbarDatum::new(Arc::new(|_| Complex64::new(0.0, 0.0)), 1).unwrap();
        let zero_solver = PompeiuSolver::new(zero_datum);
        assert_eq!(
            zero_solver.eval(Complex64::new(1.0, 0.2)),
            Complex64::new(0.0, 0.0)
        );
        // decay at infinity: |u| = O(1/|z|)
        let far = solver.eval(Complex64::new(40.0, 10.0)).norm();
        let farther = solver.eval(Complex64::new(80.0, 20.0)).norm();
        assert!(farther < 0.6 * far, "far {far}, farther {farther}");
    }

    #[test]
    fn split_of_vertex_factor() {
        // φ = (z-z0)(z-z1): weighted norm² collapses to the area π²/2
        let phi: Evaluator = Arc::new(|z| (z - z0()) * (z - z1()));
        let split = cousin_split(phi, 1, 8.0).unwrap();
        let r = &split.report;
        assert!(
            (r.weighted_norm_phi * r.weighted_norm_phi - PI * PI / 2.0).abs() < 1e-6,
            "weighted norm² {}",
            r.weighted_norm_phi * r.weighted_norm_phi
        );
        assert!(r.identity_error < 1e-6, "identity {}", r.identity_error);
        assert!(r.dbar_residual_f1 < 1e-4, "dbar f1 {}", r.dbar_residual_f1);
        assert!(r.dbar_residual_f2 < 1e-4, "dbar f2 {}", r.dbar_residual_f2);
        assert!(r.norm_f1.is_finite() && r.norm_f2.is_finite());
        assert!(r.hormander_ratio.is_finite());
    }

    #[test]
    fn split_rejects_divergent_weight() {
        let phi: Evaluator = Arc::new(|_| Complex64::new(1.0, 0.0));
        match cousin_split(phi, 1, 8.0) {
            Err(Error::DivergentFunctional(msg)) => {
                assert!(msg.contains("annulus"), "{msg}");
            }
            _ => panic!("expected divergence rejection"),
        }
    }

    #[test]
    fn zero_splits_to_zero() {
        let phi: Evaluator = Arc::new(|_| Complex64::new(0.0, 0.0));
        let split = cousin_split(phi, 1, 8.0).unwrap();
        for z in [Complex64::new(1.0, 0.2), Complex64::new(2.5, -0.3)] {
            assert!((split.f1)(z).norm() < 1e-14);
            assert!((split.f2)(z).norm() < 1e-14);
        }
    }
}
