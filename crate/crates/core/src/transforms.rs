//! The unitary chain from controls to sector Bergman functions, and the
//! harmonic-analysis transforms on the line.
//!
//! Chain: `T` reparameterizes `L²(0,τ)` onto the half-line with `dt/t`,
//! the normalized Laplace transform maps unitarily onto `A²` of the right
//! half-plane, and `G f (z) = 2 z f(z²)` carries that onto `A²` of the
//! sector. On the line side: the Cauchy transform of compactly supported
//! data, its Poisson / conjugate-Poisson split, and the uniform strip
//! integrals that witness its Smirnov regularity.

use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::grid::GridQuadrature;
use crate::quad;
use crate::signal::{LineSignal, TimeSignal};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// `(T f)(t) = f(τ - 1/(4t)) / (2√t)` for `t > 1/(4τ)`, zero below; an
/// isometry of `L²(0, τ)` onto `L²((1/(4τ), ∞), dt/t)`.
pub fn apply_t(f: &TimeSignal, s_max: f64, panels: usize) -> Result<TimeSignal> {
    let tau = f
        .tau()
        .ok_or_else(|| Error::InvalidParameter("apply_t expects an interval signal".into()))?;
    let cutoff = 1.0 / (4.0 * tau);
    let fc = f.clone();
    Ok(TimeSignal::on_half_line(s_max, panels, Some(cutoff), move |t| {
        let t = t.re;
        if t > cutoff {
            fc.eval_real(tau - 1.0 / (4.0 * t)) / (2.0 * t.sqrt())
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Inverse of [`apply_t`] on its range: `f(σ) = 2 √t g(t)` with
/// `t = 1/(4(τ - σ))`. Rejects signals with squared mass below the cutoff.
pub fn apply_t_inverse(g: &TimeSignal, tau: f64) -> Result<TimeSignal> {
    if g.tau().is_some() {
        return Err(Error::InvalidParameter(
            "apply_t_inverse expects a half-line signal".into(),
        ));
    }
    let cutoff = 1.0 / (4.0 * tau);
    let total = g.norm_sqr();
    let below: f64 = g
        .grid
        .nodes
        .iter()
        .zip(&g.grid.weights)
        .zip(&g.values)
        .filter(|((t, _), _)| t.re <= cutoff)
        .map(|((_, &w), v)| w * v.norm_sqr())
        .sum();
    if total > 0.0 && below / total > 1e-10 {
        return Err(Error::SupportViolation {
            cutoff,
            fraction: below / total,
        });
    }
    let gc = g.clone();
    Ok(TimeSignal::on_interval(tau, move |sigma| {
        let t = 1.0 / (4.0 * (tau - sigma.re));
        if t <= cutoff || !t.is_finite() {
            Complex64::new(0.0, 0.0)
        } else {
            2.0 * t.sqrt() * gc.eval_real(t)
        }
    }))
}

/// Normalized Laplace transform `(1/√π) ∫_0^∞ e^{-st} f(t) dt` of a
/// half-line signal, evaluated pointwise in the open right half-plane.
pub fn laplace(f: &TimeSignal, s: Complex64) -> Result<Complex64> {
    if s.re <= 0.0 {
        return Err(Error::OutsideDomain(format!(
            "Laplace evaluation at Re s = {} <= 0",
            s.re
        )));
    }
    // dt/t grid: ∫ e^{-st} f dt = Σ w_i e^{-s t_i} t_i f_i
    let mut acc = Complex64::new(0.0, 0.0);
    for ((&t, &w), v) in f.grid.nodes.iter().zip(&f.grid.weights).zip(&f.values) {
        acc += w * (-s * t.re).exp() * t.re * v;
    }
    Ok(acc / PI.sqrt())
}

/// Laplace transform as a closure for composition.
pub fn laplace_evaluator(f: &TimeSignal) -> impl Fn(Complex64) -> Result<Complex64> + '_ {
    move |s| laplace(f, s)
}

/// `(G F)(z) = 2 z F(z²)`, the unitary from `A²` of the right half-plane
/// onto `A²` of the sector.
pub fn apply_g<F>(f: F) -> impl Fn(Complex64) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    move |z| 2.0 * z * f(z * z)
}

/// `(G⁻¹ g)(s) = g(√s) / (2√s)` with the principal root (cut on the
/// negative reals, away from the image of the sector).
pub fn apply_g_inverse<G>(g: G) -> impl Fn(Complex64) -> Complex64
where
    G: Fn(Complex64) -> Complex64,
{
    move |s| {
        let r = s.sqrt();
        g(r) / (2.0 * r)
    }
}

/// Full chain `G ∘ L ∘ T` sampled on a sector grid.
pub fn chain_field(
    u: &TimeSignal,
    sector_grid: Arc<GridQuadrature>,
    s_max: f64,
    panels: usize,
) -> Result<ComplexField> {
    let g = apply_t(u, s_max, panels)?;
    let values: Result<Vec<Complex64>> = sector_grid
        .nodes
        .iter()
        .map(|&z| Ok(2.0 * z * laplace(&g, z * z)?))
        .collect();
    ComplexField::from_samples(sector_grid, values?)
}

/// Closed-form Laplace dictionary member `t^a e^{-bt}` with its transform
/// `Γ(a+1) / (√π (s+b)^{a+1})` and its squared `dt/t` norm
/// `Γ(2a) / (2b)^{2a}`.
#[derive(Debug, Clone, Copy)]
pub struct PowExp {
    pub a: f64,
    pub b: f64,
}

impl PowExp {
    pub fn eval(&self, t: f64) -> f64 {
        t.powf(self.a) * (-self.b * t).exp()
    }

    pub fn laplace(&self, s: Complex64) -> Complex64 {
        gamma(self.a + 1.0) / PI.sqrt() * (s + self.b).powf(-(self.a + 1.0))
    }

    pub fn norm_sqr_log(&self) -> f64 {
        gamma(2.0 * self.a) / (2.0 * self.b).powf(2.0 * self.a)
    }
}

/// Lanczos approximation of the Gamma function, sufficient for the
/// dictionary exponents used here.
pub fn gamma(x: f64) -> f64 {
    const G: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = G[0];
        let t = x + 7.5;
        for (i, &g) in G.iter().enumerate().skip(1) {
            a += g / (x + i as f64);
        }
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

/// Cauchy transform `(C g)(z) = (1/iπ) ∫ g(t)/(t - z) dt` of a compactly
/// supported line signal, for `Im z > 0`.
///
/// Panels split at the projection of `z` onto the support and refine
/// geometrically toward it; within distance 0.05 of the support the
/// constant term `g(x*)` is subtracted and integrated in closed form.
pub fn cauchy_transform(g: &LineSignal, z: Complex64) -> Result<Complex64> {
    if z.im <= 0.0 {
        return Err(Error::OutsideDomain(format!(
            "Cauchy transform at Im z = {} <= 0",
            z.im
        )));
    }
    let (a, b) = g.support;
    let xs = z.re.clamp(a, b);
    let dist = (z - Complex64::new(xs, 0.0)).norm();

    // panel marks: support ends, datum breakpoints, projection point
    let mut marks = vec![a, b, xs];
    marks.extend(g.breakpoints.iter().copied());
    marks.sort_by(|p, q| p.partial_cmp(q).unwrap());
    marks.dedup_by(|p, q| (*p - *q).abs() < 1e-14);

    let mut breaks = Vec::new();
    for w in marks.windows(2) {
        // refine toward both ends of each mark interval; near-singularity
        // resolution down to the height of z
        let levels = (((w[1] - w[0]) / z.im.max(1e-12)).log2().ceil() as usize + 4).clamp(6, 48);
        let mut fwd = quad::geometric_toward(w[0], w[1], 2, levels);
        let mut bwd: Vec<f64> = quad::geometric_toward(-w[1], -w[0], 2, levels)
            .into_iter()
            .map(|x| -x)
            .collect();
        breaks.append(&mut fwd);
        breaks.append(&mut bwd);
    }
    breaks.sort_by(|p, q| p.partial_cmp(q).unwrap());
    breaks.dedup_by(|p, q| (*p - *q).abs() < 1e-15);
    let rule = quad::composite_on(&breaks, 16);

    let subtract = dist < 0.05;
    let g_star = if subtract { g.eval(xs) } else { Complex64::new(0.0, 0.0) };
    let mut acc = Complex64::new(0.0, 0.0);
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        acc += w * (g.eval(t) - g_star) / (t - z);
    }
    if subtract {
        // ∫_a^b dt/(t - z) = Log(b - z) - Log(a - z); the segment does not
        // wind around z so the principal value of the ratio is correct
        acc += g_star * ((b - z) / (a - z)).ln();
    }
    Ok(acc / Complex64::new(0.0, PI))
}

/// Poisson convolution `(P_y * g)(x)` with `P_y(x) = y/(π(x² + y²))`.
pub fn poisson(g: &LineSignal, z: Complex64) -> Result<Complex64> {
    kernel_convolution(g, z, false)
}

/// Conjugate Poisson convolution `(Q_y * g)(x)` with
/// `Q_y(x) = x/(π(x² + y²))`.
pub fn conjugate_poisson(g: &LineSignal, z: Complex64) -> Result<Complex64> {
    kernel_convolution(g, z, true)
}

fn kernel_convolution(g: &LineSignal, z: Complex64, conjugate: bool) -> Result<Complex64> {
    if z.im <= 0.0 {
        return Err(Error::OutsideDomain("convolution needs Im z > 0".into()));
    }
    let (x, y) = (z.re, z.im);
    let (a, b) = g.support;
    let xs = x.clamp(a, b);
    let mut marks = vec![a, b, xs];
    marks.extend(g.breakpoints.iter().copied());
    marks.sort_by(|p, q| p.partial_cmp(q).unwrap());
    marks.dedup_by(|p, q| (*p - *q).abs() < 1e-14);
    let mut breaks = Vec::new();
    for w in marks.windows(2) {
        let levels = (((w[1] - w[0]) / y.max(1e-12)).log2().ceil() as usize + 4).clamp(6, 48);
        breaks.extend(quad::geometric_toward(w[0], w[1], 2, levels));
        breaks.extend(
            quad::geometric_toward(-w[1], -w[0], 2, levels)
                .into_iter()
                .map(|v| -v),
        );
    }
    breaks.sort_by(|p, q| p.partial_cmp(q).unwrap());
    breaks.dedup_by(|p, q| (*p - *q).abs() < 1e-15);
    let rule = quad::composite_on(&breaks, 16);
    let mut acc = Complex64::new(0.0, 0.0);
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let d = x - t;
        let k = if conjugate {
            d / (PI * (d * d + y * y))
        } else {
            y / (PI * (d * d + y * y))
        };
        acc += w * k * g.eval(t);
    }
    Ok(acc)
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct StripReport {
    pub per_y: Vec<(f64, f64)>,
    pub max: f64,
}

/// `∫_{-L}^{L} |C g (x + iy)| dx` for each height in `y_list`; uniform
/// boundedness down to small `y` is the Smirnov witness for `L log L` data.
pub fn strip_integral_check(g: &LineSignal, l: f64, y_list: &[f64]) -> Result<StripReport> {
    if g.support.0 <= -l || g.support.1 >= l {
        return Err(Error::InvalidParameter(
            "support must lie strictly inside (-L, L)".into(),
        ));
    }
    let mut per_y = Vec::with_capacity(y_list.len());
    let mut max = 0.0f64;
    for &y in y_list {
        let mut marks = vec![-l, g.support.0, g.support.1, l];
        marks.extend(g.breakpoints.iter().copied());
        marks.sort_by(|p, q| p.partial_cmp(q).unwrap());
        marks.dedup_by(|p, q| (*p - *q).abs() < 1e-14);
        let mut breaks = Vec::new();
        for w in marks.windows(2) {
            let levels = (((w[1] - w[0]) / y.max(1e-9)).log2().ceil() as usize + 2).clamp(4, 40);
            breaks.extend(quad::geometric_toward(w[0], w[1], 3, levels));
            breaks.extend(
                quad::geometric_toward(-w[1], -w[0], 3, levels)
                    .into_iter()
                    .map(|v| -v),
            );
        }
        breaks.sort_by(|p, q| p.partial_cmp(q).unwrap());
        breaks.dedup_by(|p, q| (*p - *q).abs() < 1e-15);
        let rule = quad::composite_on(&breaks, 12);
        let mut acc = 0.0;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            acc += w * cauchy_transform(g, Complex64::new(x, y))?.norm();
        }
        per_y.push((y, acc));
        max = max.max(acc);
    }
    Ok(StripReport { per_y, max })
}

/// Hardy-Littlewood spot check data: for `h_a(w) = (1 - w)^{-a}` on the
/// unit disc, the area norm and the `H¹` boundary norm.
pub fn hardy_littlewood_ratio(a: f64) -> (f64, f64) {
    // A² norm: polar rule with radial refinement toward the boundary
    let mut rbreaks: Vec<f64> = vec![0.0];
    let mut off = 1.0f64;
    for _ in 0..40 {
        off *= 0.5;
        rbreaks.push(1.0 - off);
    }
    let radial = quad::composite_on(&rbreaks, 16);
    let angular = quad::composite(0.0, PI, 24, 16);
    let mut norm2 = 0.0;
    for (&r, &wr) in radial.nodes.iter().zip(&radial.weights) {
        for (&th, &wt) in angular.nodes.iter().zip(&angular.weights) {
            let w = Complex64::from_polar(r, th);
            // symmetric in θ: integrate the upper half and double
            norm2 += 2.0 * wr * wt * r * (1.0 - w).norm().powf(-2.0 * a);
        }
    }
    // H¹ norm: sup over radii of the mean of |h_a| on circles
    let mut h1 = 0.0f64;
    for &r in &[0.9, 0.99, 0.999, 0.9999, 0.99999, 1.0 - 1e-6] {
        let mut breaks: Vec<f64> = vec![PI];
        let mut o = PI;
        for _ in 0..40 {
            o *= 0.5;
            breaks.push(o);
        }
        breaks.push(0.0);
        breaks.sort_by(|p, q| p.partial_cmp(q).unwrap());
        let rule = quad::composite_on(&breaks, 16);
        let mean: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&th, &w)| w * (1.0 - Complex64::from_polar(r, th)).norm().powf(-a))
            .sum::<f64>()
            * 2.0
            / (2.0 * PI);
        h1 = h1.max(mean);
    }
    (norm2.sqrt(), h1)
}
