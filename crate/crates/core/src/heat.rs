//! Boundary-controlled heat dynamics in sine-coefficient space.
//!
//! States are truncated Fourier-sine coefficient sequences on `(0, π)`;
//! the input map sends boundary controls `(u_0, u_π)` on `(0, τ)` to the
//! state at time `τ`. Alongside the spectral representation this module
//! carries the pointwise Gaussian-kernel form: the principal operator
//! evaluates a heat-kernel time integral holomorphic on the sector, the
//! image-sum kernels and their remainders account for the mirror charges,
//! and least-squares synthesis inverts the moment system for analytic
//! targets.

use crate::error::{Error, Result};
use crate::grid::GridQuadrature;
use crate::quad;
use crate::signal::TimeSignal;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Truncated sine-coefficient state `x ↦ Σ a_n sin(n x)` on `(0, π)`.
#[derive(Debug, Clone)]
pub struct SineState {
    /// `coeffs[k]` is the coefficient of `sin((k+1) x)`.
    pub coeffs: Vec<Complex64>,
    pub time: f64,
}

impl SineState {
    pub fn zero(n: usize) -> SineState {
        SineState {
            coeffs: vec![Complex64::new(0.0, 0.0); n],
            time: 0.0,
        }
    }

    pub fn from_real(coeffs: &[f64]) -> SineState {
        SineState {
            coeffs: coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
            time: 0.0,
        }
    }

    pub fn modes(&self) -> usize {
        self.coeffs.len()
    }

    /// `ℓ²` norm of the coefficient sequence.
    pub fn norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Pointwise evaluation `Σ a_n sin(n x)`.
    pub fn eval(&self, x: f64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &a)| a * ((k + 1) as f64 * x).sin())
            .sum()
    }

    pub fn add(&self, other: &SineState) -> SineState {
        let n = self.modes().max(other.modes());
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for (k, c) in coeffs.iter_mut().enumerate() {
            if k < self.modes() {
                *c += self.coeffs[k];
            }
            if k < other.modes() {
                *c += other.coeffs[k];
            }
        }
        SineState {
            coeffs,
            time: self.time.max(other.time),
        }
    }

    /// CSV rows `n,re,im`.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "n,re,im")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            writeln!(out, "{},{},{}", k + 1, c.re, c.im)?;
        }
        Ok(())
    }
}

/// Boundary control pair on `(0, τ)`.
#[derive(Clone)]
pub struct ControlSignal {
    pub u0: TimeSignal,
    pub upi: TimeSignal,
    pub tau: f64,
}

impl ControlSignal {
    pub fn new(u0: TimeSignal, upi: TimeSignal) -> Result<ControlSignal> {
        let tau = u0
            .tau()
            .ok_or_else(|| Error::InvalidParameter("u0 must live on an interval".into()))?;
        let tau_pi = upi
            .tau()
            .ok_or_else(|| Error::InvalidParameter("u_pi must live on an interval".into()))?;
        if (tau - tau_pi).abs() > 1e-12 * tau.max(tau_pi) {
            return Err(Error::InvalidParameter(format!(
                "horizon mismatch: {tau} vs {tau_pi}"
            )));
        }
        Ok(ControlSignal { u0, upi, tau })
    }

    pub fn zero(tau: f64) -> ControlSignal {
        ControlSignal {
            u0: TimeSignal::on_interval(tau, |_| Complex64::new(0.0, 0.0)),
            upi: TimeSignal::on_interval(tau, |_| Complex64::new(0.0, 0.0)),
            tau,
        }
    }

    /// CSV rows `time,u0_re,u0_im,upi_re,upi_im` on a uniform grid.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W, samples: usize) -> Result<()> {
        writeln!(out, "time,u0_re,u0_im,upi_re,upi_im")?;
        for k in 0..samples {
            let t = self.tau * (k as f64 + 0.5) / samples as f64;
            let a = self.u0.eval_real(t);
            let b = self.upi.eval_real(t);
            writeln!(out, "{},{},{},{},{}", t, a.re, a.im, b.re, b.im)?;
        }
        Ok(())
    }
}

/// Heat semigroup: `a_n ↦ e^{-n² t} a_n`.
pub fn semigroup(f: &SineState, t: f64) -> SineState {
    assert!(t >= 0.0, "semigroup time must be nonnegative");
    SineState {
        coeffs: f
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &a)| {
                let n = (k + 1) as f64;
                a * (-n * n * t).exp()
            })
            .collect(),
        time: f.time + t,
    }
}

/// Shared time rule for the moment integrals `∫_0^τ e^{n²(σ-τ)} u(σ) dσ`,
/// geometrically refined toward `σ = τ` down to the scale of the highest
/// admissible mode.
fn moment_rule(tau: f64) -> quad::Rule1d {
    quad::composite_on(&quad::geometric_toward(0.0, tau, 8, 52), 32)
}

/// Input map `Φ_τ`: sine coefficients of the state reached at `τ` from
/// zero initial data,
/// `b_n = (2n/π)[∫ e^{n²(σ-τ)} u_0 dσ + (-1)^{n+1} ∫ e^{n²(σ-τ)} u_π dσ]`.
pub fn control_to_state(u: &ControlSignal, n_modes: usize) -> SineState {
    let tau = u.tau;
    let rule = moment_rule(tau);
    let s0: Vec<Complex64> = rule.nodes.iter().map(|&s| u.u0.eval_real(s)).collect();
    let spi: Vec<Complex64> = rule.nodes.iter().map(|&s| u.upi.eval_real(s)).collect();
    let mut coeffs = Vec::with_capacity(n_modes);
    for n in 1..=n_modes {
        let nn = (n * n) as f64;
        let mut i0 = Complex64::new(0.0, 0.0);
        let mut ipi = Complex64::new(0.0, 0.0);
        for ((&s, &w), (&v0, &vpi)) in rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .zip(s0.iter().zip(&spi))
        {
            let k = w * (nn * (s - tau)).exp();
            i0 += k * v0;
            ipi += k * vpi;
        }
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        coeffs.push(2.0 * n as f64 / PI * (i0 + sign * ipi));
    }
    SineState { coeffs, time: tau }
}

/// Principal operator `Φ̃_τ` evaluated at `z` with `Re z² > 0`:
/// `∫_0^τ z e^{-z²/(4(τ-σ))} / (2√π (τ-σ)^{3/2}) u(σ) dσ`.
///
/// With the substitution `v = z/(2√(τ-σ))` this is
/// `(2/√π) ∫ e^{-v²} u(τ(1 - v0²/v²)) dv` along a ray from
/// `v0 = z/(2√τ)`. For closed-form controls the path is taken horizontal,
/// where `|e^{-v²}| <= e^{-ρ²}` uniformly over the sector; sampled
/// controls integrate along the real-σ ray instead, which converges for
/// interior points at a cost growing toward the sector edge.
pub fn phi_tilde(u: &TimeSignal, z: Complex64) -> Result<Complex64> {
    let tau = u
        .tau()
        .ok_or_else(|| Error::InvalidParameter("phi_tilde expects an interval control".into()))?;
    if z.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // odd kernel: reduce the left sector to the right one
    if z.re < 0.0 {
        return Ok(-phi_tilde_right(u, tau, -z)?);
    }
    phi_tilde_right(u, tau, z)
}

fn phi_tilde_right(u: &TimeSignal, tau: f64, z: Complex64) -> Result<Complex64> {
    if (z * z).re <= 0.0 {
        return Err(Error::OutsideDomain(format!(
            "phi_tilde needs Re z² > 0, got z = {z}"
        )));
    }
    let v0 = z / (2.0 * tau.sqrt());
    if u.analytic.is_some() {
        Ok(phi_horizontal_path(u, tau, v0))
    } else {
        Ok(phi_real_sigma_path(u, tau, v0, z))
    }
}

fn phi_horizontal_path(u: &TimeSignal, tau: f64, v0: Complex64) -> Complex64 {
    let a = v0.re;
    let b = v0.im;
    // |e^{-(v0+ρ)²}| = e^{b²-a²} e^{-2aρ-ρ²} <= e^{-ρ²}; integrate while
    // the factor still matters
    let rho_max = ((43.0 + b * b).sqrt() - a).max(1.5);
    let mut breaks = vec![0.0];
    // resolve the argument scale |v0| near ρ = 0
    let r0 = v0.norm();
    if r0 < 0.5 {
        let mut x = (r0 * 1e-3).max(1e-9);
        while x < 0.5 {
            breaks.push(x);
            x *= 3.0;
        }
    }
    // uniform panels sized to the oscillation rate 2|b|
    let base = 8 + (b.abs() * rho_max / 3.0).ceil() as usize;
    let lo = *breaks.last().unwrap();
    for k in 1..=base {
        breaks.push(lo + (rho_max - lo) * k as f64 / base as f64);
    }
    let rule = quad::composite_on(&breaks, 24);
    let f = u.analytic.as_ref().unwrap();
    let mut acc = Complex64::new(0.0, 0.0);
    for (&rho, &w) in rule.nodes.iter().zip(&rule.weights) {
        let v = v0 + rho;
        let sigma = tau * (1.0 - v0 * v0 / (v * v));
        acc += w * (-(v * v)).exp() * f(sigma);
    }
    2.0 / PI.sqrt() * acc
}

fn phi_real_sigma_path(u: &TimeSignal, tau: f64, v0: Complex64, z: Complex64) -> Complex64 {
    // v = v0 (1+η) keeps σ = τ(1 - (1+η)^{-2}) real
    let re_v0sq = (v0 * v0).re;
    let im_v0sq = (v0 * v0).im.abs();
    let hmax = (43.0 / re_v0sq).sqrt().max(1.1);
    let oscillations = im_v0sq * hmax * hmax / (2.0 * PI);
    let panels = (8 + (3.0 * oscillations).ceil() as usize).min(40_000);
    let rule = quad::composite(0.0, hmax - 1.0, panels, 16);
    let mut acc = Complex64::new(0.0, 0.0);
    for (&eta, &w) in rule.nodes.iter().zip(&rule.weights) {
        let s = 1.0 + eta;
        let sigma = tau * (1.0 - 1.0 / (s * s));
        acc += w * (-v0 * v0 * s * s).exp() * u.eval_real(sigma);
    }
    z / (PI * tau).sqrt() * acc
}

/// Mirrored principal operator: `Φ̃̃_τ u (s) = Φ̃_τ u (π - s)`.
pub fn phi_tilde_mirror(u: &TimeSignal, z: Complex64) -> Result<Complex64> {
    phi_tilde(u, Complex64::new(PI, 0.0) - z)
}

/// Image-sum heat kernel
/// `K̃_0(σ, z) = -(πσ)^{-1/2} Σ_{1<=|m|<=M} e^{-(z+2mπ)²/(4σ)}`,
/// returned with a bound on the omitted tail (first omitted terms for the
/// two signs, doubled for the geometric remainder).
pub fn kernel_k0_tilde(sigma: f64, z: Complex64, m_cutoff: usize) -> (Complex64, f64) {
    assert!(sigma > 0.0);
    let pref = -1.0 / (PI * sigma).sqrt();
    let mut sum = Complex64::new(0.0, 0.0);
    for m in 1..=m_cutoff as i64 {
        for sgn in [1.0, -1.0] {
            let w = z + 2.0 * PI * m as f64 * sgn;
            sum += (-(w * w) / (4.0 * sigma)).exp();
        }
    }
    let m1 = (m_cutoff + 1) as f64;
    let closest = (2.0 * m1 * PI - z.norm()).max(0.0);
    let tail = 4.0 / (PI * sigma).sqrt() * (-(closest * closest) / (4.0 * sigma)).exp();
    (pref * sum, tail)
}

/// Cosine-series heat kernel `K_0(σ, x) = -(2/π)(Σ e^{-n²σ} cos(nx) + 1)`.
pub fn kernel_k0_series(sigma: f64, x: f64, n_cutoff: usize) -> f64 {
    let mut s = 0.0;
    for n in 1..=n_cutoff {
        let nf = n as f64;
        s += (-nf * nf * sigma).exp() * (nf * x).cos();
    }
    -2.0 / PI * (s + 1.0)
}

/// Remainder operator `R_{0,τ}`: the mirror-charge part of the input map,
/// `Σ_{1<=|m|<=M} Φ̃_τ u (z + 2mπ)`.
pub fn remainder_r0(u: &TimeSignal, z: Complex64, m_cutoff: usize) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 1..=m_cutoff as i64 {
        for sgn in [1.0, -1.0] {
            let w = z + 2.0 * PI * m as f64 * sgn;
            acc += phi_tilde(u, w)?;
        }
    }
    Ok(acc)
}

/// `R_{π,τ} u (s) = R_{0,τ} u (π - s)`.
pub fn remainder_rpi(u: &TimeSignal, z: Complex64, m_cutoff: usize) -> Result<Complex64> {
    remainder_r0(u, Complex64::new(PI, 0.0) - z, m_cutoff)
}

/// Solution snapshots `y(t) = T_t f + Φ_t u` for `t` in `t_grid ⊂ [0, τ]`.
pub fn simulate(f: &SineState, u: &ControlSignal, t_grid: &[f64]) -> Result<Vec<SineState>> {
    if t_grid.is_empty() {
        return Err(Error::InvalidParameter("empty time grid".into()));
    }
    let n = f.modes().max(1);
    let mut out = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if t < 0.0 || t > u.tau + 1e-12 {
            return Err(Error::OutsideDomain(format!(
                "snapshot time {t} outside [0, {}]",
                u.tau
            )));
        }
        let free = semigroup(f, t);
        let forced = if t == 0.0 {
            SineState::zero(n)
        } else {
            let u0 = u.u0.clone();
            let upi = u.upi.clone();
            let restricted = ControlSignal {
                u0: TimeSignal::on_interval(t, move |s| u0.eval_real(s.re)),
                upi: TimeSignal::on_interval(t, move |s| upi.eval_real(s.re)),
                tau: t,
            };
            control_to_state(&restricted, n)
        };
        let mut y = free.add(&forced);
        y.time = t;
        out.push(y);
    }
    Ok(out)
}

/// Legendre polynomial `P_k` at a complex argument.
pub fn legendre_complex(k: usize, x: Complex64) -> Complex64 {
    let mut p0 = Complex64::new(1.0, 0.0);
    if k == 0 {
        return p0;
    }
    let mut p1 = x;
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Orthonormal Legendre basis element on `(0, τ)`:
/// `p_k(σ) = √((2k+1)/τ) P_k(2σ/τ - 1)`.
pub fn legendre_basis(k: usize, tau: f64) -> impl Fn(Complex64) -> Complex64 {
    move |sigma| {
        let x = 2.0 * sigma / tau - 1.0;
        ((2 * k + 1) as f64 / tau).sqrt() * legendre_complex(k, x)
    }
}

/// Time signal for a Legendre coefficient vector (complex coefficients).
pub fn legendre_series_signal(coeffs: Vec<Complex64>, tau: f64) -> TimeSignal {
    TimeSignal::on_interval(tau, move |sigma| {
        let x = 2.0 * sigma / tau - 1.0;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &c) in coeffs.iter().enumerate() {
            acc += c * ((2 * k + 1) as f64 / tau).sqrt() * legendre_complex(k, x);
        }
        acc
    })
}

/// How the Tikhonov parameter is chosen.
#[derive(Debug, Clone, Copy)]
pub enum LambdaChoice {
    Fixed(f64),
    /// Sweep `1e-14 .. 1e-2` geometrically and keep the smallest residual.
    Sweep,
}

#[derive(Clone)]
pub struct SynthesisOutcome {
    pub control: ControlSignal,
    pub residual: f64,
    pub lambda: f64,
    pub condition_estimate: f64,
    pub k: usize,
    pub n: usize,
    /// `(λ, residual, control_norm)` of the sweep.
    pub lcurve: Vec<(f64, f64, f64)>,
}

/// Tikhonov-regularized least-squares synthesis: find Legendre
/// coefficients `c` minimizing `‖M c - b‖² + λ‖c‖²` where `M` maps basis
/// controls to sine coefficients through the input map.
///
/// The moment matrix decays like `e^{-n²τ}` across modes, so the plain
/// system is severely ill-conditioned; the SVD filter `σ/(σ² + λ)` keeps
/// the solve stable and makes the λ sweep cheap.
pub fn synthesize_lsq(
    target: &SineState,
    tau: f64,
    k_basis: usize,
    lambda: LambdaChoice,
) -> Result<SynthesisOutcome> {
    let n = target.modes();
    if n == 0 || k_basis == 0 {
        return Err(Error::InvalidParameter("empty target or basis".into()));
    }
    // moment matrix: columns are basis controls on u0 then on u_pi
    let rule = moment_rule(tau);
    let mut basis_vals: Vec<Vec<f64>> = Vec::with_capacity(k_basis);
    for k in 0..k_basis {
        let p = legendre_basis(k, tau);
        basis_vals.push(
            rule.nodes
                .iter()
                .map(|&s| p(Complex64::new(s, 0.0)).re)
                .collect(),
        );
    }
    let mut m = DMatrix::<f64>::zeros(n, 2 * k_basis);
    for row in 0..n {
        let nn = ((row + 1) * (row + 1)) as f64;
        let kernel: Vec<f64> = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&s, &w)| w * (nn * (s - tau)).exp())
            .collect();
        let scale = 2.0 * (row + 1) as f64 / PI;
        let sign = if (row + 1) % 2 == 1 { 1.0 } else { -1.0 };
        for (k, vals) in basis_vals.iter().enumerate() {
            let moment: f64 = kernel.iter().zip(vals).map(|(a, b)| a * b).sum();
            m[(row, k)] = scale * moment;
            m[(row, k_basis + k)] = sign * scale * moment;
        }
    }
    let svd = m.clone().svd(true, true);
    let u_mat = svd.u.as_ref().unwrap();
    let v_t = svd.v_t.as_ref().unwrap();
    let sing = &svd.singular_values;
    let smax = sing.max();

    let b_re = nalgebra::DVector::from_iterator(n, target.coeffs.iter().map(|c| c.re));
    let b_im = nalgebra::DVector::from_iterator(n, target.coeffs.iter().map(|c| c.im));
    let ub_re = u_mat.transpose() * &b_re;
    let ub_im = u_mat.transpose() * &b_im;
    let b_norm = target.norm().max(f64::MIN_POSITIVE);

    let solve = |lam: f64| -> (nalgebra::DVector<f64>, nalgebra::DVector<f64>, f64, f64) {
        let mut c_re = nalgebra::DVector::zeros(2 * k_basis);
        let mut c_im = nalgebra::DVector::zeros(2 * k_basis);
        for i in 0..sing.len().min(ub_re.len()) {
            let s = sing[i];
            let filt = s / (s * s + lam);
            c_re += v_t.row(i).transpose() * (filt * ub_re[i]);
            c_im += v_t.row(i).transpose() * (filt * ub_im[i]);
        }
        let r_re = &m * &c_re - &b_re;
        let r_im = &m * &c_im - &b_im;
        let resid = (r_re.norm_squared() + r_im.norm_squared()).sqrt() / b_norm;
        let cnorm = (c_re.norm_squared() + c_im.norm_squared()).sqrt();
        (c_re, c_im, resid, cnorm)
    };

    let lambdas: Vec<f64> = match lambda {
        LambdaChoice::Fixed(l) => vec![l],
        LambdaChoice::Sweep => (0..=16).map(|j| 1e-18 * 10f64.powi(j)).collect(),
    };
    let mut lcurve = Vec::with_capacity(lambdas.len());
    let mut best: Option<(f64, f64)> = None; // (residual, lambda)
    for &lam in &lambdas {
        let (_, _, resid, cnorm) = solve(lam);
        lcurve.push((lam, resid, cnorm));
        if best.is_none_or(|(r, _)| resid < r) {
            best = Some((resid, lam));
        }
    }
    let (_, lam_star) = best.unwrap();
    let (c_re, c_im, residual, _) = solve(lam_star);

    let smin_reg = sing
        .iter()
        .map(|&s| (s * s + lam_star).sqrt())
        .fold(f64::INFINITY, f64::min);
    let cond_reg = (smax * smax + lam_star).sqrt() / smin_reg;
    if cond_reg > 1e12 {
        return Err(Error::IllConditioned(cond_reg));
    }

    let coef = |off: usize| -> Vec<Complex64> {
        (0..k_basis)
            .map(|k| Complex64::new(c_re[off + k], c_im[off + k]))
            .collect()
    };
    let control = ControlSignal {
        u0: legendre_series_signal(coef(0), tau),
        upi: legendre_series_signal(coef(k_basis), tau),
        tau,
    };
    Ok(SynthesisOutcome {
        control,
        residual,
        lambda: lam_star,
        condition_estimate: smax / sing.min().max(f64::MIN_POSITIVE),
        k: k_basis,
        n,
        lcurve,
    })
}

/// Closed-form targets whose preimage under the principal chain is known.
pub enum PrincipalTarget {
    /// `erfc(z/(2√τ))`, the image of the constant control 1.
    ErfcProfile,
    Zero,
    /// The image of an explicit half-line signal under the Laplace-sector
    /// chain; inverted through the time change when the support condition
    /// holds.
    HalfLine(TimeSignal),
}

/// Invert the principal chain on its closed-form dictionary: returns the
/// boundary control `u_0` with the principal image equal to the target.
pub fn synthesize_chain(target: PrincipalTarget, tau: f64) -> Result<ControlSignal> {
    let zero = TimeSignal::on_interval(tau, |_| Complex64::new(0.0, 0.0));
    let u0 = match target {
        PrincipalTarget::ErfcProfile => TimeSignal::on_interval(tau, |_| Complex64::new(1.0, 0.0)),
        PrincipalTarget::Zero => zero.clone(),
        PrincipalTarget::HalfLine(h) => {
            crate::transforms::apply_t_inverse(&h, tau).map_err(|e| match e {
                Error::SupportViolation { cutoff, .. } => Error::NotInPrincipalRange { cutoff },
                other => other,
            })?
        }
    };
    ControlSignal::new(u0, zero)
}

/// Entire function `z ↦ 2z·Lh(z²)` for `h` supported in `(0, t1)`; the
/// compact support makes the Laplace transform entire, so the value is
/// finite at every complex point.
pub fn compact_chain_element<F>(h: F, t1: f64) -> impl Fn(Complex64) -> Complex64
where
    F: Fn(f64) -> f64,
{
    let rule = quad::composite_on(&quad::geometric_toward(0.0, t1, 8, 30), 24);
    let samples: Vec<(f64, f64)> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &w)| (t, w * h(t)))
        .collect();
    move |z: Complex64| {
        let w = z * z;
        let mut acc = Complex64::new(0.0, 0.0);
        for &(t, hw) in &samples {
            acc += hw * (-w * t).exp();
        }
        2.0 * z * acc / PI.sqrt()
    }
}

/// Norm of the remainder operator over a sampled unit basis, measured in
/// the Bergman norm over the square: the operator-norm proxy for the
/// vanishing of the remainders as `τ -> 0`.
pub fn remainder_norm_proxy(
    tau: f64,
    basis_size: usize,
    m_cutoff: usize,
    square_grid: &GridQuadrature,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for k in 0..basis_size {
        let p = legendre_basis(k, tau);
        let u = TimeSignal::on_interval(tau, p);
        let mut norm2 = 0.0;
        for (&z, &w) in square_grid.nodes.iter().zip(&square_grid.weights) {
            let v = remainder_r0(&u, z, m_cutoff)?;
            norm2 += w * v.norm_sqr();
        }
        worst = worst.max(norm2.sqrt());
    }
    Ok(worst)
}

/// Plain tensor Gauss-Legendre grid on the square in rotated coordinates,
/// for smooth integrands (no corner refinement).
pub fn plain_square_grid(pts_per_axis: usize) -> GridQuadrature {
    let s = PI / (2.0 * std::f64::consts::SQRT_2);
    let axis = quad::composite(-s, s, pts_per_axis.div_ceil(16).max(1), 16);
    let rot = Complex64::from_polar(1.0, PI / 4.0);
    let center = Complex64::new(PI / 2.0, 0.0);
    let mut nodes = Vec::with_capacity(axis.len() * axis.len());
    let mut weights = Vec::with_capacity(axis.len() * axis.len());
    for (&p, &wp) in axis.nodes.iter().zip(&axis.weights) {
        for (&q, &wq) in axis.nodes.iter().zip(&axis.weights) {
            nodes.push(center + rot * Complex64::new(p, q));
            weights.push(wp * wq);
        }
    }
    GridQuadrature {
        nodes,
        weights,
        measure: crate::grid::Measure::Area2D,
        du: None,
        tol: 1e-10,
    }
}

/// Deterministic family of smooth test controls vanishing at both ends of
/// `(0, τ)`: `σ(τ-σ) P_j(2σ/τ-1)`, `j = 0..count`.
pub fn smooth_control_family(tau: f64, count: usize) -> Vec<TimeSignal> {
    (0..count)
        .map(|j| {
            TimeSignal::on_interval(tau, move |s| {
                let x = 2.0 * s / tau - 1.0;
                s * (tau - s) * legendre_complex(j, x)
            })
        })
        .collect()
}
