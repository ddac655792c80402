//! Time signals on `(0, τ)` and on the half-line, and compactly supported
//! line signals.
//!
//! Sampled signals keep their composite-panel structure so that they can be
//! re-evaluated off-grid by panel-local barycentric interpolation, which is
//! spectrally accurate for smooth data on Gauss-Legendre panels.

use crate::error::{Error, Result};
use crate::field::Evaluator;
use crate::grid::{self, GridQuadrature, Measure};
use crate::quad;
use num_complex::Complex64;
use std::sync::Arc;

/// Barycentric interpolation over the panels of a composite rule.
///
/// `breaks` are panel boundaries in the parameter coordinate, `nodes` the
/// flattened per-panel nodes (each panel has `pts` of them, ascending).
#[derive(Clone)]
pub struct PanelInterp {
    pub breaks: Vec<f64>,
    pub pts: usize,
    pub nodes: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl PanelInterp {
    /// Evaluate at `x` by barycentric interpolation on the enclosing panel.
    pub fn eval(&self, x: f64) -> Complex64 {
        let npanels = self.breaks.len() - 1;
        let mut p = match self
            .breaks
            .binary_search_by(|b| b.partial_cmp(&x).unwrap())
        {
            Ok(i) => i,
            Err(i) => i.wrapping_sub(1),
        };
        p = p.min(npanels - 1);
        let lo = p * self.pts;
        let xs = &self.nodes[lo..lo + self.pts];
        let vs = &self.values[lo..lo + self.pts];
        // second barycentric form; weights computed on the fly (pts is small)
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        let scale = (self.breaks[p + 1] - self.breaks[p]).max(f64::MIN_POSITIVE);
        for (j, (&xj, &vj)) in xs.iter().zip(vs).enumerate() {
            let d = x - xj;
            if d.abs() < 1e-300 {
                return vj;
            }
            let mut w = 1.0;
            for (k, &xk) in xs.iter().enumerate() {
                if k != j {
                    w *= (xj - xk) / scale;
                }
            }
            let c = 1.0 / (w * d);
            num += c * vj;
            den += c;
        }
        num / den
    }
}

/// Domain of a time signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeDomain {
    /// `(0, τ)` with Lebesgue measure.
    Interval { tau: f64 },
    /// `(0, ∞)` with `dt/t`, covered by `t = e^s`, `|s| <= s_max`.
    HalfLine { s_max: f64 },
}

/// A time-sampled signal with finite L² norm under its measure.
#[derive(Clone)]
pub struct TimeSignal {
    pub domain: TimeDomain,
    pub grid: Arc<GridQuadrature>,
    pub values: Vec<Complex64>,
    /// Closed form, evaluable at complex argument when available.
    pub analytic: Option<Evaluator>,
    interp: PanelInterp,
}

impl TimeSignal {
    /// Sample `f` on `(0, τ)` with panels refined toward `σ = τ`.
    pub fn on_interval<F>(tau: f64, f: F) -> TimeSignal
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self::on_interval_res(tau, f, 16, 30)
    }

    pub fn on_interval_res<F>(tau: f64, f: F, panels: usize, levels: usize) -> TimeSignal
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        assert!(tau > 0.0, "horizon must be positive");
        let breaks = quad::geometric_toward(0.0, tau, panels, levels);
        let rule = quad::composite_on(&breaks, 32);
        let values: Vec<Complex64> = rule.nodes.iter().map(|&s| f(Complex64::new(s, 0.0))).collect();
        let grid = Arc::new(GridQuadrature {
            nodes: rule.nodes.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            weights: rule.weights.clone(),
            measure: Measure::Lebesgue1D,
            du: None,
            tol: 1e-13,
        });
        TimeSignal {
            domain: TimeDomain::Interval { tau },
            grid,
            values: values.clone(),
            analytic: Some(Arc::new(f)),
            interp: PanelInterp {
                breaks,
                pts: 32,
                nodes: rule.nodes,
                values,
            },
        }
    }

    /// Interval signal from samples on an existing interval grid built by
    /// [`TimeSignal::on_interval`]-compatible panels.
    pub fn from_interval_samples(
        tau: f64,
        breaks: Vec<f64>,
        grid: Arc<GridQuadrature>,
        values: Vec<Complex64>,
    ) -> Result<TimeSignal> {
        if values.len() != grid.nodes.len() {
            return Err(Error::InvalidParameter("sample/grid length mismatch".into()));
        }
        let nodes: Vec<f64> = grid.nodes.iter().map(|z| z.re).collect();
        Ok(TimeSignal {
            domain: TimeDomain::Interval { tau },
            grid,
            values: values.clone(),
            analytic: None,
            interp: PanelInterp {
                breaks,
                pts: 32,
                nodes,
                values,
            },
        })
    }

    /// Sample `g` on the log half-line grid, optionally forcing a panel
    /// break at a jump location.
    pub fn on_half_line<F>(s_max: f64, panels: usize, cutoff: Option<f64>, g: F) -> TimeSignal
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        let grid = Arc::new(grid::half_line_log_rule(s_max, panels, cutoff));
        let values: Vec<Complex64> = grid.nodes.iter().map(|&t| g(t)).collect();
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
        let nodes_s: Vec<f64> = grid.nodes.iter().map(|t| t.re.ln()).collect();
        TimeSignal {
            domain: TimeDomain::HalfLine { s_max },
            grid,
            values: values.clone(),
            analytic: Some(Arc::new(g)),
            interp: PanelInterp {
                breaks,
                pts: 32,
                nodes: nodes_s,
                values,
            },
        }
    }

    pub fn tau(&self) -> Option<f64> {
        match self.domain {
            TimeDomain::Interval { tau } => Some(tau),
            TimeDomain::HalfLine { .. } => None,
        }
    }

    /// Evaluate at a real time (interval signals) or at `t > 0`
    /// (half-line signals), preferring the closed form.
    pub fn eval_real(&self, t: f64) -> Complex64 {
        if let Some(f) = &self.analytic {
            return f(Complex64::new(t, 0.0));
        }
        match self.domain {
            TimeDomain::Interval { .. } => self.interp.eval(t),
            TimeDomain::HalfLine { .. } => self.interp.eval(t.ln()),
        }
    }

    /// Evaluate the closed form at a complex argument. Returns `None` for
    /// purely sampled signals.
    pub fn eval_complex(&self, t: Complex64) -> Option<Complex64> {
        self.analytic.as_ref().map(|f| f(t))
    }

    /// Squared L² norm under the signal's measure.
    pub fn norm_sqr(&self) -> f64 {
        self.grid
            .weights
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v.norm_sqr())
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// CSV rows `t,re,im`.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,re,im")?;
        for (t, v) in self.grid.nodes.iter().zip(&self.values) {
            writeln!(out, "{},{},{}", t.re, v.re, v.im)?;
        }
        Ok(())
    }
}

/// A function on the real line with compact support, the datum of the
/// Cauchy transform.
#[derive(Clone)]
pub struct LineSignal {
    pub support: (f64, f64),
    pub eval: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
    /// Interior points where the datum is non-smooth; quadrature panels
    /// always break here.
    pub breakpoints: Vec<f64>,
}

impl LineSignal {
    pub fn new<F>(support: (f64, f64), f: F) -> LineSignal
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        assert!(support.1 > support.0, "empty support");
        LineSignal {
            support,
            eval: Arc::new(f),
            breakpoints: Vec::new(),
        }
    }

    pub fn with_breakpoints(mut self, pts: Vec<f64>) -> LineSignal {
        self.breakpoints = pts;
        self
    }

    /// Indicator of `[a, b]`.
    pub fn indicator(a: f64, b: f64) -> LineSignal {
        LineSignal::new((a, b), |_| Complex64::new(1.0, 0.0))
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        if t <= self.support.0 || t >= self.support.1 {
            Complex64::new(0.0, 0.0)
        } else {
            (self.eval)(t)
        }
    }

    /// `∫ |g|` over the support, honoring breakpoints.
    pub fn l1_norm(&self) -> f64 {
        let rule = self.support_rule(30);
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&t, &w)| w * self.eval(t).norm())
            .sum()
    }

    /// Composite rule over the support with geometric refinement toward
    /// the support endpoints and every breakpoint.
    pub fn support_rule(&self, levels: usize) -> quad::Rule1d {
        let mut marks = vec![self.support.0, self.support.1];
        marks.extend(self.breakpoints.iter().copied());
        marks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        marks.dedup();
        let mut breaks = Vec::new();
        for w in marks.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let mut b1 = quad::geometric_toward(mid, w[1], 2, levels);
            let mut b0: Vec<f64> = quad::geometric_toward(-mid, -w[0], 2, levels)
                .into_iter()
                .map(|x| -x)
                .collect();
            b0.sort_by(|a, b| a.partial_cmp(b).unwrap());
            breaks.append(&mut b0);
            breaks.append(&mut b1);
        }
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        quad::composite_on(&breaks, 32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interp_reproduces_smooth_function() {
        let sig = TimeSignal::on_interval(1.0, |s| (s * Complex64::new(3.0, 0.0)).exp());
        // strip the evaluator to force interpolation
        let mut raw = sig.clone();
        raw.analytic = None;
        for k in 0..50 {
            let t = 0.013 + 0.97 * k as f64 / 49.0;
            let exact = (3.0 * t).exp();
            let got = raw.eval_real(t).re;
            assert!((got - exact).abs() < 1e-11 * exact.max(1.0), "t={t} err");
        }
    }

    #[test]
    fn interval_norm() {
        let sig = TimeSignal::on_interval(1.0, |_| Complex64::new(1.0, 0.0));
        assert!((sig.norm() - 1.0).abs() < 1e-12);
        let lin = TimeSignal::on_interval(2.0, |s| s);
        // ∫_0^2 s² = 8/3
        assert!((lin.norm_sqr() - 8.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn half_line_norm_with_cutoff() {
        // g = 1/(2√t) above t = 1/4: ∫_{1/4}^∞ (1/4t) dt/t = 1
        let g = TimeSignal::on_half_line(20.0, 80, Some(0.25), |t| {
            if t.re > 0.25 {
                Complex64::new(0.5 / t.re.sqrt(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        assert!((g.norm_sqr() - 1.0).abs() < 1e-9, "got {}", g.norm_sqr());
    }

    #[test]
    fn line_signal_support_and_l1() {
        let g = LineSignal::indicator(0.0, 1.0);
        assert_eq!(g.eval(-0.5), Complex64::new(0.0, 0.0));
        assert_eq!(g.eval(0.5), Complex64::new(1.0, 0.0));
        assert!((g.l1_norm() - 1.0).abs() < 1e-12);
        // log singularity at 0 inside the support
        let h = LineSignal::new((-0.5, 0.5), |t| Complex64::new((1.0 / t.abs()).ln(), 0.0))
            .with_breakpoints(vec![0.0]);
        // ∫_{-1/2}^{1/2} ln(1/|t|) = 1 + ln 2
        assert!((h.l1_norm() - (1.0 + 2f64.ln())).abs() < 1e-9, "{}", h.l1_norm());
    }
}
