//! Sampled complex-valued functions and the explicit Bergman weights.

use crate::error::{Error, Result};
use crate::geometry::{z0, z1};
use crate::grid::GridQuadrature;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Closed-form evaluator attached to a field for off-grid points.
pub type Evaluator = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A complex-valued function sampled on a quadrature grid, the universal
/// carrier of analytic data. Keeps the closed form around when one exists.
#[derive(Clone)]
pub struct ComplexField {
    pub grid: Arc<GridQuadrature>,
    pub values: Vec<Complex64>,
    pub evaluator: Option<Evaluator>,
}

impl ComplexField {
    /// Sample a closed-form function on a grid.
    pub fn from_fn<F>(grid: Arc<GridQuadrature>, f: F) -> ComplexField
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        let values = grid.nodes.iter().map(|&z| f(z)).collect();
        ComplexField {
            grid,
            values,
            evaluator: Some(Arc::new(f)),
        }
    }

    pub fn from_samples(grid: Arc<GridQuadrature>, values: Vec<Complex64>) -> Result<ComplexField> {
        if values.len() != grid.nodes.len() {
            return Err(Error::InvalidParameter(format!(
                "value count {} does not match node count {}",
                values.len(),
                grid.nodes.len()
            )));
        }
        Ok(ComplexField {
            grid,
            values,
            evaluator: None,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// CSV rows `re, im, weight, value_re, value_im`.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "re,im,weight,value_re,value_im")?;
        for ((z, w), v) in self.grid.nodes.iter().zip(&self.grid.weights).zip(&self.values) {
            writeln!(out, "{},{},{},{},{}", z.re, z.im, w, v.re, v.im)?;
        }
        Ok(())
    }
}

/// Weight of a weighted Bergman space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    Unit,
    /// `ω_0(z) = e^{Re(z²)/(2τ)}/τ` on the sector `Δ`.
    Omega0 { tau: f64 },
    /// `ω_π(z) = ω_0(π - z)` on the mirrored sector.
    OmegaPi { tau: f64 },
    /// `|(z - z0)(z - z1)|^{-2}`, singular at the off-diagonal vertices.
    VertexSingular,
}

impl Weight {
    pub fn eval(&self, z: Complex64) -> f64 {
        match *self {
            Weight::Unit => 1.0,
            Weight::Omega0 { tau } => ((z * z).re / (2.0 * tau)).exp() / tau,
            Weight::OmegaPi { tau } => {
                let w = Complex64::new(PI, 0.0) - z;
                ((w * w).re / (2.0 * tau)).exp() / tau
            }
            Weight::VertexSingular => ((z - z0()) * (z - z1())).norm_sqr().recip(),
        }
    }
}
