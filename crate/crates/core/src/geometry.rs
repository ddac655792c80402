//! Domains and contours of the control problem.
//!
//! The central objects are the square `D = {|x - π/2| + |y| < π/2}` whose
//! diagonal is the control segment `[0, π]`, the sector `Δ = {|arg z| < π/4}`,
//! its mirror `π - Δ`, and the half-planes used by the Laplace and Cauchy
//! transforms. `D = Δ ∩ (π - Δ)` and the vertices `z0 = π/2 + iπ/2`,
//! `z1 = π/2 - iπ/2` are the off-diagonal corners of `D`.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Upper vertex of the square `D`.
pub const fn z0() -> Complex64 {
    Complex64::new(FRAC_PI_2, FRAC_PI_2)
}

/// Lower vertex of the square `D`.
pub const fn z1() -> Complex64 {
    Complex64::new(FRAC_PI_2, -FRAC_PI_2)
}

/// Half-width of the transition band at height `y`:
/// `α(y) = -(1/π)(y - π/2)(y + π/2)`.
pub fn alpha(y: f64) -> f64 {
    -(y - FRAC_PI_2) * (y + FRAC_PI_2) / PI
}

/// `α'(y) = -2y/π`.
pub fn alpha_prime(y: f64) -> f64 {
    -2.0 * y / PI
}

/// Scale factor of the dilated square obtained by lengthening the sides of
/// `D` (side length `π/√2`) by `a`.
pub fn dilation_factor(a: f64) -> f64 {
    1.0 + a * std::f64::consts::SQRT_2 / PI
}

/// A geometric domain in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// The open square `{|x - π/2| + |y| < π/2}`.
    SquareD,
    /// Homothetic dilation of `D` with center 0, sides lengthened by `a`.
    DilatedSquare { a: f64 },
    /// The open sector `{|arg z| < π/4}` with vertex 0.
    SectorDelta,
    /// Image of the sector under `z -> π - z`; vertex π.
    SectorPiMinusDelta,
    /// `{Re z > 0}`, domain of the Bergman-space Laplace image.
    RightHalfPlane,
    /// `{Im z > 0}`, domain of the Cauchy transform.
    UpperHalfPlane,
    /// `Δ ∩ {|z| < R}`.
    TruncatedSector { radius: f64 },
    /// Subset of `D` between the arcs `x = ±α(y) + π/2`; pinches at the
    /// vertices `z0`, `z1`.
    TransitionBandE,
}

impl Domain {
    /// Open-set membership.
    pub fn contains(&self, z: Complex64) -> bool {
        let (x, y) = (z.re, z.im);
        match *self {
            Domain::SquareD => (x - FRAC_PI_2).abs() + y.abs() < FRAC_PI_2,
            Domain::DilatedSquare { a } => {
                let lam = dilation_factor(a);
                (x - lam * FRAC_PI_2).abs() + y.abs() < lam * FRAC_PI_2
            }
            Domain::SectorDelta => z.norm() > 0.0 && z.arg().abs() < FRAC_PI_4,
            Domain::SectorPiMinusDelta => {
                let w = Complex64::new(PI, 0.0) - z;
                w.norm() > 0.0 && w.arg().abs() < FRAC_PI_4
            }
            Domain::RightHalfPlane => x > 0.0,
            Domain::UpperHalfPlane => y > 0.0,
            Domain::TruncatedSector { radius } => {
                Domain::SectorDelta.contains(z) && z.norm() < radius
            }
            Domain::TransitionBandE => y.abs() < FRAC_PI_2 && (x - FRAC_PI_2).abs() < alpha(y),
        }
    }

    /// Euclidean distance from `z` to the boundary of the domain.
    ///
    /// Closed form for the square (minimum over the four side segments, so
    /// corner points get vertex distance), ray/arc distance for sectors,
    /// line distance for half-planes, sampled arc minimization for the
    /// transition band.
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        match *self {
            Domain::SquareD => square_distance(z, 1.0),
            Domain::DilatedSquare { a } => square_distance(z, dilation_factor(a)),
            Domain::SectorDelta => sector_distance(z),
            Domain::SectorPiMinusDelta => sector_distance(Complex64::new(PI, 0.0) - z),
            Domain::RightHalfPlane => z.re.abs(),
            Domain::UpperHalfPlane => z.im.abs(),
            Domain::TruncatedSector { radius } => {
                let ray = sector_distance(z);
                // distance to the closing arc |z| = R inside the sector
                let arc = if z.arg().abs() <= FRAC_PI_4 {
                    (z.norm() - radius).abs()
                } else {
                    let corner = radius * Complex64::from_polar(1.0, FRAC_PI_4 * z.arg().signum());
                    (z - corner).norm()
                };
                ray.min(arc)
            }
            Domain::TransitionBandE => band_distance(z),
        }
    }
}

/// Distance to the boundary of the dilated square `λ·D`.
fn square_distance(z: Complex64, lam: f64) -> f64 {
    let verts = [
        Complex64::new(0.0, 0.0),
        lam * z1(),
        Complex64::new(lam * PI, 0.0),
        lam * z0(),
    ];
    let mut d = f64::INFINITY;
    for k in 0..4 {
        d = d.min(segment_distance(z, verts[k], verts[(k + 1) % 4]));
    }
    d
}

/// Distance from `z` to the two boundary rays of `Δ`.
fn sector_distance(z: Complex64) -> f64 {
    let up = ray_distance(z, Complex64::from_polar(1.0, FRAC_PI_4));
    let dn = ray_distance(z, Complex64::from_polar(1.0, -FRAC_PI_4));
    up.min(dn)
}

/// Distance from `z` to the ray `{t·dir : t >= 0}` (unit `dir`).
fn ray_distance(z: Complex64, dir: Complex64) -> f64 {
    let t = (z * dir.conj()).re;
    if t <= 0.0 {
        z.norm()
    } else {
        (z - t * dir).norm()
    }
}

/// Distance from `z` to the segment `[a, b]`.
pub fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let t = (((z - a) * ab.conj()).re / ab.norm_sqr()).clamp(0.0, 1.0);
    (z - (a + t * ab)).norm()
}

/// Distance to the parabolic arcs bounding the transition band, by dense
/// sampling plus local golden-section refinement.
fn band_distance(z: Complex64) -> f64 {
    let arc = |sign: f64, y: f64| Complex64::new(FRAC_PI_2 + sign * alpha(y), y);
    let mut best = f64::INFINITY;
    for sign in [-1.0, 1.0] {
        let mut y_best = 0.0;
        for k in 0..=400 {
            let y = -FRAC_PI_2 + PI * k as f64 / 400.0;
            let d = (z - arc(sign, y)).norm();
            if d < best {
                best = d;
                y_best = y;
            }
        }
        let (mut lo, mut hi) = (
            (y_best - PI / 400.0).max(-FRAC_PI_2),
            (y_best + PI / 400.0).min(FRAC_PI_2),
        );
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..60 {
            let m1 = hi - phi * (hi - lo);
            let m2 = lo + phi * (hi - lo);
            if (z - arc(sign, m1)).norm() < (z - arc(sign, m2)).norm() {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        best = best.min((z - arc(sign, 0.5 * (lo + hi))).norm());
    }
    best
}

/// Labels for the four sides of the square contour, following the
/// counterclockwise parameterization of the boundary of `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SideLabel {
    /// From `z0` down to `0`.
    Gamma1Plus,
    /// From `0` to `z1`.
    Gamma1Minus,
    /// From `π` up to `z0`.
    Gamma2Plus,
    /// From `z1` to `π`.
    Gamma2Minus,
}

impl SideLabel {
    pub const ALL: [SideLabel; 4] = [
        SideLabel::Gamma1Minus,
        SideLabel::Gamma2Minus,
        SideLabel::Gamma2Plus,
        SideLabel::Gamma1Plus,
    ];

    /// Sector this side is associated with: `Δ` for the `γ_1` sides
    /// (through the vertex 0), `π - Δ` for the `γ_2` sides.
    pub fn sector(&self) -> Domain {
        match self {
            SideLabel::Gamma1Plus | SideLabel::Gamma1Minus => Domain::SectorDelta,
            SideLabel::Gamma2Plus | SideLabel::Gamma2Minus => Domain::SectorPiMinusDelta,
        }
    }
}

/// One oriented straight side, `γ(t) = start + t (end - start)`, `t ∈ [0,1]`.
#[derive(Debug, Clone, Copy)]
pub struct Side {
    pub label: SideLabel,
    pub start: Complex64,
    pub end: Complex64,
}

impl Side {
    pub fn at(&self, t: f64) -> Complex64 {
        self.start + t * (self.end - self.start)
    }

    /// Constant complex velocity `γ'(t)`.
    pub fn velocity(&self) -> Complex64 {
        self.end - self.start
    }

    pub fn length(&self) -> f64 {
        (self.end - self.start).norm()
    }
}

/// The boundary of the square shrunk inward by Euclidean distance `eps`,
/// oriented counterclockwise. `eps = 0` reproduces the four sides of `∂D`
/// exactly in the order `γ_{1,-}, γ_{2,-}, γ_{2,+}, γ_{1,+}`.
#[derive(Debug, Clone)]
pub struct Contour {
    pub sides: [Side; 4],
    pub eps: f64,
}

impl Contour {
    pub fn square(eps: f64) -> Contour {
        assert!(eps >= 0.0, "shrink parameter must be nonnegative");
        let r = FRAC_PI_2 - std::f64::consts::SQRT_2 * eps;
        assert!(r > 0.0, "shrink parameter collapses the contour");
        // vertices of {|x - π/2| + |y| < r}
        let c = Complex64::new(FRAC_PI_2, 0.0);
        let left = c - r;
        let right = c + r;
        let top = c + Complex64::new(0.0, r);
        let bottom = c - Complex64::new(0.0, r);
        Contour {
            sides: [
                Side {
                    label: SideLabel::Gamma1Minus,
                    start: left,
                    end: bottom,
                },
                Side {
                    label: SideLabel::Gamma2Minus,
                    start: bottom,
                    end: right,
                },
                Side {
                    label: SideLabel::Gamma2Plus,
                    start: right,
                    end: top,
                },
                Side {
                    label: SideLabel::Gamma1Plus,
                    start: top,
                    end: left,
                },
            ],
            eps,
        }
    }

    pub fn side(&self, label: SideLabel) -> &Side {
        self.sides.iter().find(|s| s.label == label).unwrap()
    }

    pub fn total_length(&self) -> f64 {
        self.sides.iter().map(|s| s.length()).sum()
    }
}
