//! The scaled Razavy bistable potential and its local analysis.
//!
//! Scaling convention: hbar = mass = 1, length scale fixed to 1, energies are
//! eps = 2E. In these units
//!
//! ```text
//! V(x) = (xi^2/8) cosh 4x - (m+1) xi cosh 2x - xi^2/8
//! ```
//!
//! with integer well-shape parameter `m` (may be negative) and coupling
//! `xi > 0`. The well is double exactly when `2(m+1)/xi > 1`.

use thiserror::Error;

use crate::sample::SampledFunction;

/// Guard on the cosh argument: `|4x|` beyond this overflows `f64` range.
pub const COSH_ARG_GUARD: f64 = 175.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PotentialError {
    #[error("coupling xi must be positive and finite, got {xi}")]
    InvalidXi { xi: f64 },
    #[error("well-shape parameter must satisfy |m| <= 1000, got {m}")]
    InvalidM { m: i32 },
    #[error("abscissa must be finite, got {x}")]
    NonFiniteX { x: f64 },
    #[error("cosh overflow guard: |x| = {abs_x} violates |4x| <= 175")]
    ArgumentOverflow { abs_x: f64 },
    #[error("half-width must be positive and finite, got {half_width}")]
    InvalidHalfWidth { half_width: f64 },
    #[error("sampling needs at least 2 points, got {points}")]
    TooFewPoints { points: usize },
}

/// The pair `(m, xi)` defining the scaled potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    m: i32,
    xi: f64,
}

impl PotentialParams {
    pub const MAX_ABS_M: i32 = 1000;

    pub fn new(m: i32, xi: f64) -> Result<Self, PotentialError> {
        if !(xi.is_finite() && xi > 0.0) {
            return Err(PotentialError::InvalidXi { xi });
        }
        if m.abs() > Self::MAX_ABS_M {
            return Err(PotentialError::InvalidM { m });
        }
        Ok(Self { m, xi })
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub(crate) fn m_plus_one(&self) -> f64 {
        f64::from(self.m) + 1.0
    }
}

/// `V(x)` in scaled units.
///
/// The expression is written in `|x|`, so evenness holds bit-for-bit.
pub fn scaled_potential(x: f64, p: &PotentialParams) -> Result<f64, PotentialError> {
    if !x.is_finite() {
        return Err(PotentialError::NonFiniteX { x });
    }
    let t = x.abs();
    if 4.0 * t > COSH_ARG_GUARD {
        return Err(PotentialError::ArgumentOverflow { abs_x: t });
    }
    let xi = p.xi;
    let quarter = xi * xi / 8.0;
    Ok(quarter * (4.0 * t).cosh() - p.m_plus_one() * xi * (2.0 * t).cosh() - quarter)
}

/// Even Taylor coefficients of `V` about the origin through order six.
/// Odd orders vanish identically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorCoefficients {
    pub c0: f64,
    pub c2: f64,
    pub c4: f64,
    pub c6: f64,
}

pub fn taylor_coefficients(p: &PotentialParams) -> TaylorCoefficients {
    let xi = p.xi;
    let mp1_xi = p.m_plus_one() * xi;
    TaylorCoefficients {
        c0: -mp1_xi,
        c2: xi * xi - 2.0 * mp1_xi,
        c4: 2.0 / 3.0 * (2.0 * xi * xi - mp1_xi),
        c6: 4.0 / 45.0 * (8.0 * xi * xi - mp1_xi),
    }
}

impl TaylorCoefficients {
    /// Evaluate the degree-6 even polynomial at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let x2 = x * x;
        self.c0 + x2 * (self.c2 + x2 * (self.c4 + x2 * self.c6))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WellKind {
    Single,
    Flat,
    Double,
}

/// Shape classification of the potential.
#[derive(Debug, Clone, PartialEq)]
pub struct WellShape {
    pub kind: WellKind,
    /// Abscissas of the global minima: `{0}` unless the well is double, then
    /// `+-(1/2) arccosh(2(m+1)/xi)`.
    pub minima: Vec<f64>,
    /// `V` at the minima: `-(m+1)^2 - xi^2/4` for double wells, `V(0)` else.
    pub depth: f64,
    /// Annotation for single wells whose bottom is quartic-dominated
    /// (`|c2| < 0.5 |c4|`); reported for figure labeling only.
    pub flat_bottom: bool,
}

pub fn classify_well(p: &PotentialParams) -> WellShape {
    let tc = taylor_coefficients(p);
    let ratio = 2.0 * p.m_plus_one() / p.xi;
    if tc.c2.abs() <= 1e-12 || ratio == 1.0 {
        return WellShape {
            kind: WellKind::Flat,
            minima: vec![0.0],
            depth: tc.c0,
            flat_bottom: true,
        };
    }
    if ratio > 1.0 {
        let xm = 0.5 * ratio.acosh();
        return WellShape {
            kind: WellKind::Double,
            minima: vec![-xm, xm],
            depth: -p.m_plus_one() * p.m_plus_one() - p.xi * p.xi / 4.0,
            flat_bottom: false,
        };
    }
    WellShape {
        kind: WellKind::Single,
        minima: vec![0.0],
        depth: tc.c0,
        flat_bottom: tc.c2.abs() < 0.5 * tc.c4.abs(),
    }
}

/// Sample `V` on `points` uniform abscissas over `[-half_width, half_width]`.
///
/// Abscissas are built pairwise-mirrored from integers, so the grid is
/// symmetric to the last bit and contains 0 exactly when `points` is odd.
pub fn sample_potential(
    p: &PotentialParams,
    half_width: f64,
    points: usize,
) -> Result<SampledFunction, PotentialError> {
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(PotentialError::InvalidHalfWidth { half_width });
    }
    if points < 2 {
        return Err(PotentialError::TooFewPoints { points });
    }
    let denom = (points - 1) as f64;
    let mut out = Vec::with_capacity(points);
    for i in 0..points {
        // (2i - (points-1)) runs over ..,-2,0,2,.. (odd counts) symmetrically
        let num = 2 * i as i64 - (points as i64 - 1);
        let mut x = num as f64 / denom * half_width;
        if x == 0.0 {
            x = 0.0; // normalize -0.0
        }
        out.push((x, scaled_potential(x, p)?));
    }
    Ok(SampledFunction::new(out))
}
