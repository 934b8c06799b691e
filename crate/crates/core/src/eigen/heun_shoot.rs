//! Shooting in the Heun variable `z = cosh^2 x`.
//!
//! Integrates the reduced equation for `y` under the growing envelope
//! `psi = exp(+xi cosh^2 x / 2) y` outward from `z = 1.01`, seeded by the
//! parity-selecting Frobenius expansion at the regular singular point
//! `z = 1`. For generic energies the slowly-varying branch of `y` survives
//! and the envelope dominates `psi`; at an eigenvalue `y` collapses onto the
//! rapidly decaying branch and the indicator crosses zero.

use crate::heun::{
    frobenius_derivative, frobenius_seed_at_one, frobenius_value, map_problem_to_heun,
    FrobeniusExponent, HeunParams,
};
use crate::potential::PotentialParams;

use super::{EigenError, Parity};

const SEED_OFFSET: f64 = 0.01;
const SEED_TERMS: usize = 16;
const STEP: f64 = 5e-4;

fn exponent_for(parity: Parity) -> FrobeniusExponent {
    match parity {
        Parity::Even => FrobeniusExponent::Zero,
        Parity::Odd => FrobeniusExponent::Half,
    }
}

fn rhs(h: &HeunParams, m: i32, xi: f64, eps: f64, z: f64, y: f64, yp: f64) -> (f64, f64) {
    let p = h.alpha + 0.5 * (1.0 / z + 1.0 / (z - 1.0));
    let q = ((f64::from(m) + 2.0) * xi * (2.0 * z - 1.0) + eps) / (4.0 * z * (z - 1.0));
    (yp, -p * yp - q * y)
}

/// Normalized growth indicator of the Heun-variable shot: positive while the
/// dominant growing envelope survives, negative after an overshoot; roots in
/// `eps` coincide with eigenvalues of the reduced Schroedinger equation.
pub fn heun_shoot_z(
    p: &PotentialParams,
    eps: f64,
    z_max: f64,
    parity: Parity,
) -> Result<f64, EigenError> {
    if !(z_max.is_finite() && z_max > 1.5) {
        return Err(EigenError::InvalidZMax { z_max });
    }
    let arg = p.xi() * z_max / 2.0;
    if arg > 700.0 {
        return Err(EigenError::EnvelopeOverflow { arg });
    }
    let h = map_problem_to_heun(p.m(), p.xi(), eps);
    let coeffs = frobenius_seed_at_one(&h, exponent_for(parity), SEED_TERMS)?;
    let s = exponent_for(parity).value();

    let mut z = 1.0 + SEED_OFFSET;
    let mut y = frobenius_value(&coeffs, s, SEED_OFFSET);
    let mut yp = frobenius_derivative(&coeffs, s, SEED_OFFSET);
    let mut max_abs = y.abs();

    let steps = ((z_max - z) / STEP).ceil() as usize;
    let dz = (z_max - z) / steps as f64;
    for _ in 0..steps {
        let (k1y, k1p) = rhs(&h, p.m(), p.xi(), eps, z, y, yp);
        let (k2y, k2p) = rhs(
            &h,
            p.m(),
            p.xi(),
            eps,
            z + 0.5 * dz,
            y + 0.5 * dz * k1y,
            yp + 0.5 * dz * k1p,
        );
        let (k3y, k3p) = rhs(
            &h,
            p.m(),
            p.xi(),
            eps,
            z + 0.5 * dz,
            y + 0.5 * dz * k2y,
            yp + 0.5 * dz * k2p,
        );
        let (k4y, k4p) = rhs(&h, p.m(), p.xi(), eps, z + dz, y + dz * k3y, yp + dz * k3p);
        y += dz / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        yp += dz / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        z += dz;
        max_abs = max_abs.max(y.abs());
        if max_abs > 1e140 {
            y /= max_abs;
            yp /= max_abs;
            max_abs = 1.0;
        }
    }
    Ok(y / max_abs)
}

/// Polish a guessed eigenvalue to a sign-change root of the indicator.
pub(crate) fn polish_root(
    p: &PotentialParams,
    guess: f64,
    window: f64,
    z_max: f64,
    parity: Parity,
    tol: f64,
) -> Result<f64, EigenError> {
    let eval = |e: f64| heun_shoot_z(p, e, z_max, parity);
    let mut w = window;
    let (mut lo, mut hi) = loop {
        let a = guess - w;
        let b = guess + w;
        let fa = eval(a)?;
        let fb = eval(b)?;
        if fa == 0.0 {
            return Ok(a);
        }
        if fb == 0.0 {
            return Ok(b);
        }
        if fa.signum() != fb.signum() {
            break (a, b);
        }
        w *= 2.0;
        if w > 0.5 {
            return Err(EigenError::NoIndicatorSignChange { guess, window: w });
        }
    };
    let mut flo = eval(lo)?;
    for _ in 0..200 {
        if hi - lo <= tol.max(4.0 * f64::EPSILON * hi.abs().max(1.0)) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = eval(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
