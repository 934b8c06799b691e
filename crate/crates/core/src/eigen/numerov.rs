//! Fourth-order Numerov shooting on a half-domain sector grid.
//!
//! Integrates `y'' = (V - eps) y` outward from the origin with a parity seed
//! and inward from the wall with a decaying seed; eigenvalues are located by
//! bisection on the outward node count (the shooting analog of a Sturm
//! count), and the scaled Wronskian at the outermost turning point serves as
//! the matching diagnostic.

use crate::potential::{scaled_potential, taylor_coefficients, PotentialParams};

use super::{EigenError, Parity};

const RESCALE_THRESHOLD: f64 = 1e140;
const INWARD_SEED: f64 = 1e-120;

/// Precomputed half-domain grid data for one parity sector.
pub(crate) struct Shooter {
    h: f64,
    v: Vec<f64>,
    parity: Parity,
    curv2: f64,
    v_min: f64,
}

impl Shooter {
    pub fn new(
        p: &PotentialParams,
        half_width: f64,
        points: usize,
        parity: Parity,
    ) -> Result<Self, EigenError> {
        let h = half_width / (points - 1) as f64;
        let mut v = Vec::with_capacity(points);
        for j in 0..points {
            v.push(scaled_potential(j as f64 * h, p)?);
        }
        let v_min = v.iter().copied().fold(f64::MAX, f64::min);
        let v_max_abs = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        let fraction = h * h * v_max_abs / 12.0;
        if fraction > 0.25 {
            return Err(EigenError::GridTooCoarse {
                max_fraction: fraction,
            });
        }
        Ok(Self {
            h,
            v,
            parity,
            curv2: taylor_coefficients(p).c2,
            v_min,
        })
    }

    fn n(&self) -> usize {
        self.v.len()
    }

    fn f_at(&self, j: usize, eps: f64) -> f64 {
        1.0 - self.h * self.h * (self.v[j] - eps) / 12.0
    }

    /// Starting pair `(y_0, y_1)`; the `y_1` seed carries the quartic Taylor
    /// terms so the scheme keeps its fourth-order accuracy.
    fn seeds(&self, eps: f64) -> (f64, f64) {
        let h = self.h;
        let h2 = h * h;
        let q0 = self.v[0] - eps;
        match self.parity {
            Parity::Even => (
                1.0,
                1.0 + 0.5 * q0 * h2 + (self.curv2 + 0.5 * q0 * q0) * h2 * h2 / 12.0,
            ),
            Parity::Odd => (
                0.0,
                h * (1.0 + q0 * h2 / 6.0 + (self.curv2 + q0 * q0 / 6.0) * h2 * h2 / 20.0),
            ),
        }
    }

    /// Outermost grid index still inside the classically allowed region,
    /// clamped away from both ends; falls back to the midpoint below the well.
    fn matching_index(&self, eps: f64) -> usize {
        let n = self.n();
        let inside = (0..n).rev().find(|&j| self.v[j] <= eps);
        match inside {
            Some(j) => j.clamp(2, n - 4),
            None => n / 2,
        }
    }

    /// Integrate outward through `last` and return `(y_{last-1}, y_last,
    /// sign changes in (0, x_last])`.
    fn shoot_outward(&self, eps: f64, last: usize) -> (f64, f64, usize) {
        let (mut ym, mut y) = self.seeds(eps);
        let mut nodes = 0usize;
        let mut last_sign = if ym != 0.0 { ym.signum() } else { 0.0 };
        if y != 0.0 {
            if last_sign != 0.0 && y.signum() != last_sign {
                nodes += 1;
            }
            last_sign = y.signum();
        }
        let mut f_prev = self.f_at(0, eps);
        let mut f_cur = self.f_at(1, eps);
        for j in 1..last {
            let f_next = self.f_at(j + 1, eps);
            let y_next = ((12.0 - 10.0 * f_cur) * y - f_prev * ym) / f_next;
            ym = y;
            y = y_next;
            f_prev = f_cur;
            f_cur = f_next;
            if y != 0.0 {
                if last_sign != 0.0 && y.signum() != last_sign {
                    nodes += 1;
                }
                last_sign = y.signum();
            }
            if y.abs() > RESCALE_THRESHOLD {
                let scale = 1.0 / y.abs();
                y *= scale;
                ym *= scale;
            }
        }
        (ym, y, nodes)
    }

    /// Node count of the outward solution: a shooting Sturm count, equal to
    /// the number of sector eigenvalues below `eps` up to wall effects that
    /// the bisection absorbs.
    pub fn outward_nodes(&self, eps: f64) -> usize {
        self.shoot_outward(eps, self.n() - 1).2
    }

    /// Scaled Wronskian of the outward and inward solutions at the matching
    /// point; vanishes exactly at sector eigenvalues and stays in [-1, 1].
    pub fn mismatch(&self, eps: f64) -> f64 {
        let n = self.n();
        let im = self.matching_index(eps);
        let (o_im, o_imp, _) = self.shoot_outward(eps, im + 1);

        // inward sweep from the wall down to im
        let kappa = (self.v[n - 1] - eps).max(1.0).sqrt();
        let mut yp = INWARD_SEED; // y_{n-1}
        let mut y = INWARD_SEED * (kappa * self.h).exp(); // y_{n-2}
        let mut f_next = self.f_at(n - 1, eps);
        let mut f_cur = self.f_at(n - 2, eps);
        let mut j = n - 2;
        while j > im {
            let f_prev = self.f_at(j - 1, eps);
            let y_prev = ((12.0 - 10.0 * f_cur) * y - f_next * yp) / f_prev;
            yp = y;
            y = y_prev;
            f_next = f_cur;
            f_cur = f_prev;
            if y.abs() > RESCALE_THRESHOLD {
                let scale = 1.0 / y.abs();
                y *= scale;
                yp *= scale;
            }
            j -= 1;
        }
        let (i_im, i_imp) = (y, yp);
        let w = o_im * i_imp - o_imp * i_im;
        let scale = (o_im * i_imp).abs() + (o_imp * i_im).abs();
        w / (scale + 1e-300)
    }

    /// Glued two-sided solution on the half grid (unnormalized).
    pub fn wavefunction(&self, eps: f64) -> Vec<f64> {
        let n = self.n();
        let im = self.matching_index(eps);
        let mut out = vec![0.0; n];
        let (y0, y1) = self.seeds(eps);
        out[0] = y0;
        out[1] = y1;
        for j in 1..im {
            let f_prev = self.f_at(j - 1, eps);
            let f_cur = self.f_at(j, eps);
            let f_next = self.f_at(j + 1, eps);
            out[j + 1] = ((12.0 - 10.0 * f_cur) * out[j] - f_prev * out[j - 1]) / f_next;
            if out[j + 1].abs() > RESCALE_THRESHOLD {
                let scale = 1.0 / out[j + 1].abs();
                for value in out[..=j + 1].iter_mut() {
                    *value *= scale;
                }
            }
        }

        let mut inward = vec![0.0; n];
        let kappa = (self.v[n - 1] - eps).max(1.0).sqrt();
        inward[n - 1] = INWARD_SEED;
        inward[n - 2] = INWARD_SEED * (kappa * self.h).exp();
        for j in (im + 1..=n - 2).rev() {
            let f_prev = self.f_at(j - 1, eps);
            let f_cur = self.f_at(j, eps);
            let f_next = self.f_at(j + 1, eps);
            inward[j - 1] = ((12.0 - 10.0 * f_cur) * inward[j] - f_next * inward[j + 1]) / f_prev;
            if inward[j - 1].abs() > RESCALE_THRESHOLD {
                let scale = 1.0 / inward[j - 1].abs();
                for value in inward[j - 1..].iter_mut() {
                    *value *= scale;
                }
            }
        }

        let scale = if inward[im] != 0.0 {
            out[im] / inward[im]
        } else {
            out[im + 1] / inward[im + 1]
        };
        for j in im + 1..n {
            out[j] = scale * inward[j];
        }
        out
    }

    /// The `k` lowest sector eigenvalues by node-count bisection, starting
    /// one unit below the potential minimum and expanding the upper bound
    /// geometrically.
    pub fn eigenvalues(&self, k: usize, tol: f64) -> Result<Vec<f64>, EigenError> {
        let mut out = Vec::with_capacity(k);
        let lo0 = self.v_min - 1.0;
        for target in 1..=k {
            let mut width = 1.0;
            let mut hi = lo0 + width;
            while self.outward_nodes(hi) < target {
                width *= 2.0;
                hi = lo0 + width;
                if width > 1e6 {
                    return Err(EigenError::BracketExpansion {
                        parity: self.parity,
                        level: target,
                    });
                }
            }
            let mut lo = lo0;
            for _ in 0..300 {
                if hi - lo <= tol.max(4.0 * f64::EPSILON * hi.abs().max(1.0)) {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if self.outward_nodes(mid) >= target {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        Ok(out)
    }
}

/// Log-derivative/Wronskian mismatch of the two-sided Numerov shot for the
/// sector `parity` at energy `eps`; its roots in `eps` are eigenvalues.
pub fn numerov_shoot(
    p: &PotentialParams,
    eps: f64,
    g: &super::GridSpec,
    parity: Parity,
) -> Result<f64, EigenError> {
    let shooter = Shooter::new(p, g.half_width(), g.half_points(), parity)?;
    Ok(shooter.mismatch(eps))
}
