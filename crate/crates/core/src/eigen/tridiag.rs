//! Sturm bisection for symmetric tridiagonal operators.

use super::EigenError;

/// Symmetric tridiagonal matrix stored as diagonal + off-diagonal sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymmetricTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(
            !diag.is_empty() && off.len() + 1 == diag.len(),
            "off-diagonal length must be diag length - 1"
        );
        Self { diag, off }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Inclusive interval guaranteed to contain the whole spectrum.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::MAX;
        let mut hi = f64::MIN;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i < n - 1 { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        let margin = 1.0 + 1e-12 * hi.abs().max(lo.abs());
        (lo - margin, hi + margin)
    }

    fn pivot_guard(&self) -> f64 {
        let e2max = self.off.iter().fold(1.0f64, |acc, &e| acc.max(e * e));
        f64::MIN_POSITIVE * e2max
    }
}

/// Number of eigenvalues strictly below `eps`, via the Sturm sequence of the
/// shifted LDL^T factorization. Tiny pivots are replaced (sign preserved) so
/// exact-hit shifts cannot divide by zero.
pub fn sturm_count(t: &SymmetricTridiagonal, eps: f64) -> usize {
    let guard = t.pivot_guard();
    let mut count = 0usize;
    let mut q = t.diag[0] - eps;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..t.n() {
        let q_safe = if q.abs() < guard {
            if q >= 0.0 {
                guard
            } else {
                -guard
            }
        } else {
            q
        };
        q = (t.diag[i] - eps) - t.off[i - 1] * t.off[i - 1] / q_safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` smallest eigenvalues, each bracketed by [`sturm_count`] inside the
/// Gershgorin interval and bisected to width `<= tol`. Fully deterministic.
pub fn eigenvalues_bisection(
    t: &SymmetricTridiagonal,
    k: usize,
    tol: f64,
) -> Result<Vec<f64>, EigenError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(EigenError::InvalidTolerance { tol });
    }
    if k == 0 || k > t.n() {
        return Err(EigenError::TooManyLevels {
            requested: k,
            available: t.n(),
        });
    }
    let (lo0, hi0) = t.gershgorin_bounds();
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let mut lo = lo0;
        let mut hi = hi0;
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= tol.max(4.0 * f64::EPSILON * mid.abs()) {
                break;
            }
            if sturm_count(t, mid) <= j {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}
