//! Confluent Heun machinery.
//!
//! The reduced equation in `z = cosh^2 x` is the confluent Heun equation in
//! the uniform first-order-pole form
//!
//! ```text
//! H'' + (alpha + (1+beta)/z + (1+gamma)/(z-1)) H' + (mu/z + nu/(z-1)) H = 0,
//! ```
//!
//! with the conventional parameters `delta` and `eta` tied to `(mu, nu)` by
//! the relations implemented in [`HeunParams::from_singularity_data`]. This
//! module holds the problem-to-parameter maps, the power series of
//! `H_c(alpha, beta, gamma, delta, eta; z)` inside the unit disk, the
//! polynomial-termination machinery, and Frobenius expansions about the
//! regular singular point `z = 1` used to start physical-domain integration.

use thiserror::Error;

/// Series evaluation is restricted to `|z| <= 0.95`; convergence degrades
/// toward the unit circle and the physical region lies outside it anyway.
pub const UNIT_DISK_MARGIN: f64 = 0.95;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeunError {
    #[error("series argument |z| = {z_abs} outside the unit-disk margin 0.95")]
    OutsideUnitDisk { z_abs: f64 },
    #[error("recurrence index must be >= 1, got {n}")]
    InvalidTermIndex { n: u32 },
    #[error("degenerate recurrence: A_n = 0 at n = {n} (beta is a negative integer)")]
    DegenerateRecurrence { n: u32 },
    #[error("tolerance must be positive and finite, got {tol}")]
    InvalidTolerance { tol: f64 },
    #[error("Frobenius expansion at z = 1 requires gamma = -1/2, got {gamma}")]
    UnsupportedGamma { gamma: f64 },
}

/// Confluent Heun parameter record, plus the auxiliary pole strengths
/// `(mu, nu)` of the uniform form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeunParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub eta: f64,
    pub mu: f64,
    pub nu: f64,
}

impl HeunParams {
    /// Build the record from `(alpha, beta, gamma, mu, nu)`. The derived
    /// parameters satisfy
    ///
    /// ```text
    /// delta = mu + nu - (alpha/2)(beta + gamma + 2)
    /// eta   = (alpha/2)(beta + 1) - mu - (beta + gamma + beta*gamma)/2
    /// ```
    ///
    /// exactly, by construction.
    pub fn from_singularity_data(alpha: f64, beta: f64, gamma: f64, mu: f64, nu: f64) -> Self {
        let delta = mu + nu - 0.5 * alpha * (beta + gamma + 2.0);
        let eta = 0.5 * alpha * (beta + 1.0) - mu - 0.5 * (beta + gamma + beta * gamma);
        Self {
            alpha,
            beta,
            gamma,
            delta,
            eta,
            mu,
            nu,
        }
    }

    /// Residual of the `delta` relation; zero for consistent records.
    pub fn delta_residual(&self) -> f64 {
        self.delta - (self.mu + self.nu - 0.5 * self.alpha * (self.beta + self.gamma + 2.0))
    }

    /// Residual of the `eta` relation; zero for consistent records.
    pub fn eta_residual(&self) -> f64 {
        self.eta
            - (0.5 * self.alpha * (self.beta + 1.0)
                - self.mu
                - 0.5 * (self.beta + self.gamma + self.beta * self.gamma))
    }
}

/// Map `(m, xi, eps)` to the Heun parameters of the reduced equation under
/// the growing envelope `psi = exp(+xi cosh^2 x / 2) y`:
/// `alpha = xi`, `beta = gamma = -1/2`, `mu = (xi(m+2) - eps)/4`,
/// `nu = (xi(m+2) + eps)/4`.
pub fn map_problem_to_heun(m: i32, xi: f64, eps: f64) -> HeunParams {
    let a = xi * (f64::from(m) + 2.0);
    HeunParams::from_singularity_data(xi, -0.5, -0.5, 0.25 * (a - eps), 0.25 * (a + eps))
}

/// Same reduction under the decaying envelope `psi = exp(-xi cosh^2 x / 2) y`:
/// `alpha = -xi`, `mu = (xi m - eps)/4`, `nu = (xi m + eps)/4`. `delta` and
/// `eta` come out identical to the growing map; only `alpha, mu, nu` change.
/// Bound-state work (polynomial eigenvalue anchors in particular) uses this
/// form, since the decaying envelope is the normalizable one.
pub fn map_problem_to_heun_decaying(m: i32, xi: f64, eps: f64) -> HeunParams {
    let a = xi * f64::from(m);
    HeunParams::from_singularity_data(-xi, -0.5, -0.5, 0.25 * (a - eps), 0.25 * (a + eps))
}

/// Coefficients `(A_n, B_n, C_n)` of the three-term recurrence
/// `A_n v_n - B_n v_{n-1} - C_n v_{n-2} = 0` for the power series at z = 0.
pub fn recurrence_coeffs(h: &HeunParams, n: u32) -> Result<(f64, f64, f64), HeunError> {
    if n == 0 {
        return Err(HeunError::InvalidTermIndex { n });
    }
    let nf = f64::from(n);
    let a = 1.0 + h.beta / nf;
    if a == 0.0 {
        return Err(HeunError::DegenerateRecurrence { n });
    }
    let b = 1.0
        + (h.beta + h.gamma - h.alpha - 1.0) / nf
        + (h.eta - 0.5 * (h.beta + h.gamma - h.alpha) - 0.5 * h.alpha * h.beta
            + 0.5 * h.beta * h.gamma)
            / (nf * nf);
    // written delta-first so alpha = 0 stays regular
    let c = (h.delta + h.alpha * (0.5 * (h.beta + h.gamma) + nf - 1.0)) / (nf * nf);
    Ok((a, b, c))
}

/// First `n_terms` series coefficients `v_0, v_1, ...` (with `v_0 = 1`).
pub fn series_coefficients(h: &HeunParams, n_terms: usize) -> Result<Vec<f64>, HeunError> {
    let mut v = Vec::with_capacity(n_terms);
    if n_terms == 0 {
        return Ok(v);
    }
    v.push(1.0);
    let mut prev2 = 0.0; // v_{-1}
    let mut prev = 1.0; // v_0
    for n in 1..n_terms as u32 {
        let (a, b, c) = recurrence_coeffs(h, n)?;
        let next = (b * prev + c * prev2) / a;
        v.push(next);
        prev2 = prev;
        prev = next;
    }
    Ok(v)
}

/// Outcome of a truncated series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    pub converged: bool,
    /// Magnitude of the last retained term.
    pub tail_bound: f64,
}

/// Sum the power series of `H_c` at `z` with `|z| <= 0.95`.
///
/// Stops once two consecutive terms drop below `tol * min(1, |partial sum|)`,
/// so a converged result always has `tail_bound <= tol`. Exhausting
/// `max_terms` yields an unconverged result, not an error.
pub fn heun_series(
    h: &HeunParams,
    z: f64,
    tol: f64,
    max_terms: usize,
) -> Result<SeriesResult, HeunError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(HeunError::InvalidTolerance { tol });
    }
    if !z.is_finite() || z.abs() > UNIT_DISK_MARGIN {
        return Err(HeunError::OutsideUnitDisk { z_abs: z.abs() });
    }
    let mut sum = 1.0;
    let mut prev2 = 0.0;
    let mut prev = 1.0;
    let mut zpow = 1.0;
    let mut small_streak = 0u32;
    let mut terms_used = 1;
    let mut tail = 1.0;
    for n in 1..=max_terms.max(1) as u32 {
        let (a, b, c) = recurrence_coeffs(h, n)?;
        let vn = (b * prev + c * prev2) / a;
        prev2 = prev;
        prev = vn;
        zpow *= z;
        let term = vn * zpow;
        sum += term;
        terms_used += 1;
        tail = term.abs();
        if tail <= tol * sum.abs().min(1.0) {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok(SeriesResult {
                    value: sum,
                    terms_used,
                    converged: true,
                    tail_bound: tail,
                });
            }
        } else {
            small_streak = 0;
        }
    }
    Ok(SeriesResult {
        value: sum,
        terms_used,
        converged: false,
        tail_bound: tail,
    })
}

/// The unique integer `m*` solving the first termination condition
/// `mu + nu + N alpha = 0` for the growing-envelope map: `m* = -2(N+1)`,
/// independent of `xi`.
pub fn termination_mass_condition(big_n: u32, xi: f64) -> i32 {
    assert!(big_n >= 1, "termination order must be >= 1");
    assert!(xi > 0.0, "xi must be positive");
    -2 * (big_n as i32 + 1)
}

/// Determinant of the `(N+1) x (N+1)` tridiagonal termination matrix
/// `Delta_{N+1}(mu)`, evaluated by the principal-minor recurrence
/// `D_{k} = d_k D_{k-1} - l_{k-1} u_{k-1} D_{k-2}` with power-of-two
/// rescaling so orders up to ~50 stay inside `f64` range.
///
/// Entry pattern (0-indexed row/column `k = 0..N`):
/// diagonal `mu - p_{k+1} + k alpha` with `p_{k+1} = k (k+1+beta+gamma)`,
/// superdiagonal `(k+1)(k+1+beta)`, subdiagonal `(N-k) alpha`.
pub fn delta_determinant(big_n: u32, mu: f64, h: &HeunParams) -> f64 {
    let n = big_n as usize;
    let diag = |k: usize| -> f64 {
        let kf = k as f64;
        mu - kf * (kf + 1.0 + h.beta + h.gamma) + kf * h.alpha
    };
    let sup = |k: usize| -> f64 {
        let kf = (k + 1) as f64;
        kf * (kf + h.beta)
    };
    let sub = |k: usize| -> f64 { (n - k) as f64 * h.alpha };

    let mut d_prev = 1.0f64;
    let mut d_cur = diag(0);
    let mut exp2 = 0i32;
    for k in 1..=n {
        let next = diag(k) * d_cur - sub(k - 1) * sup(k - 1) * d_prev;
        d_prev = d_cur;
        d_cur = next;
        let mag = d_cur.abs().max(d_prev.abs());
        if mag > 1e150 {
            d_cur *= 2f64.powi(-512);
            d_prev *= 2f64.powi(-512);
            exp2 += 512;
        } else if mag != 0.0 && mag < 1e-150 {
            d_cur *= 2f64.powi(512);
            d_prev *= 2f64.powi(512);
            exp2 -= 512;
        }
    }
    // unwind the scaling in safe chunks
    while exp2 >= 512 {
        d_cur *= 2f64.powi(512);
        exp2 -= 512;
    }
    while exp2 <= -512 {
        d_cur *= 2f64.powi(-512);
        exp2 += 512;
    }
    d_cur * 2f64.powi(exp2)
}

/// Indicial exponent selector at the regular singular point `z = 1`.
///
/// The exponents are `0` and `-gamma = 1/2`; with `z - 1 = sinh^2 x` the
/// exponent-0 branch pulls back to even functions of `x` and the exponent-1/2
/// branch to odd ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrobeniusExponent {
    Zero,
    Half,
}

impl FrobeniusExponent {
    pub fn value(&self) -> f64 {
        match self {
            FrobeniusExponent::Zero => 0.0,
            FrobeniusExponent::Half => 0.5,
        }
    }
}

/// Coefficients `c_0 = 1, c_1, ...` of the local solution
/// `y(z) = (z-1)^s sum_k c_k (z-1)^k` about `z = 1`, satisfying the uniform
/// confluent Heun equation order by order.
///
/// Derivation: multiply the equation by `t(1+t)` with `t = z - 1`; the
/// polynomial coefficients give, for `k >= 1`,
///
/// ```text
/// c_k (k+s)(k+s+gamma) =
///   - c_{k-1} [ (k-1+s)(k-2+s) + (k-1+s)(alpha+beta+gamma+2) + nu ]
///   - c_{k-2} [ (k-2+s) alpha + mu + nu ].
/// ```
pub fn frobenius_seed_at_one(
    h: &HeunParams,
    exponent: FrobeniusExponent,
    n_terms: usize,
) -> Result<Vec<f64>, HeunError> {
    if (h.gamma + 0.5).abs() > 1e-12 {
        // keeps the exponent difference at 1/2, so resonance cannot occur
        return Err(HeunError::UnsupportedGamma { gamma: h.gamma });
    }
    let s = exponent.value();
    let mut c = Vec::with_capacity(n_terms);
    if n_terms == 0 {
        return Ok(c);
    }
    c.push(1.0);
    for k in 1..n_terms {
        let kf = k as f64;
        let lead = (kf + s) * (kf + s + h.gamma);
        let c1 = c[k - 1];
        let t1 = (kf - 1.0 + s) * (kf - 2.0 + s)
            + (kf - 1.0 + s) * (h.alpha + h.beta + h.gamma + 2.0)
            + h.nu;
        let t2 = if k >= 2 {
            c[k - 2] * ((kf - 2.0 + s) * h.alpha + h.mu + h.nu)
        } else {
            0.0
        };
        c.push(-(c1 * t1 + t2) / lead);
    }
    Ok(c)
}

/// Evaluate a Frobenius expansion `(t)^s sum c_k t^k` at `t = z - 1`.
pub fn frobenius_value(coeffs: &[f64], s: f64, t: f64) -> f64 {
    let mut poly = 0.0;
    for &ck in coeffs.iter().rev() {
        poly = poly * t + ck;
    }
    if s == 0.0 {
        poly
    } else {
        t.powf(s) * poly
    }
}

/// Exact derivative of the truncated Frobenius expansion with respect to `z`.
pub fn frobenius_derivative(coeffs: &[f64], s: f64, t: f64) -> f64 {
    let mut acc = 0.0;
    for (k, &ck) in coeffs.iter().enumerate().rev() {
        let p = k as f64 + s;
        if p == 0.0 {
            continue;
        }
        acc += p * ck * t.powf(p - 1.0);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn razavy_map_reference_values() {
        let h = map_problem_to_heun(0, 3.0, 0.0);
        assert_eq!(h.alpha, 3.0);
        assert_eq!(h.beta, -0.5);
        assert_eq!(h.gamma, -0.5);
        assert_eq!(h.mu, 1.5);
        assert_eq!(h.nu, 1.5);
        assert_eq!(h.delta, 1.5);
        assert_eq!(h.eta, -0.375);

        let h = map_problem_to_heun(-1, 3.0, 0.0);
        assert_eq!(h.delta, 0.0);
        assert_eq!(h.eta, 0.375);
        assert_eq!(h.mu, 0.75);
        assert_eq!(h.nu, 0.75);
    }

    #[test]
    fn mu_plus_nu_sum_rule() {
        for &(m, xi, eps) in &[(0, 3.0, 0.0), (5, 2.0, -7.5), (-4, 1.0, 11.25)] {
            let h = map_problem_to_heun(m, xi, eps);
            let expect = xi * (f64::from(m) + 2.0) / 2.0;
            assert!((h.mu + h.nu - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn decaying_map_shares_delta_eta() {
        let a = map_problem_to_heun(3, 2.5, 4.0);
        let b = map_problem_to_heun_decaying(3, 2.5, 4.0);
        assert_eq!(b.alpha, -2.5);
        assert!((a.delta - b.delta).abs() < 1e-12);
        assert!((a.eta - b.eta).abs() < 1e-12);
        assert_eq!(b.delta_residual(), 0.0);
        assert_eq!(b.eta_residual(), 0.0);
    }

    #[test]
    fn recurrence_reference_values() {
        let h = map_problem_to_heun(0, 3.0, 0.0);
        let (a1, _, c1) = recurrence_coeffs(&h, 1).unwrap();
        assert_eq!(a1, 0.5); // 1 + beta
                             // C_1 = delta - alpha/2 for beta = gamma = -1/2
        assert!((c1 - (h.delta - 0.5 * h.alpha)).abs() < 1e-15);
        assert_eq!(c1, 0.0);

        // v_1 = B_1/A_1 must equal -mu/(1+beta)
        let (a1, b1, _) = recurrence_coeffs(&h, 1).unwrap();
        assert!((b1 / a1 - (-h.mu / (1.0 + h.beta))).abs() < 1e-13);

        // n -> infinity limits
        let (a, b, c) = recurrence_coeffs(&h, 1_000_000).unwrap();
        assert!((a - 1.0).abs() < 1e-5);
        assert!((b - 1.0).abs() < 1e-4);
        assert!(c.abs() < 1e-4);

        assert!(matches!(
            recurrence_coeffs(&h, 0),
            Err(HeunError::InvalidTermIndex { n: 0 })
        ));
        let degenerate = HeunParams::from_singularity_data(1.0, -2.0, -0.5, 0.0, 0.0);
        assert!(matches!(
            recurrence_coeffs(&degenerate, 2),
            Err(HeunError::DegenerateRecurrence { n: 2 })
        ));
    }

    #[test]
    fn series_at_zero_is_exactly_one() {
        let h = map_problem_to_heun(2, 3.0, 1.0);
        let r = heun_series(&h, 0.0, 1e-12, 100).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(r.converged);
        assert_eq!(r.tail_bound, 0.0);
    }

    #[test]
    fn series_rejects_outside_disk() {
        let h = map_problem_to_heun(0, 3.0, 0.0);
        assert!(matches!(
            heun_series(&h, 0.99, 1e-10, 500),
            Err(HeunError::OutsideUnitDisk { .. })
        ));
        assert!(heun_series(&h, -0.96, 1e-10, 500).is_err());
        assert!(heun_series(&h, 0.95, 1e-10, 2000).is_ok());
        assert!(matches!(
            heun_series(&h, 0.5, 0.0, 500),
            Err(HeunError::InvalidTolerance { .. })
        ));
    }

    #[test]
    fn series_unconverged_flagged_not_error() {
        let h = map_problem_to_heun(0, 3.0, 0.0);
        let r = heun_series(&h, 0.9, 1e-14, 5).unwrap();
        assert!(!r.converged);
        assert!(r.tail_bound > 1e-14);
    }

    #[test]
    fn converged_tail_is_below_tolerance() {
        let h = map_problem_to_heun(1, 2.0, -3.5);
        for &z in &[0.1, -0.4, 0.8, -0.93] {
            let r = heun_series(&h, z, 1e-10, 5000).unwrap();
            assert!(r.converged, "z = {z}");
            assert!(r.tail_bound <= 1e-10, "z = {z}, tail {}", r.tail_bound);
        }
    }

    #[test]
    fn termination_condition_values() {
        assert_eq!(termination_mass_condition(1, 3.0), -4);
        assert_eq!(termination_mass_condition(2, 3.0), -6);
        assert_eq!(termination_mass_condition(3, 3.0), -8);
        // independent of xi
        for &xi in &[1.0, 3.0, 10.0] {
            assert_eq!(termination_mass_condition(1, xi), -4);
        }
        // no N >= 1 admits a nonnegative m
        for n in 1..=50 {
            assert!(termination_mass_condition(n, 3.0) <= -4);
        }
    }

    #[test]
    fn determinant_low_orders_in_closed_form() {
        let h = map_problem_to_heun(0, 3.0, 0.0);
        // N = 0: Delta_1 = mu - p_1 = mu
        for &mu in &[-2.0, 0.0, 0.7, 11.0] {
            assert_eq!(delta_determinant(0, mu, &h), mu);
        }
        // N = 1: Delta_2 = mu (mu - 1 + alpha) - alpha (1 + beta)
        for &mu in &[-1.5, 0.0, 2.25] {
            let expect = mu * (mu - 1.0 + h.alpha) - h.alpha * (1.0 + h.beta);
            assert!((delta_determinant(1, mu, &h) - expect).abs() < 1e-12 * expect.abs().max(1.0));
        }
    }

    #[test]
    fn frobenius_leading_coefficients() {
        let h = map_problem_to_heun(0, 3.0, 0.0);
        let c = frobenius_seed_at_one(&h, FrobeniusExponent::Zero, 4).unwrap();
        assert_eq!(c[0], 1.0);
        // order-(z-1)^0 balance: (1)(1+gamma) c_1 + nu c_0 = 0
        assert!((c[1] - (-h.nu / (1.0 + h.gamma))).abs() < 1e-13);

        let bad = HeunParams::from_singularity_data(1.0, -0.5, -1.0, 0.5, 0.5);
        assert!(matches!(
            frobenius_seed_at_one(&bad, FrobeniusExponent::Zero, 4),
            Err(HeunError::UnsupportedGamma { .. })
        ));
    }

    #[test]
    fn frobenius_even_branch_is_even_in_x() {
        // pull back through z = cosh^2 x and check odd derivatives vanish
        let h = map_problem_to_heun(0, 3.0, 0.0);
        let c = frobenius_seed_at_one(&h, FrobeniusExponent::Zero, 12).unwrap();
        let y = |x: f64| frobenius_value(&c, 0.0, x.sinh().powi(2));
        let fd1 = (y(1e-3) - y(-1e-3)) / 2e-3;
        let fd3 = (y(2e-3) - 2.0 * y(1e-3) + 2.0 * y(-1e-3) - y(-2e-3)) / (2.0 * 1e-9);
        assert!(fd1.abs() < 1e-7, "first derivative at 0: {fd1}");
        assert!(fd3.abs() < 1e-4, "third derivative at 0: {fd3}");
    }
}
