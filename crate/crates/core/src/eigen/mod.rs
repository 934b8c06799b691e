//! Bound-state eigensolvers for `-psi'' + V psi = eps psi`.
//!
//! The potential is even for every `m`, so exact eigenstates carry definite
//! parity; all production solves work on half-domain parity sectors and merge
//! the two sectors into a globally ordered spectrum. Two independent backends
//! are provided (second-order finite differences with Sturm bisection, and
//! fourth-order Numerov shooting), plus a slower Heun-variable shooting check.

mod heun_shoot;
mod numerov;
mod tridiag;

pub use heun_shoot::heun_shoot_z;
pub use numerov::numerov_shoot;
pub use tridiag::{eigenvalues_bisection, sturm_count, SymmetricTridiagonal};

use std::f64::consts::{PI, SQRT_2};

use thiserror::Error;

use crate::heun::HeunError;
use crate::potential::{
    classify_well, scaled_potential, taylor_coefficients, PotentialError, PotentialParams,
    WellKind, COSH_ARG_GUARD,
};
use crate::sample::SampledFunction;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Heun(#[from] HeunError),
    #[error("grid needs at least 64 points, got {points}")]
    TooFewPoints { points: usize },
    #[error("half-width must satisfy 0 < L <= {max}, got {given}")]
    InvalidHalfWidth { given: f64, max: f64 },
    #[error("level count must lie in 1..=12, got {k}")]
    InvalidLevelCount { k: usize },
    #[error("requested {requested} eigenvalues from an operator of size {available}")]
    TooManyLevels { requested: usize, available: usize },
    #[error("tolerance must be positive and finite, got {tol}")]
    InvalidTolerance { tol: f64 },
    #[error("cannot satisfy the energy margin within the overflow guard while sizing the grid")]
    GridCapConflict,
    #[error("energy bracket expansion passed 1e6 above the well bottom ({parity:?} sector, level {level})")]
    BracketExpansion { parity: Parity, level: usize },
    #[error("numerov grid too coarse: |h^2 (V - eps)|/12 reached {max_fraction:.3}")]
    GridTooCoarse { max_fraction: f64 },
    #[error("eps = {eps} is not a converged eigenvalue (scaled mismatch {mismatch:.3e})")]
    NotAnEigenvalue { eps: f64, mismatch: f64 },
    #[error("z_max must be finite and exceed 1.5, got {z_max}")]
    InvalidZMax { z_max: f64 },
    #[error("envelope overflow: xi * z_max / 2 = {arg} exceeds 700")]
    EnvelopeOverflow { arg: f64 },
    #[error("no indicator sign change around guess {guess} within half-window {window}")]
    NoIndicatorSignChange { guess: f64, window: f64 },
}

/// Definite parity of an eigenstate / sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn label(&self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// Domain selector for discretized solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridParity {
    Even,
    Odd,
    Full,
}

impl From<Parity> for GridParity {
    fn from(p: Parity) -> Self {
        match p {
            Parity::Even => GridParity::Even,
            Parity::Odd => GridParity::Odd,
        }
    }
}

/// Uniform grid: half-width `L`, point count, and the sector it discretizes.
///
/// Half-domain grids place `points` nodes on `[0, L]` with step `L/(N-1)`;
/// full grids place them on `[-L, L]` with step `2L/(N-1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    half_width: f64,
    points: usize,
    parity: GridParity,
}

impl GridSpec {
    pub fn new(half_width: f64, points: usize, parity: GridParity) -> Result<Self, EigenError> {
        let max = COSH_ARG_GUARD / 4.0;
        if !(half_width.is_finite() && half_width > 0.0 && half_width <= max) {
            return Err(EigenError::InvalidHalfWidth {
                given: half_width,
                max,
            });
        }
        if points < 64 {
            return Err(EigenError::TooFewPoints { points });
        }
        Ok(Self {
            half_width,
            points,
            parity,
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn parity(&self) -> GridParity {
        self.parity
    }

    pub fn step(&self) -> f64 {
        match self.parity {
            GridParity::Full => 2.0 * self.half_width / (self.points - 1) as f64,
            _ => self.half_width / (self.points - 1) as f64,
        }
    }

    /// Point count of the matching half-domain grid (same step).
    pub fn half_points(&self) -> usize {
        match self.parity {
            GridParity::Full => self.points / 2 + 1,
            _ => self.points,
        }
    }
}

/// Solver backend identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Fd,
    Numerov,
    HeunZ,
}

impl Backend {
    pub fn label(&self) -> &'static str {
        match self {
            Backend::Fd => "fd",
            Backend::Numerov => "numerov",
            Backend::HeunZ => "heun-z",
        }
    }
}

/// One converged bound state.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLevel {
    /// 1-based global index in energy order.
    pub index: usize,
    pub eps: f64,
    pub parity: Parity,
    /// Interior node count of the full-domain eigenfunction.
    pub nodes: usize,
    pub backend: Backend,
    /// Richardson-style discretization estimate plus bisection width.
    pub est_error: f64,
}

/// Splitting of the `pair`-th quasi-degenerate doublet (`eps_odd - eps_even`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubletSplitting {
    pub pair: usize,
    pub delta: f64,
}

/// Globally ordered bound-state spectrum with doublet metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub params: PotentialParams,
    pub levels: Vec<EnergyLevel>,
    pub splittings: Vec<DoubletSplitting>,
    /// Non-fatal diagnostics (sector interleaving conflicts and the like).
    pub warnings: Vec<String>,
}

/// Options for [`spectrum`].
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub backend: Backend,
    /// Overrides [`default_grid`] when set. A grid with `Even`/`Odd` parity
    /// restricts the solve to that sector.
    pub grid: Option<GridSpec>,
    /// Bisection width target on eigenvalues.
    pub tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            backend: Backend::Fd,
            grid: None,
            tol: 1e-8,
        }
    }
}

/// Pick a grid for the lowest `k` levels: the wall goes where `V` clears a
/// crude upper estimate of `eps_k` by 50 energy units *and* the decay
/// integral past the turning point is large enough that wall truncation is
/// far below solver tolerance. Point count defaults to 4001 on the full
/// domain (2001 per sector).
pub fn default_grid(p: &PotentialParams, k: usize) -> Result<GridSpec, EigenError> {
    if k == 0 || k > 64 {
        return Err(EigenError::InvalidLevelCount { k });
    }
    let shape = classify_well(p);
    let tc = taylor_coefficients(p);
    let kf = k as f64;

    let curvature = match shape.kind {
        WellKind::Double => {
            let xm = shape.minima[shape.minima.len() - 1];
            let xi = p.xi();
            2.0 * xi * xi * (4.0 * xm).cosh() - 4.0 * p.m_plus_one() * xi * (2.0 * xm).cosh()
        }
        _ => 2.0 * tc.c2,
    }
    .max(4.0);
    let harmonic = shape.depth + 2.0 * (2.0 * kf + 1.0) * (0.5 * curvature).sqrt();
    let spread = shape.minima[shape.minima.len() - 1].abs() + 1.2;
    let v0 = scaled_potential(0.0, p)?;
    let box_bound = v0.max(shape.depth) + 4.0 * (kf * PI / (2.0 * spread)).powi(2);
    let eps_upper = harmonic.max(box_bound) + 10.0 * kf + 25.0;

    let step = 0.01;
    let x_cap = COSH_ARG_GUARD / 4.0;
    let mut tail_integral = 0.0;
    let mut x = step;
    loop {
        if x > x_cap {
            return Err(EigenError::GridCapConflict);
        }
        let v = scaled_potential(x, p)?;
        if v > eps_upper {
            tail_integral += step * (v - eps_upper).sqrt();
        }
        if tail_integral >= 20.0 && v >= eps_upper + 50.0 && x >= spread {
            break;
        }
        x += step;
    }
    let half_width = (x / 0.05).ceil() * 0.05;
    GridSpec::new(half_width, 4001, GridParity::Full)
}

/// Second-order central-difference discretization of `-d^2/dx^2 + V` on the
/// grid sector, as a symmetric tridiagonal operator.
///
/// Walls are Dirichlet. The even sector encodes `psi'(0) = 0` through a
/// reflected ghost point; scaling the origin row by sqrt(2) keeps the matrix
/// symmetric with the same spectrum as the doubled-off-diagonal form.
pub fn build_hamiltonian(
    p: &PotentialParams,
    g: &GridSpec,
) -> Result<SymmetricTridiagonal, EigenError> {
    let h = g.step();
    let inv_h2 = 1.0 / (h * h);
    let n = g.points();
    let t = match g.parity() {
        GridParity::Full => {
            let denom = (n - 1) as f64;
            let mut diag = Vec::with_capacity(n - 2);
            for i in 1..n - 1 {
                let x = (2 * i as i64 - (n as i64 - 1)) as f64 / denom * g.half_width();
                diag.push(2.0 * inv_h2 + scaled_potential(x, p)?);
            }
            SymmetricTridiagonal::new(diag, vec![-inv_h2; n - 3])
        }
        GridParity::Even => {
            let mut diag = Vec::with_capacity(n - 1);
            for j in 0..n - 1 {
                diag.push(2.0 * inv_h2 + scaled_potential(j as f64 * h, p)?);
            }
            let mut off = vec![-inv_h2; n - 2];
            off[0] = -SQRT_2 * inv_h2;
            SymmetricTridiagonal::new(diag, off)
        }
        GridParity::Odd => {
            let mut diag = Vec::with_capacity(n - 2);
            for j in 1..n - 1 {
                diag.push(2.0 * inv_h2 + scaled_potential(j as f64 * h, p)?);
            }
            SymmetricTridiagonal::new(diag, vec![-inv_h2; n - 3])
        }
    };
    Ok(t)
}

fn sector_eigs_fd(
    p: &PotentialParams,
    half_width: f64,
    half_points: usize,
    parity: Parity,
    k: usize,
    width: f64,
) -> Result<Vec<f64>, EigenError> {
    let g = GridSpec::new(half_width, half_points, parity.into())?;
    let t = build_hamiltonian(p, &g)?;
    eigenvalues_bisection(&t, k, width)
}

fn sector_eigs_numerov(
    p: &PotentialParams,
    half_width: f64,
    half_points: usize,
    parity: Parity,
    k: usize,
    width: f64,
) -> Result<Vec<f64>, EigenError> {
    let shooter = numerov::Shooter::new(p, half_width, half_points, parity)?;
    shooter.eigenvalues(k, width)
}

fn richardson(coarse: f64, fine: f64, order: u32) -> (f64, f64) {
    let factor = 2f64.powi(order as i32);
    let value = (factor * fine - coarse) / (factor - 1.0);
    let est = (fine - coarse).abs() / (factor - 1.0);
    (value, est)
}

/// Compute the `k` lowest levels, merge parity sectors, attach node counts
/// and doublet splittings. Each sector is solved on the grid and on its
/// step-halved refinement; the reported `eps` is the Richardson limit and
/// `est_error` the extrapolation estimate.
pub fn spectrum(
    p: &PotentialParams,
    k: usize,
    opts: &SolveOptions,
) -> Result<Spectrum, EigenError> {
    if k == 0 || k > 12 {
        return Err(EigenError::InvalidLevelCount { k });
    }
    if !(opts.tol.is_finite() && opts.tol > 0.0) {
        return Err(EigenError::InvalidTolerance { tol: opts.tol });
    }
    let grid = match opts.grid {
        Some(g) => g,
        None => default_grid(p, k)?,
    };
    let half_width = grid.half_width();
    let n1 = grid.half_points();
    let n2 = 2 * n1 - 1;
    let width = (0.05 * opts.tol).max(1e-12);

    let sectors: &[Parity] = match grid.parity() {
        GridParity::Full => &[Parity::Even, Parity::Odd],
        GridParity::Even => &[Parity::Even],
        GridParity::Odd => &[Parity::Odd],
    };
    let per_sector = if sectors.len() == 2 { k / 2 + 1 } else { k };

    // (eps, est, parity, sector level)
    let mut entries: Vec<(f64, f64, Parity, usize)> = Vec::new();
    for &parity in sectors {
        match opts.backend {
            Backend::Fd | Backend::Numerov => {
                let solve = |n: usize| -> Result<Vec<f64>, EigenError> {
                    match opts.backend {
                        Backend::Fd => sector_eigs_fd(p, half_width, n, parity, per_sector, width),
                        _ => sector_eigs_numerov(p, half_width, n, parity, per_sector, width),
                    }
                };
                let order = if opts.backend == Backend::Fd { 2 } else { 4 };
                let coarse = solve(n1)?;
                let fine = solve(n2)?;
                for j in 0..per_sector {
                    let (value, est) = richardson(coarse[j], fine[j], order);
                    entries.push((value, est.max(width), parity, j + 1));
                }
            }
            Backend::HeunZ => {
                // seed with extrapolated FD values, then polish on the
                // Heun-variable indicator
                let coarse = sector_eigs_fd(p, half_width, n1, parity, per_sector, width)?;
                let fine = sector_eigs_fd(p, half_width, n2, parity, per_sector, width)?;
                let z_max = (half_width.cosh().powi(2)).min(1260.0 / p.xi());
                for j in 0..per_sector {
                    let (guess, est) = richardson(coarse[j], fine[j], 2);
                    let window = (10.0 * est).max(1e-3);
                    let tol_hz = opts.tol.max(1e-9);
                    let root = heun_shoot::polish_root(p, guess, window, z_max, parity, tol_hz)?;
                    entries.push((root, (root - guess).abs().max(tol_hz), parity, j + 1));
                }
            }
        }
    }

    // even states sort ahead of exact ties
    entries.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
    entries.truncate(k);

    let mut warnings = Vec::new();
    let shape = classify_well(p);
    let mut levels = Vec::with_capacity(k);
    for (i, &(eps, est, parity, sector_level)) in entries.iter().enumerate() {
        let nodes = match parity {
            Parity::Even => 2 * (sector_level - 1),
            Parity::Odd => 2 * sector_level - 1,
        };
        if eps < shape.depth - 1e-6 {
            warnings.push(format!(
                "level {} at eps = {eps} lies below the potential minimum {}",
                i + 1,
                shape.depth
            ));
        }
        levels.push(EnergyLevel {
            index: i + 1,
            eps,
            parity,
            nodes,
            backend: opts.backend,
            est_error: est,
        });
    }

    if sectors.len() == 2 {
        for pair in levels.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if a.parity == b.parity && (b.eps - a.eps) > 10.0 * (a.est_error + b.est_error) {
                warnings.push(format!(
                    "sector interleaving conflict: levels {} and {} share {} parity",
                    a.index,
                    b.index,
                    a.parity.label()
                ));
            }
        }
    }

    let mut splittings = Vec::new();
    if sectors.len() == 2 && shape.kind == WellKind::Double {
        let mut pair = 1;
        while 2 * pair <= levels.len() {
            let lo = &levels[2 * pair - 2];
            let hi = &levels[2 * pair - 1];
            splittings.push(DoubletSplitting {
                pair,
                delta: hi.eps - lo.eps,
            });
            pair += 1;
        }
    }

    Ok(Spectrum {
        params: *p,
        levels,
        splittings,
        warnings,
    })
}

/// Normalized eigenfunction samples on the full domain for a converged `eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenfunction {
    pub eps: f64,
    pub parity: Parity,
    /// Interior sign changes, boundary zeros excluded.
    pub nodes: usize,
    pub samples: SampledFunction,
}

/// Reconstruct the eigenfunction at `eps` by a two-sided Numerov shot in the
/// parity sector that matches, mirror it to `[-L, L]`, and normalize the
/// trapezoid integral of `psi^2` to one. Sign convention: the first interior
/// extremum from the left is positive.
pub fn eigenfunction(
    p: &PotentialParams,
    eps: f64,
    g: &GridSpec,
) -> Result<Eigenfunction, EigenError> {
    let n = g.half_points();
    let half_width = g.half_width();
    let even = numerov::Shooter::new(p, half_width, n, Parity::Even)?;
    let odd = numerov::Shooter::new(p, half_width, n, Parity::Odd)?;
    let me = even.mismatch(eps).abs();
    let mo = odd.mismatch(eps).abs();
    let (parity, shooter, mismatch) = if me <= mo {
        (Parity::Even, &even, me)
    } else {
        (Parity::Odd, &odd, mo)
    };
    if mismatch > 1e-3 {
        return Err(EigenError::NotAnEigenvalue { eps, mismatch });
    }

    let half = shooter.wavefunction(eps);
    let h = half_width / (n - 1) as f64;
    let center = n - 1;
    let full_len = 2 * n - 1;
    let mut values = vec![0.0; full_len];
    for (i, &y) in half.iter().enumerate() {
        values[center + i] = y;
        values[center - i] = match parity {
            Parity::Even => y,
            Parity::Odd => -y,
        };
    }

    // trapezoid normalization of psi^2
    let mut norm = 0.0;
    for (i, &v) in values.iter().enumerate() {
        let w = if i == 0 || i == full_len - 1 {
            0.5
        } else {
            1.0
        };
        norm += w * v * v;
    }
    norm *= h;
    let scale = norm.sqrt();
    for v in values.iter_mut() {
        *v /= scale;
    }

    // sign convention at the first substantial interior extremum
    let peak = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    for i in 1..full_len - 1 {
        if values[i].abs() > 1e-6 * peak
            && (values[i] - values[i - 1]) * (values[i + 1] - values[i]) <= 0.0
        {
            if values[i] < 0.0 {
                for v in values.iter_mut() {
                    *v = -*v;
                }
            }
            break;
        }
    }

    // node count with an amplitude floor so the decayed tails stay silent
    let floor = 1e-8 * peak;
    let mut nodes = 0;
    let mut last_sign = 0.0f64;
    for &v in &values {
        if v.abs() <= floor {
            continue;
        }
        let s = v.signum();
        if last_sign != 0.0 && s != last_sign {
            nodes += 1;
        }
        last_sign = s;
    }

    let mut points = Vec::with_capacity(full_len);
    for (i, &v) in values.iter().enumerate() {
        let mut x = (i as i64 - center as i64) as f64 * h;
        if x == 0.0 {
            x = 0.0;
        }
        points.push((x, v));
    }

    Ok(Eigenfunction {
        eps,
        parity,
        nodes,
        samples: SampledFunction::new(points),
    })
}

/// One non-decreasing step of `eps_i` along increasing `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityCell {
    pub index: usize,
    pub m_from: i32,
    pub m_to: i32,
    pub eps_from: f64,
    pub eps_to: f64,
}

/// Per-level record of whether `eps_i` decreases with increasing `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub xi: f64,
    pub m_values: Vec<i32>,
    pub levels: usize,
    pub decreasing: Vec<bool>,
    pub counterexamples: Vec<MonotonicityCell>,
}

/// Evaluate monotonicity on an externally supplied level table (one row of
/// `eps_1..eps_levels` per entry of `m_values`).
pub fn monotonicity_from_levels(
    xi: f64,
    m_values: &[i32],
    rows: &[Vec<f64>],
    levels: usize,
) -> MonotonicityReport {
    let mut decreasing = vec![true; levels];
    let mut counterexamples = Vec::new();
    for i in 0..levels {
        for w in 0..rows.len().saturating_sub(1) {
            let (a, b) = (rows[w][i], rows[w + 1][i]);
            if b >= a {
                decreasing[i] = false;
                counterexamples.push(MonotonicityCell {
                    index: i + 1,
                    m_from: m_values[w],
                    m_to: m_values[w + 1],
                    eps_from: a,
                    eps_to: b,
                });
            }
        }
    }
    MonotonicityReport {
        xi,
        m_values: m_values.to_vec(),
        levels,
        decreasing,
        counterexamples,
    }
}

/// Solve spectra over `m_range` and report, per level index, whether the
/// eigenvalue decreases as `m` grows, with counterexample cells listed.
pub fn monotonicity_report(
    xi: f64,
    m_range: std::ops::RangeInclusive<i32>,
    levels: usize,
    opts: &SolveOptions,
) -> Result<MonotonicityReport, EigenError> {
    let m_values: Vec<i32> = m_range.collect();
    let mut rows = Vec::with_capacity(m_values.len());
    for &m in &m_values {
        let p = PotentialParams::new(m, xi)?;
        let s = spectrum(&p, levels, opts)?;
        rows.push(s.levels.iter().map(|l| l.eps).collect());
    }
    Ok(monotonicity_from_levels(xi, &m_values, &rows, levels))
}
