//! Acceptance suite: one test per criterion, each printing a PASS line on
//! success (run with `--nocapture` to see them). Criteria and tolerances are
//! pinned here, not configurable.
//!
//! Note on criterion 2: the bundled reference table itself carries errors
//! that grow with the level index inside the trusted rows (the m = 2 and
//! m = 3 rows have closed-form eigenvalues -2 +- 2 sqrt(10) and
//! -8 +- 2 sqrt(7) that the reference values miss by up to 6e-2, and the
//! m = 0 row must be isospectral to the m = -2 row above the zero mode).
//! The tolerance is asserted all the same; the failure documents the
//! reference defect rather than a solver defect. See README "Reference-table
//! accuracy" for the full evidence.

use std::time::Instant;

use assert_cmd::Command;

use razavy_cli::reference::{REFERENCE_EPS, REFERENCE_M, TRUSTED_MAX_M};
use razavy_core::eigen::{
    build_hamiltonian, eigenfunction, eigenvalues_bisection, numerov_shoot, spectrum, Backend,
    GridParity, GridSpec, Parity, SolveOptions,
};
use razavy_core::heun::{
    delta_determinant, heun_series, map_problem_to_heun, map_problem_to_heun_decaying,
    series_coefficients, termination_mass_condition, HeunParams,
};
use razavy_core::potential::{classify_well, sample_potential, scaled_potential, WellKind};
use razavy_core::PotentialParams;

fn splitmix(state: &mut u64) -> f64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z = z ^ (z >> 31);
    (z >> 11) as f64 / (1u64 << 53) as f64
}

fn params(m: i32, xi: f64) -> PotentialParams {
    PotentialParams::new(m, xi).unwrap()
}

fn solve(m: i32, backend: Backend) -> Vec<f64> {
    let s = spectrum(
        &params(m, 3.0),
        6,
        &SolveOptions {
            backend,
            ..Default::default()
        },
    )
    .unwrap();
    s.levels.iter().map(|l| l.eps).collect()
}

#[test]
fn acceptance_01_analytic_anchors() {
    let start = Instant::now();
    // substitution oracle: psi = f exp(-xi cosh^2 x/2) has zero residual in
    // -psi'' + (V - eps) psi for the three anchor shapes
    for &xi in &[1.0f64, 2.0, 3.0, 5.0] {
        for x in [0.0, 0.5, 1.3, 2.0] {
            let gp = -0.5 * xi * (2.0f64 * x).sinh();
            let gpp = -xi * (2.0f64 * x).cosh();
            let residual = |m: i32, eps: f64, f: f64, fp: f64, fpp: f64| -> f64 {
                let v = scaled_potential(x, &params(m, xi)).unwrap();
                -(fpp + 2.0 * fp * gp + f * (gp * gp + gpp)) + (v - eps) * f
            };
            let scale = xi * xi * (2.0 * x).cosh() * x.cosh().max(1.0);
            assert!(residual(0, 0.0, 1.0, 0.0, 0.0).abs() < 1e-10 * scale);
            assert!(residual(1, -(1.0 + xi), x.cosh(), x.sinh(), x.cosh()).abs() < 1e-10 * scale);
            assert!(residual(1, xi - 1.0, x.sinh(), x.cosh(), x.sinh()).abs() < 1e-10 * scale);
        }
    }
    // solver reproduces the anchors to 1e-6
    for &xi in &[1.0f64, 2.0, 3.0, 5.0] {
        let s = spectrum(&params(0, xi), 1, &SolveOptions::default()).unwrap();
        assert!(
            s.levels[0].eps.abs() < 1e-6,
            "xi={xi}: eps_1 = {:.3e}",
            s.levels[0].eps
        );
        let s = spectrum(&params(1, xi), 2, &SolveOptions::default()).unwrap();
        assert!(
            (s.levels[0].eps + 1.0 + xi).abs() < 1e-6,
            "xi={xi}: eps_1 = {} want {}",
            s.levels[0].eps,
            -(1.0 + xi)
        );
        assert!(
            (s.levels[1].eps - (xi - 1.0)).abs() < 1e-6,
            "xi={xi}: eps_2 = {} want {}",
            s.levels[1].eps,
            xi - 1.0
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:.2?}");
    println!(
        "ACCEPTANCE 1 PASS: analytic anchors within 1e-6 for xi in {{1,2,3,5}} ({elapsed:.2?})"
    );
}

#[test]
fn acceptance_02_table1_trusted_rows() {
    let start = Instant::now();
    let mut violations = Vec::new();
    for (row, &m) in REFERENCE_M.iter().enumerate() {
        if m > TRUSTED_MAX_M {
            continue;
        }
        let eps = solve(m, Backend::Fd);
        for i in 0..6 {
            let diff = (eps[i] - REFERENCE_EPS[row][i]).abs();
            if diff > 5e-3 {
                violations.push(format!(
                    "m={m} i={} computed {:.6} vs reference {:.6} (|diff| = {diff:.2e})",
                    i + 1,
                    eps[i],
                    REFERENCE_EPS[row][i]
                ));
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:.2?}");
    assert!(
        violations.is_empty(),
        "ACCEPTANCE 2 FAIL: {} trusted cells deviate beyond 5e-3.\n\
         The deviation is in the reference table, not the solver: the exact\n\
         closed forms eps(m=2) = -2 +- 2*sqrt(10) = (-8.3245553, 4.3245553),\n\
         the xi-independent odd anchor eps(m=2) = -4 (reference -3.99300), and\n\
         eps(m=3) = -8 +- 2*sqrt(7) = (-13.2915026, -2.7084974) are reproduced\n\
         by this solver to ~1e-10 (two independent backends agree), while the\n\
         reference cells drift high with the level index (up to 0.75 at m=3,\n\
         i=6). See README 'Reference-table accuracy'.\nCells:\n{}",
        violations.len(),
        violations.join("\n")
    );
    println!("ACCEPTANCE 2 PASS: trusted rows within 5e-3 ({elapsed:.2?})");
}

#[test]
fn acceptance_03_high_m_cross_backend() {
    let start = Instant::now();
    let mut reported = String::new();
    for (row, &m) in REFERENCE_M.iter().enumerate() {
        let fd = solve(m, Backend::Fd);
        let nv = solve(m, Backend::Numerov);
        for i in 0..6 {
            let gap = (fd[i] - nv[i]).abs();
            assert!(
                gap < 1e-6,
                "m={m} i={}: fd {} vs numerov {} (gap {gap:.2e})",
                i + 1,
                fd[i],
                nv[i]
            );
        }
        if m >= 4 {
            // reference agreement is reported, not gated (documented anomalies)
            let worst = (0..6)
                .map(|i| (fd[i] - REFERENCE_EPS[row][i]).abs())
                .fold(0.0f64, f64::max);
            reported.push_str(&format!(
                "  m={m}: worst |computed - reference| = {worst:.3}\n"
            ));
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:.2?}");
    println!(
        "ACCEPTANCE 3 PASS: fd/numerov agree within 1e-6 on all rows ({elapsed:.2?}); \
         informational reference gaps for m >= 4:\n{reported}"
    );
}

#[test]
fn acceptance_04_heun_series_validity() {
    // residual of the truncated series in the uniform-form equation
    fn residual(h: &HeunParams, coeffs: &[f64], z: f64) -> (f64, f64) {
        let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
        let mut zpow = 1.0;
        for (n, &v) in coeffs.iter().enumerate() {
            let nf = n as f64;
            if n >= 2 {
                ddp += nf * (nf - 1.0) * v * zpow / (z * z);
            }
            if n >= 1 {
                dp += nf * v * zpow / z;
            }
            p += v * zpow;
            zpow *= z;
        }
        let r = ddp
            + (h.alpha + (1.0 + h.beta) / z + (1.0 + h.gamma) / (z - 1.0)) * dp
            + (h.mu / z + h.nu / (z - 1.0)) * p;
        (r, p)
    }

    let mut state = 0xacce_0004u64;
    for trial in 0..100 {
        let m = (splitmix(&mut state) * 19.0) as i32 - 6;
        let xi = 0.5 + 4.5 * splitmix(&mut state);
        let eps = 120.0 * (splitmix(&mut state) - 0.5);
        let z = 1.6 * (splitmix(&mut state) - 0.5);
        let h = map_problem_to_heun(m, xi, eps);
        let sum = heun_series(&h, z, 1e-13, 4000).unwrap();
        assert!(sum.converged, "trial {trial} unconverged");
        let coeffs = series_coefficients(&h, sum.terms_used).unwrap();
        let (r, p) = residual(&h, &coeffs, z);
        assert!(
            r.abs() < 1e-8 * (1.0 + p.abs()),
            "trial {trial}: residual {r:.2e} at z={z}"
        );
        // series at z = 0 equals 1 exactly
        let at_zero = heun_series(&h, 0.0, 1e-12, 100).unwrap();
        assert_eq!(at_zero.value, 1.0);
    }
    println!("ACCEPTANCE 4 PASS: 100 random series residuals below 1e-8*(1+|H|), H(0) = 1 exactly");
}

#[test]
fn acceptance_05_termination_machinery() {
    assert_eq!(termination_mass_condition(1, 3.0), -4);

    #[allow(clippy::needless_range_loop)] // LU elimination indexes two rows at once
    fn dense_determinant(big_n: u32, mu: f64, h: &HeunParams) -> f64 {
        let n = big_n as usize + 1;
        let mut a = vec![vec![0.0f64; n]; n];
        for k in 0..n {
            let kf = k as f64;
            a[k][k] = mu - kf * (kf + 1.0 + h.beta + h.gamma) + kf * h.alpha;
            if k + 1 < n {
                let kf1 = (k + 1) as f64;
                a[k][k + 1] = kf1 * (kf1 + h.beta);
                a[k + 1][k] = (big_n as usize - k) as f64 * h.alpha;
            }
        }
        let mut det = 1.0;
        for col in 0..n {
            let mut pivot = col;
            for row in col + 1..n {
                if a[row][col].abs() > a[pivot][col].abs() {
                    pivot = row;
                }
            }
            if a[pivot][col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            det *= a[col][col];
            for row in col + 1..n {
                let f = a[row][col] / a[col][col];
                for c in col..n {
                    a[row][c] -= f * a[col][c];
                }
            }
        }
        det
    }

    let mut state = 0xacce_0005u64;
    for big_n in 0..=6u32 {
        for _ in 0..100 {
            let m = (splitmix(&mut state) * 19.0) as i32 - 6;
            let xi = 0.5 + 4.5 * splitmix(&mut state);
            let eps = 60.0 * (splitmix(&mut state) - 0.5);
            let h = if splitmix(&mut state) < 0.5 {
                map_problem_to_heun(m, xi, eps)
            } else {
                map_problem_to_heun_decaying(m, xi, eps)
            };
            let mu = 40.0 * (splitmix(&mut state) - 0.5);
            let fast = delta_determinant(big_n, mu, &h);
            let dense = dense_determinant(big_n, mu, &h);
            assert!(
                (fast - dense).abs() <= 1e-10 * dense.abs().max(1e-30),
                "N={big_n} mu={mu}: {fast} vs {dense}"
            );
        }
    }
    println!(
        "ACCEPTANCE 5 PASS: m*(N=1) = -4; minor recurrence matches dense determinant to 1e-10"
    );
}

#[test]
fn acceptance_06_structural_spectral_properties() {
    for &m in &REFERENCE_M {
        let p = params(m, 3.0);
        let s = spectrum(&p, 6, &SolveOptions::default()).unwrap();
        let shape = classify_well(&p);
        let grid = razavy_core::eigen::default_grid(&p, 6).unwrap();
        assert!(s.warnings.is_empty(), "m={m}: {:?}", s.warnings);
        for (i, level) in s.levels.iter().enumerate() {
            assert_eq!(level.index, i + 1);
            // strict ordering
            if i > 0 {
                assert!(
                    level.eps > s.levels[i - 1].eps,
                    "m={m}: ordering fails at {}",
                    i + 1
                );
            }
            // bounded below by the well depth
            assert!(
                level.eps >= shape.depth,
                "m={m} i={}: {} below depth {}",
                i + 1,
                level.eps,
                shape.depth
            );
            // definite parity per sector, alternating from even
            let want = if i % 2 == 0 {
                Parity::Even
            } else {
                Parity::Odd
            };
            assert_eq!(level.parity, want, "m={m} i={}", i + 1);
            // node theorem, counted on the reconstructed eigenfunction
            let wf = eigenfunction(&p, level.eps, &grid).unwrap();
            assert_eq!(wf.nodes, i, "m={m} i={}: {} nodes", i + 1, wf.nodes);
            assert_eq!(wf.parity, level.parity);
        }
        if shape.kind == WellKind::Double && m >= 6 {
            assert!(!s.splittings.is_empty(), "m={m}: no splittings reported");
            for sp in &s.splittings {
                assert!(sp.delta > 0.0, "m={m} pair {}: {}", sp.pair, sp.delta);
            }
            assert_eq!(s.levels[0].parity, Parity::Even);
            assert_eq!(s.levels[1].parity, Parity::Odd);
        }
    }
    println!(
        "ACCEPTANCE 6 PASS: ordering, depth bound, node theorem, sector parity, \
         positive doublet splittings (m >= 6)"
    );
}

#[test]
fn acceptance_07_convergence_orders() {
    let p = params(0, 3.0);
    let l = 2.4;

    let fd_ground = |n: usize| -> f64 {
        let g = GridSpec::new(l, n, GridParity::Even).unwrap();
        let t = build_hamiltonian(&p, &g).unwrap();
        eigenvalues_bisection(&t, 1, 1e-13).unwrap()[0]
    };
    let err_coarse = fd_ground(1001).abs();
    let err_fine = fd_ground(2001).abs();
    let fd_ratio = err_coarse / err_fine;
    assert!(
        (3.5..=4.5).contains(&fd_ratio),
        "fd ratio {fd_ratio:.3} (errors {err_coarse:.2e} -> {err_fine:.2e})"
    );

    let numerov_ground = |n: usize| -> f64 {
        let g = GridSpec::new(l, n, GridParity::Even).unwrap();
        let f = |e: f64| numerov_shoot(&p, e, &g, Parity::Even).unwrap();
        let (mut a, mut b) = (-0.01f64, 0.01f64);
        let mut fa = f(a);
        for _ in 0..80 {
            let mid = 0.5 * (a + b);
            let fm = f(mid);
            if fm == 0.0 {
                return mid;
            }
            if fm.signum() == fa.signum() {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    };
    let err_coarse = numerov_ground(251).abs();
    let err_fine = numerov_ground(501).abs();
    let nv_ratio = err_coarse / err_fine;
    assert!(
        (12.0..=20.0).contains(&nv_ratio),
        "numerov ratio {nv_ratio:.3} (errors {err_coarse:.2e} -> {err_fine:.2e})"
    );
    println!(
        "ACCEPTANCE 7 PASS: grid-halving error ratios fd {fd_ratio:.2} in [3.5, 4.5], \
         numerov {nv_ratio:.2} in [12, 20]"
    );
}

#[test]
fn acceptance_08_figure_data_sanity() {
    for &m in &[0i32, 1, 6, 8, 10, 12, -1, -6] {
        let p = params(m, 3.0);
        let s = sample_potential(&p, 2.0, 401).unwrap();
        let step = 4.0 / 400.0;
        let (x_min_grid, _) = s.min_point().unwrap();
        let shape = classify_well(&p);
        if shape.kind == WellKind::Double {
            let xm = shape.minima[1];
            assert!(
                (x_min_grid.abs() - xm).abs() <= step,
                "m={m}: grid minimum {x_min_grid} vs analytic {xm}"
            );
            for &x in &shape.minima {
                let v = scaled_potential(x, &p).unwrap();
                let depth = -(f64::from(m) + 1.0).powi(2) - 9.0 / 4.0;
                assert!(
                    (v - depth).abs() < 1e-6,
                    "m={m}: V(x_min) = {v} vs depth {depth}"
                );
            }
        } else {
            assert!(
                x_min_grid.abs() <= step,
                "m={m}: single-well grid minimum at {x_min_grid}"
            );
        }
    }
    println!("ACCEPTANCE 8 PASS: sampled minima within one grid step; depths exact to 1e-6");
}

#[test]
fn acceptance_09_table1_determinism_across_thread_counts() {
    let run = |threads: &str| -> (Option<i32>, Vec<u8>) {
        let out = Command::cargo_bin("razavy")
            .unwrap()
            .env("RAZAVY_THREADS", threads)
            .arg("table1")
            .output()
            .unwrap();
        (out.status.code(), out.stdout)
    };
    let (c0a, serial_a) = run("0");
    let (c0b, serial_b) = run("0");
    let (c4a, par_a) = run("4");
    let (c4b, par_b) = run("4");
    assert_eq!(serial_a, serial_b, "serial runs differ");
    assert_eq!(par_a, par_b, "parallel runs differ");
    assert_eq!(serial_a, par_a, "serial vs 4-thread output differs");
    assert_eq!(c0a, c0b);
    assert_eq!(c0a, c4a);
    assert_eq!(c4a, c4b);
    println!("ACCEPTANCE 9 PASS: table1 byte-identical with RAZAVY_THREADS in {{0, 4}}");
}
