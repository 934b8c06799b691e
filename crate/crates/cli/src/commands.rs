//! The six CLI commands and their fixed output formats.

use std::io::Write;
use std::path::PathBuf;

use razavy_core::eigen::{
    default_grid, eigenfunction, spectrum, Backend, GridParity, GridSpec, SolveOptions, Spectrum,
};
use razavy_core::heun::{
    delta_determinant, heun_series, map_problem_to_heun, termination_mass_condition,
};
use razavy_core::potential::sample_potential;
use razavy_core::sample::SampledFunction;
use razavy_core::PotentialParams;

use crate::args::CommonArgs;
use crate::config::{self, FileConfig};
use crate::fmt::{f9, json_string};
use crate::reference::{REFERENCE_EPS, REFERENCE_M, TRUSTED_MAX_M};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Fully merged and validated run parameters (flags win over `--config`).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub m: Option<i32>,
    pub xi: Option<f64>,
    pub levels: usize,
    pub level: usize,
    pub backend: Backend,
    pub half_width: Option<f64>,
    pub points: Option<usize>,
    pub parity: GridParity,
    pub tol: Option<f64>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub z: Option<f64>,
    pub eps: f64,
    pub n_max: u32,
}

impl RunConfig {
    pub fn merge(
        cli: &CommonArgs,
        z: Option<f64>,
        eps: Option<f64>,
        n_max: Option<u32>,
    ) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(path) => config::load(path)?,
            None => FileConfig::default(),
        };
        let levels = cli.levels.or(file.levels).unwrap_or(6);
        if !(1..=12).contains(&levels) {
            return Err(CliError::Usage(format!(
                "levels must lie in 1..=12, got {levels}"
            )));
        }
        let level = cli.level.or(file.level).unwrap_or(1);
        if !(1..=12).contains(&level) {
            return Err(CliError::Usage(format!(
                "level must lie in 1..=12, got {level}"
            )));
        }
        let backend = match cli.backend.as_deref().or(file.backend.as_deref()) {
            None | Some("fd") => Backend::Fd,
            Some("numerov") => Backend::Numerov,
            Some("heun-z") => Backend::HeunZ,
            Some(other) => {
                return Err(CliError::Usage(format!(
                    "backend must be fd, numerov or heun-z, got {other}"
                )))
            }
        };
        let parity = match cli.parity.as_deref().or(file.parity.as_deref()) {
            None | Some("full") => GridParity::Full,
            Some("even") => GridParity::Even,
            Some("odd") => GridParity::Odd,
            Some(other) => {
                return Err(CliError::Usage(format!(
                    "parity must be even, odd or full, got {other}"
                )))
            }
        };
        let format = match cli.format.as_deref().or(file.format.as_deref()) {
            None | Some("csv") => OutputFormat::Csv,
            Some("json") => OutputFormat::Json,
            Some(other) => {
                return Err(CliError::Usage(format!(
                    "format must be csv or json, got {other}"
                )))
            }
        };
        let tol = cli.tol.or(file.tol);
        if let Some(t) = tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Usage(format!(
                    "tolerance must be positive and finite, got {t}"
                )));
            }
        }
        let n_max = n_max.or(file.n_max).unwrap_or(6);
        if !(1..=20).contains(&n_max) {
            return Err(CliError::Usage(format!(
                "n-max must lie in 1..=20, got {n_max}"
            )));
        }
        Ok(RunConfig {
            m: cli.m.or(file.m),
            xi: cli.xi.or(file.xi),
            levels,
            level,
            backend,
            half_width: cli.half_width.or(file.half_width),
            points: cli.points.or(file.points),
            parity,
            tol,
            format,
            out: cli.out.clone().or(file.out),
            z: z.or(file.z),
            eps: eps.or(file.eps).unwrap_or(0.0),
            n_max,
        })
    }

    fn require_params(&self) -> Result<PotentialParams, CliError> {
        let m = self
            .m
            .ok_or_else(|| CliError::Usage("--m is required".into()))?;
        let xi = self
            .xi
            .ok_or_else(|| CliError::Usage("--xi is required".into()))?;
        PotentialParams::new(m, xi).map_err(|e| CliError::Usage(e.to_string()))
    }

    /// Grid per flags; `None` leaves the solver on its automatic grid.
    fn grid(&self, p: &PotentialParams, k: usize) -> Result<Option<GridSpec>, CliError> {
        if self.half_width.is_none() && self.points.is_none() && self.parity == GridParity::Full {
            return Ok(None);
        }
        let half_width = match self.half_width {
            Some(l) => l,
            None => default_grid(p, k)
                .map_err(|e| CliError::Numeric(e.to_string()))?
                .half_width(),
        };
        let points = self.points.unwrap_or(match self.parity {
            GridParity::Full => 4001,
            _ => 2001,
        });
        GridSpec::new(half_width, points, self.parity)
            .map(Some)
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    fn solve_options(&self, grid: Option<GridSpec>) -> SolveOptions {
        SolveOptions {
            backend: self.backend,
            grid,
            tol: self.tol.unwrap_or(1e-8),
        }
    }

    fn emit(&self, body: String) -> Result<(), CliError> {
        match &self.out {
            Some(path) => std::fs::write(path, body)
                .map_err(|e| CliError::Numeric(format!("cannot write {}: {e}", path.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                match stdout.write_all(body.as_bytes()) {
                    Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                        Err(CliError::Numeric(format!("stdout: {e}")))
                    }
                    _ => Ok(()),
                }
            }
        }
    }
}

fn spectrum_csv(s: &Spectrum) -> String {
    let mut out = String::from("m,xi,index,eps,parity,nodes,est_error\n");
    for l in &s.levels {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            s.params.m(),
            f9(s.params.xi()),
            l.index,
            f9(l.eps),
            l.parity.label(),
            l.nodes,
            f9(l.est_error)
        ));
    }
    out
}

fn spectrum_json(s: &Spectrum) -> String {
    let mut out = String::from("{\"schema_version\":\"1\",\"kind\":\"spectrum\"");
    out.push_str(&format!(",\"m\":{}", s.params.m()));
    out.push_str(&format!(",\"xi\":{}", f9(s.params.xi())));
    out.push_str(",\"levels\":[");
    for (i, l) in s.levels.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!(
            "{{\"index\":{},\"eps\":{},\"parity\":{},\"nodes\":{},\"backend\":{},\"est_error\":{}}}",
            l.index,
            f9(l.eps),
            json_string(l.parity.label()),
            l.nodes,
            json_string(l.backend.label()),
            f9(l.est_error)
        ));
    }
    out.push_str("],\"splittings\":[");
    for (i, sp) in s.splittings.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!(
            "{{\"pair\":{},\"delta\":{}}}",
            sp.pair,
            f9(sp.delta)
        ));
    }
    out.push_str("],\"warnings\":[");
    for (i, w) in s.warnings.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&json_string(w));
    }
    out.push_str("]}\n");
    out
}

fn samples_csv(header: &str, value_column: &str, s: &SampledFunction) -> String {
    let mut out = String::from(header);
    out.push_str(&format!("x,{value_column}\n"));
    for &(x, v) in &s.points {
        out.push_str(&format!("{},{}\n", f9(x), f9(v)));
    }
    out
}

fn samples_json(kind: &str, meta: &str, s: &SampledFunction) -> String {
    let mut out = format!(
        "{{\"schema_version\":\"1\",\"kind\":{}{meta},\"samples\":[",
        json_string(kind)
    );
    for (i, &(x, v)) in s.points.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!("[{},{}]", f9(x), f9(v)));
    }
    out.push_str("]}\n");
    out
}

/// `solve`: compute a spectrum and emit it.
pub fn cmd_solve(cfg: &RunConfig) -> Result<i32, CliError> {
    let p = cfg.require_params()?;
    let grid = cfg.grid(&p, cfg.levels)?;
    let s = spectrum(&p, cfg.levels, &cfg.solve_options(grid))
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    let body = match cfg.format {
        OutputFormat::Csv => spectrum_csv(&s),
        OutputFormat::Json => spectrum_json(&s),
    };
    cfg.emit(body)?;
    Ok(0)
}

/// `potential`: emit potential samples.
pub fn cmd_potential(cfg: &RunConfig) -> Result<i32, CliError> {
    let p = cfg.require_params()?;
    let half_width = cfg.half_width.unwrap_or(2.0);
    let points = cfg.points.unwrap_or(401);
    let s = sample_potential(&p, half_width, points).map_err(|e| CliError::Usage(e.to_string()))?;
    let body = match cfg.format {
        OutputFormat::Csv => samples_csv("", "V", &s),
        OutputFormat::Json => samples_json(
            "potential",
            &format!(",\"m\":{},\"xi\":{}", p.m(), f9(p.xi())),
            &s,
        ),
    };
    cfg.emit(body)?;
    Ok(0)
}

/// `wavefunction`: solve up to the requested level and emit the normalized
/// eigenfunction samples with metadata.
pub fn cmd_wavefunction(cfg: &RunConfig) -> Result<i32, CliError> {
    let p = cfg.require_params()?;
    let grid = cfg.grid(&p, cfg.level)?;
    let full_grid = match grid {
        Some(g) if g.parity() == GridParity::Full => g,
        Some(g) => GridSpec::new(g.half_width(), 2 * g.points() - 1, GridParity::Full)
            .map_err(|e| CliError::Usage(e.to_string()))?,
        None => default_grid(&p, cfg.level).map_err(|e| CliError::Numeric(e.to_string()))?,
    };
    let opts = SolveOptions {
        backend: cfg.backend,
        grid: Some(full_grid),
        tol: cfg.tol.unwrap_or(1e-8),
    };
    let s = spectrum(&p, cfg.level, &opts).map_err(|e| CliError::Numeric(e.to_string()))?;
    let level = &s.levels[cfg.level - 1];
    let wf =
        eigenfunction(&p, level.eps, &full_grid).map_err(|e| CliError::Numeric(e.to_string()))?;
    let body = match cfg.format {
        OutputFormat::Csv => {
            let header = format!(
                "# m={}\n# xi={}\n# eps={}\n# parity={}\n# nodes={}\n",
                p.m(),
                f9(p.xi()),
                f9(wf.eps),
                wf.parity.label(),
                wf.nodes
            );
            samples_csv(&header, "psi", &wf.samples)
        }
        OutputFormat::Json => samples_json(
            "wavefunction",
            &format!(
                ",\"m\":{},\"xi\":{},\"eps\":{},\"parity\":{},\"nodes\":{}",
                p.m(),
                f9(p.xi()),
                f9(wf.eps),
                json_string(wf.parity.label()),
                wf.nodes
            ),
            &wf.samples,
        ),
    };
    cfg.emit(body)?;
    Ok(0)
}

/// `heun`: map the problem to confluent Heun parameters and evaluate the
/// series at `z` inside the unit disk.
pub fn cmd_heun(cfg: &RunConfig) -> Result<i32, CliError> {
    let p = cfg.require_params()?;
    let z = cfg
        .z
        .ok_or_else(|| CliError::Usage("--z is required".into()))?;
    let h = map_problem_to_heun(p.m(), p.xi(), cfg.eps);
    let tol = cfg.tol.unwrap_or(1e-10);
    let series = heun_series(&h, z, tol, 5000).map_err(|e| CliError::Usage(e.to_string()))?;
    let body = match cfg.format {
        OutputFormat::Csv => format!(
            "alpha={}\nbeta={}\ngamma={}\ndelta={}\neta={}\nmu={}\nnu={}\nz={}\nvalue={}\nterms={}\nconverged={}\ntail_bound={}\n",
            f9(h.alpha),
            f9(h.beta),
            f9(h.gamma),
            f9(h.delta),
            f9(h.eta),
            f9(h.mu),
            f9(h.nu),
            f9(z),
            f9(series.value),
            series.terms_used,
            series.converged,
            f9(series.tail_bound)
        ),
        OutputFormat::Json => format!(
            "{{\"schema_version\":\"1\",\"kind\":\"heun\",\"alpha\":{},\"beta\":{},\"gamma\":{},\"delta\":{},\"eta\":{},\"mu\":{},\"nu\":{},\"z\":{},\"value\":{},\"terms\":{},\"converged\":{},\"tail_bound\":{}}}\n",
            f9(h.alpha),
            f9(h.beta),
            f9(h.gamma),
            f9(h.delta),
            f9(h.eta),
            f9(h.mu),
            f9(h.nu),
            f9(z),
            f9(series.value),
            series.terms_used,
            series.converged,
            f9(series.tail_bound)
        ),
    };
    cfg.emit(body)?;
    Ok(0)
}

/// `check-termination`: list the `m*` solving the first termination
/// condition for N = 1..n_max, and tabulate the determinant at the mapped
/// `mu` for sample energies.
pub fn cmd_check_termination(cfg: &RunConfig) -> Result<i32, CliError> {
    let xi = cfg.xi.unwrap_or(3.0);
    if !(xi.is_finite() && xi > 0.0) {
        return Err(CliError::Usage(format!("xi must be positive, got {xi}")));
    }
    let sample_eps = [0.0, 1.0, 2.0];
    let mut rows = Vec::new();
    for n in 1..=cfg.n_max {
        let m_star = termination_mass_condition(n, xi);
        let mut deltas = Vec::new();
        for &eps in &sample_eps {
            let h = map_problem_to_heun(m_star, xi, eps);
            deltas.push((eps, h.mu, delta_determinant(n, h.mu, &h)));
        }
        rows.push((n, m_star, deltas));
    }
    let admissible = rows.iter().any(|&(_, m_star, _)| m_star >= 0);

    let body = match cfg.format {
        OutputFormat::Csv => {
            let mut out = String::new();
            for (n, m_star, _) in &rows {
                out.push_str(&format!("N={n} m_star={m_star}\n"));
            }
            out.push_str(if admissible {
                "admissible m >= 0 exists\n"
            } else {
                "no admissible m >= 0\n"
            });
            out.push_str(&format!("delta table (xi={})\n", f9(xi)));
            for (n, m_star, deltas) in &rows {
                for (eps, mu, delta) in deltas {
                    out.push_str(&format!(
                        "N={n} m_star={m_star} eps={} mu={} delta={}\n",
                        f9(*eps),
                        f9(*mu),
                        f9(*delta)
                    ));
                }
            }
            out
        }
        OutputFormat::Json => {
            let mut out = format!(
                "{{\"schema_version\":\"1\",\"kind\":\"check-termination\",\"xi\":{},\"admissible_nonnegative_m\":{admissible},\"rows\":[",
                f9(xi)
            );
            for (i, (n, m_star, deltas)) in rows.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&format!(
                    "{{\"n\":{n},\"m_star\":{m_star},\"delta_samples\":["
                ));
                for (j, (eps, mu, delta)) in deltas.iter().enumerate() {
                    if j > 0 {
                        out.push(',');
                    }
                    out.push_str(&format!(
                        "{{\"eps\":{},\"mu\":{},\"delta\":{}}}",
                        f9(*eps),
                        f9(*mu),
                        f9(*delta)
                    ));
                }
                out.push_str("]}");
            }
            out.push_str("]}\n");
            out
        }
    };
    cfg.emit(body)?;
    Ok(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CellStatus {
    Match,
    Mismatch,
    Informational,
}

impl CellStatus {
    fn label(&self) -> &'static str {
        match self {
            CellStatus::Match => "match",
            CellStatus::Mismatch => "mismatch",
            CellStatus::Informational => "informational",
        }
    }
}

/// Per-cell audit record of the reference table.
#[derive(Debug, Clone)]
struct TableDiff {
    m: i32,
    index: usize,
    reference: f64,
    computed: f64,
    abs_diff: f64,
    status: CellStatus,
}

type RowResult = (usize, Result<Vec<f64>, String>);

fn worker_count() -> Result<usize, CliError> {
    match std::env::var("RAZAVY_THREADS") {
        Ok(raw) => {
            let n: usize = raw.parse().map_err(|_| {
                CliError::Usage(format!("RAZAVY_THREADS must be an integer, got {raw}"))
            })?;
            Ok(n.max(1).min(REFERENCE_M.len()))
        }
        Err(_) => Ok(std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
            .min(8)),
    }
}

/// `table1`: recompute every reference cell on default grids, emit the diff
/// report in fixed row order, and gate on the trusted rows.
/// Exit codes: 0 all trusted cells match, 3 mismatches present.
pub fn cmd_table1(cfg: &RunConfig) -> Result<i32, CliError> {
    let cell_tol = cfg.tol.unwrap_or(5e-3);
    let workers = worker_count()?;

    let mut computed_rows: Vec<Option<Result<Vec<f64>, String>>> = vec![None; REFERENCE_M.len()];
    let solve_row = |row: usize| -> Result<Vec<f64>, String> {
        let m = REFERENCE_M[row];
        let p = PotentialParams::new(m, 3.0).map_err(|e| format!("row m={m}: {e}"))?;
        let s = spectrum(&p, 6, &SolveOptions::default()).map_err(|e| format!("row m={m}: {e}"))?;
        Ok(s.levels.iter().map(|l| l.eps).collect())
    };
    if workers <= 1 {
        for (row, slot) in computed_rows.iter_mut().enumerate() {
            *slot = Some(solve_row(row));
        }
    } else {
        let chunks: Vec<Vec<usize>> = (0..workers)
            .map(|w| {
                (0..REFERENCE_M.len())
                    .filter(|i| i % workers == w)
                    .collect()
            })
            .collect();
        let results: Vec<Vec<RowResult>> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .iter()
                .map(|rows| {
                    scope.spawn(move || {
                        rows.iter()
                            .map(|&row| (row, solve_row(row)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for batch in results {
            for (row, result) in batch {
                computed_rows[row] = Some(result);
            }
        }
    }

    let mut cells = Vec::with_capacity(REFERENCE_M.len() * 6);
    for (row, &m) in REFERENCE_M.iter().enumerate() {
        let eps = match computed_rows[row].take().unwrap() {
            Ok(eps) => eps,
            Err(msg) => return Err(CliError::Numeric(msg)),
        };
        for i in 0..6 {
            let reference = REFERENCE_EPS[row][i];
            let computed = eps[i];
            let abs_diff = (computed - reference).abs();
            let status = if m > TRUSTED_MAX_M {
                CellStatus::Informational
            } else if abs_diff <= cell_tol {
                CellStatus::Match
            } else {
                CellStatus::Mismatch
            };
            cells.push(TableDiff {
                m,
                index: i + 1,
                reference,
                computed,
                abs_diff,
                status,
            });
        }
    }

    let gated = cells
        .iter()
        .filter(|c| c.status != CellStatus::Informational)
        .count();
    let matched = cells
        .iter()
        .filter(|c| c.status == CellStatus::Match)
        .count();
    let mismatched = cells
        .iter()
        .filter(|c| c.status == CellStatus::Mismatch)
        .count();
    let informational = cells.len() - gated;

    let body = match cfg.format {
        OutputFormat::Csv => {
            let mut out = String::from("m,index,reference,computed,abs_diff,status\n");
            for c in &cells {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    c.m,
                    c.index,
                    f9(c.reference),
                    f9(c.computed),
                    f9(c.abs_diff),
                    c.status.label()
                ));
            }
            out.push_str(&format!(
                "summary: matched={matched}/{gated} mismatched={mismatched} informational={informational}\n"
            ));
            out
        }
        OutputFormat::Json => {
            let mut out = format!(
                "{{\"schema_version\":\"1\",\"kind\":\"table1\",\"tolerance\":{},\"cells\":[",
                f9(cell_tol)
            );
            for (i, c) in cells.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&format!(
                    "{{\"m\":{},\"index\":{},\"reference\":{},\"computed\":{},\"abs_diff\":{},\"status\":{}}}",
                    c.m,
                    c.index,
                    f9(c.reference),
                    f9(c.computed),
                    f9(c.abs_diff),
                    json_string(c.status.label())
                ));
            }
            out.push_str(&format!(
                "],\"matched\":{matched},\"gated\":{gated},\"mismatched\":{mismatched},\"informational\":{informational}}}\n"
            ));
            out
        }
    };
    cfg.emit(body)?;
    Ok(if mismatched == 0 { 0 } else { 3 })
}
