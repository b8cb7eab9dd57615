use std::process::ExitCode;

use rayon::prelude::*;
use taut_core::applications::{
    chi, chi_recursion_check, dyz_identity_check, mv, mv_segre_check, stable_types, ApplicationError, ChiRoute,
    MvRoute,
};
use taut_core::exact::ExactRational;
use taut_core::hodge::lambda_psi_integral;
use taut_core::intersection::{dimension, load_psi_cache, save_psi_cache};
use taut_core::invariants::{check_counterexample_footnote, run_grid, GridConfig};
use taut_core::omega::{hodge_integral, omega_integral, OmegaSpec};
use taut_core::poly::{TautMonomial, TautPolynomial};
use taut_core::report::CheckReport;

use crate::config::{check_bound, check_type, Config, UsageError};
use crate::output::{render_reports, render_rows, warn_decimal, Row};
use crate::{ChiRouteArg as ChiArg, Command as Cmd, GridArg as Grid, MvRouteArg as MvArg};

/// Writes to stdout, treating a closed pipe as success.
fn emit(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|_| out.flush());
}

type Res<T> = Result<T, Box<dyn std::error::Error>>;

fn app_err(e: ApplicationError) -> Box<dyn std::error::Error> {
    match e {
        ApplicationError::Unstable(g, n) => Box::new(UsageError::Unstable(g, n)),
        other => Box::new(other),
    }
}

pub fn run(cfg: &Config, cmd: Cmd) -> Res<ExitCode> {
    if let Some(t) = cfg.threads {
        if t == 0 {
            return Err(Box::new(UsageError::Invalid("--threads must be positive".into())));
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    if let Some(path) = &cfg.cache {
        if path.exists() {
            match load_psi_cache(path) {
                Ok(k) => log::info!("loaded {k} cache entries from {}", path.display()),
                Err(e) => log::warn!("cannot read cache {}: {e}", path.display()),
            }
        }
    }
    warn_decimal(cfg);
    let code = dispatch(cfg, cmd)?;
    if let Some(path) = &cfg.cache {
        if let Err(e) = save_psi_cache(path) {
            log::warn!("cannot write cache {}: {e}", path.display());
        }
    }
    Ok(code)
}

fn dispatch(cfg: &Config, cmd: Cmd) -> Res<ExitCode> {
    match cmd {
        Cmd::Chi { g, n, route } => {
            check_type(g, n)?;
            let routes = match route {
                ChiArg::HarerZagier => vec![ChiRoute::HarerZagier],
                ChiArg::HodgeSum => vec![ChiRoute::HodgeSum],
                ChiArg::Omega => vec![ChiRoute::Omega],
                ChiArg::All => vec![ChiRoute::HarerZagier, ChiRoute::HodgeSum, ChiRoute::Omega],
            };
            let rows = routes
                .iter()
                .map(|&r| chi(g, n, r).map(|v| Row { g, n, value: v.value, route: r.name().into() }))
                .collect::<Result<Vec<_>, _>>()
                .map_err(app_err)?;
            Ok(emit_agreeing(cfg, rows))
        }
        Cmd::Mv { g, n, route } => {
            check_type(g, n)?;
            let routes = match route {
                MvArg::Omega => vec![MvRoute::Omega],
                MvArg::HodgeSum => vec![MvRoute::HodgeSum],
                MvArg::All => vec![MvRoute::Omega, MvRoute::HodgeSum],
            };
            let rows = routes
                .iter()
                .map(|&r| mv(g, n, r).map(|v| Row { g, n, value: v.value, route: r.name().into() }))
                .collect::<Result<Vec<_>, _>>()
                .map_err(app_err)?;
            Ok(emit_agreeing(cfg, rows))
        }
        Cmd::Hodge { g, n, i, psi, graph } => {
            check_type(g, n)?;
            let d = psi_vector(n, psi)?;
            let value = if graph {
                let t = TautPolynomial::monomial(n, dimension(g, n) as u32, TautMonomial::psi(d), ExactRational::one());
                hodge_integral(g, n, i, &t)?
            } else {
                lambda_psi_integral(g, &d, i)?
            };
            let route = if graph { "omega_graph_sum" } else { "hodge" };
            emit(&render_rows(cfg, &[Row { g, n, value, route: route.into() }], true));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Omega { g, n, r, s, a, x, psi, kappa } => {
            check_type(g, n)?;
            if r == 0 {
                return Err(Box::new(UsageError::Invalid("r must be positive".into())));
            }
            let a = if a.is_empty() && n > 0 { vec![0; n] } else { a };
            if a.len() != n {
                return Err(Box::new(UsageError::Invalid(format!("expected {n} values for --a, got {}", a.len()))));
            }
            let x: ExactRational = x.parse().map_err(|e| UsageError::Invalid(format!("--x: {e}")))?;
            let spec = OmegaSpec::new(r, s, a, x);
            spec.validate(g, n).map_err(|e| UsageError::Invalid(e.to_string()))?;
            let d = psi_vector(n, psi)?;
            let mut k = kappa;
            k.sort_unstable();
            let t = TautPolynomial::monomial(n, dimension(g, n) as u32, TautMonomial::new(&k, d), ExactRational::one());
            let value = omega_integral(g, n, &spec, &t)?;
            emit(&render_rows(cfg, &[Row { g, n, value, route: "omega_graph_sum".into() }], true));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { grid, dimmax, rmax } => {
            let mut gc = match grid {
                Grid::Tiny => GridConfig::tiny(),
                Grid::Small => GridConfig::small(),
            };
            if let Some(d) = dimmax {
                check_bound(d)?;
                gc.max_dim = d;
            }
            if let Some(r) = rmax {
                if r == 0 {
                    return Err(Box::new(UsageError::Invalid("--rmax must be positive".into())));
                }
                gc.max_r = r;
            }
            let reports = verify(&gc)?;
            emit(&render_reports(cfg, &reports));
            Ok(if reports.iter().all(|r| r.pass) { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Table { gmax, dimmax } => {
            check_bound(dimmax)?;
            let rows = table(gmax, dimmax).map_err(app_err)?;
            emit(&render_rows(cfg, &rows, false));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn psi_vector(n: usize, psi: Vec<u32>) -> Result<Vec<u32>, UsageError> {
    if psi.is_empty() {
        return Ok(vec![0; n]);
    }
    if psi.len() != n {
        return Err(UsageError::Invalid(format!("expected {n} psi exponents, got {}", psi.len())));
    }
    Ok(psi)
}

/// Prints the rows; with more than one route the value is printed once
/// when all routes agree, and the exit code is 1 when they do not.
fn emit_agreeing(cfg: &Config, rows: Vec<Row>) -> ExitCode {
    let agree = rows.windows(2).all(|w| w[0].value == w[1].value);
    if agree && cfg.format == crate::config::Format::Text {
        emit(&render_rows(cfg, &rows[..1], true));
    } else {
        emit(&render_rows(cfg, &rows, false));
    }
    if agree {
        ExitCode::SUCCESS
    } else {
        eprintln!("routes disagree");
        ExitCode::from(1)
    }
}

/// Identity checks over the grid, plus the Euler-characteristic recursion,
/// the genus-two DYZ identity, the Segre form of the volumes and the two
/// properties of the r = 2 counterexample that hold.
pub fn verify(gc: &GridConfig) -> Res<Vec<CheckReport>> {
    let mut reports = run_grid(gc);
    for (g, n) in stable_types(gc.max_dim - 1) {
        reports.push(chi_recursion_check(g, n).map_err(app_err)?);
    }
    reports.push(dyz_identity_check(2).map_err(app_err)?);
    for (g, n) in stable_types(gc.max_dim.min(3)) {
        reports.push(mv_segre_check(g, n).map_err(app_err)?);
    }
    let fo = check_counterexample_footnote(&ExactRational::one())?;
    reports.push(fo.naive_identity_fails);
    reports.push(fo.odd_degrees_vanish);
    Ok(reports)
}

/// Every route for every stable `(g, n)` with `g <= gmax` and
/// `dim <= dimmax`, in a fixed order.
pub fn table(gmax: u32, dimmax: i64) -> Result<Vec<Row>, ApplicationError> {
    let cells: Vec<(u32, usize)> = stable_types(dimmax).into_iter().filter(|&(g, _)| g <= gmax).collect();
    let per_cell: Vec<Vec<Row>> = cells
        .par_iter()
        .map(|&(g, n)| {
            let mut rows = Vec::new();
            for r in [ChiRoute::HarerZagier, ChiRoute::HodgeSum, ChiRoute::Omega] {
                rows.push(Row { g, n, value: chi(g, n, r)?.value, route: format!("chi_{}", r.name()) });
            }
            for r in [MvRoute::Omega, MvRoute::HodgeSum] {
                rows.push(Row { g, n, value: mv(g, n, r)?.value, route: format!("mv_{}", r.name()) });
            }
            Ok(rows)
        })
        .collect::<Result<_, ApplicationError>>()?;
    Ok(per_cell.into_iter().flatten().collect())
}
