use anyhow::{bail, Context};
use log::info;
use memdiff::asympt::{self, LimitFunction, LimitStudy};
use memdiff::fhn;
use memdiff::greensolve::{self, solve};
use memdiff::kernel::{check_kernel_bounds, eval_k0, eval_k1, eval_k2, laplace_transform_check};
use memdiff::oracle::{cross_validate, fd_solve};
use memdiff::theta::{
    check_theta_bounds, check_theta_limits, eval_theta, eval_theta_dx, eval_theta_star, eval_theta_star_dx,
    laplace_theta_check, SeriesTruncation,
};
use memdiff::{BcKind, VerificationReport};
use rayon::prelude::*;
use serde_json::json;

use crate::config::ScenarioConfig;
use crate::output::{Cell, Outputs};

/// Whether the run's checks all held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    VerificationFailed,
}

impl Outcome {
    fn of(report: &VerificationReport) -> Self {
        if report.has_failures() {
            Outcome::VerificationFailed
        } else {
            Outcome::Ok
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum VerifyTarget {
    /// Kernel mass and pointwise estimates.
    Kernel,
    /// Theta-function bounds and long-time limits.
    Theta,
    /// Laplace identities of the kernel and theta functions.
    Laplace,
    /// Decay estimate on a homogeneous Dirichlet solve.
    Decay,
    /// FitzHugh–Nagumo estimates.
    Fhn,
    /// Boundary-driven steady state of the linear problem.
    Steady,
}

fn grid_2d(xs: &[f64], ts: &[f64]) -> Vec<(f64, f64)> {
    ts.iter().flat_map(|&t| xs.iter().map(move |&x| (x, t))).collect()
}

pub fn kernel(cfg: &ScenarioConfig, out: &mut Outputs) -> anyhow::Result<Outcome> {
    let p = cfg.params()?;
    let kc = cfg.kernel();
    let rows = grid_2d(&cfg.sample.x, &cfg.sample.t)
        .par_iter()
        .map(|&(x, t)| -> memdiff::Result<Vec<Cell>> {
            Ok(vec![
                Cell::Num(x),
                Cell::Num(t),
                Cell::Num(eval_k0(&p, x, t, &kc)?),
                Cell::Num(eval_k1(&p, x, t, &kc)?),
                Cell::Num(eval_k2(&p, x, t, &kc)?),
            ])
        })
        .collect::<memdiff::Result<Vec<_>>>()?;
    out.csv("kernel.csv", &["x", "t", "K0", "K1", "K2"], rows);
    Ok(Outcome::Ok)
}

pub fn theta(cfg: &ScenarioConfig, out: &mut Outputs) -> anyhow::Result<Outcome> {
    let p = cfg.params()?;
    let geom = cfg.geometry()?;
    let kc = cfg.kernel();
    let tr = SeriesTruncation::default();
    let rows = grid_2d(&cfg.sample.x, &cfg.sample.t)
        .par_iter()
        .map(|&(x, t)| -> memdiff::Result<Vec<Cell>> {
            Ok(vec![
                Cell::Num(x),
                Cell::Num(t),
                Cell::Num(eval_theta(&p, &geom, x, t, &tr, &kc)?),
                Cell::Num(eval_theta_star(&p, &geom, x, t, &tr, &kc)?),
                Cell::Num(eval_theta_dx(&p, &geom, x, t, &tr, &kc)?),
                Cell::Num(eval_theta_star_dx(&p, &geom, x, t, &tr, &kc)?),
            ])
        })
        .collect::<memdiff::Result<Vec<_>>>()?;
    out.csv(
        "theta.csv",
        &["x", "t", "theta", "theta_star", "theta_x", "theta_star_x"],
        rows,
    );
    Ok(Outcome::Ok)
}

pub fn solve_cmd(cfg: &ScenarioConfig, out: &mut Outputs) -> anyhow::Result<Outcome> {
    let p = cfg.params()?;
    let spec = cfg.problem()?;
    let grid = cfg.grid();
    let (u, report) = solve(&p, &spec, &grid, &cfg.kernel())?;
    let lip = spec
        .source
        .spot_check_lipschitz(spec.length(), spec.horizon, 256, cfg.seed);
    info!(
        "solve: {} windows, {} iterations, final delta {:.3e}",
        report.window_count, report.iterations, report.final_delta
    );
    out.field("solve_field.csv", &[("u", &u)]);
    out.jsonl(
        "solve_report.jsonl",
        &[
            json!({ "solve_report": report }),
            json!({ "lipschitz_declared": spec.source.lipschitz, "lipschitz_sampled": lip }),
        ],
    )?;
    Ok(Outcome::Ok)
}

pub fn oracle(cfg: &ScenarioConfig, out: &mut Outputs) -> anyhow::Result<Outcome> {
    let p = cfg.params()?;
    let spec = cfg.problem()?;
    let fd = cfg.fd();
    let sol = fd_solve(&p, &spec, &fd)?;
    out.field("oracle_field.csv", &[("u", &sol.u), ("w", &sol.w)]);
    out.jsonl(
        "oracle_report.jsonl",
        &[json!({ "oracle": fd, "convergence_estimate": sol.convergence_estimate })],
    )?;
    Ok(Outcome::Ok)
}

pub fn compare(cfg: &ScenarioConfig, out: &mut Outputs) -> anyhow::Result<Outcome> {
    let p = cfg.params()?;
    let spec = cfg.problem()?;
    let (u, solve_report) = solve(&p, &spec, &cfg.grid(), &cfg.kernel())?;
    let sol = fd_solve(&p, &spec, &cfg.fd())?;
    let v = &cfg.verify;
    let report = cross_validate(&u, &sol, v.mask_cells, v.tolerance, v.interpolate)?;
    out.report("compare_report", &report)?;
    out.jsonl("compare_solve.jsonl", &[json!({ "solve_report": solve_report })])?;
    Ok(Outcome::of(&report))
}

pub fn fhn_cmd(cfg: &ScenarioConfig, out: &mut Outputs) -> anyhow::Result<Outcome> {
    let spec = cfg.fhn_spec()?;
    let sol = fhn::fhn_solve(&spec, &cfg.grid(), &cfg.kernel())?;
    out.field("fhn_field.csv", &[("u", &sol.u), ("v", &sol.v)]);
    out.jsonl(
        "fhn_solve.jsonl",
        &[json!({ "solve_report": sol.report, "working_radius": sol.radius })],
    )?;
    if spec.left.is_zero() && spec.right.is_zero() {
        let report = fhn::fhn_check_estimates(&spec, &sol)?;
        out.report("fhn_report", &report)?;
        Ok(Outcome::of(&report))
    } else {
        info!("inhomogeneous boundary data: estimate checks skipped");
        Ok(Outcome::Ok)
    }
}

pub fn asympt_cmd(cfg: &ScenarioConfig, out: &mut Outputs) -> anyhow::Result<Outcome> {
    let p = cfg.params()?;
    let kc = cfg.kernel();
    let section = cfg.asympt.clone().unwrap_or(crate::config::AsymptSection {
        horizons: None,
        tolerance: asympt::BOUNDARY_LIMIT_TOL,
        pairs: Vec::new(),
    });
    let horizons = section
        .horizons
        .clone()
        .unwrap_or_else(|| asympt::default_horizons(&p).to_vec());
    let mut report = VerificationReport::new("asymptotic limits");
    if section.pairs.is_empty() {
        let spec = cfg
            .problem()
            .context("the boundary limit study reads bc and left data from [problem]")?;
        let g = LimitFunction::from_builtin(spec.left.clone())?;
        let xs: Vec<f64> = cfg
            .sample
            .x
            .iter()
            .copied()
            .filter(|&x| x > 0.0 && x < spec.length())
            .collect();
        if xs.is_empty() {
            bail!("no interior sample.x points");
        }
        let study =
            asympt::boundary_limit_check(&p, &spec.geometry, spec.bc, &g, &xs, &horizons, section.tolerance, &kc)?;
        out.csv(
            "asympt.csv",
            &["x", "horizon", "numeric", "closed_form", "deviation"],
            sample_rows(&study, None),
        );
        report.extend(study.report);
    } else {
        let mut rows = Vec::new();
        for (k, pair) in section.pairs.iter().enumerate() {
            let chi = LimitFunction::from_builtin(pair.chi.clone())?;
            let h = LimitFunction::from_builtin(pair.h.clone())?;
            let study = asympt::convolution_limit_check(&chi, &h, &horizons, section.tolerance, &kc)?;
            rows.extend(sample_rows(&study, Some(k)));
            report.extend(study.report);
        }
        out.csv(
            "asympt.csv",
            &["pair", "x", "horizon", "numeric", "closed_form", "deviation"],
            rows,
        );
    }
    out.report("asympt_report", &report)?;
    Ok(Outcome::of(&report))
}

fn sample_rows(study: &LimitStudy, pair: Option<usize>) -> Vec<Vec<Cell>> {
    study
        .samples
        .iter()
        .map(|s| {
            let mut row = Vec::new();
            if let Some(k) = pair {
                row.push(Cell::Int(k));
            }
            row.extend([
                Cell::Opt(s.x),
                Cell::Num(s.horizon),
                Cell::Num(s.numeric),
                Cell::Num(s.closed_form),
                Cell::Num(s.deviation),
            ]);
            row
        })
        .collect()
}

pub fn verify(target: VerifyTarget, cfg: &ScenarioConfig, out: &mut Outputs) -> anyhow::Result<Outcome> {
    let p = cfg.params()?;
    let geom = cfg.geometry()?;
    let kc = cfg.kernel();
    let (stem, report) = match target {
        VerifyTarget::Kernel => ("verify_kernel", check_kernel_bounds(&p, &cfg.sample.t, &kc)?),
        VerifyTarget::Theta => {
            let xs: Vec<f64> = cfg.sample.x.iter().copied().filter(|&x| x <= geom.length()).collect();
            let mut r = check_theta_bounds(&p, &geom, &cfg.sample.t, &xs, &kc)?;
            r.extend(check_theta_limits(&p, &geom, &xs, cfg.horizon()?, &kc)?);
            ("verify_theta", r)
        }
        VerifyTarget::Laplace => {
            let mut r = VerificationReport::new("Laplace identities");
            for &x in &cfg.sample.x {
                r.extend(laplace_transform_check(&p, x, &cfg.sample.s, &kc)?);
                if x <= geom.length() {
                    r.extend(laplace_theta_check(&p, &geom, x, &cfg.sample.s, &kc)?);
                }
            }
            ("verify_laplace", r)
        }
        VerifyTarget::Decay => {
            let spec = cfg.problem()?;
            if spec.bc != BcKind::Dirichlet {
                bail!("verify decay needs bc = \"dirichlet\"");
            }
            let (u, _) = greensolve::solve(&p, &spec, &cfg.grid(), &kc)?;
            ("verify_decay", greensolve::check_decay_estimate(&p, &spec, &u, None)?)
        }
        VerifyTarget::Fhn => {
            let spec = cfg.fhn_spec()?;
            let sol = fhn::fhn_solve(&spec, &cfg.grid(), &kc)?;
            ("verify_fhn", fhn::fhn_check_estimates(&spec, &sol)?)
        }
        VerifyTarget::Steady => {
            let f = cfg
                .fhn
                .as_ref()
                .context("verify steady reads the constant wall values from [fhn]")?;
            let factor = cfg.horizon()? * p.omega();
            let r = fhn::check_fhn_steady(
                &p,
                &geom,
                f.left,
                f.right,
                factor,
                &cfg.grid(),
                cfg.verify.steady_tolerance,
                &kc,
            )?;
            ("verify_steady", r)
        }
    };
    out.report(stem, &report)?;
    Ok(Outcome::of(&report))
}
