use std::path::PathBuf;
use std::time::Instant;

use agppa::lp::{apply_form, choose_form, Form};
use agppa::outer::{agppa_run, AgppaParams, Residuals, Status};
use agppa::solvers::{HoodKind, InnerConfig, InnerSolverKind};
use agppa::ResidualKind;
use anyhow::{Context, Result};
use clap::{Args, ValueEnum};

use crate::io::{read_point, read_problem, write_atomic, InputFormat};
use crate::report::{history_csv, Report, SCHEMA_VERSION};
use crate::{Failure, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Auto,
    Primal,
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InnerArg {
    Hybrid,
    FirstOrderOnly,
    PssnOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HoodArg {
    Apg,
    Rcd,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Problem file (MPS or JSON).
    pub input: PathBuf,
    /// Input format; by default `.json` files are JSON and everything else MPS.
    #[arg(long, value_enum)]
    pub format: Option<InputFormat>,
    /// Read MPS in fixed-column format instead of free format.
    #[arg(long)]
    pub fixed_mps: bool,
    /// Apply the solver to the primal or the dual; `auto` picks the primal iff m_I > n_b.
    #[arg(long, value_enum, default_value = "auto")]
    pub form: FormArg,
    /// Warm start (JSON point) for the input problem.
    #[arg(long)]
    pub start: Option<PathBuf>,
    /// Seed of every random choice in the run.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, short = 'e')]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub residual: Option<ResidualKind>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub rho_delta: Option<f64>,
    #[arg(long)]
    pub rho_eta: Option<f64>,
    #[arg(long)]
    pub rho_sigma: Option<f64>,
    #[arg(long)]
    pub varsigma: Option<f64>,
    #[arg(long)]
    pub eta0: Option<f64>,
    /// Initial proximal parameter; defaults to alpha/||A||_F.
    #[arg(long)]
    pub sigma0: Option<f64>,
    /// Test the residual of each iterate before computing the next one.
    #[arg(long)]
    pub check_residual_first: bool,
    /// Wall-clock limit in seconds, checked between proximal steps.
    #[arg(long)]
    pub max_time: Option<f64>,
    #[arg(long)]
    pub max_stages: Option<usize>,
    #[arg(long)]
    pub max_steps: Option<usize>,

    #[arg(long, value_enum, default_value = "hybrid")]
    pub inner: InnerArg,
    #[arg(long, value_enum, default_value = "apg")]
    pub hood: HoodArg,
    /// Multiplier of the Newton budget in HOOD epochs.
    #[arg(long)]
    pub c_j: Option<f64>,
    #[arg(long)]
    pub hood_length_factor: Option<f64>,
    #[arg(long)]
    pub max_inner_iters: Option<usize>,
    #[arg(long)]
    pub max_newton: Option<usize>,

    /// Write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write the per-step history CSV here.
    #[arg(long)]
    pub history: Option<PathBuf>,
}

impl SolveArgs {
    pub fn params(&self) -> AgppaParams {
        let mut p = AgppaParams::default();
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { p.$f = v; })* };
        }
        set!(epsilon, gamma, rho, rho_delta, rho_eta, rho_sigma, varsigma, eta0, max_stages, max_steps);
        if let Some(r) = self.residual {
            p.residual_kind = r;
        }
        p.sigma0 = self.sigma0;
        p.max_time = self.max_time;
        p.check_residual_first = self.check_residual_first;
        p
    }

    pub fn inner(&self) -> InnerConfig {
        let mut c = InnerConfig::default();
        c.kind = match self.inner {
            InnerArg::Hybrid => InnerSolverKind::Hybrid,
            InnerArg::FirstOrderOnly => InnerSolverKind::FirstOrderOnly,
            InnerArg::PssnOnly => InnerSolverKind::PssnOnly,
        };
        c.alg2.hood.kind = match self.hood {
            HoodArg::Apg => HoodKind::Apg,
            HoodArg::Rcd => HoodKind::Rcd,
        };
        if let Some(v) = self.hood_length_factor {
            c.alg2.hood.length_factor = v;
        }
        if let Some(v) = self.max_inner_iters {
            c.alg2.max_iters = v;
        }
        if let Some(v) = self.max_newton {
            c.pssn.max_newton = v;
        }
        if let Some(v) = self.c_j {
            c.budget.c_j = v;
        }
        c
    }
}

pub fn cmd_solve(args: &SolveArgs) -> Result<Outcome, Failure> {
    let clock = Instant::now();
    let loaded = read_problem(&args.input, args.format, args.fixed_mps).map_err(Failure::Input)?;
    let params = args.params();
    params.validate().context("invalid parameters").map_err(Failure::Input)?;
    let inner = args.inner();
    let original = &loaded.problem;
    let form = match args.form {
        FormArg::Auto => choose_form(original),
        FormArg::Primal => Form::Primal,
        FormArg::Dual => Form::Dual,
    };
    let (solved, map) = apply_form(original, form);
    log::info!(
        "{}: n = {}, m_I = {}, m_E = {}, n_b = {}, solving the {form:?} form",
        args.input.display(),
        original.n(),
        original.m_ineq(),
        original.m_eq(),
        original.n_b()
    );
    let start = match &args.start {
        Some(path) => {
            let z = read_point(path).map_err(Failure::Input)?;
            original.check_point(&z).context("warm start").map_err(Failure::Input)?;
            Some(map.to_solved(&z))
        }
        None => None,
    };

    let run = agppa_run(&solved, &params, &inner, start, args.seed).map_err(|e| Failure::Input(e.into()))?;
    let z = map.to_original(&run.z);
    let residuals = Residuals::of(original, &z);
    let residual = params.residual_kind.eval(original, &z);
    let objective = original.objective(&z.x) + loaded.objective_offset();
    let (columns, column_values) = match &loaded.mps {
        Some(m) => (Some(m.columns.iter().map(|c| c.name.clone()).collect()), Some(m.original_x(&z.x))),
        None => (None, None),
    };
    let report = Report {
        schema_version: SCHEMA_VERSION,
        status: run.status,
        form,
        seed: args.seed,
        objective,
        residual_kind: params.residual_kind,
        residual,
        residuals,
        solved_residual: run.residual,
        steps: run.steps,
        stages: run.stages,
        sigma_final: run.sigma_final,
        eta_final: run.eta_final,
        violations: run.violations,
        derived: run.derived,
        inner: run.inner,
        wall_ms: clock.elapsed().as_secs_f64() * 1e3,
        x: z.x,
        lambda: z.lambda,
        columns,
        column_values,
    };
    if let Some(path) = &args.report {
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        write_atomic(path, json.as_bytes()).map_err(Failure::Input)?;
    }
    if let Some(path) = &args.history {
        write_atomic(path, &history_csv(&run.history).map_err(Failure::Input)?).map_err(Failure::Input)?;
    }
    println!(
        "status={} objective={:.12e} {:?}={:.3e} steps={} stages={} time={:.3}s",
        serde_json::to_value(report.status).expect("status serializes").as_str().unwrap_or("?"),
        report.objective,
        report.residual_kind,
        report.residual,
        report.steps,
        report.stages,
        report.wall_ms / 1e3
    );
    Ok(if run.status == Status::Solved { Outcome::Success } else { Outcome::BudgetExhausted })
}
