use std::path::PathBuf;

use agppa::outer::Residuals;
use agppa::ResidualKind;
use anyhow::Context;
use clap::Args;

use crate::io::{read_point, read_problem, InputFormat};
use crate::{Failure, Outcome};

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub problem: PathBuf,
    /// JSON point `{"x": [...], "lambda": [...]}`.
    pub point: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<InputFormat>,
    #[arg(long)]
    pub fixed_mps: bool,
    #[arg(long, short = 'e', default_value_t = 1e-6)]
    pub epsilon: f64,
    #[arg(long, default_value = "e2")]
    pub residual: ResidualKind,
}

/// Prints the three residuals; succeeds iff the selected one is within `epsilon`.
pub fn cmd_check(args: &CheckArgs) -> Result<Outcome, Failure> {
    let loaded = read_problem(&args.problem, args.format, args.fixed_mps).map_err(Failure::Input)?;
    let z = read_point(&args.point).map_err(Failure::Input)?;
    let p = &loaded.problem;
    p.check_point(&z).context("point does not fit the problem").map_err(Failure::Input)?;
    if !z.is_sign_feasible(p.n_b(), p.m_ineq()) {
        log::warn!("point violates the sign constraints");
    }
    let r = Residuals::of(p, &z);
    println!("E1 = {:.6e}\nE2 = {:.6e}\nE3 = {:.6e}", r.e1, r.e2, r.e3);
    let selected = args.residual.eval(p, &z);
    Ok(if selected <= args.epsilon { Outcome::Success } else { Outcome::BudgetExhausted })
}
