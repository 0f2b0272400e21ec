use std::io::Write;
use std::path::PathBuf;

use agppa::lp::json::problem_to_json;
use agppa::lp::mps::write_mps;
use agppa::oracle::{gen_covering_lp, gen_random_sparse_lp, l1svm_to_lp, normalize_samples};
use agppa::LpProblem;
use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand};

use crate::io::write_atomic;
use crate::{Failure, Outcome};

#[derive(Debug, Subcommand)]
pub enum Family {
    /// min cᵀx s.t. Ax ≤ b with a random sparse A, feasible and bounded by construction.
    RandomSparse(SparseDims),
    /// min cᵀx s.t. Ax ≥ e, x ≥ 0 with a random 0/1 matrix A.
    Covering(SparseDims),
    /// L1-regularized multi-class SVM from a CSV of samples (features, then a label in 1..=k).
    Svm(SvmArgs),
}

#[derive(Debug, Args)]
pub struct SparseDims {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub density: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SvmArgs {
    /// Headerless CSV, one sample per line, label in the last column.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub penalty: f64,
    /// Center every sample and scale it to unit norm first.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub family: Family,
    /// Output JSON problem.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write the problem as MPS.
    #[arg(long, global = true)]
    pub mps: Option<PathBuf>,
}

fn read_svm_csv(args: &SvmArgs) -> Result<(Vec<Vec<f64>>, Vec<usize>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(&args.data)
        .with_context(|| format!("cannot read {}", args.data.display()))?;
    let (mut samples, mut labels) = (Vec::new(), Vec::new());
    for (line, rec) in reader.records().enumerate() {
        let rec = rec?;
        let Some((label, features)) = rec.iter().collect::<Vec<_>>().split_last().map(|(l, f)| (*l, f.to_vec())) else {
            continue;
        };
        if features.is_empty() {
            bail!("line {}: a sample needs at least one feature and a label", line + 1);
        }
        let label: usize = label.parse().with_context(|| format!("line {}: bad label {label:?}", line + 1))?;
        let x = features
            .iter()
            .map(|v| v.parse::<f64>().with_context(|| format!("line {}: bad value {v:?}", line + 1)))
            .collect::<Result<Vec<_>>>()?;
        samples.push(x);
        labels.push(label);
    }
    if args.normalize {
        normalize_samples(&mut samples);
    }
    Ok((samples, labels))
}

fn build(family: &Family) -> Result<LpProblem> {
    Ok(match family {
        Family::RandomSparse(d) => gen_random_sparse_lp(d.m, d.n, d.density, d.seed)?,
        Family::Covering(d) => gen_covering_lp(d.m, d.n, d.density, d.seed)?,
        Family::Svm(a) => {
            let (samples, labels) = read_svm_csv(a)?;
            l1svm_to_lp(&samples, &labels, a.penalty)?
        }
    })
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<Outcome, Failure> {
    let p = build(&args.family).map_err(Failure::Input)?;
    log::info!("generated n = {}, m_I = {}, m_E = {}, n_b = {}", p.n(), p.m_ineq(), p.m_eq(), p.n_b());
    let json = problem_to_json(&p);
    match &args.out {
        Some(path) => write_atomic(path, json.as_bytes()).map_err(Failure::Input)?,
        None if args.mps.is_none() => {
            // a closed pipe downstream is not an error
            let _ = writeln!(std::io::stdout(), "{json}");
        }
        None => {}
    }
    if let Some(path) = &args.mps {
        write_atomic(path, write_mps(&p, "GENERATED").as_bytes()).map_err(Failure::Input)?;
    }
    Ok(Outcome::Success)
}
