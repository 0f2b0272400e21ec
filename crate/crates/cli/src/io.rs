use std::io::Write;
use std::path::Path;

use agppa::lp::json::{parse_point_json, parse_problem_json};
use agppa::lp::mps::{parse_mps_with, MpsFormat, MpsModel};
use agppa::{LpProblem, PrimalDualPoint};
use anyhow::{Context, Result};
use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Mps,
    Json,
}

impl InputFormat {
    /// `.json` is JSON, everything else MPS.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => InputFormat::Json,
            _ => InputFormat::Mps,
        }
    }
}

/// A problem as read from disk, with what is needed to report in the file's own terms.
pub struct Loaded {
    pub problem: LpProblem,
    pub mps: Option<MpsModel>,
}

impl Loaded {
    pub fn objective_offset(&self) -> f64 {
        self.mps.as_ref().map_or(0.0, |m| m.objective_offset)
    }
}

pub fn read_problem(path: &Path, format: Option<InputFormat>, fixed_mps: bool) -> Result<Loaded> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    match format.unwrap_or_else(|| InputFormat::from_path(path)) {
        InputFormat::Json => {
            let problem = parse_problem_json(&text).with_context(|| format!("{}", path.display()))?;
            Ok(Loaded { problem, mps: None })
        }
        InputFormat::Mps => {
            let fmt = if fixed_mps { MpsFormat::Fixed } else { MpsFormat::Free };
            let model = parse_mps_with(&text, fmt).with_context(|| format!("{}", path.display()))?;
            Ok(Loaded { problem: model.problem.clone(), mps: Some(model) })
        }
    }
}

pub fn read_point(path: &Path) -> Result<PrimalDualPoint> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_point_json(&text).with_context(|| format!("{}", path.display()))
}

/// Writes through a temporary file in the target directory and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("cannot write to {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}
