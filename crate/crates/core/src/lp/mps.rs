//! Reading and writing MPS files.
//!
//! Both the fixed-column and the whitespace-separated (free) layouts are accepted. The
//! parsed model is normalized to the general form of [`LpProblem`]:
//!
//! * `G` rows are negated into `≤` rows, `L` rows are kept, `E` rows become equalities;
//! * a variable with a finite lower bound `l` is shifted, `x = x' + l` with `x' ≥ 0`;
//! * a finite upper bound becomes an extra `≤` row on the (shifted) variable;
//! * sign-constrained variables are moved to the front, so `n_b` is a prefix count.
//!
//! RANGES, integer markers and OBJSENSE are rejected.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::problem::LpProblem;
use crate::sparse::SparseMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MpsError {
    #[error("line {line}: unknown section {name:?}")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: section {name} out of order")]
    SectionOrder { line: usize, name: String },
    #[error("line {line}: malformed line: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: invalid number {token:?}")]
    InvalidNumber { line: usize, token: String },
    #[error("line {line}: unknown row {name:?}")]
    UnknownRow { line: usize, name: String },
    #[error("line {line}: unknown column {name:?}")]
    UnknownColumn { line: usize, name: String },
    #[error("line {line}: duplicate row {name:?}")]
    DuplicateRow { line: usize, name: String },
    #[error("line {line}: duplicate entry for row {row:?}, column {column:?}")]
    DuplicateEntry { line: usize, row: String, column: String },
    #[error("line {line}: lower bound exceeds upper bound for column {column:?}")]
    InconsistentBounds { line: usize, column: String },
    #[error("line {line}: unsupported feature: {what}")]
    Unsupported { line: usize, what: String },
    #[error("no objective row")]
    NoObjective,
    #[error("no columns")]
    NoColumns,
    #[error("missing ENDATA")]
    MissingEndata,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MpsFormat {
    /// Fields at fixed character positions; names may contain spaces.
    Fixed,
    /// Whitespace-separated fields.
    Free,
}

/// Where an original MPS column ended up in the normalized problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnInfo {
    pub name: String,
    /// Index of the column in the normalized problem.
    pub index: usize,
    /// Original value is `x[index] + shift`.
    pub shift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MpsModel {
    pub name: String,
    pub problem: LpProblem,
    /// One entry per column in file order.
    pub columns: Vec<ColumnInfo>,
    /// Constant to add to `cᵀx` to obtain the objective of the original model.
    pub objective_offset: f64,
}

impl MpsModel {
    /// Column values in file order from a solution of the normalized problem.
    pub fn original_x(&self, x: &[f64]) -> Vec<f64> {
        self.columns.iter().map(|c| x[c.index] + c.shift).collect()
    }

    /// `true` when the normalization neither permuted nor shifted any column.
    pub fn is_identity_map(&self) -> bool {
        self.columns.iter().enumerate().all(|(k, c)| c.index == k && c.shift == 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Name,
    Rows,
    Columns,
    Rhs,
    Bounds,
    Endata,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sense {
    Objective,
    Le,
    Ge,
    Eq,
}

struct Raw {
    name: String,
    objective: Option<usize>,
    rows: Vec<(String, Sense)>,
    row_index: HashMap<String, usize>,
    col_names: Vec<String>,
    col_index: HashMap<String, usize>,
    entries: HashMap<(usize, usize), f64>,
    rhs: HashMap<usize, f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

/// Parses whitespace-separated MPS.
pub fn parse_mps(text: &str) -> Result<MpsModel, MpsError> {
    parse_mps_with(text, MpsFormat::Free)
}

pub fn parse_mps_with(text: &str, format: MpsFormat) -> Result<MpsModel, MpsError> {
    let raw = read_raw(text, format)?;
    normalize(raw)
}

fn fields(line: &str, format: MpsFormat) -> Vec<String> {
    match format {
        MpsFormat::Free => line.split_whitespace().map(str::to_string).collect(),
        MpsFormat::Fixed => {
            const SPANS: [(usize, usize); 6] = [(1, 3), (4, 12), (14, 22), (24, 36), (39, 47), (49, 61)];
            let chars: Vec<char> = line.chars().collect();
            let mut out: Vec<String> = SPANS
                .iter()
                .map(|&(a, b)| {
                    let a = a.min(chars.len());
                    let b = b.min(chars.len());
                    chars[a..b].iter().collect::<String>().trim().to_string()
                })
                .collect();
            while out.last().is_some_and(|s| s.is_empty()) {
                out.pop();
            }
            out
        }
    }
}

fn number(tok: &str, line: usize) -> Result<f64, MpsError> {
    let v: f64 = tok.parse().map_err(|_| MpsError::InvalidNumber { line, token: tok.to_string() })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(MpsError::InvalidNumber { line, token: tok.to_string() })
    }
}

fn read_raw(text: &str, format: MpsFormat) -> Result<Raw, MpsError> {
    let mut raw = Raw {
        name: String::new(),
        objective: None,
        rows: Vec::new(),
        row_index: HashMap::new(),
        col_names: Vec::new(),
        col_index: HashMap::new(),
        entries: HashMap::new(),
        rhs: HashMap::new(),
        lower: Vec::new(),
        upper: Vec::new(),
    };
    let mut section: Option<Section> = None;
    let mut bounds_seen: HashMap<(usize, &'static str), ()> = HashMap::new();

    for (k, line) in text.lines().enumerate() {
        let lineno = k + 1;
        if line.trim().is_empty() || line.starts_with('*') {
            continue;
        }
        if !line.starts_with(char::is_whitespace) {
            let mut parts = line.split_whitespace();
            let head = parts.next().unwrap_or_default().to_ascii_uppercase();
            let next = match head.as_str() {
                "NAME" => Section::Name,
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => Section::Endata,
                "RANGES" => return Err(MpsError::Unsupported { line: lineno, what: "RANGES section".into() }),
                "OBJSENSE" | "OBJSENCE" => {
                    return Err(MpsError::Unsupported { line: lineno, what: "OBJSENSE section".into() })
                }
                _ => return Err(MpsError::UnknownSection { line: lineno, name: head }),
            };
            if section.is_some_and(|s| s >= next) {
                return Err(MpsError::SectionOrder { line: lineno, name: head });
            }
            if next > Section::Rows && section < Some(Section::Rows) {
                return Err(MpsError::SectionOrder { line: lineno, name: head });
            }
            if next == Section::Name {
                raw.name = line[4..].trim().to_string();
            }
            section = Some(next);
            if next == Section::Endata {
                break;
            }
            continue;
        }

        let f = fields(line, format);
        if f.is_empty() {
            continue;
        }
        let malformed = |reason: &str| MpsError::Malformed { line: lineno, reason: reason.to_string() };
        match section {
            None | Some(Section::Name) => return Err(malformed("data line before ROWS")),
            Some(Section::Endata) => unreachable!(),
            Some(Section::Rows) => {
                let (sense, name) = match format {
                    MpsFormat::Free if f.len() == 2 => (&f[0], &f[1]),
                    MpsFormat::Fixed if f.len() >= 2 && !f[1].is_empty() => (&f[0], &f[1]),
                    _ => return Err(malformed("ROWS entry needs a sense and a name")),
                };
                let sense = match sense.to_ascii_uppercase().as_str() {
                    "N" => Sense::Objective,
                    "L" => Sense::Le,
                    "G" => Sense::Ge,
                    "E" => Sense::Eq,
                    other => return Err(malformed(&format!("unknown row sense {other:?}"))),
                };
                if raw.row_index.contains_key(name) {
                    return Err(MpsError::DuplicateRow { line: lineno, name: name.clone() });
                }
                if sense == Sense::Objective && raw.objective.is_none() {
                    raw.objective = Some(raw.rows.len());
                }
                raw.row_index.insert(name.clone(), raw.rows.len());
                raw.rows.push((name.clone(), sense));
            }
            Some(Section::Columns) => {
                let rest: &[String] = match format {
                    MpsFormat::Free => &f,
                    MpsFormat::Fixed => {
                        if !f[0].is_empty() {
                            return Err(malformed("field 1 must be empty in COLUMNS"));
                        }
                        &f[1..]
                    }
                };
                if rest.len() >= 2 && rest[1].eq_ignore_ascii_case("'MARKER'") {
                    return Err(MpsError::Unsupported { line: lineno, what: "integer markers".into() });
                }
                if rest.len() != 3 && rest.len() != 5 {
                    return Err(malformed("COLUMNS entry needs a column and one or two row/value pairs"));
                }
                let col_name = &rest[0];
                let j = match raw.col_index.get(col_name) {
                    Some(&j) => j,
                    None => {
                        let j = raw.col_names.len();
                        raw.col_index.insert(col_name.clone(), j);
                        raw.col_names.push(col_name.clone());
                        raw.lower.push(0.0);
                        raw.upper.push(f64::INFINITY);
                        j
                    }
                };
                for pair in rest[1..].chunks(2) {
                    let i = *raw
                        .row_index
                        .get(&pair[0])
                        .ok_or_else(|| MpsError::UnknownRow { line: lineno, name: pair[0].clone() })?;
                    let v = number(&pair[1], lineno)?;
                    if raw.entries.insert((i, j), v).is_some() {
                        return Err(MpsError::DuplicateEntry {
                            line: lineno,
                            row: pair[0].clone(),
                            column: col_name.clone(),
                        });
                    }
                }
            }
            Some(Section::Rhs) => {
                let pairs: &[String] = match format {
                    MpsFormat::Free => match f.len() {
                        2 | 4 => &f,
                        3 | 5 => &f[1..],
                        _ => return Err(malformed("RHS entry needs one or two row/value pairs")),
                    },
                    MpsFormat::Fixed => {
                        if !f[0].is_empty() || (f.len() != 4 && f.len() != 6) {
                            return Err(malformed("RHS entry needs one or two row/value pairs"));
                        }
                        &f[2..]
                    }
                };
                for pair in pairs.chunks(2) {
                    let i = *raw
                        .row_index
                        .get(&pair[0])
                        .ok_or_else(|| MpsError::UnknownRow { line: lineno, name: pair[0].clone() })?;
                    let v = number(&pair[1], lineno)?;
                    if raw.rhs.insert(i, v).is_some() {
                        return Err(MpsError::DuplicateEntry {
                            line: lineno,
                            row: pair[0].clone(),
                            column: "RHS".into(),
                        });
                    }
                }
            }
            Some(Section::Bounds) => {
                if f.len() < 2 {
                    return Err(malformed("BOUNDS entry too short"));
                }
                let kind = f[0].to_ascii_uppercase();
                let needs_value = matches!(kind.as_str(), "UP" | "LO" | "FX");
                let (col, value) = match (format, needs_value) {
                    (MpsFormat::Free, true) => match f.len() {
                        4 => (&f[2], Some(number(&f[3], lineno)?)),
                        3 => (&f[1], Some(number(&f[2], lineno)?)),
                        _ => return Err(malformed("bound needs a column and a value")),
                    },
                    (MpsFormat::Free, false) => match f.len() {
                        2 => (&f[1], None),
                        3 | 4 => (&f[2], None),
                        _ => return Err(malformed("bound needs a column")),
                    },
                    (MpsFormat::Fixed, true) if f.len() >= 4 => (&f[2], Some(number(&f[3], lineno)?)),
                    (MpsFormat::Fixed, false) if f.len() >= 3 => (&f[2], None),
                    _ => return Err(malformed("bound entry too short")),
                };
                let j = *raw
                    .col_index
                    .get(col)
                    .ok_or_else(|| MpsError::UnknownColumn { line: lineno, name: col.clone() })?;
                let side: &'static str = match kind.as_str() {
                    "UP" => {
                        raw.upper[j] = value.unwrap();
                        "up"
                    }
                    "LO" => {
                        raw.lower[j] = value.unwrap();
                        "lo"
                    }
                    "FX" => {
                        raw.lower[j] = value.unwrap();
                        raw.upper[j] = value.unwrap();
                        "fx"
                    }
                    "FR" => {
                        raw.lower[j] = f64::NEG_INFINITY;
                        raw.upper[j] = f64::INFINITY;
                        "fr"
                    }
                    "MI" => {
                        raw.lower[j] = f64::NEG_INFINITY;
                        "lo"
                    }
                    "PL" => {
                        raw.upper[j] = f64::INFINITY;
                        "up"
                    }
                    "BV" | "LI" | "UI" | "SC" => {
                        return Err(MpsError::Unsupported {
                            line: lineno,
                            what: format!("{kind} bounds (integer variables)"),
                        })
                    }
                    other => return Err(malformed(&format!("unknown bound type {other:?}"))),
                };
                if bounds_seen.insert((j, side), ()).is_some() {
                    return Err(MpsError::DuplicateEntry { line: lineno, row: kind, column: col.clone() });
                }
                if raw.lower[j] > raw.upper[j] {
                    return Err(MpsError::InconsistentBounds { line: lineno, column: col.clone() });
                }
            }
        }
    }
    if section != Some(Section::Endata) {
        return Err(MpsError::MissingEndata);
    }
    if raw.objective.is_none() {
        return Err(MpsError::NoObjective);
    }
    if raw.col_names.is_empty() {
        return Err(MpsError::NoColumns);
    }
    Ok(raw)
}

fn normalize(raw: Raw) -> Result<MpsModel, MpsError> {
    let obj = raw.objective.expect("checked by reader");
    let n = raw.col_names.len();

    // signed columns first, each group in file order
    let signed: Vec<usize> = (0..n).filter(|&j| raw.lower[j].is_finite()).collect();
    let free: Vec<usize> = (0..n).filter(|&j| !raw.lower[j].is_finite()).collect();
    let order: Vec<usize> = signed.iter().chain(&free).copied().collect();
    let mut position = vec![0usize; n];
    for (k, &j) in order.iter().enumerate() {
        position[j] = k;
    }
    let shift: Vec<f64> = (0..n).map(|j| if raw.lower[j].is_finite() { raw.lower[j] } else { 0.0 }).collect();

    let mut c = vec![0.0; n];
    let mut row_entries: Vec<Vec<(usize, f64)>> = vec![Vec::new(); raw.rows.len()];
    let mut keys: Vec<_> = raw.entries.iter().collect();
    keys.sort_by_key(|(k, _)| **k);
    for (&(i, j), &v) in keys {
        if i == obj {
            c[position[j]] = v;
        } else {
            row_entries[i].push((j, v));
        }
    }
    let objective_offset = -raw.rhs.get(&obj).copied().unwrap_or(0.0)
        + (0..n).map(|j| raw.entries.get(&(obj, j)).copied().unwrap_or(0.0) * shift[j]).sum::<f64>();

    let mut ineq: Vec<(usize, usize, f64)> = Vec::new();
    let mut b_ineq = Vec::new();
    let mut eq: Vec<(usize, usize, f64)> = Vec::new();
    let mut b_eq = Vec::new();
    for (i, (_, sense)) in raw.rows.iter().enumerate() {
        let rhs = raw.rhs.get(&i).copied().unwrap_or(0.0);
        let moved: f64 = row_entries[i].iter().map(|&(j, v)| v * shift[j]).sum();
        match sense {
            Sense::Objective => {}
            Sense::Le | Sense::Ge => {
                let sign = if *sense == Sense::Le { 1.0 } else { -1.0 };
                let r = b_ineq.len();
                ineq.extend(row_entries[i].iter().map(|&(j, v)| (r, position[j], sign * v)));
                b_ineq.push(sign * (rhs - moved));
            }
            Sense::Eq => {
                let r = b_eq.len();
                eq.extend(row_entries[i].iter().map(|&(j, v)| (r, position[j], v)));
                b_eq.push(rhs - moved);
            }
        }
    }
    for j in 0..n {
        if raw.upper[j].is_finite() {
            let r = b_ineq.len();
            ineq.push((r, position[j], 1.0));
            b_ineq.push(raw.upper[j] - shift[j]);
        }
    }

    let to_problem = |e: crate::error::Error| MpsError::Malformed { line: 0, reason: e.to_string() };
    let a_ineq = SparseMatrix::from_triplets(b_ineq.len(), n, &ineq).map_err(to_problem)?;
    let a_eq = SparseMatrix::from_triplets(b_eq.len(), n, &eq).map_err(to_problem)?;
    let problem = LpProblem::new(c, a_ineq, b_ineq, a_eq, b_eq, signed.len()).map_err(to_problem)?;
    let columns =
        (0..n).map(|j| ColumnInfo { name: raw.col_names[j].clone(), index: position[j], shift: shift[j] }).collect();
    Ok(MpsModel { name: raw.name, problem, columns, objective_offset })
}

/// Writes `p` as free-format MPS. Parsing the output gives back `p` exactly.
pub fn write_mps(p: &LpProblem, name: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "NAME {}", if name.is_empty() { "LP" } else { name });
    s.push_str("ROWS\n N OBJ\n");
    for i in 0..p.m_ineq() {
        let _ = writeln!(s, " L R{i}");
    }
    for i in 0..p.m_eq() {
        let _ = writeln!(s, " E E{i}");
    }
    s.push_str("COLUMNS\n");
    for j in 0..p.n() {
        let _ = writeln!(s, " X{j} OBJ {:?}", p.c()[j]);
        let (idx, val) = p.a_ineq().col(j);
        for (i, v) in idx.iter().zip(val) {
            let _ = writeln!(s, " X{j} R{i} {v:?}");
        }
        let (idx, val) = p.a_eq().col(j);
        for (i, v) in idx.iter().zip(val) {
            let _ = writeln!(s, " X{j} E{i} {v:?}");
        }
    }
    s.push_str("RHS\n");
    for (i, v) in p.b_ineq().iter().enumerate() {
        if *v != 0.0 {
            let _ = writeln!(s, " RHS R{i} {v:?}");
        }
    }
    for (i, v) in p.b_eq().iter().enumerate() {
        if *v != 0.0 {
            let _ = writeln!(s, " RHS E{i} {v:?}");
        }
    }
    if p.n_b() < p.n() {
        s.push_str("BOUNDS\n");
        for j in p.n_b()..p.n() {
            let _ = writeln!(s, " FR BND X{j}");
        }
    }
    s.push_str("ENDATA\n");
    s
}
