//! Replays the checked-in fuzz corpus seeds through the same checks the fuzz targets make.

use std::path::{Path, PathBuf};

use agppa::lp::json::{parse_point_json, parse_problem_json, point_to_json, problem_to_json};
use agppa::lp::mps::{parse_mps_with, write_mps, MpsFormat};

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_string_lossy().starts_with("seed_"))
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn free_mps_seeds_round_trip() {
    for (path, text) in seeds("parse_mps_free") {
        let model = parse_mps_with(&text, MpsFormat::Free).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let again = parse_mps_with(&write_mps(&model.problem, "SEED"), MpsFormat::Free).unwrap();
        assert_eq!(again.problem, model.problem, "{}", path.display());
    }
}

#[test]
fn fixed_mps_seeds_parse_or_fail_cleanly() {
    let mut parsed = 0;
    for (_, text) in seeds("parse_mps_fixed") {
        parsed += parse_mps_with(&text, MpsFormat::Fixed).is_ok() as usize;
    }
    assert!(parsed >= 1);
}

#[test]
fn problem_json_seeds_round_trip() {
    for (path, text) in seeds("problem_json") {
        let p = parse_problem_json(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(parse_problem_json(&problem_to_json(&p)).unwrap(), p);
    }
}

#[test]
fn point_json_seeds_round_trip() {
    for (path, text) in seeds("point_json") {
        let z = parse_point_json(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(parse_point_json(&point_to_json(&z)).unwrap(), z);
    }
}
