#![no_main]

use agppa::lp::json::{parse_problem_json, problem_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_problem_json(text) {
        assert_eq!(parse_problem_json(&problem_to_json(&p)).expect("round trip"), p);
    }
});
