#![no_main]

use agppa::lp::json::{parse_point_json, point_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(z) = parse_point_json(text) {
        assert_eq!(parse_point_json(&point_to_json(&z)).expect("round trip"), z);
    }
});
