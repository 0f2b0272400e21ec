#![no_main]

use agppa::lp::mps::{parse_mps_with, write_mps, MpsFormat};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(model) = parse_mps_with(text, MpsFormat::Free) {
        // whatever parses must survive a write/parse round trip
        let again = parse_mps_with(&write_mps(&model.problem, "FUZZ"), MpsFormat::Free).expect("written MPS parses");
        assert_eq!(again.problem, model.problem);
    }
});
