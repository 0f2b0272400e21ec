#![no_main]

use agppa::lp::mps::{parse_mps_with, MpsFormat};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_mps_with(text, MpsFormat::Fixed);
    }
});
