#![no_main]

use hbp_core::io;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(spec) = io::parse_group_spec(s) {
            // build may reject, must not panic
            let _ = spec.build();
        }
    }
});
