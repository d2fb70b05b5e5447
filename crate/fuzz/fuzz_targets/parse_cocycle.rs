#![no_main]

use hbp_core::io;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = io::parse_cocycle(s, None);
    }
});
