#![no_main]

use grassmann_lab::{io, Caps};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = io::decode_point_set(text, &Caps::default());
    }
});
