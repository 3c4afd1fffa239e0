#![no_main]

use grassmann_lab::Caps;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = Caps::parse(text);
    }
});
