#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(spec) = polyscan::io::parse_group_text(text) {
            for g in &spec.generators {
                let _ = g.to_string();
            }
        }
    }
});
