#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(table) = polyscan::io::parse_character_table(text) {
            let _ = polyscan::io::write_character_table(&table);
        }
    }
});
