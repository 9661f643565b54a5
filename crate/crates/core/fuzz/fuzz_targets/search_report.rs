#![no_main]

use libfuzzer_sys::fuzz_target;
use polyscan::stringc::SearchReport;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(report) = SearchReport::from_json(text) {
            let _ = report.to_json();
        }
    }
});
