#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(perms) = polyscan::io::parse_permutation_list(text) {
        // printing and reparsing a permutation gives it back
        for p in perms {
            let again = polyscan::io::parse_permutation_list(&p.to_string()).unwrap();
            assert_eq!(again[0].extended(p.degree()), p);
        }
    }
});
