#![no_main]

use libfuzzer_sys::fuzz_target;
use subring_zeta::galois::{parse_group_file, r2_row};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(specs) = parse_group_file(text) else {
        return;
    };
    for spec in specs.iter().filter(|s| s.degree <= 7) {
        if let Ok(row) = r2_row(spec) {
            assert!(row.burnside_matches());
        }
    }
});
