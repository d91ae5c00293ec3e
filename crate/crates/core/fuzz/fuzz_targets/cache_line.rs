#![no_main]

use libfuzzer_sys::fuzz_target;
use subring_zeta::parse_cache_line;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rec) = parse_cache_line(text) {
        rec.value().expect("accepted record has a value");
    }
});
