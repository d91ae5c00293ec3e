#![no_main]

use libfuzzer_sys::fuzz_target;
use subring_zeta::series::parse_sidecar;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(map) = parse_sidecar(text) {
        for v in map.values() {
            assert!(v.first().is_some_and(|c| *c == 1u8.into()));
        }
    }
});
