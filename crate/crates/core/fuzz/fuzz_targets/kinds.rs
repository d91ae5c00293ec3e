#![no_main]

use libfuzzer_sys::fuzz_target;
use subring_zeta::{ring_from_kind, Family, GroupKind, SplittingType};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = text.parse::<Family>();
    let _ = text.parse::<SplittingType>();
    if let Ok(kind) = text.parse::<GroupKind>() {
        if kind.degree() <= 7 {
            let _ = kind.build();
        }
    }
    if text.len() <= 64 {
        if let Ok(ring) = ring_from_kind(text) {
            if ring.rank() <= 8 {
                assert!(ring.validate().is_ok());
            }
        }
    }
});
