#![no_main]

use libfuzzer_sys::fuzz_target;
use subring_zeta::IntPoly;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = text.parse::<IntPoly>() {
        let back: IntPoly = f.to_string().parse().expect("display output parses");
        assert_eq!(back, f);
    }
});
