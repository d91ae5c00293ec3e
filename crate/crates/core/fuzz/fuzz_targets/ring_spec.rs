#![no_main]

use libfuzzer_sys::fuzz_target;
use subring_zeta::StructureRing;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(ring) = StructureRing::from_spec_json(text) {
        let _ = ring.validate();
        let again = StructureRing::from_spec_json(&ring.to_spec_json().to_string())
            .expect("serialized ring parses");
        assert_eq!(again.digest(), ring.digest());
    }
});
