#![no_main]

use duality_core::algebra::StarName;
use duality_core::verify::IntertwiningKernel;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = StarName::parse(s);
    if let Ok(k) = IntertwiningKernel::parse(s) {
        assert_eq!(k.name(), s);
    }
});
