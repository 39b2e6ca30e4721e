#![no_main]

use duality_core::processes::ProcessSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = serde_json::from_slice::<ProcessSpec>(data) else { return };
    if spec.validate().is_ok() {
        let text = serde_json::to_string(&spec).expect("a valid spec serializes");
        let back: ProcessSpec = serde_json::from_str(&text).expect("and reads back");
        assert_eq!(back, spec);
    }
});
