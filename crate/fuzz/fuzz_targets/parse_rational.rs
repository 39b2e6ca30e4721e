#![no_main]

use duality_core::scalar::parse_rational;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_rational(s) {
        // the canonical p/q form parses back to the same value
        let again = parse_rational(&q.to_string()).expect("canonical form parses");
        assert_eq!(again, q);
    }
});
