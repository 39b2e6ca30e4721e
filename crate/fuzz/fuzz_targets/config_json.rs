#![no_main]

use duality_lab::config::{Options, RunConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    // parsing and validation only; nothing is run
    if let Ok(o) = Options::from_json(s) {
        let _ = RunConfig::from_options(o);
    }
});
