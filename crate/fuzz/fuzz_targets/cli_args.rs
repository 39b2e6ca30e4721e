#![no_main]

use clap::Parser;
use duality_lab::config::{Cli, RunConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    // NUL-separated argv; anything naming a config file is skipped so the
    // target never reads from disk
    let argv: Vec<&str> = s.split('\0').collect();
    if argv.iter().any(|a| a.starts_with("--config")) {
        return;
    }
    if let Ok(cli) = Cli::try_parse_from(std::iter::once("duality-lab").chain(argv)) {
        let _ = RunConfig::from_cli(cli);
    }
});
