#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // parsing and validation must never panic on arbitrary bytes
    let _ = spslab::io::parse_sweep_config(data);
});
