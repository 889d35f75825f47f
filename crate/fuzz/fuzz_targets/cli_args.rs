#![no_main]

use libfuzzer_sys::fuzz_target;

// NUL-separated argument vector, parsed but never executed
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let argv = std::iter::once("nusamp").chain(text.split('\0'));
    let _ = nusamp_cli::parse_args(argv);
});
