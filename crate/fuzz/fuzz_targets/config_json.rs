#![no_main]

use libfuzzer_sys::fuzz_target;
use nusamp::harness::ExperimentConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = ExperimentConfig::from_json(text) {
        // anything accepted must survive a round trip
        let again = serde_json::to_string(&cfg).expect("accepted config serializes");
        assert_eq!(ExperimentConfig::from_json(&again).as_ref(), Ok(&cfg));
    }
});
