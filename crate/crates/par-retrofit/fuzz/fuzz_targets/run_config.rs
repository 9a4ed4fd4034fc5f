#![no_main]

use libfuzzer_sys::fuzz_target;
use par_retrofit::config::RunConfig;

// Accepted configs must serialize to a snapshot that reparses equal.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = RunConfig::parse_str(text, "fuzz") {
        let snapshot = cfg.serialize();
        let back = RunConfig::parse_str(&snapshot, "fuzz-ser").expect("snapshot reparses");
        assert_eq!(cfg, back);
    }
});
