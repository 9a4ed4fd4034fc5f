#![no_main]

use libfuzzer_sys::fuzz_target;
use par_retrofit::corpus::{parse_corpus, serialize_corpus};

// Accepted input must survive a serialize/reparse cycle unchanged.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(pairs) = parse_corpus(text, "fuzz") {
        let ser = serialize_corpus(&pairs);
        let back = parse_corpus(&ser, "fuzz-ser").expect("serialized corpus reparses");
        assert_eq!(pairs.len(), back.len());
        assert_eq!(serialize_corpus(&back), ser);
    }
});
