#![no_main]

use libfuzzer_sys::fuzz_target;
use par_retrofit::embed::{parse_table, InputEmbedder};

// Accepted tables always build an embedder whose lookups match the file.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((dim, table)) = parse_table(text, "fuzz") {
        assert!(table.values().all(|v| v.dim() == dim));
        let words: Vec<String> = table.keys().cloned().collect();
        let expected: Vec<_> = words.iter().map(|w| table[w].clone()).collect();
        let emb = InputEmbedder::with_table(dim, table, 7).expect("parsed table is valid");
        for (word, want) in words.iter().zip(expected) {
            assert_eq!(emb.embed(word).unwrap(), want);
        }
    }
});
