#![no_main]

use libfuzzer_sys::fuzz_target;
use par_retrofit::corpus::tokenize;

// Tokens are never empty, carry no surrounding ASCII punctuation, and
// tokenizing is idempotent on its own output.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(sentence) = tokenize(text) {
        assert!(!sentence.tokens().is_empty());
        for t in sentence.tokens() {
            assert!(!t.is_empty());
            assert!(!t.chars().next().unwrap().is_ascii_punctuation());
            assert!(!t.chars().last().unwrap().is_ascii_punctuation());
        }
        let joined = sentence.tokens().join(" ");
        let again = tokenize(&joined).expect("token stream retokenizes");
        assert_eq!(again.tokens(), sentence.tokens());
    }
});
