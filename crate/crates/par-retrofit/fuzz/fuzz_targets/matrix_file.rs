#![no_main]

use libfuzzer_sys::fuzz_target;
use par_retrofit::transform::TransformMatrix;

// Accepted matrices must round-trip bit-exactly through the text form.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if text.len() > 1 << 16 {
        return;
    }
    if let Ok(m) = TransformMatrix::parse_text(text, "fuzz") {
        let ser = m.to_text();
        let back = TransformMatrix::parse_text(&ser, "fuzz-ser").expect("serialized matrix reparses");
        let a = m.matrix().as_slice();
        let b = back.matrix().as_slice();
        assert_eq!(a.len(), b.len());
        assert!(a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
});
