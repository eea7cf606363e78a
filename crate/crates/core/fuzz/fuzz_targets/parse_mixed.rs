#![no_main]

use hodgelab::io::{parse_mixed_str, MixedDocument};
use hodgelab::mixed::{mixed_discriminant, mixed_volume_boxes, permanent};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = parse_mixed_str(text) else { return };
    // Evaluation is exponential in d, so only small documents are evaluated.
    match doc {
        MixedDocument::Discriminant(t) if t.d() <= 6 && t.len() == t.d() => {
            let _ = mixed_discriminant(&t);
        }
        MixedDocument::Permanent(m) if m.rows() <= 8 => {
            let _ = permanent(&m);
        }
        MixedDocument::Boxes(b) if b.d() <= 8 => {
            let _ = mixed_volume_boxes(&b);
        }
        _ => {}
    }
});
