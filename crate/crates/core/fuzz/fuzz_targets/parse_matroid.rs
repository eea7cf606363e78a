#![no_main]

use hodgelab::invariants::{f_vector, whitney_numbers};
use hodgelab::io::parse_matroid_str;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(m) = parse_matroid_str(text) else { return };
    assert!(m.rank() <= m.ground_size());
    assert_eq!(f_vector(&m).coefficients.len(), m.rank() + 1);
    assert_eq!(whitney_numbers(&m).coefficients[0], 1);
});
