//! Replays the checked-in fuzz corpus through the parsers.

use std::path::Path;

use hodgelab::io::{parse_matroid_str, parse_mixed_str};
use hodgelab::linalg::{format_rational, parse_rational};

fn seeds(target: &str) -> Vec<String> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut out: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| std::fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn rational_seeds() {
    let parsed = seeds("parse_rational").iter().filter_map(|s| parse_rational(s).ok()).count();
    assert!(parsed >= 4);
    for s in seeds("parse_rational") {
        if let Ok(r) = parse_rational(&s) {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
    }
}

#[test]
fn matroid_seeds() {
    let results: Vec<_> = seeds("parse_matroid").iter().map(|s| parse_matroid_str(s)).collect();
    assert!(results.iter().filter(|r| r.is_ok()).count() >= 5);
    assert!(results.iter().any(|r| r.is_err()));
}

#[test]
fn mixed_seeds() {
    let results: Vec<_> = seeds("parse_mixed").iter().map(|s| parse_mixed_str(s)).collect();
    assert_eq!(results.iter().filter(|r| r.is_ok()).count(), 3);
}
