//! Seeded randomized identity suites at full size.

use qdissect_core::propcheck::{CASES, ORDER, SUITES};

#[test]
fn randomized_identity_suites() {
    for (name, suite, seed) in SUITES {
        if let Err(e) = suite(CASES, ORDER, *seed) {
            panic!("suite {name} failed: {e}");
        }
    }
}
