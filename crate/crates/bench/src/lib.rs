//! Shared inputs for the criterion benches.

use kecss_core::instance::{generate, random_feasible, GenKind};
use kecss_core::Instance;

/// Named instances: both gap fixtures plus seeded random `k = 4` graphs.
pub fn fixtures() -> Vec<(String, Instance)> {
    let mut out = vec![
        ("gap-k3".to_string(), generate(&GenKind::GapK3, 0).expect("fixture")),
        ("gap-k6".to_string(), generate(&GenKind::GapK6, 0).expect("fixture")),
    ];
    for n in [8, 10, 12] {
        let inst = random_feasible(n, 0.7, (1, 10), 4, 1, n as u64).expect("random draw");
        out.push((format!("random-n{n}"), inst));
    }
    out
}
