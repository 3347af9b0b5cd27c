#![allow(dead_code)]

use hardcore_expansion::polyring::{parse, Polynomial};

/// Sums a golden file holding one term per line.
pub fn golden(name: &str) -> Polynomial {
    let path = format!("{}/tests/data/{name}.txt", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| parse(l).unwrap_or_else(|e| panic!("{path}: {l}: {e}")))
        .fold(Polynomial::zero(), |a, b| &a + &b)
}
