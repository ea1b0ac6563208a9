//! Shared inputs for the benchmarks.

use coaxial_core::{AngleMultiset, BasisContext, Partition};

pub fn angles(texts: &[&str]) -> AngleMultiset {
    AngleMultiset::parse(texts, BasisContext::default()).expect("valid benchmark angles")
}

/// `{t1, 2 t1, .., m t1}` followed by the integer angle `k`: every sign
/// pattern has to be examined.
pub fn ladder(m: usize, k: i64) -> AngleMultiset {
    let mut texts: Vec<String> = (1..=m).map(|i| format!("{i}*t1")).collect();
    texts.push(k.to_string());
    AngleMultiset::parse(&texts, BasisContext::default()).expect("valid ladder")
}

pub fn partition(parts: &[u64]) -> Partition {
    Partition::new(parts.to_vec()).expect("valid partition")
}
