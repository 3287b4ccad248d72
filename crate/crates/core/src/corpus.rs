//! The standard test corpus of small codes.

use crate::bitspace::{make_code, Code, CodeKind};
use crate::error::Result;

/// Twenty full-rank random linear codes with 6 ≤ n ≤ 12.
pub fn random_linear_kinds() -> Vec<CodeKind> {
    (0..20u64)
        .map(|i| {
            let n = 6 + (i % 7) as usize;
            let k = 1 + (3 * i as usize) % (n - 1);
            CodeKind::RandomLinear {
                n,
                k,
                seed: 1000 + i,
            }
        })
        .collect()
}

/// repetition(3,5,7,9), parity(4..8), hamming74, reed_muller(1,3),
/// reed_muller(1,4), and [`random_linear_kinds`].
pub fn standard_kinds() -> Vec<CodeKind> {
    let mut kinds: Vec<CodeKind> = [3, 5, 7, 9].into_iter().map(CodeKind::Repetition).collect();
    kinds.extend((4..=8).map(CodeKind::Parity));
    kinds.push(CodeKind::Hamming74);
    kinds.push(CodeKind::ReedMuller { r: 1, m: 3 });
    kinds.push(CodeKind::ReedMuller { r: 1, m: 4 });
    kinds.extend(random_linear_kinds());
    kinds
}

pub fn standard_corpus() -> Result<Vec<Code>> {
    standard_kinds().into_iter().map(make_code).collect()
}
