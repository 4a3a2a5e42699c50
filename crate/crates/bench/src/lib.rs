//! Benchmark fixtures.

use qec_core::{family, join, FamilyKind, Graph};

/// `K̄_m + G` together with its right operand.
pub fn empty_join(m: usize, kind: FamilyKind, n: usize) -> (Graph, Graph) {
    let g = family(kind, n).expect("valid family");
    let joined = join(&family(FamilyKind::Empty, m).expect("valid family"), &g);
    (joined, g)
}
