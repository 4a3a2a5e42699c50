//! Built-in graph corpora for cross-checking solvers.

use qec_core::graphs::{FamilyKind, GraphExpr};
use qec_core::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every family graph on at most `max_n` vertices, followed by its joins
/// with `empty:m` for `m <= 3`.
pub fn family_corpus(max_n: usize) -> Vec<GraphExpr> {
    let mut base = Vec::new();
    for kind in FamilyKind::ALL {
        for n in 1..=max_n {
            if kind == FamilyKind::Cycle && n < 3 {
                continue;
            }
            base.push(GraphExpr::Family(kind, n));
        }
    }
    let mut out = base.clone();
    for m in 1..=3 {
        for g in &base {
            out.push(GraphExpr::Join(
                Box::new(GraphExpr::Family(FamilyKind::Empty, m)),
                Box::new(g.clone()),
            ));
        }
    }
    out
}

/// `count` connected graphs on `1..=max_n` vertices with edge density drawn
/// uniformly from `[0.2, 0.9)`, reproducible from `seed`.
pub fn random_connected(seed: u64, count: usize, max_n: usize) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.random_range(1..=max_n.max(1));
        let p = rng.random_range(0.2..0.9);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|_| rng.random_bool(p))
            .collect();
        let g = Graph::new(n, edges).expect("generated edges are valid");
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_under_seed() {
        assert_eq!(random_connected(7, 20, 6), random_connected(7, 20, 6));
        assert_ne!(random_connected(7, 20, 6), random_connected(8, 20, 6));
        assert!(random_connected(0, 50, 5).iter().all(|g| g.is_connected() && g.n() <= 5));
    }

    #[test]
    fn family_corpus_size() {
        // 4 families on 1..=8 minus cycles on 1, 2 vertices, then 3 joins each
        assert_eq!(family_corpus(8).len(), 30 * 4);
    }
}
