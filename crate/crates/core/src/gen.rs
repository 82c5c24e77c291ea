//! Seeded generators for test corpora.
//!
//! All randomness comes from [`rng`], a ChaCha8 stream keyed by a single
//! `u64` seed, so a seed fully determines the output.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::mad::{mad_below, Density};

/// Identifier of the PRNG written into output headers.
pub const PRNG_ID: &str = "chacha8";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random labelled tree on `n` vertices (random attachment over a
/// shuffled vertex order).
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut g = Graph::empty(n);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        g.add_edge(order[i], order[j]).expect("tree edge");
    }
    g
}

/// Connected graph on `n` vertices with `mad < cap`: a random spanning tree,
/// then every non-edge in random order, kept only if the cap still holds.
pub fn gen_sparse(n: usize, cap: Density, seed: u64) -> Graph {
    let mut rng = rng(seed);
    let mut g = random_tree(n, &mut rng);
    let mut candidates: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !g.has_edge(u, v))
        .collect();
    candidates.shuffle(&mut rng);
    for (u, v) in candidates {
        g.add_edge(u, v).expect("non-edge");
        if !mad_below(&g, cap) {
            g.remove_edge(u, v);
        }
    }
    g
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = rng(seed);
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).expect("fresh edge");
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mad::{mad_bruteforce, mad_exact};

    #[test]
    fn gen_sparse_respects_cap() {
        let cap = Density::new(5, 2);
        for seed in 0..5 {
            let g = gen_sparse(5, cap, seed);
            assert!(g.is_connected());
            assert!(mad_exact(&g).unwrap().0 < cap);
        }
        let single = gen_sparse(1, cap, 3);
        assert_eq!((single.n(), single.m()), (1, 0));

        let cap = Density::new(16, 7);
        let g = gen_sparse(12, cap, 7);
        assert!(g.is_connected());
        assert!(mad_below(&g, cap));
        assert!(mad_bruteforce(&g).unwrap() < cap);
    }

    #[test]
    fn seed_determines_output() {
        let cap = Density::new(5, 2);
        assert_eq!(gen_sparse(20, cap, 11), gen_sparse(20, cap, 11));
        assert_eq!(gnp(10, 0.3, 4), gnp(10, 0.3, 4));
    }
}
