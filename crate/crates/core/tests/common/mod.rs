#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semiregular::SimpleGraph;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random forest on `n` vertices with shuffled labels. Each vertex after
/// the first attaches to an earlier one with probability `attach`.
pub fn random_forest(rng: &mut impl Rng, n: usize, attach: f64) -> SimpleGraph {
    let mut edges = Vec::new();
    for v in 1..n {
        if rng.gen_bool(attach) {
            edges.push((rng.gen_range(0..v), v));
        }
    }
    relabel(rng, n, &edges)
}

pub fn relabel(rng: &mut impl Rng, n: usize, edges: &[(usize, usize)]) -> SimpleGraph {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    SimpleGraph::new(n, edges.iter().map(|&(a, b)| (perm[a], perm[b]))).expect("relabelled forest is simple")
}
