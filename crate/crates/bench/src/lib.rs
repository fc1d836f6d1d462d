//! Shared fixtures for the criterion benches.

use semiregular::graph::{Family, LeveledTree};

/// The tree instances the benches sweep over, smallest first.
pub fn hochster_fixtures() -> Vec<LeveledTree> {
    [
        (Family::Full, 3, 1),
        (Family::Ary, 3, 2),
        (Family::Full, 3, 2),
        (Family::Ary, 4, 2),
    ]
    .into_iter()
    .map(|(f, n, k)| LeveledTree::build(f, n, k).expect("valid fixture"))
    .collect()
}

pub fn large_tree(family: Family, n: usize, k: usize) -> LeveledTree {
    LeveledTree::build(family, n, k).expect("valid fixture")
}
