//! Edge ideals of perfect semiregular trees.
//!
//! The crate builds the two tree families `T(n, k)` (every internal vertex of
//! degree `n`, all leaves at depth `k`) and `T'(n, k)` (the perfect
//! `(n - 1)`-ary subtree), evaluates closed forms for depth, Stanley depth,
//! projective dimension, regularity and Krull dimension of `S / I(T)`, and
//! checks those closed forms against independent oracles:
//!
//! * [`oracles`]: independence number, induced matching number, explicit
//!   matchings and maximal independent sets;
//! * [`hochster`]: graded Betti numbers through reduced homology of restricted
//!   independence complexes over GF(2);
//! * [`sdepth`]: Stanley depth through interval partitions of the face poset.
//!
//! [`verify`] ties the pieces together into sweeps that the CLI exposes.

pub mod error;
pub mod formulas;
pub mod graph;
pub mod hochster;
pub mod ideal;
pub mod oracles;
pub mod sdepth;
pub mod verify;

pub use error::{Error, Result};
pub use formulas::{CaseTag, FamilyParams, FormulaValue, Invariant};
pub use graph::{canonical_form, disjoint_union, induced_subgraph, Family, LeveledTree, SimpleGraph, VertexLabel};
pub use hochster::BettiTable;
pub use ideal::MonomialIdeal;
pub use sdepth::IntervalPartition;
pub use verify::{InvariantReport, VerificationRun};
