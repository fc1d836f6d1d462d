//! Combinatorial oracles: independence number (Krull dimension of `S/I(G)`),
//! induced matching number (regularity for chordal `G`), the explicit level
//! matchings that realize the regularity lower bound on both tree families,
//! and maximal independent set enumeration.
//!
//! Each numeric oracle has a linear-time forest engine and an exponential
//! bitmask engine; the two are kept separate so they can check each other.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Family, LeveledTree, SimpleGraph};

/// Edge-count limit for the exhaustive induced matching search.
pub const EXHAUSTIVE_EDGE_CAP: usize = 24;
/// Vertex limit for maximal independent set enumeration.
pub const DEFAULT_ENUM_CAP: usize = 22;

/// A set of pairwise vertex-disjoint edges, each stored as `(u, v)`, `u < v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matching(Vec<(usize, usize)>);

impl Matching {
    pub fn new(mut edges: Vec<(usize, usize)>) -> Self {
        for e in edges.iter_mut() {
            *e = (e.0.min(e.1), e.0.max(e.1));
        }
        edges.sort_unstable();
        edges.dedup();
        Matching(edges)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct IndependentSet(Vec<usize>);

impl IndependentSet {
    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    fn from_mask(mask: u64) -> Self {
        IndependentSet((0..64).filter(|&i| mask >> i & 1 == 1).collect())
    }
}

/// Parent pointers and a preorder over every component of a forest.
struct RootedForest {
    order: Vec<usize>,
    parent: Vec<usize>,
}

impl RootedForest {
    fn new(g: &SimpleGraph) -> Result<Self> {
        if !g.is_forest() {
            return Err(Error::NotAForest);
        }
        let nv = g.vertex_count();
        let mut parent = vec![usize::MAX; nv];
        let mut seen = vec![false; nv];
        let mut order = Vec::with_capacity(nv);
        let mut stack = Vec::new();
        for root in 0..nv {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            stack.push(root);
            while let Some(v) = stack.pop() {
                order.push(v);
                for &w in g.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = v;
                        stack.push(w);
                    }
                }
            }
        }
        Ok(RootedForest { order, parent })
    }
}

/// Maximum independent set size of a forest by the in/out tree DP.
pub fn independence_number_forest(g: &SimpleGraph) -> Result<usize> {
    let f = RootedForest::new(g)?;
    let nv = g.vertex_count();
    let mut take = vec![1usize; nv];
    let mut skip = vec![0usize; nv];
    let mut total = 0;
    for &v in f.order.iter().rev() {
        let best = take[v].max(skip[v]);
        match f.parent[v] {
            usize::MAX => total += best,
            p => {
                take[p] += skip[v];
                skip[p] += best;
            }
        }
    }
    Ok(total)
}

/// Maximum independent set size by branch and bound on vertex bitmasks.
pub fn independence_number_exhaustive(g: &SimpleGraph) -> Result<usize> {
    let nbr = masks(g, 64, "vertices for bitmask independence search")?;
    fn search(cand: u64, nbr: &[u64]) -> usize {
        if cand == 0 {
            return 0;
        }
        let mut pick = None;
        let mut best_deg = 0;
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = (nbr[v] & cand).count_ones();
            if d <= 1 {
                // A vertex of degree <= 1 is always in some maximum set.
                return 1 + search(cand & !(1 << v) & !nbr[v], nbr);
            }
            if d > best_deg {
                best_deg = d;
                pick = Some(v);
            }
        }
        let v = pick.unwrap();
        let without = search(cand & !(1 << v), nbr);
        let with = 1 + search(cand & !(1 << v) & !nbr[v], nbr);
        without.max(with)
    }
    Ok(search(full_mask(g.vertex_count()), &nbr))
}

/// Independence number: forest DP for forests, bitmask search otherwise.
pub fn independence_number(g: &SimpleGraph) -> Result<usize> {
    if g.is_forest() {
        independence_number_forest(g)
    } else {
        independence_number_exhaustive(g)
    }
}

/// True iff `m` is a matching of `g` whose endpoints induce exactly `m`.
pub fn is_induced_matching(g: &SimpleGraph, m: &Matching) -> bool {
    let mut partner = vec![usize::MAX; g.vertex_count()];
    for &(u, v) in m.edges() {
        if !g.has_edge(u, v) || partner[u] != usize::MAX || partner[v] != usize::MAX {
            return false;
        }
        partner[u] = v;
        partner[v] = u;
    }
    m.edges().iter().all(|&(u, v)| {
        [(u, v), (v, u)]
            .iter()
            .all(|&(a, b)| g.neighbors(a).iter().all(|&w| w == b || partner[w] == usize::MAX))
    })
}

/// Induced matching number of a forest.
///
/// Per vertex: `out` (not an endpoint), `up` (matched to its parent, so no
/// child is an endpoint) and `down` (matched to exactly one child, which is
/// then in state `up`; every other child is `out`).
pub fn induced_matching_number_forest(g: &SimpleGraph) -> Result<usize> {
    let f = RootedForest::new(g)?;
    let nv = g.vertex_count();
    let mut out = vec![0usize; nv];
    let mut up = vec![0usize; nv];
    // Best value of `1 + up[c] - out[c]` over children c; may be negative.
    let mut partner_gain: Vec<Option<isize>> = vec![None; nv];
    let mut total = 0;
    for &v in f.order.iter().rev() {
        let down = partner_gain[v].map(|gain| (up[v] as isize + gain) as usize);
        let best = down.map_or(out[v], |d| d.max(out[v]));
        match f.parent[v] {
            usize::MAX => total += best,
            p => {
                out[p] += best;
                up[p] += out[v];
                let gain = 1 + up[v] as isize - out[v] as isize;
                partner_gain[p] = Some(partner_gain[p].map_or(gain, |g| g.max(gain)));
            }
        }
    }
    Ok(total)
}

/// Induced matching number by exhaustive search over edges.
pub fn induced_matching_number_exhaustive(g: &SimpleGraph) -> Result<usize> {
    if g.edge_count() > EXHAUSTIVE_EDGE_CAP {
        return Err(Error::ResourceCap {
            what: "edges for exhaustive induced matching search",
            size: g.edge_count(),
            cap: EXHAUSTIVE_EDGE_CAP,
        });
    }
    let nbr = masks(g, 64, "vertices for exhaustive induced matching search")?;
    let closed: Vec<u64> = (0..g.vertex_count()).map(|v| nbr[v] | 1 << v).collect();
    let edges = g.edges();
    fn search(i: usize, forbidden: u64, edges: &[(usize, usize)], closed: &[u64], chosen: usize, best: &mut usize) {
        if chosen + (edges.len() - i) <= *best {
            return;
        }
        if i == edges.len() {
            *best = chosen;
            return;
        }
        let (u, v) = edges[i];
        if forbidden >> u & 1 == 0 && forbidden >> v & 1 == 0 {
            search(
                i + 1,
                forbidden | closed[u] | closed[v],
                edges,
                closed,
                chosen + 1,
                best,
            );
        }
        search(i + 1, forbidden, edges, closed, chosen, best);
    }
    let mut best = 0;
    search(0, 0, edges, &closed, 0, &mut best);
    Ok(best)
}

/// Forest DP for forests, exhaustive search otherwise.
pub fn induced_matching_number(g: &SimpleGraph) -> Result<usize> {
    if g.is_forest() {
        induced_matching_number_forest(g)
    } else {
        induced_matching_number_exhaustive(g)
    }
}

/// The block `F(a-1, a)`: every vertex `x_i^(a-1)` paired with its child
/// `x_{(n-1) i}^(a)`.
pub fn level_matching_block(t: &LeveledTree, a: usize) -> Vec<(usize, usize)> {
    assert!(a >= 1 && a <= t.k());
    let n = t.n();
    let upper = t.levels()[a - 1].clone();
    upper
        .enumerate()
        .map(|(offset, id)| {
            let i = offset + 1;
            (id, t.id_of(a, (n - 1) * i).expect("child index inside level"))
        })
        .collect()
}

/// Union of `F(a-1, a)` for `a = k, k-3, k-6, ...` down to `a >= 1`; its
/// size equals the regularity of `S / I(t)`.
pub fn build_level_matching(t: &LeveledTree) -> Matching {
    let mut edges = Vec::new();
    let mut a = t.k();
    while a >= 1 {
        edges.extend(level_matching_block(t, a));
        if a < 3 {
            break;
        }
        a -= 3;
    }
    Matching::new(edges)
}

/// All maximal independent sets (Bron–Kerbosch on the complement with
/// pivoting). Fails if `g` has more than `vertex_cap` vertices or the output
/// would exceed `output_cap` sets.
pub fn maximal_independent_sets(g: &SimpleGraph, vertex_cap: usize, output_cap: usize) -> Result<Vec<IndependentSet>> {
    let nbr = masks(
        g,
        vertex_cap.min(64),
        "vertices for maximal independent set enumeration",
    )?;
    struct Ctx<'a> {
        nbr: &'a [u64],
        out: Vec<u64>,
        cap: usize,
    }
    fn bk(r: u64, p: u64, x: u64, ctx: &mut Ctx<'_>) -> Result<()> {
        if p == 0 && x == 0 {
            if ctx.out.len() == ctx.cap {
                return Err(Error::ResourceCap {
                    what: "maximal independent sets",
                    size: ctx.cap + 1,
                    cap: ctx.cap,
                });
            }
            ctx.out.push(r);
            return Ok(());
        }
        // Non-neighbors in G are neighbors in the complement.
        let pivot = {
            let mut best = (0u32, 0usize);
            let mut px = p | x;
            while px != 0 {
                let u = px.trailing_zeros() as usize;
                px &= px - 1;
                let score = (p & !ctx.nbr[u] & !(1 << u)).count_ones() + 1;
                if score > best.0 {
                    best = (score, u);
                }
            }
            best.1
        };
        let mut branch = p & (ctx.nbr[pivot] | 1 << pivot);
        let (mut p, mut x) = (p, x);
        while branch != 0 {
            let v = branch.trailing_zeros() as usize;
            branch &= branch - 1;
            let keep = !(ctx.nbr[v] | 1 << v);
            bk(r | 1 << v, p & keep, x & keep, ctx)?;
            p &= !(1 << v);
            x |= 1 << v;
        }
        Ok(())
    }
    let mut ctx = Ctx {
        nbr: &nbr,
        out: Vec::new(),
        cap: output_cap,
    };
    bk(0, full_mask(g.vertex_count()), 0, &mut ctx)?;
    let mut sets: Vec<IndependentSet> = ctx.out.into_iter().map(IndependentSet::from_mask).collect();
    sets.sort_unstable();
    Ok(sets)
}

/// Largest minimal vertex cover: `|V|` minus the smallest maximal
/// independent set. Not one of the gated oracles; used to annotate reports.
pub fn big_height(g: &SimpleGraph) -> Result<usize> {
    let sets = maximal_independent_sets(g, DEFAULT_ENUM_CAP, 1 << 22)?;
    let smallest = sets.iter().map(IndependentSet::len).min().unwrap_or(0);
    Ok(g.vertex_count() - smallest)
}

/// How the maximal independent sets of a full tree relate to the union of
/// the levels `L_q` with `q ≡ k (mod 2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelUnionReport {
    pub level_union_size: usize,
    pub maximal_sets: usize,
    pub maximum_size: usize,
    pub maximum_sets: usize,
    /// Every maximum-size maximal set contains the level union.
    pub maximum_contains_levels: bool,
    /// Every maximum-size maximal set equals the level union.
    pub maximum_equals_levels: bool,
    /// Maximal sets that do not contain the level union; nonzero means the
    /// literal "maximal iff contains the levels" reading fails.
    pub maximal_without_levels: usize,
}

pub fn level_union_report(t: &LeveledTree, vertex_cap: usize) -> Result<LevelUnionReport> {
    if t.family() != Family::Full {
        return Err(Error::Precondition(
            "level union check applies to the full family".into(),
        ));
    }
    let union: Vec<usize> = t
        .levels()
        .iter()
        .enumerate()
        .filter(|(q, _)| q % 2 == t.k() % 2)
        .flat_map(|(_, r)| r.clone())
        .collect();
    let sets = maximal_independent_sets(t.graph(), vertex_cap, 1 << 22)?;
    let contains = |s: &IndependentSet| union.iter().all(|&v| s.contains(v));
    let maximum_size = sets.iter().map(IndependentSet::len).max().unwrap_or(0);
    let maximum: Vec<_> = sets.iter().filter(|s| s.len() == maximum_size).collect();
    Ok(LevelUnionReport {
        level_union_size: union.len(),
        maximal_sets: sets.len(),
        maximum_size,
        maximum_sets: maximum.len(),
        maximum_contains_levels: maximum.iter().all(|s| contains(s)),
        maximum_equals_levels: maximum.iter().all(|s| s.vertices() == union.as_slice()),
        maximal_without_levels: sets.iter().filter(|s| !contains(s)).count(),
    })
}

fn masks(g: &SimpleGraph, cap: usize, what: &'static str) -> Result<Vec<u64>> {
    if g.vertex_count() > cap {
        return Err(Error::ResourceCap {
            what,
            size: g.vertex_count(),
            cap,
        });
    }
    Ok(g.neighbor_masks().expect("at most 64 vertices"))
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_ary_tree, build_full_tree};

    #[test]
    fn independence_examples() {
        let s4 = SimpleGraph::star(4);
        assert_eq!(independence_number(&s4).unwrap(), 3);
        let t = build_full_tree(3, 2).unwrap();
        assert_eq!(independence_number_forest(t.graph()).unwrap(), 7);
        assert_eq!(independence_number_exhaustive(t.graph()).unwrap(), 7);
        assert_eq!(independence_number(&SimpleGraph::empty(5)).unwrap(), 5);
        assert_eq!(independence_number(&SimpleGraph::cycle(5).unwrap()).unwrap(), 2);
    }

    #[test]
    fn induced_matching_predicate() {
        let p4 = SimpleGraph::path(4);
        assert!(!is_induced_matching(&p4, &Matching::new(vec![(0, 1), (2, 3)])));
        let p5 = SimpleGraph::path(5);
        assert!(is_induced_matching(&p5, &Matching::new(vec![(0, 1), (3, 4)])));
        assert!(!is_induced_matching(&p5, &Matching::new(vec![(0, 1), (1, 2)])));
        assert!(!is_induced_matching(&p5, &Matching::new(vec![(0, 2)])));

        let t = build_full_tree(3, 2).unwrap();
        let block = Matching::new(level_matching_block(&t, 2));
        assert_eq!(block.len(), 3);
        assert!(is_induced_matching(t.graph(), &block));
    }

    #[test]
    fn induced_matching_numbers() {
        assert_eq!(
            induced_matching_number(build_ary_tree(3, 1).unwrap().graph()).unwrap(),
            1
        );
        let ary = build_ary_tree(3, 3).unwrap();
        assert_eq!(induced_matching_number_forest(ary.graph()).unwrap(), 4);
        assert_eq!(induced_matching_number_exhaustive(ary.graph()).unwrap(), 4);
        let full = build_full_tree(3, 3).unwrap();
        assert_eq!(induced_matching_number_forest(full.graph()).unwrap(), 6);
        assert_eq!(induced_matching_number(&SimpleGraph::path(5)).unwrap(), 2);
        assert_eq!(induced_matching_number(&SimpleGraph::path(4)).unwrap(), 1);
        assert_eq!(induced_matching_number(&SimpleGraph::empty(3)).unwrap(), 0);
        assert!(induced_matching_number_exhaustive(full.graph()).is_ok());
        assert!(induced_matching_number_exhaustive(build_full_tree(3, 4).unwrap().graph()).is_err());
    }

    #[test]
    fn level_matchings() {
        let t = build_ary_tree(3, 4).unwrap();
        let m = build_level_matching(&t);
        assert_eq!(m.len(), 9);
        assert!(is_induced_matching(t.graph(), &m));
        let t = build_full_tree(3, 3).unwrap();
        assert_eq!(build_level_matching(&t).len(), 6);
        for n in 3..6 {
            let t = build_ary_tree(n, 1).unwrap();
            assert_eq!(build_level_matching(&t).len(), 1);
        }
        assert!(build_level_matching(&build_full_tree(3, 0).unwrap()).is_empty());
    }

    #[test]
    fn maximal_sets_small() {
        let k2 = SimpleGraph::path(2);
        let sets = maximal_independent_sets(&k2, 22, 100).unwrap();
        assert_eq!(sets, vec![IndependentSet(vec![0]), IndependentSet(vec![1])]);
        let s4 = SimpleGraph::star(4);
        let sets = maximal_independent_sets(&s4, 22, 100).unwrap();
        assert_eq!(sets, vec![IndependentSet(vec![0]), IndependentSet(vec![1, 2, 3])]);
        assert!(maximal_independent_sets(&SimpleGraph::path(10), 22, 3).is_err());
        assert!(maximal_independent_sets(&SimpleGraph::path(23), 22, 100).is_err());
    }

    #[test]
    fn level_union_on_full_3_2() {
        let t = build_full_tree(3, 2).unwrap();
        let r = level_union_report(&t, 22).unwrap();
        assert_eq!(r.maximum_size, 7);
        assert_eq!(r.maximum_sets, 1);
        assert!(r.maximum_equals_levels && r.maximum_contains_levels);
        // L_1 alone is maximal but misses L_0 and L_2.
        assert!(r.maximal_without_levels > 0);
    }

    #[test]
    fn big_heights() {
        assert_eq!(big_height(&SimpleGraph::path(2)).unwrap(), 1);
        assert_eq!(big_height(&SimpleGraph::star(4)).unwrap(), 3);
        assert_eq!(big_height(build_full_tree(3, 2).unwrap().graph()).unwrap(), 7);
    }
}
