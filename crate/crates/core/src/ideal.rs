//! Squarefree monomial ideals: colon and sum by a variable, the support
//! graph of an ideal generated in degree at most two, and checks that a
//! quotient splits into the expected tensor factors.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{canonical_form, Family, LeveledTree, SimpleGraph};

/// A squarefree monomial ideal given by its minimal generators. Each
/// generator is a sorted list of variable indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    universe_size: usize,
    generators: Vec<Vec<usize>>,
}

impl MonomialIdeal {
    /// Builds an ideal, minimalizing the generating set.
    pub fn new(universe_size: usize, generators: Vec<Vec<usize>>) -> Result<Self> {
        let mut gens = Vec::with_capacity(generators.len());
        for mut g in generators {
            g.sort_unstable();
            g.dedup();
            if let Some(&v) = g.iter().find(|&&v| v >= universe_size) {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    vertex_count: universe_size,
                });
            }
            gens.push(g);
        }
        Ok(MonomialIdeal {
            universe_size,
            generators: minimalize(gens),
        })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    /// Minimal generators, ordered by degree then lexicographically.
    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Whether the variable itself lies in the ideal.
    pub fn contains_variable(&self, v: usize) -> bool {
        self.generators.iter().any(|g| g.as_slice() == [v])
    }

    /// Variables dividing some minimal generator.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.generators.iter().flatten().copied().collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn is_antichain(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, a)| {
            self.generators
                .iter()
                .enumerate()
                .all(|(j, b)| i == j || !is_subset(a, b))
        })
    }

    /// `m <universe> <count>` header, then one sorted generator per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("m {} {}\n", self.universe_size, self.generators.len());
        for g in &self.generators {
            let line: Vec<String> = g.iter().map(usize::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let parse_err = |line: usize, message: String| Error::Parse {
            line: line + 1,
            message,
        };
        let (hno, header) = lines.next().ok_or_else(|| parse_err(0, "empty input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (universe, count) = match fields.as_slice() {
            ["m", u, c] => (
                u.parse::<usize>().map_err(|e| parse_err(hno, e.to_string()))?,
                c.parse::<usize>().map_err(|e| parse_err(hno, e.to_string()))?,
            ),
            _ => return Err(parse_err(hno, "expected `m <universe_size> <generator_count>`".into())),
        };
        let mut gens = Vec::with_capacity(count);
        for (no, line) in lines {
            let g = line
                .split_whitespace()
                .map(|f| f.parse::<usize>().map_err(|e| parse_err(no, e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            gens.push(g);
        }
        if gens.len() != count {
            return Err(parse_err(
                hno,
                format!("header declares {count} generators, found {}", gens.len()),
            ));
        }
        Self::new(universe, gens)
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.len() <= big.len() && small.iter().all(|v| big.binary_search(v).is_ok())
}

/// Drops duplicates and every generator divisible by another one.
fn minimalize(mut gens: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    gens.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    gens.dedup();
    let mut kept: Vec<Vec<usize>> = Vec::with_capacity(gens.len());
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    for g in gens {
        let redundant = if g.len() <= 12 {
            proper_subsets(&g).any(|s| seen.contains(&s))
        } else {
            kept.iter().any(|k| is_subset(k, &g))
        };
        if !redundant {
            seen.insert(g.clone());
            kept.push(g);
        }
    }
    kept
}

fn proper_subsets(g: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let full = (1u32 << g.len()) - 1;
    (0..full).map(move |mask| {
        g.iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect()
    })
}

/// `I(G)`: one quadratic generator per edge.
pub fn edge_ideal(g: &SimpleGraph) -> MonomialIdeal {
    MonomialIdeal {
        universe_size: g.vertex_count(),
        generators: g.edges().iter().map(|&(u, v)| vec![u, v]).collect(),
    }
}

/// `(I : x_v)`. Fails when `x_v` already lies in `I`.
pub fn colon_by_variable(ideal: &MonomialIdeal, v: usize) -> Result<MonomialIdeal> {
    check_variable(ideal, v)?;
    if ideal.contains_variable(v) {
        return Err(Error::Precondition(format!(
            "x_{v} lies in the ideal; colon is the unit ideal"
        )));
    }
    let gens = ideal
        .generators
        .iter()
        .map(|g| g.iter().copied().filter(|&w| w != v).collect())
        .collect();
    Ok(MonomialIdeal {
        universe_size: ideal.universe_size,
        generators: minimalize(gens),
    })
}

/// `(I : x_{v1} x_{v2} ...)` as a fold of single-variable colons.
pub fn colon_by_monomial(ideal: &MonomialIdeal, vars: &[usize]) -> Result<MonomialIdeal> {
    vars.iter()
        .try_fold(ideal.clone(), |acc, &v| colon_by_variable(&acc, v))
}

/// `(I, x_v)`.
pub fn add_variable(ideal: &MonomialIdeal, v: usize) -> Result<MonomialIdeal> {
    check_variable(ideal, v)?;
    let mut gens = ideal.generators.clone();
    gens.push(vec![v]);
    Ok(MonomialIdeal {
        universe_size: ideal.universe_size,
        generators: minimalize(gens),
    })
}

fn check_variable(ideal: &MonomialIdeal, v: usize) -> Result<()> {
    if v >= ideal.universe_size {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            vertex_count: ideal.universe_size,
        });
    }
    Ok(())
}

/// The graph `G_I` on `supp(I)`, with a map back to variable indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportGraph {
    pub graph: SimpleGraph,
    /// `variables[i]` is the variable index of graph vertex `i` (increasing).
    pub variables: Vec<usize>,
    /// Variables that are themselves generators (isolated in `graph`).
    pub killed: Vec<usize>,
}

impl SupportGraph {
    /// Edges in terms of variable indices.
    pub fn variable_edges(&self) -> Vec<(usize, usize)> {
        self.graph
            .edges()
            .iter()
            .map(|&(a, b)| (self.variables[a], self.variables[b]))
            .collect()
    }
}

/// Vertices are the support, edges the quadratic generators; linear
/// generators show up as isolated vertices.
pub fn support_graph(ideal: &MonomialIdeal) -> Result<SupportGraph> {
    if let Some(g) = ideal.generators.iter().find(|g| g.len() > 2) {
        return Err(Error::UnsupportedDegree(g.len()));
    }
    let variables = ideal.support();
    let index = |v: usize| variables.binary_search(&v).unwrap();
    let edges: Vec<_> = ideal
        .generators
        .iter()
        .filter(|g| g.len() == 2)
        .map(|g| (index(g[0]), index(g[1])))
        .collect();
    let killed = ideal.generators.iter().filter(|g| g.len() == 1).map(|g| g[0]).collect();
    Ok(SupportGraph {
        graph: SimpleGraph::new(variables.len(), edges)?,
        variables,
        killed,
    })
}

/// A tree family member used as an expected tensor factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Blueprint {
    pub family: Family,
    pub n: usize,
    pub k: usize,
}

impl Blueprint {
    pub fn ary(n: usize, k: usize) -> Self {
        Blueprint {
            family: Family::Ary,
            n,
            k,
        }
    }

    pub fn full(n: usize, k: usize) -> Self {
        Blueprint {
            family: Family::Full,
            n,
            k,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    /// Canonical form of each nontrivial component with its multiplicity.
    pub components: Vec<(String, usize)>,
    pub free_variables: usize,
    pub matches_expected: bool,
}

/// Checks `S / I ≅ ⊗ (copies of expected trees) ⊗ K[free variables]`.
///
/// Linear generators kill their variable and are ignored. Universe
/// variables outside `supp(I)` are free. An expected one-vertex tree is a
/// polynomial ring in one variable, so it is counted as a free variable.
pub fn verify_decomposition(
    ideal: &MonomialIdeal,
    expected: &[(Blueprint, usize)],
    expected_free: usize,
) -> Result<DecompositionReport> {
    let sg = support_graph(ideal)?;
    let live: Vec<usize> = (0..sg.graph.vertex_count())
        .filter(|&i| sg.graph.degree(i) > 0)
        .collect();
    let forest = crate::graph::induced_subgraph(&sg.graph.clone().without_labels(), &live)?;
    if !forest.is_forest() {
        return Err(Error::NotAForest);
    }

    let mut observed: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    for comp in forest.components() {
        let piece = crate::graph::induced_subgraph(&forest, &comp)?;
        *observed.entry(canonical_form(&piece)?).or_default() += 1;
    }
    let free_variables = ideal.universe_size - sg.variables.len();

    let mut wanted: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    let mut wanted_free = expected_free;
    for &(bp, mult) in expected {
        if mult == 0 {
            continue;
        }
        let tree = LeveledTree::build(bp.family, bp.n, bp.k)?;
        if tree.graph().vertex_count() == 1 {
            wanted_free += mult;
            continue;
        }
        *wanted.entry(canonical_form(tree.graph())?).or_default() += mult;
    }

    Ok(DecompositionReport {
        components: observed
            .iter()
            .map(|(code, &c)| (String::from_utf8_lossy(code).into_owned(), c))
            .collect(),
        free_variables,
        matches_expected: observed == wanted && free_variables == wanted_free,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_ary_tree, build_full_tree};

    fn ideal(universe: usize, gens: &[&[usize]]) -> MonomialIdeal {
        MonomialIdeal::new(universe, gens.iter().map(|g| g.to_vec()).collect()).unwrap()
    }

    #[test]
    fn edge_ideals() {
        assert_eq!(edge_ideal(&SimpleGraph::path(2)).generators(), &[vec![0, 1]]);
        let star = edge_ideal(build_full_tree(3, 1).unwrap().graph());
        assert_eq!(star.generators().len(), 3);
        assert!(star.generators().iter().all(|g| g.contains(&0)));
        assert!(edge_ideal(&SimpleGraph::empty(1)).is_zero());
    }

    #[test]
    fn colon_and_sum_principal() {
        let i = ideal(2, &[&[0, 1]]);
        assert_eq!(colon_by_variable(&i, 0).unwrap().generators(), &[vec![1]]);
        assert_eq!(add_variable(&i, 0).unwrap().generators(), &[vec![0]]);
        let killed = add_variable(&i, 0).unwrap();
        assert!(matches!(colon_by_variable(&killed, 0), Err(Error::Precondition(_))));
        assert!(colon_by_variable(&i, 2).is_err());
    }

    #[test]
    fn minimalization() {
        let i = ideal(4, &[&[0, 1, 2], &[1, 0], &[3], &[3, 2], &[1, 0]]);
        assert_eq!(i.generators(), &[vec![3], vec![0, 1]]);
        assert!(i.is_antichain());
    }

    #[test]
    fn colon_of_ary_by_root() {
        let t = build_ary_tree(3, 3).unwrap();
        let c = colon_by_variable(&edge_ideal(t.graph()), t.root()).unwrap();
        let sg = support_graph(&c).unwrap();
        let mut killed = sg.killed.clone();
        killed.sort_unstable();
        assert_eq!(killed, t.levels()[1].clone().collect::<Vec<_>>());
        let r = verify_decomposition(&c, &[(Blueprint::ary(3, 1), 4)], 1).unwrap();
        assert!(r.matches_expected, "{r:?}");
        let wrong = verify_decomposition(&c, &[(Blueprint::ary(3, 1), 3)], 1).unwrap();
        assert!(!wrong.matches_expected);
    }

    #[test]
    fn sum_of_ary_with_root() {
        let t = build_ary_tree(3, 3).unwrap();
        let s = add_variable(&edge_ideal(t.graph()), t.root()).unwrap();
        let r = verify_decomposition(&s, &[(Blueprint::ary(3, 2), 2)], 0).unwrap();
        assert!(r.matches_expected, "{r:?}");
    }

    #[test]
    fn sum_of_full_with_root() {
        let t = build_full_tree(3, 2).unwrap();
        let s = add_variable(&edge_ideal(t.graph()), t.root()).unwrap();
        assert!(
            verify_decomposition(&s, &[(Blueprint::ary(3, 1), 3)], 0)
                .unwrap()
                .matches_expected
        );
    }

    #[test]
    fn colon_of_full_by_first_level_one_vertex() {
        let t = build_full_tree(3, 3).unwrap();
        let x = t.id_of(1, 1).unwrap();
        let c = colon_by_variable(&edge_ideal(t.graph()), x).unwrap();
        let r = verify_decomposition(&c, &[(Blueprint::ary(3, 0), 4), (Blueprint::ary(3, 2), 2)], 1).unwrap();
        assert!(r.matches_expected, "{r:?}");
    }

    #[test]
    fn colon_of_full_by_level_product() {
        // T(3, 4) : (product of the 12 level-3 variables) leaves one T(3, 1)
        // and kills levels 2 and 4.
        let t = build_full_tree(3, 4).unwrap();
        let vars: Vec<_> = t.levels()[3].clone().collect();
        let c = colon_by_monomial(&edge_ideal(t.graph()), &vars).unwrap();
        let sg = support_graph(&c).unwrap();
        let mut killed = sg.killed.clone();
        killed.sort_unstable();
        let expected: Vec<_> = t.levels()[2].clone().chain(t.levels()[4].clone()).collect();
        assert_eq!(killed, expected);
        let r = verify_decomposition(&c, &[(Blueprint::full(3, 1), 1)], 12).unwrap();
        assert!(r.matches_expected, "{r:?}");
    }

    #[test]
    fn support_graph_rejects_cubic() {
        let i = ideal(3, &[&[0, 1, 2]]);
        assert_eq!(support_graph(&i), Err(Error::UnsupportedDegree(3)));
    }

    #[test]
    fn text_round_trip() {
        let i = ideal(5, &[&[4], &[0, 1], &[1, 2]]);
        let text = i.to_text();
        assert_eq!(text, "m 5 3\n4\n0 1\n1 2\n");
        assert_eq!(MonomialIdeal::from_text(&text).unwrap(), i);
        assert!(MonomialIdeal::from_text("m 5 2\n0 1\n").is_err());
    }
}
