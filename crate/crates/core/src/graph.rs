//! Simple graphs, the two leveled tree families, and forest canonical forms.
//!
//! Vertex ids are dense `0..vertex_count`. Tree vertices are numbered
//! level-major, index-minor, so the label `x_i^(a)` maps to an id by pure
//! arithmetic (see [`LeveledTree::id_of`]).

use std::collections::VecDeque;
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};

/// Upper bound on generated tree sizes; keeps memory bounded for sweeps.
pub const MAX_TREE_VERTICES: u128 = 1 << 26;

/// The `(level, index)` name of a tree vertex; `index` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexLabel {
    pub level: usize,
    pub index: usize,
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x_{}^({})", self.index, self.level)
    }
}

/// Undirected simple graph with sorted edge list and CSR adjacency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    adjacency: Vec<usize>,
    labels: Option<Vec<VertexLabel>>,
}

impl SimpleGraph {
    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) are merged; loops and out-of-range endpoints are errors.
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: w,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u, v));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_sorted_edges(vertex_count, list))
    }

    /// `edges` must be sorted, deduplicated and oriented `u < v`.
    fn from_sorted_edges(vertex_count: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut degree = vec![0usize; vertex_count];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(vertex_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..vertex_count].to_vec();
        let mut adjacency = vec![0usize; 2 * edges.len()];
        for &(u, v) in &edges {
            adjacency[fill[u]] = v;
            fill[u] += 1;
            adjacency[fill[v]] = u;
            fill[v] += 1;
        }
        for v in 0..vertex_count {
            adjacency[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        SimpleGraph {
            vertex_count,
            edges,
            offsets,
            adjacency,
            labels: None,
        }
    }

    pub fn empty(vertex_count: usize) -> Self {
        Self::from_sorted_edges(vertex_count, Vec::new())
    }

    /// Path `P_m` on `m` vertices `0 - 1 - ... - (m-1)`.
    pub fn path(m: usize) -> Self {
        Self::from_sorted_edges(m, (1..m).map(|v| (v - 1, v)).collect())
    }

    /// The `m`-star: center `0` joined to `m - 1` leaves.
    pub fn star(m: usize) -> Self {
        Self::from_sorted_edges(m, (1..m).map(|v| (0, v)).collect())
    }

    pub fn cycle(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::domain(format!("cycle needs at least 3 vertices, got {m}")));
        }
        Self::new(m, (0..m).map(|v| (v, (v + 1) % m)))
    }

    /// Attaches a label per vertex; labels must be pairwise distinct.
    pub fn with_labels(mut self, labels: Vec<VertexLabel>) -> Result<Self> {
        if labels.len() != self.vertex_count {
            return Err(Error::Precondition(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.vertex_count
            )));
        }
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Precondition("duplicate vertex label".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count && v < self.vertex_count && self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn labels(&self) -> Option<&[VertexLabel]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> Option<VertexLabel> {
        self.labels.as_ref().map(|l| l[v])
    }

    /// Returns a copy with one extra isolated vertex (id `vertex_count`).
    pub fn with_isolated_vertex(&self) -> Self {
        Self::from_sorted_edges(self.vertex_count + 1, self.edges.clone())
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertex_count];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..self.vertex_count {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.components().len() == self.vertex_count
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Closed neighborhood bitmasks, for graphs with at most 64 vertices.
    pub fn neighbor_masks(&self) -> Option<Vec<u64>> {
        if self.vertex_count > 64 {
            return None;
        }
        Some(
            (0..self.vertex_count)
                .map(|v| self.neighbors(v).iter().fold(0u64, |m, &w| m | (1 << w)))
                .collect(),
        )
    }

    /// Line-oriented export: `p V E`, then `e u v` per edge, then `l v level index`.
    pub fn to_text(&self) -> String {
        let mut out = format!("p {} {}\n", self.vertex_count, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("e {u} {v}\n"));
        }
        if let Some(labels) = &self.labels {
            for (v, l) in labels.iter().enumerate() {
                out.push_str(&format!("l {v} {} {}\n", l.level, l.index));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let parse_err = |line: usize, message: String| Error::Parse { line, message };
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        let mut labels: Vec<(usize, VertexLabel)> = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line_no = no + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let tag = fields.next().unwrap();
            let nums = fields
                .map(|f| f.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| parse_err(line_no, e.to_string()))?;
            match (tag, nums.as_slice(), header) {
                ("p", &[v, e], None) => header = Some((v, e)),
                ("p", _, Some(_)) => return Err(parse_err(line_no, "duplicate header".into())),
                (_, _, None) => return Err(parse_err(line_no, "missing `p` header".into())),
                ("e", &[u, v], Some(_)) => edges.push((u, v)),
                ("l", &[v, level, index], Some(_)) => labels.push((v, VertexLabel { level, index })),
                _ => return Err(parse_err(line_no, format!("malformed line `{line}`"))),
            }
        }
        let (vertex_count, edge_count) = header.ok_or_else(|| parse_err(0, "empty input".into()))?;
        let g = SimpleGraph::new(vertex_count, edges)?;
        if g.edge_count() != edge_count {
            return Err(parse_err(
                0,
                format!("header declares {edge_count} edges, found {}", g.edge_count()),
            ));
        }
        if labels.is_empty() {
            return Ok(g);
        }
        if labels.len() != vertex_count {
            return Err(parse_err(
                0,
                format!("{} labels for {vertex_count} vertices", labels.len()),
            ));
        }
        labels.sort_unstable();
        if labels.iter().enumerate().any(|(i, (v, _))| *v != i) {
            return Err(parse_err(0, "label lines must cover each vertex once".into()));
        }
        g.with_labels(labels.into_iter().map(|(_, l)| l).collect())
    }
}

/// Which of the two tree families a [`LeveledTree`] belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `T(n, k)`: every internal vertex has degree `n`.
    Full,
    /// `T'(n, k)`: root of degree `n - 1`, other internal vertices of degree `n`.
    Ary,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Full => "full",
            Family::Ary => "ary",
        }
    }

    /// Number of vertices at distance `level` from the root.
    pub fn level_size(self, n: usize, level: usize) -> Option<u128> {
        let branching = (n as u128).checked_sub(1)?;
        let pow = |e: usize| checked_pow(branching, e);
        match (self, level) {
            (_, 0) => Some(1),
            (Family::Full, a) => pow(a - 1)?.checked_mul(n as u128),
            (Family::Ary, a) => pow(a),
        }
    }

    /// Total vertex count by summing level sizes.
    pub fn vertex_count(self, n: usize, k: usize) -> Option<u128> {
        (0..=k).try_fold(0u128, |acc, a| acc.checked_add(self.level_size(n, a)?))
    }

    /// Smallest `n` for which the family is defined.
    pub fn min_degree_parameter(self) -> usize {
        match self {
            Family::Full => 2,
            Family::Ary => 3,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "full" | "t" => Ok(Family::Full),
            "ary" | "t'" | "tprime" => Ok(Family::Ary),
            other => Err(Error::domain(format!(
                "unknown family `{other}` (expected full or ary)"
            ))),
        }
    }
}

fn checked_pow(base: u128, exp: usize) -> Option<u128> {
    (0..exp).try_fold(1u128, |acc, _| acc.checked_mul(base))
}

/// A tree from one of the two families, with its level partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeveledTree {
    family: Family,
    n: usize,
    k: usize,
    graph: SimpleGraph,
    levels: Vec<Range<usize>>,
}

/// Builds `T(n, k)`. `n = 2` gives the path on `2k + 1` vertices.
pub fn build_full_tree(n: usize, k: usize) -> Result<LeveledTree> {
    LeveledTree::build(Family::Full, n, k)
}

/// Builds `T'(n, k)`, the perfect `(n - 1)`-ary tree of height `k`.
pub fn build_ary_tree(n: usize, k: usize) -> Result<LeveledTree> {
    LeveledTree::build(Family::Ary, n, k)
}

impl LeveledTree {
    pub fn build(family: Family, n: usize, k: usize) -> Result<Self> {
        let min_n = family.min_degree_parameter();
        if n < min_n {
            return Err(Error::domain(format!("{family} trees need n >= {min_n}, got n = {n}")));
        }
        let total = family
            .vertex_count(n, k)
            .filter(|&t| t <= MAX_TREE_VERTICES)
            .ok_or(Error::ResourceCap {
                what: "tree vertex count",
                size: usize::MAX,
                cap: MAX_TREE_VERTICES as usize,
            })? as usize;

        let mut levels = Vec::with_capacity(k + 1);
        let mut start = 0usize;
        for a in 0..=k {
            let size = family.level_size(n, a).unwrap() as usize;
            levels.push(start..start + size);
            start += size;
        }
        debug_assert_eq!(start, total);

        // Child window of x_i^(a): j in [(n-1)i - (n-2), (n-1)i], except the
        // FULL root whose children are all of L_1.
        let mut edges = Vec::with_capacity(total.saturating_sub(1));
        for a in 0..k {
            let parents = levels[a].clone();
            let children = levels[a + 1].clone();
            for (offset, parent) in parents.enumerate() {
                let i = offset + 1;
                let window = if family == Family::Full && a == 0 {
                    1..=n
                } else {
                    (n - 1) * i - (n - 2)..=(n - 1) * i
                };
                for j in window {
                    edges.push((parent, children.start + j - 1));
                }
            }
        }
        edges.sort_unstable();

        let labels = levels
            .iter()
            .enumerate()
            .flat_map(|(level, r)| (1..=r.len()).map(move |index| VertexLabel { level, index }))
            .collect();
        let graph = SimpleGraph::from_sorted_edges(total, edges).with_labels(labels)?;
        Ok(LeveledTree {
            family,
            n,
            k,
            graph,
            levels,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn into_graph(self) -> SimpleGraph {
        self.graph
    }

    pub fn root(&self) -> usize {
        0
    }

    /// Vertex ids of each level `L_0 ..= L_k`; ids are contiguous per level.
    pub fn levels(&self) -> &[Range<usize>] {
        &self.levels
    }

    /// Id of `x_index^(level)`, with 1-based `index`.
    pub fn id_of(&self, level: usize, index: usize) -> Option<usize> {
        let r = self.levels.get(level)?;
        (index >= 1 && index <= r.len()).then(|| r.start + index - 1)
    }

    pub fn label(&self, id: usize) -> Option<VertexLabel> {
        (id < self.graph.vertex_count()).then(|| self.graph.label(id).unwrap())
    }
}

/// Ids (in `T(n, k)`) of the vertex set whose induced subgraph is `T'(n, k)`:
/// the first `(n - 1)^a` vertices of each level `a`.
pub fn ary_vertex_set_in_full(full: &LeveledTree) -> Vec<usize> {
    let n = full.n();
    full.levels()
        .iter()
        .enumerate()
        .flat_map(|(a, r)| {
            let take = Family::Ary.level_size(n, a).unwrap() as usize;
            r.start..r.start + take.min(r.len())
        })
        .collect()
}

/// Subgraph induced on `vertices`, re-indexed densely in increasing id order.
/// Labels are restricted along with the vertices.
pub fn induced_subgraph(g: &SimpleGraph, vertices: &[usize]) -> Result<SimpleGraph> {
    let mut keep = vertices.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if let Some(&bad) = keep.iter().find(|&&v| v >= g.vertex_count()) {
        return Err(Error::VertexOutOfRange {
            vertex: bad,
            vertex_count: g.vertex_count(),
        });
    }
    let mut new_id = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in keep.iter().enumerate() {
        new_id[v] = i;
    }
    let edges: Vec<_> = g
        .edges()
        .iter()
        .filter(|&&(u, v)| new_id[u] != usize::MAX && new_id[v] != usize::MAX)
        .map(|&(u, v)| (new_id[u], new_id[v]))
        .collect();
    // Monotone relabeling keeps the list sorted.
    let h = SimpleGraph::from_sorted_edges(keep.len(), edges);
    match g.labels() {
        Some(labels) => h.with_labels(keep.iter().map(|&v| labels[v]).collect()),
        None => Ok(h),
    }
}

/// Disjoint union with per-part id offsets. Labels are dropped since they
/// would repeat across parts.
pub fn disjoint_union(parts: &[SimpleGraph]) -> SimpleGraph {
    let mut offset = 0;
    let mut edges = Vec::with_capacity(parts.iter().map(|p| p.edge_count()).sum());
    for p in parts {
        edges.extend(p.edges().iter().map(|&(u, v)| (u + offset, v + offset)));
        offset += p.vertex_count();
    }
    SimpleGraph::from_sorted_edges(offset, edges)
}

/// Isomorphism-invariant encoding of a forest.
///
/// Each component is rooted at its center (both centers are tried for
/// bicentral trees and the smaller encoding kept) and encoded AHU-style as
/// nested parentheses with children sorted. Component encodings are sorted
/// and concatenated.
pub fn canonical_form(g: &SimpleGraph) -> Result<Vec<u8>> {
    if !g.is_forest() {
        return Err(Error::NotAForest);
    }
    let mut codes: Vec<Vec<u8>> = g
        .components()
        .iter()
        .map(|comp| {
            tree_centers(g, comp)
                .into_iter()
                .map(|c| rooted_code(g, c))
                .min()
                .unwrap()
        })
        .collect();
    codes.sort_unstable();
    Ok(codes.concat())
}

fn tree_centers(g: &SimpleGraph, comp: &[usize]) -> Vec<usize> {
    if comp.len() <= 2 {
        return comp.to_vec();
    }
    let mut degree: Vec<(usize, usize)> = comp.iter().map(|&v| (v, g.degree(v))).collect();
    let index = |v: usize| comp.binary_search(&v).unwrap();
    let mut remaining = comp.len();
    let mut layer: Vec<usize> = comp.iter().copied().filter(|&v| g.degree(v) <= 1).collect();
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            for &w in g.neighbors(leaf) {
                let slot = &mut degree[index(w)].1;
                if *slot > 1 {
                    *slot -= 1;
                    if *slot == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

fn rooted_code(g: &SimpleGraph, root: usize) -> Vec<u8> {
    // Iterative DFS preorder, then fold codes bottom-up.
    let mut order = Vec::new();
    let mut parent = std::collections::HashMap::new();
    parent.insert(root, usize::MAX);
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in g.neighbors(v) {
            if parent[&v] != w {
                parent.insert(w, v);
                stack.push(w);
            }
        }
    }
    let mut child_codes: std::collections::HashMap<usize, Vec<Vec<u8>>> = Default::default();
    let mut root_code = Vec::new();
    for &v in order.iter().rev() {
        let mut kids = child_codes.remove(&v).unwrap_or_default();
        kids.sort_unstable();
        let mut code = Vec::with_capacity(2 + kids.iter().map(Vec::len).sum::<usize>());
        code.push(b'(');
        for k in kids {
            code.extend(k);
        }
        code.push(b')');
        match parent[&v] {
            usize::MAX => root_code = code,
            p => child_codes.entry(p).or_default().push(code),
        }
    }
    root_code
}
