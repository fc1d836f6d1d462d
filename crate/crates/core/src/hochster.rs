//! Graded Betti numbers of `S / I(G)` by Hochster's formula:
//!
//! `beta_{i,j} = sum over |σ| = j of dim H~_{j-i-1}(Ind(G[σ]); GF(2))`
//!
//! where `Ind(G[σ])` is the independence complex of the induced subgraph.
//! Faces are vertex bitmasks, so graphs are limited to 64 vertices and in
//! practice to the configured cap (the subset loop is `2^|V|`).

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

pub const DEFAULT_HOCHSTER_CAP: usize = 18;

/// The independence complex of `G[σ]`, with faces generated on demand.
#[derive(Clone, Debug)]
pub struct RestrictedComplex<'a> {
    neighbors: &'a [u64],
    sigma: u64,
}

impl<'a> RestrictedComplex<'a> {
    /// `neighbors[v]` is the open-neighborhood bitmask of vertex `v`.
    pub fn new(neighbors: &'a [u64], sigma: u64) -> Self {
        RestrictedComplex { neighbors, sigma }
    }

    pub fn vertex_count(&self) -> usize {
        self.sigma.count_ones() as usize
    }

    /// Some vertex of σ has no neighbor in σ, so the complex is a cone over it.
    pub fn is_cone(&self) -> bool {
        bits(self.sigma).any(|v| self.neighbors[v] & self.sigma == 0)
    }

    /// Faces grouped by size: `out[s]` holds the faces with `s` vertices,
    /// sorted. `out[0] = [∅]`.
    pub fn faces_by_size(&self) -> Vec<Vec<u64>> {
        let mut out: Vec<Vec<u64>> = vec![Vec::new(); self.vertex_count() + 1];
        fn grow(face: u64, cand: u64, nbr: &[u64], out: &mut Vec<Vec<u64>>) {
            out[face.count_ones() as usize].push(face);
            let mut rest = cand;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                grow(face | 1 << v, rest & !nbr[v], nbr, out);
            }
        }
        grow(0, self.sigma, self.neighbors, &mut out);
        while out.len() > 1 && out.last().is_some_and(Vec::is_empty) {
            out.pop();
        }
        for layer in &mut out {
            layer.sort_unstable();
        }
        out
    }
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            v
        })
    })
}

/// Reduced homology ranks and face counts, both indexed by `dim + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyRanks {
    pub ranks: Vec<usize>,
    pub face_counts: Vec<usize>,
}

impl HomologyRanks {
    /// Rank of `H~_dim`; zero outside the computed range.
    pub fn rank(&self, dim: isize) -> usize {
        usize::try_from(dim + 1)
            .ok()
            .and_then(|i| self.ranks.get(i).copied())
            .unwrap_or(0)
    }

    /// Alternating face count equals alternating homology rank sum.
    pub fn euler_poincare_holds(&self) -> bool {
        let alt = |v: &[usize]| {
            v.iter()
                .enumerate()
                .map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) })
                .sum::<i64>()
        };
        self.face_counts.len() == self.ranks.len() && alt(&self.face_counts) == alt(&self.ranks)
    }
}

/// Rank over GF(2) of a 0/1 matrix given as rows of packed column bits.
fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let words = rows.first().map_or(0, Vec::len);
    let mut pivot_rows: Vec<Option<Vec<u64>>> = vec![None; words * 64];
    let mut rank = 0;
    for row in rows.iter_mut() {
        while let Some(lead) = row
            .iter()
            .position(|&w| w != 0)
            .map(|i| i * 64 + row[i].trailing_zeros() as usize)
        {
            match &pivot_rows[lead] {
                Some(p) => {
                    for (a, b) in row.iter_mut().zip(p) {
                        *a ^= b;
                    }
                }
                None => {
                    pivot_rows[lead] = Some(std::mem::take(row));
                    rank += 1;
                }
            }
        }
    }
    rank
}

/// Boundary map from faces with `s` vertices to faces with `s - 1`.
fn boundary_rank(upper: &[u64], lower: &[u64]) -> usize {
    if upper.is_empty() || lower.is_empty() {
        return 0;
    }
    let words = lower.len().div_ceil(64);
    let rows = upper
        .iter()
        .map(|&face| {
            let mut row = vec![0u64; words];
            for v in bits(face) {
                let col = lower
                    .binary_search(&(face & !(1 << v)))
                    .expect("subface of a face is a face");
                row[col / 64] |= 1 << (col % 64);
            }
            row
        })
        .collect();
    gf2_rank(rows)
}

/// Ranks of `H~_d` for `d = -1 ..= up_to_dim` over GF(2).
pub fn reduced_homology_ranks(c: &RestrictedComplex<'_>, up_to_dim: isize, cap: usize) -> Result<HomologyRanks> {
    if c.vertex_count() > cap {
        return Err(Error::ResourceCap {
            what: "restricted complex vertex count",
            size: c.vertex_count(),
            cap,
        });
    }
    let faces = c.faces_by_size();
    // Full range first so the Euler–Poincaré identity can be checked.
    let top = faces.len();
    let boundary: Vec<usize> = (0..=top)
        .map(|s| match s {
            0 => 0,
            s if s < top => boundary_rank(&faces[s], &faces[s - 1]),
            _ => 0,
        })
        .collect();
    let ranks: Vec<usize> = (0..top)
        .map(|s| faces[s].len() - boundary[s] - boundary[s + 1])
        .collect();
    let full = HomologyRanks {
        face_counts: faces.iter().map(Vec::len).collect(),
        ranks,
    };
    if !full.euler_poincare_holds() {
        return Err(Error::Inconsistent(format!(
            "Euler–Poincaré failed: faces {:?}, homology {:?}",
            full.face_counts, full.ranks
        )));
    }
    let keep = usize::try_from(up_to_dim + 2).unwrap_or(0);
    let mut out = full;
    out.ranks.resize(keep, 0);
    out.face_counts.resize(keep, 0);
    Ok(out)
}

/// Graded Betti numbers of a quotient `S / I`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    entries: BTreeMap<(usize, usize), u64>,
}

impl BettiTable {
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Nonzero entries `((i, j), beta)` sorted by `(i, j)`.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    fn add(&mut self, i: usize, j: usize, b: u64) {
        if b > 0 {
            *self.entries.entry((i, j)).or_default() += b;
        }
    }

    fn merge(mut self, other: BettiTable) -> Self {
        for ((i, j), b) in other.entries {
            self.add(i, j, b);
        }
        self
    }

    pub fn pdim(&self) -> usize {
        self.entries.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn reg(&self) -> usize {
        self.entries.keys().map(|&(i, j)| j - i).max().unwrap_or(0)
    }

    /// `beta_{0,0} = 1` and nothing else in homological degree 0.
    pub fn is_valid(&self) -> bool {
        self.get(0, 0) == 1 && self.entries.keys().filter(|&&(i, _)| i == 0).count() == 1
    }

    /// `i,j,beta` rows sorted by `(i, j)`, with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,beta\n");
        for ((i, j), b) in self.entries() {
            out.push_str(&format!("{i},{j},{b}\n"));
        }
        out
    }
}

/// Serialized as a list of `{i, j, beta}` objects.
impl Serialize for BettiTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            i: usize,
            j: usize,
            beta: u64,
        }
        s.collect_seq(self.entries().map(|((i, j), beta)| Entry { i, j, beta }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HochsterOptions {
    pub cap: usize,
    /// Skip subsets whose complex is a cone (they contribute nothing).
    pub prune_cones: bool,
}

impl Default for HochsterOptions {
    fn default() -> Self {
        HochsterOptions {
            cap: DEFAULT_HOCHSTER_CAP,
            prune_cones: true,
        }
    }
}

/// A Betti table together with how many complexes were evaluated; every
/// evaluation passed the Euler–Poincaré check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiRun {
    pub table: BettiTable,
    pub complexes_evaluated: u64,
}

pub fn betti_table(g: &SimpleGraph) -> Result<BettiTable> {
    betti_table_with(g, HochsterOptions::default()).map(|r| r.table)
}

pub fn betti_table_with(g: &SimpleGraph, opts: HochsterOptions) -> Result<BettiRun> {
    let nv = g.vertex_count();
    let cap = opts.cap.min(63);
    if nv > cap {
        return Err(Error::ResourceCap {
            what: "graph vertex count for Hochster's formula",
            size: nv,
            cap,
        });
    }
    let nbr = g.neighbor_masks().expect("checked against cap");
    let (table, complexes_evaluated) = (0u64..1 << nv)
        .into_par_iter()
        .try_fold(
            || (BettiTable::default(), 0u64),
            |(mut table, mut count), sigma| -> Result<_> {
                if sigma == 0 {
                    table.add(0, 0, 1);
                    return Ok((table, count));
                }
                let complex = RestrictedComplex::new(&nbr, sigma);
                if opts.prune_cones && complex.is_cone() {
                    return Ok((table, count));
                }
                let j = complex.vertex_count();
                let h = reduced_homology_ranks(&complex, j as isize - 1, cap)?;
                count += 1;
                // H~_d contributes to beta_{i,j} with i = j - d - 1.
                for (slot, &r) in h.ranks.iter().enumerate().take(j + 1) {
                    table.add(j - slot, j, r as u64);
                }
                Ok((table, count))
            },
        )
        .try_reduce(
            || (BettiTable::default(), 0),
            |(a, ca), (b, cb)| Ok((a.merge(b), ca + cb)),
        )?;
    Ok(BettiRun {
        table,
        complexes_evaluated,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HochsterInvariants {
    pub pdim: usize,
    pub reg: usize,
    pub depth: usize,
}

/// `pdim`, `reg`, and `depth = vertex_count - pdim`.
pub fn invariants_from_betti(t: &BettiTable, vertex_count: usize) -> Result<HochsterInvariants> {
    if !t.is_valid() {
        return Err(Error::Precondition(
            "Betti table must have beta_{0,0} = 1 only in degree 0".into(),
        ));
    }
    let pdim = t.pdim();
    let depth = vertex_count
        .checked_sub(pdim)
        .ok_or_else(|| Error::Precondition(format!("pdim {pdim} exceeds {vertex_count} variables")))?;
    Ok(HochsterInvariants {
        pdim,
        reg: t.reg(),
        depth,
    })
}
