//! Stanley depth of `S / I(G)` for small graphs.
//!
//! `sdepth >= d` holds exactly when the poset of independent sets can be
//! partitioned into intervals `[C, D]` with `|D| >= d`. Restricted to faces
//! of size at most `d`, such a partition can always be refined so every top
//! has size exactly `d`; the search works in that normal form and pads the
//! witness with singleton intervals for the remaining faces.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

pub const DEFAULT_SDEPTH_CAP: usize = 14;

/// All independent sets of a graph, sorted by `(size, lexicographic)`.
#[derive(Clone, Debug)]
pub struct FacePoset {
    vertex_count: usize,
    faces: Vec<u64>,
    index: HashMap<u64, usize>,
}

fn elements(mask: u64) -> Vec<usize> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

fn mask_of(vertices: &[usize]) -> u64 {
    vertices.iter().fold(0, |m, &v| m | 1 << v)
}

pub fn face_poset(g: &SimpleGraph, cap: usize) -> Result<FacePoset> {
    let nv = g.vertex_count();
    if nv > cap.min(63) {
        return Err(Error::ResourceCap {
            what: "face poset vertex count",
            size: nv,
            cap: cap.min(63),
        });
    }
    let neighbors = g.neighbor_masks().expect("checked against cap");
    let mut faces = Vec::new();
    fn grow(face: u64, cand: u64, nbr: &[u64], out: &mut Vec<u64>) {
        out.push(face);
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            grow(face | 1 << v, rest & !nbr[v], nbr, out);
        }
    }
    grow(0, (1u64 << nv) - 1, &neighbors, &mut faces);
    faces.sort_by_cached_key(|&f| (f.count_ones(), elements(f)));
    let index = faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    Ok(FacePoset {
        vertex_count: nv,
        faces,
        index,
    })
}

impl FacePoset {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn faces(&self) -> Vec<Vec<usize>> {
        self.faces.iter().map(|&f| elements(f)).collect()
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        face.iter().all(|&v| v < self.vertex_count) && self.index.contains_key(&mask_of(face))
    }

    /// Size of the largest face (the independence number).
    pub fn max_face_size(&self) -> usize {
        self.faces.last().map_or(0, |f| f.count_ones() as usize)
    }

    fn count_of_size(&self, s: usize) -> usize {
        self.faces.iter().filter(|f| f.count_ones() as usize == s).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub bottom: Vec<usize>,
    pub top: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct IntervalPartition {
    pub intervals: Vec<Interval>,
}

impl IntervalPartition {
    /// Smallest top size; the Stanley depth this partition witnesses.
    pub fn min_top(&self) -> usize {
        self.intervals.iter().map(|i| i.top.len()).min().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// Checks a partition directly: every interval lies in the poset, tops have
/// size at least `d`, and each face is covered exactly once.
pub fn check_partition(p: &FacePoset, part: &IntervalPartition, d: usize) -> Result<()> {
    let bad = |msg: String| Err(Error::Inconsistent(msg));
    let mut seen: HashSet<u64> = HashSet::new();
    for iv in &part.intervals {
        if !p.contains(&iv.top) || !p.contains(&iv.bottom) {
            return bad(format!("interval {iv:?} leaves the poset"));
        }
        let (bottom, top) = (mask_of(&iv.bottom), mask_of(&iv.top));
        if bottom & !top != 0 {
            return bad(format!("bottom not contained in top in {iv:?}"));
        }
        if iv.top.len() < d {
            return bad(format!("top of {iv:?} is smaller than {d}"));
        }
        let free = top & !bottom;
        let mut sub = free;
        loop {
            if !seen.insert(bottom | sub) {
                return bad(format!("face {:?} covered twice", elements(bottom | sub)));
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }
    if seen.len() != p.len() || p.faces.iter().any(|f| !seen.contains(f)) {
        return bad(format!("partition covers {} of {} faces", seen.len(), p.len()));
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Counting obstruction: in the normal form, the number of intervals with a
/// bottom of size `j` is forced by the face counts and must be nonnegative.
fn counts_admit(p: &FacePoset, d: usize) -> bool {
    let alpha: Vec<i128> = (0..=d).map(|s| p.count_of_size(s) as i128).collect();
    (0..=d).all(|j| {
        let beta: i128 = (0..=j)
            .map(|i| {
                let term = binomial(d - i, j - i) * alpha[i];
                if (j - i) % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum();
        beta >= 0
    })
}

/// Exact cover: faces of size `< d` must be covered once, faces of size `d`
/// at most once, and each row is an interval `[C, D]` with `|D| = d`.
struct Search {
    rows: Vec<(u64, u64, Vec<usize>)>,
    rows_of: Vec<Vec<usize>>,
    primary: usize,
    /// Number of covered columns in each row; a row is live at zero.
    blocked: Vec<u32>,
    /// Number of live rows through each column.
    live: Vec<u32>,
    covered: Vec<u64>,
    chosen: Vec<usize>,
    dead: HashSet<Vec<u64>>,
}

impl Search {
    fn new(p: &FacePoset, d: usize, primary: usize, columns: usize) -> Self {
        let mut rows = Vec::new();
        for &top in &p.faces[primary..columns] {
            let mut bottom = top;
            loop {
                bottom = (bottom.wrapping_sub(1)) & top;
                let free = top & !bottom;
                let mut cols = Vec::with_capacity(1 << free.count_ones());
                let mut sub = free;
                loop {
                    cols.push(p.index[&(bottom | sub)]);
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & free;
                }
                rows.push((bottom, top, cols));
                if bottom == 0 {
                    break;
                }
            }
        }
        debug_assert!(rows.iter().all(|r| r.1.count_ones() as usize == d));
        rows.sort_by_key(|r| std::cmp::Reverse(r.2.len()));
        let mut rows_of = vec![Vec::new(); columns];
        for (r, (_, _, cols)) in rows.iter().enumerate() {
            for &c in cols {
                rows_of[c].push(r);
            }
        }
        let live = rows_of.iter().map(|rs| rs.len() as u32).collect();
        Search {
            blocked: vec![0; rows.len()],
            rows,
            rows_of,
            primary,
            live,
            covered: vec![0; columns.div_ceil(64)],
            chosen: Vec::new(),
            dead: HashSet::new(),
        }
    }

    fn is_covered(&self, c: usize) -> bool {
        self.covered[c / 64] >> (c % 64) & 1 == 1
    }

    fn select(&mut self, r: usize) {
        for k in 0..self.rows[r].2.len() {
            let c = self.rows[r].2[k];
            self.covered[c / 64] |= 1 << (c % 64);
            for &r2 in &self.rows_of[c] {
                self.blocked[r2] += 1;
                if self.blocked[r2] == 1 {
                    for &c2 in &self.rows[r2].2 {
                        self.live[c2] -= 1;
                    }
                }
            }
        }
        self.chosen.push(r);
    }

    fn unselect(&mut self, r: usize) {
        self.chosen.pop();
        for k in (0..self.rows[r].2.len()).rev() {
            let c = self.rows[r].2[k];
            for &r2 in self.rows_of[c].iter().rev() {
                self.blocked[r2] -= 1;
                if self.blocked[r2] == 0 {
                    for &c2 in &self.rows[r2].2 {
                        self.live[c2] += 1;
                    }
                }
            }
            self.covered[c / 64] &= !(1 << (c % 64));
        }
    }

    fn run(&mut self) -> bool {
        let pick = (0..self.primary)
            .filter(|&c| !self.is_covered(c))
            .min_by_key(|&c| self.live[c]);
        let Some(col) = pick else {
            return true;
        };
        if self.live[col] == 0 || self.dead.contains(&self.covered) {
            return false;
        }
        let candidates: Vec<usize> = self.rows_of[col]
            .iter()
            .copied()
            .filter(|&r| self.blocked[r] == 0)
            .collect();
        for r in candidates {
            self.select(r);
            if self.run() {
                return true;
            }
            self.unselect(r);
        }
        self.dead.insert(self.covered.clone());
        false
    }
}

/// A partition with all tops of size at least `d`, or `None` when the
/// exhaustive search proves none exists.
pub fn sdepth_decision(p: &FacePoset, d: usize) -> Result<Option<IntervalPartition>> {
    if d > p.max_face_size() {
        return Err(Error::Precondition(format!(
            "d = {d} exceeds the largest face size {}",
            p.max_face_size()
        )));
    }
    if !counts_admit(p, d) {
        return Ok(None);
    }
    let low_end = p.faces.iter().take_while(|f| (f.count_ones() as usize) < d).count();
    let top_end = low_end + p.count_of_size(d);
    let mut s = Search::new(p, d, low_end, top_end);
    if !s.run() {
        return Ok(None);
    }
    let mut intervals: Vec<Interval> = s
        .chosen
        .iter()
        .map(|&r| Interval {
            bottom: elements(s.rows[r].0),
            top: elements(s.rows[r].1),
        })
        .collect();
    intervals.extend(
        (low_end..p.len())
            .filter(|&i| i >= top_end || !s.is_covered(i))
            .map(|i| Interval {
                bottom: elements(p.faces[i]),
                top: elements(p.faces[i]),
            }),
    );
    intervals.sort_by(|a, b| (a.bottom.len(), &a.bottom).cmp(&(b.bottom.len(), &b.bottom)));
    let part = IntervalPartition { intervals };
    check_partition(p, &part, d)?;
    Ok(Some(part))
}

/// Largest `d` admitting a partition, scanning down from the independence
/// number, together with its witness.
pub fn sdepth_with_witness(g: &SimpleGraph, cap: usize) -> Result<(usize, IntervalPartition)> {
    let p = face_poset(g, cap)?;
    for d in (0..=p.max_face_size()).rev() {
        if let Some(part) = sdepth_decision(&p, d)? {
            return Ok((d, part));
        }
    }
    unreachable!("d = 0 always admits the singleton partition")
}

pub fn sdepth_value(g: &SimpleGraph) -> Result<usize> {
    sdepth_with_witness(g, DEFAULT_SDEPTH_CAP).map(|(d, _)| d)
}
