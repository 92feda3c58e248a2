//! The map from tilings to edge subsets of the grid graph `G`, cluster and
//! loop statistics, and grouping of tilings into cycle classes.
//!
//! `G` has vertices at the even black sublattice `(4i+2, 4j+2)` of the
//! domain, so it is an `m × n` grid of vertices. Each edge owns the interior
//! white vertex at its midpoint. Edges are numbered horizontal first
//! (row-major), then vertical (row-major).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genfun::{TilingWeightSummary, WeightSystem};
use crate::lattice::{validate_tiling, DomainSpec, Tiling, Vertex};
use crate::scalar::Scalar;
use crate::union_find::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeDirection {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridEdge {
    pub u: usize,
    pub v: usize,
    pub direction: EdgeDirection,
    /// Midpoint in domain coordinates; always an interior white vertex.
    pub midpoint: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridGraph {
    m: usize,
    n: usize,
    edges: Vec<GridEdge>,
}

impl GridGraph {
    /// `m` columns and `n` rows of vertices.
    pub fn new(m: usize, n: usize) -> Self {
        let mut edges = Vec::with_capacity(2 * m * n);
        for j in 0..n {
            for i in 0..m.saturating_sub(1) {
                edges.push(GridEdge {
                    u: j * m + i,
                    v: j * m + i + 1,
                    direction: EdgeDirection::Horizontal,
                    midpoint: Vertex::new(4 * i + 4, 4 * j + 2),
                });
            }
        }
        for j in 0..n.saturating_sub(1) {
            for i in 0..m {
                edges.push(GridEdge {
                    u: j * m + i,
                    v: (j + 1) * m + i,
                    direction: EdgeDirection::Vertical,
                    midpoint: Vertex::new(4 * i + 2, 4 * j + 4),
                });
            }
        }
        GridGraph { m, n, edges }
    }

    pub fn for_domain(d: &DomainSpec) -> Self {
        Self::new(d.m(), d.n())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.m * self.n
    }

    pub fn edges(&self) -> &[GridEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn horizontal_count(&self) -> usize {
        self.m.saturating_sub(1) * self.n
    }

    /// Position of vertex `(i, j)` in domain coordinates.
    pub fn vertex_position(&self, index: usize) -> Vertex {
        Vertex::new(4 * (index % self.m) + 2, 4 * (index / self.m) + 2)
    }

    /// Index of the edge whose midpoint is `w`, if any.
    pub fn edge_at(&self, w: Vertex) -> Option<usize> {
        let h = self.horizontal_count();
        if w.x % 4 == 0 && w.y % 4 == 2 && w.x >= 4 && w.x < 4 * self.m {
            let (i, j) = (w.x / 4 - 1, w.y / 4);
            (j < self.n).then_some(j * (self.m - 1) + i)
        } else if w.x % 4 == 2 && w.y % 4 == 0 && w.y >= 4 && w.y < 4 * self.n {
            let (i, j) = (w.x / 4, w.y / 4 - 1);
            (i < self.m).then_some(h + j * self.m + i)
        } else {
            None
        }
    }
}

/// A subset of the edges of a graph, as a bitset in canonical edge order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSubset {
    len: usize,
    words: Vec<u64>,
}

impl EdgeSubset {
    pub fn empty(len: usize) -> Self {
        EdgeSubset { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for e in 0..len {
            s.insert(e);
        }
        s
    }

    /// Subset from the low `len` bits of `mask`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= 64, "mask form supports at most 64 edges");
        let mut s = Self::empty(len);
        if len > 0 {
            s.words[0] = if len == 64 { mask } else { mask & ((1u64 << len) - 1) };
        }
        s
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(len);
        for e in indices {
            if e >= len {
                return Err(Error::Range(format!("edge {e} out of range 0..{len}")));
            }
            s.insert(e);
        }
        Ok(s)
    }

    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn contains(&self, e: usize) -> bool {
        e < self.len && self.words[e / 64] >> (e % 64) & 1 == 1
    }

    pub fn insert(&mut self, e: usize) {
        assert!(e < self.len, "edge {e} out of range");
        self.words[e / 64] |= 1 << (e % 64);
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&e| self.contains(e))
    }
}

impl fmt::Display for EdgeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in 0..self.len {
            f.write_str(if self.contains(e) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Component count `k`, loop count `ℓ` and `|A|` for a subset `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterStats {
    pub clusters: usize,
    pub loops: usize,
    pub edges: usize,
}

pub fn cluster_stats(g: &GridGraph, a: &EdgeSubset) -> ClusterStats {
    let mut uf = UnionFind::new(g.vertex_count());
    for e in a.iter() {
        let edge = g.edges[e];
        uf.union(edge.u, edge.v);
    }
    let clusters = uf.components();
    let edges = a.len();
    // ℓ = 2k + |A| − |V|
    let loops = 2 * clusters + edges - g.vertex_count();
    ClusterStats { clusters, loops, edges }
}

/// Counts the closed curves on the medial lattice of `g` that separate the
/// clusters of `A` from those of the dual, reflecting off the outer boundary.
///
/// Works in half-scale domain coordinates: white points `(u, v)` with `u + v`
/// odd are the medial vertices, and every unit square of the `2m × 2n` board
/// carries exactly one diagonal loop segment.
pub fn trace_medial_loops(g: &GridGraph, a: &EdgeSubset) -> usize {
    let (w, h) = (2 * g.m as i64, 2 * g.n as i64);
    let square = |u: i64, v: i64| (v * w + u) as usize;
    let mut visited = vec![false; (w * h) as usize];
    let mut loops = 0;
    let horizontal = g.horizontal_count() as i64;
    let m = g.m as i64;

    let turn = |u: i64, v: i64, du: i64, dv: i64| -> (i64, i64) {
        if u == 0 || u == w {
            return (-du, dv);
        }
        if v == 0 || v == h {
            return (du, -dv);
        }
        if u % 2 == 0 {
            // midpoint of a horizontal edge
            let e = (v - 1) / 2 * (m - 1) + (u - 2) / 2;
            if a.contains(e as usize) {
                (du, -dv)
            } else {
                (-du, dv)
            }
        } else {
            let e = horizontal + (v - 2) / 2 * m + (u - 1) / 2;
            if a.contains(e as usize) {
                (-du, dv)
            } else {
                (du, -dv)
            }
        }
    };

    for sv in 0..h {
        for su in 0..w {
            if visited[square(su, sv)] {
                continue;
            }
            loops += 1;
            // endpoints of this square's segment
            let (mut u, mut v, mut du, mut dv) =
                if (su + sv) % 2 == 1 { (su, sv, 1, 1) } else { (su + 1, sv, -1, 1) };
            loop {
                let s = square(u.min(u + du), v.min(v + dv));
                if visited[s] {
                    break;
                }
                visited[s] = true;
                u += du;
                v += dv;
                (du, dv) = turn(u, v, du, dv);
            }
        }
    }
    loops
}

/// The edge subset of a valid tiling: `e ∈ A` iff the two long sides meeting
/// at the midpoint of `e` are parallel to `e`.
pub fn edge_subset_of(t: &Tiling) -> Result<EdgeSubset> {
    let report = validate_tiling(t);
    if !report.is_valid() {
        return Err(Error::Validation(report.to_string()));
    }
    let g = GridGraph::for_domain(t.domain());
    let mut at_white: Vec<Vec<bool>> = vec![Vec::new(); g.edge_count()];
    for tile in t.tiles() {
        if let Some(e) = tile.white().and_then(|w| g.edge_at(w)) {
            at_white[e].push(tile.orientation().long_side_horizontal());
        }
    }
    let mut a = EdgeSubset::empty(g.edge_count());
    for (e, sides) in at_white.iter().enumerate() {
        let edge = g.edges[e];
        match sides.as_slice() {
            [x, y] if x == y => {
                if *x == (edge.direction == EdgeDirection::Horizontal) {
                    a.insert(e);
                }
            }
            _ => {
                return Err(Error::Validation(format!(
                    "white vertex {} is met by {} long sides with mixed or wrong multiplicity",
                    edge.midpoint,
                    sides.len()
                )))
            }
        }
    }
    Ok(a)
}

pub type ClassMap<S> = BTreeMap<EdgeSubset, Vec<TilingWeightSummary<S>>>;

/// Groups tilings by their edge subset.
pub fn class_partition<S: Scalar>(
    tilings: impl IntoIterator<Item = Tiling>,
    w: &WeightSystem<S>,
) -> Result<ClassMap<S>> {
    let mut classes: ClassMap<S> = BTreeMap::new();
    for t in tilings {
        let a = edge_subset_of(&t)?;
        classes.entry(a).or_default().push(w.summarize(&t)?);
    }
    Ok(classes)
}
