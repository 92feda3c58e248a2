//! Multivariate Tutte polynomial `Z_G(Q, v) = Σ_{A⊆E} Q^{k(A)} Π_{e∈A} v_e`.
//!
//! Three engines: direct subset expansion, deletion–contraction, and a
//! connectivity-state transfer matrix for rectangular grids.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One};
use serde::{Deserialize, Serialize};

use crate::cycles::GridGraph;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Value};
use crate::union_find::UnionFind;

pub const MAX_SUBSET_EDGES: usize = 25;
pub const MAX_STRIP_WIDTH: usize = 10;

/// Undirected multigraph; loops and parallel edges allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    endpoints: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertex_count: usize, endpoints: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, v)) = endpoints.iter().find(|&&(u, v)| u >= vertex_count || v >= vertex_count) {
            return Err(Error::Range(format!("edge ({u},{v}) outside {vertex_count} vertices")));
        }
        Ok(Graph { vertex_count, endpoints })
    }

    pub fn grid(m: usize, n: usize) -> Self {
        let g = GridGraph::new(m, n);
        Graph { vertex_count: g.vertex_count(), endpoints: g.edges().iter().map(|e| (e.u, e.v)).collect() }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.endpoints.len()
    }

    pub fn endpoints(&self) -> &[(usize, usize)] {
        &self.endpoints
    }

    pub fn components(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count);
        for &(u, v) in &self.endpoints {
            uf.union(u, v);
        }
        uf.components()
    }

    pub fn with_weights<S: Scalar>(&self, weights: Vec<S>) -> Result<WeightedGraph<S>> {
        if weights.len() != self.endpoints.len() {
            return Err(Error::Range(format!(
                "{} weights for {} edges",
                weights.len(),
                self.endpoints.len()
            )));
        }
        Ok(WeightedGraph { graph: self.clone(), weights })
    }

    pub fn with_uniform<S: Scalar>(&self, v: S) -> WeightedGraph<S> {
        WeightedGraph { graph: self.clone(), weights: vec![v; self.endpoints.len()] }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph<S> {
    graph: Graph,
    weights: Vec<S>,
}

impl<S: Scalar> WeightedGraph<S> {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: S) -> Result<()> {
        if u >= self.graph.vertex_count || v >= self.graph.vertex_count {
            return Err(Error::Range(format!("edge ({u},{v}) outside {} vertices", self.graph.vertex_count)));
        }
        self.graph.endpoints.push((u, v));
        self.weights.push(w);
        Ok(())
    }

    /// Vertex-disjoint union, `other`'s vertices renumbered after ours.
    pub fn disjoint_union(&self, other: &WeightedGraph<S>) -> WeightedGraph<S> {
        let shift = self.graph.vertex_count;
        let mut endpoints = self.graph.endpoints.clone();
        endpoints.extend(other.graph.endpoints.iter().map(|&(u, v)| (u + shift, v + shift)));
        let mut weights = self.weights.clone();
        weights.extend(other.weights.iter().cloned());
        WeightedGraph { graph: Graph { vertex_count: shift + other.graph.vertex_count, endpoints }, weights }
    }

    pub fn to_record(&self) -> GraphRecord {
        GraphRecord {
            vertices: self.graph.vertex_count,
            edges: self
                .graph
                .endpoints
                .iter()
                .zip(&self.weights)
                .map(|(&(u, v), w)| (u, v, w.to_value()))
                .collect(),
        }
    }

    pub fn from_record(r: &GraphRecord) -> Result<Self> {
        let graph = Graph::new(r.vertices, r.edges.iter().map(|(u, v, _)| (*u, *v)).collect())?;
        let weights = r.edges.iter().map(|(_, _, w)| S::from_value(w)).collect::<Result<Vec<_>>>()?;
        graph.with_weights(weights)
    }
}

/// Wire form: `{"vertices":k, "edges":[[u,v,"p/q"],...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub vertices: usize,
    pub edges: Vec<(usize, usize, Value)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EdgeWeights<S> {
    Uniform(S),
    /// One weight per grid edge, in canonical edge order.
    PerEdge(Vec<S>),
}

/// A point `(Q, v)` for a grid graph.
#[derive(Debug, Clone, PartialEq)]
pub struct PottsPoint<S> {
    pub q: S,
    pub v: EdgeWeights<S>,
}

impl<S: Scalar> PottsPoint<S> {
    pub fn uniform(q: S, v: S) -> Self {
        PottsPoint { q, v: EdgeWeights::Uniform(v) }
    }

    pub fn per_edge(q: S, v: Vec<S>) -> Self {
        PottsPoint { q, v: EdgeWeights::PerEdge(v) }
    }

    pub fn edge_weights(&self, edge_count: usize) -> Result<Vec<S>> {
        match &self.v {
            EdgeWeights::Uniform(v) => Ok(vec![v.clone(); edge_count]),
            EdgeWeights::PerEdge(vs) if vs.len() == edge_count => Ok(vs.clone()),
            EdgeWeights::PerEdge(vs) => {
                Err(Error::Range(format!("{} edge weights for {edge_count} edges", vs.len())))
            }
        }
    }

    pub fn on_grid(&self, m: usize, n: usize) -> Result<WeightedGraph<S>> {
        let g = Graph::grid(m, n);
        let w = self.edge_weights(g.edge_count())?;
        g.with_weights(w)
    }
}

/// Direct expansion over all `2^|E|` subsets.
pub fn z_subset<S: Scalar>(g: &WeightedGraph<S>, q: &S) -> Result<S> {
    let edges = g.graph.edge_count();
    if edges > MAX_SUBSET_EDGES {
        return Err(Error::Budget(format!("subset expansion over {edges} edges (max {MAX_SUBSET_EDGES})")));
    }
    let n = g.graph.vertex_count;
    // Σ over subsets of Π v_e, bucketed by component count
    let mut by_k = vec![S::zero(); n + 1];
    let mut uf = UnionFind::new(n);
    expand(g, 0, S::one(), &mut uf, &mut by_k);
    let mut total = S::zero();
    let mut qk = S::one();
    for bucket in by_k {
        total = total + qk.clone() * bucket;
        qk = qk * q.clone();
    }
    Ok(total)
}

fn expand<S: Scalar>(g: &WeightedGraph<S>, e: usize, product: S, uf: &mut UnionFind, by_k: &mut [S]) {
    if e == g.weights.len() {
        let k = uf.components();
        by_k[k] = std::mem::replace(&mut by_k[k], S::zero()) + product;
        return;
    }
    expand(g, e + 1, product.clone(), uf, by_k);
    let (u, v) = g.graph.endpoints[e];
    uf.union(u, v);
    expand(g, e + 1, product * g.weights[e].clone(), uf, by_k);
    uf.undo();
}

/// Deletion–contraction on the last edge, `Z_G = Z_{G−e} + v_e Z_{G/e}`.
pub fn z_delcon<S: Scalar>(g: &WeightedGraph<S>, q: &S) -> S {
    let edges: Vec<(usize, usize, S)> = g
        .graph
        .endpoints
        .iter()
        .zip(&g.weights)
        .map(|(&(u, v), w)| (u, v, w.clone()))
        .collect();
    delcon(g.graph.vertex_count, edges, q)
}

fn delcon<S: Scalar>(vertices: usize, mut edges: Vec<(usize, usize, S)>, q: &S) -> S {
    let Some((u, v, w)) = edges.pop() else {
        return q.pow(vertices as u64);
    };
    if u == v {
        return (S::one() + w) * delcon(vertices, edges, q);
    }
    // merge v into u, then move the last vertex into v's slot
    let last = vertices - 1;
    let relabel = |x: usize| {
        let x = if x == v { u } else { x };
        if x == last {
            v
        } else {
            x
        }
    };
    let relabel_u = relabel(u);
    let contracted: Vec<_> = edges.iter().map(|(a, b, c)| (relabel(*a), relabel(*b), c.clone())).collect();
    debug_assert!(relabel_u < last);
    let deleted = delcon(vertices, edges, q);
    deleted + w * delcon(last, contracted, q)
}

/// Connectivity states of the frontier row of a strip, keyed by
/// restricted-growth strings. Planarity keeps every reachable key a
/// non-crossing partition.
#[derive(Debug, Clone)]
pub(crate) struct StripTransfer<S> {
    width: usize,
    q: S,
    states: BTreeMap<Vec<u8>, S>,
}

fn canonical(labels: &mut [u8]) {
    let mut map = [u8::MAX; 256];
    let mut next = 0u8;
    for l in labels.iter_mut() {
        if map[*l as usize] == u8::MAX {
            map[*l as usize] = next;
            next += 1;
        }
        *l = map[*l as usize];
    }
}

impl<S: Scalar> StripTransfer<S> {
    /// Starts with the first row: isolated sites joined by its horizontal edges.
    pub(crate) fn new(width: usize, q: S, horizontal: impl Fn(usize) -> S) -> Result<Self> {
        if width == 0 || width > MAX_STRIP_WIDTH {
            return Err(Error::Budget(format!("strip width {width} (max {MAX_STRIP_WIDTH})")));
        }
        let mut states = BTreeMap::new();
        states.insert((0..width as u8).collect::<Vec<_>>(), S::one());
        let mut t = StripTransfer { width, q, states };
        t.join_row(horizontal);
        Ok(t)
    }

    fn join_row(&mut self, horizontal: impl Fn(usize) -> S) {
        for i in 0..self.width.saturating_sub(1) {
            let v = horizontal(i);
            let mut next: BTreeMap<Vec<u8>, S> = BTreeMap::new();
            for (s, w) in std::mem::take(&mut self.states) {
                let (a, b) = (s[i], s[i + 1]);
                let mut joined = s.clone();
                for l in joined.iter_mut() {
                    if *l == b {
                        *l = a;
                    }
                }
                canonical(&mut joined);
                add(&mut next, s, w.clone());
                add(&mut next, joined, w * v.clone());
            }
            self.states = next;
        }
    }

    /// Appends a row: vertical edges from the frontier, then the new row's
    /// horizontal edges.
    pub(crate) fn add_row(&mut self, vertical: impl Fn(usize) -> S, horizontal: impl Fn(usize) -> S) {
        for i in 0..self.width {
            let v = vertical(i);
            let mut next: BTreeMap<Vec<u8>, S> = BTreeMap::new();
            for (s, w) in std::mem::take(&mut self.states) {
                let old = s[i];
                let closes = s.iter().enumerate().all(|(k, &l)| k == i || l != old);
                let mut cut = s.clone();
                cut[i] = u8::MAX;
                canonical(&mut cut);
                let cut_weight = if closes { w.clone() * self.q.clone() } else { w.clone() };
                add(&mut next, s, w * v.clone());
                add(&mut next, cut, cut_weight);
            }
            self.states = next;
        }
        self.join_row(horizontal);
    }

    pub(crate) fn states_mut(&mut self) -> impl Iterator<Item = &mut S> {
        self.states.values_mut()
    }

    pub(crate) fn finish(&self) -> S {
        self.states.iter().fold(S::zero(), |acc, (s, w)| {
            let clusters = s.iter().copied().max().map_or(0, |l| l as u64 + 1);
            acc + w.clone() * self.q.pow(clusters)
        })
    }
}

fn add<S: Scalar>(map: &mut BTreeMap<Vec<u8>, S>, key: Vec<u8>, w: S) {
    match map.get_mut(&key) {
        Some(slot) => *slot = std::mem::replace(slot, S::zero()) + w,
        None => {
            map.insert(key, w);
        }
    }
}

/// Edge weights of an `m × n` grid seen as a strip of `width` sites swept
/// over `rows` rows; transposes when `m > n` so the narrower side is the
/// frontier.
pub(crate) struct StripLayout<'a, S> {
    pub(crate) width: usize,
    pub(crate) rows: usize,
    m: usize,
    horizontal_count: usize,
    transposed: bool,
    weights: &'a [S],
}

impl<'a, S: Scalar> StripLayout<'a, S> {
    pub(crate) fn new(m: usize, n: usize, weights: &'a [S]) -> Self {
        let transposed = m > n;
        let (width, rows) = if transposed { (n, m) } else { (m, n) };
        StripLayout { width, rows, m, horizontal_count: m.saturating_sub(1) * n, transposed, weights }
    }

    /// Edge between sites `i` and `i+1` of row `r`.
    pub(crate) fn horizontal(&self, r: usize, i: usize) -> S {
        let idx = if self.transposed {
            self.horizontal_count + i * self.m + r
        } else {
            r * (self.m - 1) + i
        };
        self.weights[idx].clone()
    }

    /// Edge from site `i` of row `r` to row `r+1`.
    pub(crate) fn vertical(&self, r: usize, i: usize) -> S {
        let idx = if self.transposed {
            i * (self.m - 1) + r
        } else {
            self.horizontal_count + r * self.m + i
        };
        self.weights[idx].clone()
    }
}

/// Transfer-matrix evaluation on the `m × n` grid graph.
pub fn z_transfer<S: Scalar>(m: usize, n: usize, p: &PottsPoint<S>) -> Result<S> {
    if m == 0 || n == 0 {
        return Err(Error::Range("grid needs m, n >= 1".into()));
    }
    let weights = p.edge_weights(GridGraph::new(m, n).edge_count())?;
    let layout = StripLayout::new(m, n, &weights);
    let mut strip = StripTransfer::new(layout.width, p.q.clone(), |i| layout.horizontal(0, i))?;
    for r in 1..layout.rows {
        strip.add_row(|i| layout.vertical(r - 1, i), |i| layout.horizontal(r, i));
    }
    Ok(strip.finish())
}

/// Picks the cheapest engine that fits the budgets.
pub fn z_auto<S: Scalar>(g: &WeightedGraph<S>, q: &S) -> S {
    if g.graph.edge_count() <= MAX_SUBSET_EDGES {
        z_subset(g, q).expect("within subset budget")
    } else {
        z_delcon(g, q)
    }
}

/// Two-variable Tutte polynomial `T_G(x, y)` via
/// `Z_G(Q, v) = (x−1)^{k(G)} (y−1)^{|V|} T_G(x, y)`, `Q = (x−1)(y−1)`, `v = y−1`.
pub fn tutte_classical<S: Scalar>(g: &Graph, x: &S, y: &S) -> Result<S> {
    let (xm, ym) = classical_shift(x, y)?;
    let weighted = g.with_uniform(ym.clone());
    let z = z_auto(&weighted, &(xm.clone() * ym.clone()));
    Ok(z / (xm.pow(g.components() as u64) * ym.pow(g.vertex_count as u64)))
}

/// [`tutte_classical`] on the `m × n` grid, using the transfer matrix.
pub fn tutte_classical_grid<S: Scalar>(m: usize, n: usize, x: &S, y: &S) -> Result<S> {
    let (xm, ym) = classical_shift(x, y)?;
    let z = z_transfer(m, n, &PottsPoint::uniform(xm.clone() * ym.clone(), ym.clone()))?;
    Ok(z / (xm * ym.pow((m * n) as u64)))
}

fn classical_shift<S: Scalar>(x: &S, y: &S) -> Result<(S, S)> {
    let xm = x.clone() - S::one();
    let ym = y.clone() - S::one();
    if xm.is_zero() || ym.is_zero() {
        return Err(Error::Domain("x = 1 or y = 1 is not supported".into()));
    }
    Ok((xm, ym))
}

/// `2 · T_G(3, 3)` on the `m × n` grid.
pub fn korn_pak_count(m: usize, n: usize) -> Result<BigInt> {
    let three = BigRational::from_integer(3.into());
    let t = tutte_classical_grid(m, n, &three, &three)?;
    if !t.denom().is_one() {
        return Err(Error::Domain(format!("T_G(3,3) = {t} is not an integer")));
    }
    Ok(t.numer() * 2)
}
