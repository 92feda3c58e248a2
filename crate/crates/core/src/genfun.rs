//! Weight systems and evaluation of the tiling generating function
//! `F = Σ_T Π_t a_{o(t)}^{w(t)} · b₁^{B₁} b₂^{B₂}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::enumerate::{enumerate_tilings, EnumerationConfig};
use crate::error::{Error, Result};
use crate::lattice::{DomainSpec, Orientation, Tile, Tiling, Vertex};
use crate::scalar::{Scalar, Value};

/// Which b-type receives `q^{+1/4}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Chirality {
    #[default]
    Standard,
    Flipped,
}

/// Per-(orientation, white vertex) `a` weights and the global `b₁`, `b₂`.
///
/// Unset `a` weights are 1. Weights on boundary white vertices are pinned to
/// 1 and cannot be set.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSystem<S> {
    domain: DomainSpec,
    a: BTreeMap<(Orientation, Vertex), S>,
    b1: S,
    b2: S,
}

impl<S: Scalar> WeightSystem<S> {
    pub fn ones(domain: DomainSpec) -> Self {
        WeightSystem { domain, a: BTreeMap::new(), b1: S::one(), b2: S::one() }
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn set_a(&mut self, o: Orientation, w: Vertex, value: S) -> Result<()> {
        if !self.domain.classify(w)?.is_white() {
            return Err(Error::Range(format!("{w} is not a white vertex")));
        }
        if self.domain.on_boundary(w) {
            return Err(Error::BoundaryWeight { x: w.x, y: w.y });
        }
        self.a.insert((o, w), value);
        Ok(())
    }

    pub fn a(&self, o: Orientation, w: Vertex) -> S {
        self.a.get(&(o, w)).cloned().unwrap_or_else(S::one)
    }

    pub fn set_b(&mut self, b1: S, b2: S) {
        self.b1 = b1;
        self.b2 = b2;
    }

    pub fn b1(&self) -> &S {
        &self.b1
    }

    pub fn b2(&self) -> &S {
        &self.b2
    }

    /// Per interior white vertex: `(a₁a₃, a₂a₄)`.
    pub fn reduced_a_products(&self) -> BTreeMap<Vertex, (S, S)> {
        self.domain
            .interior_white_vertices()
            .into_iter()
            .map(|w| {
                let horizontal = self.a(Orientation::Up, w) * self.a(Orientation::Down, w);
                let vertical = self.a(Orientation::Right, w) * self.a(Orientation::Left, w);
                (w, (horizontal, vertical))
            })
            .collect()
    }

    fn tile_weight(&self, t: &Tile) -> Result<S> {
        let w = t
            .white()
            .ok_or_else(|| Error::Validation(format!("tile at {} covers no unique white vertex", t.anchor())))?;
        Ok(self.a(t.orientation(), w))
    }

    pub fn summarize(&self, tiling: &Tiling) -> Result<TilingWeightSummary<S>> {
        if tiling.domain() != &self.domain {
            return Err(Error::Domain(format!(
                "weights for {} applied to a tiling of {}",
                self.domain,
                tiling.domain()
            )));
        }
        let mut a_product = S::one();
        for t in tiling.tiles() {
            a_product = a_product * self.tile_weight(t)?;
        }
        let (b1, b2) = tiling.b_counts();
        Ok(TilingWeightSummary { a_product, b1, b2 })
    }

    /// `b₁^{B₁} b₂^{B₂}`.
    pub fn b_weight(&self, b1_count: usize, b2_count: usize) -> S {
        self.b1.pow(b1_count as u64) * self.b2.pow(b2_count as u64)
    }

    pub fn to_record(&self) -> WeightSystemRecord {
        WeightSystemRecord {
            a: self
                .a
                .iter()
                .map(|(&(o, w), v)| AWeightRecord { o: o.number(), w: [w.x, w.y], value: v.to_value() })
                .collect(),
            b1: self.b1.to_value(),
            b2: self.b2.to_value(),
        }
    }

    pub fn from_record(domain: DomainSpec, r: &WeightSystemRecord) -> Result<Self> {
        let mut ws = WeightSystem::ones(domain);
        for entry in &r.a {
            let o = Orientation::from_number(entry.o)?;
            ws.set_a(o, Vertex::new(entry.w[0], entry.w[1]), S::from_value(&entry.value)?)?;
        }
        ws.set_b(S::from_value(&r.b1)?, S::from_value(&r.b2)?);
        Ok(ws)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AWeightRecord {
    pub o: u8,
    pub w: [usize; 2],
    pub value: Value,
}

/// Wire form: `{"a":[{"o":_, "w":[x,y], "value":"p/q" | [re,im]}], "b1":_, "b2":_}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSystemRecord {
    #[serde(default)]
    pub a: Vec<AWeightRecord>,
    pub b1: Value,
    pub b2: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TilingWeightSummary<S> {
    pub a_product: S,
    pub b1: usize,
    pub b2: usize,
}

impl<S: Scalar> TilingWeightSummary<S> {
    pub fn weight(&self, w: &WeightSystem<S>) -> S {
        self.a_product.clone() * w.b_weight(self.b1, self.b2)
    }
}

/// Sums the weights of the given tilings.
pub fn f_eval_over<S: Scalar>(tilings: impl IntoIterator<Item = Tiling>, w: &WeightSystem<S>) -> Result<S> {
    // B₁ ranges over 0..=4mn, so cache the b-products by B₁
    let tiles = w.domain.tile_count();
    let mut by_b1: Vec<Option<S>> = vec![None; tiles + 1];
    let mut total = S::zero();
    for t in tilings {
        let s = w.summarize(&t)?;
        let b = by_b1
            .get_mut(s.b1)
            .ok_or_else(|| Error::Validation(format!("B1 = {} exceeds tile count", s.b1)))?;
        if s.b1 + s.b2 != tiles {
            return Err(Error::Validation(format!("B1 + B2 = {} != {tiles}", s.b1 + s.b2)));
        }
        let bw = b.get_or_insert_with(|| w.b_weight(s.b1, s.b2)).clone();
        total = total + s.a_product * bw;
    }
    Ok(total)
}

pub fn f_eval<S: Scalar>(d: &DomainSpec, w: &WeightSystem<S>) -> Result<S> {
    if d != &w.domain {
        return Err(Error::Domain(format!("weights for {} used on {d}", w.domain)));
    }
    f_eval_over(enumerate_tilings(d, &EnumerationConfig::default()), w)
}

/// `(b₁, b₂) = (q^{1/4}, q^{-1/4})`, swapped for [`Chirality::Flipped`].
pub fn b_type_weight_assignment<S: Scalar>(q: &S, chirality: Chirality) -> Result<(S, S)> {
    if q.inverse().is_none() {
        return Err(Error::Domain("q must be invertible".into()));
    }
    let root = q.fourth_root().ok_or_else(|| {
        Error::Mode(format!("{q:?} is not the fourth power of a rational; use complex mode"))
    })?;
    let inv = root.inverse().ok_or_else(|| Error::Domain("q^(1/4) vanished".into()))?;
    Ok(match chirality {
        Chirality::Standard => (root, inv),
        Chirality::Flipped => (inv, root),
    })
}
