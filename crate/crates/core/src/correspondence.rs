//! Checks `Q^{mn/2} F(a, b) = Z_G(Q, v)` with `Q = (q + q⁻¹)²` and
//! `v_e = (q + q⁻¹) x_e`.

use crate::cycles::{EdgeDirection, GridGraph};
use crate::error::{Error, Result};
use crate::genfun::{b_type_weight_assignment, f_eval, Chirality, WeightSystem};
use crate::lattice::{DomainSpec, Orientation};
use crate::scalar::{Mode, Scalar};
use crate::tutte::{z_delcon, z_subset, PottsPoint, MAX_SUBSET_EDGES};

/// Relative residual accepted as agreement in complex mode.
pub const COMPLEX_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceParams<S> {
    pub q: S,
    /// One `x_e` per grid edge, canonical order.
    pub x: Vec<S>,
}

impl<S: Scalar> CorrespondenceParams<S> {
    pub fn new(q: S, x: Vec<S>) -> Result<Self> {
        if q.inverse().is_none() {
            return Err(Error::Domain("q must be nonzero".into()));
        }
        Ok(CorrespondenceParams { q, x })
    }

    pub fn uniform(q: S, x: S, g: &GridGraph) -> Result<Self> {
        Self::new(q, vec![x; g.edge_count()])
    }

    /// `q + q⁻¹ = Q^{1/2}`.
    pub fn loop_weight(&self) -> S {
        self.q.clone() + self.q.inverse().expect("checked nonzero")
    }

    pub fn potts_q(&self) -> S {
        let s = self.loop_weight();
        s.clone() * s
    }

    pub fn edge_weights(&self) -> Vec<S> {
        let s = self.loop_weight();
        self.x.iter().map(|x| s.clone() * x.clone()).collect()
    }

    pub fn potts_point(&self) -> PottsPoint<S> {
        PottsPoint::per_edge(self.potts_q(), self.edge_weights())
    }
}

/// Which tile of the pair carries `x_e`: orientation 1 (or 2) for `Leading`,
/// orientation 3 (or 4) for `Trailing`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Gauge {
    #[default]
    Leading,
    Trailing,
}

pub fn potts_weight_system<S: Scalar>(g: &GridGraph, params: &CorrespondenceParams<S>) -> Result<WeightSystem<S>> {
    potts_weight_system_with(g, params, Gauge::Leading, Chirality::Standard)
}

pub fn potts_weight_system_with<S: Scalar>(
    g: &GridGraph,
    params: &CorrespondenceParams<S>,
    gauge: Gauge,
    chirality: Chirality,
) -> Result<WeightSystem<S>> {
    if params.x.len() != g.edge_count() {
        return Err(Error::Range(format!("{} x-weights for {} edges", params.x.len(), g.edge_count())));
    }
    let domain = DomainSpec::new(g.m(), g.n())?;
    let mut ws = WeightSystem::ones(domain);
    for (edge, x) in g.edges().iter().zip(&params.x) {
        let o = match (edge.direction, gauge) {
            (EdgeDirection::Horizontal, Gauge::Leading) => Orientation::Up,
            (EdgeDirection::Horizontal, Gauge::Trailing) => Orientation::Down,
            (EdgeDirection::Vertical, Gauge::Leading) => Orientation::Right,
            (EdgeDirection::Vertical, Gauge::Trailing) => Orientation::Left,
        };
        ws.set_a(o, edge.midpoint, x.clone())?;
    }
    let (b1, b2) = b_type_weight_assignment(&params.q, chirality)?;
    ws.set_b(b1, b2);
    Ok(ws)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport<S> {
    pub mode: Mode,
    /// `(q + q⁻¹)^{mn} · F`
    pub lhs: S,
    pub f: S,
    pub potts_q: S,
    /// `Z_G` by subset expansion, or deletion–contraction beyond its budget.
    pub rhs: S,
    pub rhs_engine: &'static str,
    /// Deletion–contraction cross-check.
    pub rhs_delcon: S,
    pub equal: bool,
    pub residual: f64,
}

pub fn verify_theorem2<S: Scalar>(m: usize, n: usize, params: &CorrespondenceParams<S>) -> Result<IdentityReport<S>> {
    let domain = DomainSpec::new(m, n)?;
    let g = GridGraph::for_domain(&domain);
    let weights = potts_weight_system(&g, params)?;
    let f = f_eval(&domain, &weights)?;
    let lhs = params.loop_weight().pow((m * n) as u64) * f.clone();

    let point = params.potts_point();
    let graph = point.on_grid(m, n)?;
    let rhs_delcon = z_delcon(&graph, &point.q);
    let (rhs, rhs_engine) = if g.edge_count() <= MAX_SUBSET_EDGES {
        (z_subset(&graph, &point.q)?, "subset")
    } else {
        (rhs_delcon.clone(), "delcon")
    };

    let scale = rhs.magnitude();
    let diff = (lhs.clone() - rhs.clone()).magnitude();
    let residual = if scale > 0.0 { diff / scale } else { diff };
    let equal = match S::MODE {
        Mode::Exact => lhs == rhs && rhs == rhs_delcon,
        Mode::Complex => {
            let cross = (rhs.clone() - rhs_delcon.clone()).magnitude() / scale.max(f64::MIN_POSITIVE);
            residual < COMPLEX_TOLERANCE && cross < COMPLEX_TOLERANCE
        }
    };
    Ok(IdentityReport {
        mode: S::MODE,
        lhs,
        f,
        potts_q: point.q,
        rhs,
        rhs_engine,
        rhs_delcon,
        equal,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Complex64;
    use num::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn edgeless_identity_any_q() {
        for q in [rat(1, 1), rat(16, 1), rat(81, 16)] {
            let p = CorrespondenceParams::new(q, vec![]).unwrap();
            let report = verify_theorem2(1, 1, &p).unwrap();
            assert!(report.equal);
            assert_eq!(report.lhs, p.potts_q());
        }
    }

    #[test]
    fn single_edge_unit_q() {
        let g = GridGraph::new(1, 2);
        let p = CorrespondenceParams::uniform(rat(1, 1), rat(1, 1), &g).unwrap();
        let report = verify_theorem2(1, 2, &p).unwrap();
        assert_eq!(report.lhs, rat(24, 1));
        assert_eq!(report.rhs, rat(24, 1));
        assert_eq!(report.f, rat(6, 1));
    }

    #[test]
    fn unit_parameters_give_all_ones() {
        let g = GridGraph::new(2, 2);
        let p = CorrespondenceParams::uniform(rat(1, 1), rat(1, 1), &g).unwrap();
        let ws = potts_weight_system(&g, &p).unwrap();
        assert_eq!((ws.b1(), ws.b2()), (&rat(1, 1), &rat(1, 1)));
        let d = ws.domain();
        for w in d.interior_white_vertices() {
            for o in Orientation::ALL {
                assert_eq!(ws.a(o, w), rat(1, 1));
            }
        }
    }

    #[test]
    fn single_edge_weight_lands_on_its_midpoint() {
        let g = GridGraph::new(1, 2);
        let p = CorrespondenceParams::uniform(rat(1, 1), rat(3, 1), &g).unwrap();
        let ws = potts_weight_system(&g, &p).unwrap();
        let products = ws.reduced_a_products();
        assert_eq!(products.len(), 1);
        let (h, v) = &products[&g.edges()[0].midpoint];
        assert_eq!((h, v), (&rat(1, 1), &rat(3, 1)));
    }

    #[test]
    fn gauge_choice_is_invisible() {
        let g = GridGraph::new(2, 2);
        let p = CorrespondenceParams::new(rat(16, 1), vec![rat(2, 3), rat(5, 1), rat(1, 7), rat(3, 2)]).unwrap();
        let d = DomainSpec::new(2, 2).unwrap();
        let lead = potts_weight_system_with(&g, &p, Gauge::Leading, Chirality::Standard).unwrap();
        let trail = potts_weight_system_with(&g, &p, Gauge::Trailing, Chirality::Standard).unwrap();
        assert_eq!(f_eval(&d, &lead).unwrap(), f_eval(&d, &trail).unwrap());
    }

    #[test]
    fn complex_point() {
        let g = GridGraph::new(2, 2);
        let q = Complex64::from_polar(1.0, std::f64::consts::PI / 5.0);
        let p = CorrespondenceParams::uniform(q, Complex64::new(1.0, 0.0), &g).unwrap();
        let report = verify_theorem2(2, 2, &p).unwrap();
        assert!(report.equal, "residual {}", report.residual);
    }

    #[test]
    fn irrational_root_is_a_mode_error() {
        let g = GridGraph::new(1, 2);
        let p = CorrespondenceParams::uniform(rat(2, 1), rat(1, 1), &g).unwrap();
        assert!(matches!(verify_theorem2(1, 2, &p), Err(Error::Mode(_))));
        assert!(matches!(CorrespondenceParams::new(rat(0, 1), vec![]), Err(Error::Domain(_))));
    }
}
