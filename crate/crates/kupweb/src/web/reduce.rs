//! The confluent sl(3) web reducer: exhaustively rewrites bigons (factor
//! `A^3 + A^-3`, edge contraction), quadrilaterals (sum of the two
//! re-pairings) and circles (factor `A^6 + 1 + A^-6`), emitting irreducible
//! connected components as canonical-key monomials.  The result does not
//! depend on the rewrite order.

use std::collections::{BTreeSet, HashMap};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::canon::{canonical_component, CanonicalKey};
use super::polygons::{find_polygons, Polygon};
use super::{VertexKind, WebGraph};
use crate::poly::{GraphMonomial, GraphPolynomial, LaurentPoly};

/// `A^6 + 1 + A^-6`: the value of a closed circle.
pub fn sl3_loop_value() -> LaurentPoly<i64> {
    LaurentPoly::from_terms([(6, 1), (0, 1), (-6, 1)])
}

/// `A^3 + A^-3`: the factor produced by contracting a bigon.
pub fn sl3_bigon_factor() -> LaurentPoly<i64> {
    LaurentPoly::from_terms([(3, 1), (-3, 1)])
}

/// Reduction engine with a memo table shared across calls.  With an RNG the
/// polygon to rewrite is chosen at random (used by the confluence suite);
/// otherwise bigons are preferred over quadrilaterals and ties break on the
/// lowest dart indices, which keeps intermediate graphs small.
pub struct Sl3Reducer {
    memo: HashMap<CanonicalKey, GraphPolynomial<i64>>,
    rng: Option<StdRng>,
}

impl Default for Sl3Reducer {
    fn default() -> Self {
        Self::new()
    }
}

impl Sl3Reducer {
    pub fn new() -> Self {
        Sl3Reducer { memo: HashMap::new(), rng: None }
    }

    /// Randomized polygon selection; memoization is disabled so that every
    /// branch really re-runs (two randomized reducers must still agree).
    pub fn randomized(seed: u64) -> Self {
        Sl3Reducer { memo: HashMap::new(), rng: Some(StdRng::seed_from_u64(seed)) }
    }

    /// Reduce a closed sl(3) web (free ends are handled by the braid trace,
    /// which never lets them reach this entry point).
    pub fn reduce(&mut self, g: &WebGraph) -> GraphPolynomial<i64> {
        let mut acc = GraphPolynomial::scalar(sl3_loop_value().pow(g.circles));
        for comp in g.components() {
            let sub = g.restrict(&comp);
            let part = self.reduce_component(&sub);
            acc = acc.mul(&part);
        }
        acc
    }

    fn reduce_component(&mut self, g: &WebGraph) -> GraphPolynomial<i64> {
        debug_assert_eq!(g.circles, 0);
        if g.num_vertices() == 0 {
            return GraphPolynomial::one();
        }
        let use_memo = self.rng.is_none();
        let all: Vec<usize> = (0..g.num_vertices()).collect();
        let key = if use_memo {
            let (key, _) = canonical_component(g, &all);
            if let Some(hit) = self.memo.get(&key) {
                return hit.clone();
            }
            Some(key)
        } else {
            None
        };

        let bigons = find_polygons(g, 2, 2);
        let quads: Vec<Polygon> = if bigons.is_empty() || self.rng.is_some() {
            find_polygons(g, 4, 4)
        } else {
            Vec::new()
        };

        let value = if bigons.is_empty() && quads.is_empty() {
            let (key, _) = canonical_component(g, &all);
            debug_assert!(g.num_vertices() > 2, "irreducible sl3 webs have girth >= 6");
            GraphPolynomial::single(GraphMonomial::from_keys(vec![key]), LaurentPoly::one())
        } else {
            let pick = match &mut self.rng {
                Some(rng) => rng.random_range(0..bigons.len() + quads.len()),
                None => 0,
            };
            if pick < bigons.len() {
                let h = contract_bigon(g, &bigons[pick]);
                self.reduce(&h).scale(&sl3_bigon_factor())
            } else {
                let quad = &quads[pick - bigons.len()];
                let (h1, h2) = repair_quad(g, quad);
                self.reduce(&h1).add(&self.reduce(&h2))
            }
        };

        if let Some(key) = key {
            self.memo.insert(key, value.clone());
        }
        value
    }
}

/// Remove a bigon's two vertices and splice their external legs together.
pub fn contract_bigon(g: &WebGraph, bigon: &Polygon) -> WebGraph {
    let (u, v) = (bigon.verts[0], bigon.verts[1]);
    debug_assert_ne!(u, v);
    let ext_u = bigon.external(g, 0);
    let ext_v = bigon.external(g, 1);
    let removed: BTreeSet<usize> = [u, v].into_iter().collect();
    g.surgery(&removed, &[(ext_u, ext_v)], &[])
}

/// The two re-pairings of a quadrilateral's external legs.
pub fn repair_quad(g: &WebGraph, quad: &Polygon) -> (WebGraph, WebGraph) {
    debug_assert_eq!(quad.len(), 4);
    let removed: BTreeSet<usize> = quad.verts.iter().copied().collect();
    let e: Vec<_> = (0..4).map(|i| quad.external(g, i)).collect();
    let h1 = g.surgery(&removed, &[(e[0], e[1]), (e[2], e[3])], &[]);
    let h2 = g.surgery(&removed, &[(e[1], e[2]), (e[3], e[0])], &[]);
    (h1, h2)
}

/// Check that an sl(3) web is bipartite-consistent: every edge joins a Source
/// to a Sink (Ends pass through).
pub fn check_sl3_orientation(g: &WebGraph) -> bool {
    g.edges().iter().all(|&(a, b)| {
        let (ka, kb) = (g.kind(g.owner(a)), g.kind(g.owner(b)));
        match (ka, kb) {
            (VertexKind::Source, VertexKind::Sink) | (VertexKind::Sink, VertexKind::Source) => true,
            (VertexKind::End, _) | (_, VertexKind::End) => true,
            _ => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::web::testutil::{cube_sl3, random_sl3_web, theta_sl3 as theta};

    #[test]
    fn circle_reduces_to_loop_value() {
        let mut g = WebGraph::new();
        g.circles = 1;
        let v = Sl3Reducer::new().reduce(&g);
        assert_eq!(v, GraphPolynomial::scalar(sl3_loop_value()));
    }

    #[test]
    fn theta_reduces_to_bigon_times_loop() {
        let g = theta();
        let v = Sl3Reducer::new().reduce(&g);
        let expect = GraphPolynomial::scalar(&sl3_bigon_factor() * &sl3_loop_value());
        assert_eq!(v, expect);
    }

    #[test]
    fn cube_reduces_like_a_scalar() {
        // the cube web is planar, so it must reduce to a scalar
        let g = cube_sl3();
        let v = Sl3Reducer::new().reduce(&g);
        assert!(v.is_scalar());
        // at A = 1 the scalar counts edge 3-colorings of the cube
        let at1 = v.scalar_part().eval_at_sign(1);
        assert!(at1 > 0);
    }

    #[test]
    fn confluence_smoke() {
        let mut seed_rng = StdRng::seed_from_u64(7);
        for trial in 0..40 {
            let n = 1 + (trial % 5);
            let g = random_sl3_web(n, &mut seed_rng);
            let base = Sl3Reducer::new().reduce(&g);
            for s in 0..3 {
                let v = Sl3Reducer::randomized(1000 * trial as u64 + s).reduce(&g);
                assert_eq!(base, v, "confluence violated on trial {trial}");
            }
        }
    }

    #[test]
    fn output_is_irreducible() {
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..30 {
            let g = random_sl3_web(4, &mut rng);
            let v = Sl3Reducer::new().reduce(&g);
            // no monomial may be the key of a graph with a bigon or quad;
            // structurally we can at least check against the graphs we can
            // rebuild: irreducible webs set aside by the reducer never have
            // polygons at emission time (debug_assert there), so here we just
            // sanity-check determinism
            let v2 = Sl3Reducer::new().reduce(&g);
            assert_eq!(v, v2);
        }
    }
}
