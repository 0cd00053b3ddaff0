//! Framed 4-valent graphs: the combinatorial home of free knots and of the
//! parity-bracket state graphs.  A vertex's framing pairs live on dart slots
//! (0,2) and (1,3); when the underlying web is `rotational` the slot order is
//! also the counterclockwise rotation at the node (flat/virtual category).

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::Rng;

use crate::web::canon::{canonical_closed, CanonicalKey};
use crate::web::genus;
use crate::web::polygons::find_polygons;
use crate::web::{Dart, VertexKind, WebGraph};

#[derive(Clone, Debug)]
pub struct FramedGraph {
    pub web: WebGraph,
    /// Strand orientation per dart (true = the strand leaves the vertex
    /// here), when the graph came from an oriented source.
    pub outgoing: Option<Vec<bool>>,
}

/// An R2 cancellation site: two nodes joined by two edges that are opposite
/// at neither endpoint (and, in the rotational category, bound a bigon face).
#[derive(Clone, Copy, Debug)]
pub struct R2Site {
    pub u: usize,
    pub v: usize,
    pub e1: (Dart, Dart), // (dart at u, dart at v)
    pub e2: (Dart, Dart),
}

impl FramedGraph {
    pub fn opposite(&self, d: Dart) -> Dart {
        let v = self.web.owner(d);
        let s = self.web.slot(d);
        self.web.dart(v, (s + 2) % 4)
    }

    /// Unicursal components as classes of darts; two darts are in the same
    /// class when the opposite-edge walk connects them (in either direction).
    pub fn strand_components(&self) -> Vec<usize> {
        let nd = self.web.num_darts();
        let mut uf: Vec<usize> = (0..nd).collect();
        fn find(uf: &mut Vec<usize>, mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        let union = |uf: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(uf, a), find(uf, b));
            if ra != rb {
                uf[ra.max(rb)] = ra.min(rb);
            }
        };
        for d in 0..nd {
            union(&mut uf, d, self.opposite(d));
            if let Some(p) = self.web.try_partner(d) {
                union(&mut uf, d, p);
            }
        }
        let mut out = vec![0usize; nd];
        for (d, slot) in out.iter_mut().enumerate() {
            *slot = find(&mut uf, d);
        }
        out
    }

    /// Number of unicursal components, free circles included.
    pub fn num_components(&self) -> usize {
        let comps = self.strand_components();
        let mut roots: Vec<usize> = comps.clone();
        roots.sort_unstable();
        roots.dedup();
        let node_comps = if self.web.num_darts() == 0 { 0 } else { roots.len() };
        node_comps + self.web.circles
    }

    pub fn is_unicursal(&self) -> bool {
        self.num_components() == 1
    }

    /// The two smoothings at a vertex: re-pair the half-edges as
    /// {0-1, 2-3} (`which = 0`) or {0-3, 1-2} (`which = 1`).
    pub fn smooth_at(&self, v: usize, which: usize) -> FramedGraph {
        let d = |s: usize| self.web.dart(v, s);
        let joins = if which == 0 {
            [(d(0), d(1)), (d(2), d(3))]
        } else {
            [(d(0), d(3)), (d(1), d(2))]
        };
        let removed: BTreeSet<usize> = [v].into_iter().collect();
        FramedGraph { web: self.web.surgery(&removed, &joins, &[]), outgoing: None }
    }

    /// All R2 cancellation sites.  With `use_rotation` the site must bound a
    /// bigon face of the rotation system; without it only the framing
    /// condition applies (the free category, where the graphical Z-move is
    /// allowed for free).
    pub fn r2_sites(&self, use_rotation: bool) -> Vec<R2Site> {
        let mut out = Vec::new();
        let faces = if use_rotation { genus::faces(&self.web) } else { Vec::new() };
        for p in find_polygons(&self.web, 2, 2) {
            let (u, v) = (p.verts[0], p.verts[1]);
            if u == v {
                continue;
            }
            // next_dart[0] and prev_dart[0] are the two parallel edges' darts
            // at u; their partners sit at v
            let e1 = (p.next_dart[0], self.web.partner(p.next_dart[0]));
            let e2 = (p.prev_dart[0], self.web.partner(p.prev_dart[0]));
            // framing: the two edges are opposite at neither endpoint
            let non_opp = |a: Dart, b: Dart| (self.web.slot(a) % 2) != (self.web.slot(b) % 2);
            if !non_opp(e1.0, e2.0) || !non_opp(e1.1, e2.1) {
                continue;
            }
            if use_rotation {
                let edge_of = |d: Dart| d.min(self.web.partner(d));
                let ok = faces.iter().any(|f| {
                    f.len() == 2 && {
                        let es: BTreeSet<Dart> = f.iter().map(|&d| edge_of(d)).collect();
                        es == [edge_of(e1.0), edge_of(e2.0)].into_iter().collect()
                    }
                });
                if !ok {
                    continue;
                }
            }
            out.push(R2Site { u, v, e1, e2 });
        }
        out
    }

    /// Cancel an R2 pair, splicing the four strand ends through.
    pub fn apply_r2(&self, site: &R2Site) -> FramedGraph {
        let removed: BTreeSet<usize> = [site.u, site.v].into_iter().collect();
        let joins = [
            (self.opposite(site.e1.0), self.opposite(site.e1.1)),
            (self.opposite(site.e2.0), self.opposite(site.e2.1)),
        ];
        FramedGraph { web: self.web.surgery(&removed, &joins, &[]), outgoing: None }
    }

    /// Greedy fixed point of R2 cancellation; `allow_z` drops the rotation
    /// condition (free category).  Unique regardless of removal order.
    pub fn irreducible_representative(&self, allow_z: bool) -> FramedGraph {
        self.irreducible_with(allow_z, &mut None)
    }

    /// Randomized-order variant used by the uniqueness property test.
    pub fn irreducible_with(&self, allow_z: bool, rng: &mut Option<&mut StdRng>) -> FramedGraph {
        let use_rotation = self.web.rotational && !allow_z;
        let mut g = self.clone();
        loop {
            let sites = g.r2_sites(use_rotation);
            if sites.is_empty() {
                return g;
            }
            let pick = match rng {
                Some(r) => r.random_range(0..sites.len()),
                None => 0,
            };
            g = g.apply_r2(&sites[pick]);
        }
    }

    /// Canonical key of the whole graph (sorted component keys plus the
    /// free-circle count).
    pub fn full_key(&self) -> CanonicalKey {
        let mut keys: Vec<CanonicalKey> =
            canonical_closed(&self.web).into_iter().map(|(k, _)| k).collect();
        keys.sort();
        let mut bytes = vec![self.web.circles as u8, keys.len() as u8];
        for k in keys {
            bytes.push(0xfe);
            bytes.extend_from_slice(k.as_bytes());
        }
        CanonicalKey::from_bytes(bytes)
    }

    pub fn girth(&self) -> Option<usize> {
        genus::girth(&self.web)
    }

    fn cycle_out_degrees(&self, poly: &crate::web::polygons::Polygon) -> Vec<usize> {
        let outgoing = self.outgoing.as_ref().expect("oriented framed graph required");
        (0..poly.len())
            .map(|i| {
                [poly.next_dart[i], poly.prev_dart[i]]
                    .iter()
                    .filter(|&&d| outgoing[d])
                    .count()
            })
            .collect()
    }

    /// Triangles with a vertex whose two triangle edges both point out.
    pub fn bad_triangles(&self) -> usize {
        find_polygons(&self.web, 3, 3)
            .iter()
            .filter(|p| self.cycle_out_degrees(p).contains(&2))
            .count()
    }

    /// Quadrilaterals with two vertices whose quad edges both point out.
    pub fn bad_quadrilaterals(&self) -> usize {
        find_polygons(&self.web, 4, 4)
            .iter()
            .filter(|p| self.cycle_out_degrees(p).iter().filter(|&&c| c == 2).count() >= 2)
            .count()
    }

    /// Quadrilaterals whose four edges all emanate from one opposite pair of
    /// vertices (these produce quadrilaterals in the all-unoriented state).
    pub fn special_quadrilaterals(&self) -> usize {
        find_polygons(&self.web, 4, 4)
            .iter()
            .filter(|p| {
                let deg = self.cycle_out_degrees(p);
                (deg[0] == 2 && deg[2] == 2 && deg[1] == 0 && deg[3] == 0)
                    || (deg[1] == 2 && deg[3] == 2 && deg[0] == 0 && deg[2] == 0)
            })
            .count()
    }

    /// Re-order every vertex's slots compatibly with the framing (a random
    /// dihedral presentation change).  Free-category invariants must not see
    /// the difference.
    pub fn with_shuffled_slots(&self, rng: &mut StdRng) -> FramedGraph {
        let mut web = WebGraph::new();
        web.rotational = self.web.rotational;
        web.circles = self.web.circles;
        let n = self.web.num_vertices();
        let mut maps = Vec::with_capacity(n);
        for _ in 0..n {
            web.add_vertex(VertexKind::Node4);
            // slot permutations preserving pairs {0,2},{1,3}: generated by
            // rotation and swapping the two pairs
            let rot = rng.random_range(0..4usize);
            let swap = rng.random_bool(0.5);
            let perm: Vec<usize> = (0..4)
                .map(|s| {
                    let s = (s + rot) % 4;
                    if swap {
                        [1usize, 0, 3, 2][s]
                    } else {
                        s
                    }
                })
                .collect();
            maps.push(perm);
        }
        for (a, b) in self.web.edges() {
            let (va, sa) = (self.web.owner(a), self.web.slot(a));
            let (vb, sb) = (self.web.owner(b), self.web.slot(b));
            web.connect(web.dart(va, maps[va][sa]), web.dart(vb, maps[vb][sb]));
        }
        FramedGraph { web, outgoing: None }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_gauss;
    use rand::SeedableRng;

    #[test]
    fn components_of_two_component_link() {
        let d = parse_gauss("1,2;1,2").unwrap();
        let fg = d.to_framed_graph();
        assert_eq!(fg.num_components(), 2);
        assert!(!fg.is_unicursal());
    }

    #[test]
    fn smoothing_counts_components() {
        // kink: one smoothing splits off a circle, the other keeps one strand
        let d = parse_gauss("1,1").unwrap();
        let fg = d.to_framed_graph();
        let s0 = fg.smooth_at(0, 0);
        let s1 = fg.smooth_at(0, 1);
        let counts: Vec<usize> = vec![s0.num_components(), s1.num_components()];
        assert!(counts.contains(&1) && counts.contains(&2), "{counts:?}");
    }

    #[test]
    fn r2_reduction_free_level() {
        // graphical R2 pair: two nodes joined twice, non-opposite at both
        let d = parse_gauss("1,2,2,1").unwrap();
        let fg = d.to_framed_graph();
        let red = fg.irreducible_representative(true);
        assert_eq!(red.web.num_inner_vertices(), 0);
        assert_eq!(red.web.circles, 1);

        // a kink is not a second Reidemeister move; it stays
        let kink = parse_gauss("1,1").unwrap().to_framed_graph();
        let red = kink.irreducible_representative(true);
        assert_eq!(red.web.num_inner_vertices(), 1);
    }

    #[test]
    fn irreducible_representative_unique_under_order() {
        let mut rng = StdRng::seed_from_u64(23);
        for trial in 0..200u64 {
            // random free diagram of 6 chords
            let n = 6;
            let mut word: Vec<usize> = (1..=n).flat_map(|l| [l, l]).collect();
            for i in (1..word.len()).rev() {
                let j = rng.random_range(0..=i);
                word.swap(i, j);
            }
            let code: Vec<String> = word.iter().map(usize::to_string).collect();
            let d = parse_gauss(&code.join(",")).unwrap();
            let fg = d.to_framed_graph();
            let base = fg.irreducible_representative(true).full_key();
            for s in 0..4 {
                let mut r = StdRng::seed_from_u64(trial * 17 + s);
                let k = fg.irreducible_with(true, &mut Some(&mut r)).full_key();
                assert_eq!(base, k, "reduction order changed the result");
            }
        }
    }
}
