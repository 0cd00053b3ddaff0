//! Enumeration of the small polygons the reduction calculi rewrite: simple
//! cycles with pairwise distinct vertices and distinct edges, length 1–5.

use std::collections::BTreeSet;

use super::{Dart, WebGraph};

/// One polygon site.  `verts[i]` is joined to `verts[i+1]` by the edge whose
/// dart at `verts[i]` is `next_dart[i]` (and whose dart at `verts[i+1]` is
/// `prev_dart[i+1]`, indices mod the length).
#[derive(Clone, Debug)]
pub struct Polygon {
    pub verts: Vec<usize>,
    pub next_dart: Vec<Dart>,
    pub prev_dart: Vec<Dart>,
}

impl Polygon {
    pub fn len(&self) -> usize {
        self.verts.len()
    }

    /// The third dart at vertex `i` (the external leg), for trivalent sites.
    pub fn external(&self, g: &WebGraph, i: usize) -> Dart {
        let v = self.verts[i];
        *g.vertex_darts(v)
            .iter()
            .find(|&&d| d != self.next_dart[i] && d != self.prev_dart[i])
            .expect("external leg")
    }

    fn edge_set(&self, g: &WebGraph) -> BTreeSet<Dart> {
        self.next_dart.iter().map(|&d| d.min(g.partner(d))).collect()
    }
}

/// All simple cycles of length ≤ `max_len` (and ≥ `min_len`) in `g`, with
/// pairwise distinct vertices and pairwise distinct edges.  Length-1 sites
/// are self-loops; length-2 sites are unordered pairs of parallel edges.
pub fn find_polygons(g: &WebGraph, min_len: usize, max_len: usize) -> Vec<Polygon> {
    let mut out = Vec::new();
    let mut seen: BTreeSet<(Vec<usize>, BTreeSet<Dart>)> = BTreeSet::new();

    // self-loops
    if min_len <= 1 {
        for v in 0..g.num_vertices() {
            for &d in g.vertex_darts(v) {
                let p = g.try_partner(d);
                if p.map(|p| g.owner(p)) == Some(v) && p.unwrap() > d {
                    out.push(Polygon {
                        verts: vec![v],
                        next_dart: vec![d],
                        prev_dart: vec![p.unwrap()],
                    });
                }
            }
        }
    }

    // parallel-edge pairs
    if min_len <= 2 && max_len >= 2 {
        for v in 0..g.num_vertices() {
            for (i, &d1) in g.vertex_darts(v).iter().enumerate() {
                let Some(p1) = g.try_partner(d1) else { continue };
                let w = g.owner(p1);
                if w <= v {
                    continue;
                }
                for &d2 in g.vertex_darts(v).iter().skip(i + 1) {
                    let Some(p2) = g.try_partner(d2) else { continue };
                    if g.owner(p2) == w {
                        out.push(Polygon {
                            verts: vec![v, w],
                            next_dart: vec![d1, p2],
                            prev_dart: vec![d2, p1],
                        });
                    }
                }
            }
        }
    }

    // longer simple cycles by DFS from a least vertex
    for len in 3..=max_len.min(5) {
        if len < min_len {
            continue;
        }
        let mut path: Vec<(usize, Dart, Dart)> = Vec::new(); // (vertex, in_dart, out_dart)
        for v0 in 0..g.num_vertices() {
            dfs_cycles(g, v0, v0, len, &mut path, &mut |cycle| {
                let verts: Vec<usize> = cycle.iter().map(|c| c.0).collect();
                let poly = Polygon {
                    verts: verts.clone(),
                    next_dart: cycle.iter().map(|c| c.2).collect(),
                    prev_dart: cycle.iter().map(|c| c.1).collect(),
                };
                let mut key_verts = verts.clone();
                key_verts.sort_unstable();
                let key = (key_verts, poly.edge_set(g));
                if seen.insert(key) {
                    out.push(poly);
                }
            });
        }
    }
    out
}

fn dfs_cycles(
    g: &WebGraph,
    root: usize,
    v: usize,
    len: usize,
    path: &mut Vec<(usize, Dart, Dart)>,
    emit: &mut impl FnMut(&[(usize, Dart, Dart)]),
) {
    // extend the path from v with one more edge
    for &d in g.vertex_darts(v) {
        let Some(p) = g.try_partner(d) else { continue };
        let w = g.owner(p);
        if path.len() + 1 == len {
            if w == root && !path.is_empty() {
                // close the cycle: record out-dart for v and in-dart for root
                let in_dart_root = p;
                path.push((v, path.last().map(|c| c.2).map(|x| g.partner(x)).unwrap_or(0), d));
                // fix up in_darts: path[i].1 should be the dart at verts[i]
                // pointing back along the cycle
                let mut cyc: Vec<(usize, Dart, Dart)> = Vec::with_capacity(len);
                for i in 0..path.len() {
                    let (vi, _, out) = path[i];
                    let prev_out = if i == 0 { in_dart_root } else { g.partner(path[i - 1].2) };
                    cyc.push((vi, prev_out, out));
                }
                // distinct edges check (vertices are distinct by construction)
                let mut edges: Vec<Dart> = cyc.iter().map(|c| c.2.min(g.partner(c.2))).collect();
                edges.sort_unstable();
                edges.dedup();
                if edges.len() == len {
                    emit(&cyc);
                }
                path.pop();
            }
            continue;
        }
        if w <= root || path.iter().any(|c| c.0 == w) || w == v {
            continue;
        }
        path.push((v, 0, d));
        dfs_cycles(g, root, w, len, path, emit);
        path.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::web::testutil::{cube_sl3, theta_sl3 as theta};

    #[test]
    fn theta_has_three_bigons() {
        let g = theta();
        let polys = find_polygons(&g, 2, 2);
        assert_eq!(polys.len(), 3);
    }

    #[test]
    fn cube_has_six_quadrilaterals() {
        let g = cube_sl3();
        let quads = find_polygons(&g, 4, 4);
        assert_eq!(quads.len(), 6);
        let bigons = find_polygons(&g, 2, 3);
        assert!(bigons.is_empty());
    }

    #[test]
    fn cycle_darts_are_consistent() {
        let g = cube_sl3();
        for p in find_polygons(&g, 3, 5) {
            let n = p.len();
            for i in 0..n {
                assert_eq!(g.owner(p.next_dart[i]), p.verts[i]);
                assert_eq!(g.partner(p.next_dart[i]), p.prev_dart[(i + 1) % n]);
            }
        }
    }
}
