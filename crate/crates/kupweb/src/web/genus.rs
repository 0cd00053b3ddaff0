//! Rotation-system face tracing, Euler genus, and girth.

use std::collections::VecDeque;

use super::WebGraph;

/// Face census of a graph whose per-vertex slot order is read as the
/// counterclockwise rotation.  Returns the faces as dart orbits.
pub fn faces(g: &WebGraph) -> Vec<Vec<usize>> {
    let nd = g.num_darts();
    let mut seen = vec![false; nd];
    let mut out = Vec::new();
    for d0 in 0..nd {
        if seen[d0] || g.try_partner(d0).is_none() {
            continue;
        }
        let mut face = Vec::new();
        let mut d = d0;
        loop {
            seen[d] = true;
            face.push(d);
            // cross the edge, then turn to the next dart counterclockwise
            let p = g.partner(d);
            let v = g.owner(p);
            let ds = g.vertex_darts(v);
            let s = g.slot(p);
            d = ds[(s + 1) % ds.len()];
            if d == d0 {
                break;
            }
        }
        out.push(face);
    }
    out
}

/// Genus per connected component from `v - e + f = 2 - 2g`, plus the face
/// census sizes.  Free circles are genus-0 components with two faces.
/// Returns `(sum of genera, face sizes)`.
pub fn genus(g: &WebGraph) -> (usize, Vec<usize>) {
    let all_faces = faces(g);
    let mut face_sizes: Vec<usize> = all_faces.iter().map(|f| f.len()).collect();
    face_sizes.sort_unstable();

    let mut total = 0usize;
    for comp in g.components() {
        let v = comp.len();
        let e: usize =
            comp.iter().map(|&u| g.vertex_darts(u).len()).sum::<usize>() / 2;
        let f = all_faces
            .iter()
            .filter(|face| face.first().map(|&d| comp.contains(&g.owner(d))).unwrap_or(false))
            .count();
        let euler = v as i64 - e as i64 + f as i64;
        let two_g = 2 - euler;
        assert!(two_g >= 0 && two_g % 2 == 0, "inconsistent rotation system");
        total += (two_g / 2) as usize;
    }
    (total, face_sizes)
}

/// Length of the shortest cycle (self-loops count 1, parallel edges 2), or
/// `None` when the graph is a forest / circles only.
pub fn girth(g: &WebGraph) -> Option<usize> {
    let n = g.num_vertices();
    let mut best: Option<usize> = None;
    // self-loops and parallel edges
    for v in 0..n {
        let ds = g.vertex_darts(v);
        for (i, &d) in ds.iter().enumerate() {
            let Some(p) = g.try_partner(d) else { continue };
            let w = g.owner(p);
            if w == v {
                return Some(1);
            }
            for &d2 in ds.iter().skip(i + 1) {
                if g.try_partner(d2).map(|q| g.owner(q)) == Some(w) {
                    best = Some(best.map_or(2, |b: usize| b.min(2)));
                }
            }
        }
    }
    if best == Some(2) {
        return best;
    }
    // BFS from every vertex over the underlying simple graph
    for src in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[src] = 0;
        let mut q = VecDeque::from([src]);
        while let Some(v) = q.pop_front() {
            for &d in g.vertex_darts(v) {
                let Some(p) = g.try_partner(d) else { continue };
                let w = g.owner(p);
                if w == v {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    parent[w] = v;
                    q.push_back(w);
                } else if parent[v] != w && parent[w] != v {
                    let cyc = dist[v] + dist[w] + 1;
                    if best.map_or(true, |b| cyc < b) {
                        best = Some(cyc);
                    }
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::web::{VertexKind as K, WebGraph};

    #[test]
    fn circle_has_genus_zero() {
        let mut g = WebGraph::new();
        g.circles = 1;
        assert_eq!(genus(&g).0, 0);
    }

    #[test]
    fn theta_planar_rotation_three_faces() {
        let mut g = WebGraph::new();
        let s = g.add_vertex(K::Plain);
        let t = g.add_vertex(K::Plain);
        // planar theta: rotations mirror each other
        g.connect(g.dart(s, 0), g.dart(t, 0));
        g.connect(g.dart(s, 1), g.dart(t, 2));
        g.connect(g.dart(s, 2), g.dart(t, 1));
        let (gen, fs) = genus(&g);
        assert_eq!(gen, 0);
        assert_eq!(fs.len(), 3); // traced by hand: two bigon faces and the outer face
        assert_eq!(girth(&g), Some(2));
    }

    #[test]
    fn theta_twisted_rotation_genus_one() {
        let mut g = WebGraph::new();
        let s = g.add_vertex(K::Plain);
        let t = g.add_vertex(K::Plain);
        // same cyclic order on both sides: embeds on the torus
        g.connect(g.dart(s, 0), g.dart(t, 0));
        g.connect(g.dart(s, 1), g.dart(t, 1));
        g.connect(g.dart(s, 2), g.dart(t, 2));
        let (gen, fs) = genus(&g);
        assert_eq!(gen, 1);
        assert_eq!(fs.len(), 1);
    }

    #[test]
    fn girth_of_forest_is_none() {
        let mut g = WebGraph::new();
        let a = g.add_vertex(K::End);
        let b = g.add_vertex(K::End);
        g.connect(g.dart(a, 0), g.dart(b, 0));
        assert_eq!(girth(&g), None);
    }
}
