//! The Penrose coloring bracket for trivalent virtual graphs, proper edge
//! 3-coloring counts, the coincidence with the sl(3) bracket at A = 1 on
//! planar webs, and the translations between edge-colored trivalent graphs
//! and 2-colored free links.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::framed::FramedGraph;
use crate::web::{VertexKind, WebGraph};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PenroseError {
    #[error("vertex {0} is not trivalent")]
    NotTrivalent(usize),
    #[error("graph has free ends")]
    OpenGraph,
    #[error("improper coloring at vertex {0}")]
    ImproperColoring(usize),
    #[error("edge {0} has no color")]
    MissingColor(usize),
}

fn check_trivalent(g: &WebGraph) -> Result<(), PenroseError> {
    for v in 0..g.num_vertices() {
        match g.kind(v) {
            VertexKind::Plain | VertexKind::Source | VertexKind::Sink => {}
            _ => return Err(PenroseError::NotTrivalent(v)),
        }
        for &d in g.vertex_darts(v) {
            if g.try_partner(d).is_none() {
                return Err(PenroseError::OpenGraph);
            }
        }
    }
    Ok(())
}

/// Exact count of proper edge 3-colorings by backtracking.
pub fn count_edge_3_colorings(g: &WebGraph) -> Result<u64, PenroseError> {
    check_trivalent(g)?;
    let edges = g.edges();
    let edge_index: HashMap<usize, usize> =
        edges.iter().enumerate().flat_map(|(i, &(a, b))| [(a, i), (b, i)]).collect();
    // self-loops can never see three distinct colors
    if edges.iter().any(|&(a, b)| g.owner(a) == g.owner(b)) {
        return Ok(0);
    }
    let mut colors = vec![0u8; edges.len()];
    fn ok_at(g: &WebGraph, edge_index: &HashMap<usize, usize>, colors: &[u8], v: usize) -> bool {
        let cs: Vec<u8> =
            g.vertex_darts(v).iter().map(|d| colors[edge_index[d]]).collect();
        // no repeated nonzero colors
        for i in 0..cs.len() {
            for j in i + 1..cs.len() {
                if cs[i] != 0 && cs[i] == cs[j] {
                    return false;
                }
            }
        }
        true
    }
    fn rec(
        g: &WebGraph,
        edges: &[(usize, usize)],
        edge_index: &HashMap<usize, usize>,
        colors: &mut Vec<u8>,
        i: usize,
    ) -> u64 {
        if i == edges.len() {
            return 3u64.pow(g.circles as u32);
        }
        let mut total = 0;
        for c in 1..=3u8 {
            colors[i] = c;
            let (a, b) = edges[i];
            if ok_at(g, edge_index, colors, g.owner(a)) && ok_at(g, edge_index, colors, g.owner(b))
            {
                total += rec(g, edges, edge_index, colors, i + 1);
            }
            colors[i] = 0;
        }
        total
    }
    Ok(rec(g, &edges, &edge_index, &mut colors, 0))
}

/// The Penrose bracket: expand an edge between two vertices into the
/// parallel minus the crossed reconnection, evaluate each closed curve as 3.
/// Slot order is read as the counterclockwise rotation; virtual crossings of
/// an immersion are invisible here, so the value is defined for virtual
/// trivalent graphs (and counts colorings exactly on planar ones).
pub fn penrose_bracket(g: &WebGraph) -> Result<i64, PenroseError> {
    check_trivalent(g)?;
    Ok(penrose_rec(g))
}

fn penrose_rec(g: &WebGraph) -> i64 {
    // find an edge joining two distinct vertices
    let mut pick = None;
    for (a, b) in g.edges() {
        if g.owner(a) == g.owner(b) {
            return 0; // a vertex with a self-loop contracts to zero
        }
        if pick.is_none() {
            pick = Some((a, b));
        }
    }
    let Some((a, b)) = pick else {
        return 3i64.pow(g.circles as u32);
    };
    let (u, v) = (g.owner(a), g.owner(b));
    // counterclockwise from the shared edge
    let next = |d: usize| {
        let ds = g.vertex_darts(g.owner(d));
        ds[(g.slot(d) + 1) % ds.len()]
    };
    let (x1, x2) = (next(a), next(next(a)));
    let (y1, y2) = (next(b), next(next(b)));
    let removed: BTreeSet<usize> = [u, v].into_iter().collect();
    let parallel = g.surgery(&removed, &[(x1, y2), (x2, y1)], &[]);
    let crossed = g.surgery(&removed, &[(x1, y1), (x2, y2)], &[]);
    penrose_rec(&parallel) - penrose_rec(&crossed)
}

/// Forget an sl(3) web's orientation, keeping the slot order as rotation.
pub fn underlying_plain(g: &WebGraph) -> WebGraph {
    let mut h = WebGraph::new();
    h.circles = g.circles;
    for v in 0..g.num_vertices() {
        let k = match g.kind(v) {
            VertexKind::Source | VertexKind::Sink | VertexKind::Plain => VertexKind::Plain,
            other => other,
        };
        h.add_vertex(k);
    }
    for (a, b) in g.edges() {
        h.connect(
            h.dart(g.owner(a), g.slot(a)),
            h.dart(g.owner(b), g.slot(b)),
        );
    }
    h
}

/// Test-harness operation: on an oriented planar web the sl(3) bracket at
/// A = 1 is a scalar equal to the Penrose bracket of the underlying graph.
pub fn sl3_at_one_equals_penrose(g: &WebGraph) -> Result<bool, PenroseError> {
    let sl3 = crate::web::reduce::Sl3Reducer::new().reduce(g);
    if !sl3.is_scalar() {
        return Ok(false);
    }
    let at_one = sl3.scalar_part().eval_at_sign(1);
    Ok(at_one == penrose_bracket(&underlying_plain(g))?)
}

/// Component evenness: every unicursal component meets the others in an even
/// number of crossings (equivalently its walk length is even).
pub fn componentwise_even(fg: &FramedGraph) -> bool {
    let comps = fg.strand_components();
    let mut lengths: HashMap<usize, usize> = HashMap::new();
    for d in 0..fg.web.num_darts() {
        *lengths.entry(comps[d]).or_default() += 1;
    }
    // each vertex passage consumes 2 darts of its component; the walk length
    // (edges traversed) is darts/2, which must be even
    lengths.values().all(|&n| (n / 2) % 2 == 0)
}

/// A 2-coloring of the edges (colors 1, 2 with opposite edges differently
/// colored), when one exists; `None` otherwise.  Exists iff the diagram is
/// componentwise even.
pub fn two_coloring(fg: &FramedGraph) -> Option<Vec<u8>> {
    let edges = fg.web.edges();
    let edge_index: HashMap<usize, usize> =
        edges.iter().enumerate().flat_map(|(i, &(a, b))| [(a, i), (b, i)]).collect();
    let mut colors = vec![0u8; edges.len()];
    let nd = fg.web.num_darts();
    let mut visited = vec![false; nd];
    for d0 in 0..nd {
        if visited[d0] {
            continue;
        }
        // walk the strand, alternating colors
        let mut d = d0;
        let mut color = 1u8;
        loop {
            visited[d] = true;
            let e = edge_index[&d];
            if colors[e] != 0 && colors[e] != color {
                return None; // odd walk
            }
            colors[e] = color;
            color = 3 - color;
            let exit = fg.opposite(d);
            visited[exit] = true;
            d = fg.web.partner(exit);
            if d == d0 {
                break;
            }
        }
        // closing parity: the first edge must disagree with the last color
        // (already enforced by the recoloring check above)
    }
    // verify
    for v in 0..fg.web.num_vertices() {
        for s in 0..4 {
            let e1 = edge_index[&fg.web.dart(v, s)];
            let e2 = edge_index[&fg.web.dart(v, (s + 2) % 4)];
            if colors[e1] == colors[e2] {
                return None;
            }
        }
    }
    Some(colors)
}

/// Translate a properly edge-3-colored trivalent graph into a 2-colored free
/// link diagram: the color-3 edges form a perfect matching; contracting each
/// one yields a framed node whose opposite pairs take one edge from each
/// side, and the remaining colors 1, 2 follow along.
pub fn colored_graph_to_free_link(
    g: &WebGraph,
    colors: &[u8],
) -> Result<(FramedGraph, Vec<u8>), PenroseError> {
    check_trivalent(g)?;
    let edges = g.edges();
    if colors.len() != edges.len() {
        return Err(PenroseError::MissingColor(colors.len()));
    }
    let edge_index: HashMap<usize, usize> =
        edges.iter().enumerate().flat_map(|(i, &(a, b))| [(a, i), (b, i)]).collect();
    for v in 0..g.num_vertices() {
        let mut cs: Vec<u8> = g.vertex_darts(v).iter().map(|d| colors[edge_index[d]]).collect();
        cs.sort_unstable();
        if cs != vec![1, 2, 3] {
            return Err(PenroseError::ImproperColoring(v));
        }
    }
    let mut web = WebGraph::new();
    web.circles = g.circles;
    // one framed node per color-3 edge
    let matching: Vec<(usize, usize)> = edges
        .iter()
        .enumerate()
        .filter(|(i, _)| colors[*i] == 3)
        .map(|(_, &e)| e)
        .collect();
    let mut node_of_vertex: HashMap<usize, (usize, usize)> = HashMap::new(); // trivalent vertex -> (node, side)
    for (k, &(da, db)) in matching.iter().enumerate() {
        let node = web.add_vertex(VertexKind::Node4);
        node_of_vertex.insert(g.owner(da), (node, 0));
        node_of_vertex.insert(g.owner(db), (node, 1));
        let _ = k;
    }
    // slots: side 0 holds slots (0,1), side 1 holds (2,3); framing pairs
    // (0,2) and (1,3) then take one edge from each side; put color 1 on
    // slots 0 and 2? colors must differ across pairs: slot0=color1@side0,
    // slot2=color2@side1, slot1=color2@side0, slot3=color1@side1.
    let mut out_colors: HashMap<(usize, usize), u8> = HashMap::new();
    let mut dart_map: HashMap<usize, usize> = HashMap::new(); // trivalent dart -> node dart
    for v in 0..g.num_vertices() {
        let &(node, side) = node_of_vertex.get(&v).ok_or(PenroseError::ImproperColoring(v))?;
        for &d in g.vertex_darts(v) {
            let c = colors[edge_index[&d]];
            if c == 3 {
                continue;
            }
            let slot = match (side, c) {
                (0, 1) => 0,
                (0, 2) => 1,
                (1, 2) => 2,
                (1, 1) => 3,
                _ => unreachable!(),
            };
            dart_map.insert(d, web.dart(node, slot));
            out_colors.insert((node, slot), c);
        }
    }
    for (i, &(a, b)) in edges.iter().enumerate() {
        if colors[i] == 3 {
            continue;
        }
        web.connect(dart_map[&a], dart_map[&b]);
    }
    let fg = FramedGraph { web, outgoing: None };
    let fedges = fg.web.edges();
    let ecolors: Vec<u8> = fedges
        .iter()
        .map(|&(a, _)| out_colors[&(fg.web.owner(a), fg.web.slot(a))])
        .collect();
    Ok((fg, ecolors))
}

/// The reverse translation: expand every framed node of a 2-colored free
/// link into two trivalent vertices joined by a color-3 edge.
pub fn free_link_to_colored_graph(
    fg: &FramedGraph,
    coloring: &[u8],
) -> Result<(WebGraph, Vec<u8>), PenroseError> {
    let edges = fg.web.edges();
    let edge_index: HashMap<usize, usize> =
        edges.iter().enumerate().flat_map(|(i, &(a, b))| [(a, i), (b, i)]).collect();
    let mut g = WebGraph::new();
    g.circles = fg.web.circles;
    let mut dart_map: HashMap<usize, usize> = HashMap::new();
    for v in 0..fg.web.num_vertices() {
        let u1 = g.add_vertex(VertexKind::Plain);
        let u2 = g.add_vertex(VertexKind::Plain);
        g.connect(g.dart(u1, 2), g.dart(u2, 2));
        // side 0 = slots (0,1), side 1 = (2,3), as in the forward direction
        dart_map.insert(fg.web.dart(v, 0), g.dart(u1, 0));
        dart_map.insert(fg.web.dart(v, 1), g.dart(u1, 1));
        dart_map.insert(fg.web.dart(v, 2), g.dart(u2, 0));
        dart_map.insert(fg.web.dart(v, 3), g.dart(u2, 1));
        // opposite edges must carry different colors
        for s in 0..2usize {
            let c1 = coloring[edge_index[&fg.web.dart(v, s)]];
            let c2 = coloring[edge_index[&fg.web.dart(v, s + 2)]];
            if c1 == c2 || c1 == 0 || c2 == 0 {
                return Err(PenroseError::ImproperColoring(v));
            }
        }
    }
    for &(a, b) in &edges {
        g.connect(dart_map[&a], dart_map[&b]);
    }
    let gedges = g.edges();
    let gcolors: Vec<u8> = gedges
        .iter()
        .map(|&(a, b)| {
            // color-3 rungs are the new internal edges
            let sa = g.slot(a);
            let sb = g.slot(b);
            if sa == 2 && sb == 2 {
                3
            } else {
                // recover the original edge's color
                let orig = dart_map.iter().find(|&(_, &nd)| nd == a).map(|(&od, _)| od).unwrap();
                coloring[edge_index[&orig]]
            }
        })
        .collect();
    Ok((g, gcolors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_gauss;
    use crate::web::testutil::{cube_sl3, theta_sl3};

    fn theta_plain() -> WebGraph {
        // planar rotations
        let mut g = WebGraph::new();
        let s = g.add_vertex(VertexKind::Plain);
        let t = g.add_vertex(VertexKind::Plain);
        g.connect(g.dart(s, 0), g.dart(t, 0));
        g.connect(g.dart(s, 1), g.dart(t, 2));
        g.connect(g.dart(s, 2), g.dart(t, 1));
        g
    }

    fn k4_planar() -> WebGraph {
        // K4 embedded in the plane: outer triangle 0,1,2 (0 on top) and
        // center 3; counterclockwise rotations read off the drawing:
        //   v0: (to1, to3, to2)   v1: (to2, to3, to0)
        //   v2: (to0, to3, to1)   v3: (to0, to1, to2)
        let mut g = WebGraph::new();
        for _ in 0..4 {
            g.add_vertex(VertexKind::Plain);
        }
        g.connect(g.dart(0, 0), g.dart(1, 2)); // 0-1
        g.connect(g.dart(0, 2), g.dart(2, 0)); // 0-2
        g.connect(g.dart(0, 1), g.dart(3, 0)); // 0-3
        g.connect(g.dart(1, 0), g.dart(2, 2)); // 1-2
        g.connect(g.dart(1, 1), g.dart(3, 1)); // 1-3
        g.connect(g.dart(2, 1), g.dart(3, 2)); // 2-3
        g
    }

    /// The cube with planar rotations (outer square A0..A3, inner B0..B3)
    /// and the bipartite sl(3) orientation.
    fn cube_planar_sl3() -> WebGraph {
        let mut g = WebGraph::new();
        let a: Vec<usize> = (0..4)
            .map(|i| {
                g.add_vertex(if i % 2 == 0 { VertexKind::Source } else { VertexKind::Sink })
            })
            .collect();
        let b: Vec<usize> = (0..4)
            .map(|i| {
                g.add_vertex(if i % 2 == 1 { VertexKind::Source } else { VertexKind::Sink })
            })
            .collect();
        // rotations: at A_i: (A_{i+1}, B_i, A_{i-1}); at B_i: (A_i, B_{i+1}, B_{i-1})
        for i in 0..4usize {
            let j = (i + 1) % 4;
            g.connect(g.dart(a[i], 0), g.dart(a[j], 2)); // A_i - A_{i+1}
            g.connect(g.dart(b[i], 1), g.dart(b[j], 2)); // B_i - B_{i+1}
            g.connect(g.dart(a[i], 1), g.dart(b[i], 0)); // spoke
        }
        g
    }

    #[test]
    fn coloring_counts() {
        assert_eq!(count_edge_3_colorings(&theta_plain()).unwrap(), 6);
        assert_eq!(count_edge_3_colorings(&k4_planar()).unwrap(), 6);
        // dumbbell: two tadpoles joined by a bridge
        let mut g = WebGraph::new();
        let a = g.add_vertex(VertexKind::Plain);
        let b = g.add_vertex(VertexKind::Plain);
        g.connect(g.dart(a, 0), g.dart(a, 1));
        g.connect(g.dart(b, 0), g.dart(b, 1));
        g.connect(g.dart(a, 2), g.dart(b, 2));
        assert_eq!(count_edge_3_colorings(&g).unwrap(), 0);
        assert_eq!(penrose_bracket(&g).unwrap(), 0);
    }

    #[test]
    fn circle_evaluates_to_three() {
        let mut g = WebGraph::new();
        g.circles = 1;
        assert_eq!(penrose_bracket(&g).unwrap(), 3);
    }

    #[test]
    fn penrose_equals_colorings_on_planar_examples() {
        for g in [theta_plain(), k4_planar()] {
            let (genus, _) = crate::web::genus::genus(&g);
            assert_eq!(genus, 0, "example must be planar");
            assert_eq!(
                penrose_bracket(&g).unwrap(),
                count_edge_3_colorings(&g).unwrap() as i64
            );
        }
    }

    #[test]
    fn sl3_at_one_matches_penrose() {
        // planar-rotated sl(3) theta
        let mut th = WebGraph::new();
        let s = th.add_vertex(VertexKind::Source);
        let t = th.add_vertex(VertexKind::Sink);
        th.connect(th.dart(s, 0), th.dart(t, 0));
        th.connect(th.dart(s, 1), th.dart(t, 2));
        th.connect(th.dart(s, 2), th.dart(t, 1));
        assert_eq!(crate::web::genus::genus(&th).0, 0);
        assert!(sl3_at_one_equals_penrose(&th).unwrap());
        assert_eq!(penrose_bracket(&underlying_plain(&th)).unwrap(), 6);

        let cube = cube_planar_sl3();
        assert_eq!(crate::web::genus::genus(&cube).0, 0);
        assert!(sl3_at_one_equals_penrose(&cube).unwrap());
        // abstract sl(3) values agree between the two cube presentations
        let v1 = crate::web::reduce::Sl3Reducer::new().reduce(&cube);
        let v2 = crate::web::reduce::Sl3Reducer::new().reduce(&cube_sl3());
        assert_eq!(v1, v2);
        let _ = theta_sl3; // twisted-rotation builders stay for abstract tests
    }

    #[test]
    fn evenness_and_two_colorings() {
        // one-component diagrams are componentwise even
        let d = parse_gauss("1,2,1,2").unwrap().to_framed_graph();
        assert!(componentwise_even(&d));
        assert!(two_coloring(&d).is_some());

        // two components crossing once: odd
        let l = parse_gauss("1;1").unwrap().to_framed_graph();
        assert!(!componentwise_even(&l));
        assert!(two_coloring(&l).is_none());

        // two components crossing twice: even
        let l2 = parse_gauss("1,2;1,2").unwrap().to_framed_graph();
        assert!(componentwise_even(&l2));
        assert!(two_coloring(&l2).is_some());
    }

    #[test]
    fn translation_round_trip() {
        // properly 3-color K4: its 6 edges split into three perfect
        // matchings; find one coloring by brute force
        let g = k4_planar();
        let edges = g.edges();
        let mut found = None;
        'outer: for mask in 0..3u32.pow(edges.len() as u32) {
            let mut m = mask;
            let colors: Vec<u8> = (0..edges.len())
                .map(|_| {
                    let c = (m % 3) as u8 + 1;
                    m /= 3;
                    c
                })
                .collect();
            for v in 0..g.num_vertices() {
                let mut cs: Vec<u8> = g
                    .vertex_darts(v)
                    .iter()
                    .map(|d| {
                        let i = edges
                            .iter()
                            .position(|&(a, b)| a == *d || b == *d)
                            .unwrap();
                        colors[i]
                    })
                    .collect();
                cs.sort_unstable();
                if cs != vec![1, 2, 3] {
                    continue 'outer;
                }
            }
            found = Some(colors);
            break;
        }
        let colors = found.expect("K4 is 3-edge-colorable");
        let (fg, fcolors) = colored_graph_to_free_link(&g, &colors).unwrap();
        // a perfect matching of K4 has two edges, hence two framed nodes
        assert_eq!(fg.web.num_vertices(), 2);
        assert!(componentwise_even(&fg));
        // the inherited coloring is a valid 2-coloring
        for (i, c) in fcolors.iter().enumerate() {
            assert!(*c == 1 || *c == 2, "edge {i}");
        }
        let (g2, c2) = free_link_to_colored_graph(&fg, &fcolors).unwrap();
        // round trip: same coloring count and a proper coloring again
        let (fg2, _) = colored_graph_to_free_link(&g2, &c2).unwrap();
        assert_eq!(fg2.web.num_vertices(), fg.web.num_vertices());
        assert_eq!(
            crate::web::canon::canonical_closed(&fg2.web)
                .into_iter()
                .map(|(k, _)| k)
                .collect::<Vec<_>>(),
            crate::web::canon::canonical_closed(&fg.web)
                .into_iter()
                .map(|(k, _)| k)
                .collect::<Vec<_>>()
        );
    }
}
