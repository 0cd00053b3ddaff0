//! The q = 1 local reduction rules of the G2 bracket, as one constants table.
//!
//! Every relation is stated for a reference presentation of the polygon: the
//! k-gon is drawn with vertices counterclockwise, and vertex `i` carries the
//! ordered triple `(external_i, edge to vertex i+1, edge to vertex i-1)`.
//! Replacement diagrams are encoded by which external legs they join (`joins`)
//! and which new ordered vertices they introduce (`verts`, slots hooking
//! either an external leg or a fresh internal edge).  A polygon found in an
//! arbitrary graph is first reordered into the reference presentation, each
//! odd vertex reordering contributing a factor −1.
//!
//! The numbers are pinned by a double entry: the same diagrams are contracted
//! exactly in the 7-dimensional cross-product model ([`super::shadow`]), and
//! the test below re-derives every coefficient from scratch; any mismatch
//! fails the build.

use num_rational::Rational64;

/// One replacement diagram with its coefficient.
#[derive(Clone, Debug)]
pub struct G2Term {
    pub coeff: Rational64,
    /// Pairs of external-leg indices joined by an arc.
    pub joins: Vec<(usize, usize)>,
    /// New vertices; each slot hooks an external leg or a fresh edge label.
    pub verts: Vec<Vec<Slot>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Ext(usize),
    Fresh(usize),
}

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// Value of a crossing-free circle.
pub fn g2_loop_value() -> Rational64 {
    r(7, 1)
}

/// Replacement terms for a reduced k-gon, k = 1..=5.
///
/// * 1-gon (vertex with a self-loop): zero.
/// * bigon: single arc, coefficient −6.
/// * triangle: one vertex, coefficient 3.
/// * square: both adjacent-arc pairings with coefficient 3, both rungs with
///   coefficient −2.
/// * pentagon: the five arc-plus-vertex diagrams with coefficient −1, the
///   five caterpillar trees with coefficient 1.
pub fn g2_rhs(k: usize) -> Vec<G2Term> {
    match k {
        1 => Vec::new(),
        2 => vec![G2Term { coeff: r(-6, 1), joins: vec![(0, 1)], verts: vec![] }],
        3 => vec![G2Term {
            coeff: r(3, 1),
            joins: vec![],
            verts: vec![vec![Slot::Ext(0), Slot::Ext(1), Slot::Ext(2)]],
        }],
        4 => vec![
            G2Term { coeff: r(3, 1), joins: vec![(0, 1), (2, 3)], verts: vec![] },
            G2Term { coeff: r(3, 1), joins: vec![(1, 2), (3, 0)], verts: vec![] },
            G2Term {
                coeff: r(-2, 1),
                joins: vec![],
                verts: vec![
                    vec![Slot::Fresh(0), Slot::Ext(0), Slot::Ext(1)],
                    vec![Slot::Fresh(0), Slot::Ext(2), Slot::Ext(3)],
                ],
            },
            G2Term {
                coeff: r(-2, 1),
                joins: vec![],
                verts: vec![
                    vec![Slot::Fresh(0), Slot::Ext(1), Slot::Ext(2)],
                    vec![Slot::Fresh(0), Slot::Ext(3), Slot::Ext(0)],
                ],
            },
        ],
        5 => {
            let mut terms = Vec::new();
            for i in 0..5 {
                let e = |j: usize| Slot::Ext((i + j) % 5);
                terms.push(G2Term {
                    coeff: r(-1, 1),
                    joins: vec![(i, (i + 1) % 5)],
                    verts: vec![vec![e(2), e(3), e(4)]],
                });
                terms.push(G2Term {
                    coeff: r(1, 1),
                    joins: vec![],
                    verts: vec![
                        vec![e(0), e(1), Slot::Fresh(0)],
                        vec![Slot::Fresh(0), e(2), Slot::Fresh(1)],
                        vec![Slot::Fresh(1), e(3), e(4)],
                    ],
                });
            }
            terms
        }
        _ => panic!("no reduction for {k}-gons"),
    }
}

/// The four local states of the flat-crossing expansion and their weights.
///
/// The framed vertex is presented with its counterclockwise rotation
/// `(a, b, c, d)`, opposite pairs `(a,c)` and `(b,d)`.  External leg indices
/// below refer to that order.  Every weight is 1/2; in particular each edge
/// resolution carries 1/2, so a leading state of an n-vertex graph has
/// weight exactly 1/2^n.
pub fn g2_crossing_expansion() -> Vec<G2Term> {
    vec![
        // smoothing {a-b}, {c-d}
        G2Term { coeff: r(1, 2), joins: vec![(0, 1), (2, 3)], verts: vec![] },
        // smoothing {b-c}, {d-a}
        G2Term { coeff: r(1, 2), joins: vec![(1, 2), (3, 0)], verts: vec![] },
        // edge resolution, south/north rung
        G2Term {
            coeff: r(1, 2),
            joins: vec![],
            verts: vec![
                vec![Slot::Ext(0), Slot::Ext(1), Slot::Fresh(0)],
                vec![Slot::Ext(2), Slot::Ext(3), Slot::Fresh(0)],
            ],
        },
        // edge resolution, west/east rung
        G2Term {
            coeff: r(1, 2),
            joins: vec![],
            verts: vec![
                vec![Slot::Fresh(0), Slot::Ext(1), Slot::Ext(2)],
                vec![Slot::Fresh(0), Slot::Ext(3), Slot::Ext(0)],
            ],
        },
    ]
}

/// Whether a crossing-expansion term is an edge resolution (used to pick out
/// leading states).
pub fn is_edge_resolution(t: &G2Term) -> bool {
    !t.verts.is_empty()
}

#[cfg(test)]
mod tests {
    use super::super::shadow;
    use super::*;
    use crate::web::{VertexKind, WebGraph};

    /// Build the reference k-gon with k external End legs; returns the graph
    /// and the leg End-vertex ids in order.
    fn reference_polygon(k: usize) -> (WebGraph, Vec<usize>) {
        let mut g = WebGraph::new();
        let vs: Vec<usize> = (0..k).map(|_| g.add_vertex(VertexKind::Plain)).collect();
        let ends: Vec<usize> = (0..k).map(|_| g.add_vertex(VertexKind::End)).collect();
        for i in 0..k {
            g.connect(g.dart(vs[i], 0), g.dart(ends[i], 0));
        }
        if k == 1 {
            g.connect(g.dart(vs[0], 1), g.dart(vs[0], 2));
        } else {
            for i in 0..k {
                // slot 1 = edge to next, slot 2 = edge to previous
                g.connect(g.dart(vs[i], 1), g.dart(vs[(i + 1) % k], 2));
            }
        }
        (g, ends)
    }

    /// Build a replacement term as a standalone web on k legs.
    fn term_web(k: usize, t: &G2Term) -> (WebGraph, Vec<usize>) {
        let mut g = WebGraph::new();
        let ends: Vec<usize> = (0..k).map(|_| g.add_vertex(VertexKind::End)).collect();
        for &(i, j) in &t.joins {
            g.connect(g.dart(ends[i], 0), g.dart(ends[j], 0));
        }
        let vs: Vec<usize> = t.verts.iter().map(|_| g.add_vertex(VertexKind::Plain)).collect();
        let mut fresh: std::collections::HashMap<usize, (usize, usize)> = Default::default();
        for (vi, slots) in t.verts.iter().enumerate() {
            for (si, s) in slots.iter().enumerate() {
                match s {
                    Slot::Ext(i) => g.connect(g.dart(vs[vi], si), g.dart(ends[*i], 0)),
                    Slot::Fresh(l) => {
                        if let Some(&(wi, ws)) = fresh.get(l) {
                            g.connect(g.dart(vs[vi], si), g.dart(vs[wi], ws));
                        } else {
                            fresh.insert(*l, (vi, si));
                        }
                    }
                }
            }
        }
        (g, ends)
    }

    fn tensor_of_term(k: usize, t: &G2Term) -> Vec<Rational64> {
        let (g, ends) = term_web(k, t);
        shadow::contract(&g, &ends).into_iter().map(|x| Rational64::from_integer(x)).collect()
    }

    /// Exact solve of A x = b; panics if inconsistent, returns None if the
    /// solution is underdetermined.
    fn solve_exact(a: &[Vec<Rational64>], b: &[Rational64]) -> Option<Vec<Rational64>> {
        let rows = a.len();
        let cols = a[0].len();
        let mut m: Vec<Vec<Rational64>> = a
            .iter()
            .zip(b)
            .map(|(row, rhs)| {
                let mut r = row.clone();
                r.push(*rhs);
                r
            })
            .collect();
        let mut piv_row = 0;
        let mut piv_cols = Vec::new();
        for c in 0..cols {
            let Some(rsel) = (piv_row..rows).find(|&r| m[r][c] != Rational64::from_integer(0))
            else {
                continue;
            };
            m.swap(piv_row, rsel);
            let inv = m[piv_row][c].recip();
            for x in m[piv_row].iter_mut() {
                *x *= inv;
            }
            for r in 0..rows {
                if r != piv_row && m[r][c] != Rational64::from_integer(0) {
                    let f = m[r][c];
                    for cc in 0..=cols {
                        let sub = f * m[piv_row][cc];
                        m[r][cc] -= sub;
                    }
                }
            }
            piv_cols.push(c);
            piv_row += 1;
            if piv_row == rows {
                break;
            }
        }
        // check consistency
        for r in piv_row..rows {
            assert_eq!(m[r][cols], Rational64::from_integer(0), "inconsistent system");
        }
        if piv_cols.len() < cols {
            return None;
        }
        let mut x = vec![Rational64::from_integer(0); cols];
        for (i, &c) in piv_cols.iter().enumerate() {
            x[c] = m[i][cols];
        }
        Some(x)
    }

    #[test]
    fn loop_value_is_dimension() {
        assert_eq!(g2_loop_value(), Rational64::from_integer(7));
    }

    #[test]
    fn tadpole_contracts_to_zero() {
        let (g, ends) = reference_polygon(1);
        let t = shadow::contract(&g, &ends);
        assert!(t.iter().all(|&x| x == 0));
    }

    #[test]
    fn polygon_relations_match_shadow_solve() {
        for k in 2..=5usize {
            let (lhs_g, lhs_ends) = reference_polygon(k);
            let lhs: Vec<Rational64> = shadow::contract(&lhs_g, &lhs_ends)
                .into_iter()
                .map(Rational64::from_integer)
                .collect();
            let table = g2_rhs(k);
            let columns: Vec<Vec<Rational64>> =
                table.iter().map(|t| tensor_of_term(k, t)).collect();
            let cells = lhs.len();
            let a: Vec<Vec<Rational64>> =
                (0..cells).map(|r| columns.iter().map(|c| c[r]).collect()).collect();
            let solved = solve_exact(&a, &lhs)
                .unwrap_or_else(|| panic!("{k}-gon relation underdetermined"));
            let shipped: Vec<Rational64> = table.iter().map(|t| t.coeff).collect();
            assert_eq!(solved, shipped, "{k}-gon coefficients: solved {solved:?}");
        }
    }

    #[test]
    fn crossing_expansion_matches_transposition() {
        // LHS: the flat crossing evaluates as the transposition tensor
        // δ(a,c) δ(b,d) on legs (a,b,c,d)
        let cells = 7usize.pow(4);
        let mut lhs = vec![Rational64::from_integer(0); cells];
        for (cell, v) in lhs.iter_mut().enumerate() {
            let d = cell % 7;
            let c = (cell / 7) % 7;
            let b = (cell / 49) % 7;
            let a = cell / 343;
            if a == c && b == d {
                *v = Rational64::from_integer(1);
            }
        }
        let table = g2_crossing_expansion();
        let columns: Vec<Vec<Rational64>> = table.iter().map(|t| tensor_of_term(4, t)).collect();
        let a: Vec<Vec<Rational64>> =
            (0..cells).map(|r| columns.iter().map(|c| c[r]).collect()).collect();
        let solved = solve_exact(&a, &lhs).expect("crossing expansion underdetermined");
        let shipped: Vec<Rational64> = table.iter().map(|t| t.coeff).collect();
        assert_eq!(solved, shipped, "crossing coefficients: solved {solved:?}");
    }
}
