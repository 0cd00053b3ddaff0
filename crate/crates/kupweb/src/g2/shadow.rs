//! Exact scalar evaluation of G2 webs through the 7-dimensional cross
//! product: vertices contract against the structure tensor of the octonion
//! cross product, edges against the metric, circles count 7.
//!
//! This is the independent second entry for the reduction constants in
//! [`super::relations`]: every local relation the rewriter applies is also an
//! identity of these tensors, and the test suite solves for the coefficients
//! from scratch here and compares them against the shipped table.

use super::super::web::{VertexKind, WebGraph};

/// Fano-plane triples of the octonion cross product (1-indexed).
const TRIPLES: [[usize; 3]; 7] =
    [[1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 7], [5, 6, 1], [6, 7, 2], [7, 1, 3]];

/// The totally antisymmetric structure tensor ε with ε(e_i × e_j, e_k) on the
/// listed triples equal to +1.
pub fn epsilon() -> [[[i8; 7]; 7]; 7] {
    let mut eps = [[[0i8; 7]; 7]; 7];
    for t in TRIPLES {
        let (a, b, c) = (t[0] - 1, t[1] - 1, t[2] - 1);
        for (i, j, k, s) in [
            (a, b, c, 1i8),
            (b, c, a, 1),
            (c, a, b, 1),
            (b, a, c, -1),
            (a, c, b, -1),
            (c, b, a, -1),
        ] {
            eps[i][j][k] = s;
        }
    }
    eps
}

/// Contract a closed-or-open G2 web.  `legs` lists End vertices in the order
/// of the output index (mixed radix, base 7, first leg most significant).
/// All non-End vertices must be `Plain`; their stored slot order is the
/// tensor index order.
pub fn contract(g: &WebGraph, legs: &[usize]) -> Vec<i64> {
    let eps = epsilon();
    // assign one variable per edge
    let edges = g.edges();
    let mut var_of_dart = vec![usize::MAX; g.num_darts()];
    for (i, &(a, b)) in edges.iter().enumerate() {
        var_of_dart[a] = i;
        var_of_dart[b] = i;
    }
    let leg_vars: Vec<usize> = legs
        .iter()
        .map(|&v| {
            assert_eq!(g.kind(v), VertexKind::End);
            var_of_dart[g.dart(v, 0)]
        })
        .collect();
    let verts: Vec<usize> =
        (0..g.num_vertices()).filter(|&v| g.kind(v) != VertexKind::End).collect();
    for &v in &verts {
        assert_eq!(g.kind(v), VertexKind::Plain, "shadow contraction is for G2 webs");
    }
    let vert_vars: Vec<[usize; 3]> = verts
        .iter()
        .map(|&v| {
            let ds = g.vertex_darts(v);
            [var_of_dart[ds[0]], var_of_dart[ds[1]], var_of_dart[ds[2]]]
        })
        .collect();

    let n_cells = 7usize.pow(legs.len() as u32);
    let circle_factor = 7i64.pow(g.circles as u32);
    let mut out = vec![0i64; n_cells];

    let mut assign = vec![usize::MAX; edges.len()];
    for (cell, slot) in out.iter_mut().enumerate() {
        for a in assign.iter_mut() {
            *a = usize::MAX;
        }
        let mut idx = cell;
        let mut ok = true;
        for li in (0..leg_vars.len()).rev() {
            let val = idx % 7;
            idx /= 7;
            let var = leg_vars[li];
            if assign[var] != usize::MAX && assign[var] != val {
                ok = false; // two legs on the same edge with different colors
                break;
            }
            assign[var] = val;
        }
        if !ok {
            continue;
        }
        *slot = circle_factor * eval(&eps, &vert_vars, &mut assign, 0);
    }
    out
}

fn candidates(v: usize) -> std::ops::Range<usize> {
    if v == usize::MAX {
        0..7
    } else {
        v..v + 1
    }
}

fn eval(
    eps: &[[[i8; 7]; 7]; 7],
    verts: &[[usize; 3]],
    assign: &mut Vec<usize>,
    vi: usize,
) -> i64 {
    if vi == verts.len() {
        return 1;
    }
    let [a, b, c] = verts[vi];
    let mut total = 0i64;
    // slots may alias the same edge variable (self-loops), so snapshot each
    // level only after the previous one is written
    let sa = assign[a];
    for x in candidates(sa) {
        assign[a] = x;
        let sb = assign[b];
        for y in candidates(sb) {
            assign[b] = y;
            let sc = assign[c];
            for z in candidates(sc) {
                assign[c] = z;
                let e = eps[x][y][z];
                if e != 0 {
                    total += e as i64 * eval(eps, verts, assign, vi + 1);
                }
                assign[c] = sc;
            }
            assign[b] = sb;
        }
        assign[a] = sa;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_is_a_cross_product() {
        let eps = epsilon();
        // ε_{ijk} ε_{ljk} = 6 δ_{il}
        for i in 0..7 {
            for l in 0..7 {
                let mut s = 0i64;
                for j in 0..7 {
                    for k in 0..7 {
                        s += (eps[i][j][k] * eps[l][j][k]) as i64;
                    }
                }
                assert_eq!(s, if i == l { 6 } else { 0 });
            }
        }
        // x×(x×y) = <x,y>x − |x|²y on basis vectors:
        // Σ_k ε_{iak} ε_{kib} = δ_{ia}δ_{ib}... checked as e_i×(e_i×e_j)
        for i in 0..7 {
            for j in 0..7 {
                // (e_i × e_j) = Σ_k eps[i][j][k] e_k; e_i × that
                let mut v = [0i64; 7];
                for k in 0..7 {
                    if eps[i][j][k] != 0 {
                        for m in 0..7 {
                            v[m] += (eps[i][k][m] * eps[i][j][k]) as i64;
                        }
                    }
                }
                for m in 0..7 {
                    let expect = if i == j {
                        // <e_i,e_j> e_i - |e_i|² e_j = e_i - e_i = 0 when i=j
                        0
                    } else if m == j {
                        -1
                    } else {
                        0
                    };
                    assert_eq!(v[m], expect, "i={i} j={j} m={m}");
                }
            }
        }
    }

    #[test]
    fn circle_counts_seven() {
        let mut g = WebGraph::new();
        g.circles = 1;
        assert_eq!(contract(&g, &[]), vec![7]);
    }

    #[test]
    fn single_edge_is_metric() {
        let mut g = WebGraph::new();
        let a = g.add_vertex(VertexKind::End);
        let b = g.add_vertex(VertexKind::End);
        g.connect(g.dart(a, 0), g.dart(b, 0));
        let t = contract(&g, &[a, b]);
        for x in 0..7 {
            for y in 0..7 {
                assert_eq!(t[x * 7 + y], i64::from(x == y));
            }
        }
    }

    #[test]
    fn vertex_is_epsilon() {
        let mut g = WebGraph::new();
        let v = g.add_vertex(VertexKind::Plain);
        let ends: Vec<usize> = (0..3).map(|_| g.add_vertex(VertexKind::End)).collect();
        for (i, &e) in ends.iter().enumerate() {
            g.connect(g.dart(v, i), g.dart(e, 0));
        }
        let t = contract(&g, &ends);
        let eps = epsilon();
        for x in 0..7 {
            for y in 0..7 {
                for z in 0..7 {
                    assert_eq!(t[(x * 7 + y) * 7 + z], eps[x][y][z] as i64);
                }
            }
        }
    }
}
