//! The generalized Kuperberg sl(3) bracket for virtual diagrams: the
//! two-state expansion per crossing, writhe normalization, free
//! specializations, the all-unoriented state, and minimality certificates.

use crate::diagram::ChordDiagram;
use crate::poly::{GraphPolynomial, LaurentPoly};
use crate::web::polygons::find_polygons;
use crate::web::reduce::Sl3Reducer;
use crate::web::{VertexKind, WebGraph, Wiring};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Choice {
    Oriented,
    Unoriented,
}

/// One state of the expansion: a choice per crossing, the weight monomial,
/// and the resulting web.
pub struct Sl3State {
    pub choices: Vec<Choice>,
    pub weight: LaurentPoly<i64>,
    pub graph: WebGraph,
}

/// Build the state graph for one choice vector.  The diagram must be at the
/// virtual level (`ChordDiagram::to_virtual` lifts the others).
fn state_graph(d: &ChordDiagram, choices: &[Choice]) -> WebGraph {
    let mut g = WebGraph::new();
    // ports: 2 per token (in, out), indexed by global token position
    let mut token_pos = Vec::new(); // (circle, pos) in traversal order
    for (c, circ) in d.circles().iter().enumerate() {
        for p in 0..circ.len() {
            token_pos.push((c, p));
        }
    }
    let port = |ti: usize, out: bool| 2 * ti + usize::from(out);
    let mut w = Wiring::new(2 * token_pos.len());

    // arcs between consecutive passages
    let mut base = 0;
    for circ in d.circles() {
        let len = circ.len();
        if len == 0 {
            g.circles += 1;
            continue;
        }
        for i in 0..len {
            let j = (i + 1) % len;
            w.tie(port(base + i, true), port(base + j, false));
        }
        base += len;
    }

    // resolve each crossing
    for label in 1..=d.num_chords() {
        let ((c1, p1), (c2, p2)) = d.occurrences(label);
        let t1 = token_pos.iter().position(|&x| x == (c1, p1)).unwrap();
        let t2 = token_pos.iter().position(|&x| x == (c2, p2)).unwrap();
        match choices[label - 1] {
            Choice::Oriented => {
                // orientation-respecting reconnection: each inbound strand
                // leaves along the other passage's outgoing arc
                w.tie(port(t1, false), port(t2, true));
                w.tie(port(t2, false), port(t1, true));
            }
            Choice::Unoriented => {
                // the two inbound strands enter a sink, the outbound leave a
                // source, with the new edge oriented source -> sink
                let sink = g.add_vertex(VertexKind::Sink);
                let source = g.add_vertex(VertexKind::Source);
                w.plug(port(t1, false), sink, 0);
                w.plug(port(t2, false), sink, 1);
                w.plug(port(t1, true), source, 0);
                w.plug(port(t2, true), source, 1);
                g.connect(g.dart(source, 2), g.dart(sink, 2));
            }
        }
    }
    w.finish(&mut g);
    g
}

/// The 2^n states of a decorated diagram.
pub fn expand_states(d: &ChordDiagram) -> Vec<Sl3State> {
    let d = d.to_virtual();
    let n = d.num_chords();
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u64..(1 << n) {
        let choices: Vec<Choice> = (0..n)
            .map(|i| if mask >> i & 1 == 0 { Choice::Oriented } else { Choice::Unoriented })
            .collect();
        let mut weight = LaurentPoly::one();
        for (i, ch) in choices.iter().enumerate() {
            let s = i32::from(d.sign(i + 1).unwrap());
            let factor = match ch {
                Choice::Oriented => LaurentPoly::mono(2 * s, 1),
                Choice::Unoriented => LaurentPoly::mono(-s, -1),
            };
            weight = &weight * &factor;
        }
        let graph = state_graph(&d, &choices);
        out.push(Sl3State { choices, weight, graph });
    }
    out
}

/// `[[K]]` before writhe normalization.
pub fn unnormalized_bracket(d: &ChordDiagram) -> GraphPolynomial<i64> {
    let states = expand_states(d);
    let mut reducer = Sl3Reducer::new();
    let mut acc = GraphPolynomial::zero();
    for s in &states {
        acc = acc.add(&reducer.reduce(&s.graph).scale(&s.weight));
    }
    acc
}

/// The normalized bracket `A^{-8 wr(K)} [[K]]`, invariant under all
/// Reidemeister moves and the Z-move.
pub fn bracket(d: &ChordDiagram) -> GraphPolynomial<i64> {
    let dv = d.to_virtual();
    let wr = dv.writhe().expect("virtual lift") as i32;
    unnormalized_bracket(&dv).scale(&LaurentPoly::mono(-8 * wr, 1))
}

/// The free specialization: the bracket evaluated at `A = a ∈ {1,-1}`.
/// Invariant under crossing switches and virtualization as well.
pub fn free_bracket(d: &ChordDiagram, a: i8) -> GraphPolynomial<i64> {
    bracket(d).evaluate_a(a)
}

/// The all-unoriented state `K_us`.
pub fn unoriented_state(d: &ChordDiagram) -> WebGraph {
    let dv = d.to_virtual();
    let choices = vec![Choice::Unoriented; dv.num_chords()];
    state_graph(&dv, &choices)
}

/// Minimality and non-classicality certificates.
#[derive(Clone, Debug)]
pub struct MinimalityReport {
    /// `K_us` contains no bigon and no quadrilateral: every equivalent
    /// diagram has a state containing `K_us`, so the diagram is minimal and
    /// the knot non-trivial.
    pub kus_irreducible: bool,
    pub kus_vertices: usize,
    pub kus_girth: Option<usize>,
    /// Girth of the framed diagram graph; at least 5 forces the certificate
    /// above.
    pub diagram_girth: Option<usize>,
    pub girth_at_least_5: bool,
    pub bad_triangles: usize,
    pub bad_quadrilaterals: usize,
    pub special_quadrilaterals: usize,
}

impl MinimalityReport {
    pub fn minimal_certified(&self) -> bool {
        self.kus_irreducible
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kus_irreducible": self.kus_irreducible,
            "kus_vertices": self.kus_vertices,
            "kus_girth": self.kus_girth,
            "diagram_girth": self.diagram_girth,
            "girth_at_least_5": self.girth_at_least_5,
            "bad_triangles": self.bad_triangles,
            "bad_quadrilaterals": self.bad_quadrilaterals,
            "special_quadrilaterals": self.special_quadrilaterals,
            "minimal": self.minimal_certified(),
        })
    }
}

pub fn minimality_report(d: &ChordDiagram) -> MinimalityReport {
    let kus = unoriented_state(d);
    let kus_bigons = find_polygons(&kus, 1, 2);
    let kus_quads = find_polygons(&kus, 4, 4);
    let kus_irreducible = kus_bigons.is_empty() && kus_quads.is_empty();
    let fg = d.to_virtual().to_framed_graph();
    let diagram_girth = fg.girth();
    MinimalityReport {
        kus_irreducible,
        kus_vertices: kus.num_vertices(),
        kus_girth: crate::web::genus::girth(&kus),
        diagram_girth,
        girth_at_least_5: diagram_girth.map_or(true, |g| g >= 5),
        bad_triangles: fg.bad_triangles(),
        bad_quadrilaterals: fg.bad_quadrilaterals(),
        special_quadrilaterals: fg.special_quadrilaterals(),
    }
}

/// The free knot whose Gauss diagram is the n-gon: chord i at circle
/// positions 2i and 2i+3 (mod 2n), so chord i interleaves exactly i±1.
pub fn ngon_diagram(n: usize) -> ChordDiagram {
    assert!(n >= 3);
    let mut word = vec![0usize; 2 * n];
    for i in 0..n {
        word[(2 * i) % (2 * n)] = i + 1;
        word[(2 * i + 3) % (2 * n)] = i + 1;
    }
    let code: Vec<String> = word.iter().map(usize::to_string).collect();
    crate::diagram::parse_gauss(&code.join(",")).unwrap()
}
