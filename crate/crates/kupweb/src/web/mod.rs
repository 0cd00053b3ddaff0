//! The web-graph data structure shared by every state expansion in the crate:
//! trivalent bipartite sl(3) webs, sign-ordered G2 webs, residual framed
//! 4-valent nodes from parity states, and tangles with ordered free ends.

pub mod canon;
pub mod export;
pub mod genus;
pub mod polygons;
pub mod reduce;

pub use canon::{CanonicalKey, Sign};

use std::collections::BTreeSet;

pub type Dart = usize;
pub type VertexId = usize;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum VertexKind {
    /// sl(3): trivalent, all edges outgoing.  Slot order insignificant.
    Source,
    /// sl(3): trivalent, all edges incoming.  Slot order insignificant.
    Sink,
    /// G2: trivalent, slot order significant up to even permutation; an odd
    /// permutation costs a sign.
    Plain,
    /// Framed 4-valent node.  Slots `[a,b,c,d]` carry the framing pairs
    /// `(a,c)` and `(b,d)`; when the graph is `rotational` the slot order is
    /// also the counterclockwise rotation at the node.
    Node4,
    /// A free end (degree 1), pinned to a boundary position.
    End,
}

impl VertexKind {
    pub fn degree(self) -> usize {
        match self {
            VertexKind::Source | VertexKind::Sink | VertexKind::Plain => 3,
            VertexKind::Node4 => 4,
            VertexKind::End => 1,
        }
    }
}

/// An immutable multigraph with per-vertex dart slots, an edge involution,
/// free circles, and ordered boundary ends.  Rewrites build new graphs.
#[derive(Clone, Debug, Default)]
pub struct WebGraph {
    kinds: Vec<VertexKind>,
    /// Per-vertex darts in slot order.
    darts: Vec<Vec<Dart>>,
    owner: Vec<VertexId>,
    slot_of: Vec<usize>,
    partner: Vec<Option<Dart>>,
    /// Crossing-free closed curves with no vertices on them.
    pub circles: usize,
    /// Bottom boundary ends (End vertex ids), in order.
    pub bottom: Vec<VertexId>,
    /// Top boundary ends (End vertex ids), in order.
    pub top: Vec<VertexId>,
    /// Whether Node4 slot order is semantically a rotation (flat/virtual
    /// category) or only the framing pairs matter (free category).
    pub rotational: bool,
}

impl WebGraph {
    pub fn new() -> Self {
        WebGraph::default()
    }

    pub fn add_vertex(&mut self, kind: VertexKind) -> VertexId {
        let v = self.kinds.len();
        self.kinds.push(kind);
        let mut ds = Vec::with_capacity(kind.degree());
        for s in 0..kind.degree() {
            let d = self.owner.len();
            self.owner.push(v);
            self.slot_of.push(s);
            self.partner.push(None);
            ds.push(d);
        }
        self.darts.push(ds);
        v
    }

    pub fn connect(&mut self, a: Dart, b: Dart) {
        assert!(self.partner[a].is_none() && self.partner[b].is_none(), "dart already connected");
        assert_ne!(a, b);
        self.partner[a] = Some(b);
        self.partner[b] = Some(a);
    }

    pub fn num_vertices(&self) -> usize {
        self.kinds.len()
    }

    pub fn num_darts(&self) -> usize {
        self.owner.len()
    }

    pub fn kind(&self, v: VertexId) -> VertexKind {
        self.kinds[v]
    }

    pub fn vertex_darts(&self, v: VertexId) -> &[Dart] {
        &self.darts[v]
    }

    pub fn dart(&self, v: VertexId, slot: usize) -> Dart {
        self.darts[v][slot]
    }

    pub fn owner(&self, d: Dart) -> VertexId {
        self.owner[d]
    }

    pub fn slot(&self, d: Dart) -> usize {
        self.slot_of[d]
    }

    pub fn partner(&self, d: Dart) -> Dart {
        self.partner[d].expect("dangling dart")
    }

    pub fn try_partner(&self, d: Dart) -> Option<Dart> {
        self.partner[d]
    }

    /// Count of non-End vertices.
    pub fn num_inner_vertices(&self) -> usize {
        self.kinds.iter().filter(|k| !matches!(k, VertexKind::End)).count()
    }

    pub fn is_closed(&self) -> bool {
        self.bottom.is_empty() && self.top.is_empty()
    }

    /// Edges as pairs `(lo, hi)` of darts with `lo < hi`.
    pub fn edges(&self) -> Vec<(Dart, Dart)> {
        let mut out = Vec::new();
        for d in 0..self.num_darts() {
            if let Some(p) = self.partner[d] {
                if d < p {
                    out.push((d, p));
                }
            }
        }
        out
    }

    /// Number of edges between two vertices.
    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> usize {
        self.darts[u].iter().filter(|&&d| self.partner[d].map(|p| self.owner[p]) == Some(v)).count()
    }

    /// Connected components (graph connectivity, End vertices included).
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for v0 in 0..n {
            if seen[v0] {
                continue;
            }
            let mut comp = vec![v0];
            seen[v0] = true;
            let mut stack = vec![v0];
            while let Some(v) = stack.pop() {
                for &d in &self.darts[v] {
                    if let Some(p) = self.partner[d] {
                        let w = self.owner[p];
                        if !seen[w] {
                            seen[w] = true;
                            comp.push(w);
                            stack.push(w);
                        }
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Restriction to a vertex set (used to reduce per component).  Dart slot
    /// orders are preserved; circles and boundary are not copied.
    pub fn restrict(&self, verts: &[VertexId]) -> WebGraph {
        let mut g = WebGraph::new();
        g.rotational = self.rotational;
        let mut map = vec![usize::MAX; self.num_vertices()];
        for &v in verts {
            map[v] = g.add_vertex(self.kinds[v]);
        }
        for &v in verts {
            for (s, &d) in self.darts[v].iter().enumerate() {
                if let Some(p) = self.partner[d] {
                    if d < p {
                        let w = self.owner[p];
                        assert!(map[w] != usize::MAX, "restrict across component boundary");
                        let a = g.dart(map[v], s);
                        let b = g.dart(map[w], self.slot_of[p]);
                        g.connect(a, b);
                    }
                }
            }
        }
        g
    }

    /// Remove a set of vertices, splicing strands back together.
    ///
    /// `joins` pairs up darts of removed vertices whose incident edges are to
    /// be merged into one; removed darts absent from `joins` disappear with
    /// their edge (both endpoints must then be removed).  `new_verts` adds
    /// replacement vertices whose slots hook either through a removed dart
    /// (`Hook::Thru`) or to a matching `Hook::Fresh` label on another new
    /// vertex.  Chains that close up entirely among removed darts become free
    /// circles.
    pub fn surgery(
        &self,
        removed: &BTreeSet<VertexId>,
        joins: &[(Dart, Dart)],
        new_verts: &[(VertexKind, Vec<Hook>)],
    ) -> WebGraph {
        let mut g = WebGraph::new();
        g.rotational = self.rotational;
        g.circles = self.circles;

        let mut vmap = vec![usize::MAX; self.num_vertices()];
        for v in 0..self.num_vertices() {
            if !removed.contains(&v) {
                vmap[v] = g.add_vertex(self.kinds[v]);
            }
        }
        let mut new_ids = Vec::new();
        for (kind, hooks) in new_verts {
            assert_eq!(hooks.len(), kind.degree());
            new_ids.push(g.add_vertex(*kind));
        }
        g.bottom = self.bottom.iter().map(|&v| vmap[v]).collect();
        g.top = self.top.iter().map(|&v| vmap[v]).collect();

        // join involution on removed darts
        let mut join_of = vec![None; self.num_darts()];
        for &(a, b) in joins {
            assert!(removed.contains(&self.owner[a]) && removed.contains(&self.owner[b]));
            assert!(join_of[a].is_none() && join_of[b].is_none());
            join_of[a] = Some(b);
            join_of[b] = Some(a);
        }

        // Sockets in the new graph: surviving darts and new-vertex slots.
        // `terminal(d)` follows a chain from the far side of removed dart `d`
        // until it reaches a socket or closes a circle.
        #[derive(Clone, Copy, PartialEq, Eq, Debug)]
        enum Sock {
            Old(Dart),
            New(usize, usize),
        }
        let mut fresh_ends: std::collections::HashMap<usize, Vec<Sock>> = Default::default();
        let mut thru_of = vec![None; self.num_darts()]; // removed dart -> Sock hooked onto it
        for (i, (_, hooks)) in new_verts.iter().enumerate() {
            for (s, h) in hooks.iter().enumerate() {
                match h {
                    Hook::Thru(d) => {
                        assert!(removed.contains(&self.owner[*d]));
                        assert!(thru_of[*d].is_none(), "two hooks on one dart");
                        thru_of[*d] = Some(Sock::New(i, s));
                    }
                    Hook::Fresh(label) => {
                        fresh_ends.entry(*label).or_default().push(Sock::New(i, s));
                    }
                }
            }
        }
        for (label, ends) in &fresh_ends {
            assert_eq!(ends.len(), 2, "fresh label {label} must appear exactly twice");
        }

        for d in 0..self.num_darts() {
            if join_of[d].is_some() {
                assert!(thru_of[d].is_none(), "dart {d} both joined and hooked");
            }
        }

        let sock_dart = |g: &WebGraph, s: Sock| -> Dart {
            match s {
                Sock::Old(d) => {
                    let v = vmap[self.owner[d]];
                    g.dart(v, self.slot_of[d])
                }
                Sock::New(i, s) => g.dart(new_ids[i], s),
            }
        };

        // Walk from an incoming removed dart through joins until reaching a
        // socket, recording the removed darts crossed on the way.
        let mut consumed = vec![false; self.num_darts()];
        let far_end = |d0: Dart, consumed: &mut Vec<bool>| -> Sock {
            let mut d = d0;
            loop {
                consumed[d] = true;
                if let Some(s) = thru_of[d] {
                    return s;
                }
                let j = join_of[d]
                    .unwrap_or_else(|| panic!("removed dart {d} is reachable but not rewired"));
                consumed[j] = true;
                let p = self.partner[j].expect("dangling dart in surgery");
                if !removed.contains(&self.owner[p]) {
                    return Sock::Old(p);
                }
                d = p;
            }
        };

        // edges seen from surviving darts
        let mut done = vec![false; self.num_darts()];
        for d in 0..self.num_darts() {
            if removed.contains(&self.owner[d]) || done[d] {
                continue;
            }
            let Some(p) = self.partner[d] else { continue };
            if !removed.contains(&self.owner[p]) {
                if d < p {
                    g.connect(sock_dart(&g, Sock::Old(d)), sock_dart(&g, Sock::Old(p)));
                }
                done[d] = true;
                done[p] = true;
            } else {
                let far = far_end(p, &mut consumed);
                let a = sock_dart(&g, Sock::Old(d));
                let b = sock_dart(&g, far);
                g.connect(a, b);
                done[d] = true;
                if let Sock::Old(q) = far {
                    done[q] = true;
                }
            }
        }
        // edges starting at new-vertex hooks that are still unwired
        for (i, (_, hooks)) in new_verts.iter().enumerate() {
            for (s, h) in hooks.iter().enumerate() {
                let a = g.dart(new_ids[i], s);
                if g.try_partner(a).is_some() {
                    continue;
                }
                match h {
                    Hook::Thru(d) => {
                        consumed[*d] = true;
                        let p = self.partner[*d].expect("dangling dart");
                        let far = if removed.contains(&self.owner[p]) {
                            far_end(p, &mut consumed)
                        } else {
                            Sock::Old(p)
                        };
                        let b = sock_dart(&g, far);
                        g.connect(a, b);
                    }
                    Hook::Fresh(label) => {
                        let ends = &fresh_ends[label];
                        let other = if ends[0] == Sock::New(i, s) { ends[1] } else { ends[0] };
                        let b = sock_dart(&g, other);
                        g.connect(a, b);
                    }
                }
            }
        }

        // whatever joined darts remain unconsumed lie on closed chains
        for d0 in 0..self.num_darts() {
            if consumed[d0] || join_of[d0].is_none() {
                continue;
            }
            let mut d = d0;
            loop {
                consumed[d] = true;
                let j = join_of[d].expect("closed chain leaves joins");
                consumed[j] = true;
                let p = self.partner[j].expect("dangling dart in circle chain");
                assert!(removed.contains(&self.owner[p]) && thru_of[p].is_none());
                if p == d0 {
                    break;
                }
                d = p;
            }
            g.circles += 1;
        }

        g
    }
}

/// How a new vertex slot attaches during [`WebGraph::surgery`].
#[derive(Clone, Copy, Debug)]
pub enum Hook {
    /// Attach to whatever the given removed dart was connected to.
    Thru(Dart),
    /// Attach to the other slot carrying the same fresh label.
    Fresh(usize),
}

/// Union-find strand splicer used by the state expansions: create ports, tie
/// them together in pairs, plug vertex slots onto them, then realize the
/// resulting edges and count closed loops.
pub struct Wiring {
    parent: Vec<usize>,
    plugs: Vec<Vec<(VertexId, usize)>>,
    pub circles: usize,
}

impl Wiring {
    pub fn new(num_ports: usize) -> Self {
        Wiring {
            parent: (0..num_ports).collect(),
            plugs: vec![Vec::new(); num_ports],
            circles: 0,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Fuse two ports into one strand; closing a strand on itself makes a
    /// circle.
    pub fn tie(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            assert!(self.plugs[ra].is_empty(), "closed a strand with plugs");
            self.circles += 1;
            return;
        }
        let (hi, lo) = (ra.max(rb), ra.min(rb));
        self.parent[hi] = lo;
        let moved = std::mem::take(&mut self.plugs[hi]);
        self.plugs[lo].extend(moved);
    }

    /// Attach a vertex slot to a port.
    pub fn plug(&mut self, port: usize, v: VertexId, slot: usize) {
        let r = self.find(port);
        self.plugs[r].push((v, slot));
    }

    /// Realize all strands as edges of `g`.
    pub fn finish(mut self, g: &mut WebGraph) {
        g.circles += self.circles;
        for r in 0..self.parent.len() {
            if self.find(r) != r {
                continue;
            }
            let plugs = std::mem::take(&mut self.plugs[r]);
            match plugs.len() {
                0 => {} // counted as a circle (or an untouched port)
                2 => {
                    let a = g.dart(plugs[0].0, plugs[0].1);
                    let b = g.dart(plugs[1].0, plugs[1].1);
                    g.connect(a, b);
                }
                n => panic!("strand with {n} plugs"),
            }
        }
    }
}

/// Small builders shared by the test suites.
#[cfg(test)]
pub(crate) mod testutil {
    use super::{VertexKind, WebGraph};
    use rand::rngs::StdRng;
    use rand::Rng;

    /// theta graph: Source and Sink joined by three edges
    pub fn theta_sl3() -> WebGraph {
        let mut g = WebGraph::new();
        let s = g.add_vertex(VertexKind::Source);
        let t = g.add_vertex(VertexKind::Sink);
        for i in 0..3 {
            g.connect(g.dart(s, i), g.dart(t, i));
        }
        g
    }

    /// The cube graph Q3 as an oriented bipartite web.
    pub fn cube_sl3() -> WebGraph {
        let mut g = WebGraph::new();
        let vs: Vec<usize> = (0..8)
            .map(|i: usize| {
                let k =
                    if i.count_ones() % 2 == 0 { VertexKind::Source } else { VertexKind::Sink };
                g.add_vertex(k)
            })
            .collect();
        let mut slot = vec![0usize; 8];
        for i in 0..8usize {
            for b in 0..3 {
                let j = i ^ (1 << b);
                if i < j {
                    let (a, sb) = (g.dart(vs[i], slot[i]), g.dart(vs[j], slot[j]));
                    slot[i] += 1;
                    slot[j] += 1;
                    g.connect(a, sb);
                }
            }
        }
        g
    }

    /// Random closed bipartite cubic web: n Sources, n Sinks, darts matched
    /// by a random permutation.
    pub fn random_sl3_web(n: usize, rng: &mut StdRng) -> WebGraph {
        let mut g = WebGraph::new();
        let sources: Vec<_> = (0..n).map(|_| g.add_vertex(VertexKind::Source)).collect();
        let sinks: Vec<_> = (0..n).map(|_| g.add_vertex(VertexKind::Sink)).collect();
        let mut sink_darts: Vec<usize> =
            sinks.iter().flat_map(|&v| g.vertex_darts(v).to_vec()).collect();
        for i in (1..sink_darts.len()).rev() {
            let j = rng.random_range(0..=i);
            sink_darts.swap(i, j);
        }
        let source_darts: Vec<usize> =
            sources.iter().flat_map(|&v| g.vertex_darts(v).to_vec()).collect();
        for (a, b) in source_darts.into_iter().zip(sink_darts) {
            g.connect(a, b);
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::theta_sl3;
    use super::*;

    #[test]
    fn surgery_bigon_on_theta_gives_circle() {
        let g = theta_sl3();
        // remove both vertices, join their third darts; the two other edges
        // vanish with the vertices
        let removed: BTreeSet<_> = [0usize, 1].into_iter().collect();
        let joins = [(g.dart(0, 2), g.dart(1, 2))];
        let h = g.surgery(&removed, &joins, &[]);
        assert_eq!(h.num_vertices(), 0);
        assert_eq!(h.circles, 1);
    }

    #[test]
    fn surgery_keeps_outside_intact() {
        // square of 4 vertices with one external edge each, externals joined
        // in pairs to two extra vertices
        let mut g = WebGraph::new();
        let vs: Vec<_> = (0..4).map(|_| g.add_vertex(VertexKind::Plain)).collect();
        for i in 0..4 {
            g.connect(g.dart(vs[i], 1), g.dart(vs[(i + 1) % 4], 2));
        }
        let a = g.add_vertex(VertexKind::Plain);
        let b = g.add_vertex(VertexKind::Plain);
        g.connect(g.dart(a, 0), g.dart(vs[0], 0));
        g.connect(g.dart(a, 1), g.dart(vs[1], 0));
        g.connect(g.dart(b, 0), g.dart(vs[2], 0));
        g.connect(g.dart(b, 1), g.dart(vs[3], 0));
        g.connect(g.dart(a, 2), g.dart(b, 2));
        // re-pair the square externals: (v0,v1) and (v2,v3)
        let removed: BTreeSet<_> = vs.iter().copied().collect();
        let joins = [(g.dart(vs[0], 0), g.dart(vs[1], 0)), (g.dart(vs[2], 0), g.dart(vs[3], 0))];
        let h = g.surgery(&removed, &joins, &[]);
        assert_eq!(h.num_vertices(), 2);
        // a now has a self-connection between slots 0 and 1, same for b
        assert_eq!(h.circles, 0);
        let ha = 0;
        assert_eq!(h.owner(h.partner(h.dart(ha, 0))), ha);
    }

    #[test]
    fn wiring_counts_circles() {
        let mut w = Wiring::new(4);
        w.tie(0, 1);
        w.tie(2, 3);
        w.tie(1, 2);
        w.tie(3, 0); // closes the loop
        let mut g = WebGraph::new();
        w.finish(&mut g);
        assert_eq!(g.circles, 1);
    }
}
