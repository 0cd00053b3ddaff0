//! Gauss-code diagrams: parsing and validation, Reidemeister / Z / switch /
//! virtualization moves, Gaussian parity and the odd writhe, intersection
//! graphs and their realization search.
//!
//! One storage type covers all three decoration levels: a free diagram keeps
//! bare chords, a flat diagram keeps over/under roles with every sign
//! canonicalized to +1 (the representative of the switch involution), and a
//! virtual diagram keeps roles and signs.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::framed::FramedGraph;
use crate::web::{VertexKind, WebGraph};

pub mod moves;
pub use moves::{enumerate_moves, MoveKind, MoveSite};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Role {
    Over,
    Under,
}

impl Role {
    pub fn flip(self) -> Role {
        match self {
            Role::Over => Role::Under,
            Role::Under => Role::Over,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DecorationLevel {
    Free,
    Flat,
    Virtual,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    Even,
    Odd,
}

/// One token of the code: a passage of the strand through a crossing.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Token {
    pub label: usize, // 1-based chord label
    pub role: Option<Role>,
}

/// A chord diagram over one or more circles.  Labels are normalized to
/// `1..=n` in order of first appearance; equality is structural.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChordDiagram {
    circles: Vec<Vec<Token>>,
    signs: Vec<Option<i8>>, // per chord, indexed by label-1
    level: DecorationLevel,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("cannot parse token {0:?}")]
    BadToken(String),
    #[error("label {0} appears {1} times, expected 2")]
    LabelCount(String, usize),
    #[error("label {0} has the same over/under role at both passages")]
    SameRole(String),
    #[error("over/under markers must appear on all tokens or none")]
    MixedRoles,
    #[error("signs must appear on all chords or none")]
    MixedSigns,
    #[error("signs require over/under markers")]
    SignsWithoutRoles,
    #[error("label {0} carries conflicting signs")]
    ConflictingSigns(String),
    #[error("empty component in a non-empty code")]
    EmptyComponent,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("operation requires a fully signed (virtual) diagram")]
    NotVirtual,
    #[error("operation requires a one-circle diagram")]
    MultiCircle,
    #[error("move is not applicable at the given site: {0}")]
    BadSite(String),
}

/// Parse the Gauss-code grammar: components separated by `;`, tokens by `,`,
/// token = `[OU]? <positive integer> [+-]?`.  The empty string is the
/// 0-crossing unknot.
pub fn parse_gauss(text: &str) -> Result<ChordDiagram, ParseError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(ChordDiagram {
            circles: vec![Vec::new()],
            signs: Vec::new(),
            level: DecorationLevel::Free,
        });
    }
    let mut raw: Vec<Vec<(String, Option<Role>, Option<i8>)>> = Vec::new();
    for comp in trimmed.split(';') {
        let comp = comp.trim();
        if comp.is_empty() {
            return Err(ParseError::EmptyComponent);
        }
        let mut tokens = Vec::new();
        for tok in comp.split(',') {
            let tok = tok.trim();
            let mut chars = tok.chars().peekable();
            let role = match chars.peek() {
                Some('O') => {
                    chars.next();
                    Some(Role::Over)
                }
                Some('U') => {
                    chars.next();
                    Some(Role::Under)
                }
                _ => None,
            };
            let mut digits = String::new();
            while let Some(c) = chars.peek() {
                if c.is_ascii_digit() {
                    digits.push(*c);
                    chars.next();
                } else {
                    break;
                }
            }
            let sign = match chars.next() {
                Some('+') => Some(1i8),
                Some('-') => Some(-1i8),
                Some(_) => return Err(ParseError::BadToken(tok.to_string())),
                None => None,
            };
            if chars.next().is_some() || digits.is_empty() {
                return Err(ParseError::BadToken(tok.to_string()));
            }
            tokens.push((digits, role, sign));
        }
        raw.push(tokens);
    }

    // normalize labels in order of first appearance
    let mut order: Vec<String> = Vec::new();
    for (name, _, _) in raw.iter().flatten() {
        if !order.contains(name) {
            order.push(name.clone());
        }
    }
    let index_of = |name: &str| order.iter().position(|x| x == name).unwrap() + 1;

    let n = order.len();
    let mut counts = vec![0usize; n];
    let mut roles: Vec<Vec<Role>> = vec![Vec::new(); n];
    let mut signs: Vec<Option<i8>> = vec![None; n];
    let mut any_role = false;
    let mut all_role = true;
    let mut circles: Vec<Vec<Token>> = Vec::new();
    for comp in &raw {
        let mut circ = Vec::new();
        for (name, role, sign) in comp {
            let label = index_of(name);
            counts[label - 1] += 1;
            match role {
                Some(r) => {
                    any_role = true;
                    roles[label - 1].push(*r);
                }
                None => all_role = false,
            }
            if let Some(s) = sign {
                match signs[label - 1] {
                    Some(prev) if prev != *s => {
                        return Err(ParseError::ConflictingSigns(name.clone()))
                    }
                    _ => signs[label - 1] = Some(*s),
                }
            }
            circ.push(Token { label, role: *role });
        }
        circles.push(circ);
    }
    for (i, &c) in counts.iter().enumerate() {
        if c != 2 {
            return Err(ParseError::LabelCount(order[i].clone(), c));
        }
    }
    if any_role && !all_role {
        return Err(ParseError::MixedRoles);
    }
    if any_role {
        for (i, rs) in roles.iter().enumerate() {
            if rs[0] == rs[1] {
                return Err(ParseError::SameRole(order[i].clone()));
            }
        }
    }
    let any_sign = signs.iter().any(Option::is_some);
    let all_sign = signs.iter().all(Option::is_some);
    if any_sign && !all_sign {
        return Err(ParseError::MixedSigns);
    }
    if any_sign && !any_role {
        return Err(ParseError::SignsWithoutRoles);
    }

    let level = match (any_role, any_sign) {
        (true, true) => DecorationLevel::Virtual,
        (true, false) => DecorationLevel::Flat,
        _ => DecorationLevel::Free,
    };
    let signs = match level {
        DecorationLevel::Virtual => signs,
        _ => vec![None; n],
    };
    Ok(ChordDiagram { circles, signs, level })
}

impl ChordDiagram {
    /// Build a one-circle free diagram from a double-occurrence word over
    /// `1..=n`, keeping the given labels (no appearance-order renormalization;
    /// used by the realization search, whose output must match the input
    /// graph's labels exactly).
    pub fn from_free_word(word: &[usize]) -> Result<ChordDiagram, ParseError> {
        let n = word.len() / 2;
        let mut counts = vec![0usize; n];
        for &l in word {
            if l == 0 || l > n {
                return Err(ParseError::BadToken(l.to_string()));
            }
            counts[l - 1] += 1;
        }
        if let Some(i) = counts.iter().position(|&c| c != 2) {
            return Err(ParseError::LabelCount((i + 1).to_string(), counts[i]));
        }
        Ok(ChordDiagram {
            circles: vec![word.iter().map(|&l| Token { label: l, role: None }).collect()],
            signs: vec![None; n],
            level: DecorationLevel::Free,
        })
    }

    pub(crate) fn from_parts(
        circles: Vec<Vec<Token>>,
        signs: Vec<Option<i8>>,
        level: DecorationLevel,
    ) -> Self {
        let mut d = ChordDiagram { circles, signs, level };
        d.renormalize();
        d
    }

    pub fn level(&self) -> DecorationLevel {
        self.level
    }

    pub fn num_chords(&self) -> usize {
        self.signs.len()
    }

    pub fn num_circles(&self) -> usize {
        self.circles.len()
    }

    pub fn circles(&self) -> &[Vec<Token>] {
        &self.circles
    }

    pub fn sign(&self, label: usize) -> Option<i8> {
        self.signs[label - 1]
    }

    /// The two occurrences of a chord, in traversal order:
    /// `((circle, pos), (circle, pos))`.
    pub fn occurrences(&self, label: usize) -> ((usize, usize), (usize, usize)) {
        let mut found = Vec::with_capacity(2);
        for (c, circ) in self.circles.iter().enumerate() {
            for (p, t) in circ.iter().enumerate() {
                if t.label == label {
                    found.push((c, p));
                }
            }
        }
        (found[0], found[1])
    }

    /// Gaussian parity of a chord: odd iff it flanks an odd number of
    /// symbols.  A chord joining two circles is classed by the number of
    /// other endpoints on the circle of its first occurrence (a pinned
    /// convention; the single-circle case is the standard one).
    pub fn gaussian_parity(&self, label: usize) -> Parity {
        let ((c1, p1), (c2, p2)) = self.occurrences(label);
        let count = if c1 == c2 {
            let len = self.circles[c1].len();
            (p2 + len - p1 - 1) % len
        } else {
            self.circles[c1].len() - 1
        };
        if count % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn odd_chords(&self) -> Vec<usize> {
        (1..=self.num_chords()).filter(|&l| self.gaussian_parity(l) == Parity::Odd).collect()
    }

    /// Sum of signs of the odd crossings.
    pub fn odd_writhe(&self) -> Result<i64, DiagramError> {
        if self.level != DecorationLevel::Virtual {
            return Err(DiagramError::NotVirtual);
        }
        Ok((1..=self.num_chords())
            .filter(|&l| self.gaussian_parity(l) == Parity::Odd)
            .map(|l| i64::from(self.signs[l - 1].unwrap()))
            .sum())
    }

    /// Total writhe (sum of all signs).
    pub fn writhe(&self) -> Result<i64, DiagramError> {
        if self.level != DecorationLevel::Virtual {
            return Err(DiagramError::NotVirtual);
        }
        Ok(self.signs.iter().map(|s| i64::from(s.unwrap())).sum())
    }

    /// Forget decorations down to the free level.
    pub fn to_free(&self) -> ChordDiagram {
        ChordDiagram {
            circles: self
                .circles
                .iter()
                .map(|c| c.iter().map(|t| Token { label: t.label, role: None }).collect())
                .collect(),
            signs: vec![None; self.num_chords()],
            level: DecorationLevel::Free,
        }
    }

    /// Forget to the flat level: every negative chord is switched to the
    /// positive representative of the involution.
    pub fn to_flat(&self) -> ChordDiagram {
        match self.level {
            DecorationLevel::Free | DecorationLevel::Flat => self.clone(),
            DecorationLevel::Virtual => {
                let mut out = self.clone();
                for l in 1..=out.num_chords() {
                    if out.signs[l - 1] == Some(-1) {
                        out.swap_roles(l);
                    }
                    out.signs[l - 1] = None;
                }
                out.level = DecorationLevel::Flat;
                out
            }
        }
    }

    /// Lift to the virtual level, filling in default decorations: missing
    /// roles make the first passage an overpass, missing signs become +1.
    pub fn to_virtual(&self) -> ChordDiagram {
        let mut out = self.clone();
        if out.level == DecorationLevel::Free {
            let mut seen = vec![false; out.num_chords()];
            for circ in out.circles.iter_mut() {
                for t in circ.iter_mut() {
                    let first = !seen[t.label - 1];
                    seen[t.label - 1] = true;
                    t.role = Some(if first { Role::Over } else { Role::Under });
                }
            }
        }
        for s in out.signs.iter_mut() {
            s.get_or_insert(1);
        }
        out.level = DecorationLevel::Virtual;
        out
    }

    pub(crate) fn swap_roles(&mut self, label: usize) {
        for circ in self.circles.iter_mut() {
            for t in circ.iter_mut() {
                if t.label == label {
                    t.role = t.role.map(Role::flip);
                }
            }
        }
    }

    pub(crate) fn set_sign(&mut self, label: usize, s: i8) {
        self.signs[label - 1] = Some(s);
    }

    /// Mirror image: every crossing switched.
    pub fn mirror(&self) -> Result<ChordDiagram, DiagramError> {
        if self.level != DecorationLevel::Virtual {
            return Err(DiagramError::NotVirtual);
        }
        let mut out = self.clone();
        for l in 1..=out.num_chords() {
            out.swap_roles(l);
            out.signs[l - 1] = out.signs[l - 1].map(|s| -s);
        }
        Ok(out)
    }

    /// Reverse the traversal direction of one circle.  Reversing one
    /// component flips the sign of every chord with exactly one endpoint on
    /// it.
    pub fn reverse_component(&self, circle: usize) -> ChordDiagram {
        let mut out = self.clone();
        out.circles[circle].reverse();
        if out.level == DecorationLevel::Virtual {
            for l in 1..=out.num_chords() {
                let ((c1, _), (c2, _)) = out.occurrences(l);
                if (c1 == circle) ^ (c2 == circle) {
                    out.signs[l - 1] = out.signs[l - 1].map(|s| -s);
                }
            }
        }
        out.renormalize();
        out
    }

    /// Compact labels to 1..n, preserving their numeric order (so chords keep
    /// their identity across moves that do not delete them).
    pub(crate) fn renormalize(&mut self) {
        let old_n = self.signs.len();
        let mut present = vec![false; old_n + 1];
        for circ in &self.circles {
            for t in circ {
                present[t.label] = true;
            }
        }
        let mut map = vec![0usize; old_n + 1];
        let mut next = 0usize;
        for l in 1..=old_n {
            if present[l] {
                next += 1;
                map[l] = next;
            }
        }
        let mut signs = vec![None; next];
        for (l, s) in self.signs.iter().enumerate() {
            if l + 1 <= old_n && map[l + 1] != 0 {
                signs[map[l + 1] - 1] = *s;
            }
        }
        for circ in self.circles.iter_mut() {
            for t in circ.iter_mut() {
                t.label = map[t.label];
            }
        }
        self.signs = signs;
    }

    /// Gauss-code text of the diagram.
    pub fn code(&self) -> String {
        if self.circles.len() == 1 && self.circles[0].is_empty() {
            return String::new();
        }
        let comps: Vec<String> = self
            .circles
            .iter()
            .map(|circ| {
                let toks: Vec<String> = circ
                    .iter()
                    .map(|t| {
                        let mut s = String::new();
                        match t.role {
                            Some(Role::Over) => s.push('O'),
                            Some(Role::Under) => s.push('U'),
                            None => {}
                        }
                        s.push_str(&t.label.to_string());
                        if let Some(sig) = self.signs[t.label - 1] {
                            s.push(if sig > 0 { '+' } else { '-' });
                        }
                        s
                    })
                    .collect();
                toks.join(",")
            })
            .collect();
        comps.join(";")
    }

    /// JSON export:
    /// `{"circles":[[tokens...],...],"chords":[{"label":n,"arrow":[i,j]?,"sign":s?},...]}`
    /// where `arrow` lists the global endpoint indices of the over and under
    /// passages in that order.
    pub fn to_json(&self) -> serde_json::Value {
        let mut global = Vec::new();
        for (c, circ) in self.circles.iter().enumerate() {
            for p in 0..circ.len() {
                global.push((c, p));
            }
        }
        let gidx = |cp: (usize, usize)| global.iter().position(|&x| x == cp).unwrap();
        let circles: Vec<serde_json::Value> = self
            .circles
            .iter()
            .map(|circ| {
                serde_json::Value::Array(
                    circ.iter()
                        .map(|t| {
                            let mut s = String::new();
                            match t.role {
                                Some(Role::Over) => s.push('O'),
                                Some(Role::Under) => s.push('U'),
                                None => {}
                            }
                            s.push_str(&t.label.to_string());
                            serde_json::Value::String(s)
                        })
                        .collect(),
                )
            })
            .collect();
        let chords: Vec<serde_json::Value> = (1..=self.num_chords())
            .map(|l| {
                let mut obj = serde_json::Map::new();
                obj.insert("label".into(), serde_json::json!(l));
                let (occ1, occ2) = self.occurrences(l);
                if self.level != DecorationLevel::Free {
                    let t1 = self.circles[occ1.0][occ1.1];
                    let (over, under) =
                        if t1.role == Some(Role::Over) { (occ1, occ2) } else { (occ2, occ1) };
                    obj.insert("arrow".into(), serde_json::json!([gidx(over), gidx(under)]));
                }
                if let Some(s) = self.signs[l - 1] {
                    obj.insert("sign".into(), serde_json::json!(s));
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::json!({ "circles": circles, "chords": chords })
    }

    /// Per chord, the `(in, out)` node slots of the first and second passage
    /// under the rotational slot convention (see `to_framed_graph`).
    pub(crate) fn passage_slots(&self) -> Vec<((usize, usize), (usize, usize))> {
        let n = self.num_chords();
        let mut passage_slots = vec![((2usize, 0usize), (3usize, 1usize)); n];
        if self.level != DecorationLevel::Free {
            let mut seen = vec![false; n];
            for circ in &self.circles {
                for t in circ {
                    let first = !seen[t.label - 1];
                    seen[t.label - 1] = true;
                    if !first {
                        continue;
                    }
                    let sign = self.signs[t.label - 1].unwrap_or(1);
                    let role = t.role.unwrap();
                    let (over_sl, under_sl) =
                        if sign > 0 { ((2, 0), (3, 1)) } else { ((3, 1), (2, 0)) };
                    passage_slots[t.label - 1] =
                        if role == Role::Over { (over_sl, under_sl) } else { (under_sl, over_sl) };
                }
            }
        }
        passage_slots
    }

    /// The underlying framed 4-valent graph.  Flat and virtual diagrams also
    /// carry node rotations (from the local crossing picture); free diagrams
    /// carry the framing only.
    pub fn to_framed_graph(&self) -> FramedGraph {
        let mut web = WebGraph::new();
        web.rotational = self.level != DecorationLevel::Free;
        let n = self.num_chords();
        let verts: Vec<usize> = (0..n).map(|_| web.add_vertex(VertexKind::Node4)).collect();
        let mut outgoing = vec![false; web.num_darts()];

        // Slot conventions, counterclockwise when rotational:
        //   sign +1: [over-out, under-out, over-in, under-in]
        //   sign -1: [under-out, over-out, under-in, over-in]
        // Free storage uses [p1-out, p2-out, p1-in, p2-in] (p1 = first
        // passage).  In all cases slots (0,2) and (1,3) are the framing pairs
        // and slots 0,1 are outgoing.
        for v in &verts {
            outgoing[web.dart(*v, 0)] = true;
            outgoing[web.dart(*v, 1)] = true;
        }

        let passage_slots = self.passage_slots();

        let mut seen = vec![false; n];
        for circ in &self.circles {
            if circ.is_empty() {
                web.circles += 1;
                continue;
            }
            let mut pts = Vec::new(); // (in_dart, out_dart) per token
            for t in circ {
                let first = !seen[t.label - 1];
                seen[t.label - 1] = true;
                let (p1, p2) = passage_slots[t.label - 1];
                let (in_sl, out_sl) = if first { p1 } else { p2 };
                let v = verts[t.label - 1];
                pts.push((web.dart(v, in_sl), web.dart(v, out_sl)));
            }
            for i in 0..pts.len() {
                let j = (i + 1) % pts.len();
                web.connect(pts[i].1, pts[j].0);
            }
        }
        FramedGraph { web, outgoing: Some(outgoing) }
    }

    /// Intersection graph of a one-circle diagram: nodes are chords, edges
    /// are interleaving pairs.
    pub fn intersection_graph(&self) -> Result<SimpleGraph, DiagramError> {
        if self.circles.len() != 1 {
            return Err(DiagramError::MultiCircle);
        }
        let n = self.num_chords();
        let mut g = SimpleGraph::new(n);
        for a in 1..=n {
            for b in a + 1..=n {
                if self.interleaves(a, b) {
                    g.add_edge(a - 1, b - 1);
                }
            }
        }
        Ok(g)
    }

    fn interleaves(&self, a: usize, b: usize) -> bool {
        let ((_, a1), (_, a2)) = self.occurrences(a);
        let ((_, b1), (_, b2)) = self.occurrences(b);
        let inside = |p: usize| a1 < p && p < a2;
        inside(b1) ^ inside(b2)
    }
}

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// A simple graph on `0..n`, used for intersection graphs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimpleGraph {
    adj: Vec<BTreeSet<usize>>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        SimpleGraph { adj: vec![BTreeSet::new(); n] }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert_ne!(a, b);
        self.adj[a].insert(b);
        self.adj[b].insert(a);
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(&b)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = SimpleGraph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = SimpleGraph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j);
            }
        }
        g
    }

    /// Wheel: a cycle on `0..n_rim` plus a hub adjacent to every rim node.
    pub fn wheel(n_rim: usize) -> Self {
        let mut g = SimpleGraph::new(n_rim + 1);
        for i in 0..n_rim {
            g.add_edge(i, (i + 1) % n_rim);
            g.add_edge(i, n_rim);
        }
        g
    }

    /// All degrees odd, and every pair of nodes is separated by a third node
    /// adjacent to exactly one of them.
    pub fn is_irreducibly_odd(&self) -> bool {
        let n = self.len();
        if (0..n).any(|v| self.degree(v) % 2 == 0) {
            return false;
        }
        for u in 0..n {
            for v in u + 1..n {
                let separated = (0..n)
                    .any(|w| w != u && w != v && (self.has_edge(w, u) ^ self.has_edge(w, v)));
                if !separated {
                    return false;
                }
            }
        }
        true
    }
}

/// Bounded depth-first search for a one-circle chord diagram whose
/// intersection graph is exactly `g` (labels included).  Returns `None` when
/// the budget runs out or no realization exists.
pub fn realize_chord_diagram(g: &SimpleGraph, budget: usize) -> Option<ChordDiagram> {
    let n = g.len();
    if n == 0 {
        return parse_gauss("").ok();
    }
    struct Dfs<'a> {
        g: &'a SimpleGraph,
        budget: usize,
        word: Vec<usize>,
        open: Vec<usize>, // positions into word of open chords
        placed: Vec<bool>,
    }
    impl Dfs<'_> {
        fn run(&mut self) -> Option<Vec<usize>> {
            if self.budget == 0 {
                return None;
            }
            self.budget -= 1;
            let n = self.g.len();
            if self.word.len() == 2 * n {
                return Some(self.word.clone());
            }
            // close an open chord
            for oi in 0..self.open.len() {
                let start = self.open[oi];
                let c = self.word[start];
                // adjacency of c is fully decided on close
                let mut ok = true;
                for &other_start in &self.open {
                    let d = self.word[other_start];
                    if d == c {
                        continue;
                    }
                    let inter = other_start > start;
                    if self.g.has_edge(c, d) != inter {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    for d in 0..n {
                        if d == c
                            || !self.placed[d]
                            || self.open.iter().any(|&s| self.word[s] == d)
                        {
                            continue;
                        }
                        let inside = self
                            .word
                            .iter()
                            .enumerate()
                            .filter(|&(p, &x)| x == d && p > start)
                            .count();
                        if self.g.has_edge(c, d) != (inside == 1) {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    self.word.push(c);
                    let removed = self.open.remove(oi);
                    if let Some(w) = self.run() {
                        return Some(w);
                    }
                    self.open.insert(oi, removed);
                    self.word.pop();
                }
            }
            // or open a fresh chord
            for c in 0..n {
                if self.placed[c] {
                    continue;
                }
                // symmetry break: position 0 is vertex 0
                if self.word.is_empty() && c != 0 {
                    break;
                }
                self.placed[c] = true;
                self.open.push(self.word.len());
                self.word.push(c);
                if let Some(w) = self.run() {
                    return Some(w);
                }
                self.word.pop();
                self.open.pop();
                self.placed[c] = false;
            }
            None
        }
    }
    let mut dfs = Dfs { g, budget, word: Vec::new(), open: Vec::new(), placed: vec![false; n] };
    let word = dfs.run()?;
    let labels: Vec<usize> = word.iter().map(|v| v + 1).collect();
    let d = ChordDiagram::from_free_word(&labels).expect("search output is double occurrence");
    debug_assert_eq!(&d.intersection_graph().unwrap(), g);
    Some(d)
}
