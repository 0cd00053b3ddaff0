//! DOT and JSON interchange for web graphs.

use serde_json::json;

use super::{VertexKind, WebGraph};

fn kind_name(k: VertexKind) -> &'static str {
    match k {
        VertexKind::Source => "source",
        VertexKind::Sink => "sink",
        VertexKind::Plain => "plain",
        VertexKind::Node4 => "node4",
        VertexKind::End => "end",
    }
}

/// DOT rendering: vertex kind as node shape, free ends rank-pinned to the
/// bottom/top rows.
pub fn to_dot(g: &WebGraph) -> String {
    let mut out = String::from("graph web {\n");
    for v in 0..g.num_vertices() {
        let shape = match g.kind(v) {
            VertexKind::Source => "triangle",
            VertexKind::Sink => "invtriangle",
            VertexKind::Plain => "circle",
            VertexKind::Node4 => "square",
            VertexKind::End => "point",
        };
        out.push_str(&format!("  v{v} [shape={shape}];\n"));
    }
    if !g.bottom.is_empty() {
        let names: Vec<String> = g.bottom.iter().map(|v| format!("v{v}")).collect();
        out.push_str(&format!("  {{ rank=min; {} }}\n", names.join("; ")));
    }
    if !g.top.is_empty() {
        let names: Vec<String> = g.top.iter().map(|v| format!("v{v}")).collect();
        out.push_str(&format!("  {{ rank=max; {} }}\n", names.join("; ")));
    }
    for (a, b) in g.edges() {
        out.push_str(&format!(
            "  v{} -- v{} [taillabel={}, headlabel={}];\n",
            g.owner(a),
            g.owner(b),
            g.slot(a),
            g.slot(b)
        ));
    }
    for i in 0..g.circles {
        out.push_str(&format!("  circle{i} [shape=doublecircle, label=\"O\"];\n"));
    }
    out.push_str("}\n");
    out
}

/// JSON mirroring the structure fields.
pub fn to_json(g: &WebGraph) -> serde_json::Value {
    let vertices: Vec<serde_json::Value> = (0..g.num_vertices())
        .map(|v| json!({ "kind": kind_name(g.kind(v)), "slots": g.vertex_darts(v).len() }))
        .collect();
    let edges: Vec<serde_json::Value> = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            json!([
                { "vertex": g.owner(a), "slot": g.slot(a) },
                { "vertex": g.owner(b), "slot": g.slot(b) },
            ])
        })
        .collect();
    json!({
        "vertices": vertices,
        "edges": edges,
        "circles": g.circles,
        "bottom": g.bottom,
        "top": g.top,
        "rotational": g.rotational,
    })
}

/// Parse a trivalent virtual graph with rotation data:
/// `{"edges":[[u,v],...],"rotations":[[e,e,e],...],"circles":0}` — rotations
/// list edge indices counterclockwise at each vertex; every edge index
/// appears exactly twice overall (twice at one vertex = a loop edge).
pub fn trivalent_from_json(v: &serde_json::Value) -> Result<WebGraph, String> {
    let rotations = v
        .get("rotations")
        .and_then(|r| r.as_array())
        .ok_or("missing \"rotations\" array")?;
    let n = rotations.len();
    let mut g = WebGraph::new();
    for _ in 0..n {
        g.add_vertex(VertexKind::Plain);
    }
    g.circles = v.get("circles").and_then(serde_json::Value::as_u64).unwrap_or(0) as usize;
    let mut ends: std::collections::HashMap<u64, Vec<usize>> = Default::default();
    for (vi, rot) in rotations.iter().enumerate() {
        let slots = rot.as_array().ok_or("rotation must be an array")?;
        if slots.len() != 3 {
            return Err(format!("vertex {vi} is not trivalent"));
        }
        for (si, e) in slots.iter().enumerate() {
            let e = e.as_u64().ok_or("edge index must be an integer")?;
            ends.entry(e).or_default().push(g.dart(vi, si));
        }
    }
    for (e, ds) in ends {
        if ds.len() != 2 {
            return Err(format!("edge {e} has {} endpoints, expected 2", ds.len()));
        }
        g.connect(ds[0], ds[1]);
    }
    Ok(g)
}
