//! Vacuum diagrams on the circle and their graphical manipulations.
//!
//! An edge `s → t` with label `k` stands for the propagator
//! `Σ_{n≥1} e^{2πin(u_s−u_t)} / n^k`. Integrating every non-root vertex over
//! the circle leaves a sum over positive integer circulations, which
//! [`evaluate`] turns into MZVs whenever the diagram is a zeta diagram.

mod canonical;
mod flow;
mod reduce;
mod rewrite;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use canonical::canonical_key;
pub use flow::evaluate;
pub use reduce::{reduce, Reduction, Strategy};
pub use rewrite::{
    rewrite_exchange_inner, rewrite_integrate_valence2, rewrite_partial_integration, rewrite_reverse_edge,
    rewrite_three_point, DiagramCombination,
};

use crate::composition::Composition;
use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub from: VertexId,
    pub to: VertexId,
    pub label: u32,
}

/// Powers of λ, g and ḡ attached at construction time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Couplings {
    pub lambda: u32,
    pub g: u32,
    pub gbar: u32,
}

/// Named edges of the standard shapes, used by the reduction strategies.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Frame {
    /// Chain edges `s[0..m]` (root → v1 → … → root) and side edges `z[0..m-1]`
    /// from `v[i]` to the root.
    Seashell { v: Vec<VertexId>, s: Vec<EdgeId>, z: Vec<EdgeId> },
    /// Spine ending at `top`; two branches from `top` back to the root, each
    /// with its own side edges (`None` at the last chain vertex).
    Peacock { top: VertexId, spine: Vec<EdgeId>, branches: [Vec<(EdgeId, Option<EdgeId>)>; 2] },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    vertices: BTreeSet<VertexId>,
    root: VertexId,
    edges: BTreeMap<EdgeId, Edge>,
    couplings: Couplings,
    frame: Option<Frame>,
}

impl Diagram {
    /// A diagram from explicit edges; couplings are derived from them.
    pub fn new(vertices: impl IntoIterator<Item = VertexId>, root: VertexId, edges: Vec<Edge>) -> Result<Self> {
        let vertices: BTreeSet<VertexId> = vertices.into_iter().collect();
        if !vertices.contains(&root) {
            return Err(Error::Precondition(format!("root {root} is not a vertex")));
        }
        for e in &edges {
            if !vertices.contains(&e.from) || !vertices.contains(&e.to) {
                return Err(Error::Precondition(format!("edge {}->{} uses an unknown vertex", e.from, e.to)));
            }
        }
        let couplings = Couplings {
            lambda: edges.iter().map(|e| e.label).sum(),
            g: edges.len() as u32,
            gbar: edges.len() as u32,
        };
        Ok(Diagram { vertices, root, edges: edges.into_iter().enumerate().collect(), couplings, frame: None })
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> {
        self.edges.iter().map(|(&id, e)| (id, e))
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge> {
        self.edges.get(&id).ok_or_else(|| Error::RuleInapplicable(format!("no edge with id {id}")))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn couplings(&self) -> Couplings {
        self.couplings
    }

    pub fn frame(&self) -> Option<&Frame> {
        self.frame.as_ref()
    }

    pub fn label_sum(&self) -> u32 {
        self.edges.values().map(|e| e.label).sum()
    }

    /// Non-loop edges at `v`, split into (incoming, outgoing).
    pub fn incident(&self, v: VertexId) -> (Vec<EdgeId>, Vec<EdgeId>) {
        let mut ins = Vec::new();
        let mut outs = Vec::new();
        for (&id, e) in &self.edges {
            if e.from == e.to {
                continue;
            }
            if e.to == v {
                ins.push(id);
            }
            if e.from == v {
                outs.push(id);
            }
        }
        (ins, outs)
    }

    fn has_loop_at(&self, v: VertexId) -> bool {
        self.edges.values().any(|e| e.from == v && e.to == v)
    }

    pub(crate) fn set_label(&mut self, id: EdgeId, label: u32) {
        self.edges.get_mut(&id).expect("edge id checked by caller").label = label;
    }

    pub(crate) fn edge_mut(&mut self, id: EdgeId) -> &mut Edge {
        self.edges.get_mut(&id).expect("edge id checked by caller")
    }

    pub(crate) fn remove_edge(&mut self, id: EdgeId) -> Edge {
        self.edges.remove(&id).expect("edge id checked by caller")
    }


    /// Identifies `b` with `a`; the root survives whenever it is involved.
    pub(crate) fn fuse(&mut self, a: VertexId, b: VertexId) -> VertexId {
        let (keep, gone) = if b == self.root { (b, a) } else { (a, b) };
        if keep == gone {
            return keep;
        }
        for e in self.edges.values_mut() {
            if e.from == gone {
                e.from = keep;
            }
            if e.to == gone {
                e.to = keep;
            }
        }
        self.vertices.remove(&gone);
        self.frame = None;
        keep
    }

    pub(crate) fn remove_vertex(&mut self, v: VertexId) {
        self.vertices.remove(&v);
    }

    pub(crate) fn clear_frame(&mut self) {
        self.frame = None;
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "vertices": self.vertices.iter().collect::<Vec<_>>(),
            "root": self.root,
            "edges": self.edges.values().map(|e| serde_json::json!({"from": e.from, "to": e.to, "label": e.label})).collect::<Vec<_>>(),
        })
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            vertices: Vec<VertexId>,
            root: VertexId,
            edges: Vec<Edge>,
        }
        let raw: Raw = serde_json::from_value(v.clone()).map_err(|e| Error::Json(format!("diagram JSON: {e}")))?;
        let mut d = Diagram::new(raw.vertices, raw.root, raw.edges)?;
        d.frame = recognize_seashell(&d);
        Ok(d)
    }

    /// Graphviz description; zero edges are dashed.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph diagram {\n");
        for v in &self.vertices {
            let shape = if *v == self.root { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  v{v} [shape={shape}];");
        }
        for e in self.edges.values() {
            let style = if e.label == 0 { ", style=dashed" } else { "" };
            let _ = writeln!(s, "  v{} -> v{} [label=\"{}\"{}];", e.from, e.to, e.label, style);
        }
        s.push_str("}\n");
        s
    }
}

/// The sea-shell diagram whose value is ζ(ks).
pub fn build_seashell(ks: &Composition) -> Result<Diagram> {
    if ks.is_signed() || !ks.is_admissible() {
        return Err(Error::NotAdmissible(ks.to_string()));
    }
    let k = ks.parts();
    let m = k.len();
    let root = 0;
    if m == 1 {
        let mut d = Diagram::new([root], root, vec![Edge { from: root, to: root, label: k[0] }])?;
        d.frame = Some(Frame::Seashell { v: Vec::new(), s: vec![0], z: Vec::new() });
        return Ok(d);
    }
    let v: Vec<VertexId> = (1..m).collect();
    let mut edges = Vec::with_capacity(2 * m - 1);
    for i in 0..m {
        let from = if i == 0 { root } else { v[i - 1] };
        let to = if i == m - 1 { root } else { v[i] };
        edges.push(Edge { from, to, label: k[i] });
    }
    for &vi in &v {
        edges.push(Edge { from: vi, to: root, label: 0 });
    }
    let mut d = Diagram::new(std::iter::once(root).chain(v.iter().copied()), root, edges)?;
    d.frame = Some(Frame::Seashell { v, s: (0..m).collect(), z: (m..2 * m - 1).collect() });
    Ok(d)
}

/// The three-branch diagram Z(a|b|c). Entries may be zero; each list must be
/// non-empty.
pub fn build_peacock(a: &[u32], b: &[u32], c: &[u32]) -> Result<Diagram> {
    if a.is_empty() || b.is_empty() || c.is_empty() {
        return Err(Error::Precondition("peacock branches must be non-empty".into()));
    }
    let root = 0;
    let mut next = 1;
    let mut vertices = vec![root];
    let mut edges = Vec::new();
    let mut fresh = |vertices: &mut Vec<VertexId>| {
        let v = next;
        next += 1;
        vertices.push(v);
        v
    };
    // spine root → x1 → … → top, side edges from interior spine vertices
    let mut spine = Vec::new();
    let mut prev = root;
    for (i, &label) in a.iter().enumerate() {
        let v = fresh(&mut vertices);
        spine.push(edges.len());
        edges.push(Edge { from: prev, to: v, label });
        if i + 1 < a.len() {
            edges.push(Edge { from: v, to: root, label: 0 });
        }
        prev = v;
    }
    let top = prev;
    let mut branches: [Vec<(EdgeId, Option<EdgeId>)>; 2] = [Vec::new(), Vec::new()];
    for (bi, labels) in [b, c].into_iter().enumerate() {
        let mut prev = top;
        for (i, &label) in labels.iter().enumerate() {
            let last = i + 1 == labels.len();
            let to = if last { root } else { fresh(&mut vertices) };
            let id = edges.len();
            edges.push(Edge { from: prev, to, label });
            let side = if last {
                None
            } else {
                edges.push(Edge { from: to, to: root, label: 0 });
                Some(edges.len() - 1)
            };
            branches[bi].push((id, side));
            prev = to;
        }
    }
    let mut d = Diagram::new(vertices, root, edges)?;
    d.frame = Some(Frame::Peacock { top, spine, branches });
    Ok(d)
}

/// Recovers the sea-shell frame of a diagram given without one.
fn recognize_seashell(d: &Diagram) -> Option<Frame> {
    let root = d.root;
    let (_, outs) = d.incident(root);
    if outs.len() != 1 || d.has_loop_at(root) {
        return None;
    }
    let (mut v, mut s, mut z) = (Vec::new(), vec![outs[0]], Vec::new());
    let mut cur = d.edges[&outs[0]].to;
    while cur != root {
        let (ins, outs) = d.incident(cur);
        if ins.len() != 1 || outs.len() != 2 {
            return None;
        }
        let side = outs.iter().copied().filter(|&e| d.edges[&e].to == root && d.edges[&e].label == 0).min()?;
        let chain = outs.iter().copied().find(|&e| e != side)?;
        v.push(cur);
        z.push(side);
        s.push(chain);
        cur = d.edges[&chain].to;
        if v.len() > d.vertices.len() {
            return None;
        }
    }
    (v.len() + 1 == d.vertices.len() && s.len() + z.len() == d.edges.len()).then_some(Frame::Seashell { v, s, z })
}

/// The half-moon diagram G_{a,b,c}: root → top (a), top → root (b) and (c).
pub fn build_half_moon(a: u32, b: u32, c: u32) -> Diagram {
    let edges = vec![Edge { from: 0, to: 1, label: a }, Edge { from: 1, to: 0, label: c }, Edge { from: 1, to: 0, label: b }];
    let mut d = Diagram::new([0, 1], 0, edges).expect("fixed shape");
    if b == 0 {
        d.frame = Some(Frame::Seashell { v: vec![1], s: vec![0, 1], z: vec![2] });
    }
    d
}

/// G_{a,k,b,l,c}: root → x (a), x → root (k), x → y (b), y → root (l), y → root (c).
pub fn build_g5(a: u32, k: u32, b: u32, l: u32, c: u32) -> Diagram {
    let edges = vec![
        Edge { from: 0, to: 1, label: a },
        Edge { from: 1, to: 2, label: b },
        Edge { from: 2, to: 0, label: c },
        Edge { from: 1, to: 0, label: k },
        Edge { from: 2, to: 0, label: l },
    ];
    let mut d = Diagram::new([0, 1, 2], 0, edges).expect("fixed shape");
    if k == 0 && l == 0 {
        d.frame = Some(Frame::Seashell { v: vec![1, 2], s: vec![0, 1, 2], z: vec![3, 4] });
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    #[test]
    fn seashell_counts() {
        let d = build_seashell(&c("2,1")).unwrap();
        assert_eq!(d.edge_count(), 3);
        assert_eq!(d.couplings(), Couplings { lambda: 3, g: 3, gbar: 3 });
        let d = build_seashell(&c("2,1,1")).unwrap();
        assert_eq!(d.edge_count(), 5);
        assert_eq!(d.couplings().lambda, 4);
        let d = build_seashell(&c("5")).unwrap();
        assert_eq!(d.edge_count(), 1);
        assert!(build_seashell(&c("1,2")).is_err());
    }

    #[test]
    fn json_round_trip_recovers_frame() {
        let d = build_seashell(&c("3,1,2")).unwrap();
        let back = Diagram::from_json_value(&d.to_json_value()).unwrap();
        assert_eq!(back.frame(), d.frame());
        assert_eq!(back.to_json_value(), d.to_json_value());
        assert!(Diagram::from_json_value(&serde_json::json!({"vertices": [0], "root": 1, "edges": []})).is_err());
    }

    #[test]
    fn dot_export() {
        let dot = build_seashell(&c("2,1")).unwrap().to_dot();
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches("->").count(), 3);
        assert!(dot.contains("dashed"));
    }
}
