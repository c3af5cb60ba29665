//! The graphical manipulations: zero-edge reversal, two-vertex integration,
//! partial integration, exchange of inner edges and the three-point relation.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::canonical::{canonical_key, CanonicalKey};
use super::{evaluate, Diagram, Edge, EdgeId, VertexId};
use crate::combination::{rat, ZetaCombination};
use crate::error::{Error, Result};

fn inapplicable(msg: impl Into<String>) -> Error {
    Error::RuleInapplicable(msg.into())
}

/// Rational combination of diagrams plus an already-closed MZV part.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiagramCombination {
    terms: Vec<(BigRational, Diagram)>,
    closed: ZetaCombination,
}

impl DiagramCombination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(d: Diagram) -> Self {
        DiagramCombination { terms: vec![(BigRational::one(), d)], closed: ZetaCombination::zero() }
    }

    pub fn push(&mut self, coefficient: BigRational, d: Diagram) {
        if !coefficient.is_zero() {
            self.terms.push((coefficient, d));
        }
    }

    pub fn add_closed(&mut self, c: &ZetaCombination) {
        self.closed = &self.closed + c;
    }

    pub fn terms(&self) -> &[(BigRational, Diagram)] {
        &self.terms
    }

    pub fn closed(&self) -> &ZetaCombination {
        &self.closed
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.closed.is_zero()
    }

    /// Value of every term through the flow evaluator.
    pub fn evaluate(&self) -> Result<ZetaCombination> {
        let mut out = self.closed.clone();
        for (c, d) in &self.terms {
            out.add_scaled(c, &evaluate(d)?);
        }
        Ok(out)
    }

    /// Merges isomorphic diagrams and drops cancelled terms.
    pub fn normalize(&self) -> DiagramCombination {
        let mut merged: BTreeMap<CanonicalKey, (BigRational, Diagram)> = BTreeMap::new();
        for (c, d) in &self.terms {
            merged
                .entry(canonical_key(d))
                .and_modify(|(acc, _)| *acc += c)
                .or_insert_with(|| (c.clone(), d.clone()));
        }
        DiagramCombination {
            terms: merged.into_values().filter(|(c, _)| !c.is_zero()).collect(),
            closed: self.closed.clone(),
        }
    }

    fn scaled(mut self, s: &BigRational) -> Self {
        for (c, _) in self.terms.iter_mut() {
            *c *= s;
        }
        self.closed = self.closed.scale(s);
        self
    }

    /// Replaces term `i` by a combination (applying a rule to one term).
    pub fn expand_term(&self, i: usize, with: DiagramCombination) -> DiagramCombination {
        let mut out = DiagramCombination { terms: Vec::new(), closed: self.closed.clone() };
        for (j, (c, d)) in self.terms.iter().enumerate() {
            if j == i {
                let w = with.clone().scaled(c);
                out.closed = &out.closed + &w.closed;
                out.terms.extend(w.terms);
            } else {
                out.terms.push((c.clone(), d.clone()));
            }
        }
        out
    }
}

/// g_{12} = −g_{21} + δ_{12} − 1 applied to a zero edge.
pub fn rewrite_reverse_edge(d: &Diagram, e: EdgeId) -> Result<DiagramCombination> {
    let edge = *d.edge(e)?;
    if edge.label != 0 {
        return Err(inapplicable(format!("edge {e} has label {}, reversal needs a zero edge", edge.label)));
    }
    if edge.from == edge.to {
        return Err(inapplicable("cannot reverse a self-loop"));
    }
    let mut out = DiagramCombination::new();
    let mut rev = d.clone();
    {
        let x = rev.edge_mut(e);
        std::mem::swap(&mut x.from, &mut x.to);
    }
    rev.clear_frame();
    out.push(rat(-1), rev);
    let mut fused = d.clone();
    fused.remove_edge(e);
    fused.fuse(edge.from, edge.to);
    out.push(rat(1), fused);
    let mut deleted = d.clone();
    deleted.remove_edge(e);
    deleted.clear_frame();
    out.push(rat(-1), deleted);
    Ok(out)
}

/// Removes a non-root vertex with one incoming edge k and one outgoing edge l,
/// joining them into a single edge k + l.
pub fn rewrite_integrate_valence2(d: &Diagram, v: VertexId) -> Result<Diagram> {
    if v == d.root() {
        return Err(inapplicable("the root is never integrated"));
    }
    if d.has_loop_at(v) {
        return Err(inapplicable(format!("vertex {v} carries a self-loop")));
    }
    let (ins, outs) = d.incident(v);
    if ins.len() != 1 || outs.len() != 1 {
        return Err(inapplicable(format!(
            "vertex {v} has {} incoming and {} outgoing edges; need exactly one of each",
            ins.len(),
            outs.len()
        )));
    }
    let out_edge = *d.edge(outs[0])?;
    let mut r = d.clone();
    r.remove_edge(outs[0]);
    {
        let e = r.edge_mut(ins[0]);
        e.to = out_edge.to;
        e.label += out_edge.label;
    }
    r.remove_vertex(v);
    r.clear_frame();
    Ok(r)
}

/// Partial integration at a vertex with exactly three edges: `raise` gains
/// one unit and each of the other two loses one. The edge whose direction is
/// unique at `v` carries the sum of the other two flows; raising it gives
/// (+, +), raising one of the pair gives + for lowering the unique edge and −
/// for lowering the other.
pub fn rewrite_partial_integration(d: &Diagram, v: VertexId, raise: EdgeId) -> Result<DiagramCombination> {
    if d.has_loop_at(v) {
        return Err(inapplicable(format!("vertex {v} carries a self-loop")));
    }
    let (ins, outs) = d.incident(v);
    if ins.len() + outs.len() != 3 || ins.is_empty() || outs.is_empty() {
        return Err(inapplicable(format!(
            "partial integration needs three edges in both directions at vertex {v}; found {} in, {} out",
            ins.len(),
            outs.len()
        )));
    }
    let (lone, pair) = if ins.len() == 1 { (ins[0], [outs[0], outs[1]]) } else { (outs[0], [ins[0], ins[1]]) };
    let lowered: [(EdgeId, i64); 2] = if raise == lone {
        [(pair[0], 1), (pair[1], 1)]
    } else if raise == pair[0] {
        [(lone, 1), (pair[1], -1)]
    } else if raise == pair[1] {
        [(lone, 1), (pair[0], -1)]
    } else {
        return Err(inapplicable(format!("edge {raise} does not meet vertex {v}")));
    };
    for (e, _) in lowered {
        if d.edge(e)?.label == 0 {
            return Err(inapplicable(format!("edge {e} already has label 0 and cannot be lowered")));
        }
    }
    let mut out = DiagramCombination::new();
    for (e, sign) in lowered {
        let mut t = d.clone();
        let r = t.edge(raise)?.label;
        t.set_label(raise, r + 1);
        let l = t.edge(e)?.label;
        t.set_label(e, l - 1);
        out.push(rat(sign), t);
    }
    Ok(out)
}

/// With a zero edge `T → z` that is the only edge entering `z`, moves the
/// source of `x` (leaving `T`) to `z` and the source of `y` (leaving `z`) to
/// `T`. The value is unchanged; applying it twice restores the diagram.
pub fn rewrite_exchange_inner(d: &Diagram, zero_edge: EdgeId, x: EdgeId, y: EdgeId) -> Result<Diagram> {
    let e = *d.edge(zero_edge)?;
    if e.label != 0 {
        return Err(inapplicable(format!("edge {zero_edge} has label {}, exchange needs a zero edge", e.label)));
    }
    let (top, z) = (e.from, e.to);
    if top == z {
        return Err(inapplicable("exchange along a self-loop"));
    }
    let (ins, _) = d.incident(z);
    if ins != [zero_edge] || d.has_loop_at(z) {
        return Err(inapplicable(format!("vertex {z} must be entered by edge {zero_edge} alone")));
    }
    let (ex, ey) = (*d.edge(x)?, *d.edge(y)?);
    if x == zero_edge || ex.from != top || ex.to == top {
        return Err(inapplicable(format!("edge {x} must leave vertex {top}")));
    }
    if ey.from != z || ey.to == z {
        return Err(inapplicable(format!("edge {y} must leave vertex {z}")));
    }
    let mut r = d.clone();
    r.edge_mut(x).from = z;
    r.edge_mut(y).from = top;
    Ok(r)
}

/// The three-point relation for two zero edges meeting at `v` (both entering
/// or both leaving):
/// g21·g31 = −g12·g32 − g13·g23 + 1 + δ12·g32 + δ31·g21 + δ23·g13 − δ12·δ13
/// with vertex 1 = `v`.
pub fn rewrite_three_point(d: &Diagram, v: VertexId, e1: EdgeId, e2: EdgeId) -> Result<DiagramCombination> {
    let (a, b) = (*d.edge(e1)?, *d.edge(e2)?);
    if e1 == e2 || a.label != 0 || b.label != 0 {
        return Err(inapplicable("three-point relation needs two distinct zero edges"));
    }
    let into = a.to == v && b.to == v;
    let out_of = a.from == v && b.from == v;
    if !(into || out_of) || a.from == a.to || b.from == b.to {
        return Err(inapplicable(format!("edges {e1} and {e2} must both enter or both leave vertex {v}")));
    }
    let (x, y) = if into { (a.from, b.from) } else { (a.to, b.to) };
    if x == y {
        return Err(inapplicable("the two edges must come from distinct vertices"));
    }
    // orient(p, q) is the edge p → q in the entering case, q → p otherwise
    let orient = |p: VertexId, q: VertexId| if into { Edge { from: p, to: q, label: 0 } } else { Edge { from: q, to: p, label: 0 } };
    let with = |ea: Option<Edge>, eb: Option<Edge>, fuse: &[(VertexId, VertexId)]| -> Diagram {
        let mut t = d.clone();
        t.clear_frame();
        match ea {
            Some(ed) => *t.edge_mut(e1) = ed,
            None => {
                t.remove_edge(e1);
            }
        }
        match eb {
            Some(ed) => *t.edge_mut(e2) = ed,
            None => {
                t.remove_edge(e2);
            }
        }
        let mut alias: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        for &(p, q) in fuse {
            let rp = *alias.get(&p).unwrap_or(&p);
            let rq = *alias.get(&q).unwrap_or(&q);
            let keep = t.fuse(rp, rq);
            let gone = if keep == rp { rq } else { rp };
            for val in alias.values_mut() {
                if *val == gone {
                    *val = keep;
                }
            }
            alias.insert(gone, keep);
            alias.insert(p, keep);
            alias.insert(q, keep);
        }
        t
    };
    let mut out = DiagramCombination::new();
    // −g12 g32
    out.push(rat(-1), with(Some(orient(v, x)), Some(orient(y, x)), &[]));
    // −g13 g23
    out.push(rat(-1), with(Some(orient(x, y)), Some(orient(v, y)), &[]));
    // +1
    out.push(rat(1), with(None, None, &[]));
    // +δ12 g32
    out.push(rat(1), with(None, Some(orient(y, x)), &[(v, x)]));
    // +δ31 g21
    out.push(rat(1), with(Some(orient(x, v)), None, &[(v, y)]));
    // +δ23 g13
    out.push(rat(1), with(Some(orient(v, x)), None, &[(x, y)]));
    // −δ12 δ13
    out.push(rat(-1), with(None, None, &[(v, x), (v, y)]));
    Ok(out)
}
