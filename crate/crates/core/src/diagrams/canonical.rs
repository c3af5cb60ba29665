//! Canonical labelling for merging isomorphic diagrams.
//!
//! Non-root vertices are split into classes by a degree signature and only
//! permuted within classes; the lexicographically smallest sorted edge list
//! wins. Diagrams in the supported family are small, so this stays cheap.

use std::collections::BTreeMap;

use super::{Diagram, VertexId};

/// Root is vertex 0, other vertices 1..; edges sorted as (from, to, label).
pub type CanonicalKey = (usize, Vec<(usize, usize, u32)>);

fn signature(d: &Diagram, v: VertexId) -> (Vec<u32>, Vec<u32>, usize, usize, usize) {
    let mut ins = Vec::new();
    let mut outs = Vec::new();
    let (mut to_root, mut from_root, mut loops) = (0, 0, 0);
    for (_, e) in d.edges() {
        if e.from == v && e.to == v {
            loops += 1;
            continue;
        }
        if e.to == v {
            ins.push(e.label);
            from_root += (e.from == d.root()) as usize;
        }
        if e.from == v {
            outs.push(e.label);
            to_root += (e.to == d.root()) as usize;
        }
    }
    ins.sort_unstable();
    outs.sort_unstable();
    (ins, outs, to_root, from_root, loops)
}

pub fn canonical_key(d: &Diagram) -> CanonicalKey {
    let mut classes: BTreeMap<_, Vec<VertexId>> = BTreeMap::new();
    for v in d.vertices().filter(|&v| v != d.root()) {
        classes.entry(signature(d, v)).or_default().push(v);
    }
    let groups: Vec<Vec<VertexId>> = classes.into_values().collect();
    let mut best: Option<Vec<(usize, usize, u32)>> = None;
    let mut assign: BTreeMap<VertexId, usize> = BTreeMap::new();
    assign.insert(d.root(), 0);
    search(d, &groups, 0, 1, &mut assign, &mut best);
    (d.vertex_count(), best.unwrap_or_default())
}

fn search(
    d: &Diagram,
    groups: &[Vec<VertexId>],
    gi: usize,
    next: usize,
    assign: &mut BTreeMap<VertexId, usize>,
    best: &mut Option<Vec<(usize, usize, u32)>>,
) {
    if gi == groups.len() {
        let mut edges: Vec<(usize, usize, u32)> =
            d.edges().map(|(_, e)| (assign[&e.from], assign[&e.to], e.label)).collect();
        edges.sort_unstable();
        if best.as_ref().is_none_or(|b| edges < *b) {
            *best = Some(edges);
        }
        return;
    }
    let group = &groups[gi];
    permute(group, &mut vec![false; group.len()], &mut Vec::new(), &mut |perm: &[VertexId]| {
        for (i, &v) in perm.iter().enumerate() {
            assign.insert(v, next + i);
        }
        search(d, groups, gi + 1, next + group.len(), assign, best);
    });
}

fn permute(items: &[VertexId], used: &mut Vec<bool>, cur: &mut Vec<VertexId>, f: &mut dyn FnMut(&[VertexId])) {
    if cur.len() == items.len() {
        f(cur);
        return;
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            cur.push(items[i]);
            permute(items, used, cur, f);
            cur.pop();
            used[i] = false;
        }
    }
}
