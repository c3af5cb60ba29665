//! Evaluation of zeta diagrams by counting integer circulations.
//!
//! Flow conservation is solved by Gaussian elimination on the incidence
//! matrix with zero edges preferred as pivots. A zeta diagram is one where the
//! weighted edges carry independent flows and every zero edge carries either
//! a difference `n_i − n_j` (a strict order) or a non-negative combination
//! (no constraint). The sum over the resulting partial order splits into
//! ordered set partitions, each contributing one MZV.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Diagram, EdgeId};
use crate::combination::{Monomial, ZetaCombination};
use crate::composition::Composition;
use crate::error::{Error, Result};

fn irreducible(reason: &str) -> Error {
    Error::Irreducible { reason: reason.to_string(), partial: ZetaCombination::zero() }
}

/// The value of a zeta diagram as a combination of (products of) MZVs.
pub fn evaluate(d: &Diagram) -> Result<ZetaCombination> {
    let mut loops: Vec<u32> = Vec::new();
    let mut cols: Vec<EdgeId> = Vec::new();
    for (id, e) in d.edges() {
        if e.from == e.to {
            if e.label == 0 {
                return Err(Error::Divergent);
            }
            loops.push(e.label);
        } else {
            cols.push(id);
        }
    }
    // a vertex with edges in one direction only integrates to zero
    for v in d.vertices() {
        let (ins, outs) = d.incident(v);
        if ins.is_empty() != outs.is_empty() {
            return Ok(ZetaCombination::zero());
        }
    }
    // zero edges first so they become pivots
    cols.sort_by_key(|&id| (d.edge(id).unwrap().label != 0, id));
    let verts: Vec<usize> = d.vertices().collect();
    let mut rows: Vec<Vec<BigRational>> = verts
        .iter()
        .map(|&v| {
            cols.iter()
                .map(|&id| {
                    let e = d.edge(id).unwrap();
                    let x = (e.from == v) as i64 - (e.to == v) as i64;
                    BigRational::from_integer(BigInt::from(x))
                })
                .collect()
        })
        .collect();
    let pivots = rref(&mut rows, cols.len());
    let is_pivot: Vec<bool> = (0..cols.len()).map(|c| pivots.iter().any(|&(_, pc)| pc == c)).collect();
    let free: Vec<usize> = (0..cols.len()).filter(|&c| !is_pivot[c]).collect();
    for &c in &free {
        if d.edge(cols[c]).unwrap().label == 0 {
            return Err(irreducible("a zero edge carries an unconstrained flow"));
        }
    }
    // weighted elements: free columns then loops
    let mut labels: Vec<u32> =
        free.iter().map(|&c| d.edge(cols[c]).unwrap().label).chain(loops.iter().copied()).collect();
    let n = labels.len();
    let mut greater: Vec<(usize, usize)> = Vec::new();
    for &(r, pc) in &pivots {
        // pivot flow = −Σ_free row[c]·n_c
        let coeffs: Vec<BigRational> = free.iter().map(|&c| -rows[r][c].clone()).collect();
        if coeffs.iter().all(Zero::is_zero) {
            return Ok(ZetaCombination::zero());
        }
        let label = d.edge(cols[pc]).unwrap().label;
        if label != 0 {
            // a weighted edge in series with a free one: the two labels add
            let nz: Vec<usize> = (0..coeffs.len()).filter(|&i| !coeffs[i].is_zero()).collect();
            match nz[..] {
                [i] if coeffs[i].is_one() => labels[i] += label,
                [i] if (-&coeffs[i]).is_one() => return Ok(ZetaCombination::zero()),
                _ => return Err(irreducible("weighted edges are linearly dependent; integrate by parts first")),
            }
            continue;
        }
        if coeffs.iter().all(|x| !x.is_negative()) {
            continue;
        }
        let pos: Vec<usize> = (0..coeffs.len()).filter(|&i| coeffs[i].is_positive()).collect();
        let neg: Vec<usize> = (0..coeffs.len()).filter(|&i| coeffs[i].is_negative()).collect();
        let unit = |i: &usize| coeffs[*i].abs().is_one();
        if pos.len() == 1 && neg.len() == 1 && unit(&pos[0]) && unit(&neg[0]) {
            greater.push((pos[0], neg[0]));
        } else {
            return Err(irreducible("a zero edge imposes a nested constraint"));
        }
    }
    Ok(poset_sum(n, &labels, &greater))
}

/// Reduced row echelon form in place; returns (row, column) pivots.
fn rref(rows: &mut [Vec<BigRational>], ncols: usize) -> Vec<(usize, usize)> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Σ over n ∈ ℕ^len with n_a > n_b for each (a, b) of Π n_i^{−labels_i}.
fn poset_sum(len: usize, labels: &[u32], greater: &[(usize, usize)]) -> ZetaCombination {
    // connected components of the comparability graph multiply
    let mut comp: Vec<usize> = (0..len).collect();
    fn find(c: &mut Vec<usize>, x: usize) -> usize {
        if c[x] != x {
            let r = find(c, c[x]);
            c[x] = r;
        }
        c[x]
    }
    for &(a, b) in greater {
        let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
        comp[ra] = rb;
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..len {
        let r = find(&mut comp, i);
        groups.entry(r).or_default().push(i);
    }
    let mut total = ZetaCombination::constant(BigRational::one());
    for members in groups.values() {
        let mut acc: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        ordered_partitions(members, greater, labels, &mut Vec::new(), &mut acc);
        let mut part = ZetaCombination::zero();
        for (parts, count) in acc {
            let c = Composition::new(parts).expect("labels of weighted edges are positive");
            part.add_term(BigRational::from_integer(BigInt::from(count)), Monomial::new(vec![c]));
        }
        total = &total * &part;
    }
    total
}

fn ordered_partitions(
    remaining: &[usize],
    greater: &[(usize, usize)],
    labels: &[u32],
    cur: &mut Vec<u32>,
    acc: &mut BTreeMap<Vec<u32>, i64>,
) {
    if remaining.is_empty() {
        *acc.entry(cur.clone()).or_default() += 1;
        return;
    }
    // elements not forced below another remaining element
    let sources: Vec<usize> = remaining
        .iter()
        .copied()
        .filter(|&x| !greater.iter().any(|&(a, b)| b == x && remaining.contains(&a)))
        .collect();
    if sources.is_empty() {
        // cyclic constraints admit no assignment
        return;
    }
    for mask in 1u32..(1 << sources.len()) {
        let block: Vec<usize> = (0..sources.len()).filter(|&i| mask >> i & 1 == 1).map(|i| sources[i]).collect();
        let rest: Vec<usize> = remaining.iter().copied().filter(|x| !block.contains(x)).collect();
        cur.push(block.iter().map(|&i| labels[i]).sum());
        ordered_partitions(&rest, greater, labels, cur, acc);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::super::{build_g5, build_half_moon, build_peacock, build_seashell};
    use super::*;

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    fn z(s: &str) -> ZetaCombination {
        ZetaCombination::zeta(c(s))
    }

    #[test]
    fn seashell_values() {
        for s in ["2", "2,1", "3,1,2", "2,1,1,1"] {
            assert_eq!(evaluate(&build_seashell(&c(s)).unwrap()).unwrap(), z(s));
        }
    }

    #[test]
    fn half_moon_zeta_cases() {
        assert_eq!(evaluate(&build_half_moon(0, 2, 3)).unwrap(), &z("2") * &z("3"));
        assert_eq!(evaluate(&build_half_moon(2, 0, 3)).unwrap(), z("2,3"));
        assert_eq!(evaluate(&build_half_moon(2, 3, 0)).unwrap(), z("2,3"));
        assert!(matches!(evaluate(&build_half_moon(1, 1, 1)), Err(Error::Irreducible { .. })));
    }

    #[test]
    fn g5_zeta_cases() {
        assert_eq!(evaluate(&build_g5(2, 0, 3, 0, 4)).unwrap(), z("2,3,4"));
        assert_eq!(evaluate(&build_g5(2, 0, 3, 4, 0)).unwrap(), z("2,3,4"));
        assert_eq!(evaluate(&build_g5(0, 2, 3, 0, 4)).unwrap(), &z("2") * &z("3,4"));
    }

    #[test]
    fn peacock_zeta_cases() {
        assert_eq!(evaluate(&build_peacock(&[0], &[2], &[3]).unwrap()).unwrap(), &z("2") * &z("3"));
        assert_eq!(evaluate(&build_peacock(&[2], &[0], &[3]).unwrap()).unwrap(), z("2,3"));
        assert_eq!(evaluate(&build_peacock(&[2, 1], &[3, 1], &[0]).unwrap()).unwrap(), z("2,1,3,1"));
        assert_eq!(evaluate(&build_peacock(&[0], &[2, 1], &[3]).unwrap()).unwrap(), &z("2,1") * &z("3"));
    }

    #[test]
    fn unconstrained_pair_factorizes() {
        // two weighted loops through the root and one zero edge ordering nothing
        let d = Diagram::new(
            [0, 1, 2],
            0,
            vec![
                super::super::Edge { from: 0, to: 1, label: 2 },
                super::super::Edge { from: 1, to: 0, label: 0 },
                super::super::Edge { from: 0, to: 2, label: 0 },
                super::super::Edge { from: 2, to: 1, label: 3 },
            ],
        )
        .unwrap();
        // flows: n(0→1)=a, n(2→1)=b, zero edges carry a+b and b: no order
        let v = evaluate(&d).unwrap();
        assert_eq!(v, &z("2") * &z("3"));
    }

    #[test]
    fn one_directional_vertex_vanishes() {
        let d = Diagram::new(
            [0, 1],
            0,
            vec![super::super::Edge { from: 0, to: 1, label: 2 }, super::super::Edge { from: 0, to: 1, label: 3 }],
        )
        .unwrap();
        assert!(evaluate(&d).unwrap().is_zero());
    }
}
