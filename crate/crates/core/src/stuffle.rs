//! The quasi-shuffle (stuffle) product, built from interleaving patterns and
//! the merge map that realises each ordered region of a double summation range.

use num_rational::BigRational;
use num_traits::One;

use crate::combination::{Monomial, ZetaCombination};
use crate::composition::Composition;
use crate::error::{Error, Result};

/// Which input feeds a slot of a merged composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Left,
    Right,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InterleavingPattern {
    pub slots: Vec<Slot>,
}

impl InterleavingPattern {
    pub fn count(&self, slot: Slot) -> usize {
        self.slots.iter().filter(|&&s| s == slot).count()
    }
}

/// Every arrangement of `left` Left-slots, `right` Right-slots and `both`
/// Both-slots, in lexicographic slot order. The count is the multinomial
/// coefficient `(left+right+both)! / (left! right! both!)`.
pub fn interleavings(left: usize, right: usize, both: usize) -> Vec<InterleavingPattern> {
    fn rec(rem: [usize; 3], cur: &mut Vec<Slot>, out: &mut Vec<InterleavingPattern>) {
        if rem == [0, 0, 0] {
            out.push(InterleavingPattern { slots: cur.clone() });
            return;
        }
        for (i, slot) in [Slot::Left, Slot::Right, Slot::Both].into_iter().enumerate() {
            if rem[i] > 0 {
                let mut next = rem;
                next[i] -= 1;
                cur.push(slot);
                rec(next, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec([left, right, both], &mut Vec::new(), &mut out);
    out
}

/// Merges two part lists along `pattern`: a Left slot takes the next left part,
/// a Right slot the next right part, a Both slot their sum.
pub fn merge_parts(left: &[u32], right: &[u32], pattern: &InterleavingPattern) -> Result<Vec<u32>> {
    let both = pattern.count(Slot::Both);
    if pattern.count(Slot::Left) + both != left.len() || pattern.count(Slot::Right) + both != right.len() {
        return Err(Error::PatternShape(format!(
            "pattern with {} slots cannot merge lengths {} and {}",
            pattern.slots.len(),
            left.len(),
            right.len()
        )));
    }
    let (mut li, mut ri) = (left.iter(), right.iter());
    let merged = pattern
        .slots
        .iter()
        .map(|slot| match slot {
            Slot::Left => *li.next().unwrap(),
            Slot::Right => *ri.next().unwrap(),
            Slot::Both => li.next().unwrap() + ri.next().unwrap(),
        })
        .collect();
    Ok(merged)
}

/// The merge map on compositions.
pub fn rho(left: &Composition, right: &Composition, pattern: &InterleavingPattern) -> Result<Composition> {
    if left.is_signed() || right.is_signed() {
        return Err(Error::MalformedComposition("signed compositions are not merged symbolically".into()));
    }
    Ok(Composition::from_parts_unchecked(merge_parts(left.parts(), right.parts(), pattern)?))
}

/// Σ over `a = 0..=min(m, m')` and all patterns with `a` Both-slots of ζ(ρ(left, right, pattern)).
/// Equals ζ(left)·ζ(right) whenever both sums converge; divergent inputs give a
/// formal (regularized) combination.
pub fn stuffle(left: &Composition, right: &Composition) -> ZetaCombination {
    let (m, n) = (left.depth(), right.depth());
    let mut out = ZetaCombination::zero();
    for a in 0..=m.min(n) {
        for p in interleavings(m - a, n - a, a) {
            let merged = rho(left, right, &p).expect("pattern shape fits by construction");
            out.add_term(BigRational::one(), Monomial::new(vec![merged]));
        }
    }
    out
}

/// Bilinear extension of [`stuffle`] to combinations whose terms are single
/// MZVs (or the constant 1). Product terms with several factors are expanded
/// left to right.
pub fn stuffle_combinations(x: &ZetaCombination, y: &ZetaCombination) -> ZetaCombination {
    let mut out = ZetaCombination::zero();
    for (mx, cx) in x.iter() {
        for (my, cy) in y.iter() {
            let mut factors: Vec<Composition> = mx.factors().to_vec();
            factors.extend(my.factors().iter().cloned());
            out.add_scaled(&(cx * cy), &expand_product(&factors));
        }
    }
    out
}

/// Rewrites a product of MZVs as a linear combination of single MZVs.
pub fn expand_product(factors: &[Composition]) -> ZetaCombination {
    let mut acc = ZetaCombination::constant(BigRational::one());
    for f in factors {
        let mut next = ZetaCombination::zero();
        for (m, c) in acc.iter() {
            match m.factors() {
                [] => next.add_term(c.clone(), Monomial::new(vec![f.clone()])),
                [single] => next.add_scaled(c, &stuffle(single, f)),
                _ => unreachable!("accumulator holds single MZVs"),
            }
        }
        acc = next;
    }
    acc
}
