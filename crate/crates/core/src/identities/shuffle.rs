//! Shuffle-type product identities from the three-branch recursion
//! Z(A,0|B|C) → Z(A,x|ν,…|0,…) + Z(A,x|0,…|ν,…).

use num_bigint::BigInt;

use super::{binom, int, Family, Identity};
use crate::combination::{Monomial, ZetaCombination};
use crate::composition::Composition;
use crate::error::{Error, Result};

fn expand(prefix: &mut Vec<u32>, b: &[u32], c: &[u32], coeff: &BigInt, out: &mut ZetaCombination) {
    let (b1, c1) = (b[0] as i64, c[0] as i64);
    for (first, other, lowered) in [(b, c, true), (c, b, false)] {
        // `first` keeps ν as its new head, `other` gets the zero head
        let (h1, h2) = (first[0] as i64, other[0] as i64);
        for nu in 1..=h1 {
            let w = if lowered { binom(b1 + c1 - nu - 1, c1 - 1) } else { binom(b1 + c1 - nu - 1, b1 - 1) };
            let coeff = coeff * w;
            prefix.push((h1 + h2 - nu) as u32);
            let mut kept = vec![nu as u32];
            kept.extend_from_slice(&first[1..]);
            let rest = &other[1..];
            if rest.is_empty() {
                let mut parts = prefix.clone();
                parts.extend_from_slice(&kept);
                out.add_term(int(&coeff), Monomial::new(vec![Composition::new(parts).expect("positive parts")]));
            } else {
                expand(prefix, rest, &kept, &coeff, out);
            }
            prefix.pop();
        }
    }
}

/// The expansion of ζ(left)·ζ(right) into single MZVs with positive
/// binomial-product coefficients.
pub fn shuffle_expansion(left: &Composition, right: &Composition) -> Result<ZetaCombination> {
    for x in [left, right] {
        if x.is_signed() || !x.is_admissible() {
            return Err(Error::NotAdmissible(x.to_string()));
        }
    }
    let mut out = ZetaCombination::zero();
    expand(&mut Vec::new(), left.parts(), right.parts(), &BigInt::from(1), &mut out);
    Ok(out)
}

pub fn shuffle_identity(left: &Composition, right: &Composition) -> Result<Identity> {
    let rhs = shuffle_expansion(left, right)?;
    let comb = &ZetaCombination::product(vec![left.clone(), right.clone()]) - &rhs;
    Ok(Identity::new(
        Family::Shuffle,
        vec![left.to_string(), right.to_string()],
        comb,
        vec![format!("start from Z(0|{left}|{right}); integrate by parts at the top vertex and exchange zero heads")],
    ))
}
