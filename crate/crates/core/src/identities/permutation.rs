//! Identities from reordering summation ranges and from the three-point relation.

use super::{zeta, Family, Identity};
use crate::combination::ZetaCombination;
use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::stuffle::stuffle;

fn positive(xs: &[u32]) -> Result<()> {
    if xs.contains(&0) {
        return Err(Error::MalformedComposition("arguments must be >= 1".into()));
    }
    Ok(())
}

/// ζ(a,b) + ζ(b,a) − ζ(a)ζ(b) + ζ(a+b) = 0.
///
/// With `a = 1` or `b = 1` the identity is still returned, flagged regularized.
pub fn reflection(a: u32, b: u32) -> Result<Identity> {
    positive(&[a, b])?;
    let comb = &(&(&zeta(vec![a, b]) + &zeta(vec![b, a])) - &(&zeta(vec![a]) * &zeta(vec![b]))) + &zeta(vec![a + b]);
    Ok(Identity::new(Family::Reflection, vec![a.to_string(), b.to_string()], comb, vec![]))
}

/// stuffle(left, right) − ζ(left)ζ(right) = 0.
pub fn permutation_identity(left: &Composition, right: &Composition) -> Identity {
    let prod = ZetaCombination::product(vec![left.clone(), right.clone()]);
    let comb = &stuffle(left, right) - &prod;
    Identity::new(
        Family::Permutation,
        vec![left.to_string(), right.to_string()],
        comb,
        vec![format!("split the double sum ζ({left})·ζ({right}) into ordered regions")],
    )
}

/// The cyclic relation obtained from the three-point identity at the root of
/// the length-three sea shell.
pub fn three_point_identity(a: u32, b: u32, c: u32) -> Result<Identity> {
    positive(&[a, b, c])?;
    let mut comb = ZetaCombination::zero();
    for (sign, t) in [
        (1, zeta(vec![a, b, c])),
        (1, zeta(vec![b, c, a])),
        (1, zeta(vec![c, a, b])),
        (-1, zeta(vec![a + b + c])),
        (-1, &zeta(vec![a]) * &zeta(vec![b, c])),
        (-1, &zeta(vec![b]) * &zeta(vec![c, a])),
        (-1, &zeta(vec![c]) * &zeta(vec![a, b])),
        (1, &(&zeta(vec![a]) * &zeta(vec![b])) * &zeta(vec![c])),
    ] {
        comb.add_scaled(&crate::combination::rat(sign), &t);
    }
    Ok(Identity::new(
        Family::ThreePoint,
        vec![a.to_string(), b.to_string(), c.to_string()],
        comb,
        vec!["three-point relation at the root of the sea shell with two zero edges".into()],
    ))
}
