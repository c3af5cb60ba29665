//! Removal of ζ(1…) factors by the special permutation identity
//! ζ(1)ζ(K) − ζ(1,K) = Σ_κ [ζ(…,k_κ+1,…) + ζ(…,k_κ,1,…)].

use num_rational::BigRational;

use super::zc;
use crate::combination::{Monomial, ZetaCombination};
use crate::composition::Composition;
use crate::error::{Error, Result};

/// Right-hand side of the special identity for an admissible tail `K`.
pub fn reflection_special_rhs(k: &Composition) -> ZetaCombination {
    let parts = k.parts();
    let mut out = ZetaCombination::zero();
    for i in 0..parts.len() {
        let mut raised = parts.to_vec();
        raised[i] += 1;
        out = &out + &ZetaCombination::zeta(zc(raised));
        let mut inserted = parts[..=i].to_vec();
        inserted.push(1);
        inserted.extend_from_slice(&parts[i + 1..]);
        out = &out + &ZetaCombination::zeta(zc(inserted));
    }
    out
}

/// `ζ(1, K)` with `K` admissible, as the tail `K`.
fn replaceable(f: &Composition) -> Option<Composition> {
    if f.is_signed() || f.depth() < 2 || f.parts()[0] != 1 {
        return None;
    }
    let tail = f.tail()?;
    tail.is_admissible().then_some(tail)
}

/// Rewrites every ζ(1,K)·R as ζ(1)ζ(K)·R − E(K)·R; the ζ(1)ζ(K) pieces must then
/// cancel. Fails, returning the input unchanged inside the error, when a
/// divergent factor survives.
pub fn eliminate_zeta1(comb: &ZetaCombination) -> Result<ZetaCombination> {
    if !comb.is_regularized() {
        return Ok(comb.clone());
    }
    let mut out = ZetaCombination::zero();
    let mut pending: Vec<(Monomial, BigRational)> = comb.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
    while let Some((m, c)) = pending.pop() {
        let factors = m.factors();
        let Some(pos) = factors.iter().position(|f| replaceable(f).is_some()) else {
            out.add_term(c, m);
            continue;
        };
        let k = replaceable(&factors[pos]).unwrap();
        let mut rest: Vec<Composition> = factors.to_vec();
        rest.remove(pos);
        let rest = ZetaCombination::product(rest);
        let div = ZetaCombination::product(vec![Composition::single(1), k.clone()]);
        let sub = &(&div - &reflection_special_rhs(&k)) * &rest;
        for (sm, sc) in sub.iter() {
            pending.push((sm.clone(), &c * sc));
        }
    }
    let left: Vec<String> = out.iter().filter(|(m, _)| m.is_regularized()).map(|(m, _)| m.to_string()).collect();
    if !left.is_empty() {
        return Err(Error::EliminationFailure {
            diagnostic: format!("divergent terms survive elimination: {}", left.join(", ")),
            combination: comb.clone(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(s: &str) -> ZetaCombination {
        ZetaCombination::zeta(s.parse().unwrap())
    }

    fn sum(xs: &[&str]) -> ZetaCombination {
        xs.iter().fold(ZetaCombination::zero(), |acc, s| &acc + &z(s))
    }

    #[test]
    fn depth_one_tail() {
        let c = &(&z("1") * &z("2")) - &z("1,2");
        assert_eq!(eliminate_zeta1(&c).unwrap(), sum(&["3", "2,1"]));
    }

    #[test]
    fn depth_two_tail() {
        let c = &(&z("1") * &z("3,2")) - &z("1,3,2");
        assert_eq!(eliminate_zeta1(&c).unwrap(), sum(&["3,2,1", "3,1,2", "4,2", "3,3"]));
    }

    #[test]
    fn convergent_unchanged() {
        assert_eq!(eliminate_zeta1(&z("2,3")).unwrap(), z("2,3"));
    }

    #[test]
    fn unmatched_failure_keeps_input() {
        let c = &z("1,2") + &z("4");
        match eliminate_zeta1(&c) {
            Err(Error::EliminationFailure { combination, diagnostic }) => {
                assert_eq!(combination, c);
                assert!(diagnostic.contains("ζ(1)"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(eliminate_zeta1(&z("1,1,2")).is_err());
    }
}
