//! Numerical oracle: MZVs, combinations, identity verification, the circle
//! propagator and the free-energy coefficients.

pub mod bernoulli;
pub mod lnz;
pub mod mzv;
pub mod propagator;
pub mod real;

use serde_json::json;

pub use lnz::lnz_coefficients;
pub use mzv::{eval_mzv_accel, eval_mzv_direct, eval_mzv_direct_with, li_at_half, MzvOracle, PrecisionValue};
pub use propagator::{bernoulli_real_part_exact, eval_propagator, ComplexValue, PropagatorValue};
pub use real::{ln2, pi, Real, WorkingPrecision};

use crate::combination::{format_rational, ZetaCombination};
use crate::error::{Error, Result};
use crate::identities::Identity;

/// Truncation used when a signed factor shows up inside a combination.
pub const SIGNED_TRUNCATION: u64 = 1_000_000;

/// Default verification target.
pub const DEFAULT_EPS: f64 = 1e-12;

pub fn eval_combination(comb: &ZetaCombination, eps: f64) -> Result<PrecisionValue> {
    let mut oracle = MzvOracle::new(WorkingPrecision::from_env());
    eval_combination_with(&mut oracle, comb, eps)
}

pub fn eval_combination_with(oracle: &mut MzvOracle, comb: &ZetaCombination, eps: f64) -> Result<PrecisionValue> {
    Ok(eval_terms(oracle, comb, eps)?.0)
}

fn eval_terms(
    oracle: &mut MzvOracle,
    comb: &ZetaCombination,
    eps: f64,
) -> Result<(PrecisionValue, Vec<(String, String, PrecisionValue)>)> {
    if comb.is_regularized() {
        return Err(Error::Divergent);
    }
    let prec = oracle.precision();
    let mut total = PrecisionValue::exact(Real::zero(prec));
    let mut per_term = Vec::with_capacity(comb.len());
    for (m, c) in comb.iter() {
        let mut prod = PrecisionValue::exact(Real::one(prec));
        for f in m.factors() {
            let v = if f.is_signed() {
                mzv::eval_mzv_direct_with(f, SIGNED_TRUNCATION, prec)?
            } else {
                oracle.eval(f, eps)?
            };
            prod = prod.mul(&v);
        }
        let cf = bernoulli::rational_to_f64(c).abs();
        let scaled = PrecisionValue {
            value: prod.value.mul_rational(c),
            bound: prod.bound * cf + 2.0 * prec.ulp(),
        };
        per_term.push((format_rational(c), m.to_string(), prod));
        total = total.add(&scaled);
    }
    if total.bound > eps {
        return Err(Error::Precision { requested: eps, floor: total.bound });
    }
    Ok((total, per_term))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermValue {
    pub coefficient: String,
    pub term: String,
    pub value: String,
}

/// Outcome of checking `combination = 0` numerically.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub identity: String,
    pub pass: bool,
    pub residual: Real,
    pub bound: f64,
    pub terms: Vec<TermValue>,
}

impl VerificationReport {
    pub fn residual_f64(&self) -> f64 {
        self.residual.to_f64()
    }

    pub fn residual_string(&self) -> String {
        let r = self.residual_f64();
        if r == 0.0 {
            "0".to_string()
        } else {
            format!("{r:.6e}")
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "identity": self.identity,
            "residual": self.residual_string(),
            "bound": format!("{:.6e}", self.bound),
            "pass": self.pass,
            "terms": self.terms.iter().map(|t| json!({
                "coefficient": t.coefficient,
                "term": t.term,
                "value": t.value,
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn verify_identity(id: &Identity, eps: f64) -> Result<VerificationReport> {
    let mut oracle = MzvOracle::new(WorkingPrecision::from_env());
    verify_identity_with(&mut oracle, id, eps)
}

pub fn verify_identity_with(oracle: &mut MzvOracle, id: &Identity, eps: f64) -> Result<VerificationReport> {
    if id.regularized {
        return Err(Error::Precondition(format!(
            "identity {} still contains ζ(1…) factors; eliminate them first",
            id.label()
        )));
    }
    verify_combination_with(oracle, &id.combination, &id.label(), eps)
}

pub fn verify_combination_with(
    oracle: &mut MzvOracle,
    comb: &ZetaCombination,
    label: &str,
    eps: f64,
) -> Result<VerificationReport> {
    let (total, per_term) = eval_terms(oracle, comb, eps)?;
    let digits = total.reliable_digits().min(30);
    let terms = per_term
        .into_iter()
        .map(|(coefficient, term, v)| TermValue { coefficient, term, value: v.value.to_decimal(digits) })
        .collect();
    // every product and scaling rounds once more than the bound already tracks
    let bound = total.bound + (comb.len() as f64 + 1.0) * 4.0 * oracle.precision().ulp();
    let pass = total.value.abs().to_f64() <= bound;
    Ok(VerificationReport { identity: label.to_string(), pass, residual: total.value, bound, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combination::rat;
    use crate::composition::Composition;

    fn z(s: &str) -> ZetaCombination {
        ZetaCombination::zeta(s.parse::<Composition>().unwrap())
    }

    #[test]
    fn empty_combination_is_exact_zero() {
        let v = eval_combination(&ZetaCombination::zero(), 1e-12).unwrap();
        assert_eq!(v.bound, 0.0);
        assert_eq!(v.to_f64(), 0.0);
    }

    #[test]
    fn reflection_value() {
        let lhs = &(&z("2") * &z("3")) - &z("5");
        let rhs = &z("2,3") + &z("3,2");
        let a = eval_combination(&lhs, 1e-12).unwrap();
        let b = eval_combination(&rhs, 1e-12).unwrap();
        assert!(a.value.sub(&b.value).abs().to_f64() <= a.bound + b.bound + 1e-35);
    }

    #[test]
    fn euler_relation_balances() {
        let c = &(&z("2,2").scale(&rat(2)) + &z("4")) - &(&z("2") * &z("2"));
        let v = eval_combination(&c, 1e-12).unwrap();
        assert!(v.value.abs().to_f64() <= v.bound + 1e-35);
    }

    #[test]
    fn regularized_rejected() {
        assert!(matches!(eval_combination(&z("1,2"), 1e-12), Err(Error::Divergent)));
    }
}
