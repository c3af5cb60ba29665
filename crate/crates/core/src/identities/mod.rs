//! Closed-form identity families over [`ZetaCombination`].
//!
//! Every emitter returns an [`Identity`]: a normalized combination asserted to
//! vanish, tagged with its family and parameters.

mod elimination;
mod partial;
mod permutation;
mod shuffle;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

pub use elimination::{eliminate_zeta1, reflection_special_rhs};
pub use partial::{
    idbig_raw, idbignice_raw, partial_integration_general, partial_integration_length2,
    partial_integration_length2_raw, partial_integration_length3, trailing_one, zeta3altern_raw,
    zeta_len3_raw,
};
pub use permutation::{permutation_identity, reflection, three_point_identity};
pub use shuffle::{shuffle_expansion, shuffle_identity};

use crate::combination::ZetaCombination;
use crate::composition::Composition;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Reflection,
    Permutation,
    ThreePoint,
    PartialIntegration2,
    PartialIntegration3,
    PartialIntegration,
    TrailingOne,
    Shuffle,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Reflection,
        Family::Permutation,
        Family::ThreePoint,
        Family::PartialIntegration2,
        Family::PartialIntegration3,
        Family::PartialIntegration,
        Family::TrailingOne,
        Family::Shuffle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Reflection => "reflection",
            Family::Permutation => "permutation",
            Family::ThreePoint => "three-point",
            Family::PartialIntegration2 => "partial-integration-2",
            Family::PartialIntegration3 => "partial-integration-3",
            Family::PartialIntegration => "partial-integration",
            Family::TrailingOne => "trailing-one",
            Family::Shuffle => "shuffle",
        }
    }

    pub fn grammar(self) -> &'static str {
        match self {
            Family::Reflection => "A B (integers, >= 2 for a convergent identity)",
            Family::Permutation => "LEFT RIGHT (compositions)",
            Family::ThreePoint => "A B C (integers >= 1)",
            Family::PartialIntegration2 => "A B (A >= 2, B >= 1)",
            Family::PartialIntegration3 => "A B C [--variant rightward|alternative] (A >= 2)",
            Family::PartialIntegration => "K1,...,KM [--variant rightward|leftward]",
            Family::TrailingOne => "K1,...,1 (first part >= 2, last part 1)",
            Family::Shuffle => "LEFT RIGHT (admissible compositions)",
        }
    }

    /// Final families never emit ζ(1…) factors.
    pub fn is_final(self) -> bool {
        matches!(
            self,
            Family::PartialIntegration2
                | Family::PartialIntegration3
                | Family::PartialIntegration
                | Family::TrailingOne
                | Family::Shuffle
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    #[default]
    Rightward,
    Leftward,
    Alternative,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Rightward => "rightward",
            Variant::Leftward => "leftward",
            Variant::Alternative => "alternative",
        }
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rightward" => Ok(Variant::Rightward),
            "leftward" => Ok(Variant::Leftward),
            "alternative" => Ok(Variant::Alternative),
            _ => Err(Error::Precondition(format!("unknown variant {s:?}"))),
        }
    }
}

/// A combination asserted to equal zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub family: Family,
    pub parameters: Vec<String>,
    pub combination: ZetaCombination,
    pub regularized: bool,
    pub is_final: bool,
    pub derivation: Vec<String>,
}

impl Identity {
    pub fn new(family: Family, parameters: Vec<String>, combination: ZetaCombination, derivation: Vec<String>) -> Self {
        let combination = combination.normalize();
        let regularized = combination.is_regularized();
        Identity { family, parameters, combination, regularized, is_final: family.is_final() && !regularized, derivation }
    }

    pub fn label(&self) -> String {
        format!("{}({})", self.family, self.parameters.join("; "))
    }

    /// `lhs = rhs` rendered in ζ notation, with the leading term on the left.
    pub fn equation(&self) -> String {
        let mut it = self.combination.iter();
        let Some((m, c)) = it.next() else {
            return "0 = 0".to_string();
        };
        let lead = ZetaCombination::from_terms([crate::combination::ProductTerm::new(c.clone(), m.factors().to_vec())]);
        let rest = &lead - &self.combination;
        format!("{lead} = {rest}")
    }

    pub fn to_json_value(&self) -> Value {
        let mut v = json!({
            "family": self.family.name(),
            "parameters": self.parameters,
            "combination": self.combination.to_json_value(),
            "regularized": self.regularized,
            "final": self.is_final,
        });
        if !self.derivation.is_empty() {
            v["derivation"] = json!(self.derivation);
        }
        v
    }

    pub fn from_json_value(v: Value) -> Result<Self> {
        let bad = |what: &str| Error::Json(format!("identity JSON: {what}"));
        let family: Family = v.get("family").and_then(Value::as_str).ok_or_else(|| bad("missing family"))?.parse()?;
        let parameters = v
            .get("parameters")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing parameters"))?
            .iter()
            .map(|p| p.as_str().map(str::to_string).ok_or_else(|| bad("parameters must be strings")))
            .collect::<Result<Vec<_>>>()?;
        let combination =
            ZetaCombination::from_json_value(v.get("combination").cloned().ok_or_else(|| bad("missing combination"))?)?;
        let derivation = match v.get("derivation") {
            None => Vec::new(),
            Some(d) => d
                .as_array()
                .ok_or_else(|| bad("derivation must be a list"))?
                .iter()
                .map(|s| s.as_str().map(str::to_string).ok_or_else(|| bad("derivation entries must be strings")))
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(Identity::new(family, parameters, combination, derivation))
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.label(), self.equation())
    }
}

/// One entry per family, for `mzv derive --list` and the catalog file.
pub fn catalog() -> Value {
    Value::Array(
        Family::ALL
            .iter()
            .map(|f| json!({ "family": f.name(), "parameters": f.grammar(), "final": f.is_final() }))
            .collect(),
    )
}

fn parse_int(s: &str) -> Result<u32> {
    s.trim()
        .parse::<u32>()
        .ok()
        .filter(|&k| k >= 1)
        .ok_or_else(|| Error::MalformedComposition(format!("expected a positive integer, got {s:?}")))
}

fn parse_comp(s: &str) -> Result<Composition> {
    s.parse()
}

/// Dispatches a family name and textual parameters to its emitter.
pub fn derive(family: Family, params: &[String], variant: Option<Variant>) -> Result<Identity> {
    let want = |n: usize| -> Result<()> {
        if params.len() != n {
            return Err(Error::Precondition(format!(
                "{} expects {}; got {} parameter(s)",
                family,
                family.grammar(),
                params.len()
            )));
        }
        Ok(())
    };
    match family {
        Family::Reflection => {
            want(2)?;
            reflection(parse_int(&params[0])?, parse_int(&params[1])?)
        }
        Family::Permutation => {
            want(2)?;
            Ok(permutation_identity(&parse_comp(&params[0])?, &parse_comp(&params[1])?))
        }
        Family::ThreePoint => {
            want(3)?;
            three_point_identity(parse_int(&params[0])?, parse_int(&params[1])?, parse_int(&params[2])?)
        }
        Family::PartialIntegration2 => {
            want(2)?;
            partial_integration_length2(parse_int(&params[0])?, parse_int(&params[1])?)
        }
        Family::PartialIntegration3 => {
            want(3)?;
            partial_integration_length3(
                parse_int(&params[0])?,
                parse_int(&params[1])?,
                parse_int(&params[2])?,
                variant.unwrap_or(Variant::Rightward),
            )
        }
        Family::PartialIntegration => {
            want(1)?;
            partial_integration_general(&parse_comp(&params[0])?, variant.unwrap_or(Variant::Rightward))
        }
        Family::TrailingOne => {
            want(1)?;
            trailing_one(&parse_comp(&params[0])?)
        }
        Family::Shuffle => {
            want(2)?;
            shuffle_identity(&parse_comp(&params[0])?, &parse_comp(&params[1])?)
        }
    }
}

/// Every instance of every family with total weight at most `max_weight`, in
/// catalog order. Arguments are restricted so that each identity converges,
/// except the leftward instances that keep a ζ(1…) factor; those are returned
/// as well, flagged regularized and non-final.
pub fn sweep_instances(max_weight: u32) -> Result<Vec<Identity>> {
    let adm = crate::composition::admissible_up_to(max_weight);
    let pairs: Vec<(&Composition, &Composition)> = adm
        .iter()
        .flat_map(|l| adm.iter().map(move |r| (l, r)))
        .filter(|(l, r)| l.weight() + r.weight() <= max_weight)
        .collect();
    let mut out = Vec::new();
    for a in 2..=max_weight {
        for b in 2..=max_weight.saturating_sub(a) {
            out.push(reflection(a, b)?);
        }
    }
    for (l, r) in &pairs {
        out.push(permutation_identity(l, r));
    }
    for a in 2..=max_weight {
        for b in 2..=max_weight.saturating_sub(a) {
            for c in 2..=max_weight.saturating_sub(a + b) {
                out.push(three_point_identity(a, b, c)?);
            }
        }
    }
    for a in 2..=max_weight {
        for b in 1..=max_weight.saturating_sub(a) {
            out.push(partial_integration_length2(a, b)?);
            for c in 1..=max_weight.saturating_sub(a + b) {
                out.push(partial_integration_length3(a, b, c, Variant::Rightward)?);
                out.push(partial_integration_length3(a, b, c, Variant::Alternative)?);
            }
        }
    }
    for ks in adm.iter().filter(|k| k.depth() >= 2) {
        out.push(partial_integration_general(ks, Variant::Rightward)?);
        out.push(partial_integration_general(ks, Variant::Leftward)?);
    }
    for ks in adm.iter().filter(|k| k.depth() >= 2 && k.parts().last() == Some(&1)) {
        out.push(trailing_one(ks)?);
    }
    for (l, r) in &pairs {
        out.push(shuffle_identity(l, r)?);
    }
    Ok(out)
}

pub(crate) fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut r = BigInt::from(1);
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

pub(crate) fn zc(parts: Vec<u32>) -> Composition {
    Composition::new(parts).expect("emitters build parts >= 1")
}

pub(crate) fn zeta(parts: Vec<u32>) -> ZetaCombination {
    ZetaCombination::zeta(zc(parts))
}

pub(crate) fn int(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!(matches!("bogus".parse::<Family>(), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(0, 0), BigInt::from(1));
        assert_eq!(binom(3, 4), BigInt::from(0));
        assert_eq!(binom(4, -1), BigInt::from(0));
    }

    #[test]
    fn json_round_trip() {
        let id = reflection(2, 3).unwrap();
        let back = Identity::from_json_value(id.to_json_value()).unwrap();
        assert_eq!(back, id);
        assert_eq!(
            serde_json::to_string(&id.to_json_value()).unwrap(),
            serde_json::to_string(&back.to_json_value()).unwrap()
        );
    }

    #[test]
    fn dispatch() {
        let id = derive(Family::Reflection, &["2".into(), "3".into()], None).unwrap();
        assert_eq!(id, reflection(2, 3).unwrap());
        assert!(derive(Family::Reflection, &["2".into()], None).is_err());
        assert!(derive(Family::Reflection, &["x".into(), "3".into()], None).is_err());
    }
}
