//! Exact rational linear combinations of formal products of MZV symbols.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::composition::Composition;
use crate::error::{Error, Result};

/// A formal product of MZV symbols; the empty product is the constant 1.
/// Factors are kept sorted in canonical order, so equal multisets compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<Composition>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut factors: Vec<Composition>) -> Self {
        factors.sort();
        Monomial(factors)
    }

    pub fn factors(&self) -> &[Composition] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(Composition::weight).sum()
    }

    pub fn is_regularized(&self) -> bool {
        self.0.iter().any(Composition::is_divergent)
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        let mut f = self.0.clone();
        f.extend(other.0.iter().cloned());
        Monomial::new(f)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then(self.0.len().cmp(&other.0.len()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i + 1;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            write!(f, "{}", self.0[i].zeta_notation())?;
            if j - i > 1 {
                write!(f, "^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

/// One coefficient–monomial pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductTerm {
    pub coefficient: BigRational,
    pub factors: Monomial,
}

impl ProductTerm {
    pub fn new(coefficient: BigRational, factors: Vec<Composition>) -> Self {
        ProductTerm { coefficient, factors: Monomial::new(factors) }
    }
}

/// Σ coefficient · Π ζ(factor). Always stored normalized: like monomials are
/// merged, zero coefficients are dropped and terms iterate in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ZetaCombination {
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl ZetaCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut z = Self::zero();
        z.add_term(c, Monomial::one());
        z
    }

    /// ζ(c) with coefficient 1.
    pub fn zeta(c: Composition) -> Self {
        Self::product(vec![c])
    }

    /// Π ζ(factor) with coefficient 1.
    pub fn product(factors: Vec<Composition>) -> Self {
        let mut z = Self::zero();
        z.add_term(BigRational::one(), Monomial::new(factors));
        z
    }

    /// Collects arbitrary (possibly repeated or zero) terms into normal form.
    pub fn from_terms(terms: impl IntoIterator<Item = ProductTerm>) -> Self {
        let mut z = Self::zero();
        for t in terms {
            z.add_term(t.coefficient, t.factors);
        }
        z
    }

    pub fn add_term(&mut self, coefficient: BigRational, monomial: Monomial) {
        if coefficient.is_zero() {
            return;
        }
        let entry = self.terms.entry(monomial);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coefficient);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coefficient;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, scale: &BigRational, other: &ZetaCombination) {
        for (m, c) in &other.terms {
            self.add_term(scale * c, m.clone());
        }
    }

    /// Normal form; a no-op because the representation is always normalized.
    pub fn normalize(&self) -> ZetaCombination {
        self.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn terms(&self) -> Vec<ProductTerm> {
        self.terms
            .iter()
            .map(|(m, c)| ProductTerm { coefficient: c.clone(), factors: m.clone() })
            .collect()
    }

    pub fn coefficient(&self, monomial: &Monomial) -> BigRational {
        self.terms.get(monomial).cloned().unwrap_or_else(BigRational::zero)
    }

    /// True when some factor is ζ(1) or ζ(1, …).
    pub fn is_regularized(&self) -> bool {
        self.terms.keys().any(Monomial::is_regularized)
    }

    /// The common weight of all terms, or `None` for empty or mixed-weight
    /// combinations.
    pub fn weight(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::weight);
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    pub fn scale(&self, s: &BigRational) -> ZetaCombination {
        let mut z = Self::zero();
        z.add_scaled(s, self);
        z
    }

    /// Formal product, bilinear over monomials.
    pub fn multiply(&self, other: &ZetaCombination) -> ZetaCombination {
        let mut z = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                z.add_term(c1 * c2, m1.times(m2));
            }
        }
        z
    }

    /// Applies a linear map monomial-wise.
    pub fn map_monomials(&self, mut f: impl FnMut(&Monomial) -> ZetaCombination) -> ZetaCombination {
        let mut z = Self::zero();
        for (m, c) in &self.terms {
            z.add_scaled(c, &f(m));
        }
        z
    }

    pub fn max_depth(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(Composition::depth))
            .max()
            .unwrap_or(0)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("combination serializes")
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Self> {
        serde_json::from_value(v).map_err(|e| Error::Json(e.to_string()))
    }
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num.trim().parse().map_err(|_| Error::Json(format!("bad rational `{s}`")))?;
    let d: BigInt = den.trim().parse().map_err(|_| Error::Json(format!("bad rational `{s}`")))?;
    if d.is_zero() {
        return Err(Error::Json(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(n, d))
}

pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coefficient: String,
    factors: Vec<Composition>,
}

impl Serialize for ZetaCombination {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(m, c)| TermRepr { coefficient: format_rational(c), factors: m.factors().to_vec() })
            .collect();
        v.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ZetaCombination {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<TermRepr> = Vec::deserialize(deserializer)?;
        let mut z = ZetaCombination::zero();
        for t in raw {
            let c = parse_rational(&t.coefficient).map_err(serde::de::Error::custom)?;
            z.add_term(c, Monomial::new(t.factors));
        }
        Ok(z)
    }
}

impl fmt::Display for ZetaCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("−")?,
                (0, false) => {}
                (_, true) => f.write_str(" − ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            let is_const = m.factors().is_empty();
            if !a.is_one() || is_const {
                if a.is_integer() {
                    write!(f, "{}", a.numer())?;
                } else {
                    write!(f, "({}/{})", a.numer(), a.denom())?;
                }
                if !is_const {
                    f.write_str("·")?;
                }
            }
            if !is_const {
                write!(f, "{m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &ZetaCombination {
    type Output = ZetaCombination;
    fn add(self, rhs: &ZetaCombination) -> ZetaCombination {
        let mut z = self.clone();
        z.add_scaled(&BigRational::one(), rhs);
        z
    }
}

impl Sub for &ZetaCombination {
    type Output = ZetaCombination;
    fn sub(self, rhs: &ZetaCombination) -> ZetaCombination {
        let mut z = self.clone();
        z.add_scaled(&-BigRational::one(), rhs);
        z
    }
}

impl Neg for &ZetaCombination {
    type Output = ZetaCombination;
    fn neg(self) -> ZetaCombination {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &ZetaCombination {
    type Output = ZetaCombination;
    fn mul(self, rhs: &ZetaCombination) -> ZetaCombination {
        self.multiply(rhs)
    }
}
