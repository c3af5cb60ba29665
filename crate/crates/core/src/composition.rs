//! Compositions: the ordered exponent tuples indexing Euler-Zagier sums.
//!
//! Parts are stored outermost-first: `(k1, …, km)` stands for the sum over
//! `n1 > n2 > … > nm > 0` of `1 / (n1^k1 ⋯ nm^km)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sign attached to one summation index of an alternating sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    parts: Vec<u32>,
    signs: Vec<Sign>,
}

/// Weight, depth and admissibility of a composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Profile {
    pub weight: u32,
    pub depth: usize,
    pub admissible: bool,
}

impl Composition {
    /// Builds an all-positive composition. Every part must be at least 1.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        let signs = vec![Sign::Plus; parts.len()];
        Self::with_signs(parts, signs)
    }

    pub fn with_signs(parts: Vec<u32>, signs: Vec<Sign>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::MalformedComposition("empty composition".into()));
        }
        if parts.len() != signs.len() {
            return Err(Error::MalformedComposition(format!(
                "{} parts but {} signs",
                parts.len(),
                signs.len()
            )));
        }
        if let Some(p) = parts.iter().find(|&&p| p == 0) {
            return Err(Error::MalformedComposition(format!("part {p} is not positive")));
        }
        Ok(Composition { parts, signs })
    }

    /// Internal constructor for callers that already guarantee well-formedness.
    pub(crate) fn from_parts_unchecked(parts: Vec<u32>) -> Self {
        debug_assert!(!parts.is_empty() && parts.iter().all(|&p| p >= 1));
        let signs = vec![Sign::Plus; parts.len()];
        Composition { parts, signs }
    }

    pub fn single(k: u32) -> Self {
        assert!(k >= 1, "part must be positive");
        Composition::from_parts_unchecked(vec![k])
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.parts.len()
    }

    pub fn is_signed(&self) -> bool {
        self.signs.iter().any(|s| s.is_minus())
    }

    /// Convergence of the nested sum. For an all-positive composition this is
    /// `k1 >= 2`; a leading minus sign makes `k1 = 1` convergent as well.
    pub fn is_admissible(&self) -> bool {
        self.parts[0] >= 2 || self.signs[0].is_minus()
    }

    /// True for the formal divergent symbols ζ(1) and ζ(1, …).
    pub fn is_divergent(&self) -> bool {
        !self.is_admissible()
    }

    pub fn profile(&self) -> Profile {
        Profile {
            weight: self.weight(),
            depth: self.depth(),
            admissible: self.is_admissible(),
        }
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &Composition) -> Composition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        let mut signs = self.signs.clone();
        signs.extend_from_slice(&other.signs);
        Composition { parts, signs }
    }

    /// Drops the first part; `None` for depth one.
    pub fn tail(&self) -> Option<Composition> {
        if self.parts.len() < 2 {
            return None;
        }
        Some(Composition {
            parts: self.parts[1..].to_vec(),
            signs: self.signs[1..].to_vec(),
        })
    }

    /// Binary word encoding `k ↦ 0^{k-1} 1`. Requires an admissible,
    /// unsigned composition; the word length equals the weight.
    pub fn to_word(&self) -> Result<Vec<u8>> {
        if self.is_signed() {
            return Err(Error::MalformedComposition(
                "signed compositions have no binary word".into(),
            ));
        }
        if !self.is_admissible() {
            return Err(Error::NotAdmissible(self.to_string()));
        }
        Ok(encode_word(&self.parts))
    }

    /// Inverse of [`Composition::to_word`]: the word must start with 0 and end with 1.
    pub fn from_word(word: &[u8]) -> Result<Composition> {
        if word.first() != Some(&0) || word.last() != Some(&1) {
            return Err(Error::MalformedWord(format!("{word:?} must start with 0 and end with 1")));
        }
        Ok(Composition::from_parts_unchecked(decode_word(word)?))
    }

    /// The `ζ(…)` rendering used in human-readable output.
    pub fn zeta_notation(&self) -> String {
        format!("ζ({self})")
    }
}

/// `k ↦ 0^{k-1} 1` for any list of positive parts.
pub(crate) fn encode_word(parts: &[u32]) -> Vec<u8> {
    let mut w = Vec::with_capacity(parts.iter().sum::<u32>() as usize);
    for &k in parts {
        w.extend(std::iter::repeat_n(0u8, k as usize - 1));
        w.push(1);
    }
    w
}

/// Splits a word ending in 1 into blocks `0^{k-1} 1`.
pub(crate) fn decode_word(word: &[u8]) -> Result<Vec<u32>> {
    if word.last() != Some(&1) {
        return Err(Error::MalformedWord(format!("{word:?} does not end with 1")));
    }
    let mut parts = Vec::new();
    let mut run = 0u32;
    for &letter in word {
        match letter {
            0 => run += 1,
            1 => {
                parts.push(run + 1);
                run = 0;
            }
            other => return Err(Error::MalformedWord(format!("letter {other} is not 0 or 1"))),
        }
    }
    Ok(parts)
}

impl Ord for Composition {
    /// Canonical order: weight, then depth, then parts lexicographically,
    /// then signs.
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then(self.depth().cmp(&other.depth()))
            .then_with(|| self.parts.cmp(&other.parts))
            .then_with(|| self.signs.cmp(&other.signs))
    }
}

impl PartialOrd for Composition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, s)) in self.parts.iter().zip(&self.signs).enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if s.is_minus() {
                f.write_str("-")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for Composition {
    type Err = Error;

    /// Parses `"3,1"` or `"2,-1"` (a `-` prefix marks a negative sign).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::MalformedComposition("empty string".into()));
        }
        let mut parts = Vec::new();
        let mut signs = Vec::new();
        for tok in s.split(',') {
            let tok = tok.trim();
            let (sign, digits) = match tok.strip_prefix('-') {
                Some(rest) => (Sign::Minus, rest),
                None => (Sign::Plus, tok),
            };
            let k: u32 = digits
                .parse()
                .map_err(|_| Error::MalformedComposition(format!("`{tok}` is not a part")))?;
            parts.push(k);
            signs.push(sign);
        }
        Composition::with_signs(parts, signs)
    }
}

impl Serialize for Composition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_signed() {
            let v: Vec<i64> = self
                .parts
                .iter()
                .zip(&self.signs)
                .map(|(&p, s)| if s.is_minus() { -(p as i64) } else { p as i64 })
                .collect();
            v.serialize(serializer)
        } else {
            self.parts.serialize(serializer)
        }
    }
}

impl<'de> Deserialize<'de> for Composition {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<i64> = Vec::deserialize(deserializer)?;
        let mut parts = Vec::with_capacity(raw.len());
        let mut signs = Vec::with_capacity(raw.len());
        for v in raw {
            let mag = u32::try_from(v.unsigned_abs()).map_err(serde::de::Error::custom)?;
            parts.push(mag);
            signs.push(if v < 0 { Sign::Minus } else { Sign::Plus });
        }
        Composition::with_signs(parts, signs).map_err(serde::de::Error::custom)
    }
}

/// All compositions of `weight` (every part ≥ 1), in canonical order.
pub fn compositions_of(weight: u32) -> Vec<Composition> {
    fn rec(rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if rest == 0 {
            out.push(Composition::from_parts_unchecked(cur.clone()));
            return;
        }
        for k in 1..=rest {
            cur.push(k);
            rec(rest - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if weight > 0 {
        rec(weight, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

/// Admissible compositions with weight in `2..=max_weight`.
pub fn admissible_up_to(max_weight: u32) -> Vec<Composition> {
    (2..=max_weight)
        .flat_map(compositions_of)
        .filter(Composition::is_admissible)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    #[test]
    fn profiles() {
        assert_eq!(
            c("2,1").profile(),
            Profile { weight: 3, depth: 2, admissible: true }
        );
        assert_eq!(
            c("1").profile(),
            Profile { weight: 1, depth: 1, admissible: false }
        );
        assert_eq!(
            c("3,2").profile(),
            Profile { weight: 5, depth: 2, admissible: true }
        );
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(c("3, 1").to_string(), "3,1");
        assert_eq!(c("2,-1").to_string(), "2,-1");
        assert!(c("-1").is_admissible());
        assert!("".parse::<Composition>().is_err());
        assert!("2,0".parse::<Composition>().is_err());
        assert!("2,x".parse::<Composition>().is_err());
    }

    #[test]
    fn words() {
        assert_eq!(c("2,1").to_word().unwrap(), vec![0, 1, 1]);
        assert_eq!(c("3").to_word().unwrap(), vec![0, 0, 1]);
        assert_eq!(Composition::from_word(&[0, 1, 0, 1]).unwrap(), c("2,2"));
        assert!(c("1,2").to_word().is_err());
        assert!(Composition::from_word(&[1, 0, 1]).is_err());
        assert!(Composition::from_word(&[0, 1, 0]).is_err());
    }

    #[test]
    fn canonical_order() {
        let mut v = vec![c("2,1"), c("4"), c("3"), c("2,2"), c("3,1")];
        v.sort();
        assert_eq!(v, vec![c("3"), c("2,1"), c("4"), c("2,2"), c("3,1")]);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(compositions_of(5).len(), 16);
        // 2^(w-2) admissible compositions of each weight w >= 2
        assert_eq!(admissible_up_to(8).len(), 127);
    }

    #[test]
    fn serde_shape() {
        assert_eq!(serde_json::to_string(&c("3,1")).unwrap(), "[3,1]");
        assert_eq!(serde_json::to_string(&c("2,-1")).unwrap(), "[2,-1]");
        let back: Composition = serde_json::from_str("[2,-1]").unwrap();
        assert_eq!(back, c("2,-1"));
    }

    proptest::proptest! {
        #[test]
        fn word_round_trip(parts in proptest::collection::vec(1u32..5, 1..5), head in 2u32..5) {
            let mut p = parts;
            p[0] = head;
            let comp = Composition::new(p).unwrap();
            let w = comp.to_word().unwrap();
            proptest::prop_assert_eq!(w.len() as u32, comp.weight());
            proptest::prop_assert_eq!(Composition::from_word(&w).unwrap(), comp);
        }
    }
}
