//! Binary fixed-point reals over arbitrary-precision integers.
//!
//! A [`Real`] stores `mant · 2^-bits`. Every operation rounds toward negative
//! infinity by at most one unit in the last place; callers account for that in
//! their error bounds via [`Real::ulp`].

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default number of significant decimal digits carried internally.
pub const DEFAULT_DIGITS: u32 = 40;
const GUARD_BITS: u32 = 24;

/// Working precision in bits, derived from a decimal digit count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkingPrecision {
    pub bits: u32,
}

impl WorkingPrecision {
    pub fn from_digits(digits: u32) -> Self {
        let digits = digits.max(30);
        let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS;
        WorkingPrecision { bits }
    }

    /// Honours `MZV_PRECISION_DIGITS` when set to a positive integer.
    pub fn from_env() -> Self {
        let digits = std::env::var("MZV_PRECISION_DIGITS")
            .ok()
            .and_then(|s| s.trim().parse::<u32>().ok())
            .filter(|&d| d > 0)
            .unwrap_or(DEFAULT_DIGITS);
        Self::from_digits(digits)
    }

    pub fn ulp(self) -> f64 {
        2f64.powi(-(self.bits as i32))
    }

    /// Smallest error bound the evaluators will promise at this precision.
    pub fn floor(self) -> f64 {
        self.ulp() * 2f64.powi(GUARD_BITS as i32)
    }
}

impl Default for WorkingPrecision {
    fn default() -> Self {
        Self::from_digits(DEFAULT_DIGITS)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Real {
    mant: BigInt,
    bits: u32,
}

impl Real {
    pub fn zero(prec: WorkingPrecision) -> Self {
        Real { mant: BigInt::zero(), bits: prec.bits }
    }

    pub fn one(prec: WorkingPrecision) -> Self {
        Real { mant: BigInt::one() << prec.bits, bits: prec.bits }
    }

    pub fn precision(&self) -> WorkingPrecision {
        WorkingPrecision { bits: self.bits }
    }

    /// 2^-n.
    pub fn pow2_neg(n: u32, prec: WorkingPrecision) -> Self {
        let mant = if n > prec.bits { BigInt::zero() } else { BigInt::one() << (prec.bits - n) };
        Real { mant, bits: prec.bits }
    }

    pub fn from_integer(n: i64, prec: WorkingPrecision) -> Self {
        Real { mant: BigInt::from(n) << prec.bits, bits: prec.bits }
    }

    pub fn from_rational(r: &BigRational, prec: WorkingPrecision) -> Self {
        let scaled = r.numer() << prec.bits;
        Real { mant: scaled.div_floor(r.denom()), bits: prec.bits }
    }

    /// Exact conversion of a finite double (rounded to the working precision).
    pub fn from_f64(x: f64, prec: WorkingPrecision) -> Self {
        let r = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
        Self::from_rational(&r, prec)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mant.clone(), BigInt::one() << self.bits)
    }

    pub fn to_f64(&self) -> f64 {
        // Keep 64 significant bits before the final conversion.
        let len = self.mant.bits() as i64;
        let shift = (len - 64).max(0);
        let top = (&self.mant >> shift as usize).to_f64().unwrap_or(0.0);
        top * 2f64.powi(shift as i32 - self.bits as i32)
    }

    pub fn ulp(&self) -> f64 {
        self.precision().ulp()
    }

    pub fn abs(&self) -> Real {
        Real { mant: self.mant.abs(), bits: self.bits }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn add(&self, other: &Real) -> Real {
        debug_assert_eq!(self.bits, other.bits);
        Real { mant: &self.mant + &other.mant, bits: self.bits }
    }

    pub fn sub(&self, other: &Real) -> Real {
        debug_assert_eq!(self.bits, other.bits);
        Real { mant: &self.mant - &other.mant, bits: self.bits }
    }

    pub fn neg(&self) -> Real {
        Real { mant: -&self.mant, bits: self.bits }
    }

    pub fn mul(&self, other: &Real) -> Real {
        debug_assert_eq!(self.bits, other.bits);
        Real { mant: (&self.mant * &other.mant) >> self.bits as usize, bits: self.bits }
    }

    pub fn div(&self, other: &Real) -> Real {
        debug_assert_eq!(self.bits, other.bits);
        Real { mant: (&self.mant << self.bits as usize).div_floor(&other.mant), bits: self.bits }
    }

    pub fn div_int(&self, d: &BigInt) -> Real {
        Real { mant: self.mant.div_floor(d), bits: self.bits }
    }

    pub fn mul_int(&self, m: &BigInt) -> Real {
        Real { mant: &self.mant * m, bits: self.bits }
    }

    pub fn mul_rational(&self, r: &BigRational) -> Real {
        Real { mant: (&self.mant * r.numer()).div_floor(r.denom()), bits: self.bits }
    }

    pub fn shr(&self, n: u32) -> Real {
        Real { mant: &self.mant >> n as usize, bits: self.bits }
    }

    /// Decimal rendering with `digits` digits after the point, truncated.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = (self.mant.abs() * scale) >> self.bits as usize;
        let s = scaled.to_string();
        let s = if s.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - s.len()), s) } else { s };
        let (int, frac) = s.split_at(s.len() - digits);
        let sign = if self.is_negative() && !scaled.is_zero() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        f.write_str(&self.to_decimal(digits))
    }
}

/// arctan(1/x) for an integer x ≥ 2 by its alternating Taylor series.
fn arctan_inv(x: u32, prec: WorkingPrecision) -> Real {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut power = Real::one(prec).div_int(&BigInt::from(x));
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power = power.div_int(&x2);
        if power.mant.is_zero() {
            break;
        }
        let term = power.div_int(&BigInt::from(2 * k + 1));
        sum = if k % 2 == 1 { sum.sub(&term) } else { sum.add(&term) };
        k += 1;
    }
    sum
}

/// π by Machin's formula, accurate to a few ulps.
pub fn pi(prec: WorkingPrecision) -> Real {
    let a = arctan_inv(5, prec).mul_int(&BigInt::from(16));
    let b = arctan_inv(239, prec).mul_int(&BigInt::from(4));
    a.sub(&b)
}

/// ln 2 = Σ 1/(n 2^n).
pub fn ln2(prec: WorkingPrecision) -> Real {
    let mut sum = Real::zero(prec);
    for n in 1..=(prec.bits + 2) {
        sum = sum.add(&Real::pow2_neg(n, prec).div_int(&BigInt::from(n)));
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        let p = pi(WorkingPrecision::from_digits(40));
        assert_eq!(p.to_decimal(30), "3.141592653589793238462643383279");
    }

    #[test]
    fn ln2_digits() {
        let l = ln2(WorkingPrecision::from_digits(40));
        assert_eq!(l.to_decimal(25), "0.6931471805599453094172321");
    }

    #[test]
    fn conversions() {
        let prec = WorkingPrecision::default();
        let r = Real::from_f64(-0.375, prec);
        assert_eq!(r.to_f64(), -0.375);
        assert_eq!(r.to_decimal(4), "-0.3750");
        let third = Real::from_rational(&BigRational::new(1.into(), 3.into()), prec);
        assert!((third.to_f64() - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(Real::zero(prec).to_decimal(3), "0.000");
    }

    #[test]
    fn env_precision() {
        assert!(WorkingPrecision::from_digits(60).bits > WorkingPrecision::from_digits(40).bits);
        // the floor stays well below the 1e-12 targets used by the evaluators
        assert!(WorkingPrecision::default().floor() < 1e-30);
    }
}
