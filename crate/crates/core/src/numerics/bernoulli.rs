//! Bernoulli numbers and polynomials over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn binomial(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// B_0..=B_n with the convention B_1 = -1/2.
pub fn bernoulli_numbers(n: u32) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n as usize + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        // Σ_{j<=m} C(m+1, j) B_j = 0
        let mut s = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            s += BigRational::from_integer(binomial(m + 1, j as u32)) * bj;
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// B_n(x) = Σ C(n, j) B_j x^(n-j).
pub fn bernoulli_polynomial(n: u32, x: &BigRational) -> BigRational {
    let b = bernoulli_numbers(n);
    let mut acc = BigRational::zero();
    // Horner on descending powers of x
    for (j, bj) in b.iter().enumerate() {
        acc = acc * x + BigRational::from_integer(binomial(n, j as u32)) * bj;
    }
    acc
}

pub fn bernoulli_polynomial_f64(n: u32, x: f64) -> f64 {
    let b = bernoulli_numbers(n);
    let mut acc = 0.0;
    for (j, bj) in b.iter().enumerate() {
        let c = BigRational::from_integer(binomial(n, j as u32)) * bj;
        acc = acc * x + rational_to_f64(&c);
    }
    acc
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // fall back for huge numerators/denominators
        let (n, d) = (r.numer().to_string(), r.denom().to_string());
        n.parse::<f64>().unwrap_or(f64::NAN) / d.parse::<f64>().unwrap_or(f64::NAN)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combination::{parse_rational, rat};

    #[test]
    fn numbers() {
        let b = bernoulli_numbers(8);
        let want = ["1", "-1/2", "1/6", "0", "-1/30", "0", "1/42", "0", "-1/30"];
        for (x, w) in b.iter().zip(want) {
            assert_eq!(*x, parse_rational(w).unwrap());
        }
    }

    #[test]
    fn polynomials() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(bernoulli_polynomial(2, &half), parse_rational("-1/12").unwrap());
        assert_eq!(bernoulli_polynomial(3, &half), rat(0));
        assert_eq!(bernoulli_polynomial(4, &rat(0)), parse_rational("-1/30").unwrap());
        assert_eq!(bernoulli_polynomial(2, &rat(1)), parse_rational("1/6").unwrap());
        assert!((bernoulli_polynomial_f64(3, 0.25) - 3.0 / 64.0).abs() < 1e-15);
    }
}
