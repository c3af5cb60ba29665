//! The circle propagator `g^(k)(u) = Σ_{n≥1} e^(2πinu) / (2πin)^k`.
//!
//! Its real part is a Bernoulli polynomial:
//! `Re g^(k)(u) = -B_k({u}) / (2·k!)` with `{u}` the fractional part.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use super::bernoulli::{bernoulli_polynomial, bernoulli_polynomial_f64};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
    /// Absolute bound on the modulus of the error.
    pub bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorValue {
    pub fourier: ComplexValue,
    /// Closed-form real part, for cross-checking `fourier.re`.
    pub bernoulli_re: f64,
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::from(1), |a, i| a * i)
}

fn check_order(k: i64) -> Result<u32> {
    if k < 2 {
        return Err(Error::UnsupportedOrder(k));
    }
    Ok(k as u32)
}

/// Truncated Fourier sum up to `n_max` plus the closed-form real part.
pub fn eval_propagator(k: i64, u: f64, n_max: u64) -> Result<PropagatorValue> {
    let k = check_order(k)?;
    if !(u > -1.0 && u < 1.0) {
        return Err(Error::Precondition(format!("u = {u} must lie in (-1, 1)")));
    }
    if n_max == 0 {
        return Err(Error::Precondition("truncation N must be positive".into()));
    }
    let fourier = fourier_sum(k, u, n_max);
    Ok(PropagatorValue { fourier, bernoulli_re: bernoulli_real_part(k, u) })
}

/// `-B_k({u}) / (2·k!)` in double precision.
pub fn bernoulli_real_part(k: u32, u: f64) -> f64 {
    let frac = u - u.floor();
    -bernoulli_polynomial_f64(k, frac) / (2.0 * factorial(k).to_string().parse::<f64>().unwrap())
}

/// Exact real part at a rational point.
pub fn bernoulli_real_part_exact(k: i64, u: &BigRational) -> Result<BigRational> {
    let k = check_order(k)?;
    let frac = u - BigRational::from_integer(u.numer().div_floor(u.denom()));
    let two_fact = BigRational::from_integer(factorial(k) * 2);
    Ok(-bernoulli_polynomial(k, &frac) / two_fact)
}

fn fourier_sum(k: u32, u: f64, n_max: u64) -> ComplexValue {
    // (2πi)^-k = (2π)^-k · i^-k
    let (ck, sk) = match k % 4 {
        0 => (1.0, 0.0),
        1 => (0.0, -1.0),
        2 => (-1.0, 0.0),
        _ => (0.0, 1.0),
    };
    let scale = (2.0 * PI).powi(-(k as i32));
    let (mut re, mut im) = (0.0f64, 0.0f64);
    let (mut cre, mut cim) = (0.0f64, 0.0f64);
    let frac = u - u.floor();
    for n in 1..=n_max {
        // reduce the phase exactly enough before calling the trig functions
        let phase = (n as f64 * frac).fract();
        let (s, c) = (2.0 * PI * phase).sin_cos();
        let w = 1.0 / (n as f64).powi(k as i32);
        let tr = (c * ck - s * sk) * w;
        let ti = (s * ck + c * sk) * w;
        let y = tr - cre;
        let t = re + y;
        cre = (t - re) - y;
        re = t;
        let y = ti - cim;
        let t = im + y;
        cim = (t - im) - y;
        im = t;
    }
    let nf = n_max as f64;
    let tail = scale / ((k - 1) as f64 * nf.powi(k as i32 - 1));
    let rounding = 16.0 * f64::EPSILON * scale * (1.0 + nf.ln());
    ComplexValue { re: re * scale, im: im * scale, bound: tail + rounding }
}
