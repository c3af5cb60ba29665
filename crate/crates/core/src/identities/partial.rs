//! Partial-integration identities: closed forms for lengths two and three, the
//! general rightward and leftward families, and the trailing-one special case.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{binom, eliminate_zeta1, int, zeta, Family, Identity, Variant};
use crate::combination::ZetaCombination;
use crate::composition::Composition;
use crate::error::{Error, Result};

fn sign(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::from(1)
    } else {
        BigInt::from(-1)
    }
}

fn push(out: &mut ZetaCombination, coeff: BigInt, factors: &[Vec<i64>]) {
    if coeff.is_zero() {
        return;
    }
    let mut t = ZetaCombination::constant(int(&coeff));
    for f in factors {
        let parts = f.iter().map(|&x| u32::try_from(x).expect("non-negative part")).collect();
        t = &t * &zeta(parts);
    }
    *out = &*out + &t;
}

/// Calls `f` with every vector `n[0..len]` where `1 <= n[i] <= upper(i, &n[..i])`.
fn nested(len: usize, upper: &dyn Fn(usize, &[i64]) -> i64, f: &mut dyn FnMut(&[i64])) {
    fn rec(i: usize, len: usize, cur: &mut Vec<i64>, upper: &dyn Fn(usize, &[i64]) -> i64, f: &mut dyn FnMut(&[i64])) {
        if i == len {
            f(cur);
            return;
        }
        for v in 1..=upper(i, cur) {
            cur.push(v);
            rec(i + 1, len, cur, upper, f);
            cur.pop();
        }
    }
    rec(0, len, &mut Vec::with_capacity(len), upper, f);
}

fn need_admissible_head(a: u32) -> Result<()> {
    if a < 2 {
        return Err(Error::Precondition(format!("leading argument must be >= 2, got {a}")));
    }
    Ok(())
}

fn finish(family: Family, params: Vec<String>, comb: ZetaCombination, mut steps: Vec<String>) -> Identity {
    match eliminate_zeta1(&comb) {
        Ok(clean) => {
            if comb.is_regularized() {
                steps.push("removed ζ(1)ζ(K) − ζ(1,K) pairs with the special permutation identity".into());
            }
            Identity::new(family, params, clean, steps)
        }
        Err(e) => {
            steps.push(format!("elimination incomplete: {e}"));
            Identity::new(family, params, comb, steps)
        }
    }
}

/// Raw length-two expansion of ζ(a,b), still containing ζ(1) terms.
pub fn partial_integration_length2_raw(a: u32, b: u32) -> ZetaCombination {
    let (a, b) = (a as i64, b as i64);
    let mut out = ZetaCombination::zero();
    for n in 1..=b {
        push(&mut out, sign(b + n) * binom(a + b - n - 1, a - 1), &[vec![n], vec![a + b - n]]);
    }
    for n in 1..=a {
        push(&mut out, sign(b) * binom(a + b - n - 1, b - 1), &[vec![n, a + b - n]]);
    }
    out
}

/// ζ(a,b) in convergent terms, from the closed form with the divergent pair
/// already resolved.
pub fn partial_integration_length2(a: u32, b: u32) -> Result<Identity> {
    need_admissible_head(a)?;
    if b == 0 {
        return Err(Error::MalformedComposition("arguments must be >= 1".into()));
    }
    let (a, b) = (a as i64, b as i64);
    let mut rhs = ZetaCombination::zero();
    for n in 2..=b {
        push(&mut rhs, sign(b + n) * binom(a + b - n - 1, a - 1), &[vec![n], vec![a + b - n]]);
    }
    for n in 2..=a {
        push(&mut rhs, sign(b) * binom(a + b - n - 1, b - 1), &[vec![n, a + b - n]]);
    }
    let c = -sign(b) * binom(a + b - 2, a - 1);
    push(&mut rhs, c.clone(), &[vec![a + b]]);
    push(&mut rhs, c, &[vec![a + b - 1, 1]]);
    let comb = &zeta(vec![a as u32, b as u32]) - &rhs;
    Ok(Identity::new(
        Family::PartialIntegration2,
        vec![a.to_string(), b.to_string()],
        comb,
        vec![format!("integrate by parts at the upper vertex of G({a},0,{b}) until one outer label vanishes")],
    ))
}

/// Rightward length-three expansion (exchange of the two inner edges).
pub fn zeta_len3_raw(a: u32, b: u32, c: u32) -> ZetaCombination {
    let (a, b, c) = (a as i64, b as i64, c as i64);
    let w = a + b + c;
    let mut out = ZetaCombination::zero();
    for n in 1..=c {
        for m in 1..=a {
            // multinomial (w-m-n-1; b-1, a-m, c-n)
            let coeff = binom(w - m - n - 1, b - 1) * binom(w - m - n - b, a - m);
            push(&mut out, sign(b) * coeff, &[vec![m, w - m - n, n]]);
        }
        for m in 1..=(b + c - n) {
            let coeff = sign(b + m) * binom(b + c - n - 1, b - 1) * binom(w - m - n - 1, a - 1);
            push(&mut out, coeff, &[vec![m], vec![w - m - n, n]]);
        }
    }
    for n in 1..=b {
        push(&mut out, sign(c) * binom(b + c - n - 1, c - 1), &[vec![a, n, b + c - n]]);
    }
    out
}

/// Alternative length-three expansion (exchange of the inner edge with the
/// outer one).
pub fn zeta3altern_raw(a: u32, b: u32, c: u32) -> ZetaCombination {
    let (a, b, c) = (a as i64, b as i64, c as i64);
    let mut out = ZetaCombination::zero();
    for n in 1..=b {
        push(&mut out, sign(c) * binom(b + c - n - 1, c - 1), &[vec![a, n, b + c - n]]);
    }
    for n in 1..=c {
        for m in 1..=a {
            let coeff = sign(c) * binom(b + c - n - 1, b - 1) * binom(a - m + n - 1, n - 1);
            push(&mut out, coeff, &[vec![m, a - m + n, b - n + c]]);
        }
    }
    for n in 1..=c {
        for m in 1..=n {
            let coeff = sign(c - m) * binom(a - m + n - 1, a - 1) * binom(b - n + c - 1, b - 1);
            push(&mut out, coeff, &[vec![m], vec![a - m + n, b - n + c]]);
        }
    }
    out
}

pub fn partial_integration_length3(a: u32, b: u32, c: u32, variant: Variant) -> Result<Identity> {
    need_admissible_head(a)?;
    if b == 0 || c == 0 {
        return Err(Error::MalformedComposition("arguments must be >= 1".into()));
    }
    let (raw, step) = match variant {
        Variant::Rightward => (
            zeta_len3_raw(a, b, c),
            "integrate by parts at the right vertex, exchange the inner edges, integrate at the left vertex",
        ),
        Variant::Alternative => (
            zeta3altern_raw(a, b, c),
            "integrate by parts at the right vertex, exchange the inner edge with the outer one, integrate at the left vertex",
        ),
        Variant::Leftward => {
            return Err(Error::Precondition("length-three identities come in rightward and alternative variants".into()))
        }
    };
    let comb = &zeta(vec![a, b, c]) - &raw;
    Ok(finish(
        Family::PartialIntegration3,
        vec![a.to_string(), b.to_string(), c.to_string(), variant.name().to_string()],
        comb,
        vec![step.to_string()],
    ))
}

/// Rightward expansion of ζ(k_1,…,k_m) for any length m >= 2, with ζ(1) terms.
pub fn idbig_raw(ks: &Composition) -> ZetaCombination {
    let k: Vec<i64> = ks.parts().iter().map(|&x| x as i64).collect();
    let m = k.len();
    assert!(m >= 2, "length at least two");
    // 1-based helpers: kk(i) = k_i
    let kk = |i: usize| k[i - 1];
    let km = kk(m);
    let mut out = ZetaCombination::zero();
    for j in 1..m {
        // choose n_{m-1}, …, n_{m-j}; n_m = k_m
        let upper = |i: usize, prev: &[i64]| -> i64 {
            let idx = m - 1 - i;
            if idx == m - j {
                kk(idx)
            } else if i == 0 {
                km
            } else {
                prev[i - 1]
            }
        };
        nested(j, &upper, &mut |ns: &[i64]| {
            let mut n = vec![0i64; m + 1];
            n[m] = km;
            for (i, &v) in ns.iter().enumerate() {
                n[m - 1 - i] = v;
            }
            let low = m - j;
            let mut coeff = sign(km);
            for i in (low + 1)..m {
                coeff *= binom(kk(i) - n[i] + n[i + 1] - 1, kk(i) - 1);
            }
            coeff *= binom(kk(low) - n[low] + n[low + 1] - 1, n[low + 1] - 1);
            let mut parts: Vec<i64> = (1..low).map(kk).collect();
            parts.push(n[low]);
            for i in low..m {
                parts.push(kk(i) - n[i] + n[i + 1]);
            }
            push(&mut out, coeff, &[parts]);
        });
    }
    // final block: n_{m-1} <= n_m, …, n_1 <= n_2
    let upper = |i: usize, prev: &[i64]| -> i64 { if i == 0 { km } else { prev[i - 1] } };
    nested(m - 1, &upper, &mut |ns: &[i64]| {
        let mut n = vec![0i64; m + 1];
        n[m] = km;
        for (i, &v) in ns.iter().enumerate() {
            n[m - 1 - i] = v;
        }
        let mut coeff = sign(km - n[1]);
        for i in 1..m {
            coeff *= binom(kk(i) - n[i] + n[i + 1] - 1, kk(i) - 1);
        }
        let rest: Vec<i64> = (1..m).map(|i| kk(i) - n[i] + n[i + 1]).collect();
        push(&mut out, coeff, &[vec![n[1]], rest]);
    });
    out
}

/// Leftward expansion of ζ(k_1)·ζ(k_2,…,k_m), with ζ(1) terms when k_1 = 1.
pub fn idbignice_raw(ks: &Composition) -> ZetaCombination {
    let k: Vec<i64> = ks.parts().iter().map(|&x| x as i64).collect();
    let m = k.len();
    assert!(m >= 2, "length at least two");
    let kk = |i: usize| k[i - 1];
    let mut out = ZetaCombination::zero();
    // n[0] = k_1; the first displayed sum is the κ = 1 member of the middle family
    for kappa in 1..m {
        let upper = |i: usize, prev: &[i64]| -> i64 {
            // choosing n_{i+1}
            if i + 1 == kappa {
                kk(kappa + 1)
            } else if i == 0 {
                kk(1)
            } else {
                prev[i - 1]
            }
        };
        nested(kappa, &upper, &mut |ns: &[i64]| {
            let mut n = vec![kk(1)];
            n.extend_from_slice(ns);
            let mut coeff = BigInt::from(1);
            for lam in 2..=kappa {
                coeff *= binom(kk(lam) + n[lam - 2] - n[lam - 1] - 1, kk(lam) - 1);
            }
            coeff *= binom(kk(kappa + 1) + n[kappa - 1] - n[kappa] - 1, n[kappa - 1] - 1);
            let mut parts: Vec<i64> = (1..=kappa).map(|l| kk(l + 1) + n[l - 1] - n[l]).collect();
            parts.push(n[kappa]);
            parts.extend((kappa + 2..=m).map(kk));
            push(&mut out, coeff, &[parts]);
        });
    }
    let upper = |i: usize, prev: &[i64]| -> i64 { if i == 0 { kk(1) } else { prev[i - 1] } };
    nested(m - 1, &upper, &mut |ns: &[i64]| {
        let mut n = vec![kk(1)];
        n.extend_from_slice(ns);
        let mut coeff = BigInt::from(1);
        for lam in 2..=m {
            coeff *= binom(kk(lam) + n[lam - 2] - n[lam - 1] - 1, kk(lam) - 1);
        }
        let mut parts: Vec<i64> = (2..=m).map(|l| kk(l) + n[l - 2] - n[l - 1]).collect();
        parts.push(n[m - 1]);
        push(&mut out, coeff, &[parts]);
    });
    out
}

/// General-length partial-integration identity.
///
/// `Rightward` expands ζ(ks) (requires k_1 >= 2); `Leftward` expands
/// ζ(k_1)·ζ(k_2,…,k_m).
pub fn partial_integration_general(ks: &Composition, variant: Variant) -> Result<Identity> {
    if ks.is_signed() {
        return Err(Error::Precondition("signed compositions carry no identities".into()));
    }
    if ks.depth() < 2 {
        return Err(Error::Precondition("partial-integration identities need length >= 2".into()));
    }
    let params = vec![ks.to_string(), variant.name().to_string()];
    match variant {
        Variant::Rightward => {
            need_admissible_head(ks.parts()[0])?;
            let comb = &ZetaCombination::zeta(ks.clone()) - &idbig_raw(ks);
            Ok(finish(
                Family::PartialIntegration,
                params,
                comb,
                vec!["integrate by parts vertex by vertex from right to left, exchanging inner edges".into()],
            ))
        }
        Variant::Leftward => {
            let head = Composition::single(ks.parts()[0]);
            let tail = ks.tail().expect("depth >= 2");
            let comb = &ZetaCombination::product(vec![head, tail]) - &idbignice_raw(ks);
            Ok(finish(
                Family::PartialIntegration,
                params,
                comb,
                vec!["integrate by parts on the modified sea shell from left to right".into()],
            ))
        }
        Variant::Alternative => Err(Error::Precondition("general identities come in rightward and leftward variants".into())),
    }
}

/// ζ(k_1,…,k_{m-1},1) via the simple trailing-one formula.
pub fn trailing_one(ks: &Composition) -> Result<Identity> {
    let p = ks.parts();
    if ks.is_signed() || p.len() < 2 || *p.last().unwrap() != 1 {
        return Err(Error::Precondition(format!("trailing-one needs a composition ending in 1, got {ks}")));
    }
    need_admissible_head(p[0])?;
    let head: Vec<i64> = p[..p.len() - 1].iter().map(|&x| x as i64).collect();
    let mut comb = ZetaCombination::zeta(ks.clone());
    push(&mut comb, BigInt::from(-1), &[vec![1], head.clone()]);
    for kappa in 0..head.len() {
        for n in 1..=head[kappa] {
            let mut parts = head[..kappa].to_vec();
            parts.push(head[kappa] + 1 - n);
            parts.push(n);
            parts.extend_from_slice(&head[kappa + 1..]);
            push(&mut comb, BigInt::from(1), &[parts]);
        }
    }
    Ok(finish(
        Family::TrailingOne,
        vec![ks.to_string()],
        comb,
        vec!["expand the trailing ζ(…,1) by the rightward identity at k_m = 1".into()],
    ))
}
