//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_complex::Complex64;
use num_rational::BigRational;

use mzv::combination::{parse_rational, rat, ZetaCombination};
use mzv::composition::{admissible_up_to, Composition};
use mzv::diagrams::{build_half_moon, build_seashell, reduce, Strategy};
use mzv::identities::{
    eliminate_zeta1, idbig_raw, idbignice_raw, partial_integration_length2, partial_integration_length3,
    permutation_identity, shuffle_expansion, shuffle_identity, sweep_instances, Identity, Variant,
};
use mzv::linalg::{assemble_permutation_system, reduce_to_basis};
use mzv::numerics::{
    bernoulli_real_part_exact, eval_combination_with, eval_mzv_direct, eval_propagator, lnz_coefficients, pi,
    verify_identity_with, MzvOracle, Real, WorkingPrecision,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn comp(s: &str) -> Composition {
    s.parse().unwrap()
}

fn z(s: &str) -> ZetaCombination {
    ZetaCombination::zeta(comp(s))
}

fn oracle() -> MzvOracle {
    MzvOracle::new(WorkingPrecision::default())
}

fn euler_table() -> Outcome {
    let start = Instant::now();
    let mut o = oracle();
    let prec = o.precision();
    let mut worst = 0.0f64;
    let z5 = z("5");
    let z2z3 = &z("2") * &z("3");
    let combos = [
        &z("2,1") - &z("3"),
        &(&z("3,2") + &z5.scale(&parse_rational("11/2").unwrap())) - &z2z3.scale(&rat(3)),
        &(&z("4,1") - &z5.scale(&rat(2))) + &z2z3,
    ];
    for c in &combos {
        let v = eval_combination_with(&mut o, c, 1e-12).unwrap();
        worst = worst.max(v.value.abs().to_f64());
    }
    let pi4 = {
        let p = pi(prec);
        p.mul(&p).mul(&p).mul(&p)
    };
    for (s, d) in [("3,1", 360), ("2,2", 120)] {
        let v = o.eval(&comp(s), 1e-12).unwrap();
        let r = v.value.sub(&pi4.div_int(&d.into()));
        worst = worst.max(r.abs().to_f64());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(worst <= 1e-10 && secs < 10.0, format!("max residual {worst:.1e} over 5 identities in {secs:.2} s"))
}

fn rank_table() -> Outcome {
    let start = Instant::now();
    let cases: [(&[usize], usize); 5] =
        [(&[0, 1, 2], 4), (&[0, 1, 2, 3], 18), (&[0, 1, 2, 3, 4], 96), (&[0, 1, 1], 2), (&[0, 0, 0], 1)];
    let mut got = Vec::new();
    let mut ok = true;
    for (syms, want) in cases {
        let r = assemble_permutation_system(syms.len(), syms).unwrap().rank();
        ok &= r == want;
        got.push(r.to_string());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(ok && secs < 60.0, format!("ranks {} (expected 4, 18, 96, 2, 1) in {secs:.2} s", got.join(", ")))
}

fn basis_conjecture() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for l in 2..=5usize {
        let r = reduce_to_basis(l).unwrap();
        let fact = |n: usize| (1..=n).product::<usize>();
        let good = r.rank == fact(l) - fact(l - 1)
            && r.basis.len() == fact(l - 1)
            && r.canonical
            && r.expressions.len() == r.rank;
        ok &= good;
        parts.push(format!("l={l}: rank {} basis {}", r.rank, r.basis.len()));
    }
    outcome(ok, parts.join("; "))
}

fn pairs(max_weight: u32) -> Vec<(Composition, Composition)> {
    let adm = admissible_up_to(max_weight);
    adm.iter()
        .flat_map(|l| adm.iter().map(move |r| (l.clone(), r.clone())))
        .filter(|(l, r)| l.weight() + r.weight() <= max_weight)
        .collect()
}

fn sweep_residuals(ids: &[Identity]) -> (usize, f64, bool) {
    let mut o = oracle();
    let mut worst = 0.0f64;
    let mut ok = true;
    for id in ids {
        let r = verify_identity_with(&mut o, id, 1e-12).unwrap();
        worst = worst.max(r.residual_f64().abs());
        ok &= r.pass && r.residual_f64().abs() <= 1e-9;
    }
    (ids.len(), worst, ok)
}

fn stuffle_sweep() -> Outcome {
    let start = Instant::now();
    let ids: Vec<Identity> = pairs(8).iter().map(|(l, r)| permutation_identity(l, r)).collect();
    let (n, worst, ok) = sweep_residuals(&ids);
    let secs = start.elapsed().as_secs_f64();
    outcome(ok && secs < 300.0, format!("{n} identities, max residual {worst:.1e}, {secs:.2} s"))
}

fn shuffle_sweep() -> Outcome {
    let ids: Vec<Identity> = pairs(8).iter().map(|(l, r)| shuffle_identity(l, r).unwrap()).collect();
    let (n, worst, ok) = sweep_residuals(&ids);
    let square = shuffle_expansion(&comp("2"), &comp("2")).unwrap();
    let exact = square == &z("3,1").scale(&rat(4)) + &z("2,2").scale(&rat(2));
    outcome(ok && exact, format!("{n} identities, max residual {worst:.1e}; ζ(2)² = 4ζ(3,1)+2ζ(2,2) exact: {exact}"))
}

fn idbig_consistency() -> Outcome {
    let mut bad = Vec::new();
    let mut n = 0;
    for ks in admissible_up_to(8).into_iter().filter(|k| k.depth() >= 2) {
        n += 1;
        let sub = idbig_raw(&ks).map_monomials(|m| match m.factors() {
            [x, y] if x.depth() + y.depth() == ks.depth() && x.depth().min(y.depth()) == 1 => {
                // factors are sorted, so the depth-one head may come second
                let (a, l) = if x.depth() == 1 { (x, y) } else { (y, x) };
                let mut parts = a.parts().to_vec();
                parts.extend_from_slice(l.parts());
                idbignice_raw(&Composition::new(parts).unwrap())
            }
            _ => ZetaCombination::product(m.factors().to_vec()),
        });
        if !(&ZetaCombination::zeta(ks.clone()) - &sub).is_zero() {
            bad.push(ks.to_string());
        }
    }
    outcome(bad.is_empty(), format!("{n} compositions, {} with a non-zero remainder {:?}", bad.len(), bad))
}

fn diagram_agreement() -> Outcome {
    let closed = |target: ZetaCombination, value: &ZetaCombination| {
        let c = &target - value;
        eliminate_zeta1(&c).unwrap_or(c).normalize()
    };
    let (mut n2, mut n3, mut bad) = (0, 0, Vec::new());
    for a in 2..8u32 {
        for b in 1..=8 - a {
            n2 += 1;
            let r = reduce(&build_half_moon(a, 0, b), Strategy::Rightward).unwrap();
            if closed(z(&format!("{a},{b}")), &r.value) != partial_integration_length2(a, b).unwrap().combination {
                bad.push(format!("({a},{b})"));
            }
        }
    }
    for ks in admissible_up_to(7).into_iter().filter(|k| k.depth() == 3) {
        let p = ks.parts();
        let d = build_seashell(&ks).unwrap();
        for (st, v) in [(Strategy::Rightward, Variant::Rightward), (Strategy::Alternative, Variant::Alternative)] {
            n3 += 1;
            let r = reduce(&d, st).unwrap();
            let id = partial_integration_length3(p[0], p[1], p[2], v).unwrap();
            if closed(ZetaCombination::zeta(ks.clone()), &r.value) != id.combination {
                bad.push(format!("{ks} {st}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("{n2} length-2 and {n3} length-3 reductions, {} mismatches {:?}", bad.len(), bad))
}

fn zeta1_freedom() -> Outcome {
    let ids = sweep_instances(8).unwrap();
    let finals: Vec<&Identity> = ids.iter().filter(|i| i.is_final).collect();
    let offending = finals.iter().filter(|i| i.combination.is_regularized()).count();
    let excluded = ids.iter().filter(|i| i.family.is_final() && !i.is_final).count();
    outcome(
        offending == 0 && !finals.is_empty(),
        format!(
            "{} final identities, {offending} with ζ(1…) factors; {excluded} leftward instances with k2 = 1 kept regularized and non-final",
            finals.len()
        ),
    )
}

fn oracle_cross_check() -> Outcome {
    let start = Instant::now();
    let mut o = oracle();
    let mut worst_ratio = 0.0f64;
    let mut n = 0;
    for c in admissible_up_to(8) {
        n += 1;
        let d = eval_mzv_direct(&c, 1_000_000).unwrap();
        let a = o.eval(&c, 1e-12).unwrap();
        let diff = d.value.sub(&a.value).abs().to_f64();
        worst_ratio = worst_ratio.max(diff / (d.bound + a.bound));
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(worst_ratio <= 1.0, format!("{n} compositions, max |direct − accelerated| / combined bound = {worst_ratio:.4}, {secs:.1} s"))
}

fn loglog_slope(ns: &[f64], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    -num / den
}

fn propagator_checks() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    // exact Bernoulli values at u = 0, cross-checked against (−1)^{k/2+1} ζ(k) / (2π)^k
    let mut o = oracle();
    let prec = o.precision();
    for (k, want, want_f) in [(2i64, "-1/24", -1.0 / 24.0), (4, "1/1440", 1.0 / 1440.0)] {
        let exact = bernoulli_real_part_exact(k, &BigRational::from_integer(0.into())).unwrap();
        let want = parse_rational(want).unwrap();
        let zk = o.eval(&Composition::single(k as u32), 1e-12).unwrap().value;
        let two_pi_k = (0..k).fold(Real::one(prec), |acc, _| acc.mul(&pi(prec).mul_int(&2.into())));
        let sign = if k % 4 == 0 { 1 } else { -1 };
        let from_zeta = zk.div(&two_pi_k).mul_int(&sign.into());
        let gap = from_zeta.sub(&Real::from_rational(&want, prec)).abs().to_f64();
        let four = eval_propagator(k, 0.0, 100_000).unwrap().fourier;
        let fourier_ok = (four.re - want_f).abs() <= four.bound;
        ok &= exact == want && gap < 1e-30 && fourier_ok;
        notes.push(format!("Re g({k})(0) = {exact}"));
    }
    // sup-error decay of the truncated Fourier sum
    let ns = [1e3, 1e4, 1e5];
    let grid: Vec<f64> = (0..256).map(|j| j as f64 / 256.0).collect();
    for k in [2i64, 3] {
        let errs: Vec<f64> = ns
            .iter()
            .map(|&n| {
                let extra = [1.0 / (4.0 * n), 1.0 / (2.0 * n)];
                grid.iter()
                    .chain(&extra)
                    .map(|&u| {
                        let v = eval_propagator(k, u, n as u64).unwrap();
                        (v.fourier.re - v.bernoulli_re).abs()
                    })
                    .fold(0.0, f64::max)
            })
            .collect();
        let slope = loglog_slope(&ns, &errs);
        // at u = 0 the k = 2 error is the tail 1/N − 1/(2N²) + …, whose fitted
        // slope sits just under 1
        let need = (k - 1) as f64 * (1.0 - 1e-3);
        ok &= slope >= need;
        notes.push(format!("slope k={k}: {slope:.4}"));
    }
    // ∂u g^(k) = g^(k-1), compared on truncated sums with the same N
    let (h, n) = (1e-5, 200u64);
    let mut worst = 0.0f64;
    for k in [3i64, 4] {
        for &u in &[0.1, 0.3, 0.55, 0.8] {
            let p = eval_propagator(k, u + h, n).unwrap().fourier;
            let m = eval_propagator(k, u - h, n).unwrap().fourier;
            let d = eval_propagator(k - 1, u, n).unwrap().fourier;
            let (dre, dim) = ((p.re - m.re) / (2.0 * h), (p.im - m.im) / (2.0 * h));
            worst = worst.max((dre - d.re).abs().max((dim - d.im).abs()));
        }
    }
    ok &= worst < 1e-8;
    notes.push(format!("finite-difference error {worst:.1e}"));
    outcome(ok, notes.join("; "))
}

/// ln Γ(w) by Stirling's series after shifting the argument by 10.
fn ln_gamma(w: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    let mut x = w;
    for _ in 0..10 {
        shift += x.ln();
        x += 1.0;
    }
    let b2k = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0];
    let mut series = Complex64::new(0.0, 0.0);
    for (i, b) in b2k.iter().enumerate() {
        let k = (i + 1) as f64;
        series += b / (2.0 * k * (2.0 * k - 1.0)) / x.powf(2.0 * k - 1.0);
    }
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series - shift
}

fn free_energy() -> Outcome {
    let coeffs = lnz_coefficients(8);
    let symbolic = coeffs.iter().enumerate().all(|(i, c)| {
        let n = i as u32 + 1;
        *c == ZetaCombination::zeta(Composition::single(n)).scale(&BigRational::new(1.into(), n.into()))
    });
    // Taylor coefficients of ln Γ(1 − λ) from a Cauchy integral on |λ| = 1/2
    let (r, m) = (0.5, 128usize);
    let samples: Vec<(Complex64, Complex64)> = (0..m)
        .map(|j| {
            let t = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            let l = Complex64::from_polar(r, t);
            (l, ln_gamma(Complex64::new(1.0, 0.0) - l))
        })
        .collect();
    let mut o = oracle();
    let mut worst = 0.0f64;
    for n in 2..=8usize {
        let taylor: Complex64 =
            samples.iter().map(|(l, f)| f * (l / r).powi(-(n as i32))).sum::<Complex64>() / (m as f64) / r.powi(n as i32);
        let v = eval_combination_with(&mut o, &coeffs[n - 1], 1e-12).unwrap().to_f64();
        worst = worst.max((taylor.re - v).abs()).max(taylor.im.abs());
    }
    outcome(symbolic && worst <= 1e-10, format!("symbolic match {symbolic}; max |Taylor − ζ(n)/n| = {worst:.1e} for n = 2..8"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Euler table", euler_table),
        ("rank table", rank_table),
        ("basis conjecture", basis_conjecture),
        ("stuffle sweep", stuffle_sweep),
        ("shuffle sweep", shuffle_sweep),
        ("idbig/idbignice consistency", idbig_consistency),
        ("diagram/emitter agreement", diagram_agreement),
        ("ζ(1)-freedom", zeta1_freedom),
        ("oracle cross-check", oracle_cross_check),
        ("propagator checks", propagator_checks),
        ("free-energy coefficients", free_energy),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        if !o.pass {
            failed += 1;
        }
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} [{verdict}] {name}: {} [{:.2} s]", i + 1, o.detail, start.elapsed().as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
