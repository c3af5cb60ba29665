use mzv::composition::{admissible_up_to, compositions_of, Composition};
use mzv::identities::{
    idbig_raw, idbignice_raw, partial_integration_general, partial_integration_length2,
    partial_integration_length3, shuffle_identity, three_point_identity, trailing_one, Identity, Variant,
};
use mzv::numerics::{verify_identity_with, MzvOracle, WorkingPrecision};

fn check(oracle: &mut MzvOracle, id: &Identity) {
    assert!(!id.regularized, "{id}");
    let r = verify_identity_with(oracle, id, 1e-12).unwrap();
    assert!(r.pass && r.residual_f64().abs() <= 1e-10, "{}: residual {}", id.label(), r.residual_string());
}

#[test]
fn length_three_variants_balance() {
    let mut o = MzvOracle::new(WorkingPrecision::default());
    for w in 4..=7u32 {
        for a in 2..w {
            for b in 1..w - a {
                let c = w - a - b;
                for v in [Variant::Rightward, Variant::Alternative] {
                    check(&mut o, &partial_integration_length3(a, b, c, v).unwrap());
                }
            }
        }
    }
}

#[test]
fn general_families_balance() {
    let mut o = MzvOracle::new(WorkingPrecision::default());
    for ks in admissible_up_to(7).into_iter().filter(|k| k.depth() >= 2) {
        check(&mut o, &partial_integration_general(&ks, Variant::Rightward).unwrap());
        let left = partial_integration_general(&ks, Variant::Leftward).unwrap();
        if left.regularized {
            // only possible when ζ(k2,…) itself diverges
            assert!(ks.parts()[1] == 1 && !left.is_final, "{left}");
        } else {
            check(&mut o, &left);
        }
        if *ks.parts().last().unwrap() == 1 {
            check(&mut o, &trailing_one(&ks).unwrap());
        }
    }
}

#[test]
fn leftward_with_unit_head() {
    let mut o = MzvOracle::new(WorkingPrecision::default());
    for ks in ["1,2", "1,3", "1,2,1", "1,3,2"] {
        let id = partial_integration_general(&ks.parse().unwrap(), Variant::Leftward).unwrap();
        check(&mut o, &id);
    }
}

#[test]
fn small_families_balance() {
    let mut o = MzvOracle::new(WorkingPrecision::default());
    for a in 2..6 {
        for b in 1..6 {
            check(&mut o, &partial_integration_length2(a, b).unwrap());
        }
    }
    check(&mut o, &three_point_identity(2, 2, 2).unwrap());
    check(&mut o, &three_point_identity(2, 3, 4).unwrap());
    check(&mut o, &shuffle_identity(&"2".parse().unwrap(), &"3".parse().unwrap()).unwrap());
}

#[test]
fn rightward_leftward_consistency_small() {
    for w in 2..=8 {
        for ks in compositions_of(w).into_iter().filter(|k| k.depth() >= 2 && k.is_admissible()) {
            let raw = idbig_raw(&ks);
            let sub = raw.map_monomials(|m| match m.factors() {
                [x, y] if x.depth() + y.depth() == ks.depth() && x.depth().min(y.depth()) == 1 => {
                    // factors are sorted, so the depth-one head may come second
                    let (a, l) = if x.depth() == 1 { (x, y) } else { (y, x) };
                    let mut parts = a.parts().to_vec();
                    parts.extend_from_slice(l.parts());
                    idbignice_raw(&Composition::new(parts).unwrap())
                }
                _ => mzv::combination::ZetaCombination::product(m.factors().to_vec()),
            });
            let res = &mzv::combination::ZetaCombination::zeta(ks.clone()) - &sub;
            assert!(res.is_zero(), "{ks}: {res}");
        }
    }
}
