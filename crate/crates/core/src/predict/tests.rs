use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::*;
use crate::artin::{group_table, GroupId};
use crate::curve::parse_curve;
use crate::globalroot::base_change_root_number;

fn curve(s: &str) -> WeierstrassModel {
    parse_curve(s).unwrap()
}

#[test]
fn congruent_table_examples() {
    assert_eq!(congruent_root(&int(5)).unwrap(), Sign::Minus);
    assert_eq!(congruent_root(&int(1)).unwrap(), Sign::Plus);
    assert_eq!(congruent_root(&int(166)).unwrap(), Sign::Minus);
    assert!(matches!(congruent_root(&int(12)), Err(Error::NotSquarefree(_))));
    assert!(matches!(congruent_root(&int(0)), Err(Error::NotSquarefree(_))));
}

#[test]
fn congruent_table_matches_local_product() {
    let ns: Vec<i64> = (1..=10_000).filter(|&n| arith::is_squarefree(&int(n)).unwrap()).collect();
    ns.par_iter().for_each(|&n| {
        congruent_root_verified(&int(n)).unwrap_or_else(|e| panic!("n = {n}: {e}"));
    });
}

#[test]
fn congruent_verdicts() {
    let v = predicted_congruent(&int(800_006)).unwrap();
    assert!(v.predicted_congruent && v.caveat.is_none() && v.conditional);
    assert!(predicted_congruent(&int(6)).unwrap().predicted_congruent);
    let v = predicted_congruent(&int(1)).unwrap();
    assert!(!v.predicted_congruent);
    assert!(v.caveat.is_some());
    // 5 * 4 has the twist class of 5
    let v = predicted_congruent(&int(20)).unwrap();
    assert_eq!(v.squarefree_part, int(5));
    assert!(v.predicted_congruent);
    assert!(predicted_congruent(&int(-5)).is_err());
}

#[test]
fn cassels_examples_and_grid() {
    assert_eq!(cassels_fiber_root(&int(1), &int(1)).unwrap(), Sign::Minus);
    assert_eq!(cassels_fiber_root(&int(1), &int(2)).unwrap(), Sign::Minus);
    assert_eq!(cassels_fiber_root(&int(0), &int(1)).unwrap(), Sign::Minus);
    assert!(cassels_fiber_root(&int(2), &int(4)).is_err());
    assert!(cassels_fiber_root(&int(0), &int(0)).is_err());
    let r = cassels_scan(20).unwrap();
    assert_eq!(r.plus, 0, "{:?}", r.exceptions);
    assert!(r.fibres > 1000);
}

#[test]
fn washington_examples_and_range() {
    for t in [0, 1, -10] {
        assert_eq!(washington_fiber_root(&int(t)).unwrap(), Sign::Minus, "t = {t}");
    }
    let r = washington_scan(-200, 200).unwrap();
    assert_eq!(r.fibres, 401);
    assert_eq!(r.plus, 0, "{:?}", r.exceptions);
}

#[test]
fn partner_of_8281h1() {
    let f = Cubic::from_ints([1, 0, -91, 182]);
    let sample = default_twist_sample();
    let rep = representability_partner(&f, &sample).unwrap();
    assert_eq!(rep.d0, int(-3));
    assert_eq!(rep.flips.g, Cubic::from_ints([-3, 0, 273, -546]));
    assert!(rep.flips.always_flipped);
    // g has the twist pattern of x^3 - 91x - 182: -1 for d > 0, +1 for d < 0
    let h = Cubic::from_ints([1, 0, -91, -182]);
    let other = twist_flip_report(&f, &h, &sample).unwrap();
    for (a, b) in rep.flips.samples.iter().zip(&other.samples) {
        assert_eq!(a.w_g, b.w_g, "d = {}", a.d);
        assert_eq!(a.w_g, Sign::from_bool_minus(a.d > 0));
    }
}

#[test]
fn non_twist_pair_flips() {
    let f = Cubic::from_ints([4, 0, -32, -35]);
    let g = Cubic::from_ints([9, 0, 16, 16]);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut ds = Vec::new();
    while ds.len() < 50 {
        let d: i64 = rng.gen_range(-5000..=5000);
        if d != 0 && arith::is_squarefree(&int(d)).unwrap() {
            ds.push(d);
        }
    }
    let r = twist_flip_report(&f, &g, &ds).unwrap();
    assert!(r.always_flipped);
    assert!(r.samples.iter().all(|s| s.represented_by.is_some()));
}

#[test]
fn odd_rank_cubic_represents_one() {
    // (2y + 1)^2 = 4x^3 - 4x + 1 is 37A1
    let f = Cubic::from_ints([4, 0, -4, 1]);
    let rep = representability_partner(&f, &[1]).unwrap();
    assert_eq!(rep.flips.samples[0].w_f, Sign::Minus);
    assert_eq!(rep.flips.samples[0].represented_by, Some("f"));
}

#[test]
fn cubic_syntax() {
    let c: Cubic = "[4, 0, -32, -35]".parse().unwrap();
    assert_eq!(c, Cubic::from_ints([4, 0, -32, -35]));
    assert_eq!(c.to_string().parse::<Cubic>().unwrap(), c);
    assert!("[1,2,3]".parse::<Cubic>().is_err());
    assert!(matches!("[1,0,0,0]".parse::<Cubic>().unwrap().curve(), Err(Error::SingularCurve)));
}

#[test]
fn even_rank_fields() {
    let biquad = |a, b| FieldDescriptor::Biquadratic(int(a), int(b));
    assert!(even_rank_field(&biquad(-3, 13)).unwrap());
    assert!(even_rank_field(&FieldDescriptor::ElemAbelian2(4)).unwrap());
    assert!(!even_rank_field(&biquad(-1, 2)).unwrap());
    assert!(!even_rank_field(&FieldDescriptor::Zeta8).unwrap());
    assert!(!even_rank_field(&FieldDescriptor::Quadratic(int(-2))).unwrap());
    assert!(even_rank_field(&FieldDescriptor::ElemAbelian2(2)).is_err());
}

#[test]
fn even_rank_fields_force_plus_one() {
    let curves = ["[0,-1,1,0,0]", "[0,0,1,-1,0]", "[1,0,0,-3,1]", "[0,0,0,-1,0]", "[1,-1,0,-2,-1]"];
    let mut found = 0;
    for a in [-39i64, -15, -7, -3, -1, 2, 3, 5, 13, 17] {
        for b in [-11i64, -3, 5, 7, 13, 21, 29] {
            let field = FieldDescriptor::Biquadratic(int(a), int(b));
            if field.validate().is_err() || !even_rank_field(&field).unwrap() {
                continue;
            }
            found += 1;
            for c in curves {
                match base_change_root_number(&curve(c), &field) {
                    Ok(w) => assert_eq!(w, Sign::Plus, "{c} over {field}"),
                    Err(Error::UnsupportedLocalCase { .. }) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
    assert!(found >= 3);
}

#[test]
fn zeta8_examples() {
    for c in ["[1,0,0,-3,1]", "[1,0,0,-34,68]"] {
        let r = zeta8_growth(&curve(c)).unwrap();
        assert_eq!(r.status, Applicability::Applicable);
        assert_eq!(r.root_number, Some(Sign::Minus));
        assert!(r.in_family);
    }
    let r = zeta8_growth(&curve("[0,-1,1,0,0]")).unwrap();
    assert_eq!(r.status, Applicability::NotApplicable);
    assert_eq!(r.root_number, None);
}

#[test]
fn zeta8_family_is_split_at_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut checked = 0;
    while checked < 200 {
        let a: i64 = rng.gen_range(-500..=500);
        let b = a + 2 * rng.gen_range(-250i64..=250);
        let Ok(m) = WeierstrassModel::from_ints([1, 0, 0, a, b]) else { continue };
        let r = zeta8_growth(&m).unwrap();
        assert!(r.in_family);
        assert_eq!(r.class_at_2, ReductionClass::SplitMult, "[1,0,0,{a},{b}]");
        assert_eq!(r.root_number, Some(Sign::Minus));
        checked += 1;
    }
}

#[test]
fn fakecm_examples() {
    let e = curve("[0,5/4,0,-2,-7]");
    let w_k = base_change_root_number(&e, &FieldDescriptor::AssertedEverywhereGood { real: 0, complex: 3 }).unwrap();
    let r = fakecm_classify(&e, true, true, Some(w_k)).unwrap();
    assert!(r.constant_twist_root);
    assert_eq!(r.prediction.unwrap().twist_root, Sign::Minus);

    let e = curve("[0,1,0,-12,-67/4]");
    let w_k = base_change_root_number(&e, &FieldDescriptor::AssertedEverywhereGood { real: 0, complex: 2 }).unwrap();
    let p = fakecm_classify(&e, true, true, Some(w_k)).unwrap().prediction.unwrap();
    assert_eq!((p.even_degree_root, p.odd_degree_root), (Sign::Plus, Sign::Plus));
    assert_eq!(p.summary, "even rank over every extension of K");

    let e = curve("[1,-1,0,-2,-1]");
    let w_k = base_change_root_number(&e, &FieldDescriptor::Quadratic(int(-1))).unwrap();
    assert_eq!(w_k, Sign::Minus);
    let p = fakecm_classify(&e, true, true, Some(w_k)).unwrap().prediction.unwrap();
    assert_eq!(p.even_degree_root, Sign::Plus);
    assert_ne!(p.even_degree_root, w_k);

    assert!(fakecm_classify(&e, false, true, Some(w_k)).unwrap().prediction.is_none());
    assert_eq!(fakecm_classify(&curve("[0,-1,1,0,0]"), true, true, None), Err(Error::NotPotentiallyGood(int(11))));
}

#[test]
fn minimalist_wg_examples() {
    let a5 = group_table(GroupId::Alt5).unwrap();
    let p = minimalist_wg(&a5, Sign::Minus).unwrap();
    assert_eq!(p.irreps, vec!["1", "tau1", "tau2", "sigma"]);
    assert_eq!(p.rank, 12);
    assert!(p.conditional);
    let p = minimalist_wg(&a5, Sign::Plus).unwrap();
    assert!(p.irreps.is_empty() && p.rank == 0);
    let s5 = group_table(GroupId::Sym(5)).unwrap();
    assert_eq!(minimalist_wg(&s5, Sign::Minus), Err(Error::QuadraticSubfieldPresent));
    assert_eq!(minimalist_wg(&s5, Sign::Plus), Err(Error::QuadraticSubfieldPresent));
}

#[test]
fn minimalist_d10_examples() {
    let p = minimalist_d10(&int(31), Sign::Plus).unwrap();
    assert_eq!((p.irreps.clone(), p.rank), (vec!["eps".to_string(), "rho1".into(), "rho2".into()], 5));
    assert_eq!(minimalist_d10(&int(37), Sign::Plus).unwrap().rank, 0);
    let p = minimalist_d10(&int(43), Sign::Minus).unwrap();
    assert_eq!((p.irreps, p.rank), (vec!["1".to_string(), "eps".into()], 2));
    assert_eq!(minimalist_d10(&int(33), Sign::Minus), Err(Error::BadResidue(3)));
}

#[test]
fn minimalist_d10_depends_only_on_symbol_and_sign() {
    let plus = [1i64, 2, 4, 8];
    let minus = [7i64, 11, 13, 14];
    for r in 0..15i64 {
        for k in 0..40i64 {
            let n = int(r + 15 * k + 15);
            for w in [Sign::Plus, Sign::Minus] {
                let got = minimalist_d10(&n, w);
                if plus.contains(&r) || minus.contains(&r) {
                    let s = if plus.contains(&r) { 1 } else { -1 };
                    assert_eq!(kronecker(&int(-15), &n), s, "N = {n}");
                    let reference = minimalist_d10(&int(if s == 1 { 1 } else { 7 }), w).unwrap();
                    assert_eq!(got.unwrap(), reference);
                } else {
                    assert_eq!(got, Err(Error::BadResidue(r)));
                }
            }
        }
    }
}

#[test]
fn galmod_keys() {
    let delta: BigInt = -num_traits::pow(int(3), 5) * num_traits::pow(int(5), 13);
    let k = galmod_key(&int(37), &delta, Sign::Minus).unwrap();
    assert_eq!(k.modulus, -&delta * 8);
    assert_eq!(k.residue, int(37));
    let k2 = galmod_key(&(int(37) + &k.modulus * 3), &delta, Sign::Minus).unwrap();
    assert_eq!(k, k2);
    assert_eq!(galmod_key(&int(15), &delta, Sign::Minus), Err(Error::CoprimalityViolated));
    assert_eq!(galmod_key(&int(38), &delta, Sign::Minus), Err(Error::CoprimalityViolated));
    // equal keys give equal D10 predictions
    for n in [37i64, 41, 43, 47] {
        let a = galmod_key(&int(n), &delta, Sign::Plus).unwrap();
        let m = &a.modulus + int(n);
        assert_eq!(galmod_key(&m, &delta, Sign::Plus).unwrap(), a);
        assert_eq!(minimalist_d10(&int(n), Sign::Plus), minimalist_d10(&m, Sign::Plus));
    }
}
