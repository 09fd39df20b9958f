use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use super::*;

fn d10() -> GroupTable {
    group_table(GroupId::Dihedral(10)).unwrap()
}

fn dims(t: &GroupTable) -> Vec<u64> {
    t.irreps.iter().map(|r| r.dim).collect()
}

/// Standard Young tableaux counted by removing corners, independent of the hook formula.
fn syt_count(lambda: &[u32], memo: &mut HashMap<Vec<u32>, BigUint>) -> BigUint {
    if lambda.iter().sum::<u32>() <= 1 {
        return BigUint::from(1u32);
    }
    if let Some(v) = memo.get(lambda) {
        return v.clone();
    }
    let mut total = BigUint::from(0u32);
    for i in 0..lambda.len() {
        let corner = i + 1 == lambda.len() || lambda[i + 1] < lambda[i];
        if corner {
            let mut smaller = lambda.to_vec();
            smaller[i] -= 1;
            if smaller[i] == 0 {
                smaller.pop();
            }
            total += syt_count(&smaller, memo);
        }
    }
    memo.insert(lambda.to_vec(), total.clone());
    total
}

#[test]
fn twist_root_examples() {
    let n37 = BigInt::from(37);
    assert_eq!(artin_twist_root(Sign::Minus, &RepDescriptor::new(2, -47), &n37).unwrap(), Sign::Minus);
    for w in [Sign::Plus, Sign::Minus] {
        for n in [1, 11, 37, 5077] {
            assert_eq!(artin_twist_root(w, &RepDescriptor::new(1, 1), &BigInt::from(n)).unwrap(), w);
        }
    }
    assert_eq!(artin_twist_root(Sign::Minus, &RepDescriptor::new(5, 1), &BigInt::from(11)).unwrap(), Sign::Minus);
}

#[test]
fn twist_root_errors() {
    let n = BigInt::from(37);
    let mut rep = RepDescriptor::new(2, -47);
    rep.coprime_attested = false;
    assert_eq!(artin_twist_root(Sign::Minus, &rep, &n), Err(Error::ConductorClash));
    let mut rep = RepDescriptor::new(2, -47);
    rep.self_dual = false;
    assert_eq!(artin_twist_root(Sign::Minus, &rep, &n), Err(Error::NotSelfDual));
    assert_eq!(artin_twist_root(Sign::Minus, &RepDescriptor::new(2, 37), &n), Err(Error::ConductorClash));
    // 2 | N_E with 2 ramified in Q(sqrt 3)
    assert_eq!(artin_twist_root(Sign::Minus, &RepDescriptor::new(2, 3), &BigInt::from(14)), Err(Error::ConductorClash));
    assert!(matches!(
        artin_twist_root(Sign::Minus, &RepDescriptor::new(2, 12), &n),
        Err(Error::NotSquarefree(_))
    ));
}

#[test]
fn two_adic_symbol_convention() {
    // (alpha / 2) is +1 for alpha = 1 mod 8 and -1 for alpha = 5 mod 8
    let n = BigInt::from(2);
    assert_eq!(artin_twist_root(Sign::Plus, &RepDescriptor::new(2, 17), &n).unwrap(), Sign::Plus);
    assert_eq!(artin_twist_root(Sign::Plus, &RepDescriptor::new(2, 5), &n).unwrap(), Sign::Minus);
    assert_eq!(artin_twist_root(Sign::Plus, &RepDescriptor::new(2, -3), &n).unwrap(), Sign::Plus);
}

#[test]
fn table_examples() {
    let t = d10();
    assert_eq!(dims(&t), vec![1, 1, 2, 2]);
    assert!(t.irreps.iter().all(|r| r.self_dual));
    let a5 = group_table(GroupId::Alt5).unwrap();
    let mut d = dims(&a5);
    d.sort();
    assert_eq!(d, vec![1, 3, 3, 4, 5]);
    assert!(a5.irreps.iter().all(|r| r.self_dual && r.det_order == DetOrder::One));
    let mut d = dims(&group_table(GroupId::Sym(5)).unwrap());
    d.sort();
    assert_eq!(d, vec![1, 1, 4, 4, 5, 5, 6]);
}

#[test]
fn unsupported_groups() {
    for id in [GroupId::Dihedral(2), GroupId::Dihedral(7), GroupId::Sym(0), GroupId::ElemAbelian2(0), GroupId::ElemAbelian2(40)] {
        assert!(matches!(group_table(id), Err(Error::UnsupportedGroup(_))), "{id}");
    }
    let s9 = group_table(GroupId::Sym(9)).unwrap();
    assert!(!s9.complete && s9.irreps.is_empty());
    assert_eq!(s9.odd_dim_count, BigUint::from(8u32));
    assert!(order2_bound_for(&s9).is_err());
}

fn abelianization_order(id: GroupId) -> u64 {
    match id {
        GroupId::Dihedral(o) if (o / 2) % 2 == 1 => 2,
        GroupId::Dihedral(_) => 4,
        GroupId::Sym(1) => 1,
        GroupId::Sym(_) => 2,
        GroupId::Alt5 => 1,
        GroupId::ElemAbelian2(d) => 1 << d,
    }
}

#[test]
fn tables_are_consistent() {
    let mut ids: Vec<GroupId> = (2..=60).map(|n| GroupId::Dihedral(2 * n)).collect();
    ids.extend((1..=7).map(GroupId::Sym));
    ids.extend((1..=8).map(GroupId::ElemAbelian2));
    ids.push(GroupId::Alt5);
    for id in ids {
        let t = group_table(id).unwrap();
        assert!(t.complete);
        let sum: BigUint = t.irreps.iter().map(|r| BigUint::from(r.dim * r.dim)).sum();
        assert_eq!(sum, t.order, "{id}");
        let linear = t.irreps.iter().filter(|r| r.dim == 1).count() as u64;
        assert_eq!(linear, abelianization_order(id), "{id}");
        assert!(t.irreps[0].dim == 1 && t.irreps[0].det_order == DetOrder::One);
        assert_eq!(id.to_string().parse::<GroupId>().unwrap(), id);
    }
}

#[test]
fn hook_lengths_match_tableaux_counts() {
    let mut memo = HashMap::new();
    for n in 1..=12u32 {
        let mut odd = 0u64;
        for lambda in partitions(n) {
            let d = sym_irrep_dim(&lambda);
            assert_eq!(d, syt_count(&lambda, &mut memo), "{lambda:?}");
            if d.bit(0) {
                odd += 1;
            }
        }
        assert_eq!(sn_odd_irrep_count(n as u64), BigUint::from(odd), "n = {n}");
    }
}

#[test]
fn partition_counts() {
    let p: Vec<usize> = (1..=12).map(|n| partitions(n).len()).collect();
    assert_eq!(p, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]);
}

#[test]
fn sym_determinants_respect_conjugation() {
    // V_lambda' = V_lambda (x) sign, so det(lambda') = det(lambda) sign^dim
    for n in 2..=7 {
        let t = group_table(GroupId::Sym(n)).unwrap();
        for (lambda, rep) in partitions(n).iter().zip(&t.irreps) {
            let parts: Vec<String> = conjugate_of(lambda).iter().map(|p| p.to_string()).collect();
            let conj = format!("[{}]", parts.join(","));
            let other = &t.irreps[t.index_of(&conj).unwrap()];
            let flip = rep.dim % 2 == 1;
            assert_eq!(rep.det_order == other.det_order, !flip, "{} vs {}", rep.name, other.name);
        }
        let std_rep = &t.irreps[t.index_of(&format!("[{},1]", n - 1)).unwrap()];
        assert_eq!(std_rep.det_order, DetOrder::Two);
    }
}

fn conjugate_of(lambda: &[u32]) -> Vec<u32> {
    (0..lambda[0]).map(|j| lambda.iter().filter(|&&r| r > j).count() as u32).collect()
}

#[test]
fn frobenius_rank_d10() {
    let g = GroupId::Dihedral(10);
    let t = d10();
    let perm_g = MultiplicityVector::exact(g, &[1, 0, 0, 0]);
    let perm_c5 = MultiplicityVector::exact(g, &[1, 1, 0, 0]);
    let perm_c2 = MultiplicityVector::exact(g, &[1, 0, 1, 1]);
    let perm_1 = t.regular_character();
    for (a, b, c) in [(1, 0, 1), (2, 3, 1), (0, 0, 0), (5, 1, 4)] {
        let v = MultiplicityVector::exact(g, &[a, b, c, c]);
        assert_eq!(frobenius_rank(&v, &perm_g).unwrap(), a);
        assert_eq!(frobenius_rank(&v, &perm_c5).unwrap(), a + b);
        assert_eq!(frobenius_rank(&v, &perm_c2).unwrap(), a + 2 * c);
        assert_eq!(frobenius_rank(&v, &perm_1).unwrap(), a + b + 4 * c);
        assert_eq!(frobenius_rank(&v, &perm_1).unwrap(), v.weighted_total(&t).unwrap());
    }
    let other = MultiplicityVector::exact(GroupId::Dihedral(14), &[1, 0, 1, 1, 1]);
    assert_eq!(frobenius_rank(&other, &perm_c2), Err(Error::GroupMismatch));
    let short = MultiplicityVector::exact(g, &[1, 0, 1]);
    assert_eq!(frobenius_rank(&short, &perm_c2), Err(Error::GroupMismatch));
}

fn parities(sol: &DihedralSolution) -> Vec<ParityConstraint> {
    sol.parities
        .entries
        .iter()
        .map(|m| match m {
            Multiplicity::Parity(p) => *p,
            Multiplicity::Exact(_) => panic!("expected parity"),
        })
        .collect()
}

#[test]
fn dihedral_solver_examples() {
    use ParityConstraint::{Even, Odd};
    let s = dihedral_parity_solver(5, Sign::Minus, Sign::Minus, &[Sign::Minus]).unwrap_err();
    assert!(matches!(s, Error::InvalidArgument(_)));
    let s = dihedral_parity_solver(5, Sign::Minus, Sign::Minus, &[Sign::Minus, Sign::Minus]).unwrap();
    assert_eq!(parities(&s), vec![Odd, Even, Odd, Odd]);
    assert_eq!(s.bound, 5);
    let s = dihedral_parity_solver(5, Sign::Plus, Sign::Plus, &[Sign::Plus, Sign::Plus]).unwrap();
    assert_eq!(parities(&s), vec![Even; 4]);
    assert_eq!(s.bound, 0);
    let s = dihedral_parity_solver(5, Sign::Minus, Sign::Plus, &[Sign::Plus, Sign::Plus]).unwrap();
    assert_eq!(parities(&s), vec![Odd, Odd, Even, Even]);
    assert_eq!(s.bound, 2);
    assert!(dihedral_parity_solver(9, Sign::Minus, Sign::Minus, &[Sign::Minus; 4]).is_err());
    assert!(dihedral_parity_solver(5, Sign::Minus, Sign::Minus, &[Sign::Minus, Sign::Plus]).is_err());
}

#[test]
fn dihedral_witness_is_minimal() {
    for q in [3u32, 5, 7, 11, 13] {
        let k = (q as usize - 1) / 2;
        let t = group_table(GroupId::Dihedral(2 * q)).unwrap();
        for bits in 0..8u32 {
            let s = |i: u32| Sign::from_bool_minus(bits >> i & 1 == 1);
            let sol = dihedral_parity_solver(q, s(0), s(1), &vec![s(2); k]).unwrap();
            assert_eq!(sol.witness.weighted_total(&t).unwrap(), sol.bound);
            // exhaustive search over small vectors with the same parities
            let want = parities(&sol);
            let mut best = u64::MAX;
            for a in 0..3u64 {
                for b in 0..3u64 {
                    for c in 0..3u64 {
                        let v: Vec<u64> = [a, b].into_iter().chain(std::iter::repeat_n(c, k)).collect();
                        let ok = v.iter().zip(&want).all(|(x, p)| ParityConstraint::from(Parity::of(*x)) == *p);
                        if ok {
                            best = best.min(MultiplicityVector::exact(t.id, &v).weighted_total(&t).unwrap());
                        }
                    }
                }
            }
            assert_eq!(best, sol.bound, "q = {q}, bits = {bits}");
        }
    }
}

#[test]
fn sn_counts_and_bounds() {
    assert_eq!(sn_odd_irrep_count(14), BigUint::from(64u32));
    assert_eq!(sn_odd_irrep_count(1), BigUint::from(1u32));
    assert_eq!(sn_odd_irrep_count(5), BigUint::from(4u32));
    assert_eq!(sn_rank_bound(14).unwrap(), BigUint::from(434u32));
    assert_eq!(sn_rank_bound(2).unwrap(), BigUint::from(0u32));
    assert_eq!(sn_rank_bound(5).unwrap(), BigUint::from(5u32));
    assert!(sn_rank_bound(1).is_err());
    // odd n has the same count as n - 1
    for n in (3..200u64).step_by(2) {
        assert_eq!(sn_odd_irrep_count(n), sn_odd_irrep_count(n - 1));
    }
}

#[test]
fn order2_examples() {
    assert_eq!(order2_bound(&[1, 1, 5, 5], 2).unwrap(), 6);
    assert_eq!(order2_bound(&[1, 3, 3, 5], 1).unwrap(), 12);
    assert_eq!(order2_bound(&[1, 1, 15, 15, 21, 21, 35, 35], 2).unwrap(), 72);
    assert_eq!(order2_bound(&[1, 1, 1], 2).unwrap(), 1);
    assert!(order2_bound(&[1, 2], 1).is_err());
    assert!(order2_bound(&[1], 0).is_err());
    let from_table = |id| order2_bound_for(&group_table(id).unwrap()).unwrap();
    assert_eq!(from_table(GroupId::Sym(5)), 6);
    assert_eq!(from_table(GroupId::Alt5), 12);
    assert_eq!(from_table(GroupId::Sym(7)), 72);
}

#[test]
fn heegner_and_sqrt_disc() {
    for n in [1, 5, 12] {
        assert_eq!(heegner_bound(n, true, true).unwrap(), n);
    }
    assert!(matches!(heegner_bound(5, false, true), Err(Error::AttestationMissing(_))));
    assert!(matches!(heegner_bound(5, true, false), Err(Error::AttestationMissing(_))));
    assert_eq!(sqrt_disc_growth(Parity::Even, Sign::Minus).unwrap(), SqrtDiscTwist::EpsTensorRho);
    assert_eq!(sqrt_disc_growth(Parity::Odd, Sign::Minus).unwrap(), SqrtDiscTwist::RhoPlusEps);
    assert_eq!(sqrt_disc_growth(Parity::Even, Sign::Plus), Err(Error::WrongSign));
}

#[test]
fn sqrt_disc_twists_have_root_minus_one() {
    // rho of odd (resp. even) dimension for K of even (resp. odd) degree, det rho = eps
    let n = BigInt::from(11);
    let alpha = -7;
    let eps = RepDescriptor::new(1, alpha);
    for deg in 2..9u32 {
        let rho = RepDescriptor::new(deg - 1, alpha);
        let w = match sqrt_disc_growth(Parity::of(deg as u64), Sign::Minus).unwrap() {
            // eps (x) rho has dimension dim rho and determinant eps^(dim+1) det rho
            SqrtDiscTwist::EpsTensorRho => {
                let a = if (rho.dim + 1).is_multiple_of(2) { 1 } else { alpha };
                artin_twist_root(Sign::Minus, &RepDescriptor::new(rho.dim, a), &n).unwrap()
            }
            SqrtDiscTwist::RhoPlusEps => {
                artin_twist_root(Sign::Minus, &rho, &n).unwrap() * artin_twist_root(Sign::Minus, &eps, &n).unwrap()
            }
        };
        assert_eq!(w, Sign::Minus, "degree {deg}");
    }
}

#[test]
fn descriptor_json_schema() {
    let rep: RepDescriptor = serde_json::from_str(r#"{"dim":2,"self_dual":true,"alpha":-47,"coprime_attested":true}"#).unwrap();
    assert_eq!(rep, RepDescriptor::new(2, -47));
    let v = serde_json::to_value(group_table(GroupId::Dihedral(10)).unwrap()).unwrap();
    assert_eq!(v["id"], "D10");
    assert_eq!(v["order"], "10");
    assert_eq!(v["irreps"][2]["det_order"], "TWO");
}

const SQUAREFREE: [i64; 16] = [1, -1, 2, -2, 3, -3, 5, -5, 6, -7, 10, -11, 13, -15, 17, -19];

proptest! {
    #[test]
    fn twist_root_is_multiplicative(
        w in prop::bool::ANY,
        d1 in 1u32..7, d2 in 1u32..7,
        i in 0usize..16, j in 0usize..16,
        n in 1i64..200_000,
    ) {
        let w = Sign::from_bool_minus(w);
        let (r1, r2) = (RepDescriptor::new(d1, SQUAREFREE[i]), RepDescriptor::new(d2, SQUAREFREE[j]));
        let n = BigInt::from(n);
        let sum = r1.direct_sum(&r2).unwrap();
        match (artin_twist_root(w, &r1, &n), artin_twist_root(w, &r2, &n)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(artin_twist_root(w, &sum, &n).unwrap(), a * b),
            _ => prop_assume!(false),
        }
    }

    #[test]
    fn trivial_twist_is_identity(w in prop::bool::ANY, n in 1i64..10_000_000) {
        let w = Sign::from_bool_minus(w);
        prop_assert_eq!(artin_twist_root(w, &RepDescriptor::new(1, 1), &BigInt::from(n)).unwrap(), w);
    }
}
