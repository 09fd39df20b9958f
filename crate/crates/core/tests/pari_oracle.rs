//! Checks local data against values frozen from PARI/GP (see `data/gen_oracle.py`).

use num_bigint::BigInt;
use rootnum::curve::{kodaira_type, parse_curve};
use rootnum::localroot::local_root_number;
use rootnum::Sign;
use serde::Deserialize;

#[derive(Deserialize)]
struct Local {
    p: String,
    w: i64,
    kodaira: String,
}

#[derive(Deserialize)]
struct Record {
    curve: String,
    global: i64,
    conductor: String,
    local: Vec<Local>,
}

fn records() -> Vec<Record> {
    include_str!("data/pari_curves.jsonl")
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn local_root_numbers_and_kodaira_types_match_pari() {
    let recs = records();
    assert!(recs.len() > 5000);
    let mut mismatches = Vec::new();
    for r in &recs {
        let e = parse_curve(&r.curve).unwrap();
        for l in &r.local {
            let p: BigInt = l.p.parse().unwrap();
            let kod = kodaira_type(&e, &p).unwrap().kodaira.to_string();
            let w = local_root_number(&e, &p).unwrap();
            if kod != l.kodaira || w != Sign::from_i64(l.w).unwrap() {
                mismatches.push(format!("{} at {}: got ({kod}, {w}), want ({}, {})", r.curve, l.p, l.kodaira, l.w));
            }
        }
    }
    assert!(mismatches.is_empty(), "{} mismatches, first: {:?}", mismatches.len(), &mismatches[..mismatches.len().min(10)]);
}

#[test]
fn q2_table_matches_pari_on_forty_thousand_models() {
    use rootnum::localroot::{q2_table, root_number_2};
    use std::collections::BTreeMap;
    let mut bad: BTreeMap<usize, (usize, String)> = BTreeMap::new();
    let table = q2_table();
    for line in include_str!("data/pari_q2.txt").lines() {
        let (c, w) = line.rsplit_once(' ').unwrap();
        let e = parse_curve(c).unwrap();
        let got = root_number_2(&e).unwrap();
        if got != Sign::from_i64(w.parse().unwrap()).unwrap() {
            let inv = e.invariants().unwrap();
            let d = rootnum::localroot::TwoAdicData::from_invariants(
                &inv.c4.to_integer(),
                &inv.c6.to_integer(),
                &inv.disc.to_integer(),
            )
            .unwrap();
            let row = rootnum::localroot::q2_matches(&d).unwrap()[0];
            let ent = bad.entry(table[row].line).or_insert((0, c.to_string()));
            ent.0 += 1;
        }
    }
    assert!(bad.is_empty(), "mismatches by table line: {bad:?}");
}

#[test]
fn global_root_numbers_and_bad_primes_match_pari() {
    use rootnum::globalroot::{bad_primes_with_hints, global_root_number_with_hints};
    let mut mismatches = Vec::new();
    for r in &records() {
        let e = parse_curve(&r.curve).unwrap();
        let hints: Vec<BigInt> = r.local.iter().map(|l| l.p.parse().unwrap()).collect();
        let bad: Vec<BigInt> = bad_primes_with_hints(&e, &hints).unwrap().primes().cloned().collect();
        let conductor: BigInt = r.conductor.parse().unwrap();
        let divides = bad.iter().all(|p| (&conductor % p) == BigInt::from(0)) && bad.len() == hints.len();
        let w = global_root_number_with_hints(&e, &hints).unwrap();
        if !divides || w != Sign::from_i64(r.global).unwrap() {
            mismatches.push(format!("{}: got {w} with bad primes {bad:?}, want {}", r.curve, r.global));
        }
    }
    assert!(mismatches.is_empty(), "{} mismatches, first: {:?}", mismatches.len(), &mismatches[..mismatches.len().min(10)]);
}
