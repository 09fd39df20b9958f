//! Quadratic twist families: the period of `d -> w(E_d/Q)`, scans over
//! squarefree `d`, and the sign-flipping twist `d0`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use super::{minimal_data, quadratic_twist_root_with_hints, splitting_unchecked, Splitting};
use crate::arith::{self, int, Sign};
use crate::curve::WeierstrassModel;
use crate::error::{Error, Result};

/// `prod p^2` over the bad primes, times 4 when 2 is bad.
pub fn twist_period(model: &WeierstrassModel) -> Result<BigInt> {
    twist_period_with_hints(model, &[])
}

pub fn twist_period_with_hints(model: &WeierstrassModel, hints: &[BigInt]) -> Result<BigInt> {
    let data = minimal_data(model, hints)?;
    let mut period = BigInt::one();
    for p in data.bad_primes() {
        period *= p * p;
        if p == &int(2) {
            period *= 4;
        }
    }
    Ok(period)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistViolation {
    pub d1: i64,
    pub d2: i64,
    pub w1: Sign,
    pub w2: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistScanReport {
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub period: BigInt,
    pub bound: u64,
    pub pos_plus: u64,
    pub pos_minus: u64,
    pub neg_plus: u64,
    pub neg_minus: u64,
    pub violations: Vec<TwistViolation>,
}

impl TwistScanReport {
    /// Fraction of scanned `d` (both signs) with `w(E_d/Q) = +1`.
    pub fn plus_fraction(&self) -> f64 {
        let plus = self.pos_plus + self.neg_plus;
        let total = plus + self.pos_minus + self.neg_minus;
        plus as f64 / total as f64
    }
}

fn squarefree_upto(bound: u64) -> Vec<u64> {
    let mut ok = vec![true; bound as usize + 1];
    let mut k = 2u64;
    while k * k <= bound {
        let mut j = k * k;
        while j <= bound {
            ok[j as usize] = false;
            j += k * k;
        }
        k += 1;
    }
    (1..=bound).filter(|&d| ok[d as usize]).collect()
}

/// Root numbers of `E_d` for squarefree `1 <= |d| <= bound`, checking that
/// `d1 = d2 (mod period)` with equal signs gives equal root numbers.
pub fn twist_scan(model: &WeierstrassModel, bound: u64) -> Result<TwistScanReport> {
    twist_scan_with_hints(model, bound, &[])
}

pub fn twist_scan_with_hints(model: &WeierstrassModel, bound: u64, hints: &[BigInt]) -> Result<TwistScanReport> {
    let data = minimal_data(model, hints)?;
    let bad: Vec<BigInt> = data.bad_primes().cloned().collect();
    let period = twist_period_with_hints(&data.model, &bad)?;
    if BigInt::from(bound) < period {
        return Err(Error::InvalidArgument(format!("bound {bound} is below the period {period}")));
    }
    let ds: Vec<i64> = squarefree_upto(bound)
        .into_iter()
        .flat_map(|d| [d as i64, -(d as i64)])
        .collect();
    let roots: Vec<Sign> = ds
        .par_iter()
        .map(|&d| quadratic_twist_root_with_hints(&data.model, &int(d), &bad))
        .collect::<Result<_>>()?;
    let mut report = TwistScanReport {
        period: period.clone(),
        bound,
        pos_plus: 0,
        pos_minus: 0,
        neg_plus: 0,
        neg_minus: 0,
        violations: Vec::new(),
    };
    let per = period.to_i64().expect("period fits in i64 when bound does");
    let mut first: HashMap<(bool, i64), (i64, Sign)> = HashMap::new();
    for (&d, &w) in ds.iter().zip(&roots) {
        match (d > 0, w) {
            (true, Sign::Plus) => report.pos_plus += 1,
            (true, Sign::Minus) => report.pos_minus += 1,
            (false, Sign::Plus) => report.neg_plus += 1,
            (false, Sign::Minus) => report.neg_minus += 1,
        }
        let (d1, w1) = *first.entry((d > 0, d.rem_euclid(per))).or_insert((d, w));
        if w1 != w {
            report.violations.push(TwistViolation { d1, d2: d, w1, w2: w });
        }
    }
    Ok(report)
}

/// The negative squarefree `d0` of least absolute value, coprime to `2 N_E`,
/// in whose quadratic field every bad prime splits. Twisting by `d0` flips
/// every twist's root number.
pub fn find_d0(model: &WeierstrassModel) -> Result<BigInt> {
    find_d0_with_hints(model, &[])
}

pub fn find_d0_with_hints(model: &WeierstrassModel, hints: &[BigInt]) -> Result<BigInt> {
    let data = minimal_data(model, hints)?;
    let bad: Vec<BigInt> = data.bad_primes().cloned().collect();
    let mut k = BigInt::one();
    loop {
        let d0 = -&k;
        let coprime = k.is_odd() && bad.iter().all(|p| !k.is_multiple_of(p));
        if coprime
            && arith::is_squarefree(&k)?
            && bad.iter().all(|p| splitting_unchecked(p, &d0) == Splitting::Split)
        {
            debug_assert!(d0.is_negative());
            return Ok(d0);
        }
        k += 1;
    }
}
