//! Global root numbers over Q, base change to the supported field families,
//! quadratic twists and radical towers.
//!
//! Bad primes are read from the minimal discriminant. Every entry point that
//! factors a discriminant has a `_with_hints` form taking known factors.

mod fields;
mod twists;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::arith::{self, int, kronecker, Factorization, PrimePower, Sign};
use crate::curve::{minimal_model_with_support, quadratic_twist, LocalReduction, ReductionClass, WeierstrassModel};
use crate::error::{Error, Result};
use crate::localroot::{self, local_root_number_ext, root_number_2, root_number_infinite};

pub use fields::{places_above, FieldDescriptor, Parity, SplittingReport};
pub use twists::{
    find_d0, find_d0_with_hints, twist_period, twist_period_with_hints, twist_scan, twist_scan_with_hints, TwistScanReport,
    TwistViolation,
};

/// A global minimal model with the factored minimal discriminant and the
/// reduction data at each bad prime.
#[derive(Debug, Clone)]
pub struct MinimalData {
    pub model: WeierstrassModel,
    pub disc: Factorization,
    pub locals: Vec<LocalReduction>,
}

impl MinimalData {
    pub fn bad_primes(&self) -> impl Iterator<Item = &BigInt> {
        self.disc.primes()
    }

    pub fn local(&self, p: &BigInt) -> Option<&LocalReduction> {
        self.locals.iter().find(|l| &l.p == p)
    }
}

pub fn minimal_data(model: &WeierstrassModel, hints: &[BigInt]) -> Result<MinimalData> {
    model.invariants()?;
    let im = crate::curve::integral_model(model);
    let f = arith::factorize_with_hints(&im.discriminant().to_integer(), hints)?;
    let support: Vec<BigInt> = f.primes().cloned().collect();
    let (min, locals) = minimal_model_with_support(&im, &support);
    let disc = min.discriminant().to_integer();
    let mut factors = Vec::new();
    for pp in &f.factors {
        let e = arith::val_int(&disc, &pp.p) as u32;
        if e > 0 {
            factors.push(PrimePower { p: pp.p.clone(), exp: e, proof: pp.proof });
        }
    }
    let locals = locals.into_iter().filter(|l| l.class != ReductionClass::Good).collect();
    Ok(MinimalData { model: min, disc: Factorization { sign: arith::sign_of(&disc), factors }, locals })
}

/// Factorization of the minimal discriminant.
pub fn bad_primes(model: &WeierstrassModel) -> Result<Factorization> {
    bad_primes_with_hints(model, &[])
}

pub fn bad_primes_with_hints(model: &WeierstrassModel, hints: &[BigInt]) -> Result<Factorization> {
    Ok(minimal_data(model, hints)?.disc)
}

fn global_from_data(data: &MinimalData) -> Result<Sign> {
    let mut w = root_number_infinite();
    for loc in &data.locals {
        w *= if loc.p == int(2) { root_number_2(&data.model)? } else { localroot::from_reduction(&data.model, loc)? };
    }
    Ok(w)
}

/// `w(E/Q)`, the product of the local root numbers over all places.
pub fn global_root_number(model: &WeierstrassModel) -> Result<Sign> {
    global_root_number_with_hints(model, &[])
}

pub fn global_root_number_with_hints(model: &WeierstrassModel, hints: &[BigInt]) -> Result<Sign> {
    global_from_data(&minimal_data(model, hints)?)
}

/// `(-1)^(m + u)` for a semistable curve with `m` split multiplicative places and `u` infinite places.
pub fn semistable_global(split_mult_places: u64, infinite_places: u64) -> Sign {
    Sign::parity(split_mult_places + infinite_places)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

pub(crate) fn check_quadratic_d(d: &BigInt) -> Result<()> {
    if d.is_one() {
        return Err(Error::InvalidArgument("d = 1 does not define a quadratic field".into()));
    }
    if !arith::is_squarefree(d)? {
        return Err(Error::NotSquarefree(d.clone()));
    }
    Ok(())
}

/// The discriminant of `Q(sqrt d)` for squarefree `d`.
pub(crate) fn quadratic_disc(d: &BigInt) -> BigInt {
    if arith::modp(d, &int(4)) == BigInt::one() {
        d.clone()
    } else {
        d * 4
    }
}

pub(crate) fn splitting_unchecked(p: &BigInt, d: &BigInt) -> Splitting {
    match kronecker(&quadratic_disc(d), p) {
        1 => Splitting::Split,
        -1 => Splitting::Inert,
        _ => Splitting::Ramified,
    }
}

/// How `p` decomposes in `Q(sqrt d)`.
pub fn splitting_in_quadratic(p: &BigInt, d: &BigInt) -> Result<Splitting> {
    if !arith::is_prime(p) {
        return Err(Error::NonPrimeModulus(p.clone()));
    }
    check_quadratic_d(d)?;
    Ok(splitting_unchecked(p, d))
}

/// `w(E/K)`: the infinite places contribute `-1` each, and places above a bad
/// prime are grouped by `(e, f)`.
pub fn base_change_root_number(model: &WeierstrassModel, field: &FieldDescriptor) -> Result<Sign> {
    base_change_root_number_with_hints(model, field, &[])
}

pub fn base_change_root_number_with_hints(model: &WeierstrassModel, field: &FieldDescriptor, hints: &[BigInt]) -> Result<Sign> {
    field.validate()?;
    if let FieldDescriptor::AssertedEverywhereGood { real, complex } = field {
        model.invariants()?;
        return Ok(root_number_infinite().pow(*real as u64 + *complex as u64));
    }
    let data = minimal_data(model, hints)?;
    let mut w = match field.infinite_places() {
        Some(u) => root_number_infinite().pow(u),
        None => match field.infinite_parity() {
            Some(Parity::Even) => Sign::Plus,
            Some(Parity::Odd) => Sign::Minus,
            None => return Err(Error::UnsupportedSplitting { p: int(0), reason: "infinite places unknown".into() }),
        },
    };
    for p in data.bad_primes() {
        let rep = places_above(p, field)?;
        match &rep.places {
            Some(places) => {
                let mut groups: Vec<(&localroot::ExtPlace, u64)> = Vec::new();
                for pl in places {
                    match groups.iter_mut().find(|(q, _)| q.e == pl.e && q.f == pl.f) {
                        Some(g) => g.1 += 1,
                        None => groups.push((pl, 1)),
                    }
                }
                for (pl, count) in groups {
                    w *= local_root_number_ext(&data.model, pl)?.pow(count);
                }
            }
            // all places above p are conjugate and share one root number
            None if rep.count_parity == Parity::Even => {}
            None => {
                return Err(Error::UnsupportedSplitting {
                    p: p.clone(),
                    reason: "odd number of places with unknown completions".into(),
                })
            }
        }
    }
    Ok(w)
}

/// `w(E_d/Q)`, the global root number of the quadratic twist by `d`.
pub fn quadratic_twist_root(model: &WeierstrassModel, d: &BigInt) -> Result<Sign> {
    quadratic_twist_root_with_hints(model, d, &[])
}

pub fn quadratic_twist_root_with_hints(model: &WeierstrassModel, d: &BigInt, hints: &[BigInt]) -> Result<Sign> {
    let t = quadratic_twist(model, d)?;
    // the twist's discriminant is 6^12 d^6 times that of the model
    let mut h: Vec<BigInt> = vec![int(2), int(3)];
    if !d.abs().is_one() {
        h.push(d.abs());
    }
    h.extend_from_slice(hints);
    global_root_number_with_hints(&t, &h)
}

/// `w(E/Q(m^(1/p^n))) = w(E/Q) (-1)^(n((p-1)/2 + t))` for semistable `E` good at
/// the odd prime `p`, where `t` counts the multiplicative primes not dividing `m`
/// that are non-squares mod `p`.
pub fn tower_root_number(model: &WeierstrassModel, p: u32, n: u32, m: &BigInt) -> Result<Sign> {
    tower_root_number_with_hints(model, p, n, m, &[])
}

pub fn tower_root_number_with_hints(model: &WeierstrassModel, p: u32, n: u32, m: &BigInt, hints: &[BigInt]) -> Result<Sign> {
    let pb = int(p as i64);
    if p == 2 || !arith::is_prime(&pb) {
        return Err(Error::InvalidArgument(format!("tower needs an odd prime, got {p}")));
    }
    if m <= &BigInt::one() {
        return Err(Error::InvalidArgument("m must exceed 1".into()));
    }
    if !arith::is_pth_power_free(m, p)? {
        return Err(Error::NotPowerFree { m: m.clone(), p });
    }
    let data = minimal_data(model, hints)?;
    let mut t = 0u64;
    for loc in &data.locals {
        if loc.class.is_additive() {
            return Err(Error::NotSemistable(loc.p.clone()));
        }
        if loc.p == pb {
            return Err(Error::BadReductionAtP(pb));
        }
        if !m.is_multiple_of(&loc.p) && arith::jacobi(&loc.p, &pb) < 0 {
            t += 1;
        }
    }
    let w = global_from_data(&data)?;
    Ok(w * Sign::parity(n as u64 * ((p as u64 - 1) / 2 + t)))
}
