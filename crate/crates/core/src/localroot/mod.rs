//! Local root numbers `w(E/K_v)` for curves over Q, at places of Q and at places
//! of extensions described by ramification and residue degree.

mod q2;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, hilbert_finite, int, legendre, residue_symbol_ext, val_rat, Rational, Sign, Valuation};
use crate::curve::{kodaira_type, minimal_model_at, KodairaType, LocalReduction, ReductionClass, WeierstrassModel};
use crate::error::{Error, Result};

pub use q2::{c_triple, lookup_q2, q2_matches, q2_table, root_number_2, CTriple, Q2Row, TwoAdicData};

/// A place of a number field above `p`, recorded by ramification index and residue degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtPlace {
    #[serde(serialize_with = "crate::serde_util::bigint", deserialize_with = "crate::serde_util::de_bigint")]
    pub p: BigInt,
    pub e: u32,
    pub f: u32,
}

impl ExtPlace {
    pub fn new(p: BigInt, e: u32, f: u32) -> ExtPlace {
        debug_assert!(e >= 1 && f >= 1);
        ExtPlace { p, e, f }
    }
}

/// `w(E/R) = w(E/C) = -1`.
pub fn root_number_infinite() -> Sign {
    Sign::Minus
}

/// `w(E/Q_2)` for additive, potentially multiplicative reduction, by the sign of `c6'` mod 4.
pub fn pot_mult_rule_2(model: &WeierstrassModel) -> Result<Sign> {
    let d = q2::two_adic_data(model)?;
    match d.c6_odd() {
        // c6 = 0 forces j = 1728, which is integral
        None => Err(Error::InvalidArgument("c6 = 0 cannot be potentially multiplicative".into())),
        Some(u) => Ok(if u % 4 == 1 { Sign::Minus } else { Sign::Plus }),
    }
}

fn check_prime(p: &BigInt) -> Result<()> {
    if arith::is_prime(p) {
        Ok(())
    } else {
        Err(Error::NonPrimeModulus(p.clone()))
    }
}

fn pot_good_large(v_disc: i64, q: &BigInt) -> Sign {
    // (-1)^floor(v * q / 12)
    let k: BigInt = (BigInt::from(v_disc) * q) / 12u32;
    Sign::from_bool_minus(k.bit(0))
}

pub(crate) fn from_reduction(model: &WeierstrassModel, loc: &LocalReduction) -> Result<Sign> {
    let p = &loc.p;
    Ok(match loc.class {
        ReductionClass::Good => Sign::Plus,
        ReductionClass::SplitMult => Sign::Minus,
        ReductionClass::NonsplitMult => Sign::Plus,
        ReductionClass::AdditivePotMult => residue_symbol_ext(&int(-1), p, 1)?,
        ReductionClass::AdditivePotGood => {
            if p == &int(3) {
                kobayashi_at_3(model, loc)?
            } else {
                pot_good_large(loc.v_disc_min.finite().unwrap(), p)
            }
        }
    })
}

/// `w(E/Q_p)`.
pub fn local_root_number(model: &WeierstrassModel, p: &BigInt) -> Result<Sign> {
    check_prime(p)?;
    if p == &int(2) {
        return root_number_2(model);
    }
    let loc = kodaira_type(model, p)?;
    from_reduction(model, &loc)
}

/// `w(E/Q_3)` for additive, potentially good reduction.
pub fn kobayashi_root(model: &WeierstrassModel) -> Result<Sign> {
    let loc = kodaira_type(model, &int(3))?;
    if loc.class != ReductionClass::AdditivePotGood {
        return Err(Error::InvalidArgument(format!(
            "reduction at 3 is {}, not additive potentially good",
            loc.class.name()
        )));
    }
    kobayashi_at_3(model, &loc)
}

const KOBAYASHI_MAX_K: u32 = 12;

fn kobayashi_at_3(model: &WeierstrassModel, loc: &LocalReduction) -> Result<Sign> {
    let three = int(3);
    match loc.kodaira {
        KodairaType::I0Star => return residue_symbol_ext(&int(-1), &three, 1),
        KodairaType::III | KodairaType::IIIStar => return residue_symbol_ext(&int(-2), &three, 1),
        _ => {}
    }
    let (mm, _) = minimal_model_at(model, &three)?;
    let inv = mm.invariants()?;
    // y^2 = x^3 + a x^2 + b x + c after completing the square; 2 is a 3-adic unit.
    let a = &inv.b2 / Rational::from_integer(int(4));
    let b = &inv.b4 / Rational::from_integer(int(2));
    let c = &inv.b6 / Rational::from_integer(int(4));
    let disc = &inv.disc;
    let limit = 3u64.pow(KOBAYASHI_MAX_K);
    for r in 0..limit {
        let r = Rational::from_integer(BigInt::from(r));
        let cr = ((&r + &a) * &r + &b) * &r + &c;
        if cr.is_zero() {
            continue;
        }
        let Valuation::Finite(vc) = val_rat(&cr, &three) else { unreachable!() };
        if vc % 3 == 0 {
            continue;
        }
        return Ok(kobayashi_formula(disc, &cr, vc));
    }
    Err(Error::ModelSearchExhausted)
}

/// `delta * (D, c)_3 * (v(c)/3)^v(D) * (-1/3)^(v(D)(v(D)-1)/2)`.
fn kobayashi_formula(disc: &Rational, c: &Rational, vc: i64) -> Sign {
    let three = int(3);
    let vd = val_rat(disc, &three).finite().unwrap();
    let u = arith::unit_part_unchecked(disc, &three);
    let u_res = arith::unit_residue(&u, &three);
    let delta = Sign::from_bool_minus(vd % 2 != 0 || !u_res.is_one());
    let hilb = hilbert_finite(disc, c, &three);
    let vc_sym = Sign::from_bool_minus(vc.rem_euclid(3) == 2);
    let minus_one = Sign::Minus; // (-1/3)
    delta * hilb * vc_sym.pow(vd as u64) * minus_one.pow((vd * (vd - 1) / 2) as u64)
}

fn unsupported(place: &ExtPlace, reason: &str) -> Error {
    Error::UnsupportedLocalCase { p: place.p.clone(), e: place.e, f: place.f, reason: reason.into() }
}

/// `w(E/K_v)` where `K_v` has ramification index `e` and residue degree `f` over `Q_p`.
pub fn local_root_number_ext(model: &WeierstrassModel, place: &ExtPlace) -> Result<Sign> {
    check_prime(&place.p)?;
    if place.e == 0 || place.f == 0 {
        return Err(Error::InvalidArgument("e and f must be at least 1".into()));
    }
    if place.e == 1 && place.f == 1 {
        return local_root_number(model, &place.p);
    }
    let p = &place.p;
    let loc = kodaira_type(model, p)?;
    match loc.class {
        ReductionClass::Good => Ok(Sign::Plus),
        ReductionClass::SplitMult => Ok(Sign::Minus),
        // the node's tangents become rational over the quadratic residue extension
        ReductionClass::NonsplitMult => Ok(Sign::from_bool_minus(place.f.is_multiple_of(2))),
        ReductionClass::AdditivePotGood => {
            if p <= &int(3) {
                return Err(unsupported(place, "additive reduction in residue characteristic 2 or 3"));
            }
            let v = (place.e as i64 * loc.v_disc_min.finite().unwrap()).rem_euclid(12);
            Ok(pot_good_large(v, &arith::pow_int(p, place.f as u64)))
        }
        ReductionClass::AdditivePotMult => {
            if p == &int(2) {
                return Err(unsupported(place, "additive reduction in residue characteristic 2"));
            }
            if place.e.is_multiple_of(2) {
                return Err(unsupported(place, "potentially multiplicative reduction with even ramification"));
            }
            residue_symbol_ext(&int(-1), p, place.f)
        }
    }
}

/// The Kodaira-type formulas for `p >= 5` on `y^2 = x^3 + a x + b`; used as a cross-check.
pub fn root_number_by_type(model: &WeierstrassModel, p: &BigInt) -> Result<Sign> {
    if p < &int(5) {
        return Err(Error::InvalidArgument("type formulas need p >= 5".into()));
    }
    check_prime(p)?;
    let loc = kodaira_type(model, p)?;
    let sym = |a: i64| residue_symbol_ext(&int(a), p, 1);
    match loc.kodaira {
        KodairaType::I0 => Ok(Sign::Plus),
        KodairaType::II | KodairaType::IIStar | KodairaType::InStar(_) | KodairaType::I0Star => sym(-1),
        KodairaType::III | KodairaType::IIIStar => sym(-2),
        KodairaType::IV | KodairaType::IVStar => sym(-3),
        KodairaType::In(_) => {
            let (mm, _) = minimal_model_at(model, p)?;
            let inv = mm.invariants()?;
            // short model y^2 = x^3 - 27 c4 x - 54 c6; 6b differs from 6 * (-54 c6) by a unit square
            let b = -(inv.c6.to_integer()) * 54;
            let l = legendre(&(b * 6), p)?;
            Ok(Sign::from_bool_minus(l > 0))
        }
    }
}
