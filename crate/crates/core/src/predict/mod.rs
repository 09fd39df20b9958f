//! Parity predictions: congruent numbers, fibre families, representability by
//! cubics, even-rank fields, growth over `Q(zeta_8)`, fake CM and the
//! minimalist conjecture for twists.
//!
//! Anything that follows only under the parity conjecture is returned with
//! `conditional: true`. Nothing here claims an unconditional rank.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, int, kronecker, Rational, Sign};
use crate::artin::{DetOrder, GroupTable};
use crate::curve::{congruent_curve, cubic_to_weierstrass, reduction_class, ReductionClass, WeierstrassModel};
use crate::error::{Error, Result};
use crate::globalroot::{
    self, base_change_root_number_with_hints, find_d0_with_hints, global_root_number_with_hints, places_above,
    quadratic_twist_root_with_hints, FieldDescriptor, Parity,
};

const CONGRUENT_CAVEAT: &str =
    "w = +1: parity predicts even rank, which is consistent with rank 0 and does not show n is non-congruent";

fn check_positive_squarefree(n: &BigInt) -> Result<()> {
    if !n.is_positive() || !arith::is_pth_power_free(n, 2)? {
        return Err(Error::NotSquarefree(n.clone()));
    }
    Ok(())
}

/// `w(E_n/Q)` for `E_n: y^2 = x^3 - n^2 x`: `+1` for `n = 1, 2, 3 (mod 8)`, `-1` for `5, 6, 7`.
pub fn congruent_root(n: &BigInt) -> Result<Sign> {
    check_positive_squarefree(n)?;
    let r = arith::modp(n, &int(8));
    Ok(Sign::from_bool_minus(r >= int(5)))
}

/// `congruent_root`, also recomputed from the local root numbers of `E_n`.
pub fn congruent_root_verified(n: &BigInt) -> Result<Sign> {
    let table = congruent_root(n)?;
    let engine = global_root_number_with_hints(&congruent_curve(n)?, &[int(2), n.clone()])?;
    if table != engine {
        return Err(Error::InvalidArgument(format!("n = {n}: table gives {table}, local product gives {engine}")));
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruentVerdict {
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub n: BigInt,
    /// The squarefree part of `n`, which has the same twist class.
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub squarefree_part: BigInt,
    pub root_number: Sign,
    pub predicted_congruent: bool,
    pub conditional: bool,
    pub caveat: Option<String>,
}

pub fn predicted_congruent(n: &BigInt) -> Result<CongruentVerdict> {
    if !n.is_positive() {
        return Err(Error::InvalidArgument(format!("n = {n} must be positive")));
    }
    let sf = arith::squarefree_part(n)?;
    let w = congruent_root(&sf)?;
    Ok(CongruentVerdict {
        n: n.clone(),
        squarefree_part: sf,
        root_number: w,
        predicted_congruent: w == Sign::Minus,
        conditional: true,
        caveat: (w == Sign::Plus).then(|| CONGRUENT_CAVEAT.to_string()),
    })
}

/// The fibre at `t = l/m` of `y^2 = x(x^2 - 49(1 + t^4)^2)` is `E_n` with
/// `n = 7 l^4 + 7 m^4`. Returns `w(E_n'/Q)` for the squarefree part `n'`.
pub fn cassels_fiber_root(l: &BigInt, m: &BigInt) -> Result<Sign> {
    if (l.is_zero() && m.is_zero()) || !l.gcd(m).is_one() {
        return Err(Error::InvalidArgument(format!("need coprime (l, m), got ({l}, {m})")));
    }
    let n = (num_traits::pow(l.clone(), 4) + num_traits::pow(m.clone(), 4)) * 7;
    let sf = arith::squarefree_part(&n)?;
    global_root_number_with_hints(&congruent_curve(&sf)?, &[int(2), int(7), sf.clone()])
}

/// `y^2 = x^3 + t x^2 - (t + 3) x + 1`.
pub fn washington_fiber(t: &BigInt) -> Result<WeierstrassModel> {
    WeierstrassModel::from_bigints([BigInt::zero(), t.clone(), BigInt::zero(), -(t + BigInt::from(3)), BigInt::one()])
}

pub fn washington_fiber_root(t: &BigInt) -> Result<Sign> {
    let model = washington_fiber(t)?;
    // the discriminant is 16 (t^2 + 3t + 9)^2
    let q: BigInt = t * t + t * 3 + 9;
    global_root_number_with_hints(&model, &[int(2), q])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyScanReport {
    pub family: String,
    pub fibres: u64,
    pub minus: u64,
    pub plus: u64,
    /// Parameters whose fibre has root number `+1`.
    pub exceptions: Vec<String>,
}

impl FamilyScanReport {
    fn collect(family: &str, results: Vec<(String, Sign)>) -> FamilyScanReport {
        let exceptions: Vec<String> = results.iter().filter(|(_, w)| *w == Sign::Plus).map(|(t, _)| t.clone()).collect();
        FamilyScanReport {
            family: family.to_string(),
            fibres: results.len() as u64,
            minus: (results.len() - exceptions.len()) as u64,
            plus: exceptions.len() as u64,
            exceptions,
        }
    }
}

/// All coprime `(l, m)` with `|l|, |m| <= bound`.
pub fn cassels_scan(bound: u64) -> Result<FamilyScanReport> {
    let b = bound as i64;
    let pairs: Vec<(i64, i64)> = (-b..=b)
        .flat_map(|l| (-b..=b).map(move |m| (l, m)))
        .filter(|&(l, m)| l.gcd(&m) == 1)
        .collect();
    let results = pairs
        .par_iter()
        .map(|&(l, m)| Ok((format!("{l}/{m}"), cassels_fiber_root(&int(l), &int(m))?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FamilyScanReport::collect("cassels", results))
}

/// Integers `lo <= t <= hi`.
pub fn washington_scan(lo: i64, hi: i64) -> Result<FamilyScanReport> {
    let ts: Vec<i64> = (lo..=hi).collect();
    let results = ts
        .par_iter()
        .map(|&t| Ok((t.to_string(), washington_fiber_root(&int(t))?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FamilyScanReport::collect("washington", results))
}

/// `a x^3 + b x^2 + c x + e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cubic(pub [Rational; 4]);

impl Cubic {
    pub fn from_ints(c: [i64; 4]) -> Cubic {
        Cubic(c.map(|x| Rational::from_integer(int(x))))
    }

    /// The curve `y^2 = f(x)`.
    pub fn curve(&self) -> Result<WeierstrassModel> {
        let [a, b, c, e] = &self.0;
        cubic_to_weierstrass(a, b, c, e)
    }

    pub fn scale(&self, k: &BigInt) -> Cubic {
        let k = Rational::from_integer(k.clone());
        Cubic(self.0.clone().map(|x| x * &k))
    }
}

impl std::fmt::Display for Cubic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for Cubic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::str::FromStr for Cubic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Cubic> {
        let bad = || Error::ParseError { line: 1, msg: format!("expected [a,b,c,e], got {s:?}") };
        let body = s.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
        let coeffs: Vec<Rational> = body
            .split(',')
            .map(|t| t.trim().parse::<Rational>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let arr: [Rational; 4] = coeffs.try_into().map_err(|_| bad())?;
        Ok(Cubic(arr))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlipSample {
    pub d: i64,
    pub w_f: Sign,
    pub w_g: Sign,
    /// The cubic predicted to represent `d`: one whose twist has root number -1.
    pub represented_by: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlipReport {
    pub f: Cubic,
    pub g: Cubic,
    pub samples: Vec<FlipSample>,
    /// `w(E_d) = -w(E'_d)` on every sample.
    pub always_flipped: bool,
    pub conditional: bool,
}

/// Root numbers of the twists by each `d` of `y^2 = f(x)` and `y^2 = g(x)`.
pub fn twist_flip_report(f: &Cubic, g: &Cubic, ds: &[i64]) -> Result<FlipReport> {
    let (ef, eg) = (f.curve()?, g.curve()?);
    let hf: Vec<BigInt> = globalroot::minimal_data(&ef, &[])?.bad_primes().cloned().collect();
    let hg: Vec<BigInt> = globalroot::minimal_data(&eg, &[])?.bad_primes().cloned().collect();
    let samples = ds
        .par_iter()
        .map(|&d| {
            let w_f = quadratic_twist_root_with_hints(&ef, &int(d), &hf)?;
            let w_g = quadratic_twist_root_with_hints(&eg, &int(d), &hg)?;
            let represented_by = match (w_f, w_g) {
                (Sign::Minus, _) => Some("f"),
                (_, Sign::Minus) => Some("g"),
                _ => None,
            };
            Ok(FlipSample { d, w_f, w_g, represented_by })
        })
        .collect::<Result<Vec<_>>>()?;
    let always_flipped = samples.iter().all(|s| s.w_f == -s.w_g);
    Ok(FlipReport { f: f.clone(), g: g.clone(), samples, always_flipped, conditional: true })
}

/// Squarefree `d` with `|d| <= 30`, both signs, in increasing `|d|`.
pub fn default_twist_sample() -> Vec<i64> {
    (1..=30i64)
        .filter(|&d| arith::is_squarefree(&int(d)).unwrap_or(false))
        .flat_map(|d| [d, -d])
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartnerReport {
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub d0: BigInt,
    pub flips: FlipReport,
}

/// `g = d0 f`, where every bad prime of `y^2 = f(x)` splits in `Q(sqrt d0)`, so
/// that `w(E_(d d0)) = -w(E_d)` for every `d`.
pub fn representability_partner(f: &Cubic, ds: &[i64]) -> Result<PartnerReport> {
    let d0 = find_d0_with_hints(&f.curve()?, &[])?;
    let g = f.scale(&d0);
    Ok(PartnerReport { flips: twist_flip_report(f, &g, ds)?, d0 })
}

/// Whether every place of Q splits into an even number of places of the field,
/// which makes `w(E/K) = +1` for every `E/Q`.
pub fn even_rank_field(field: &FieldDescriptor) -> Result<bool> {
    field.validate()?;
    let unsupported = |reason: &str| Error::UnsupportedSplitting { p: int(0), reason: reason.to_string() };
    match field {
        FieldDescriptor::Biquadratic(d1, d2) => {
            // unramified primes have cyclic decomposition groups, hence two or four places
            let mut primes: Vec<BigInt> = vec![int(2)];
            for d in [d1, d2] {
                primes.extend(arith::factorize(&d.abs())?.primes().cloned());
            }
            primes.sort();
            primes.dedup();
            for p in &primes {
                if places_above(p, field)?.count_parity == Parity::Odd {
                    return Ok(false);
                }
            }
            Ok(field.infinite_parity() == Some(Parity::Even))
        }
        // decomposition groups have order at most 8 inside (C_2)^d
        FieldDescriptor::ElemAbelian2(d) if *d >= 4 => Ok(true),
        FieldDescriptor::ElemAbelian2(_) => Err(unsupported("(C_2)^d with d < 4 depends on the field")),
        // each has a prime with a single place above it
        FieldDescriptor::Quadratic(_) | FieldDescriptor::Zeta8 | FieldDescriptor::PureRadical { .. } => Ok(false),
        FieldDescriptor::AssertedEverywhereGood { .. } => Err(unsupported("no splitting data for an asserted field")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Applicability {
    Applicable,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Zeta8Report {
    pub status: Applicability,
    pub class_at_2: ReductionClass,
    /// `w(E/Q(zeta_8))` when 2 is split multiplicative.
    pub root_number: Option<Sign>,
    /// The model is `y^2 + xy = x^3 + Ax + B` with integers `A = B (mod 2)`.
    pub in_family: bool,
    pub conditional: bool,
}

fn in_zeta8_family(model: &WeierstrassModel) -> bool {
    let one = Rational::one();
    let zero = Rational::zero();
    model.a1 == one
        && model.a2 == zero
        && model.a3 == zero
        && model.a4.is_integer()
        && model.a6.is_integer()
        && (model.a4.to_integer() - model.a6.to_integer()).is_even()
}

pub fn zeta8_growth(model: &WeierstrassModel) -> Result<Zeta8Report> {
    let class = reduction_class(model, &int(2))?;
    let applicable = class == ReductionClass::SplitMult;
    let root_number = if applicable {
        Some(base_change_root_number_with_hints(model, &FieldDescriptor::Zeta8, &[int(2)])?)
    } else {
        None
    };
    Ok(Zeta8Report {
        status: if applicable { Applicability::Applicable } else { Applicability::NotApplicable },
        class_at_2: class,
        root_number,
        in_family: in_zeta8_family(model),
        conditional: true,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FakeCmPrediction {
    /// Every quadratic twist over K has this root number.
    pub twist_root: Sign,
    pub even_degree_root: Sign,
    pub odd_degree_root: Sign,
    pub summary: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FakeCmReport {
    pub j_integral: bool,
    pub no_real_places: bool,
    pub abelian_good_reduction: bool,
    /// All quadratic twists over K share one root number.
    pub constant_twist_root: bool,
    pub prediction: Option<FakeCmPrediction>,
    pub conditional: bool,
}

/// Combines the computed necessary condition (integral `j`) with the caller's
/// attestations about K. With `w(E/K)` supplied, `w(E/F) = w(E/K)^[F:K]`.
pub fn fakecm_classify(
    model: &WeierstrassModel,
    no_real_places: bool,
    abelian_good_reduction: bool,
    w_k: Option<Sign>,
) -> Result<FakeCmReport> {
    let j = model.j_invariant()?;
    if !j.is_integer() {
        let p = arith::factorize(j.denom())?.primes().next().cloned().expect("denominator > 1");
        return Err(Error::NotPotentiallyGood(p));
    }
    let constant = no_real_places && abelian_good_reduction;
    let prediction = match (constant, w_k) {
        (true, Some(w)) => Some(FakeCmPrediction {
            twist_root: w,
            even_degree_root: Sign::Plus,
            odd_degree_root: w,
            summary: if w == Sign::Plus {
                "even rank over every extension of K"
            } else {
                "odd rank for every quadratic twist over K; rank grows in every even-degree extension"
            },
        }),
        _ => None,
    };
    Ok(FakeCmReport {
        j_integral: true,
        no_real_places,
        abelian_good_reduction,
        constant_twist_root: constant,
        prediction,
        conditional: true,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalistPrediction {
    pub irreps: Vec<String>,
    pub rank: u64,
    pub conditional: bool,
}

impl MinimalistPrediction {
    fn new(table: &GroupTable, names: &[&str]) -> MinimalistPrediction {
        let rank = names
            .iter()
            .map(|n| table.irreps[table.index_of(n).expect("irrep in table")].dim)
            .sum();
        MinimalistPrediction { irreps: names.iter().map(|s| s.to_string()).collect(), rank, conditional: true }
    }
}

/// `E(F) (x) C = W_G` if `w(E/Q) = -1` and `0` otherwise, where `W_G` is the sum
/// of the odd-dimensional self-dual irreducibles of a group with no quadratic characters.
pub fn minimalist_wg(table: &GroupTable, w_q: Sign) -> Result<MinimalistPrediction> {
    if !table.complete {
        return Err(Error::UnsupportedGroup(format!("{} is tabulated by count only", table.id)));
    }
    if table.irreps.iter().any(|r| r.dim == 1 && r.det_order == DetOrder::Two) {
        return Err(Error::QuadraticSubfieldPresent);
    }
    if w_q == Sign::Plus {
        return Ok(MinimalistPrediction::new(table, &[]));
    }
    let names: Vec<&str> = table
        .irreps
        .iter()
        .filter(|r| r.self_dual && r.dim % 2 == 1)
        .map(|r| r.name.as_str())
        .collect();
    Ok(MinimalistPrediction::new(table, &names))
}

/// The four-case prediction over the `D_10` field of discriminant `-3^5 5^13`,
/// keyed by `(-15 / N_E)` and `w(E/Q)`.
pub fn minimalist_d10(n_e: &BigInt, w_q: Sign) -> Result<MinimalistPrediction> {
    if !n_e.is_positive() {
        return Err(Error::InvalidArgument(format!("N_E = {n_e} must be positive")));
    }
    let r = arith::modp(n_e, &int(15));
    if !r.gcd(&int(15)).is_one() {
        return Err(Error::BadResidue(i64::try_from(r).expect("residue below 15")));
    }
    let table = crate::artin::group_table(crate::artin::GroupId::Dihedral(10))?;
    let names: &[&str] = match (kronecker(&int(-15), n_e), w_q) {
        (1, Sign::Plus) => &["eps", "rho1", "rho2"],
        (1, Sign::Minus) => &["1", "rho1", "rho2"],
        (_, Sign::Plus) => &[],
        (_, Sign::Minus) => &["1", "eps"],
    };
    Ok(MinimalistPrediction::new(&table, names))
}

/// `(N_E mod 8|Delta_F|, w(E/Q))`, on which every minimalist prediction for `F` depends.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GalmodKey {
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub modulus: BigInt,
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub residue: BigInt,
    pub w: Sign,
}

pub fn galmod_key(n_e: &BigInt, delta_f: &BigInt, w_q: Sign) -> Result<GalmodKey> {
    if delta_f.is_zero() {
        return Err(Error::InvalidArgument("Delta_F must be nonzero".into()));
    }
    if !n_e.gcd(&(delta_f * 2)).is_one() {
        return Err(Error::CoprimalityViolated);
    }
    let modulus = delta_f.abs() * 8;
    Ok(GalmodKey { residue: arith::modp(n_e, &modulus), modulus, w: w_q })
}

#[cfg(test)]
mod tests;
