//! Weierstrass models, invariants, coordinate changes, Tate's algorithm and twisting.

pub(crate) mod tate;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{self, factorize, rat, val_int, val_rat, Rational, Valuation};
use crate::error::{Error, Result};
use tate::{tate, IntModel};

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over Q.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeierstrassModel {
    pub a1: Rational,
    pub a2: Rational,
    pub a3: Rational,
    pub a4: Rational,
    pub a6: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariants {
    pub b2: Rational,
    pub b4: Rational,
    pub b6: Rational,
    pub b8: Rational,
    pub c4: Rational,
    pub c6: Rational,
    pub disc: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KodairaType {
    I0,
    In(u32),
    II,
    III,
    IV,
    I0Star,
    InStar(u32),
    IIStar,
    IIIStar,
    IVStar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ReductionClass {
    Good,
    SplitMult,
    NonsplitMult,
    AdditivePotGood,
    AdditivePotMult,
}

impl ReductionClass {
    pub fn is_additive(self) -> bool {
        matches!(self, ReductionClass::AdditivePotGood | ReductionClass::AdditivePotMult)
    }

    pub fn is_multiplicative(self) -> bool {
        matches!(self, ReductionClass::SplitMult | ReductionClass::NonsplitMult)
    }

    pub fn name(self) -> &'static str {
        match self {
            ReductionClass::Good => "GOOD",
            ReductionClass::SplitMult => "SPLIT_MULT",
            ReductionClass::NonsplitMult => "NONSPLIT_MULT",
            ReductionClass::AdditivePotGood => "ADDITIVE_POT_GOOD",
            ReductionClass::AdditivePotMult => "ADDITIVE_POT_MULT",
        }
    }
}

/// Reduction data at one prime, read off a p-minimal model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalReduction {
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub p: BigInt,
    pub kodaira: KodairaType,
    pub class: ReductionClass,
    pub v_disc_min: Valuation,
    pub v_c4: Valuation,
    pub v_c6: Valuation,
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I0 => write!(f, "I0"),
            KodairaType::In(n) => write!(f, "I{n}"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::I0Star => write!(f, "I0*"),
            KodairaType::InStar(n) => write!(f, "I{n}*"),
            KodairaType::IIStar => write!(f, "II*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IVStar => write!(f, "IV*"),
        }
    }
}

impl FromStr for KodairaType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseError { line: 1, msg: format!("bad Kodaira symbol {s:?}") };
        Ok(match s {
            "I0" => KodairaType::I0,
            "II" => KodairaType::II,
            "III" => KodairaType::III,
            "IV" => KodairaType::IV,
            "I0*" => KodairaType::I0Star,
            "II*" => KodairaType::IIStar,
            "III*" => KodairaType::IIIStar,
            "IV*" => KodairaType::IVStar,
            _ => {
                let body = s.strip_prefix('I').ok_or_else(bad)?;
                if let Some(n) = body.strip_suffix('*') {
                    KodairaType::InStar(n.parse().map_err(|_| bad())?)
                } else {
                    KodairaType::In(body.parse().map_err(|_| bad())?)
                }
            }
        })
    }
}

impl Serialize for KodairaType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for KodairaType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl WeierstrassModel {
    /// Builds a model, rejecting singular ones.
    pub fn new(a1: Rational, a2: Rational, a3: Rational, a4: Rational, a6: Rational) -> Result<Self> {
        let m = WeierstrassModel { a1, a2, a3, a4, a6 };
        m.invariants()?;
        Ok(m)
    }

    pub fn from_ints(a: [i64; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a.map(rat);
        WeierstrassModel::new(a1, a2, a3, a4, a6)
    }

    pub fn from_bigints(a: [BigInt; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a.map(Rational::from_integer);
        WeierstrassModel::new(a1, a2, a3, a4, a6)
    }

    /// `y^2 = x^3 + a x + b`.
    pub fn short(a: Rational, b: Rational) -> Result<Self> {
        WeierstrassModel::new(Rational::zero(), Rational::zero(), Rational::zero(), a, b)
    }

    pub fn coefficients(&self) -> [&Rational; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn is_integral(&self) -> bool {
        self.coefficients().iter().all(|c| c.is_integer())
    }

    pub fn invariants(&self) -> Result<Invariants> {
        let inv = raw_invariants(self);
        if inv.disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(inv)
    }

    pub fn discriminant(&self) -> Rational {
        raw_invariants(self).disc
    }

    pub fn j_invariant(&self) -> Result<Rational> {
        let inv = self.invariants()?;
        Ok(&inv.c4 * &inv.c4 * &inv.c4 / &inv.disc)
    }

    pub(crate) fn int_model(&self) -> IntModel {
        debug_assert!(self.is_integral());
        IntModel(self.coefficients().map(|c| c.to_integer()))
    }

    pub(crate) fn from_int_model(m: &IntModel) -> WeierstrassModel {
        let [a1, a2, a3, a4, a6] = m.0.clone().map(Rational::from_integer);
        WeierstrassModel { a1, a2, a3, a4, a6 }
    }
}

fn raw_invariants(m: &WeierstrassModel) -> Invariants {
    let WeierstrassModel { a1, a2, a3, a4, a6 } = m;
    let two = rat(2);
    let four = rat(4);
    let b2 = a1 * a1 + &four * a2;
    let b4 = a1 * a3 + &two * a4;
    let b6 = a3 * a3 + &four * a6;
    let b8 = a1 * a1 * a6 + &four * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    let c4 = &b2 * &b2 - rat(24) * &b4;
    let c6 = -(&b2 * &b2 * &b2) + rat(36) * &b2 * &b4 - rat(216) * &b6;
    let disc = -(&b2 * &b2 * &b8) - rat(8) * &b4 * &b4 * &b4 - rat(27) * &b6 * &b6 + rat(9) * &b2 * &b4 * &b6;
    Invariants { b2, b4, b6, b8, c4, c6, disc }
}

pub fn invariants(model: &WeierstrassModel) -> Result<Invariants> {
    model.invariants()
}

/// The change of variables `x = u^2 x' + r`, `y = u^3 y' + s u^2 x' + t`.
pub fn transform(model: &WeierstrassModel, u: &Rational, r: &Rational, s: &Rational, t: &Rational) -> Result<WeierstrassModel> {
    if u.is_zero() {
        return Err(Error::ZeroScaling);
    }
    let WeierstrassModel { a1, a2, a3, a4, a6 } = model;
    let two = rat(2);
    let three = rat(3);
    let u2 = u * u;
    let u3 = &u2 * u;
    let u4 = &u2 * &u2;
    let u6 = &u3 * &u3;
    let n1 = (a1 + &two * s) / u;
    let n2 = (a2 - s * a1 + &three * r - s * s) / &u2;
    let n3 = (a3 + r * a1 + &two * t) / &u3;
    let n4 = (a4 - s * a3 + &two * r * a2 - (t + r * s) * a1 + &three * r * r - &two * s * t) / &u4;
    let n6 = (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) / &u6;
    Ok(WeierstrassModel { a1: n1, a2: n2, a3: n3, a4: n4, a6: n6 })
}

/// An integral model obtained by a `u = 1/D` scaling with `D` as small as possible.
pub fn integral_model(model: &WeierstrassModel) -> WeierstrassModel {
    let den = model.coefficients().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    if den.is_one() {
        return model.clone();
    }
    let mut d = BigInt::one();
    for pp in factorize(&den).expect("denominators factor").factors {
        let p = &pp.p;
        let weights = [1i64, 2, 3, 4, 6];
        let mut k = 0i64;
        for (c, w) in model.coefficients().iter().zip(weights) {
            if let Valuation::Finite(v) = val_rat(c, p) {
                if v < 0 {
                    k = k.max((-v + w - 1) / w);
                }
            }
        }
        d *= arith::pow_int(p, k as u64);
    }
    let u = Rational::new(BigInt::one(), d);
    let z = Rational::zero();
    transform(model, &u, &z, &z, &z).expect("nonzero scaling")
}

fn local_from_tate(res: &tate::TateResult, p: &BigInt) -> LocalReduction {
    let inv = res.model.invariants();
    let v = |x: &BigInt| if x.is_zero() { Valuation::Infinity } else { Valuation::Finite(val_int(x, p) as i64) };
    let v_c4 = v(&inv.c4);
    let v_disc_min = Valuation::Finite(res.v_disc as i64);
    let class = match res.kodaira {
        KodairaType::I0 => ReductionClass::Good,
        KodairaType::In(_) => {
            if res.split == Some(true) {
                ReductionClass::SplitMult
            } else {
                ReductionClass::NonsplitMult
            }
        }
        _ => {
            // v(j) = 3 v(c4) - v(disc)
            let pot_mult = match v_c4 {
                Valuation::Finite(a) => 3 * a < res.v_disc as i64,
                Valuation::Infinity => false,
            };
            if pot_mult {
                ReductionClass::AdditivePotMult
            } else {
                ReductionClass::AdditivePotGood
            }
        }
    };
    LocalReduction { p: p.clone(), kodaira: res.kodaira, class, v_disc_min, v_c4, v_c6: v(&inv.c6) }
}

/// A model minimal at `p` (integral everywhere) together with the reduction data at `p`.
pub fn minimal_model_at(model: &WeierstrassModel, p: &BigInt) -> Result<(WeierstrassModel, LocalReduction)> {
    if !arith::is_prime(p) {
        return Err(Error::NonPrimeModulus(p.clone()));
    }
    model.invariants()?;
    let im = integral_model(model);
    let res = tate(&im.int_model(), p);
    let local = local_from_tate(&res, p);
    Ok((WeierstrassModel::from_int_model(&res.model), local))
}

pub fn kodaira_type(model: &WeierstrassModel, p: &BigInt) -> Result<LocalReduction> {
    Ok(minimal_model_at(model, p)?.1)
}

pub fn reduction_class(model: &WeierstrassModel, p: &BigInt) -> Result<ReductionClass> {
    Ok(kodaira_type(model, p)?.class)
}

/// A global minimal model with reduced `a1, a2, a3`, given a set of primes that
/// contains every prime dividing the discriminant of the integral model.
pub(crate) fn minimal_model_with_support(model: &WeierstrassModel, support: &[BigInt]) -> (WeierstrassModel, Vec<LocalReduction>) {
    let mut im = integral_model(model).int_model();
    let mut locals = Vec::new();
    for p in support {
        if (im.invariants().disc % p).is_zero() {
            let res = tate(&im, p);
            im = res.model.clone();
            locals.push(local_from_tate(&res, p));
        }
    }
    (WeierstrassModel::from_int_model(&tate::normalize(&im)), locals)
}

/// The global minimal model, with `a1, a3` in {0, 1} and `a2` in {-1, 0, 1}.
pub fn global_minimal_model(model: &WeierstrassModel) -> Result<WeierstrassModel> {
    model.invariants()?;
    let im = integral_model(model);
    let disc = im.discriminant().to_integer();
    let primes: Vec<BigInt> = factorize(&disc)?.primes().cloned().collect();
    Ok(minimal_model_with_support(&im, &primes).0)
}

/// The twist `d y^2 = f(x)`, written as `y^2 = x^3 - 27 d^2 c4 x - 54 d^3 c6`.
pub fn quadratic_twist(model: &WeierstrassModel, d: &BigInt) -> Result<WeierstrassModel> {
    if d.is_zero() || !arith::is_squarefree(d)? {
        return Err(Error::NotSquarefree(d.clone()));
    }
    let inv = model.invariants()?;
    let d = Rational::from_integer(d.clone());
    let a4 = rat(-27) * &d * &d * &inv.c4;
    let a6 = rat(-54) * &d * &d * &d * &inv.c6;
    WeierstrassModel::short(a4, a6)
}

/// `y^2 = a x^3 + b x^2 + c x + e`, moved to Weierstrass form by `X = a x`, `Y = a y`.
pub fn cubic_to_weierstrass(a: &Rational, b: &Rational, c: &Rational, e: &Rational) -> Result<WeierstrassModel> {
    if a.is_zero() {
        return Err(Error::SingularCurve);
    }
    WeierstrassModel::new(Rational::zero(), b.clone(), Rational::zero(), a * c, a * a * e)
}

/// `y^2 = x^3 - n^2 x`.
pub fn congruent_curve(n: &BigInt) -> Result<WeierstrassModel> {
    if !n.is_positive() || !arith::is_squarefree(n)? {
        return Err(Error::NotSquarefree(n.clone()));
    }
    let n = Rational::from_integer(n.clone());
    WeierstrassModel::short(-&n * &n, Rational::zero())
}

/// Whether the two models define isomorphic curves over Q.
pub fn is_isomorphic(m1: &WeierstrassModel, m2: &WeierstrassModel) -> Result<bool> {
    let i1 = m1.invariants()?;
    let i2 = m2.invariants()?;
    if m1.j_invariant()? != m2.j_invariant()? {
        return Ok(false);
    }
    // Need u with c4' = u^4 c4 and c6' = u^6 c6.
    match (i1.c4.is_zero(), i1.c6.is_zero()) {
        (false, false) => {
            let u2 = (&i2.c6 / &i1.c6) / (&i2.c4 / &i1.c4);
            Ok(is_rational_square(&u2) && &u2 * &u2 * &i1.c4 == i2.c4)
        }
        (true, false) => Ok(is_rational_power(&(&i2.c6 / &i1.c6), 6)),
        (false, true) => Ok(is_rational_power(&(&i2.c4 / &i1.c4), 4)),
        (true, true) => unreachable!("nonsingular"),
    }
}

fn is_rational_square(x: &Rational) -> bool {
    is_rational_power(x, 2)
}

fn is_rational_power(x: &Rational, k: u32) -> bool {
    if x.is_negative() && k.is_multiple_of(2) {
        return false;
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        let r = n.abs().nth_root(k);
        (num_traits::pow(r.clone(), k as usize) == n.abs()).then_some(r)
    };
    root(x.numer()).is_some() && root(x.denom()).is_some()
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coefficients().iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let ok_int = |t: &str| {
        let t = t.strip_prefix('-').unwrap_or(t);
        !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
    };
    match s.split_once('/') {
        None => ok_int(s).then(|| Rational::from_integer(s.parse().unwrap())),
        Some((n, d)) => {
            if !ok_int(n) || d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let d: BigInt = d.parse().ok()?;
            (!d.is_zero()).then(|| Rational::new(n.parse().unwrap(), d))
        }
    }
}

/// Parses the text form `[a1,a2,a3,a4,a6]`.
pub fn parse_curve(text: &str) -> Result<WeierstrassModel> {
    let err = |msg: &str| Error::ParseError { line: 1, msg: format!("{msg}: {text:?}") };
    let t = text.trim();
    let body = t
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| err("expected [a1,a2,a3,a4,a6]"))?;
    let parts: Vec<&str> = body.split(',').collect();
    if parts.len() != 5 {
        return Err(err("expected five coefficients"));
    }
    let mut coeffs = Vec::with_capacity(5);
    for p in parts {
        coeffs.push(parse_rational(p).ok_or_else(|| err("bad coefficient"))?);
    }
    let [a1, a2, a3, a4, a6]: [Rational; 5] = coeffs.try_into().unwrap();
    WeierstrassModel::new(a1, a2, a3, a4, a6)
}

impl FromStr for WeierstrassModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_curve(s)
    }
}

impl Serialize for WeierstrassModel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for WeierstrassModel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_curve(&s).map_err(serde::de::Error::custom)
    }
}
