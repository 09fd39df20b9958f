//! The supported number fields and how rational primes decompose in them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{check_quadratic_d, splitting_unchecked, Splitting};
use crate::arith::{self, int};
use crate::error::{Error, Result};
use crate::localroot::ExtPlace;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Quadratic(BigInt),
    Biquadratic(BigInt, BigInt),
    Zeta8,
    /// `Q(m^(1/p^n))`.
    PureRadical { m: BigInt, p: u32, n: u32 },
    /// A field given only by its place counts at infinity, with the caller
    /// attesting that the curve has good reduction at every finite place.
    AssertedEverywhereGood { real: u32, complex: u32 },
    /// Some Galois extension of Q with group `C_2^d`.
    ElemAbelian2(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(k: u64) -> Parity {
        if k.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// The places of a field above one rational prime. `places` is `None` when only
/// the parity of their number is known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingReport {
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub p: BigInt,
    pub degree: u64,
    pub places: Option<Vec<ExtPlace>>,
    pub count_parity: Parity,
    pub parity_only: bool,
}

impl SplittingReport {
    fn exact(p: &BigInt, degree: u64, places: Vec<ExtPlace>) -> SplittingReport {
        debug_assert_eq!(places.iter().map(|v| v.e as u64 * v.f as u64).sum::<u64>(), degree);
        let count_parity = Parity::of(places.len() as u64);
        SplittingReport { p: p.clone(), degree, places: Some(places), count_parity, parity_only: false }
    }

    fn parity(p: &BigInt, degree: u64, parity: Parity) -> SplittingReport {
        SplittingReport { p: p.clone(), degree, places: None, count_parity: parity, parity_only: true }
    }

    pub fn count(&self) -> Option<usize> {
        self.places.as_ref().map(Vec::len)
    }
}

impl FieldDescriptor {
    pub fn validate(&self) -> Result<()> {
        match self {
            FieldDescriptor::Quadratic(d) => check_quadratic_d(d),
            FieldDescriptor::Biquadratic(d1, d2) => {
                check_quadratic_d(d1)?;
                check_quadratic_d(d2)?;
                if d1 == d2 {
                    return Err(Error::InvalidArgument("biquadratic field needs distinct d1, d2".into()));
                }
                Ok(())
            }
            FieldDescriptor::Zeta8 => Ok(()),
            FieldDescriptor::PureRadical { m, p, n } => {
                if *p == 2 || !arith::is_prime(&int(*p as i64)) {
                    return Err(Error::InvalidArgument(format!("radical degree needs an odd prime, got {p}")));
                }
                if *n == 0 {
                    return Err(Error::InvalidArgument("radical level must be at least 1".into()));
                }
                if m <= &BigInt::one() {
                    return Err(Error::InvalidArgument("m must exceed 1".into()));
                }
                if !arith::is_pth_power_free(m, *p)? {
                    return Err(Error::NotPowerFree { m: m.clone(), p: *p });
                }
                Ok(())
            }
            FieldDescriptor::AssertedEverywhereGood { real, complex } => {
                if real + 2 * complex == 0 {
                    return Err(Error::InvalidArgument("field has no places at infinity".into()));
                }
                Ok(())
            }
            FieldDescriptor::ElemAbelian2(d) => {
                if *d == 0 || *d > 62 {
                    return Err(Error::InvalidArgument("C_2^d needs 1 <= d <= 62".into()));
                }
                Ok(())
            }
        }
    }

    pub fn degree(&self) -> Option<u64> {
        match self {
            FieldDescriptor::Quadratic(_) => Some(2),
            FieldDescriptor::Biquadratic(..) | FieldDescriptor::Zeta8 => Some(4),
            FieldDescriptor::PureRadical { p, n, .. } => (*p as u64).checked_pow(*n),
            FieldDescriptor::AssertedEverywhereGood { real, complex } => Some(*real as u64 + 2 * *complex as u64),
            FieldDescriptor::ElemAbelian2(d) => Some(1u64 << d),
        }
    }

    /// Number of real plus complex places, when it is determined by the descriptor.
    pub fn infinite_places(&self) -> Option<u64> {
        match self {
            FieldDescriptor::Quadratic(d) => Some(if d.is_positive() { 2 } else { 1 }),
            FieldDescriptor::Biquadratic(d1, d2) => Some(if d1.is_positive() && d2.is_positive() { 4 } else { 2 }),
            FieldDescriptor::Zeta8 => Some(2),
            // one real embedding, the other roots come in conjugate pairs
            FieldDescriptor::PureRadical { .. } => self.degree().map(|n| n.div_ceil(2)),
            FieldDescriptor::AssertedEverywhereGood { real, complex } => Some(*real as u64 + *complex as u64),
            FieldDescriptor::ElemAbelian2(_) => None,
        }
    }

    pub fn infinite_parity(&self) -> Option<Parity> {
        match (self, self.infinite_places()) {
            (_, Some(u)) => Some(Parity::of(u)),
            // 2^d real places or 2^(d-1) complex ones
            (FieldDescriptor::ElemAbelian2(d), None) if *d >= 2 => Some(Parity::Even),
            _ => None,
        }
    }
}

fn unsupported(p: &BigInt, reason: &str) -> Error {
    Error::UnsupportedSplitting { p: p.clone(), reason: reason.into() }
}

fn repeat(p: &BigInt, e: u32, f: u32, count: usize) -> Vec<ExtPlace> {
    vec![ExtPlace::new(p.clone(), e, f); count]
}

fn biquadratic_places(p: &BigInt, d1: &BigInt, d2: &BigInt) -> Result<Vec<ExtPlace>> {
    let prod = d1 * d2;
    let d3 = arith::squarefree_part(&prod)?;
    let s = [splitting_unchecked(p, d1), splitting_unchecked(p, d2), splitting_unchecked(p, &d3)];
    let ramified = s.iter().filter(|x| **x == Splitting::Ramified).count();
    let split = s.iter().filter(|x| **x == Splitting::Split).count();
    Ok(match (ramified, split) {
        (0, 3) => repeat(p, 1, 1, 4),
        (0, 1) => repeat(p, 1, 2, 2),
        (2, 1) => repeat(p, 2, 1, 2),
        (2, 0) => repeat(p, 2, 2, 1),
        (3, _) => repeat(p, 4, 1, 1),
        _ => unreachable!("impossible decomposition {s:?} of {p} in Q(sqrt {d1}, sqrt {d2})"),
    })
}

/// Möbius function of `k`, given all primes that can divide it.
fn mobius(mut k: u128, primes: &[u128]) -> i64 {
    let mut mu = 1;
    for &q in primes {
        if k.is_multiple_of(q) {
            k /= q;
            if k.is_multiple_of(q) {
                return 0;
            }
            mu = -mu;
        }
    }
    debug_assert_eq!(k, 1);
    mu
}

fn pow_mod(b: &BigInt, e: u128, m: &BigInt) -> BigInt {
    b.modpow(&BigInt::from(e), m)
}

/// Number of roots of `x^N - m` in the field with `q^k` elements, for `q` not dividing `N m`.
fn roots_in_extension(q: &BigInt, k: u128, big_n: u64, m: &BigInt) -> u64 {
    let nb = BigInt::from(big_n);
    // g = gcd(N, q^k - 1)
    let qk_mod_n = pow_mod(q, k, &nb);
    let g = (qk_mod_n - 1u32).mod_floor(&nb).gcd(&nb);
    let g = if g.is_zero() { nb.clone() } else { g };
    let q1 = q - 1u32;
    let modulus = &g * &q1;
    // (q^k - 1) / g reduced mod q - 1
    let r = (pow_mod(q, k, &modulus) - 1u32).mod_floor(&modulus);
    let exponent = &r / &g;
    let mr = arith::modp(m, q);
    if mr.modpow(&exponent, q).is_one() {
        g.to_u64().unwrap()
    } else {
        0
    }
}

/// Residue degrees of the places above `q` in `Q(m^(1/N))`, `q` not dividing `p m`.
/// These are the degrees of the irreducible factors of `x^N - m` over `F_q`, found
/// from root counts over `F_{q^k}` by Möbius inversion. Every degree divides the
/// order of `q` modulo `N (q - 1)`, which divides `(p - 1) p^n`.
fn radical_residue_degrees(q: &BigInt, p: u32, n: u32, m: &BigInt) -> Result<Vec<u64>> {
    let big_n = (p as u64).pow(n);
    let pp = p as u128;
    let bound = (pp - 1)
        .checked_mul(pp.checked_pow(n).ok_or_else(|| unsupported(q, "radical level too large"))?)
        .ok_or_else(|| unsupported(q, "radical level too large"))?;
    let mut primes: Vec<u128> = arith::factorize(&int(p as i64 - 1))?
        .primes()
        .map(|x| x.to_u128().unwrap())
        .collect();
    primes.push(pp);
    let mut divisors = vec![1u128];
    for &r in &primes {
        let mut e = 0;
        let mut t = bound;
        while t % r == 0 {
            t /= r;
            e += 1;
        }
        let mut next = Vec::new();
        for &d in &divisors {
            let mut x = d;
            for _ in 0..=e {
                next.push(x);
                x *= r;
            }
        }
        divisors = next;
    }
    divisors.sort_unstable();
    let mut roots: Vec<(u128, u64)> = Vec::new();
    let mut degrees = Vec::new();
    let mut covered = 0u64;
    for &k in &divisors {
        if covered == big_n {
            break;
        }
        let rk = roots_in_extension(q, k, big_n, m);
        roots.push((k, rk));
        let mut acc: i128 = 0;
        for &(j, rj) in &roots {
            if k % j == 0 {
                acc += mobius(k / j, &primes) as i128 * rj as i128;
            }
        }
        let count = (acc / k as i128) as u64;
        debug_assert_eq!(acc % k as i128, 0);
        let kk = k as u64;
        degrees.extend(std::iter::repeat_n(kk, count as usize));
        covered += kk * count;
    }
    debug_assert_eq!(covered, big_n);
    Ok(degrees)
}

fn radical_places(q: &BigInt, m: &BigInt, p: u32, n: u32) -> Result<SplittingReport> {
    let degree = (p as u64).pow(n);
    let pb = int(p as i64);
    if m.is_multiple_of(q) {
        // v_q(m) lies in 1..p-1, coprime to p^n: x^N - m is Eisenstein after scaling
        return Ok(SplittingReport::exact(q, degree, repeat(q, degree as u32, 1, 1)));
    }
    if q == &pb {
        return Err(unsupported(q, "wild ramification at the radical's prime not handled"));
    }
    let places = radical_residue_degrees(q, p, n, m)?
        .into_iter()
        .map(|f| ExtPlace::new(q.clone(), 1, f as u32))
        .collect();
    Ok(SplittingReport::exact(q, degree, places))
}

/// The places of `field` above the rational prime `p`.
pub fn places_above(p: &BigInt, field: &FieldDescriptor) -> Result<SplittingReport> {
    if !arith::is_prime(p) {
        return Err(Error::NonPrimeModulus(p.clone()));
    }
    field.validate()?;
    let degree = field.degree().ok_or_else(|| unsupported(p, "degree overflows"))?;
    match field {
        FieldDescriptor::Quadratic(d) => Ok(SplittingReport::exact(
            p,
            2,
            match splitting_unchecked(p, d) {
                Splitting::Split => repeat(p, 1, 1, 2),
                Splitting::Inert => repeat(p, 1, 2, 1),
                Splitting::Ramified => repeat(p, 2, 1, 1),
            },
        )),
        FieldDescriptor::Biquadratic(d1, d2) => Ok(SplittingReport::exact(p, 4, biquadratic_places(p, d1, d2)?)),
        FieldDescriptor::Zeta8 => {
            let places = if p == &int(2) {
                repeat(p, 4, 1, 1)
            } else if arith::modp(p, &int(8)).is_one() {
                repeat(p, 1, 1, 4)
            } else {
                repeat(p, 1, 2, 2)
            };
            Ok(SplittingReport::exact(p, 4, places))
        }
        FieldDescriptor::PureRadical { m, p: ell, n } => radical_places(p, m, *ell, *n),
        FieldDescriptor::AssertedEverywhereGood { .. } => {
            Err(unsupported(p, "only the infinite places of an asserted field are known"))
        }
        FieldDescriptor::ElemAbelian2(d) => {
            // a decomposition group is quotient of the local C_2-extension group:
            // order at most 4 for odd p and 8 for p = 2
            let local_max = if p == &int(2) { 3 } else { 2 };
            if *d > local_max {
                Ok(SplittingReport::parity(p, degree, Parity::Even))
            } else {
                Err(unsupported(p, "place count parity not forced for this C_2^d"))
            }
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Quadratic(d) => write!(f, "quad:{d}"),
            FieldDescriptor::Biquadratic(d1, d2) => write!(f, "biquad:{d1},{d2}"),
            FieldDescriptor::Zeta8 => write!(f, "zeta8"),
            FieldDescriptor::PureRadical { m, p, n } => write!(f, "radical:m={m},p={p},n={n}"),
            FieldDescriptor::AssertedEverywhereGood { real, complex } => write!(f, "good:r={real},c={complex}"),
            FieldDescriptor::ElemAbelian2(d) => write!(f, "c2pow:{d}"),
        }
    }
}

fn parse_err(s: &str, msg: &str) -> Error {
    Error::ParseError { line: 1, msg: format!("{msg}: {s:?}") }
}

fn parse_keyed<'a>(s: &str, body: &'a str, keys: &[&str]) -> Result<Vec<&'a str>> {
    let mut out = vec![None; keys.len()];
    for part in body.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| parse_err(s, "expected key=value"))?;
        let i = keys.iter().position(|x| *x == k.trim()).ok_or_else(|| parse_err(s, "unknown key"))?;
        if out[i].replace(v.trim()).is_some() {
            return Err(parse_err(s, "repeated key"));
        }
    }
    out.into_iter().map(|v| v.ok_or_else(|| parse_err(s, "missing key"))).collect()
}

impl FromStr for FieldDescriptor {
    type Err = Error;

    /// `quad:-2`, `biquad:-3,13`, `zeta8`, `radical:m=5,p=3,n=2`, `good:r=0,c=3`, `c2pow:4`.
    fn from_str(s: &str) -> Result<FieldDescriptor> {
        let s = s.trim();
        let (kind, body) = s.split_once(':').unwrap_or((s, ""));
        let int_of = |t: &str| t.trim().parse::<BigInt>().map_err(|_| parse_err(s, "bad integer"));
        let small = |t: &str| t.trim().parse::<u32>().map_err(|_| parse_err(s, "bad count"));
        match kind {
            "quad" => Ok(FieldDescriptor::Quadratic(int_of(body)?)),
            "biquad" => {
                let (a, b) = body.split_once(',').ok_or_else(|| parse_err(s, "expected d1,d2"))?;
                Ok(FieldDescriptor::Biquadratic(int_of(a)?, int_of(b)?))
            }
            "zeta8" if body.is_empty() => Ok(FieldDescriptor::Zeta8),
            "radical" => {
                let v = parse_keyed(s, body, &["m", "p", "n"])?;
                Ok(FieldDescriptor::PureRadical { m: int_of(v[0])?, p: small(v[1])?, n: small(v[2])? })
            }
            "good" => {
                let v = parse_keyed(s, body, &["r", "c"])?;
                Ok(FieldDescriptor::AssertedEverywhereGood { real: small(v[0])?, complex: small(v[1])? })
            }
            "c2pow" => Ok(FieldDescriptor::ElemAbelian2(small(body)?)),
            _ => Err(parse_err(s, "unknown field descriptor")),
        }
    }
}

impl Serialize for FieldDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldDescriptor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
