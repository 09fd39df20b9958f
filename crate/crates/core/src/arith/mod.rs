//! Exact arithmetic kernel: valuations, residue symbols, Hilbert symbols,
//! factorization and power-freeness tests.

mod factor;

pub use factor::{
    factorize, factorize_with_hints, is_prime, primality, Factorization, PrimalityProof, PrimePower,
};

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, MulAssign, Neg};

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// An element of {+1, -1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    /// `(-1)^k`.
    pub fn parity(k: u64) -> Sign {
        if k.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn from_bool_minus(minus: bool) -> Sign {
        if minus {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn pow(self, k: u64) -> Sign {
        match self {
            Sign::Plus => Sign::Plus,
            Sign::Minus => Sign::parity(k),
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl std::iter::Product for Sign {
    fn product<I: Iterator<Item = Sign>>(iter: I) -> Sign {
        iter.fold(Sign::Plus, |a, b| a * b)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

/// Accepts `+1`, `1`, `+`, `-1`, `-`.
impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Sign> {
        match s.trim() {
            "+1" | "1" | "+" => Ok(Sign::Plus),
            "-1" | "-" => Ok(Sign::Minus),
            other => Err(Error::ParseError { line: 1, msg: format!("not a sign: {other:?}") }),
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Sign, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_i64(v).ok_or_else(|| serde::de::Error::custom("sign must be 1 or -1"))
    }
}

/// A p-adic valuation; `Infinity` is the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinity
    }

    /// `floor(self / k)`, with `floor(inf / k) = inf`.
    pub fn floor_div(self, k: i64) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v.div_euclid(k)),
            Valuation::Infinity => Valuation::Infinity,
        }
    }

    pub fn sub(self, k: i64) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v - k),
            Valuation::Infinity => Valuation::Infinity,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
            (Valuation::Infinity, _) => Ordering::Greater,
            (_, Valuation::Infinity) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinity => s.serialize_str("inf"),
        }
    }
}

/// A place of Q.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Place {
    Real,
    Finite(BigInt),
}

pub(crate) fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub(crate) fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn check_prime(p: &BigInt) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NonPrimeModulus(p.clone()))
    }
}

/// Valuation of a nonzero integer at `p`, without a primality check.
pub(crate) fn val_int(n: &BigInt, p: &BigInt) -> u64 {
    debug_assert!(!n.is_zero());
    if let (Some(mut m), Some(q)) = (n.abs().to_u64(), p.to_u64()) {
        let mut v = 0;
        while m % q == 0 {
            m /= q;
            v += 1;
        }
        return v;
    }
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (quo, rem) = m.div_rem(p);
        if !rem.is_zero() {
            return v;
        }
        m = quo;
        v += 1;
    }
}

/// Valuation of a rational at `p`, without a primality check.
pub(crate) fn val_rat(x: &Rational, p: &BigInt) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinity;
    }
    let v = val_int(x.numer(), p) as i64 - val_int(x.denom(), p) as i64;
    Valuation::Finite(v)
}

pub fn valuation(x: &Rational, p: &BigInt) -> Result<Valuation> {
    check_prime(p)?;
    Ok(val_rat(x, p))
}

pub(crate) fn pow_int(p: &BigInt, e: u64) -> BigInt {
    num_traits::pow(p.clone(), e as usize)
}

/// `x / p^v(x)`.
pub fn unit_part(x: &Rational, p: &BigInt) -> Result<Rational> {
    check_prime(p)?;
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(unit_part_unchecked(x, p))
}

pub(crate) fn unit_part_unchecked(x: &Rational, p: &BigInt) -> Rational {
    let vn = val_int(x.numer(), p);
    let vd = val_int(x.denom(), p);
    Rational::new(x.numer() / pow_int(p, vn), x.denom() / pow_int(p, vd))
}

/// Nonnegative remainder.
pub(crate) fn modp(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// Inverse of `a` modulo `m`, if it exists.
pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = modp(a, m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(modp(&e.x, m))
    } else {
        None
    }
}

/// Residue of a p-adic unit `x` modulo `m` (where `m` is a power of `p`).
pub(crate) fn unit_residue(x: &Rational, m: &BigInt) -> BigInt {
    let inv = mod_inverse(x.denom(), m).expect("denominator must be a unit");
    modp(&(x.numer() * inv), m)
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub(crate) fn jacobi(a: &BigInt, n: &BigInt) -> i8 {
    debug_assert!(n.is_positive() && n.is_odd());
    if let (Some(a64), Some(n64)) = (modp(a, n).to_u64(), n.to_u64()) {
        return jacobi_u64(a64, n64);
    }
    let mut a = modp(a, n);
    let mut n = n.clone();
    let mut t = 1i8;
    let three = int(3);
    let five = int(5);
    let eight = int(8);
    let four = int(4);
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            a >>= tz;
            let r = modp(&n, &eight);
            if tz % 2 == 1 && (r == three || r == five) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if modp(&a, &four) == three && modp(&n, &four) == three {
            t = -t;
        }
        a = modp(&a, &n);
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

pub(crate) fn jacobi_u64(mut a: u64, mut n: u64) -> i8 {
    a %= n;
    let mut t = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        if tz > 0 {
            a >>= tz;
            if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: &BigInt, p: &BigInt) -> Result<i8> {
    if p == &int(2) {
        return Err(Error::InvalidArgument("legendre symbol needs an odd prime".into()));
    }
    check_prime(p)?;
    Ok(jacobi(a, p))
}

/// Kronecker symbol `(a/n)`.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i8 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut t = 1i8;
    let mut n = n.clone();
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            t = -t;
        }
    }
    let tz = n.trailing_zeros().unwrap_or(0);
    if tz > 0 {
        if a.is_even() {
            return 0;
        }
        let r = modp(a, &int(8)).to_u64().unwrap();
        if tz % 2 == 1 && (r == 3 || r == 5) {
            t = -t;
        }
        n >>= tz;
    }
    if n.is_one() {
        return t;
    }
    t * jacobi(a, &n)
}

/// The quadratic residue symbol of `a` in the field with `p^f` elements.
pub fn residue_symbol_ext(a: &BigInt, p: &BigInt, f: u32) -> Result<Sign> {
    let l = legendre(a, p)?;
    if l == 0 {
        return Err(Error::NotAUnit { a: a.clone(), p: p.clone() });
    }
    Ok(Sign::from_bool_minus(l < 0).pow(f as u64))
}

/// Hilbert symbol `(a, b)_v` over the completion of Q at `place`.
pub fn hilbert_symbol(a: &Rational, b: &Rational, place: &Place) -> Result<Sign> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroInput);
    }
    match place {
        Place::Real => Ok(Sign::from_bool_minus(a.is_negative() && b.is_negative())),
        Place::Finite(p) => {
            check_prime(p)?;
            Ok(hilbert_finite(a, b, p))
        }
    }
}

pub(crate) fn hilbert_finite(a: &Rational, b: &Rational, p: &BigInt) -> Sign {
    let alpha = val_rat(a, p).finite().unwrap();
    let beta = val_rat(b, p).finite().unwrap();
    let u = unit_part_unchecked(a, p);
    let v = unit_part_unchecked(b, p);
    if p == &int(2) {
        let eight = int(8);
        let ur = unit_residue(&u, &eight).to_u64().unwrap();
        let vr_ = unit_residue(&v, &eight).to_u64().unwrap();
        let eps = |x: u64| ((x - 1) / 2) % 2;
        let omega = |x: u64| ((x * x - 1) / 8) % 2;
        let e = eps(ur) * eps(vr_) + (alpha.rem_euclid(2) as u64) * omega(vr_)
            + (beta.rem_euclid(2) as u64) * omega(ur);
        Sign::parity(e)
    } else {
        let leg = |x: &Rational| -> Sign {
            let s = jacobi(x.numer(), p) * jacobi(x.denom(), p);
            Sign::from_bool_minus(s < 0)
        };
        let eps_p = modp(&((p - 1u32) / 2u32), &int(2));
        let ab = (alpha * beta).rem_euclid(2) as u64;
        let first = Sign::parity(ab * eps_p.to_u64().unwrap());
        first * leg(&u).pow(beta.rem_euclid(2) as u64) * leg(&v).pow(alpha.rem_euclid(2) as u64)
    }
}

/// True iff no prime divides `m` to a power `>= p`.
pub fn is_pth_power_free(m: &BigInt, p: u32) -> Result<bool> {
    if m.is_zero() {
        return Err(Error::ZeroInput);
    }
    let f = factorize(m)?;
    Ok(f.factors.iter().all(|pp| pp.exp < p))
}

pub fn is_squarefree(n: &BigInt) -> Result<bool> {
    is_pth_power_free(n, 2)
}

/// `n` divided by its largest square divisor (sign preserved).
pub fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let f = factorize(n)?;
    let mut r = BigInt::from(f.sign.value());
    for pp in &f.factors {
        if pp.exp % 2 == 1 {
            r *= &pp.p;
        }
    }
    Ok(r)
}

pub(crate) fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub(crate) fn sign_of(n: &BigInt) -> Sign {
    Sign::from_bool_minus(n.sign() == BigSign::Minus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        rat(n)
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&q(-11), &int(11)).unwrap(), Valuation::Finite(1));
        assert_eq!(valuation(&q(0), &int(2)).unwrap(), Valuation::Infinity);
        assert_eq!(valuation(&q(9699328), &int(2)).unwrap(), Valuation::Finite(18));
        let x = Rational::new(int(3), int(16));
        assert_eq!(valuation(&x, &int(2)).unwrap(), Valuation::Finite(-4));
        assert!(matches!(valuation(&q(5), &int(9)), Err(Error::NonPrimeModulus(_))));
    }

    #[test]
    fn unit_part_examples() {
        assert_eq!(unit_part(&q(110592), &int(2)).unwrap(), q(27));
        assert_eq!(unit_part(&q(75), &int(2)).unwrap(), q(75));
        assert_eq!(unit_part(&q(-152), &int(2)).unwrap(), q(-19));
        assert_eq!(unit_part(&q(0), &int(2)), Err(Error::ZeroInput));
    }

    #[test]
    fn symbol_examples() {
        assert_eq!(legendre(&int(-2), &int(11)).unwrap(), 1);
        assert_eq!(legendre(&int(-1), &int(7)).unwrap(), -1);
        assert_eq!(legendre(&int(27), &int(37)).unwrap(), 1);
        assert_eq!(kronecker(&int(-15), &int(7)), -1);
        assert_eq!(kronecker(&int(-15), &int(1)), 1);
        assert_eq!(kronecker(&int(-47), &int(37)), 1);
        assert_eq!(kronecker(&int(17), &int(2)), 1);
        assert_eq!(kronecker(&int(5), &int(2)), -1);
        assert_eq!(kronecker(&int(-3), &int(2)), -1);
        assert_eq!(residue_symbol_ext(&int(-1), &int(7), 2).unwrap(), Sign::Plus);
        assert_eq!(residue_symbol_ext(&int(-1), &int(7), 1).unwrap(), Sign::Minus);
        assert_eq!(residue_symbol_ext(&int(-2), &int(7), 1).unwrap(), Sign::Minus);
        assert!(matches!(residue_symbol_ext(&int(14), &int(7), 1), Err(Error::NotAUnit { .. })));
    }

    /// Squares mod p by enumeration.
    fn brute_legendre(a: i64, p: i64) -> i8 {
        let a = a.rem_euclid(p);
        if a == 0 {
            return 0;
        }
        if (1..p).any(|x| (x * x) % p == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn legendre_matches_enumeration() {
        for p in [3i64, 5, 7, 11, 13, 37, 97] {
            for a in -200..200 {
                assert_eq!(legendre(&int(a), &int(p)).unwrap(), brute_legendre(a, p), "a={a} p={p}");
            }
        }
    }

    #[test]
    fn legendre_multiplicative() {
        let primes: Vec<i64> = (3..=97).filter(|&n| is_prime(&int(n))).collect();
        for p in primes {
            for a in 1..p {
                for b in 1..p {
                    let lhs = legendre(&int(a * b), &int(p)).unwrap();
                    let rhs = legendre(&int(a), &int(p)).unwrap() * legendre(&int(b), &int(p)).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn kronecker_agrees_with_legendre() {
        for p in (3..=97i64).filter(|&n| is_prime(&int(n))) {
            for a in -1000..=1000 {
                assert_eq!(kronecker(&int(a), &int(p)), legendre(&int(a), &int(p)).unwrap());
            }
        }
    }

    /// Whether z^2 = a x^2 + b y^2 has a primitive solution mod 2^k for k = 5;
    /// for units and valuations in {0,1} this decides the 2-adic symbol.
    fn brute_hilbert_2(a: i64, b: i64) -> Sign {
        let m = 64i64;
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    if x % 2 == 0 && y % 2 == 0 && z % 2 == 0 {
                        continue;
                    }
                    if (a * x * x + b * y * y - z * z).rem_euclid(m) == 0 {
                        return Sign::Plus;
                    }
                }
            }
        }
        Sign::Minus
    }

    #[test]
    fn hilbert_examples() {
        let r = Place::Real;
        let two = Place::Finite(int(2));
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), &r).unwrap(), Sign::Minus);
        for b in [-7i64, 2, 3, 10, -30] {
            for p in [2i64, 3, 5, 7] {
                assert_eq!(hilbert_symbol(&q(1), &q(b), &Place::Finite(int(p))).unwrap(), Sign::Plus);
            }
        }
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), &two).unwrap(), Sign::Minus);
        assert_eq!(brute_hilbert_2(-1, -1), Sign::Minus);
    }

    #[test]
    fn hilbert_at_two_matches_search() {
        let vals = [1i64, 3, 5, 7, 2, 6, 10, 14, -1, -3, -2, -6];
        for &a in &vals {
            for &b in &vals {
                let f = hilbert_symbol(&q(a), &q(b), &Place::Finite(int(2))).unwrap();
                assert_eq!(f, brute_hilbert_2(a, b), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn hilbert_rational_inputs() {
        // (a, b) depends only on the square classes
        let a = Rational::new(int(3), int(4));
        let b = Rational::new(int(-5), int(9));
        for p in [2i64, 3, 5, 7] {
            let pl = Place::Finite(int(p));
            assert_eq!(
                hilbert_symbol(&a, &b, &pl).unwrap(),
                hilbert_symbol(&q(3), &q(-5), &pl).unwrap()
            );
        }
    }

    #[test]
    fn power_free_examples() {
        assert!(is_pth_power_free(&int(12), 3).unwrap());
        assert!(!is_pth_power_free(&int(8), 3).unwrap());
        assert!(is_pth_power_free(&int(800006), 2).unwrap());
        assert_eq!(squarefree_part(&int(-72)).unwrap(), int(-2));
        assert_eq!(squarefree_part(&int(7 * 17 * 16)).unwrap(), int(119));
    }

    #[test]
    fn sign_algebra() {
        assert_eq!(Sign::Minus * Sign::Minus, Sign::Plus);
        assert_eq!(-Sign::Plus, Sign::Minus);
        assert_eq!(Sign::Minus.pow(3), Sign::Minus);
        assert_eq!(Sign::parity(4), Sign::Plus);
        assert_eq!([Sign::Minus, Sign::Minus, Sign::Minus].into_iter().product::<Sign>(), Sign::Minus);
        assert_eq!(serde_json::to_string(&Sign::Minus).unwrap(), "-1");
    }

    #[test]
    fn valuation_ordering() {
        assert!(Valuation::Infinity > Valuation::Finite(1000));
        assert_eq!(Valuation::Infinity.floor_div(6), Valuation::Infinity);
        assert_eq!(Valuation::Finite(-7).floor_div(6), Valuation::Finite(-2));
    }
}
