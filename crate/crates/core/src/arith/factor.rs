//! Primality testing and integer factorization.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{jacobi, Sign};
use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;

/// How a prime factor was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PrimalityProof {
    /// No divisor up to the square root.
    TrialDivision,
    /// Miller-Rabin with the first thirteen prime bases; deterministic below 3.3e24.
    DeterministicMillerRabin,
    /// Baillie-PSW probable prime. No counterexample is known, but the test is not a proof.
    BailliePsw,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimePower {
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub p: BigInt,
    pub exp: u32,
    pub proof: PrimalityProof,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub sign: Sign,
    /// Sorted by prime.
    pub factors: Vec<PrimePower>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|pp| &pp.p)
    }

    pub fn value(&self) -> BigInt {
        let mut v = BigInt::from(self.sign.value());
        for pp in &self.factors {
            v *= num_traits::pow(pp.p.clone(), pp.exp as usize);
        }
        v
    }

    pub fn exponent_of(&self, p: &BigInt) -> u32 {
        self.factors.iter().find(|pp| &pp.p == p).map_or(0, |pp| pp.exp)
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (0..=n).filter(|&i| sieve[i]).map(|i| i as u32).collect()
    })
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn miller_rabin_u64(n: u64, bases: &[u32]) -> bool {
    let d0 = n - 1;
    let s = d0.trailing_zeros();
    let d = d0 >> s;
    'outer: for &a in bases {
        let a = a as u64 % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn miller_rabin_big(n: &BigUint, bases: &[u32]) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'outer: for &a in bases {
        let a = BigUint::from(a) % n;
        if a.is_zero() {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Strong Lucas probable-prime test with Selfridge parameters.
fn strong_lucas(n: &BigInt) -> bool {
    if super::is_perfect_square(n) {
        return false;
    }
    let mut d = BigInt::from(5);
    loop {
        let j = jacobi(&d, n);
        if j == -1 {
            break;
        }
        if j == 0 && &d.abs() != n {
            return false;
        }
        d = if d.is_positive() { -(d + 2u32) } else { -(d - 2u32) };
    }
    let p = BigInt::one();
    let q: BigInt = (BigInt::one() - &d) / 4u32;
    let m = n + 1u32;
    let s = m.trailing_zeros().unwrap_or(0);
    let k = &m >> s;
    let half = |x: BigInt| -> BigInt {
        let x = x.mod_floor(n);
        if x.is_odd() {
            (x + n) / 2
        } else {
            x / 2
        }
    };
    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = q.mod_floor(n);
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        u = (&u * &v).mod_floor(n);
        v = (&v * &v - (&qk + &qk)).mod_floor(n);
        qk = (&qk * &qk).mod_floor(n);
        if k.bit(i) {
            let nu = half(&p * &u + &v);
            let nv = half(&d * &u + &p * &v);
            u = nu;
            v = nv;
            qk = (&qk * &q).mod_floor(n);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - (&qk + &qk)).mod_floor(n);
        qk = (&qk * &qk).mod_floor(n);
        if v.is_zero() {
            return true;
        }
    }
    false
}

/// Primality of `|n|` with the method used; `None` if composite or |n| < 2.
pub fn primality(n: &BigInt) -> Option<PrimalityProof> {
    let n = n.abs();
    if n < BigInt::from(2) {
        return None;
    }
    if let Some(m) = n.to_u64() {
        if m < TRIAL_LIMIT * TRIAL_LIMIT {
            for &p in small_primes() {
                let p = p as u64;
                if p * p > m {
                    break;
                }
                if m % p == 0 {
                    return None;
                }
            }
            return Some(PrimalityProof::TrialDivision);
        }
        for &p in &small_primes()[..50] {
            if m % p as u64 == 0 {
                return None;
            }
        }
        return miller_rabin_u64(m, &MR_BASES).then_some(PrimalityProof::DeterministicMillerRabin);
    }
    for &p in &small_primes()[..200] {
        if (&n % p).is_zero() {
            return None;
        }
    }
    let nu = n.to_biguint().unwrap();
    // 3.3e24 bound for the first 13 prime bases.
    let bound: BigUint = "3317044064679887385961981".parse().unwrap();
    if nu < bound {
        return miller_rabin_big(&nu, &MR_BASES).then_some(PrimalityProof::DeterministicMillerRabin);
    }
    if miller_rabin_big(&nu, &[2]) && strong_lucas(&n) {
        Some(PrimalityProof::BailliePsw)
    } else {
        None
    }
}

pub fn is_prime(n: &BigInt) -> bool {
    !n.is_negative() && primality(n).is_some()
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Outcome of one rho run: a factor, a degenerate cycle (retry with another
/// constant), or an exhausted iteration budget.
enum Rho<T> {
    Found(T),
    Cycle,
    Exhausted,
}

fn brent_u64(n: u64, c: u64) -> Rho<u64> {
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let m = 128;
    let (mut y, mut r, mut qv, mut g) = (2u64, 1u64, 1u64, 1u64);
    let mut x = 0;
    let mut ys = 0;
    let limit = 1u64 << 24;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                qv = mul_mod(qv, x.abs_diff(y), n);
            }
            g = gcd_u64(qv, n);
            k += m;
        }
        r *= 2;
        if r > limit {
            return Rho::Exhausted;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        Rho::Cycle
    } else {
        Rho::Found(g)
    }
}

fn brent_big(n: &BigUint, c: u64) -> Rho<BigUint> {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let m = 128u64;
    let one = BigUint::one();
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut qv = one.clone();
    let mut g = one.clone();
    let mut x = BigUint::zero();
    let mut ys = BigUint::zero();
    let limit = 1u64 << 20;
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    while g == one {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g == one {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                qv = (&qv * diff(&x, &y)) % n;
            }
            g = qv.gcd(n);
            k += m;
        }
        r *= 2;
        if r > limit {
            return Rho::Exhausted;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if g > one {
                break;
            }
        }
    }
    if &g == n {
        Rho::Cycle
    } else {
        Rho::Found(g)
    }
}

/// A nontrivial factor of the composite `n`, if rho finds one.
fn find_factor(n: &BigInt) -> Option<BigInt> {
    for c in 1..=20u64 {
        let run = match n.to_u64() {
            Some(m) => match brent_u64(m, c) {
                Rho::Found(g) => Rho::Found(BigInt::from(g)),
                Rho::Cycle => Rho::Cycle,
                Rho::Exhausted => Rho::Exhausted,
            },
            None => match brent_big(&n.to_biguint().unwrap(), c) {
                Rho::Found(g) => Rho::Found(BigInt::from(g)),
                Rho::Cycle => Rho::Cycle,
                Rho::Exhausted => Rho::Exhausted,
            },
        };
        match run {
            Rho::Found(g) => return Some(g),
            Rho::Cycle => continue,
            Rho::Exhausted => return None,
        }
    }
    None
}

fn push(out: &mut Vec<(BigInt, u32, PrimalityProof)>, p: BigInt, e: u32, proof: PrimalityProof) {
    if let Some(entry) = out.iter_mut().find(|(q, _, _)| *q == p) {
        entry.1 += e;
    } else {
        out.push((p, e, proof));
    }
}

/// Splits `n` (with no prime factor below the trial limit) into certified primes.
fn split_large(n: BigInt, out: &mut Vec<(BigInt, u32, PrimalityProof)>) -> Result<()> {
    let mut stack = vec![(n, 1u32)];
    while let Some((m, e)) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(proof) = primality(&m) {
            push(out, m, e, proof);
            continue;
        }
        if let Some((root, k)) = perfect_power(&m) {
            stack.push((root, e * k));
            continue;
        }
        match find_factor(&m) {
            Some(g) => {
                let h = &m / &g;
                stack.push((g, e));
                stack.push((h, e));
            }
            None => return Err(Error::FactorizationIncomplete { cofactor: m }),
        }
    }
    Ok(())
}

/// `m = root^k` with `k >= 2` maximal among prime exponents tried, for `m`
/// free of primes below the trial limit.
fn perfect_power(m: &BigInt) -> Option<(BigInt, u32)> {
    let max_k = (m.bits() / 20) as u32;
    (2..=max_k).filter(|&k| is_small_prime(k)).find_map(|k| {
        let r = m.nth_root(k);
        (r.pow(k) == *m).then_some((r, k))
    })
}

fn is_small_prime(k: u32) -> bool {
    k >= 2 && (2..k).take_while(|d| d * d <= k).all(|d| !k.is_multiple_of(d))
}

/// Complete factorization of a nonzero integer.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    factorize_with_hints(n, &[])
}

/// Factorization that first divides out caller-supplied factors. Hints need not be
/// prime; they are themselves factored and the result is verified.
pub fn factorize_with_hints(n: &BigInt, hints: &[BigInt]) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let sign = super::sign_of(n);
    let mut m = n.abs();
    let mut found: Vec<(BigInt, u32, PrimalityProof)> = Vec::new();

    let divide_out = |m: &mut BigInt, p: &BigInt, proof: PrimalityProof, found: &mut Vec<_>| {
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(p);
            if !r.is_zero() {
                break;
            }
            *m = q;
            e += 1;
        }
        if e > 0 {
            push(found, p.clone(), e, proof);
        }
    };

    for h in hints {
        let h = h.abs();
        if h <= BigInt::one() {
            continue;
        }
        let g = h.gcd(&m);
        if g.is_one() {
            continue;
        }
        let hf = factorize(&g)?;
        for pp in hf.factors {
            divide_out(&mut m, &pp.p, pp.proof, &mut found);
        }
    }

    if let Some(mut x) = m.to_u64() {
        for &p in small_primes() {
            let p = p as u64;
            if p * p > x {
                break;
            }
            if x % p == 0 {
                let mut e = 0;
                while x % p == 0 {
                    x /= p;
                    e += 1;
                }
                push(&mut found, BigInt::from(p), e, PrimalityProof::TrialDivision);
            }
        }
        m = BigInt::from(x);
    } else {
        for &p in small_primes() {
            let pb = BigInt::from(p);
            if &pb * &pb > m {
                break;
            }
            if (&m % p).is_zero() {
                divide_out(&mut m, &pb, PrimalityProof::TrialDivision, &mut found);
            }
        }
    }
    if !m.is_one() {
        let limit = BigInt::from(TRIAL_LIMIT);
        if m < &limit * &limit {
            push(&mut found, m, 1, PrimalityProof::TrialDivision);
        } else {
            split_large(m, &mut found)?;
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    let factors = found.into_iter().map(|(p, exp, proof)| PrimePower { p, exp, proof }).collect();
    let f = Factorization { sign, factors };
    debug_assert_eq!(&f.value(), n);
    Ok(f)
}
