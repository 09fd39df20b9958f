//! Tate's algorithm over Z_p on integral models.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::KodairaType;
use crate::arith::{jacobi, mod_inverse, modp};

/// Integral Weierstrass coefficients `[a1, a2, a3, a4, a6]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct IntModel(pub [BigInt; 5]);

pub(crate) struct IntInvariants {
    pub b2: BigInt,
    pub b4: BigInt,
    pub b6: BigInt,
    pub b8: BigInt,
    pub c4: BigInt,
    pub c6: BigInt,
    pub disc: BigInt,
}

impl IntModel {
    pub fn invariants(&self) -> IntInvariants {
        let [a1, a2, a3, a4, a6] = &self.0;
        let b2: BigInt = a1 * a1 + 4 * a2;
        let b4: BigInt = a1 * a3 + 2 * a4;
        let b6: BigInt = a3 * a3 + 4 * a6;
        let b8: BigInt = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let c4: BigInt = &b2 * &b2 - 24 * &b4;
        let c6: BigInt = -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - 216 * &b6;
        let disc: BigInt = -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6;
        IntInvariants { b2, b4, b6, b8, c4, c6, disc }
    }

    /// Integral change of coordinates with u = 1.
    pub fn rst(&self, r: &BigInt, s: &BigInt, t: &BigInt) -> IntModel {
        let [a1, a2, a3, a4, a6] = &self.0;
        let n1 = a1 + 2 * s;
        let n2 = a2 - s * a1 + 3 * r - s * s;
        let n3 = a3 + r * a1 + 2 * t;
        let n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
        let n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        IntModel([n1, n2, n3, n4, n6])
    }

    /// Divides `a_i` by `p^i`; the caller guarantees exactness.
    pub fn scale_down(&self, p: &BigInt) -> IntModel {
        let mut out = self.0.clone();
        let weights = [1usize, 2, 3, 4, 6];
        for (c, w) in out.iter_mut().zip(weights) {
            let d = num_traits::pow(p.clone(), w);
            debug_assert!((&*c % &d).is_zero());
            *c = &*c / d;
        }
        IntModel(out)
    }
}

pub(crate) struct TateResult {
    /// A p-minimal model, integral at every prime.
    pub model: IntModel,
    pub kodaira: KodairaType,
    /// Valuation of the minimal discriminant.
    pub v_disc: u64,
    /// For multiplicative reduction: whether it is split.
    pub split: Option<bool>,
}

fn val(x: &BigInt, p: &BigInt) -> u64 {
    if x.is_zero() {
        u64::MAX
    } else {
        crate::arith::val_int(x, p)
    }
}

fn pdiv(x: &BigInt, p: &BigInt) -> bool {
    (x % p).is_zero()
}

/// Whether `a T^2 + b T + c` has a root mod p.
fn has_root_quadratic(a: &BigInt, b: &BigInt, c: &BigInt, p: &BigInt) -> bool {
    if let Some(q) = p.to_u64() {
        if q < 64 {
            let (a, b, c) = (modp(a, p), modp(b, p), modp(c, p));
            return (0..q).any(|t| {
                let t = BigInt::from(t);
                pdiv(&(&a * &t * &t + &b * &t + &c), p)
            });
        }
    }
    if pdiv(a, p) {
        return !pdiv(b, p) || pdiv(c, p);
    }
    let disc = b * b - 4 * a * c;
    jacobi(&disc, p) >= 0
}

/// Runs Tate's algorithm at `p` on an integral model.
pub(crate) fn tate(model: &IntModel, p: &BigInt) -> TateResult {
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    let is2 = p == &two;
    let is3 = p == &three;
    let p2 = p * p;
    let p3 = &p2 * p;
    let p4 = &p3 * p;
    let inv = |x: &BigInt| mod_inverse(x, p).expect("unit mod p");
    let red = |x: &BigInt| modp(x, p);
    let half = if is2 { BigInt::zero() } else { inv(&two) };

    let mut c = model.clone();
    loop {
        let inv_c = c.invariants();
        let v_disc = val(&inv_c.disc, p);
        if v_disc == 0 {
            return TateResult { model: c, kodaira: KodairaType::I0, v_disc, split: None };
        }

        // Move the singular point to (0, 0).
        let [a1, a2, a3, a4, a6] = c.0.clone();
        let (r, t);
        if is2 {
            if pdiv(&inv_c.b2, p) {
                r = red(&a4);
                t = red(&(((&r + &a2) * &r + &a4) * &r + &a6));
            } else {
                let u = inv(&a1);
                r = red(&(&u * &a3));
                t = red(&(&u * (&a4 + &r * &r)));
            }
        } else if is3 {
            r = if pdiv(&inv_c.b2, p) { red(&-&inv_c.b6) } else { red(&(-inv(&inv_c.b2) * &inv_c.b4)) };
            t = red(&(&a1 * &r + &a3));
        } else {
            r = if pdiv(&inv_c.c4, p) {
                red(&(-inv(&BigInt::from(12)) * &inv_c.b2))
            } else {
                red(&(-inv(&(12 * &inv_c.c4)) * (&inv_c.c6 + &inv_c.b2 * &inv_c.c4)))
            };
            t = red(&(-&half * (&a1 * &r + &a3)));
        }
        c = c.rst(&r, &BigInt::zero(), &t);
        let inv_c = c.invariants();
        let [a1, a2, a3, _, a6] = c.0.clone();

        if !pdiv(&inv_c.b2, p) {
            let split = has_root_quadratic(&BigInt::one(), &a1, &-&a2, p);
            return TateResult {
                model: c,
                kodaira: KodairaType::In(v_disc as u32),
                v_disc,
                split: Some(split),
            };
        }
        if val(&a6, p) < 2 {
            return TateResult { model: c, kodaira: KodairaType::II, v_disc, split: None };
        }
        if val(&inv_c.b8, p) < 3 {
            return TateResult { model: c, kodaira: KodairaType::III, v_disc, split: None };
        }
        if val(&inv_c.b6, p) < 3 {
            return TateResult { model: c, kodaira: KodairaType::IV, v_disc, split: None };
        }

        // Arrange p | a1, a2; p^2 | a3, a4; p^3 | a6.
        let (s, t) = if is2 {
            (red(&a2), p * red(&(&a6 / &p2)))
        } else if is3 {
            (a1.clone(), a3.clone())
        } else {
            // half = (p + 1) / 2 here, so a3 + 2t = -p a3 without reduction
            (-&a1 * &half, -&a3 * &half)
        };
        c = c.rst(&BigInt::zero(), &s, &t);
        let [_, a2, _, a4, a6] = c.0.clone();

        let b = &a2 / p;
        let cc = &a4 / &p2;
        let d = &a6 / &p3;
        let w = 27 * &d * &d - &b * &b * &cc * &cc + 4 * &b * &b * &b * &d - 18 * &b * &cc * &d
            + 4 * &cc * &cc * &cc;
        let x = 3 * &cc - &b * &b;
        let sw = if pdiv(&w, p) {
            if pdiv(&x, p) {
                3
            } else {
                2
            }
        } else {
            1
        };

        if sw == 1 {
            return TateResult { model: c, kodaira: KodairaType::I0Star, v_disc, split: None };
        }
        if sw == 2 {
            let r = if is2 {
                red(&cc)
            } else if is3 {
                red(&(&cc * inv(&b)))
            } else {
                red(&((&b * &cc - 9 * &d) * inv(&(2 * &x))))
            };
            c = c.rst(&(p * r), &BigInt::zero(), &BigInt::zero());
            let (mut ix, mut iy) = (3u32, 3u32);
            let (mut mx, mut my) = (p2.clone(), p2.clone());
            loop {
                let [_, _, a3, _, a6] = c.0.clone();
                let a3t = &a3 / &my;
                let a6t = &a6 / (&mx * &my);
                if !pdiv(&(&a3t * &a3t + 4 * &a6t), p) {
                    break;
                }
                let t = if is2 { &my * red(&a6t) } else { &my * red(&(-&a3t * &half)) };
                c = c.rst(&BigInt::zero(), &BigInt::zero(), &t);
                my = &my * p;
                iy += 1;
                let [_, a2, _, a4, a6] = c.0.clone();
                let a2t = &a2 / p;
                let a4t = &a4 / (p * &mx);
                let a6t = &a6 / (&mx * &my);
                if !pdiv(&(&a4t * &a4t - 4 * &a6t * &a2t), p) {
                    break;
                }
                let r = if is2 {
                    &mx * red(&(&a6t * inv(&a2t)))
                } else {
                    &mx * red(&(-&a4t * inv(&(2 * &a2t))))
                };
                c = c.rst(&r, &BigInt::zero(), &BigInt::zero());
                mx = &mx * p;
                ix += 1;
            }
            return TateResult {
                model: c,
                kodaira: KodairaType::InStar(ix + iy - 5),
                v_disc,
                split: None,
            };
        }

        // Triple root: move it to T = 0.
        let r = if is2 {
            red(&b)
        } else if is3 {
            red(&-&d)
        } else {
            red(&(-&b * inv(&three)))
        };
        c = c.rst(&(p * r), &BigInt::zero(), &BigInt::zero());
        let [_, _, a3, _, a6] = c.0.clone();
        let x3t = &a3 / &p2;
        let x6t = &a6 / &p4;
        if !pdiv(&(&x3t * &x3t + 4 * &x6t), p) {
            return TateResult { model: c, kodaira: KodairaType::IVStar, v_disc, split: None };
        }
        let t = if is2 { &p2 * red(&x6t) } else { &p2 * red(&(-&x3t * &half)) };
        c = c.rst(&BigInt::zero(), &BigInt::zero(), &t);
        let [_, _, _, a4, a6] = c.0.clone();
        if val(&a4, p) < 4 {
            return TateResult { model: c, kodaira: KodairaType::IIIStar, v_disc, split: None };
        }
        if val(&a6, p) < 6 {
            return TateResult { model: c, kodaira: KodairaType::IIStar, v_disc, split: None };
        }
        // Not minimal: rescale and start again.
        c = c.scale_down(p);
    }
}

/// Reduces `a1, a3` to {0, 1} and `a2` to {-1, 0, 1} by an integral change of coordinates.
pub(crate) fn normalize(m: &IntModel) -> IntModel {
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    let a1 = &m.0[0];
    let s = -a1.div_floor(&two);
    let m1 = m.rst(&BigInt::zero(), &s, &BigInt::zero());
    let [a1, a2, ..] = m1.0.clone();
    // a2' = a2 + 3r; choose r so that a2' lies in {-1, 0, 1}
    let r: BigInt = -(&a2 + BigInt::one()).div_floor(&three);
    let m2 = m1.rst(&r, &BigInt::zero(), &BigInt::zero());
    let a3 = &m2.0[2];
    let t = -a3.div_floor(&two);
    let m3 = m2.rst(&BigInt::zero(), &BigInt::zero(), &t);
    debug_assert!(m3.0[0] == a1 && !m3.0[0].is_negative());
    m3
}
