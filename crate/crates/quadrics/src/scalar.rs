//! Exact scalars: arbitrary-precision rationals and elements of a single
//! quadratic extension `Q(sqrt(m))`.
//!
//! A [`Scalar`] is either a rational or `a + b*sqrt(m)` with `a, b`
//! rational, `b != 0` and `m` a squarefree integer other than 0 and 1.
//! Construction normalizes: a vanishing irrational part collapses to the
//! rational variant, and square factors of `m` are absorbed into `b`, so
//! structural equality is semantic equality.

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use std::fmt;

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator by the underlying representation.
pub type Rat = num::BigRational;

/// Rational from an integer numerator and denominator. Panics on `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(num: i64) -> Rat {
    Rat::from(BigInt::from(num))
}

/// Element of the rationals or of one quadratic extension.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    /// A rational number.
    Rational(Rat),
    /// `a + b*sqrt(m)` with `b != 0`, `m` squarefree, `m != 0, 1`.
    Ext { a: Rat, b: Rat, m: i64 },
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Rat::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(Rat::one())
    }

    pub fn from_rat(a: Rat) -> Self {
        Scalar::Rational(a)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(rat_int(n))
    }

    /// Builds `a + b*sqrt(m)` in canonical form.
    ///
    /// Square factors of `m` move into `b`; `m == 0` or `m == 1` or
    /// `b == 0` collapse to a rational. Panics only on internal arithmetic
    /// overflow of `m` (inputs at desk scale keep `m` in `i64`).
    pub fn ext(a: Rat, b: Rat, m: i64) -> Self {
        if b.is_zero() || m == 0 {
            return Scalar::Rational(a);
        }
        let (s, m0) = squarefree_decompose_i64(m);
        if m0 == 1 {
            return Scalar::Rational(a + b * rat_int(s));
        }
        Scalar::Ext { a, b: b * rat_int(s), m: m0 }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(a) if a.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    /// Rational part (`a` in `a + b*sqrt(m)`).
    pub fn rational_part(&self) -> &Rat {
        match self {
            Scalar::Rational(a) => a,
            Scalar::Ext { a, .. } => a,
        }
    }

    /// The rational value, if this scalar is rational.
    pub fn as_rational(&self) -> Option<&Rat> {
        match self {
            Scalar::Rational(a) => Some(a),
            Scalar::Ext { .. } => None,
        }
    }

    /// The extension discriminant `m`, if this scalar is irrational.
    pub fn ext_m(&self) -> Option<i64> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Ext { m, .. } => Some(*m),
        }
    }

    /// Galois conjugate: `a + b*sqrt(m) -> a - b*sqrt(m)`.
    pub fn conjugate(&self) -> Self {
        match self {
            Scalar::Rational(a) => Scalar::Rational(a.clone()),
            Scalar::Ext { a, b, m } => Scalar::Ext { a: a.clone(), b: -b.clone(), m: *m },
        }
    }

    /// Field norm `a^2 - m*b^2`; rational, zero only for the zero element.
    pub fn norm(&self) -> Rat {
        match self {
            Scalar::Rational(a) => a * a,
            Scalar::Ext { a, b, m } => a * a - b * b * rat_int(*m),
        }
    }

    fn parts(&self) -> (Rat, Rat, Option<i64>) {
        match self {
            Scalar::Rational(a) => (a.clone(), Rat::zero(), None),
            Scalar::Ext { a, b, m } => (a.clone(), b.clone(), Some(*m)),
        }
    }

    /// Common extension discriminant of two scalars. Panics if both are
    /// irrational with different `m`: the crate never mixes extensions.
    fn join_m(&self, other: &Self) -> Option<i64> {
        match (self.ext_m(), other.ext_m()) {
            (None, y) => y,
            (x, None) => x,
            (Some(x), Some(y)) if x == y => Some(x),
            (Some(x), Some(y)) => {
                panic!("mixed quadratic extensions: sqrt({x}) and sqrt({y})")
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.join_m(other);
        let (a1, b1, _) = self.parts();
        let (a2, b2, _) = other.parts();
        Scalar::ext(a1 + a2, b1 + b2, m.unwrap_or(0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a.clone()),
            Scalar::Ext { a, b, m } => Scalar::Ext { a: -a.clone(), b: -b.clone(), m: *m },
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let m = self.join_m(other);
        let (a1, b1, _) = self.parts();
        let (a2, b2, _) = other.parts();
        match m {
            None => Scalar::Rational(a1 * a2),
            Some(m) => {
                let a = &a1 * &a2 + &b1 * &b2 * rat_int(m);
                let b = a1 * b2 + a2 * b1;
                Scalar::ext(a, b, m)
            }
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        match self {
            Scalar::Rational(a) => {
                assert!(!a.is_zero(), "division by zero scalar");
                Scalar::Rational(a.recip())
            }
            Scalar::Ext { a, b, m } => {
                let n = self.norm();
                assert!(!n.is_zero(), "division by zero scalar");
                Scalar::ext(a / &n, -b / &n, *m)
            }
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        self.mul(&Scalar::Rational(c.clone()))
    }

    /// Square root inside the same field, when one exists.
    ///
    /// For a rational `p`: returns `sqrt(p)` if `p` is a square, otherwise
    /// `None` here (use [`sqrt_as_scalar`] to move into an extension).
    /// For `p + q*sqrt(m)`: solves `(u + v*sqrt(m))^2 = self` exactly.
    pub fn sqrt_in_field(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(p) => rat_sqrt_exact(p).map(Scalar::Rational),
            Scalar::Ext { a: p, b: q, m } => {
                // (u + v sqrt(m))^2 = p + q sqrt(m) forces
                // u^2 + m v^2 = p and 2uv = q, hence u^2 is a rational
                // root of t^2 - p t + m q^2 / 4.
                let mq2_4 = rat_int(*m) * q * q / rat_int(4);
                let disc = p * p - rat_int(4) * &mq2_4;
                let sd = rat_sqrt_exact(&disc)?;
                for sign in [Rat::one(), -Rat::one()] {
                    let u2 = (p + &sign * &sd) / rat_int(2);
                    if let Some(u) = rat_sqrt_exact(&u2) {
                        if !u.is_zero() {
                            let v = q / (rat_int(2) * &u);
                            return Some(Scalar::ext(u, v, *m));
                        }
                    }
                }
                None
            }
        }
    }
}

/// Square root of `x` inside the fixed field `Q(sqrt(m))` (`m = None`
/// meaning the rationals). Unlike [`Scalar::sqrt_in_field`], a rational
/// argument may have the irrational root `v*sqrt(m)`.
pub fn sqrt_in_q_sqrt(x: &Scalar, m: Option<i64>) -> Option<Scalar> {
    match (x, m) {
        (s, None) => s.sqrt_in_field(),
        (Scalar::Rational(p), Some(m)) => {
            if let Some(r) = rat_sqrt_exact(p) {
                return Some(Scalar::Rational(r));
            }
            // p = m * v^2 gives sqrt(p) = v * sqrt(m).
            let v2 = p / rat_int(m);
            rat_sqrt_exact(&v2).map(|v| Scalar::ext(Rat::zero(), v, m))
        }
        (Scalar::Ext { .. }, Some(m)) if x.ext_m() == Some(m) => x.sqrt_in_field(),
        _ => None,
    }
}

/// Square root of a rational as a scalar, moving into `Q(sqrt(m))` when
/// needed: `sqrt(p/r) = (s/r) * sqrt(m)` with `p*r = s^2 * m`, `m` squarefree.
pub fn sqrt_as_scalar(q: &Rat) -> Scalar {
    if q.is_zero() {
        return Scalar::zero();
    }
    let p = q.numer() * q.denom();
    let (s, m) = squarefree_decompose(&p);
    let b = Rat::new(s, q.denom().clone());
    if m.is_one() {
        return Scalar::Rational(b);
    }
    let m_small: i64 = (&m).try_into().expect("extension discriminant exceeds i64");
    Scalar::ext(Rat::zero(), b, m_small)
}

/// Exact rational square root, if the argument is a perfect square.
pub fn rat_sqrt_exact(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    if q.is_zero() {
        return Some(Rat::zero());
    }
    let sn = q.numer().sqrt();
    let sd = q.denom().sqrt();
    if &(&sn * &sn) == q.numer() && &(&sd * &sd) == q.denom() {
        Some(Rat::new(sn, sd))
    } else {
        None
    }
}

/// Writes `n = s^2 * m` with `m` squarefree (including sign), by trial
/// division up to 10^6 followed by a perfect-square check on the cofactor.
/// A cofactor divisible by the square of a prime above the bound is left in
/// `m`; arithmetic in `Q(sqrt(m))` stays exact either way because only the
/// value of `m` is used.
pub fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero(), "squarefree decomposition of zero");
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut rem = n.abs();
    let mut s = BigInt::one();
    let mut m = BigInt::one();
    let mut d = BigInt::from(2u32);
    let bound = BigInt::from(1_000_000u64);
    while &d * &d <= rem && d <= bound {
        let mut count = 0u32;
        while (&rem % &d).is_zero() {
            rem /= &d;
            count += 1;
        }
        if count > 0 {
            s *= d.pow(count / 2);
            if count % 2 == 1 {
                m *= &d;
            }
        }
        d += if d == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if !rem.is_one() {
        let r = rem.sqrt();
        if &r * &r == rem {
            s *= r;
        } else {
            m *= rem;
        }
    }
    (s, m * BigInt::from(sign))
}

fn squarefree_decompose_i64(n: i64) -> (i64, i64) {
    let (s, m) = squarefree_decompose(&BigInt::from(n));
    (
        (&s).try_into().expect("square part exceeds i64"),
        (&m).try_into().expect("squarefree part exceeds i64"),
    )
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(a) => write!(f, "{a}"),
            Scalar::Ext { a, b, m } => {
                if a.is_zero() {
                    write!(f, "{b}*sqrt({m})")
                } else if b.is_negative() {
                    write!(f, "{a} - {}*sqrt({m})", -b.clone())
                } else {
                    write!(f, "{a} + {b}*sqrt({m})")
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Exact field operations shared by [`Rat`] and [`Scalar`], so linear
/// algebra can be written once for both.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn f_zero() -> Self;
    fn f_one() -> Self;
    fn f_is_zero(&self) -> bool;
    fn f_add(&self, o: &Self) -> Self;
    fn f_sub(&self, o: &Self) -> Self;
    fn f_mul(&self, o: &Self) -> Self;
    fn f_div(&self, o: &Self) -> Self;
    fn f_neg(&self) -> Self;
}

impl Field for Rat {
    fn f_zero() -> Self {
        Rat::zero()
    }
    fn f_one() -> Self {
        Rat::one()
    }
    fn f_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn f_add(&self, o: &Self) -> Self {
        self + o
    }
    fn f_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn f_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn f_div(&self, o: &Self) -> Self {
        self / o
    }
    fn f_neg(&self) -> Self {
        -self
    }
}

impl Field for Scalar {
    fn f_zero() -> Self {
        Scalar::zero()
    }
    fn f_one() -> Self {
        Scalar::one()
    }
    fn f_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn f_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn f_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn f_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn f_div(&self, o: &Self) -> Self {
        self.div(o)
    }
    fn f_neg(&self) -> Self {
        self.neg()
    }
}
