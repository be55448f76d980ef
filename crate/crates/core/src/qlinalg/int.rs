//! Arbitrary-precision integers with an inline machine-word fast path.
//!
//! Values that fit in an `i64` never touch the heap; every operation checks
//! for overflow and promotes to [`BigInt`] when needed. Results are always
//! normalised back to the inline form when they fit, so equality and hashing
//! are structural.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone)]
pub enum Int {
    Small(i64),
    Big(BigInt),
}

impl Int {
    pub const ZERO: Int = Int::Small(0);
    pub const ONE: Int = Int::Small(1);

    fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(b),
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => b.clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self {
            Int::Small(v) => u64::try_from(*v).ok(),
            Int::Big(b) => b.to_u64(),
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Int::Small(1) | Int::Small(-1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Int::Small(v) => *v < 0,
            Int::Big(b) => b.is_negative(),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Int::Small(v) => v.signum() as i32,
            Int::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn abs(&self) -> Int {
        match self {
            Int::Small(v) => match v.checked_abs() {
                Some(a) => Int::Small(a),
                None => Int::Big(BigInt::from(*v).abs()),
            },
            Int::Big(b) => Int::from_big(b.abs()),
        }
    }

    /// Number of bits in the magnitude; zero has bit length 0.
    pub fn bits(&self) -> u64 {
        match self {
            Int::Small(v) => 64 - v.unsigned_abs().leading_zeros() as u64,
            Int::Big(b) => b.bits(),
        }
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Int) -> Int {
        match (self, d) {
            (Int::Small(a), Int::Small(b)) => {
                if let Some(q) = a.checked_div(*b) {
                    assert!(q.wrapping_mul(*b) == *a, "inexact division {a} / {b}");
                    return Int::Small(q);
                }
            }
            _ => {}
        }
        let (q, r) = self.to_bigint().div_rem(&d.to_bigint());
        assert!(r.is_zero(), "inexact division");
        Int::from_big(q)
    }

    pub fn divides(&self, other: &Int) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.mod_floor(&self.abs()).is_zero()
    }

    /// Floor division.
    pub fn div_floor(&self, d: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, d) {
            if *b != 0 && !(*a == i64::MIN && *b == -1) {
                return Int::Small(a.div_floor(b));
            }
        }
        Int::from_big(self.to_bigint().div_floor(&d.to_bigint()))
    }

    /// Floor remainder; for positive `d` the result lies in `[0, d)`.
    pub fn mod_floor(&self, d: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, d) {
            if *b != 0 && !(*a == i64::MIN && *b == -1) {
                return Int::Small(a.mod_floor(b));
            }
        }
        Int::from_big(self.to_bigint().mod_floor(&d.to_bigint()))
    }

    /// Non-negative gcd.
    pub fn gcd(&self, other: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, other) {
            if *a != i64::MIN && *b != i64::MIN {
                return Int::Small(a.gcd(b));
            }
        }
        Int::from_big(self.to_bigint().gcd(&other.to_bigint()))
    }

    pub fn lcm(&self, other: &Int) -> Int {
        if self.is_zero() || other.is_zero() {
            return Int::ZERO;
        }
        (self / &self.gcd(other) * other).abs()
    }

    /// Returns `(g, x, y)` with `g = gcd(a, b) >= 0` and `a*x + b*y = g`.
    pub fn ext_gcd(&self, other: &Int) -> (Int, Int, Int) {
        if let (Int::Small(a), Int::Small(b)) = (self, other) {
            if a.unsigned_abs() < (1 << 62) && b.unsigned_abs() < (1 << 62) {
                let (mut r0, mut r1) = (*a as i128, *b as i128);
                let (mut s0, mut s1) = (1i128, 0i128);
                let (mut t0, mut t1) = (0i128, 1i128);
                while r1 != 0 {
                    let q = r0.div_euclid(r1);
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                    (t0, t1) = (t1, t0 - q * t1);
                }
                if r0 < 0 {
                    r0 = -r0;
                    s0 = -s0;
                    t0 = -t0;
                }
                return (
                    Int::from_big(BigInt::from(r0)),
                    Int::from_big(BigInt::from(s0)),
                    Int::from_big(BigInt::from(t0)),
                );
            }
        }
        let e = self.to_bigint().extended_gcd(&other.to_bigint());
        let (mut g, mut x, mut y) = (e.gcd, e.x, e.y);
        if g.is_negative() {
            g = -g;
            x = -x;
            y = -y;
        }
        (Int::from_big(g), Int::from_big(x), Int::from_big(y))
    }

    pub fn pow(&self, e: u32) -> Int {
        let mut acc = Int::ONE;
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::Small(v)
    }
}

impl From<i32> for Int {
    fn from(v: i32) -> Self {
        Int::Small(v as i64)
    }
}

impl From<u64> for Int {
    fn from(v: u64) -> Self {
        match i64::try_from(v) {
            Ok(s) => Int::Small(s),
            Err(_) => Int::Big(BigInt::from(v)),
        }
    }
}

impl From<usize> for Int {
    fn from(v: usize) -> Self {
        Int::from(v as u64)
    }
}

impl From<BigInt> for Int {
    fn from(b: BigInt) -> Self {
        Int::from_big(b)
    }
}

impl Default for Int {
    fn default() -> Self {
        Int::ZERO
    }
}

impl PartialEq for Int {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a == b,
            (Int::Big(a), Int::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Int {}

impl Hash for Int {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Int::Small(v) => {
                0u8.hash(state);
                v.hash(state)
            }
            Int::Big(b) => {
                1u8.hash(state);
                b.hash(state)
            }
        }
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_bigint().cmp(&other.to_bigint()),
        }
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident, $op:tt) => {
        impl<'a> $tr<&'a Int> for &'a Int {
            type Output = Int;
            #[inline]
            fn $method(self, rhs: &'a Int) -> Int {
                if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
                    if let Some(v) = a.$checked(*b) {
                        return Int::Small(v);
                    }
                }
                Int::from_big(self.to_bigint() $op rhs.to_bigint())
            }
        }
        impl $tr<Int> for Int {
            type Output = Int;
            #[inline]
            fn $method(self, rhs: Int) -> Int {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Int> for Int {
            type Output = Int;
            #[inline]
            fn $method(self, rhs: &'a Int) -> Int {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<Int> for &'a Int {
            type Output = Int;
            #[inline]
            fn $method(self, rhs: Int) -> Int {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add, +);
binop!(Sub, sub, checked_sub, -);
binop!(Mul, mul, checked_mul, *);

impl<'a> std::ops::Div<&'a Int> for &'a Int {
    type Output = Int;
    /// Truncating division.
    fn div(self, rhs: &'a Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_div(*b) {
                return Int::Small(v);
            }
        }
        Int::from_big(self.to_bigint() / rhs.to_bigint())
    }
}

impl std::ops::Div<Int> for Int {
    type Output = Int;
    fn div(self, rhs: Int) -> Int {
        &self / &rhs
    }
}

impl<'a> std::ops::Div<&'a Int> for Int {
    type Output = Int;
    fn div(self, rhs: &'a Int) -> Int {
        &self / rhs
    }
}

impl Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        match self {
            Int::Small(v) => match v.checked_neg() {
                Some(n) => Int::Small(n),
                None => Int::Big(-BigInt::from(*v)),
            },
            Int::Big(b) => Int::from_big(-b.clone()),
        }
    }
}

impl Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        -&self
    }
}

impl AddAssign<&Int> for Int {
    fn add_assign(&mut self, rhs: &Int) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Int> for Int {
    fn sub_assign(&mut self, rhs: &Int) {
        *self = &*self - rhs;
    }
}

impl Zero for Int {
    fn zero() -> Self {
        Int::ZERO
    }
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
}

impl One for Int {
    fn one() -> Self {
        Int::ONE
    }
}

impl std::iter::Sum for Int {
    fn sum<I: Iterator<Item = Int>>(iter: I) -> Int {
        iter.fold(Int::ZERO, |a, b| a + b)
    }
}

impl std::iter::Product for Int {
    fn product<I: Iterator<Item = Int>>(iter: I) -> Int {
        iter.fold(Int::ONE, |a, b| a * b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Int::from(i64::MAX) + Int::from(1);
        assert!(matches!(big, Int::Big(_)));
        let back = &big - &Int::from(1);
        assert_eq!(back, Int::Small(i64::MAX));
        let sq = Int::from(i64::MIN) * Int::from(i64::MIN);
        assert_eq!(sq.to_bigint(), BigInt::from(i64::MIN) * BigInt::from(i64::MIN));
        assert_eq!(-Int::from(i64::MIN), Int::from(BigInt::from(i64::MIN).neg()));
    }

    #[test]
    fn floor_ops() {
        assert_eq!(Int::from(-7).mod_floor(&Int::from(3)), Int::from(2));
        assert_eq!(Int::from(-7).div_floor(&Int::from(3)), Int::from(-3));
        assert_eq!(Int::from(12).gcd(&Int::from(-18)), Int::from(6));
        assert_eq!(Int::from(4).lcm(&Int::from(6)), Int::from(12));
    }

    proptest! {
        #[test]
        fn matches_bigint(a in any::<i64>(), b in any::<i64>()) {
            let (x, y) = (Int::from(a), Int::from(b));
            let (bx, by) = (BigInt::from(a), BigInt::from(b));
            prop_assert_eq!((&x + &y).to_bigint(), &bx + &by);
            prop_assert_eq!((&x - &y).to_bigint(), &bx - &by);
            prop_assert_eq!((&x * &y).to_bigint(), &bx * &by);
            prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
        }

        #[test]
        fn ext_gcd_bezout(a in -1_000_000i64..1_000_000, b in -1_000_000i64..1_000_000) {
            let (x, y) = (Int::from(a), Int::from(b));
            let (g, s, t) = x.ext_gcd(&y);
            prop_assert_eq!(&(&x * &s) + &(&y * &t), g.clone());
            prop_assert_eq!(g, x.gcd(&y));
        }
    }
}
