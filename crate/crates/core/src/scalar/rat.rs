//! Arbitrary-precision rationals with an inline machine-word fast path.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Field, Real, ScalarError};

/// Exact rational number in lowest terms with a positive denominator.
///
/// Values whose numerator and denominator fit in `i64` (excluding `i64::MIN`)
/// are stored inline; everything else is a `BigRational`. The representation is
/// canonical, so structural equality is numeric equality.
#[derive(Clone)]
pub struct Rat(Repr);

#[derive(Clone, PartialEq, Eq)]
enum Repr {
    Small(i64, i64),
    Big(BigRational),
}

const LIMIT: i128 = i64::MAX as i128;

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
        let (mut x, mut y) = (a as u64, b as u64);
        while y != 0 {
            let t = x % y;
            x = y;
            y = t;
        }
        return x as u128;
    }
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rat {
    pub fn new(num: i64, den: i64) -> Rat {
        assert!(den != 0, "zero denominator");
        Rat::from_i128(num as i128, den as i128)
    }

    fn from_i128(mut n: i128, mut d: i128) -> Rat {
        debug_assert!(d != 0);
        if n == 0 {
            return Rat(Repr::Small(0, 1));
        }
        if d < 0 {
            // |n|, |d| < 2^127 here because callers only pass products of i64s.
            n = -n;
            d = -d;
        }
        let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
        if g > 1 {
            n /= g;
            d /= g;
        }
        if (-LIMIT..=LIMIT).contains(&n) && d <= LIMIT {
            Rat(Repr::Small(n as i64, d as i64))
        } else {
            Rat(Repr::Big(BigRational::new_raw(n.into(), d.into())))
        }
    }

    pub fn from_big(r: BigRational) -> Rat {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => Rat(Repr::Small(n, d)),
            _ => Rat(Repr::Big(r)),
        }
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Rat {
        assert!(!den.is_zero(), "zero denominator");
        Rat::from_big(BigRational::new(num, den))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(r) => {
                if r.is_negative() {
                    -1
                } else if r.is_zero() {
                    0
                } else {
                    1
                }
            }
        }
    }

    pub fn abs(&self) -> Rat {
        if self.signum() < 0 {
            Field::neg(self)
        } else {
            self.clone()
        }
    }

    /// Square root when both numerator and denominator are perfect squares.
    pub fn sqrt(&self) -> Option<Rat> {
        if self.signum() < 0 {
            return None;
        }
        let (n, d) = (self.numer(), self.denom());
        let (rn, rd) = (n.sqrt(), d.sqrt());
        if &rn * &rn == n && &rd * &rd == d {
            Some(Rat::from_bigints(rn, rd))
        } else {
            None
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::from_i128(n as i128, 1)
    }
}

impl From<i32> for Rat {
    fn from(n: i32) -> Rat {
        Rat::from(n as i64)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Rat {
        Rat::from_big(BigRational::from_integer(n))
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Rat) -> bool {
        self.0 == other.0
    }
}

impl Eq for Rat {}

impl Hash for Rat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(r) => {
                r.numer().hash(state);
                r.denom().hash(state);
            }
        }
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Rat) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Field for Rat {
    fn zero() -> Rat {
        Rat(Repr::Small(0, 1))
    }

    fn one() -> Rat {
        Rat(Repr::Small(1, 1))
    }

    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    fn add(&self, rhs: &Rat) -> Rat {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if b == d {
                    return Rat::from_i128(*a as i128 + *c as i128, *b as i128);
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Rat::from_i128(a * d + c * b, b * d)
            }
            _ => Rat::from_big(self.to_big() + rhs.to_big()),
        }
    }

    fn sub(&self, rhs: &Rat) -> Rat {
        self.add(&Field::neg(rhs))
    }

    fn mul(&self, rhs: &Rat) -> Rat {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                Rat::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rat::from_big(self.to_big() * rhs.to_big()),
        }
    }

    fn neg(&self) -> Rat {
        match &self.0 {
            Repr::Small(n, d) => Rat(Repr::Small(-n, *d)),
            Repr::Big(r) => Rat(Repr::Big(-r)),
        }
    }

    fn inv(&self) -> Result<Rat, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Small(n, d) => Rat::from_i128(*d as i128, *n as i128),
            Repr::Big(r) => Rat::from_big(r.recip()),
        })
    }

    fn from_rat(r: &Rat) -> Rat {
        r.clone()
    }

    fn from_i64(n: i64) -> Rat {
        Rat::from(n)
    }
}

impl Real for Rat {
    fn sqrt_exact(&self) -> Option<Rat> {
        self.sqrt()
    }

    fn primitive_scale(xs: &[Rat]) -> Rat {
        let first = match xs.iter().find(|x| !x.is_zero()) {
            Some(x) => x,
            None => return Rat::one(),
        };
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for x in xs.iter().filter(|x| !x.is_zero()) {
            g = g.gcd(&x.numer());
            l = l.lcm(&x.denom());
        }
        let s = Rat::from_bigints(g, l);
        if first.signum() < 0 {
            Field::neg(&s)
        } else {
            s
        }
    }

    fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRatError(String);

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Rat, ParseRatError> {
        let err = || ParseRatError(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Rat::from_bigints(n, d))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

mod ops {
    use std::ops::{Add, Mul, Neg, Sub};

    use super::Rat;
    use crate::scalar::Field;

    macro_rules! forward_ops {
        ($($tr:ident $m:ident),*) => {$(
            impl $tr for Rat {
                type Output = Rat;
                fn $m(self, rhs: Rat) -> Rat {
                    Field::$m(&self, &rhs)
                }
            }
            impl<'a> $tr<&'a Rat> for &'a Rat {
                type Output = Rat;
                fn $m(self, rhs: &'a Rat) -> Rat {
                    Field::$m(self, rhs)
                }
            }
        )*};
    }

    forward_ops!(Add add, Sub sub, Mul mul);

    impl Neg for Rat {
        type Output = Rat;
        fn neg(self) -> Rat {
            Field::neg(&self)
        }
    }
}
