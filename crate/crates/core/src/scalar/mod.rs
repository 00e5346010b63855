//! Exact scalar fields.
//!
//! Everything above this module is generic over [`Field`]. Three instances are
//! provided: [`Rat`] (exact rationals, the default), [`F64`] (binary64 with a
//! comparison tolerance, for fallback sampling) and [`RatFunc`] (rational
//! functions over `Rat` in named indeterminates).

mod float;
mod funcfield;
mod mpoly;
mod rat;

pub use float::{F64, F64_TOLERANCE};
pub use funcfield::{poly_valuation, residue_at, FuncField, Prime, RatFunc, SignedMonomial};
pub use mpoly::{Monomial, MPoly};
pub use rat::Rat;

use std::fmt::{Debug, Display};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("valuation of the zero element is undefined")]
    ZeroElement,
    #[error("element has a pole or zero at the prime (order {0})")]
    PoleAtPi(i64),
    #[error("prime must be linear in the chosen variable: {0}")]
    BadPrime(String),
}

/// A commutative field with exact (or tolerance-based, for [`F64`]) equality.
///
/// Methods take references so that big-number instances are not cloned on
/// every operation.
pub trait Field: Clone + PartialEq + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self, ScalarError>;
    fn from_rat(r: &Rat) -> Self;

    fn div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul(&rhs.inv()?))
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rat(&Rat::from(n))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn square(&self) -> Self {
        self.mul(self)
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Named indeterminates understood by the expression parser (`al`, `be`,
    /// `t` for the function field). Plain numeric fields have none.
    fn named_variable(_name: &str) -> Option<Self> {
        None
    }

    /// Rendering that is safe to use as a factor in a product, e.g. `3/2` or
    /// `(al + t)`. A leading `-` is allowed.
    fn fmt_factor(&self) -> String {
        self.to_string()
    }
}

/// Ordered fields with the extra structure the sphere geometry needs.
pub trait Real: Field + PartialOrd {
    /// Square root inside the field, if it exists.
    fn sqrt_exact(&self) -> Option<Self>;

    /// A scalar `s` such that `xs / s` is in a canonical scaled form (for
    /// rationals: a primitive integer vector whose first nonzero entry is
    /// positive). Must be nonzero when some entry of `xs` is.
    fn primitive_scale(xs: &[Self]) -> Self {
        match xs.iter().find(|x| !x.is_zero()) {
            Some(x) if *x < Self::zero() => Self::one().neg(),
            _ => Self::one(),
        }
    }

    fn to_f64(&self) -> f64;
}
