use std::fmt;
use std::str::FromStr;

use super::{Field, Rat, Real, ScalarError};

/// Absolute/relative comparison tolerance of the binary64 adapter.
pub const F64_TOLERANCE: f64 = 1e-9;

/// Binary64 scalars compared up to [`F64_TOLERANCE`].
///
/// Only meant for sampling fallbacks; equality is not transitive.
#[derive(Clone, Copy, Debug, PartialOrd)]
pub struct F64(pub f64);

impl PartialEq for F64 {
    fn eq(&self, other: &F64) -> bool {
        let scale = 1.0f64.max(self.0.abs()).max(other.0.abs());
        (self.0 - other.0).abs() <= F64_TOLERANCE * scale
    }
}

impl Field for F64 {
    fn zero() -> F64 {
        F64(0.0)
    }
    fn one() -> F64 {
        F64(1.0)
    }
    fn is_zero(&self) -> bool {
        self.0.abs() <= F64_TOLERANCE
    }
    fn add(&self, rhs: &F64) -> F64 {
        F64(self.0 + rhs.0)
    }
    fn sub(&self, rhs: &F64) -> F64 {
        F64(self.0 - rhs.0)
    }
    fn mul(&self, rhs: &F64) -> F64 {
        F64(self.0 * rhs.0)
    }
    fn neg(&self) -> F64 {
        F64(-self.0)
    }
    fn inv(&self) -> Result<F64, ScalarError> {
        if self.is_zero() {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(F64(1.0 / self.0))
        }
    }
    fn from_rat(r: &Rat) -> F64 {
        F64(r.to_f64())
    }
}

impl Real for F64 {
    fn sqrt_exact(&self) -> Option<F64> {
        if self.0 < -F64_TOLERANCE {
            None
        } else {
            Some(F64(self.0.max(0.0).sqrt()))
        }
    }

    fn to_f64(&self) -> f64 {
        self.0
    }
}

impl fmt::Display for F64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for F64 {
    type Err = std::num::ParseFloatError;
    fn from_str(s: &str) -> Result<F64, Self::Err> {
        s.trim().parse().map(F64)
    }
}
