//! Quaternion algebras `(a, b)_F` over an exact scalar field.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Field, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuatError {
    #[error("structure constants must be nonzero")]
    ZeroConstant,
    #[error("quaternion {0} has zero norm and is not invertible")]
    NonInvertible(String),
}

/// Coordinates in the basis `1, i, j, ij`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quaternion<F> {
    pub x0: F,
    pub x1: F,
    pub x2: F,
    pub x3: F,
}

impl<F: Field> Quaternion<F> {
    pub fn new(x0: F, x1: F, x2: F, x3: F) -> Self {
        Quaternion { x0, x1, x2, x3 }
    }

    pub fn scalar(x0: F) -> Self {
        Quaternion::new(x0, F::zero(), F::zero(), F::zero())
    }

    pub fn zero() -> Self {
        Self::scalar(F::zero())
    }

    pub fn one() -> Self {
        Self::scalar(F::one())
    }

    pub fn i() -> Self {
        Quaternion::new(F::zero(), F::one(), F::zero(), F::zero())
    }

    pub fn j() -> Self {
        Quaternion::new(F::zero(), F::zero(), F::one(), F::zero())
    }

    /// `ij`.
    pub fn k() -> Self {
        Quaternion::new(F::zero(), F::zero(), F::zero(), F::one())
    }

    pub fn from_rats(x: [Rat; 4]) -> Self {
        let [a, b, c, d] = x;
        Quaternion::new(F::from_rat(&a), F::from_rat(&b), F::from_rat(&c), F::from_rat(&d))
    }

    pub fn from_ints(x: [i64; 4]) -> Self {
        Quaternion::new(F::from_i64(x[0]), F::from_i64(x[1]), F::from_i64(x[2]), F::from_i64(x[3]))
    }

    pub fn coords(&self) -> [&F; 4] {
        [&self.x0, &self.x1, &self.x2, &self.x3]
    }

    pub fn pure_coords(&self) -> [&F; 3] {
        [&self.x1, &self.x2, &self.x3]
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|c| c.is_zero())
    }

    /// True when the quaternion lies in the centre `F`.
    pub fn is_scalar(&self) -> bool {
        self.pure_coords().iter().all(|c| c.is_zero())
    }

    pub fn real_part(&self) -> F {
        self.x0.clone()
    }

    pub fn pure_part(&self) -> Self {
        Quaternion::new(F::zero(), self.x1.clone(), self.x2.clone(), self.x3.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        Quaternion::new(
            self.x0.add(&o.x0),
            self.x1.add(&o.x1),
            self.x2.add(&o.x2),
            self.x3.add(&o.x3),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        Quaternion::new(
            self.x0.sub(&o.x0),
            self.x1.sub(&o.x1),
            self.x2.sub(&o.x2),
            self.x3.sub(&o.x3),
        )
    }

    pub fn neg(&self) -> Self {
        Quaternion::new(self.x0.neg(), self.x1.neg(), self.x2.neg(), self.x3.neg())
    }

    pub fn scale(&self, k: &F) -> Self {
        Quaternion::new(self.x0.mul(k), self.x1.mul(k), self.x2.mul(k), self.x3.mul(k))
    }

    pub fn conjugate(&self) -> Self {
        Quaternion::new(self.x0.clone(), self.x1.neg(), self.x2.neg(), self.x3.neg())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Quaternion<G> {
        Quaternion::new(f(&self.x0), f(&self.x1), f(&self.x2), f(&self.x3))
    }

    /// Parseable rendering, e.g. `1 - 3/2*I + K`.
    pub fn to_expr(&self) -> String {
        let mut out = String::new();
        for (c, unit) in self.coords().into_iter().zip(["", "I", "J", "K"]) {
            if c.is_zero() {
                continue;
            }
            let mut s = if unit.is_empty() {
                c.fmt_factor()
            } else if c.is_one() {
                unit.to_string()
            } else if *c == F::one().neg() {
                format!("-{unit}")
            } else {
                format!("{}*{unit}", c.fmt_factor())
            };
            if !out.is_empty() {
                if let Some(rest) = s.strip_prefix('-') {
                    s = format!(" - {rest}");
                } else {
                    s = format!(" + {s}");
                }
            }
            out.push_str(&s);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl<F: Field> fmt::Display for Quaternion<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

impl<F: Field> fmt::Debug for Quaternion<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_expr())
    }
}

/// The algebra `(a, b)_F`: `i^2 = a`, `j^2 = b`, `ji = -ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuatAlgebra<F> {
    a: F,
    b: F,
    ab: F,
}

impl<F: Field> QuatAlgebra<F> {
    pub fn new(a: F, b: F) -> Result<Self, QuatError> {
        if a.is_zero() || b.is_zero() {
            return Err(QuatError::ZeroConstant);
        }
        let ab = a.mul(&b);
        Ok(QuatAlgebra { a, b, ab })
    }

    /// Hamilton's quaternions `(-1, -1)`.
    pub fn hamilton() -> Self {
        Self::new(F::one().neg(), F::one().neg()).expect("nonzero")
    }

    pub fn a(&self) -> &F {
        &self.a
    }

    pub fn b(&self) -> &F {
        &self.b
    }

    pub fn mul(&self, p: &Quaternion<F>, q: &Quaternion<F>) -> Quaternion<F> {
        let (a, b, ab) = (&self.a, &self.b, &self.ab);
        let x0 = p.x0.mul(&q.x0)
            .add(&a.mul(&p.x1.mul(&q.x1)))
            .add(&b.mul(&p.x2.mul(&q.x2)))
            .sub(&ab.mul(&p.x3.mul(&q.x3)));
        let x1 = p.x0.mul(&q.x1)
            .add(&p.x1.mul(&q.x0))
            .add(&b.mul(&p.x3.mul(&q.x2).sub(&p.x2.mul(&q.x3))));
        let x2 = p.x0.mul(&q.x2)
            .add(&p.x2.mul(&q.x0))
            .add(&a.mul(&p.x1.mul(&q.x3).sub(&p.x3.mul(&q.x1))));
        let x3 = p.x0.mul(&q.x3)
            .add(&p.x3.mul(&q.x0))
            .add(&p.x1.mul(&q.x2))
            .sub(&p.x2.mul(&q.x1));
        Quaternion::new(x0, x1, x2, x3)
    }

    /// Reduced norm `x0^2 - a x1^2 - b x2^2 + ab x3^2`.
    pub fn norm(&self, q: &Quaternion<F>) -> F {
        q.x0.square()
            .sub(&self.a.mul(&q.x1.square()))
            .sub(&self.b.mul(&q.x2.square()))
            .add(&self.ab.mul(&q.x3.square()))
    }

    /// Polar form of the norm restricted to pure quaternions; `pure_dot(u, u)`
    /// is the norm of the pure part of `u`.
    pub fn pure_dot(&self, u: &Quaternion<F>, v: &Quaternion<F>) -> F {
        self.a.mul(&u.x1.mul(&v.x1)).neg()
            .sub(&self.b.mul(&u.x2.mul(&v.x2)))
            .add(&self.ab.mul(&u.x3.mul(&v.x3)))
    }

    pub fn inv(&self, q: &Quaternion<F>) -> Result<Quaternion<F>, QuatError> {
        let n = self.norm(q);
        let ninv = n.inv().map_err(|_| QuatError::NonInvertible(q.to_expr()))?;
        Ok(q.conjugate().scale(&ninv))
    }

    pub fn pow(&self, q: &Quaternion<F>, e: u32) -> Quaternion<F> {
        let mut acc = Quaternion::one();
        for _ in 0..e {
            acc = self.mul(&acc, q);
        }
        acc
    }

    pub fn commutator(&self, p: &Quaternion<F>, q: &Quaternion<F>) -> Quaternion<F> {
        self.mul(p, q).sub(&self.mul(q, p))
    }

    pub fn commutes(&self, p: &Quaternion<F>, q: &Quaternion<F>) -> bool {
        self.commutator(p, q).is_zero()
    }

    /// All coordinates pairwise commute.
    pub fn is_central_tuple(&self, v: &[Quaternion<F>]) -> bool {
        v.iter()
            .enumerate()
            .all(|(m, p)| v[m + 1..].iter().all(|q| self.commutes(p, q)))
    }

    /// `q p q^{-1}`.
    pub fn conjugate_by(&self, p: &Quaternion<F>, q: &Quaternion<F>) -> Result<Quaternion<F>, QuatError> {
        let qi = self.inv(q)?;
        Ok(self.mul(&self.mul(q, p), &qi))
    }

    /// `v^q = (q v_1 q^{-1}, ..., q v_n q^{-1})`.
    pub fn conjugate_tuple(
        &self,
        v: &[Quaternion<F>],
        q: &Quaternion<F>,
    ) -> Result<Vec<Quaternion<F>>, QuatError> {
        let qi = self.inv(q)?;
        Ok(v.iter().map(|p| self.mul(&self.mul(q, p), &qi)).collect())
    }
}

/// Splits `q = real_part + im` with `im` pure; `im` is zero iff `q` is scalar.
pub fn imaginary_direction<F: Field>(q: &Quaternion<F>) -> (F, Quaternion<F>) {
    (q.real_part(), q.pure_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::RatFunc;

    type Q = Quaternion<Rat>;

    fn h() -> QuatAlgebra<Rat> {
        QuatAlgebra::hamilton()
    }

    fn q(x: [i64; 4]) -> Q {
        Q::from_ints(x)
    }

    #[test]
    fn hamilton_units() {
        let h = h();
        assert_eq!(h.mul(&Q::i(), &Q::j()), Q::k());
        assert_eq!(h.mul(&Q::j(), &Q::i()), Q::k().neg());
        assert_eq!(h.mul(&Q::k(), &Q::k()), Q::one().neg());
        assert_eq!(h.mul(&Q::i(), &Q::k()), Q::j().neg());
        assert_eq!(h.mul(&Q::j(), &Q::k()), Q::i());
    }

    #[test]
    fn one_plus_i_times_one_minus_i() {
        // (1+i)(1-i) = 1 - i + i - i^2 = 2
        assert_eq!(h().mul(&q([1, 1, 0, 0]), &q([1, -1, 0, 0])), q([2, 0, 0, 0]));
    }

    #[test]
    fn general_algebra_relations() {
        let (al, be) = (RatFunc::var(0), RatFunc::var(1));
        let alg = QuatAlgebra::new(al.clone(), be.clone()).unwrap();
        let (i, j) = (Quaternion::<RatFunc>::i(), Quaternion::<RatFunc>::j());
        assert_eq!(alg.mul(&i, &i), Quaternion::scalar(al.clone()));
        assert_eq!(alg.mul(&j, &j), Quaternion::scalar(be.clone()));
        assert_eq!(alg.mul(&j, &i), alg.mul(&i, &j).neg());
        let k = Quaternion::<RatFunc>::k();
        assert_eq!(alg.mul(&k, &k), Quaternion::scalar(al.mul(&be).neg()));
    }

    #[test]
    fn zero_constants_rejected() {
        assert_eq!(QuatAlgebra::new(Rat::zero(), Rat::one()), Err(QuatError::ZeroConstant));
    }

    #[test]
    fn split_algebra_inverse_fails() {
        // (1, 1) is split: 1 + i has norm 0.
        let m = QuatAlgebra::new(Rat::one(), Rat::one()).unwrap();
        assert!(matches!(m.inv(&q([1, 1, 0, 0])), Err(QuatError::NonInvertible(_))));
        assert!(m.inv(&q([1, 0, 0, 0])).is_ok());
    }

    #[test]
    fn commutation_examples() {
        let h = h();
        assert!(h.commutes(&Q::i(), &q([1, 2, 0, 0])));
        assert!(!h.commutes(&Q::i(), &Q::j()));
        assert!(h.is_central_tuple(&[Q::j(), Q::one(), Q::j()]));
        assert!(!h.is_central_tuple(&[Q::i(), Q::one(), Q::j()]));
    }

    #[test]
    fn conjugation_examples() {
        let h = h();
        assert_eq!(h.conjugate_tuple(&[Q::j()], &Q::i()).unwrap(), vec![Q::j().neg()]);
        let v = [q([1, 0, 0, 0]), q([2, 0, 0, 0])];
        assert_eq!(h.conjugate_tuple(&v, &q([3, 1, -2, 5])).unwrap(), v.to_vec());
        assert!(h.conjugate_tuple(&v, &Q::zero()).is_err());
    }

    #[test]
    fn imaginary_direction_examples() {
        assert_eq!(imaginary_direction(&q([1, 2, 0, 0])), (Rat::from(1), q([0, 2, 0, 0])));
        assert_eq!(imaginary_direction(&q([5, 0, 0, 0])), (Rat::from(5), Q::zero()));
        assert_eq!(imaginary_direction(&q([3, 1, 1, 0])), (Rat::from(3), q([0, 1, 1, 0])));
    }

    #[test]
    fn expression_rendering() {
        assert_eq!(q([1, -1, 0, 2]).to_expr(), "1 - I + 2*K");
        assert_eq!(Q::new(Rat::new(-3, 2), Rat::zero(), Rat::one(), Rat::zero()).to_expr(), "-3/2 + J");
        assert_eq!(Q::zero().to_expr(), "0");
    }
}
