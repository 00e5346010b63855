//! Polynomials `D[x1, ..., xn]` with left quaternion coefficients and central
//! variables, evaluated by the left-coefficient substitution rule.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quat::{QuatAlgebra, Quaternion};
use crate::scalar::{Field, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("malformed polynomial JSON: {0}")]
    Json(String),
}

/// Sparse polynomial: exponent vectors of length `n` mapped to nonzero
/// coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct QPoly<F> {
    n: usize,
    terms: BTreeMap<Vec<u32>, Quaternion<F>>,
}

impl<F: Field> QPoly<F> {
    pub fn zero(n: usize) -> Self {
        QPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Quaternion<F>) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; n], c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Quaternion::one())
    }

    /// The variable `x_{i+1}` (0-based index `i`).
    pub fn var(n: usize, i: usize) -> Self {
        assert!(i < n, "variable index out of range");
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(e, Quaternion::one())
    }

    pub fn monomial(exps: Vec<u32>, c: Quaternion<F>) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(n: usize, it: impl IntoIterator<Item = (Vec<u32>, Quaternion<F>)>) -> Self {
        let mut p = Self::zero(n);
        for (e, c) in it {
            assert_eq!(e.len(), n, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Quaternion<F>) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<u32>, &Quaternion<F>)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> Quaternion<F> {
        self.terms.get(e).cloned().unwrap_or_else(Quaternion::zero)
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as i64).sum())
            .max()
            .unwrap_or(-1)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// All coefficients lie in the centre.
    pub fn has_scalar_coefficients(&self) -> bool {
        self.terms.values().all(Quaternion::is_scalar)
    }

    /// Variables (0-based) that occur with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect()
    }

    fn check(&self, other: usize) -> Result<(), PolyError> {
        if self.n != other {
            return Err(PolyError::ArityMismatch {
                expected: self.n,
                got: other,
            });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.check(rhs.n)?;
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        QPoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    /// `c * p`, the constant multiplying every coefficient from the left.
    pub fn scale_left(&self, c: &Quaternion<F>, alg: &QuatAlgebra<F>) -> Self {
        let mut out = Self::zero(self.n);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), alg.mul(c, a));
        }
        out
    }

    /// Product; `(a X^e)(b X^f) = (ab) X^{e+f}` since the variables are central.
    pub fn mul(&self, rhs: &Self, alg: &QuatAlgebra<F>) -> Result<Self, PolyError> {
        self.check(rhs.n)?;
        let mut out = Self::zero(self.n);
        for (e1, a) in &self.terms {
            for (e2, b) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                out.add_term(e, alg.mul(a, b));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32, alg: &QuatAlgebra<F>) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..k {
            acc = acc.mul(self, alg).expect("same arity");
        }
        acc
    }

    /// `f(v) = sum a_e v_1^{e_1} ... v_n^{e_n}`, coefficient on the left and
    /// coordinate powers in ascending variable order.
    pub fn eval(&self, v: &[Quaternion<F>], alg: &QuatAlgebra<F>) -> Result<Quaternion<F>, PolyError> {
        self.check(v.len())?;
        let powers = PowerTable::new(v, self, alg);
        let mut acc = Quaternion::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = alg.mul(&t, powers.get(i, k));
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Substitutes a central scalar for one variable; the arity is kept.
    pub fn specialize(&self, var: usize, value: &F) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = std::mem::replace(&mut e2[var], 0);
            out.add_term(e2, c.scale(&value.pow(k)));
        }
        out
    }

    /// Drops trailing variables that do not occur.
    pub fn truncate_arity(&self, n: usize) -> Option<Self> {
        if self.terms.keys().any(|e| e[n..].iter().any(|&x| x > 0)) {
            return None;
        }
        Some(QPoly {
            n,
            terms: self.terms.iter().map(|(e, c)| (e[..n].to_vec(), c.clone())).collect(),
        })
    }

    /// Re-embeds into `m >= n` variables by appending unused ones.
    pub fn extend_arity(&self, m: usize) -> Self {
        assert!(m >= self.n);
        QPoly {
            n: m,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.resize(m, 0);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Parseable text in the CLI grammar, highest terms first.
    pub fn to_expr(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{k}", i + 1)
                    }
                })
                .collect();
            let coeff = c.to_expr();
            let single = c.coords().iter().filter(|x| !x.is_zero()).count() == 1;
            let mut term = if mono.is_empty() {
                if single { coeff } else { format!("({coeff})") }
            } else if *c == Quaternion::one() {
                mono.join("*")
            } else if *c == Quaternion::one().neg() {
                format!("-{}", mono.join("*"))
            } else if single {
                format!("{coeff}*{}", mono.join("*"))
            } else {
                format!("({coeff})*{}", mono.join("*"))
            };
            if !out.is_empty() {
                term = match term.strip_prefix('-') {
                    Some(rest) => format!(" - {rest}"),
                    None => format!(" + {term}"),
                };
            }
            out.push_str(&term);
        }
        out
    }
}

/// Memoized coordinate powers for repeated evaluation at one point.
struct PowerTable<F> {
    pows: Vec<Vec<Quaternion<F>>>,
}

impl<F: Field> PowerTable<F> {
    fn new(v: &[Quaternion<F>], p: &QPoly<F>, alg: &QuatAlgebra<F>) -> Self {
        let pows = v
            .iter()
            .enumerate()
            .map(|(i, q)| {
                let d = p.degree_in(i) as usize;
                let mut row = Vec::with_capacity(d + 1);
                row.push(Quaternion::one());
                for k in 1..=d {
                    let next = alg.mul(&row[k - 1], q);
                    row.push(next);
                }
                row
            })
            .collect();
        PowerTable { pows }
    }

    fn get(&self, i: usize, k: u32) -> &Quaternion<F> {
        &self.pows[i][k as usize]
    }
}

impl<F: Field> fmt::Display for QPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

impl<F: Field> fmt::Debug for QPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly[n={}]({})", self.n, self.to_expr())
    }
}

#[derive(Serialize, Deserialize)]
struct JsonCoeff {
    x0: String,
    x1: String,
    x2: String,
    x3: String,
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    exps: Vec<u32>,
    coeff: JsonCoeff,
}

#[derive(Serialize, Deserialize)]
struct JsonPoly {
    n: usize,
    terms: Vec<JsonTerm>,
}

impl<F: Field> QPoly<F> {
    /// `{n, terms: [{exps, coeff: {x0, x1, x2, x3}}]}` with scalars as strings.
    pub fn to_json(&self) -> serde_json::Value {
        let jp = JsonPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| JsonTerm {
                    exps: e.clone(),
                    coeff: JsonCoeff {
                        x0: c.x0.to_string(),
                        x1: c.x1.to_string(),
                        x2: c.x2.to_string(),
                        x3: c.x3.to_string(),
                    },
                })
                .collect(),
        };
        serde_json::to_value(jp).expect("serializable")
    }
}

impl<F: Field + FromStr> QPoly<F> {
    pub fn from_json(v: &serde_json::Value) -> Result<Self, PolyError> {
        let jp: JsonPoly =
            serde_json::from_value(v.clone()).map_err(|e| PolyError::Json(e.to_string()))?;
        let parse = |s: &str| {
            s.parse::<F>()
                .map_err(|_| PolyError::Json(format!("bad scalar `{s}`")))
        };
        let mut p = Self::zero(jp.n);
        for t in jp.terms {
            if t.exps.len() != jp.n {
                return Err(PolyError::ArityMismatch {
                    expected: jp.n,
                    got: t.exps.len(),
                });
            }
            let c = Quaternion::new(
                parse(&t.coeff.x0)?,
                parse(&t.coeff.x1)?,
                parse(&t.coeff.x2)?,
                parse(&t.coeff.x3)?,
            );
            p.add_term(t.exps, c);
        }
        Ok(p)
    }
}

/// A pool of small exact quaternions for instance generation.
pub fn default_coeff_pool<F: Field>() -> Vec<Quaternion<F>> {
    let r = |n, d| Rat::new(n, d);
    let z = || Rat::zero();
    [
        [r(1, 1), z(), z(), z()],
        [r(-1, 1), z(), z(), z()],
        [r(2, 1), z(), z(), z()],
        [z(), r(1, 1), z(), z()],
        [z(), z(), r(1, 1), z()],
        [z(), z(), z(), r(1, 1)],
        [r(1, 1), r(1, 1), z(), z()],
        [r(1, 1), z(), r(-1, 1), z()],
        [r(2, 1), z(), z(), r(1, 1)],
        [z(), r(1, 1), r(1, 1), z()],
        [z(), r(-1, 1), z(), r(1, 2)],
        [r(1, 2), z(), r(1, 1), z()],
        [r(-3, 1), r(1, 1), r(2, 1), r(-1, 1)],
    ]
    .into_iter()
    .map(Quaternion::from_rats)
    .collect()
}

/// Random polynomial with at most `n_terms` terms of total degree at most
/// `max_deg`, coefficients drawn from `pool`.
pub fn random_poly_with<F: Field, R: Rng>(
    rng: &mut R,
    n: usize,
    max_deg: u32,
    n_terms: usize,
    pool: &[Quaternion<F>],
) -> QPoly<F> {
    let mut p = QPoly::zero(n);
    for _ in 0..n_terms {
        let mut e = vec![0u32; n];
        if n > 0 {
            let d = rng.gen_range(0..=max_deg);
            for _ in 0..d {
                e[rng.gen_range(0..n)] += 1;
            }
        }
        let c = pool.choose(rng).cloned().unwrap_or_else(Quaternion::one);
        p.add_term(e, c);
    }
    p
}

/// Seeded variant of [`random_poly_with`].
pub fn random_poly<F: Field>(
    n: usize,
    max_deg: u32,
    n_terms: usize,
    pool: &[Quaternion<F>],
    seed: u64,
) -> QPoly<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_poly_with(&mut rng, n, max_deg, n_terms, pool)
}

/// A random element `sum p_i g_i` of the left ideal generated by `gens`.
///
/// Roughly three generators get a nonzero multiplier `p_i` with one or two
/// terms of degree at most `max_deg`.
pub fn random_left_combination_with<F: Field, R: Rng>(
    rng: &mut R,
    gens: &[QPoly<F>],
    max_deg: u32,
    pool: &[Quaternion<F>],
    alg: &QuatAlgebra<F>,
) -> QPoly<F> {
    let n = gens.first().map_or(0, QPoly::arity);
    let p_active = (3.0 / gens.len().max(1) as f64).min(1.0);
    let mut acc = QPoly::zero(n);
    for g in gens {
        if !rng.gen_bool(p_active) {
            continue;
        }
        let terms = rng.gen_range(1..=2);
        let m = random_poly_with(rng, n, max_deg, terms, pool);
        let prod = m.mul(g, alg).expect("generators share arity");
        acc = acc.add(&prod).expect("generators share arity");
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::RatFunc;

    type Q = Quaternion<Rat>;
    type P = QPoly<Rat>;

    fn h() -> QuatAlgebra<Rat> {
        QuatAlgebra::hamilton()
    }

    /// (x - i)(x - j) in one variable.
    fn x_minus_i_x_minus_j() -> P {
        let h = h();
        let x = P::var(1, 0);
        let a = x.sub(&P::constant(1, Q::i())).unwrap();
        let b = x.sub(&P::constant(1, Q::j())).unwrap();
        a.mul(&b, &h).unwrap()
    }

    #[test]
    fn product_examples() {
        let h = h();
        let ix = P::monomial(vec![1], Q::i());
        let jx = P::monomial(vec![1], Q::j());
        assert_eq!(ix.mul(&jx, &h).unwrap(), P::monomial(vec![2], Q::k()));

        // hand expansion: x^2 - (i + j) x + ij
        let expected = P::from_terms(
            1,
            [
                (vec![2], Q::one()),
                (vec![1], Q::from_ints([0, -1, -1, 0])),
                (vec![0], Q::k()),
            ],
        );
        assert_eq!(x_minus_i_x_minus_j(), expected);
        assert_eq!(expected.mul(&P::one(1), &h).unwrap(), expected);
        assert!(P::one(1).mul(&P::one(2), &h).is_err());
    }

    #[test]
    fn substitution_is_not_multiplicative() {
        let h = h();
        let p = x_minus_i_x_minus_j();
        assert_eq!(p.eval(&[Q::j()], &h).unwrap(), Q::zero());
        // (x - i) vanishes at i, the product does not: -1 - (i^2 + ji) + k = 2k
        assert_eq!(p.eval(&[Q::i()], &h).unwrap(), Q::from_ints([0, 0, 0, 2]));
        assert!(p.eval(&[Q::i(), Q::j()], &h).is_err());
    }

    #[test]
    fn counterexample_polynomial_vanishes_at_i_j() {
        type R = Quaternion<RatFunc>;
        let (al, be, t) = (RatFunc::var(0), RatFunc::var(1), RatFunc::var(2));
        let alg = QuatAlgebra::new(al.clone(), be.clone()).unwrap();
        let x2 = QPoly::<RatFunc>::monomial(vec![2, 0], R::one());
        let y2 = QPoly::<RatFunc>::monomial(vec![0, 2], R::one());
        let p = x2
            .sub(&QPoly::constant(2, R::scalar(al)))
            .unwrap()
            .add(
                &y2.sub(&QPoly::constant(2, R::scalar(be)))
                    .unwrap()
                    .scale_left(&R::scalar(t), &alg),
            )
            .unwrap();
        assert_eq!(p.eval(&[R::i(), R::j()], &alg).unwrap(), R::zero());
    }

    #[test]
    fn random_poly_contract() {
        let pool = default_coeff_pool::<Rat>();
        assert!(random_poly(3, 4, 0, &pool, 1).is_zero());
        assert_eq!(random_poly(3, 4, 5, &pool, 9), random_poly(3, 4, 5, &pool, 9));
        for s in 0..100 {
            assert!(random_poly(4, 3, 6, &pool, s).degree() <= 3);
        }
    }

    #[test]
    fn zero_degree_is_minus_one() {
        assert_eq!(P::zero(2).degree(), -1);
        assert_eq!(P::one(2).degree(), 0);
    }

    #[test]
    fn specialize_and_arity() {
        let h = h();
        // x1^2 * x3 with x3 := 2 -> 2 x1^2, then drop x3
        let p = P::monomial(vec![2, 0, 1], Q::i());
        let s = p.specialize(2, &Rat::from(2));
        assert_eq!(s, P::monomial(vec![2, 0, 0], Q::from_ints([0, 2, 0, 0])));
        assert_eq!(s.truncate_arity(1).unwrap().arity(), 1);
        assert!(p.truncate_arity(2).is_none());
        assert_eq!(p.extend_arity(4).eval(&[Q::one(), Q::one(), Q::one(), Q::j()], &h).unwrap(), Q::i());
    }

    #[test]
    fn json_roundtrip() {
        let p = x_minus_i_x_minus_j();
        let v = p.to_json();
        assert_eq!(v["n"], 1);
        assert_eq!(P::from_json(&v).unwrap(), p);
    }

    #[test]
    fn expression_text() {
        assert_eq!(x_minus_i_x_minus_j().to_expr(), "x1^2 + (-I - J)*x1 + K");
        assert_eq!(P::zero(2).to_expr(), "0");
    }
}
