//! Rational function fields `Q(u0, u1, ...)`, square classes of signed
//! monomials, and valuations at linear primes.

use std::collections::BTreeMap;
use std::fmt;

use super::mpoly::{gcd, Monomial, MPoly};
use super::{Field, Rat, ScalarError};

/// Names used when printing and parsing function-field elements. Index 0 is
/// `al`, 1 is `be`, 2 is `t`; further indeterminates print as `u3`, `u4`, ...
pub const DEFAULT_VARS: &[&str] = &["al", "be", "t"];

/// An element `num / den` of `Q(u0, u1, ...)`.
///
/// Canonical form: `gcd(num, den) = 1` and `den` has leading coefficient 1
/// (graded-lex), so equal elements are structurally equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<RatFunc, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::from_poly(MPoly::zero()));
        }
        if let Some(c) = den.as_constant() {
            return Ok(RatFunc::from_poly(num.scale(&c.inv()?)));
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides"),
                den.exact_div(&g).expect("gcd divides"),
            )
        };
        let (den, lc) = den.monic();
        let num = num.scale(&lc.inv()?);
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(num: MPoly) -> RatFunc {
        RatFunc {
            num,
            den: MPoly::one(),
        }
    }

    pub fn var(i: usize) -> RatFunc {
        RatFunc::from_poly(MPoly::var(i))
    }

    pub fn constant(c: Rat) -> RatFunc {
        RatFunc::from_poly(MPoly::constant(c))
    }

    pub fn numer(&self) -> &MPoly {
        &self.num
    }

    pub fn denom(&self) -> &MPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_polynomial() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Equality by cross-multiplication; agrees with `==` on canonical forms.
    pub fn cross_eq(&self, other: &RatFunc) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Field for RatFunc {
    fn zero() -> RatFunc {
        RatFunc::from_poly(MPoly::zero())
    }

    fn one() -> RatFunc {
        RatFunc::from_poly(MPoly::one())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            let num = self.num.add(&rhs.num);
            if self.den.is_one() {
                return RatFunc::from_poly(num);
            }
            return RatFunc::new(num, self.den.clone()).expect("nonzero denominator");
        }
        RatFunc::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
        .expect("nonzero denominator")
    }

    fn sub(&self, rhs: &RatFunc) -> RatFunc {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &RatFunc) -> RatFunc {
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(self.num.mul(&rhs.num));
        }
        RatFunc::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den)).expect("nonzero denominator")
    }

    fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn inv(&self) -> Result<RatFunc, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    fn from_rat(r: &Rat) -> RatFunc {
        RatFunc::constant(r.clone())
    }

    fn named_variable(name: &str) -> Option<RatFunc> {
        FuncField::standard().var(name)
    }

    fn fmt_factor(&self) -> String {
        let simple = self.is_polynomial()
            && (self.num.len() <= 1)
            && !self.num.terms().any(|(_, c)| !c.is_integer() && !c.is_one());
        if simple {
            self.to_string()
        } else if self.is_polynomial() {
            format!("({})", self.num)
        } else {
            format!("({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Context naming the indeterminates of a rational function field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuncField {
    names: Vec<String>,
}

impl FuncField {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> FuncField {
        FuncField {
            names: names.into_iter().map(Into::into).collect(),
        }
    }

    /// `Q(al, be, t)`.
    pub fn standard() -> FuncField {
        FuncField::new(DEFAULT_VARS.iter().copied())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn var(&self, name: &str) -> Option<RatFunc> {
        self.index(name).map(RatFunc::var)
    }
}

/// `sign * prod u_i^{e_i}`, with possibly negative exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedMonomial {
    pub sign: i8,
    pub exps: BTreeMap<usize, i32>,
}

impl SignedMonomial {
    pub fn new(sign: i8, exps: impl IntoIterator<Item = (usize, i32)>) -> SignedMonomial {
        assert!(sign == 1 || sign == -1);
        SignedMonomial {
            sign,
            exps: exps.into_iter().filter(|&(_, e)| e != 0).collect(),
        }
    }

    pub fn exp(&self, var: usize) -> i32 {
        self.exps.get(&var).copied().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn mul(&self, other: &SignedMonomial) -> SignedMonomial {
        let mut exps = self.exps.clone();
        for (&v, &e) in &other.exps {
            *exps.entry(v).or_insert(0) += e;
        }
        SignedMonomial::new(self.sign * other.sign, exps)
    }

    /// Representative of the square class: exponents reduced mod 2.
    pub fn normalize_square_class(&self) -> SignedMonomial {
        SignedMonomial::new(
            self.sign,
            self.exps.iter().map(|(&v, &e)| (v, e.rem_euclid(2))),
        )
    }

    pub fn to_ratfunc(&self) -> RatFunc {
        let mut num = Monomial::one();
        let mut den = Monomial::one();
        for (&v, &e) in &self.exps {
            let m = Monomial::new({
                let mut x = vec![0; v + 1];
                x[v] = e.unsigned_abs();
                x
            });
            if e > 0 {
                num = num.mul(&m);
            } else {
                den = den.mul(&m);
            }
        }
        RatFunc::new(
            MPoly::monomial(num, Rat::from(self.sign as i64)),
            MPoly::monomial(den, Rat::one()),
        )
        .expect("monomial denominator")
    }

    /// Splits `e = m * s^2` with `m` a normalized signed monomial, when `e` is
    /// a monomial whose rational coefficient is plus or minus a square.
    pub fn square_class_of(e: &RatFunc) -> Option<(SignedMonomial, RatFunc)> {
        if e.num.len() != 1 || e.den.len() != 1 {
            return None;
        }
        let (mn, cn) = e.num.leading();
        let (md, cd) = e.den.leading();
        let c = cn.mul(&cd.inv().ok()?);
        let sqrt_c = c.abs().sqrt()?;
        let sign: i8 = if c.signum() < 0 { -1 } else { 1 };
        let n = mn.exps().len().max(md.exps().len());
        let raw = SignedMonomial::new(
            sign,
            (0..n).map(|i| (i, mn.exp(i) as i32 - md.exp(i) as i32)),
        );
        let m = raw.normalize_square_class();
        let half = SignedMonomial::new(
            1,
            raw.exps
                .iter()
                .map(|(&v, &x)| (v, (x - x.rem_euclid(2)) / 2)),
        );
        let s = half.to_ratfunc().mul(&RatFunc::constant(sqrt_c));
        Some((m, s))
    }

    pub fn from_ratfunc(e: &RatFunc) -> Option<SignedMonomial> {
        Self::square_class_of(e).map(|(m, _)| m)
    }
}

impl fmt::Display for SignedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ratfunc())
    }
}

impl fmt::Debug for SignedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A prime of `K[x]` where `x` is one indeterminate and `K` is generated by the
/// others, given as `c1 * x + c0` with `c0, c1` free of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prime {
    poly: MPoly,
    var: usize,
    root: RatFunc,
}

impl Prime {
    pub fn linear(poly: MPoly, var: usize) -> Result<Prime, ScalarError> {
        if poly.degree_in(var) != 1 {
            return Err(ScalarError::BadPrime(format!(
                "{poly} has degree {} in the chosen variable",
                poly.degree_in(var)
            )));
        }
        let c1 = poly.coeff_in(var, 1);
        let c0 = poly.coeff_in(var, 0);
        if !gcd(&c0, &c1).is_one() {
            return Err(ScalarError::BadPrime(format!("{poly} is not primitive")));
        }
        let root = RatFunc::from_poly(c0.neg()).div(&RatFunc::from_poly(c1))?;
        Ok(Prime { poly, var, root })
    }

    pub fn poly(&self) -> &MPoly {
        &self.poly
    }

    pub fn var(&self) -> usize {
        self.var
    }

    /// The value the prime's variable takes in the residue field.
    pub fn root(&self) -> &RatFunc {
        &self.root
    }

    pub fn as_ratfunc(&self) -> RatFunc {
        RatFunc::from_poly(self.poly.clone())
    }

    fn reduce(&self, p: &MPoly) -> RatFunc {
        let deg = p.degree_in(self.var);
        let mut acc = RatFunc::zero();
        for k in (0..=deg).rev() {
            acc = acc
                .mul(&self.root)
                .add(&RatFunc::from_poly(p.coeff_in(self.var, k)));
        }
        acc
    }
}

/// `e = pi^order * unit_part` with `unit_part` of order zero at `pi`.
pub fn poly_valuation(e: &RatFunc, pi: &Prime) -> Result<(i64, RatFunc), ScalarError> {
    if e.is_zero() {
        return Err(ScalarError::ZeroElement);
    }
    let (kn, num) = e.num.multiplicity(&pi.poly);
    let (kd, den) = e.den.multiplicity(&pi.poly);
    Ok((kn as i64 - kd as i64, RatFunc::new(num, den)?))
}

/// Image of a unit at `pi` in the residue field.
pub fn residue_at(e: &RatFunc, pi: &Prime) -> Result<RatFunc, ScalarError> {
    let (order, _) = poly_valuation(e, pi)?;
    if order != 0 {
        return Err(ScalarError::PoleAtPi(order));
    }
    let num = pi.reduce(&e.num);
    let den = pi.reduce(&e.den);
    if den.is_zero() || num.is_zero() {
        return Err(ScalarError::PoleAtPi(order));
    }
    num.div(&den)
}
