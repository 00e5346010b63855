//! Sparse multivariate polynomials over `Rat`, used as numerators and
//! denominators of function-field elements.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::{Field, Rat};

/// Exponent vector with trailing zeros trimmed, ordered graded-lex with
/// variable 0 the most significant.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Monomial {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(i: usize) -> Monomial {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial::new((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial::new(
            (0..other.0.len())
                .map(|i| other.exp(i) - self.exp(i))
                .collect(),
        )
    }

    fn with_exp(&self, var: usize, e: u32) -> Monomial {
        let mut v = self.0.clone();
        if v.len() <= var {
            v.resize(var + 1, 0);
        }
        v[var] = e;
        Monomial::new(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly::default()
    }

    pub fn one() -> MPoly {
        MPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> MPoly {
        MPoly::monomial(Monomial::one(), c)
    }

    pub fn var(i: usize) -> MPoly {
        MPoly::monomial(Monomial::var(i), Rat::one())
    }

    pub fn monomial(m: Monomial, c: Rat) -> MPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rat)>) -> MPoly {
        let mut p = MPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value of a constant polynomial (zero included).
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// Leading term under graded-lex order. Panics on zero.
    pub fn leading(&self) -> (&Monomial, &Rat) {
        self.terms.iter().next_back().expect("leading term of zero")
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|m| m.0.len().checked_sub(1))
            .max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    /// Coefficient of `var^k`, as a polynomial not involving `var`.
    pub fn coeff_in(&self, var: usize, k: u32) -> MPoly {
        MPoly::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.exp(var) == k)
                .map(|(m, c)| (m.with_exp(var, 0), c.clone())),
        )
    }

    pub fn add(&self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> MPoly {
        if k.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul(k))).collect(),
        }
    }

    pub fn mul(&self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    fn mul_monomial(&self, m: &Monomial, c: &Rat) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m2, c2)| (m2.mul(m), c2.mul(c)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &MPoly) -> Option<MPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.inv().ok()?));
        }
        let (lm, lc) = d.leading();
        let lc_inv = lc.inv().ok()?;
        let mut rem = self.clone();
        let mut quo = MPoly::zero();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading();
            if !lm.divides(rm) {
                return None;
            }
            let qm = lm.quotient_of(rm);
            let qc = rc.mul(&lc_inv);
            rem = rem.sub(&d.mul_monomial(&qm, &qc));
            quo.add_term(qm, qc);
        }
        Some(quo)
    }

    /// Scale so that the leading coefficient is 1; returns the removed factor.
    pub fn monic(&self) -> (MPoly, Rat) {
        if self.is_zero() {
            return (MPoly::zero(), Rat::one());
        }
        let lc = self.leading().1.clone();
        (self.scale(&lc.inv().expect("nonzero")), lc)
    }

    /// Multiplicity of `p` as a factor of `self` (which must be nonzero).
    pub fn multiplicity(&self, p: &MPoly) -> (u32, MPoly) {
        let mut k = 0;
        let mut cur = self.clone();
        if p.as_constant().is_some() {
            return (0, cur);
        }
        while let Some(q) = cur.exact_div(p) {
            cur = q;
            k += 1;
        }
        (k, cur)
    }

    fn content_in(&self, var: usize) -> MPoly {
        let mut g = MPoly::zero();
        for k in 0..=self.degree_in(var) {
            let c = self.coeff_in(var, k);
            if !c.is_zero() {
                g = gcd(&g, &c);
                if g.is_one() {
                    break;
                }
            }
        }
        g
    }

    fn primitive_in(&self, var: usize) -> MPoly {
        let c = self.content_in(var);
        self.exact_div(&c).expect("content divides")
    }

    /// Pseudo-remainder of `self` by `d` viewed as univariate in `var`.
    fn prem_in(&self, d: &MPoly, var: usize) -> MPoly {
        let dd = d.degree_in(var);
        let lc = d.coeff_in(var, dd);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(var) >= dd {
            let dr = r.degree_in(var);
            let lr = r.coeff_in(var, dr);
            let shift = Monomial::one().with_exp(var, dr - dd);
            let t = lr.mul_monomial(&shift, &Rat::one()).mul(d);
            r = r.mul(&lc).sub(&t);
        }
        r
    }

    pub fn fmt_with(&self, names: &[&str], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.signum() < 0;
            let a = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut parts = Vec::new();
            if !a.is_one() || m.is_one() {
                parts.push(a.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                let name = names
                    .get(i)
                    .map(|s| s.to_string())
                    .unwrap_or_else(|| format!("u{i}"));
                match e {
                    0 => {}
                    1 => parts.push(name),
                    _ => parts.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Monic greatest common divisor in `Q[u0, u1, ...]`, by recursive primitive
/// pseudo-remainder sequences in the highest variable.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.monic().0;
    }
    if b.is_zero() {
        return a.monic().0;
    }
    let var = match a.max_var().max(b.max_var()) {
        None => return MPoly::one(),
        Some(v) => v,
    };
    let (ca, cb) = (a.content_in(var), b.content_in(var));
    let c = gcd(&ca, &cb);
    let mut p = a.exact_div(&ca).expect("content divides");
    let mut q = b.exact_div(&cb).expect("content divides");
    if p.degree_in(var) < q.degree_in(var) {
        std::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        if q.degree_in(var) == 0 {
            // q is primitive in var with no var: a unit of the coefficient ring
            break MPoly::one();
        }
        let r = p.prem_in(&q, var);
        if r.is_zero() {
            break q;
        }
        if r.degree_in(var) == 0 {
            break MPoly::one();
        }
        p = q;
        q = r.primitive_in(var);
    };
    c.mul(&g.primitive_in(var)).monic().0
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(super::funcfield::DEFAULT_VARS, f)
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
