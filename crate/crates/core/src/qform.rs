//! Diagonal quadratic forms over rational function fields: norm, Pfister
//! and Albert forms, residue forms at a prime, an anisotropy certifier for
//! forms with signed monomial entries, and the counterexample chain for a
//! point with no central zeros.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::poly::{default_coeff_pool, random_poly_with, QPoly};
use crate::quat::{QuatAlgebra, Quaternion};
use crate::report::Report;
use crate::scalar::{poly_valuation, residue_at, Field, MPoly, Prime, RatFunc, ScalarError, SignedMonomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QformError {
    #[error("zero constant in a form")]
    ZeroConstant,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// `<c1, ..., cm>`, the form `sum c_i x_i^2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiagForm {
    entries: Vec<RatFunc>,
}

impl DiagForm {
    pub fn new(entries: Vec<RatFunc>) -> Result<Self, QformError> {
        if entries.iter().any(Field::is_zero) {
            return Err(QformError::ZeroConstant);
        }
        Ok(DiagForm { entries })
    }

    pub fn from_monomials(ms: &[SignedMonomial]) -> Self {
        DiagForm {
            entries: ms.iter().map(SignedMonomial::to_ratfunc).collect(),
        }
    }

    pub fn entries(&self) -> &[RatFunc] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn eval(&self, xs: &[RatFunc]) -> RatFunc {
        assert_eq!(xs.len(), self.dim());
        self.entries
            .iter()
            .zip(xs)
            .fold(RatFunc::zero(), |acc, (c, x)| acc.add(&c.mul(&x.square())))
    }

    pub fn scale(&self, c: &RatFunc) -> Result<Self, QformError> {
        DiagForm::new(self.entries.iter().map(|e| e.mul(c)).collect())
    }

    /// Each monomial entry replaced by its square-class representative;
    /// other entries are kept.
    pub fn normalized(&self) -> DiagForm {
        DiagForm {
            entries: self.entries.iter().map(normalize_entry).collect(),
        }
    }

    /// Entries as normalized signed monomials, if they all are monomials.
    pub fn monomials(&self) -> Option<Vec<SignedMonomial>> {
        self.entries.iter().map(SignedMonomial::from_ratfunc).collect()
    }

    /// Every entry of `self` matched to a distinct entry of `other` in the
    /// same square class.
    pub fn is_entrywise_subform_of(&self, other: &DiagForm) -> bool {
        let mut pool: Vec<Option<RatFunc>> = other.normalized().entries.into_iter().map(Some).collect();
        self.normalized().entries.iter().all(|e| {
            match pool.iter_mut().find(|slot| slot.as_ref() == Some(e)) {
                Some(slot) => {
                    *slot = None;
                    true
                }
                None => false,
            }
        })
    }

    /// `c1 x1^2 + ... + cm xm^2` as a polynomial with central coefficients.
    pub fn to_qpoly(&self) -> QPoly<RatFunc> {
        let m = self.dim();
        QPoly::from_terms(
            m,
            self.entries.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; m];
                e[i] = 2;
                (e, Quaternion::scalar(c.clone()))
            }),
        )
    }
}

fn normalize_entry(e: &RatFunc) -> RatFunc {
    match SignedMonomial::from_ratfunc(e) {
        Some(m) => m.to_ratfunc(),
        None => e.clone(),
    }
}

impl fmt::Display for DiagForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

impl fmt::Debug for DiagForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `<1, -a, -b, ab>`, the reduced norm of `(a, b)`.
pub fn norm_form(a: &RatFunc, b: &RatFunc) -> Result<DiagForm, QformError> {
    if a.is_zero() || b.is_zero() {
        return Err(QformError::ZeroConstant);
    }
    DiagForm::new(vec![RatFunc::one(), a.neg(), b.neg(), a.mul(b)])
}

/// `<<a, b>> = <1, -a> (x) <1, -b>`.
pub fn pfister(a: &RatFunc, b: &RatFunc) -> Result<DiagForm, QformError> {
    norm_form(a, b)
}

/// `<a, b, -ab, -c, -d, cd>` for the pair `(a, b)`, `(c, d)`.
pub fn albert_form(ab: (&RatFunc, &RatFunc), cd: (&RatFunc, &RatFunc)) -> Result<DiagForm, QformError> {
    let (a, b) = ab;
    let (c, d) = cd;
    if [a, b, c, d].iter().any(|x| x.is_zero()) {
        return Err(QformError::ZeroConstant);
    }
    DiagForm::new(vec![a.clone(), b.clone(), a.mul(b).neg(), c.neg(), d.neg(), c.mul(d)])
}

/// Residue forms at `pi`: entries of even order contribute to `units`, odd
/// order ones (divided by `pi`) to `pi_part`. Even powers of `pi` are squares
/// and are removed first, so every entry falls into one of the two parts.
pub fn springer_residues(q: &DiagForm, pi: &Prime) -> Result<(DiagForm, DiagForm), QformError> {
    let mut units = Vec::new();
    let mut pi_part = Vec::new();
    for c in &q.entries {
        let (order, unit) = poly_valuation(c, pi)?;
        let r = normalize_entry(&residue_at(&unit, pi)?);
        if order.rem_euclid(2) == 0 {
            units.push(r);
        } else {
            pi_part.push(r);
        }
    }
    Ok((DiagForm::new(units)?, DiagForm::new(pi_part)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeafRule {
    /// Dimension at most one.
    SmallDimension,
    /// Rational entries of one sign: definite over the reals.
    Definite,
}

/// A proof tree of anisotropy. Each split uses the valuation of one
/// variable; the form is anisotropic when both residue forms are.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Leaf {
        form: Vec<SignedMonomial>,
        rule: LeafRule,
    },
    Split {
        form: Vec<SignedMonomial>,
        var: usize,
        units: Box<Certificate>,
        pi_part: Box<Certificate>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Anisotropic(Certificate),
    /// A nonzero vector with `q(x) = 0`.
    Isotropic(Vec<RatFunc>),
    Undecided(String),
}

impl Verdict {
    pub fn is_anisotropic(&self) -> bool {
        matches!(self, Verdict::Anisotropic(_))
    }
}

impl Certificate {
    pub fn form(&self) -> &[SignedMonomial] {
        match self {
            Certificate::Leaf { form, .. } | Certificate::Split { form, .. } => form,
        }
    }

    /// Re-derives every node: leaves satisfy their rule and the children of
    /// a split are exactly the residue forms of the parent.
    pub fn replay(&self) -> bool {
        match self {
            Certificate::Leaf { form, rule } => match rule {
                LeafRule::SmallDimension => form.len() <= 1,
                LeafRule::Definite => {
                    form.iter().all(SignedMonomial::is_constant)
                        && form.windows(2).all(|w| w[0].sign == w[1].sign)
                }
            },
            Certificate::Split {
                form,
                var,
                units,
                pi_part,
            } => {
                let pi = Prime::linear(MPoly::var(*var), *var).expect("a variable is a linear prime");
                let Ok((u, p)) = springer_residues(&DiagForm::from_monomials(form), &pi) else {
                    return false;
                };
                u.monomials().as_deref() == Some(units.form())
                    && p.monomials().as_deref() == Some(pi_part.form())
                    && units.replay()
                    && pi_part.replay()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Certificate::Leaf { .. } => 0,
            Certificate::Split { units, pi_part, .. } => 1 + units.depth().max(pi_part.depth()),
        }
    }
}

/// Decides anisotropy of a form whose entries are signed monomials up to
/// squares. Forms with other entries are `Undecided`.
pub fn anisotropic_cert(q: &DiagForm) -> Verdict {
    let mut classes = Vec::with_capacity(q.dim());
    let mut roots = Vec::with_capacity(q.dim());
    for e in &q.entries {
        match SignedMonomial::square_class_of(e) {
            Some((m, s)) => {
                classes.push(m);
                roots.push(s);
            }
            None => return Verdict::Undecided(format!("entry {e} is not a signed monomial up to squares")),
        }
    }
    match certify(&classes) {
        Ok(cert) => Verdict::Anisotropic(cert),
        Err(pos) => {
            // the class witness has 1 at two opposite entries; undo c = m s^2
            let mut x = vec![RatFunc::zero(); q.dim()];
            for i in pos {
                x[i] = roots[i].inv().expect("nonzero");
            }
            debug_assert!(q.eval(&x).is_zero());
            Verdict::Isotropic(x)
        }
    }
}

/// `Err` carries two positions holding opposite classes `m`, `-m`.
fn certify(form: &[SignedMonomial]) -> Result<Certificate, [usize; 2]> {
    for (a, m) in form.iter().enumerate() {
        if let Some(b) = form
            .iter()
            .position(|n| n.sign == -m.sign && n.exps == m.exps)
        {
            return Err([a, b]);
        }
    }
    if form.len() <= 1 {
        return Ok(Certificate::Leaf {
            form: form.to_vec(),
            rule: LeafRule::SmallDimension,
        });
    }
    let Some(var) = form.iter().filter_map(|m| m.exps.keys().next().copied()).min() else {
        // all constants, no opposite pair: one sign
        return Ok(Certificate::Leaf {
            form: form.to_vec(),
            rule: LeafRule::Definite,
        });
    };
    let (mut ui, mut pi) = (Vec::new(), Vec::new());
    let (mut units, mut pi_part) = (Vec::new(), Vec::new());
    for (i, m) in form.iter().enumerate() {
        if m.exp(var) == 0 {
            ui.push(i);
            units.push(m.clone());
        } else {
            pi.push(i);
            pi_part.push(SignedMonomial::new(m.sign, m.exps.iter().filter(|(&v, _)| v != var).map(|(&v, &e)| (v, e))));
        }
    }
    let u = certify(&units).map_err(|[a, b]| [ui[a], ui[b]])?;
    let p = certify(&pi_part).map_err(|[a, b]| [pi[a], pi[b]])?;
    Ok(Certificate::Split {
        form: form.to_vec(),
        var,
        units: Box::new(u),
        pi_part: Box::new(p),
    })
}

fn al() -> RatFunc {
    RatFunc::var(0)
}
fn be() -> RatFunc {
    RatFunc::var(1)
}
fn t() -> RatFunc {
    RatFunc::var(2)
}

/// `p = x^2 - al + t (y^2 - be)` over `(al, be)` on `Q(al, be, t)`.
pub fn counterexample_poly() -> QPoly<RatFunc> {
    let s = |c: RatFunc| Quaternion::scalar(c);
    QPoly::from_terms(
        2,
        [
            (vec![2, 0], s(RatFunc::one())),
            (vec![0, 2], s(t())),
            (vec![0, 0], s(al().add(&be().mul(&t())).neg())),
        ],
    )
}

fn form_of(entries: &[(i8, &[usize])]) -> DiagForm {
    DiagForm::from_monomials(
        &entries
            .iter()
            .map(|(s, vs)| SignedMonomial::new(*s, vs.iter().map(|&v| (v, 1))))
            .collect::<Vec<_>>(),
    )
}

/// Runs the chain showing that `p` vanishes at `(i, j)` together with its
/// whole left ideal while having no central zero, one step per check.
pub fn verify_counterexample(seed: u64) -> Report {
    const MEMBERS: usize = 1000;
    let mut report = Report::new();
    let alg = QuatAlgebra::new(al(), be()).expect("nonzero structure constants");
    let p = counterexample_poly();
    report
        .push("1. algebra (al,be) over Q(al,be,t) and p", true)
        .with_detail(format!("p = {p}"));

    let pt = [Quaternion::i(), Quaternion::j()];
    let v = p.eval(&pt, &alg).expect("arity 2");
    report
        .record("2. p(I, J) = 0", (!v.is_zero()).then(|| v.to_expr()))
        .with_detail(v.to_expr());

    let x2 = QPoly::var(2, 0).pow(2, &alg);
    let v = x2.eval(&pt, &alg).expect("arity 2");
    let ok = v == Quaternion::scalar(al()) && !v.is_zero();
    report
        .record("3. x^2 at (I, J) = al, nonzero", (!ok).then(|| v.to_expr()))
        .with_detail(v.to_expr());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool = default_coeff_pool::<RatFunc>();
    pool.push(Quaternion::scalar(al()));
    pool.push(Quaternion::k().scale(&t()));
    pool.push(Quaternion::i().scale(&be()));
    let mut fail = None;
    for _ in 0..MEMBERS {
        let terms = rng.gen_range(1..=3);
        let m = random_poly_with(&mut rng, 2, 3, terms, &pool);
        let mp = m.mul(&p, &alg).expect("arity 2");
        if !mp.eval(&pt, &alg).expect("arity 2").is_zero() {
            fail = Some(format!("({m})*p"));
            break;
        }
    }
    report
        .record("4. sampled members of the left ideal of p vanish at (I, J)", fail)
        .with_detail(format!("{MEMBERS} members"));

    let pi_form = DiagForm::new(vec![RatFunc::one(), t(), al().add(&be().mul(&t())).neg()]).expect("nonzero");
    let at_one = pi_form.to_qpoly().specialize(2, &RatFunc::one());
    let ok = at_one == p.extend_arity(3);
    report
        .record(
            "5. p is pi = <1,t,-(al+be*t)> at z = 1",
            (!ok).then(|| at_one.to_string()),
        )
        .with_detail(pi_form.to_string());

    let base = al().add(&be().mul(&t()));
    let tau = pfister(&t().neg(), &base).expect("nonzero");
    report
        .record(
            "6. pi is a subform of <<-t, al+be*t>>",
            (!pi_form.is_entrywise_subform_of(&tau)).then(|| tau.to_string()),
        )
        .with_detail(tau.to_string());

    let phi = albert_form((&t().neg(), &base), (&al(), &be())).expect("nonzero");
    let prime = Prime::linear(base.numer().clone(), 2).expect("al + be*t is linear and primitive in t");
    let expected_units = form_of(&[(1, &[0, 1]), (-1, &[0]), (-1, &[1]), (1, &[0, 1])]);
    let expected_pi = form_of(&[(1, &[]), (-1, &[0, 1])]);
    let residues = springer_residues(&phi, &prime);
    let (units, pi_part) = match residues {
        Ok((u, q)) => {
            let ok = u == expected_units && q == expected_pi;
            report
                .record(
                    "7. residues of the Albert form at al+be*t",
                    (!ok).then(|| format!("units {u}, pi part {q}")),
                )
                .with_detail(format!("phi = {phi}; units {u}; pi part {q}"));
            (Some(u), Some(q))
        }
        Err(e) => {
            report.record("7. residues of the Albert form at al+be*t", Some(e.to_string()));
            (None, None)
        }
    };

    let mut certs = Vec::new();
    for f in [&pi_part, &units].into_iter().flatten() {
        let verdict = anisotropic_cert(f);
        let ok = matches!(&verdict, Verdict::Anisotropic(c) if c.replay());
        certs.push((f.to_string(), ok, verdict));
    }
    let ok = certs.len() == 2 && certs.iter().all(|c| c.1);
    let names: Vec<String> = certs.iter().map(|c| c.0.clone()).collect();
    report
        .record(
            "8. both residue forms are certified anisotropic",
            (!ok).then(|| format!("{:?}", certs.iter().map(|c| &c.2).collect::<Vec<_>>())),
        )
        .with_detail(names.join(" and "));

    let chain_ok = report.all_passed();
    report
        .record(
            "9. conclusion: p has no central zero",
            (!chain_ok).then(|| "an earlier step failed".to_string()),
        )
        .with_detail(
            "assumed: Springer's theorem (anisotropic residues give an anisotropic form); \
             the Albert form criterion (phi anisotropic iff the biquaternion algebra is a division algebra); \
             a central zero of p gives a zero of pi, an isotropic subform of the norm form of (-t, al+be*t), \
             so that algebra splits and phi becomes isotropic",
        );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn r(n: i64) -> RatFunc {
        RatFunc::constant(Rat::from(n))
    }
    fn mono(s: i8, vs: &[usize]) -> SignedMonomial {
        SignedMonomial::new(s, vs.iter().map(|&v| (v, 1)))
    }
    fn form(es: Vec<RatFunc>) -> DiagForm {
        DiagForm::new(es).unwrap()
    }

    #[test]
    fn constructors() {
        assert_eq!(norm_form(&r(-1), &r(-1)).unwrap().to_string(), "<1,1,1,1>");
        let base = al().add(&be().mul(&t()));
        let tau = pfister(&t().neg(), &base).unwrap();
        assert_eq!(tau.entries()[3], t().mul(&base).neg());
        assert_eq!(norm_form(&al(), &be()).unwrap().to_string(), "<1,-al,-be,al*be>");
        assert_eq!(norm_form(&r(0), &be()), Err(QformError::ZeroConstant));
        let phi = albert_form((&t().neg(), &base), (&al(), &be())).unwrap();
        assert_eq!(
            phi.entries(),
            &[t().neg(), base.clone(), t().mul(&base), al().neg(), be().neg(), al().mul(&be())]
        );
        assert_eq!(
            albert_form((&r(-1), &r(-1)), (&r(-1), &r(-1))).unwrap().to_string(),
            "<-1,-1,-1,1,1,1>"
        );
    }

    #[test]
    fn residues() {
        let base = al().add(&be().mul(&t()));
        let phi = albert_form((&t().neg(), &base), (&al(), &be())).unwrap();
        let pi = Prime::linear(base.numer().clone(), 2).unwrap();
        let (u, p) = springer_residues(&phi, &pi).unwrap();
        assert_eq!(u.to_string(), "<al*be,-al,-be,al*be>");
        assert_eq!(p.to_string(), "<1,-al*be>");

        let tp = Prime::linear(MPoly::var(2), 2).unwrap();
        let (u, p) = springer_residues(&form(vec![r(1), t()]), &tp).unwrap();
        assert_eq!((u.to_string(), p.to_string()), ("<1>".into(), "<1>".into()));
        let (u, p) = springer_residues(&form(vec![t().square()]), &tp).unwrap();
        assert_eq!((u.to_string(), p.dim()), ("<1>".into(), 0));
    }

    #[test]
    fn certifier_examples() {
        assert!(anisotropic_cert(&form(vec![r(1), r(1)])).is_anisotropic());
        match anisotropic_cert(&form(vec![r(1), r(-1)])) {
            Verdict::Isotropic(x) => assert_eq!(x, vec![r(1), r(1)]),
            v => panic!("{v:?}"),
        }
        let q = form(vec![r(1), r(1), al().neg(), be().neg()]);
        let Verdict::Anisotropic(c) = anisotropic_cert(&q) else { panic!() };
        assert!(c.replay());
        let Certificate::Split { var, units, pi_part, .. } = &c else { panic!() };
        assert_eq!(*var, 0);
        assert_eq!(units.form(), &[mono(1, &[]), mono(1, &[]), mono(-1, &[1])]);
        assert_eq!(pi_part.form(), &[mono(-1, &[])]);
        let Certificate::Split { var, units, pi_part, .. } = units.as_ref() else { panic!() };
        assert_eq!(*var, 1);
        assert_eq!(units.form(), &[mono(1, &[]), mono(1, &[])]);
        assert_eq!(pi_part.form(), &[mono(-1, &[])]);
        assert!(matches!(
            anisotropic_cert(&form(vec![r(1), al().add(&r(1))])),
            Verdict::Undecided(_)
        ));
    }

    #[test]
    fn isotropic_witness_lifts_through_squares() {
        let q = form(vec![al().mul(&r(4)), al().neg().mul(&be().square()), r(9)]);
        match anisotropic_cert(&q) {
            Verdict::Isotropic(x) => {
                assert!(q.eval(&x).is_zero());
                assert!(x.iter().any(|c| !c.is_zero()));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn scaling_keeps_the_verdict() {
        let q = form(vec![r(1), r(1), al().neg(), be().neg()]);
        let scaled = q.scale(&al().mul(&be())).unwrap();
        assert!(anisotropic_cert(&scaled).is_anisotropic());
        let q = form(vec![al(), be().neg(), al().mul(&be())]);
        assert_eq!(
            anisotropic_cert(&q).is_anisotropic(),
            anisotropic_cert(&q.scale(&be()).unwrap()).is_anisotropic()
        );
    }

    #[test]
    fn counterexample_chain() {
        let rep = verify_counterexample(0);
        assert_eq!(rep.checks.len(), 9);
        assert!(rep.all_passed(), "{rep}");
        assert_eq!(rep.checks[1].detail.as_deref(), Some("0"));
        assert_eq!(rep.checks[2].detail.as_deref(), Some("al"));
    }

    #[test]
    fn member_i_x_times_p() {
        let alg = QuatAlgebra::new(al(), be()).unwrap();
        let p = counterexample_poly();
        let m = QPoly::monomial(vec![1, 0], Quaternion::i());
        let v = m.mul(&p, &alg).unwrap().eval(&[Quaternion::i(), Quaternion::j()], &alg).unwrap();
        assert!(v.is_zero());
    }
}
