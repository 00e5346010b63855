//! Finitely generated left ideals as sampled test objects, the conjugation
//! lemma, the `2^r`-point central grid, and the verification pipelines for
//! the blow-up theorem and the central zero-set theorem.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::central::{blow_up, central_presentation, CentralPresentation, MultiSphere};
use crate::msphere::{cutting_generators, restrict};
use crate::poly::{default_coeff_pool, random_left_combination_with, random_poly_with, PolyError, QPoly};
use crate::quat::{QuatAlgebra, QuatError, Quaternion};
use crate::report::Report;
use crate::scalar::{Field, Rat, Real, F64};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("the ideal has no generators")]
    EmptyIdeal,
    #[error("pivot coordinate {0} is zero")]
    ZeroPivot(usize),
    #[error("index {index} out of range 1..={max}")]
    BadIndex { index: usize, max: usize },
    #[error("radius ratio {0} is not a rational square")]
    IncommensurableRadii(String),
    #[error("the point is central; there are no sphere blocks")]
    ZeroBlock,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Quat(#[from] QuatError),
}

/// `{ sum p_i g_i : p_i in R }`, represented by its generators only.
#[derive(Debug, Clone, PartialEq)]
pub struct LeftIdeal<F: Field> {
    pub generators: Vec<QPoly<F>>,
    pub n: usize,
}

impl<F: Field> LeftIdeal<F> {
    pub fn new(n: usize, generators: Vec<QPoly<F>>) -> Result<Self, IdealError> {
        if let Some(g) = generators.iter().find(|g| g.arity() != n) {
            return Err(PolyError::ArityMismatch {
                expected: n,
                got: g.arity(),
            }
            .into());
        }
        Ok(LeftIdeal { generators, n })
    }

    /// `sum p_i g_i` for the given multipliers.
    pub fn combine(&self, ps: &[QPoly<F>], alg: &QuatAlgebra<F>) -> Result<QPoly<F>, IdealError> {
        if ps.len() != self.generators.len() {
            return Err(IdealError::PreconditionFailed(format!(
                "{} multipliers for {} generators",
                ps.len(),
                self.generators.len()
            )));
        }
        let mut acc = QPoly::zero(self.n);
        for (p, g) in ps.iter().zip(&self.generators) {
            acc = acc.add(&p.mul(g, alg)?)?;
        }
        Ok(acc)
    }

    /// Whether every generator vanishes at `v`. Members need not vanish.
    pub fn generators_vanish_at(&self, v: &[Quaternion<F>], alg: &QuatAlgebra<F>) -> Result<bool, IdealError> {
        for g in &self.generators {
            if !g.eval(v, alg)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn sample_member_with<F: Field, R: Rng>(
    alg: &QuatAlgebra<F>,
    ideal: &LeftIdeal<F>,
    max_deg: u32,
    rng: &mut R,
) -> Result<QPoly<F>, IdealError> {
    if ideal.generators.is_empty() {
        return Err(IdealError::EmptyIdeal);
    }
    let pool = default_coeff_pool::<F>();
    Ok(random_left_combination_with(rng, &ideal.generators, max_deg, &pool, alg))
}

pub fn sample_member<F: Field>(
    alg: &QuatAlgebra<F>,
    ideal: &LeftIdeal<F>,
    max_deg: u32,
    seed: u64,
) -> Result<QPoly<F>, IdealError> {
    sample_member_with(alg, ideal, max_deg, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `f` lies in the polynomial-side ideal of the point set: it vanishes at
/// every point.
pub fn ideal_of_contains<F: Field>(
    alg: &QuatAlgebra<F>,
    f: &QPoly<F>,
    points: &[Vec<Quaternion<F>>],
) -> Result<bool, IdealError> {
    for p in points {
        if !f.eval(p, alg)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(q1, ..., qi, qi q_{i+1} qi^-1, ..., qi qn qi^-1)` for 1-based `i`.
pub fn conj_transform<F: Field>(
    alg: &QuatAlgebra<F>,
    v: &[Quaternion<F>],
    i: usize,
) -> Result<Vec<Quaternion<F>>, IdealError> {
    if i == 0 || i >= v.len() {
        return Err(IdealError::BadIndex {
            index: i,
            max: v.len().saturating_sub(1),
        });
    }
    let q = &v[i - 1];
    if q.is_zero() {
        return Err(IdealError::ZeroPivot(i));
    }
    let mut out = v[..i].to_vec();
    for p in &v[i..] {
        out.push(alg.conjugate_by(p, q)?);
    }
    Ok(out)
}

/// The `2^r` central points `(v0, A_1 +- lambda_1 mu_1 d, ..., A_r +- lambda_r mu_r d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QGrid<F: Field> {
    pub points: Vec<Vec<Quaternion<F>>>,
    pub source: CentralPresentation<F>,
    /// The common pure direction `d`, taken from the prefix.
    pub direction: Quaternion<F>,
}

/// Point `k` of the grid uses sign `-` on block `i` iff bit `i` of `k` is set.
pub fn q_grid<F: Real>(alg: &QuatAlgebra<F>, v: &[Quaternion<F>]) -> Result<QGrid<F>, IdealError> {
    let pres = central_presentation(alg, v);
    if pres.r() == 0 {
        return Err(IdealError::ZeroBlock);
    }
    let d = pres
        .prefix_direction(alg)
        .expect("the prefix of a non-central point ends in a non-scalar coordinate");
    let nd = alg.pure_dot(&d, &d);
    let mut steps = Vec::with_capacity(pres.r());
    for s in &pres.spheres {
        let ratio = s.rho.div(&nd).map_err(|_| IdealError::IncommensurableRadii("rho/0".into()))?;
        let mu = ratio
            .sqrt_exact()
            .ok_or_else(|| IdealError::IncommensurableRadii(ratio.to_string()))?;
        steps.push(d.scale(&mu));
    }
    let r = pres.r();
    let points = (0..1u64 << r)
        .map(|bits| {
            let ws: Vec<_> = (0..r)
                .map(|i| if bits >> i & 1 == 1 { steps[i].neg() } else { steps[i].clone() })
                .collect();
            let mut pt = pres.v0.clone();
            for (b, w) in pres.spheres.iter().zip(&ws) {
                pt.extend(b.point(w));
            }
            pt
        })
        .collect();
    Ok(QGrid {
        points,
        source: pres,
        direction: d,
    })
}

pub fn to_f64_tuple(v: &[Quaternion<Rat>]) -> Vec<Quaternion<F64>> {
    v.iter().map(|q| q.map(|x| F64(x.to_f64()))).collect()
}

pub fn to_f64_poly(p: &QPoly<Rat>) -> QPoly<F64> {
    QPoly::from_terms(
        p.arity(),
        p.terms().map(|(e, c)| (e.clone(), c.map(|x| F64(x.to_f64())))),
    )
}

/// The grid in binary64 arithmetic, for points whose radii are
/// incommensurable over the rationals.
pub fn q_grid_f64(a: &Rat, b: &Rat, v: &[Quaternion<Rat>]) -> Result<QGrid<F64>, IdealError> {
    let alg = QuatAlgebra::new(F64(a.to_f64()), F64(b.to_f64()))?;
    q_grid(&alg, &to_f64_tuple(v))
}

fn fmt_point<F: Field>(pt: &[Quaternion<F>]) -> String {
    let parts: Vec<String> = pt.iter().map(Quaternion::to_expr).collect();
    format!("({})", parts.join(", "))
}

/// Positions (1-based) after which a new block starts.
fn block_boundaries<F: Real>(s: &MultiSphere<F>) -> Vec<usize> {
    if s.r() == 0 {
        return Vec::new();
    }
    let mut out = vec![s.v0.len()];
    out.extend(s.block_ranges().iter().map(|r| r.end));
    out.pop();
    out
}

/// Samples members of the cutting ideal `I` of `B(v)` and points of `B(v)`
/// and checks exact vanishing, replaying the conjugation step at block
/// boundaries.
pub fn verify_blowup_theorem<F: Real>(alg: &QuatAlgebra<F>, v: &[Quaternion<F>], seed: u64) -> Report {
    const MEMBERS: usize = 50;
    const POINTS: usize = 50;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new();
    let s = blow_up(alg, v);
    let gens = cutting_generators(alg, &s).expect("blow-ups have a central prefix");
    let ideal = LeftIdeal::new(v.len(), gens).expect("generators share the arity of v");

    report.record(
        "v is a zero of the cutting generators",
        (!ideal.generators_vanish_at(v, alg).expect("arity")).then(|| fmt_point(v)),
    );

    let members: Vec<QPoly<F>> = (0..MEMBERS)
        .map(|_| sample_member_with(alg, &ideal, 2, &mut rng).expect("nonempty"))
        .collect();
    let mut points: Vec<Vec<Quaternion<F>>> = vec![v.to_vec()];
    points.extend((1..POINTS).map(|_| s.sample_point(alg, &mut rng)));

    report.record("sampled members vanish on sampled points of B(v)", first_nonzero(alg, &members, &points));

    let boundaries = block_boundaries(&s);
    let mut replay = Vec::new();
    let mut outside = None;
    for pt in points.iter().take(10) {
        for &b in &boundaries {
            match conj_transform(alg, pt, b) {
                Ok(w) => {
                    if outside.is_none() && !s.contains(alg, &w) {
                        outside = Some(fmt_point(&w));
                    }
                    replay.push(w);
                }
                Err(IdealError::ZeroPivot(_)) => {}
                Err(e) => outside = Some(e.to_string()),
            }
        }
    }
    report.record("conjugated points stay in B(v)", outside);
    report
        .record("sampled members vanish on conjugated points", first_nonzero(alg, &members, &replay))
        .with_detail(format!("{} conjugated points", replay.len()));

    // a point off B(v): move the first coordinate
    let mut adv = v.to_vec();
    if let Some(first) = adv.first_mut() {
        let shift = if first.is_scalar() { Quaternion::i() } else { Quaternion::one() };
        *first = first.add(&shift);
        let violated = ideal
            .generators
            .iter()
            .any(|g| !g.eval(&adv, alg).expect("arity").is_zero());
        report.record(
            "a point off B(v) violates a generator",
            (s.contains(alg, &adv) || !violated).then(|| fmt_point(&adv)),
        );
    }
    report
}

fn first_nonzero<F: Field>(
    alg: &QuatAlgebra<F>,
    polys: &[QPoly<F>],
    points: &[Vec<Quaternion<F>>],
) -> Option<String> {
    for p in polys {
        for pt in points {
            if !p.eval(pt, alg).expect("arity").is_zero() {
                return Some(format!("{} at {}", p, fmt_point(pt)));
            }
        }
    }
    None
}

/// Runs the chain "f vanishes on the central grid, hence on B(v), hence at
/// v" and its contrapositive for one polynomial `f`.
pub fn verify_central_zeros<F: Real>(
    alg: &QuatAlgebra<F>,
    f: &QPoly<F>,
    v: &[Quaternion<F>],
    _seed: u64,
) -> Result<Report, IdealError> {
    if f.arity() != v.len() {
        return Err(PolyError::ArityMismatch {
            expected: v.len(),
            got: f.arity(),
        }
        .into());
    }
    let mut report = Report::new();
    let s = blow_up(alg, v);
    let points = match q_grid(alg, v) {
        Ok(g) => {
            let commuting = g.points.iter().all(|p| alg.is_central_tuple(p));
            let inside = g.points.iter().all(|p| s.contains(alg, p));
            let mut distinct = g.points.clone();
            distinct.sort_by_key(|p| fmt_point(p));
            distinct.dedup();
            report.record(
                "grid points are central members of B(v)",
                (!(commuting && inside)).then(|| "grid point outside B(v) or not central".to_string()),
            );
            report.record(
                "grid has 2^r distinct points",
                (distinct.len() != 1 << s.r()).then(|| format!("{} points", distinct.len())),
            );
            g.points
        }
        Err(IdealError::ZeroBlock) => vec![v.to_vec()],
        Err(e) => return Err(e),
    };
    let witness = points
        .iter()
        .find(|q| !f.eval(q, alg).expect("arity").is_zero())
        .cloned();
    let fv = f.eval(v, alg)?;
    match &witness {
        None => {
            let restricted = restrict(alg, f, &s).expect("arity");
            report.record(
                "vanishing on the grid gives zero restriction to B(v)",
                (!restricted.is_zero()).then(|| format!("{}", restricted.to_qpoly())),
            );
            report.record("vanishing on the grid gives f(v) = 0", (!fv.is_zero()).then(|| fv.to_expr()));
        }
        Some(q) => {
            report
                .push("f is not central-vanishing", true)
                .with_detail(format!("f{} = {}", fmt_point(q), f.eval(q, alg)?.to_expr()));
        }
    }
    if !fv.is_zero() {
        report.record(
            "f(v) != 0 yields a grid witness",
            witness.is_none().then(|| format!("f(v) = {}", fv.to_expr())),
        );
    }
    Ok(report)
}

/// For `p` with real coefficients supported on a window of coordinates that
/// is central at `v`, with `p(v) = 0`: left multiples of `p` vanish at `v`.
pub fn verify_real_multiple_lemma<F: Real>(
    alg: &QuatAlgebra<F>,
    p: &QPoly<F>,
    v: &[Quaternion<F>],
    seed: u64,
) -> Result<Report, IdealError> {
    const MULTIPLES: usize = 100;
    if p.arity() != v.len() {
        return Err(PolyError::ArityMismatch {
            expected: v.len(),
            got: p.arity(),
        }
        .into());
    }
    if !p.has_scalar_coefficients() {
        return Err(IdealError::PreconditionFailed("coefficients are not real".into()));
    }
    let support = p.support();
    if let (Some(&lo), Some(&hi)) = (support.first(), support.last()) {
        if !alg.is_central_tuple(&v[lo..=hi]) {
            return Err(IdealError::PreconditionFailed(format!(
                "coordinates {}..{} are not central",
                lo + 1,
                hi + 1
            )));
        }
    }
    if !p.eval(v, alg)?.is_zero() {
        return Err(IdealError::PreconditionFailed("p(v) != 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = default_coeff_pool::<F>();
    let mut fail = None;
    for _ in 0..MULTIPLES {
        let terms = rng.gen_range(1..=4);
        let m = random_poly_with(&mut rng, v.len(), 3, terms, &pool);
        let mp = m.mul(p, alg)?;
        if !mp.eval(v, alg)?.is_zero() {
            fail = Some(format!("({m})*({p})"));
            break;
        }
    }
    let mut report = Report::new();
    report.record("left multiples of p vanish at v", fail);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Quaternion<Rat>;

    fn h() -> QuatAlgebra<Rat> {
        QuatAlgebra::hamilton()
    }
    fn q(x: [i64; 4]) -> Q {
        Quaternion::from_ints(x)
    }
    fn x(n: usize, i: usize) -> QPoly<Rat> {
        QPoly::var(n, i)
    }
    fn c(n: usize, v: Q) -> QPoly<Rat> {
        QPoly::constant(n, v)
    }

    #[test]
    fn member_sampling() {
        let a = h();
        let g = x(2, 1).pow(2, &a).add(&QPoly::one(2)).unwrap();
        let ideal = LeftIdeal::new(2, vec![g.clone()]).unwrap();
        assert_eq!(ideal.combine(&[QPoly::zero(2)], &a).unwrap(), QPoly::zero(2));
        assert_eq!(ideal.combine(&[QPoly::one(2)], &a).unwrap(), g);
        let pt = [q([1, 2, 0, 0]), Q::i()];
        for seed in 0..50 {
            let m = sample_member(&a, &ideal, 2, seed).unwrap();
            assert_eq!(m, sample_member(&a, &ideal, 2, seed).unwrap());
            assert!(m.eval(&pt, &a).unwrap().is_zero());
        }
        let empty = LeftIdeal::<Rat>::new(2, vec![]).unwrap();
        assert_eq!(sample_member(&a, &empty, 2, 0), Err(IdealError::EmptyIdeal));
    }

    #[test]
    fn conjugation_examples() {
        let a = h();
        assert_eq!(conj_transform(&a, &[Q::i(), Q::j()], 1).unwrap(), vec![Q::i(), Q::j().neg()]);
        let two = q([2, 0, 0, 0]);
        assert_eq!(conj_transform(&a, &[two.clone(), Q::j()], 1).unwrap(), vec![two, Q::j()]);
        assert_eq!(
            conj_transform(&a, &[Q::i(), q([1, 0, 1, 0])], 1).unwrap(),
            vec![Q::i(), q([1, 0, -1, 0])]
        );
        assert_eq!(conj_transform(&a, &[Q::zero(), Q::j()], 1), Err(IdealError::ZeroPivot(1)));
        assert!(matches!(conj_transform(&a, &[Q::i(), Q::j()], 2), Err(IdealError::BadIndex { .. })));
    }

    #[test]
    fn grid_examples() {
        let a = h();
        let g = q_grid(&a, &[Q::i(), Q::j()]).unwrap();
        assert_eq!(g.points, vec![vec![Q::i(), Q::i()], vec![Q::i(), Q::i().neg()]]);
        let g = q_grid(&a, &[Q::i(), Q::one(), Q::j()]).unwrap();
        assert_eq!(
            g.points,
            vec![vec![Q::i(), Q::one(), Q::i()], vec![Q::i(), Q::one(), Q::i().neg()]]
        );
        assert_eq!(q_grid(&a, &[Q::i(), Q::i()]), Err(IdealError::ZeroBlock));
        // rho = 2 against a prefix of norm 1
        let v = [Q::i(), q([0, 0, 1, 1])];
        assert!(matches!(q_grid(&a, &v), Err(IdealError::IncommensurableRadii(_))));
        let g = q_grid_f64(&Rat::from(-1), &Rat::from(-1), &v).unwrap();
        let af = QuatAlgebra::new(F64(-1.0), F64(-1.0)).unwrap();
        assert_eq!(g.points.len(), 2);
        assert!(g.points.iter().all(|p| af.is_central_tuple(p)));
        let s = blow_up(&af, &to_f64_tuple(&v));
        assert!(g.points.iter().all(|p| s.contains(&af, p)));
    }

    #[test]
    fn blowup_theorem_examples() {
        let a = h();
        let rep = verify_blowup_theorem(&a, &[Q::i(), Q::j()], 1);
        assert!(rep.all_passed(), "{rep}");
        let rep = verify_blowup_theorem(&a, &[Q::i(), q([2, 0, 0, 0])], 1);
        assert!(rep.all_passed(), "{rep}");
        let s = blow_up(&a, &[Q::i(), Q::j()]);
        let g = cutting_generators(&a, &s).unwrap();
        assert!(!g[0].eval(&[Q::j(), Q::j()], &a).unwrap().is_zero());
        assert!(s.contains(&a, &[Q::i(), Q::j().neg()]));
    }

    #[test]
    fn central_zero_examples() {
        let a = h();
        let v = [Q::i(), Q::j()];
        let f = x(2, 1).pow(2, &a).add(&QPoly::one(2)).unwrap();
        let rep = verify_central_zeros(&a, &f, &v, 0).unwrap();
        assert!(rep.all_passed(), "{rep}");
        assert!(rep.checks.iter().any(|c| c.name.contains("zero restriction")));

        let f = x(2, 1).sub(&c(2, Q::j())).unwrap();
        let rep = verify_central_zeros(&a, &f, &v, 0).unwrap();
        assert!(rep.all_passed(), "{rep}");
        assert!(rep.checks.iter().any(|c| c.name == "f is not central-vanishing"));

        let f = x(2, 0).sub(&c(2, Q::i())).unwrap();
        let rep = verify_central_zeros(&a, &f, &v, 0).unwrap();
        assert!(rep.all_passed(), "{rep}");
        assert!(rep.checks.iter().all(|c| c.name != "f is not central-vanishing"));
    }

    #[test]
    fn real_multiple_examples() {
        let a = h();
        let p = x(2, 1).pow(2, &a).add(&QPoly::one(2)).unwrap();
        let rep = verify_real_multiple_lemma(&a, &p, &[q([3, 1, -2, 0]), Q::i()], 5).unwrap();
        assert!(rep.all_passed());
        let p = x(2, 0).sub(&QPoly::one(2)).unwrap();
        assert!(verify_real_multiple_lemma(&a, &p, &[Q::one(), Q::j()], 5).unwrap().all_passed());
        let p = x(2, 0).sub(&x(2, 1)).unwrap();
        assert!(matches!(
            verify_real_multiple_lemma(&a, &p, &[Q::i(), Q::j()], 5),
            Err(IdealError::PreconditionFailed(_))
        ));
    }
}
