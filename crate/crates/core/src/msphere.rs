//! Multi-affine restriction of polynomials to multispheres, the exact
//! vanishing decision, and the generator system cutting out a blow-up.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::central::{random_pure, sample_sphere_point_with, MultiSphere, SphereBlock};
use crate::poly::{default_coeff_pool, random_left_combination_with, random_poly_with, QPoly};
use crate::quat::{QuatAlgebra, Quaternion};
use crate::report::Report;
use crate::scalar::{Field, Rat, Real};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MsphereError {
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("prefix of the multisphere is not central")]
    NotABlowUp,
}

/// `q(y1, ..., yr)` of degree at most one in each variable. Subsets of
/// `{1..r}` are bitmasks, bit `i` standing for `y_{i+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiAffine<F: Field> {
    pub r: usize,
    pub terms: BTreeMap<u64, Quaternion<F>>,
}

impl<F: Field> MultiAffine<F> {
    pub fn zero(r: usize) -> Self {
        MultiAffine {
            r,
            terms: BTreeMap::new(),
        }
    }

    fn add_term(&mut self, mask: u64, c: Quaternion<F>) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(mask).or_insert_with(Quaternion::zero);
        *slot = slot.add(&c);
        if slot.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn coeff(&self, mask: u64) -> Quaternion<F> {
        self.terms.get(&mask).cloned().unwrap_or_else(Quaternion::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    /// `sum c_S * prod_{i in S, ascending} w_i`.
    pub fn evaluate(&self, alg: &QuatAlgebra<F>, ws: &[Quaternion<F>]) -> Quaternion<F> {
        assert_eq!(ws.len(), self.r, "one direction per sphere variable");
        let mut acc = Quaternion::zero();
        for (mask, c) in &self.terms {
            let mut t = c.clone();
            for (i, w) in ws.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    t = alg.mul(&t, w);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Text in the variables `y1, ..., yr`, highest subsets first.
    pub fn to_expr(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (mask, c) in self.terms.iter().rev() {
            let ys: Vec<String> = (0..self.r)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| format!("y{}", i + 1))
                .collect();
            let coeff = c.to_expr();
            let single = c.coords().iter().filter(|x| !x.is_zero()).count() == 1;
            let mut term = match (ys.is_empty(), single) {
                (true, true) => coeff,
                (true, false) => format!("({coeff})"),
                (false, _) if *c == Quaternion::one() => ys.join("*"),
                (false, true) => format!("{coeff}*{}", ys.join("*")),
                (false, false) => format!("({coeff})*{}", ys.join("*")),
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

    /// The same polynomial as an element of `D[y1, ..., yr]`.
    pub fn to_qpoly(&self) -> QPoly<F> {
        QPoly::from_terms(
            self.r,
            self.terms.iter().map(|(mask, c)| {
                let e = (0..self.r).map(|i| (mask >> i & 1) as u32).collect();
                (e, c.clone())
            }),
        )
    }
}

/// Reduces the block monomial `prod x_m^{e_m}` at `x_m = A_m + lambda_m w` to
/// `c + d w`, using `w^2 = -rho`.
pub fn block_monomial_reduce<F: Field>(exps: &[u32], a: &[F], lambda: &[F], rho: &F) -> (F, F) {
    let mut c = F::one();
    let mut d = F::zero();
    for ((&e, am), lm) in exps.iter().zip(a).zip(lambda) {
        for _ in 0..e {
            // (c + d w)(am + lm w)
            let nc = c.mul(am).sub(&d.mul(lm).mul(rho));
            let nd = c.mul(lm).add(&d.mul(am));
            c = nc;
            d = nd;
        }
    }
    (c, d)
}

/// The multi-affine `q` with `p(v0, A_1 + lambda_1 w_1, ...) = q(w_1, ..., w_r)`
/// for every admissible choice of directions.
pub fn restrict<F: Real>(
    alg: &QuatAlgebra<F>,
    p: &QPoly<F>,
    s: &MultiSphere<F>,
) -> Result<MultiAffine<F>, MsphereError> {
    if p.arity() != s.arity() {
        return Err(MsphereError::ArityMismatch {
            expected: s.arity(),
            got: p.arity(),
        });
    }
    let k0 = s.v0.len();
    let ranges = s.block_ranges();
    let mut prefix_pows: Vec<Vec<Quaternion<F>>> = s.v0.iter().map(|q| vec![Quaternion::one(), q.clone()]).collect();
    let mut out = MultiAffine::zero(s.r());
    for (e, coeff) in p.terms() {
        let mut head = coeff.clone();
        for (m, &k) in e[..k0].iter().enumerate() {
            if k == 0 {
                continue;
            }
            let row = &mut prefix_pows[m];
            while row.len() <= k as usize {
                let next = alg.mul(row.last().expect("nonempty"), &s.v0[m]);
                row.push(next);
            }
            head = alg.mul(&head, &row[k as usize]);
        }
        // expand prod (c_i + d_i y_i) into real coefficients per subset
        let mut expansion: Vec<(u64, F)> = vec![(0, F::one())];
        for (i, (b, r)) in s.blocks.iter().zip(&ranges).enumerate() {
            let (c, d) = block_monomial_reduce(&e[r.clone()], &b.a, &b.lambda, &b.rho);
            let mut next = Vec::with_capacity(expansion.len() * 2);
            for (mask, x) in &expansion {
                if !c.is_zero() {
                    next.push((*mask, x.mul(&c)));
                }
                if !d.is_zero() {
                    next.push((mask | 1 << i, x.mul(&d)));
                }
            }
            expansion = next;
        }
        for (mask, x) in expansion {
            out.add_term(mask, head.scale(&x));
        }
    }
    Ok(out)
}

/// Exact decision: `p` vanishes on all of `S` iff its restriction is zero.
pub fn vanishes_on<F: Real>(alg: &QuatAlgebra<F>, s: &MultiSphere<F>, p: &QPoly<F>) -> Result<bool, MsphereError> {
    Ok(restrict(alg, p, s)?.is_zero())
}

/// Two distinct directions per block: the witness and a reflection of it.
pub fn grid_directions<F: Real, R: Rng>(
    alg: &QuatAlgebra<F>,
    s: &MultiSphere<F>,
    rng: &mut R,
) -> Vec<[Quaternion<F>; 2]> {
    s.blocks
        .iter()
        .map(|b| loop {
            let w = sample_sphere_point_with(alg, b, rng);
            if w != b.witness {
                break [b.witness.clone(), w];
            }
        })
        .collect()
}

/// Every point of `{v0} x prod {w_i1, w_i2}`.
pub fn grid_points<F: Real>(s: &MultiSphere<F>, grid: &[[Quaternion<F>; 2]]) -> Vec<Vec<Quaternion<F>>> {
    let r = grid.len();
    (0..1u64 << r)
        .map(|bits| {
            let ws: Vec<_> = (0..r).map(|i| grid[i][(bits >> i & 1) as usize].clone()).collect();
            s.point(&ws)
        })
        .collect()
}

/// Vanishing on a `2 x ... x 2` grid of block points; equivalent to
/// [`vanishes_on`] whenever the two directions of each block differ.
pub fn vanishes_on_grid<F: Real>(
    alg: &QuatAlgebra<F>,
    s: &MultiSphere<F>,
    p: &QPoly<F>,
    grid: &[[Quaternion<F>; 2]],
) -> Result<bool, MsphereError> {
    check_arity(p, s)?;
    Ok(grid_points(s, grid)
        .iter()
        .all(|pt| p.eval(pt, alg).expect("arity checked").is_zero()))
}

/// Sampling-only check; a `false` is conclusive, a `true` is evidence.
pub fn vanishes_on_samples<F: Real, R: Rng>(
    alg: &QuatAlgebra<F>,
    s: &MultiSphere<F>,
    p: &QPoly<F>,
    count: usize,
    rng: &mut R,
) -> Result<bool, MsphereError> {
    check_arity(p, s)?;
    Ok((0..count).all(|_| {
        let pt = s.sample_point(alg, rng);
        p.eval(&pt, alg).expect("arity checked").is_zero()
    }))
}

fn check_arity<F: Real>(p: &QPoly<F>, s: &MultiSphere<F>) -> Result<(), MsphereError> {
    if p.arity() != s.arity() {
        return Err(MsphereError::ArityMismatch {
            expected: s.arity(),
            got: p.arity(),
        });
    }
    Ok(())
}

/// Prefix equations `x_m - q_m`, then per block the nonzero proportionality
/// equations `(x_j - A_j) lambda_l - (x_l - A_l) lambda_j` (j < l) and the
/// norm equations `(x_j - A_j)^2 + lambda_j^2 rho`.
pub fn cutting_generators<F: Real>(alg: &QuatAlgebra<F>, s: &MultiSphere<F>) -> Result<Vec<QPoly<F>>, MsphereError> {
    if !alg.is_central_tuple(&s.v0) {
        return Err(MsphereError::NotABlowUp);
    }
    let n = s.arity();
    let x = |m: usize| QPoly::var(n, m);
    let c = |q: Quaternion<F>| QPoly::constant(n, q);
    let mut gens = Vec::new();
    for (m, q) in s.v0.iter().enumerate() {
        gens.push(x(m).sub(&c(q.clone())).expect("same arity"));
    }
    for (b, r) in s.blocks.iter().zip(s.block_ranges()) {
        let shifted: Vec<QPoly<F>> = r
            .clone()
            .zip(&b.a)
            .map(|(m, a)| x(m).sub(&c(Quaternion::scalar(a.clone()))).expect("same arity"))
            .collect();
        let k = shifted.len();
        for j in 0..k {
            for l in j + 1..k {
                let g = scale_real(&shifted[j], &b.lambda[l])
                    .sub(&scale_real(&shifted[l], &b.lambda[j]))
                    .expect("same arity");
                if !g.is_zero() {
                    gens.push(g);
                }
            }
        }
        for (j, sh) in shifted.iter().enumerate() {
            let sq = sh.mul(sh, alg).expect("same arity");
            let tail = b.lambda[j].square().mul(&b.rho);
            gens.push(sq.add(&c(Quaternion::scalar(tail))).expect("same arity"));
        }
    }
    Ok(gens)
}

fn scale_real<F: Field>(p: &QPoly<F>, k: &F) -> QPoly<F> {
    QPoly::from_terms(p.arity(), p.terms().map(|(e, c)| (e.clone(), c.scale(k))))
}

fn random_quat<F: Field, R: Rng>(rng: &mut R) -> Quaternion<F> {
    let w = random_pure::<F, R>(rng);
    let a = F::from_rat(&Rat::from(rng.gen_range(-3i64..=3)));
    Quaternion::scalar(a).add(&w)
}

fn fmt_point<F: Field>(pt: &[Quaternion<F>]) -> String {
    let parts: Vec<String> = pt.iter().map(Quaternion::to_expr).collect();
    format!("({})", parts.join(", "))
}

/// Exercises a generator system against the multisphere it should cut out.
pub fn verify_cut<F: Real>(alg: &QuatAlgebra<F>, s: &MultiSphere<F>, gens: &[QPoly<F>], seed: u64) -> Report {
    const POINTS: usize = 10;
    const COMBOS: usize = 50;
    const PERTURBED: usize = 50;
    const PATTERN: usize = 10;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = default_coeff_pool::<F>();
    let mut report = Report::new();
    let n = s.arity();
    if let Some(g) = gens.iter().find(|g| g.arity() != n) {
        report.record(
            "generator arity",
            Some(format!("expected {n}, got {}", g.arity())),
        );
        return report;
    }

    let points: Vec<_> = (0..POINTS).map(|_| s.sample_point(alg, &mut rng)).collect();
    let mut fail = None;
    'gens: for pt in &points {
        for g in gens {
            if !g.eval(pt, alg).expect("arity").is_zero() {
                fail = Some(format!("{} at {}", g, fmt_point(pt)));
                break 'gens;
            }
        }
    }
    report.record("generators vanish on sampled points", fail);

    let mut fail = None;
    'combos: for _ in 0..COMBOS {
        let m = random_left_combination_with(&mut rng, gens, 2, &pool, alg);
        for pt in &points {
            if !m.eval(pt, alg).expect("arity").is_zero() {
                fail = Some(format!("{} at {}", m, fmt_point(pt)));
                break 'combos;
            }
        }
    }
    report.record("left combinations vanish on sampled points", fail);

    let mut fail = None;
    let mut tested = 0;
    while tested < PERTURBED && n > 0 {
        let mut pt = s.sample_point(alg, &mut rng);
        let m = rng.gen_range(0..n);
        let delta = random_quat::<F, _>(&mut rng);
        if delta.is_zero() {
            continue;
        }
        pt[m] = pt[m].add(&delta);
        if s.contains(alg, &pt) {
            continue;
        }
        tested += 1;
        if gens.iter().all(|g| g.eval(&pt, alg).expect("arity").is_zero()) {
            fail = Some(fmt_point(&pt));
            break;
        }
    }
    report.record("perturbed points off the multisphere violate a generator", fail);

    let mut fail = None;
    'prefix: for (j, q) in s.v0.iter().enumerate() {
        let g = QPoly::var(n, j)
            .sub(&QPoly::constant(n, q.clone()))
            .expect("same arity");
        for _ in 0..PATTERN {
            let terms = rng.gen_range(1..=3);
            let p = random_poly_with(&mut rng, n, 2, terms, &pool);
            let pg = p.mul(&g, alg).expect("same arity");
            let pt: Vec<_> = (0..n)
                .map(|m| match m.cmp(&j) {
                    std::cmp::Ordering::Less => centralizer_element(q, &mut rng),
                    std::cmp::Ordering::Equal => q.clone(),
                    std::cmp::Ordering::Greater => random_quat(&mut rng),
                })
                .collect();
            if !pg.eval(&pt, alg).expect("arity").is_zero() {
                fail = Some(format!("{} at {}", pg, fmt_point(&pt)));
                break 'prefix;
            }
        }
    }
    report.record("left multiples of prefix generators vanish on centralizer pattern", fail);
    report
}

/// A random element commuting with `q`.
fn centralizer_element<F: Field, R: Rng>(q: &Quaternion<F>, rng: &mut R) -> Quaternion<F> {
    if q.is_scalar() {
        return random_quat(rng);
    }
    let a = F::from_rat(&Rat::from(rng.gen_range(-3i64..=3)));
    let b = F::from_rat(&Rat::new(rng.gen_range(-3i64..=3), rng.gen_range(1i64..=2)));
    Quaternion::scalar(a).add(&q.pure_part().scale(&b))
}

/// Convenience for a single block with no prefix.
pub fn single_block<F: Real>(b: SphereBlock<F>) -> MultiSphere<F> {
    MultiSphere {
        v0: Vec::new(),
        blocks: vec![b],
    }
}
