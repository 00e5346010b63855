//! Central structure of points: `v = A + lambda * u` for central tuples, the
//! central presentation `v = (v0, v1, ..., vr)`, conjugation spheres,
//! multispheres and blow-ups.
//!
//! Sphere directions are never normalized. A block stores a pure witness `u`
//! together with `rho = n(u)`, and the sphere of the block is
//! `{ A + lambda * w : w pure, n(w) = rho }`. Over the rationals `sqrt(rho)` is
//! usually irrational, so the unit-direction form is only implicit.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::quat::{QuatAlgebra, Quaternion};
use crate::scalar::{Field, Rat, Real};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CentralError {
    #[error("tuple is not central")]
    NotCentral,
    #[error("tuple has only scalar coordinates")]
    AllReal,
}

/// `A + lambda * u` decomposition of a central, non-scalar tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition<F: Field> {
    pub a: Vec<F>,
    pub lambda: Vec<F>,
    pub rho: F,
    pub u: Quaternion<F>,
}

/// Writes every coordinate as `A_m + lambda_m * u` with `u` the (rescaled)
/// pure part of the first non-scalar coordinate.
pub fn decompose_central<F: Real>(
    alg: &QuatAlgebra<F>,
    v: &[Quaternion<F>],
) -> Result<Decomposition<F>, CentralError> {
    let lead = v
        .iter()
        .find(|q| !q.is_scalar())
        .ok_or(CentralError::AllReal)?;
    let raw = lead.pure_part();
    let scale = F::primitive_scale(&[raw.x1.clone(), raw.x2.clone(), raw.x3.clone()]);
    let u = raw.scale(&scale.inv().expect("nonzero scale"));
    let pivot = (1..4)
        .find(|&c| !u.coords()[c].is_zero())
        .expect("non-scalar");
    let mut a = Vec::with_capacity(v.len());
    let mut lambda = Vec::with_capacity(v.len());
    for q in v {
        let p = q.pure_part();
        let l = p.coords()[pivot].div(u.coords()[pivot]).expect("nonzero pivot");
        if u.scale(&l) != p {
            return Err(CentralError::NotCentral);
        }
        a.push(q.real_part());
        lambda.push(l);
    }
    let rho = alg.pure_dot(&u, &u);
    Ok(Decomposition { a, lambda, rho, u })
}

/// The set `{ A + lambda * w : w pure, n(w) = rho }`, with a witness direction
/// `u` of norm `rho`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereBlock<F: Field> {
    pub a: Vec<F>,
    pub lambda: Vec<F>,
    pub rho: F,
    pub witness: Quaternion<F>,
}

impl<F: Real> SphereBlock<F> {
    pub fn from_decomposition(d: Decomposition<F>) -> Self {
        SphereBlock {
            a: d.a,
            lambda: d.lambda,
            rho: d.rho,
            witness: d.u,
        }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// The block point `A + lambda * w`.
    pub fn point(&self, w: &Quaternion<F>) -> Vec<Quaternion<F>> {
        self.a
            .iter()
            .zip(&self.lambda)
            .map(|(a, l)| Quaternion::scalar(a.clone()).add(&w.scale(l)))
            .collect()
    }

    /// The tuple the block was built from (`w = u`).
    pub fn reference(&self) -> Vec<Quaternion<F>> {
        self.point(&self.witness)
    }

    /// Solves `w_m = A_m + lambda_m * x` for one common pure `x` and checks
    /// `n(x) = rho`. Returns that `x`.
    pub fn direction_of(&self, alg: &QuatAlgebra<F>, w: &[Quaternion<F>]) -> Option<Quaternion<F>> {
        if w.len() != self.dim() {
            return None;
        }
        let mut x: Option<Quaternion<F>> = None;
        for ((q, a), l) in w.iter().zip(&self.a).zip(&self.lambda) {
            if q.real_part() != *a {
                return None;
            }
            let p = q.pure_part();
            if l.is_zero() {
                if !p.is_zero() {
                    return None;
                }
                continue;
            }
            let cand = p.scale(&l.inv().expect("nonzero"));
            match &x {
                Some(prev) if *prev != cand => return None,
                Some(_) => {}
                None => x = Some(cand),
            }
        }
        let x = x?;
        (alg.pure_dot(&x, &x) == self.rho).then_some(x)
    }

    pub fn contains(&self, alg: &QuatAlgebra<F>, w: &[Quaternion<F>]) -> bool {
        self.direction_of(alg, w).is_some()
    }
}

/// Reflection of the pure quaternion `u` in the plane orthogonal to `d`:
/// `u - 2 <u,d>/<d,d> d`. Preserves the norm exactly.
pub fn reflect<F: Field>(alg: &QuatAlgebra<F>, u: &Quaternion<F>, d: &Quaternion<F>) -> Quaternion<F> {
    let dd = alg.pure_dot(d, d);
    let ud = alg.pure_dot(u, d);
    let k = ud.add(&ud).div(&dd).expect("anisotropic direction");
    u.sub(&d.scale(&k))
}

pub(crate) fn random_pure<F: Field, R: Rng>(rng: &mut R) -> Quaternion<F> {
    let mut c = || {
        let n = rng.gen_range(-3i64..=3);
        let d = if rng.gen_bool(0.25) { 2 } else { 1 };
        F::from_rat(&Rat::new(n, d))
    };
    Quaternion::new(F::zero(), c(), c(), c())
}

/// Random point `w` of the block's sphere (`n(w) = rho`), by reflecting the
/// witness through a random rational direction.
pub fn sample_sphere_point_with<F: Real, R: Rng>(
    alg: &QuatAlgebra<F>,
    block: &SphereBlock<F>,
    rng: &mut R,
) -> Quaternion<F> {
    loop {
        let d = random_pure::<F, R>(rng);
        if d.is_zero() || alg.pure_dot(&d, &d).is_zero() {
            continue;
        }
        return reflect(alg, &block.witness, &d);
    }
}

pub fn sample_sphere_point<F: Real>(alg: &QuatAlgebra<F>, block: &SphereBlock<F>, seed: u64) -> Quaternion<F> {
    sample_sphere_point_with(alg, block, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `{v0} x S_1 x ... x S_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiSphere<F: Field> {
    pub v0: Vec<Quaternion<F>>,
    pub blocks: Vec<SphereBlock<F>>,
}

impl<F: Real> MultiSphere<F> {
    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    pub fn arity(&self) -> usize {
        self.v0.len() + self.blocks.iter().map(SphereBlock::dim).sum::<usize>()
    }

    /// Coordinate ranges of the blocks inside a full point.
    pub fn block_ranges(&self) -> Vec<Range<usize>> {
        let mut start = self.v0.len();
        self.blocks
            .iter()
            .map(|b| {
                let r = start..start + b.dim();
                start = r.end;
                r
            })
            .collect()
    }

    /// The point with block directions `ws` (one pure quaternion per block).
    pub fn point(&self, ws: &[Quaternion<F>]) -> Vec<Quaternion<F>> {
        assert_eq!(ws.len(), self.r());
        let mut out = self.v0.clone();
        for (b, w) in self.blocks.iter().zip(ws) {
            out.extend(b.point(w));
        }
        out
    }

    pub fn contains(&self, alg: &QuatAlgebra<F>, w: &[Quaternion<F>]) -> bool {
        if w.len() != self.arity() || w[..self.v0.len()] != self.v0[..] {
            return false;
        }
        self.blocks
            .iter()
            .zip(self.block_ranges())
            .all(|(b, r)| b.contains(alg, &w[r]))
    }

    pub fn sample_directions<R: Rng>(&self, alg: &QuatAlgebra<F>, rng: &mut R) -> Vec<Quaternion<F>> {
        self.blocks
            .iter()
            .map(|b| sample_sphere_point_with(alg, b, rng))
            .collect()
    }

    pub fn sample_point<R: Rng>(&self, alg: &QuatAlgebra<F>, rng: &mut R) -> Vec<Quaternion<F>> {
        let ws = self.sample_directions(alg, rng);
        self.point(&ws)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "v0": self.v0.iter().map(quat_json).collect::<Vec<_>>(),
            "blocks": self.blocks.iter().map(|b| json!({
                "A": b.a.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "lambda": b.lambda.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "rho": b.rho.to_string(),
                "witness": b.reference().iter().map(quat_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

pub(crate) fn quat_json<F: Field>(q: &Quaternion<F>) -> Value {
    json!({
        "x0": q.x0.to_string(),
        "x1": q.x1.to_string(),
        "x2": q.x2.to_string(),
        "x3": q.x3.to_string(),
    })
}

/// `v = (v0, v1, ..., vr)` with central blocks, each block's last coordinate
/// failing to commute with the next block.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralPresentation<F: Field> {
    pub v0: Vec<Quaternion<F>>,
    pub blocks: Vec<Vec<Quaternion<F>>>,
    pub spheres: Vec<SphereBlock<F>>,
}

impl<F: Real> CentralPresentation<F> {
    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    /// Block lengths `(k0, k1, ..., kr)`.
    pub fn split(&self) -> Vec<usize> {
        std::iter::once(self.v0.len())
            .chain(self.blocks.iter().map(Vec::len))
            .collect()
    }

    pub fn reconstruct(&self) -> Vec<Quaternion<F>> {
        let mut v = self.v0.clone();
        for b in &self.blocks {
            v.extend(b.iter().cloned());
        }
        v
    }

    /// Pure part of the last prefix coordinate, rescaled like block witnesses.
    /// `None` when `r = 0` and the prefix is entirely scalar.
    pub fn prefix_direction(&self, alg: &QuatAlgebra<F>) -> Option<Quaternion<F>> {
        let last = self.v0.iter().rev().find(|q| !q.is_scalar())?;
        decompose_central(alg, std::slice::from_ref(last)).ok().map(|d| d.u)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "v0": self.v0.iter().map(quat_json).collect::<Vec<_>>(),
            "blocks": self.blocks.iter()
                .map(|b| b.iter().map(quat_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "r": self.r(),
        })
    }
}

/// Greedy maximal central blocks from the left, then each block's trailing
/// scalar coordinates are moved to the front of the following block.
pub fn central_presentation<F: Real>(alg: &QuatAlgebra<F>, v: &[Quaternion<F>]) -> CentralPresentation<F> {
    let mut greedy: Vec<Vec<Quaternion<F>>> = Vec::new();
    for q in v {
        match greedy.last_mut() {
            Some(b) if b.iter().all(|p| alg.commutes(p, q)) => b.push(q.clone()),
            _ => greedy.push(vec![q.clone()]),
        }
    }
    // Only a final block can end in scalars after the shift; nothing follows it.
    let count = greedy.len();
    for i in 0..count.saturating_sub(1) {
        let keep = greedy[i]
            .iter()
            .rposition(|q| !q.is_scalar())
            .map_or(0, |p| p + 1);
        let tail = greedy[i].split_off(keep);
        let next = std::mem::take(&mut greedy[i + 1]);
        greedy[i + 1] = tail.into_iter().chain(next).collect();
    }
    let mut it = greedy.into_iter();
    let v0 = it.next().unwrap_or_default();
    let blocks: Vec<_> = it.collect();
    let spheres = blocks
        .iter()
        .map(|b| SphereBlock::from_decomposition(decompose_central(alg, b).expect("central non-scalar block")))
        .collect();
    CentralPresentation { v0, blocks, spheres }
}

/// `B(v) = {v0} x S_{v1} x ... x S_{vr}`; the singleton `{v}` when `v` is
/// central.
pub fn blow_up<F: Real>(alg: &QuatAlgebra<F>, v: &[Quaternion<F>]) -> MultiSphere<F> {
    let pres = central_presentation(alg, v);
    MultiSphere {
        v0: pres.v0,
        blocks: pres.spheres,
    }
}

pub fn msphere_contains<F: Real>(alg: &QuatAlgebra<F>, s: &MultiSphere<F>, w: &[Quaternion<F>]) -> bool {
    s.contains(alg, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Quaternion<Rat>;

    fn h() -> QuatAlgebra<Rat> {
        QuatAlgebra::hamilton()
    }

    fn q(x: [i64; 4]) -> Q {
        Q::from_ints(x)
    }

    fn r(n: i64) -> Rat {
        Rat::from(n)
    }

    #[test]
    fn decompose_examples() {
        let h = h();
        let d = decompose_central(&h, &[Q::j(), q([1, 0, 1, 0])]).unwrap();
        assert_eq!((d.a, d.lambda, d.rho, d.u), (vec![r(0), r(1)], vec![r(1), r(1)], r(1), Q::j()));
        let d = decompose_central(&h, &[q([1, 2, 0, 0])]).unwrap();
        assert_eq!((d.a, d.lambda, d.rho, d.u), (vec![r(1)], vec![r(2)], r(1), Q::i()));
        assert_eq!(decompose_central(&h, &[Q::i(), Q::j()]), Err(CentralError::NotCentral));
        assert_eq!(decompose_central(&h, &[Q::one()]), Err(CentralError::AllReal));
    }

    #[test]
    fn decompose_keeps_sign_and_scale_consistent() {
        let h = h();
        let v = [q([0, -2, 0, 0]), q([3, 4, 0, 0])];
        let d = decompose_central(&h, &v).unwrap();
        assert_eq!(d.u, Q::i());
        assert_eq!(d.lambda, vec![r(-2), r(4)]);
        let b = SphereBlock::from_decomposition(d);
        assert_eq!(b.reference(), v.to_vec());
    }

    #[test]
    fn presentation_examples() {
        let h = h();
        let p = central_presentation(&h, &[Q::i(), Q::one(), Q::j()]);
        assert_eq!(p.v0, vec![Q::i()]);
        assert_eq!(p.blocks, vec![vec![Q::one(), Q::j()]]);

        let v = [q([1, 2, 0, 0]), q([3, 0, 0, 0]), q([0, 1, 0, 0])];
        let p = central_presentation(&h, &v);
        assert_eq!((p.r(), p.v0.clone()), (0, v.to_vec()));

        let p = central_presentation(&h, &[Q::i(), Q::j(), Q::one(), Q::j()]);
        assert_eq!(p.v0, vec![Q::i()]);
        assert_eq!(p.split(), vec![1, 3]);
        let s = &p.spheres[0];
        assert_eq!((s.a.clone(), s.lambda.clone(), s.rho.clone()), (vec![r(0), r(1), r(0)], vec![r(1), r(0), r(1)], r(1)));
    }

    #[test]
    fn presentation_of_empty_and_scalar_tuples() {
        let h = h();
        assert_eq!(central_presentation(&h, &[]).r(), 0);
        let p = central_presentation(&h, &[Q::one(), Q::i(), Q::j(), Q::one()]);
        assert_eq!(p.split(), vec![2, 2]);
    }

    #[test]
    fn blow_up_examples() {
        let h = h();
        let b = blow_up(&h, &[Q::i(), Q::j()]);
        assert_eq!(b.v0, vec![Q::i()]);
        assert_eq!((b.blocks[0].a.clone(), b.blocks[0].lambda.clone(), b.blocks[0].rho.clone()), (vec![r(0)], vec![r(1)], r(1)));

        let b = blow_up(&h, &[q([1, 2, 0, 0]), Q::j()]);
        assert_eq!(b.v0, vec![q([1, 2, 0, 0])]);
        assert_eq!(b.r(), 1);

        let c = [Q::i(), q([2, 3, 0, 0])];
        let b = blow_up(&h, &c);
        assert_eq!((b.r(), b.v0.clone()), (0, c.to_vec()));
    }

    #[test]
    fn membership_examples() {
        let h = h();
        let b = blow_up(&h, &[Q::i(), Q::j()]);
        assert!(b.contains(&h, &[Q::i(), Q::j().neg()]));
        assert!(!b.contains(&h, &[Q::j(), Q::i()]));
        assert!(!b.contains(&h, &[Q::i(), q([0, 0, 2, 0])]));
        assert!(!b.contains(&h, &[Q::i()]));
    }

    #[test]
    fn reflection_examples() {
        let h = h();
        assert_eq!(reflect(&h, &Q::i(), &q([0, 1, 1, 0])), Q::j().neg());
        assert_eq!(reflect(&h, &Q::i(), &Q::j()), Q::i());
    }

    #[test]
    fn sampled_sphere_points_have_exact_norm() {
        let h = h();
        let b = blow_up(&h, &[Q::i(), q([1, 3, 4, 0]), q([0, 6, 8, 0])]);
        for s in 0..100 {
            let w = sample_sphere_point(&h, &b.blocks[0], s);
            assert!(w.real_part().is_zero());
            assert_eq!(h.pure_dot(&w, &w), b.blocks[0].rho);
        }
        assert_eq!(sample_sphere_point(&h, &b.blocks[0], 7), sample_sphere_point(&h, &b.blocks[0], 7));
    }

    #[test]
    fn json_shape() {
        let h = h();
        let b = blow_up(&h, &[Q::i(), Q::j()]);
        let j = b.to_json();
        assert_eq!(j["blocks"][0]["rho"], "1");
        assert_eq!(j["blocks"][0]["witness"][0]["x2"], "1");
    }
}
