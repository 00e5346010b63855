//! Seeded random test points with commensurable sphere radii.
//!
//! Every non-scalar coordinate is `a + b * u` with `u` a pure quaternion of
//! exact unit norm in the Hamilton algebra, so every block's `rho` divided by
//! the prefix norm is a rational square.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::quat::Quaternion;
use crate::scalar::{Field, Rat};

const UNIT_DIRS: [([i64; 3], i64); 10] = [
    ([1, 0, 0], 1),
    ([0, 1, 0], 1),
    ([0, 0, 1], 1),
    ([3, 4, 0], 5),
    ([0, 3, 4], 5),
    ([4, 0, 3], 5),
    ([2, 2, 1], 3),
    ([1, 2, 2], 3),
    ([2, 3, 6], 7),
    ([6, 2, 3], 7),
];

const COEFFS: [(i64, i64); 6] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2)];

pub fn random_unit_direction<R: Rng>(rng: &mut R) -> Quaternion<Rat> {
    let (v, d) = UNIT_DIRS.choose(rng).expect("nonempty");
    let mut c = v.map(|x| Rat::new(x, *d));
    c.shuffle(rng);
    for x in &mut c {
        if rng.gen_bool(0.5) {
            *x = x.neg();
        }
    }
    let [x1, x2, x3] = c;
    Quaternion::new(Rat::zero(), x1, x2, x3)
}

/// A point of arity `1..=max_n`: a quarter of the coordinates are scalars,
/// and half of the others reuse the previous direction so central runs occur.
pub fn random_point<R: Rng>(rng: &mut R, max_n: usize) -> Vec<Quaternion<Rat>> {
    let n = rng.gen_range(1..=max_n);
    let mut dir = random_unit_direction(rng);
    (0..n)
        .map(|_| {
            let a = Rat::from(rng.gen_range(-2i64..=2));
            if rng.gen_bool(0.25) {
                return Quaternion::scalar(a);
            }
            if rng.gen_bool(0.5) {
                dir = random_unit_direction(rng);
            }
            let (num, den) = *COEFFS.choose(rng).expect("nonempty");
            Quaternion::scalar(a).add(&dir.scale(&Rat::new(num, den)))
        })
        .collect()
}

/// Like [`random_point`] but with at least one sphere block.
pub fn random_noncentral_point<R: Rng>(rng: &mut R, max_n: usize) -> Vec<Quaternion<Rat>> {
    let alg = crate::quat::QuatAlgebra::hamilton();
    loop {
        let v = random_point(rng, max_n.max(2));
        if !alg.is_central_tuple(&v) {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::ideal::q_grid;
    use crate::quat::QuatAlgebra;

    #[test]
    fn directions_have_unit_norm() {
        let a = QuatAlgebra::<Rat>::hamilton();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            let u = random_unit_direction(&mut rng);
            assert_eq!(a.norm(&u), Rat::one());
        }
    }

    #[test]
    fn grids_exist_for_generated_points() {
        let a = QuatAlgebra::<Rat>::hamilton();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let v = random_noncentral_point(&mut rng, 6);
            assert!(v.len() <= 6);
            q_grid(&a, &v).unwrap();
        }
    }
}
