use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qnull::central::{blow_up, central_presentation, decompose_central, SphereBlock};
use qnull::ideal::conj_transform;
use qnull::instances::{random_noncentral_point, random_point};
use qnull::msphere::restrict;
use qnull::parse::parse_poly;
use qnull::poly::{default_coeff_pool, random_poly, QPoly};
use qnull::quat::{QuatAlgebra, Quaternion};
use qnull::scalar::{Field, Rat};

type Q = Quaternion<Rat>;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rat::new(n, d))
}

fn quat() -> impl Strategy<Value = Q> {
    (small_rat(), small_rat(), small_rat(), small_rat()).prop_map(|(a, b, c, d)| Quaternion::new(a, b, c, d))
}

fn algebra() -> impl Strategy<Value = QuatAlgebra<Rat>> {
    (prop_oneof![-3i64..=-1, 1i64..=3], prop_oneof![-3i64..=-1, 1i64..=3])
        .prop_map(|(a, b)| QuatAlgebra::new(Rat::from(a), Rat::from(b)).unwrap())
}

proptest! {
    #[test]
    fn multiplication_is_associative(alg in algebra(), p in quat(), q in quat(), r in quat()) {
        prop_assert_eq!(alg.mul(&alg.mul(&p, &q), &r), alg.mul(&p, &alg.mul(&q, &r)));
    }

    #[test]
    fn norm_is_multiplicative(alg in algebra(), p in quat(), q in quat()) {
        prop_assert_eq!(alg.norm(&alg.mul(&p, &q)), alg.norm(&p).mul(&alg.norm(&q)));
    }

    #[test]
    fn conjugate_gives_norm(alg in algebra(), p in quat()) {
        prop_assert_eq!(alg.mul(&p, &p.conjugate()), Quaternion::scalar(alg.norm(&p)));
    }

    #[test]
    fn parse_inverts_printing(seed in any::<u64>(), n in 1usize..4, terms in 1usize..6) {
        let alg = QuatAlgebra::hamilton();
        let p = random_poly(n, 3, terms, &default_coeff_pool::<Rat>(), seed);
        prop_assert_eq!(parse_poly(&p.to_expr(), n, &alg).unwrap(), p);
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let p = random_poly(3, 3, 5, &default_coeff_pool::<Rat>(), seed);
        prop_assert_eq!(QPoly::<Rat>::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn presentation_reconstructs_and_contains_v(seed in any::<u64>()) {
        let alg = QuatAlgebra::hamilton();
        let v = random_point(&mut ChaCha8Rng::seed_from_u64(seed), 6);
        prop_assert_eq!(central_presentation(&alg, &v).reconstruct(), v.clone());
        prop_assert!(blow_up(&alg, &v).contains(&alg, &v));
    }

    #[test]
    fn restriction_is_linear(seed in any::<u64>(), c in quat()) {
        let alg = QuatAlgebra::hamilton();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_noncentral_point(&mut rng, 5);
        let s = blow_up(&alg, &v);
        let pool = default_coeff_pool::<Rat>();
        let p = random_poly(v.len(), 3, 4, &pool, seed);
        let q = random_poly(v.len(), 3, 4, &pool, seed ^ 1);
        let sum = restrict(&alg, &p.add(&q).unwrap(), &s).unwrap();
        prop_assert_eq!(sum, restrict(&alg, &p, &s).unwrap().add(&restrict(&alg, &q, &s).unwrap()));
        let scaled = restrict(&alg, &p.scale_left(&c, &alg), &s).unwrap();
        let rp = restrict(&alg, &p, &s).unwrap();
        for (mask, coeff) in &rp.terms {
            prop_assert_eq!(scaled.coeff(*mask), alg.mul(&c, coeff));
        }
        prop_assert_eq!(scaled.terms.len(), rp.terms.iter().filter(|(_, x)| !alg.mul(&c, x).is_zero()).count());
    }

    #[test]
    fn blow_up_is_monotone(seed in any::<u64>()) {
        let alg = QuatAlgebra::hamilton();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_point(&mut rng, 5);
        let s = blow_up(&alg, &v);
        let w = s.sample_point(&alg, &mut rng);
        let sw = blow_up(&alg, &w);
        for _ in 0..5 {
            let x = sw.sample_point(&alg, &mut rng);
            prop_assert!(s.contains(&alg, &x));
        }
    }

    #[test]
    fn spheres_are_conjugation_stable(seed in any::<u64>(), q in quat()) {
        prop_assume!(!q.is_zero());
        let alg = QuatAlgebra::hamilton();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_noncentral_point(&mut rng, 5);
        for b in central_presentation(&alg, &v).blocks {
            let sphere = SphereBlock::from_decomposition(decompose_central(&alg, &b).unwrap());
            let conj = alg.conjugate_tuple(&b, &q).unwrap();
            prop_assert!(sphere.contains(&alg, &conj));
        }
    }

    #[test]
    fn conjugation_at_boundaries_stays_in_the_blow_up(seed in any::<u64>()) {
        let alg = QuatAlgebra::hamilton();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_noncentral_point(&mut rng, 6);
        let s = blow_up(&alg, &v);
        let k0 = s.v0.len();
        let w = conj_transform(&alg, &v, k0).unwrap();
        prop_assert!(s.contains(&alg, &w));
    }
}
