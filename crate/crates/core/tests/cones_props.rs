use nalgebra::DVector;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eulerwedge::cones::{graded_cone_parts, Cone, LorentzCone, PolyhedralCone, SampleOptions};
use eulerwedge::liealg::{self, LieAlgebra, EIGEN_TOL};

fn random_vec(rng: &mut ChaCha8Rng, d: usize) -> DVector<f64> {
    DVector::from_fn(d, |_, _| rng.random_range(-1.0..1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn membership_is_monotone_in_generators(seed in any::<u64>(), d in 2usize..=4, k in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<_> = (0..k).map(|_| random_vec(&mut rng, d) + DVector::from_element(d, 0.05)).collect();
        let c = PolyhedralCone::new(d, gens).unwrap();
        let bigger = c.with_generator(random_vec(&mut rng, d) + DVector::from_element(d, 0.05)).unwrap();
        for _ in 0..20 {
            let x = random_vec(&mut rng, d);
            if c.member(&x, 1e-9).unwrap() {
                prop_assert!(bigger.member(&x, 1e-9).unwrap());
            }
        }
        for g in c.generators() {
            let combo = g * rng.random_range(0.0..3.0);
            prop_assert!(c.member(&combo, 1e-9).unwrap());
        }
    }

    #[test]
    fn lorentz_graded_parts_are_abelian_eigenrays(d in 2usize..=4) {
        let l = LieAlgebra::poincare(d).unwrap();
        let h = l.basis_vector(d);
        let g = liealg::grading(&l, &h, EIGEN_TOL).unwrap();
        let mut embed = nalgebra::DMatrix::zeros(l.dim(), d);
        for mu in 0..d {
            embed[(mu, mu)] = 1.0;
        }
        let c = Cone::Lorentz(LorentzCone::new(embed).unwrap());
        let parts = graded_cone_parts(&c, &l, &h, &g, SampleOptions::default()).unwrap();
        let p_plus = g.projection(1);
        let p_minus = g.projection(-1);
        for x in parts.plus.generators() {
            prop_assert!((&p_plus * x - x).amax() < 1e-9);
            prop_assert!(c.member(x, 1e-9).unwrap());
            for y in parts.plus.generators() {
                prop_assert!(l.bracket(x, y).amax() < 1e-9);
            }
        }
        for x in parts.minus.generators() {
            prop_assert!((&p_minus * x - x).amax() < 1e-9);
            prop_assert!(c.member(&-x, 1e-9).unwrap());
            for y in parts.minus.generators() {
                prop_assert!(l.bracket(x, y).amax() < 1e-9);
            }
        }
    }
}
