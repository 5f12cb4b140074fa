use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use eulerwedge::liealg::{self, LieAlgebra, EIGEN_TOL};
use eulerwedge::rootsys::{build_root_system, to_f64, Family, RootSystemSpec};
use eulerwedge::wedgespace::random_element;

fn coweight(l: &LieAlgebra, n: usize, j: usize) -> DVector<f64> {
    let rs = build_root_system(RootSystemSpec::new(Family::A, n - 1).unwrap()).unwrap();
    let h = to_f64(&rs.fundamental_coweight(j).unwrap().vector);
    l.from_matrix(&DMatrix::from_diagonal(&DVector::from_vec(h))).unwrap()
}

fn builtins() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["sl2", "sl3", "sl4", "gl2", "gl3", "so(1,3)", "so(2,3)", "sp4", "aff1", "poincare2", "poincare3", "poincare4"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn builtins_satisfy_jacobi(name in builtins()) {
        let l = LieAlgebra::builtin(name).unwrap();
        prop_assert!(l.jacobi_residual() < 1e-10);
    }

    #[test]
    fn conjugated_coweights_stay_euler(n in 2usize..=4, node in 0usize..3, seed in any::<u64>(), scale in 0.0..0.6f64) {
        let l = LieAlgebra::sl(n).unwrap();
        let j = node % (n - 1) + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_element(&mut rng, &l, scale, None);
        let h = &g.matrix * coweight(&l, n, j);

        prop_assert!(liealg::is_euler(&l, &h, 1e-7).unwrap());
        let gr = liealg::grading(&l, &h, 1e-7).unwrap();
        prop_assert!(gr.residual < 1e-8);
        let (plus, zero, minus) = gr.dims();
        prop_assert_eq!(plus, minus);
        prop_assert_eq!(plus + zero + minus, l.dim());

        let (sq, auto) = liealg::tau_residuals(&l, &gr.tau());
        prop_assert!(sq < 1e-8 && auto < 1e-8);

        let nh = liealg::n_h(&l, &h, 1e-7).unwrap();
        prop_assert!(liealg::ideal_residual(&l, &nh) < 1e-8);
        prop_assert!(liealg::is_anti_elliptic(&l, &h, 1e-7).is_ok());
    }

    #[test]
    fn doubled_coweights_are_not_euler(n in 2usize..=5, node in 0usize..4) {
        let l = LieAlgebra::sl(n).unwrap();
        let j = node % (n - 1) + 1;
        let h = coweight(&l, n, j);
        prop_assert!(liealg::is_euler(&l, &h, EIGEN_TOL).unwrap());
        prop_assert!(!liealg::is_euler(&l, &(&h * 2.0), EIGEN_TOL).unwrap());
    }

    #[test]
    fn moved_poincare_boosts_are_anti_elliptic(d in 2usize..=5, seed in any::<u64>()) {
        let l = LieAlgebra::poincare(d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let iso = eulerwedge::causal::IsometryElement::random(&mut rng, d, 1.0, 2.0);
        let g = eulerwedge::wedgespace::GradedGroupElement::poincare(&l, &iso).unwrap();
        let h = &g.matrix * l.basis_vector(d);
        prop_assert!(liealg::is_anti_elliptic(&l, &h, 1e-9).unwrap());
    }
}
