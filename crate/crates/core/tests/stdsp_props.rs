use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eulerwedge::linalg::Subspace;
use eulerwedge::stdsp::{
    self, apply, intersect_family, is_standard, modular_from_subspace, subspace_from_modular, symplectic_complement,
    transform, AntiUnitaryOp, ModularPair,
};

fn random_op(rng: &mut ChaCha8Rng, n: usize) -> AntiUnitaryOp {
    let u = stdsp::random_unitary(rng, n);
    if rng.random::<bool>() { AntiUnitaryOp::unitary(&u).unwrap() } else { AntiUnitaryOp::antiunitary(&u).unwrap() }
}

/// Complex coordinate subspace on the indices selected by `mask`, in interleaved real form.
fn coordinate_subspace(n: usize, mask: u32) -> Subspace {
    let cols: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).flat_map(|i| [2 * i, 2 * i + 1]).collect();
    let m = DMatrix::from_fn(2 * n, cols.len(), |r, c| if r == cols[c] { 1.0 } else { 0.0 });
    Subspace::span(&m, 1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn modular_data_roundtrip(seed in any::<u64>(), n in 1usize..=6, ratio in 1.5..80.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = ModularPair::random(&mut rng, n, ratio);
        let v = subspace_from_modular(&p).unwrap();
        prop_assert!(is_standard(&v));
        prop_assert_eq!(v.dim(), n);
        prop_assert!(modular_from_subspace(&v).unwrap().distance(&p) < 1e-8);
        let vp = symplectic_complement(&v);
        prop_assert!(is_standard(&vp));
        prop_assert!(symplectic_complement(&vp).same_as(&v, 1e-9));
        prop_assert!(apply(&p.j_op(), &v).same_as(&vp, 1e-9));
        for t in [-1.3, 0.4, 2.2] {
            prop_assert!(apply(&p.delta_it(t), &v).same_as(&v, 1e-9));
        }
    }

    #[test]
    fn transformation_law_holds(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = subspace_from_modular(&ModularPair::random(&mut rng, n, 20.0)).unwrap();
        let u = random_op(&mut rng, n);
        let uv = transform(&u, &v).unwrap();
        prop_assert!(transform(&u.inverse(), &uv).unwrap().same_as(&v, 1e-8));
    }

    #[test]
    fn family_intersections_are_antitone_and_idempotent(seed in any::<u64>(), n in 1usize..=4, k in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = ModularPair::random(&mut rng, n, 10.0);
        let v = subspace_from_modular(&p).unwrap();
        let mut ops: Vec<AntiUnitaryOp> = (0..k).map(|i| p.delta_it(0.3 * i as f64)).collect();
        ops.push(random_op(&mut rng, n));
        let small = intersect_family(&v, &ops, 1e-9);
        let large = intersect_family(&v, &ops[..k], 1e-9);
        prop_assert!(large.contains(&small, 1e-8));
        let mut doubled = ops.clone();
        doubled.extend(ops.iter().cloned());
        prop_assert!(intersect_family(&v, &doubled, 1e-9).same_as(&small, 1e-8));
    }

    #[test]
    fn tensor_products_multiply_modular_data(seed in any::<u64>(), n1 in 1usize..=3, n2 in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p1 = ModularPair::random(&mut rng, n1, 8.0);
        let p2 = ModularPair::random(&mut rng, n2, 8.0);
        let v1 = subspace_from_modular(&p1).unwrap();
        let v2 = subspace_from_modular(&p2).unwrap();
        let t = stdsp::tensor(&v1, &v2).unwrap();
        prop_assert!(is_standard(&t));
        let delta = modular_from_subspace(&t).unwrap().delta;
        prop_assert!((delta - stdsp::ckron(&p1.delta, &p2.delta)).camax() < 1e-7);
    }

    #[test]
    fn invariant_standard_subspaces_exhaust(seed in any::<u64>(), pairs in 1usize..=2, fixed in 0usize..=1, mask in 1u32..32) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lambdas: Vec<f64> = (0..pairs).map(|_| rng.random_range(1.5..20.0)).collect();
        let n = 2 * pairs + fixed;
        let mask = mask & ((1 << n) - 1);
        let u = stdsp::random_unitary(&mut rng, n);
        let p = ModularPair::canonical(&lambdas, fixed).conjugated(&u);
        let v = subspace_from_modular(&p).unwrap();
        let e = apply(&AntiUnitaryOp::unitary(&u).unwrap(), &coordinate_subspace(n, mask));
        let h = v.intersect(&e, 1e-9);
        prop_assert!(v.contains(&h, 1e-8));
        prop_assert!(apply(&p.delta_it(0.7), &h).same_as(&h, 1e-8));
        prop_assert_eq!(is_standard(&h), h.same_as(&v, 1e-8));
    }
}
