use nalgebra::DVector;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eulerwedge::causal::{
    compression_member_poincare, flow, in_wedge_wr, minkowski_dot, modular_vector_field, sample_de_sitter, sample_wr,
    sampled_compression_check, timelike_components, EulerFlow, IsometryElement, SampleVerdict, SpacetimePoint,
    WedgeRegion, GEOM_TOL,
};
use eulerwedge::par::Execution;

fn inside(x: DVector<f64>) -> bool {
    in_wedge_wr(&SpacetimePoint { coords: x })
}

fn compression(rng: &mut ChaCha8Rng, n: usize) -> IsometryElement {
    let lp = rng.random_range(0.0..3.0);
    let lm = rng.random_range(0.0..3.0);
    let mut t = vec![0.5 * (lp - lm), 0.5 * (lp + lm)];
    t.extend((2..n).map(|_| rng.random_range(-2.0..2.0)));
    let mut g = IsometryElement::translation(&t).compose(&IsometryElement::boost(n, 1, rng.random_range(-2.0..2.0)));
    if n > 3 {
        g = g.compose(&IsometryElement::rotation(n, 2, 3, rng.random_range(-3.0..3.0)));
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn boost_flow_preserves_the_wedge(seed in any::<u64>(), n in 2usize..=5, t in -4.0..4.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = flow(EulerFlow::Boost01, n, t);
        for _ in 0..50 {
            let x = sample_wr(&mut rng, n);
            prop_assert!(inside(g.apply(&x)));
        }
    }

    #[test]
    fn members_pass_the_sampled_check(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = compression(&mut rng, n);
        prop_assert!(compression_member_poincare(&g, GEOM_TOL).unwrap());
        let verdict = sampled_compression_check(&g, &WedgeRegion::standard(n), 500, seed, Execution::Sequential).unwrap();
        prop_assert_eq!(verdict, SampleVerdict::ConsistentIn);
    }

    #[test]
    fn outward_translations_are_witnessed(t1 in -1.0..1.0f64, margin in 0.1..2.0f64, past in any::<bool>(), seed in any::<u64>()) {
        let t0 = if past { -(t1.abs() + margin) } else { t1.abs() + margin };
        let g = IsometryElement::translation(&[t0, t1, 0.3]);
        prop_assert!(!compression_member_poincare(&g, GEOM_TOL).unwrap());
        let verdict = sampled_compression_check(&g, &WedgeRegion::standard(3), 2000, seed, Execution::Sequential).unwrap();
        match verdict {
            SampleVerdict::WitnessOut(x) => {
                prop_assert!(inside(x.clone()));
                prop_assert!(!inside(g.apply(&x)));
            }
            SampleVerdict::ConsistentIn => prop_assert!(false, "no witness for {:?}", (t0, t1)),
        }
    }

    #[test]
    fn de_sitter_field_is_tangent_and_components_swap(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points: Vec<SpacetimePoint> = (0..100).map(|_| sample_de_sitter(&mut rng, d, 2.5)).collect();
        for m in &points {
            let x = modular_vector_field(EulerFlow::Boost01, m);
            prop_assert!(minkowski_dot(&x, &m.coords).abs() < 1e-9 * m.coords.norm_squared().max(1.0));
        }
        let mirrored: Vec<SpacetimePoint> = points
            .iter()
            .map(|m| {
                let mut c: DVector<f64> = m.coords.clone();
                c[0] = -c[0];
                c[1] = -c[1];
                SpacetimePoint { coords: c }
            })
            .collect();
        let (future, past) = timelike_components(&points);
        let (m_future, m_past) = timelike_components(&mirrored);
        prop_assert_eq!(future, m_past);
        prop_assert_eq!(past, m_future);
    }
}
