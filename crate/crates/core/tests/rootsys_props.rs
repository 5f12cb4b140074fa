use std::collections::BTreeSet;

use proptest::prelude::*;

use eulerwedge::rootsys::{build_root_system, reflect, Family, RootSystem, RootSystemSpec};

fn small_types() -> impl Strategy<Value = (Family, usize)> {
    prop_oneof![
        (1usize..=5).prop_map(|n| (Family::A, n)),
        (2usize..=5).prop_map(|n| (Family::B, n)),
        (3usize..=5).prop_map(|n| (Family::C, n)),
        (4usize..=5).prop_map(|n| (Family::D, n)),
        Just((Family::F, 4)),
        Just((Family::G, 2)),
        (1usize..=3).prop_map(|n| (Family::BC, n)),
    ]
}

fn system(family: Family, n: usize) -> RootSystem {
    build_root_system(RootSystemSpec::new(family, n).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coweight_orbits_are_closed_under_simple_reflections((family, n) in small_types(), node in 0usize..8) {
        let rs = system(family, n);
        let j = node % n + 1;
        let v = rs.fundamental_coweight(j).unwrap().vector;
        let orbit = rs.weyl_orbit(&v).unwrap();
        let set: BTreeSet<_> = orbit.iter().cloned().collect();
        prop_assert_eq!(set.len(), orbit.len());
        prop_assert!(set.contains(&v));
        for w in &orbit {
            for a in rs.simple_roots() {
                prop_assert!(set.contains(&reflect(w, a)));
            }
        }
        let start = reflect(&v, &rs.simple_roots()[0]);
        let again: BTreeSet<_> = rs.weyl_orbit(&start).unwrap().into_iter().collect();
        prop_assert_eq!(again, set);
    }

    #[test]
    fn symmetric_euler_matches_diagram_symmetry((family, n) in small_types()) {
        let rs = system(family, n);
        let sigma = rs.opposition_involution();
        for j in rs.euler_nodes() {
            prop_assert_eq!(rs.is_symmetric_euler(j).unwrap(), sigma[j - 1] == j);
        }
    }

    #[test]
    fn euler_gradings_are_balanced((family, n) in small_types()) {
        let rs = system(family, n);
        for j in rs.euler_nodes() {
            let (plus, zero, minus) = rs.grading_dimensions(j).unwrap();
            prop_assert_eq!(plus, minus);
            prop_assert!(plus > 0);
            prop_assert_eq!(plus + minus + zero, rs.roots().len() + rs.rank());
        }
    }

    #[test]
    fn classification_is_deterministic((family, n) in small_types()) {
        let a = system(family, n);
        let b = system(family, n);
        prop_assert_eq!(a.euler_nodes(), b.euler_nodes());
        prop_assert_eq!(a.opposition_involution(), b.opposition_involution());
    }
}
