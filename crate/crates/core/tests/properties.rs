//! Property tests on seeded random diagrams.

mod common;

use oddsz::complex::build_diagram_complex;
use oddsz::edgesign::Flavor;
use oddsz::homology::{convergence, odd_khovanov_f2, odd_khovanov_homology, spectral_pages, total_homology};
use oddsz::oracles::{euler_characteristic, even_khovanov_f2, jones_unnormalized, mod2_reduce, random_diagram};
use oddsz::planar::{parse_pd, OrientationPolicy};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn diagram(seed: u64, n: usize) -> oddsz::planar::LinkDiagram {
    random_diagram(&mut ChaCha8Rng::seed_from_u64(seed), n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn euler_characteristic_is_the_jones_polynomial(seed in any::<u64>(), n in 1usize..=6) {
        let d = diagram(seed, n);
        let dc = build_diagram_complex(&d, OrientationPolicy::Default, Flavor::Y).unwrap();
        let kh = odd_khovanov_homology(&dc).unwrap();
        prop_assert_eq!(euler_characteristic(&kh), jones_unnormalized(&d));
    }

    #[test]
    fn reduction_mod_two_is_even_khovanov(seed in any::<u64>(), n in 1usize..=6) {
        let d = diagram(seed, n);
        let dc = build_diagram_complex(&d, OrientationPolicy::Default, Flavor::Y).unwrap();
        let f2 = odd_khovanov_f2(&dc);
        prop_assert_eq!(&f2, &even_khovanov_f2(&d));
        prop_assert_eq!(&mod2_reduce(&odd_khovanov_homology(&dc).unwrap()), &f2);
    }

    #[test]
    fn jones_of_the_mirror(seed in any::<u64>(), n in 1usize..=6) {
        let d = diagram(seed, n);
        prop_assert_eq!(jones_unnormalized(&d.mirror()), jones_unnormalized(&d).mirror());
    }

    #[test]
    fn homology_does_not_depend_on_arc_orientations(seed in any::<u64>(), n in 1usize..=5, flip in any::<u64>()) {
        let d = diagram(seed, n);
        let a = build_diagram_complex(&d, OrientationPolicy::Default, Flavor::Y).unwrap();
        let b = build_diagram_complex(&d, OrientationPolicy::Random(flip), Flavor::Y).unwrap();
        prop_assert_eq!(odd_khovanov_homology(&a).unwrap(), odd_khovanov_homology(&b).unwrap());
        prop_assert_eq!(total_homology(&a).unwrap(), total_homology(&b).unwrap());
        let (pa, pb) = (spectral_pages(&a, n + 1).unwrap(), spectral_pages(&b, n + 1).unwrap());
        prop_assert_eq!(pa.infinity, pb.infinity);
        prop_assert_eq!(pa.collapse_page, pb.collapse_page);
    }

    #[test]
    fn spectral_sequence_accounts_for_total_homology(seed in any::<u64>(), n in 1usize..=6) {
        let d = diagram(seed, n);
        let dc = build_diagram_complex(&d, OrientationPolicy::Default, Flavor::Y).unwrap();
        let ss = spectral_pages(&dc, 2).unwrap();
        prop_assert!(ss.rank_consistent);
        prop_assert_eq!(&ss.pages[0].groups, &odd_khovanov_homology(&dc).unwrap());
        prop_assert!(convergence(&total_homology(&dc).unwrap(), &ss).ranks_match());
    }

    #[test]
    fn pd_strings_round_trip(seed in any::<u64>(), n in 1usize..=8) {
        let d = diagram(seed, n);
        let e = parse_pd(&d.to_pd_string()).unwrap();
        prop_assert_eq!(e.to_pd_string(), d.to_pd_string());
        prop_assert_eq!((e.n_plus(), e.n_minus(), e.components()), (d.n_plus(), d.n_minus(), d.components()));
    }
}

#[test]
fn unknot_diagrams_have_the_homology_of_the_unknot() {
    for (name, d) in common::unknot_diagrams() {
        let dc = build_diagram_complex(&d, OrientationPolicy::Default, Flavor::Y).unwrap();
        let total = total_homology(&dc).unwrap();
        assert_eq!(total.keys().copied().collect::<Vec<_>>(), vec![-1, 1], "{name}");
        assert!(total.values().all(|g| g.rank == 1 && g.torsion.is_empty()), "{name}");
        let ss = spectral_pages(&dc, 2).unwrap();
        assert_eq!(ss.collapse_page, 2, "{name}");
    }
}
