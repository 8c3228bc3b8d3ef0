//! Comparison with the KnotInfo tables of Jones polynomials, odd Khovanov
//! homology and even Khovanov homology for all prime knots up to 8 crossings.

mod common;

use std::collections::BTreeMap;

use common::{mod2_from_integral, references, unnormalized_from_jones, unreduce, Series};
use oddsz::complex::build_diagram_complex;
use oddsz::edgesign::Flavor;
use oddsz::homology::odd_khovanov_homology;
use oddsz::interface::catalog_lookup;
use oddsz::oracles::{even_khovanov_f2, jones_unnormalized};
use oddsz::planar::OrientationPolicy;

#[test]
fn reference_table_covers_knots_through_eight_crossings() {
    assert_eq!(references().len(), 35);
}

#[test]
fn odd_khovanov_matches_knotinfo() {
    for r in references() {
        let d = catalog_lookup(&r.name).unwrap().diagram();
        let dc = build_diagram_complex(&d, OrientationPolicy::Default, Flavor::Y).unwrap();
        let kh = odd_khovanov_homology(&dc).unwrap();
        let mut ours = Series::new();
        for ((h, q), g) in kh.by_q() {
            if g.rank > 0 {
                *ours.entry((h, q, 0)).or_insert(0) += g.rank as i64;
            }
            for t in &g.torsion {
                *ours.entry((h, q, i64::try_from(t).unwrap())).or_insert(0) += 1;
            }
        }
        assert_eq!(ours, unreduce(&r.odd_reduced), "{}", r.name);
    }
}

#[test]
fn jones_oracle_matches_knotinfo() {
    for r in references() {
        let d = catalog_lookup(&r.name).unwrap().diagram();
        assert_eq!(jones_unnormalized(&d), unnormalized_from_jones(&r.jones), "{}", r.name);
    }
}

#[test]
fn even_f2_oracle_matches_knotinfo() {
    for r in references() {
        let d = catalog_lookup(&r.name).unwrap().diagram();
        let want: BTreeMap<(i64, i64), usize> = mod2_from_integral(&r.even);
        assert_eq!(even_khovanov_f2(&d).0, want, "{}", r.name);
    }
}
