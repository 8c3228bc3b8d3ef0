//! Structural identities of the complex on catalog and random inputs.

mod common;

use oddsz::complex::build_diagram_complex;
use oddsz::edgesign::{solve, Flavor};
use oddsz::interface::{catalog, verify_random};
use oddsz::oracles::check_identities;
use oddsz::planar::{zero_resolution, FaceAddress, OrientationPolicy};

#[test]
fn identities_hold_on_small_catalog_diagrams() {
    for e in catalog().iter().filter(|e| (1..=4).contains(&e.crossings)) {
        let c = zero_resolution(&e.diagram(), OrientationPolicy::Default);
        let eps = solve(&c, Flavor::Y).unwrap();
        let report = check_identities(&c, &eps, 11).unwrap();
        assert!(report.passed(), "{}\n{report}", e.name);
    }
}

#[test]
fn identities_hold_on_random_diagrams() {
    let rv = verify_random(25, 5, 3).unwrap();
    assert!(rv.report.passed(), "{}", rv.report);
    assert_eq!(rv.diagrams.len(), 25);
}

#[test]
fn corrupted_edge_assignment_is_caught() {
    let d = catalog().iter().find(|e| e.name == "4_1").unwrap().diagram();
    let c = zero_resolution(&d, OrientationPolicy::Default);
    let mut eps = solve(&c, Flavor::Y).unwrap();
    let e = FaceAddress::parse("*000").unwrap();
    eps.set(&e, -eps.get(&e));
    let report = check_identities(&c, &eps, 1).unwrap();
    let y = report.get("edge_assignment_type_y").unwrap();
    let dd = report.get("d_squared_per_degree").unwrap();
    assert!(!y.passed && !dd.passed);
    assert!(dd.witness.as_deref().unwrap().contains("vertex"));
}

#[test]
fn both_flavors_square_to_zero_on_unknot_diagrams() {
    for (name, d) in common::unknot_diagrams() {
        for flavor in [Flavor::X, Flavor::Y] {
            let dc = build_diagram_complex(&d, OrientationPolicy::Default, flavor).unwrap();
            assert!(dc.d.mul(&dc.d).unwrap().is_zero(), "{name} {flavor:?}");
        }
    }
}
