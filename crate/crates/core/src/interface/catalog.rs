use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::planar::{parse_pd, LinkDiagram};

const TABLE: &str = include_str!("../../data/catalog.txt");

/// A named diagram from the bundled table of prime knots up to 8 crossings
/// and links up to 7 crossings.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub pd: String,
    pub crossings: usize,
    pub components: usize,
}

impl CatalogEntry {
    pub fn diagram(&self) -> LinkDiagram {
        parse_pd(&self.pd).expect("catalog entries are validated on load")
    }
}

fn load() -> Vec<CatalogEntry> {
    TABLE
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|line| {
            let (name, pd) = line.split_once('\t').expect("catalog line is `name<TAB>pd`");
            let d = parse_pd(pd).unwrap_or_else(|e| panic!("catalog entry {name}: {e}"));
            CatalogEntry { name: name.to_string(), pd: pd.to_string(), crossings: d.n_crossings(), components: d.components() }
        })
        .collect()
}

pub fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(load)
}

pub fn catalog_lookup(name: &str) -> Result<&'static CatalogEntry> {
    catalog().iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownEntry(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup() {
        let t = catalog_lookup("3_1").unwrap();
        assert_eq!((t.crossings, t.components), (3, 1));
        assert_eq!(catalog_lookup("0_1").unwrap().crossings, 0);
        assert!(matches!(catalog_lookup("zzz"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn entries_round_trip_through_pd_strings() {
        use crate::complex::GradedBasis;
        use crate::planar::{zero_resolution, OrientationPolicy};
        for e in catalog().iter().filter(|e| e.crossings <= 6) {
            let d = e.diagram();
            let again = parse_pd(&d.to_pd_string()).unwrap();
            let dim = |d: &LinkDiagram| GradedBasis::new(&zero_resolution(d, OrientationPolicy::Default)).len();
            assert_eq!(dim(&d), dim(&again), "{}", e.name);
        }
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<&str> = catalog().iter().map(|e| e.name.as_str()).collect();
        let n = names.len();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), n);
    }
}
