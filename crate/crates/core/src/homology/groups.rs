use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::exterior::AbelianGroupDescriptor;

/// Abelian groups indexed by `(h, δ)`; zero entries are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BigradedGroups {
    entries: BTreeMap<(i64, i64), AbelianGroupDescriptor>,
}

impl BigradedGroups {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, h: i64, delta: i64, g: AbelianGroupDescriptor) {
        if g.is_zero() {
            self.entries.remove(&(h, delta));
        } else {
            self.entries.insert((h, delta), g);
        }
    }

    pub fn get(&self, h: i64, delta: i64) -> AbelianGroupDescriptor {
        self.entries.get(&(h, delta)).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), &AbelianGroupDescriptor)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The same groups indexed by `(h, q)` with `q = δ + 2h`.
    pub fn by_q(&self) -> BTreeMap<(i64, i64), AbelianGroupDescriptor> {
        self.iter().map(|((h, d), g)| ((h, d + 2 * h), g.clone())).collect()
    }

    pub fn total_rank(&self) -> usize {
        self.entries.values().map(|g| g.rank).sum()
    }

    /// Per `δ`, the sum of ranks over all `h`.
    pub fn rank_by_delta(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for ((_, d), g) in self.iter() {
            *out.entry(d).or_insert(0) += g.rank;
        }
        out.retain(|_, r| *r > 0);
        out
    }

    /// `Σ_h (-1)^h rank H^{h,q}` as coefficients indexed by `q`.
    pub fn graded_euler(&self) -> BTreeMap<i64, i64> {
        let mut out = BTreeMap::new();
        for ((h, d), g) in self.iter() {
            let sign = if h.rem_euclid(2) == 0 { 1 } else { -1 };
            *out.entry(d + 2 * h).or_insert(0) += sign * g.rank as i64;
        }
        out.retain(|_, c| *c != 0);
        out
    }
}

/// Entrywise equality of rank and torsion.
pub fn groups_equal(a: &BigradedGroups, b: &BigradedGroups) -> bool {
    a == b
}

impl fmt::Display for BigradedGroups {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return writeln!(f, "  (zero)");
        }
        for ((h, d), g) in self.iter() {
            writeln!(f, "  h={h:>3}  δ={d:>3}  q={:>3}  {g}", d + 2 * h)?;
        }
        Ok(())
    }
}

impl Serialize for BigradedGroups {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            h: i64,
            delta: i64,
            q: i64,
            group: &'a AbelianGroupDescriptor,
        }
        let mut seq = s.serialize_seq(Some(self.len()))?;
        for ((h, delta), group) in self.iter() {
            seq.serialize_element(&Entry { h, delta, q: delta + 2 * h, group })?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn sample() -> BigradedGroups {
        let mut g = BigradedGroups::new();
        g.insert(0, 1, AbelianGroupDescriptor::free(1));
        g.insert(2, -3, AbelianGroupDescriptor::new(1, vec![BigInt::from(2)]));
        g
    }

    #[test]
    fn equality_is_entrywise() {
        let a = sample();
        assert!(groups_equal(&a, &a.clone()));
        let mut swapped = BigradedGroups::new();
        swapped.insert(0, 1, a.get(2, -3));
        swapped.insert(2, -3, a.get(0, 1));
        assert!(!groups_equal(&a, &swapped));
        let mut shifted = BigradedGroups::new();
        for ((h, d), g) in a.iter() {
            shifted.insert(h + 1, d, g.clone());
        }
        assert!(!groups_equal(&a, &shifted));
    }

    #[test]
    fn zero_groups_are_not_stored() {
        let mut g = sample();
        g.insert(5, 5, AbelianGroupDescriptor::free(0));
        assert_eq!(g.len(), 2);
        assert_eq!(g.graded_euler(), BTreeMap::from([(1, 2)]));
        assert_eq!(g.by_q().keys().copied().collect::<Vec<_>>(), vec![(0, 1), (2, 1)]);
    }
}
