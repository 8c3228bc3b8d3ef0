//! Filtered complexes with a `(h, δ)` grading and their reduction by
//! cancelling unit entries of the differential.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::complex::DiagramComplex;
use crate::exterior::IntMatrix;

/// A cochain complex over Z whose differential raises `h` by at least one
/// and lowers `δ` by exactly two.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    pub h: Vec<i64>,
    pub delta: Vec<i64>,
    pub d: IntMatrix,
}

impl FilteredComplex {
    pub fn from_diagram(dc: &DiagramComplex) -> Self {
        Self::with_differential(dc, dc.d.clone())
    }

    /// The same generators with only the `d_1` part of the differential.
    pub fn d1_of(dc: &DiagramComplex) -> Self {
        Self::with_differential(dc, dc.d1().clone())
    }

    fn with_differential(dc: &DiagramComplex, d: IntMatrix) -> Self {
        let n = dc.dim();
        FilteredComplex { h: (0..n).map(|i| dc.h(i)).collect(), delta: (0..n).map(|i| dc.delta(i)).collect(), d }
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    /// Generator indices grouped by `(h, δ)`.
    pub fn blocks(&self) -> BTreeMap<(i64, i64), Vec<usize>> {
        let mut out: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for i in 0..self.len() {
            out.entry((self.h[i], self.delta[i])).or_default().push(i);
        }
        out
    }

    /// Distinct `δ` values, ascending.
    pub fn deltas(&self) -> Vec<i64> {
        let mut v = self.delta.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Generator indices with the given `δ`, grouped by `h`.
    pub fn strip(&self, delta: i64) -> BTreeMap<i64, Vec<usize>> {
        let mut out: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for i in (0..self.len()).filter(|&i| self.delta[i] == delta) {
            out.entry(self.h[i]).or_default().push(i);
        }
        out
    }

    /// Checks that every entry respects the grading conventions.
    pub fn is_filtered(&self) -> bool {
        self.d.entries().all(|(y, x, _)| self.h[y] > self.h[x] && self.delta[y] == self.delta[x] - 2)
    }

    /// Gaussian elimination of unit entries `x → y`.
    ///
    /// With `shift = Some(s)` only entries with `h(y) - h(x) = s` are cancelled;
    /// for `s = 1` the result has the same pages `E_r` for `r ≥ 2`. With `None`
    /// every unit entry is eligible and only the homology is preserved.
    pub fn cancel(&self, shift: Option<i64>) -> FilteredComplex {
        let n = self.len();
        let mut cols: Vec<HashMap<usize, BigInt>> = vec![HashMap::new(); n];
        let mut rows: Vec<HashSet<usize>> = vec![HashSet::new(); n];
        for (y, x, v) in self.d.entries() {
            cols[x].insert(y, v.clone());
            rows[y].insert(x);
        }
        let mut alive = vec![true; n];
        let eligible = |x: usize, y: usize| shift.map_or(true, |s| self.h[y] - self.h[x] == s);
        loop {
            let mut progress = false;
            for x in 0..n {
                if !alive[x] {
                    continue;
                }
                let pick = cols[x]
                    .iter()
                    .filter(|(&y, v)| y != x && v.abs() == BigInt::from(1) && eligible(x, y))
                    .map(|(&y, _)| (rows[y].len(), y))
                    .min();
                let Some((_, y)) = pick else { continue };
                let u = cols[x][&y].clone();
                let col_x: Vec<(usize, BigInt)> =
                    cols[x].iter().filter(|(&b, _)| b != y).map(|(&b, v)| (b, v.clone())).collect();
                let into_y: Vec<usize> = rows[y].iter().copied().filter(|&a| a != x).collect();
                for a in into_y {
                    let f = &cols[a][&y] * &u;
                    for (b, v) in &col_x {
                        let e = cols[a].entry(*b).or_insert_with(BigInt::zero);
                        *e -= &f * v;
                        if e.is_zero() {
                            cols[a].remove(b);
                            rows[*b].remove(&a);
                        } else {
                            rows[*b].insert(a);
                        }
                    }
                }
                for g in [x, y] {
                    for b in std::mem::take(&mut cols[g]).into_keys() {
                        rows[b].remove(&g);
                    }
                    for a in std::mem::take(&mut rows[g]) {
                        cols[a].remove(&g);
                    }
                    alive[g] = false;
                }
                progress = true;
            }
            if !progress {
                break;
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
        let mut pos = vec![usize::MAX; n];
        for (k, &i) in keep.iter().enumerate() {
            pos[i] = k;
        }
        let trip = keep.iter().flat_map(|&x| cols[x].iter().map(move |(&y, v)| (y, x, v.clone())));
        let trip: Vec<(usize, usize, BigInt)> = trip.map(|(y, x, v)| (pos[y], pos[x], v)).collect();
        FilteredComplex {
            h: keep.iter().map(|&i| self.h[i]).collect(),
            delta: keep.iter().map(|&i| self.delta[i]).collect(),
            d: IntMatrix::from_triplets(keep.len(), keep.len(), trip),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_keeps_homology_of_a_small_complex() {
        // a --1--> b alongside c --2--> e
        let c = FilteredComplex {
            h: vec![0, 1, 1, 2],
            delta: vec![0, -2, -2, -4],
            d: IntMatrix::from_triplets(4, 4, vec![(1, 0, 1), (3, 2, 2)]),
        };
        assert!(c.is_filtered());
        let r = c.cancel(Some(1));
        assert_eq!(r.h, vec![1, 2]);
        assert_eq!(r.d.get(1, 0), BigInt::from(2));
    }
}
