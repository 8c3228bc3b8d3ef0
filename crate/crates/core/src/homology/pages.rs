//! Pages of the spectral sequence of the `h`-filtration `F_p = ⊕_{h ≥ p}`.
//!
//! For a differential raising `h`, the page is
//! `E_r^p = π_p(Z_r^p) / π_p(d Z_{r-1}^{p-r+1})` where
//! `Z_r^p = {x ∈ F_p : dx ∈ F_{p+r}}` and `π_p` projects onto `h = p`.
//! Both lattices live in the single chain group at `h = p`, so each entry is a
//! kernel computation, a projection and a Smith normal form.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::f2::{self, BitRow};
use super::groups::BigradedGroups;
use super::reduce::FilteredComplex;
use crate::error::Result;
use crate::exterior::{kernel_basis, lattice_coordinates, row_echelon, AbelianGroupDescriptor, IntMatrix};

/// Non-negative integers indexed by `(h, δ)`; zeros are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedCounts(pub BTreeMap<(i64, i64), usize>);

impl GradedCounts {
    pub fn get(&self, h: i64, delta: i64) -> usize {
        self.0.get(&(h, delta)).copied().unwrap_or(0)
    }

    fn insert(&mut self, h: i64, delta: i64, v: usize) {
        if v > 0 {
            self.0.insert((h, delta), v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }
}

impl Serialize for GradedCounts {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            h: i64,
            delta: i64,
            value: usize,
        }
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for (&(h, delta), &value) in &self.0 {
            seq.serialize_element(&Entry { h, delta, value })?;
        }
        seq.end()
    }
}

/// The page `E_r` over Z, with the ranks of `d^r` over Q and the same data over GF(2).
#[derive(Clone, Debug, Serialize)]
pub struct SpectralPage {
    pub r: usize,
    pub groups: BigradedGroups,
    /// Rank over Q of `d^r` leaving `(h, δ)`.
    pub differential_ranks: GradedCounts,
    /// Dimensions of the page of the spectral sequence of the complex tensored with GF(2).
    pub f2_dims: GradedCounts,
    pub f2_differential_ranks: GradedCounts,
}

/// Pages `E_2, …, E_{r_max}` together with `E_∞`.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralSequence {
    pub pages: Vec<SpectralPage>,
    /// Page index from which every differential vanishes.
    pub infinity_page: usize,
    pub infinity: BigradedGroups,
    pub f2_infinity: GradedCounts,
    /// First page equal to `E_∞` at every entry.
    pub collapse_page: usize,
    /// `dim E_{r+1} = dim E_r - rank d^r (out) - rank d^r (in)` over Q and over GF(2).
    pub rank_consistent: bool,
}

#[derive(Clone, Debug)]
struct Entry {
    group: AbelianGroupDescriptor,
    image_rank: usize,
    f2_dim: usize,
    f2_image: usize,
}

struct Strips<'a> {
    fc: &'a FilteredComplex,
    by_delta: BTreeMap<i64, BTreeMap<i64, Vec<usize>>>,
}

impl<'a> Strips<'a> {
    fn new(fc: &'a FilteredComplex) -> Self {
        let by_delta = fc.deltas().into_iter().map(|d| (d, fc.strip(d))).collect();
        Strips { fc, by_delta }
    }

    /// Generators at `δ` with `lo ≤ h ≤ hi`, ordered by `h`.
    fn gens(&self, delta: i64, lo: i64, hi: i64) -> Vec<usize> {
        match self.by_delta.get(&delta) {
            Some(s) if lo <= hi => s.range(lo..=hi).flat_map(|(_, v)| v.iter().copied()).collect(),
            _ => Vec::new(),
        }
    }

    fn dense(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<BigInt>> {
        self.fc.d.select(rows, cols).to_dense()
    }

    fn entry(&self, p: i64, delta: i64, r: usize) -> Result<Entry> {
        let r = r as i64;
        let cp = self.gens(delta, p, p);
        let k = cp.len();
        if k == 0 {
            return Ok(Entry { group: AbelianGroupDescriptor::default(), image_rank: 0, f2_dim: 0, f2_image: 0 });
        }
        // numerator: components at h ∈ [p, p+r-2] whose image misses h ∈ [p+1, p+r-1]
        let src = self.gens(delta, p, p + r - 2);
        let tgt = self.gens(delta - 2, p + 1, p + r - 1);
        let m = self.dense(&tgt, &src);
        // denominator: y at h ∈ [p-r+1, p-1] with dy vanishing on h ∈ [p-r+2, p-1]
        let ysrc = self.gens(delta + 2, p - r + 1, p - 1);
        let cons = self.gens(delta, p - r + 2, p - 1);
        let cm = self.dense(&cons, &ysrc);
        let out = self.dense(&cp, &ysrc);

        let proj: Vec<Vec<BigInt>> = kernel_basis(&m, src.len()).into_iter().map(|v| v[..k].to_vec()).collect();
        let (e, _, piv) = row_echelon(&proj, k);
        let lattice: Vec<Vec<BigInt>> = e[..piv.len()].to_vec();
        let pre = if cons.is_empty() { identity(ysrc.len()) } else { kernel_basis(&cm, ysrc.len()) };
        let images: Vec<Vec<BigInt>> = pre.iter().map(|v| mat_vec(&out, v)).collect();
        let coords = lattice_coordinates(&lattice, &images, k)?;
        let rel = IntMatrix::from_triplets(
            lattice.len(),
            coords.len(),
            coords.iter().enumerate().flat_map(|(j, c)| c.iter().enumerate().map(move |(i, v)| (i, j, v.clone()))),
        );
        let inv = rel.invariant_factors();
        let group = AbelianGroupDescriptor::new(lattice.len() - inv.len(), inv.iter().filter(|t| !t.is_one()).cloned().collect());

        let m2 = to_bits(&m, src.len());
        let proj2: Vec<BitRow> = f2::kernel(&m2, src.len()).iter().map(|v| truncate(v, k)).collect();
        let pre2 = if cons.is_empty() {
            (0..ysrc.len()).map(|j| unit_bits(ysrc.len(), j)).collect()
        } else {
            f2::kernel(&to_bits(&cm, ysrc.len()), ysrc.len())
        };
        let out2 = to_bits(&out, ysrc.len());
        let images2: Vec<BitRow> = pre2.iter().map(|v| mat_vec_bits(&out2, v)).collect();
        let f2_image = f2::rank(&images2, k);
        let f2_dim = f2::rank(&proj2, k) - f2_image;
        Ok(Entry { group, image_rank: inv.len(), f2_dim, f2_image })
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect()).collect()
}

fn mat_vec(a: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).filter(|(x, _)| !x.is_zero()).map(|(x, y)| x * y).sum())
        .collect()
}

fn to_bits(a: &[Vec<BigInt>], ncols: usize) -> Vec<BitRow> {
    a.iter()
        .map(|row| {
            let mut b = BitRow::zeros(ncols);
            for (j, x) in row.iter().enumerate() {
                b.set(j, x.is_odd());
            }
            b
        })
        .collect()
}

fn unit_bits(n: usize, j: usize) -> BitRow {
    let mut b = BitRow::zeros(n);
    b.set(j, true);
    b
}

fn truncate(v: &BitRow, k: usize) -> BitRow {
    let mut b = BitRow::zeros(k);
    for i in 0..k {
        b.set(i, v.get(i));
    }
    b
}

fn mat_vec_bits(rows: &[BitRow], v: &BitRow) -> BitRow {
    let mut out = BitRow::zeros(rows.len());
    for (i, row) in rows.iter().enumerate() {
        out.set(i, row.dot(v));
    }
    out
}

/// Computes `E_2, …, E_{r_max}` and `E_∞ = E_{r_inf}` for a complex whose
/// differential vanishes on pages beyond `r_inf - 1`.
pub fn spectral_sequence(fc: &FilteredComplex, r_max: usize, r_inf: usize) -> Result<SpectralSequence> {
    let top = r_max.max(r_inf).max(2);
    let strips = Strips::new(fc);
    let (lo, hi) = match (fc.h.iter().min(), fc.h.iter().max()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (0, 0),
    };
    let keys: Vec<(usize, i64, i64)> = (2..=top + 1)
        .flat_map(|r| fc.deltas().into_iter().flat_map(move |d| (lo..=hi).map(move |p| (r, p, d))))
        .collect();
    let computed: Vec<((usize, i64, i64), Entry)> =
        keys.into_par_iter().map(|key| Ok((key, strips.entry(key.1, key.2, key.0)?))).collect::<Result<_>>()?;
    let table: BTreeMap<(usize, i64, i64), Entry> = computed.into_iter().collect();
    let at = |r: usize, p: i64, d: i64| table.get(&(r, p, d));

    let mut pages = Vec::new();
    for r in 2..=top {
        let mut page = SpectralPage {
            r,
            groups: BigradedGroups::new(),
            differential_ranks: GradedCounts::default(),
            f2_dims: GradedCounts::default(),
            f2_differential_ranks: GradedCounts::default(),
        };
        for (&(rr, p, d), e) in &table {
            if rr != r {
                continue;
            }
            page.groups.insert(p, d, e.group.clone());
            page.f2_dims.insert(p, d, e.f2_dim);
            if let (Some(next), Some(now)) = (at(r + 1, p + r as i64, d - 2), at(r, p + r as i64, d - 2)) {
                page.differential_ranks.insert(p, d, next.image_rank - now.image_rank);
                page.f2_differential_ranks.insert(p, d, next.f2_image - now.f2_image);
            }
        }
        pages.push(page);
    }

    let mut rank_consistent = true;
    for w in pages.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let r = a.r as i64;
        for d in fc.deltas() {
            for p in lo..=hi {
                let q_in = a.differential_ranks.get(p - r, d + 2);
                let q_out = a.differential_ranks.get(p, d);
                if b.groups.get(p, d).rank + q_in + q_out != a.groups.get(p, d).rank {
                    rank_consistent = false;
                }
                let f_in = a.f2_differential_ranks.get(p - r, d + 2);
                let f_out = a.f2_differential_ranks.get(p, d);
                if b.f2_dims.get(p, d) + f_in + f_out != a.f2_dims.get(p, d) {
                    rank_consistent = false;
                }
            }
        }
    }

    let last = pages.last().expect("at least one page");
    let infinity = last.groups.clone();
    let f2_infinity = last.f2_dims.clone();
    let collapse_page = pages.iter().rev().take_while(|pg| pg.groups == infinity).last().map_or(top, |pg| pg.r);
    pages.truncate(r_max.saturating_sub(1).max(1));
    Ok(SpectralSequence { pages, infinity_page: top, infinity, f2_infinity, collapse_page, rank_consistent })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn long_differential_appears_on_a_later_page() {
        // x at h=0 hits z at h=2 through d_2; y at h=1 survives
        let fc = FilteredComplex {
            h: vec![0, 1, 2],
            delta: vec![0, 4, -2],
            d: IntMatrix::from_triplets(3, 3, vec![(2, 0, 3)]),
        };
        let ss = spectral_sequence(&fc, 3, 3).unwrap();
        let e2 = &ss.pages[0];
        assert_eq!(e2.groups.get(0, 0), AbelianGroupDescriptor::free(1));
        assert_eq!(e2.differential_ranks.get(0, 0), 1);
        assert_eq!(e2.f2_differential_ranks.get(0, 0), 1);
        let e3 = &ss.pages[1];
        assert!(e3.groups.get(0, 0).is_zero());
        assert_eq!(e3.groups.get(2, -2), AbelianGroupDescriptor::new(0, vec![BigInt::from(3)]));
        assert_eq!(e3.f2_dims.get(2, -2), 0);
        assert_eq!(ss.collapse_page, 3);
        assert!(ss.rank_consistent);
    }
}
