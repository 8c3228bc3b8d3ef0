//! Odd Khovanov homology, total homology of `Ĉ` and the pages of its
//! `h`-filtration spectral sequence.

mod f2;
mod groups;
mod pages;
mod reduce;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

pub use f2::{kernel as f2_kernel, rank as f2_rank, BitRow};
pub use groups::{groups_equal, BigradedGroups};
pub use pages::{spectral_sequence, GradedCounts, SpectralPage, SpectralSequence};
pub use reduce::FilteredComplex;

use crate::complex::DiagramComplex;
use crate::error::{Error, Result};
use crate::exterior::{homology_of_pair, AbelianGroupDescriptor, IntMatrix};

fn block_pairs(fc: &FilteredComplex) -> Vec<((i64, i64), Vec<usize>, Vec<usize>, Vec<usize>)> {
    let blocks = fc.blocks();
    let get = |k: (i64, i64)| blocks.get(&k).cloned().unwrap_or_default();
    blocks
        .iter()
        .map(|(&(h, d), mid)| ((h, d), get((h - 1, d + 2)), mid.clone(), get((h + 1, d - 2))))
        .collect()
}

/// Homology of `(C, d_1)` per `(h, δ)`, with the diagram shifts applied.
pub fn odd_khovanov_homology(dc: &DiagramComplex) -> Result<BigradedGroups> {
    let fc = FilteredComplex::d1_of(dc);
    let computed: Vec<((i64, i64), AbelianGroupDescriptor)> = block_pairs(&fc)
        .into_par_iter()
        .map(|(key, prev, mid, next)| {
            let d_in = fc.d.select(&mid, &prev);
            let d_out = fc.d.select(&next, &mid);
            homology_of_pair(&d_in, &d_out).map(|g| (key, g)).map_err(|e| match e {
                Error::Invariant(m) => Error::Invariant(format!("d_1 at (h, δ) = {key:?}: {m}")),
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    let mut out = BigradedGroups::new();
    for ((h, d), g) in computed {
        out.insert(h, d, g);
    }
    Ok(out)
}

/// Dimensions of the homology of `(C ⊗ GF(2), d_1)` per `(h, δ)`.
pub fn odd_khovanov_f2(dc: &DiagramComplex) -> GradedCounts {
    let fc = FilteredComplex::d1_of(dc);
    let rank2 = |rows: &[usize], cols: &[usize]| -> usize {
        let m = fc.d.select(rows, cols);
        let mut bits = vec![BitRow::zeros(cols.len()); rows.len()];
        for (i, j, v) in m.entries() {
            if v.is_odd() {
                bits[i].set(j, true);
            }
        }
        f2::rank(&bits, cols.len())
    };
    let dims: Vec<((i64, i64), usize)> = block_pairs(&fc)
        .into_par_iter()
        .map(|(key, prev, mid, next)| (key, mid.len() - rank2(&mid, &prev) - rank2(&next, &mid)))
        .collect();
    GradedCounts(dims.into_iter().filter(|(_, v)| *v > 0).collect())
}

/// Dimensions over GF(2) predicted from integral groups by the universal
/// coefficient theorem: `H^{h,δ} ⊗ GF(2) ⊕ Tor(H^{h+1,δ-2}, GF(2))`.
pub fn mod2_dimensions(g: &BigradedGroups) -> GradedCounts {
    let mut out: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for ((h, d), a) in g.iter() {
        *out.entry((h, d)).or_default() += a.tensor_dim(2);
        let e = a.even_torsion();
        if e > 0 {
            *out.entry((h - 1, d + 2)).or_default() += e;
        }
    }
    out.retain(|_, v| *v > 0);
    GradedCounts(out)
}

/// Homology of `(C, d)` per `δ`.
///
/// Fails with an invariant violation if `d ∘ d ≠ 0`.
pub fn total_homology(dc: &DiagramComplex) -> Result<BTreeMap<i64, AbelianGroupDescriptor>> {
    if !dc.d.mul(&dc.d)?.is_zero() {
        return Err(Error::Invariant("d ∘ d is nonzero".into()));
    }
    total_homology_of(&FilteredComplex::from_diagram(dc))
}

/// Homology per `δ` of any complex whose differential lowers `δ` by two.
pub fn total_homology_of(fc: &FilteredComplex) -> Result<BTreeMap<i64, AbelianGroupDescriptor>> {
    let fc = fc.cancel(None);
    let deltas = fc.deltas();
    let by_delta = |d: i64| -> Vec<usize> { (0..fc.len()).filter(|&i| fc.delta[i] == d).collect() };
    let mut out = BTreeMap::new();
    for d in deltas {
        let mid = by_delta(d);
        let d_in = fc.d.select(&mid, &by_delta(d + 2));
        let d_out = fc.d.select(&by_delta(d - 2), &mid);
        let g = homology_of_pair(&d_in, &d_out)?;
        if !g.is_zero() {
            out.insert(d, g);
        }
    }
    Ok(out)
}

/// Pages `E_2, …, E_{r_max}` of the spectral sequence of `Ĉ`, with `E_∞ = E_{n+1}`.
pub fn spectral_pages(dc: &DiagramComplex, r_max: usize) -> Result<SpectralSequence> {
    let fc = FilteredComplex::from_diagram(dc);
    if !fc.is_filtered() {
        return Err(Error::Invariant("differential does not raise h or does not lower δ by 2".into()));
    }
    spectral_sequence(&fc.cancel(Some(1)), r_max, dc.diagram.n_crossings() + 1)
}

/// Prime-power orders of the cyclic factors, e.g. `Z/12 ↦ [3, 4]`.
pub fn prime_power_orders(g: &AbelianGroupDescriptor) -> Vec<BigInt> {
    let mut out = Vec::new();
    for t in &g.torsion {
        let mut t = t.clone();
        let mut p = BigInt::from(2);
        while t > BigInt::one() {
            if &p * &p > t {
                out.push(t.clone());
                break;
            }
            let mut q = BigInt::one();
            while t.is_multiple_of(&p) {
                t /= &p;
                q *= &p;
            }
            if !q.is_one() {
                out.push(q);
            }
            p += 1;
        }
    }
    out.sort();
    out
}

fn as_decimal<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Per-`δ` comparison of `E_∞` with the total homology.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub delta: i64,
    pub total: AbelianGroupDescriptor,
    pub infinity_rank: usize,
    #[serde(serialize_with = "as_decimal")]
    pub infinity_torsion: Vec<BigInt>,
    pub ranks_match: bool,
    /// Prime-power torsion orders agree; a mismatch is extension data.
    pub torsion_match: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub fn ranks_match(&self) -> bool {
        self.rows.iter().all(|r| r.ranks_match)
    }

    pub fn extension_data(&self) -> Vec<i64> {
        self.rows.iter().filter(|r| !r.torsion_match).map(|r| r.delta).collect()
    }
}

pub fn convergence(total: &BTreeMap<i64, AbelianGroupDescriptor>, ss: &SpectralSequence) -> ConvergenceReport {
    let mut deltas: Vec<i64> = total.keys().copied().collect();
    deltas.extend(ss.infinity.iter().map(|((_, d), _)| d));
    deltas.sort_unstable();
    deltas.dedup();
    let rows = deltas
        .into_iter()
        .map(|d| {
            let t = total.get(&d).cloned().unwrap_or_default();
            let mut rank = 0;
            let mut tors = Vec::new();
            for ((_, dd), g) in ss.infinity.iter() {
                if dd == d {
                    rank += g.rank;
                    tors.extend(prime_power_orders(g));
                }
            }
            tors.sort();
            ConvergenceRow {
                delta: d,
                ranks_match: rank == t.rank,
                torsion_match: tors == prime_power_orders(&t),
                total: t,
                infinity_rank: rank,
                infinity_torsion: tors,
            }
        })
        .collect();
    ConvergenceReport { rows }
}

/// Homology of `(C, d)` at one `δ` computed without reduction; for tests.
pub fn total_homology_unreduced(fc: &FilteredComplex, delta: i64) -> Result<AbelianGroupDescriptor> {
    let idx = |d: i64| -> Vec<usize> { (0..fc.len()).filter(|&i| fc.delta[i] == d).collect() };
    let mid = idx(delta);
    let d_in: IntMatrix = fc.d.select(&mid, &idx(delta + 2));
    let d_out = fc.d.select(&idx(delta - 2), &mid);
    homology_of_pair(&d_in, &d_out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_split() {
        let g = AbelianGroupDescriptor::new(0, vec![BigInt::from(12), BigInt::from(2)]);
        let want: Vec<BigInt> = [2, 3, 4].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(prime_power_orders(&g), want);
    }

    #[test]
    fn universal_coefficients() {
        let mut g = BigradedGroups::new();
        g.insert(0, 0, AbelianGroupDescriptor::new(1, vec![BigInt::from(2)]));
        g.insert(1, 0, AbelianGroupDescriptor::new(0, vec![BigInt::from(3)]));
        let m = mod2_dimensions(&g);
        assert_eq!(m.get(0, 0), 2);
        assert_eq!(m.get(-1, 2), 1);
        assert_eq!(m.get(1, 0), 0);
    }
}
