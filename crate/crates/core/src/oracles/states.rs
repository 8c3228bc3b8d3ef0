//! Kauffman states of a PD code, computed directly from the crossing labels.
//!
//! Nothing here touches configurations or the cube machinery of the main
//! pipeline: circles are unions of edge labels.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::laurent::LaurentPoly;
use crate::homology::GradedCounts;
use crate::planar::LinkDiagram;

/// Circles of the state `s` (bit `k` = smoothing of crossing `k`), each given by
/// its smallest edge label, together with the circle of every edge label.
struct StateCircles {
    reps: Vec<u32>,
    of_label: HashMap<u32, u32>,
}

fn find(parent: &mut HashMap<u32, u32>, x: u32) -> u32 {
    let mut r = x;
    while parent[&r] != r {
        r = parent[&r];
    }
    let mut y = x;
    while parent[&y] != r {
        let next = parent[&y];
        parent.insert(y, r);
        y = next;
    }
    r
}

fn union(parent: &mut HashMap<u32, u32>, a: u32, b: u32) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent.insert(hi, lo);
    }
}

/// 0-smoothing joins `(a, b)` and `(c, d)`; 1-smoothing joins `(a, d)` and `(b, c)`.
fn circles(d: &LinkDiagram, s: u32) -> StateCircles {
    let mut parent: HashMap<u32, u32> = HashMap::new();
    for x in d.crossings() {
        for &l in x {
            parent.insert(l, l);
        }
    }
    for (k, &[a, b, c, e]) in d.crossings().iter().enumerate() {
        if s >> k & 1 == 0 {
            union(&mut parent, a, b);
            union(&mut parent, c, e);
        } else {
            union(&mut parent, a, e);
            union(&mut parent, b, c);
        }
    }
    let labels: Vec<u32> = parent.keys().copied().collect();
    let mut of_label = HashMap::new();
    for l in labels {
        let r = find(&mut parent, l);
        of_label.insert(l, r);
    }
    let mut reps: Vec<u32> = of_label.values().copied().collect();
    reps.extend(d.loops().iter().copied());
    for &l in d.loops() {
        of_label.insert(l, l);
    }
    reps.sort_unstable();
    reps.dedup();
    StateCircles { reps, of_label }
}

/// `Σ_s (-1)^{|s|-n₋} q^{|s|+n₊-2n₋} (q + q⁻¹)^{#circles(s)}`.
pub fn jones_unnormalized(d: &LinkDiagram) -> LaurentPoly {
    let n = d.n_crossings();
    let (np, nm) = (d.n_plus() as i64, d.n_minus() as i64);
    let circle = LaurentPoly::from_terms([(1, 1), (-1, 1)]);
    let mut by_count: BTreeMap<(u32, usize), i64> = BTreeMap::new();
    for s in 0..1u32 << n {
        *by_count.entry((s.count_ones(), circles(d, s).reps.len())).or_default() += 1;
    }
    let mut out = LaurentPoly::zero();
    for ((h, c), mult) in by_count {
        let h = h as i64;
        let sign = if (h - nm).rem_euclid(2) == 0 { 1 } else { -1 };
        let term = LaurentPoly::monomial(h + np - 2 * nm, sign * mult).mul(&circle.pow(c as u32));
        out = out.add(&term);
    }
    out
}

/// Even Khovanov homology with GF(2) coefficients, as dimensions per `(h, δ)`.
///
/// Generators are `(s, S)` with `S` the circles labelled `x`; `q = #1 - #x + |s| + n₊ - 2n₋`
/// and `h = |s| - n₋`. Merges multiply in `GF(2)[x]/(x²)`, splits comultiply.
pub fn even_khovanov_f2(d: &LinkDiagram) -> GradedCounts {
    let n = d.n_crossings();
    let (np, nm) = (d.n_plus() as i64, d.n_minus() as i64);
    let states: Vec<StateCircles> = (0..1u32 << n).into_par_iter().map(|s| circles(d, s)).collect();
    let q_of = |s: u32, mask: u64| -> i64 {
        let c = states[s as usize].reps.len() as i64;
        let x = mask.count_ones() as i64;
        (c - x) - x + s.count_ones() as i64 + np - 2 * nm
    };
    let mut blocks: BTreeMap<(i64, i64), Vec<(u32, u64)>> = BTreeMap::new();
    for s in 0..1u32 << n {
        for mask in 0..1u64 << states[s as usize].reps.len() {
            blocks.entry((s.count_ones() as i64 - nm, q_of(s, mask))).or_default().push((s, mask));
        }
    }
    let image = |s: u32, mask: u64, k: usize| -> Vec<u64> {
        let t = s | 1 << k;
        let (src, dst) = (&states[s as usize], &states[t as usize]);
        let [a, b, c, _] = d.crossings()[k];
        let bit = |st: &StateCircles, l: u32| st.reps.binary_search(&st.of_label[&l]).expect("circle");
        let (ia, ic) = (bit(src, a), bit(src, c));
        let passive: Vec<u32> = (0..src.reps.len())
            .filter(|&i| mask >> i & 1 == 1 && i != ia && i != ic)
            .map(|i| src.reps[i])
            .collect();
        let base: u64 = passive
            .iter()
            .map(|&r| 1u64 << dst.reps.binary_search(&r).expect("untouched circle keeps its representative"))
            .sum();
        if ia != ic {
            // merge: 1·1 = 1, 1·x = x, x·x = 0
            let m = bit(dst, a);
            match (mask >> ia & 1, mask >> ic & 1) {
                (1, 1) => vec![],
                (0, 0) => vec![base],
                _ => vec![base | 1 << m],
            }
        } else {
            // split into the circles through a and through b: 1 ↦ 1x + x1, x ↦ xx
            let (u, v) = (bit(dst, a), bit(dst, b));
            if mask >> ia & 1 == 1 {
                vec![base | 1 << u | 1 << v]
            } else {
                vec![base | 1 << u, base | 1 << v]
            }
        }
    };
    let index_in = |block: &[(u32, u64)]| -> HashMap<(u32, u64), usize> {
        block.iter().enumerate().map(|(i, &g)| (g, i)).collect()
    };
    let keys: Vec<(i64, i64)> = blocks.keys().copied().collect();
    let ranks: BTreeMap<(i64, i64), usize> = keys
        .par_iter()
        .map(|&(h, q)| {
            let src = &blocks[&(h, q)];
            let Some(dst) = blocks.get(&(h + 1, q)) else { return ((h, q), 0) };
            let pos = index_in(dst);
            let words = dst.len().div_ceil(64);
            let rows: Vec<Vec<u64>> = src
                .iter()
                .map(|&(s, mask)| {
                    let mut row = vec![0u64; words];
                    for k in (0..n).filter(|&k| s >> k & 1 == 0) {
                        for m in image(s, mask, k) {
                            let j = pos[&(s | 1 << k, m)];
                            row[j / 64] ^= 1 << (j % 64);
                        }
                    }
                    row
                })
                .collect();
            ((h, q), gf2_rank(rows, dst.len()))
        })
        .collect();
    let mut out = BTreeMap::new();
    for (&(h, q), gens) in &blocks {
        let dim = gens.len() - ranks[&(h, q)] - ranks.get(&(h - 1, q)).copied().unwrap_or(0);
        if dim > 0 {
            out.insert((h, q - 2 * h), dim);
        }
    }
    GradedCounts(out)
}

fn gf2_rank(mut rows: Vec<Vec<u64>>, ncols: usize) -> usize {
    let mut rank = 0;
    for c in 0..ncols {
        let (w, b) = (c / 64, 1u64 << (c % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & b != 0) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[w] & b != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}
