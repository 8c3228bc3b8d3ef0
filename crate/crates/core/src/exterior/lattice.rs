use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Sparse integer matrix with arbitrary-precision entries, stored by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: Vec<BTreeMap<usize, BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols: vec![BTreeMap::new(); cols] }
    }

    pub fn from_triplets<I, T>(rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, T)>,
        T: Into<BigInt>,
    {
        let mut m = Self::zeros(rows, cols);
        for (i, j, v) in entries {
            m.add_to(i, j, v.into());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<BigInt>], ncols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), ncols);
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                m.add_to(i, j, v.clone());
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, 1)))
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(i < self.rows && j < self.cols.len(), "entry ({i},{j}) out of range");
        if v.is_zero() {
            return;
        }
        let col = &mut self.cols[j];
        let e = col.entry(i).or_insert_with(BigInt::zero);
        *e += v;
        if e.is_zero() {
            col.remove(&i);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.cols[j].get(&i).cloned().unwrap_or_default()
    }

    pub fn column(&self, j: usize) -> &BTreeMap<usize, BigInt> {
        &self.cols[j]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// Iterates over nonzero entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.cols.iter().enumerate().flat_map(|(j, c)| c.iter().map(move |(&i, v)| (i, j, v)))
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.ncols() != other.nrows() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.ncols(),
                other.nrows(),
                other.ncols()
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.ncols());
        for (j, col) in other.cols.iter().enumerate() {
            let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (k, b) in col {
                for (i, a) in &self.cols[*k] {
                    *acc.entry(*i).or_insert_with(BigInt::zero) += a * b;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.cols[j] = acc;
        }
        Ok(out)
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.nrows() != other.nrows() || self.ncols() != other.ncols() {
            return Err(Error::Dimension("matrix sizes differ".into()));
        }
        let mut out = self.clone();
        for (i, j, v) in other.entries() {
            out.add_to(i, j, v.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> IntMatrix {
        let mut out = self.clone();
        for c in &mut out.cols {
            for v in c.values_mut() {
                *v = -&*v;
            }
        }
        out
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        self.add(&other.neg())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.ncols(), self.rows);
        for (i, j, v) in self.entries() {
            out.cols[i].insert(j, v.clone());
        }
        out
    }

    /// Sub-matrix on the given rows and columns (in the given order).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut pos = vec![usize::MAX; self.rows];
        for (k, &r) in rows.iter().enumerate() {
            pos[r] = k;
        }
        let mut out = IntMatrix::zeros(rows.len(), cols.len());
        for (k, &c) in cols.iter().enumerate() {
            for (i, v) in &self.cols[c] {
                if pos[*i] != usize::MAX {
                    out.cols[k].insert(pos[*i], v.clone());
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.ncols()]; self.rows];
        for (i, j, v) in self.entries() {
            d[i][j] = v.clone();
        }
        d
    }

    /// Nonzero invariant factors (diagonal of the Smith normal form), each dividing the next.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        invariant_factors(self)
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Smith normal form `U · A · V = D` of a dense matrix, with unimodular `U`, `V`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: Vec<Vec<BigInt>>,
    pub d: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

impl SmithForm {
    pub fn invariants(&self) -> Vec<BigInt> {
        (0..self.d.len().min(self.d.first().map_or(0, |r| r.len())))
            .map(|i| self.d[i][i].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }
}

/// Smith normal form with transforms, for small dense matrices.
pub fn smith_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.nrows(), a.ncols());
    let mut d = a.to_dense();
    let mut u = identity_dense(m);
    let mut v = identity_dense(n);
    dense_smith(&mut d, Some(&mut u), Some(&mut v));
    SmithForm { u, d, v }
}

fn identity_dense(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn row_axpy(d: &mut [Vec<BigInt>], target: usize, src: usize, q: &BigInt) {
    // row[target] -= q * row[src]
    let (t, s) = if target < src {
        let (a, b) = d.split_at_mut(src);
        (&mut a[target], &b[0])
    } else {
        let (a, b) = d.split_at_mut(target);
        (&mut b[0], &a[src])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn col_axpy(d: &mut [Vec<BigInt>], target: usize, src: usize, q: &BigInt) {
    for row in d.iter_mut() {
        if !row[src].is_zero() {
            let delta = q * &row[src];
            row[target] -= delta;
        }
    }
}

fn swap_cols(d: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in d.iter_mut() {
        row.swap(a, b);
    }
}

/// In-place Smith reduction. `u` accumulates row operations (`U·A`), `v` column
/// operations (`A·V`).
fn dense_smith(d: &mut [Vec<BigInt>], mut u: Option<&mut Vec<Vec<BigInt>>>, mut v: Option<&mut Vec<Vec<BigInt>>>) {
    let m = d.len();
    let n = if m == 0 { 0 } else { d[0].len() };
    let mut t = 0;
    while t < m.min(n) {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d[i][j].is_zero() && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        if let Some(u) = u.as_deref_mut() {
            u.swap(t, pi);
        }
        swap_cols(d, t, pj);
        if let Some(v) = v.as_deref_mut() {
            swap_cols(v, t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..m {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&d[t][t]);
                row_axpy(d, i, t, &q);
                if let Some(u) = u.as_deref_mut() {
                    row_axpy(u, i, t, &q);
                }
                if !d[i][t].is_zero() {
                    d.swap(t, i);
                    if let Some(u) = u.as_deref_mut() {
                        u.swap(t, i);
                    }
                    changed = true;
                }
            }
            for j in t + 1..n {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&d[t][t]);
                col_axpy(d, j, t, &q);
                if let Some(v) = v.as_deref_mut() {
                    col_axpy(v, j, t, &q);
                }
                if !d[t][j].is_zero() {
                    swap_cols(d, t, j);
                    if let Some(v) = v.as_deref_mut() {
                        swap_cols(v, t, j);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility: fold an offending row into row t
            let mut fixed = false;
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if !d[i][j].is_multiple_of(&d[t][t]) {
                        let minus_one = -BigInt::one();
                        row_axpy(d, t, i, &minus_one);
                        if let Some(u) = u.as_deref_mut() {
                            row_axpy(u, t, i, &minus_one);
                        }
                        fixed = true;
                        break 'outer;
                    }
                }
            }
            if !fixed {
                break;
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -&*x;
            }
            if let Some(u) = u.as_deref_mut() {
                for x in u[t].iter_mut() {
                    *x = -&*x;
                }
            }
        }
        t += 1;
    }
}

/// Invariant factors via sparse elimination on unit pivots followed by a dense
/// Smith reduction of whatever remains.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let nrows = a.nrows();
    let ncols = a.ncols();
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); nrows];
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    for (i, j, v) in a.entries() {
        rows[i].insert(j, v.clone());
        col_rows[j].insert(i);
    }
    let mut units = 0usize;
    let mut col_alive = vec![true; ncols];
    loop {
        let mut progress = false;
        let mut order: Vec<usize> = (0..ncols).filter(|&j| col_alive[j] && !col_rows[j].is_empty()).collect();
        order.sort_by_key(|&j| col_rows[j].len());
        for j in order {
            if !col_alive[j] || col_rows[j].is_empty() {
                continue;
            }
            let pivot = col_rows[j]
                .iter()
                .filter(|&&i| rows[i][&j].abs().is_one())
                .min_by_key(|&&i| rows[i].len())
                .copied();
            let Some(p) = pivot else { continue };
            let prow = std::mem::take(&mut rows[p]);
            let pv = prow[&j].clone();
            for &c in prow.keys() {
                col_rows[c].remove(&p);
            }
            let others: Vec<usize> = col_rows[j].iter().copied().collect();
            for r in others {
                let f = &rows[r][&j] * &pv; // pv = ±1, so f = a_rj / pv
                for (c, val) in &prow {
                    let row = &mut rows[r];
                    let e = row.entry(*c).or_insert_with(BigInt::zero);
                    *e -= &f * val;
                    if e.is_zero() {
                        row.remove(c);
                        col_rows[*c].remove(&r);
                    } else {
                        col_rows[*c].insert(r);
                    }
                }
            }
            debug_assert!(col_rows[j].is_empty());
            col_alive[j] = false;
            units += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let rest_rows: Vec<usize> = (0..nrows).filter(|&i| !rows[i].is_empty()).collect();
    let rest_cols: Vec<usize> = (0..ncols).filter(|&j| !col_rows[j].is_empty()).collect();
    let mut out = vec![BigInt::one(); units];
    if !rest_rows.is_empty() {
        let mut cpos = vec![0usize; ncols];
        for (k, &j) in rest_cols.iter().enumerate() {
            cpos[j] = k;
        }
        let mut d: Vec<Vec<BigInt>> = rest_rows
            .iter()
            .map(|&i| {
                let mut r = vec![BigInt::zero(); rest_cols.len()];
                for (j, v) in &rows[i] {
                    r[cpos[*j]] = v.clone();
                }
                r
            })
            .collect();
        dense_smith(&mut d, None, None);
        for t in 0..rest_rows.len().min(rest_cols.len()) {
            if d[t][t].is_zero() {
                break;
            }
            out.push(d[t][t].abs());
        }
    }
    out.sort();
    out
}

/// Integer row echelon form of a dense matrix, tracking the unimodular
/// transform: returns `(E, U, pivots)` with `E = U · A`.
pub fn row_echelon(a: &[Vec<BigInt>], ncols: usize) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<usize>) {
    let m = a.len();
    let mut e: Vec<Vec<BigInt>> = a.to_vec();
    let mut u = identity_dense(m);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        loop {
            // smallest nonzero in column c among rows r..
            let best = (r..m).filter(|&i| !e[i][c].is_zero()).min_by_key(|&i| e[i][c].abs());
            let Some(b) = best else { break };
            e.swap(r, b);
            u.swap(r, b);
            let mut done = true;
            for i in r + 1..m {
                if e[i][c].is_zero() {
                    continue;
                }
                let q = e[i][c].div_floor(&e[r][c]);
                row_axpy(&mut e, i, r, &q);
                row_axpy(&mut u, i, r, &q);
                if !e[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m && !e[r][c].is_zero() {
            pivots.push(c);
            r += 1;
        }
    }
    (e, u, pivots)
}

/// A Z-basis of `{x : A x = 0}` for a dense `rows × ncols` matrix.
pub fn kernel_basis(a: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    // echelon form of Aᵀ: rows of U whose image row vanishes span the kernel
    let at: Vec<Vec<BigInt>> = (0..ncols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect();
    let (e, u, pivots) = row_echelon(&at, a.len());
    let rank = pivots.len();
    debug_assert!(e[rank..].iter().all(|r| r.iter().all(|x| x.is_zero())));
    u[rank..].to_vec()
}

/// Integer coordinates of `vectors` in terms of a linearly independent `basis`
/// (both given as lists of vectors of length `dim`). Fails if some vector is
/// not in the lattice spanned by the basis.
pub fn lattice_coordinates(basis: &[Vec<BigInt>], vectors: &[Vec<BigInt>], dim: usize) -> Result<Vec<Vec<BigInt>>> {
    let (e, u, pivots) = row_echelon(basis, dim);
    if pivots.len() != basis.len() {
        return Err(Error::Invariant("lattice basis is not linearly independent".into()));
    }
    let k = basis.len();
    let mut out = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut rest = v.clone();
        let mut c = vec![BigInt::zero(); k];
        for (r, &p) in pivots.iter().enumerate() {
            if rest[p].is_zero() {
                continue;
            }
            let (q, rem) = rest[p].div_rem(&e[r][p]);
            if !rem.is_zero() {
                return Err(Error::Invariant("vector is not in the lattice".into()));
            }
            for (x, y) in rest.iter_mut().zip(&e[r]) {
                if !y.is_zero() {
                    *x -= &q * y;
                }
            }
            c[r] = q;
        }
        if rest.iter().any(|x| !x.is_zero()) {
            return Err(Error::Invariant("vector is not in the span of the lattice".into()));
        }
        // v = c·E = (c·U)·B
        let x: Vec<BigInt> = (0..k).map(|j| (0..k).map(|r| &c[r] * &u[r][j]).sum()).collect();
        out.push(x);
    }
    Ok(out)
}

/// A finitely generated abelian group `Z^rank ⊕ ⊕ Z/t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AbelianGroupDescriptor {
    pub rank: usize,
    /// Torsion orders (each > 1), sorted ascending.
    pub torsion: Vec<BigInt>,
}

impl AbelianGroupDescriptor {
    pub fn free(rank: usize) -> Self {
        AbelianGroupDescriptor { rank, torsion: Vec::new() }
    }

    pub fn new(rank: usize, mut torsion: Vec<BigInt>) -> Self {
        torsion.retain(|t| !t.is_one());
        torsion.sort();
        AbelianGroupDescriptor { rank, torsion }
    }

    /// Quotient `Z^k / im(R)` for a relation matrix with `k` rows.
    pub fn cokernel(rel: &IntMatrix) -> Self {
        let inv = rel.invariant_factors();
        Self::new(rel.nrows() - inv.len(), inv.into_iter().filter(|t| !t.is_one()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Number of torsion summands of even order.
    pub fn even_torsion(&self) -> usize {
        self.torsion.iter().filter(|t| t.is_even()).count()
    }

    /// `dim_F (G ⊗ F)` for the prime field of characteristic `p`.
    pub fn tensor_dim(&self, p: u32) -> usize {
        self.rank + self.torsion.iter().filter(|t| (*t % p).is_zero()).count()
    }
}

impl fmt::Display for AbelianGroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut counts: BTreeMap<&BigInt, usize> = BTreeMap::new();
        for t in &self.torsion {
            *counts.entry(t).or_default() += 1;
        }
        for (t, c) in counts {
            if c == 1 {
                parts.push(format!("Z/{t}"));
            } else {
                parts.push(format!("(Z/{t})^{c}"));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Serialize for AbelianGroupDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let torsion: Vec<serde_json::Value> = self
            .torsion
            .iter()
            .map(|t| match u64::try_from(t) {
                Ok(x) => serde_json::Value::from(x),
                Err(_) => serde_json::Value::from(t.to_string()),
            })
            .collect();
        let mut st = s.serialize_struct("AbelianGroup", 3)?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("torsion", &torsion)?;
        st.serialize_field("display", &self.to_string())?;
        st.end()
    }
}

/// Homology at the middle of `· --d_in--> Z^n --d_out--> ·`.
pub fn homology_of_pair(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<AbelianGroupDescriptor> {
    let n = d_in.nrows();
    if d_out.ncols() != n {
        return Err(Error::Dimension(format!("d_in has {} rows but d_out has {} columns", n, d_out.ncols())));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(Error::Invariant("composite of consecutive differentials is nonzero".into()));
    }
    let inv_in = d_in.invariant_factors();
    let rank_out = d_out.rank();
    let rank = n - rank_out - inv_in.len();
    Ok(AbelianGroupDescriptor::new(rank, inv_in.into_iter().filter(|t| !t.is_one()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        let ncols = rows.first().map_or(0, |r| r.len());
        let dense: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        IntMatrix::from_dense(&dense, ncols)
    }

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn invariant_factors_small() {
        assert_eq!(m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]).invariant_factors(), bi(&[2, 6, 12]));
        assert_eq!(m(&[&[1, 2], &[3, 4]]).invariant_factors(), bi(&[1, 2]));
        assert_eq!(m(&[&[0, 0], &[0, 0]]).invariant_factors(), bi(&[]));
        assert_eq!(m(&[&[2, 0], &[0, 3]]).invariant_factors(), bi(&[1, 6]));
    }

    #[test]
    fn smith_transforms_reconstruct() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_form(&a);
        let u = IntMatrix::from_dense(&s.u, 3);
        let v = IntMatrix::from_dense(&s.v, 3);
        let d = IntMatrix::from_dense(&s.d, 3);
        assert_eq!(u.mul(&a).unwrap().mul(&v).unwrap(), d);
        assert_eq!(s.invariants(), bi(&[2, 6, 12]));
    }

    #[test]
    fn kernel_and_coordinates() {
        let a = vec![bi(&[1, 2, 3]), bi(&[2, 4, 6])];
        let k = kernel_basis(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: BigInt = v.iter().zip(&a[0]).map(|(x, y)| x * y).sum();
            assert!(s.is_zero());
        }
        let basis = vec![bi(&[2, 0]), bi(&[1, 1])];
        let c = lattice_coordinates(&basis, &[bi(&[3, 1])], 2).unwrap();
        assert_eq!(c, vec![bi(&[1, 1])]);
        assert!(lattice_coordinates(&basis, &[bi(&[1, 0])], 2).is_err());
    }

    #[test]
    fn homology_of_real_projective_plane_chain() {
        // cellular chain complex of RP^2 in degree 1: Z --2--> Z --0--> Z
        let d2 = m(&[&[2]]);
        let d1 = m(&[&[0]]);
        let h = homology_of_pair(&d2, &d1).unwrap();
        assert_eq!(h, AbelianGroupDescriptor::new(0, bi(&[2])));
        assert_eq!(h.to_string(), "Z/2");
        assert!(homology_of_pair(&m(&[&[1]]), &m(&[&[1]])).is_err());
    }
}
