//! Edge sign assignments on the cube and their solver over GF(2).

use serde::Serialize;

use crate::classify::{classify_square, SquareType};
use crate::error::{Error, Result};
use crate::planar::{EdgePath, FaceAddress, OrientedConfiguration};

/// Which square-product rule an edge assignment satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Flavor {
    /// Product `+1` on squares of type A or X, `-1` on K or Y.
    X,
    /// Product `+1` on squares of type A or Y, `-1` on K or X.
    Y,
}

impl Flavor {
    /// Required product of the four edge signs around a square.
    pub fn square_product(self, t: SquareType) -> i8 {
        match (self, t) {
            (_, SquareType::A) => 1,
            (_, SquareType::K) => -1,
            (Flavor::X, SquareType::X) | (Flavor::Y, SquareType::Y) => 1,
            (Flavor::X, SquareType::Y) | (Flavor::Y, SquareType::X) => -1,
        }
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" | "x" => Ok(Flavor::X),
            "Y" | "y" => Ok(Flavor::Y),
            _ => Err(Error::Parse { pos: 0, msg: format!("unknown flavor `{s}`, expected X or Y") }),
        }
    }
}

/// A map from the edges of `{0,1}^n` to `{±1}`.
///
/// Edge `a` with star at coordinate `i` is stored at `i · 2^n + a⁰`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeAssignment {
    n: usize,
    values: Vec<i8>,
}

impl EdgeAssignment {
    pub fn constant(n: usize, v: i8) -> Self {
        EdgeAssignment { n, values: vec![v; n << n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn slot(&self, e: &FaceAddress) -> usize {
        debug_assert_eq!(e.dim(), 1);
        let i = e.stars().trailing_zeros() as usize;
        (i << self.n) | e.initial() as usize
    }

    pub fn get(&self, e: &FaceAddress) -> i8 {
        self.values[self.slot(e)]
    }

    pub fn set(&mut self, e: &FaceAddress, v: i8) {
        let s = self.slot(e);
        self.values[s] = v;
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> Vec<FaceAddress> {
        FaceAddress::faces(self.n, 1)
    }

    /// `ε(θ) = ∏ ε(θ_j)`.
    pub fn path_product(&self, theta: &EdgePath) -> i8 {
        theta.edges().iter().map(|e| self.get(e)).product()
    }

    /// Product of the four edges of a square.
    pub fn square_product(&self, s: &FaceAddress) -> i8 {
        (0..4u32)
            .map(|k| {
                let local = if k < 2 { FaceAddress::edge(2, k << 1, 0) } else { FaceAddress::edge(2, k - 2, 1) };
                self.get(&s.embed_face(&local).expect("square"))
            })
            .product()
    }

    /// The restriction `ε|_a` to a face, as an assignment on `{0,1}^{dim a}`.
    pub fn restrict(&self, a: &FaceAddress) -> Result<EdgeAssignment> {
        if a.n() != self.n {
            return Err(Error::Dimension(format!("face has {} coordinates, assignment has {}", a.n(), self.n)));
        }
        let k = a.dim();
        let mut out = EdgeAssignment::constant(k, 1);
        for e in FaceAddress::faces(k, 1) {
            out.set(&e, self.get(&a.embed_face(&e)?));
        }
        Ok(out)
    }

    /// Multiplies by `κ`: flips the sign of edges in direction `i` whose
    /// configuration is a split.
    pub fn kappa_transform(&self, c: &OrientedConfiguration, i: usize) -> Result<EdgeAssignment> {
        if c.n_arcs() != self.n || i >= self.n {
            return Err(Error::Dimension("arc index or configuration size mismatch".into()));
        }
        let mut out = self.clone();
        for e in self.edges() {
            if e.stars() == 1 << i {
                let r = c.resolve(&e)?;
                if is_split(&r) {
                    out.set(&e, -self.get(&e));
                }
            }
        }
        Ok(out)
    }

    /// Checks the square rule, returning the first violating square.
    pub fn verify(&self, c: &OrientedConfiguration, flavor: Flavor) -> Result<std::result::Result<(), FaceAddress>> {
        for (s, t) in square_types(c)? {
            if self.square_product(&s) != flavor.square_product(t) {
                return Ok(Err(s));
            }
        }
        Ok(Ok(()))
    }

    /// Signs in edge order, for serialisation.
    pub fn to_signs(&self) -> Vec<i8> {
        self.edges().iter().map(|e| self.get(e)).collect()
    }
}

/// Whether a one-arc configuration is a split (both endpoints on one circle).
pub fn is_split(r: &OrientedConfiguration) -> bool {
    r.n_arcs() == 1 && r.start_circle(0) == r.end_circle(0)
}

/// Square types of every 2-face of the cube of `c`, in lexicographic order.
pub fn square_types(c: &OrientedConfiguration) -> Result<Vec<(FaceAddress, SquareType)>> {
    use rayon::prelude::*;
    FaceAddress::faces(c.n_arcs(), 2)
        .into_par_iter()
        .map(|s| Ok((s, classify_square(&c.resolve(&s)?)?)))
        .collect()
}

/// Finds an edge assignment of the requested flavor.
///
/// Unknowns are the edges in lexicographic order; Gaussian elimination over
/// GF(2) sets free unknowns to `+1`, so the result is deterministic.
pub fn solve(c: &OrientedConfiguration, flavor: Flavor) -> Result<EdgeAssignment> {
    let n = c.n_arcs();
    let edges = FaceAddress::faces(n, 1);
    let mut index = vec![0usize; n << n];
    let proto = EdgeAssignment::constant(n, 1);
    for (k, e) in edges.iter().enumerate() {
        index[proto.slot(e)] = k;
    }
    let m = edges.len();
    let words = m / 64 + 1;
    let mut rows: Vec<(Vec<u64>, bool)> = Vec::new();
    for (s, t) in square_types(c)? {
        let mut bits = vec![0u64; words];
        for k in 0..4u32 {
            let local = if k < 2 { FaceAddress::edge(2, k << 1, 0) } else { FaceAddress::edge(2, k - 2, 1) };
            let e = s.embed_face(&local)?;
            let v = index[proto.slot(&e)];
            bits[v / 64] ^= 1 << (v % 64);
        }
        rows.push((bits, flavor.square_product(t) < 0));
    }
    let sol = gf2_solve(rows, m).ok_or_else(|| {
        Error::Invariant(format!("no edge assignment of flavor {flavor:?} exists for this configuration"))
    })?;
    let mut out = proto;
    for (k, e) in edges.iter().enumerate() {
        if sol[k] {
            out.set(e, -1);
        }
    }
    Ok(out)
}

/// Solves a GF(2) system given as rows `(coefficients, rhs)`; free unknowns are 0.
pub(crate) fn gf2_solve(mut rows: Vec<(Vec<u64>, bool)>, m: usize) -> Option<Vec<bool>> {
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for col in 0..m {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (r..rows.len()).find(|&i| rows[i].0[w] & b != 0) else { continue };
        rows.swap(r, p);
        let (before, rest) = rows.split_at_mut(r);
        let (pivot, after) = rest.split_first_mut().expect("pivot row");
        for row in before.iter_mut().chain(after.iter_mut()) {
            if row.0[w] & b != 0 {
                for (x, y) in row.0.iter_mut().zip(&pivot.0) {
                    *x ^= y;
                }
                row.1 ^= pivot.1;
            }
        }
        pivots.push((r, col));
        r += 1;
    }
    if rows[r..].iter().any(|row| row.1) {
        return None;
    }
    let mut sol = vec![false; m];
    for (row, col) in pivots {
        sol[col] = rows[row].1;
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_solver_handles_consistent_and_inconsistent_systems() {
        // x0 + x1 = 1, x1 + x2 = 0
        let rows = vec![(vec![0b011], true), (vec![0b110], false)];
        let s = gf2_solve(rows, 3).unwrap();
        assert_eq!(s[0] ^ s[1], true);
        assert_eq!(s[1] ^ s[2], false);
        let bad = vec![(vec![0b1], true), (vec![0b1], false)];
        assert!(gf2_solve(bad, 1).is_none());
    }

    #[test]
    fn restriction_and_products() {
        let mut e = EdgeAssignment::constant(3, 1);
        e.set(&FaceAddress::parse("1*0").unwrap(), -1);
        let r = e.restrict(&FaceAddress::parse("**0").unwrap()).unwrap();
        assert_eq!(r.get(&FaceAddress::parse("1*").unwrap()), -1);
        assert_eq!(r.square_product(&FaceAddress::parse("**").unwrap()), -1);
        let theta = EdgePath::from_permutation(vec![0, 1, 2]).unwrap();
        assert_eq!(e.path_product(&theta), -1);
    }
}
