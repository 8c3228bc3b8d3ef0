use std::fmt;

use crate::error::{Error, Result};

/// One coordinate of a face address.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entry {
    Zero,
    One,
    Star,
}

/// A face of the cube `{0,1}^n`, stored as two bit masks.
///
/// Bit `i` of `ones` is set when coordinate `i` is `1`, bit `i` of `stars`
/// when it is `*`. Coordinate `i` corresponds to arc (crossing) `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FaceAddress {
    n: u8,
    ones: u32,
    stars: u32,
}

pub const MAX_ARCS: usize = 24;

impl FaceAddress {
    pub fn from_masks(n: usize, ones: u32, stars: u32) -> Result<Self> {
        if n > MAX_ARCS {
            return Err(Error::Dimension(format!("at most {MAX_ARCS} coordinates supported, got {n}")));
        }
        let full = full_mask(n);
        if ones & stars != 0 || (ones | stars) & !full != 0 {
            return Err(Error::Dimension("face masks overlap or exceed n".into()));
        }
        Ok(FaceAddress { n: n as u8, ones, stars })
    }

    pub fn new(entries: &[Entry]) -> Result<Self> {
        let mut ones = 0;
        let mut stars = 0;
        for (i, e) in entries.iter().enumerate() {
            match e {
                Entry::Zero => {}
                Entry::One => ones |= 1 << i,
                Entry::Star => stars |= 1 << i,
            }
        }
        Self::from_masks(entries.len(), ones, stars)
    }

    /// Parses a string over `0`, `1`, `*`.
    pub fn parse(s: &str) -> Result<Self> {
        let entries = s
            .chars()
            .enumerate()
            .map(|(i, ch)| match ch {
                '0' => Ok(Entry::Zero),
                '1' => Ok(Entry::One),
                '*' => Ok(Entry::Star),
                _ => Err(Error::Parse { pos: i, msg: format!("unexpected `{ch}` in face address") }),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&entries)
    }

    pub fn vertex(n: usize, mask: u32) -> Self {
        debug_assert!(mask & !full_mask(n) == 0);
        FaceAddress { n: n as u8, ones: mask, stars: 0 }
    }

    /// The edge with `*` at coordinate `i` whose other coordinates are read from `base`.
    pub fn edge(n: usize, base: u32, i: usize) -> Self {
        FaceAddress { n: n as u8, ones: base & !(1 << i), stars: 1 << i }
    }

    pub fn full(n: usize) -> Self {
        FaceAddress { n: n as u8, ones: 0, stars: full_mask(n) }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn dim(&self) -> usize {
        self.stars.count_ones() as usize
    }

    pub fn ones(&self) -> u32 {
        self.ones
    }

    pub fn stars(&self) -> u32 {
        self.stars
    }

    pub fn entry(&self, i: usize) -> Entry {
        if self.stars >> i & 1 == 1 {
            Entry::Star
        } else if self.ones >> i & 1 == 1 {
            Entry::One
        } else {
            Entry::Zero
        }
    }

    pub fn entries(&self) -> Vec<Entry> {
        (0..self.n()).map(|i| self.entry(i)).collect()
    }

    /// Initial vertex `a⁰` (stars replaced by 0).
    pub fn initial(&self) -> u32 {
        self.ones
    }

    /// Terminal vertex `a¹` (stars replaced by 1).
    pub fn terminal(&self) -> u32 {
        self.ones | self.stars
    }

    /// Star positions in increasing order.
    pub fn star_positions(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.stars >> i & 1 == 1).collect()
    }

    /// Maps a vertex of the face (a mask over its star positions, in order) to a
    /// vertex of the ambient cube.
    pub fn embed_vertex(&self, local: u32) -> u32 {
        let mut v = self.ones;
        let mut k = 0;
        for i in 0..self.n() {
            if self.stars >> i & 1 == 1 {
                if local >> k & 1 == 1 {
                    v |= 1 << i;
                }
                k += 1;
            }
        }
        v
    }

    /// Embeds a face of this face (given over its star coordinates) into the ambient cube.
    pub fn embed_face(&self, sub: &FaceAddress) -> Result<FaceAddress> {
        if sub.n() != self.dim() {
            return Err(Error::Dimension(format!(
                "sub-face has {} coordinates, face has dimension {}",
                sub.n(),
                self.dim()
            )));
        }
        let ones = self.embed_vertex(sub.ones);
        let stars = self.embed_vertex(sub.stars) & self.stars;
        Ok(FaceAddress { n: self.n, ones: ones & !stars, stars })
    }

    /// All faces of dimension `k`, in lexicographic order with `0 < 1 < *`
    /// and coordinate 0 most significant.
    pub fn faces(n: usize, k: usize) -> Vec<FaceAddress> {
        let mut out = Vec::new();
        let mut cur = vec![Entry::Zero; n];
        fn rec(i: usize, left: usize, cur: &mut Vec<Entry>, out: &mut Vec<FaceAddress>) {
            let n = cur.len();
            if i == n {
                if left == 0 {
                    out.push(FaceAddress::new(cur).expect("valid"));
                }
                return;
            }
            if n - i > left {
                for e in [Entry::Zero, Entry::One] {
                    cur[i] = e;
                    rec(i + 1, left, cur, out);
                }
            }
            if left > 0 {
                cur[i] = Entry::Star;
                rec(i + 1, left - 1, cur, out);
            }
        }
        rec(0, k, &mut cur, &mut out);
        out
    }
}

impl fmt::Display for FaceAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in self.entries() {
            let ch = match e {
                Entry::Zero => '0',
                Entry::One => '1',
                Entry::Star => '*',
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// A monotone edge path from `0…0` to `1…1` in `{0,1}^n`.
///
/// Represented by the order in which coordinates flip to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgePath {
    order: Vec<usize>,
}

impl EdgePath {
    pub fn from_permutation(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &i in &order {
            if i >= n || seen[i] {
                return Err(Error::Dimension(format!("{order:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(EdgePath { order })
    }

    /// Builds a path from its list of edges, checking that consecutive edges meet.
    pub fn from_edges(edges: &[FaceAddress]) -> Result<Self> {
        let n = edges.len();
        let mut at = 0u32;
        let mut order = Vec::with_capacity(n);
        for e in edges {
            if e.n() != n || e.dim() != 1 || e.initial() != at {
                return Err(Error::Dimension(format!("edge {e} does not continue the path")));
            }
            order.push(e.stars().trailing_zeros() as usize);
            at = e.terminal();
        }
        Ok(EdgePath { order })
    }

    /// The identity path `*0…0, 1*0…0, …`.
    pub fn identity(n: usize) -> Self {
        EdgePath { order: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The permutation `φ(θ)`: coordinate flipped at each step (0-based).
    pub fn phi(&self) -> &[usize] {
        &self.order
    }

    /// The `j`-th edge of the path.
    pub fn edge(&self, j: usize) -> FaceAddress {
        let n = self.order.len();
        let base: u32 = self.order[..j].iter().map(|&i| 1u32 << i).sum();
        FaceAddress::edge(n, base, self.order[j])
    }

    pub fn edges(&self) -> Vec<FaceAddress> {
        (0..self.len()).map(|j| self.edge(j)).collect()
    }

    /// Terminal vertex of the `j`-th edge.
    pub fn vertex_after(&self, j: usize) -> u32 {
        self.order[..=j].iter().map(|&i| 1u32 << i).sum()
    }

    /// All `n!` paths, in lexicographic order of their permutations.
    pub fn all(n: usize) -> Vec<EdgePath> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        let mut used = vec![false; n];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<EdgePath>) {
            if cur.len() == n {
                out.push(EdgePath { order: cur.clone() });
                return;
            }
            for i in 0..n {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let a = FaceAddress::parse("01*1*").unwrap();
        assert_eq!(a.to_string(), "01*1*");
        assert_eq!(a.dim(), 2);
        assert_eq!(a.initial(), 0b01010);
        assert_eq!(a.terminal(), 0b11110);
        assert_eq!(a.star_positions(), vec![2, 4]);
        assert!(FaceAddress::parse("0x").is_err());
    }

    #[test]
    fn face_counts_match_binomials() {
        // |F(n,k)| = C(n,k) 2^(n-k)
        for n in 0..6 {
            for k in 0..=n {
                let binom = (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
                assert_eq!(FaceAddress::faces(n, k).len(), binom << (n - k));
            }
        }
        let edges: Vec<String> = FaceAddress::faces(2, 1).iter().map(|f| f.to_string()).collect();
        assert_eq!(edges, vec!["0*", "1*", "*0", "*1"]);
    }

    #[test]
    fn embedding_composes() {
        let a = FaceAddress::parse("*1**0").unwrap();
        let b = FaceAddress::parse("1*0").unwrap();
        assert_eq!(a.embed_face(&b).unwrap().to_string(), "11*00");
        assert_eq!(a.embed_vertex(0b101), 0b01011);
    }

    #[test]
    fn paths_and_phi() {
        let p = EdgePath::from_permutation(vec![2, 0, 1]).unwrap();
        let e: Vec<String> = p.edges().iter().map(|f| f.to_string()).collect();
        assert_eq!(e, vec!["00*", "*01", "1*1"]);
        assert_eq!(EdgePath::from_edges(&p.edges()).unwrap(), p);
        assert!(EdgePath::from_permutation(vec![0, 0]).is_err());
        assert_eq!(EdgePath::all(4).len(), 24);
    }
}
