//! Seeded random link diagrams and braid closures.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::planar::LinkDiagram;

/// A 4-valent map on the sphere: darts `4v..4v+4` sit counterclockwise
/// around vertex `v` and `alpha` pairs darts into edges.
struct FourValentMap {
    alpha: Vec<usize>,
}

impl FourValentMap {
    /// One vertex with two loops: the figure-eight curve.
    fn figure_eight() -> Self {
        FourValentMap { alpha: vec![1, 0, 3, 2] }
    }

    fn vertices(&self) -> usize {
        self.alpha.len() / 4
    }

    fn faces(&self) -> usize {
        let n = self.alpha.len();
        let next = |d: usize| {
            let e = self.alpha[d];
            4 * (e / 4) + (e + 1) % 4
        };
        let mut seen = vec![false; n];
        let mut f = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            f += 1;
            let mut d = s;
            while !seen[d] {
                seen[d] = true;
                d = next(d);
            }
        }
        f
    }

    fn is_planar(&self) -> bool {
        self.faces() == self.vertices() + 2
    }

    fn edges(&self) -> Vec<usize> {
        (0..self.alpha.len()).filter(|&d| d < self.alpha[d]).collect()
    }

    /// Adds a vertex by pinching two edges (or one edge with itself) together
    /// inside a common face; returns false if no planar pinch exists.
    fn insert<R: Rng>(&mut self, rng: &mut R) -> bool {
        let edges = self.edges();
        let e1 = *edges.choose(rng).expect("edges");
        let e2 = *edges.choose(rng).expect("edges");
        let w = self.vertices();
        let new: Vec<usize> = (4 * w..4 * w + 4).collect();
        let mut options: Vec<Vec<usize>> = Vec::new();
        let base = {
            let mut a = self.alpha.clone();
            a.extend([0; 4]);
            a
        };
        let mut wire = |pairs: &[(usize, usize)]| {
            let mut a = base.clone();
            for &(x, y) in pairs {
                a[x] = y;
                a[y] = x;
            }
            let m = FourValentMap { alpha: a };
            if m.is_planar() {
                options.push(m.alpha);
            }
        };
        if e1 != e2 {
            let ends = [e1, self.alpha[e1], e2, self.alpha[e2]];
            for perm in permutations4() {
                let pairs: Vec<(usize, usize)> = (0..4).map(|j| (ends[j], new[perm[j]])).collect();
                wire(&pairs);
            }
        } else {
            let ends = [e1, self.alpha[e1]];
            for x in 0..4 {
                for y in (0..4).filter(|&y| y != x) {
                    let rest: Vec<usize> = (0..4).filter(|&z| z != x && z != y).collect();
                    wire(&[(ends[0], new[x]), (ends[1], new[y]), (new[rest[0]], new[rest[1]])]);
                }
            }
        }
        match options.choose(rng) {
            Some(a) => {
                self.alpha = a.clone();
                true
            }
            None => false,
        }
    }

    /// Orients each strand at random, picks over/under at random and writes PD crossings.
    fn to_diagram<R: Rng>(&self, rng: &mut R) -> Result<LinkDiagram> {
        let n = self.alpha.len();
        let mut label = vec![0u32; n];
        let mut incoming = vec![false; n];
        let mut next_label = 1u32;
        for s in 0..n {
            if label[s] != 0 {
                continue;
            }
            let start = if rng.gen_bool(0.5) { s } else { self.alpha[s] };
            let mut d = start;
            loop {
                let e = self.alpha[d];
                label[d] = next_label;
                label[e] = next_label;
                incoming[e] = true;
                next_label += 1;
                d = 4 * (e / 4) + (e + 2) % 4;
                if d == start {
                    break;
                }
            }
        }
        let crossings = (0..self.vertices())
            .map(|v| {
                let pair = if rng.gen_bool(0.5) { 0 } else { 1 };
                let k = if incoming[4 * v + pair] { pair } else { pair + 2 };
                [0, 1, 2, 3].map(|j| label[4 * v + (k + j) % 4])
            })
            .collect();
        LinkDiagram::from_parts(crossings, Vec::new())
    }
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in (0..4).filter(|&b| b != a) {
            for c in (0..4).filter(|&c| c != a && c != b) {
                out.push([a, b, c, 6 - a - b - c]);
            }
        }
    }
    out
}

/// A random connected diagram with `n ≥ 1` crossings, grown from the
/// figure-eight curve by pinching pairs of edges that share a face.
pub fn random_diagram<R: Rng>(rng: &mut R, n: usize) -> Result<LinkDiagram> {
    if n == 0 {
        return LinkDiagram::from_parts(Vec::new(), vec![1]);
    }
    let mut m = FourValentMap::figure_eight();
    while m.vertices() < n {
        m.insert(rng);
    }
    m.to_diagram(rng)
}

/// A random diagram with one component.
pub fn random_knot_diagram<R: Rng>(rng: &mut R, n: usize) -> Result<LinkDiagram> {
    loop {
        let d = random_diagram(rng, n)?;
        if d.components() == 1 {
            return Ok(d);
        }
    }
}

/// Closure of a braid word on `strands` strands; letter `±i` is `σ_i^{±1}` and
/// `σ_i` is a positive crossing.
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<LinkDiagram> {
    if strands == 0 {
        return Err(Error::InvalidDiagram("a braid needs at least one strand".into()));
    }
    let init: Vec<u32> = (1..=strands as u32).collect();
    let mut pos = init.clone();
    let mut next = strands as u32 + 1;
    let mut crossings = Vec::with_capacity(word.len());
    for &g in word {
        let i = g.unsigned_abs() as usize;
        if g == 0 || i >= strands {
            return Err(Error::InvalidDiagram(format!("generator {g} out of range for {strands} strands")));
        }
        let (bl, br) = (pos[i - 1], pos[i]);
        let (tl, tr) = (next, next + 1);
        next += 2;
        crossings.push(if g > 0 { [br, tr, tl, bl] } else { [bl, br, tr, tl] });
        pos[i - 1] = tl;
        pos[i] = tr;
    }
    let rename = |l: u32| pos.iter().position(|&p| p == l && p > strands as u32).map_or(l, |k| init[k]);
    let crossings: Vec<[u32; 4]> = crossings.into_iter().map(|c| c.map(rename)).collect();
    let loops: Vec<u32> = (0..strands).filter(|&k| pos[k] == init[k]).map(|k| init[k]).collect();
    LinkDiagram::from_parts(crossings, loops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_diagrams_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=7 {
            for _ in 0..5 {
                let d = random_diagram(&mut rng, n).unwrap();
                assert_eq!(d.n_crossings(), n);
            }
        }
    }

    #[test]
    fn braid_closures() {
        let trefoil = braid_closure(2, &[1, 1, 1]).unwrap();
        assert_eq!((trefoil.components(), trefoil.n_plus()), (1, 3));
        let hopf = braid_closure(2, &[-1, -1]).unwrap();
        assert_eq!((hopf.components(), hopf.n_minus()), (2, 2));
        let unlink = braid_closure(3, &[1]).unwrap();
        assert_eq!((unlink.components(), unlink.loops().len()), (2, 1));
        assert!(braid_closure(2, &[2]).is_err());
    }
}
