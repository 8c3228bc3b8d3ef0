//! Dense linear algebra over GF(2) on bit-packed rows.

/// A row vector over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow { words: vec![0; len.div_ceil(64)] }
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn set(&mut self, i: usize, v: bool) {
        if self.get(i) != v {
            self.flip(i);
        }
    }

    pub fn xor(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitRow) -> bool {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
}

/// Reduces `rows` to reduced row echelon form in place; returns pivot columns.
pub fn rref(rows: &mut Vec<BitRow>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else { continue };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.get(c) {
                row.xor(&pivot);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[BitRow], ncols: usize) -> usize {
    rref(&mut rows.to_vec(), ncols).len()
}

/// A basis of `{x : M x = 0}` for `M` given by rows of length `ncols`.
pub fn kernel(rows: &[BitRow], ncols: usize) -> Vec<BitRow> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = BitRow::zeros(ncols);
            v.set(f, true);
            for (row, &p) in m.iter().zip(&pivots) {
                if row.get(f) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(bits: &[u8]) -> BitRow {
        let mut r = BitRow::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            r.set(i, b == 1);
        }
        r
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = vec![row(&[1, 1, 0, 1]), row(&[0, 1, 1, 0]), row(&[1, 0, 1, 1])];
        assert_eq!(rank(&m, 4), 2);
        let k = kernel(&m, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            for r in &m {
                let dot = (0..4).filter(|&i| r.get(i) && v.get(i)).count();
                assert_eq!(dot % 2, 0);
            }
        }
    }
}
