use std::collections::{btree_map, BTreeMap};
use std::fmt;

/// Sign of `a ∧ b` for disjoint monomials given as bit masks over an ordered
/// generator list, relative to the sorted monomial `a | b`.
pub fn mask_wedge_sign(a: u64, b: u64) -> i64 {
    debug_assert_eq!(a & b, 0);
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> j).count_ones();
        rest &= rest - 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sorts a list of distinct labels, returning the permutation sign, or `None`
/// if a label repeats.
pub fn sort_with_sign(labels: &[u32]) -> Option<(i64, Vec<u32>)> {
    let mut v = labels.to_vec();
    let mut sign = 1;
    // insertion sort counts transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    Some((sign, v))
}

/// An element of the exterior algebra over Z on circle labels.
///
/// Monomials are strictly increasing label lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtElement {
    terms: BTreeMap<Vec<u32>, i64>,
}

impl ExtElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: i64) -> Self {
        Self::monomial(&[], c)
    }

    pub fn one() -> Self {
        Self::scalar(1)
    }

    pub fn generator(label: u32) -> Self {
        Self::monomial(&[label], 1)
    }

    /// `c · l_1 ∧ … ∧ l_k` for labels in any order.
    pub fn monomial(labels: &[u32], c: i64) -> Self {
        let mut e = Self::zero();
        if let Some((s, m)) = sort_with_sign(labels) {
            e.add_term(m, s * c);
        }
        e
    }

    pub fn add_term(&mut self, mono: Vec<u32>, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(mono) {
            btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, i64)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mono: &[u32]) -> i64 {
        self.terms.get(mono).copied().unwrap_or(0)
    }

    /// For `±m`, returns `(±1, m)`.
    pub fn as_signed_monomial(&self) -> Option<(i64, &[u32])> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, &c) = self.terms.iter().next().expect("one term");
        (c == 1 || c == -1).then_some((c, m.as_slice()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = Self::zero();
        for (m, v) in self.terms() {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let joined: Vec<u32> = a.iter().chain(b.iter()).copied().collect();
                if let Some((s, m)) = sort_with_sign(&joined) {
                    out.add_term(m, s * ca * cb);
                }
            }
        }
        out
    }

    /// Degree of a homogeneous element.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.len());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let sign = if c < 0 { "-" } else if i > 0 { "+" } else { "" };
            let sep = if i > 0 { " " } else { "" };
            write!(f, "{sep}{sign}")?;
            if i > 0 {
                write!(f, " ")?;
            }
            if c.abs() != 1 || m.is_empty() {
                write!(f, "{}", c.abs())?;
            }
            let names: Vec<String> = m.iter().map(|l| format!("x{l}")).collect();
            write!(f, "{}", names.join("∧"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_is_graded_commutative() {
        let a = ExtElement::generator(3);
        let b = ExtElement::generator(1);
        assert_eq!(a.wedge(&b), b.wedge(&a).scale(-1));
        assert!(a.wedge(&a).is_zero());
        assert_eq!(a.wedge(&b), ExtElement::monomial(&[1, 3], -1));
    }

    #[test]
    fn mask_sign_agrees_with_sorting() {
        for a in 0u64..32 {
            for b in 0u64..32 {
                if a & b != 0 {
                    continue;
                }
                let la: Vec<u32> = (0..5).filter(|i| a >> i & 1 == 1).collect();
                let lb: Vec<u32> = (0..5).filter(|i| b >> i & 1 == 1).collect();
                let joined: Vec<u32> = la.iter().chain(lb.iter()).copied().collect();
                assert_eq!(sort_with_sign(&joined).unwrap().0, mask_wedge_sign(a, b));
            }
        }
    }

    #[test]
    fn display() {
        let e = ExtElement::monomial(&[2, 1], 1).add(&ExtElement::scalar(3));
        assert_eq!(e.to_string(), "3 - x1∧x2");
    }
}
