use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// An integer Laurent polynomial in `q`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(exp: i64, coeff: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: i64) {
        let c = self.terms.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                out.add_term(a + b, x * y);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        (0..k).fold(LaurentPoly::monomial(0, 1), |acc, _| acc.mul(self))
    }

    /// `q ↦ q⁻¹`.
    pub fn mirror(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().map(|(e, c)| (-e, c)))
    }

    /// `p(q) ↦ p(q^k)`.
    pub fn substitute_power(&self, k: i64) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().map(|(e, c)| (e * k, c)))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match (a, e) {
                (_, 0) => write!(f, "{a}")?,
                (1, 1) => write!(f, "q")?,
                (1, _) => write!(f, "q^{e}")?,
                (_, 1) => write!(f, "{a}q")?,
                _ => write!(f, "{a}q^{e}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(i64, i64)> = self.terms().collect();
        let mut st = s.serialize_struct("LaurentPoly", 2)?;
        st.serialize_field("display", &self.to_string())?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let u = LaurentPoly::from_terms([(1, 1), (-1, 1)]);
        assert_eq!(u.to_string(), "q^-1 + q");
        let sq = u.pow(2);
        assert_eq!(sq, LaurentPoly::from_terms([(-2, 1), (0, 2), (2, 1)]));
        assert_eq!(u.mirror(), u);
        let p = LaurentPoly::from_terms([(1, 1), (3, 1), (5, 1), (9, -1)]);
        assert_eq!(p.to_string(), "q + q^3 + q^5 - q^9");
        assert!(p.add(&p.mul(&LaurentPoly::monomial(0, -1))).is_zero());
    }
}
