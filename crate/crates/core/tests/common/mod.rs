//! Shared helpers: the KnotInfo reference table and small fixtures.
#![allow(dead_code)]

use std::collections::BTreeMap;

use oddsz::oracles::{braid_closure, LaurentPoly};
use oddsz::planar::{parse_pd, LinkDiagram};

/// Monomials `t^a q^b T^c` with integer coefficients; `T^c` marks a `Z/c` summand.
pub type Series = BTreeMap<(i64, i64, i64), i64>;

pub struct Reference {
    pub name: String,
    pub jones: Series,
    /// Reduced odd Khovanov homology.
    pub odd_reduced: Series,
    /// Unreduced even Khovanov homology over Z.
    pub even: Series,
}

fn exponent(s: &str) -> i64 {
    if s.is_empty() {
        return 1;
    }
    let s = s.trim_start_matches('^').trim_start_matches('(').trim_end_matches(')');
    s.parse().unwrap_or_else(|_| panic!("bad exponent `{s}`"))
}

/// Parses KnotInfo polynomial text such as `t^(-2)*q^(-4)+2*t*q^(2)-1`.
pub fn parse_series(text: &str) -> Series {
    let mut spaced = String::new();
    let mut prev = ' ';
    for ch in text.chars() {
        if ch == '-' && prev != '(' && prev != '^' {
            spaced.push('+');
        }
        spaced.push(ch);
        prev = ch;
    }
    let mut out = Series::new();
    for term in spaced.split('+').map(str::trim).filter(|t| !t.is_empty()) {
        let (mut sign, mut body) = (1, term);
        if let Some(rest) = term.strip_prefix('-') {
            sign = -1;
            body = rest;
        }
        let (mut c, mut t, mut q, mut tors) = (1i64, 0, 0, 0);
        for f in body.split('*') {
            if let Some(r) = f.strip_prefix('T') {
                tors = exponent(r);
            } else if let Some(r) = f.strip_prefix('t') {
                t = exponent(r);
            } else if let Some(r) = f.strip_prefix('q') {
                q = exponent(r);
            } else {
                c = f.parse().unwrap_or_else(|_| panic!("bad coefficient `{f}`"));
            }
        }
        *out.entry((t, q, tors)).or_insert(0) += sign * c;
    }
    out.retain(|_, v| *v != 0);
    out
}

pub fn references() -> Vec<Reference> {
    include_str!("../data/knotinfo_reference.txt")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            Reference {
                name: f[0].to_string(),
                jones: parse_series(f[1]),
                odd_reduced: parse_series(f[2]),
                even: parse_series(f[3]),
            }
        })
        .collect()
}

/// `(q + q⁻¹) J(t = q²)`.
pub fn unnormalized_from_jones(j: &Series) -> LaurentPoly {
    let jq = LaurentPoly::from_terms(j.iter().map(|(&(t, _, _), &c)| (2 * t, c)));
    jq.mul(&LaurentPoly::from_terms([(1, 1), (-1, 1)]))
}

/// Unreduced odd homology from the reduced one: tensor with `Z{q} ⊕ Z{q⁻¹}`.
pub fn unreduce(reduced: &Series) -> Series {
    let mut out = Series::new();
    for (&(t, q, tors), &c) in reduced {
        for s in [-1, 1] {
            *out.entry((t, q + s, tors)).or_insert(0) += c;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// GF(2) dimensions per `(h, δ)` of a complex with integral homology `even`
/// (cohomological, `q` preserved): rank plus even torsion at `h` and at `h + 1`.
pub fn mod2_from_integral(even: &Series) -> BTreeMap<(i64, i64), usize> {
    let mut out: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for (&(h, q, tors), &c) in even {
        let c = c as usize;
        if tors == 0 {
            *out.entry((h, q - 2 * h)).or_default() += c;
        } else if tors % 2 == 0 {
            *out.entry((h, q - 2 * h)).or_default() += c;
            *out.entry((h - 1, q - 2 * (h - 1))).or_default() += c;
        }
    }
    out
}

/// Six diagrams of the unknot: crossingless, both kinks, a Reidemeister II
/// pair, a kink followed by a II move, and a six-crossing braid closure.
pub fn unknot_diagrams() -> Vec<(&'static str, LinkDiagram)> {
    vec![
        ("crossingless", parse_pd("O[1]").unwrap()),
        ("positive kink", parse_pd("X[1,1,2,2]").unwrap()),
        ("negative kink", parse_pd("X[1,1,2,2]").unwrap().mirror()),
        ("reidemeister II", parse_pd("X[1,4,2,1] X[2,4,3,3]").unwrap()),
        ("kink and II", braid_closure(2, &[1, 1, -1]).unwrap()),
        ("six-crossing braid", braid_closure(3, &[-1, -2, 1, 2, 2, 1]).unwrap()),
    ]
}
