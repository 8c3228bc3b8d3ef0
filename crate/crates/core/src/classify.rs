//! Types of oriented configurations and of 2-dimensional squares.

use std::fmt;

use serde::Serialize;

use crate::complex::elementary_partial;
use crate::error::{Error, Result};
use crate::exterior::ExtElement;
use crate::planar::{End, EdgePath, FaceAddress, OrientedConfiguration, Side};

/// Type of a 2-dimensional configuration, determined by how the two edge maps compose.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SquareType {
    /// Both composites agree up to a sign of -1 (anticommuting).
    A,
    /// Both composites agree (commuting).
    K,
    /// Both composites vanish, not of type Y.
    X,
    /// Both composites vanish and the configuration is `C_{1,1}`.
    Y,
}

/// Configuration types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ConfigType {
    A(usize),
    B(usize),
    C(usize, usize),
    D(usize, usize),
    F(usize, usize),
    G(usize, usize),
}

impl fmt::Display for ConfigType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ConfigType::A(n) => write!(f, "A_{n}"),
            ConfigType::B(n) => write!(f, "B_{n}"),
            ConfigType::C(p, q) => write!(f, "C_{p},{q}"),
            ConfigType::D(p, q) => write!(f, "D_{p},{q}"),
            ConfigType::F(p, q) => write!(f, "F_{p},{q}"),
            ConfigType::G(p, q) => write!(f, "G_{p},{q}"),
        }
    }
}

impl ConfigType {
    pub fn dim(&self) -> usize {
        match *self {
            ConfigType::A(n) | ConfigType::B(n) => n,
            ConfigType::C(p, q) | ConfigType::D(p, q) | ConfigType::F(p, q) | ConfigType::G(p, q) => p + q,
        }
    }
}

/// The type of `m(C*)` for `C` of type `t`.
pub fn m_star(t: ConfigType) -> ConfigType {
    match t {
        ConfigType::A(n) => ConfigType::B(n),
        ConfigType::B(n) => ConfigType::A(n),
        ConfigType::C(p, q) => ConfigType::D(p, q),
        ConfigType::D(p, q) => ConfigType::C(p, q),
        ConfigType::F(p, q) => ConfigType::G(q, p),
        ConfigType::G(p, q) => ConfigType::F(q, p),
    }
}

/// How the source monomial `x_{C,τ,θ}` is assembled: generators attached to
/// arcs are wedged in the order `φ(θ)`, followed by an optional final generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct XSpec {
    pub per_arc: Vec<Option<u32>>,
    pub tail: Option<u32>,
}

/// A matched type together with the data naming its source and target elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeMatch {
    pub ty: ConfigType,
    pub(crate) x: XSpec,
    /// `y_{C,τ}` as an element of `ΛV(C*)`.
    pub y: ExtElement,
    /// For `D_{p,q}`: the two arcs pointing into the distinguished circle.
    pub(crate) last_pair: Option<(usize, usize)>,
}

impl TypeMatch {
    /// Whether `θ` belongs to `P(C,τ)`.
    pub fn allows(&self, theta: &EdgePath) -> bool {
        match self.last_pair {
            None => true,
            Some((a, b)) => {
                let phi = theta.phi();
                let n = phi.len();
                let tail = [phi[n - 2], phi[n - 1]];
                tail == [a, b] || tail == [b, a]
            }
        }
    }

    /// `x_{C,τ,θ}` as a signed monomial; `None` means zero.
    pub fn x_for(&self, theta: &EdgePath) -> Option<(i64, Vec<u32>)> {
        let mut labels: Vec<u32> = theta.phi().iter().filter_map(|&i| self.x.per_arc[i]).collect();
        labels.extend(self.x.tail);
        crate::exterior::sort_with_sign(&labels)
    }

    pub fn x_element(&self, theta: &EdgePath) -> ExtElement {
        match self.x_for(theta) {
            Some((s, m)) => ExtElement::monomial(&m, s),
            None => ExtElement::zero(),
        }
    }
}

/// Types of `act(C)`. Empty if the active part is disconnected or has no arcs.
pub fn classify(c: &OrientedConfiguration) -> Result<Vec<TypeMatch>> {
    let act = c.active_part();
    if act.n_arcs() == 0 || !act.is_connected() {
        return Ok(Vec::new());
    }
    let dual = act.dual();
    let mut out = Vec::new();
    for m in [match_a(&act), match_b(&act, &dual)?, match_c(&act)] {
        out.extend(m);
    }
    out.extend(match_d(&act, &dual)?);
    if let Some(m) = match_f(&act, &dual)? {
        out.push(m);
    }
    if let Some(m) = match_g(&act, &dual)? {
        out.push(m);
    }
    let n = act.n_arcs();
    let is_y = out.iter().any(|m| m.ty == ConfigType::C(1, 1));
    if n >= 2 && !is_y && out.len() > 1 {
        let names: Vec<String> = out.iter().map(|m| m.ty.to_string()).collect();
        return Err(Error::Invariant(format!("configuration matched several types: {}", names.join(", "))));
    }
    Ok(out)
}

/// Type set of `act(C)`, without naming data.
pub fn type_set(c: &OrientedConfiguration) -> Result<Vec<ConfigType>> {
    Ok(classify(c)?.into_iter().map(|m| m.ty).collect())
}

struct ArcInfo {
    start: (usize, usize),
    end: (usize, usize),
}

fn arc_info(c: &OrientedConfiguration) -> Vec<ArcInfo> {
    c.locate().into_iter().map(|[s, e]| ArcInfo { start: s, end: e }).collect()
}

fn sign_pow(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn match_a(c: &OrientedConfiguration) -> Option<TypeMatch> {
    let n = c.n_arcs();
    if c.n_circles() != 2 {
        return None;
    }
    let info = arc_info(c);
    let s = info[0].start.0;
    let e = info[0].end.0;
    if s == e || info.iter().any(|a| a.start.0 != s || a.end.0 != e) {
        return None;
    }
    Some(TypeMatch {
        ty: ConfigType::A(n),
        x: XSpec { per_arc: vec![None; n], tail: None },
        y: ExtElement::scalar(sign_pow(n + 1)),
        last_pair: None,
    })
}

fn match_b(c: &OrientedConfiguration, dual: &OrientedConfiguration) -> Result<Option<TypeMatch>> {
    let n = c.n_arcs();
    if c.n_circles() != n {
        return Ok(None);
    }
    for circle in c.circles() {
        let starts = circle.slots.iter().filter(|s| s.end == End::Start).count();
        if circle.slots.len() != 2 || starts != 1 {
            return Ok(None);
        }
    }
    let labels = c.labels();
    let info = arc_info(c);
    let per_arc = info.iter().map(|a| Some(labels[a.end.0])).collect();
    if dual.n_circles() != 2 {
        return Err(Error::Invariant("dual of a B-type configuration is not of type A".into()));
    }
    let y1 = dual.start_circle(0);
    let y2 = dual.end_circle(0);
    Ok(Some(TypeMatch {
        ty: ConfigType::B(n),
        x: XSpec { per_arc, tail: None },
        y: ExtElement::monomial(&[y1, y2], 1),
        last_pair: None,
    }))
}

/// Slots of circle `ci` read in the given direction, with sides relative to it.
fn directed_slots(c: &OrientedConfiguration, ci: usize, forward: bool) -> Vec<(usize, End, Side)> {
    let slots = &c.circles()[ci].slots;
    if forward {
        slots.iter().map(|s| (s.arc, s.end, s.side)).collect()
    } else {
        slots.iter().rev().map(|s| (s.arc, s.end, s.side.flip())).collect()
    }
}

fn match_c(c: &OrientedConfiguration) -> Option<TypeMatch> {
    let n = c.n_arcs();
    if c.n_circles() != 1 || n < 2 {
        return None;
    }
    for forward in [true, false] {
        let seq = directed_slots(c, 0, forward);
        let len = seq.len();
        let mut interior = vec![None; n];
        for &(arc, _, side) in &seq {
            let inside = side == Side::Right;
            match interior[arc] {
                None => interior[arc] = Some(inside),
                Some(v) if v != inside => return None,
                _ => {}
            }
        }
        let p = interior.iter().filter(|v| **v == Some(true)).count();
        let q = n - p;
        if p == 0 || q == 0 || p > q {
            continue;
        }
        for r in 0..len {
            let at = |k: usize| seq[(r + k) % len];
            let ok = (0..p).all(|k| {
                let (arc, end, side) = at(k);
                end == End::Start && side == Side::Right && at(p + q + (p - 1 - k)) == (arc, End::End, Side::Right)
            }) && (0..q).all(|k| {
                let (arc, end, side) = at(p + k);
                end == End::Start && side == Side::Left && at(2 * p + q + (q - 1 - k)) == (arc, End::End, Side::Left)
            });
            if ok {
                return Some(TypeMatch {
                    ty: ConfigType::C(p, q),
                    x: XSpec { per_arc: vec![None; n], tail: None },
                    y: ExtElement::scalar(sign_pow(n)),
                    last_pair: None,
                });
            }
        }
    }
    None
}

fn match_d(c: &OrientedConfiguration, dual: &OrientedConfiguration) -> Result<Option<TypeMatch>> {
    let n = c.n_arcs();
    if n < 2 || c.n_circles() != n - 1 {
        return Ok(None);
    }
    let candidates: Vec<usize> = (0..c.n_circles())
        .filter(|&ci| {
            let s = &c.circles()[ci].slots;
            s.len() == 4 && s.iter().filter(|x| x.end == End::Start).count() == 2
        })
        .collect();
    if candidates.len() != 1 {
        return Ok(None);
    }
    let z = candidates[0];
    let info = arc_info(c);
    let seq = directed_slots(c, z, true);
    for r in 0..4 {
        let at = |k: usize| seq[(r + k) % 4];
        let (g1, e0, s0) = at(0);
        let (d1, e1, s1) = at(1);
        let (gp, e2, s2) = at(2);
        let (dq, e3, s3) = at(3);
        if (e0, e1, e2, e3) != (End::Start, End::Start, End::End, End::End)
            || (s0, s1, s2, s3) != (Side::Right, Side::Left, Side::Right, Side::Left)
        {
            continue;
        }
        let follow = |first: usize, last: usize| -> Option<usize> {
            let mut arc = first;
            let mut len = 1;
            while arc != last {
                let ci = info[arc].end.0;
                if ci == z {
                    return None;
                }
                let slots = &c.circles()[ci].slots;
                if slots.len() != 2 {
                    return None;
                }
                let next = slots.iter().find(|s| s.end == End::Start)?;
                arc = next.arc;
                len += 1;
                if len > n {
                    return None;
                }
            }
            (info[last].end.0 == z).then_some(len)
        };
        let (Some(p), Some(q)) = (follow(g1, gp), follow(d1, dq)) else { continue };
        if p + q != n {
            continue;
        }
        let labels = c.labels();
        let per_arc = (0..n).map(|i| if i == gp || i == dq { None } else { Some(labels[info[i].end.0]) }).collect();
        if dual.n_circles() != 1 {
            return Err(Error::Invariant("dual of a D-type configuration has several circles".into()));
        }
        let y = dual.labels()[0];
        return Ok(Some(TypeMatch {
            ty: ConfigType::D(p.min(q), p.max(q)),
            x: XSpec { per_arc, tail: Some(labels[z]) },
            y: ExtElement::generator(y),
            last_pair: Some((gp.min(dq), gp.max(dq))),
        }));
    }
    Ok(None)
}

/// Circles `y` such that every arc starting on `y` also ends on `y`.
fn closed_under_start(c: &OrientedConfiguration) -> Vec<usize> {
    let info = arc_info(c);
    (0..c.n_circles()).filter(|&ci| info.iter().all(|a| a.start.0 != ci || a.end.0 == ci)).collect()
}

/// Circles `y` such that every arc ending on `y` also starts on `y`.
fn closed_under_end(c: &OrientedConfiguration) -> Vec<usize> {
    let info = arc_info(c);
    (0..c.n_circles()).filter(|&ci| info.iter().all(|a| a.end.0 != ci || a.start.0 == ci)).collect()
}

/// Recognises `F_{p,q}`; returns `(p, q, y, per-arc start circle of the γ arcs)`.
fn f_shape(c: &OrientedConfiguration) -> Option<(usize, usize, usize)> {
    let cands = closed_under_start(c);
    if cands.len() != 1 {
        return None;
    }
    let y = cands[0];
    let info = arc_info(c);
    for (ci, circle) in c.circles().iter().enumerate() {
        if ci == y {
            continue;
        }
        if circle.slots.len() != 1 || circle.slots[0].end != End::Start || info[circle.slots[0].arc].end.0 != y {
            return None;
        }
    }
    let ys = &c.circles()[y].slots;
    let len = ys.len();
    let mut q = 0;
    for (k, s) in ys.iter().enumerate() {
        if s.end != End::Start {
            continue;
        }
        q += 1;
        let neighbour = match s.side {
            Side::Right => ys[(k + 1) % len],
            Side::Left => ys[(k + len - 1) % len],
        };
        if neighbour.arc != s.arc || neighbour.end != End::End {
            return None;
        }
    }
    Some((c.n_circles() - 1, q, y))
}

fn match_f(c: &OrientedConfiguration, dual: &OrientedConfiguration) -> Result<Option<TypeMatch>> {
    let Some((p, q, y)) = f_shape(c) else { return Ok(None) };
    let info = arc_info(c);
    let labels = c.labels();
    let per_arc = info.iter().map(|a| (a.start.0 != y).then_some(labels[a.start.0])).collect();
    let yd = closed_under_end(dual);
    if yd.len() != 1 {
        return Err(Error::Invariant("dual of an F-type configuration has no distinguished circle".into()));
    }
    Ok(Some(TypeMatch {
        ty: ConfigType::F(p, q),
        x: XSpec { per_arc, tail: None },
        y: ExtElement::generator(dual.labels()[yd[0]]),
        last_pair: None,
    }))
}

fn match_g(c: &OrientedConfiguration, dual: &OrientedConfiguration) -> Result<Option<TypeMatch>> {
    let Some((p, q, y)) = f_shape(&c.reverse()) else { return Ok(None) };
    let info = arc_info(c);
    let labels = c.labels();
    let per_arc = info.iter().map(|a| (a.end.0 != y).then_some(labels[a.end.0])).collect();
    let yd = closed_under_start(dual);
    if yd.len() != 1 {
        return Err(Error::Invariant("dual of a G-type configuration has no distinguished circle".into()));
    }
    Ok(Some(TypeMatch {
        ty: ConfigType::G(p, q),
        x: XSpec { per_arc, tail: None },
        y: ExtElement::monomial(&[dual.labels()[yd[0]]], sign_pow(p + 1)),
        last_pair: None,
    }))
}

/// Type of a configuration with exactly two arcs.
pub fn classify_square(c: &OrientedConfiguration) -> Result<SquareType> {
    if c.n_arcs() != 2 {
        return Err(Error::Dimension(format!("a square needs 2 arcs, got {}", c.n_arcs())));
    }
    let act = c.active_part();
    let labels = act.labels();
    let composite = |first: usize| -> Result<Vec<ExtElement>> {
        let (e1, e2) = if first == 0 { ("*0", "1*") } else { ("0*", "*1") };
        let f1 = act.resolve(&FaceAddress::parse(e1)?)?;
        let mid = act.resolve(&FaceAddress::parse(e2)?)?;
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << labels.len()) {
            let mono: Vec<u32> = (0..labels.len()).filter(|&i| mask >> i & 1 == 1).map(|i| labels[i]).collect();
            let x = ExtElement::monomial(&mono, 1);
            out.push(elementary_partial(&mid, &elementary_partial(&f1, &x)?)?);
        }
        Ok(out)
    };
    let p = composite(0)?;
    let q = composite(1)?;
    let p_zero = p.iter().all(|e| e.is_zero());
    let q_zero = q.iter().all(|e| e.is_zero());
    if p_zero && q_zero {
        let is_y = type_set(&act)?.contains(&ConfigType::C(1, 1));
        return Ok(if is_y { SquareType::Y } else { SquareType::X });
    }
    if p == q {
        return Ok(SquareType::K);
    }
    if p.iter().zip(&q).all(|(a, b)| *a == b.scale(-1)) {
        return Ok(SquareType::A);
    }
    Err(Error::Invariant("square composites are neither equal nor opposite".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::configuration_from_slots;
    use End::{End as E, Start as S};
    use Side::{Left as L, Right as R};

    fn cfg(slots: &[(u32, Vec<(usize, End, Side)>)], n: usize) -> OrientedConfiguration {
        configuration_from_slots(slots, n).unwrap()
    }

    #[test]
    fn one_dimensional_types() {
        let split = cfg(&[(0, vec![(0, S, R), (0, E, R)])], 1);
        let mut t = type_set(&split).unwrap();
        t.sort();
        assert_eq!(t, vec![ConfigType::B(1), ConfigType::F(0, 1), ConfigType::G(0, 1)]);
        let join = cfg(&[(0, vec![(0, S, R)]), (10, vec![(0, E, L)])], 1);
        let mut t = type_set(&join).unwrap();
        t.sort();
        assert_eq!(t, vec![ConfigType::A(1), ConfigType::F(1, 0), ConfigType::G(1, 0)]);
    }

    #[test]
    fn y_square_is_c11_and_d11() {
        // interior start, exterior start, interior end, exterior end
        let y = cfg(&[(0, vec![(0, S, R), (1, S, L), (0, E, R), (1, E, L)])], 2);
        let mut t = type_set(&y).unwrap();
        t.sort();
        assert_eq!(t, vec![ConfigType::C(1, 1), ConfigType::D(1, 1)]);
        assert_eq!(classify_square(&y).unwrap(), SquareType::Y);
        // the mirror image swaps the cyclic pattern and has no type
        let x = y.mirror();
        assert!(type_set(&x).unwrap().is_empty());
        assert_eq!(classify_square(&x).unwrap(), SquareType::X);
    }

    #[test]
    fn disjoint_arcs_commute() {
        let c = cfg(
            &[(0, vec![(0, S, R)]), (10, vec![(0, E, L)]), (20, vec![(1, S, R)]), (30, vec![(1, E, L)])],
            2,
        );
        assert!(type_set(&c).unwrap().is_empty());
        assert_eq!(classify_square(&c).unwrap(), SquareType::K);
    }

    #[test]
    fn m_star_is_an_involution() {
        for t in [ConfigType::A(3), ConfigType::C(1, 2), ConfigType::F(2, 1)] {
            assert_eq!(m_star(m_star(t)), t);
        }
        assert_eq!(m_star(ConfigType::F(2, 1)), ConfigType::G(1, 2));
    }
}
