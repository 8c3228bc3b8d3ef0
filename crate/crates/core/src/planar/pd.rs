use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{count_orbits, Circle, End, OrientedConfiguration, Side, Slot, UnionFind};
use super::cube::MAX_ARCS;
use crate::error::{Error, Result};

/// A link diagram given by a planar-diagram code.
///
/// Each crossing `X[a,b,c,d]` lists its four edge labels counterclockwise,
/// starting from the incoming under-strand. Crossingless components are
/// written `O[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<[u32; 4]>,
    loops: Vec<u32>,
    signs: Vec<i8>,
    components: usize,
}

/// How to orient the arcs of the 0-resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OrientationPolicy {
    /// Each arc points away from the strand carrying the smaller `(label, position)`.
    #[default]
    Default,
    /// The default orientation with each arc flipped by a seeded coin.
    Random(u64),
}

/// Parses a planar-diagram code.
///
/// Grammar (ASCII whitespace is allowed between items):
///
/// ```text
/// input := ws ( "PD[" items "]" | items ) ws
/// items := ( item ( ws ","? ws item )* )?
/// item  := "X[" int "," int "," int "," int "]" | "O[" int "]"
/// int   := [0-9]+
/// ```
///
/// An input with no items is the crossingless unknot.
pub fn parse_pd(input: &str) -> Result<LinkDiagram> {
    let mut p = Parser { s: input.as_bytes(), pos: 0 };
    p.ws();
    let wrapped = p.eat("PD[");
    let mut crossings = Vec::new();
    let mut loops = Vec::new();
    let mut first = true;
    loop {
        p.ws();
        if !first && p.eat(",") {
            p.ws();
        }
        match p.peek() {
            Some(b'X') => {
                p.expect("X[")?;
                let mut xs = [0u32; 4];
                for (k, x) in xs.iter_mut().enumerate() {
                    if k > 0 {
                        p.expect(",")?;
                    }
                    *x = p.int()?;
                }
                p.expect("]")?;
                crossings.push(xs);
            }
            Some(b'O') => {
                p.expect("O[")?;
                loops.push(p.int()?);
                p.expect("]")?;
            }
            _ => break,
        }
        first = false;
    }
    if wrapped {
        p.ws();
        p.expect("]")?;
    }
    p.ws();
    if p.pos != p.s.len() {
        return Err(Error::Parse { pos: p.pos, msg: "unexpected input".into() });
    }
    if crossings.is_empty() && loops.is_empty() {
        loops.push(1);
    }
    LinkDiagram::from_parts(crossings, loops)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(Error::Parse { pos: self.pos, msg: format!("expected `{lit}`") })
        }
    }

    fn int(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse { pos: start, msg: "expected a label".into() });
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Parse { pos: start, msg: "label out of range".into() })
    }
}

impl LinkDiagram {
    /// Validates labels, orientations and planarity.
    pub fn from_parts(crossings: Vec<[u32; 4]>, loops: Vec<u32>) -> Result<Self> {
        if crossings.len() > MAX_ARCS {
            return Err(Error::InvalidDiagram(format!("at most {MAX_ARCS} crossings supported")));
        }
        let occ = occurrences(&crossings)?;
        let mut seen_loops = std::collections::HashSet::new();
        for &l in &loops {
            if occ.contains_key(&l) || !seen_loops.insert(l) {
                return Err(Error::InvalidDiagram(format!("label {l} of a crossingless component is reused")));
            }
        }
        let enters = orient(&crossings, &occ)?;
        let signs = enters.iter().map(|e| if e[3] { 1 } else { -1 }).collect();

        let mut uf = UnionFind::new(crossings.len() * 4);
        for x in 0..crossings.len() {
            uf.union(4 * x, 4 * x + 2);
            uf.union(4 * x + 1, 4 * x + 3);
        }
        for o in occ.values() {
            uf.union(4 * o[0].0 + o[0].1, 4 * o[1].0 + o[1].1);
        }
        let components = (0..4 * crossings.len()).filter(|&i| uf.find(i) == i).count() + loops.len();

        let d = LinkDiagram { crossings, loops, signs, components };
        d.check_planar(&occ)?;
        Ok(d)
    }

    fn check_planar(&self, occ: &HashMap<u32, [(usize, usize); 2]>) -> Result<()> {
        let n = self.crossings.len();
        if n == 0 {
            return Ok(());
        }
        let mut alpha = vec![0usize; 4 * n];
        let mut sigma = vec![0usize; 4 * n];
        for (x, c) in self.crossings.iter().enumerate() {
            for p in 0..4 {
                let [u, v] = occ[&c[p]];
                let other = if u == (x, p) { v } else { u };
                alpha[4 * x + p] = 4 * other.0 + other.1;
                sigma[4 * x + p] = 4 * x + (p + 1) % 4;
            }
        }
        let faces = count_orbits(&alpha, &sigma) as i64;
        let mut uf = UnionFind::new(n);
        for [u, v] in occ.values() {
            uf.union(u.0, v.0);
        }
        let comps = (0..n).filter(|&i| uf.find(i) == i).count() as i64;
        let (v, e) = (n as i64, 2 * n as i64);
        if v - e + faces != 2 * comps {
            return Err(Error::InvalidDiagram(format!(
                "not planar: V - E + F = {} but expected {}",
                v - e + faces,
                2 * comps
            )));
        }
        Ok(())
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn n_crossings(&self) -> usize {
        self.crossings.len()
    }

    /// Labels of crossingless components.
    pub fn loops(&self) -> &[u32] {
        &self.loops
    }

    /// Crossing signs (+1 or -1), in crossing order.
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn n_plus(&self) -> usize {
        self.signs.iter().filter(|&&s| s > 0).count()
    }

    pub fn n_minus(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }

    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }

    pub fn components(&self) -> usize {
        self.components
    }

    /// The mirror diagram (every crossing switched).
    pub fn mirror(&self) -> LinkDiagram {
        let crossings = self
            .crossings
            .iter()
            .zip(&self.signs)
            .map(|(&[a, b, c, d], &s)| if s > 0 { [d, a, b, c] } else { [b, c, d, a] })
            .collect();
        LinkDiagram::from_parts(crossings, self.loops.clone()).expect("mirror of a valid diagram")
    }

    /// Canonical PD string, parseable by [`parse_pd`].
    pub fn to_pd_string(&self) -> String {
        let mut parts: Vec<String> =
            self.crossings.iter().map(|c| format!("X[{},{},{},{}]", c[0], c[1], c[2], c[3])).collect();
        parts.extend(self.loops.iter().map(|l| format!("O[{l}]")));
        parts.join(" ")
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd_string())
    }
}

fn occurrences(crossings: &[[u32; 4]]) -> Result<HashMap<u32, [(usize, usize); 2]>> {
    let mut tmp: HashMap<u32, Vec<(usize, usize)>> = HashMap::new();
    for (x, c) in crossings.iter().enumerate() {
        for (p, &l) in c.iter().enumerate() {
            tmp.entry(l).or_default().push((x, p));
        }
    }
    let mut out = HashMap::new();
    let mut labels: Vec<_> = tmp.keys().copied().collect();
    labels.sort_unstable();
    for l in labels {
        let v = &tmp[&l];
        if v.len() != 2 {
            return Err(Error::InvalidDiagram(format!("label {l} occurs {} times, expected 2", v.len())));
        }
        out.insert(l, [v[0], v[1]]);
    }
    Ok(out)
}

/// Decides at every crossing position whether the strand enters there.
///
/// Under-strands enter at position 0. Components passing only over other
/// strands are oriented so that their smallest label runs from its first to
/// its second occurrence in crossing order.
fn orient(crossings: &[[u32; 4]], occ: &HashMap<u32, [(usize, usize); 2]>) -> Result<Vec<[bool; 4]>> {
    let n = crossings.len();
    let mut state: Vec<[Option<bool>; 4]> = vec![[None; 4]; n];
    let mut stack: Vec<(usize, usize, bool)> = Vec::new();
    for x in 0..n {
        stack.push((x, 0, true));
    }
    let mut labels: Vec<u32> = occ.keys().copied().collect();
    labels.sort_unstable();
    let mut next_seed = 0;
    loop {
        while let Some((x, p, v)) = stack.pop() {
            match state[x][p] {
                Some(old) if old != v => {
                    return Err(Error::InvalidDiagram(format!(
                        "inconsistent strand orientation at label {}",
                        crossings[x][p]
                    )))
                }
                Some(_) => continue,
                None => {}
            }
            state[x][p] = Some(v);
            stack.push((x, (p + 2) % 4, !v));
            let [u, w] = occ[&crossings[x][p]];
            let other = if u == (x, p) { w } else { u };
            stack.push((other.0, other.1, !v));
        }
        while next_seed < labels.len() && state[occ[&labels[next_seed]][0].0][occ[&labels[next_seed]][0].1].is_some() {
            next_seed += 1;
        }
        if next_seed == labels.len() {
            break;
        }
        let [_, second] = occ[&labels[next_seed]];
        stack.push((second.0, second.1, true));
    }
    Ok(state.into_iter().map(|s| s.map(|v| v.expect("every position oriented"))).collect())
}

/// The 0-resolution of a diagram as an oriented arc configuration.
///
/// At `X[a,b,c,d]` the 0-smoothing joins `a` with `b` and `c` with `d`; arc `i`
/// sits at crossing `i`. Circle labels are the smallest edge label they carry.
pub fn zero_resolution(d: &LinkDiagram, policy: OrientationPolicy) -> OrientedConfiguration {
    let n = d.crossings.len();
    let occ = occurrences(&d.crossings).expect("validated diagram");
    let mut start_port = vec![0usize; n];
    for (x, c) in d.crossings.iter().enumerate() {
        let p = (0..4).min_by_key(|&p| (c[p], p)).expect("four positions");
        start_port[x] = p / 2;
    }
    if let OrientationPolicy::Random(seed) = policy {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for s in start_port.iter_mut() {
            if rng.gen_bool(0.5) {
                *s ^= 1;
            }
        }
    }

    let mut labels: Vec<u32> = occ.keys().copied().collect();
    labels.sort_unstable();
    let mut visited: HashMap<u32, bool> = labels.iter().map(|&l| (l, false)).collect();
    let mut circles = Vec::new();
    for &l0 in &labels {
        if visited[&l0] {
            continue;
        }
        let mut slots = Vec::new();
        let mut gaps = Vec::new();
        let mut label = l0;
        let mut from = occ[&l0][0];
        loop {
            visited.insert(label, true);
            let [u, w] = occ[&label];
            let (x, p) = if u == from { w } else { u };
            let q = p ^ 1;
            let port = p / 2;
            let side = if q == (p + 1) % 4 { Side::Left } else { Side::Right };
            let end = if port == start_port[x] { End::Start } else { End::End };
            slots.push(Slot { arc: x, end, side });
            label = d.crossings[x][q];
            from = (x, q);
            gaps.push(label);
            if label == l0 && from == occ[&l0][0] {
                break;
            }
        }
        let min = *gaps.iter().min().expect("nonempty");
        circles.push(Circle { label: min, slots, gaps });
    }
    for &l in &d.loops {
        circles.push(Circle { label: l, slots: Vec::new(), gaps: vec![l] });
    }
    OrientedConfiguration::from_parts_unchecked(circles, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]";

    #[test]
    fn parses_plain_and_wrapped_codes() {
        let a = parse_pd(TREFOIL).unwrap();
        let b = parse_pd("PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n_crossings(), 3);
        assert_eq!(a.components(), 1);
        assert_eq!((a.n_plus(), a.n_minus()), (3, 0));
        assert_eq!(parse_pd(&a.to_pd_string()).unwrap(), a);
    }

    #[test]
    fn empty_input_is_the_unknot() {
        let u = parse_pd("").unwrap();
        assert_eq!(u.n_crossings(), 0);
        assert_eq!(u.components(), 1);
        let c = zero_resolution(&u, OrientationPolicy::Default);
        assert_eq!(c.n_circles(), 1);
    }

    #[test]
    fn reports_errors_with_positions() {
        match parse_pd("X[1,2,3]") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_pd("X[1,2,3,4]"), Err(Error::InvalidDiagram(_))));
        assert!(matches!(parse_pd("X[1,1,2,2] O[2]"), Err(Error::InvalidDiagram(_))));
        assert!(matches!(parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2] junk"), Err(Error::Parse { .. })));
    }

    #[test]
    fn one_crossing_kink_is_valid() {
        let k = parse_pd("X[1,1,2,2]").unwrap();
        assert_eq!(k.signs(), &[1]);
        let c = zero_resolution(&k, OrientationPolicy::Default);
        assert!(c.is_planar());
    }

    #[test]
    fn rejects_nonplanar_gluing() {
        // every label used twice, but the gluing has genus one
        assert!(matches!(parse_pd("X[1,2,3,4] X[3,4,1,2]"), Err(Error::InvalidDiagram(m)) if m.contains("planar")));
    }

    #[test]
    fn zero_resolution_of_positive_trefoil_has_seifert_circles() {
        let d = parse_pd(TREFOIL).unwrap();
        let c = zero_resolution(&d, OrientationPolicy::Default);
        assert_eq!(c.n_circles(), 2);
        assert_eq!(c.n_arcs(), 3);
        assert!(c.is_planar());
        let all_one = super::super::FaceAddress::vertex(3, 0b111);
        assert_eq!(c.resolve(&all_one).unwrap().n_circles(), 3);
    }

    #[test]
    fn random_policy_is_deterministic() {
        let d = parse_pd(TREFOIL).unwrap();
        let a = zero_resolution(&d, OrientationPolicy::Random(7));
        let b = zero_resolution(&d, OrientationPolicy::Random(7));
        assert_eq!(a, b);
    }

    #[test]
    fn mirror_flips_signs() {
        let d = parse_pd(TREFOIL).unwrap();
        let m = d.mirror();
        assert_eq!(m.signs(), &[-1, -1, -1]);
        assert_eq!(m.mirror(), d);
    }
}
