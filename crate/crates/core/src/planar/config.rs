use super::cube::{Entry, FaceAddress};
use crate::error::{Error, Result};

/// Side of the traversal direction on which an arc leaves a circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Which endpoint of an oriented arc: `γ⁰` (start) or `γ¹` (end).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Start,
    End,
}

impl End {
    pub fn other(self) -> End {
        match self {
            End::Start => End::End,
            End::End => End::Start,
        }
    }

    fn index(self) -> usize {
        match self {
            End::Start => 0,
            End::End => 1,
        }
    }
}

/// An arc endpoint attached to a circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub arc: usize,
    pub end: End,
    pub side: Side,
}

/// A circle with its arc endpoints in traversal order.
///
/// `gaps[k]` is the base segment id of the stretch after `slots[k]`; a circle
/// without slots has a single gap. The label is the smallest gap id, which
/// makes circle identities stable under surgery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circle {
    pub label: u32,
    pub slots: Vec<Slot>,
    pub gaps: Vec<u32>,
}

/// An oriented arc configuration on the sphere.
///
/// Stored as a rotation system: each circle lists arc endpoints in traversal
/// order together with the side the arc leaves from. Traversing a circle with
/// its interior on the right is clockwise.
#[derive(Clone, Debug)]
pub struct OrientedConfiguration {
    circles: Vec<Circle>,
    n_arcs: usize,
}

const NO_BASE: u32 = u32::MAX;

/// Result of a surgery together with the new circle owning each old gap.
pub(crate) struct Trace {
    pub config: OrientedConfiguration,
    pub owner: Vec<Vec<u32>>,
}

impl OrientedConfiguration {
    /// Builds a configuration, checking that every arc has one start and one end.
    pub fn new(mut circles: Vec<Circle>, n_arcs: usize) -> Result<Self> {
        let mut seen = vec![[0usize; 2]; n_arcs];
        for c in &circles {
            let expect = c.slots.len().max(1);
            if c.gaps.len() != expect {
                return Err(Error::InvalidDiagram(format!("circle {} has {} gaps, expected {expect}", c.label, c.gaps.len())));
            }
            if c.gaps.iter().copied().min() != Some(c.label) {
                return Err(Error::InvalidDiagram(format!("circle {} is not labelled by its smallest gap", c.label)));
            }
            for s in &c.slots {
                if s.arc >= n_arcs {
                    return Err(Error::InvalidDiagram(format!("arc {} out of range", s.arc)));
                }
                seen[s.arc][s.end.index()] += 1;
            }
        }
        if let Some(i) = seen.iter().position(|s| *s != [1, 1]) {
            return Err(Error::InvalidDiagram(format!("arc {i} does not have exactly one start and one end")));
        }
        circles.sort_by_key(|c| c.label);
        if circles.windows(2).any(|w| w[0].label == w[1].label) {
            return Err(Error::InvalidDiagram("duplicate circle labels".into()));
        }
        Ok(OrientedConfiguration { circles, n_arcs })
    }

    pub(crate) fn from_parts_unchecked(mut circles: Vec<Circle>, n_arcs: usize) -> Self {
        circles.sort_by_key(|c| c.label);
        OrientedConfiguration { circles, n_arcs }
    }

    pub fn n_arcs(&self) -> usize {
        self.n_arcs
    }

    pub fn n_circles(&self) -> usize {
        self.circles.len()
    }

    pub fn circles(&self) -> &[Circle] {
        &self.circles
    }

    /// Circle labels in increasing order; this is the exterior basis order.
    pub fn labels(&self) -> Vec<u32> {
        self.circles.iter().map(|c| c.label).collect()
    }

    pub fn circle_index(&self, label: u32) -> Option<usize> {
        self.circles.binary_search_by_key(&label, |c| c.label).ok()
    }

    /// For each arc, the (circle index, slot index) of its start and end.
    pub fn locate(&self) -> Vec<[(usize, usize); 2]> {
        let mut loc = vec![[(usize::MAX, usize::MAX); 2]; self.n_arcs];
        for (ci, c) in self.circles.iter().enumerate() {
            for (si, s) in c.slots.iter().enumerate() {
                loc[s.arc][s.end.index()] = (ci, si);
            }
        }
        loc
    }

    pub fn endpoint(&self, arc: usize, end: End) -> (usize, usize) {
        self.locate()[arc][end.index()]
    }

    /// Label of the circle containing `γ⁰`.
    pub fn start_circle(&self, arc: usize) -> u32 {
        self.circles[self.endpoint(arc, End::Start).0].label
    }

    /// Label of the circle containing `γ¹`.
    pub fn end_circle(&self, arc: usize) -> u32 {
        self.circles[self.endpoint(arc, End::End).0].label
    }

    /// Labels of circles carrying no arc endpoints.
    pub fn passive_labels(&self) -> Vec<u32> {
        self.circles.iter().filter(|c| c.slots.is_empty()).map(|c| c.label).collect()
    }

    /// Labels of circles carrying at least one arc endpoint.
    pub fn active_labels(&self) -> Vec<u32> {
        self.circles.iter().filter(|c| !c.slots.is_empty()).map(|c| c.label).collect()
    }

    /// The configuration with passive circles removed.
    pub fn active_part(&self) -> OrientedConfiguration {
        let circles = self.circles.iter().filter(|c| !c.slots.is_empty()).cloned().collect();
        OrientedConfiguration { circles, n_arcs: self.n_arcs }
    }

    pub fn is_active(&self) -> bool {
        self.circles.iter().all(|c| !c.slots.is_empty())
    }

    /// Whether the active circles and the arcs form a connected graph.
    pub fn is_connected(&self) -> bool {
        let active: Vec<usize> = (0..self.circles.len()).filter(|&i| !self.circles[i].slots.is_empty()).collect();
        if active.is_empty() {
            return self.n_arcs == 0;
        }
        let mut uf = UnionFind::new(self.circles.len());
        for [(a, _), (b, _)] in self.locate() {
            uf.union(a, b);
        }
        let root = uf.find(active[0]);
        active.iter().all(|&i| uf.find(i) == root)
    }

    /// Reverses the orientation of every arc.
    pub fn reverse(&self) -> OrientedConfiguration {
        let mut out = self.clone();
        for c in &mut out.circles {
            for s in &mut c.slots {
                s.end = s.end.other();
            }
        }
        out
    }

    /// Reverses the orientation of arc `i` only.
    pub fn reverse_arc(&self, i: usize) -> OrientedConfiguration {
        let mut out = self.clone();
        for c in &mut out.circles {
            for s in c.slots.iter_mut().filter(|s| s.arc == i) {
                s.end = s.end.other();
            }
        }
        out
    }

    /// Mirror image: every side flips.
    pub fn mirror(&self) -> OrientedConfiguration {
        let mut out = self.clone();
        for c in &mut out.circles {
            for s in &mut c.slots {
                s.side = s.side.flip();
            }
        }
        out
    }

    /// Surgery along all arcs, adding the dual arcs (each arc rotated a quarter turn
    /// counterclockwise about its midpoint).
    pub fn dual(&self) -> OrientedConfiguration {
        self.dual_trace().config
    }

    pub(crate) fn dual_trace(&self) -> Trace {
        let surger = vec![true; self.n_arcs];
        let keep = vec![None; self.n_arcs];
        let dual: Vec<Option<usize>> = (0..self.n_arcs).map(Some).collect();
        self.surgery(&surger, &keep, &dual, self.n_arcs)
    }

    /// The configuration at face `a`: surgery along arcs with `a_i = 1`, keeping
    /// arcs with `a_i = *` (renumbered in increasing order) and dropping the rest.
    pub fn resolve(&self, a: &FaceAddress) -> Result<OrientedConfiguration> {
        if a.n() != self.n_arcs {
            return Err(Error::Dimension(format!("face has {} coordinates, configuration has {} arcs", a.n(), self.n_arcs)));
        }
        Ok(self.resolve_unchecked(a))
    }

    pub(crate) fn resolve_unchecked(&self, a: &FaceAddress) -> OrientedConfiguration {
        let mut surger = vec![false; self.n_arcs];
        let mut keep = vec![None; self.n_arcs];
        let mut k = 0;
        for (i, s) in surger.iter_mut().enumerate() {
            match a.entry(i) {
                Entry::Zero => {}
                Entry::One => *s = true,
                Entry::Star => {
                    keep[i] = Some(k);
                    k += 1;
                }
            }
        }
        self.surgery(&surger, &keep, &vec![None; self.n_arcs], k).config
    }

    /// Number of circles after surgery along the arcs in `mask`.
    pub fn circles_after(&self, mask: u32) -> usize {
        let surger: Vec<bool> = (0..self.n_arcs).map(|i| mask >> i & 1 == 1).collect();
        self.surgery(&surger, &vec![None; self.n_arcs], &vec![None; self.n_arcs], 0).config.n_circles()
    }

    pub(crate) fn surgery(&self, surger: &[bool], keep: &[Option<usize>], dual: &[Option<usize>], n_new: usize) -> Trace {
        let loc = self.locate();
        let mut order: Vec<(u32, usize, usize)> = Vec::new();
        for (ci, c) in self.circles.iter().enumerate() {
            for (gi, &b) in c.gaps.iter().enumerate() {
                order.push((b, ci, gi));
            }
        }
        order.sort_unstable();
        let mut visited: Vec<Vec<bool>> = self.circles.iter().map(|c| vec![false; c.gaps.len()]).collect();
        let mut owner_idx: Vec<Vec<usize>> = self.circles.iter().map(|c| vec![0; c.gaps.len()]).collect();
        let mut new_circles: Vec<Circle> = Vec::new();
        let total_gaps = order.len();

        for &(_, c0, g0) in &order {
            if visited[c0][g0] {
                continue;
            }
            let idx = new_circles.len();
            if self.circles[c0].slots.is_empty() {
                visited[c0][g0] = true;
                owner_idx[c0][g0] = idx;
                new_circles.push(self.circles[c0].clone());
                continue;
            }
            let start = (c0, g0, true);
            let mut state = start;
            let mut recorded: Vec<Slot> = Vec::new();
            let mut before: Vec<u32> = Vec::new();
            let mut acc = NO_BASE;
            let mut steps = 0usize;
            loop {
                steps += 1;
                assert!(steps <= 4 * total_gaps + 4, "surgery trace did not close");
                let (c, g, fwd) = state;
                visited[c][g] = true;
                owner_idx[c][g] = idx;
                let circle = &self.circles[c];
                acc = acc.min(circle.gaps[g]);
                let len = circle.slots.len();
                let s = if fwd { (g + 1) % len } else { g };
                let slot = circle.slots[s];
                let next = if surger[slot.arc] {
                    let incoming_left = (slot.side == Side::Left) == (slot.end == End::Start);
                    let band = if fwd == incoming_left { Side::Left } else { Side::Right };
                    if let Some(j) = dual[slot.arc] {
                        let along = slot.end == End::Start;
                        let side = if (band == Side::Left) == along { Side::Right } else { Side::Left };
                        let end = if band == Side::Right { End::Start } else { End::End };
                        before.push(acc);
                        acc = NO_BASE;
                        recorded.push(Slot { arc: j, end, side });
                    }
                    let far_end = slot.end.other();
                    let (c2, s2) = loc[slot.arc][far_end.index()];
                    let far = &self.circles[c2];
                    let far_incoming_left = (far.slots[s2].side == Side::Left) == (far_end == End::Start);
                    if far_incoming_left == (band == Side::Left) {
                        (c2, (s2 + far.slots.len() - 1) % far.slots.len(), false)
                    } else {
                        (c2, s2, true)
                    }
                } else {
                    if let Some(j) = keep[slot.arc] {
                        before.push(acc);
                        acc = NO_BASE;
                        let side = if fwd { slot.side } else { slot.side.flip() };
                        recorded.push(Slot { arc: j, end: slot.end, side });
                    }
                    if fwd {
                        (c, s, true)
                    } else {
                        (c, (s + len - 1) % len, false)
                    }
                };
                if next == start {
                    break;
                }
                state = next;
            }
            let gaps = if recorded.is_empty() {
                vec![acc]
            } else {
                let n = recorded.len();
                let mut gaps: Vec<u32> = before[1..].to_vec();
                gaps.push(acc.min(before[0]));
                debug_assert_eq!(gaps.len(), n);
                gaps
            };
            let label = *gaps.iter().min().expect("nonempty");
            debug_assert!(label != NO_BASE);
            new_circles.push(Circle { label, slots: recorded, gaps });
        }

        let mut perm: Vec<usize> = (0..new_circles.len()).collect();
        perm.sort_by_key(|&i| new_circles[i].label);
        let labels: Vec<u32> = new_circles.iter().map(|c| c.label).collect();
        let owner = owner_idx.iter().map(|row| row.iter().map(|&i| labels[i]).collect()).collect();
        let circles = perm.into_iter().map(|i| new_circles[i].clone()).collect();
        Trace { config: OrientedConfiguration { circles, n_arcs: n_new }, owner }
    }

    /// A form that is equal for two configurations exactly when they agree up to
    /// the choice of starting point and direction on each circle.
    pub fn canonical_form(&self) -> Vec<(u32, Vec<(Slot, u32)>)> {
        self.circles
            .iter()
            .map(|c| {
                let n = c.slots.len();
                if n == 0 {
                    return (c.label, Vec::new());
                }
                let mut best: Option<Vec<(Slot, u32)>> = None;
                for r in 0..n {
                    let fwd: Vec<(Slot, u32)> = (0..n).map(|j| (c.slots[(r + j) % n], c.gaps[(r + j) % n])).collect();
                    let bwd: Vec<(Slot, u32)> = (0..n)
                        .map(|j| {
                            let k = (r + n - j) % n;
                            let s = c.slots[k];
                            (Slot { side: s.side.flip(), ..s }, c.gaps[(k + n - 1) % n])
                        })
                        .collect();
                    for cand in [fwd, bwd] {
                        if best.as_ref().map_or(true, |b| cand < *b) {
                            best = Some(cand);
                        }
                    }
                }
                (c.label, best.expect("nonempty"))
            })
            .collect()
    }

    /// Euler-formula check of the rotation system: each connected component of
    /// the graph formed by active circles and arcs must be planar.
    pub fn is_planar(&self) -> bool {
        // darts: 3 per slot (0 = outgoing gap, 1 = incoming gap, 2 = arc)
        let mut base = Vec::with_capacity(self.circles.len());
        let mut v = 0usize;
        for c in &self.circles {
            base.push(v);
            v += c.slots.len();
        }
        if v == 0 {
            return true;
        }
        let loc = self.locate();
        let dart = |c: usize, s: usize, k: usize| 3 * (base[c] + s) + k;
        let mut alpha = vec![0usize; 3 * v];
        let mut sigma = vec![0usize; 3 * v];
        for (ci, c) in self.circles.iter().enumerate() {
            let n = c.slots.len();
            for (si, s) in c.slots.iter().enumerate() {
                let next = (si + 1) % n;
                alpha[dart(ci, si, 0)] = dart(ci, next, 1);
                alpha[dart(ci, next, 1)] = dart(ci, si, 0);
                let (oc, os) = loc[s.arc][s.end.other().index()];
                alpha[dart(ci, si, 2)] = dart(oc, os, 2);
                let rot = match s.side {
                    Side::Left => [0, 2, 1],
                    Side::Right => [0, 1, 2],
                };
                for k in 0..3 {
                    sigma[dart(ci, si, rot[k])] = dart(ci, si, rot[(k + 1) % 3]);
                }
            }
        }
        let faces = count_orbits(&alpha, &sigma);
        let edges = v + self.n_arcs;
        let mut uf = UnionFind::new(self.circles.len());
        for [(a, _), (b, _)] in &loc {
            uf.union(*a, *b);
        }
        let comps = (0..self.circles.len())
            .filter(|&i| !self.circles[i].slots.is_empty() && uf.find(i) == i)
            .count();
        v as i64 - edges as i64 + faces as i64 == 2 * comps as i64
    }

    /// Relabels arcs by `perm[old] = new`.
    pub fn permute_arcs(&self, perm: &[usize]) -> OrientedConfiguration {
        let mut out = self.clone();
        for c in &mut out.circles {
            for s in &mut c.slots {
                s.arc = perm[s.arc];
            }
        }
        out
    }
}

impl PartialEq for OrientedConfiguration {
    fn eq(&self, other: &Self) -> bool {
        self.n_arcs == other.n_arcs && self.canonical_form() == other.canonical_form()
    }
}

impl Eq for OrientedConfiguration {}

/// Number of orbits of the permutation `sigma ∘ alpha`.
pub(crate) fn count_orbits(alpha: &[usize], sigma: &[usize]) -> usize {
    let mut seen = vec![false; alpha.len()];
    let mut count = 0;
    for d in 0..alpha.len() {
        if seen[d] {
            continue;
        }
        count += 1;
        let mut x = d;
        while !seen[x] {
            seen[x] = true;
            x = sigma[alpha[x]];
        }
    }
    count
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Small constructor used by tests and examples: circles given as slot lists.
///
/// Each circle is `(label, [(arc, end, side), ...])`; gap ids are generated as
/// `label, label + 1, ...` so labels must be spaced apart.
pub fn configuration_from_slots(circles_in: &[(u32, Vec<(usize, End, Side)>)], n_arcs: usize) -> Result<OrientedConfiguration> {
    let circles = circles_in
        .iter()
        .map(|(label, slots)| {
            let gaps = if slots.is_empty() { vec![*label] } else { (0..slots.len() as u32).map(|k| label + k).collect() };
            Circle {
                label: *label,
                slots: slots.iter().map(|&(arc, end, side)| Slot { arc, end, side }).collect(),
                gaps,
            }
        })
        .collect();
    OrientedConfiguration::new(circles, n_arcs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use End::{End as E, Start as S};
    use Side::{Left as L, Right as R};

    fn split() -> OrientedConfiguration {
        configuration_from_slots(&[(0, vec![(0, S, R), (0, E, R)])], 1).unwrap()
    }

    fn join() -> OrientedConfiguration {
        configuration_from_slots(&[(0, vec![(0, S, R)]), (10, vec![(0, E, L)])], 1).unwrap()
    }

    #[test]
    fn split_and_join_are_dual() {
        let s = split();
        let d = s.dual();
        assert_eq!(d.n_circles(), 2);
        assert_eq!(d.n_arcs(), 1);
        let j = join();
        let dj = j.dual();
        assert_eq!(dj.n_circles(), 1);
        assert!(s.is_planar() && d.is_planar() && j.is_planar() && dj.is_planar());
    }

    #[test]
    fn double_dual_reverses() {
        for c in [split(), join()] {
            assert_eq!(c.dual().dual(), c.reverse());
        }
    }

    #[test]
    fn resolve_corners() {
        let c = split();
        let r0 = c.resolve(&FaceAddress::parse("0").unwrap()).unwrap();
        assert_eq!(r0.n_circles(), 1);
        assert_eq!(r0.n_arcs(), 0);
        let r1 = c.resolve(&FaceAddress::parse("1").unwrap()).unwrap();
        assert_eq!(r1.n_circles(), 2);
        assert_eq!(c.resolve(&FaceAddress::parse("*").unwrap()).unwrap(), c);
        assert!(c.resolve(&FaceAddress::parse("**").unwrap()).is_err());
    }

    #[test]
    fn labels_survive_surgery() {
        let j = join();
        let d = j.dual();
        assert_eq!(d.labels(), vec![0]);
        let s = split();
        assert_eq!(s.dual().labels(), vec![0, 1]);
    }

    #[test]
    fn canonical_form_ignores_start_and_direction() {
        let a = configuration_from_slots(&[(0, vec![(0, S, R), (1, S, R), (0, E, R), (1, E, R)])], 2).unwrap();
        let mut b = a.clone();
        b.circles[0].slots.rotate_left(1);
        b.circles[0].gaps.rotate_left(1);
        assert_eq!(a, b);
        assert_ne!(a, a.mirror());
    }

    #[test]
    fn rejects_malformed_arcs() {
        assert!(configuration_from_slots(&[(0, vec![(0, S, R), (0, S, R)])], 1).is_err());
    }
}
