use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::classify::{classify, TypeMatch};
use crate::edgesign::{is_split, solve, EdgeAssignment, Flavor};
use crate::error::{Error, Result};
use crate::exterior::{sort_with_sign, ExtElement, IntMatrix};
use crate::planar::{zero_resolution, EdgePath, FaceAddress, LinkDiagram, OrientationPolicy, OrientedConfiguration};

/// Basis of `⊕_v ΛV(r(C,v))`: generator `(v, mask)` where bit `j` of `mask`
/// selects the `j`-th circle (by label) at vertex `v`.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    n: usize,
    counts: Vec<usize>,
    labels: Vec<Vec<u32>>,
    offsets: Vec<usize>,
    total: usize,
}

impl GradedBasis {
    pub fn new(c: &OrientedConfiguration) -> Self {
        let n = c.n_arcs();
        let labels: Vec<Vec<u32>> = (0..1u32 << n)
            .into_par_iter()
            .map(|v| c.resolve_unchecked(&FaceAddress::vertex(n, v)).labels())
            .collect();
        let counts: Vec<usize> = labels.iter().map(|l| l.len()).collect();
        let mut offsets = Vec::with_capacity(labels.len());
        let mut total = 0;
        for l in &labels {
            offsets.push(total);
            total += 1usize << l.len();
        }
        GradedBasis { n, counts, labels, offsets, total }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn index(&self, vertex: u32, mask: u64) -> usize {
        self.offsets[vertex as usize] + mask as usize
    }

    /// `(vertex, mask)` of a global index.
    pub fn generator(&self, idx: usize) -> (u32, u64) {
        let v = self.offsets.partition_point(|&o| o <= idx) - 1;
        (v as u32, (idx - self.offsets[v]) as u64)
    }

    pub fn labels(&self, vertex: u32) -> &[u32] {
        &self.labels[vertex as usize]
    }

    pub fn circle_count(&self, vertex: u32) -> usize {
        self.counts[vertex as usize]
    }

    /// Homological degree `|v|` before the diagram shift.
    pub fn h(&self, idx: usize) -> i64 {
        self.generator(idx).0.count_ones() as i64
    }

    /// Exterior degree of a generator.
    pub fn gr(&self, idx: usize) -> i64 {
        self.generator(idx).1.count_ones() as i64
    }

    /// `δ = |r(C,v)| - 2 gr - |v|` before the diagram shift.
    pub fn delta(&self, idx: usize) -> i64 {
        let (v, m) = self.generator(idx);
        self.counts[v as usize] as i64 - 2 * m.count_ones() as i64 - v.count_ones() as i64
    }

    /// `sp(C, v) = (|r(C,v)| - |C| + |v|) / 2`.
    pub fn sp(&self, v: u32) -> usize {
        (self.counts[v as usize] + v.count_ones() as usize - self.counts[0]) / 2
    }

    fn bit(&self, vertex: u32, label: u32) -> u64 {
        let pos = self.labels[vertex as usize].binary_search(&label).expect("circle present at vertex");
        1u64 << pos
    }

    fn mask_of(&self, vertex: u32, mono: &[u32]) -> u64 {
        mono.iter().map(|&l| self.bit(vertex, l)).sum()
    }
}

/// A linear map between exterior algebras on circle labels, stored by basis monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigMap {
    entries: BTreeMap<(Vec<u32>, Vec<u32>), i64>,
}

impl ConfigMap {
    fn add(&mut self, src: Vec<u32>, dst: Vec<u32>, c: i64) {
        let e = self.entries.entry((src, dst)).or_insert(0);
        *e += c;
    }

    fn prune(mut self) -> Self {
        self.entries.retain(|_, v| *v != 0);
        self
    }

    /// Coefficient of `dst` in the image of `src`.
    pub fn coefficient(&self, src: &[u32], dst: &[u32]) -> i64 {
        self.entries.get(&(src.to_vec(), dst.to_vec())).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[u32], &[u32], i64)> {
        self.entries.iter().map(|((s, d), &c)| (s.as_slice(), d.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn apply(&self, x: &ExtElement) -> ExtElement {
        let mut out = ExtElement::zero();
        for (m, c) in x.terms() {
            for ((s, d), &v) in self.entries.range((m.clone(), Vec::new())..) {
                if s != m {
                    break;
                }
                out.add_term(d.clone(), c * v);
            }
        }
        out
    }

    pub fn scale(&self, c: i64) -> ConfigMap {
        ConfigMap { entries: self.entries.iter().map(|(k, v)| (k.clone(), v * c)).collect() }.prune()
    }
}

fn parity_sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The path used to evaluate a type map: identity order, except that for
/// `D`-types the two distinguished arcs come last.
pub fn representative_path(m: &TypeMatch, k: usize) -> EdgePath {
    match m.last_pair {
        None => EdgePath::identity(k),
        Some((a, b)) => {
            let mut order: Vec<usize> = (0..k).filter(|&i| i != a && i != b).collect();
            order.extend([a, b]);
            EdgePath::from_permutation(order).expect("permutation")
        }
    }
}

/// All paths in `P(C,τ)`.
pub fn allowed_paths(m: &TypeMatch, k: usize) -> Vec<EdgePath> {
    EdgePath::all(k).into_iter().filter(|t| m.allows(t)).collect()
}

/// `sp(C,θ)` given circle counts at the local vertices of the face.
fn sp_path(theta: &EdgePath, counts: &dyn Fn(u32) -> usize) -> i64 {
    let c0 = counts(0);
    let mut s = 1;
    for j in 0..theta.len().saturating_sub(1) {
        let w = theta.vertex_after(j);
        let sp = (counts(w) + w.count_ones() as usize - c0) / 2;
        s *= parity_sign(sp);
    }
    s
}

/// Terms `(α, β, c)` of `coeff · d_{C,τ}` extended over passive circles.
fn type_terms(r: &OrientedConfiguration, m: &TypeMatch, theta: &EdgePath, coeff: i64) -> Vec<(Vec<u32>, Vec<u32>, i64)> {
    let Some((sx, mx)) = m.x_for(theta) else { return Vec::new() };
    let (sy, my) = m.y.as_signed_monomial().expect("y is a signed monomial");
    let passive = r.passive_labels();
    let mut out = Vec::with_capacity(1 << passive.len());
    for w in 0u64..(1u64 << passive.len()) {
        let omega: Vec<u32> = (0..passive.len()).filter(|&i| w >> i & 1 == 1).map(|i| passive[i]).collect();
        let a: Vec<u32> = mx.iter().chain(&omega).copied().collect();
        let b: Vec<u32> = my.iter().chain(&omega).copied().collect();
        let (Some((sa, a)), Some((sb, b))) = (sort_with_sign(&a), sort_with_sign(&b)) else { continue };
        out.push((a, b, coeff * sx * sy * sa * sb));
    }
    out
}

/// `d_{C,τ,ε}` evaluated along the path `θ`.
pub fn d_config_type_along(r: &OrientedConfiguration, m: &TypeMatch, eps: &EdgeAssignment, theta: &EdgePath) -> Result<ConfigMap> {
    let k = r.n_arcs();
    if eps.n() != k || theta.len() != k {
        return Err(Error::Dimension("edge assignment or path does not match the configuration".into()));
    }
    let counts: Vec<usize> = (0..1u32 << k).map(|w| r.circles_after(w)).collect();
    let coeff = eps.path_product(theta) as i64 * sp_path(theta, &|w| counts[w as usize]);
    let mut out = ConfigMap::default();
    for (a, b, c) in type_terms(r, m, theta, coeff) {
        out.add(a, b, c);
    }
    Ok(out.prune())
}

/// `d_{C,τ,ε}` along the representative path.
pub fn d_config_type(r: &OrientedConfiguration, m: &TypeMatch, eps: &EdgeAssignment) -> Result<ConfigMap> {
    d_config_type_along(r, m, eps, &representative_path(m, r.n_arcs()))
}

/// `d_{C,ε} = Σ_τ d_{C,τ,ε}` over the types of `act(C)`.
pub fn d_config(r: &OrientedConfiguration, eps: &EdgeAssignment) -> Result<ConfigMap> {
    let mut out = ConfigMap::default();
    for m in classify(r)? {
        for (a, b, c) in d_config_type(r, &m, eps)?.entries() {
            out.add(a.to_vec(), b.to_vec(), c);
        }
    }
    Ok(out.prune())
}

/// Global matrix entries contributed by one face of the cube.
fn face_triplets(c: &OrientedConfiguration, eps: &EdgeAssignment, basis: &GradedBasis, a: &FaceAddress) -> Result<Vec<(usize, usize, i64)>> {
    let r = c.resolve_unchecked(a);
    let matches = classify(&r)?;
    if matches.is_empty() {
        return Ok(Vec::new());
    }
    let k = a.dim();
    let a0 = a.initial();
    let a1 = a.terminal();
    let g = parity_sign(a0.count_ones() as usize + (k + 1) * basis.sp(a0));
    let counts = |w: u32| basis.circle_count(a.embed_vertex(w));
    let mut out = Vec::new();
    for m in &matches {
        let theta = representative_path(m, k);
        let e: i64 = theta.edges().iter().map(|e| eps.get(&a.embed_face(e).expect("edge")) as i64).product();
        let coeff = g * e * sp_path(&theta, &counts);
        for (src, dst, v) in type_terms(&r, m, &theta, coeff) {
            let col = basis.index(a0, basis.mask_of(a0, &src));
            let row = basis.index(a1, basis.mask_of(a1, &dst));
            out.push((row, col, v));
        }
    }
    Ok(out)
}

/// `d_k`: the component of the differential raising the cube degree by `k`.
pub fn d_k(c: &OrientedConfiguration, eps: &EdgeAssignment, k: usize, basis: &GradedBasis) -> Result<IntMatrix> {
    if eps.n() != c.n_arcs() {
        return Err(Error::Dimension("edge assignment does not match the configuration".into()));
    }
    let faces = FaceAddress::faces(c.n_arcs(), k);
    let trip: Vec<Vec<(usize, usize, i64)>> =
        faces.par_iter().map(|a| face_triplets(c, eps, basis, a)).collect::<Result<_>>()?;
    Ok(IntMatrix::from_triplets(basis.len(), basis.len(), trip.into_iter().flatten()))
}

/// The components `d_1, …, d_n`.
pub fn d_parts(c: &OrientedConfiguration, eps: &EdgeAssignment, basis: &GradedBasis) -> Result<Vec<IntMatrix>> {
    (1..=c.n_arcs()).map(|k| d_k(c, eps, k, basis)).collect()
}

/// The total differential `d = Σ_k d_k`.
pub fn d_total(c: &OrientedConfiguration, eps: &EdgeAssignment, basis: &GradedBasis) -> Result<IntMatrix> {
    sum_parts(&d_parts(c, eps, basis)?, basis.len())
}

pub(crate) fn sum_parts(parts: &[IntMatrix], n: usize) -> Result<IntMatrix> {
    let mut d = IntMatrix::zeros(n, n);
    for p in parts {
        d = d.add(p)?;
    }
    Ok(d)
}

/// The homotopy `H_i` relating the complexes before and after reversing arc `i`.
pub fn homotopy(c: &OrientedConfiguration, eps: &EdgeAssignment, i: usize, basis: &GradedBasis) -> Result<IntMatrix> {
    let n = c.n_arcs();
    if i >= n || eps.n() != n {
        return Err(Error::Dimension("arc index or edge assignment out of range".into()));
    }
    let mut trip = Vec::new();
    for e in FaceAddress::faces(n, 1) {
        if e.stars() != 1 << i {
            continue;
        }
        let r = c.resolve_unchecked(&e);
        let (a0, a1) = (e.initial(), e.terminal());
        let coeff = eps.get(&e) as i64 * parity_sign(basis.sp(a0));
        let passive = r.passive_labels();
        let dual = r.dual();
        for w in 0u64..(1u64 << passive.len()) {
            let omega: Vec<u32> = (0..passive.len()).filter(|&j| w >> j & 1 == 1).map(|j| passive[j]).collect();
            let (src, dst): (Vec<u32>, Vec<u32>) = if is_split(&r) {
                (omega.clone(), omega)
            } else {
                let x1 = r.start_circle(0);
                let x2 = r.end_circle(0);
                let y = dual.start_circle(0);
                ([x1, x2].iter().chain(&omega).copied().collect(), std::iter::once(y).chain(omega).collect())
            };
            let (Some((sa, a)), Some((sb, b))) = (sort_with_sign(&src), sort_with_sign(&dst)) else { continue };
            let col = basis.index(a0, basis.mask_of(a0, &a));
            let row = basis.index(a1, basis.mask_of(a1, &b));
            trip.push((row, col, coeff * sa * sb));
        }
    }
    Ok(IntMatrix::from_triplets(basis.len(), basis.len(), trip))
}

/// The complex `Ĉ` of a diagram together with its gradings.
#[derive(Clone, Debug)]
pub struct DiagramComplex {
    pub diagram: LinkDiagram,
    pub policy: OrientationPolicy,
    pub flavor: Flavor,
    /// The 0-resolution `C` of the diagram.
    pub zero_resolution: OrientedConfiguration,
    /// The configuration whose cube defines the differential (`C`, or `r(m(C))` for flavor X).
    pub config: OrientedConfiguration,
    pub eps: EdgeAssignment,
    pub basis: GradedBasis,
    /// `parts[k - 1] = d_k` (a single zero map for a crossingless diagram).
    pub parts: Vec<IntMatrix>,
    pub d: IntMatrix,
}

impl DiagramComplex {
    pub fn n_plus(&self) -> i64 {
        self.diagram.n_plus() as i64
    }

    pub fn n_minus(&self) -> i64 {
        self.diagram.n_minus() as i64
    }

    /// Homological degree, shifted by `-n₋`.
    pub fn h(&self, idx: usize) -> i64 {
        self.basis.h(idx) - self.n_minus()
    }

    /// `δ`-grading, shifted by `+n₊`.
    pub fn delta(&self, idx: usize) -> i64 {
        self.basis.delta(idx) + self.n_plus()
    }

    /// Quantum grading `q = δ + 2h`.
    pub fn q(&self, idx: usize) -> i64 {
        self.delta(idx) + 2 * self.h(idx)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn d1(&self) -> &IntMatrix {
        &self.parts[0]
    }
}

/// Builds `Ĉ(C, ε)` for the 0-resolution of a diagram.
///
/// For flavor Y the assignment solves the Y-rule on `C`; for flavor X it solves
/// the X-rule on `C` and the complex is built on `r(m(C))`.
pub fn build_diagram_complex(d: &LinkDiagram, policy: OrientationPolicy, flavor: Flavor) -> Result<DiagramComplex> {
    let c = zero_resolution(d, policy);
    let eps = solve(&c, flavor)?;
    let config = match flavor {
        Flavor::Y => c.clone(),
        Flavor::X => x_variant_configuration(&c, &eps)?,
    };
    let mut dc = diagram_complex_on(d, config, eps)?;
    dc.policy = policy;
    dc.flavor = flavor;
    dc.zero_resolution = c;
    Ok(dc)
}

/// The complex of a diagram built on a chosen configuration and Y-assignment,
/// e.g. the 0-resolution with some arcs reversed.
pub fn diagram_complex_on(d: &LinkDiagram, config: OrientedConfiguration, eps: EdgeAssignment) -> Result<DiagramComplex> {
    if config.n_arcs() != d.n_crossings() || eps.n() != config.n_arcs() {
        return Err(Error::Dimension("configuration or edge assignment does not match the diagram".into()));
    }
    let basis = GradedBasis::new(&config);
    let parts = if d.n_crossings() == 0 {
        vec![IntMatrix::zeros(basis.len(), basis.len())]
    } else {
        d_parts(&config, &eps, &basis)?
    };
    let total = sum_parts(&parts, basis.len())?;
    Ok(DiagramComplex {
        diagram: d.clone(),
        policy: OrientationPolicy::Default,
        flavor: Flavor::Y,
        zero_resolution: config.clone(),
        config,
        eps,
        basis,
        parts,
        d: total,
    })
}

/// `r(m(C))`, after checking that an X-assignment for `C` is a Y-assignment for it.
pub fn x_variant_configuration(c: &OrientedConfiguration, eps_x: &EdgeAssignment) -> Result<OrientedConfiguration> {
    let rm = c.mirror().reverse();
    if let Err(s) = eps_x.verify(&rm, Flavor::Y)? {
        return Err(Error::Invariant(format!("X-assignment fails the Y-rule on r(m(C)) at square {s}")));
    }
    Ok(rm)
}

/// `Ĉ'(C, ε_X) = Ĉ(r(m(C)), ε_X)`: the basis and the differential.
pub fn x_variant(c: &OrientedConfiguration, eps_x: &EdgeAssignment) -> Result<(GradedBasis, IntMatrix)> {
    let rm = x_variant_configuration(c, eps_x)?;
    let basis = GradedBasis::new(&rm);
    let d = d_total(&rm, eps_x, &basis)?;
    Ok((basis, d))
}
