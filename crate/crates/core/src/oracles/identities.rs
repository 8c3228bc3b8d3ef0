//! Executable versions of the structural identities of `Ĉ(C, ε)`.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{classify, m_star};
use crate::complex::{allowed_paths, d_config, d_config_type, d_config_type_along, d_parts, homotopy, ConfigMap, GradedBasis};
use crate::edgesign::{solve, EdgeAssignment, Flavor};
use crate::error::{Error, Result};
use crate::exterior::IntMatrix;
use crate::planar::{FaceAddress, OrientedConfiguration};

/// Faces checked exhaustively up to this many; beyond it a seeded sample.
const FACE_BUDGET: usize = 1500;
/// Paths compared per type map before sampling kicks in.
const PATH_BUDGET: usize = 120;
/// Arcs flipped exhaustively up to this many.
const ARC_BUDGET: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Number of elementary comparisons made.
    pub cases: usize,
    /// A failing (face, monomial) description, or an informational note.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<CheckOutcome>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Folds another report in: case counts add, the first witness wins.
    pub fn merge(&mut self, other: IdentityReport) {
        for o in other.checks {
            match self.checks.iter_mut().find(|c| c.name == o.name) {
                Some(c) => {
                    c.cases += o.cases;
                    if c.passed && !o.passed {
                        c.witness = o.witness;
                    }
                    c.passed &= o.passed;
                }
                None => self.checks.push(o),
            }
        }
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{:<28} {} ({} cases)", c.name, if c.passed { "PASS" } else { "FAIL" }, c.cases)?;
            if let Some(w) = &c.witness {
                write!(f, "  {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn outcome(name: &'static str, cases: usize, failure: Option<String>) -> CheckOutcome {
    CheckOutcome { name, passed: failure.is_none(), cases, witness: failure }
}

fn face_string(a: &FaceAddress) -> String {
    a.entries()
        .iter()
        .map(|e| match e {
            crate::planar::Entry::Zero => '0',
            crate::planar::Entry::One => '1',
            crate::planar::Entry::Star => '*',
        })
        .collect()
}

fn generator_string(basis: &GradedBasis, idx: usize) -> String {
    let (v, mask) = basis.generator(idx);
    let labels = basis.labels(v);
    let mono: Vec<String> = (0..labels.len()).filter(|&j| mask >> j & 1 == 1).map(|j| format!("x{}", labels[j])).collect();
    let mono = if mono.is_empty() { "1".to_string() } else { mono.join("^") };
    format!("vertex {} monomial {mono}", face_string(&FaceAddress::vertex(basis.n(), v)))
}

/// First nonzero entry of `m`, described as source and target generators.
fn matrix_witness(basis: &GradedBasis, m: &IntMatrix) -> Option<String> {
    m.entries().next().map(|(i, j, v)| {
        format!("{} -> {} has coefficient {v}", generator_string(basis, j), generator_string(basis, i))
    })
}

/// Faces of dimension at least one, all of them or a seeded sample.
fn sample_faces(n: usize, rng: &mut ChaCha8Rng) -> Vec<FaceAddress> {
    let total: usize = 3usize.pow(n as u32) - (1 << n);
    if total <= FACE_BUDGET {
        return (1..=n).flat_map(|k| FaceAddress::faces(n, k)).collect();
    }
    let mut out = BTreeSet::new();
    let mut faces = Vec::new();
    while faces.len() < FACE_BUDGET {
        let (mut ones, mut stars) = (0u32, 0u32);
        for i in 0..n {
            match rand::Rng::gen_range(rng, 0..3) {
                0 => {}
                1 => ones |= 1 << i,
                _ => stars |= 1 << i,
            }
        }
        if stars != 0 && out.insert((ones, stars)) {
            faces.push(FaceAddress::from_masks(n, ones, stars).expect("masks"));
        }
    }
    faces
}

fn complement(all: &[u32], part: &[u32]) -> Vec<u32> {
    all.iter().copied().filter(|l| !part.contains(l)).collect()
}

/// `Σ_{i+j=k} d_i d_j = 0` for every `k`.
fn check_d_squared(parts: &[IntMatrix], basis: &GradedBasis) -> Result<CheckOutcome> {
    let n = parts.len();
    let mut cases = 0;
    for k in 2..=2 * n {
        let mut sum = IntMatrix::zeros(basis.len(), basis.len());
        for i in 1..k {
            let j = k - i;
            if i > n || j > n {
                continue;
            }
            sum = sum.add(&parts[i - 1].mul(&parts[j - 1])?)?;
        }
        cases += 1;
        if let Some(w) = matrix_witness(basis, &sum) {
            return Ok(outcome("d_squared_per_degree", cases, Some(format!("degree {k}: {w}"))));
        }
    }
    Ok(outcome("d_squared_per_degree", cases, None))
}

/// Filtration rule on one face: every gap `P` of a circle `x(P)` lies on a
/// circle `y(P)` of the dual, and `α ∋ x(P)` forces `β ∋ y(P)`.
fn filtration_on(r: &OrientedConfiguration, map: &ConfigMap) -> (usize, Option<String>) {
    let trace = r.dual_trace();
    let mut cases = 0;
    for (ci, circle) in r.circles().iter().enumerate() {
        for (gi, _) in circle.gaps.iter().enumerate() {
            let (x, y) = (circle.label, trace.owner[ci][gi]);
            for (a, b, _) in map.entries() {
                if !a.contains(&x) {
                    continue;
                }
                cases += 1;
                if !b.contains(&y) {
                    return (cases, Some(format!("x(P) = x{x} in {a:?} but y(P) = x{y} missing from {b:?}")));
                }
            }
        }
    }
    (cases, None)
}

struct DualityTally {
    cases: usize,
    failure: Option<String>,
    maps: usize,
    mixed_sign_maps: usize,
}

/// Duality rule on one face: each type map agrees up to sign with the map of
/// the mirrored dual, transposed through complements.
fn duality_on(r: &OrientedConfiguration, eps: &EdgeAssignment) -> Result<DualityTally> {
    let mut t = DualityTally { cases: 0, failure: None, maps: 0, mixed_sign_maps: 0 };
    let matches = classify(r)?;
    if matches.is_empty() {
        return Ok(t);
    }
    let other = r.dual().mirror();
    let eta = solve(&other, Flavor::Y)?;
    let other_matches = classify(&other)?;
    let (src_labels, dst_labels) = (r.labels(), r.dual().labels());
    if other.dual().labels() != src_labels {
        t.failure = Some("dual of the mirrored dual has different circle labels".into());
        return Ok(t);
    }
    for m in &matches {
        let want = m_star(m.ty);
        let Some(m2) = other_matches.iter().find(|x| x.ty == want) else {
            t.failure = Some(format!("type {} has no partner of type {want}", m.ty));
            return Ok(t);
        };
        let map = d_config_type(r, m, eps)?;
        let dual_map = d_config_type(&other, m2, &eta)?;
        t.maps += 1;
        let mut signs = BTreeSet::new();
        for (a, b, c) in map.entries() {
            t.cases += 1;
            let c2 = dual_map.coefficient(&complement(&dst_labels, b), &complement(&src_labels, a));
            if c2.abs() != c.abs() {
                t.failure = Some(format!("type {}: {a:?} -> {b:?} is {c}, dual coefficient is {c2}", m.ty));
                return Ok(t);
            }
            signs.insert(c.signum() * c2.signum());
        }
        if map.entries().count() != dual_map.entries().count() {
            t.failure = Some(format!("type {}: supports of the map and its dual differ in size", m.ty));
            return Ok(t);
        }
        if signs.len() > 1 {
            t.mixed_sign_maps += 1;
        }
    }
    Ok(t)
}

/// `d_{C,τ,ε}` is the same along every allowed path.
fn theta_on(r: &OrientedConfiguration, eps: &EdgeAssignment, rng: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    let k = r.n_arcs();
    let mut cases = 0;
    for m in classify(r)? {
        let mut paths = allowed_paths(&m, k);
        if paths.len() > PATH_BUDGET {
            paths.shuffle(rng);
            paths.truncate(PATH_BUDGET);
        }
        let Some(first) = paths.first() else { continue };
        let reference = d_config_type_along(r, &m, eps, first)?;
        for p in &paths[1..] {
            cases += 1;
            if d_config_type_along(r, &m, eps, p)? != reference {
                return Ok((cases, Some(format!("type {}: paths {:?} and {:?} disagree", m.ty, first.phi(), p.phi()))));
            }
        }
    }
    Ok((cases, None))
}

/// Runs every identity on `(c, ε)`. Invalid `ε` is reported, not rejected.
pub fn check_identities(c: &OrientedConfiguration, eps: &EdgeAssignment, seed: u64) -> Result<IdentityReport> {
    let n = c.n_arcs();
    if eps.n() != n {
        return Err(Error::Dimension(format!("edge assignment has {} coordinates, configuration has {n} arcs", eps.n())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let verdict = eps.verify(c, Flavor::Y)?;
    checks.push(outcome(
        "edge_assignment_type_y",
        1,
        verdict.err().map(|s| format!("square {} has the wrong product", face_string(&s))),
    ));

    let basis = GradedBasis::new(c);
    if n == 0 {
        return Ok(IdentityReport { checks });
    }
    let parts = d_parts(c, eps, &basis)?;
    checks.push(check_d_squared(&parts, &basis)?);

    let faces = sample_faces(n, &mut rng);
    let face_seeds: Vec<u64> = faces.iter().map(|_| rand::Rng::gen(&mut rng)).collect();
    type FaceResult = (usize, Option<String>, DualityTally, usize, Option<String>);
    let per_face: Vec<FaceResult> = faces
        .par_iter()
        .zip(&face_seeds)
        .map(|(a, &s)| -> Result<FaceResult> {
            let r = c.resolve(a)?;
            let ea = eps.restrict(a)?;
            let tag = |w: Option<String>| w.map(|w| format!("face {}: {w}", face_string(a)));
            let (fc, fw) = filtration_on(&r, &d_config(&r, &ea)?);
            // Per entry on the face itself; the global sign on its active part,
            // since wedging in passive circles permutes signs entry by entry.
            let mut dual = duality_on(&r, &ea)?;
            dual.failure = tag(dual.failure);
            let active = duality_on(&r.active_part(), &ea)?;
            dual.maps = active.maps;
            dual.mixed_sign_maps = active.mixed_sign_maps;
            let mut face_rng = ChaCha8Rng::seed_from_u64(s);
            let (tc, tw) = theta_on(&r, &ea, &mut face_rng)?;
            Ok((fc, tag(fw), dual, tc, tag(tw)))
        })
        .collect::<Result<_>>()?;

    let first = |it: &mut dyn Iterator<Item = Option<String>>| it.flatten().next();
    let filtration_cases = per_face.iter().map(|f| f.0).sum();
    let filtration_fail = first(&mut per_face.iter().map(|f| f.1.clone()));
    checks.push(outcome("filtration_rule", filtration_cases, filtration_fail));

    let dual_cases = per_face.iter().map(|f| f.2.cases).sum();
    let dual_fail = first(&mut per_face.iter().map(|f| f.2.failure.clone()));
    checks.push(outcome("duality_rule", dual_cases, dual_fail));
    let maps: usize = per_face.iter().map(|f| f.2.maps).sum();
    let mixed: usize = per_face.iter().map(|f| f.2.mixed_sign_maps).sum();
    checks.push(outcome(
        "duality_global_sign",
        maps,
        (mixed > 0).then(|| format!("{mixed} of {maps} type maps need different signs on different entries")),
    ));

    let theta_cases = per_face.iter().map(|f| f.3).sum();
    let theta_fail = first(&mut per_face.iter().map(|f| f.4.clone()));
    checks.push(outcome("theta_independence", theta_cases, theta_fail));

    let d = parts.iter().try_fold(IntMatrix::zeros(basis.len(), basis.len()), |acc, p| acc.add(p))?;
    let mut arcs: Vec<usize> = (0..n).collect();
    if n > ARC_BUDGET {
        arcs.shuffle(&mut rng);
        arcs.truncate(ARC_BUDGET);
        arcs.sort_unstable();
    }
    let arc_results: Vec<[Option<String>; 4]> =
        arcs.par_iter().map(|&i| edge_homotopy_checks(c, eps, &basis, &d, i)).collect::<Result<_>>()?;
    let names = ["kappa_transform_type_y", "edge_homotopy", "homotopy_square_zero", "orientation_chain_iso"];
    for (k, name) in names.into_iter().enumerate() {
        let fail = arc_results.iter().find_map(|r| r[k].clone());
        checks.push(outcome(name, arcs.len(), fail));
    }
    Ok(IdentityReport { checks })
}

/// For the flip of arc `i`: `κε` is of type Y, `d(C,ε) - d(D,κε) = dH - Hd`,
/// `H² = HdH = 0`, and `id + H` intertwines the two differentials.
fn edge_homotopy_checks(
    c: &OrientedConfiguration,
    eps: &EdgeAssignment,
    basis: &GradedBasis,
    d: &IntMatrix,
    i: usize,
) -> Result<[Option<String>; 4]> {
    let flipped = c.reverse_arc(i);
    let eta = eps.kappa_transform(c, i)?;
    let tag = |w: Option<String>| w.map(|w| format!("arc {i}: {w}"));
    let kappa = eta.verify(&flipped, Flavor::Y)?.err().map(|s| format!("arc {i}: square {} fails", face_string(&s)));
    let flipped_basis = GradedBasis::new(&flipped);
    let d_flipped = d_parts(&flipped, &eta, &flipped_basis)?
        .iter()
        .try_fold(IntMatrix::zeros(basis.len(), basis.len()), |acc, p| acc.add(p))?;
    let h = homotopy(c, eps, i, basis)?;
    let (dh, hd) = (d.mul(&h)?, h.mul(d)?);
    let identity = d.sub(&d_flipped)?.sub(&dh.sub(&hd)?)?;
    let square = h.mul(&h)?.add(&h.mul(&dh)?)?;
    let f = IntMatrix::identity(basis.len()).add(&h)?;
    let intertwine = d_flipped.mul(&f)?.sub(&f.mul(d)?)?;
    Ok([
        kappa,
        tag(matrix_witness(basis, &identity)),
        tag(matrix_witness(basis, &square)),
        tag(matrix_witness(basis, &intertwine)),
    ])
}
