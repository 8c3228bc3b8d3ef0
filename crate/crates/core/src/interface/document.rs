use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::build_diagram_complex;
use crate::edgesign::{solve, Flavor};
use crate::error::{Error, Result};
use crate::exterior::AbelianGroupDescriptor;
use crate::homology::{
    convergence, odd_khovanov_f2, odd_khovanov_homology, spectral_pages, total_homology, BigradedGroups,
    ConvergenceReport, SpectralSequence,
};
use crate::oracles::{
    check_identities, euler_characteristic, even_khovanov_f2, jones_unnormalized, random_diagram, CheckOutcome,
    IdentityReport, LaurentPoly,
};
use crate::planar::{zero_resolution, LinkDiagram, OrientationPolicy};

#[derive(Clone, Copy, Debug)]
pub struct ComputeOptions {
    pub flavor: Flavor,
    pub policy: OrientationPolicy,
    /// Compute pages `E_2 … E_r`; `None` skips the spectral sequence.
    pub pages: Option<usize>,
    /// Run the structural identity checks on the complex.
    pub verify: bool,
    pub seed: u64,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        ComputeOptions { flavor: Flavor::Y, policy: OrientationPolicy::Default, pages: None, verify: false, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InputEcho {
    pub name: Option<String>,
    pub pd: String,
    pub crossings: usize,
    pub components: usize,
    pub n_plus: usize,
    pub n_minus: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaGroup {
    pub delta: i64,
    pub group: AbelianGroupDescriptor,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub d_squared_zero: bool,
    /// GF(2) homology of `d_1` against the even Khovanov state-sum oracle.
    pub f2_oracle_agrees: bool,
    /// Graded Euler characteristic against the Kauffman-bracket oracle.
    pub jones_oracle_agrees: bool,
    pub e2_equals_khovanov: Option<bool>,
    pub convergence_ranks_match: Option<bool>,
    /// `δ` values where `E_∞` and the total homology differ by an extension.
    pub extension_deltas: Vec<i64>,
    pub identities: Option<IdentityReport>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.d_squared_zero
            && self.f2_oracle_agrees
            && self.jones_oracle_agrees
            && self.e2_equals_khovanov != Some(false)
            && self.convergence_ranks_match != Some(false)
            && self.identities.as_ref().is_none_or(|r| r.passed())
    }
}

/// Everything computed for one diagram. Apart from `timing_ms` the document
/// depends only on the input and the options.
#[derive(Clone, Debug, Serialize)]
pub struct ResultDocument {
    pub input: InputEcho,
    pub flavor: Flavor,
    pub orientation: String,
    pub seed: u64,
    pub dimension: usize,
    pub odd_khovanov: BigradedGroups,
    pub total_homology: Vec<DeltaGroup>,
    pub spectral_sequence: Option<SpectralSequence>,
    pub convergence: Option<ConvergenceReport>,
    /// `Σ (-1)^h rank Kh^{h,q} q^q`.
    pub jones: LaurentPoly,
    pub verification: Verification,
    pub timing_ms: BTreeMap<String, u128>,
}

fn policy_name(p: OrientationPolicy) -> String {
    match p {
        OrientationPolicy::Default => "default".into(),
        OrientationPolicy::Random(s) => format!("random({s})"),
    }
}

/// Runs the full pipeline on one diagram.
pub fn compute(name: Option<&str>, d: &LinkDiagram, opts: &ComputeOptions) -> Result<ResultDocument> {
    let mut timing = BTreeMap::new();
    let mut clock = Instant::now();
    let mut lap = |key: &str, timing: &mut BTreeMap<String, u128>| {
        timing.insert(key.to_string(), clock.elapsed().as_millis());
        clock = Instant::now();
    };

    let dc = build_diagram_complex(d, opts.policy, opts.flavor)?;
    lap("complex", &mut timing);
    let kh = odd_khovanov_homology(&dc)?;
    lap("odd_khovanov", &mut timing);
    let total = total_homology(&dc)?;
    lap("total_homology", &mut timing);
    let ss = match opts.pages {
        Some(r) => Some(spectral_pages(&dc, r.max(2))?),
        None => None,
    };
    lap("spectral_sequence", &mut timing);

    let jones = euler_characteristic(&kh);
    let jones_ok = jones == jones_unnormalized(d);
    let f2_ok = odd_khovanov_f2(&dc) == even_khovanov_f2(d);
    lap("oracles", &mut timing);
    let conv = ss.as_ref().map(|s| convergence(&total, s));
    let identities = if opts.verify && d.n_crossings() > 0 {
        Some(check_identities(&dc.config, &dc.eps, opts.seed)?)
    } else {
        None
    };
    lap("identities", &mut timing);

    let verification = Verification {
        d_squared_zero: true,
        f2_oracle_agrees: f2_ok,
        jones_oracle_agrees: jones_ok,
        e2_equals_khovanov: ss.as_ref().map(|s| s.pages.first().is_none_or(|p| p.groups == kh)),
        convergence_ranks_match: conv.as_ref().map(|c| c.ranks_match()),
        extension_deltas: conv.as_ref().map(|c| c.extension_data()).unwrap_or_default(),
        identities,
    };
    Ok(ResultDocument {
        input: InputEcho {
            name: name.map(str::to_string),
            pd: d.to_pd_string(),
            crossings: d.n_crossings(),
            components: d.components(),
            n_plus: d.n_plus(),
            n_minus: d.n_minus(),
        },
        flavor: opts.flavor,
        orientation: policy_name(opts.policy),
        seed: opts.seed,
        dimension: dc.dim(),
        odd_khovanov: kh,
        total_homology: total.into_iter().map(|(delta, group)| DeltaGroup { delta, group }).collect(),
        spectral_sequence: ss,
        convergence: conv,
        jones,
        verification,
        timing_ms: timing,
    })
}

/// Human-readable tables for a document.
pub fn render_text(doc: &ResultDocument) -> String {
    let mut s = String::new();
    let name = doc.input.name.as_deref().unwrap_or("(pd input)");
    let _ = writeln!(s, "{name}: {} crossings, {} components", doc.input.crossings, doc.input.components);
    let _ = writeln!(s, "PD: {}", doc.input.pd);
    let _ = writeln!(s, "flavor {:?}, orientation {}, rank of the chain group {}", doc.flavor, doc.orientation, doc.dimension);
    let _ = writeln!(s, "\nOdd Khovanov homology:\n{}", doc.odd_khovanov);
    let _ = writeln!(s, "Total homology H(C, d):");
    for g in &doc.total_homology {
        let _ = writeln!(s, "  δ = {:>3}: {}", g.delta, g.group);
    }
    if let Some(ss) = &doc.spectral_sequence {
        for p in &ss.pages {
            let _ = writeln!(s, "\nE_{}:\n{}", p.r, p.groups);
        }
        let _ = writeln!(s, "\nE_∞ (= E_{}):\n{}", ss.infinity_page, ss.infinity);
        let _ = writeln!(s, "collapses at E_{}", ss.collapse_page);
    }
    if let Some(c) = &doc.convergence {
        let ext = c.extension_data();
        let _ = writeln!(
            s,
            "convergence: ranks {}{}",
            if c.ranks_match() { "match" } else { "DIFFER" },
            if ext.is_empty() { String::new() } else { format!(", extension problems at δ = {ext:?}") }
        );
    }
    let _ = writeln!(s, "\nJones (graded Euler characteristic): {}", doc.jones);
    let v = &doc.verification;
    let mark = |b: bool| if b { "ok" } else { "FAIL" };
    let _ = writeln!(s, "\nchecks:");
    let _ = writeln!(s, "  d ∘ d = 0                  {}", mark(v.d_squared_zero));
    let _ = writeln!(s, "  GF(2) homology vs oracle   {}", mark(v.f2_oracle_agrees));
    let _ = writeln!(s, "  Euler char. vs Jones       {}", mark(v.jones_oracle_agrees));
    if let Some(b) = v.e2_equals_khovanov {
        let _ = writeln!(s, "  E_2 = odd Khovanov         {}", mark(b));
    }
    if let Some(r) = &v.identities {
        let _ = write!(s, "{r}");
    }
    s
}

/// Summary of identity checks over random diagrams.
#[derive(Clone, Debug, Serialize)]
pub struct RandomVerification {
    pub seed: u64,
    pub diagrams: Vec<String>,
    pub report: IdentityReport,
}

/// Identity checks on `count` seeded random diagrams with at most
/// `max_crossings` crossings, each with a random arc orientation. The X route
/// `Ĉ(r(m(C)))` is checked for `d ∘ d = 0` as well.
pub fn verify_random(count: usize, max_crossings: usize, seed: u64) -> Result<RandomVerification> {
    if max_crossings == 0 {
        return Err(Error::InvalidDiagram("random diagrams need at least one crossing".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = IdentityReport::default();
    let mut diagrams = Vec::with_capacity(count);
    for _ in 0..count {
        let n = rng.gen_range(1..=max_crossings);
        let d = random_diagram(&mut rng, n)?;
        let policy = OrientationPolicy::Random(rng.gen());
        let c = zero_resolution(&d, policy);
        let eps = solve(&c, Flavor::Y)?;
        report.merge(check_identities(&c, &eps, rng.gen())?);
        let x = build_diagram_complex(&d, policy, Flavor::X)?;
        let zero = x.d.mul(&x.d)?.is_zero();
        report.merge(IdentityReport {
            checks: vec![CheckOutcome {
                name: "x_route_d_squared",
                passed: zero,
                cases: 1,
                witness: (!zero).then(|| d.to_pd_string()),
            }],
        });
        diagrams.push(d.to_pd_string());
    }
    Ok(RandomVerification { seed, diagrams, report })
}
