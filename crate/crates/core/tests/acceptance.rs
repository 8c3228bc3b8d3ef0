//! Acceptance suite: one PASS/FAIL line per criterion. All comparisons are
//! exact (integer groups, ranks and polynomial coefficients); there is no
//! floating-point tolerance anywhere.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use oddsz::complex::{build_diagram_complex, diagram_complex_on, homotopy, DiagramComplex};
use oddsz::edgesign::{solve, Flavor};
use oddsz::homology::{
    convergence, odd_khovanov_f2, odd_khovanov_homology, spectral_pages, total_homology, SpectralSequence,
};
use oddsz::interface::catalog;
use oddsz::oracles::{check_identities, euler_characteristic, even_khovanov_f2, jones_unnormalized, random_diagram};
use oddsz::planar::{zero_resolution, LinkDiagram, OrientationPolicy};
use oddsz::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;
/// Random diagrams for criterion 1, at most this many crossings.
const RANDOM_DIAGRAMS: usize = 200;
const RANDOM_MAX_CROSSINGS: usize = 7;
/// Arc flips for criterion 5.
const FLIP_DIAGRAMS: usize = 50;
const FLIP_MAX_CROSSINGS: usize = 6;

struct Line {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn catalog_diagrams() -> Vec<(String, LinkDiagram)> {
    catalog().iter().map(|e| (e.name.clone(), e.diagram())).collect()
}

fn complex(d: &LinkDiagram, policy: OrientationPolicy, flavor: Flavor) -> Result<DiagramComplex> {
    build_diagram_complex(d, policy, flavor)
}

fn pages(dc: &DiagramComplex) -> Result<SpectralSequence> {
    spectral_pages(dc, dc.diagram.n_crossings() + 1)
}

fn criterion_1() -> Result<Line> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut diagrams: Vec<(String, LinkDiagram)> =
        catalog_diagrams().into_iter().filter(|(_, d)| d.n_crossings() <= 8).collect();
    for k in 0..RANDOM_DIAGRAMS {
        let n = rng.gen_range(1..=RANDOM_MAX_CROSSINGS);
        diagrams.push((format!("random #{k}"), random_diagram(&mut rng, n)?));
    }
    let mut checked = 0;
    let mut bad = Vec::new();
    for (name, d) in &diagrams {
        for policy in [OrientationPolicy::Default, OrientationPolicy::Random(rng.gen())] {
            for flavor in [Flavor::Y, Flavor::X] {
                let dc = complex(d, policy, flavor)?;
                checked += 1;
                if !dc.d.mul(&dc.d)?.is_zero() {
                    bad.push(format!("{name} {flavor:?} {policy:?}"));
                }
            }
        }
    }
    Ok(Line {
        id: 1,
        title: "d∘d = 0 (catalog ≤ 8, 200 random ≤ 7, both policies, Y and r(m(C)) routes)",
        passed: bad.is_empty(),
        detail: format!("{checked} complexes, {} nonzero {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()),
    })
}

fn criterion_2_3_4_9() -> Result<[Line; 4]> {
    let (mut e2_bad, mut f2_bad, mut jones_bad, mut conv_bad) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut extensions = Vec::new();
    let all = catalog_diagrams();
    for (name, d) in &all {
        let dc = complex(d, OrientationPolicy::Default, Flavor::Y)?;
        let kh = odd_khovanov_homology(&dc)?;
        let ss = pages(&dc)?;
        if ss.pages[0].groups != kh {
            e2_bad.push(name.clone());
        }
        if odd_khovanov_f2(&dc) != even_khovanov_f2(d) {
            f2_bad.push(name.clone());
        }
        if euler_characteristic(&kh) != jones_unnormalized(d) {
            jones_bad.push(name.clone());
        }
        let conv = convergence(&total_homology(&dc)?, &ss);
        if !conv.ranks_match() {
            conv_bad.push(name.clone());
        }
        if !conv.extension_data().is_empty() {
            extensions.push(format!("{name} at δ {:?}", conv.extension_data()));
        }
    }
    let n = all.len();
    let line = |id, title, bad: Vec<String>| Line {
        id,
        title,
        passed: bad.is_empty(),
        detail: format!("{} of {n} catalog diagrams agree {:?}", n - bad.len(), bad),
    };
    let mut conv = line(9, "rank H_δ(Ĉ) = Σ_h rank E_∞ per δ; torsion extensions reported", conv_bad);
    conv.detail += &format!("; torsion differs only by extension at: {}", if extensions.is_empty() { "none".into() } else { extensions.join(", ") });
    Ok([
        line(2, "E_2 ≅ H(C, d_1) entrywise (rank and torsion)", e2_bad),
        line(3, "GF(2) homology of d_1 = even Khovanov GF(2) oracle", f2_bad),
        line(4, "graded Euler characteristic = Kauffman-bracket Jones", jones_bad),
        conv,
    ])
}

fn criterion_5() -> Result<Line> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut bad = Vec::new();
    for k in 0..FLIP_DIAGRAMS {
        let n = rng.gen_range(1..=FLIP_MAX_CROSSINGS);
        let d = random_diagram(&mut rng, n)?;
        let i = rng.gen_range(0..n);
        let c = complex(&d, OrientationPolicy::Default, Flavor::Y)?;
        let flipped_config = c.config.reverse_arc(i);
        let eta = c.eps.kappa_transform(&c.config, i)?;
        let f = diagram_complex_on(&d, flipped_config, eta)?;
        let h = homotopy(&c.config, &c.eps, i, &c.basis)?;
        let identity = c.d.sub(&f.d)?.sub(&c.d.mul(&h)?.sub(&h.mul(&c.d)?)?)?;
        let (pc, pf) = (pages(&c)?, pages(&f)?);
        let same_pages = pc.pages.iter().zip(&pf.pages).all(|(a, b)| a.groups == b.groups) && pc.infinity == pf.infinity;
        if !identity.is_zero() || total_homology(&c)? != total_homology(&f)? || !same_pages {
            bad.push(format!("#{k} arc {i} {}", d.to_pd_string()));
        }
    }
    Ok(Line {
        id: 5,
        title: "arc flip + κ: homotopy identity, equal total homology and pages",
        passed: bad.is_empty(),
        detail: format!("{} of {FLIP_DIAGRAMS} seeded diagrams {:?}", FLIP_DIAGRAMS - bad.len(), bad),
    })
}

fn criterion_6() -> Result<Line> {
    let mut bad = Vec::new();
    let mut count = 0;
    for (name, d) in catalog_diagrams().into_iter().filter(|(_, d)| d.components() == 1 && d.n_crossings() <= 7) {
        count += 1;
        let y = complex(&d, OrientationPolicy::Default, Flavor::Y)?;
        let x = complex(&d, OrientationPolicy::Default, Flavor::X)?;
        let (py, px) = (pages(&y)?, pages(&x)?);
        let same_f2 = py.pages.iter().zip(&px.pages).all(|(a, b)| a.f2_dims == b.f2_dims) && py.f2_infinity == px.f2_infinity;
        if total_homology(&y)? != total_homology(&x)? || !same_f2 {
            bad.push(name);
        }
    }
    Ok(Line {
        id: 6,
        title: "H_δ(Ĉ') ≅ H_δ(Ĉ) and GF(2) pages agree (knots ≤ 7)",
        passed: bad.is_empty(),
        detail: format!("{} of {count} knots agree {:?}", count - bad.len(), bad),
    })
}

fn criterion_7() -> Result<Line> {
    let mut bad = Vec::new();
    let (mut cases, mut count) = (0, 0);
    for (name, d) in catalog_diagrams().into_iter().filter(|(_, d)| (1..=5).contains(&d.n_crossings())) {
        count += 1;
        let c = zero_resolution(&d, OrientationPolicy::Default);
        let eps = solve(&c, Flavor::Y)?;
        let report = check_identities(&c, &eps, SEED)?;
        let theta = report.get("theta_independence").expect("theta check");
        cases += theta.cases;
        if !theta.passed {
            bad.push(format!("{name}: {}", theta.witness.clone().unwrap_or_default()));
        }
    }
    Ok(Line {
        id: 7,
        title: "θ-independence over all allowed paths of all faces (catalog ≤ 5)",
        passed: bad.is_empty(),
        detail: format!("{count} diagrams, {cases} path comparisons {:?}", bad),
    })
}

fn criterion_8() -> Result<Line> {
    let mut bad = Vec::new();
    let diagrams = common::unknot_diagrams();
    for (name, d) in &diagrams {
        let dc = complex(d, OrientationPolicy::Default, Flavor::Y)?;
        let total = total_homology(&dc)?;
        let unknot = total.keys().copied().eq([-1, 1]) && total.values().all(|g| g.rank == 1 && g.torsion.is_empty());
        if !unknot || pages(&dc)?.collapse_page != 2 {
            bad.push(*name);
        }
    }
    Ok(Line {
        id: 8,
        title: "unknot diagrams: H = Z at δ = ±1, collapse at E_2",
        passed: bad.is_empty(),
        detail: format!("{} of {} diagrams {:?}", diagrams.len() - bad.len(), diagrams.len(), bad),
    })
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut run = |f: &dyn Fn() -> Result<Vec<Line>>| match f() {
        Ok(ls) => lines.extend(ls),
        Err(e) => lines.push(Line { id: 0, title: "pipeline error", passed: false, detail: e.to_string() }),
    };
    run(&|| criterion_1().map(|l| vec![l]));
    run(&|| criterion_2_3_4_9().map(Vec::from));
    run(&|| criterion_5().map(|l| vec![l]));
    run(&|| criterion_6().map(|l| vec![l]));
    run(&|| criterion_7().map(|l| vec![l]));
    run(&|| criterion_8().map(|l| vec![l]));
    lines.sort_by_key(|l| l.id);
    println!("acceptance criteria (exact comparisons, seed {SEED})");
    for l in &lines {
        println!("[{}] {}. {}: {}", if l.passed { "PASS" } else { "FAIL" }, l.id, l.title, l.detail);
    }
    let elapsed = start.elapsed();
    let in_time = elapsed.as_secs() < 600;
    println!("[{}] runtime {:.1}s (budget 600s)", if in_time { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
    if lines.iter().all(|l| l.passed) && in_time {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
