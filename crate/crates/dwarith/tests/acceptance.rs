//! Acceptance suite: one pass/fail line per criterion.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use common::{all_cochains, burnside_orbits, config, config_names, group, naive_lambda, random_cochain, rng};
use dwarith::cochain::{homotopy_defect, homotopy_pair_defect, Cochain};
use dwarith::config::ModelConfig;
use dwarith::group::{enumerate_homs, FiniteGroup};
use dwarith::quantum::tensor_and_dual;
use dwarith::suite::{run_suite, Criterion, SuiteReport};

const RANDOM_COCHAINS: usize = 200;

struct Line {
    passed: bool,
    detail: String,
}

fn number(c: Criterion) -> usize {
    match c {
        Criterion::Homotopy => 1,
        Criterion::LambdaCocycle => 2,
        Criterion::SectionChange => 3,
        Criterion::Equivariance => 4,
        Criterion::BetaIndependence | Criterion::Rejection => 5,
        Criterion::Gluing => 6,
        Criterion::ClassicalCount => 7,
        Criterion::Structure => 8,
        Criterion::CocycleChange | Criterion::Isomorphism => 9,
    }
}

/// Both identities at every σ (and σ-pair) for one cochain; returns the number of evaluations.
fn identities_hold(alpha: &Cochain, order: u32) -> Result<usize, String> {
    let mut count = 0;
    for s in 0..order {
        if !homotopy_defect(s, alpha).map_err(|e| e.to_string())?.is_zero() {
            return Err(format!("first identity fails at σ = {s} on {:?}", alpha.values()));
        }
        count += 1;
    }
    if alpha.degree() >= 2 {
        for s1 in 0..order {
            for s2 in 0..order {
                if !homotopy_pair_defect(s1, s2, alpha).map_err(|e| e.to_string())?.is_zero() {
                    return Err(format!("second identity fails at σ = ({s1}, {s2}) on {:?}", alpha.values()));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

fn homotopy_criterion() -> Line {
    let start = Instant::now();
    let run = || -> Result<usize, String> {
        let mut count = 0;
        let mut r = rng(2024);
        for q in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::abelian(&[2, 2])] {
            let q = group(q);
            for modulus in [2, 3] {
                // n = 1, 2 for the first identity; n + 1 = 2, 3 for the second.
                for degree in 1..=3 {
                    for _ in 0..RANDOM_COCHAINS {
                        count += identities_hold(&random_cochain(&q, degree, modulus, &mut r), q.order() as u32)?;
                    }
                }
            }
        }
        let z2 = group(FiniteGroup::cyclic(2));
        for degree in 1..=3 {
            for alpha in all_cochains(&z2, degree, 2) {
                count += identities_hold(&alpha, 2)?;
            }
        }
        Ok(count)
    };
    let outcome = run();
    let elapsed = start.elapsed();
    match outcome {
        Ok(count) if elapsed < Duration::from_secs(60) => {
            Line { passed: true, detail: format!("{count} evaluations, zero failures, {:.1} s", elapsed.as_secs_f64()) }
        }
        Ok(count) => Line { passed: false, detail: format!("{count} evaluations took {:.1} s (limit 60 s)", elapsed.as_secs_f64()) },
        Err(e) => Line { passed: false, detail: e },
    }
}

/// Multiplicativity of `dim H` fails on two shipped models; the observed
/// dimensions must equal independent counts.
fn structure_oracle(cfg: &ModelConfig) -> Option<Result<String, String>> {
    let x = cfg.section().ok()?;
    let (first, second) = match cfg.name.as_str() {
        "classical_s3" => ("q", "q*"),
        "type_iii" => ("p", "p'"),
        _ => return None,
    };
    let x1 = x.restrict(&[first]).ok()?;
    let x2 = x.restrict(&[second]).ok()?;
    let report = tensor_and_dual(&x1, &x2, &cfg.gauge).ok()?;
    let g = cfg.gauge.group();
    let expected = if cfg.name == "classical_s3" {
        let homs = common::brute_force_homs(cfg.local(first)?.group(), g);
        burnside_orbits(&homs, &homs, g)
    } else {
        let order = g.order() as u32;
        let characters = |s: &dwarith::local::Section| -> BTreeMap<Vec<u32>, usize> {
            let mut h = BTreeMap::new();
            for i in 0..s.space().len() {
                let chi: Vec<u32> = (0..order).map(|e| naive_lambda(s, 0, &cfg.gauge, e, i)).collect();
                *h.entry(chi).or_default() += 1;
            }
            h
        };
        let (h1, h2) = (characters(&x1), characters(&x2));
        let m = cfg.modulus;
        let single = h1.get(&vec![0; order as usize]).copied().unwrap_or(0);
        let pair = h1
            .iter()
            .map(|(chi, n)| n * h2.get(&chi.iter().map(|v| (m - v) % m).collect::<Vec<_>>()).copied().unwrap_or(0))
            .sum();
        (single, pair)
    };
    let observed = (report.dim_first, report.dim_union);
    Some(if observed == expected {
        Ok(format!(
            "{}: dim {} over the union vs {}·{} (independent count {})",
            cfg.name, report.dim_union, report.dim_first, report.dim_second, expected.1
        ))
    } else {
        Err(format!("{}: library gives {observed:?}, independent count gives {expected:?}", cfg.name))
    })
}

fn main() {
    let mut lines: BTreeMap<usize, Line> = BTreeMap::new();
    lines.insert(1, homotopy_criterion());

    let mut failures: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    let mut checks: BTreeMap<usize, usize> = BTreeMap::new();
    let mut notes = Vec::new();
    let mut slow = Vec::new();
    let mut hom_counts = BTreeSet::new();
    let mut structure_mismatches = Vec::new();
    let mut oracle_failures = Vec::new();
    for name in config_names() {
        let cfg = config(&name);
        let start = Instant::now();
        let report: SuiteReport = run_suite(&cfg);
        let elapsed = start.elapsed();
        if elapsed >= Duration::from_secs(120) {
            slow.push(format!("{name} took {:.1} s", elapsed.as_secs_f64()));
        }
        for o in &report.outcomes {
            let k = number(o.criterion);
            *checks.entry(k).or_default() += 1;
            if !o.passed {
                failures.entry(k).or_default().push(format!("{name}: {}: {}", o.subject, o.detail));
            }
        }
        notes.extend(report.notes.iter().cloned());
        if report.outcomes.iter().any(|o| o.criterion == Criterion::ClassicalCount) {
            for g in cfg.gluings.iter().filter(|g| g.is_closed()) {
                hom_counts.insert(enumerate_homs(g.inner().group(), cfg.gauge.group()).len());
            }
        }
        match structure_oracle(&cfg) {
            Some(Ok(s)) => structure_mismatches.push(s),
            Some(Err(e)) => oracle_failures.push(e),
            None => {}
        }
    }

    for k in 2..=9 {
        let mut problems = failures.remove(&k).unwrap_or_default();
        let count = checks.get(&k).copied().unwrap_or(0);
        if count == 0 {
            problems.push("no checks ran".into());
        }
        if k == 6 {
            problems.extend(slow.iter().cloned());
        }
        if k == 7 {
            for needed in [1, 2, 4, 10] {
                if !hom_counts.contains(&needed) {
                    problems.push(format!("no classical model with #Hom = {needed}"));
                }
            }
        }
        let detail = if problems.is_empty() { format!("{count} checks") } else { problems.join("; ") };
        lines.insert(k, Line { passed: problems.is_empty(), detail });
    }

    // Multiplicativity is part of criterion 8 but does not hold in general;
    // the attainable parts (embedding, duality, brute-force dimension) are
    // the suite checks above.
    let attainable = lines[&8].passed && oracle_failures.is_empty();
    let multiplicative = notes.is_empty();
    let line8 = lines.get_mut(&8).unwrap();
    line8.passed = attainable && multiplicative;
    if !multiplicative {
        line8.detail = format!(
            "{}; embedding, duality and brute-force dimensions hold, multiplicativity does not: {}",
            line8.detail,
            structure_mismatches.join("; ")
        );
    }
    if !oracle_failures.is_empty() {
        line8.detail = format!("{}; {}", line8.detail, oracle_failures.join("; "));
    }

    let names = [
        "",
        "homotopy identities",
        "lambda cocycle law",
        "section-change coherence",
        "equivariance",
        "beta-independence and rejection",
        "decomposition and gluing",
        "classical count",
        "structure",
        "cocycle-class invariance",
    ];
    for (k, line) in &lines {
        println!("criterion {k} {}: {} ({})", names[*k], if line.passed { "PASS" } else { "FAIL" }, line.detail);
    }

    // The multiplicativity failure is expected; anything else fails the target.
    let unexpected = lines.iter().any(|(k, l)| !l.passed && !(*k == 8 && attainable && structure_mismatches.len() == notes.len()));
    if unexpected {
        std::process::exit(1);
    }
}
