//! Exhaustive invariant checks over a configured model.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cochain::{homotopy_defect, homotopy_pair_defect, Cochain};
use crate::cohomology::{is_coboundary, SolveStrategy};
use crate::config::ModelConfig;
use crate::error::{Error, Result};
use crate::global::{check_closed_consistency, check_decomposition, GlobalModel, GluingModel};
use crate::group::{enumerate_homs, FiniteGroup};
use crate::local::{delta_table, Gauge, LambdaS, Section};
use crate::quantum::{
    closed_partition, cyclotomic_rank, equivariance_failure, glue, partition_global, partition_tube, tensor_and_dual,
    theta_space, transport_cocycle, transport_isomorphism, transport_section, Orientation,
};
use crate::CyclotomicValue;

/// The property families checked by the suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Criterion {
    Homotopy,
    LambdaCocycle,
    SectionChange,
    Equivariance,
    BetaIndependence,
    Gluing,
    ClassicalCount,
    Structure,
    CocycleChange,
    Isomorphism,
    Rejection,
}

impl Criterion {
    pub fn name(self) -> &'static str {
        match self {
            Criterion::Homotopy => "homotopy",
            Criterion::LambdaCocycle => "lambda-cocycle",
            Criterion::SectionChange => "section-change",
            Criterion::Equivariance => "equivariance",
            Criterion::BetaIndependence => "beta-independence",
            Criterion::Gluing => "gluing",
            Criterion::ClassicalCount => "classical-count",
            Criterion::Structure => "structure",
            Criterion::CocycleChange => "cocycle-change",
            Criterion::Isomorphism => "isomorphism",
            Criterion::Rejection => "rejection",
        }
    }
}

/// One check on one subject.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub criterion: Criterion,
    pub subject: String,
    pub passed: bool,
    pub detail: String,
}

/// All outcomes for one model, plus informational notes that do not affect
/// the verdict.
#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub model: String,
    pub outcomes: Vec<CheckOutcome>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    fn record(&mut self, criterion: Criterion, subject: impl Into<String>, check: impl FnOnce() -> Verdict) {
        let (passed, detail) = match check() {
            Ok(detail) => (true, detail),
            Err(detail) => (false, detail),
        };
        self.outcomes.push(CheckOutcome { criterion, subject: subject.into(), passed, detail });
    }
}

/// `Ok(detail)` on success, `Err(reason)` on failure.
type Verdict = std::result::Result<String, String>;

fn explain(e: Error) -> String {
    format!("{}: {e}", e.code())
}

/// Every model object declared by a configuration.
pub struct Models {
    pub globals: Vec<GlobalModel>,
    pub gluings: Vec<GluingModel>,
    pub section: Section,
}

/// Builds the global models with at least one attachment (an empty global
/// datum only serves as the base of a closed gluing), the gluing models and
/// the configured section.
pub fn build_models(cfg: &ModelConfig) -> Result<Models> {
    let globals = cfg
        .globals
        .iter()
        .filter(|g| !g.attachments().is_empty())
        .map(|g| GlobalModel::new(g.clone(), cfg.gauge.clone()))
        .collect::<Result<_>>()?;
    let gluings = cfg.gluings.iter().map(|g| GluingModel::new(g.clone(), cfg.gauge.clone())).collect::<Result<_>>()?;
    let section = cfg.section()?;
    Ok(Models { globals, gluings, section })
}

/// Builds the models and runs the reciprocity checks; the first error is returned.
pub fn validate_models(cfg: &ModelConfig) -> Result<Models> {
    let models = build_models(cfg)?;
    for m in &models.globals {
        for &seed in &cfg.checks.seeds {
            m.check_beta_independence(&models.section, seed)?;
        }
    }
    for group in &cfg.checks.closed_consistency {
        let picked: Vec<(&GluingModel, &Section)> = group
            .iter()
            .filter_map(|l| models.gluings.iter().find(|g| g.datum().label() == l))
            .map(|g| (g, &models.section))
            .collect();
        check_closed_consistency(&picked)?;
    }
    Ok(models)
}

/// Runs every check on a model.
pub fn run_suite(cfg: &ModelConfig) -> SuiteReport {
    let mut report = SuiteReport { model: cfg.name.clone(), ..Default::default() };
    if let Some(code) = &cfg.expect_error {
        let criterion = if code == "ReciprocityViolation" { Criterion::BetaIndependence } else { Criterion::Rejection };
        report.record(criterion, format!("expected {code}"), || match validate_models(cfg) {
            Ok(_) => Err(format!("model was accepted; expected {code}")),
            Err(e) if e.code() == code => Ok(format!("rejected: {e}")),
            Err(e) => Err(format!("rejected with {} instead of {code}: {e}", e.code())),
        });
        return report;
    }
    homotopy_checks(cfg, &mut report);
    let models = match validate_models(cfg) {
        Ok(m) => m,
        Err(e) => {
            let criterion = if matches!(e, Error::ReciprocityViolation(_)) { Criterion::BetaIndependence } else { Criterion::Rejection };
            report.record(criterion, "model construction", || Err(explain(e)));
            return report;
        }
    };
    let mut sections = vec![models.section.clone()];
    for &seed in &cfg.checks.seeds {
        match models.section.perturbed(seed) {
            Ok(x) => sections.push(x),
            Err(e) => report.record(Criterion::SectionChange, format!("perturb seed {seed}"), || Err(explain(e))),
        }
    }
    lambda_checks(cfg, &sections, &mut report);
    section_change_checks(cfg, &models, &sections, &mut report);
    equivariance_checks(cfg, &models, &sections, &mut report);
    beta_checks(cfg, &models, &mut report);
    gluing_checks(cfg, &models, &sections, &mut report);
    classical_checks(cfg, &models, &mut report);
    structure_checks(cfg, &models, &mut report);
    cocycle_change_checks(cfg, &models, &mut report);
    isomorphism_checks(cfg, &models, &mut report);
    report
}

fn random_cochain(group: &Arc<FiniteGroup>, degree: usize, modulus: u32, rng: &mut ChaCha8Rng) -> Cochain {
    let len = group.order().pow(degree as u32);
    let values = (0..len).map(|_| rng.gen_range(0..modulus as u64)).collect();
    Cochain::from_values(group.clone(), degree, modulus, values)
}

fn homotopy_checks(cfg: &ModelConfig, report: &mut SuiteReport) {
    let mut groups: Vec<Arc<FiniteGroup>> = vec![cfg.gauge.group().clone()];
    for d in &cfg.locals {
        if !groups.iter().any(|g| g.as_ref() == d.group().as_ref()) {
            groups.push(d.group().clone());
        }
    }
    for group in groups {
        let order = group.order();
        let samples = if order <= 4 { cfg.checks.samples } else { cfg.checks.samples.min(10) };
        report.record(Criterion::Homotopy, group.label().to_string(), || {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.transport_seed ^ order as u64);
            let mut count = 0;
            for degree in 1..=2usize {
                for _ in 0..samples {
                    let alpha = random_cochain(&group, degree, cfg.modulus, &mut rng);
                    for s in group.elements() {
                        let defect = homotopy_defect(s, &alpha).map_err(explain)?;
                        if !defect.is_zero() {
                            return Err(format!("first identity fails at σ = {s}, degree {degree}"));
                        }
                        count += 1;
                    }
                    let beta = random_cochain(&group, degree + 1, cfg.modulus, &mut rng);
                    let pairs: Vec<(u32, u32)> = if order <= 4 {
                        group.elements().flat_map(|a| group.elements().map(move |b| (a, b))).collect()
                    } else {
                        (0..8).map(|_| (rng.gen_range(0..order as u32), rng.gen_range(0..order as u32))).collect()
                    };
                    for (s1, s2) in pairs {
                        let defect = homotopy_pair_defect(s1, s2, &beta).map_err(explain)?;
                        if !defect.is_zero() {
                            return Err(format!("second identity fails at σ = ({s1}, {s2}), degree {}", degree + 1));
                        }
                        count += 1;
                    }
                }
            }
            Ok(format!("{count} evaluations"))
        });
    }
}

fn lambda_checks(cfg: &ModelConfig, sections: &[Section], report: &mut SuiteReport) {
    let gauge = &cfg.gauge;
    let group = gauge.group();
    let order = group.order();
    let m = gauge.modulus();
    for x in sections {
        for part in x.parts() {
            report.record(Criterion::LambdaCocycle, format!("{} @ {}", part.datum().name(), x.tag()), || {
                let table = part.lambda_table(gauge);
                let space = part.space();
                for i in 0..space.len() {
                    for g in group.elements() {
                        let moved = space.conj(i, g);
                        for h in group.elements() {
                            let lhs = table[i * order + group.mul(g, h) as usize];
                            let rhs = (table[i * order + g as usize] + table[moved * order + h as usize]) % m;
                            if lhs != rhs {
                                return Err(format!("λ(gh, ρ) ≠ λ(g, ρ) + λ(h, ρ.g) at ρ #{i}, g = {g}, h = {h}"));
                            }
                        }
                    }
                }
                Ok(format!("{} triples", space.len() * order * order))
            });
        }
    }
}

fn section_change_checks(cfg: &ModelConfig, models: &Models, sections: &[Section], report: &mut SuiteReport) {
    let gauge = &cfg.gauge;
    let group = gauge.group();
    let order = group.order();
    let m = gauge.modulus();
    let x = &sections[0];
    for y in &sections[1..] {
        for (p, q) in x.parts().iter().zip(y.parts()) {
            let name = p.datum().name();
            report.record(Criterion::SectionChange, format!("λ {name}: {} → {}", x.tag(), y.tag()), || {
                let delta = delta_table(&x.restrict(&[name]).map_err(explain)?, &y.restrict(&[name]).map_err(explain)?).map_err(explain)?;
                let (lx, ly) = (p.lambda_table(gauge), q.lambda_table(gauge));
                for i in 0..p.space().len() {
                    for g in group.elements() {
                        let k = i * order + g as usize;
                        let moved = p.space().conj(i, g);
                        if (ly[k] + m - lx[k]) % m != (delta[moved] + m - delta[i]) % m {
                            return Err(format!("λ' − λ ≠ dδ at ρ #{i}, g = {g}"));
                        }
                    }
                }
                Ok("λ' − λ = δ(ρ.g) − δ(ρ)".into())
            });
        }
        for model in &models.globals {
            let label = model.datum().label();
            report.record(Criterion::SectionChange, format!("CS {label}: {} → {}", x.tag(), y.tag()), || {
                let names = model.datum().names();
                let (xs, ys) = (x.restrict(&names).map_err(explain)?, y.restrict(&names).map_err(explain)?);
                let delta = delta_table(&xs, &ys).map_err(explain)?;
                let res = model.restriction_table(&xs).map_err(explain)?;
                let cx = model.cs_table(&xs, SolveStrategy::Canonical).map_err(explain)?;
                let cy = model.cs_table(&ys, SolveStrategy::Canonical).map_err(explain)?;
                for rho in 0..cx.len() {
                    if (cy[rho] + m - cx[rho]) % m != delta[res[rho]] {
                        return Err(format!("CS' − CS ≠ δ∘res at ρ #{rho}"));
                    }
                }
                let zx = partition_global(model, &xs).map_err(explain)?;
                let zy = partition_global(model, &ys).map_err(explain)?;
                if transport_section(&zx, &xs, &ys).map_err(explain)? != zy {
                    return Err("Z does not transport by ζ^δ".into());
                }
                if transport_section(&zy, &ys, &xs).map_err(explain)? != zx {
                    return Err("inverse transport does not return Z".into());
                }
                Ok(format!("{} representations", cx.len()))
            });
        }
    }
    if sections.len() >= 3 {
        let (a, b, c) = (&sections[0], &sections[1], &sections[2]);
        for model in &models.globals {
            report.record(Criterion::SectionChange, format!("transport composition {}", model.datum().label()), || {
                let names = model.datum().names();
                let (xa, xb, xc) = (
                    a.restrict(&names).map_err(explain)?,
                    b.restrict(&names).map_err(explain)?,
                    c.restrict(&names).map_err(explain)?,
                );
                let z = partition_global(model, &xa).map_err(explain)?;
                let two_step = transport_section(&transport_section(&z, &xa, &xb).map_err(explain)?, &xb, &xc).map_err(explain)?;
                let one_step = transport_section(&z, &xa, &xc).map_err(explain)?;
                if two_step != one_step {
                    return Err("transports do not compose".into());
                }
                Ok("Θ^{b,c}∘Θ^{a,b} = Θ^{a,c}".into())
            });
        }
    }
}

fn equivariance_checks(cfg: &ModelConfig, models: &Models, sections: &[Section], report: &mut SuiteReport) {
    let gauge = &cfg.gauge;
    let group = gauge.group();
    let m = gauge.modulus();
    for x in sections {
        for model in &models.globals {
            let label = model.datum().label();
            report.record(Criterion::Equivariance, format!("{label} @ {}", x.tag()), || {
                let xs = x.restrict(&model.datum().names()).map_err(explain)?;
                let lambda = LambdaS::new(&xs, gauge);
                let res = model.restriction_table(&xs).map_err(explain)?;
                let cs = model.cs_table(&xs, SolveStrategy::Canonical).map_err(explain)?;
                for rho in 0..cs.len() {
                    for g in group.elements() {
                        let moved = model.homs().conj(rho, g);
                        if cs[moved] != (cs[rho] + lambda.value(g, res[rho])) % m {
                            return Err(format!("CS(ρ.g) ≠ CS(ρ) + λ(g, res ρ) at ρ #{rho}, g = {g}"));
                        }
                    }
                }
                let z = partition_global(model, &xs).map_err(explain)?;
                if let Some((i, g)) = equivariance_failure(&z, &xs, gauge).map_err(explain)? {
                    return Err(format!("Z is not equivariant at ρ_S #{i}, g = {g}"));
                }
                Ok(format!("{} representations", cs.len()))
            });
        }
        for gm in &models.gluings {
            let tube = gm.tube();
            report.record(Criterion::Equivariance, format!("tube of {} @ {}", gm.datum().label(), x.tag()), || {
                let xs = x.restrict(&tube.names()).map_err(explain)?;
                let z = partition_tube(tube, &xs, Orientation::Normal).map_err(explain)?;
                if let Some((i, g)) = equivariance_failure(&z, &xs, gauge).map_err(explain)? {
                    return Err(format!("Z_V is not equivariant at #{i}, g = {g}"));
                }
                let zr = partition_tube(tube, &xs, Orientation::Reversed).map_err(explain)?;
                if let Some((i, g)) = equivariance_failure(&zr, &xs.reversed(), gauge).map_err(explain)? {
                    return Err(format!("Z_V* is not equivariant at #{i}, g = {g}"));
                }
                Ok("Z_V ∈ H and Z_V* ∈ H*".into())
            });
        }
    }
}

fn beta_checks(cfg: &ModelConfig, models: &Models, report: &mut SuiteReport) {
    let x = &models.section;
    for model in &models.globals {
        report.record(Criterion::BetaIndependence, model.datum().label().to_string(), || {
            for &seed in &cfg.checks.seeds {
                model.check_beta_independence(x, seed).map_err(explain)?;
            }
            Ok(format!("{} pivot orders agree", cfg.checks.seeds.len() + 1))
        });
    }
    for gm in &models.gluings {
        let tube = gm.tube();
        report.record(Criterion::BetaIndependence, format!("tube of {}", gm.datum().label()), || {
            let canonical = tube.cs_table(x, SolveStrategy::Canonical).map_err(explain)?;
            for &seed in &cfg.checks.seeds {
                if tube.cs_table(x, SolveStrategy::Shuffled(seed)).map_err(explain)? != canonical {
                    return Err(format!("tube CS depends on the pivot order (seed {seed})"));
                }
            }
            Ok(format!("{} pivot orders agree", cfg.checks.seeds.len() + 1))
        });
    }
}

fn gluing_checks(cfg: &ModelConfig, models: &Models, sections: &[Section], report: &mut SuiteReport) {
    let m = cfg.modulus;
    for gm in &models.gluings {
        for x in sections {
            report.record(Criterion::Gluing, format!("{} @ {}", gm.datum().label(), x.tag()), || {
                let rows = check_decomposition(gm, x).map_err(explain)?;
                if let Some(r) = rows.iter().find(|r| r.holds(m) == Some(false)) {
                    return Err(format!("decomposition fails at ρ₁ = {:?}: {:?} + {} ≠ {}", r.rho1, r.inner, r.tube, r.outer));
                }
                let glued = glue(gm, x).map_err(explain)?;
                if !glued.equal() {
                    return Err(format!("⟨Z_S, Z_V*⟩ = {:?} but Z_S₁ = {:?}", glued.glued.entries(), glued.direct.entries()));
                }
                Ok(format!("{} boundary values", rows.len()))
            });
        }
    }
    for group in &cfg.checks.closed_consistency {
        let picked: Vec<&GluingModel> =
            group.iter().filter_map(|l| models.gluings.iter().find(|g| g.datum().label() == l)).collect();
        report.record(Criterion::Gluing, format!("closed consistency {}", group.join(", ")), || {
            let pairs: Vec<(&GluingModel, &Section)> = picked.iter().map(|g| (*g, &models.section)).collect();
            let table = check_closed_consistency(&pairs).map_err(explain)?;
            Ok(format!("closed invariant {table:?}"))
        });
    }
}

fn classical_checks(cfg: &ModelConfig, models: &Models, report: &mut SuiteReport) {
    let trivial = match is_coboundary(cfg.gauge.cocycle()) {
        Ok(t) => t,
        Err(e) => {
            report.record(Criterion::ClassicalCount, "cocycle class", || Err(explain(e)));
            return;
        }
    };
    if !trivial {
        return;
    }
    for gm in models.gluings.iter().filter(|g| g.datum().is_closed()) {
        report.record(Criterion::ClassicalCount, gm.datum().label().to_string(), || {
            let count = enumerate_homs(gm.inner().datum().group(), cfg.gauge.group()).len();
            let order = cfg.gauge.group().order();
            let z = closed_partition(gm, &models.section).map_err(explain)?;
            let expected = CyclotomicValue::from_ratio(cfg.modulus, (count as i64).into(), (order as i64).into());
            if z.entries()[0] != expected {
                return Err(format!("Z = {} but #Hom/#G = {count}/{order}", z.entries()[0]));
            }
            Ok(format!("Z = {count}/{order}"))
        });
    }
}

/// `|F| − rank` of the equivariance system `θ(ρ.g) − ζ^{λ(g,ρ)} θ(ρ) = 0`.
pub fn equivariance_nullity(x: &Section, gauge: &Gauge) -> usize {
    let lambda = LambdaS::new(x, gauge);
    let space = lambda.space();
    let n = space.len();
    let m = gauge.modulus();
    let mut rows = Vec::new();
    let mut seen = BTreeSet::new();
    for i in 0..n {
        for g in gauge.group().elements() {
            let j = space.act(i, g);
            let k = lambda.value(g, i);
            if i == j && k == 0 || !seen.insert((i, j, k)) {
                continue;
            }
            let mut row = vec![CyclotomicValue::zero(m); n];
            row[j] = CyclotomicValue::one(m);
            row[i] = &row[i] - &CyclotomicValue::zeta_pow(m, k as i64);
            rows.push(row);
        }
    }
    n - cyclotomic_rank(&rows, m)
}

/// Largest index set on which the brute-force equivariance solve runs.
pub const BRUTE_FORCE_LIMIT: usize = 64;

fn structure_checks(cfg: &ModelConfig, models: &Models, report: &mut SuiteReport) {
    let gauge = &cfg.gauge;
    for model in &models.globals {
        let names = model.datum().names();
        let label = model.datum().label();
        let Ok(xs) = models.section.restrict(&names) else { continue };
        if xs.space().len() <= BRUTE_FORCE_LIMIT {
            report.record(Criterion::Structure, format!("dim H {label}"), || {
                let dim = theta_space(&xs, gauge).dimension;
                let brute = equivariance_nullity(&xs, gauge);
                if dim != brute {
                    return Err(format!("orbit count gives {dim}, linear solve gives {brute}"));
                }
                Ok(format!("dim {dim}"))
            });
        }
        if names.len() < 2 {
            continue;
        }
        let (first, rest) = names.split_at(1);
        let outcome = (|| {
            let x1 = models.section.restrict(first)?;
            let x2 = models.section.restrict(rest)?;
            tensor_and_dual(&x1, &x2, gauge)
        })();
        report.record(Criterion::Structure, format!("union {label}"), || {
            let r = outcome.clone().map_err(explain)?;
            if !r.products_equivariant || !r.products_independent() {
                return Err(format!("H_S₁ ⊗ H_S₂ does not embed in H_S₁⊔S₂: {r:?}"));
            }
            if !r.dual_dimension_matches() || !r.pairing_nondegenerate() {
                return Err(format!("H_S* is not dual to H_S: {r:?}"));
            }
            Ok(format!("dims {} · {} ≤ {}; dual {}", r.dim_first, r.dim_second, r.dim_union, r.dim_reversed))
        });
        if let Ok(r) = outcome {
            if !r.multiplicative() {
                report.notes.push(format!(
                    "{}: {label}: dim H over the union is {} while the product of dimensions is {} · {}",
                    cfg.name, r.dim_union, r.dim_first, r.dim_second
                ));
            }
        }
    }
}

fn cocycle_change_checks(cfg: &ModelConfig, models: &Models, report: &mut SuiteReport) {
    let b = &cfg.transport_b;
    let c_prime = cfg.shifted_cocycle();
    let gauge = &cfg.gauge;
    let x = &models.section;
    let m = cfg.modulus;
    report.record(Criterion::CocycleChange, "lambda and dimension", || {
        let gauge_prime = Gauge::new(c_prime.clone()).map_err(explain)?;
        let shifted = x.shifted_by(b);
        let fresh = Section::default_section(&cfg.locals, &gauge_prime).map_err(explain)?;
        let order = gauge.group().order();
        for ((p, q), r) in x.parts().iter().zip(shifted.parts()).zip(fresh.parts()) {
            let name = p.datum().name();
            let (lx, lb, lf) = (p.lambda_table(gauge), q.lambda_table(&gauge_prime), r.lambda_table(&gauge_prime));
            if lx != lb {
                return Err(format!("{name}: λ for (c, x) and (c + db, x + b∘ρ) differ"));
            }
            let delta = delta_table(&shifted.restrict(&[name]).map_err(explain)?, &fresh.restrict(&[name]).map_err(explain)?)
                .map_err(explain)?;
            for i in 0..p.space().len() {
                for g in gauge.group().elements() {
                    let k = i * order + g as usize;
                    let moved = p.space().conj(i, g);
                    if (lf[k] + m - lb[k]) % m != (delta[moved] + m - delta[i]) % m {
                        return Err(format!("{name}: fresh λ is not cohomologous at ρ #{i}, g = {g}"));
                    }
                }
            }
        }
        let (d, d_prime) = (theta_space(x, gauge).dimension, theta_space(&fresh, &gauge_prime).dimension);
        if d != d_prime {
            return Err(format!("dim H changes from {d} to {d_prime}"));
        }
        Ok(format!("dim {d}"))
    });
    for model in &models.globals {
        report.record(Criterion::CocycleChange, model.datum().label().to_string(), || {
            let names = model.datum().names();
            let xs = x.restrict(&names).map_err(explain)?;
            let z = partition_global(model, &xs).map_err(explain)?;
            let (z_b, x_b, gauge_prime) = transport_cocycle(&z, &xs, gauge, &c_prime, b).map_err(explain)?;
            let model_prime = GlobalModel::new(model.datum().clone(), Arc::new(gauge_prime)).map_err(explain)?;
            let cs = model.cs_table(&xs, SolveStrategy::Canonical).map_err(explain)?;
            if model_prime.cs_table(&x_b, SolveStrategy::Canonical).map_err(explain)? != cs {
                return Err("CS changes under (c, x) → (c + db, x + b∘ρ)".into());
            }
            if partition_global(&model_prime, &x_b).map_err(explain)? != z_b {
                return Err("Z changes under (c, x) → (c + db, x + b∘ρ)".into());
            }
            let fresh = Section::default_section(&model.datum().data(), model_prime.gauge()).map_err(explain)?;
            let z_fresh = partition_global(&model_prime, &fresh).map_err(explain)?;
            if transport_section(&z_b, &x_b, &fresh).map_err(explain)? != z_fresh {
                return Err("transported Z differs from Z computed for c + db".into());
            }
            Ok(format!("{} representations", cs.len()))
        });
    }
    for gm in models.gluings.iter().filter(|g| g.datum().is_closed()) {
        report.record(Criterion::CocycleChange, format!("closed {}", gm.datum().label()), || {
            let gauge_prime = Arc::new(Gauge::new(c_prime.clone()).map_err(explain)?);
            let model_prime = GluingModel::new(gm.datum().clone(), gauge_prime.clone()).map_err(explain)?;
            let fresh = Section::default_section(&gm.outer().datum().data(), &gauge_prime).map_err(explain)?;
            let before = closed_partition(gm, x).map_err(explain)?;
            let after = closed_partition(&model_prime, &fresh).map_err(explain)?;
            if before.entries() != after.entries() {
                return Err(format!("closed Z changes from {} to {}", before.entries()[0], after.entries()[0]));
            }
            Ok(format!("Z = {}", before.entries()[0]))
        });
    }
}

fn isomorphism_checks(cfg: &ModelConfig, models: &Models, report: &mut SuiteReport) {
    for iso in &cfg.isomorphisms {
        report.record(Criterion::Isomorphism, format!("{} → {}", iso.source, iso.target), || {
            let source = models.globals.iter().find(|g| g.datum().label() == iso.source).ok_or("missing source")?;
            let target = models.globals.iter().find(|g| g.datum().label() == iso.target).ok_or("missing target")?;
            crate::quantum::check_global_isomorphism(source.datum(), target.datum(), &iso.xi, &iso.iso).map_err(explain)?;
            let xs = models.section.restrict(&source.datum().names()).map_err(explain)?;
            let z = partition_global(source, &xs).map_err(explain)?;
            let (z_t, x_t) = transport_isomorphism(&z, &xs, &iso.iso).map_err(explain)?;
            if partition_global(target, &x_t).map_err(explain)? != z_t {
                return Err("transported Z differs from Z of the target model".into());
            }
            Ok("Z transports along ξ".into())
        });
    }
}
