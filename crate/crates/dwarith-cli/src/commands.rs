//! One function per subcommand, each producing a structured report.

use serde_json::{json, Value};

use dwarith::cohomology::SolveStrategy;
use dwarith::config::ModelConfig;
use dwarith::global::{check_closed_consistency, check_decomposition, check_global_axioms, GlobalModel, GluingModel};
use dwarith::group::{Elem, FiniteGroup, GroupHom, HomSpace, Orbit};
use dwarith::local::{check_local_axioms, delta_table, ProductSpace, Section};
use dwarith::quantum::{
    closed_partition, glue as glue_sides, partition_global, partition_tube, theta_space, transport_cocycle,
    transport_isomorphism, transport_section, Orientation, ThetaVector,
};
use dwarith::suite::{build_models, run_suite};
use dwarith::{CyclotomicValue, Result};

use crate::{error_value, Outcome, Status};

fn elem(group: &FiniteGroup, e: Elem) -> usize {
    group.input_index(e)
}

fn images(rho: &GroupHom) -> Value {
    json!(rho.generator_images().iter().map(|&e| elem(rho.target(), e)).collect::<Vec<_>>())
}

fn describe(space: &ProductSpace, index: usize) -> Value {
    let parts: Vec<Value> = space.decode(index).iter().zip(space.factors()).map(|(&i, f)| images(f.get(i))).collect();
    json!(parts)
}

fn number(v: &num_bigint::BigInt) -> Value {
    match i64::try_from(v) {
        Ok(n) => json!(n),
        Err(_) => json!(v.to_string()),
    }
}

fn cyclotomic(v: &CyclotomicValue) -> Value {
    json!({ "coeffs": v.coeffs().iter().map(number).collect::<Vec<_>>(), "den": number(v.den()) })
}

/// `{ base, section, entries: [{ rho_S, value }] }`; zero entries are kept
/// unless `sparse`.
fn theta(v: &ThetaVector, space: &ProductSpace, sparse: bool) -> Value {
    let entries: Vec<Value> = v
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, e)| !sparse || !e.is_zero())
        .map(|(i, e)| json!({ "rho_S": describe(space, i), "value": cyclotomic(e) }))
        .collect();
    let base: Vec<Value> =
        v.base().iter().map(|b| json!({ "name": b.name, "orientation": b.orientation, "size": b.size })).collect();
    json!({ "base": base, "section": v.section_tag(), "entries": entries })
}

fn orbits(list: &[Orbit], group: &FiniteGroup) -> Value {
    json!(list
        .iter()
        .map(|o| json!({
            "representative": o.representative,
            "size": o.members.len(),
            "stabilizer": o.stabilizer.iter().map(|&g| elem(group, g)).collect::<Vec<_>>(),
        }))
        .collect::<Vec<_>>())
}

fn hom_listing(space: &HomSpace) -> Value {
    let list = space.orbits();
    let mut orbit_of = vec![0; space.len()];
    for (k, o) in list.iter().enumerate() {
        for &m in &o.members {
            orbit_of[m] = k;
        }
    }
    let reps: Vec<Value> = space
        .homs()
        .iter()
        .enumerate()
        .map(|(i, rho)| json!({ "index": i, "images": images(rho), "orbit": orbit_of[i] }))
        .collect();
    json!({ "size": space.len(), "representations": reps, "orbits": orbits(&list, space.target()) })
}

pub fn validate(cfg: &ModelConfig) -> Result<Outcome> {
    let gauge = &cfg.gauge;
    let mut ok = true;
    let mut locals = Vec::new();
    for d in &cfg.locals {
        let r = check_local_axioms(d, gauge)?;
        ok &= r.passed();
        locals.push(json!({
            "name": r.name,
            "group": d.group().label(),
            "orientation": d.orientation(),
            "inv_kills_coboundaries": r.coboundary_counterexample.is_none(),
            "inv_surjective": r.surjective,
            "unsolvable": r.unsolvable,
            "passed": r.passed(),
        }));
    }
    let mut globals = Vec::new();
    for g in cfg.globals.iter().filter(|g| !g.attachments().is_empty()) {
        let r = check_global_axioms(g, gauge)?;
        ok &= r.passed();
        let mut entry = json!({
            "label": r.label,
            "group": g.group().label(),
            "primes": g.names(),
            "reciprocity_failures": r.reciprocity_failures.iter().map(|f| json!({ "basis_index": f.basis_index, "total": f.total })).collect::<Vec<_>>(),
            "unsolvable": r.unsolvable,
            "passed": r.passed(),
        });
        if let Err(e) = GlobalModel::new(g.clone(), gauge.clone()) {
            ok = false;
            entry["error"] = error_value(&e);
        }
        globals.push(entry);
    }
    let mut gluings = Vec::new();
    let mut built = Vec::new();
    for g in &cfg.gluings {
        match GluingModel::new(g.clone(), gauge.clone()) {
            Ok(m) => {
                gluings.push(json!({ "label": g.label(), "closed": g.is_closed(), "s1": g.s1_names(), "s2": g.s2_names(), "passed": true }));
                built.push(m);
            }
            Err(e) => {
                ok = false;
                gluings.push(json!({ "label": g.label(), "passed": false, "error": error_value(&e) }));
            }
        }
    }
    let mut consistency = Vec::new();
    if !cfg.checks.closed_consistency.is_empty() {
        let x = cfg.section()?;
        for group in &cfg.checks.closed_consistency {
            let picked: Vec<(&GluingModel, &Section)> =
                group.iter().filter_map(|l| built.iter().find(|m| m.datum().label() == l)).map(|m| (m, &x)).collect();
            match check_closed_consistency(&picked) {
                Ok(table) => consistency.push(json!({ "gluings": group, "closed_cs": table, "passed": true })),
                Err(e) => {
                    ok = false;
                    consistency.push(json!({ "gluings": group, "passed": false, "error": error_value(&e) }));
                }
            }
        }
    }
    let report = json!({
        "model": cfg.name,
        "modulus": cfg.modulus,
        "gauge_group": gauge.group().label(),
        "locals": locals,
        "globals": globals,
        "gluings": gluings,
        "closed_consistency": consistency,
        "passed": ok,
    });
    Ok(Outcome { report, status: if ok { Status::Ok } else { Status::ModelViolation } })
}

pub fn homs(cfg: &ModelConfig) -> Result<Outcome> {
    let target = cfg.gauge.group();
    let locals: Vec<Value> = cfg
        .locals
        .iter()
        .map(|d| {
            let mut v = hom_listing(&HomSpace::new(d.group().clone(), target.clone()));
            v["name"] = json!(d.name());
            v
        })
        .collect();
    let globals: Vec<Value> = cfg
        .globals
        .iter()
        .map(|g| {
            let mut v = hom_listing(&HomSpace::new(g.group().clone(), target.clone()));
            v["label"] = json!(g.label());
            v
        })
        .collect();
    Ok(Outcome { report: json!({ "model": cfg.name, "locals": locals, "globals": globals }), status: Status::Ok })
}

pub fn lambda(cfg: &ModelConfig) -> Result<Outcome> {
    let x = cfg.section()?;
    let group = cfg.gauge.group();
    let order = group.order();
    let tables: Vec<Value> = x
        .parts()
        .iter()
        .map(|p| {
            let table = p.lambda_table(&cfg.gauge);
            let rows: Vec<Value> = p
                .space()
                .homs()
                .iter()
                .enumerate()
                .map(|(i, rho)| json!({ "rho": images(rho), "lambda": table[i * order..(i + 1) * order].to_vec() }))
                .collect();
            json!({ "local": p.datum().name(), "rows": rows })
        })
        .collect();
    let g_order: Vec<usize> = group.elements().map(|g| elem(group, g)).collect();
    Ok(Outcome {
        report: json!({ "model": cfg.name, "section": x.tag(), "g_order": g_order, "tables": tables }),
        status: Status::Ok,
    })
}

pub fn cs(cfg: &ModelConfig) -> Result<Outcome> {
    let models = build_models(cfg)?;
    let x = &models.section;
    let mut globals = Vec::new();
    for m in &models.globals {
        let xs = x.restrict(&m.datum().names())?;
        let space = xs.space();
        let values = m.cs_table(&xs, SolveStrategy::Canonical)?;
        let res = m.restriction_table(&xs)?;
        let rows: Vec<Value> = values
            .iter()
            .enumerate()
            .map(|(r, &v)| json!({ "rho": images(m.homs().get(r)), "res": describe(&space, res[r]), "cs": v }))
            .collect();
        globals.push(json!({ "label": m.datum().label(), "rows": rows }));
    }
    let mut gluings = Vec::new();
    for gm in &models.gluings {
        let tube = gm.tube();
        let tube_space = tube.space();
        let values = tube.cs_table(x, SolveStrategy::Canonical)?;
        let tube_rows: Vec<Value> =
            values.iter().enumerate().map(|(t, &v)| json!({ "rho_tilde": describe(&tube_space, t), "cs": v })).collect();
        let mut entry = json!({ "label": gm.datum().label(), "tube": tube_rows });
        if gm.datum().is_closed() {
            let closed = gm.cs_closed_table(x)?;
            entry["closed"] = json!(closed
                .iter()
                .enumerate()
                .map(|(r, &v)| json!({ "rho": images(gm.inner().homs().get(r)), "cs": v }))
                .collect::<Vec<_>>());
        } else {
            let rows = check_decomposition(gm, x)?;
            entry["decomposition"] = json!(rows
                .iter()
                .map(|r| json!({ "rho": r.rho1, "inner": r.inner, "tube": r.tube, "outer": r.outer, "holds": r.holds(cfg.modulus) }))
                .collect::<Vec<_>>());
        }
        gluings.push(entry);
    }
    Ok(Outcome { report: json!({ "model": cfg.name, "section": x.tag(), "globals": globals, "gluings": gluings }), status: Status::Ok })
}

pub fn partition(cfg: &ModelConfig) -> Result<Outcome> {
    let models = build_models(cfg)?;
    let x = &models.section;
    let mut globals = Vec::new();
    for m in &models.globals {
        let xs = x.restrict(&m.datum().names())?;
        let z = partition_global(m, &xs)?;
        globals.push(json!({ "label": m.datum().label(), "partition": theta(&z, &xs.space(), false) }));
    }
    let mut gluings = Vec::new();
    for gm in &models.gluings {
        let xs = x.restrict(&gm.tube().names())?;
        let z = partition_tube(gm.tube(), &xs, Orientation::Normal)?;
        let mut entry = json!({ "label": gm.datum().label(), "tube": theta(&z, &xs.space(), false) });
        if gm.datum().is_closed() {
            entry["closed"] = cyclotomic(&closed_partition(gm, x)?.entries()[0]);
        }
        gluings.push(entry);
    }
    Ok(Outcome { report: json!({ "model": cfg.name, "globals": globals, "gluings": gluings }), status: Status::Ok })
}

fn space_report(xs: &Section, cfg: &ModelConfig) -> Value {
    let h = theta_space(xs, &cfg.gauge);
    let space = xs.space();
    json!({
        "dimension": h.dimension,
        "orbits": h.orbits.len(),
        "basis": h.basis.iter().map(|v| theta(v, &space, true)["entries"].clone()).collect::<Vec<_>>(),
    })
}

pub fn hdim(cfg: &ModelConfig) -> Result<Outcome> {
    let x = cfg.section()?;
    let mut locals = Vec::new();
    for d in &cfg.locals {
        let mut v = space_report(&x.restrict(&[d.name()])?, cfg);
        v["name"] = json!(d.name());
        locals.push(v);
    }
    let mut globals = Vec::new();
    for g in cfg.globals.iter().filter(|g| !g.attachments().is_empty()) {
        let mut v = space_report(&x.restrict(&g.names())?, cfg);
        v["label"] = json!(g.label());
        globals.push(v);
    }
    Ok(Outcome { report: json!({ "model": cfg.name, "section": x.tag(), "locals": locals, "globals": globals }), status: Status::Ok })
}

pub fn glue(cfg: &ModelConfig) -> Result<Outcome> {
    let models = build_models(cfg)?;
    let mut all_equal = true;
    let mut gluings = Vec::new();
    for gm in &models.gluings {
        let report = glue_sides(gm, &models.section)?;
        all_equal &= report.equal();
        let inner = models.section.restrict(&gm.datum().s1_names())?.space();
        gluings.push(json!({
            "label": gm.datum().label(),
            "glued": theta(&report.glued, &inner, false),
            "direct": theta(&report.direct, &inner, false),
            "equal": report.equal(),
        }));
    }
    let status = if all_equal { Status::Ok } else { Status::InvariantFailure };
    Ok(Outcome { report: json!({ "model": cfg.name, "gluings": gluings }), status })
}

pub fn transport(cfg: &ModelConfig) -> Result<Outcome> {
    let models = build_models(cfg)?;
    let x = &models.section;
    let y = x.perturbed(cfg.transport_seed)?;
    let c_prime = cfg.shifted_cocycle();
    let mut ok = true;
    let mut sections = Vec::new();
    let mut cocycles = Vec::new();
    for m in &models.globals {
        let names = m.datum().names();
        let (xs, ys) = (x.restrict(&names)?, y.restrict(&names)?);
        let z = partition_global(m, &xs)?;
        let moved = transport_section(&z, &xs, &ys)?;
        let direct = partition_global(m, &ys)?;
        ok &= moved == direct;
        sections.push(json!({
            "label": m.datum().label(),
            "from": xs.tag(),
            "to": ys.tag(),
            "delta": delta_table(&xs, &ys)?,
            "transported": theta(&moved, &ys.space(), false),
            "matches_direct": moved == direct,
        }));
        let (z_b, x_b, gauge_prime) = transport_cocycle(&z, &xs, &cfg.gauge, &c_prime, &cfg.transport_b)?;
        let m_prime = GlobalModel::new(m.datum().clone(), std::sync::Arc::new(gauge_prime))?;
        let recomputed = partition_global(&m_prime, &x_b)?;
        ok &= recomputed == z_b;
        cocycles.push(json!({ "label": m.datum().label(), "section": x_b.tag(), "matches_direct": recomputed == z_b }));
    }
    let mut isomorphisms = Vec::new();
    for iso in &cfg.isomorphisms {
        let find = |label: &str| models.globals.iter().find(|g| g.datum().label() == label);
        let (Some(source), Some(target)) = (find(&iso.source), find(&iso.target)) else { continue };
        dwarith::quantum::check_global_isomorphism(source.datum(), target.datum(), &iso.xi, &iso.iso)?;
        let xs = x.restrict(&source.datum().names())?;
        let (z_t, x_t) = transport_isomorphism(&partition_global(source, &xs)?, &xs, &iso.iso)?;
        let direct = partition_global(target, &x_t)?;
        ok &= direct == z_t;
        isomorphisms.push(json!({ "source": iso.source, "target": iso.target, "matches_direct": direct == z_t }));
    }
    let b: Vec<Value> = cfg
        .transport_b
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(|(i, &v)| {
            let order = cfg.gauge.group().order();
            json!([elem(cfg.gauge.group(), (i / order) as Elem), elem(cfg.gauge.group(), (i % order) as Elem), v])
        })
        .collect();
    let report = json!({
        "model": cfg.name,
        "section_change": sections,
        "cocycle_change": { "b": b, "globals": cocycles },
        "isomorphisms": isomorphisms,
        "passed": ok,
    });
    Ok(Outcome { report, status: if ok { Status::Ok } else { Status::InvariantFailure } })
}

pub fn suite(configs: &[(String, ModelConfig)]) -> Outcome {
    let mut reports = Vec::new();
    let mut ok = true;
    for (path, cfg) in configs {
        let r = run_suite(cfg);
        ok &= r.passed();
        let failures = r.outcomes.iter().filter(|o| !o.passed).count();
        reports.push(json!({
            "config": path,
            "model": r.model,
            "passed": r.passed(),
            "checks": r.outcomes.len(),
            "failures": failures,
            "outcomes": r.outcomes.iter().map(|o| json!({
                "criterion": o.criterion.name(),
                "subject": o.subject,
                "passed": o.passed,
                "detail": o.detail,
            })).collect::<Vec<_>>(),
            "notes": r.notes,
        }));
    }
    Outcome {
        report: json!({ "models": reports, "passed": ok }),
        status: if ok { Status::Ok } else { Status::InvariantFailure },
    }
}
