//! TOML model documents: parsing, cross-reference resolution and validation.
//!
//! Element references are integer element indices of the named group (for
//! builtin groups, the index of the element in the builtin enumeration; for
//! table groups, the row index of the table). Homomorphisms are written
//! either as a list of generator images or as `{ map = [...] }` giving the
//! image of every element.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::cochain::{check_cocycle, cyclic_cocycle, Cochain};
use crate::error::{Error, Result};
use crate::global::{Attachment, GlobalDatum, GluingDatum};
use crate::group::{Elem, FiniteGroup, GroupHom, HomSpace};
use crate::local::{Gauge, InvFunctional, LocalDatum, Section, Unramified};
use crate::quantum::DataIsomorphism;

/// Largest group order accepted for degree-3 work.
pub const MAX_GROUP_ORDER: usize = 64;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    name: Option<String>,
    modulus: u32,
    gauge_group: String,
    #[serde(default)]
    groups: BTreeMap<String, RawTableGroup>,
    cocycle: RawCocycle,
    #[serde(default)]
    locals: Vec<RawLocal>,
    #[serde(default)]
    globals: Vec<RawGlobal>,
    #[serde(default)]
    gluings: Vec<RawGluing>,
    #[serde(default)]
    sections: Vec<RawSection>,
    #[serde(default)]
    transport: RawTransport,
    #[serde(default)]
    checks: RawChecks,
    #[serde(default)]
    expect: Option<RawExpect>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTableGroup {
    table: Vec<Vec<usize>>,
    generators: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase", tag = "kind")]
enum RawCocycle {
    Zero,
    /// `k·a·⌊(b+c)/n⌋` on a cyclic gauge group of order `n`.
    Cyclic { k: i64 },
    /// `coeff · a_i · b_j · c_k` in the coordinates of an abelian builtin.
    Cup { coords: [usize; 3], #[serde(default = "one")] coeff: i64 },
    /// Sparse `[a, b, c, value]` entries; unlisted entries are zero.
    Entries { entries: Vec<[i64; 4]> },
}

fn one() -> i64 {
    1
}

fn plus_one() -> i8 {
    1
}

fn yes() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase", tag = "kind")]
enum RawLocalKind {
    Tame {
        frobenius: usize,
        inertia: usize,
        #[serde(default = "yes")]
        unramified: bool,
    },
    Klein {
        #[serde(default = "yes")]
        unramified: bool,
    },
    Carry {
        order: usize,
        #[serde(default)]
        unramified_order: Option<usize>,
    },
    Explicit {
        group: String,
        inv: Vec<[i64; 3]>,
        #[serde(default)]
        unramified: Option<RawUnramified>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUnramified {
    group: String,
    v: RawMap,
}

#[derive(Deserialize)]
struct RawLocal {
    name: String,
    #[serde(default = "plus_one")]
    orientation: i8,
    #[serde(flatten)]
    kind: RawLocalKind,
}

#[derive(Deserialize, Clone)]
#[serde(untagged)]
enum RawMap {
    Images(Vec<usize>),
    Full { map: Vec<usize> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAttachment {
    local: String,
    iota: RawMap,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGlobal {
    label: String,
    group: String,
    #[serde(default)]
    attachments: Vec<RawAttachment>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGluing {
    label: String,
    outer: String,
    inner: String,
    eta: RawMap,
    #[serde(default)]
    u_maps: BTreeMap<String, RawMap>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSection {
    local: String,
    values: Vec<RawSectionValue>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSectionValue {
    rho: RawMap,
    /// Sparse `[g, h, value]` entries of the 2-cochain.
    entries: Vec<[i64; 3]>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawTransport {
    #[serde(default)]
    seed: Option<u64>,
    /// Sparse `[g, h, value]` entries of `b` for `c' = c + db`.
    #[serde(default)]
    b: Option<Vec<[i64; 3]>>,
    #[serde(default)]
    isomorphisms: Vec<RawIsomorphism>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIsomorphism {
    source: String,
    target: String,
    xi: RawMap,
    components: Vec<RawIsoComponent>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIsoComponent {
    local: String,
    target: String,
    xi: RawMap,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawChecks {
    #[serde(default)]
    seeds: Option<Vec<u64>>,
    #[serde(default)]
    samples: Option<usize>,
    #[serde(default)]
    closed_consistency: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExpect {
    error: String,
}

/// An isomorphism of global data `ξ: source → target`.
#[derive(Clone, Debug)]
pub struct IsomorphismConfig {
    pub source: String,
    pub target: String,
    pub xi: GroupHom,
    pub iso: DataIsomorphism,
}

/// Seeds and sample counts for the invariant sweeps.
#[derive(Clone, Debug)]
pub struct Checks {
    pub seeds: Vec<u64>,
    pub samples: usize,
    pub closed_consistency: Vec<Vec<String>>,
}

/// A fully resolved and validated model document.
#[derive(Clone, Debug)]
pub struct ModelConfig {
    pub name: String,
    pub modulus: u32,
    pub gauge: Arc<Gauge>,
    pub locals: Vec<Arc<LocalDatum>>,
    pub globals: Vec<GlobalDatum>,
    pub gluings: Vec<GluingDatum>,
    pub isomorphisms: Vec<IsomorphismConfig>,
    /// `b` for the cocycle change `c' = c + db`.
    pub transport_b: Cochain,
    pub transport_seed: u64,
    pub checks: Checks,
    /// Error code the model is expected to be rejected with.
    pub expect_error: Option<String>,
    overrides: Vec<(usize, usize, Cochain)>,
}

impl ModelConfig {
    /// The default section over all locals with configured overrides applied.
    pub fn section(&self) -> Result<Section> {
        let x = Section::default_section(&self.locals, &self.gauge)?;
        if self.overrides.is_empty() {
            return Ok(x);
        }
        let mut values: Vec<Vec<Cochain>> = x.parts().iter().map(|p| p.values().to_vec()).collect();
        for (local, rho, v) in &self.overrides {
            values[*local][*rho] = v.clone();
        }
        Section::from_values("configured", &self.locals, &self.gauge, values)
    }

    pub fn local(&self, name: &str) -> Option<&Arc<LocalDatum>> {
        self.locals.iter().find(|d| d.name() == name)
    }

    pub fn global(&self, label: &str) -> Option<&GlobalDatum> {
        self.globals.iter().find(|g| g.label() == label)
    }

    pub fn gluing(&self, label: &str) -> Option<&GluingDatum> {
        self.gluings.iter().find(|g| g.label() == label)
    }

    /// `c' = c + db`.
    pub fn shifted_cocycle(&self) -> Cochain {
        self.gauge.cocycle() + &self.transport_b.coboundary()
    }
}

/// Parses and validates a model document; all independent errors are reported.
pub fn parse_config(document: &str) -> std::result::Result<ModelConfig, Vec<Error>> {
    let deserializer = toml::Deserializer::new(document);
    let raw: RawConfig = serde_path_to_error::deserialize(deserializer).map_err(|e| {
        let path = e.path().to_string();
        let message = e.inner().message().to_string();
        vec![Error::SchemaError { path, message }]
    })?;
    Builder::default().build(raw)
}

/// Reads and parses a model file.
pub fn load_config(path: &std::path::Path) -> std::result::Result<ModelConfig, Vec<Error>> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        vec![Error::SchemaError { path: path.display().to_string(), message: e.to_string() }]
    })?;
    parse_config(&text)
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::SchemaError { path: path.into(), message: message.into() }
}

#[derive(Default)]
struct Builder {
    errors: Vec<Error>,
    tables: BTreeMap<String, RawTableGroup>,
    /// Builtin coordinate radices, when the group is a product of cyclics.
    radices: BTreeMap<String, Vec<usize>>,
    cache: BTreeMap<String, Arc<FiniteGroup>>,
}

fn parse_builtin(spec: &str) -> Option<(String, Vec<usize>)> {
    let (family, rest) = spec.trim().split_once('(')?;
    let args = rest.strip_suffix(')')?;
    let args: Option<Vec<usize>> = args.split(',').map(|a| a.trim().parse().ok()).collect();
    Some((family.trim().to_string(), args?))
}

impl Builder {
    fn group(&mut self, spec: &str, path: &str) -> Result<Arc<FiniteGroup>> {
        if let Some(g) = self.cache.get(spec) {
            return Ok(g.clone());
        }
        let group = if let Some(t) = self.tables.get(spec) {
            FiniteGroup::from_table(&t.table, &t.generators, spec)?
        } else {
            let (family, args) = parse_builtin(spec).ok_or_else(|| Error::DanglingReference {
                path: path.to_string(),
                name: spec.to_string(),
            })?;
            if args.contains(&0) {
                return Err(schema(path, "group orders must be positive"));
            }
            match (family.as_str(), args.as_slice()) {
                ("cyclic", [n]) => {
                    self.radices.insert(spec.to_string(), vec![*n]);
                    FiniteGroup::cyclic(*n)
                }
                ("abelian", factors) if !factors.is_empty() => {
                    self.radices.insert(spec.to_string(), factors.to_vec());
                    FiniteGroup::abelian(factors)
                }
                ("symmetric", [n]) if *n <= 5 => FiniteGroup::symmetric(*n),
                _ => return Err(schema(path, format!("unknown group {spec}; expected cyclic(n), abelian(n1,...), symmetric(n) or a [groups] entry"))),
            }
        };
        if group.order() > MAX_GROUP_ORDER {
            return Err(Error::TooLarge(format!("{path}: {spec} has order {} > {MAX_GROUP_ORDER}", group.order())));
        }
        let group = Arc::new(group);
        self.cache.insert(spec.to_string(), group.clone());
        Ok(group)
    }

    fn elem(&self, group: &FiniteGroup, k: i64, path: &str) -> Result<Elem> {
        usize::try_from(k)
            .ok()
            .and_then(|k| group.from_input_index(k))
            .ok_or_else(|| schema(path, format!("{k} is not an element of {}", group.label())))
    }

    fn hom(&self, source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>, raw: &RawMap, path: &str) -> Result<GroupHom> {
        match raw {
            RawMap::Images(images) => {
                if images.len() != source.generators().len() {
                    return Err(schema(
                        path,
                        format!("{} generator images given; {} has {} generators", images.len(), source.label(), source.generators().len()),
                    ));
                }
                let images = images.iter().map(|&k| self.elem(target, k as i64, path)).collect::<Result<Vec<_>>>()?;
                GroupHom::from_generator_images(source.clone(), target.clone(), &images)
            }
            RawMap::Full { map } => {
                if map.len() != source.order() {
                    return Err(schema(path, format!("map lists {} images for a group of order {}", map.len(), source.order())));
                }
                let mut images = vec![0; source.order()];
                for (k, &v) in map.iter().enumerate() {
                    images[self.elem(source, k as i64, path)? as usize] = self.elem(target, v as i64, path)?;
                }
                GroupHom::new(source.clone(), target.clone(), images)
            }
        }
    }

    fn sparse(&self, group: &Arc<FiniteGroup>, degree: usize, modulus: u32, entries: &[Vec<i64>], path: &str) -> Result<Cochain> {
        let mut c = Cochain::zero(group.clone(), degree, modulus);
        for (k, e) in entries.iter().enumerate() {
            let p = format!("{path}[{k}]");
            let tuple = e[..degree].iter().map(|&a| self.elem(group, a, &p)).collect::<Result<Vec<_>>>()?;
            c.set(&tuple, e[degree]);
        }
        Ok(c)
    }

    fn cocycle(&mut self, raw: &RawCocycle, spec: &str, group: &Arc<FiniteGroup>, modulus: u32) -> Result<Cochain> {
        let c = match raw {
            RawCocycle::Zero => Cochain::zero(group.clone(), 3, modulus),
            RawCocycle::Cyclic { k } => match self.radices.get(spec).map(|r| r.as_slice()) {
                Some([n]) => cyclic_cocycle(group.clone(), *n, *k, modulus),
                _ => return Err(schema("cocycle.kind", "the cyclic family needs gauge_group = cyclic(n)")),
            },
            RawCocycle::Cup { coords, coeff } => {
                let radices = self
                    .radices
                    .get(spec)
                    .cloned()
                    .ok_or_else(|| schema("cocycle.kind", "cup cocycles need a builtin abelian gauge group"))?;
                if let Some(&bad) = coords.iter().find(|&&i| i >= radices.len()) {
                    return Err(schema("cocycle.coords", format!("coordinate {bad} out of range")));
                }
                let coord = |mut a: usize, i: usize| {
                    for r in radices[i + 1..].iter().rev() {
                        a /= r;
                    }
                    (a % radices[i]) as i64
                };
                Cochain::from_fn(group.clone(), 3, modulus, |t| {
                    coeff * coord(t[0] as usize, coords[0]) * coord(t[1] as usize, coords[1]) * coord(t[2] as usize, coords[2])
                })
            }
            RawCocycle::Entries { entries } => {
                let rows: Vec<Vec<i64>> = entries.iter().map(|e| e.to_vec()).collect();
                self.sparse(group, 3, modulus, &rows, "cocycle.entries")?
            }
        };
        check_cocycle(&c)?;
        Ok(c)
    }

    fn local(&mut self, raw: &RawLocal, k: usize, modulus: u32) -> Result<LocalDatum> {
        let path = format!("locals[{k}]");
        if raw.orientation != 1 && raw.orientation != -1 {
            return Err(schema(format!("{path}.orientation"), "must be 1 or -1"));
        }
        let d = match &raw.kind {
            RawLocalKind::Tame { frobenius, inertia, unramified } => {
                if frobenius * inertia > MAX_GROUP_ORDER || *frobenius == 0 || *inertia == 0 {
                    return Err(Error::TooLarge(format!("{path}: Z/{frobenius} x Z/{inertia} is outside 1..={MAX_GROUP_ORDER}")));
                }
                LocalDatum::tame(raw.name.clone(), *frobenius, *inertia, modulus, *unramified)?
            }
            RawLocalKind::Klein { unramified } => LocalDatum::klein(raw.name.clone(), modulus, *unramified)?,
            RawLocalKind::Carry { order, unramified_order } => {
                if *order == 0 || *order > MAX_GROUP_ORDER {
                    return Err(Error::TooLarge(format!("{path}: Z/{order} is outside 1..={MAX_GROUP_ORDER}")));
                }
                if let Some(m) = unramified_order {
                    if *m == 0 || order % m != 0 {
                        return Err(schema(format!("{path}.unramified_order"), "must divide the order"));
                    }
                }
                LocalDatum::cyclic_carry(raw.name.clone(), *order, modulus, *unramified_order)?
            }
            RawLocalKind::Explicit { group, inv, unramified } => {
                let g = self.group(group, &format!("{path}.group"))?;
                let terms = inv
                    .iter()
                    .enumerate()
                    .map(|(j, t)| {
                        let p = format!("{path}.inv[{j}]");
                        Ok((self.elem(&g, t[0], &p)?, self.elem(&g, t[1], &p)?, t[2]))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let functional = InvFunctional::new(g.clone(), modulus, terms)?;
                let unr = match unramified {
                    Some(u) => {
                        let q = self.group(&u.group, &format!("{path}.unramified.group"))?;
                        let projection = self.hom(&g, &q, &u.v, &format!("{path}.unramified.v"))?;
                        Some(Unramified { group: q, projection })
                    }
                    None => None,
                };
                LocalDatum::new(raw.name.clone(), functional, 1, unr)?
            }
        };
        Ok(d.with_orientation(raw.orientation))
    }

    fn build(mut self, raw: RawConfig) -> std::result::Result<ModelConfig, Vec<Error>> {
        self.tables = raw.groups;
        let modulus = raw.modulus;
        if modulus < 2 {
            return Err(vec![schema("modulus", "must be at least 2")]);
        }
        let gauge_group = self.group(&raw.gauge_group, "gauge_group").map_err(|e| vec![e])?;
        let c = self.cocycle(&raw.cocycle, &raw.gauge_group, &gauge_group, modulus).map_err(|e| vec![e])?;
        let gauge = Arc::new(Gauge::new(c).map_err(|e| vec![e])?);

        let mut locals: Vec<Arc<LocalDatum>> = Vec::new();
        for (k, l) in raw.locals.iter().enumerate() {
            if locals.iter().any(|d| d.name() == l.name) {
                self.errors.push(schema(format!("locals[{k}].name"), format!("duplicate local {}", l.name)));
                continue;
            }
            match self.local(l, k, modulus) {
                Ok(d) => locals.push(Arc::new(d)),
                Err(e) => self.errors.push(e),
            }
        }
        let find_local = |name: &str, path: String| {
            locals
                .iter()
                .find(|d| d.name() == name)
                .cloned()
                .ok_or(Error::DanglingReference { path, name: name.to_string() })
        };

        let mut globals: Vec<GlobalDatum> = Vec::new();
        for (k, g) in raw.globals.iter().enumerate() {
            let path = format!("globals[{k}]");
            let built = (|| {
                if globals.iter().any(|x| x.label() == g.label) {
                    return Err(schema(format!("{path}.label"), format!("duplicate global {}", g.label)));
                }
                let group = self.group(&g.group, &format!("{path}.group"))?;
                let mut attachments = Vec::new();
                for (j, a) in g.attachments.iter().enumerate() {
                    let p = format!("{path}.attachments[{j}]");
                    let local = find_local(&a.local, format!("{p}.local"))?;
                    let iota = self.hom(local.group(), &group, &a.iota, &format!("{p}.iota"))?;
                    attachments.push(Attachment { local, iota });
                }
                GlobalDatum::new(g.label.clone(), group, attachments)
            })();
            match built {
                Ok(d) => globals.push(d),
                Err(e) => self.errors.push(e),
            }
        }
        let find_global = |name: &str, path: String| {
            globals
                .iter()
                .find(|d| d.label() == name)
                .cloned()
                .ok_or(Error::DanglingReference { path, name: name.to_string() })
        };

        let mut gluings: Vec<GluingDatum> = Vec::new();
        for (k, g) in raw.gluings.iter().enumerate() {
            let path = format!("gluings[{k}]");
            let built = (|| {
                let outer = find_global(&g.outer, format!("{path}.outer"))?;
                let inner = find_global(&g.inner, format!("{path}.inner"))?;
                let eta = self.hom(outer.group(), inner.group(), &g.eta, &format!("{path}.eta"))?;
                let mut u = Vec::new();
                for (name, m) in &g.u_maps {
                    let p = format!("{path}.u_maps.{name}");
                    let local = find_local(name, p.clone())?;
                    let unr = local
                        .unramified()
                        .ok_or_else(|| Error::ModelViolation(format!("{p}: {name} has no unramified quotient")))?;
                    u.push((name.clone(), self.hom(&unr.group, inner.group(), m, &p)?));
                }
                GluingDatum::new(g.label.clone(), outer, inner, eta, u)
            })();
            match built {
                Ok(d) => gluings.push(d),
                Err(e) => self.errors.push(e),
            }
        }

        let mut overrides = Vec::new();
        for (k, s) in raw.sections.iter().enumerate() {
            let path = format!("sections[{k}]");
            let built = (|| {
                let local = find_local(&s.local, format!("{path}.local"))?;
                let index = locals.iter().position(|d| d.name() == s.local).unwrap();
                let space = HomSpace::new(local.group().clone(), gauge.group().clone());
                let mut out = Vec::new();
                for (j, v) in s.values.iter().enumerate() {
                    let p = format!("{path}.values[{j}]");
                    let rho = self.hom(local.group(), gauge.group(), &v.rho, &format!("{p}.rho"))?;
                    let i = space.index_of(&rho).unwrap();
                    let rows: Vec<Vec<i64>> = v.entries.iter().map(|e| e.to_vec()).collect();
                    out.push((index, i, self.sparse(local.group(), 2, modulus, &rows, &format!("{p}.entries"))?));
                }
                Ok::<_, Error>(out)
            })();
            match built {
                Ok(o) => overrides.extend(o),
                Err(e) => self.errors.push(e),
            }
        }

        let transport_seed = raw.transport.seed.unwrap_or(17);
        let transport_b = match &raw.transport.b {
            Some(entries) => {
                let rows: Vec<Vec<i64>> = entries.iter().map(|e| e.to_vec()).collect();
                match self.sparse(&gauge_group, 2, modulus, &rows, "transport.b") {
                    Ok(b) => b,
                    Err(e) => {
                        self.errors.push(e);
                        Cochain::zero(gauge_group.clone(), 2, modulus)
                    }
                }
            }
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(transport_seed);
                let n = gauge_group.order().pow(2);
                let values = (0..n).map(|_| rng.gen_range(0..modulus as u64)).collect();
                Cochain::from_values(gauge_group.clone(), 2, modulus, values)
            }
        };

        let mut isomorphisms = Vec::new();
        for (k, iso) in raw.transport.isomorphisms.iter().enumerate() {
            let path = format!("transport.isomorphisms[{k}]");
            let built = (|| {
                let source = find_global(&iso.source, format!("{path}.source"))?;
                let target = find_global(&iso.target, format!("{path}.target"))?;
                let xi = self.hom(source.group(), target.group(), &iso.xi, &format!("{path}.xi"))?;
                let mut components = Vec::new();
                for (j, c) in iso.components.iter().enumerate() {
                    let p = format!("{path}.components[{j}]");
                    let from = find_local(&c.local, format!("{p}.local"))?;
                    let to = find_local(&c.target, format!("{p}.target"))?;
                    components.push((to.clone(), self.hom(from.group(), to.group(), &c.xi, &format!("{p}.xi"))?));
                }
                Ok::<_, Error>(IsomorphismConfig {
                    source: iso.source.clone(),
                    target: iso.target.clone(),
                    xi,
                    iso: DataIsomorphism { components },
                })
            })();
            match built {
                Ok(i) => isomorphisms.push(i),
                Err(e) => self.errors.push(e),
            }
        }

        for (k, group) in raw.checks.closed_consistency.iter().enumerate() {
            for (j, label) in group.iter().enumerate() {
                if !gluings.iter().any(|g| g.label() == label) && !raw.gluings.iter().any(|g| &g.label == label) {
                    self.errors.push(Error::DanglingReference {
                        path: format!("checks.closed_consistency[{k}][{j}]"),
                        name: label.clone(),
                    });
                }
            }
        }

        if !self.errors.is_empty() {
            return Err(self.errors);
        }
        Ok(ModelConfig {
            name: raw.name.unwrap_or_else(|| "model".into()),
            modulus,
            gauge,
            locals,
            globals,
            gluings,
            isomorphisms,
            transport_b,
            transport_seed,
            checks: Checks {
                seeds: raw.checks.seeds.unwrap_or_else(|| vec![1, 2, 3]),
                samples: raw.checks.samples.unwrap_or(200),
                closed_consistency: raw.checks.closed_consistency,
            },
            expect_error: raw.expect.map(|e| e.error),
            overrides,
        })
    }
}
