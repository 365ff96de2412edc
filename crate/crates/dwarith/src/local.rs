//! Local data: finite models of local Galois groups with an invariant
//! functional, sections of the prequantization fibers, the Chern–Simons
//! 1-cocycle `λ` and section-change maps `δ`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cochain::{check_cocycle, h_class, Cochain};
use crate::cohomology::{cohomology_basis, solve_coboundary};
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, GroupHom, HomSpace, Orbit, orbits_by_action};
use crate::torsor::{diff, FiberElement, FiberMap};

/// The gauge group `G`, the 3-cocycle `c` and the homotopy representatives
/// `h_g` with `g.c − c = d h_g`.
#[derive(Clone, Debug)]
pub struct Gauge {
    cocycle: Cochain,
    h: Vec<Cochain>,
}

impl Gauge {
    pub fn new(cocycle: Cochain) -> Result<Self> {
        if cocycle.degree() != 3 || !cocycle.has_trivial_action() {
            return Err(Error::ModelViolation("the action cocycle must be a degree-3 cochain with trivial action".into()));
        }
        check_cocycle(&cocycle)?;
        let h = cocycle.group().elements().map(|g| h_class(g, &cocycle)).collect::<Result<_>>()?;
        Ok(Gauge { cocycle, h })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.cocycle.group()
    }

    pub fn modulus(&self) -> u32 {
        self.cocycle.modulus()
    }

    pub fn cocycle(&self) -> &Cochain {
        &self.cocycle
    }

    /// `h_g = h²_g(c)`.
    pub fn h(&self, g: Elem) -> &Cochain {
        &self.h[g as usize]
    }
}

/// A linear functional `α ↦ Σ coeff·α(g,h) mod N` on 2-cochains of `Q_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvFunctional {
    group: Arc<FiniteGroup>,
    modulus: u32,
    terms: Vec<(Elem, Elem, i64)>,
}

impl InvFunctional {
    pub fn new(group: Arc<FiniteGroup>, modulus: u32, terms: Vec<(Elem, Elem, i64)>) -> Result<Self> {
        let n = group.order() as Elem;
        if let Some(&(g, h, _)) = terms.iter().find(|(g, h, _)| *g >= n || *h >= n) {
            return Err(Error::ModelViolation(format!("inv term ({g}, {h}) lies outside {}", group.label())));
        }
        let modulus_i = modulus as i64;
        let terms = terms.into_iter().map(|(g, h, k)| (g, h, k.rem_euclid(modulus_i))).filter(|t| t.2 != 0).collect();
        Ok(InvFunctional { group, modulus, terms })
    }

    /// `α(a,b) − α(b,a)`.
    pub fn commutator(group: Arc<FiniteGroup>, modulus: u32, a: Elem, b: Elem) -> Result<Self> {
        Self::new(group, modulus, vec![(a, b, 1), (b, a, -1)])
    }

    /// `Σ_j α(gen, j)` over all `j`: on a cyclic group of order divisible by
    /// `N` this kills coboundaries and detects the carry cocycle.
    pub fn carry(group: Arc<FiniteGroup>, modulus: u32, generator: Elem) -> Result<Self> {
        let terms = group.elements().map(|j| (generator, j, 1)).collect();
        Self::new(group, modulus, terms)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Nonzero terms `(g, h, coeff)` with coefficients in `[0, N)`.
    pub fn terms(&self) -> &[(Elem, Elem, i64)] {
        &self.terms
    }

    pub fn eval(&self, alpha: &Cochain) -> u32 {
        let m = self.modulus as i64;
        let acc: i64 = self.terms.iter().map(|&(g, h, k)| k * alpha.get(&[g, h]) as i64 % m).sum();
        acc.rem_euclid(m) as u32
    }

    /// The first `x` with `inv(d δ_x) ≠ 0`, where `δ_x` is the indicator 1-cochain.
    pub fn coboundary_counterexample(&self) -> Option<Elem> {
        let m = self.modulus as i64;
        self.group.elements().find(|&x| {
            let ind = |y: Elem| (y == x) as i64;
            let total: i64 =
                self.terms.iter().map(|&(g, h, k)| k * (ind(h) - ind(self.group.mul(g, h)) + ind(g))).sum();
            total.rem_euclid(m) != 0
        })
    }

    /// A 2-cocycle with `inv = 1`, if `inv` is surjective on `Z²`.
    pub fn find_witness(&self) -> Result<Option<Cochain>> {
        let basis = cohomology_basis(&self.group, self.modulus, 2)?;
        let m = self.modulus as i64;
        // Running combination with inv(acc) ≡ gcd.
        let mut gcd = m;
        let mut acc = Cochain::zero(self.group.clone(), 2, self.modulus);
        for z in &basis.cocycle_basis {
            let a = self.eval(z) as i64;
            if a == 0 {
                continue;
            }
            let (g, s, t) = extended_gcd(gcd, a);
            acc = &acc.scale(s) + &z.scale(t);
            gcd = g;
        }
        if gcd == 1 {
            debug_assert_eq!(self.eval(&acc), 1);
            Ok(Some(acc))
        } else {
            Ok(None)
        }
    }
}

fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, s, t) = extended_gcd(b, a.rem_euclid(b));
        (g, t, s - (a.div_euclid(b)) * t)
    }
}

/// A surjection `v_p: Q_p → Q̃_p` onto the unramified quotient.
#[derive(Clone, Debug)]
pub struct Unramified {
    pub group: Arc<FiniteGroup>,
    pub projection: GroupHom,
}

/// A finite model of a local Galois group with its invariant functional.
#[derive(Clone, Debug)]
pub struct LocalDatum {
    name: String,
    inv: InvFunctional,
    orientation: i8,
    witness: Option<Cochain>,
    unramified: Option<Unramified>,
}

impl LocalDatum {
    /// Searches `Z²(Q_p)` for a witness with `inv = 1`.
    pub fn new(name: impl Into<String>, inv: InvFunctional, orientation: i8, unramified: Option<Unramified>) -> Result<Self> {
        let witness = inv.find_witness()?;
        Self::with_witness(name, inv, orientation, unramified, witness)
    }

    /// Uses the given witness (checked: a cocycle with `inv = 1`).
    pub fn with_witness(
        name: impl Into<String>,
        inv: InvFunctional,
        orientation: i8,
        unramified: Option<Unramified>,
        witness: Option<Cochain>,
    ) -> Result<Self> {
        let name = name.into();
        if orientation != 1 && orientation != -1 {
            return Err(Error::ModelViolation(format!("{name}: orientation must be +1 or -1")));
        }
        if let Some(w) = &witness {
            check_cocycle(w)?;
            if w.group().as_ref() != inv.group.as_ref() || inv.eval(w) != 1 % inv.modulus {
                return Err(Error::ModelViolation(format!("{name}: witness does not have inv = 1")));
            }
        }
        if let Some(u) = &unramified {
            if u.projection.source().as_ref() != inv.group.as_ref() || u.projection.target().as_ref() != u.group.as_ref() {
                return Err(Error::ModelViolation(format!("{name}: unramified map has the wrong shape")));
            }
            if !u.projection.is_surjective() {
                return Err(Error::ModelViolation(format!("{name}: unramified map is not surjective")));
            }
        }
        Ok(LocalDatum { name, inv, orientation, witness, unramified })
    }

    /// Klein-four model `Z/2 × Z/2` with the commutator pairing of the two
    /// coordinate generators; the unramified quotient (if requested) is the
    /// first coordinate.
    pub fn klein(name: impl Into<String>, modulus: u32, with_unramified: bool) -> Result<Self> {
        Self::tame(name, 2, 2, modulus, with_unramified)
    }

    /// `Z/f × Z/e` (Frobenius × inertia) with the commutator pairing of the
    /// generators; witness `α(g,h) = g₁·h₂·(N/gcd)` when it exists.
    pub fn tame(name: impl Into<String>, frobenius: usize, inertia: usize, modulus: u32, with_unramified: bool) -> Result<Self> {
        let group = Arc::new(FiniteGroup::abelian(&[frobenius, inertia]));
        let gens = group.generators().to_vec();
        let inv = InvFunctional::commutator(group.clone(), modulus, gens[0], gens[1])?;
        let unramified = if with_unramified {
            let quotient = Arc::new(FiniteGroup::cyclic(frobenius));
            let projection = GroupHom::from_generator_images(group.clone(), quotient.clone(), &[1, 0])?;
            Some(Unramified { group: quotient, projection })
        } else {
            None
        };
        Self::new(name, inv, 1, unramified)
    }

    /// Cyclic model `Z/n` with the carry functional; optionally with the
    /// reduction `Z/n → Z/m` as unramified quotient.
    pub fn cyclic_carry(name: impl Into<String>, n: usize, modulus: u32, unramified_order: Option<usize>) -> Result<Self> {
        let group = Arc::new(FiniteGroup::cyclic(n));
        let inv = InvFunctional::carry(group.clone(), modulus, 1)?;
        let witness = Cochain::from_fn(group.clone(), 2, modulus, |t| ((t[0] + t[1]) as usize / n) as i64);
        let witness = (inv.eval(&witness) == 1 % modulus).then_some(witness);
        let unramified = match unramified_order {
            Some(m) => {
                let quotient = Arc::new(FiniteGroup::cyclic(m));
                let projection = GroupHom::from_generator_images(group.clone(), quotient.clone(), &[1])?;
                Some(Unramified { group: quotient, projection })
            }
            None => None,
        };
        match witness {
            Some(w) => Self::with_witness(name, inv, 1, unramified, Some(w)),
            None => Self::new(name, inv, 1, unramified),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.inv.group
    }

    pub fn modulus(&self) -> u32 {
        self.inv.modulus
    }

    /// The functional before the orientation sign is applied.
    pub fn raw_inv(&self) -> &InvFunctional {
        &self.inv
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn unramified(&self) -> Option<&Unramified> {
        self.unramified.as_ref()
    }

    pub fn with_orientation(&self, orientation: i8) -> Self {
        LocalDatum { orientation, ..self.clone() }
    }

    /// `orientation · inv(α)`.
    pub fn inv_value(&self, alpha: &Cochain) -> u32 {
        let raw = self.inv.eval(alpha);
        if self.orientation == 1 || raw == 0 {
            raw
        } else {
            self.inv.modulus - raw
        }
    }

    /// A 2-cocycle with oriented `inv = 1`.
    pub fn unit_cocycle(&self) -> Result<Cochain> {
        self.witness
            .as_ref()
            .map(|w| w.scale(self.orientation as i64))
            .ok_or_else(|| Error::ModelViolation(format!("{}: inv is not surjective on 2-cocycles", self.name)))
    }

    /// The raw witness (`inv = 1` before orientation).
    pub fn witness(&self) -> Option<&Cochain> {
        self.witness.as_ref()
    }

    /// Same name, group, functional and orientation.
    pub fn same_datum(&self, other: &LocalDatum) -> bool {
        self.name == other.name && self.orientation == other.orientation && self.inv == other.inv
    }
}

/// The datum with the opposite orientation.
pub fn reverse_orientation(d: &LocalDatum) -> LocalDatum {
    d.with_orientation(-d.orientation)
}

/// Outcome of the local axiom checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalReport {
    pub name: String,
    /// An indicator 1-cochain `δ_x` with `inv(dδ_x) ≠ 0`, if any.
    pub coboundary_counterexample: Option<Elem>,
    pub surjective: bool,
    /// Generator images of representations `ρ_p` with `c∘ρ_p ∉ B³`.
    pub unsolvable: Vec<Vec<Elem>>,
}

impl LocalReport {
    pub fn passed(&self) -> bool {
        self.coboundary_counterexample.is_none() && self.surjective && self.unsolvable.is_empty()
    }
}

/// Checks the invariant-functional axioms and local solvability of `c∘ρ_p`.
pub fn check_local_axioms(d: &LocalDatum, gauge: &Gauge) -> Result<LocalReport> {
    let space = HomSpace::new(d.group().clone(), gauge.group().clone());
    let mut unsolvable = Vec::new();
    for rho in space.homs() {
        if solve_coboundary(&gauge.cocycle().pullback(rho))?.is_none() {
            unsolvable.push(rho.generator_images());
        }
    }
    Ok(LocalReport {
        name: d.name.clone(),
        coboundary_counterexample: d.inv.coboundary_counterexample(),
        surjective: d.witness.is_some(),
        unsolvable,
    })
}

/// `F_S = Π_i Hom(Q_{p_i}, G)`, indexed with the first factor most significant.
#[derive(Clone, Debug)]
pub struct ProductSpace {
    factors: Vec<Arc<HomSpace>>,
    len: usize,
}

impl ProductSpace {
    pub fn new(factors: Vec<Arc<HomSpace>>) -> Self {
        let len = factors.iter().map(|f| f.len()).product();
        ProductSpace { factors, len }
    }

    pub fn factors(&self) -> &[Arc<HomSpace>] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (slot, f) in out.iter_mut().zip(&self.factors).rev() {
            *slot = index % f.len();
            index /= f.len();
        }
        out
    }

    pub fn encode(&self, parts: &[usize]) -> usize {
        parts.iter().zip(&self.factors).fold(0, |acc, (&p, f)| acc * f.len() + p)
    }

    /// Index of `ρ_S.g`.
    pub fn act(&self, index: usize, g: Elem) -> usize {
        let parts: Vec<usize> = self.decode(index).iter().zip(&self.factors).map(|(&i, f)| f.conj(i, g)).collect();
        self.encode(&parts)
    }

    pub fn orbits(&self, gauge_group: &FiniteGroup) -> Vec<Orbit> {
        orbits_by_action(self.len, gauge_group, |i, g| self.act(i, g))
    }

    /// Generator images of each component of `ρ_S`.
    pub fn describe(&self, index: usize) -> Vec<Vec<Elem>> {
        self.decode(index).iter().zip(&self.factors).map(|(&i, f)| f.get(i).generator_images()).collect()
    }
}

/// A section `x_p` over `F_p` for one local datum.
#[derive(Clone, Debug)]
pub struct LocalSection {
    datum: Arc<LocalDatum>,
    space: Arc<HomSpace>,
    values: Vec<Cochain>,
}

impl LocalSection {
    pub fn datum(&self) -> &Arc<LocalDatum> {
        &self.datum
    }

    pub fn space(&self) -> &Arc<HomSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Cochain] {
        &self.values
    }

    /// `x_p(ρ_p)` as a fiber element.
    pub fn element(&self, index: usize) -> FiberElement {
        FiberElement::new_unchecked(self.datum.clone(), self.space.get(index).clone(), self.values[index].clone())
    }

    /// `λ_p(g, ρ_p)` for all `ρ_p` and `g`, stored at `ρ · |G| + g`.
    pub fn lambda_table(&self, gauge: &Gauge) -> Vec<u32> {
        let order = gauge.group().order();
        let mut table = vec![0; self.space.len() * order];
        for (i, rho) in self.space.homs().iter().enumerate() {
            for g in gauge.group().elements() {
                let moved = self.space.conj(i, g);
                let alpha = &(&self.values[i] + &gauge.h(g).pullback(rho)) - &self.values[moved];
                table[i * order + g as usize] = self.datum.inv_value(&alpha);
            }
        }
        table
    }
}

/// A section `x_S` of the fibers over `F_S` for an ordered list of local data.
#[derive(Clone, Debug)]
pub struct Section {
    tag: String,
    parts: Vec<LocalSection>,
}

impl Section {
    /// The deterministic solver section `x_p(ρ_p) = solve(c∘ρ_p)`.
    pub fn default_section(data: &[Arc<LocalDatum>], gauge: &Gauge) -> Result<Self> {
        let mut parts = Vec::with_capacity(data.len());
        for d in data {
            let space = Arc::new(HomSpace::new(d.group().clone(), gauge.group().clone()));
            let mut values = Vec::with_capacity(space.len());
            for rho in space.homs() {
                let target = gauge.cocycle().pullback(rho);
                let beta = solve_coboundary(&target)?.ok_or_else(|| {
                    Error::ModelViolation(format!(
                        "{}: c∘ρ is not a coboundary for ρ = {:?}",
                        d.name(),
                        rho.generator_images()
                    ))
                })?;
                values.push(beta);
            }
            parts.push(LocalSection { datum: d.clone(), space, values });
        }
        Ok(Section { tag: "default".into(), parts })
    }

    /// Builds a section from explicit representatives (each checked).
    pub fn from_values(tag: impl Into<String>, data: &[Arc<LocalDatum>], gauge: &Gauge, values: Vec<Vec<Cochain>>) -> Result<Self> {
        let mut parts = Vec::new();
        for (d, vals) in data.iter().zip(values) {
            let space = Arc::new(HomSpace::new(d.group().clone(), gauge.group().clone()));
            if vals.len() != space.len() {
                return Err(Error::MismatchedFiber(format!("{}: section has {} values for {} representations", d.name(), vals.len(), space.len())));
            }
            for (rho, v) in space.homs().iter().zip(&vals) {
                FiberElement::new(d.clone(), gauge, rho.clone(), v.clone())?;
            }
            parts.push(LocalSection { datum: d.clone(), space, values: vals });
        }
        Ok(Section { tag: tag.into(), parts })
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = tag.into();
        self
    }

    pub fn parts(&self) -> &[LocalSection] {
        &self.parts
    }

    pub fn names(&self) -> Vec<String> {
        self.parts.iter().map(|p| p.datum.name().to_string()).collect()
    }

    pub fn part(&self, name: &str) -> Option<&LocalSection> {
        self.parts.iter().find(|p| p.datum.name() == name)
    }

    pub fn space(&self) -> ProductSpace {
        ProductSpace::new(self.parts.iter().map(|p| p.space.clone()).collect())
    }

    /// The sub-section over the named data, in the given order.
    pub fn restrict(&self, names: &[&str]) -> Result<Section> {
        let parts = names
            .iter()
            .map(|n| self.part(n).cloned().ok_or_else(|| Error::MismatchedFiber(format!("section has no component {n}"))))
            .collect::<Result<_>>()?;
        Ok(Section { tag: self.tag.clone(), parts })
    }

    /// Same representatives over the orientation-reversed data.
    pub fn reversed(&self) -> Section {
        let parts = self
            .parts
            .iter()
            .map(|p| LocalSection { datum: Arc::new(reverse_orientation(&p.datum)), ..p.clone() })
            .collect();
        Section { tag: format!("{}*", self.tag), parts }
    }

    /// Componentwise concatenation `(x_{S₁}, x_{S₂})`.
    pub fn concat(&self, other: &Section) -> Result<Section> {
        if let Some(p) = other.parts.iter().find(|p| self.part(p.datum.name()).is_some()) {
            return Err(Error::MismatchedFiber(format!("component {} appears twice", p.datum.name())));
        }
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        Ok(Section { tag: format!("{}+{}", self.tag, other.tag), parts })
    }

    /// Moves `x_p(ρ_p)` by `m` along the torsor action.
    pub fn act_at(&self, part: usize, index: usize, m: i64) -> Result<Section> {
        let mut out = self.clone();
        let unit = out.parts[part].datum.unit_cocycle()?;
        let slot = &mut out.parts[part].values[index];
        *slot = &*slot + &unit.scale(m);
        out.tag = format!("{}.act({part},{index},{m})", self.tag);
        Ok(out)
    }

    /// A random other section: each representative is moved by a random
    /// multiple of the unit cocycle and a random coboundary.
    pub fn perturbed(&self, seed: u64) -> Result<Section> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = self.clone();
        for part in &mut out.parts {
            let unit = part.datum.unit_cocycle()?;
            let group = part.datum.group().clone();
            let modulus = part.datum.modulus();
            for value in &mut part.values {
                let m = rng.gen_range(0..modulus as i64);
                let raw: Vec<u64> = (0..group.order()).map(|_| rng.gen_range(0..modulus as u64)).collect();
                let beta = Cochain::from_values(group.clone(), 1, modulus, raw);
                *value = &(&*value + &unit.scale(m)) + &beta.coboundary();
            }
        }
        out.tag = format!("{}~{seed}", self.tag);
        Ok(out)
    }

    /// The section `x + b∘ρ` for the cocycle `c + db`.
    pub fn shifted_by(&self, b: &Cochain) -> Section {
        let mut out = self.clone();
        for part in &mut out.parts {
            for (value, rho) in part.values.iter_mut().zip(part.space.homs()) {
                *value = &*value + &b.pullback(rho);
            }
        }
        out.tag = format!("{}+b", self.tag);
        out
    }

    pub(crate) fn from_parts(tag: String, parts: Vec<LocalSection>) -> Section {
        Section { tag, parts }
    }
}

impl LocalSection {
    pub(crate) fn new_unchecked(datum: Arc<LocalDatum>, space: Arc<HomSpace>, values: Vec<Cochain>) -> Self {
        LocalSection { datum, space, values }
    }
}

/// `λ_p(g, ρ_p) = f_p(g,ρ_p)(x_p(ρ_p)) − x_p(ρ_p.g)`, evaluated through the torsor.
pub fn lambda_p(x: &Section, part: usize, gauge: &Gauge, g: Elem, rho_index: usize) -> Result<u32> {
    let p = &x.parts[part];
    let rho = p.space.get(rho_index).clone();
    let f = FiberMap::gauge(p.datum.clone(), gauge, g, rho);
    let moved = p.space.conj(rho_index, g);
    crate::torsor::transition_scalar(&f, &p.element(rho_index), &p.element(moved))
}

/// Precomputed `λ_S` for a section.
#[derive(Clone, Debug)]
pub struct LambdaS {
    space: ProductSpace,
    order: usize,
    tables: Vec<Vec<u32>>,
    modulus: u32,
}

impl LambdaS {
    pub fn new(x: &Section, gauge: &Gauge) -> Self {
        LambdaS {
            space: x.space(),
            order: gauge.group().order(),
            tables: x.parts.iter().map(|p| p.lambda_table(gauge)).collect(),
            modulus: gauge.modulus(),
        }
    }

    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    /// `λ_S(g, ρ_S) = Σ_i λ_{p_i}(g, ρ_{p_i})`.
    pub fn value(&self, g: Elem, index: usize) -> u32 {
        let parts = self.space.decode(index);
        let total: u64 = parts.iter().zip(&self.tables).map(|(&i, t)| t[i * self.order + g as usize] as u64).sum();
        (total % self.modulus as u64) as u32
    }
}

/// `λ_S(g, ρ_S)` for a tuple of component indices.
pub fn lambda_s(x: &Section, gauge: &Gauge, g: Elem, rho_s: &[usize]) -> Result<u32> {
    if rho_s.len() != x.parts.len() {
        return Err(Error::MismatchedFiber(format!("{} components for a section over {} data", rho_s.len(), x.parts.len())));
    }
    let mut total = 0u64;
    for (k, &i) in rho_s.iter().enumerate() {
        total += lambda_p(x, k, gauge, g, i)? as u64;
    }
    Ok((total % gauge.modulus() as u64) as u32)
}

/// `δ^{x,x'}(ρ_S) = Σ_i (x_{p_i}(ρ_{p_i}) − x'_{p_i}(ρ_{p_i}))`.
pub fn delta_sections(x: &Section, x_prime: &Section, rho_s: &[usize]) -> Result<u32> {
    if x.parts.len() != x_prime.parts.len() || rho_s.len() != x.parts.len() {
        return Err(Error::MismatchedFiber("sections over different data".into()));
    }
    let mut total = 0u64;
    let mut modulus = 1;
    for ((p, q), &i) in x.parts.iter().zip(&x_prime.parts).zip(rho_s) {
        modulus = p.datum.modulus() as u64;
        total += diff(&p.element(i), &q.element(i))? as u64;
    }
    Ok((total % modulus) as u32)
}

/// `δ^{x,x'}` over all of `F_S`.
pub fn delta_table(x: &Section, x_prime: &Section) -> Result<Vec<u32>> {
    let space = x.space();
    (0..space.len()).map(|i| delta_sections(x, x_prime, &space.decode(i))).collect()
}
