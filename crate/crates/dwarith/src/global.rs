//! Global models: a finite quotient `Q_S` with local attachments, the
//! Chern–Simons functional, tube invariants over unramified quotients and
//! the gluing data relating them.

use std::sync::Arc;

use crate::cochain::Cochain;
use crate::cohomology::{cohomology_basis, solve_coboundary_with, SolveStrategy};
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, GroupHom, HomSpace};
use crate::local::{check_local_axioms, Gauge, LocalDatum, LocalReport, ProductSpace, Section};

/// A local datum attached to the global group by `ι_p: Q_p → Q_S`.
#[derive(Clone, Debug)]
pub struct Attachment {
    pub local: Arc<LocalDatum>,
    pub iota: GroupHom,
}

#[derive(Clone, Debug)]
pub struct GlobalDatum {
    label: String,
    group: Arc<FiniteGroup>,
    attachments: Vec<Attachment>,
}

impl GlobalDatum {
    pub fn new(label: impl Into<String>, group: Arc<FiniteGroup>, attachments: Vec<Attachment>) -> Result<Self> {
        let label = label.into();
        for (k, a) in attachments.iter().enumerate() {
            if a.iota.source().as_ref() != a.local.group().as_ref() || a.iota.target().as_ref() != group.as_ref() {
                return Err(Error::ModelViolation(format!("{label}: attachment map for {} has the wrong shape", a.local.name())));
            }
            if attachments[..k].iter().any(|b| b.local.name() == a.local.name()) {
                return Err(Error::ModelViolation(format!("{label}: prime {} is attached twice", a.local.name())));
            }
        }
        Ok(GlobalDatum { label, group, attachments })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn attachments(&self) -> &[Attachment] {
        &self.attachments
    }

    pub fn data(&self) -> Vec<Arc<LocalDatum>> {
        self.attachments.iter().map(|a| a.local.clone()).collect()
    }

    pub fn names(&self) -> Vec<&str> {
        self.attachments.iter().map(|a| a.local.name()).collect()
    }

    /// `res_S(ρ) = (ρ∘ι_p)_p`.
    pub fn restrict(&self, rho: &GroupHom) -> Vec<GroupHom> {
        self.attachments.iter().map(|a| rho.compose_after(&a.iota)).collect()
    }

    /// The same model over orientation-reversed local data.
    pub fn reversed(&self) -> GlobalDatum {
        let attachments = self
            .attachments
            .iter()
            .map(|a| Attachment { local: Arc::new(crate::local::reverse_orientation(&a.local)), iota: a.iota.clone() })
            .collect();
        GlobalDatum { label: format!("{}*", self.label), group: self.group.clone(), attachments }
    }
}

/// A `Z²(Q_S)` basis cocycle on which `Σ_p inv_p ∘ ι_p*` is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReciprocityFailure {
    pub basis_index: usize,
    pub total: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalReport {
    pub label: String,
    pub locals: Vec<LocalReport>,
    pub reciprocity_failures: Vec<ReciprocityFailure>,
    /// Generator images of `ρ: Q_S → G` with `c∘ρ ∉ B³(Q_S)`.
    pub unsolvable: Vec<Vec<Elem>>,
}

impl GlobalReport {
    pub fn passed(&self) -> bool {
        self.locals.iter().all(|l| l.passed()) && self.reciprocity_failures.is_empty() && self.unsolvable.is_empty()
    }
}

fn reciprocity_failures(gd: &GlobalDatum, modulus: u32) -> Result<Vec<ReciprocityFailure>> {
    let basis = cohomology_basis(&gd.group, modulus, 2)?;
    let mut failures = Vec::new();
    for (k, z) in basis.cocycle_basis.iter().enumerate() {
        let total: u64 = gd.attachments.iter().map(|a| a.local.inv_value(&z.pullback(&a.iota)) as u64).sum();
        let total = (total % modulus as u64) as u32;
        if total != 0 {
            failures.push(ReciprocityFailure { basis_index: k, total });
        }
    }
    Ok(failures)
}

/// Local axioms on every attachment, reciprocity over a basis of `Z²(Q_S)`
/// and solvability of `c∘ρ` for every `ρ: Q_S → G`.
pub fn check_global_axioms(gd: &GlobalDatum, gauge: &Gauge) -> Result<GlobalReport> {
    let locals = gd.attachments.iter().map(|a| check_local_axioms(&a.local, gauge)).collect::<Result<_>>()?;
    let reciprocity_failures = reciprocity_failures(gd, gauge.modulus())?;
    let space = HomSpace::new(gd.group.clone(), gauge.group().clone());
    let mut unsolvable = Vec::new();
    for rho in space.homs() {
        if solve_coboundary_with(&gauge.cocycle().pullback(rho), SolveStrategy::Canonical)?.is_none() {
            unsolvable.push(rho.generator_images());
        }
    }
    Ok(GlobalReport { label: gd.label.clone(), locals, reciprocity_failures, unsolvable })
}

/// A global datum that satisfies reciprocity for a given gauge theory.
#[derive(Clone, Debug)]
pub struct GlobalModel {
    datum: GlobalDatum,
    gauge: Arc<Gauge>,
    homs: Arc<HomSpace>,
}

impl GlobalModel {
    /// Fails with `ReciprocityViolation` if the model would make `CS` depend
    /// on the choice of `β_ρ`, and with `ModelViolation` if a local datum is
    /// not a valid invariant functional.
    pub fn new(datum: GlobalDatum, gauge: Arc<Gauge>) -> Result<Self> {
        for a in &datum.attachments {
            if let Some(x) = a.local.raw_inv().coboundary_counterexample() {
                return Err(Error::ModelViolation(format!("{}: inv does not vanish on d(δ_{x})", a.local.name())));
            }
            if a.local.modulus() != gauge.modulus() {
                return Err(Error::ModelViolation(format!("{}: modulus differs from the gauge modulus", a.local.name())));
            }
        }
        let failures = reciprocity_failures(&datum, gauge.modulus())?;
        if let Some(f) = failures.first() {
            return Err(Error::ReciprocityViolation(format!(
                "{}: Σ inv_p(ι_p* z) = {} for basis cocycle #{} of Z²({})",
                datum.label,
                f.total,
                f.basis_index,
                datum.group.label()
            )));
        }
        let homs = Arc::new(HomSpace::new(datum.group.clone(), gauge.group().clone()));
        Ok(GlobalModel { datum, gauge, homs })
    }

    pub fn datum(&self) -> &GlobalDatum {
        &self.datum
    }

    pub fn gauge(&self) -> &Arc<Gauge> {
        &self.gauge
    }

    /// `Hom(Q_S, G)`.
    pub fn homs(&self) -> &Arc<HomSpace> {
        &self.homs
    }

    fn section_for(&self, x: &Section) -> Result<Section> {
        let section = x.restrict(&self.datum.names())?;
        for (part, a) in section.parts().iter().zip(&self.datum.attachments) {
            if !part.datum().same_datum(&a.local) {
                return Err(Error::MismatchedFiber(format!("section component {} has other local data", a.local.name())));
            }
        }
        Ok(section)
    }

    /// Index in `F_S` (ordered as the attachments) of `res_S(ρ)`.
    pub fn restriction_index(&self, x: &Section, rho: usize) -> Result<usize> {
        let section = self.section_for(x)?;
        self.restriction_in(&section.space(), rho)
    }

    fn restriction_in(&self, space: &ProductSpace, rho: usize) -> Result<usize> {
        let parts: Vec<usize> = self
            .datum
            .restrict(self.homs.get(rho))
            .iter()
            .zip(space.factors())
            .map(|(r, f)| f.index_of(r).expect("restriction is a representation of Q_p"))
            .collect();
        Ok(space.encode(&parts))
    }

    /// A solution `β_ρ` of `dβ = c∘ρ`.
    pub fn beta(&self, rho: usize, strategy: SolveStrategy) -> Result<Cochain> {
        let rho = self.homs.get(rho);
        solve_coboundary_with(&self.gauge.cocycle().pullback(rho), strategy)?.ok_or_else(|| {
            Error::ModelViolation(format!(
                "{}: c∘ρ is not a coboundary on {} for ρ = {:?}",
                self.datum.label,
                self.datum.group.label(),
                rho.generator_images()
            ))
        })
    }

    /// `CS(ρ) = Σ_p inv_p(β_ρ∘ι_p − x_p(ρ∘ι_p))`.
    pub fn cs(&self, x: &Section, rho: usize, strategy: SolveStrategy) -> Result<u32> {
        let section = self.section_for(x)?;
        let beta = self.beta(rho, strategy)?;
        self.cs_with_beta(&section, rho, &beta)
    }

    fn cs_with_beta(&self, section: &Section, rho: usize, beta: &Cochain) -> Result<u32> {
        let rho_hom = self.homs.get(rho);
        let mut total = 0u64;
        for (part, a) in section.parts().iter().zip(&self.datum.attachments) {
            let local_rho = rho_hom.compose_after(&a.iota);
            let i = part.space().index_of(&local_rho).expect("restriction is a representation of Q_p");
            let alpha = &beta.pullback(&a.iota) - &part.values()[i];
            total += a.local.inv_value(&alpha) as u64;
        }
        Ok((total % self.gauge.modulus() as u64) as u32)
    }

    /// `CS(ρ)` for every `ρ ∈ Hom(Q_S, G)`.
    pub fn cs_table(&self, x: &Section, strategy: SolveStrategy) -> Result<Vec<u32>> {
        let section = self.section_for(x)?;
        (0..self.homs.len()).map(|rho| self.cs_with_beta(&section, rho, &self.beta(rho, strategy)?)).collect()
    }

    /// Recomputes `CS` with a differently pivoted solver and fails with
    /// `ReciprocityViolation` on any disagreement.
    pub fn check_beta_independence(&self, x: &Section, seed: u64) -> Result<Vec<u32>> {
        let canonical = self.cs_table(x, SolveStrategy::Canonical)?;
        let shuffled = self.cs_table(x, SolveStrategy::Shuffled(seed))?;
        if let Some(rho) = (0..canonical.len()).find(|&k| canonical[k] != shuffled[k]) {
            return Err(Error::ReciprocityViolation(format!(
                "{}: CS({:?}) is {} or {} depending on the choice of β",
                self.datum.label,
                self.homs.get(rho).generator_images(),
                canonical[rho],
                shuffled[rho]
            )));
        }
        Ok(canonical)
    }

    /// Restriction indices in `F_S` for every `ρ`.
    pub fn restriction_table(&self, x: &Section) -> Result<Vec<usize>> {
        let section = self.section_for(x)?;
        let space = section.space();
        (0..self.homs.len()).map(|rho| self.restriction_in(&space, rho)).collect()
    }
}

/// `CS^{x_S}(ρ)` with the canonical solver.
pub fn cs_global(model: &GlobalModel, x: &Section, rho: &GroupHom) -> Result<u32> {
    let index = model
        .homs
        .index_of(rho)
        .ok_or_else(|| Error::MismatchedFiber(format!("{rho:?} is not a representation of {}", model.datum.group.label())))?;
    model.cs(x, index, SolveStrategy::Canonical)
}

/// Tubes over local data with unramified quotients.
#[derive(Clone, Debug)]
pub struct TubeModel {
    data: Vec<Arc<LocalDatum>>,
    gauge: Arc<Gauge>,
    spaces: Vec<Arc<HomSpace>>,
}

impl TubeModel {
    /// Fails with `BetaDependence` unless `inv_p ∘ v_p*` kills `Z²(Q̃_p)`.
    pub fn new(data: Vec<Arc<LocalDatum>>, gauge: Arc<Gauge>) -> Result<Self> {
        let mut spaces = Vec::new();
        for d in &data {
            let u = d
                .unramified()
                .ok_or_else(|| Error::ModelViolation(format!("{} has no unramified quotient", d.name())))?;
            let basis = cohomology_basis(&u.group, gauge.modulus(), 2)?;
            for (k, z) in basis.cocycle_basis.iter().enumerate() {
                let value = d.inv_value(&z.pullback(&u.projection));
                if value != 0 {
                    return Err(Error::BetaDependence(format!(
                        "{}: inv_p(v_p* z) = {value} for basis cocycle #{k} of Z²({})",
                        d.name(),
                        u.group.label()
                    )));
                }
            }
            spaces.push(Arc::new(HomSpace::new(u.group.clone(), gauge.group().clone())));
        }
        Ok(TubeModel { data, gauge, spaces })
    }

    pub fn data(&self) -> &[Arc<LocalDatum>] {
        &self.data
    }

    pub fn gauge(&self) -> &Arc<Gauge> {
        &self.gauge
    }

    pub fn names(&self) -> Vec<&str> {
        self.data.iter().map(|d| d.name()).collect()
    }

    /// `Π_p Hom(Q̃_p, G)`.
    pub fn space(&self) -> ProductSpace {
        ProductSpace::new(self.spaces.clone())
    }

    fn section_for(&self, x: &Section) -> Result<Section> {
        let section = x.restrict(&self.names())?;
        for (part, d) in section.parts().iter().zip(&self.data) {
            if !part.datum().same_datum(d) {
                return Err(Error::MismatchedFiber(format!("section component {} has other local data", d.name())));
            }
        }
        Ok(section)
    }

    /// Index in `F_S` of the boundary restriction `(ρ̃_p∘v_p)_p`.
    pub fn boundary_index(&self, x: &Section, tilde: usize) -> Result<usize> {
        let section = self.section_for(x)?;
        Ok(self.boundary_in(&section.space(), tilde))
    }

    fn boundary_in(&self, space: &ProductSpace, tilde: usize) -> usize {
        let parts: Vec<usize> = self
            .space()
            .decode(tilde)
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                let rho = self.spaces[k].get(i).compose_after(&self.data[k].unramified().unwrap().projection);
                space.factors()[k].index_of(&rho).expect("boundary is a representation of Q_p")
            })
            .collect();
        space.encode(&parts)
    }

    /// `CS_V(ρ̃) = Σ_p inv_p(β̃_p∘v_p − x_p(ρ̃_p∘v_p))`.
    pub fn cs(&self, x: &Section, tilde: usize, strategy: SolveStrategy) -> Result<u32> {
        let section = self.section_for(x)?;
        self.cs_in(&section, tilde, strategy)
    }

    fn cs_in(&self, section: &Section, tilde: usize, strategy: SolveStrategy) -> Result<u32> {
        let mut total = 0u64;
        for (k, &i) in self.space().decode(tilde).iter().enumerate() {
            let d = &self.data[k];
            let v = &d.unramified().unwrap().projection;
            let rho_tilde = self.spaces[k].get(i);
            let beta = solve_coboundary_with(&self.gauge.cocycle().pullback(rho_tilde), strategy)?.ok_or_else(|| {
                Error::ModelViolation(format!(
                    "{}: c∘ρ̃ is not a coboundary on {} for ρ̃ = {:?}",
                    d.name(),
                    v.target().label(),
                    rho_tilde.generator_images()
                ))
            })?;
            let part = &section.parts()[k];
            let j = part.space().index_of(&rho_tilde.compose_after(v)).expect("boundary is a representation of Q_p");
            total += d.inv_value(&(&beta.pullback(v) - &part.values()[j])) as u64;
        }
        Ok((total % self.gauge.modulus() as u64) as u32)
    }

    pub fn cs_table(&self, x: &Section, strategy: SolveStrategy) -> Result<Vec<u32>> {
        let section = self.section_for(x)?;
        (0..self.space().len()).map(|t| self.cs_in(&section, t, strategy)).collect()
    }

    pub fn boundary_table(&self, x: &Section) -> Result<Vec<usize>> {
        let section = self.section_for(x)?;
        let space = section.space();
        Ok((0..self.space().len()).map(|t| self.boundary_in(&space, t)).collect())
    }

    /// Generator-image tuples `ρ̃` with some `c∘ρ̃_p` unsolvable.
    pub fn unsolvable(&self) -> Result<Vec<Vec<Vec<Elem>>>> {
        let space = self.space();
        let mut out = Vec::new();
        for t in 0..space.len() {
            let bad = space.decode(t).iter().enumerate().try_fold(false, |acc, (k, &i)| {
                Ok::<_, Error>(acc || solve_coboundary_with(&self.gauge.cocycle().pullback(self.spaces[k].get(i)), SolveStrategy::Canonical)?.is_none())
            })?;
            if bad {
                out.push(space.describe(t));
            }
        }
        Ok(out)
    }
}

/// `CS_V(ρ̃)` for a tuple of representations of the unramified quotients.
pub fn cs_tube(tube: &TubeModel, x: &Section, rho_tilde: &[GroupHom]) -> Result<u32> {
    if rho_tilde.len() != tube.data.len() {
        return Err(Error::MismatchedFiber("one representation per tube component is required".into()));
    }
    let parts: Vec<usize> = rho_tilde
        .iter()
        .zip(&tube.spaces)
        .map(|(r, s)| s.index_of(r).ok_or_else(|| Error::MismatchedFiber(format!("{r:?} is not a representation of the unramified quotient"))))
        .collect::<Result<_>>()?;
    tube.cs(x, tube.space().encode(&parts), SolveStrategy::Canonical)
}

/// `S = S₁ ⊔ S₂` with `η: Q_S → Q_{S₁}` and `u_p: Q̃_p → Q_{S₁}` for `p ∈ S₂`.
#[derive(Clone, Debug)]
pub struct GluingDatum {
    label: String,
    outer: GlobalDatum,
    inner: GlobalDatum,
    eta: GroupHom,
    u: Vec<(String, GroupHom)>,
}

impl GluingDatum {
    /// Checks the structural conditions: inner primes are outer primes with
    /// the same local data and `η∘ι_p = ι'_p`; `η` is surjective; every
    /// `p ∈ S₂` has an unramified quotient and `u_p∘v_p = η∘ι_p`.
    pub fn new(label: impl Into<String>, outer: GlobalDatum, inner: GlobalDatum, eta: GroupHom, u: Vec<(String, GroupHom)>) -> Result<Self> {
        let label = label.into();
        let fail = |msg: String| Err(Error::ModelViolation(format!("{label}: {msg}")));
        if eta.source().as_ref() != outer.group.as_ref() || eta.target().as_ref() != inner.group.as_ref() {
            return fail("η must map the outer group onto the inner group".into());
        }
        if !eta.is_surjective() {
            return fail("η is not surjective".into());
        }
        for a in &inner.attachments {
            let Some(b) = outer.attachments.iter().find(|b| b.local.name() == a.local.name()) else {
                return fail(format!("inner prime {} is not an outer prime", a.local.name()));
            };
            if !a.local.same_datum(&b.local) {
                return fail(format!("prime {} carries different local data inside and outside", a.local.name()));
            }
            if eta.compose_after(&b.iota) != a.iota {
                return fail(format!("η∘ι_p differs from the inner attachment at {}", a.local.name()));
            }
        }
        let outer_names = outer.names();
        let positions: Vec<usize> =
            inner.names().iter().map(|n| outer_names.iter().position(|m| m == n).unwrap()).collect();
        if positions.windows(2).any(|w| w[0] > w[1]) {
            return fail("inner primes must appear in the same order as in the outer model".into());
        }
        let mut ordered_u = Vec::new();
        for b in &outer.attachments {
            let name = b.local.name();
            if inner.attachments.iter().any(|a| a.local.name() == name) {
                continue;
            }
            let Some(unr) = b.local.unramified() else {
                return fail(format!("{name} has no unramified quotient"));
            };
            let Some((_, up)) = u.iter().find(|(n, _)| n == name) else {
                return fail(format!("no map u_p for {name}"));
            };
            if up.source().as_ref() != unr.group.as_ref() || up.target().as_ref() != inner.group.as_ref() {
                return fail(format!("u_p for {name} has the wrong shape"));
            }
            if up.compose_after(&unr.projection) != eta.compose_after(&b.iota) {
                return fail(format!("u_p∘v_p differs from η∘ι_p at {name}"));
            }
            ordered_u.push((name.to_string(), up.clone()));
        }
        if let Some((name, _)) = u.iter().find(|(n, _)| !ordered_u.iter().any(|(m, _)| m == n)) {
            return fail(format!("u_p given for {name}, which is not in S₂"));
        }
        Ok(GluingDatum { label, outer, inner, eta, u: ordered_u })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn outer(&self) -> &GlobalDatum {
        &self.outer
    }

    pub fn inner(&self) -> &GlobalDatum {
        &self.inner
    }

    pub fn eta(&self) -> &GroupHom {
        &self.eta
    }

    /// `(p, u_p)` for `p ∈ S₂`, in outer attachment order.
    pub fn u_maps(&self) -> &[(String, GroupHom)] {
        &self.u
    }

    pub fn s1_names(&self) -> Vec<&str> {
        self.inner.names()
    }

    pub fn s2_names(&self) -> Vec<&str> {
        self.u.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn is_closed(&self) -> bool {
        self.inner.attachments.is_empty()
    }
}

/// Both sides of the decomposition formula at one `ρ₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionRow {
    pub rho1: Vec<Elem>,
    /// `CS_{S₁}(ρ₁)`; `None` for the closed case.
    pub inner: Option<u32>,
    /// `CS_{V_{S₂}}((ρ₁∘u_p)_p)`.
    pub tube: u32,
    /// `CS_S(ρ₁∘η)`.
    pub outer: u32,
}

impl DecompositionRow {
    /// `inner + tube = outer`, or `None` when there is no inner side.
    pub fn holds(&self, modulus: u32) -> Option<bool> {
        self.inner.map(|i| (i + self.tube) % modulus == self.outer)
    }
}

/// A gluing datum validated against a gauge theory.
#[derive(Clone, Debug)]
pub struct GluingModel {
    datum: GluingDatum,
    outer: GlobalModel,
    inner: GlobalModel,
    tube: TubeModel,
}

impl GluingModel {
    /// Validates both global models, the tube over `S₂`, and gluing
    /// exactness: `ρ` factors through `η` iff every `ρ∘ι_p` (`p ∈ S₂`)
    /// factors through `v_p`.
    pub fn new(datum: GluingDatum, gauge: Arc<Gauge>) -> Result<Self> {
        let outer = GlobalModel::new(datum.outer.clone(), gauge.clone())?;
        let inner = GlobalModel::new(datum.inner.clone(), gauge.clone())?;
        let s2: Vec<Arc<LocalDatum>> = datum
            .s2_names()
            .iter()
            .map(|n| datum.outer.attachments.iter().find(|a| a.local.name() == *n).unwrap().local.clone())
            .collect();
        let tube = TubeModel::new(s2, gauge)?;
        for rho in outer.homs().homs() {
            let through_eta = rho.factor_through(&datum.eta).is_some();
            let through_v = tube.data.iter().all(|d| {
                let iota = &datum.outer.attachments.iter().find(|a| a.local.name() == d.name()).unwrap().iota;
                rho.compose_after(iota).factor_through(&d.unramified().unwrap().projection).is_some()
            });
            if through_eta != through_v {
                return Err(Error::ModelViolation(format!(
                    "{}: gluing exactness fails at ρ = {:?} (factors through η: {through_eta}, through every v_p: {through_v})",
                    datum.label,
                    rho.generator_images()
                )));
            }
        }
        Ok(GluingModel { datum, outer, inner, tube })
    }

    pub fn datum(&self) -> &GluingDatum {
        &self.datum
    }

    pub fn outer(&self) -> &GlobalModel {
        &self.outer
    }

    pub fn inner(&self) -> &GlobalModel {
        &self.inner
    }

    pub fn tube(&self) -> &TubeModel {
        &self.tube
    }

    /// Index of `ρ₁∘η` in `Hom(Q_S, G)`.
    pub fn lift_index(&self, rho1: usize) -> usize {
        let lifted = self.inner.homs().get(rho1).compose_after(&self.datum.eta);
        self.outer.homs().index_of(&lifted).expect("ρ₁∘η is a representation of Q_S")
    }

    /// Index of `(ρ₁∘u_p)_p` in the tube space.
    pub fn tube_index(&self, rho1: usize) -> usize {
        let rho = self.inner.homs().get(rho1);
        let space = self.tube.space();
        let parts: Vec<usize> = self
            .datum
            .u
            .iter()
            .zip(space.factors())
            .map(|((_, u), f)| f.index_of(&rho.compose_after(u)).expect("ρ₁∘u_p is a representation"))
            .collect();
        space.encode(&parts)
    }

    /// Both sides of `CS_{S₁}(ρ₁) + CS_V(ρ₁∘u) = CS_S(ρ₁∘η)` for `x_S`
    /// (a section over all outer primes).
    pub fn decomposition(&self, x: &Section, rho1: usize) -> Result<DecompositionRow> {
        let outer = self.outer.cs(x, self.lift_index(rho1), SolveStrategy::Canonical)?;
        let tube = self.tube.cs(x, self.tube_index(rho1), SolveStrategy::Canonical)?;
        let inner = if self.datum.is_closed() { None } else { Some(self.inner.cs(x, rho1, SolveStrategy::Canonical)?) };
        Ok(DecompositionRow { rho1: self.inner.homs().get(rho1).generator_images(), inner, tube, outer })
    }

    /// `CS_closed(ρ₁) = CS_S(ρ₁∘η) − CS_V((ρ₁∘u_p)_p)`; only for `S₁ = ∅`.
    pub fn cs_closed(&self, x: &Section, rho1: usize) -> Result<u32> {
        if !self.datum.is_closed() {
            return Err(Error::ModelViolation(format!("{}: the closed invariant needs S₁ = ∅", self.datum.label)));
        }
        let row = self.decomposition(x, rho1)?;
        let m = self.outer.gauge().modulus();
        Ok((row.outer + m - row.tube) % m)
    }

    pub fn cs_closed_table(&self, x: &Section) -> Result<Vec<u32>> {
        (0..self.inner.homs().len()).map(|r| self.cs_closed(x, r)).collect()
    }
}

/// Evaluates the decomposition formula at every `ρ₁`.
pub fn check_decomposition(model: &GluingModel, x: &Section) -> Result<Vec<DecompositionRow>> {
    (0..model.inner.homs().len()).map(|r| model.decomposition(x, r)).collect()
}

/// Closed invariants from several presentations `Q_S → Q̃` of the same
/// closed model must agree; the finite axioms do not force this, so it is
/// checked. Each model is paired with a section over its outer primes.
pub fn check_closed_consistency(models: &[(&GluingModel, &Section)]) -> Result<Vec<u32>> {
    let Some(((first, x0), rest)) = models.split_first() else {
        return Ok(Vec::new());
    };
    let reference = first.cs_closed_table(x0)?;
    for (model, x) in rest {
        if model.inner.datum.group.as_ref() != first.inner.datum.group.as_ref() {
            return Err(Error::ModelViolation(format!(
                "{} and {} glue to different groups",
                first.datum.label, model.datum.label
            )));
        }
        let table = model.cs_closed_table(x)?;
        if let Some(r) = (0..table.len()).find(|&r| table[r] != reference[r]) {
            return Err(Error::ModelViolation(format!(
                "closed invariant depends on the presentation: {} gives {} and {} gives {} at ρ = {:?}",
                first.datum.label,
                reference[r],
                model.datum.label,
                table[r],
                model.inner.homs().get(r).generator_images()
            )));
        }
    }
    Ok(reference)
}
