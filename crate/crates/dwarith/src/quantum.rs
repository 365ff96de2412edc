//! Quantum spaces of twisted-equivariant functions on `F_S`, partition
//! functions, the gluing pairing and transports between sections, cocycles
//! and isomorphic data.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cochain::Cochain;
use crate::cohomology::{cohomology_basis, SolveStrategy};
use crate::cyclotomic::cyclotomic_polynomial;
use crate::error::{Error, Result};
use crate::global::{GlobalDatum, GlobalModel, GluingModel, TubeModel};
use crate::group::{Elem, GroupHom, Orbit};
use crate::linalg::{factorize, mod_inverse, pow_mod};
use crate::local::{delta_table, Gauge, LambdaS, LocalDatum, LocalSection, Section};
use crate::CyclotomicValue;

/// One factor `F_p` of the index set of a theta vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseFactor {
    pub name: String,
    pub orientation: i8,
    pub size: usize,
}

/// A function `F_S → Q(ζ_N)` expressed against a section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaVector {
    modulus: u32,
    base: Vec<BaseFactor>,
    entries: Vec<CyclotomicValue>,
    section_tag: String,
}

/// The index set of a section.
pub fn base_of(x: &Section) -> Vec<BaseFactor> {
    x.parts()
        .iter()
        .map(|p| BaseFactor { name: p.datum().name().to_string(), orientation: p.datum().orientation(), size: p.space().len() })
        .collect()
}

fn base_len(base: &[BaseFactor]) -> usize {
    base.iter().map(|b| b.size).product()
}

impl ThetaVector {
    pub fn new(modulus: u32, base: Vec<BaseFactor>, entries: Vec<CyclotomicValue>, section_tag: impl Into<String>) -> Result<Self> {
        if entries.len() != base_len(&base) {
            return Err(Error::BaseMismatch(format!("{} entries for an index set of size {}", entries.len(), base_len(&base))));
        }
        if let Some(e) = entries.iter().find(|e| e.modulus() != modulus) {
            return Err(Error::ModulusMismatch(modulus, e.modulus()));
        }
        Ok(ThetaVector { modulus, base, entries, section_tag: section_tag.into() })
    }

    pub fn zero(modulus: u32, base: Vec<BaseFactor>, section_tag: impl Into<String>) -> Self {
        let entries = vec![CyclotomicValue::zero(modulus); base_len(&base)];
        ThetaVector { modulus, base, entries, section_tag: section_tag.into() }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn base(&self) -> &[BaseFactor] {
        &self.base
    }

    pub fn entries(&self) -> &[CyclotomicValue] {
        &self.entries
    }

    pub fn section_tag(&self) -> &str {
        &self.section_tag
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    fn same_shape(&self, other: &ThetaVector) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.base != other.base {
            return Err(Error::BaseMismatch(format!("{:?} vs {:?}", self.base, other.base)));
        }
        Ok(())
    }

    pub fn add(&self, other: &ThetaVector) -> Result<ThetaVector> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(ThetaVector { entries, ..self.clone() })
    }

    pub fn scale(&self, k: &CyclotomicValue) -> Result<ThetaVector> {
        let entries = self.entries.iter().map(|a| a.try_mul(k)).collect::<Result<_>>()?;
        Ok(ThetaVector { entries, ..self.clone() })
    }
}

/// The first `(ρ_S, g)` at which `θ(ρ_S.g) = ζ^{sign·λ_S(g,ρ_S)} θ(ρ_S)` fails.
pub fn equivariance_failure(theta: &ThetaVector, x: &Section, gauge: &Gauge) -> Result<Option<(usize, Elem)>> {
    if theta.base != base_of(x) {
        return Err(Error::BaseMismatch(format!("vector over {:?}, section over {:?}", theta.base, base_of(x))));
    }
    let lambda = LambdaS::new(x, gauge);
    let space = lambda.space();
    for i in 0..space.len() {
        for g in gauge.group().elements() {
            let expected = theta.entries[i].mul_zeta_pow(lambda.value(g, i) as i64);
            if theta.entries[space.act(i, g)] != expected {
                return Ok(Some((i, g)));
            }
        }
    }
    Ok(None)
}

/// A basis of `H_S^{x_S}` and its dimension.
#[derive(Clone, Debug)]
pub struct ThetaSpace {
    pub dimension: usize,
    pub basis: Vec<ThetaVector>,
    /// All `G`-orbits on `F_S`, in enumeration order of representatives.
    pub orbits: Vec<Orbit>,
    /// Whether each orbit supports a nonzero equivariant function.
    pub admissible: Vec<bool>,
}

/// Orbits whose stabilizer acts trivially through `λ_S` each contribute one
/// basis vector, equal to `1` at the representative.
pub fn theta_space(x: &Section, gauge: &Gauge) -> ThetaSpace {
    let lambda = LambdaS::new(x, gauge);
    let space = lambda.space();
    let orbits = space.orbits(gauge.group());
    let modulus = gauge.modulus();
    let base = base_of(x);
    let mut basis = Vec::new();
    let mut admissible = Vec::new();
    for orbit in &orbits {
        let rep = orbit.representative;
        let ok = orbit.stabilizer.iter().all(|&g| lambda.value(g, rep) == 0);
        admissible.push(ok);
        if !ok {
            continue;
        }
        let mut v = ThetaVector::zero(modulus, base.clone(), x.tag());
        for g in gauge.group().elements() {
            v.entries[space.act(rep, g)] = CyclotomicValue::zeta_pow(modulus, lambda.value(g, rep) as i64);
        }
        basis.push(v);
    }
    ThetaSpace { dimension: basis.len(), basis, orbits, admissible }
}

/// `Σ_k counts[k] ζ^k / den`.
fn from_counts(modulus: u32, counts: &[i64], den: i64) -> CyclotomicValue {
    CyclotomicValue::new(modulus, counts.iter().map(|&c| BigInt::from(c)).collect(), BigInt::from(den))
}

/// `Z(ρ_S) = (1/#G) Σ_{res ρ = ρ_S} ζ^{CS(ρ)}`.
pub fn partition_global(model: &GlobalModel, x: &Section) -> Result<ThetaVector> {
    let section = x.restrict(&model.datum().names())?;
    let cs = model.cs_table(&section, SolveStrategy::Canonical)?;
    let res = model.restriction_table(&section)?;
    let modulus = model.gauge().modulus();
    let n = modulus as usize;
    let space = section.space();
    let mut counts = vec![0i64; space.len() * n];
    for (rho, &value) in cs.iter().enumerate() {
        counts[res[rho] * n + value as usize] += 1;
    }
    let den = model.gauge().group().order() as i64;
    let entries = counts.chunks(n).map(|c| from_counts(modulus, c, den)).collect();
    ThetaVector::new(modulus, base_of(&section), entries, section.tag())
}

/// Tube orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Normal,
    Reversed,
}

/// `Z_V(ρ_S) = Σ_{ρ̃: ρ̃∘v = ρ_S} ζ^{±CS_V(ρ̃)}` (no `1/#G` factor). The
/// reversed vector is expressed over the reversed local data.
pub fn partition_tube(tube: &TubeModel, x: &Section, orientation: Orientation) -> Result<ThetaVector> {
    let section = x.restrict(&tube.names())?;
    let cs = tube.cs_table(&section, SolveStrategy::Canonical)?;
    let boundary = tube.boundary_table(&section)?;
    let modulus = tube.gauge().modulus();
    let n = modulus as usize;
    let space = section.space();
    let mut counts = vec![0i64; space.len() * n];
    for (t, &value) in cs.iter().enumerate() {
        let k = match orientation {
            Orientation::Normal => value as usize,
            Orientation::Reversed => (n - value as usize) % n,
        };
        counts[boundary[t] * n + k] += 1;
    }
    let section = match orientation {
        Orientation::Normal => section,
        Orientation::Reversed => section.reversed(),
    };
    let entries = counts.chunks(n).map(|c| from_counts(modulus, c, 1)).collect();
    ThetaVector::new(modulus, base_of(&section), entries, section.tag())
}

/// `⟨θ_S, θ_{S₂*}⟩(ρ_{S₁}) = Σ_{ρ_{S₂}} θ_S(ρ_{S₁}, ρ_{S₂}) θ_{S₂*}(ρ_{S₂})`.
///
/// `θ_{S₂*}` must live over a subset of the factors of `θ_S`, with the same
/// sizes and opposite orientations.
pub fn glue_pair(theta_s: &ThetaVector, theta_s2: &ThetaVector) -> Result<ThetaVector> {
    if theta_s.modulus != theta_s2.modulus {
        return Err(Error::ModulusMismatch(theta_s.modulus, theta_s2.modulus));
    }
    let mut positions = Vec::new();
    for b in &theta_s2.base {
        let pos = theta_s
            .base
            .iter()
            .position(|a| a.name == b.name)
            .ok_or_else(|| Error::BaseMismatch(format!("{} is not a boundary component of the glued vector", b.name)))?;
        let a = &theta_s.base[pos];
        if a.size != b.size || a.orientation != -b.orientation {
            return Err(Error::BaseMismatch(format!("{} must appear with opposite orientations on the two sides", b.name)));
        }
        if positions.contains(&pos) {
            return Err(Error::BaseMismatch(format!("{} appears twice", b.name)));
        }
        positions.push(pos);
    }
    let s1: Vec<usize> = (0..theta_s.base.len()).filter(|k| !positions.contains(k)).collect();
    let out_base: Vec<BaseFactor> = s1.iter().map(|&k| theta_s.base[k].clone()).collect();
    let mut out = ThetaVector::zero(theta_s.modulus, out_base, theta_s.section_tag.clone());
    let radices: Vec<usize> = theta_s.base.iter().map(|b| b.size).collect();
    let mut digits = vec![0usize; radices.len()];
    for (i, value) in theta_s.entries.iter().enumerate() {
        if value.is_zero() {
            continue;
        }
        decode_digits(i, &radices, &mut digits);
        let j = positions.iter().fold(0, |acc, &p| acc * radices[p] + digits[p]);
        let weight = &theta_s2.entries[j];
        if weight.is_zero() {
            continue;
        }
        let k = s1.iter().fold(0, |acc, &p| acc * radices[p] + digits[p]);
        out.entries[k] = &out.entries[k] + &(value * weight);
    }
    Ok(out)
}

fn decode_digits(mut index: usize, radices: &[usize], out: &mut [usize]) {
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = index % r;
        index /= r;
    }
}

/// Both sides of the gluing formula.
#[derive(Clone, Debug)]
pub struct GlueReport {
    /// `⟨Z_{X_S}, Z_{V_{S₂}*}⟩`.
    pub glued: ThetaVector,
    /// `Z_{X_{S₁}}` (for `S₁ = ∅`, built from the closed invariant).
    pub direct: ThetaVector,
}

impl GlueReport {
    pub fn equal(&self) -> bool {
        self.glued == self.direct
    }
}

/// Computes `⟨Z_{X_S}, Z_{V_{S₂}*}⟩` and `Z_{X_{S₁}}` for a section over all outer primes.
pub fn glue(model: &GluingModel, x: &Section) -> Result<GlueReport> {
    let z_outer = partition_global(model.outer(), x)?;
    let z_tube = partition_tube(model.tube(), x, Orientation::Reversed)?;
    let glued = glue_pair(&z_outer, &z_tube)?;
    let direct = if model.datum().is_closed() {
        closed_partition(model, x)?
    } else {
        partition_global(model.inner(), x)?
    };
    Ok(GlueReport { glued, direct })
}

/// `Z(X_k) = (1/#G) Σ_{ρ₁} ζ^{CS_closed(ρ₁)}` as a vector over the empty index set.
pub fn closed_partition(model: &GluingModel, x: &Section) -> Result<ThetaVector> {
    let gauge = model.outer().gauge();
    let modulus = gauge.modulus();
    let mut counts = vec![0i64; modulus as usize];
    for value in model.cs_closed_table(x)? {
        counts[value as usize] += 1;
    }
    let value = from_counts(modulus, &counts, gauge.group().order() as i64);
    let tag = x.restrict(&[])?.tag().to_string();
    ThetaVector::new(modulus, Vec::new(), vec![value], tag)
}

/// `Θ^{x,x'}`: multiplies entries by `ζ^{δ^{x,x'}(ρ_S)}`.
pub fn transport_section(theta: &ThetaVector, from: &Section, to: &Section) -> Result<ThetaVector> {
    if theta.section_tag != from.tag() {
        return Err(Error::InvalidWitness(format!("vector is expressed against {}, not {}", theta.section_tag, from.tag())));
    }
    if theta.base != base_of(from) || theta.base != base_of(to) {
        return Err(Error::BaseMismatch("sections and vector live over different data".into()));
    }
    let delta = delta_table(from, to)?;
    let entries = theta.entries.iter().zip(&delta).map(|(e, &d)| e.mul_zeta_pow(d as i64)).collect();
    Ok(ThetaVector { entries, section_tag: to.tag().to_string(), ..theta.clone() })
}

/// Cocycle change `c' = c + db`: returns the gauge for `c'`, the section
/// `x + b∘ρ` and the vector expressed against it (entries unchanged).
pub fn transport_cocycle(theta: &ThetaVector, x: &Section, gauge: &Gauge, c_prime: &Cochain, b: &Cochain) -> Result<(ThetaVector, Section, Gauge)> {
    if b.degree() != 2 || b.group().as_ref() != gauge.group().as_ref() || b.modulus() != gauge.modulus() {
        return Err(Error::InvalidWitness("b must be a 2-cochain on the gauge group".into()));
    }
    if &(gauge.cocycle() + &b.coboundary()) != c_prime {
        return Err(Error::InvalidWitness("c' − c is not db".into()));
    }
    if theta.section_tag != x.tag() {
        return Err(Error::InvalidWitness(format!("vector is expressed against {}, not {}", theta.section_tag, x.tag())));
    }
    let gauge_prime = Gauge::new(c_prime.clone())?;
    let shifted = x.shifted_by(b);
    Ok((ThetaVector { section_tag: shifted.tag().to_string(), ..theta.clone() }, shifted, gauge_prime))
}

/// Group isomorphisms `ξ_p: Q_p → Q'_p` onto isomorphic local data.
#[derive(Clone, Debug)]
pub struct DataIsomorphism {
    pub components: Vec<(Arc<LocalDatum>, GroupHom)>,
}

fn inverse_hom(xi: &GroupHom) -> Result<GroupHom> {
    let n = xi.target().order();
    if xi.source().order() != n || !xi.is_surjective() {
        return Err(Error::InvalidWitness(format!("{xi:?} is not an isomorphism")));
    }
    let mut map = vec![0; n];
    for a in xi.source().elements() {
        map[xi.apply(a) as usize] = a;
    }
    GroupHom::new(xi.target().clone(), xi.source().clone(), map)
}

impl DataIsomorphism {
    /// Checks that each `ξ_p` is an isomorphism with `inv'_p(z) = inv_p(z∘ξ_p)`
    /// on a basis of `Z²(Q'_p)`.
    pub fn validate(&self, x: &Section) -> Result<()> {
        if self.components.len() != x.parts().len() {
            return Err(Error::InvalidWitness("one isomorphism per local datum is required".into()));
        }
        for ((target, xi), part) in self.components.iter().zip(x.parts()) {
            let source = part.datum();
            if xi.source().as_ref() != source.group().as_ref() || xi.target().as_ref() != target.group().as_ref() {
                return Err(Error::InvalidWitness(format!("ξ for {} has the wrong shape", source.name())));
            }
            inverse_hom(xi)?;
            if target.modulus() != source.modulus() {
                return Err(Error::InvalidWitness("moduli differ".into()));
            }
            let basis = cohomology_basis(target.group(), target.modulus(), 2)?;
            for z in &basis.cocycle_basis {
                if target.inv_value(z) != source.inv_value(&z.pullback(xi)) {
                    return Err(Error::InvalidWitness(format!("ξ does not carry inv_{} to inv_{}", source.name(), target.name())));
                }
            }
        }
        Ok(())
    }
}

/// Checks `ξ_S∘ι_p = ι'_p∘ξ_p` for every attachment.
pub fn check_global_isomorphism(from: &GlobalDatum, to: &GlobalDatum, xi_s: &GroupHom, iso: &DataIsomorphism) -> Result<()> {
    if from.attachments().len() != iso.components.len() || to.attachments().len() != iso.components.len() {
        return Err(Error::InvalidWitness("attachment counts differ".into()));
    }
    inverse_hom(xi_s)?;
    for ((a, b), (_, xi)) in from.attachments().iter().zip(to.attachments()).zip(&iso.components) {
        if xi_s.compose_after(&a.iota) != b.iota.compose_after(xi) {
            return Err(Error::InvalidWitness(format!("ξ does not commute with the attachment of {}", a.local.name())));
        }
    }
    Ok(())
}

/// Relabels along `ξ`: `θ'(ρ') = θ(ρ'∘ξ)` and `x'(ρ') = x(ρ'∘ξ)∘ξ⁻¹`.
pub fn transport_isomorphism(theta: &ThetaVector, x: &Section, iso: &DataIsomorphism) -> Result<(ThetaVector, Section)> {
    iso.validate(x)?;
    if theta.base != base_of(x) {
        return Err(Error::BaseMismatch("vector and section live over different data".into()));
    }
    let mut parts = Vec::new();
    let mut pull = Vec::new();
    for ((target, xi), part) in iso.components.iter().zip(x.parts()) {
        let space = Arc::new(crate::group::HomSpace::new(target.group().clone(), part.space().target().clone()));
        let xi_inv = inverse_hom(xi)?;
        let mut values = Vec::with_capacity(space.len());
        let mut map = Vec::with_capacity(space.len());
        for rho in space.homs() {
            let i = part.space().index_of(&rho.compose_after(xi)).expect("ρ∘ξ is a representation");
            values.push(part.values()[i].pullback(&xi_inv));
            map.push(i);
        }
        parts.push(LocalSection::new_unchecked(target.clone(), space, values));
        pull.push(map);
    }
    let section = Section::from_parts(format!("{}@iso", x.tag()), parts);
    let new_space = section.space();
    let old_space = x.space();
    let entries = (0..new_space.len())
        .map(|i| {
            let old: Vec<usize> = new_space.decode(i).iter().zip(&pull).map(|(&k, m)| m[k]).collect();
            theta.entries[old_space.encode(&old)].clone()
        })
        .collect();
    let out = ThetaVector::new(theta.modulus, base_of(&section), entries, section.tag())?;
    Ok((out, section))
}

/// Dimension bookkeeping for disjoint unions and orientation reversal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub dim_first: usize,
    pub dim_second: usize,
    pub dim_union: usize,
    pub dim_reversed: usize,
    /// Products of basis vectors satisfy the equivariance of the union.
    pub products_equivariant: bool,
    /// Rank of the products inside `H_{S₁⊔S₂}`.
    pub product_rank: usize,
    /// Rank of the pairing `H_{S*} × H_S → F` on the computed bases.
    pub pairing_rank: usize,
}

impl StructureReport {
    pub fn multiplicative(&self) -> bool {
        self.dim_union == self.dim_first * self.dim_second
    }

    /// The products of basis vectors are linearly independent.
    pub fn products_independent(&self) -> bool {
        self.product_rank == self.dim_first * self.dim_second
    }

    pub fn products_span(&self) -> bool {
        self.product_rank == self.dim_union
    }

    pub fn dual_dimension_matches(&self) -> bool {
        self.dim_reversed == self.dim_first
    }

    pub fn pairing_nondegenerate(&self) -> bool {
        self.pairing_rank == self.dim_first
    }
}

/// Compares `H_{S₁⊔S₂}` with `H_{S₁} ⊗ H_{S₂}` and `H_{S₁*}` with `H_{S₁}`.
pub fn tensor_and_dual(x1: &Section, x2: &Section, gauge: &Gauge) -> Result<StructureReport> {
    let h1 = theta_space(x1, gauge);
    let h2 = theta_space(x2, gauge);
    let union = x1.concat(x2)?;
    let hu = theta_space(&union, gauge);
    let reversed = x1.reversed();
    let hr = theta_space(&reversed, gauge);

    let base = base_of(&union);
    let mut products = Vec::new();
    let mut equivariant = true;
    for a in &h1.basis {
        for b in &h2.basis {
            let mut entries = Vec::with_capacity(a.entries.len() * b.entries.len());
            for ea in &a.entries {
                for eb in &b.entries {
                    entries.push(ea * eb);
                }
            }
            let v = ThetaVector::new(gauge.modulus(), base.clone(), entries, union.tag())?;
            equivariant &= equivariance_failure(&v, &union, gauge)?.is_none();
            products.push(v);
        }
    }
    let reps: Vec<usize> = hu.orbits.iter().zip(&hu.admissible).filter(|(_, &ok)| ok).map(|(o, _)| o.representative).collect();
    let rows: Vec<Vec<CyclotomicValue>> = products.iter().map(|v| reps.iter().map(|&r| v.entries[r].clone()).collect()).collect();
    let product_rank = cyclotomic_rank(&rows, gauge.modulus());

    let gram: Vec<Vec<CyclotomicValue>> = hr
        .basis
        .iter()
        .map(|u| {
            h1.basis
                .iter()
                .map(|v| {
                    u.entries.iter().zip(&v.entries).fold(CyclotomicValue::zero(gauge.modulus()), |acc, (a, b)| &acc + &(a * b))
                })
                .collect()
        })
        .collect();
    let pairing_rank = cyclotomic_rank(&gram, gauge.modulus());

    Ok(StructureReport {
        dim_first: h1.dimension,
        dim_second: h2.dimension,
        dim_union: hu.dimension,
        dim_reversed: hr.dimension,
        products_equivariant: equivariant,
        product_rank,
        pairing_rank,
    })
}

/// A prime `ℓ ≡ 1 mod N` above `2^30` and an element of order exactly `N`.
pub fn splitting_prime(modulus: u32) -> (u64, u64) {
    let n = modulus as u64;
    let mut l = ((1u64 << 30) / n + 1) * n + 1;
    loop {
        if is_prime(l) {
            let primes: Vec<u64> = factorize(n).into_iter().map(|(p, _)| p).collect();
            for a in 2..l {
                let r = pow_mod(a, (l - 1) / n, l);
                if primes.iter().all(|&p| pow_mod(r, n / p, l) != 1) {
                    return (l, r);
                }
            }
        }
        l += n;
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Rank over `Q(ζ_N)` of a matrix of cyclotomic values, computed after
/// reduction to `F_ℓ` for a prime `ℓ ≡ 1 mod N`. Reduction cannot raise the
/// rank, so a full-rank answer is exact.
pub fn cyclotomic_rank(rows: &[Vec<CyclotomicValue>], modulus: u32) -> usize {
    let (prime, root) = splitting_prime(modulus);
    debug_assert_eq!(cyclotomic_polynomial(modulus).len() as u32 - 1, totient(modulus));
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|v| reduce(v, root, prime)).collect())
        .collect();
    rank_mod(&mut m, prime)
}

fn totient(n: u32) -> u32 {
    (1..=n).filter(|&k| num_integer::gcd(k, n) == 1).count() as u32
}

fn reduce(v: &CyclotomicValue, root: u64, prime: u64) -> u64 {
    let p = BigInt::from(prime);
    let to_u64 = |x: &BigInt| -> u64 {
        let r = ((x % &p) + &p) % &p;
        r.to_u64_digits().1.first().copied().unwrap_or(0)
    };
    let mut acc = 0u128;
    let mut power = 1u128;
    for c in v.coeffs() {
        if !c.is_zero() {
            acc = (acc + to_u64(c) as u128 * power) % prime as u128;
        }
        power = power * root as u128 % prime as u128;
    }
    let den = to_u64(v.den());
    let inv = if v.den().is_one() { 1 } else { mod_inverse(den, prime).expect("denominator is a unit mod ℓ") };
    (acc * inv as u128 % prime as u128) as u64
}

/// Rank of a matrix over `F_ℓ` by Gaussian elimination.
pub fn rank_mod(m: &mut [Vec<u64>], prime: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][c].is_multiple_of(prime)) else { continue };
        m.swap(rank, pivot);
        let inv = mod_inverse(m[rank][c], prime).unwrap();
        for v in m[rank].iter_mut() {
            *v = (*v as u128 * inv as u128 % prime as u128) as u64;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    let sub = (f as u128 * pv as u128 % prime as u128) as u64;
                    *v = (*v + prime - sub) % prime;
                }
            }
        }
        rank += 1;
    }
    rank
}
