//! The `Z/N`-torsor of a prequantization fiber: 2-cochains `α` on `Q_p` with
//! `dα = c∘ρ`, compared through the local invariant functional.

use std::sync::Arc;

use crate::cochain::Cochain;
use crate::error::{Error, Result};
use crate::group::{conjugate_hom, Elem, GroupHom};
use crate::local::{Gauge, LocalDatum};

/// A representative of a point of the fiber over `rep`.
#[derive(Clone, Debug)]
pub struct FiberElement {
    local: Arc<LocalDatum>,
    rep: GroupHom,
    cochain: Cochain,
}

impl FiberElement {
    /// Checks `d(cochain) = c∘rep`.
    pub fn new(local: Arc<LocalDatum>, gauge: &Gauge, rep: GroupHom, cochain: Cochain) -> Result<Self> {
        if rep.source().as_ref() != local.group().as_ref() || rep.target().as_ref() != gauge.group().as_ref() {
            return Err(Error::MismatchedFiber(format!("{:?} is not a representation of {}", rep, local.name())));
        }
        if cochain.degree() != 2 || cochain.group().as_ref() != local.group().as_ref() {
            return Err(Error::MismatchedFiber(format!("fiber elements are 2-cochains on {}", local.group().label())));
        }
        let expected = gauge.cocycle().pullback(&rep);
        let diff = &cochain.coboundary() - &expected;
        if let Some((tuple, value)) = diff.first_nonzero() {
            return Err(Error::MismatchedFiber(format!(
                "d(alpha) differs from c∘rho at {tuple:?} by {value}"
            )));
        }
        Ok(FiberElement { local, rep, cochain })
    }

    /// Skips the coboundary check; callers guarantee the invariant.
    pub(crate) fn new_unchecked(local: Arc<LocalDatum>, rep: GroupHom, cochain: Cochain) -> Self {
        FiberElement { local, rep, cochain }
    }

    pub fn local(&self) -> &Arc<LocalDatum> {
        &self.local
    }

    pub fn rep(&self) -> &GroupHom {
        &self.rep
    }

    pub fn cochain(&self) -> &Cochain {
        &self.cochain
    }

    fn same_fiber(&self, other: &FiberElement) -> Result<()> {
        if !self.local.same_datum(&other.local) {
            return Err(Error::MismatchedFiber(format!(
                "elements over {} and {}",
                self.local.name(),
                other.local.name()
            )));
        }
        if self.rep != other.rep {
            return Err(Error::MismatchedFiber(format!("elements over {:?} and {:?}", self.rep, other.rep)));
        }
        Ok(())
    }
}

/// `s − t ∈ Z/N`: the local invariant of the cocycle `s − t`.
pub fn diff(s: &FiberElement, t: &FiberElement) -> Result<u32> {
    s.same_fiber(t)?;
    Ok(s.local.inv_value(&(&s.cochain - &t.cochain)))
}

/// `t.m`: adds `m` times the unit cocycle.
pub fn act(t: &FiberElement, m: i64) -> Result<FiberElement> {
    let unit = t.local.unit_cocycle()?;
    Ok(FiberElement { cochain: &t.cochain + &unit.scale(m), ..t.clone() })
}

/// A torsor isomorphism between fibers, `α ↦ α + shift`.
#[derive(Clone, Debug)]
pub struct FiberMap {
    local: Arc<LocalDatum>,
    source: GroupHom,
    target: GroupHom,
    shift: Cochain,
}

impl FiberMap {
    pub fn identity(local: Arc<LocalDatum>, gauge: &Gauge, rep: GroupHom) -> Self {
        let shift = Cochain::zero(local.group().clone(), 2, gauge.modulus());
        FiberMap { local, source: rep.clone(), target: rep, shift }
    }

    /// The gauge-transformation map from the fiber over `ρ` to the fiber over
    /// `ρ.g`, `α ↦ α + h_g∘ρ`.
    pub fn gauge(local: Arc<LocalDatum>, gauge: &Gauge, g: Elem, rep: GroupHom) -> Self {
        let shift = gauge.h(g).pullback(&rep);
        let target = conjugate_hom(&rep, g);
        FiberMap { local, source: rep, target, shift }
    }

    pub fn source(&self) -> &GroupHom {
        &self.source
    }

    pub fn target(&self) -> &GroupHom {
        &self.target
    }

    pub fn apply(&self, t: &FiberElement) -> Result<FiberElement> {
        if !t.local.same_datum(&self.local) || t.rep != self.source {
            return Err(Error::MismatchedFiber("map applied outside its source fiber".into()));
        }
        Ok(FiberElement::new_unchecked(self.local.clone(), self.target.clone(), &t.cochain + &self.shift))
    }
}

/// `λ(f; t, t') = f(t) − t'`.
pub fn transition_scalar(f: &FiberMap, t: &FiberElement, t_prime: &FiberElement) -> Result<u32> {
    diff(&f.apply(t)?, t_prime)
}
