//! Solving `dβ = z` and computing `Z^n`, `B^n`, `H^n` over `Z/N`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::cochain::{coboundary_matrix, Cochain};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{factorize, invariant_factors, quotient_exponents, LocalSmith, ModularSmith, Pivoting};

pub use crate::linalg::Pivoting as SolveStrategy;

/// Largest group order accepted for degree-3 cochain work.
pub const MAX_DEGREE3_ORDER: usize = 64;

/// Upper bound on dense matrix entries before refusing to factor.
const MAX_MATRIX_ENTRIES: usize = 1 << 24;

#[derive(Clone, PartialEq, Eq, Hash)]
struct CacheKey {
    table: Vec<u32>,
    degree: usize,
    modulus: u32,
    action: Option<Vec<u32>>,
    pivoting: Pivoting,
}

type Cache = Mutex<HashMap<CacheKey, Arc<ModularSmith>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn check_size(group: &FiniteGroup, degree: usize) -> Result<()> {
    let order = group.order();
    if degree >= 3 && order > MAX_DEGREE3_ORDER {
        return Err(Error::TooLarge(format!(
            "{} has order {order}; degree-3 work is limited to order {MAX_DEGREE3_ORDER}",
            group.label()
        )));
    }
    let entries = order.checked_pow(degree as u32).and_then(|r| r.checked_mul(order.pow(degree as u32 - 1)));
    match entries {
        Some(e) if e <= MAX_MATRIX_ENTRIES => Ok(()),
        _ => Err(Error::TooLarge(format!(
            "coboundary matrix C^{} -> C^{} of {} is too large for dense elimination",
            degree - 1,
            degree,
            group.label()
        ))),
    }
}

/// Smith factorization of `d: C^{degree−1} → C^{degree}`, shared process-wide.
fn factorization(
    group: &FiniteGroup,
    degree: usize,
    modulus: u32,
    action: Option<&[u32]>,
    pivoting: Pivoting,
) -> Result<Arc<ModularSmith>> {
    check_size(group, degree)?;
    let key = CacheKey {
        table: group.table().to_vec(),
        degree,
        modulus,
        action: action.map(|a| a.to_vec()),
        pivoting,
    };
    if let Some(hit) = cache().lock().expect("solver cache poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let matrix = coboundary_matrix(group, degree, modulus, action);
    let smith = Arc::new(ModularSmith::new(&matrix, modulus as u64, pivoting));
    cache().lock().expect("solver cache poisoned").insert(key, smith.clone());
    Ok(smith)
}

/// A cochain `β` of degree `n−1` with `dβ = z`, or `None` if `z ∉ B^n`.
///
/// With [`SolveStrategy::Canonical`] the answer is deterministic: the solution
/// whose Smith coordinates are minimal with every free parameter zero.
pub fn solve_coboundary(z: &Cochain) -> Result<Option<Cochain>> {
    solve_coboundary_with(z, SolveStrategy::Canonical)
}

pub fn solve_coboundary_with(z: &Cochain, strategy: SolveStrategy) -> Result<Option<Cochain>> {
    let n = z.degree();
    if n == 0 {
        return Err(Error::DegreeTooLow(1));
    }
    let group = z.group();
    let smith = factorization(group, n, z.modulus(), z.action().map(|a| a.as_slice()), strategy)?;
    let target: Vec<u64> = z.values().iter().map(|&v| v as u64).collect();
    let Some(solution) = smith.solve(&target) else {
        return Ok(None);
    };
    let mut beta = Cochain::from_values(group.clone(), n - 1, z.modulus(), solution);
    if let Some(action) = z.action() {
        beta = beta.with_action(action.clone())?;
    }
    if beta.coboundary() != *z {
        // The Smith solver is exact; a mismatch means the factorization is wrong.
        return Err(Error::ModelViolation(format!("coboundary solver produced an invalid solution for {z:?}")));
    }
    Ok(Some(beta))
}

/// Cocycles, coboundaries and the structure of `H^n(Q, Z/N)`.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    pub degree: usize,
    /// Generators of `Z^n` as a `Z/N`-module.
    pub cocycle_basis: Vec<Cochain>,
    /// Generators of `B^n` (distinct nonzero coboundaries of basis cochains).
    pub coboundary_basis: Vec<Cochain>,
    /// Invariant factors `d_1 | d_2 | …` with `H^n ≅ ⊕ Z/d_i` (all `> 1`).
    pub quotient_structure: Vec<u64>,
}

impl CohomologyBasis {
    pub fn order(&self) -> u64 {
        self.quotient_structure.iter().product()
    }
}

/// Bases of `Z^n`, `B^n` and the invariant factors of `H^n` for the trivial action.
pub fn cohomology_basis(group: &Arc<FiniteGroup>, modulus: u32, degree: usize) -> Result<CohomologyBasis> {
    let next = factorization(group, degree + 1, modulus, None, Pivoting::Canonical)?;
    let cocycle_basis: Vec<Cochain> = next
        .kernel_generators()
        .into_iter()
        .map(|g| Cochain::from_values(group.clone(), degree, modulus, g))
        .filter(|c| !c.is_zero())
        .collect();

    let mut coboundary_basis: Vec<Cochain> = Vec::new();
    let mut columns: Vec<Vec<u64>> = Vec::new();
    if degree >= 1 {
        check_size(group, degree)?;
        let d = coboundary_matrix(group, degree, modulus, None);
        for c in 0..d.cols {
            let col: Vec<u64> = (0..d.rows).map(|r| d.get(r, c)).collect();
            if col.iter().all(|&x| x == 0) || columns.contains(&col) {
                continue;
            }
            coboundary_basis.push(Cochain::from_values(group.clone(), degree, modulus, col.clone()));
            columns.push(col);
        }
    }

    let mut elementary = Vec::new();
    for (local, (p, _)) in next.factors.iter().zip(factorize(modulus as u64)) {
        let reduced: Vec<Vec<u64>> =
            columns.iter().map(|col| col.iter().map(|&x| x % local.modulus).collect()).collect();
        elementary.push((p, quotient_exponents(local, &reduced)));
    }
    let quotient_structure = invariant_factors(&elementary).into_iter().filter(|&d| d > 1).collect();
    Ok(CohomologyBasis { degree, cocycle_basis, coboundary_basis, quotient_structure })
}

/// Whether `z` (of degree `n ≥ 1`) lies in `B^n`.
pub fn is_coboundary(z: &Cochain) -> Result<bool> {
    Ok(solve_coboundary(z)?.is_some())
}

#[doc(hidden)]
pub fn local_smith_for_tests(group: &FiniteGroup, degree: usize, modulus: u32) -> Result<Vec<LocalSmith>> {
    Ok(factorization(group, degree, modulus, None, Pivoting::Canonical)?.factors.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupHom;

    fn z(n: usize) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(n))
    }

    #[test]
    fn zero_target_gives_zero_solution() {
        let q = z(3);
        let zero = Cochain::zero(q, 2, 3);
        let beta = solve_coboundary(&zero).unwrap().unwrap();
        assert!(beta.is_zero());
    }

    #[test]
    fn inflated_xyz_dies_on_z4() {
        let g = z(2);
        let q = z(4);
        let c = Cochain::from_fn(g.clone(), 3, 2, |t| (t[0] * t[1] * t[2]) as i64);
        let rho = GroupHom::from_generator_images(q, g, &[1]).unwrap();
        let z = c.pullback(&rho);
        let beta = solve_coboundary(&z).unwrap().expect("solvable on Z/4");
        assert_eq!(beta.coboundary(), z);
    }

    #[test]
    fn inflated_xyz_survives_on_klein_four() {
        let g = z(2);
        let v4 = Arc::new(FiniteGroup::abelian(&[2, 2]));
        let c = Cochain::from_fn(g.clone(), 3, 2, |t| (t[0] * t[1] * t[2]) as i64);
        let rho = GroupHom::from_generator_images(v4, g, &[1, 0]).unwrap();
        assert!(solve_coboundary(&c.pullback(&rho)).unwrap().is_none());
    }

    #[test]
    fn small_cohomology_orders() {
        assert_eq!(cohomology_basis(&z(2), 2, 1).unwrap().order(), 2);
        assert_eq!(cohomology_basis(&z(4), 2, 2).unwrap().order(), 2);
        assert_eq!(cohomology_basis(&z(3), 2, 2).unwrap().order(), 1);
        let h0 = cohomology_basis(&z(5), 6, 0).unwrap();
        assert_eq!(h0.quotient_structure, vec![6]);
    }

    #[test]
    fn cyclic_cohomology_is_cyclic_of_gcd_order() {
        // H^n(Z/m, Z/N) ≅ Z/gcd(m, N) for n ≥ 1.
        let h = cohomology_basis(&z(4), 6, 2).unwrap();
        assert_eq!(h.quotient_structure, vec![2]);
        let h = cohomology_basis(&z(6), 12, 1).unwrap();
        assert_eq!(h.quotient_structure, vec![6]);
    }

    #[test]
    fn klein_four_h2() {
        // H²((Z/2)², Z/2) has dimension 3.
        let v4 = Arc::new(FiniteGroup::abelian(&[2, 2]));
        let h = cohomology_basis(&v4, 2, 2).unwrap();
        assert_eq!(h.quotient_structure, vec![2, 2, 2]);
    }

    #[test]
    fn refuses_oversized_groups() {
        let big = Arc::new(FiniteGroup::cyclic(65));
        let z = Cochain::zero(big, 3, 2);
        assert!(matches!(solve_coboundary(&z), Err(Error::TooLarge(_))));
    }
}
