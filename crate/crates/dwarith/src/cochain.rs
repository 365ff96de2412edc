//! Inhomogeneous cochains `C^n(Q, Z/N)` with the bar-resolution coboundary,
//! the conjugation action and the homotopy operators `h` and `H`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, GroupHom};
use crate::linalg::Matrix;

/// A function `Q^n → Z/N` stored as a dense table, with `Q` acting on `Z/N`
/// through a unit character (trivially by default).
#[derive(Clone, PartialEq, Eq)]
pub struct Cochain {
    group: Arc<FiniteGroup>,
    degree: usize,
    modulus: u32,
    values: Vec<u32>,
    action: Option<Arc<Vec<u32>>>,
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C^{}({}, Z/{}) {:?}", self.degree, self.group.label(), self.modulus, self.values)
    }
}

/// Decodes a flat table index into an `n`-tuple (first coordinate most significant).
#[inline]
pub fn decode_tuple(mut index: usize, order: usize, out: &mut [Elem]) {
    for slot in out.iter_mut().rev() {
        *slot = (index % order) as Elem;
        index /= order;
    }
}

#[inline]
pub fn encode_tuple(tuple: &[Elem], order: usize) -> usize {
    tuple.iter().fold(0, |acc, &g| acc * order + g as usize)
}

fn table_len(order: usize, degree: usize) -> usize {
    order.pow(degree as u32)
}

impl Cochain {
    pub fn zero(group: Arc<FiniteGroup>, degree: usize, modulus: u32) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        let len = table_len(group.order(), degree);
        Cochain { group, degree, modulus, values: vec![0; len], action: None }
    }

    /// Tabulates `f`, reducing its values into `[0, N)`.
    pub fn from_fn(group: Arc<FiniteGroup>, degree: usize, modulus: u32, f: impl Fn(&[Elem]) -> i64) -> Self {
        let mut c = Self::zero(group, degree, modulus);
        let order = c.group.order();
        let mut tuple = vec![0; degree];
        for (i, v) in c.values.iter_mut().enumerate() {
            decode_tuple(i, order, &mut tuple);
            *v = f(&tuple).rem_euclid(modulus as i64) as u32;
        }
        c
    }

    /// Builds a cochain from a raw table (values reduced mod `N`).
    pub fn from_values(group: Arc<FiniteGroup>, degree: usize, modulus: u32, values: Vec<u64>) -> Self {
        assert_eq!(values.len(), table_len(group.order(), degree), "table size mismatch");
        let values = values.into_iter().map(|v| (v % modulus as u64) as u32).collect();
        Cochain { group, degree, modulus, values, action: None }
    }

    /// Installs the module action `γ·m = χ(γ)m`; `character` must be a
    /// homomorphism `Q → (Z/N)^×`.
    pub fn with_action(mut self, character: Arc<Vec<u32>>) -> Result<Self> {
        validate_character(&self.group, self.modulus, &character)?;
        self.action = if character.iter().all(|&u| u == 1) { None } else { Some(character) };
        Ok(self)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn action(&self) -> Option<&Arc<Vec<u32>>> {
        self.action.as_ref()
    }

    pub fn has_trivial_action(&self) -> bool {
        self.action.is_none()
    }

    /// `χ(γ)`, the scalar by which `γ` acts on `Z/N`.
    #[inline]
    pub fn act_scalar(&self, g: Elem) -> u32 {
        self.action.as_ref().map_or(1, |a| a[g as usize])
    }

    #[inline]
    pub fn get(&self, tuple: &[Elem]) -> u32 {
        debug_assert_eq!(tuple.len(), self.degree);
        self.values[encode_tuple(tuple, self.group.order())]
    }

    pub fn set(&mut self, tuple: &[Elem], value: i64) {
        let i = encode_tuple(tuple, self.group.order());
        self.values[i] = value.rem_euclid(self.modulus as i64) as u32;
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// First tuple (in table order) with a nonzero value.
    pub fn first_nonzero(&self) -> Option<(Vec<Elem>, u32)> {
        let i = self.values.iter().position(|&v| v != 0)?;
        let mut tuple = vec![0; self.degree];
        decode_tuple(i, self.group.order(), &mut tuple);
        Some((tuple, self.values[i]))
    }

    pub fn scale(&self, k: i64) -> Cochain {
        let n = self.modulus as i64;
        let k = k.rem_euclid(n) as u64;
        self.map_values(|v| (v as u64 * k % n as u64) as u32)
    }

    fn map_values(&self, f: impl Fn(u32) -> u32) -> Cochain {
        Cochain { values: self.values.iter().map(|&v| f(v)).collect(), ..self.clone() }
    }

    fn zip_values(&self, other: &Cochain, f: impl Fn(u32, u32) -> u32) -> Cochain {
        assert!(self.compatible(other), "cochain shape mismatch: {self:?} vs {other:?}");
        Cochain { values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(), ..self.clone() }
    }

    /// Same group, degree, modulus and action.
    pub fn compatible(&self, other: &Cochain) -> bool {
        self.degree == other.degree
            && self.modulus == other.modulus
            && self.action == other.action
            && (Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group)
    }

    /// A fresh cochain of another degree sharing group, modulus and action.
    fn sibling(&self, degree: usize) -> Cochain {
        Cochain {
            group: self.group.clone(),
            degree,
            modulus: self.modulus,
            values: vec![0; table_len(self.group.order(), degree)],
            action: self.action.clone(),
        }
    }

    /// The coboundary `dα`.
    pub fn coboundary(&self) -> Cochain {
        let n = self.degree;
        let order = self.group.order();
        let modulus = self.modulus as i64;
        let mut out = self.sibling(n + 1);
        let mut tuple = vec![0; n + 1];
        let mut scratch = vec![0; n];
        for (idx, slot) in out.values.iter_mut().enumerate() {
            decode_tuple(idx, order, &mut tuple);
            let mut acc = self.act_scalar(tuple[0]) as i64 * self.get(&tuple[1..]) as i64;
            for i in 1..=n {
                scratch[..i - 1].copy_from_slice(&tuple[..i - 1]);
                scratch[i - 1] = self.group.mul(tuple[i - 1], tuple[i]);
                scratch[i..].copy_from_slice(&tuple[i + 1..]);
                let term = self.get(&scratch) as i64;
                acc += if i % 2 == 0 { term } else { -term };
            }
            let last = self.get(&tuple[..n]) as i64;
            acc += if (n + 1).is_multiple_of(2) { last } else { -last };
            *slot = acc.rem_euclid(modulus) as u32;
        }
        out
    }

    /// Pullback `α∘ρ` along `ρ: Q' → Q`.
    pub fn pullback(&self, rho: &GroupHom) -> Cochain {
        assert_eq!(rho.target().as_ref(), self.group.as_ref(), "pullback along a map into a different group");
        assert!(self.has_trivial_action(), "pullback is defined for the trivial action");
        let source = rho.source().clone();
        let order = source.order();
        let mut out = Cochain::zero(source, self.degree, self.modulus);
        let mut tuple = vec![0; self.degree];
        for (idx, slot) in out.values.iter_mut().enumerate() {
            decode_tuple(idx, order, &mut tuple);
            for g in tuple.iter_mut() {
                *g = rho.apply(*g);
            }
            *slot = self.get(&tuple);
        }
        out
    }
}

impl Add for &Cochain {
    type Output = Cochain;
    fn add(self, rhs: &Cochain) -> Cochain {
        let n = self.modulus;
        self.zip_values(rhs, |a, b| (a + b) % n)
    }
}

impl Sub for &Cochain {
    type Output = Cochain;
    fn sub(self, rhs: &Cochain) -> Cochain {
        let n = self.modulus;
        self.zip_values(rhs, |a, b| (a + n - b) % n)
    }
}

impl Neg for &Cochain {
    type Output = Cochain;
    fn neg(self) -> Cochain {
        let n = self.modulus;
        self.map_values(|a| (n - a) % n)
    }
}

fn validate_character(group: &FiniteGroup, modulus: u32, character: &[u32]) -> Result<()> {
    if character.len() != group.order() {
        return Err(Error::NotAHomomorphism("character table has the wrong length".into()));
    }
    let n = modulus as u64;
    for a in group.elements() {
        let ua = character[a as usize] as u64 % n;
        if num_integer::gcd(ua, n) != 1 {
            return Err(Error::NotAHomomorphism(format!("character value at {a} is not a unit mod {modulus}")));
        }
        for b in group.elements() {
            let lhs = character[group.mul(a, b) as usize] as u64 % n;
            if lhs != ua * (character[b as usize] as u64 % n) % n {
                return Err(Error::NotAHomomorphism("character is not multiplicative".into()));
            }
        }
    }
    Ok(())
}

/// `(σ.α)(γ₁,…,γ_n) = σ·α(σ⁻¹γ₁σ, …, σ⁻¹γ_nσ)`.
pub fn conj_act(sigma: Elem, alpha: &Cochain) -> Cochain {
    let group = alpha.group.clone();
    let order = group.order();
    let n = alpha.modulus as u64;
    let scalar = alpha.act_scalar(sigma) as u64;
    let mut out = alpha.sibling(alpha.degree);
    let mut tuple = vec![0; alpha.degree];
    for (idx, slot) in out.values.iter_mut().enumerate() {
        decode_tuple(idx, order, &mut tuple);
        for g in tuple.iter_mut() {
            *g = group.conj(*g, sigma);
        }
        *slot = (scalar * alpha.get(&tuple) as u64 % n) as u32;
    }
    out
}

/// `h^n_σ(α) = Σ_{0≤i≤n} (−1)^i α∘s_i(σ)` for `α` of degree `n+1`, where
/// `s_i(g₁,…,g_n) = (g₁,…,g_i, σ, σ⁻¹g_{i+1}σ, …, σ⁻¹g_nσ)`.
pub fn homotopy_h(sigma: Elem, alpha: &Cochain) -> Result<Cochain> {
    if alpha.degree == 0 {
        return Err(Error::DegreeTooLow(1));
    }
    let n = alpha.degree - 1;
    let group = alpha.group.clone();
    let order = group.order();
    let modulus = alpha.modulus as i64;
    let mut out = alpha.sibling(n);
    let mut tuple = vec![0; n];
    let mut conj = vec![0; n];
    let mut arg = vec![0; n + 1];
    for (idx, slot) in out.values.iter_mut().enumerate() {
        decode_tuple(idx, order, &mut tuple);
        for (c, &g) in conj.iter_mut().zip(&tuple) {
            *c = group.conj(g, sigma);
        }
        let mut acc = 0i64;
        for i in 0..=n {
            arg[..i].copy_from_slice(&tuple[..i]);
            arg[i] = sigma;
            arg[i + 1..].copy_from_slice(&conj[i..]);
            let term = alpha.get(&arg) as i64;
            acc += if i % 2 == 0 { term } else { -term };
        }
        *slot = acc.rem_euclid(modulus) as u32;
    }
    Ok(out)
}

/// `H^n_{σ₁,σ₂}(α) = Σ_{0≤i≤j≤n} (−1)^{i+j} α∘s_{i,j}(σ₁,σ₂)` for `α` of degree
/// `n+2`, where `s_{i,j}` inserts `σ₁` after position `i` and `σ₂` after
/// position `j`, conjugating the middle block by `σ₁` and the tail by `σ₁σ₂`.
pub fn homotopy_big_h(sigma1: Elem, sigma2: Elem, alpha: &Cochain) -> Result<Cochain> {
    if alpha.degree < 2 {
        return Err(Error::DegreeTooLow(2));
    }
    let n = alpha.degree - 2;
    let group = alpha.group.clone();
    let order = group.order();
    let modulus = alpha.modulus as i64;
    let sigma12 = group.mul(sigma1, sigma2);
    let mut out = alpha.sibling(n);
    let mut tuple = vec![0; n];
    let mut conj1 = vec![0; n];
    let mut conj12 = vec![0; n];
    let mut arg = vec![0; n + 2];
    for (idx, slot) in out.values.iter_mut().enumerate() {
        decode_tuple(idx, order, &mut tuple);
        for k in 0..n {
            conj1[k] = group.conj(tuple[k], sigma1);
            conj12[k] = group.conj(tuple[k], sigma12);
        }
        let mut acc = 0i64;
        for i in 0..=n {
            for j in i..=n {
                arg[..i].copy_from_slice(&tuple[..i]);
                arg[i] = sigma1;
                arg[i + 1..j + 1].copy_from_slice(&conj1[i..j]);
                arg[j + 1] = sigma2;
                arg[j + 2..].copy_from_slice(&conj12[j..]);
                let term = alpha.get(&arg) as i64;
                acc += if (i + j) % 2 == 0 { term } else { -term };
            }
        }
        *slot = acc.rem_euclid(modulus) as u32;
    }
    Ok(out)
}

/// `σ.α − α − h_σ(dα) − d(h_σ(α))`; zero for every `α` of degree `≥ 1`.
pub fn homotopy_defect(sigma: Elem, alpha: &Cochain) -> Result<Cochain> {
    let lhs = &conj_act(sigma, alpha) - alpha;
    let rhs = &homotopy_h(sigma, &alpha.coboundary())? + &homotopy_h(sigma, alpha)?.coboundary();
    Ok(&lhs - &rhs)
}

/// `σ₁.h_{σ₂}(α) − h_{σ₁σ₂}(α) + h_{σ₁}(α) − H_{σ₁,σ₂}(dα) + d(H_{σ₁,σ₂}(α))`;
/// zero for every `α` of degree `≥ 2`.
pub fn homotopy_pair_defect(sigma1: Elem, sigma2: Elem, alpha: &Cochain) -> Result<Cochain> {
    let sigma12 = alpha.group.mul(sigma1, sigma2);
    let lhs = &(&conj_act(sigma1, &homotopy_h(sigma2, alpha)?) - &homotopy_h(sigma12, alpha)?) + &homotopy_h(sigma1, alpha)?;
    let rhs = &homotopy_big_h(sigma1, sigma2, &alpha.coboundary())? - &homotopy_big_h(sigma1, sigma2, alpha)?.coboundary();
    Ok(&lhs - &rhs)
}

/// Returns `Err(NotACocycle)` with the first violating tuple if `dc ≠ 0`.
pub fn check_cocycle(c: &Cochain) -> Result<()> {
    match c.coboundary().first_nonzero() {
        None => Ok(()),
        Some((tuple, value)) => Err(Error::NotACocycle { tuple, value }),
    }
}

/// The representative `h_g = h²_g(c)` of the class with `g.c − c = d h_g`.
pub fn h_class(g: Elem, c: &Cochain) -> Result<Cochain> {
    check_cocycle(c)?;
    homotopy_h(g, c)
}

/// Matrix of `d: C^{n−1} → C^n` (rows indexed by `n`-tuples, columns by
/// `(n−1)`-tuples, entries reduced mod `N`).
pub fn coboundary_matrix(group: &FiniteGroup, degree: usize, modulus: u32, action: Option<&[u32]>) -> Matrix {
    assert!(degree >= 1);
    let order = group.order();
    let rows = table_len(order, degree);
    let cols = table_len(order, degree - 1);
    let m = modulus as i64;
    let mut mat = Matrix::zeros(rows, cols);
    let mut tuple = vec![0; degree];
    let mut scratch = vec![0; degree - 1];
    let add = |mat: &mut Matrix, r: usize, c: usize, v: i64| {
        let cur = mat.get(r, c) as i64;
        mat.set(r, c, (cur + v).rem_euclid(m) as u64);
    };
    for r in 0..rows {
        decode_tuple(r, order, &mut tuple);
        let chi = action.map_or(1, |a| a[tuple[0] as usize]) as i64;
        add(&mut mat, r, encode_tuple(&tuple[1..], order), chi);
        for i in 1..degree {
            scratch[..i - 1].copy_from_slice(&tuple[..i - 1]);
            scratch[i - 1] = group.mul(tuple[i - 1], tuple[i]);
            scratch[i..].copy_from_slice(&tuple[i + 1..]);
            add(&mut mat, r, encode_tuple(&scratch, order), if i % 2 == 0 { 1 } else { -1 });
        }
        add(&mut mat, r, encode_tuple(&tuple[..degree - 1], order), if degree.is_multiple_of(2) { 1 } else { -1 });
    }
    mat
}

/// The cyclic 3-cocycle family on `Z/n`: `c_k(a,b,c) = k·a·⌊(b+c)/n⌋ mod N`.
pub fn cyclic_cocycle(group: Arc<FiniteGroup>, n: usize, k: i64, modulus: u32) -> Cochain {
    Cochain::from_fn(group, 3, modulus, move |t| {
        let (a, b, c) = (t[0] as i64, t[1] as i64, t[2] as i64);
        k * a * ((b + c) / n as i64)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(n))
    }

    #[test]
    fn identity_character_is_a_cocycle_on_z2() {
        let q = z(2);
        let alpha = Cochain::from_fn(q, 1, 2, |t| t[0] as i64);
        assert!(alpha.coboundary().is_zero());
    }

    #[test]
    fn constants_are_zero_cocycles() {
        let alpha = Cochain::from_fn(z(3), 0, 3, |_| 2);
        assert!(alpha.coboundary().is_zero());
    }

    #[test]
    fn xyz_is_a_cocycle() {
        let c = Cochain::from_fn(z(2), 3, 2, |t| (t[0] * t[1] * t[2]) as i64);
        assert!(c.coboundary().is_zero());
        assert!(check_cocycle(&c).is_ok());
    }

    #[test]
    fn h_class_of_xyz() {
        let c = Cochain::from_fn(z(2), 3, 2, |t| (t[0] * t[1] * t[2]) as i64);
        let h = h_class(1, &c).unwrap();
        let expected = Cochain::from_fn(z(2), 2, 2, |t| (t[0] * t[1]) as i64);
        assert_eq!(h, expected);
    }

    #[test]
    fn big_h_of_xyz() {
        let c = Cochain::from_fn(z(2), 3, 2, |t| (t[0] * t[1] * t[2]) as i64);
        let h = homotopy_big_h(1, 1, &c).unwrap();
        assert_eq!(h.get(&[1]), 1);
    }

    #[test]
    fn degree_zero_homotopy_is_rejected() {
        let alpha = Cochain::zero(z(2), 0, 2);
        assert_eq!(homotopy_h(1, &alpha), Err(Error::DegreeTooLow(1)));
        let beta = Cochain::zero(z(2), 1, 2);
        assert_eq!(homotopy_big_h(1, 1, &beta), Err(Error::DegreeTooLow(2)));
    }

    #[test]
    fn matrix_agrees_with_coboundary() {
        let q = Arc::new(FiniteGroup::symmetric(3));
        let alpha = Cochain::from_fn(q.clone(), 1, 5, |t| (t[0] as i64 * 3 + 1) % 5);
        let d = coboundary_matrix(&q, 2, 5, None);
        let v: Vec<u64> = alpha.values().iter().map(|&x| x as u64).collect();
        let image: Vec<u32> = d.mul_vec(&v, 5).into_iter().map(|x| x as u32).collect();
        assert_eq!(image, alpha.coboundary().values());
    }

    #[test]
    fn cyclic_family_is_cocycle() {
        let c = cyclic_cocycle(z(4), 4, 1, 4);
        assert!(check_cocycle(&c).is_ok());
    }
}
