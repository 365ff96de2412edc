//! Finite groups as multiplication tables, homomorphism enumeration and the
//! conjugation action on Hom-spaces.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Element index inside a [`FiniteGroup`]. The identity is always `0`.
pub type Elem = u32;

/// A finite group stored as a total multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<Elem>,
    inv: Vec<Elem>,
    generators: Vec<Elem>,
    label: String,
    /// `input_index[k]` is the element index used by the caller for element `k`.
    input_index: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("order", &self.order)
            .field("generators", &self.generators)
            .finish()
    }
}

impl FiniteGroup {
    /// Validates a multiplication table and normalizes the identity to index 0.
    ///
    /// Element indices in `mul_table` and `generators` are the caller's; after
    /// normalization, [`FiniteGroup::from_input_index`] translates them.
    pub fn from_table(
        mul_table: &[Vec<usize>],
        generators: &[usize],
        label: impl Into<String>,
    ) -> Result<Self> {
        let label = label.into();
        let n = mul_table.len();
        if n == 0 {
            return Err(Error::NotAGroup(format!("{label}: empty table")));
        }
        if generators.is_empty() {
            return Err(Error::GeneratorsDontGenerate(format!("{label}: no generators")));
        }
        for (i, row) in mul_table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!("{label}: row {i} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::NotAGroup(format!("{label}: entry {bad} out of range")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mul_table[e][g] == g && mul_table[g][e] == g))
            .ok_or_else(|| Error::NotAGroup(format!("{label}: no two-sided identity")))?;

        // Swap the identity into slot 0.
        let mut to_new: Vec<usize> = (0..n).collect();
        to_new.swap(0, identity);
        let mut input_index = vec![0; n];
        for (old, &new) in to_new.iter().enumerate() {
            input_index[new] = old;
        }
        let mut mul = vec![0 as Elem; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = to_new[mul_table[input_index[a]][input_index[b]]] as Elem;
            }
        }
        let mut inv = vec![0 as Elem; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| mul[a * n + b] == 0 && mul[b * n + a] == 0)
                .ok_or_else(|| Error::NotAGroup(format!("{label}: element {} has no inverse", input_index[a])))?;
            inv[a] = b as Elem;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a * n + b] as usize;
                for c in 0..n {
                    let lhs = mul[ab * n + c];
                    let rhs = mul[a * n + mul[b * n + c] as usize];
                    if lhs != rhs {
                        return Err(Error::NotAGroup(format!(
                            "{label}: associativity fails at ({}, {}, {})",
                            input_index[a], input_index[b], input_index[c]
                        )));
                    }
                }
            }
        }
        let mut gens = Vec::with_capacity(generators.len());
        for &g in generators {
            if g >= n {
                return Err(Error::GeneratorsDontGenerate(format!("{label}: generator {g} out of range")));
            }
            gens.push(to_new[g] as Elem);
        }
        let group = FiniteGroup { order: n, mul, inv, generators: gens, label, input_index };
        if group.closure(&group.generators).len() != n {
            return Err(Error::GeneratorsDontGenerate(group.label.clone()));
        }
        Ok(group)
    }

    /// The cyclic group `Z/n`, element `k` being the residue `k`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group needs n >= 1");
        Self::abelian(&[n])
    }

    /// The direct product `Z/n_1 × … × Z/n_r`, elements in lexicographic order
    /// of their coordinate tuples (last coordinate fastest).
    pub fn abelian(factors: &[usize]) -> Self {
        assert!(!factors.is_empty() && factors.iter().all(|&n| n >= 1));
        let order: usize = factors.iter().product();
        let coords = |mut k: usize| {
            let mut c = vec![0; factors.len()];
            for i in (0..factors.len()).rev() {
                c[i] = k % factors[i];
                k /= factors[i];
            }
            c
        };
        let index = |c: &[usize]| c.iter().zip(factors).fold(0, |acc, (&x, &n)| acc * n + x);
        let mut mul = vec![0; order * order];
        let mut inv = vec![0; order];
        for a in 0..order {
            let ca = coords(a);
            let neg: Vec<usize> = ca.iter().zip(factors).map(|(&x, &n)| (n - x) % n).collect();
            inv[a] = index(&neg) as Elem;
            for b in 0..order {
                let cb = coords(b);
                let sum: Vec<usize> = ca.iter().zip(&cb).zip(factors).map(|((&x, &y), &n)| (x + y) % n).collect();
                mul[a * order + b] = index(&sum) as Elem;
            }
        }
        let generators: Vec<Elem> = (0..factors.len())
            .map(|i| {
                let mut c = vec![0; factors.len()];
                c[i] = 1 % factors[i];
                index(&c) as Elem
            })
            .collect();
        let label = factors.iter().map(|n| format!("Z/{n}")).collect::<Vec<_>>().join("x");
        FiniteGroup { order, mul, inv, generators, label, input_index: (0..order).collect() }
    }

    /// The symmetric group on `n` letters, elements ordered lexicographically
    /// by their one-line notation (identity first).
    pub fn symmetric(n: usize) -> Self {
        assert!((1..=5).contains(&n), "symmetric group builtin supports 1..=5 letters");
        let mut perms: Vec<Vec<usize>> = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            perms.push(current.clone());
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        let lookup: HashMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(k, p)| (p, k)).collect();
        // (p·q)(x) = p(q(x)): apply q first.
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| perms.iter().map(|q| lookup[&q.iter().map(|&x| p[x]).collect::<Vec<_>>()]).collect())
            .collect();
        let mut gens = Vec::new();
        if n >= 2 {
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            gens.push(lookup[&swap]);
            let cycle: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
            if n > 2 {
                gens.push(lookup[&cycle]);
            }
        } else {
            gens.push(0);
        }
        Self::from_table(&table, &gens, format!("S{n}")).expect("symmetric group table is valid")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn identity(&self) -> Elem {
        0
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    /// `g⁻¹·x·g`.
    #[inline]
    pub fn conj(&self, x: Elem, g: Elem) -> Elem {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order as Elem
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Element order.
    pub fn elem_order(&self, a: Elem) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Translates a caller-side element index (as used in [`FiniteGroup::from_table`]).
    pub fn from_input_index(&self, k: usize) -> Option<Elem> {
        self.input_index.iter().position(|&i| i == k).map(|p| p as Elem)
    }

    /// The caller-side index of element `a`.
    pub fn input_index(&self, a: Elem) -> usize {
        self.input_index[a as usize]
    }

    /// The subgroup generated by `gens`, listed in discovery order.
    pub fn closure(&self, gens: &[Elem]) -> Vec<Elem> {
        let mut seen = vec![false; self.order];
        let mut out = vec![0];
        seen[0] = true;
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out
    }

    /// The full multiplication table (row-major, `order × order`).
    pub fn table(&self) -> &[Elem] {
        &self.mul
    }
}

/// A group homomorphism given by its full element map.
#[derive(Clone)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<Elem>,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{} {:?}", self.source.label, self.target.label, self.map)
    }
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && self.source == other.source && self.target == other.target
    }
}

impl Eq for GroupHom {}

impl GroupHom {
    /// Validates that `map` is a homomorphism `source → target`.
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<Elem>) -> Result<Self> {
        if map.len() != source.order() {
            return Err(Error::NotAHomomorphism(format!(
                "map has {} entries, source {} has order {}",
                map.len(),
                source.label(),
                source.order()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&y| y as usize >= target.order()) {
            return Err(Error::NotAHomomorphism(format!("image {bad} outside {}", target.label())));
        }
        for a in source.elements() {
            for b in source.elements() {
                if map[source.mul(a, b) as usize] != target.mul(map[a as usize], map[b as usize]) {
                    return Err(Error::NotAHomomorphism(format!(
                        "{} -> {}: f({a}*{b}) != f({a})*f({b})",
                        source.label(),
                        target.label()
                    )));
                }
            }
        }
        Ok(GroupHom { source, target, map })
    }

    /// Builds the homomorphism determined by generator images, if consistent.
    pub fn from_generator_images(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        images: &[Elem],
    ) -> Result<Self> {
        let map = extend_by_closure(&source, &target, images, source.generators().len()).ok_or_else(|| {
            Error::NotAHomomorphism(format!(
                "generator images {images:?} do not define a homomorphism {} -> {}",
                source.label(),
                target.label()
            ))
        })?;
        Ok(GroupHom { source, target, map: map.into_iter().map(|x| x.unwrap()).collect() })
    }

    pub fn identity(group: Arc<FiniteGroup>) -> Self {
        let map = group.elements().collect();
        GroupHom { source: group.clone(), target: group, map }
    }

    pub fn trivial(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>) -> Self {
        let map = vec![0; source.order()];
        GroupHom { source, target, map }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.map[a as usize]
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    /// Images of the source generators, the key for the enumeration order.
    pub fn generator_images(&self) -> Vec<Elem> {
        self.source.generators().iter().map(|&g| self.apply(g)).collect()
    }

    /// `self ∘ first`.
    pub fn compose_after(&self, first: &GroupHom) -> GroupHom {
        debug_assert_eq!(first.target.as_ref(), self.source.as_ref());
        GroupHom {
            source: first.source.clone(),
            target: self.target.clone(),
            map: first.map.iter().map(|&x| self.apply(x)).collect(),
        }
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.order()];
        for &y in &self.map {
            hit[y as usize] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// If `self` is constant on the fibres of the surjection `quotient`,
    /// returns the induced map on the quotient's target.
    pub fn factor_through(&self, quotient: &GroupHom) -> Option<GroupHom> {
        debug_assert_eq!(quotient.source.as_ref(), self.source.as_ref());
        let mut induced: Vec<Option<Elem>> = vec![None; quotient.target.order()];
        for a in self.source.elements() {
            let slot = &mut induced[quotient.apply(a) as usize];
            match slot {
                Some(y) if *y != self.apply(a) => return None,
                _ => *slot = Some(self.apply(a)),
            }
        }
        let map: Option<Vec<Elem>> = induced.into_iter().collect();
        map.map(|map| GroupHom { source: quotient.target.clone(), target: self.target.clone(), map })
    }
}

/// `γ ↦ g⁻¹·ρ(γ)·g`, a right action of the target group on homomorphisms.
pub fn conjugate_hom(rho: &GroupHom, g: Elem) -> GroupHom {
    let target = &rho.target;
    GroupHom {
        source: rho.source.clone(),
        target: target.clone(),
        map: rho.map.iter().map(|&x| target.conj(x, g)).collect(),
    }
}

/// Extends images of the first `assigned` generators to the subgroup they
/// generate. Returns `None` on a multiplication conflict.
fn extend_by_closure(
    source: &FiniteGroup,
    target: &FiniteGroup,
    images: &[Elem],
    assigned: usize,
) -> Option<Vec<Option<Elem>>> {
    let gens = &source.generators()[..assigned];
    let mut map: Vec<Option<Elem>> = vec![None; source.order()];
    map[0] = Some(0);
    let mut queue = vec![0 as Elem];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        let fx = map[x as usize].unwrap();
        for (k, &g) in gens.iter().enumerate() {
            let y = source.mul(x, g);
            let fy = target.mul(fx, images[k]);
            match map[y as usize] {
                Some(existing) if existing != fy => return None,
                Some(_) => {}
                None => {
                    map[y as usize] = Some(fy);
                    queue.push(y);
                }
            }
        }
        i += 1;
    }
    Some(map)
}

/// All homomorphisms `source → target`, in lexicographic order of the
/// generator-image tuples.
pub fn enumerate_homs(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Vec<GroupHom> {
    let ngens = source.generators().len();
    let gen_orders: Vec<usize> = source.generators().iter().map(|&g| source.elem_order(g)).collect();
    let target_orders: Vec<usize> = target.elements().map(|y| target.elem_order(y)).collect();
    let mut out = Vec::new();
    let mut images = vec![0 as Elem; ngens];
    fn search(
        depth: usize,
        images: &mut Vec<Elem>,
        source: &Arc<FiniteGroup>,
        target: &Arc<FiniteGroup>,
        gen_orders: &[usize],
        target_orders: &[usize],
        out: &mut Vec<GroupHom>,
    ) {
        let ngens = images.len();
        if depth == ngens {
            if let Some(map) = extend_by_closure(source, target, images, ngens) {
                out.push(GroupHom {
                    source: source.clone(),
                    target: target.clone(),
                    map: map.into_iter().map(|x| x.expect("generators generate")).collect(),
                });
            }
            return;
        }
        for y in target.elements() {
            if !gen_orders[depth].is_multiple_of(target_orders[y as usize]) {
                continue;
            }
            images[depth] = y;
            if extend_by_closure(source, target, images, depth + 1).is_some() {
                search(depth + 1, images, source, target, gen_orders, target_orders, out);
            }
        }
    }
    search(0, &mut images, source, target, &gen_orders, &target_orders, &mut out);
    out
}

/// One orbit of a right action together with its stabilizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    /// Index (into the acted-on list) of the first orbit element in list order.
    pub representative: usize,
    /// Member indices in increasing order.
    pub members: Vec<usize>,
    /// Elements `g` with `rep.g = rep`.
    pub stabilizer: Vec<Elem>,
}

/// Orbits and stabilizers of a right action of `group` on `0..len`, where
/// `act(i, g)` is the index of item `i` acted on by `g`.
pub fn orbits_by_action(len: usize, group: &FiniteGroup, act: impl Fn(usize, Elem) -> usize) -> Vec<Orbit> {
    let mut seen = vec![false; len];
    let mut orbits = Vec::new();
    for start in 0..len {
        if seen[start] {
            continue;
        }
        let mut members = Vec::new();
        let mut stabilizer = Vec::new();
        for g in group.elements() {
            let y = act(start, g);
            if y == start {
                stabilizer.push(g);
            }
            if !seen[y] {
                seen[y] = true;
                members.push(y);
            }
        }
        members.sort_unstable();
        orbits.push(Orbit { representative: start, members, stabilizer });
    }
    orbits
}

/// Orbits of the conjugation action on a list of homomorphisms (closed under
/// conjugation).
pub fn orbits_stabilizers(homs: &[GroupHom], group: &FiniteGroup) -> Vec<Orbit> {
    let index: HashMap<&[Elem], usize> = homs.iter().enumerate().map(|(k, h)| (h.map(), k)).collect();
    orbits_by_action(homs.len(), group, |i, g| {
        let moved = conjugate_hom(&homs[i], g);
        *index.get(moved.map()).expect("hom list is closed under conjugation")
    })
}

/// `Hom(source, target)` with precomputed conjugation action.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    homs: Vec<GroupHom>,
    index: HashMap<Vec<Elem>, usize>,
    /// `conj[i * |G| + g]` is the index of `homs[i].g`.
    conj: Vec<usize>,
}

impl HomSpace {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>) -> Self {
        let homs = enumerate_homs(&source, &target);
        let index: HashMap<Vec<Elem>, usize> = homs.iter().enumerate().map(|(k, h)| (h.map().to_vec(), k)).collect();
        let order = target.order();
        let mut conj = vec![0; homs.len() * order];
        for (i, h) in homs.iter().enumerate() {
            for g in target.elements() {
                conj[i * order + g as usize] = index[conjugate_hom(h, g).map()];
            }
        }
        HomSpace { source, target, homs, index, conj }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.homs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.homs.is_empty()
    }

    pub fn homs(&self) -> &[GroupHom] {
        &self.homs
    }

    pub fn get(&self, i: usize) -> &GroupHom {
        &self.homs[i]
    }

    pub fn index_of(&self, rho: &GroupHom) -> Option<usize> {
        self.index.get(rho.map()).copied()
    }

    /// Index of `homs[i].g`.
    #[inline]
    pub fn conj(&self, i: usize, g: Elem) -> usize {
        self.conj[i * self.target.order() + g as usize]
    }

    pub fn orbits(&self) -> Vec<Orbit> {
        orbits_by_action(self.len(), &self.target, |i, g| self.conj(i, g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_tables() {
        let z4 = FiniteGroup::cyclic(4);
        assert_eq!(z4.mul(3, 2), 1);
        assert_eq!(z4.inv(1), 3);
        assert_eq!(z4.elem_order(2), 2);
    }

    #[test]
    fn identity_is_normalized_to_zero() {
        // Z/2 written with the identity in slot 1.
        let g = FiniteGroup::from_table(&[vec![1, 0], vec![0, 1]], &[0], "Z/2 swapped").unwrap();
        assert_eq!(g.mul(1, 1), 0);
        assert_eq!(g.from_input_index(1), Some(0));
        assert_eq!(g.generators(), &[1]);
    }

    #[test]
    fn rejects_non_groups() {
        assert!(matches!(
            FiniteGroup::from_table(&[vec![0, 1], vec![0, 1]], &[1], "bad"),
            Err(Error::NotAGroup(_))
        ));
        let z4: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| (a + b) % 4).collect()).collect();
        assert!(matches!(FiniteGroup::from_table(&z4, &[2], "z4"), Err(Error::GeneratorsDontGenerate(_))));
    }

    #[test]
    fn symmetric_group_is_nonabelian() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
    }
}
