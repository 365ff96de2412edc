//! Naive reference implementations used as test oracles. They only read group
//! multiplication tables and cochain entries; every formula is evaluated
//! tuple by tuple.

#![allow(dead_code)]

use std::sync::Arc;

use dwarith::cochain::Cochain;
use dwarith::group::{Elem, FiniteGroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn group(g: FiniteGroup) -> Arc<FiniteGroup> {
    Arc::new(g)
}

/// Every `n`-tuple of elements of a group of the given order.
pub fn tuples(order: usize, n: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..order as Elem).map(move |g| {
                    let mut t = t.clone();
                    t.push(g);
                    t
                })
            })
            .collect();
    }
    out
}

fn conj(g: &FiniteGroup, x: Elem, s: Elem) -> Elem {
    g.mul(g.mul(g.inv(s), x), s)
}

fn signed(sum: i64, modulus: u32) -> i64 {
    sum.rem_euclid(modulus as i64)
}

/// Same shape and action as `like`, degree `degree`, entries from `f`.
fn build(like: &Cochain, degree: usize, f: impl Fn(&[Elem]) -> i64) -> Cochain {
    let c = Cochain::from_fn(like.group().clone(), degree, like.modulus(), f);
    match like.action() {
        Some(a) => c.with_action(a.clone()).expect("valid character"),
        None => c,
    }
}

/// `(dα)(γ₁..γ_{n+1}) = χ(γ₁)α(γ₂..) + Σ(−1)^i α(..γ_iγ_{i+1}..) + (−1)^{n+1}α(γ₁..γ_n)`.
pub fn d(alpha: &Cochain) -> Cochain {
    let g = alpha.group().clone();
    let n = alpha.degree();
    let m = alpha.modulus();
    build(alpha, n + 1, |t| {
        let mut sum = alpha.act_scalar(t[0]) as i64 * alpha.get(&t[1..]) as i64;
        for i in 1..=n {
            let mut merged: Vec<Elem> = t[..i - 1].to_vec();
            merged.push(g.mul(t[i - 1], t[i]));
            merged.extend_from_slice(&t[i + 1..]);
            let v = alpha.get(&merged) as i64;
            sum += if i % 2 == 1 { -v } else { v };
        }
        let last = alpha.get(&t[..n]) as i64;
        sum += if (n + 1) % 2 == 1 { -last } else { last };
        signed(sum, m)
    })
}

/// `(σ.α)(γ) = χ(σ)α(σ⁻¹γσ, …)`.
pub fn act(sigma: Elem, alpha: &Cochain) -> Cochain {
    let g = alpha.group().clone();
    build(alpha, alpha.degree(), |t| {
        let moved: Vec<Elem> = t.iter().map(|&x| conj(&g, x, sigma)).collect();
        signed(alpha.act_scalar(sigma) as i64 * alpha.get(&moved) as i64, alpha.modulus())
    })
}

/// `h_σ(α)(g₁..g_n) = Σ_i (−1)^i α(g₁..g_i, σ, σ⁻¹g_{i+1}σ, …)`.
pub fn h(sigma: Elem, alpha: &Cochain) -> Cochain {
    let g = alpha.group().clone();
    let n = alpha.degree() - 1;
    build(alpha, n, |t| {
        let mut sum = 0;
        for i in 0..=n {
            let mut arg: Vec<Elem> = t[..i].to_vec();
            arg.push(sigma);
            arg.extend(t[i..].iter().map(|&x| conj(&g, x, sigma)));
            let v = alpha.get(&arg) as i64;
            sum += if i % 2 == 0 { v } else { -v };
        }
        signed(sum, alpha.modulus())
    })
}

/// `H_{σ₁,σ₂}(α)(g₁..g_n) = Σ_{i≤j} (−1)^{i+j} α(g₁..g_i, σ₁, σ₁⁻¹g_{i+1}σ₁ ..
/// σ₁⁻¹g_jσ₁, σ₂, (σ₁σ₂)⁻¹g_{j+1}σ₁σ₂ ..)`.
pub fn big_h(s1: Elem, s2: Elem, alpha: &Cochain) -> Cochain {
    let g = alpha.group().clone();
    let n = alpha.degree() - 2;
    let s12 = g.mul(s1, s2);
    build(alpha, n, |t| {
        let mut sum = 0;
        for i in 0..=n {
            for j in i..=n {
                let mut arg: Vec<Elem> = t[..i].to_vec();
                arg.push(s1);
                arg.extend(t[i..j].iter().map(|&x| conj(&g, x, s1)));
                arg.push(s2);
                arg.extend(t[j..].iter().map(|&x| conj(&g, x, s12)));
                let v = alpha.get(&arg) as i64;
                sum += if (i + j) % 2 == 0 { v } else { -v };
            }
        }
        signed(sum, alpha.modulus())
    })
}

pub fn random_cochain(group: &Arc<FiniteGroup>, degree: usize, modulus: u32, rng: &mut ChaCha8Rng) -> Cochain {
    let len = group.order().pow(degree as u32);
    let values = (0..len).map(|_| rng.gen_range(0..modulus as u64)).collect();
    Cochain::from_values(group.clone(), degree, modulus, values)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every cochain of the given shape (`N^{|Q|^n}` of them).
pub fn all_cochains(group: &Arc<FiniteGroup>, degree: usize, modulus: u32) -> impl Iterator<Item = Cochain> + '_ {
    let len = group.order().pow(degree as u32);
    let count = (modulus as u64).pow(len as u32);
    (0..count).map(move |mut k| {
        let values = (0..len)
            .map(|_| {
                let v = k % modulus as u64;
                k /= modulus as u64;
                v
            })
            .collect();
        Cochain::from_values(group.clone(), degree, modulus, values)
    })
}

/// Whether some cochain `β` has `dβ = z`, by exhaustive search.
pub fn brute_force_coboundary(z: &Cochain) -> Option<Cochain> {
    all_cochains(z.group(), z.degree() - 1, z.modulus()).find(|b| d(b) == *z)
}

/// Every map `source → target` that respects multiplication, as element maps.
pub fn brute_force_homs(source: &FiniteGroup, target: &FiniteGroup) -> Vec<Vec<Elem>> {
    let n = source.order();
    tuples(target.order(), n)
        .into_iter()
        .filter(|f| {
            source.elements().all(|a| source.elements().all(|b| f[source.mul(a, b) as usize] == target.mul(f[a as usize], f[b as usize])))
        })
        .collect()
}

/// `x ↦ x mod prime` for a rank computation over `F_prime`.
pub fn rank_mod_prime(mut rows: Vec<Vec<u64>>, prime: u64) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(prime)) else { continue };
        rows.swap(rank, p);
        let inv = pow(rows[rank][c], prime - 2, prime);
        for v in rows[rank].iter_mut() {
            *v = *v * inv % prime;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    *v = (*v + prime * prime - f * pv) % prime;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn pow(mut a: u64, mut k: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while k > 0 {
        if k & 1 == 1 {
            r = r * a % m;
        }
        a = a * a % m;
        k >>= 1;
    }
    r
}

/// A prime `ℓ ≡ 1 mod N` below `2^16` (so products fit in `u64`) and an
/// element of exact order `N` in `F_ℓ`.
pub fn small_splitting_prime(modulus: u32) -> (u64, u64) {
    let n = modulus as u64;
    let is_prime = |p: u64| p > 1 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
    let mut l = 1000 / n * n + 1;
    loop {
        if is_prime(l) {
            for a in 2..l {
                let z = pow(a, (l - 1) / n, l);
                if (1..n).all(|k| pow(z, k, l) != 1) {
                    return (l, z);
                }
            }
        }
        l += n;
    }
}

/// Nullity of `θ(ρ.g) = ζ^{λ(g,ρ)} θ(ρ)` over `F_ℓ`, given the action and λ tables.
pub fn equivariant_nullity(len: usize, order: usize, modulus: u32, act: impl Fn(usize, Elem) -> usize, lambda: impl Fn(Elem, usize) -> u32) -> usize {
    let (prime, zeta) = small_splitting_prime(modulus);
    let mut rows = Vec::new();
    for i in 0..len {
        for g in 0..order as Elem {
            let mut row = vec![0u64; len];
            let j = act(i, g);
            let z = pow(zeta, lambda(g, i) as u64, prime);
            row[j] = (row[j] + 1) % prime;
            row[i] = (row[i] + prime - z) % prime;
            rows.push(row);
        }
    }
    len - rank_mod_prime(rows, prime)
}

/// A shipped model document from the workspace `configs/` directory.
pub fn config(name: &str) -> dwarith::config::ModelConfig {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(format!("{name}.toml"));
    dwarith::config::load_config(&path).unwrap_or_else(|e| panic!("{name}: {e:?}"))
}

/// Names of every shipped model document.
pub fn config_names() -> Vec<String> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter_map(|e| e.path().file_stem().map(|s| s.to_string_lossy().into_owned()))
        .collect();
    names.sort();
    names
}

/// `λ(g,ρ) = inv(x(ρ) + h_g∘ρ − x(ρ.g))` with `h_g` from the naive homotopy.
pub fn naive_lambda(x: &dwarith::local::Section, part: usize, gauge: &dwarith::local::Gauge, g: Elem, i: usize) -> u32 {
    let p = &x.parts()[part];
    let rho = p.space().get(i);
    let moved = p.space().index_of(&dwarith::group::conjugate_hom(rho, g)).unwrap();
    let h = h(g, gauge.cocycle()).pullback(rho);
    p.datum().inv_value(&(&(&p.values()[i] + &h) - &p.values()[moved]))
}

/// `λ_S(g, ρ_S) = Σ_p λ_p(g, ρ_p)`, with `ρ_S` given by its index in `F_S`.
pub fn naive_lambda_s(x: &dwarith::local::Section, gauge: &dwarith::local::Gauge, g: Elem, index: usize) -> u32 {
    let parts = x.space().decode(index);
    let total: u32 = parts.iter().enumerate().map(|(k, &i)| naive_lambda(x, k, gauge, g, i)).sum();
    total % gauge.modulus()
}

/// `(#orbits on F₁, #orbits on F₁ × F₂)` under conjugation, by Burnside's lemma.
pub fn burnside_orbits(first: &[Vec<Elem>], second: &[Vec<Elem>], g: &FiniteGroup) -> (usize, usize) {
    let fixed = |homs: &[Vec<Elem>], s: Elem| homs.iter().filter(|m| m.iter().all(|&e| g.mul(g.mul(g.inv(s), e), s) == e)).count();
    let single: usize = g.elements().map(|s| fixed(first, s)).sum();
    let pair: usize = g.elements().map(|s| fixed(first, s) * fixed(second, s)).sum();
    (single / g.order(), pair / g.order())
}
