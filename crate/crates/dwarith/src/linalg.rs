//! Exact linear algebra over `Z/N`.
//!
//! `Z/N` splits by the Chinese remainder theorem into local rings `Z/p^e`,
//! where every element is a unit times a power of `p`. Smith normal form over
//! such a ring only needs pivots of minimal `p`-valuation, so each factor is
//! diagonalized separately and the results are recombined.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `(p, e)` pairs with `N = ∏ p^e`, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Inverse of a unit modulo `m`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Valuation and unit part of `a ∈ Z/p^e`; `a = 0` has valuation `e`.
fn split_valuation(a: u64, p: u64, e: u32) -> (u32, u64) {
    if a == 0 {
        return (e, 0);
    }
    let mut v = 0;
    let mut u = a;
    while u.is_multiple_of(p) {
        u /= p;
        v += 1;
    }
    (v, u)
}

/// A dense matrix with entries reduced modulo some modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn reduce(&self, m: u64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x % m).collect() }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// `self · v mod m`.
    pub fn mul_vec(&self, v: &[u64], m: u64) -> Vec<u64> {
        (0..self.rows)
            .map(|r| {
                let row = &self.data[r * self.cols..(r + 1) * self.cols];
                row.iter().zip(v).fold(0u64, |acc, (&a, &b)| (acc + a * b) % m)
            })
            .collect()
    }
}

/// Smith normal form `U·A·V = diag` of a matrix over `Z/p^e`.
///
/// The row transform `U` is kept as the list of elementary operations (it is
/// `rows × rows`, usually far larger than the matrix), while `V` and `V⁻¹`
/// are stored densely.
#[derive(Clone, Debug)]
pub struct LocalSmith {
    pub p: u64,
    pub e: u32,
    pub modulus: u64,
    pub rows: usize,
    pub cols: usize,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
    /// `(valuation, unit)` of the diagonal entries `0..rank`.
    pub diag: Vec<(u32, u64)>,
    steps: Vec<RowStep>,
    pub v: Matrix,
    pub v_inv: Matrix,
}

#[derive(Clone, Debug)]
struct RowStep {
    pivot: usize,
    swap_with: usize,
    /// `row_i -= f·row_pivot` for each `(i, f)`.
    eliminations: Vec<(u32, u64)>,
}

impl LocalSmith {
    /// Diagonalizes `a` (entries already reduced mod `p^e`).
    pub fn new(mut a: Matrix, p: u64, e: u32) -> Self {
        let m = p.pow(e);
        let (rows, cols) = (a.rows, a.cols);
        let mut v = Matrix::identity(cols);
        let mut v_inv = Matrix::identity(cols);
        let mut diag = Vec::new();
        let mut steps = Vec::new();
        let mut k = 0;
        while k < rows.min(cols) {
            // Pivot of minimal valuation in the trailing block.
            let mut best: Option<(u32, usize, usize)> = None;
            'search: for r in k..rows {
                let row = &a.data[r * cols..(r + 1) * cols];
                for (c, &x) in row.iter().enumerate().skip(k) {
                    if x != 0 {
                        let val = split_valuation(x, p, e).0;
                        if best.is_none_or(|(bv, _, _)| val < bv) {
                            best = Some((val, r, c));
                            if val == 0 {
                                break 'search;
                            }
                        }
                    }
                }
            }
            let Some((val, pr, pc)) = best else { break };
            a.swap_rows(k, pr);
            a.swap_cols(k, pc);
            v.swap_cols(k, pc);
            v_inv.swap_rows(k, pc);
            let (_, unit) = split_valuation(a.get(k, k), p, e);
            let unit_inv = mod_inverse(unit, m).expect("unit part is invertible");
            let pv = p.pow(val);
            let quotient = |x: u64| (x / pv) * unit_inv % m;

            let pivot_row: Vec<u64> = a.data[k * cols + k..(k + 1) * cols].to_vec();
            let mut eliminations = Vec::new();
            for r in k + 1..rows {
                let x = a.get(r, k);
                if x == 0 {
                    continue;
                }
                let f = quotient(x);
                let row = &mut a.data[r * cols + k..(r + 1) * cols];
                for (dst, &src) in row.iter_mut().zip(&pivot_row) {
                    *dst = (*dst + m - f * src % m) % m;
                }
                eliminations.push((r as u32, f));
            }
            steps.push(RowStep { pivot: k, swap_with: pr, eliminations });

            // Column eliminations only touch row k once the column below is clear.
            for c in k + 1..cols {
                let x = a.get(k, c);
                if x == 0 {
                    continue;
                }
                let f = quotient(x);
                a.set(k, c, 0);
                // V ← V·(I − f e_k e_cᵀ), V⁻¹ ← (I + f e_k e_cᵀ)·V⁻¹
                for r in 0..cols {
                    let vk = v.get(r, k);
                    if vk != 0 {
                        let cur = v.get(r, c);
                        v.set(r, c, (cur + m - f * vk % m) % m);
                    }
                }
                for j in 0..cols {
                    let vc = v_inv.get(c, j);
                    if vc != 0 {
                        let cur = v_inv.get(k, j);
                        v_inv.set(k, j, (cur + f * vc) % m);
                    }
                }
            }
            diag.push((val, unit));
            k += 1;
        }
        LocalSmith { p, e, modulus: m, rows, cols, rank: k, diag, steps, v, v_inv }
    }

    /// Applies `U` to a column vector.
    pub fn apply_u(&self, z: &mut [u64]) {
        let m = self.modulus;
        for step in &self.steps {
            z.swap(step.pivot, step.swap_with);
            let zp = z[step.pivot];
            if zp == 0 {
                continue;
            }
            for &(r, f) in &step.eliminations {
                let r = r as usize;
                z[r] = (z[r] + m - f * zp % m) % m;
            }
        }
    }

    /// Solves `A·x = z` with `x = V·w`, `w_k` minimal in `[0, p^{e-v_k})` and
    /// free coordinates taken from `free` (zero when `None`).
    pub fn solve(&self, z: &[u64], free: Option<&[u64]>) -> Option<Vec<u64>> {
        let m = self.modulus;
        let mut y: Vec<u64> = z.iter().map(|&x| x % m).collect();
        self.apply_u(&mut y);
        if y[self.rank..].iter().any(|&x| x != 0) {
            return None;
        }
        let mut w = vec![0u64; self.cols];
        for k in 0..self.rank {
            let (val, unit) = self.diag[k];
            let pv = self.p.pow(val);
            if !y[k].is_multiple_of(pv) {
                return None;
            }
            let reduced_mod = self.p.pow(self.e - val);
            let inv = mod_inverse(unit % reduced_mod, reduced_mod).unwrap_or(0);
            w[k] = (y[k] / pv) % reduced_mod * inv % reduced_mod;
        }
        if let Some(free) = free {
            // Kernel directions: p^{e-v_k}·e_k for pivots, e_k beyond the rank.
            for k in 0..self.cols {
                let step = if k < self.rank { self.p.pow(self.e - self.diag[k].0) } else { 1 };
                w[k] = (w[k] + step * (free[k] % m)) % m;
            }
        }
        Some(self.v.mul_vec(&w, m))
    }

    /// Generators of the kernel of `A` as a `Z/p^e`-module.
    pub fn kernel_generators(&self) -> Vec<Vec<u64>> {
        let m = self.modulus;
        let mut out = Vec::new();
        for k in 0..self.cols {
            let scale = if k < self.rank {
                let val = self.diag[k].0;
                if val == 0 {
                    continue;
                }
                self.p.pow(self.e - val)
            } else {
                1
            };
            out.push((0..self.cols).map(|r| self.v.get(r, k) * scale % m).collect());
        }
        out
    }

    /// Kernel coordinates: for each kernel direction `k`, the exponent `c_k`
    /// with that summand `≅ Z/p^{c_k}`.
    fn kernel_summands(&self) -> Vec<(usize, u32)> {
        (0..self.cols)
            .filter_map(|k| {
                if k < self.rank {
                    let val = self.diag[k].0;
                    (val > 0).then_some((k, val))
                } else {
                    Some((k, self.e))
                }
            })
            .collect()
    }
}

/// Exponents `w` of the cyclic summands `Z/p^w` of `ker(next) / span(gens)`,
/// where `next_smith` diagonalizes the map out of the ambient space and every
/// vector in `gens` lies in its kernel. Trivial summands are omitted.
pub fn quotient_exponents(next_smith: &LocalSmith, gens: &[Vec<u64>]) -> Vec<u32> {
    let (p, e, m) = (next_smith.p, next_smith.e, next_smith.modulus);
    let summands = next_smith.kernel_summands();
    let width = gens.len() + summands.len();
    let mut rel = Matrix::zeros(summands.len(), width);
    for (j, g) in gens.iter().enumerate() {
        let y = next_smith.v_inv.mul_vec(g, m);
        for (i, &(k, c)) in summands.iter().enumerate() {
            let scale = p.pow(e - c);
            debug_assert_eq!(y[k] % scale, 0, "generator outside the kernel");
            rel.set(i, j, (y[k] / scale) % m);
        }
    }
    for (i, &(_, c)) in summands.iter().enumerate() {
        rel.set(i, gens.len() + i, p.pow(c) % m);
    }
    let smith = LocalSmith::new(rel, p, e);
    let mut exps: Vec<u32> = smith.diag.iter().map(|&(v, _)| v).filter(|&v| v > 0).collect();
    exps.extend(std::iter::repeat_n(e, summands.len() - smith.rank));
    exps.sort_unstable();
    exps
}

/// How a coboundary system is solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pivoting {
    /// Natural row/column order, free parameters zero.
    Canonical,
    /// Rows and columns shuffled by a seeded permutation, free parameters
    /// drawn from the same seed: an independent particular solution.
    Shuffled(u64),
}

/// Smith factorization of a matrix over `Z/N`, one factor per prime power.
#[derive(Clone, Debug)]
pub struct ModularSmith {
    pub modulus: u64,
    pub factors: Vec<LocalSmith>,
    row_perm: Option<Vec<usize>>,
    col_perm: Option<Vec<usize>>,
    seed: Option<u64>,
}

impl ModularSmith {
    pub fn new(a: &Matrix, modulus: u64, pivoting: Pivoting) -> Self {
        let (row_perm, col_perm, seed) = match pivoting {
            Pivoting::Canonical => (None, None, None),
            Pivoting::Shuffled(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut rp: Vec<usize> = (0..a.rows).collect();
                let mut cp: Vec<usize> = (0..a.cols).collect();
                rp.shuffle(&mut rng);
                cp.shuffle(&mut rng);
                (Some(rp), Some(cp), Some(seed))
            }
        };
        let permuted = match (&row_perm, &col_perm) {
            (Some(rp), Some(cp)) => {
                let mut b = Matrix::zeros(a.rows, a.cols);
                for (i, &r) in rp.iter().enumerate() {
                    for (j, &c) in cp.iter().enumerate() {
                        b.set(i, j, a.get(r, c));
                    }
                }
                b
            }
            _ => a.clone(),
        };
        let factors = factorize(modulus)
            .into_iter()
            .map(|(p, e)| LocalSmith::new(permuted.reduce(p.pow(e)), p, e))
            .collect();
        ModularSmith { modulus, factors, row_perm, col_perm, seed }
    }

    /// CRT idempotent for factor `i`: `≡ 1 mod p_i^{e_i}`, `≡ 0` modulo the rest.
    fn idempotent(&self, i: usize) -> u64 {
        let pe = self.factors[i].modulus;
        let rest = self.modulus / pe;
        rest * mod_inverse(rest % pe, pe).unwrap_or(0) % self.modulus
    }

    /// A solution of `A·x = z` over `Z/N`, or `None` if the system is inconsistent.
    pub fn solve(&self, z: &[u64]) -> Option<Vec<u64>> {
        let n = self.modulus;
        let z_perm: Vec<u64> = match &self.row_perm {
            Some(rp) => rp.iter().map(|&r| z[r]).collect(),
            None => z.to_vec(),
        };
        let cols = self.factors.first().map_or(0, |f| f.cols);
        let mut x = vec![0u64; cols];
        let mut rng = self.seed.map(|s| ChaCha8Rng::seed_from_u64(s ^ 0x5eed));
        for (i, f) in self.factors.iter().enumerate() {
            let free: Option<Vec<u64>> = rng.as_mut().map(|r| (0..cols).map(|_| r.gen_range(0..f.modulus)).collect());
            let part = f.solve(&z_perm, free.as_deref())?;
            let idem = self.idempotent(i);
            for (xj, pj) in x.iter_mut().zip(part) {
                *xj = (*xj + pj * idem % n) % n;
            }
        }
        Some(match &self.col_perm {
            Some(cp) => {
                let mut out = vec![0; cols];
                for (j, &c) in cp.iter().enumerate() {
                    out[c] = x[j];
                }
                out
            }
            None => x,
        })
    }

    /// Generators of `ker A` over `Z/N` (only meaningful for canonical pivoting).
    pub fn kernel_generators(&self) -> Vec<Vec<u64>> {
        let n = self.modulus;
        let mut out = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            let idem = self.idempotent(i);
            for g in f.kernel_generators() {
                out.push(g.into_iter().map(|x| x * idem % n).collect());
            }
        }
        out
    }
}

/// Combines per-prime elementary divisors into invariant factors `d_1 | d_2 | …`.
pub fn invariant_factors(elementary: &[(u64, Vec<u32>)]) -> Vec<u64> {
    let len = elementary.iter().map(|(_, exps)| exps.len()).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for (p, exps) in elementary {
        let mut sorted = exps.clone();
        sorted.sort_unstable();
        // Align the largest exponents with the largest invariant factors.
        let offset = len - sorted.len();
        for (i, &w) in sorted.iter().enumerate() {
            out[offset + i] *= p.pow(w);
        }
    }
    out
}

/// `a^k mod m`, exposed for the cyclotomic and character code.
pub fn pow_mod(a: u64, k: u64, m: u64) -> u64 {
    mod_pow(a, k, m)
}
