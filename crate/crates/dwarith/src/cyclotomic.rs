//! Exact arithmetic in `Q(ζ_N)`, stored as integer polynomials in `ζ_N`
//! reduced modulo the `N`-th cyclotomic polynomial over a common denominator.

use std::fmt;
use std::sync::{Mutex, OnceLock};
use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed};

use crate::error::{Error, Result};

/// Scalars usable as cyclotomic coefficients.
pub trait CoeffRing: Integer + Signed + Clone + FromPrimitive + fmt::Display + fmt::Debug {}

impl<T> CoeffRing for T where T: Integer + Signed + Clone + FromPrimitive + fmt::Display + fmt::Debug {}

/// Coefficients of `Φ_N` (ascending, monic, length `φ(N) + 1`).
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cyclotomic cache poisoned").get(&n) {
        return p.clone();
    }
    assert!(n >= 1);
    // x^n − 1 divided by Φ_d for every proper divisor d.
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        poly = divide_exact(&poly, &cyclotomic_polynomial(d));
    }
    cache.lock().expect("cyclotomic cache poisoned").insert(n, poly.clone());
    poly
}

fn divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (j, &b) in den.iter().enumerate() {
            rem[k + j] -= c * b;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// An element `(Σ a_k ζ^k) / den` of `Q(ζ_N)` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic<T> {
    modulus: u32,
    coeffs: Vec<T>,
    den: T,
}

impl<T: CoeffRing> fmt::Debug for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<T: CoeffRing> fmt::Display for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]/{}", terms.join(","), self.den)
    }
}

fn from_i64<T: FromPrimitive>(x: i64) -> T {
    T::from_i64(x).expect("coefficient type holds small integers")
}

impl<T: CoeffRing> Cyclotomic<T> {
    /// Builds and canonicalizes `(Σ coeffs[k] ζ^k) / den`; exponents wrap mod `N`.
    pub fn new(modulus: u32, coeffs: Vec<T>, den: T) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        assert!(!den.is_zero(), "zero denominator");
        let n = modulus as usize;
        let mut folded = vec![T::zero(); n];
        for (k, c) in coeffs.into_iter().enumerate() {
            folded[k % n] = folded[k % n].clone() + c;
        }
        let phi = cyclotomic_polynomial(modulus);
        let deg = phi.len() - 1;
        for k in (deg..n).rev() {
            let c = std::mem::replace(&mut folded[k], T::zero());
            if c.is_zero() {
                continue;
            }
            // ζ^k = ζ^{k−deg}·ζ^deg and ζ^deg = −Σ_{j<deg} Φ_j ζ^j.
            for (j, &pj) in phi[..deg].iter().enumerate() {
                if pj != 0 {
                    let slot = &mut folded[k - deg + j];
                    *slot = slot.clone() - c.clone() * from_i64::<T>(pj);
                }
            }
        }
        let mut out = Cyclotomic { modulus, coeffs: folded, den };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        if self.coeffs.iter().all(|c| c.is_zero()) {
            self.den = T::one();
            return;
        }
        let mut g = self.den.abs();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in &mut self.coeffs {
                *c = c.clone() / g.clone();
            }
            self.den = self.den.clone() / g;
        }
    }

    pub fn zero(modulus: u32) -> Self {
        Self::from_ratio(modulus, T::zero(), T::one())
    }

    pub fn one(modulus: u32) -> Self {
        Self::from_ratio(modulus, T::one(), T::one())
    }

    pub fn from_ratio(modulus: u32, num: T, den: T) -> Self {
        let mut coeffs = vec![T::zero(); modulus as usize];
        coeffs[0] = num;
        Self::new(modulus, coeffs, den)
    }

    pub fn from_int(modulus: u32, k: i64) -> Self {
        Self::from_ratio(modulus, from_i64(k), T::one())
    }

    /// `ζ_N^k`.
    pub fn zeta_pow(modulus: u32, k: i64) -> Self {
        let mut coeffs = vec![T::zero(); modulus as usize];
        coeffs[k.rem_euclid(modulus as i64) as usize] = T::one();
        Self::new(modulus, coeffs, T::one())
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Canonical numerator coefficients (length `N`, zero beyond `φ(N)`).
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn den(&self) -> &T {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value as a rational `(num, den)` when it lies in `Q`.
    pub fn as_rational(&self) -> Option<(T, T)> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| (self.coeffs[0].clone(), self.den.clone()))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() * other.den.clone() + b.clone() * self.den.clone())
            .collect();
        Ok(Self::new(self.modulus, coeffs, self.den.clone() * other.den.clone()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.modulus as usize;
        let mut coeffs = vec![T::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let slot = &mut coeffs[(i + j) % n];
                *slot = slot.clone() + a.clone() * b.clone();
            }
        }
        Ok(Self::new(self.modulus, coeffs, self.den.clone() * other.den.clone()))
    }

    /// Multiplication by the rational `num / den`.
    pub fn scale(&self, num: T, den: T) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.clone() * num.clone()).collect();
        Self::new(self.modulus, coeffs, self.den.clone() * den)
    }

    pub fn neg(&self) -> Self {
        self.scale(-T::one(), T::one())
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let n = self.modulus as usize;
        let mut coeffs = vec![T::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(n - k) % n] = c.clone();
        }
        Self::new(self.modulus, coeffs, self.den.clone())
    }

    /// Multiplication by `ζ^k`.
    pub fn mul_zeta_pow(&self, k: i64) -> Self {
        let n = self.modulus as usize;
        let shift = k.rem_euclid(n as i64) as usize;
        let mut coeffs = vec![T::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(i + shift) % n] = c.clone();
        }
        Self::new(self.modulus, coeffs, self.den.clone())
    }

    /// Image in `Z/ℓ` under `ζ ↦ root` (an element of order dividing `N`),
    /// for a prime `ℓ` not dividing the denominator.
    pub fn reduce_mod_prime(&self, root: u64, prime: u64) -> Option<u64>
    where
        T: num_traits::ToPrimitive,
    {
        let p = prime as i128;
        let den = self.den.to_i128()?.rem_euclid(p) as u64;
        let den_inv = crate::linalg::mod_inverse(den, prime)?;
        let mut acc: u64 = 0;
        let mut power: u64 = 1;
        for c in &self.coeffs {
            let c = c.to_i128()?.rem_euclid(p) as u64;
            acc = (acc + c as u128 as u64 * power % prime) % prime;
            power = (power as u128 * root as u128 % prime as u128) as u64;
        }
        Some((acc as u128 * den_inv as u128 % prime as u128) as u64)
    }
}

impl<T: CoeffRing> std::ops::Add for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn add(self, rhs: Self) -> Cyclotomic<T> {
        self.try_add(rhs).expect("cyclotomic moduli differ")
    }
}

impl<T: CoeffRing> std::ops::Mul for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn mul(self, rhs: Self) -> Cyclotomic<T> {
        self.try_mul(rhs).expect("cyclotomic moduli differ")
    }
}

impl<T: CoeffRing> std::ops::Sub for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn sub(self, rhs: Self) -> Cyclotomic<T> {
        self.try_add(&rhs.neg()).expect("cyclotomic moduli differ")
    }
}
