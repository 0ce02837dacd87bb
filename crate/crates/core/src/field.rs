//! Exact arithmetic in finite fields GF(p) and GF(p^r).
//!
//! Elements are dense little-endian coefficient vectors over GF(p); extension
//! fields reduce modulo the lexicographically smallest monic irreducible
//! polynomial of degree r, found by exhaustive search. Fields are capped at
//! q = p^r <= 2^16 so every property can be checked exhaustively.

use thiserror::Error;

/// Largest supported field size.
pub const FIELD_CAP: u64 = 1 << 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field exponent must be at least 1")]
    BadExponent,
    #[error("field size {0} exceeds cap {FIELD_CAP}")]
    CapExceeded(u64),
    #[error("element does not belong to this field")]
    ForeignElement,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

/// A concrete finite field GF(p^r).
///
/// For r > 1 the reduction polynomial is stored little-endian with its monic
/// leading coefficient, so it has length r + 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub r: u32,
    pub q: u64,
    pub reduction_polynomial: Option<Vec<u64>>,
}

/// An element of GF(p^r): r coefficients in [0, p), little-endian.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement {
    pub coeffs: Vec<u64>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Factors n as p^r for prime p, if possible.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut m = n;
            let mut r = 0;
            while m.is_multiple_of(p) {
                m /= p;
                r += 1;
            }
            return if m == 1 { Some((p, r)) } else { None };
        }
        p += 1;
    }
    Some((n, 1))
}

// -- dense polynomial helpers over GF(p), little-endian, no trailing zeros --

fn poly_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    poly_trim(out)
}

/// Remainder of a modulo the monic polynomial m.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    debug_assert_eq!(*m.last().unwrap(), 1);
    let mut a = a.to_vec();
    let deg_m = m.len() - 1;
    while a.len() > deg_m {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - deg_m;
        if lead != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = shift + i;
                a[idx] = (a[idx] + p * p - (lead * mi) % p) % p;
            }
        }
        a.pop();
    }
    poly_trim(a)
}

/// Irreducibility over GF(p) by trial division against every monic
/// polynomial of degree 1..=deg/2.
fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        // enumerate the p^d monic polynomials of degree d
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut k = idx;
            for _ in 0..d {
                divisor.push(k % p);
                k /= p;
            }
            divisor.push(1);
            if poly_rem(poly, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds GF(p^r). For r > 1 the reduction polynomial is the
    /// lexicographically smallest monic irreducible of degree r over GF(p),
    /// comparing coefficient sequences low-degree-first.
    pub fn new(p: u64, r: u32) -> Result<FieldSpec, FieldError> {
        if r < 1 {
            return Err(FieldError::BadExponent);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let q = p
            .checked_pow(r)
            .filter(|&q| q <= FIELD_CAP)
            .ok_or_else(|| FieldError::CapExceeded(p.saturating_pow(r)))?;
        let reduction_polynomial =
            if r == 1 { None } else { Some(Self::smallest_irreducible(p, r)) };
        Ok(FieldSpec { p, r, q, reduction_polynomial })
    }

    fn smallest_irreducible(p: u64, r: u32) -> Vec<u64> {
        // low-degree-first lexicographic order: c0 varies slowest
        let q = p.pow(r);
        for idx in 0..q {
            let mut cand = Vec::with_capacity(r as usize + 1);
            let mut k = idx;
            for i in 0..r {
                let place = p.pow(r - 1 - i);
                cand.push(k / place);
                k %= place;
            }
            cand.push(1);
            if is_irreducible(&cand, p) {
                return cand;
            }
        }
        unreachable!("an irreducible polynomial of every degree exists over GF(p)")
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coeffs: vec![0; self.r as usize] }
    }

    pub fn one(&self) -> FieldElement {
        let mut coeffs = vec![0; self.r as usize];
        coeffs[0] = 1;
        FieldElement { coeffs }
    }

    /// The element whose coefficients are the base-p digits of idx
    /// (little-endian); idx ranges over 0..q.
    pub fn element(&self, idx: u64) -> FieldElement {
        debug_assert!(idx < self.q);
        let mut coeffs = Vec::with_capacity(self.r as usize);
        let mut k = idx;
        for _ in 0..self.r {
            coeffs.push(k % self.p);
            k /= self.p;
        }
        FieldElement { coeffs }
    }

    pub fn index_of(&self, a: &FieldElement) -> u64 {
        a.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    /// All q elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|i| self.element(i))
    }

    fn check(&self, a: &FieldElement) -> Result<(), FieldError> {
        if a.coeffs.len() != self.r as usize || a.coeffs.iter().any(|&c| c >= self.p) {
            return Err(FieldError::ForeignElement);
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| (x + y) % self.p).collect();
        Ok(FieldElement { coeffs })
    }

    pub fn neg(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        Ok(FieldElement { coeffs })
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
        self.add(a, &self.neg(b)?)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        let prod = poly_mul(&a.coeffs, &b.coeffs, self.p);
        let reduced = match &self.reduction_polynomial {
            Some(m) => poly_rem(&prod, m, self.p),
            None => prod,
        };
        let mut coeffs = reduced;
        coeffs.resize(self.r as usize, 0);
        Ok(FieldElement { coeffs })
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            base = self.mul(&base, &base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        if self.is_zero(a) {
            return Err(FieldError::ZeroInverse);
        }
        // a^(q-2) = a^-1 in the multiplicative group of order q-1
        self.pow(a, self.q - 2)
    }
}
