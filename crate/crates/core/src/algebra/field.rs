//! Finite fields F_{p^k} in a power basis of a fixed generator `g`.

use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use super::fp_poly::{self, Poly};
use crate::error::{Error, Result};

/// Upper bound (exclusive) on the characteristic.
pub const MAX_PRIME: u64 = 1 << 31;

/// An element of F_{p^k}: its `k` coordinates in the basis `1, g, ..., g^(k-1)`.
///
/// Elements do not carry their field; every operation goes through the
/// [`FieldCtx`] that produced them.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FieldElement(SmallVec<[u32; 4]>);

impl FieldElement {
    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

struct Inner {
    p: u32,
    k: usize,
    modulus: Vec<u32>,
    /// `reduce[i]` holds `g^(k + i)` in the power basis.
    reduce: Vec<Vec<u32>>,
    /// `frob[j][i]` holds the image of `g^i` under `x -> x^(p^j)`.
    frob: Vec<Vec<Vec<u32>>>,
}

/// Shared handle on a finite field. Cloning is cheap.
#[derive(Clone)]
pub struct FieldCtx(Arc<Inner>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.k, self.0.modulus)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldCtx {
    /// Builds F_{p^k}. Without a modulus, the lexicographically smallest monic
    /// irreducible of degree `k` is used, comparing coefficient lists in
    /// ascending order `(c_0, c_1, ..., c_{k-1})`.
    pub fn new(p: u64, k: usize, modulus: Option<&[i64]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= MAX_PRIME {
            return Err(Error::PrimeOutOfRange(p));
        }
        let p32 = p as u32;
        let modulus: Poly = match modulus {
            Some(m) => {
                let m: Poly = m.iter().map(|&c| c.rem_euclid(p as i64) as u32).collect();
                if k != 0 && m.len() != k + 1 {
                    return Err(Error::InvalidModulus(format!(
                        "expected {} coefficients for degree {k}, got {}",
                        k + 1,
                        m.len()
                    )));
                }
                if m.last() != Some(&1) {
                    return Err(Error::InvalidModulus("modulus is not monic".into()));
                }
                if !fp_poly::is_irreducible(&m, p32) {
                    return Err(Error::InvalidModulus(format!(
                        "{m:?} is reducible over F_{p}"
                    )));
                }
                m
            }
            None => {
                if k == 0 {
                    return Err(Error::InvalidModulus(
                        "extension degree must be >= 1".into(),
                    ));
                }
                smallest_irreducible(p32, k)
            }
        };
        let k = modulus.len() - 1;
        Ok(Self::from_modulus(p32, k, modulus))
    }

    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    fn from_modulus(p: u32, k: usize, modulus: Poly) -> Self {
        let mut reduce = Vec::with_capacity(k.saturating_sub(1));
        // g^k = -(c_0 + ... + c_{k-1} g^{k-1})
        let mut cur: Vec<u32> = modulus[..k].iter().map(|&c| (p - c) % p).collect();
        for _ in 0..k.saturating_sub(1) {
            reduce.push(cur.clone());
            // multiply by g
            let top = cur[k - 1];
            let mut next = vec![0u32; k];
            next[1..k].copy_from_slice(&cur[..k - 1]);
            for (i, n) in next.iter_mut().enumerate() {
                let t = fp_poly::mulmod(top, (p - modulus[i]) % p, p);
                *n = (*n + t) % p;
            }
            cur = next;
        }
        let mut inner = Inner {
            p,
            k,
            modulus,
            reduce,
            frob: Vec::new(),
        };
        inner.frob = frobenius_tables(&inner);
        FieldCtx(Arc::new(inner))
    }

    pub fn p(&self) -> u64 {
        self.0.p as u64
    }

    pub fn k(&self) -> usize {
        self.0.k
    }

    /// `p^k`, or `None` when it does not fit in a `u128`.
    pub fn order(&self) -> Option<u128> {
        (self.0.p as u128).checked_pow(self.0.k as u32)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(SmallVec::from_elem(0, self.0.k))
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        let mut e = self.zero();
        e.0[0] = n.rem_euclid(self.0.p as i64) as u32;
        e
    }

    /// The generator `g` (the class of `t` modulo the modulus).
    pub fn generator(&self) -> FieldElement {
        let mut e = self.zero();
        if self.0.k == 1 {
            e.0[0] = (self.0.p - self.0.modulus[0]) % self.0.p;
        } else {
            e.0[1] = 1;
        }
        e
    }

    /// Builds an element from power-basis coordinates, reducing mod p.
    /// Missing trailing coordinates are zero; extra ones are folded in
    /// through the modulus.
    pub fn from_coords(&self, coords: &[i64]) -> FieldElement {
        let p = self.0.p as i64;
        let mut acc = self.zero();
        let mut gpow = self.one();
        let g = self.generator();
        for (i, &c) in coords.iter().enumerate() {
            let c = c.rem_euclid(p) as u32;
            if i < self.0.k && self.0.k > 1 {
                acc.0[i] = (acc.0[i] + c) % self.0.p;
            } else {
                acc = self.add(&acc, &self.scale(&gpow, c));
            }
            gpow = self.mul(&gpow, &g);
        }
        acc
    }

    /// Element with index `n = sum c_i p^i`; the inverse of [`Self::index`].
    pub fn from_index(&self, mut n: u128) -> FieldElement {
        let mut e = self.zero();
        for c in e.0.iter_mut() {
            *c = (n % self.0.p as u128) as u32;
            n /= self.0.p as u128;
        }
        e
    }

    pub fn index(&self, x: &FieldElement) -> u128 {
        x.0.iter()
            .rev()
            .fold(0u128, |acc, &c| acc * self.0.p as u128 + c as u128)
    }

    /// All elements in index order. Only sensible for small fields.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let q = self.order().unwrap_or(u128::MAX);
        (0..q).map(move |n| self.from_index(n))
    }

    pub fn is_in_prime_field(&self, x: &FieldElement) -> bool {
        x.0[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.0.p;
        FieldElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| ((x as u64 + y as u64) % p as u64) as u32)
                .collect(),
        )
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.0.p as u64;
        FieldElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| ((x as u64 + p - y as u64) % p) as u32)
                .collect(),
        )
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let p = self.0.p;
        FieldElement(a.0.iter().map(|&x| (p - x) % p).collect())
    }

    /// Multiplication by an element of the prime field.
    pub fn scale(&self, a: &FieldElement, c: u32) -> FieldElement {
        let p = self.0.p;
        FieldElement(a.0.iter().map(|&x| fp_poly::mulmod(x, c, p)).collect())
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let inner = &*self.0;
        let (p, k) = (inner.p as u64, inner.k);
        if k == 1 {
            return FieldElement(smallvec::smallvec![
                (a.0[0] as u64 * b.0[0] as u64 % p) as u32
            ]);
        }
        let mut prod = [0u64; 16];
        let mut heap;
        let prod: &mut [u64] = if 2 * k - 1 <= prod.len() {
            &mut prod[..2 * k - 1]
        } else {
            heap = vec![0u64; 2 * k - 1];
            &mut heap
        };
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let mut out: SmallVec<[u32; 4]> = prod[..k].iter().map(|&c| c as u32).collect();
        for (i, &c) in prod[k..].iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(&inner.reduce[i]) {
                *o = ((*o as u64 + c * r as u64) % p) as u32;
            }
        }
        FieldElement(out)
    }

    pub fn square(&self, a: &FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &FieldElement, mut e: u128) -> FieldElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.square(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        let p = self.0.p;
        if self.0.k == 1 {
            return Some(FieldElement(smallvec::smallvec![fp_poly::inv_mod(
                a.0[0], p
            )]));
        }
        let mut poly: Poly = a.0.to_vec();
        fp_poly::trim(&mut poly);
        let inv = fp_poly::inv_mod_poly(&poly, &self.0.modulus, p)?;
        let mut out = self.zero();
        for (o, c) in out.0.iter_mut().zip(inv) {
            *o = c;
        }
        Some(out)
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Option<FieldElement> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// `x^(p^e)`. Negative `e` gives iterated p-th roots, which exist and are
    /// unique because finite fields are perfect.
    pub fn pow_p(&self, x: &FieldElement, e: i64) -> FieldElement {
        let inner = &*self.0;
        let j = e.rem_euclid(inner.k as i64) as usize;
        if j == 0 {
            return x.clone();
        }
        let p = inner.p as u64;
        let table = &inner.frob[j];
        let mut out = self.zero();
        for (i, &c) in x.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &t) in out.0.iter_mut().zip(&table[i]) {
                *o = ((*o as u64 + c as u64 * t as u64) % p) as u32;
            }
        }
        out
    }

    pub fn frobenius(&self, x: &FieldElement) -> FieldElement {
        self.pow_p(x, 1)
    }

    pub fn pth_root(&self, x: &FieldElement) -> FieldElement {
        self.pow_p(x, -1)
    }

    /// Renders `x` in the coefficient-string grammar, e.g. `1 + 2*g^2`.
    pub fn format(&self, x: &FieldElement) -> String {
        if self.0.k == 1 {
            return x.0[0].to_string();
        }
        let parts: Vec<String> =
            x.0.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| match (i, c) {
                    (0, c) => c.to_string(),
                    (1, 1) => "g".to_string(),
                    (1, c) => format!("{c}*g"),
                    (i, 1) => format!("g^{i}"),
                    (i, c) => format!("{c}*g^{i}"),
                })
                .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

fn frobenius_tables(inner: &Inner) -> Vec<Vec<Vec<u32>>> {
    let (p, k) = (inner.p, inner.k);
    let reduce_poly = |a: &Poly| -> Vec<u32> {
        let r = fp_poly::rem(a, &inner.modulus, p);
        let mut v = vec![0u32; k];
        v[..r.len()].copy_from_slice(&r);
        v
    };
    let mut tables = Vec::with_capacity(k);
    // h_j = g^(p^j)
    let mut h: Poly = vec![0, 1];
    for _ in 0..k {
        let mut col: Poly = vec![1];
        let mut table = Vec::with_capacity(k);
        for _ in 0..k {
            table.push(reduce_poly(&col));
            col = fp_poly::rem(&fp_poly::mul(&col, &h, p), &inner.modulus, p);
        }
        tables.push(table);
        h = fp_poly::pow_mod_poly(&h, p as u64, &inner.modulus, p);
    }
    tables
}

/// Lexicographically smallest monic irreducible of degree `k`, comparing the
/// ascending coefficient list `(c_0, ..., c_{k-1})`.
fn smallest_irreducible(p: u32, k: usize) -> Poly {
    if k == 1 {
        return vec![0, 1];
    }
    // c_0 = 0 means t divides the polynomial, so start at c_0 = 1.
    let mut coeffs = vec![0u32; k];
    coeffs[0] = 1;
    loop {
        let mut f: Poly = coeffs.clone();
        f.push(1);
        if fp_poly::is_irreducible(&f, p) {
            return f;
        }
        // odometer with c_{k-1} varying fastest
        let mut i = k - 1;
        loop {
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            assert!(i > 0, "no irreducible polynomial of degree {k} over F_{p}");
            i -= 1;
        }
    }
}
