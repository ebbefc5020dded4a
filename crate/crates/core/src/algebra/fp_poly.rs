//! Dense univariate polynomials over a prime field, ascending coefficients.
//!
//! Only what the extension-field machinery needs: reduction, gcd and
//! modular exponentiation. Every routine keeps its output trimmed (no
//! trailing zero coefficients; the zero polynomial is empty).

pub(crate) type Poly = Vec<u32>;

#[inline]
pub(crate) fn mulmod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub(crate) fn powmod(mut base: u32, mut e: u64, p: u32) -> u32 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    powmod(a, p as u64 - 2, p)
}

pub(crate) fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn degree(a: &Poly) -> Option<usize> {
    a.len().checked_sub(1)
}

pub(crate) fn sub(a: &Poly, b: &Poly, p: u32) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            ((x as u64 + p as u64 - y as u64) % p as u64) as u32
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &Poly, b: &Poly, p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut out: Poly = out.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divrem(a: &Poly, b: &Poly, p: u32) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = inv_mod(b[db], p);
    let mut rem = a.clone();
    trim(&mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0u32; rem.len() - db];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = mulmod(rem[dr], lead_inv, p);
        let shift = dr - db;
        quot[shift] = c;
        for (j, &bj) in b.iter().enumerate() {
            let t = mulmod(c, bj, p);
            rem[shift + j] = ((rem[shift + j] as u64 + p as u64 - t as u64) % p as u64) as u32;
        }
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

pub(crate) fn rem(a: &Poly, b: &Poly, p: u32) -> Poly {
    divrem(a, b, p).1
}

/// Monic gcd.
pub(crate) fn gcd(a: &Poly, b: &Poly, p: u32) -> Poly {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(&mut x, p);
    x
}

pub(crate) fn make_monic(a: &mut Poly, p: u32) {
    if let Some(&lead) = a.last() {
        let inv = inv_mod(lead, p);
        for c in a.iter_mut() {
            *c = mulmod(*c, inv, p);
        }
    }
}

/// `base^e mod m`.
pub(crate) fn pow_mod_poly(base: &Poly, mut e: u64, m: &Poly, p: u32) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    rem(&acc, m, p)
}

/// Inverse of `a` modulo `m` via the extended Euclidean algorithm.
pub(crate) fn inv_mod_poly(a: &Poly, m: &Poly, p: u32) -> Option<Poly> {
    let (mut r0, mut r1) = (m.clone(), rem(a, m, p));
    let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = inv_mod(r0[0], p);
    let mut out: Poly = s0.iter().map(|&x| mulmod(x, c, p)).collect();
    out = rem(&out, m, p);
    Some(out)
}

/// Ben-Or test: a monic `f` of degree `k` is irreducible over F_p iff
/// `gcd(f, t^(p^i) - t) = 1` for every `1 <= i <= k/2`.
pub(crate) fn is_irreducible(f: &Poly, p: u32) -> bool {
    let Some(k) = degree(f) else { return false };
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let t: Poly = vec![0, 1];
    let mut h = t.clone();
    for _ in 0..k / 2 {
        h = pow_mod_poly(&h, p as u64, f, p);
        let g = gcd(f, &sub(&h, &t, p), p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}
