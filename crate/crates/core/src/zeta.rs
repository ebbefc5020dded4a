//! Brute-force point counting and zeta functions, used as an independent
//! check on the cohomological p-rank.
//!
//! Points are counted over F_Q, Q = q^ext, in a Zech-logarithm
//! representation: nonzero elements are exponents of a primitive element,
//! products are sums of exponents and sums go through the table
//! `zech[n] = log(1 + t^n)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::fp_poly::{self, Poly};
use crate::algebra::{FieldCtx, FieldElement, MultiPoly};
use crate::cohomology::{kernel_basis, Ambient, CohomologyBasis};
use crate::error::{Error, Result};

/// Largest field we enumerate over, as log2 of its size.
pub const MAX_LOG2_FIELD: f64 = 24.0;

/// F_Q with Q = p^n, elements stored as Zech logarithms.
pub struct ZechField {
    p: u64,
    n: usize,
    order: u32,
    zech: Vec<u32>,
    /// Logs of 0, 1, ..., p - 1.
    prime: Vec<u32>,
}

impl ZechField {
    /// Sentinel log of zero.
    pub fn zero(&self) -> u32 {
        self.order - 1
    }

    pub fn one(&self) -> u32 {
        0
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn new(p: u64, n: usize) -> Result<Self> {
        if (n as f64) * (p as f64).log2() > MAX_LOG2_FIELD + 1e-9 {
            return Err(Error::Budget(format!(
                "F_{{{p}^{n}}} is larger than 2^{MAX_LOG2_FIELD}"
            )));
        }
        let order = (p as u32).pow(n as u32);
        let modulus = primitive_polynomial(p as u32, n);
        let pu = p as u32;
        let m1 = order - 1;
        // exp[i] = packed base-p digits of t^i
        let mut exp = vec![0u32; m1 as usize];
        let mut log = vec![u32::MAX; order as usize];
        let mut digits = vec![0u32; n];
        digits[0] = 1;
        let pack = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &x| acc * pu + x);
        for i in 0..m1 {
            let packed = pack(&digits);
            exp[i as usize] = packed;
            log[packed as usize] = i;
            // multiply by t modulo the monic modulus
            let top = digits[n - 1];
            for j in (1..n).rev() {
                digits[j] = digits[j - 1];
            }
            digits[0] = 0;
            if top != 0 {
                for (j, d) in digits.iter_mut().enumerate() {
                    *d = (*d + pu - fp_poly::mulmod(top, modulus[j], pu)) % pu;
                }
            }
        }
        let zech = (0..m1)
            .into_par_iter()
            .map(|i| {
                let e = exp[i as usize];
                let low = e % pu;
                let plus_one = if low == pu - 1 { e - low } else { e + 1 };
                if plus_one == 0 {
                    m1
                } else {
                    log[plus_one as usize]
                }
            })
            .collect();
        // the packed form of a prime-field element is the integer itself
        let mut prime = vec![m1; p as usize];
        for (i, &e) in exp.iter().enumerate() {
            if e < pu {
                prime[e as usize] = i as u32;
            }
        }
        Ok(ZechField {
            p,
            n,
            order,
            zech,
            prime,
        })
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let z = self.zero();
        if a == z || b == z {
            return z;
        }
        let s = a as u64 + b as u64;
        (s % z as u64) as u32
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 0;
        }
        if a == self.zero() {
            return a;
        }
        ((a as u64 * e) % self.zero() as u64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let z = self.zero();
        if a == z {
            return b;
        }
        if b == z {
            return a;
        }
        let diff = if b >= a { b - a } else { b + z - a };
        let k = self.zech[diff as usize];
        if k == z {
            return z;
        }
        ((a as u64 + k as u64) % z as u64) as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 || a == self.zero() {
            a
        } else {
            self.mul(a, self.zero() / 2)
        }
    }

    /// The image of an integer.
    pub fn from_int(&self, c: i64) -> u32 {
        self.prime[c.rem_euclid(self.p as i64) as usize]
    }

    /// All elements, as logs, with zero first.
    pub fn elements(&self) -> impl Iterator<Item = u32> + Clone + '_ {
        std::iter::once(self.zero()).chain(0..self.zero())
    }

    pub fn format(&self, a: u32) -> String {
        if a == self.zero() {
            "0".into()
        } else {
            format!("t^{a}")
        }
    }

    /// Embeds F_{p^k} given by `base`, which must divide this field.
    pub fn embedding(&self, base: &FieldCtx) -> Result<Embedding> {
        if base.p() != self.p || !self.n.is_multiple_of(base.k()) {
            return Err(Error::Mismatch(format!(
                "F_{{{}^{}}} does not embed in F_{{{}^{}}}",
                base.p(),
                base.k(),
                self.p,
                self.n
            )));
        }
        let prime = self.prime.clone();
        let k = base.k();
        let q = self.p.pow(k as u32);
        // roots of the base modulus lie in the subfield of order q
        let step = (self.zero() as u64 / (q - 1)) as u32;
        let modulus = base.modulus();
        // for k = 1 the modulus may be t itself, with root 0
        let root = std::iter::once(self.zero())
            .chain((0..(q - 1) as u32).map(|j| j * step))
            .find(|&r| {
                let mut acc = self.zero();
                for &c in modulus.iter().rev() {
                    acc = self.add(self.mul(acc, r), prime[c as usize]);
                }
                acc == self.zero()
            })
            .expect("a finite field contains the roots of its subfields' moduli");
        let powers = (0..k).map(|i| self.pow(root, i as u64)).collect();
        Ok(Embedding { prime, powers })
    }
}

/// A field homomorphism F_{p^k} -> ZechField.
pub struct Embedding {
    prime: Vec<u32>,
    powers: Vec<u32>,
}

impl Embedding {
    pub fn map(&self, z: &ZechField, x: &FieldElement) -> u32 {
        x.coords()
            .iter()
            .zip(&self.powers)
            .fold(z.zero(), |acc, (&c, &pw)| {
                z.add(acc, z.mul(self.prime[c as usize], pw))
            })
    }
}

/// Smallest monic primitive polynomial of degree `n` over F_p.
fn primitive_polynomial(p: u32, n: usize) -> Poly {
    let order = (p as u64).pow(n as u32);
    let factors = prime_factors(order - 1);
    let t: Poly = vec![0, 1];
    let mut coeffs = vec![0u32; n];
    loop {
        let mut cand = coeffs.clone();
        cand.push(1);
        if cand[0] != 0 && fp_poly::is_irreducible(&cand, p) {
            let one = |x: &Poly| x.len() == 1 && x[0] == 1;
            let primitive = factors
                .iter()
                .all(|&l| !one(&fp_poly::pow_mod_poly(&t, (order - 1) / l, &cand, p)));
            if primitive {
                return cand;
            }
        }
        // next coefficient vector, lexicographic from c_0
        let mut i = 0;
        loop {
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// A polynomial with coefficients moved into a [`ZechField`].
struct ZPoly {
    terms: Vec<(u32, Vec<u32>)>,
}

impl ZPoly {
    fn new(z: &ZechField, emb: &Embedding, f: &MultiPoly) -> Self {
        ZPoly {
            terms: f
                .terms()
                .map(|(e, c)| (emb.map(z, c), e.to_vec()))
                .collect(),
        }
    }

    fn eval(&self, z: &ZechField, point: &[u32]) -> u32 {
        let zero = z.zero();
        let mut acc = zero;
        'terms: for (c, e) in &self.terms {
            let mut log = *c as u64;
            for (&x, &k) in point.iter().zip(e) {
                if k == 0 {
                    continue;
                }
                if x == zero {
                    continue 'terms;
                }
                log += x as u64 * k as u64;
            }
            acc = z.add(acc, (log % zero as u64) as u32);
        }
        acc
    }

    fn derivative(&self, z: &ZechField, var: usize) -> ZPoly {
        let terms = self
            .terms
            .iter()
            .filter_map(|(c, e)| {
                let k = e[var] as u64 % z.p;
                if k == 0 {
                    return None;
                }
                let mut e2 = e.clone();
                e2[var] -= 1;
                Some((z.mul(*c, z.from_int(k as i64)), e2))
            })
            .collect();
        ZPoly { terms }
    }
}

/// Rational points of the ambient, one representative each, split into
/// independent blocks for parallel enumeration.
#[derive(Clone, Copy, Debug)]
enum Points {
    Projective {
        n: usize,
    },
    /// Cox coordinates with (x1 : x3) and (x2 : x4) each a point of P^1.
    Hirzebruch,
}

impl Points {
    fn for_ambient(ambient: &Ambient) -> Result<Self> {
        match ambient {
            Ambient::Projective { n } => Ok(Points::Projective { n: *n }),
            Ambient::Hirzebruch { beta, .. } => {
                if beta[0] == [1, 0] && beta[2] == [1, 0] && beta[1][1] == 1 && beta[3][1] == 1 {
                    Ok(Points::Hirzebruch)
                } else {
                    Err(Error::InvalidCurve(
                        "point counting needs degree vectors (1,0),(s,1),(1,0),(t,1)".into(),
                    ))
                }
            }
        }
    }

    /// Calls `visit` on a representative of every rational point, with the
    /// enumeration split by the first free coordinate.
    fn sum<F>(self, z: &ZechField, visit: F) -> u64
    where
        F: Fn(&[u32]) -> u64 + Sync,
    {
        let elems: Vec<u32> = z.elements().collect();
        let one = z.one();
        let zero = z.zero();
        match self {
            Points::Projective { n } => {
                // chart j: coordinates after j are 0, coordinate j is 1,
                // coordinates before j are free; last coordinate first
                (0..=n)
                    .rev()
                    .map(|j| {
                        if j == 0 {
                            let mut pt = vec![zero; n + 1];
                            pt[0] = one;
                            return visit(&pt);
                        }
                        elems
                            .par_iter()
                            .map(|&first| {
                                let mut pt = vec![zero; n + 1];
                                pt[0] = first;
                                pt[j] = one;
                                let mut total = 0;
                                for_each_tuple(&elems, &mut pt, 1, j, &mut |pt| total += visit(pt));
                                total
                            })
                            .sum::<u64>()
                    })
                    .sum()
            }
            Points::Hirzebruch => {
                let line: Vec<[u32; 2]> = elems
                    .iter()
                    .map(|&t| [t, one])
                    .chain(std::iter::once([one, zero]))
                    .collect();
                line.par_iter()
                    .map(|a| {
                        line.iter()
                            .map(|b| visit(&[a[0], b[0], a[1], b[1]]))
                            .sum::<u64>()
                    })
                    .sum()
            }
        }
    }
}

fn for_each_tuple(
    elems: &[u32],
    pt: &mut [u32],
    pos: usize,
    end: usize,
    f: &mut impl FnMut(&[u32]),
) {
    if pos == end {
        f(pt);
        return;
    }
    for &e in elems {
        pt[pos] = e;
        for_each_tuple(elems, pt, pos + 1, end, f);
    }
}

/// Counts zeros of a system of equations over an extension of its field.
pub struct PointCounter {
    field: ZechField,
    points: Points,
    polys: Vec<ZPoly>,
    nvars: usize,
}

impl PointCounter {
    /// Prepares counting over F_{q^ext}, q the order of the equations' field.
    pub fn new(ambient: &Ambient, polys: &[MultiPoly], ext: usize) -> Result<Self> {
        let base = polys
            .first()
            .ok_or_else(|| Error::InvalidCurve("no equations".into()))?
            .field();
        if ext == 0 {
            return Err(Error::Mismatch("extension degree 0".into()));
        }
        for f in polys {
            if f.nvars() != ambient.nvars() {
                return Err(Error::Mismatch(
                    "equation variables do not match the ambient".into(),
                ));
            }
            f.require_homogeneous()?;
        }
        let field = ZechField::new(base.p(), base.k() * ext)?;
        let emb = field.embedding(base)?;
        let polys = polys.iter().map(|f| ZPoly::new(&field, &emb, f)).collect();
        Ok(PointCounter {
            points: Points::for_ambient(ambient)?,
            field,
            polys,
            nvars: ambient.nvars(),
        })
    }

    pub fn field(&self) -> &ZechField {
        &self.field
    }

    pub fn count(&self) -> u64 {
        let z = &self.field;
        self.points.sum(z, |pt| {
            self.polys.iter().all(|f| f.eval(z, pt) == z.zero()) as u64
        })
    }

    /// Rational points where the Jacobian of the equations drops rank.
    pub fn singular_points(&self) -> Vec<Vec<u32>> {
        let z = &self.field;
        let grads: Vec<Vec<ZPoly>> = self
            .polys
            .iter()
            .map(|f| (0..self.nvars).map(|v| f.derivative(z, v)).collect())
            .collect();
        let found = std::sync::Mutex::new(Vec::new());
        self.points.sum(z, |pt| {
            if !self.polys.iter().all(|f| f.eval(z, pt) == z.zero()) {
                return 0;
            }
            let jac: Vec<Vec<u32>> = grads
                .iter()
                .map(|g| g.iter().map(|d| d.eval(z, pt)).collect())
                .collect();
            if zech_rank(z, jac) < self.polys.len() {
                found.lock().unwrap().push(pt.to_vec());
                return 1;
            }
            0
        });
        let mut out = found.into_inner().unwrap();
        out.sort();
        out
    }
}

fn zech_rank(z: &ZechField, mut m: Vec<Vec<u32>>) -> usize {
    let zero = z.zero();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != zero) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = (zero - m[rank][c]) % zero;
        let pivot_row: Vec<u32> = m[rank].iter().map(|&x| z.mul(x, inv)).collect();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] != zero {
                let factor = z.neg(row[c]);
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = z.add(*x, z.mul(factor, y));
                }
            }
        }
        m[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// Number of points of `polys = 0` over F_{q^ext}.
pub fn count_points(ambient: &Ambient, polys: &[MultiPoly], ext: usize) -> Result<u64> {
    Ok(PointCounter::new(ambient, polys, ext)?.count())
}

/// A singular point over F_{q^m} for the smallest `m <= max_ext` that has
/// one, with coordinates formatted as powers of a primitive element.
/// Finding none proves nothing about points over larger fields.
pub fn probe_singular(
    ambient: &Ambient,
    polys: &[MultiPoly],
    max_ext: usize,
) -> Result<Option<(usize, Vec<String>)>> {
    for m in 1..=max_ext {
        let counter = PointCounter::new(ambient, polys, m)?;
        if let Some(pt) = counter.singular_points().into_iter().next() {
            let z = counter.field();
            return Ok(Some((m, pt.iter().map(|&x| z.format(x)).collect())));
        }
    }
    Ok(None)
}

/// Genus of a smooth curve cut out by `polys`: the dimension of H¹(O).
pub fn genus(ambient: &Ambient, polys: &[MultiPoly]) -> Result<usize> {
    let first = polys
        .first()
        .ok_or_else(|| Error::InvalidCurve("no equations".into()))?;
    let total = polys[1..]
        .iter()
        .try_fold(first.require_homogeneous()?, |acc, f| {
            f.require_homogeneous().map(|d| acc + d)
        })?;
    let basis = CohomologyBasis::for_ambient(ambient, total)?;
    Ok(kernel_basis(first.field(), &basis, polys)?.len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaData {
    pub q: u64,
    pub g: usize,
    pub counts: Vec<u64>,
    /// Coefficients of the numerator P(t), ascending, degree 2g.
    pub numerator: Vec<i128>,
    pub sigma: usize,
}

/// Counts, numerator and p-rank of a smooth curve of genus `g`.
pub fn zeta_data(ambient: &Ambient, polys: &[MultiPoly], g: usize) -> Result<ZetaData> {
    let base = polys
        .first()
        .ok_or_else(|| Error::InvalidCurve("no equations".into()))?
        .field();
    let q = base
        .order()
        .and_then(|q| u64::try_from(q).ok())
        .ok_or_else(|| Error::Budget("field too large".into()))?;
    let counts = (1..=g.max(1))
        .map(|i| count_points(ambient, polys, i))
        .collect::<Result<Vec<_>>>()?;
    let counts = counts[..g].to_vec();
    let numerator = zeta_numerator(&counts, q, g)?;
    let sigma = p_rank_from_zeta(&numerator, base.p());
    Ok(ZetaData {
        q,
        g,
        counts,
        numerator,
        sigma,
    })
}

/// Numerator of the zeta function from `N_1..N_g`.
pub fn zeta_numerator(counts: &[u64], q: u64, g: usize) -> Result<Vec<i128>> {
    if counts.len() < g {
        return Err(Error::InconsistentCounts(format!(
            "need {g} counts, got {}",
            counts.len()
        )));
    }
    let q = q as i128;
    let mut s = vec![0i128; g + 1];
    for i in 1..=g {
        let qi = q.pow(i as u32);
        let n = counts[i - 1] as i128;
        s[i] = qi + 1 - n;
        // |s_i| <= 2g q^(i/2)
        let bound = 2.0 * g as f64 * (qi as f64).sqrt();
        if (s[i] as f64).abs() > bound + 1e-6 {
            return Err(Error::InconsistentCounts(format!(
                "N_{i} = {n} violates the Weil bound for genus {g} over F_{q}"
            )));
        }
    }
    let mut c = vec![0i128; 2 * g + 1];
    c[0] = 1;
    for i in 1..=g {
        let acc: i128 = (1..=i).map(|j| s[j] * c[i - j]).sum();
        if acc % i as i128 != 0 {
            return Err(Error::InconsistentCounts(format!(
                "coefficient {i} of the numerator is not an integer"
            )));
        }
        c[i] = -acc / i as i128;
    }
    for i in 0..g {
        c[2 * g - i] = q.pow((g - i) as u32) * c[i];
    }
    Ok(c)
}

/// Point counts over F_{q^1..q^n} implied by a zeta numerator.
pub fn predicted_counts(numerator: &[i128], q: u64, n: usize) -> Vec<i128> {
    let c = |j: usize| numerator.get(j).copied().unwrap_or(0);
    let mut s = vec![0i128; n + 1];
    for m in 1..=n {
        let acc: i128 = (1..m).map(|j| c(j) * s[m - j]).sum();
        s[m] = -(m as i128) * c(m) - acc;
    }
    (1..=n)
        .map(|m| (q as i128).pow(m as u32) + 1 - s[m])
        .collect()
}

/// Degree of the numerator reduced mod p.
pub fn p_rank_from_zeta(numerator: &[i128], p: u64) -> usize {
    numerator
        .iter()
        .rposition(|c| c.rem_euclid(p as i128) != 0)
        .unwrap_or(0)
}
