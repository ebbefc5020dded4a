//! Monomial bases of top cohomology of line bundles on P^n and on Hirzebruch
//! surfaces, and the maps induced by multiplying with a form.
//!
//! A basis monomial `α` (all entries ≥ 1) stands for the Čech class of
//! `∏ x_i^(-α_i)`. Twists are stored as positive degrees: a basis with twist
//! `m` spans `H^top(O(-m))`. Multiplying a class by a polynomial and keeping
//! only the products whose exponents are all ≤ -1 gives the induced map on
//! top cohomology; every other product is a coboundary.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::algebra::{Degree, Exponents, FieldCtx, FieldElement, Grading, MultiPoly};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Degree vectors of the Cox variables `x1..x4` of the Hirzebruch surface H_r.
pub fn hirzebruch_beta(r: i64) -> [[i64; 2]; 4] {
    [[1, 0], [-r, 1], [1, 0], [0, 1]]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ambient {
    Projective { n: usize },
    Hirzebruch { r: i64, beta: [[i64; 2]; 4] },
}

impl Ambient {
    pub fn projective(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidCurve(format!("projective dimension {n} < 2")));
        }
        Ok(Ambient::Projective { n })
    }

    pub fn hirzebruch(r: i64) -> Result<Self> {
        Self::hirzebruch_with_beta(r, hirzebruch_beta(r))
    }

    pub fn hirzebruch_with_beta(r: i64, beta: [[i64; 2]; 4]) -> Result<Self> {
        if r < 0 {
            return Err(Error::InvalidCurve(format!("Hirzebruch index {r} < 0")));
        }
        Ok(Ambient::Hirzebruch { r, beta })
    }

    pub fn nvars(&self) -> usize {
        match self {
            Ambient::Projective { n } => n + 1,
            Ambient::Hirzebruch { .. } => 4,
        }
    }

    /// Dimension of the ambient variety.
    pub fn dim(&self) -> usize {
        match self {
            Ambient::Projective { n } => *n,
            Ambient::Hirzebruch { .. } => 2,
        }
    }

    pub fn grading(&self) -> Grading {
        match self {
            Ambient::Projective { .. } => Grading::Standard,
            Ambient::Hirzebruch { beta, .. } => Grading::Weighted(beta.to_vec()),
        }
    }
}

/// Graded-lexicographic comparison, largest first.
fn grlex_desc(a: &Exponents, b: &Exponents) -> Ordering {
    let da: u64 = a.iter().map(|&x| x as u64).sum();
    let db: u64 = b.iter().map(|&x| x as u64).sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    ambient: Ambient,
    twist: Degree,
    monomials: Vec<Exponents>,
    index: HashMap<Exponents, usize>,
}

impl PartialEq for CohomologyBasis {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient
            && self.twist == other.twist
            && self.monomials == other.monomials
    }
}

impl CohomologyBasis {
    fn from_monomials(ambient: Ambient, twist: Degree, mut monomials: Vec<Exponents>) -> Self {
        monomials.sort_by(grlex_desc);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        CohomologyBasis {
            ambient,
            twist,
            monomials,
            index,
        }
    }

    /// Basis of `H^n(P^n, O(-m))`: exponent vectors of length `n + 1` with
    /// entries ≥ 1 summing to `m`. Empty when `m <= n`.
    pub fn projective(n: usize, m: i64) -> Result<Self> {
        let ambient = Ambient::projective(n)?;
        let mut out = Vec::new();
        if m > n as i64 {
            let mut cur: Exponents = smallvec::smallvec![1; n + 1];
            compositions(&mut cur, 0, m as u32 - (n as u32 + 1), &mut out);
        }
        Ok(Self::from_monomials(ambient, Degree::Total(m), out))
    }

    /// Basis of `H^2(H_r, O(-a,-b))` for the standard degree vectors.
    pub fn hirzebruch(r: i64, a: i64, b: i64) -> Result<Self> {
        Self::for_ambient(&Ambient::hirzebruch(r)?, Degree::Bi(a, b))
    }

    /// Basis of top cohomology of `O(-twist)` on `ambient`.
    pub fn for_ambient(ambient: &Ambient, twist: Degree) -> Result<Self> {
        match (ambient, twist) {
            (Ambient::Projective { n }, Degree::Total(m)) => Self::projective(*n, m),
            (Ambient::Hirzebruch { beta, .. }, Degree::Bi(a, b)) => {
                let monomials = weighted_solutions(beta, [a, b])?;
                Ok(Self::from_monomials(ambient.clone(), twist, monomials))
            }
            _ => Err(Error::Grading(format!(
                "twist {twist} does not match the ambient grading"
            ))),
        }
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn twist(&self) -> Degree {
        self.twist
    }

    pub fn monomials(&self) -> &[Exponents] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        let key: Exponents = exps.iter().copied().collect();
        self.index.get(&key).copied()
    }

    pub fn unit(&self, field: &FieldCtx, i: usize) -> ClassVector {
        let mut v = ClassVector::zero(field, self.len());
        v.0[i] = field.one();
        v
    }

    fn check_target(&self, f: &MultiPoly, target: &CohomologyBasis) -> Result<()> {
        if f.grading() != &self.ambient.grading() || f.nvars() != self.ambient.nvars() {
            return Err(Error::Grading(
                "polynomial grading does not match the ambient".into(),
            ));
        }
        if target.ambient != self.ambient {
            return Err(Error::Grading("source and target ambients differ".into()));
        }
        let deg = f.require_homogeneous()?;
        if !deg.same_kind(self.twist) || target.twist != self.twist - deg {
            return Err(Error::Grading(format!(
                "target twist {} != source twist {} - degree {deg}",
                target.twist, self.twist
            )));
        }
        Ok(())
    }

    /// Matrix of `v -> [f v]` from `self` to `target` (columns indexed by
    /// `self`).
    pub fn multiplication_matrix(&self, f: &MultiPoly, target: &CohomologyBasis) -> Result<Matrix> {
        let field = f.field();
        let mut m = Matrix::zeros(field, target.len(), self.len());
        if f.is_zero() {
            return Ok(m);
        }
        self.check_target(f, target)?;
        for (j, alpha) in self.monomials.iter().enumerate() {
            for (u, c) in f.terms() {
                if let Some(i) = project(alpha, u).and_then(|e| target.index_of(&e)) {
                    let v = field.add(m.get(i, j), c);
                    m.set(i, j, v);
                }
            }
        }
        Ok(m)
    }
}

/// Exponent of the class `x^u * x^(-alpha)` when it survives, i.e. when
/// `alpha - u` is entrywise ≥ 1.
fn project(alpha: &[u32], u: &[u32]) -> Option<Exponents> {
    alpha
        .iter()
        .zip(u)
        .map(|(&a, &b)| (a > b).then(|| a - b))
        .collect()
}

fn compositions(cur: &mut Exponents, pos: usize, remaining: u32, out: &mut Vec<Exponents>) {
    if pos == cur.len() - 1 {
        cur[pos] += remaining;
        out.push(cur.clone());
        cur[pos] -= remaining;
        return;
    }
    for extra in 0..=remaining {
        cur[pos] += extra;
        compositions(cur, pos + 1, remaining - extra, out);
        cur[pos] -= extra;
    }
}

/// All `α ≥ (1,1,1,1)` with `Σ α_i β_i = target`. Termination comes from an
/// integral functional `w` positive on every `β_i`: it bounds `Σ α_i (w·β_i)`.
fn weighted_solutions(beta: &[[i64; 2]; 4], target: [i64; 2]) -> Result<Vec<Exponents>> {
    let w = positive_functional(beta).ok_or_else(|| {
        Error::Grading(
            "degree vectors admit no positive functional; basis would be infinite".into(),
        )
    })?;
    let weights: Vec<i64> = beta.iter().map(|b| w[0] * b[0] + w[1] * b[1]).collect();
    let budget = w[0] * target[0] + w[1] * target[1];
    let mut out = Vec::new();
    let mut cur = [1u32; 4];
    let base: i64 = weights.iter().sum();
    if budget >= base {
        weighted_rec(beta, &weights, target, &mut cur, 0, budget - base, &mut out);
    }
    Ok(out)
}

fn weighted_rec(
    beta: &[[i64; 2]; 4],
    weights: &[i64],
    target: [i64; 2],
    cur: &mut [u32; 4],
    pos: usize,
    slack: i64,
    out: &mut Vec<Exponents>,
) {
    if pos == 4 {
        let deg = cur.iter().zip(beta).fold([0i64; 2], |acc, (&a, b)| {
            [acc[0] + a as i64 * b[0], acc[1] + a as i64 * b[1]]
        });
        if deg == target {
            out.push(cur.iter().copied().collect());
        }
        return;
    }
    let mut extra = 0i64;
    while extra * weights[pos] <= slack {
        cur[pos] = 1 + extra as u32;
        weighted_rec(
            beta,
            weights,
            target,
            cur,
            pos + 1,
            slack - extra * weights[pos],
            out,
        );
        extra += 1;
    }
    cur[pos] = 1;
}

fn positive_functional(beta: &[[i64; 2]; 4]) -> Option<[i64; 2]> {
    // search by increasing L1 norm
    for s in 1..=4096i64 {
        for a in -s..=s {
            let rest = s - a.abs();
            for b in [-rest, rest] {
                let w = [a, b];
                if beta.iter().all(|v| w[0] * v[0] + w[1] * v[1] > 0) {
                    return Some(w);
                }
                if rest == 0 {
                    break;
                }
            }
        }
    }
    None
}

/// Coordinates of a cohomology class against a [`CohomologyBasis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassVector(pub Vec<FieldElement>);

impl ClassVector {
    pub fn zero(field: &FieldCtx, n: usize) -> Self {
        ClassVector(vec![field.zero(); n])
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(FieldElement::is_zero)
    }
}

/// Image of the class `v` (against `source`) under multiplication by `f`,
/// expressed against `target`.
pub fn mul_project(
    source: &CohomologyBasis,
    v: &ClassVector,
    f: &MultiPoly,
    target: &CohomologyBasis,
) -> Result<ClassVector> {
    let field = f.field();
    if v.len() != source.len() {
        return Err(Error::Mismatch(format!(
            "class has {} coordinates, basis has {}",
            v.len(),
            source.len()
        )));
    }
    let mut out = ClassVector::zero(field, target.len());
    if f.is_zero() {
        return Ok(out);
    }
    source.check_target(f, target)?;
    for (alpha, c) in source.monomials.iter().zip(&v.0) {
        if c.is_zero() {
            continue;
        }
        for (u, fc) in f.terms() {
            if let Some(i) = project(alpha, u).and_then(|e| target.index_of(&e)) {
                out.0[i] = field.add(&out.0[i], &field.mul(fc, c));
            }
        }
    }
    Ok(out)
}

/// Intersection of the kernels of several multiplication maps, as the rows
/// of a reduced row-echelon matrix (coordinates against the source basis).
#[derive(Clone, Debug, PartialEq)]
pub struct KernelBasis {
    pub vectors: Matrix,
    pub pivots: Vec<usize>,
}

impl KernelBasis {
    pub fn len(&self) -> usize {
        self.vectors.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.rows() == 0
    }

    /// Coordinates of `w` in this basis, or `None` when `w` is not in the span.
    pub fn coordinates(&self, w: &[FieldElement]) -> Option<Vec<FieldElement>> {
        let field = self.vectors.field();
        let coords: Vec<FieldElement> = self.pivots.iter().map(|&p| w[p].clone()).collect();
        let mut recon = vec![field.zero(); w.len()];
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (r, x) in recon.iter_mut().zip(self.vectors.row(i)) {
                *r = field.add(r, &field.mul(c, x));
            }
        }
        (recon == w).then_some(coords)
    }
}

pub fn kernel_basis(
    field: &FieldCtx,
    source: &CohomologyBasis,
    polys: &[MultiPoly],
) -> Result<KernelBasis> {
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    for f in polys {
        let deg = f.require_homogeneous()?;
        if !deg.same_kind(source.twist) {
            return Err(Error::Grading(format!(
                "degree {deg} does not match the ambient"
            )));
        }
        let target = CohomologyBasis::for_ambient(&source.ambient, source.twist - deg)?;
        let m = source.multiplication_matrix(f, &target)?;
        rows.extend((0..m.rows()).map(|r| m.row(r).to_vec()));
    }
    if rows.is_empty() {
        let id = Matrix::identity(field, source.len());
        return Ok(KernelBasis {
            pivots: (0..source.len()).collect(),
            vectors: id,
        });
    }
    let stacked = Matrix::from_rows(field, rows);
    let (vectors, pivots) = stacked.null_space();
    Ok(KernelBasis { vectors, pivots })
}

/// Echelonized basis of `∩ ker(v -> [f_i v])`.
pub fn kernel_intersection(
    field: &FieldCtx,
    source: &CohomologyBasis,
    polys: &[MultiPoly],
) -> Result<Vec<ClassVector>> {
    let k = kernel_basis(field, source, polys)?;
    Ok((0..k.len())
        .map(|r| ClassVector(k.vectors.row(r).to_vec()))
        .collect())
}
