//! Sparse multivariate polynomials over F_{p^k}.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::field::{FieldCtx, FieldElement};
use crate::error::{Error, Result};

/// Dense exponent vector; length equals the variable count.
pub type Exponents = SmallVec<[u32; 8]>;

/// Degree of a monomial under a grading: a scalar for total degree, a pair
/// for Z²-gradings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Degree {
    Total(i64),
    Bi(i64, i64),
}

impl Degree {
    pub fn scale(self, c: i64) -> Degree {
        match self {
            Degree::Total(d) => Degree::Total(c * d),
            Degree::Bi(a, b) => Degree::Bi(c * a, c * b),
        }
    }

    fn zip(self, other: Degree, op: impl Fn(i64, i64) -> i64) -> Degree {
        match (self, other) {
            (Degree::Total(a), Degree::Total(b)) => Degree::Total(op(a, b)),
            (Degree::Bi(a, b), Degree::Bi(c, d)) => Degree::Bi(op(a, c), op(b, d)),
            (a, b) => panic!("cannot combine degrees {a:?} and {b:?}"),
        }
    }

    pub fn same_kind(self, other: Degree) -> bool {
        matches!(
            (self, other),
            (Degree::Total(_), Degree::Total(_)) | (Degree::Bi(..), Degree::Bi(..))
        )
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for Degree {
    type Output = Degree;
    fn sub(self, rhs: Degree) -> Degree {
        self.zip(rhs, |a, b| a - b)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Total(d) => write!(f, "{d}"),
            Degree::Bi(a, b) => write!(f, "({a},{b})"),
        }
    }
}

/// How monomials are assigned degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Grading {
    /// Every variable has weight 1.
    Standard,
    /// Per-variable weight vectors in Z².
    Weighted(Vec<[i64; 2]>),
}

impl Grading {
    pub fn degree_of(&self, exps: &[u32]) -> Degree {
        match self {
            Grading::Standard => Degree::Total(exps.iter().map(|&e| e as i64).sum()),
            Grading::Weighted(w) => {
                let (a, b) = exps.iter().zip(w).fold((0, 0), |(a, b), (&e, wt)| {
                    (a + e as i64 * wt[0], b + e as i64 * wt[1])
                });
                Degree::Bi(a, b)
            }
        }
    }
}

#[derive(Clone)]
pub struct MultiPoly {
    field: FieldCtx,
    nvars: usize,
    grading: Grading,
    terms: BTreeMap<Exponents, FieldElement>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.nvars == other.nvars
            && self.grading == other.grading
            && self.terms == other.terms
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| {
                        if x == 1 {
                            format!("x{i}")
                        } else {
                            format!("x{i}^{x}")
                        }
                    })
                    .collect();
                let c = self.field.format(c);
                match (c.as_str(), mono.is_empty()) {
                    (_, true) => c,
                    ("1", false) => mono.join("*"),
                    (_, false) => format!("({c})*{}", mono.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl MultiPoly {
    pub fn zero(field: &FieldCtx, nvars: usize, grading: Grading) -> Self {
        MultiPoly {
            field: field.clone(),
            nvars,
            grading,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: &FieldCtx, nvars: usize, grading: Grading) -> Self {
        Self::monomial(field, grading, &vec![0; nvars], field.one())
    }

    pub fn monomial(field: &FieldCtx, grading: Grading, exps: &[u32], c: FieldElement) -> Self {
        let mut out = Self::zero(field, exps.len(), grading);
        out.add_term(exps, c);
        out
    }

    /// Builds a polynomial by summing the given terms (repeated exponents add).
    pub fn from_terms<I>(field: &FieldCtx, nvars: usize, grading: Grading, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, FieldElement)>,
    {
        let mut out = Self::zero(field, nvars, grading);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Mismatch(format!(
                    "exponent vector {e:?} has length {}, expected {nvars}",
                    e.len()
                )));
            }
            out.add_term(&e, c);
        }
        Ok(out)
    }

    /// Adds `c * x^exps` in place.
    pub fn add_term(&mut self, exps: &[u32], c: FieldElement) {
        debug_assert_eq!(exps.len(), self.nvars);
        let key: Exponents = exps.iter().copied().collect();
        let sum = match self.terms.get(&key) {
            Some(old) => self.field.add(old, &c),
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &FieldElement)> {
        self.terms.iter()
    }

    /// Coefficient of `x^exps`, zero when absent.
    pub fn coeff(&self, exps: &[u32]) -> FieldElement {
        let key: Exponents = exps.iter().copied().collect();
        self.terms
            .get(&key)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Coefficient lookup for a signed exponent vector; negative entries give zero.
    pub fn coeff_signed(&self, exps: &[i64]) -> Option<&FieldElement> {
        if exps.iter().any(|&e| e < 0) {
            return None;
        }
        let key: Exponents = exps.iter().map(|&e| e as u32).collect();
        self.terms.get(&key)
    }

    /// The common degree of all terms, or `None` when the polynomial is zero
    /// or not homogeneous.
    pub fn homogeneous_degree(&self) -> Option<Degree> {
        let mut degs = self.terms.keys().map(|e| self.grading.degree_of(e));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Like [`Self::homogeneous_degree`] but as an error for callers that need one.
    pub fn require_homogeneous(&self) -> Result<Degree> {
        self.homogeneous_degree().ok_or_else(|| {
            Error::NotHomogeneous(if self.is_zero() {
                "zero polynomial".to_string()
            } else {
                format!("{self}")
            })
        })
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::Mismatch(
                "polynomials live over different fields".into(),
            ));
        }
        if self.nvars != other.nvars {
            return Err(Error::Mismatch(format!(
                "variable counts differ: {} vs {}",
                self.nvars, other.nvars
            )));
        }
        if self.grading != other.grading {
            return Err(Error::Mismatch("gradings differ".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let mut out = Self::zero(&self.field, self.nvars, self.grading.clone());
        if c.is_zero() {
            return out;
        }
        out.terms = self
            .terms
            .iter()
            .map(|(e, x)| (e.clone(), self.field.mul(x, c)))
            .collect();
        out
    }

    /// Sparse product via a hash accumulator.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let f = &self.field;
        let mut acc: HashMap<Exponents, FieldElement> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let prod = f.mul(ca, cb);
                acc.entry(e)
                    .and_modify(|c| *c = f.add(c, &prod))
                    .or_insert(prod);
            }
        }
        let mut out = Self::zero(f, self.nvars, self.grading.clone());
        out.terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(out)
    }

    /// `self^e` by binary exponentiation.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.field, self.nvars, self.grading.clone());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("compatible by construction");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("compatible by construction");
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f, self.nvars, self.grading.clone());
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let factor = (e[var] as u64 % f.p()) as u32;
            if factor == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            out.add_term(&e2, f.scale(c, factor));
        }
        out
    }

    /// Restricts to an affine chart: `set_one` is specialised to 1 and the
    /// remaining variables are reordered as `keep`. The result uses the
    /// standard grading.
    pub fn dehomogenize(&self, keep: &[usize], set_one: usize) -> Self {
        debug_assert!(!keep.contains(&set_one));
        let mut out = Self::zero(&self.field, keep.len(), Grading::Standard);
        for (e, c) in &self.terms {
            let e2: Vec<u32> = keep.iter().map(|&i| e[i]).collect();
            out.add_term(&e2, c.clone());
        }
        out
    }

    /// Applies `c -> c^(p^t)` to every coefficient, keeping exponents.
    pub fn twist_coefficients(&self, t: i64) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.pow_p(c, t);
        }
        out
    }
}
