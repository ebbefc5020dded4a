//! Semilinear maps and their numerical invariants.
//!
//! A map with twist `e` satisfies `T(c v) = c^(p^e) T(v)`. It is stored as a
//! matrix `A` whose `j`-th column is the image of the `j`-th basis vector, so
//! `T(v) = A · v^[p^e]` where `v^[p^e]` raises each coordinate to `p^e`.
//! Iterating gives `T^t(v) = A · A^[p^e] ⋯ A^[p^((t-1)e)] · v^[p^(te)]`, and
//! the rank of that composite is non-increasing in `t` and constant from
//! `t = dim` on. Its stable value is the p-rank.

use serde::Serialize;

use crate::cartier::DifferentialBasis;
use crate::cohomology::{ClassVector, CohomologyBasis, KernelBasis};
use crate::linalg::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Twist {
    /// p-linear (Frobenius).
    Frobenius,
    /// p⁻¹-linear (Cartier).
    Cartier,
}

impl Twist {
    pub fn exponent(self) -> i64 {
        match self {
            Twist::Frobenius => 1,
            Twist::Cartier => -1,
        }
    }
}

/// What the matrix of a [`SemilinearMap`] is written against.
#[derive(Clone, Debug)]
pub enum MapBasis {
    /// Bare coordinates, for matrices given directly.
    Coordinates(usize),
    Monomials(CohomologyBasis),
    /// A subspace of top cohomology, given by echelonized vectors.
    Kernel {
        ambient: CohomologyBasis,
        kernel: KernelBasis,
    },
    Differentials(DifferentialBasis),
}

impl MapBasis {
    pub fn len(&self) -> usize {
        match self {
            MapBasis::Coordinates(n) => *n,
            MapBasis::Monomials(b) => b.len(),
            MapBasis::Kernel { kernel, .. } => kernel.len(),
            MapBasis::Differentials(d) => d.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug)]
pub struct SemilinearMap {
    pub matrix: Matrix,
    pub twist: Twist,
    pub basis: MapBasis,
}

/// σ, a-number and friends for one semilinear map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantBundle {
    pub dim: usize,
    pub sigma: usize,
    pub a_number: usize,
    pub ordinary: bool,
    /// Characteristic polynomial of the composite of length
    /// [`SemilinearMap::linear_period`], ascending coefficients. Its zero root
    /// has multiplicity `dim - sigma`.
    pub composite_charpoly: Vec<String>,
}

impl SemilinearMap {
    pub fn new(matrix: Matrix, twist: Twist, basis: MapBasis) -> Self {
        assert!(matrix.is_square(), "semilinear maps are square");
        assert_eq!(
            matrix.rows(),
            basis.len(),
            "matrix size must match the basis"
        );
        SemilinearMap {
            matrix,
            twist,
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &ClassVector) -> ClassVector {
        let f = self.matrix.field();
        let twisted: Vec<_> = v
            .coords()
            .iter()
            .map(|c| f.pow_p(c, self.twist.exponent()))
            .collect();
        ClassVector(self.matrix.mul_vec(&twisted))
    }

    pub fn apply_iterate(&self, v: &ClassVector, t: usize) -> ClassVector {
        (0..t).fold(v.clone(), |acc, _| self.apply(&acc))
    }

    /// `A · A^[p^e] ⋯ A^[p^((t-1)e)]`, the linear part of the `t`-th iterate.
    pub fn composite(&self, t: usize) -> Matrix {
        let f = self.matrix.field();
        if t == 0 {
            return Matrix::identity(f, self.dim());
        }
        let e = self.twist.exponent();
        (1..t).fold(self.matrix.clone(), |acc, i| {
            acc.mul(&self.matrix.twist(e * i as i64))
        })
    }

    /// Smallest `t >= dim` with `k | t`. The `t`-fold iterate is then honestly
    /// linear over F_{p^k}, so its characteristic polynomial sees the
    /// nilpotent part with full multiplicity.
    pub fn linear_period(&self) -> usize {
        let k = self.matrix.field().k();
        self.dim().div_ceil(k).max(1) * k
    }

    /// Rank of the `t`-fold composite.
    pub fn iterate_rank(&self, t: usize) -> usize {
        self.composite(t).rank()
    }

    /// σ: rank of the `dim`-fold composite.
    pub fn stable_rank(&self) -> usize {
        if self.dim() == 0 {
            return 0;
        }
        self.iterate_rank(self.dim())
    }

    /// a-number: dimension of the kernel of one application. Entrywise
    /// Frobenius is bijective, so this is the linear kernel of the matrix.
    pub fn kernel_dim(&self) -> usize {
        self.dim() - self.matrix.rank()
    }

    /// Bijectivity of one application, equivalently of every iterate.
    pub fn is_ordinary(&self) -> bool {
        self.matrix.rank() == self.dim()
    }

    pub fn invariants(&self) -> InvariantBundle {
        let f = self.matrix.field();
        let linear = self.composite(self.linear_period());
        InvariantBundle {
            dim: self.dim(),
            sigma: self.stable_rank(),
            a_number: self.kernel_dim(),
            ordinary: self.is_ordinary(),
            composite_charpoly: linear.charpoly().iter().map(|c| f.format(c)).collect(),
        }
    }
}
