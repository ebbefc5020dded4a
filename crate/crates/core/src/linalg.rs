//! Dense matrices over F_{p^k}.

use std::fmt;

use crate::algebra::{FieldCtx, FieldElement};

#[derive(Clone, PartialEq)]
pub struct Matrix {
    field: FieldCtx,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} matrix", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| self.field.format(self.get(r, c)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &FieldCtx, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &FieldCtx, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &FieldCtx, rows: Vec<Vec<FieldElement>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(field: &FieldCtx, rows: usize, columns: &[Vec<FieldElement>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElement {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: FieldElement) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElement::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }

    /// Entrywise `x -> x^(p^t)`.
    pub fn twist(&self, t: i64) -> Matrix {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x = self.field.pow_p(x, t);
        }
        out
    }

    /// Rank by fraction-free elimination with first-nonzero pivoting:
    /// each row below the pivot is replaced by `pivot * row - lead * pivot_row`.
    pub fn rank(&self) -> usize {
        let f = &self.field;
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            let Some(piv) = (rank..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(rank, piv);
            let pivot = m.get(rank, c).clone();
            for r in rank + 1..m.rows {
                let lead = m.get(r, c).clone();
                if lead.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(&f.mul(&pivot, m.get(r, j)), &f.mul(&lead, m.get(rank, j)));
                    m.set(r, j, v);
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row-echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, piv);
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let lead = m.get(i, c).clone();
                if lead.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&lead, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the right null space `{v : self * v = 0}`, as the rows of a
    /// matrix in reduced row-echelon form.
    pub fn null_space(&self) -> (Matrix, Vec<usize>) {
        let f = &self.field;
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let vectors: Vec<Vec<FieldElement>> = free
            .iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols];
                v[fc] = f.one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(red.get(i, fc));
                }
                v
            })
            .collect();
        if vectors.is_empty() {
            return (Matrix::zeros(f, 0, self.cols), Vec::new());
        }
        Matrix::from_rows(f, vectors).rref()
    }

    pub fn determinant(&self) -> FieldElement {
        assert!(self.is_square());
        let f = &self.field;
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..m.cols {
            let Some(piv) = (c..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                return f.zero();
            };
            if piv != c {
                m.swap_rows(c, piv);
                det = f.neg(&det);
            }
            let pivot = m.get(c, c).clone();
            det = f.mul(&det, &pivot);
            let inv = f.inv(&pivot).expect("nonzero pivot");
            for r in c + 1..m.rows {
                let factor = f.mul(m.get(r, c), &inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(r, j), &f.mul(&factor, m.get(c, j)));
                    m.set(r, j, v);
                }
            }
        }
        det
    }

    /// Characteristic polynomial `det(t I - A)`, ascending coefficients,
    /// computed through a Hessenberg reduction.
    pub fn charpoly(&self) -> Vec<FieldElement> {
        assert!(self.is_square());
        let f = &self.field;
        let n = self.rows;
        let mut h = self.clone();
        // similarity transforms to upper Hessenberg form
        for c in 0..n.saturating_sub(2) {
            let Some(piv) = (c + 1..n).find(|&r| !h.get(r, c).is_zero()) else {
                continue;
            };
            if piv != c + 1 {
                h.swap_rows(piv, c + 1);
                for r in 0..n {
                    h.data.swap(r * n + piv, r * n + c + 1);
                }
            }
            let inv = f.inv(h.get(c + 1, c)).expect("nonzero pivot");
            for r in c + 2..n {
                let factor = f.mul(h.get(r, c), &inv);
                if factor.is_zero() {
                    continue;
                }
                // row_r -= factor * row_{c+1}
                for j in 0..n {
                    let v = f.sub(h.get(r, j), &f.mul(&factor, h.get(c + 1, j)));
                    h.set(r, j, v);
                }
                // col_{c+1} += factor * col_r
                for i in 0..n {
                    let v = f.add(h.get(i, c + 1), &f.mul(&factor, h.get(i, r)));
                    h.set(i, c + 1, v);
                }
            }
        }
        // p_m(t) = (t - h_mm) p_{m-1}(t) - sum_i h_im (prod_{j=i+1}^{m} h_{j,j-1}) p_{i-1}(t)
        let mut polys: Vec<Vec<FieldElement>> = vec![vec![f.one()]];
        for m in 0..n {
            let prev = &polys[m];
            let mut next = vec![f.zero(); m + 2];
            for (i, c) in prev.iter().enumerate() {
                next[i + 1] = f.add(&next[i + 1], c);
                next[i] = f.sub(&next[i], &f.mul(h.get(m, m), c));
            }
            let mut prod = f.one();
            for i in (0..m).rev() {
                prod = f.mul(&prod, h.get(i + 1, i));
                if prod.is_zero() {
                    break;
                }
                let coef = f.mul(h.get(i, m), &prod);
                for (d, c) in polys[i].iter().enumerate() {
                    next[d] = f.sub(&next[d], &f.mul(&coef, c));
                }
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }
}
