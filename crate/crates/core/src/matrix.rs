//! Small dense matrices over `K = F_p(x)`.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::Poly;
use crate::polymat::PolyMatrix;
use crate::ratfunc::{AbsValue, RatFunc};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<RatFunc>,
}

impl RatMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            entries: vec![RatFunc::zero(field); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = RatFunc::one(field);
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<RatFunc>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::BadDimensions("ragged rows".into()));
        }
        if rows.iter().flatten().any(|e| e.field() != field) {
            return Err(Error::BadDimensions("entry over a different field".into()));
        }
        let nrows = rows.len();
        Ok(Self {
            field,
            rows: nrows,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds the matrix whose columns are `cols`.
    pub fn from_columns(field: FieldSpec, cols: &[Vec<RatFunc>]) -> Result<Self> {
        let rows = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::BadDimensions("ragged columns".into()));
        }
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, e) in c.iter().enumerate() {
                m[(i, j)] = e.clone();
            }
        }
        Ok(m)
    }

    pub fn diagonal(field: FieldSpec, diag: &[RatFunc]) -> Self {
        let mut m = Self::zeros(field, diag.len(), diag.len());
        for (i, e) in diag.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// `diag(x^{k_1}, ..., x^{k_d})`.
    pub fn x_diagonal(field: FieldSpec, exps: &[i64]) -> Self {
        let diag: Vec<RatFunc> = exps.iter().map(|&k| RatFunc::x_pow(field, k)).collect();
        Self::diagonal(field, &diag)
    }

    pub fn from_poly_matrix(m: &PolyMatrix) -> Self {
        let mut out = Self::zeros(m.field(), m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out[(i, j)] = RatFunc::from_poly(m[(i, j)].clone());
            }
        }
        out
    }

    pub fn field(&self) -> FieldSpec {
        self.field
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

    pub fn entries(&self) -> &[RatFunc] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[RatFunc] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<RatFunc> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<RatFunc>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = RatMatrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = RatFunc::zero(self.field);
                for k in 0..self.cols {
                    if self[(i, k)].is_zero() || rhs[(k, j)].is_zero() {
                        continue;
                    }
                    acc = &acc + &(&self[(i, k)] * &rhs[(k, j)]);
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[RatFunc]) -> Result<Vec<RatFunc>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(RatFunc::zero(self.field), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    /// Gaussian elimination over K; returns `(determinant, inverse)` with the
    /// inverse absent for singular input.
    fn eliminate(&self) -> Result<(RatFunc, Option<RatMatrix>)> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let f = self.field;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(f, n);
        let mut det = RatFunc::one(f);
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
                return Ok((RatFunc::zero(f), None));
            };
            if pr != c {
                for j in 0..n {
                    a.entries.swap(pr * n + j, c * n + j);
                    inv.entries.swap(pr * n + j, c * n + j);
                }
                det = -det;
            }
            let pivot = a[(c, c)].clone();
            det = &det * &pivot;
            let pinv = pivot.inv()?;
            for j in 0..n {
                a[(c, j)] = &a[(c, j)] * &pinv;
                inv[(c, j)] = &inv[(c, j)] * &pinv;
            }
            for i in 0..n {
                if i == c || a[(i, c)].is_zero() {
                    continue;
                }
                let factor = a[(i, c)].clone();
                for j in 0..n {
                    if !a[(c, j)].is_zero() {
                        a[(i, j)] = &a[(i, j)] - &(&factor * &a[(c, j)]);
                    }
                    if !inv[(c, j)].is_zero() {
                        inv[(i, j)] = &inv[(i, j)] - &(&factor * &inv[(c, j)]);
                    }
                }
            }
        }
        Ok((det, Some(inv)))
    }

    pub fn det(&self) -> Result<RatFunc> {
        Ok(self.eliminate()?.0)
    }

    pub fn inverse(&self) -> Result<RatMatrix> {
        self.eliminate()?.1.ok_or(Error::SingularMatrix)
    }

    /// Monic least common multiple of all entry denominators.
    pub fn common_denominator(&self) -> Poly {
        let f = self.field;
        self.entries.iter().fold(Poly::one(f), |acc, e| {
            let g = acc.gcd(e.den());
            (&acc * e.den()).div_rem(&g).0.monic()
        })
    }

    /// `self * d` as a polynomial matrix, where `d` is a multiple of every
    /// entry denominator.
    pub fn scaled_to_poly(&self, d: &Poly) -> PolyMatrix {
        let f = self.field;
        let mut out = PolyMatrix::zeros(f, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = &self[(i, j)];
                let (q, r) = (e.num() * d).div_rem(e.den());
                debug_assert!(r.is_zero());
                out[(i, j)] = q;
            }
        }
        out
    }

    /// Every entry lies in O.
    pub fn entries_in_o(&self) -> bool {
        self.entries.iter().all(RatFunc::in_o)
    }

    pub fn max_abs(&self) -> AbsValue {
        self.entries
            .iter()
            .map(RatFunc::abs)
            .max()
            .unwrap_or(AbsValue::Zero)
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = RatFunc;
    fn index(&self, (i, j): (usize, usize)) -> &RatFunc {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RatFunc {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix[{}] {}x{}", self.field.p(), self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
