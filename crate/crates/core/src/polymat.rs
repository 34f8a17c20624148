//! Linear algebra over F_p and F_p[x].
//!
//! The central routine is [`column_reduce`], which brings a nonsingular
//! polynomial matrix to column-reduced form by unimodular column operations.
//! Column degrees of a reduced matrix are the successive minima exponents of
//! the lattice its columns span.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::Poly;
use crate::ratfunc::LaurentTail;

/// Dense matrix over F_p, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::BadDimensions("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&c| c % field.p()).collect();
        Ok(Self {
            field,
            rows: rows.len(),
            cols,
            data,
        })
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

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &FpMatrix) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &FpMatrix) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        let cols = self.cols + other.cols;
        let mut m = Self::zeros(self.field, self.rows, cols);
        for i in 0..self.rows {
            m.data[i * cols..i * cols + self.cols].copy_from_slice(self.row(i));
            m.data[i * cols + self.cols..(i + 1) * cols].copy_from_slice(other.row(i));
        }
        Ok(m)
    }

    /// Reduced row echelon form in place; returns pivot columns, found left to right.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self[(i, c)] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self[(r, c)]);
            for j in 0..self.cols {
                self[(r, j)] = f.mul(self[(r, j)], inv);
            }
            for i in 0..self.rows {
                let factor = self[(i, c)];
                if i == r || factor == 0 {
                    continue;
                }
                for j in 0..self.cols {
                    let v = f.mul(factor, self[(r, j)]);
                    self[(i, j)] = f.sub(self[(i, j)], v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

impl Index<(usize, usize)> for FpMatrix {
    type Output = u32;
    fn index(&self, (i, j): (usize, usize)) -> &u32 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for FpMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u32 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix[{}] {}x{}", self.field.p(), self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Basis of the right kernel `{v : M v = 0}`.
///
/// One vector per free column (left to right), with that free variable set
/// to 1 and the other free variables 0.
pub fn nullspace_fp(m: &FpMatrix) -> Vec<Vec<u32>> {
    let f = m.field;
    let mut r = m.clone();
    let pivots = r.rref_in_place();
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0; m.cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r[(row, free)]);
            }
            v
        })
        .collect()
}

/// Basis of the left kernel `{w : w^T M = 0}`; these are the parity checks
/// whose joint vanishing characterizes the column space of `M`.
pub fn left_nullspace_fp(m: &FpMatrix) -> Vec<Vec<u32>> {
    nullspace_fp(&m.transpose())
}

/// Solves `M v = rhs`. Pivots are chosen left to right and free variables
/// are set to zero, so the answer is deterministic.
pub fn solve_fp(m: &FpMatrix, rhs: &[u32]) -> Result<Option<Vec<u32>>> {
    if rhs.len() != m.rows {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            found: rhs.len(),
        });
    }
    let rhs_col = FpMatrix {
        field: m.field,
        rows: m.rows,
        cols: 1,
        data: rhs.iter().map(|&c| c % m.field.p()).collect(),
    };
    let mut aug = m.hstack(&rhs_col)?;
    let pivots = aug.rref_in_place();
    if pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut v = vec![0; m.cols];
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = aug[(row, m.cols)];
    }
    Ok(Some(v))
}

/// Hankel block with entry `(r, c) = tail coefficient at index start + r + c`
/// (1-based tail indices, zero beyond the tail).
pub fn hankel_block(
    tail: &LaurentTail,
    start: usize,
    num_rows: usize,
    num_cols: usize,
) -> Result<FpMatrix> {
    if start == 0 {
        return Err(Error::BadDimensions("Hankel start index is 1-based".into()));
    }
    let mut m = FpMatrix::zeros(tail.field(), num_rows, num_cols);
    for r in 0..num_rows {
        for c in 0..num_cols {
            m[(r, c)] = tail.coeff(start + r + c);
        }
    }
    Ok(m)
}

/// Dense matrix over F_p[x], row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            entries: vec![Poly::zero(field); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = Poly::one(field);
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Poly>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::BadDimensions("ragged rows".into()));
        }
        let nrows = rows.len();
        Ok(Self {
            field,
            rows: nrows,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diagonal(field: FieldSpec, diag: Vec<Poly>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, p) in diag.into_iter().enumerate() {
            m[(i, i)] = p;
        }
        m
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

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Maximum entry degree in column `j`; `None` for a zero column.
    pub fn col_degree(&self, j: usize) -> Option<usize> {
        (0..self.rows).filter_map(|i| self[(i, j)].degree()).max()
    }

    /// Entry `(i, j)` is the coefficient of `x^{degs[j]}` in `self[(i, j)]`.
    pub fn leading_coeff_matrix(&self, degs: &[Option<usize>]) -> FpMatrix {
        let mut lc = FpMatrix::zeros(self.field, self.rows, self.cols);
        for j in 0..self.cols {
            if let Some(d) = degs[j] {
                for i in 0..self.rows {
                    lc[(i, j)] = self[(i, j)].coeff(d);
                }
            }
        }
        lc
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = PolyMatrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Poly::zero(self.field);
                for k in 0..self.cols {
                    acc = &acc + &(&self[(i, k)] * &rhs[(k, j)]);
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    /// `col_target += c * x^shift * col_source`
    fn add_col_multiple(&mut self, target: usize, source: usize, c: u32, shift: usize) {
        for i in 0..self.rows {
            let t = self[(i, source)].scale(c).shift(shift);
            self[(i, target)] = &self[(i, target)] + &t;
        }
    }

    fn scale_col(&mut self, j: usize, c: u32) {
        for i in 0..self.rows {
            self[(i, j)] = self[(i, j)].scale(c);
        }
    }

    fn permute_cols(&self, order: &[usize]) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(self.field, self.rows, self.cols);
        for (new_j, &old_j) in order.iter().enumerate() {
            for i in 0..self.rows {
                out[(i, new_j)] = self[(i, old_j)].clone();
            }
        }
        out
    }
}

impl Index<(usize, usize)> for PolyMatrix {
    type Output = Poly;
    fn index(&self, (i, j): (usize, usize)) -> &Poly {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Poly {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix[{}] {}x{}", self.field.p(), self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn poly_mat_det(m: &PolyMatrix) -> Result<Poly> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let f = m.field;
    let n = m.rows;
    if n == 0 {
        return Ok(Poly::one(f));
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = Poly::one(f);
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return Ok(Poly::zero(f));
            };
            for j in 0..n {
                a.entries.swap(k * n + j, swap * n + j);
            }
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[(i, j)] * &a[(k, k)]) - &(&a[(i, k)] * &a[(k, j)]);
                let (q, r) = t.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division is exact");
                a[(i, j)] = q;
            }
        }
        prev = a[(k, k)].clone();
    }
    let d = a[(n - 1, n - 1)].clone();
    Ok(if negate { -d } else { d })
}

/// Column-reduced form of a nonsingular polynomial matrix.
#[derive(Clone, Debug)]
pub struct ColumnReducedForm {
    /// `input * transform`, columns sorted by ascending degree.
    pub reduced: PolyMatrix,
    /// Unimodular with determinant exactly 1.
    pub transform: PolyMatrix,
    /// Ascending column degrees of `reduced`.
    pub col_degrees: Vec<usize>,
}

/// Column reduction by repeated leading-coefficient cancellation.
///
/// While the leading-coefficient matrix is singular, take the first kernel
/// vector `v` and, among the columns in its support, the one of maximal
/// degree (lowest index on ties); replace it by the combination
/// `sum_j (v_j / v_k) x^{deg_k - deg_j} col_j`, which strictly lowers its
/// degree. Each step is a unimodular column operation, accumulated in the
/// transform.
pub fn column_reduce(m: &PolyMatrix) -> Result<ColumnReducedForm> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let f = m.field;
    let n = m.cols;
    let mut work = m.clone();
    let mut transform = PolyMatrix::identity(f, n);
    loop {
        let degs: Vec<Option<usize>> = (0..n).map(|j| work.col_degree(j)).collect();
        if degs.iter().any(Option::is_none) {
            return Err(Error::SingularMatrix);
        }
        let lc = work.leading_coeff_matrix(&degs);
        let kernel = nullspace_fp(&lc);
        let Some(v) = kernel.first() else {
            break;
        };
        let pivot = (0..n)
            .filter(|&j| v[j] != 0)
            .max_by(|&a, &b| degs[a].cmp(&degs[b]).then(b.cmp(&a)))
            .expect("kernel vector is nonzero");
        let dk = degs[pivot].unwrap();
        let inv = f.inv(v[pivot]);
        for j in 0..n {
            if j == pivot || v[j] == 0 {
                continue;
            }
            let c = f.mul(v[j], inv);
            let shift = dk - degs[j].unwrap();
            work.add_col_multiple(pivot, j, c, shift);
            transform.add_col_multiple(pivot, j, c, shift);
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&j| work.col_degree(j));
    let mut reduced = work.permute_cols(&order);
    let mut transform = transform.permute_cols(&order);
    let det = poly_mat_det(&transform)?;
    debug_assert!(det.degree() == Some(0), "transform is unimodular");
    let c = f.inv(det.lead());
    if c != 1 && n > 0 {
        transform.scale_col(0, c);
        reduced.scale_col(0, c);
    }
    let col_degrees = (0..n).map(|j| reduced.col_degree(j).unwrap()).collect();
    Ok(ColumnReducedForm {
        reduced,
        transform,
        col_degrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    fn pm(p: u32, rows: &[&[&[u32]]]) -> PolyMatrix {
        let fld = f(p);
        PolyMatrix::from_rows(
            fld,
            rows.iter()
                .map(|r| r.iter().map(|c| Poly::from_coeffs(fld, c.iter().copied())).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn reduce_identity() {
        let id = PolyMatrix::identity(f(3), 2);
        let r = column_reduce(&id).unwrap();
        assert_eq!(r.reduced, id);
        assert_eq!(r.col_degrees, vec![0, 0]);
    }

    #[test]
    fn reduce_swap_matrix() {
        // [[x,1],[1,0]]
        let m = pm(3, &[&[&[0, 1], &[1]], &[&[1], &[]]]);
        let r = column_reduce(&m).unwrap();
        assert_eq!(r.col_degrees, vec![0, 0]);
        assert_eq!(m.mul(&r.transform).unwrap(), r.reduced);
        assert_eq!(poly_mat_det(&r.transform).unwrap(), Poly::one(f(3)));
        let degs: Vec<_> = r.col_degrees.iter().map(|&d| Some(d)).collect();
        assert!(r.reduced.leading_coeff_matrix(&degs).is_invertible());
    }

    #[test]
    fn reduce_sorted_diagonal() {
        let m = pm(2, &[&[&[0, 0, 0, 1], &[]], &[&[], &[0, 1]]]);
        let r = column_reduce(&m).unwrap();
        assert_eq!(r.col_degrees, vec![1, 3]);
        assert_eq!(r.reduced.column(0), m.column(1));
        assert_eq!(r.reduced.column(1), m.column(0));
    }

    #[test]
    fn reduce_singular() {
        let m = pm(3, &[&[&[0, 1], &[0, 1]], &[&[1], &[1]]]);
        assert_eq!(column_reduce(&m).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn determinants() {
        let fld = f(3);
        assert_eq!(poly_mat_det(&PolyMatrix::identity(fld, 3)).unwrap(), Poly::one(fld));
        let m = pm(3, &[&[&[0, 1], &[1]], &[&[1], &[]]]);
        assert_eq!(poly_mat_det(&m).unwrap(), Poly::constant(fld, 2));
        let d = PolyMatrix::diagonal(fld, vec![Poly::x_pow(fld, 1), Poly::x_pow(fld, 2)]);
        assert_eq!(poly_mat_det(&d).unwrap(), Poly::x_pow(fld, 3));
        let needs_swap = pm(3, &[&[&[], &[1]], &[&[1], &[]]]);
        assert_eq!(poly_mat_det(&needs_swap).unwrap(), Poly::constant(fld, 2));
        assert!(matches!(
            poly_mat_det(&PolyMatrix::zeros(fld, 2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn nullspace_examples() {
        let f2 = f(2);
        assert_eq!(nullspace_fp(&FpMatrix::zeros(f2, 1, 2)).len(), 2);
        assert!(nullspace_fp(&FpMatrix::identity(f2, 2)).is_empty());
        let m = FpMatrix::from_rows(f2, &[vec![1, 1]]).unwrap();
        assert_eq!(nullspace_fp(&m), vec![vec![1, 1]]);
    }

    #[test]
    fn solve_examples() {
        let f2 = f(2);
        let id = FpMatrix::identity(f2, 2);
        assert_eq!(solve_fp(&id, &[1, 0]).unwrap(), Some(vec![1, 0]));
        let m = FpMatrix::from_rows(f2, &[vec![1, 1]]).unwrap();
        assert_eq!(solve_fp(&m, &[1]).unwrap(), Some(vec![1, 0]));
        let z = FpMatrix::zeros(f2, 1, 2);
        assert_eq!(solve_fp(&z, &[1]).unwrap(), None);
        assert!(matches!(solve_fp(&z, &[1, 0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn hankel_examples() {
        let f3 = f(3);
        let t = LaurentTail::new(f3, [1, 1, 0, 1]);
        let h = hankel_block(&t, 1, 2, 3).unwrap();
        assert_eq!(h, FpMatrix::from_rows(f3, &[vec![1, 1, 0], vec![1, 0, 1]]).unwrap());
        let z = hankel_block(&LaurentTail::zero(f3), 1, 3, 2).unwrap();
        assert_eq!(z, FpMatrix::zeros(f3, 3, 2));
        let one = hankel_block(&LaurentTail::new(f3, [1]), 2, 1, 1).unwrap();
        assert_eq!(one, FpMatrix::zeros(f3, 1, 1));
        assert!(hankel_block(&t, 0, 1, 1).is_err());
    }
}
