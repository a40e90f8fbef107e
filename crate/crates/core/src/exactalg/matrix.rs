use std::fmt;

use crate::error::{Error, Result};
use crate::exec;

use super::{FieldSpec, Scalar};

/// Buffers smaller than this are eliminated on the calling thread.
const PAR_ELIM_MIN: usize = 1 << 14;

/// Dense row-major matrix over a single field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

/// Result of Gauss-Jordan elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Matrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        m
    }

    pub fn from_fn(field: FieldSpec, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Matrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    /// Builds a matrix from a row-major entry list.
    pub fn from_entries(field: FieldSpec, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|s| s.field() != field) {
            return Err(Error::FieldMismatch(bad.field().to_string(), field.to_string()));
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::from_entries(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Matrix::from_fn(field, r, c, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn column_vector(field: FieldSpec, v: Vec<Scalar>) -> Self {
        let n = v.len();
        Matrix {
            field,
            rows: n,
            cols: 1,
            entries: v,
        }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let cols = columns.len();
        let mut m = Matrix::zeros(field, rows, cols);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, v) in col.iter().enumerate() {
                m.entries[i * cols + j] = v.clone();
            }
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

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    /// `self += s * other` in place.
    pub fn add_scaled(&mut self, s: &Scalar, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if s.is_zero() {
            return;
        }
        let neg = -s;
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            if !b.is_zero() {
                a.sub_assign_mul(&neg, b);
            }
        }
    }

    /// Matrix product; zero entries on the left are skipped.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        let (n, m) = (self.rows, other.cols);
        let rows: Vec<Vec<Scalar>> = exec::map_range(n, |i| {
            let mut acc = vec![self.field.zero(); m];
            for (k, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let neg = -a;
                for (j, b) in other.row(k).iter().enumerate() {
                    if !b.is_zero() {
                        acc[j].sub_assign_mul(&neg, b);
                    }
                }
            }
            acc
        });
        Ok(Matrix {
            field: self.field,
            rows: n,
            cols: m,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc.sub_assign_mul(&-a, b);
                    }
                }
                acc
            })
            .collect()
    }

    /// Kronecker product, `(A ⊗ B)[(i,k),(j,l)] = A[i,j] B[k,l]`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Matrix::zeros(self.field, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row counts differ".into()));
        }
        let cols = self.cols + other.cols;
        Ok(Matrix::from_fn(self.field, self.rows, cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        }))
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn submatrix_cols(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, self.rows, cols.len(), |r, c| self.get(r, cols[c]).clone())
    }

    pub fn submatrix_rows(&self, rows: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, rows.len(), self.cols, |r, c| self.get(rows[r], c).clone())
    }

    /// Reduced row echelon form. Pivots are the first nonzero entry in column
    /// order.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut pivot_cols = Vec::new();
        let mut prow = 0;
        for col in 0..cols {
            if prow == rows {
                break;
            }
            let Some(found) = (prow..rows).find(|&r| !m.entries[r * cols + col].is_zero()) else {
                continue;
            };
            if found != prow {
                for c in 0..cols {
                    m.entries.swap(found * cols + c, prow * cols + c);
                }
            }
            let inv = m.entries[prow * cols + col].inverse().expect("pivot is nonzero");
            for c in col..cols {
                let v = &m.entries[prow * cols + c];
                if !v.is_zero() {
                    m.entries[prow * cols + c] = v * &inv;
                }
            }
            let pivot: Vec<(usize, Scalar)> = (col..cols)
                .filter_map(|c| {
                    let v = &m.entries[prow * cols + c];
                    (!v.is_zero()).then(|| (c, v.clone()))
                })
                .collect();
            let p = prow;
            exec::for_each_row_mut(&mut m.entries, cols, PAR_ELIM_MIN, |r, row| {
                if r == p || row[col].is_zero() {
                    return;
                }
                let factor = row[col].clone();
                for (c, v) in &pivot {
                    row[*c].sub_assign_mul(&factor, v);
                }
            });
            pivot_cols.push(col);
            prow += 1;
        }
        Rref {
            reduced: m,
            rank: pivot_cols.len(),
            pivot_cols,
        }
    }

    pub fn rank(&self) -> usize {
        // eliminating the shorter side is cheaper; rank is transpose-invariant
        if self.rows > self.cols {
            self.transpose().rref().rank
        } else {
            self.rref().rank
        }
    }

    /// One solution of `self · x = b` with free variables set to zero, or
    /// `None` when the system is inconsistent. `b` may hold several columns;
    /// the result is `Some` only if every column is solvable.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>> {
        if b.rows != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "system has {} rows, right-hand side has {}",
                self.rows, b.rows
            )));
        }
        if b.field != self.field {
            return Err(Error::FieldMismatch(self.field.to_string(), b.field.to_string()));
        }
        let n = self.cols;
        let aug = self.hstack(b)?;
        let Rref {
            reduced, pivot_cols, ..
        } = aug.rref();
        if pivot_cols.iter().any(|&c| c >= n) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.field, n, b.cols);
        for (r, &pc) in pivot_cols.iter().enumerate() {
            for k in 0..b.cols {
                x.set(pc, k, reduced.get(r, n + k).clone());
            }
        }
        Ok(Some(x))
    }

    /// Solves for a single column vector.
    pub fn solve_vec(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        let rhs = Matrix::column_vector(self.field, b.to_vec());
        Ok(self.solve(&rhs)?.map(|x| x.column(0)))
    }

    /// Columns spanning the kernel: one per free variable, with that variable
    /// set to 1 and the others to 0.
    pub fn kernel_basis(&self) -> Matrix {
        let Rref {
            reduced, pivot_cols, ..
        } = self.rref();
        let n = self.cols;
        let mut is_pivot = vec![false; n];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut k = Matrix::zeros(self.field, n, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, self.field.one());
            for (r, &pc) in pivot_cols.iter().enumerate() {
                let v = reduced.get(r, fc);
                if !v.is_zero() {
                    k.set(pc, j, -v);
                }
            }
        }
        k
    }

    /// Row-major text forms of the entries.
    pub fn to_text(&self) -> Vec<String> {
        self.entries.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn rref_of_identity_and_proportional_rows() {
        let r = Matrix::identity(Q, 2).rref();
        assert_eq!((r.rank, r.pivot_cols.clone()), (2, vec![0, 1]));
        assert_eq!(Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]).rref().rank, 1);
    }

    #[test]
    fn rref_mod_two() {
        let f2 = FieldSpec::prime(2).unwrap();
        // [[1,1],[1,0]] -> R2 += R1 gives [[1,1],[0,1]] -> full rank
        let r = Matrix::from_i64(f2, &[&[1, 1], &[1, 0]]).rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.reduced, Matrix::identity(f2, 2));
    }

    #[test]
    fn solve_examples() {
        let b = Matrix::from_i64(Q, &[&[1], &[2]]);
        let x = Matrix::identity(Q, 2).solve(&b).unwrap().unwrap();
        assert_eq!(x, b);
        let ones = Matrix::from_i64(Q, &[&[1, 1], &[1, 1]]);
        assert_eq!(ones.solve(&b).unwrap(), None);
        let x = Matrix::from_i64(Q, &[&[1, 2]])
            .solve(&Matrix::from_i64(Q, &[&[1]]))
            .unwrap()
            .unwrap();
        assert_eq!(x, Matrix::from_i64(Q, &[&[1], &[0]]));
        assert!(ones.solve(&Matrix::from_i64(Q, &[&[1]])).is_err());
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(Q, 3).kernel_basis().cols(), 0);
        let z = Matrix::zeros(Q, 2, 2).kernel_basis();
        assert_eq!(z, Matrix::identity(Q, 2));
        let k = Matrix::from_i64(Q, &[&[1, 2]]).kernel_basis();
        assert_eq!(k, Matrix::from_i64(Q, &[&[-2], &[1]]));
    }

    #[test]
    fn kron_shapes() {
        let a = Matrix::from_i64(Q, &[&[1, 2]]);
        let b = Matrix::from_i64(Q, &[&[0], &[3]]);
        let k = a.kron(&b);
        assert_eq!(k, Matrix::from_i64(Q, &[&[0, 0], &[3, 6]]));
    }

    #[test]
    fn sequential_and_parallel_rref_agree() {
        let f7 = FieldSpec::prime(7).unwrap();
        let m = Matrix::from_fn(f7, 150, 130, |r, c| f7.from_u64(((r * 31 + c * 17) ^ (r * c)) as u64));
        let a = m.rref();
        let b = exec::sequential(|| m.rref());
        assert_eq!(a, b);
    }
}
