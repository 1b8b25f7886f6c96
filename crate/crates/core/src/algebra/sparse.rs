use num_complex::Complex64;

use super::dense::ComplexMatrix;
use crate::error::{Error, Result};

/// Largest dimension a sparse Kronecker product may produce.
pub const DEFAULT_MAX_SPARSE_DIM: usize = 1 << 22;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Compressed-row complex matrix used for truncated Fock-space operators.
///
/// Entries that sum to exactly zero are dropped, so structural zeros stay
/// structural through products of ladder matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            row_ptr: vec![0; rows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn from_diag(values: &[Complex64]) -> Self {
        let n = values.len();
        Self::from_triplets(n, n, values.iter().enumerate().map(|(i, v)| (i, i, *v)))
    }

    /// Duplicates are summed; exact zeros are dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Self {
        let mut per_row: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            assert!(
                r < rows && c < cols,
                "triplet ({r},{c}) outside {rows}x{cols}"
            );
            per_row[r].push((c, v));
        }
        let mut row_ptr = Vec::with_capacity(rows + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for mut row in per_row {
            row.sort_by_key(|&(c, _)| c);
            let mut iter = row.into_iter().peekable();
            while let Some((c, mut v)) = iter.next() {
                while let Some(&(c2, v2)) = iter.peek() {
                    if c2 != c {
                        break;
                    }
                    v += v2;
                    iter.next();
                }
                if v != ZERO {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn from_dense(m: &ComplexMatrix) -> Self {
        let mut t = Vec::new();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let v = m.get(r, c);
                if v != ZERO {
                    t.push((r, c, v));
                }
            }
        }
        Self::from_triplets(m.rows(), m.cols(), t)
    }

    pub fn to_dense(&self, limit: usize) -> Result<ComplexMatrix> {
        if self.rows.max(self.cols) > limit {
            return Err(Error::SizeOverflow {
                requested: self.rows.max(self.cols),
                limit,
            });
        }
        let mut m = ComplexMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.iter() {
            m.set(r, c, v);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        self.col_idx[a..b]
            .iter()
            .copied()
            .zip(self.values[a..b].iter().copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        match self.col_idx[a..b].binary_search(&c) {
            Ok(k) => self.values[a + k],
            Err(_) => ZERO,
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        // Dense accumulator per output row with a touched-column list.
        let mut acc = vec![ZERO; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; other.cols];
        let mut row_ptr = Vec::with_capacity(self.rows + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for r in 0..self.rows {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if !mark[c] {
                        mark[c] = true;
                        touched.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                if acc[c] != ZERO {
                    col_idx.push(c);
                    values.push(acc[c]);
                }
                acc[c] = ZERO;
                mark[c] = false;
            }
            touched.clear();
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Sparse times dense block.
    pub fn mul_dense(&self, v: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != v.rows() {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (v.rows(), v.cols()),
            });
        }
        let mut out = ComplexMatrix::zeros(self.rows, v.cols());
        for r in 0..self.rows {
            for (k, a) in self.row(r) {
                for j in 0..v.cols() {
                    let cur = out.get(r, j);
                    out.set(r, j, cur + a * v.get(k, j));
                }
            }
        }
        Ok(out)
    }

    pub fn linear_combination(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        self.same_shape(other)?;
        let t = self
            .iter()
            .map(|(r, c, v)| (r, c, a * v))
            .chain(other.iter().map(|(r, c, v)| (r, c, b * v)));
        Ok(Self::from_triplets(self.rows, self.cols, t))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        self.linear_combination(one, other, one)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.linear_combination(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if c == ZERO {
            return Self::zeros(self.rows, self.cols);
        }
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= c;
        }
        out
    }

    pub fn dagger(&self) -> Self {
        Self::from_triplets(
            self.cols,
            self.rows,
            self.iter().map(|(r, c, v)| (c, r, v.conj())),
        )
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        self.kron_with_limit(other, DEFAULT_MAX_SPARSE_DIM)
    }

    pub fn kron_with_limit(&self, other: &Self, limit: usize) -> Result<Self> {
        let rows = self.rows.saturating_mul(other.rows);
        let cols = self.cols.saturating_mul(other.cols);
        if rows.max(cols) > limit {
            return Err(Error::SizeOverflow {
                requested: rows.max(cols),
                limit,
            });
        }
        let mut t = Vec::with_capacity(self.nnz() * other.nnz());
        for (ar, ac, av) in self.iter() {
            for (br, bc, bv) in other.iter() {
                t.push((ar * other.rows + br, ac * other.cols + bc, av * bv));
            }
        }
        Ok(Self::from_triplets(rows, cols, t))
    }

    /// Keeps only the listed columns, renumbered in list order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut map = vec![usize::MAX; self.cols];
        for (j, &c) in cols.iter().enumerate() {
            map[c] = j;
        }
        let t = self
            .iter()
            .filter(|&(_, c, _)| map[c] != usize::MAX)
            .map(|(r, c, v)| (r, map[c], v));
        Self::from_triplets(self.rows, cols.len(), t)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn max_off_diagonal(&self) -> f64 {
        self.iter()
            .filter(|&(r, c, _)| r != c)
            .map(|(_, _, v)| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn norm_one(&self) -> f64 {
        let mut sums = vec![0.0; self.cols];
        for (_, c, v) in self.iter() {
            sums[c] += v.norm();
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i))
            .collect()
    }
}
