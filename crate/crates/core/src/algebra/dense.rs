use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest dimension a dense Kronecker product may produce.
pub const DEFAULT_MAX_DENSE_DIM: usize = 4096;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows.min(8) {
            let row: Vec<String> = (0..self.cols.min(8))
                .map(|c| {
                    let z = self.get(r, c);
                    format!("{:+.3}{:+.3}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::BadShape {
                rows,
                cols,
                len: data.len(),
            });
        }
        if let Some(k) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                row: k / cols.max(1),
                col: k % cols.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m.data[i * n + i] = *v;
        }
        m
    }

    pub fn from_real_diag(values: &[f64]) -> Self {
        let v: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::diag(&v)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from real row slices; panics on ragged input (test/constant helper).
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
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

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
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

    pub fn require_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rows)
    }

    /// Matrix product. Zero entries of the left factor are skipped, which keeps
    /// products of ladder-type matrices cheap.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        let oc = other.cols;
        for i in 0..self.rows {
            let out_row = &mut out.data[i * oc..(i + 1) * oc];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * oc..(k + 1) * oc];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Adds `c` times `other` in place.
    pub fn axpy(&mut self, c: Complex64, other: &Self) -> Result<()> {
        self.same_shape(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
        Ok(())
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn real_part(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex64::new(z.re, 0.0))
                .collect(),
        }
    }

    pub fn imag_part(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex64::new(z.im, 0.0))
                .collect(),
        }
    }

    /// Kronecker product; the left factor carries the slower-varying index.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        self.kron_with_limit(other, DEFAULT_MAX_DENSE_DIM)
    }

    pub fn kron_with_limit(&self, other: &Self, limit: usize) -> Result<Self> {
        let rows = self
            .rows
            .checked_mul(other.rows)
            .ok_or(Error::SizeOverflow {
                requested: usize::MAX,
                limit,
            })?;
        let cols = self
            .cols
            .checked_mul(other.cols)
            .ok_or(Error::SizeOverflow {
                requested: usize::MAX,
                limit,
            })?;
        if rows.max(cols) > limit {
            return Err(Error::SizeOverflow {
                requested: rows.max(cols),
                limit,
            });
        }
        Ok(Self::from_fn(rows, cols, |r, c| {
            let (ar, br) = (r / other.rows, r % other.rows);
            let (ac, bc) = (c / other.cols, c % other.cols);
            self.get(ar, ac) * other.get(br, bc)
        }))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let mut m: f64 = 0.0;
        for r in 0..self.rows {
            for c in 0..self.cols {
                if r != c {
                    m = m.max(self.get(r, c).norm());
                }
            }
        }
        m
    }

    /// Induced 1-norm (max column sum).
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.get(r, c).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |r, j| self.get(r, cols[j]))
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// Frobenius inner product `tr(self^dagger other)`.
    pub fn frobenius_inner(&self, other: &Self) -> Result<Complex64> {
        self.same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

impl ComplexMatrix {
    /// Solves `self * x = rhs` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        let n = self.require_square()?;
        if rhs.rows != n {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let mut a = self.clone();
        let mut b = rhs.clone();
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a.get(i, k).norm().total_cmp(&a.get(j, k).norm()))
                .expect("non-empty pivot range");
            if a.get(p, k).norm() <= 1e-13 * scale {
                return Err(Error::ExpNonConvergence(format!(
                    "singular system at column {k}"
                )));
            }
            if p != k {
                for c in 0..n {
                    let t = a.get(k, c);
                    a.set(k, c, a.get(p, c));
                    a.set(p, c, t);
                }
                for c in 0..b.cols {
                    let t = b.get(k, c);
                    b.set(k, c, b.get(p, c));
                    b.set(p, c, t);
                }
            }
            let piv = a.get(k, k);
            for i in (k + 1)..n {
                let f = a.get(i, k) / piv;
                if f == ZERO {
                    continue;
                }
                for c in k..n {
                    let v = a.get(i, c) - f * a.get(k, c);
                    a.set(i, c, v);
                }
                for c in 0..b.cols {
                    let v = b.get(i, c) - f * b.get(k, c);
                    b.set(i, c, v);
                }
            }
        }
        let mut x = Self::zeros(n, b.cols);
        for c in 0..b.cols {
            for i in (0..n).rev() {
                let mut s = b.get(i, c);
                for j in (i + 1)..n {
                    s -= a.get(i, j) * x.get(j, c);
                }
                x.set(i, c, s / a.get(i, i));
            }
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let k = ComplexMatrix::identity(2)
            .kron(&ComplexMatrix::identity(3))
            .unwrap();
        assert_eq!(k, ComplexMatrix::identity(6));
    }

    #[test]
    fn kron_diagonal_order() {
        let a = ComplexMatrix::from_real_diag(&[1.0, 2.0]);
        let b = ComplexMatrix::from_real_diag(&[3.0, 5.0]);
        let k = a.kron(&b).unwrap();
        assert_eq!(k, ComplexMatrix::from_real_diag(&[3.0, 5.0, 6.0, 10.0]));
    }

    #[test]
    fn kron_dimension_arithmetic() {
        let a = ComplexMatrix::zeros(2, 2);
        let b = ComplexMatrix::zeros(3, 3);
        let k = a.kron(&b).unwrap();
        assert_eq!((k.rows(), k.cols()), (6, 6));
    }

    #[test]
    fn kron_beyond_limit_is_rejected() {
        let a = ComplexMatrix::identity(64);
        let b = ComplexMatrix::identity(128);
        assert!(matches!(a.kron(&b), Err(Error::SizeOverflow { .. })));
    }

    #[test]
    fn dagger_conjugates() {
        let i = ComplexMatrix::identity(3).scale(c(0.0, 1.0));
        assert_eq!(i.dagger(), ComplexMatrix::identity(3).scale(c(0.0, -1.0)));
        assert_eq!(
            ComplexMatrix::identity(4).dagger(),
            ComplexMatrix::identity(4)
        );
    }

    #[test]
    fn max_abs_diff_of_scaled_identity() {
        let i = ComplexMatrix::identity(3);
        assert_eq!(i.max_abs_diff(&i).unwrap(), 0.0);
        assert_eq!(i.max_abs_diff(&i.scale_real(2.0)).unwrap(), 1.0);
        assert!(i.max_abs_diff(&ComplexMatrix::identity(2)).is_err());
    }

    #[test]
    fn non_finite_rejected() {
        let r = ComplexMatrix::new(1, 2, vec![c(1.0, 0.0), c(f64::NAN, 0.0)]);
        assert!(matches!(r, Err(Error::NonFinite { row: 0, col: 1 })));
    }

    #[test]
    fn solve_small_system() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[1.0, 1.0]]);
        let b = ComplexMatrix::from_real_rows(&[&[4.0], &[3.0]]);
        let x = a.solve(&b).unwrap();
        assert!(
            x.max_abs_diff(&ComplexMatrix::from_real_rows(&[&[1.0], &[2.0]]))
                .unwrap()
                < 1e-15
        );
        assert!(ComplexMatrix::zeros(2, 2).solve(&b).is_err());
    }

    #[test]
    fn matmul_shape_check() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(a.matmul(&a).is_err());
        let p = a.matmul(&ComplexMatrix::zeros(3, 4)).unwrap();
        assert_eq!((p.rows(), p.cols()), (2, 4));
    }
}
