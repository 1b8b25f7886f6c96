use num_complex::Complex64;

use super::dense::ComplexMatrix;
use super::sparse::SparseMatrix;
use crate::error::Result;

/// Square operator matrix, either dense or compressed.
pub trait Operator: Clone + Send + Sync + Sized {
    fn dim(&self) -> usize;
    fn identity_like(&self) -> Self;
    fn matmul(&self, other: &Self) -> Result<Self>;
    fn add(&self, other: &Self) -> Result<Self>;
    fn sub(&self, other: &Self) -> Result<Self>;
    fn scale(&self, c: Complex64) -> Self;
    fn dagger(&self) -> Self;
    fn entry(&self, r: usize, c: usize) -> Complex64;
    fn max_abs(&self) -> f64;
    fn max_abs_diff(&self, other: &Self) -> Result<f64>;
    /// Max entrywise difference over the listed columns only, i.e. the two
    /// operators compared on the span of those basis states.
    fn max_abs_diff_on_columns(&self, other: &Self, cols: &[usize]) -> Result<f64>;
    /// Largest off-diagonal modulus within the listed columns.
    fn max_off_diagonal_in_columns(&self, cols: &[usize]) -> f64;

    fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }
}

impl Operator for ComplexMatrix {
    fn dim(&self) -> usize {
        self.rows()
    }
    fn identity_like(&self) -> Self {
        ComplexMatrix::identity(self.rows())
    }
    fn matmul(&self, other: &Self) -> Result<Self> {
        ComplexMatrix::matmul(self, other)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        ComplexMatrix::add(self, other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        ComplexMatrix::sub(self, other)
    }
    fn scale(&self, c: Complex64) -> Self {
        ComplexMatrix::scale(self, c)
    }
    fn dagger(&self) -> Self {
        ComplexMatrix::dagger(self)
    }
    fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.get(r, c)
    }
    fn max_abs(&self) -> f64 {
        ComplexMatrix::max_abs(self)
    }
    fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        ComplexMatrix::max_abs_diff(self, other)
    }
    fn max_abs_diff_on_columns(&self, other: &Self, cols: &[usize]) -> Result<f64> {
        self.select_columns(cols)
            .max_abs_diff(&other.select_columns(cols))
    }
    fn max_off_diagonal_in_columns(&self, cols: &[usize]) -> f64 {
        let mut m: f64 = 0.0;
        for &c in cols {
            for r in 0..self.rows() {
                if r != c {
                    m = m.max(self.get(r, c).norm());
                }
            }
        }
        m
    }
}

impl Operator for SparseMatrix {
    fn dim(&self) -> usize {
        self.rows()
    }
    fn identity_like(&self) -> Self {
        SparseMatrix::identity(self.rows())
    }
    fn matmul(&self, other: &Self) -> Result<Self> {
        SparseMatrix::matmul(self, other)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        SparseMatrix::add(self, other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        SparseMatrix::sub(self, other)
    }
    fn scale(&self, c: Complex64) -> Self {
        SparseMatrix::scale(self, c)
    }
    fn dagger(&self) -> Self {
        SparseMatrix::dagger(self)
    }
    fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.get(r, c)
    }
    fn max_abs(&self) -> f64 {
        SparseMatrix::max_abs(self)
    }
    fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        SparseMatrix::max_abs_diff(self, other)
    }
    fn max_abs_diff_on_columns(&self, other: &Self, cols: &[usize]) -> Result<f64> {
        self.select_columns(cols)
            .max_abs_diff(&other.select_columns(cols))
    }
    fn max_off_diagonal_in_columns(&self, cols: &[usize]) -> f64 {
        let mut m: f64 = 0.0;
        for (r, j, v) in self.select_columns(cols).iter() {
            if r != cols[j] {
                m = m.max(v.norm());
            }
        }
        m
    }
}

/// `ab - ba`.
pub fn commutator<M: Operator>(a: &M, b: &M) -> Result<M> {
    a.matmul(b)?.sub(&b.matmul(a)?)
}

/// `ab + ba`.
pub fn anticommutator<M: Operator>(a: &M, b: &M) -> Result<M> {
    a.matmul(b)?.add(&b.matmul(a)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli() -> [ComplexMatrix; 3] {
        let i = Complex64::new(0.0, 1.0);
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let mut y = ComplexMatrix::zeros(2, 2);
        y.set(0, 1, -i);
        y.set(1, 0, i);
        let z = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        [x, y, z]
    }

    #[test]
    fn identity_commutes() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let c = commutator(&ComplexMatrix::identity(2), &a).unwrap();
        assert_eq!(c.max_abs(), 0.0);
    }

    #[test]
    fn pauli_commutator_and_anticommutator() {
        let [x, y, z] = pauli();
        let c = commutator(&x, &y).unwrap();
        let expected = z.scale(Complex64::new(0.0, 2.0));
        assert_eq!(c.max_abs_diff(&expected).unwrap(), 0.0);
        assert_eq!(anticommutator(&x, &y).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn anticommutator_with_negation() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let ac = anticommutator(&a, &a.scale_real(-1.0)).unwrap();
        let expected = a.matmul(&a).unwrap().scale_real(-2.0);
        assert_eq!(ac.max_abs_diff(&expected).unwrap(), 0.0);
    }

    #[test]
    fn mismatched_dimensions() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        assert!(commutator(&a, &b).is_err());
        assert!(anticommutator(&a, &b).is_err());
    }

    #[test]
    fn column_restricted_off_diagonal() {
        let m = SparseMatrix::from_triplets(
            3,
            3,
            vec![
                (0, 0, Complex64::new(1.0, 0.0)),
                (0, 2, Complex64::new(5.0, 0.0)),
            ],
        );
        assert_eq!(m.max_off_diagonal_in_columns(&[0, 1]), 0.0);
        assert_eq!(m.max_off_diagonal_in_columns(&[2]), 5.0);
        let d = m.to_dense(8).unwrap();
        assert_eq!(d.max_off_diagonal_in_columns(&[2]), 5.0);
    }
}
