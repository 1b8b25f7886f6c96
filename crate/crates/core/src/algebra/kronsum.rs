use std::collections::BTreeMap;

use num_complex::Complex64;

use super::dense::ComplexMatrix;
use super::sparse::SparseMatrix;
use crate::error::{Error, Result};

/// Lazy sum `sum_k A_k (x) F_k` of sparse left factors and small dense right
/// factors. The full product space is never stored.
///
/// Row and column indices of the product are `left * right_dim + right`.
#[derive(Debug, Clone)]
pub struct KronSum {
    left_dim: usize,
    right_dim: usize,
    terms: Vec<(SparseMatrix, ComplexMatrix)>,
}

impl KronSum {
    pub fn zeros(left_dim: usize, right_dim: usize) -> Self {
        Self {
            left_dim,
            right_dim,
            terms: Vec::new(),
        }
    }

    pub fn term(a: SparseMatrix, f: ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let right_dim = f.require_square()?;
        Ok(Self {
            left_dim: a.rows(),
            right_dim,
            terms: vec![(a, f)],
        })
    }

    /// `A (x) I`.
    pub fn lift_left(a: &SparseMatrix, right_dim: usize) -> Result<Self> {
        Self::term(a.clone(), ComplexMatrix::identity(right_dim))
    }

    /// `I (x) F`.
    pub fn lift_right(left_dim: usize, f: &ComplexMatrix) -> Result<Self> {
        Self::term(SparseMatrix::identity(left_dim), f.clone())
    }

    pub fn identity(left_dim: usize, right_dim: usize) -> Self {
        Self {
            left_dim,
            right_dim,
            terms: vec![(
                SparseMatrix::identity(left_dim),
                ComplexMatrix::identity(right_dim),
            )],
        }
    }

    pub fn left_dim(&self) -> usize {
        self.left_dim
    }

    pub fn right_dim(&self) -> usize {
        self.right_dim
    }

    pub fn dim(&self) -> usize {
        self.left_dim * self.right_dim
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if (self.left_dim, self.right_dim) != (other.left_dim, other.right_dim) {
            return Err(Error::DimensionMismatch {
                left: (self.left_dim, self.right_dim),
                right: (other.left_dim, other.right_dim),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            left_dim: self.left_dim,
            right_dim: self.right_dim,
            terms: self
                .terms
                .iter()
                .map(|(a, f)| (a.clone(), f.scale(c)))
                .collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// `(A (x) F)(B (x) G) = AB (x) FG`, term by term.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, f) in &self.terms {
            for (b, g) in &other.terms {
                let ab = a.matmul(b)?;
                if ab.nnz() == 0 {
                    continue;
                }
                let fg = f.matmul(g)?;
                if fg.max_abs() == 0.0 {
                    continue;
                }
                terms.push((ab, fg));
            }
        }
        Ok(Self {
            left_dim: self.left_dim,
            right_dim: self.right_dim,
            terms,
        })
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    pub fn dagger(&self) -> Self {
        Self {
            left_dim: self.left_dim,
            right_dim: self.right_dim,
            terms: self
                .terms
                .iter()
                .map(|(a, f)| (a.dagger(), f.dagger()))
                .collect(),
        }
    }

    /// Right-multiplies every left factor by `p`, typically a diagonal
    /// projector onto selected left basis states.
    pub fn project_left_columns(&self, p: &SparseMatrix) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(a, f)| Ok((a.matmul(p)?, f.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            left_dim: self.left_dim,
            right_dim: self.right_dim,
            terms,
        })
    }

    /// Groups the sum by right-factor entry: `S_ab = sum_k F_k[a, b] A_k`.
    /// The product entry at `(r*d + a, c*d + b)` is `S_ab[r, c]`.
    pub fn expand(&self) -> BTreeMap<(usize, usize), SparseMatrix> {
        let mut acc: BTreeMap<(usize, usize), Vec<(usize, usize, Complex64)>> = BTreeMap::new();
        for (a, f) in &self.terms {
            for i in 0..self.right_dim {
                for j in 0..self.right_dim {
                    let w = f.get(i, j);
                    if w == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    acc.entry((i, j))
                        .or_default()
                        .extend(a.iter().map(|(r, c, v)| (r, c, w * v)));
                }
            }
        }
        acc.into_iter()
            .map(|(k, t)| {
                (
                    k,
                    SparseMatrix::from_triplets(self.left_dim, self.left_dim, t),
                )
            })
            .collect()
    }

    /// Visits every stored nonzero of the expanded product as `(row, col, value)`.
    pub fn for_each_nonzero(&self, mut f: impl FnMut(usize, usize, Complex64)) {
        let d = self.right_dim;
        for ((a, b), s) in self.expand() {
            for (r, c, v) in s.iter() {
                f(r * d + a, c * d + b, v);
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.expand()
            .values()
            .map(|s| s.max_abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        let d = self.right_dim;
        let (r, a, c, b) = (row / d, row % d, col / d, col % d);
        self.terms
            .iter()
            .map(|(m, f)| m.get(r, c) * f.get(a, b))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn small() -> (SparseMatrix, ComplexMatrix) {
        let a = SparseMatrix::from_triplets(
            3,
            3,
            vec![(0, 1, c(2.0)), (2, 0, c(-1.0)), (1, 1, c(0.5))],
        );
        let f = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, -3.0]]);
        (a, f)
    }

    #[test]
    fn entries_match_dense_kron() {
        let (a, f) = small();
        let k = KronSum::term(a.clone(), f.clone()).unwrap();
        let dense = a.to_dense(16).unwrap().kron(&f).unwrap();
        for r in 0..6 {
            for col in 0..6 {
                assert_eq!(k.entry(r, col), dense.get(r, col));
            }
        }
        let mut seen = 0;
        k.for_each_nonzero(|r, col, v| {
            assert_eq!(v, dense.get(r, col));
            seen += 1;
        });
        assert_eq!(seen, dense.data().iter().filter(|v| v.norm() > 0.0).count());
    }

    #[test]
    fn product_and_cancellation() {
        let (a, f) = small();
        let k = KronSum::term(a.clone(), f.clone()).unwrap();
        let sq = k.matmul(&k).unwrap();
        let expect = KronSum::term(a.matmul(&a).unwrap(), f.matmul(&f).unwrap()).unwrap();
        assert_eq!(sq.max_abs_diff(&expect).unwrap(), 0.0);
        let left = KronSum::lift_left(&a, 2).unwrap();
        let right = KronSum::lift_right(3, &f).unwrap();
        assert_eq!(left.commutator(&right).unwrap().max_abs(), 0.0);
        assert_eq!(k.sub(&k).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn dagger_entries() {
        let (a, f) = small();
        let k = KronSum::term(a, f.scale(Complex64::new(0.0, 1.0))).unwrap();
        let d = k.dagger();
        for r in 0..6 {
            for col in 0..6 {
                assert_eq!(d.entry(r, col), k.entry(col, r).conj());
            }
        }
    }

    #[test]
    fn shape_mismatch() {
        let a = KronSum::identity(2, 2);
        let b = KronSum::identity(3, 2);
        assert!(a.add(&b).is_err());
    }
}
