//! Linear algebra shared by every representation.

mod dense;
mod expm;
mod kronsum;
mod metric;
mod operator;
mod sparse;
mod spectrum;
mod tolerance;

pub use dense::{ComplexMatrix, DEFAULT_MAX_DENSE_DIM};
pub use expm::{exp_action, matrix_exponential, SCALING_THRESHOLD, SERIES_ORDER};
pub use kronsum::KronSum;
pub use metric::MetricSignature;
pub use operator::{anticommutator, commutator, Operator};
pub use sparse::{SparseMatrix, DEFAULT_MAX_SPARSE_DIM};
pub use spectrum::{diagonal_spectrum, rational_to_f64, to_rational};
pub use tolerance::ToleranceConfig;

pub use num_complex::Complex64;

pub(crate) fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);
