//! Matrix exponential by scaling and squaring a truncated Taylor series.

use num_complex::Complex64;

use super::dense::ComplexMatrix;
use super::sparse::SparseMatrix;
use crate::error::{Error, Result};

/// Scaled 1-norm threshold for the series evaluation.
pub const SCALING_THRESHOLD: f64 = 0.5;
/// Fixed series order; 0.5^19 / 19! is far below double precision.
pub const SERIES_ORDER: usize = 18;
const MAX_SQUARINGS: u32 = 64;

pub fn matrix_exponential(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.require_square()?;
    let norm = a.norm_one();
    if !norm.is_finite() {
        return Err(Error::ExpNonConvergence(format!("input 1-norm is {norm}")));
    }
    let mut squarings = 0u32;
    if norm > SCALING_THRESHOLD {
        squarings = (norm / SCALING_THRESHOLD).log2().ceil() as u32;
    }
    if squarings > MAX_SQUARINGS {
        return Err(Error::ExpNonConvergence(format!(
            "1-norm {norm:e} needs {squarings} squarings"
        )));
    }
    let b = a.scale_real(0.5f64.powi(squarings as i32));

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=SERIES_ORDER {
        term = term.matmul(&b)?.scale_real(1.0 / k as f64);
        sum.axpy(Complex64::new(1.0, 0.0), &term)?;
    }
    let tail = term.max_abs();
    if tail > f64::EPSILON * sum.max_abs().max(1.0) {
        return Err(Error::ExpNonConvergence(format!(
            "series tail {tail:e} at order {SERIES_ORDER}"
        )));
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum)?;
    }
    if sum
        .data()
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::ExpNonConvergence("overflow while squaring".into()));
    }
    Ok(sum)
}

/// `exp(a) v` for a sparse generator applied to a dense block of columns.
///
/// The generator is split into `s` steps with `||a||_1 / s <= 0.5` and each
/// step's series is summed until the increment is below machine precision.
pub fn exp_action(a: &SparseMatrix, v: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let norm = a.norm_one();
    if !norm.is_finite() {
        return Err(Error::ExpNonConvergence(format!(
            "generator 1-norm is {norm}"
        )));
    }
    let steps = ((norm / SCALING_THRESHOLD).ceil() as usize).max(1);
    if steps > 1 << 20 {
        return Err(Error::ExpNonConvergence(format!(
            "1-norm {norm:e} too large"
        )));
    }
    let step = a.scale(Complex64::new(1.0 / steps as f64, 0.0));
    let mut out = v.clone();
    for _ in 0..steps {
        let mut sum = out.clone();
        let mut term = out;
        let mut converged = false;
        for k in 1..=4 * SERIES_ORDER {
            term = step.mul_dense(&term)?.scale_real(1.0 / k as f64);
            sum.axpy(Complex64::new(1.0, 0.0), &term)?;
            if term.max_abs() <= f64::EPSILON * 1e-3 * sum.max_abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::ExpNonConvergence(
                "exp_action series did not settle".into(),
            ));
        }
        out = sum;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn exp_of_zero_is_identity() {
        let e = matrix_exponential(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(e, ComplexMatrix::identity(3));
    }

    #[test]
    fn nilpotent_series_terminates() {
        let n = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let e = matrix_exponential(&n).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(e.max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn exp_i_pi_is_minus_one() {
        let a = ComplexMatrix::diag(&[Complex64::new(0.0, PI)]);
        let e = matrix_exponential(&a).unwrap();
        assert!(
            e.max_abs_diff(&ComplexMatrix::from_real_diag(&[-1.0]))
                .unwrap()
                < 1e-14
        );
    }

    #[test]
    fn rejects_non_square_and_non_finite() {
        assert!(matrix_exponential(&ComplexMatrix::zeros(2, 3)).is_err());
        let big = ComplexMatrix::from_real_diag(&[1e300, 1e300]).scale_real(1e10);
        assert!(matches!(
            matrix_exponential(&big),
            Err(Error::ExpNonConvergence(_))
        ));
    }

    #[test]
    fn action_matches_full_exponential() {
        let a = ComplexMatrix::from_real_rows(&[
            &[0.0, 1.5, 0.0],
            &[-1.5, 0.0, 0.7],
            &[0.0, -0.7, 0.2],
        ]);
        let full = matrix_exponential(&a).unwrap();
        let v = ComplexMatrix::identity(3).select_columns(&[0, 2]);
        let act = exp_action(&SparseMatrix::from_dense(&a), &v).unwrap();
        assert!(act.max_abs_diff(&full.select_columns(&[0, 2])).unwrap() < 1e-13);
    }
}
