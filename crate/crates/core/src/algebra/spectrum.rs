use num_rational::Rational64;

use super::operator::Operator;
use crate::error::{Error, Result};

/// Reads eigenvalues off the diagonal of an operator that is asserted to be
/// diagonal on the listed basis states.
///
/// `basis` pairs a basis index with its label. Every listed column must have
/// off-diagonal entries of modulus at most `tol` and a real diagonal entry.
/// Values are returned unrounded.
pub fn diagonal_spectrum<M: Operator, L: Clone>(
    a: &M,
    basis: &[(usize, L)],
    tol: f64,
) -> Result<Vec<(L, f64)>> {
    let cols: Vec<usize> = basis.iter().map(|(i, _)| *i).collect();
    let off = a.max_off_diagonal_in_columns(&cols);
    if off > tol {
        return Err(Error::OffDiagonalResidual(off));
    }
    basis
        .iter()
        .map(|(i, label)| {
            let d = a.entry(*i, *i);
            if d.im.abs() > tol {
                return Err(Error::NonRealDiagonal(d.im));
            }
            Ok((label.clone(), d.re))
        })
        .collect()
}

/// Smallest-denominator rational within `tol` of `value`, searching
/// denominators up to `max_den`.
pub fn to_rational(value: f64, max_den: i64, tol: f64) -> Result<Rational64> {
    if !value.is_finite() {
        return Err(Error::NotRational(value));
    }
    for den in 1..=max_den {
        let num = (value * den as f64).round();
        if (num / den as f64 - value).abs() <= tol {
            return Ok(Rational64::new(num as i64, den));
        }
    }
    Err(Error::NotRational(value))
}

pub fn rational_to_f64(r: &Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
