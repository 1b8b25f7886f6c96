use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToleranceConfig {
    /// Identities that are exact in exact arithmetic.
    pub exact_tol: f64,
    /// Results that pass through a matrix exponential.
    pub num_tol: f64,
    /// Finite-conjugation checks on truncated spaces.
    pub approx_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            exact_tol: 1e-12,
            num_tol: 1e-10,
            approx_tol: 1e-6,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let all = [self.exact_tol, self.num_tol, self.approx_tol];
        if all.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::Config(
                "tolerances must be finite and nonnegative".into(),
            ));
        }
        if !(self.exact_tol <= self.num_tol && self.num_tol <= self.approx_tol) {
            return Err(Error::Config(format!(
                "tolerances must satisfy exact_tol <= num_tol <= approx_tol, got {} / {} / {}",
                self.exact_tol, self.num_tol, self.approx_tol
            )));
        }
        Ok(())
    }
}
