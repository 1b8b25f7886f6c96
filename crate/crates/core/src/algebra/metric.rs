use serde::Serialize;

/// Diagonal metric with `n_plus` leading `+1` entries followed by `n_minus`
/// entries equal to `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetricSignature {
    n_plus: usize,
    n_minus: usize,
    diag: Vec<i8>,
}

impl MetricSignature {
    pub fn new(n_plus: usize, n_minus: usize) -> Self {
        let diag = std::iter::repeat(1)
            .take(n_plus)
            .chain(std::iter::repeat(-1).take(n_minus))
            .collect();
        Self {
            n_plus,
            n_minus,
            diag,
        }
    }

    /// Spacetime metric diag(1,-1,-1,-1,-1).
    pub fn spacetime() -> Self {
        Self::new(1, 4)
    }

    /// Metric of the ten-dimensional real phase space.
    pub fn phase_space() -> Self {
        Self::new(2, 8)
    }

    pub fn n_plus(&self) -> usize {
        self.n_plus
    }

    pub fn n_minus(&self) -> usize {
        self.n_minus
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[i8] {
        &self.diag
    }

    /// Diagonal entry as a float; raised and lowered forms coincide.
    pub fn eta(&self, mu: usize) -> f64 {
        f64::from(self.diag[mu])
    }

    /// Full entry `eta_{mu nu}` (zero off the diagonal).
    pub fn entry(&self, mu: usize, nu: usize) -> f64 {
        if mu == nu {
            self.eta(mu)
        } else {
            0.0
        }
    }

    pub fn to_matrix(&self) -> super::ComplexMatrix {
        let d: Vec<f64> = self.diag.iter().map(|&s| f64::from(s)).collect();
        super::ComplexMatrix::from_real_diag(&d)
    }
}
