//! Indexed 5x5 generator families and the quadratic contraction strategies.

use serde::Serialize;

use crate::algebra::{commutator, MetricSignature, Operator};
use crate::error::{Error, Result};

pub const MODES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CasimirOrder {
    Linear,
    Quadratic,
}

impl CasimirOrder {
    pub fn from_degree(d: u8) -> Result<Self> {
        match d {
            1 => Ok(CasimirOrder::Linear),
            2 => Ok(CasimirOrder::Quadratic),
            _ => Err(Error::Config(format!(
                "casimir order must be 1 or 2, got {d}"
            ))),
        }
    }

    pub fn degree(self) -> u8 {
        match self {
            CasimirOrder::Linear => 1,
            CasimirOrder::Quadratic => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FamilyKind {
    /// Fermionic bilinears built from true adjoints.
    Sigma,
    /// Fermionic u(1,4) generators.
    Xi,
    /// Bosonic bilinears built from true adjoints.
    Aleph,
    /// Bosonic u(1,4) generators.
    Upsilon,
}

/// Family `F[mu][nu]` of square operators of a common dimension.
#[derive(Debug, Clone)]
pub struct GeneratorFamily<M> {
    entries: Vec<M>,
    metric: MetricSignature,
    kind: FamilyKind,
}

impl<M: Operator> GeneratorFamily<M> {
    pub fn from_fn(
        kind: FamilyKind,
        metric: MetricSignature,
        mut f: impl FnMut(usize, usize) -> Result<M>,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(MODES * MODES);
        for mu in 0..MODES {
            for nu in 0..MODES {
                entries.push(f(mu, nu)?);
            }
        }
        let dim = entries[0].dim();
        if let Some(bad) = entries.iter().find(|m| m.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: (dim, dim),
                right: (bad.dim(), bad.dim()),
            });
        }
        Ok(Self {
            entries,
            metric,
            kind,
        })
    }

    #[inline]
    pub fn get(&self, mu: usize, nu: usize) -> &M {
        &self.entries[mu * MODES + nu]
    }

    pub fn dim(&self) -> usize {
        self.entries[0].dim()
    }

    pub fn metric(&self) -> &MetricSignature {
        &self.metric
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &M)> {
        self.entries
            .iter()
            .enumerate()
            .map(|(k, m)| ((k / MODES, k % MODES), m))
    }

    /// `sum eta_{mu nu} F[mu][nu]`.
    pub fn linear_casimir(&self) -> Result<M> {
        let mut acc = self.get(0, 0).scale_real(self.metric.eta(0));
        for mu in 1..MODES {
            acc = acc.add(&self.get(mu, mu).scale_real(self.metric.eta(mu)))?;
        }
        Ok(acc)
    }

    /// `sum eta eta F[mu][nu] F[partner(mu, nu)]` for the given pairing.
    pub fn quadratic_casimir(&self, pairing: &dyn Contraction) -> Result<M> {
        let mut acc: Option<M> = None;
        for mu in 0..MODES {
            for nu in 0..MODES {
                let (rho, sigma) = pairing.partner(mu, nu);
                let w = self.metric.eta(mu) * self.metric.eta(nu);
                let term = self.get(mu, nu).matmul(self.get(rho, sigma))?.scale_real(w);
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term)?,
                });
            }
        }
        Ok(acc.expect("non-empty family"))
    }

    /// Max residual of
    /// `[F^{mu nu}, F^{rho sigma}] = eta^{nu rho} F^{mu sigma} - eta^{mu sigma} F^{rho nu}`
    /// over all 625 quadruples, optionally measured
    /// only on a subset of basis columns.
    pub fn structure_residual(&self, columns: Option<&[usize]>) -> Result<StructureResidual> {
        let mut worst = StructureResidual::default();
        for mu in 0..MODES {
            for nu in 0..MODES {
                for rho in 0..MODES {
                    for sigma in 0..MODES {
                        let lhs = commutator(self.get(mu, nu), self.get(rho, sigma))?;
                        let rhs = self
                            .get(mu, sigma)
                            .scale_real(self.metric.entry(nu, rho))
                            .sub(&self.get(rho, nu).scale_real(self.metric.entry(mu, sigma)))?;
                        let r = match columns {
                            Some(cols) => lhs.max_abs_diff_on_columns(&rhs, cols)?,
                            None => lhs.max_abs_diff(&rhs)?,
                        };
                        if r > worst.max_residual {
                            worst = StructureResidual {
                                max_residual: r,
                                worst_index: [mu, nu, rho, sigma],
                            };
                        }
                    }
                }
            }
        }
        Ok(worst)
    }

    /// Largest `||[c, F_{mu nu}]||` over the family.
    pub fn centrality_residual(&self, c: &M, columns: Option<&[usize]>) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (_, g) in self.iter() {
            let lhs = c.matmul(g)?;
            let rhs = g.matmul(c)?;
            let r = match columns {
                Some(cols) => lhs.max_abs_diff_on_columns(&rhs, cols)?,
                None => lhs.max_abs_diff(&rhs)?,
            };
            worst = worst.max(r);
        }
        Ok(worst)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct StructureResidual {
    pub max_residual: f64,
    pub worst_index: [usize; 4],
}

/// Index pairing used by a quadratic contraction `eta eta F F`.
pub trait Contraction: Send + Sync {
    fn name(&self) -> &'static str;
    /// Index pair `(rho, sigma)` contracted against `(mu, nu)`.
    fn partner(&self, mu: usize, nu: usize) -> (usize, usize);
}

/// First index with first index: `eta_{mu rho} eta_{nu sigma} F^{mu nu} F^{rho sigma}`.
pub struct LiteralPairing;

/// Trace of the square: `eta_{mu sigma} eta_{nu rho} F^{mu nu} F^{rho sigma}`.
pub struct TransposedPairing;

impl Contraction for LiteralPairing {
    fn name(&self) -> &'static str {
        "literal"
    }
    fn partner(&self, mu: usize, nu: usize) -> (usize, usize) {
        (mu, nu)
    }
}

impl Contraction for TransposedPairing {
    fn name(&self) -> &'static str {
        "transposed"
    }
    fn partner(&self, mu: usize, nu: usize) -> (usize, usize) {
        (nu, mu)
    }
}

static CONTRACTIONS: [&dyn Contraction; 2] = [&LiteralPairing, &TransposedPairing];

pub fn contractions() -> &'static [&'static dyn Contraction] {
    &CONTRACTIONS
}

pub fn contraction_by_name(name: &str) -> Result<&'static dyn Contraction> {
    CONTRACTIONS
        .iter()
        .copied()
        .find(|c| c.name() == name)
        .ok_or_else(|| Error::UnknownName {
            kind: "pairing",
            name: name.to_string(),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        assert_eq!(
            contraction_by_name("literal").unwrap().partner(1, 3),
            (1, 3)
        );
        assert_eq!(
            contraction_by_name("transposed").unwrap().partner(1, 3),
            (3, 1)
        );
        assert!(contraction_by_name("diagonal").is_err());
        assert_eq!(contractions().len(), 2);
    }
}
