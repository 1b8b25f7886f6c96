//! Sign and contraction conventions carried by every representation.

use serde::Serialize;

use crate::algebra::MetricSignature;
use crate::error::{Error, Result};
use crate::family::{Contraction, LiteralPairing, TransposedPairing, MODES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    Literal,
    Transposed,
}

impl Pairing {
    pub const ALL: [Pairing; 2] = [Pairing::Literal, Pairing::Transposed];

    pub fn contraction(self) -> &'static dyn Contraction {
        match self {
            Pairing::Literal => &LiteralPairing,
            Pairing::Transposed => &TransposedPairing,
        }
    }

    pub fn name(self) -> &'static str {
        self.contraction().name()
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::UnknownName {
                kind: "pairing",
                name: name.to_string(),
            })
    }
}

/// Global sign pattern relating a metric-star operator to the true adjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SignPattern {
    /// `s_mu = eta_{mu mu}`.
    PlusEta,
    /// `s_mu = -eta_{mu mu}`.
    MinusEta,
}

impl SignPattern {
    pub const ALL: [SignPattern; 2] = [SignPattern::PlusEta, SignPattern::MinusEta];

    pub fn signs(self) -> [i8; MODES] {
        let eta = MetricSignature::spacetime();
        let flip = match self {
            SignPattern::PlusEta => 1,
            SignPattern::MinusEta => -1,
        };
        std::array::from_fn(|mu| flip * eta.diag()[mu])
    }

    pub fn label(self) -> &'static str {
        match self {
            SignPattern::PlusEta => "+eta",
            SignPattern::MinusEta => "-eta",
        }
    }

    pub fn from_signs(signs: &[i8; MODES]) -> Option<Self> {
        Self::ALL.into_iter().find(|p| &p.signs() == signs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ConventionRecord {
    pub zeta_star_sign: [i8; MODES],
    pub z_star_sign: [i8; MODES],
    pub fermionic_c2_pairing: Pairing,
    pub bosonic_c2_pairing: Pairing,
}

impl Default for ConventionRecord {
    fn default() -> Self {
        Self::from_patterns(
            SignPattern::PlusEta,
            SignPattern::PlusEta,
            Pairing::Literal,
            Pairing::Transposed,
        )
    }
}

impl ConventionRecord {
    pub fn from_patterns(
        zeta_star: SignPattern,
        z_star: SignPattern,
        fermionic: Pairing,
        bosonic: Pairing,
    ) -> Self {
        Self {
            zeta_star_sign: zeta_star.signs(),
            z_star_sign: z_star.signs(),
            fermionic_c2_pairing: fermionic,
            bosonic_c2_pairing: bosonic,
        }
    }

    /// Short one-line rendering used in report headers.
    pub fn summary(&self) -> String {
        let pat = |s: &[i8; MODES]| {
            SignPattern::from_signs(s)
                .map(|p| p.label().to_string())
                .unwrap_or_else(|| format!("{s:?}"))
        };
        format!(
            "zeta*={} z*={} fermionic_c2={} bosonic_c2={}",
            pat(&self.zeta_star_sign),
            pat(&self.z_star_sign),
            self.fermionic_c2_pairing.name(),
            self.bosonic_c2_pairing.name()
        )
    }

    pub(crate) fn validate_signs(&self) -> Result<()> {
        let ok = |s: &[i8; MODES]| s.iter().all(|&x| x == 1 || x == -1);
        if !ok(&self.zeta_star_sign) || !ok(&self.z_star_sign) {
            return Err(Error::Config("convention signs must be +1 or -1".into()));
        }
        Ok(())
    }
}
