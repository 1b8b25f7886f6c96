//! 32-dimensional fermionic (spin) representation.
//!
//! Basis states `|f0 f1 f2 f3 f4>` are indexed by `sum_mu f^mu 2^mu`, so mode 0
//! is the least significant bit. Creation operators carry a Jordan-Wigner
//! string over the lower modes, which makes
//! `|f> = (zeta^0+)^f0 (zeta^1+)^f1 ... (zeta^4+)^f4 |0>` hold with sign +1.

use num_rational::Rational64;
use serde::Serialize;

use crate::algebra::{
    anticommutator, commutator, cr, to_rational, ComplexMatrix, MetricSignature, Operator, I,
};
use crate::conventions::ConventionRecord;
use crate::error::{Error, Result};
use crate::family::{CasimirOrder, FamilyKind, GeneratorFamily, MODES};

pub const FERMION_DIM: usize = 1 << MODES;

pub type FermionFamily = GeneratorFamily<ComplexMatrix>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FermionOccupation {
    bits: [u8; MODES],
}

impl FermionOccupation {
    pub fn new(bits: [u8; MODES]) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Config(format!(
                "fermionic occupation {bits:?} is not binary"
            )));
        }
        Ok(Self { bits })
    }

    pub fn from_index(index: usize) -> Self {
        assert!(
            index < FERMION_DIM,
            "fermionic basis index {index} out of range"
        );
        Self {
            bits: std::array::from_fn(|mu| ((index >> mu) & 1) as u8),
        }
    }

    pub fn index(&self) -> usize {
        self.bits
            .iter()
            .enumerate()
            .map(|(mu, &b)| (b as usize) << mu)
            .sum()
    }

    pub fn bits(&self) -> [u8; MODES] {
        self.bits
    }

    pub fn bit(&self, mu: usize) -> u8 {
        self.bits[mu]
    }

    pub fn total(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    /// All 32 states in basis-index order.
    pub fn all() -> impl Iterator<Item = Self> {
        (0..FERMION_DIM).map(Self::from_index)
    }
}

/// Single-mode Jordan-Wigner factors.
fn sigma_plus() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]])
}

fn parity() -> ComplexMatrix {
    ComplexMatrix::from_real_diag(&[1.0, -1.0])
}

/// Annihilation and creation operators without any metric convention.
#[derive(Debug, Clone)]
pub struct FermionLadders {
    pub zeta: [ComplexMatrix; MODES],
    pub zeta_dagger: [ComplexMatrix; MODES],
}

/// `zeta^mu+ = I^(4-mu) (x) sigma+ (x) Z^mu` in kron order, where the right
/// factor holds the lower (faster) modes.
pub fn build_fermionic_ladders() -> FermionLadders {
    let zeta_dagger: [ComplexMatrix; MODES] = std::array::from_fn(|mu| {
        let mut string = ComplexMatrix::identity(1);
        for _ in 0..mu {
            string = parity().kron(&string).expect("small kron");
        }
        let upper = ComplexMatrix::identity(1 << (MODES - 1 - mu));
        upper
            .kron(&sigma_plus().kron(&string).expect("small kron"))
            .expect("small kron")
    });
    let zeta = std::array::from_fn(|mu| zeta_dagger[mu].dagger());
    FermionLadders { zeta, zeta_dagger }
}

/// `zeta^mu* = s_mu zeta^mu+`.
pub fn build_zeta_star(ladders: &FermionLadders, signs: &[i8; MODES]) -> [ComplexMatrix; MODES] {
    std::array::from_fn(|mu| ladders.zeta_dagger[mu].scale_real(f64::from(signs[mu])))
}

/// `alpha = zeta + zeta*`, `beta = -i (zeta - zeta*)`.
pub fn build_alpha_beta(
    zeta: &[ComplexMatrix; MODES],
    zeta_star: &[ComplexMatrix; MODES],
) -> ([ComplexMatrix; MODES], [ComplexMatrix; MODES]) {
    let alpha = std::array::from_fn(|mu| zeta[mu].add(&zeta_star[mu]).expect("same dim"));
    let beta = std::array::from_fn(|mu| zeta[mu].sub(&zeta_star[mu]).expect("same dim").scale(-I));
    (alpha, beta)
}

#[derive(Debug, Clone)]
pub struct FermionRep {
    zeta: [ComplexMatrix; MODES],
    zeta_dagger: [ComplexMatrix; MODES],
    zeta_star: [ComplexMatrix; MODES],
    alpha: [ComplexMatrix; MODES],
    beta: [ComplexMatrix; MODES],
    metric: MetricSignature,
    convention: ConventionRecord,
}

impl FermionRep {
    pub fn new(convention: &ConventionRecord) -> Result<Self> {
        convention.validate_signs()?;
        let ladders = build_fermionic_ladders();
        let zeta_star = build_zeta_star(&ladders, &convention.zeta_star_sign);
        let (alpha, beta) = build_alpha_beta(&ladders.zeta, &zeta_star);
        Ok(Self {
            zeta: ladders.zeta,
            zeta_dagger: ladders.zeta_dagger,
            zeta_star,
            alpha,
            beta,
            metric: MetricSignature::spacetime(),
            convention: *convention,
        })
    }

    pub fn zeta(&self, mu: usize) -> &ComplexMatrix {
        &self.zeta[mu]
    }
    pub fn zeta_dagger(&self, mu: usize) -> &ComplexMatrix {
        &self.zeta_dagger[mu]
    }
    pub fn zeta_star(&self, mu: usize) -> &ComplexMatrix {
        &self.zeta_star[mu]
    }
    pub fn alpha(&self, mu: usize) -> &ComplexMatrix {
        &self.alpha[mu]
    }
    pub fn beta(&self, mu: usize) -> &ComplexMatrix {
        &self.beta[mu]
    }
    pub fn metric(&self) -> &MetricSignature {
        &self.metric
    }
    pub fn convention(&self) -> &ConventionRecord {
        &self.convention
    }

    /// `Sigma^{mu nu} = zeta^mu+ zeta^nu`.
    pub fn sigma(&self) -> Result<FermionFamily> {
        GeneratorFamily::from_fn(FamilyKind::Sigma, self.metric.clone(), |mu, nu| {
            self.zeta_dagger[mu].matmul(&self.zeta[nu])
        })
    }

    /// Total number operator `Sigma = sum_mu Sigma^{mu mu}`.
    pub fn total_number(&self) -> Result<ComplexMatrix> {
        let mut acc = ComplexMatrix::zeros(FERMION_DIM, FERMION_DIM);
        for mu in 0..MODES {
            acc = acc.add(&self.zeta_dagger[mu].matmul(&self.zeta[mu])?)?;
        }
        Ok(acc)
    }

    /// `Xi^{mu nu} = zeta^mu* zeta^nu - eta^{mu nu}/2`.
    pub fn xi(&self) -> Result<FermionFamily> {
        let id = ComplexMatrix::identity(FERMION_DIM);
        GeneratorFamily::from_fn(FamilyKind::Xi, self.metric.clone(), |mu, nu| {
            self.zeta_star[mu]
                .matmul(&self.zeta[nu])?
                .sub(&id.scale_real(0.5 * self.metric.entry(mu, nu)))
        })
    }

    /// Residuals of the ladder anticommutators in their true-adjoint form
    /// (`{zeta, zeta} = 0`, `{zeta+, zeta+} = 0`, `{zeta+, zeta} = delta`) and
    /// metric form (`{zeta*, zeta*} = 0`, `{zeta*, zeta} = eta`).
    pub fn anticommutator_residuals(&self) -> Result<LadderResiduals> {
        let id = ComplexMatrix::identity(FERMION_DIM);
        let zero = ComplexMatrix::zeros(FERMION_DIM, FERMION_DIM);
        let mut out = LadderResiduals::default();
        for mu in 0..MODES {
            for nu in 0..MODES {
                let delta = if mu == nu { id.clone() } else { zero.clone() };
                let eta = id.scale_real(self.metric.entry(mu, nu));
                let zz = anticommutator(&self.zeta[mu], &self.zeta[nu])?.max_abs();
                let dd = anticommutator(&self.zeta_dagger[mu], &self.zeta_dagger[nu])?.max_abs();
                let dz =
                    anticommutator(&self.zeta_dagger[mu], &self.zeta[nu])?.max_abs_diff(&delta)?;
                let ss = anticommutator(&self.zeta_star[mu], &self.zeta_star[nu])?.max_abs();
                let sz = anticommutator(&self.zeta_star[mu], &self.zeta[nu])?.max_abs_diff(&eta)?;
                out.adjoint_form = out.adjoint_form.max(zz).max(dd).max(dz);
                out.metric_form = out.metric_form.max(zz).max(ss).max(sz);
            }
        }
        Ok(out)
    }

    /// `{g_a, g_b} = 2 G_ab` over all 100 ordered pairs of the ten generators
    /// `(alpha^0..alpha^4, beta^0..beta^4)` with `G = diag(eta, eta)`.
    pub fn clifford_residual(&self) -> Result<f64> {
        let gens: Vec<&ComplexMatrix> = self.alpha.iter().chain(self.beta.iter()).collect();
        let form = |a: usize, b: usize| -> f64 {
            if a == b {
                self.metric.eta(a % MODES)
            } else {
                0.0
            }
        };
        let id = ComplexMatrix::identity(FERMION_DIM);
        let mut worst: f64 = 0.0;
        for a in 0..gens.len() {
            for b in 0..gens.len() {
                let ac = anticommutator(gens[a], gens[b])?;
                worst = worst.max(ac.max_abs_diff(&id.scale_real(2.0 * form(a, b)))?);
            }
        }
        Ok(worst)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct LadderResiduals {
    pub adjoint_form: f64,
    pub metric_form: f64,
}

/// Fermionic Casimir of the given order built from the `Xi` family.
pub fn casimir_f(
    xi: &FermionFamily,
    order: CasimirOrder,
    convention: &ConventionRecord,
) -> Result<ComplexMatrix> {
    match order {
        CasimirOrder::Linear => xi.linear_casimir(),
        CasimirOrder::Quadratic => {
            xi.quadratic_casimir(convention.fermionic_c2_pairing.contraction())
        }
    }
}

/// Coefficients `(c, d)` with `Xi^{mu nu} = c Sigma^{mu nu} + d I`, read off
/// from the constructed matrices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XiSigmaEntry {
    pub mu: usize,
    pub nu: usize,
    pub sigma_coeff: f64,
    pub identity_coeff: f64,
    pub residual: f64,
}

pub fn xi_sigma_map(xi: &FermionFamily, sigma: &FermionFamily) -> Result<Vec<XiSigmaEntry>> {
    let id = ComplexMatrix::identity(FERMION_DIM);
    let mut out = Vec::with_capacity(MODES * MODES);
    for ((mu, nu), x) in xi.iter() {
        let s = sigma.get(mu, nu);
        // Sigma annihilates the vacuum, so the vacuum entry is d; any entry
        // where Sigma is nonzero then fixes c.
        let identity_coeff = x.get(0, 0).re;
        let (r, c) = (0..FERMION_DIM * FERMION_DIM)
            .map(|k| (k / FERMION_DIM, k % FERMION_DIM))
            .find(|&(r, c)| s.get(r, c).norm() > 0.5)
            .expect("Sigma^{mu nu} is nonzero");
        let shift = if r == c { identity_coeff } else { 0.0 };
        let sigma_coeff = ((x.get(r, c) - shift) / s.get(r, c)).re;
        let rest = x.sub(&s.scale_real(sigma_coeff))?;
        let residual = rest.max_abs_diff(&id.scale_real(identity_coeff))?;
        out.push(XiSigmaEntry {
            mu,
            nu,
            sigma_coeff,
            identity_coeff,
            residual,
        });
    }
    Ok(out)
}

/// Exact charges stored as integer multiples of 1/6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ChargeAssignment {
    pub i3_sixths: i64,
    pub yw_sixths: i64,
    pub q_sixths: i64,
}

impl ChargeAssignment {
    pub fn is_neutral(&self) -> bool {
        self.i3_sixths == 0 && self.yw_sixths == 0 && self.q_sixths == 0
    }

    pub fn i3(&self) -> Rational64 {
        Rational64::new(self.i3_sixths, 6)
    }
    pub fn yw(&self) -> Rational64 {
        Rational64::new(self.yw_sixths, 6)
    }
    pub fn q(&self) -> Rational64 {
        Rational64::new(self.q_sixths, 6)
    }
}

/// Weak isospin `(f0 + f4)/2 - 1/2`, hypercharge
/// `f0 - 2/3 (f1 + f2 + f3) - f4 + 1`, and `Q = I3 + Y/2`.
pub fn charges(f: &FermionOccupation) -> ChargeAssignment {
    let b = f.bits().map(i64::from);
    let i3_sixths = 3 * (b[0] + b[4]) - 3;
    let yw_sixths = 6 * b[0] - 4 * (b[1] + b[2] + b[3]) - 6 * b[4] + 6;
    debug_assert_eq!(yw_sixths % 2, 0);
    ChargeAssignment {
        i3_sixths,
        yw_sixths,
        q_sixths: i3_sixths + yw_sixths / 2,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationRow {
    pub occupation: [u8; MODES],
    pub ftotal: usize,
    pub c_f1_num: i64,
    pub c_f1_den: i64,
    pub charges: ChargeAssignment,
    pub sterile: bool,
}

/// One row per basis state in index order; the linear Casimir eigenvalue is
/// read from the constructed operator.
pub fn classify_states() -> Result<Vec<ClassificationRow>> {
    let rep = FermionRep::new(&ConventionRecord::default())?;
    let c1 = rep.xi()?.linear_casimir()?;
    FermionOccupation::all()
        .map(|f| {
            let i = f.index();
            let off = c1.max_off_diagonal_in_columns(&[i]);
            if off > 1e-12 {
                return Err(Error::OffDiagonalResidual(off));
            }
            let ev = to_rational(c1.get(i, i).re, 4, 1e-12)?;
            let ch = charges(&f);
            Ok(ClassificationRow {
                occupation: f.bits(),
                ftotal: f.total(),
                c_f1_num: *ev.numer(),
                c_f1_den: *ev.denom(),
                charges: ch,
                sterile: ch.is_neutral(),
            })
        })
        .collect()
}

/// Member of the traceless part: `T^{mu nu} = Xi^{mu nu} - eta^{mu nu} C / 5`
/// together with its coefficients over the `Xi` basis.
#[derive(Debug, Clone)]
pub struct TracelessMember {
    pub index: (usize, usize),
    pub coefficients: [[f64; MODES]; MODES],
    pub operator: ComplexMatrix,
}

impl TracelessMember {
    /// `eta_{rho sigma} c_{rho sigma}`.
    pub fn eta_trace(&self, metric: &MetricSignature) -> f64 {
        (0..MODES)
            .map(|r| metric.eta(r) * self.coefficients[r][r])
            .sum()
    }
}

#[derive(Debug, Clone)]
pub struct SplitReport {
    pub central: ComplexMatrix,
    pub traceless: Vec<TracelessMember>,
    pub central_residual: f64,
    pub trace_residual: f64,
    pub closure_residual: f64,
}

/// Splits the `Xi` family into the central linear Casimir and 24 traceless
/// combinations (all `(mu, nu)` except `(0, 0)`, which is their sum), then
/// measures centrality and closure of the traceless span under commutators.
pub fn u1_su14_split(xi: &FermionFamily) -> Result<SplitReport> {
    let metric = xi.metric().clone();
    let central = xi.linear_casimir()?;
    let central_residual = xi.centrality_residual(&central, None)?;

    let mut traceless = Vec::with_capacity(24);
    for ((mu, nu), x) in xi.iter() {
        if (mu, nu) == (0, 0) {
            continue;
        }
        let w = metric.entry(mu, nu) / MODES as f64;
        let operator = x.sub(&central.scale_real(w))?;
        let mut coefficients = [[0.0; MODES]; MODES];
        coefficients[mu][nu] += 1.0;
        for r in 0..MODES {
            coefficients[r][r] -= w * metric.eta(r);
        }
        traceless.push(TracelessMember {
            index: (mu, nu),
            coefficients,
            operator,
        });
    }
    let trace_residual = traceless
        .iter()
        .map(|t| t.eta_trace(&metric).abs())
        .fold(0.0, f64::max);

    let n = traceless.len();
    let gram = ComplexMatrix::from_fn(n, n, |a, b| {
        traceless[a]
            .operator
            .frobenius_inner(&traceless[b].operator)
            .expect("same dim")
    });
    let mut closure_residual: f64 = 0.0;
    for a in 0..n {
        for b in (a + 1)..n {
            let comm = commutator(&traceless[a].operator, &traceless[b].operator)?;
            let rhs = ComplexMatrix::from_fn(n, 1, |k, _| {
                traceless[k]
                    .operator
                    .frobenius_inner(&comm)
                    .expect("same dim")
            });
            let coef = gram.solve(&rhs)?;
            let mut proj = ComplexMatrix::zeros(FERMION_DIM, FERMION_DIM);
            for k in 0..n {
                proj.axpy(coef.get(k, 0), &traceless[k].operator)?;
            }
            closure_residual = closure_residual.max(comm.max_abs_diff(&proj)?);
        }
    }
    Ok(SplitReport {
        central,
        traceless,
        central_residual,
        trace_residual,
        closure_residual,
    })
}

/// Column vector of a fermionic basis state.
pub fn basis_vector(f: &FermionOccupation) -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(FERMION_DIM, 1);
    v.set(f.index(), 0, cr(1.0));
    v
}
