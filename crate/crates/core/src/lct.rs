//! Matrix-level u(1,4) / U(1,4) layer: sampling, exponentiation, the real
//! block embedding, and covariance of both Fock representations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{
    commutator, exp_action, matrix_exponential, Complex64, ComplexMatrix, MetricSignature,
    Operator, SparseMatrix, I,
};
use crate::boson::{BosonFamily, BosonRep};
use crate::error::{Error, Result};
use crate::family::MODES;
use crate::fermion::{FermionFamily, FermionRep, FERMION_DIM};

fn eta_matrix() -> ComplexMatrix {
    MetricSignature::spacetime().to_matrix()
}

/// Element `a` of the Lie algebra: `a+ eta + eta a = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    a: ComplexMatrix,
}

impl AlgebraElement {
    pub fn new(a: ComplexMatrix, tol: f64) -> Result<Self> {
        if a.rows() != MODES || a.cols() != MODES {
            return Err(Error::BadShape {
                rows: a.rows(),
                cols: a.cols(),
                len: MODES * MODES,
            });
        }
        let r = antihermiticity_residual(&a)?;
        if r > tol {
            return Err(Error::Config(format!(
                "matrix is not eta-antihermitian (residual {r:e})"
            )));
        }
        Ok(Self { a })
    }

    pub fn zero() -> Self {
        Self {
            a: ComplexMatrix::zeros(MODES, MODES),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn residual(&self) -> f64 {
        antihermiticity_residual(&self.a).expect("5x5")
    }

    /// Coefficients `theta^{mu nu} = eta_{mu mu} a_{nu mu}` of the Fock
    /// generator `G = theta^{mu nu} F_{mu nu}` whose conjugation reproduces
    /// the matrix action of `exp(a)`.
    pub fn generator_coefficients(&self) -> [[Complex64; MODES]; MODES] {
        let eta = MetricSignature::spacetime();
        std::array::from_fn(|mu| std::array::from_fn(|nu| self.a.get(nu, mu) * eta.eta(mu)))
    }
}

pub fn antihermiticity_residual(a: &ComplexMatrix) -> Result<f64> {
    let eta = eta_matrix();
    Ok(a.dagger().matmul(&eta)?.add(&eta.matmul(a)?)?.max_abs())
}

/// `a = i eta h` with `h` Hermitian and entries uniform in `[-1, 1]`, rescaled
/// so that the largest entry has modulus `scale`.
pub fn random_algebra_element(seed: u64, scale: f64) -> Result<AlgebraElement> {
    if !(scale >= 0.0 && scale.is_finite()) {
        return Err(Error::Config(format!(
            "scale must be finite and nonnegative, got {scale}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = ComplexMatrix::zeros(MODES, MODES);
    for mu in 0..MODES {
        h.set(mu, mu, Complex64::new(rng.gen_range(-1.0..=1.0), 0.0));
        for nu in (mu + 1)..MODES {
            let v = Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
            h.set(mu, nu, v);
            h.set(nu, mu, v.conj());
        }
    }
    let a = eta_matrix().matmul(&h)?.scale(I);
    let m = a.max_abs();
    let a = if m == 0.0 || scale == 0.0 {
        ComplexMatrix::zeros(MODES, MODES)
    } else {
        a.scale_real(scale / m)
    };
    Ok(AlgebraElement { a })
}

/// `m` with `m+ eta m = eta`.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoUnitaryElement {
    m: ComplexMatrix,
}

impl PseudoUnitaryElement {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn residual(&self) -> f64 {
        pseudo_unitarity_residual(&self.m).expect("5x5")
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            m: self.m.matmul(&other.m)?,
        })
    }
}

pub fn pseudo_unitarity_residual(m: &ComplexMatrix) -> Result<f64> {
    let eta = eta_matrix();
    m.dagger().matmul(&eta)?.matmul(m)?.max_abs_diff(&eta)
}

pub fn exponentiate_to_group(a: &AlgebraElement, tol: f64) -> Result<PseudoUnitaryElement> {
    let m = matrix_exponential(&a.a)?;
    let r = pseudo_unitarity_residual(&m)?;
    if r > tol {
        return Err(Error::ExpNonConvergence(format!(
            "exponential left the group (residual {r:e})"
        )));
    }
    Ok(PseudoUnitaryElement { m })
}

/// Real 10x10 matrix `[[Pi, -Theta], [Theta, Pi]]` with `m = Pi - i Theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticBlockElement {
    s: ComplexMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockResiduals {
    pub symplectic: f64,
    pub pseudo_orthogonal: f64,
}

impl SymplecticBlockElement {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.s
    }

    pub fn residuals(&self) -> Result<BlockResiduals> {
        let st = self.s.transpose();
        Ok(BlockResiduals {
            symplectic: st
                .matmul(&omega())?
                .matmul(&self.s)?
                .max_abs_diff(&omega())?,
            pseudo_orthogonal: st
                .matmul(&phase_metric())?
                .matmul(&self.s)?
                .max_abs_diff(&phase_metric())?,
        })
    }
}

fn blocks(
    tl: &ComplexMatrix,
    tr: &ComplexMatrix,
    bl: &ComplexMatrix,
    br: &ComplexMatrix,
) -> ComplexMatrix {
    let n = tl.rows();
    ComplexMatrix::from_fn(2 * n, 2 * n, |r, c| match (r < n, c < n) {
        (true, true) => tl.get(r, c),
        (true, false) => tr.get(r, c - n),
        (false, true) => bl.get(r - n, c),
        (false, false) => br.get(r - n, c - n),
    })
}

/// `[[0, eta], [-eta, 0]]`, the CCR form with hbar = 1.
pub fn omega() -> ComplexMatrix {
    let eta = eta_matrix();
    let zero = ComplexMatrix::zeros(MODES, MODES);
    blocks(&zero, &eta, &eta.scale_real(-1.0), &zero)
}

/// `diag(eta, eta)`.
pub fn phase_metric() -> ComplexMatrix {
    let eta = eta_matrix();
    let zero = ComplexMatrix::zeros(MODES, MODES);
    blocks(&eta, &zero, &zero, &eta)
}

pub fn to_symplectic_block(m: &PseudoUnitaryElement) -> SymplecticBlockElement {
    let pi = m.m.real_part();
    let theta = m.m.imag_part().scale_real(-1.0);
    SymplecticBlockElement {
        s: blocks(&pi, &theta.scale_real(-1.0), &theta, &pi),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub passed: bool,
    pub residual: f64,
}

/// Whether `[[A, C], [B, D]]` preserves the CCR form.
pub fn ccr_preservation_check(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    d: &ComplexMatrix,
    tol: f64,
) -> Result<CheckOutcome> {
    for blk in [a, b, c, d] {
        if blk.rows() != MODES || blk.cols() != MODES {
            return Err(Error::BadShape {
                rows: blk.rows(),
                cols: blk.cols(),
                len: MODES * MODES,
            });
        }
    }
    let m = blocks(a, c, b, d);
    let residual = m
        .transpose()
        .matmul(&omega())?
        .matmul(&m)?
        .max_abs_diff(&omega())?;
    Ok(CheckOutcome {
        passed: residual <= tol,
        residual,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceFactorization {
    pub assembled: ComplexMatrix,
    pub p_block: ComplexMatrix,
    pub rho_block: ComplexMatrix,
    pub x_block: ComplexMatrix,
    /// `||K - K^T||`.
    pub symmetry_residual: f64,
    /// Distance of `K` from `[[P, rho], [rho^T, X]]` built from the closed-form blocks.
    pub pattern_residual: f64,
}

/// `F^T diag(eta, eta) F` with `F = [[b, 0], [2acb, a]]`.
pub fn covariance_factorization_check(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
) -> Result<CovarianceFactorization> {
    let eta = eta_matrix();
    let zero = ComplexMatrix::zeros(MODES, MODES);
    let acb = a.matmul(c)?.matmul(b)?;
    let f = blocks(b, &zero, &acb.scale_real(2.0), a);
    let assembled = f.transpose().matmul(&phase_metric())?.matmul(&f)?;
    let acbt = acb.transpose();
    let p_block = b
        .transpose()
        .matmul(&eta)?
        .matmul(b)?
        .add(&acbt.matmul(&eta)?.matmul(&acb)?.scale_real(4.0))?;
    let rho_block = acbt.matmul(&eta)?.matmul(a)?.scale_real(2.0);
    let x_block = a.transpose().matmul(&eta)?.matmul(a)?;
    let pattern = blocks(&p_block, &rho_block, &rho_block.transpose(), &x_block);
    Ok(CovarianceFactorization {
        symmetry_residual: assembled.max_abs_diff(&assembled.transpose())?,
        pattern_residual: assembled.max_abs_diff(&pattern)?,
        assembled,
        p_block,
        rho_block,
        x_block,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceReport {
    /// Algebra level, over all 125 triples.
    pub algebra_residual: f64,
    /// Group level, conjugation by `exp(G)` against the matrix action.
    pub group_residual: f64,
}

/// Checks `[F_{mu nu}, ladder_rho] = -eta_{mu rho} ladder_nu` and
/// `exp(-G) ladder_rho exp(G) = sum_mu ladder_mu m_{mu rho}`.
pub fn bosonic_covariance_check(
    a: &AlgebraElement,
    boson: &BosonRep,
    upsilon: &BosonFamily,
    columns: &[usize],
) -> Result<CovarianceReport> {
    let eta = boson.metric();
    let mut algebra_residual: f64 = 0.0;
    for mu in 0..MODES {
        for nu in 0..MODES {
            for rho in 0..MODES {
                let lhs = commutator(upsilon.get(mu, nu), boson.z(rho))?;
                let rhs = boson.z(nu).scale_real(-eta.entry(mu, rho));
                algebra_residual =
                    algebra_residual.max(lhs.max_abs_diff_on_columns(&rhs, columns)?);
            }
        }
    }

    let theta = a.generator_coefficients();
    let mut g = SparseMatrix::zeros(boson.dim(), boson.dim());
    for mu in 0..MODES {
        for nu in 0..MODES {
            if theta[mu][nu] != Complex64::new(0.0, 0.0) {
                g = g.add(&upsilon.get(mu, nu).scale(theta[mu][nu]))?;
            }
        }
    }
    let neg_g = g.scale_real(-1.0);
    let m = matrix_exponential(a.matrix())?;
    let basis = ComplexMatrix::from_fn(boson.dim(), columns.len(), |r, j| {
        Complex64::new(if r == columns[j] { 1.0 } else { 0.0 }, 0.0)
    });
    let forward = exp_action(&g, &basis)?;
    let mut group_residual: f64 = 0.0;
    for rho in 0..MODES {
        let lhs = exp_action(&neg_g, &boson.z(rho).mul_dense(&forward)?)?;
        let mut rhs = ComplexMatrix::zeros(boson.dim(), columns.len());
        for mu in 0..MODES {
            rhs.axpy(m.get(mu, rho), &boson.z(mu).mul_dense(&basis)?)?;
        }
        group_residual = group_residual.max(lhs.max_abs_diff(&rhs)?);
    }
    Ok(CovarianceReport {
        algebra_residual,
        group_residual,
    })
}

/// Safe states with `N <= cutoff - 1`. `exp(G)` keeps `N` fixed, so these
/// sectors never reach the truncation boundary and conjugation is exact there.
pub fn conjugation_columns(boson: &BosonRep) -> Vec<usize> {
    let max_total = boson.space().cutoff() - 1;
    boson
        .space()
        .safe_states_up_to(max_total)
        .into_iter()
        .map(|(i, _)| i)
        .collect()
}

pub fn fermionic_covariance_check(
    a: &AlgebraElement,
    fermion: &FermionRep,
    xi: &FermionFamily,
) -> Result<CovarianceReport> {
    let eta = fermion.metric();
    let mut algebra_residual: f64 = 0.0;
    for mu in 0..MODES {
        for nu in 0..MODES {
            for rho in 0..MODES {
                let lhs = commutator(xi.get(mu, nu), fermion.zeta(rho))?;
                let rhs = fermion.zeta(nu).scale_real(-eta.entry(mu, rho));
                algebra_residual = algebra_residual.max(lhs.max_abs_diff(&rhs)?);
            }
        }
    }
    let theta = a.generator_coefficients();
    let mut g = ComplexMatrix::zeros(FERMION_DIM, FERMION_DIM);
    for mu in 0..MODES {
        for nu in 0..MODES {
            g.axpy(theta[mu][nu], xi.get(mu, nu))?;
        }
    }
    let s = matrix_exponential(&g)?;
    let s_inv = matrix_exponential(&g.scale_real(-1.0))?;
    let m = matrix_exponential(a.matrix())?;
    let mut group_residual: f64 = 0.0;
    for rho in 0..MODES {
        let lhs = s_inv.matmul(fermion.zeta(rho))?.matmul(&s)?;
        let mut rhs = ComplexMatrix::zeros(FERMION_DIM, FERMION_DIM);
        for mu in 0..MODES {
            rhs.axpy(m.get(mu, rho), fermion.zeta(mu))?;
        }
        group_residual = group_residual.max(lhs.max_abs_diff(&rhs)?);
    }
    Ok(CovarianceReport {
        algebra_residual,
        group_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoubleCoverReport {
    /// `||S(2 pi) + I||`.
    pub minus_identity: f64,
    /// `max_mu ||S(2 pi) zeta^mu S(2 pi)^-1 - zeta^mu||`.
    pub trivial_conjugation: f64,
    /// `||S(4 pi) - I||`.
    pub full_turn: f64,
}

/// `S(theta) = exp(i theta C)` for the linear fermionic Casimir `C`.
pub fn double_cover_witness(fermion: &FermionRep) -> Result<DoubleCoverReport> {
    let c = fermion.xi()?.linear_casimir()?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let s = |theta: f64| matrix_exponential(&c.scale(I * theta));
    let s2 = s(two_pi)?;
    let s2_inv = s(-two_pi)?;
    let s4 = s(2.0 * two_pi)?;
    let id = ComplexMatrix::identity(FERMION_DIM);
    let mut trivial_conjugation: f64 = 0.0;
    for mu in 0..MODES {
        let conj = s2.matmul(fermion.zeta(mu))?.matmul(&s2_inv)?;
        trivial_conjugation = trivial_conjugation.max(conj.max_abs_diff(fermion.zeta(mu))?);
    }
    Ok(DoubleCoverReport {
        minus_identity: s2.add(&id)?.max_abs(),
        trivial_conjugation,
        full_turn: s4.max_abs_diff(&id)?,
    })
}
