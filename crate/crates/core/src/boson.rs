//! Truncated five-mode bosonic Fock representation.
//!
//! Basis index is mixed-radix `sum_mu n_mu (cutoff+1)^mu` with mode 0 least
//! significant. Ladder identities involving a commutator only hold on the
//! safe subspace `max_mu n_mu <= cutoff - safe_margin`, so checks compare
//! operators column by column on those states.

use serde::Serialize;

use crate::algebra::{
    commutator, cr, diagonal_spectrum, ComplexMatrix, MetricSignature, Operator, SparseMatrix, I,
};
use crate::conventions::ConventionRecord;
use crate::error::{Error, Result};
use crate::family::{CasimirOrder, FamilyKind, GeneratorFamily, MODES};

pub const DEFAULT_CUTOFF: usize = 3;
pub const DEFAULT_SAFE_MARGIN: usize = 2;

pub type BosonFamily = GeneratorFamily<SparseMatrix>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BosonOccupation {
    n: [usize; MODES],
}

impl BosonOccupation {
    pub fn new(n: [usize; MODES]) -> Self {
        Self { n }
    }

    pub fn modes(&self) -> [usize; MODES] {
        self.n
    }

    pub fn get(&self, mu: usize) -> usize {
        self.n[mu]
    }

    pub fn total(&self) -> usize {
        self.n.iter().sum()
    }

    pub fn max_mode(&self) -> usize {
        self.n.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TruncatedFockSpace {
    cutoff: usize,
    safe_margin: usize,
}

impl TruncatedFockSpace {
    pub fn new(cutoff: usize, safe_margin: usize) -> Result<Self> {
        if cutoff < 2 || safe_margin > cutoff {
            return Err(Error::CutoffTooSmall {
                cutoff,
                safe_margin,
            });
        }
        let dim = (cutoff + 1).checked_pow(MODES as u32);
        match dim {
            Some(d) if d <= crate::algebra::DEFAULT_MAX_SPARSE_DIM => Ok(Self {
                cutoff,
                safe_margin,
            }),
            _ => Err(Error::SizeOverflow {
                requested: dim.unwrap_or(usize::MAX),
                limit: crate::algebra::DEFAULT_MAX_SPARSE_DIM,
            }),
        }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn safe_margin(&self) -> usize {
        self.safe_margin
    }

    /// Largest per-mode occupation inside the safe subspace.
    pub fn safe_max(&self) -> usize {
        self.cutoff - self.safe_margin
    }

    pub fn radix(&self) -> usize {
        self.cutoff + 1
    }

    pub fn dim(&self) -> usize {
        self.radix().pow(MODES as u32)
    }

    pub fn index(&self, n: &BosonOccupation) -> Result<usize> {
        if n.max_mode() > self.cutoff {
            return Err(Error::OccupationExceedsCutoff {
                occupation: n.modes(),
                cutoff: self.cutoff,
            });
        }
        Ok(n.modes()
            .iter()
            .rev()
            .fold(0, |acc, &m| acc * self.radix() + m))
    }

    pub fn occupation(&self, index: usize) -> BosonOccupation {
        let d = self.radix();
        BosonOccupation::new(std::array::from_fn(|mu| (index / d.pow(mu as u32)) % d))
    }

    pub fn states(&self) -> impl Iterator<Item = (usize, BosonOccupation)> + '_ {
        (0..self.dim()).map(|i| (i, self.occupation(i)))
    }

    pub fn is_safe(&self, n: &BosonOccupation) -> bool {
        n.max_mode() <= self.safe_max()
    }

    pub fn safe_columns(&self) -> Vec<usize> {
        self.states()
            .filter(|(_, n)| self.is_safe(n))
            .map(|(i, _)| i)
            .collect()
    }

    /// Safe states with total occupation at most `max_total`.
    pub fn safe_states_up_to(&self, max_total: usize) -> Vec<(usize, BosonOccupation)> {
        self.states()
            .filter(|(_, n)| self.is_safe(n) && n.total() <= max_total)
            .collect()
    }
}

/// Single-mode annihilator on `{0..cutoff}`.
fn single_mode_annihilator(cutoff: usize) -> SparseMatrix {
    let d = cutoff + 1;
    SparseMatrix::from_triplets(d, d, (1..d).map(|n| (n - 1, n, cr((n as f64).sqrt()))))
}

#[derive(Debug, Clone)]
pub struct BosonLadders {
    pub z: [SparseMatrix; MODES],
    pub z_dagger: [SparseMatrix; MODES],
}

/// `z_mu = I_(d^(4-mu)) (x) a (x) I_(d^mu)` in kron order.
pub fn build_bosonic_ladders(space: &TruncatedFockSpace) -> Result<BosonLadders> {
    let d = space.radix();
    let a = single_mode_annihilator(space.cutoff());
    let mut z = Vec::with_capacity(MODES);
    for mu in 0..MODES {
        let upper = SparseMatrix::identity(d.pow((MODES - 1 - mu) as u32));
        let lower = SparseMatrix::identity(d.pow(mu as u32));
        z.push(upper.kron(&a.kron(&lower)?)?);
    }
    let z: [SparseMatrix; MODES] = z.try_into().expect("five modes");
    let z_dagger = std::array::from_fn(|mu| z[mu].dagger());
    Ok(BosonLadders { z, z_dagger })
}

/// `z*_mu = s_mu z+_mu`.
pub fn build_z_star(ladders: &BosonLadders, signs: &[i8; MODES]) -> [SparseMatrix; MODES] {
    std::array::from_fn(|mu| ladders.z_dagger[mu].scale_real(f64::from(signs[mu])))
}

/// `p = (z + z*)/sqrt 2`, `x = (z - z*)/(i sqrt 2)`.
pub fn build_reduced_px(
    z: &[SparseMatrix; MODES],
    z_star: &[SparseMatrix; MODES],
) -> ([SparseMatrix; MODES], [SparseMatrix; MODES]) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let p = std::array::from_fn(|mu| z[mu].add(&z_star[mu]).expect("same dim").scale_real(s));
    let x = std::array::from_fn(|mu| z[mu].sub(&z_star[mu]).expect("same dim").scale(-I * s));
    (p, x)
}

#[derive(Debug, Clone)]
pub struct BosonRep {
    space: TruncatedFockSpace,
    z: [SparseMatrix; MODES],
    z_dagger: [SparseMatrix; MODES],
    z_star: [SparseMatrix; MODES],
    p_bar: [SparseMatrix; MODES],
    x_bar: [SparseMatrix; MODES],
    metric: MetricSignature,
    convention: ConventionRecord,
    safe_columns: Vec<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct BosonCommutatorResiduals {
    /// `[z, z] = 0` and `[z+, z+] = 0` on the full space.
    pub annihilators_commute: f64,
    /// `[z_mu, z+_nu] = delta` on safe columns.
    pub adjoint_form: f64,
    /// `[z*_mu, z_nu] = -eta_{mu nu}` on safe columns.
    pub metric_form: f64,
    /// `[z*_mu, z_nu] = +eta_{mu nu}` on safe columns.
    pub metric_form_plus: f64,
}

impl BosonRep {
    pub fn new(space: TruncatedFockSpace, convention: &ConventionRecord) -> Result<Self> {
        convention.validate_signs()?;
        let ladders = build_bosonic_ladders(&space)?;
        let z_star = build_z_star(&ladders, &convention.z_star_sign);
        let (p_bar, x_bar) = build_reduced_px(&ladders.z, &z_star);
        Ok(Self {
            space,
            z: ladders.z,
            z_dagger: ladders.z_dagger,
            z_star,
            p_bar,
            x_bar,
            metric: MetricSignature::spacetime(),
            convention: *convention,
            safe_columns: space.safe_columns(),
        })
    }

    pub fn with_defaults() -> Result<Self> {
        Self::new(
            TruncatedFockSpace::new(DEFAULT_CUTOFF, DEFAULT_SAFE_MARGIN)?,
            &ConventionRecord::default(),
        )
    }

    pub fn space(&self) -> &TruncatedFockSpace {
        &self.space
    }
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
    pub fn safe_columns(&self) -> &[usize] {
        &self.safe_columns
    }
    pub fn z(&self, mu: usize) -> &SparseMatrix {
        &self.z[mu]
    }
    pub fn z_dagger(&self, mu: usize) -> &SparseMatrix {
        &self.z_dagger[mu]
    }
    pub fn z_star(&self, mu: usize) -> &SparseMatrix {
        &self.z_star[mu]
    }
    pub fn p_bar(&self, mu: usize) -> &SparseMatrix {
        &self.p_bar[mu]
    }
    pub fn x_bar(&self, mu: usize) -> &SparseMatrix {
        &self.x_bar[mu]
    }
    pub fn metric(&self) -> &MetricSignature {
        &self.metric
    }
    pub fn convention(&self) -> &ConventionRecord {
        &self.convention
    }

    /// `aleph_{mu nu} = z+_mu z_nu`.
    pub fn aleph(&self) -> Result<BosonFamily> {
        GeneratorFamily::from_fn(FamilyKind::Aleph, self.metric.clone(), |mu, nu| {
            self.z_dagger[mu].matmul(&self.z[nu])
        })
    }

    /// Total number operator.
    pub fn total_number(&self) -> Result<SparseMatrix> {
        let aleph = self.aleph()?;
        let mut acc = aleph.get(0, 0).clone();
        for mu in 1..MODES {
            acc = acc.add(aleph.get(mu, mu))?;
        }
        Ok(acc)
    }

    /// `Upsilon_{mu nu} = (z*_mu z_nu + z_nu z*_mu) / 2`.
    pub fn upsilon(&self) -> Result<BosonFamily> {
        GeneratorFamily::from_fn(FamilyKind::Upsilon, self.metric.clone(), |mu, nu| {
            Ok(self.z_star[mu]
                .matmul(&self.z[nu])?
                .add(&self.z[nu].matmul(&self.z_star[mu])?)?
                .scale_real(0.5))
        })
    }

    pub fn commutator_residuals(&self) -> Result<BosonCommutatorResiduals> {
        let dim = self.dim();
        let id = SparseMatrix::identity(dim);
        let zero = SparseMatrix::zeros(dim, dim);
        let cols = &self.safe_columns;
        let mut out = BosonCommutatorResiduals::default();
        for mu in 0..MODES {
            for nu in 0..MODES {
                let zz = commutator(&self.z[mu], &self.z[nu])?.max_abs();
                let dd = commutator(&self.z_dagger[mu], &self.z_dagger[nu])?.max_abs();
                out.annihilators_commute = out.annihilators_commute.max(zz).max(dd);
                let delta = if mu == nu { id.clone() } else { zero.clone() };
                let eta = id.scale_real(self.metric.entry(mu, nu));
                let zd = commutator(&self.z[mu], &self.z_dagger[nu])?;
                out.adjoint_form = out
                    .adjoint_form
                    .max(zd.max_abs_diff_on_columns(&delta, cols)?);
                let sz = commutator(&self.z_star[mu], &self.z[nu])?;
                out.metric_form = out
                    .metric_form
                    .max(sz.max_abs_diff_on_columns(&eta.scale_real(-1.0), cols)?);
                out.metric_form_plus = out
                    .metric_form_plus
                    .max(sz.max_abs_diff_on_columns(&eta, cols)?);
            }
        }
        Ok(out)
    }

    /// Largest deviation of `(p + i x)/sqrt 2` from `z`.
    pub fn px_reconstruction_residual(&self) -> Result<f64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut worst: f64 = 0.0;
        for mu in 0..MODES {
            let back = self.p_bar[mu].add(&self.x_bar[mu].scale(I))?.scale_real(s);
            worst = worst.max(back.max_abs_diff(&self.z[mu])?);
        }
        Ok(worst)
    }

    fn basis_column(&self, n: &BosonOccupation) -> Result<ComplexMatrix> {
        let mut basis = ComplexMatrix::zeros(self.dim(), 1);
        basis.set(self.space.index(n)?, 0, cr(1.0));
        Ok(basis)
    }

    /// Distance between `prod (z+_mu)^{n_mu} / sqrt(n_mu!) |0>` and the basis
    /// vector of `n`.
    pub fn state_residual(&self, n: &BosonOccupation) -> Result<f64> {
        let basis = self.basis_column(n)?;
        let mut v = ComplexMatrix::zeros(self.dim(), 1);
        v.set(0, 0, cr(1.0));
        for mu in 0..MODES {
            for k in 1..=n.get(mu) {
                v = self.z_dagger[mu]
                    .mul_dense(&v)?
                    .scale_real(1.0 / (k as f64).sqrt());
            }
        }
        v.max_abs_diff(&basis)
    }

    /// Normalized basis vector of `n`, cross-checked against the product of
    /// creation operators on the vacuum.
    pub fn bosonic_state(&self, n: &BosonOccupation, tol: f64) -> Result<ComplexMatrix> {
        let basis = self.basis_column(n)?;
        let r = self.state_residual(n)?;
        if r > tol {
            return Err(Error::ExpNonConvergence(format!(
                "product-of-ladders state {:?} deviates from basis vector by {r:e}",
                n.modes()
            )));
        }
        Ok(basis)
    }
}

/// Bosonic Casimir of the given order built from the `Upsilon` family.
pub fn casimir_b(
    upsilon: &BosonFamily,
    order: CasimirOrder,
    convention: &ConventionRecord,
) -> Result<SparseMatrix> {
    match order {
        CasimirOrder::Linear => upsilon.linear_casimir(),
        CasimirOrder::Quadratic => {
            upsilon.quadratic_casimir(convention.bosonic_c2_pairing.contraction())
        }
    }
}

/// `aleph^2 + 5 aleph + 5/4`.
pub fn quadratic_number_polynomial(number: &SparseMatrix) -> Result<SparseMatrix> {
    let id = SparseMatrix::identity(number.rows());
    number
        .matmul(number)?
        .add(&number.scale_real(5.0))?
        .add(&id.scale_real(1.25))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiteralB2Diagnostic {
    /// `(occupation, diagonal entry)` on safe states with `N <= 1`.
    pub low_diagonal: Vec<([usize; MODES], f64)>,
    /// Largest off-diagonal modulus over the whole truncated space.
    pub max_off_diagonal: f64,
    /// Largest `[C, Upsilon_{mu nu}]` entry on safe columns.
    pub max_commutator: f64,
}

/// First-with-first contraction of the bosonic family, kept as a diagnostic.
pub fn casimir_b2_literal(rep: &BosonRep, upsilon: &BosonFamily) -> Result<LiteralB2Diagnostic> {
    let c = upsilon.quadratic_casimir(crate::conventions::Pairing::Literal.contraction())?;
    let low_diagonal = rep
        .space()
        .safe_states_up_to(1)
        .into_iter()
        .map(|(i, n)| (n.modes(), c.get(i, i).re))
        .collect();
    Ok(LiteralB2Diagnostic {
        low_diagonal,
        max_off_diagonal: c.max_off_diagonal(),
        max_commutator: upsilon.centrality_residual(&c, Some(rep.safe_columns()))?,
    })
}

/// Diagonal entries of `op` on safe states with `N <= max_total`, grouped by
/// total occupation.
pub fn boson_spectrum(
    rep: &BosonRep,
    op: &SparseMatrix,
    max_total: usize,
    tol: f64,
) -> Result<Vec<(BosonOccupation, f64)>> {
    let basis: Vec<(usize, BosonOccupation)> = rep.space().safe_states_up_to(max_total);
    diagonal_spectrum(op, &basis, tol)
}

/// Number of ways to write `total` as an ordered sum of five parts each at
/// most `max_part`.
pub fn bounded_compositions(total: usize, max_part: usize) -> usize {
    let mut ways = vec![0usize; total + 1];
    ways[0] = 1;
    for _ in 0..MODES {
        let mut next = vec![0usize; total + 1];
        for (t, &w) in ways.iter().enumerate() {
            for part in 0..=max_part.min(total - t) {
                next[t + part] += w;
            }
        }
        ways = next;
    }
    ways[total]
}
