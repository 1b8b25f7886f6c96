//! Boson (x) fermion product space and the hybrid operator `Zbar`.
//!
//! Hybrid index is `boson_index * 32 + fermion_index`. Operators are kept as
//! lazy Kronecker sums; the safe subspace is every fermionic state on top of
//! a safe bosonic state.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::Serialize;

use crate::algebra::{cr, to_rational, KronSum, SparseMatrix};
use crate::boson::{casimir_b, BosonFamily, BosonOccupation, BosonRep, TruncatedFockSpace};
use crate::conventions::ConventionRecord;
use crate::error::{Error, Result};
use crate::family::{CasimirOrder, MODES};
use crate::fermion::{casimir_f, FermionFamily, FermionOccupation, FermionRep, FERMION_DIM};

#[derive(Debug, Clone)]
pub struct HybridRep {
    boson: BosonRep,
    fermion: FermionRep,
    upsilon: BosonFamily,
    xi: FermionFamily,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZSquaredReport {
    /// `Zbar^2 - aleph - Sigma` on safe columns.
    pub residual: f64,
    pub vacuum_value: f64,
    pub single_boson_value: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub z_bar: f64,
    pub linear_casimir: f64,
    pub quadratic_casimir: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HybridSpectrumRow {
    pub n_total: usize,
    pub f_total: usize,
    pub c1: Rational64,
    pub c2: Rational64,
    pub degeneracy: usize,
}

impl HybridRep {
    pub fn new(boson: BosonRep, fermion: FermionRep) -> Result<Self> {
        if boson.convention() != fermion.convention() {
            return Err(Error::ConventionMismatch(format!(
                "boson sector [{}] vs fermion sector [{}]",
                boson.convention().summary(),
                fermion.convention().summary()
            )));
        }
        let upsilon = boson.upsilon()?;
        let xi = fermion.xi()?;
        Ok(Self {
            boson,
            fermion,
            upsilon,
            xi,
        })
    }

    pub fn build(cutoff: usize, safe_margin: usize, convention: &ConventionRecord) -> Result<Self> {
        let space = TruncatedFockSpace::new(cutoff, safe_margin)?;
        Self::new(
            BosonRep::new(space, convention)?,
            FermionRep::new(convention)?,
        )
    }

    pub fn boson(&self) -> &BosonRep {
        &self.boson
    }
    pub fn fermion(&self) -> &FermionRep {
        &self.fermion
    }
    pub fn convention(&self) -> &ConventionRecord {
        self.fermion.convention()
    }
    pub fn dim(&self) -> usize {
        self.boson.dim() * FERMION_DIM
    }

    pub fn index(&self, n: &BosonOccupation, f: &FermionOccupation) -> Result<usize> {
        Ok(self.boson.space().index(n)? * FERMION_DIM + f.index())
    }

    fn level(&self, hybrid_index: usize) -> usize {
        let n = self.boson.space().occupation(hybrid_index / FERMION_DIM);
        n.total() + FermionOccupation::from_index(hybrid_index % FERMION_DIM).total()
    }

    fn projector(&self, keep: impl Fn(&BosonOccupation) -> bool) -> SparseMatrix {
        let s = self.boson.space();
        let diag: Vec<_> = s
            .states()
            .map(|(_, n)| cr(if keep(&n) { 1.0 } else { 0.0 }))
            .collect();
        SparseMatrix::from_diag(&diag)
    }

    /// Projector onto the hybrid safe subspace.
    pub fn safe_projector(&self) -> SparseMatrix {
        let s = *self.boson.space();
        self.projector(move |n| s.is_safe(n))
    }

    pub fn lift_boson(&self, a: &SparseMatrix) -> Result<KronSum> {
        KronSum::lift_left(a, FERMION_DIM)
    }

    pub fn lift_fermion(&self, f: &crate::algebra::ComplexMatrix) -> Result<KronSum> {
        KronSum::lift_right(self.boson.dim(), f)
    }

    /// `(1/sqrt 2) sum eta_{mu mu} [p_mu (x) alpha^mu + x_mu (x) beta^mu]`.
    pub fn z_bar_clifford(&self) -> Result<KronSum> {
        let eta = self.fermion.metric();
        let mut z = KronSum::zeros(self.boson.dim(), FERMION_DIM);
        for mu in 0..MODES {
            let w = eta.eta(mu) * std::f64::consts::FRAC_1_SQRT_2;
            z = z
                .add(&KronSum::term(
                    self.boson.p_bar(mu).clone(),
                    self.fermion.alpha(mu).scale_real(w),
                )?)?
                .add(&KronSum::term(
                    self.boson.x_bar(mu).clone(),
                    self.fermion.beta(mu).scale_real(w),
                )?)?;
        }
        Ok(z)
    }

    /// `sum eta_{mu mu} [z*_mu (x) zeta^mu + z_mu (x) zeta^mu*]`.
    pub fn z_bar(&self) -> Result<KronSum> {
        let eta = self.fermion.metric();
        let mut z = KronSum::zeros(self.boson.dim(), FERMION_DIM);
        for mu in 0..MODES {
            let w = eta.eta(mu);
            z = z
                .add(&KronSum::term(
                    self.boson.z_star(mu).clone(),
                    self.fermion.zeta(mu).scale_real(w),
                )?)?
                .add(&KronSum::term(
                    self.boson.z(mu).clone(),
                    self.fermion.zeta_star(mu).scale_real(w),
                )?)?;
        }
        Ok(z)
    }

    pub fn route_residual(&self) -> Result<f64> {
        self.z_bar()?.max_abs_diff(&self.z_bar_clifford()?)
    }

    /// Nonzero entries of the image of the hybrid vacuum.
    pub fn vacuum_image(&self, op: &KronSum) -> Vec<(usize, f64)> {
        let p = self.projector(|n| n.total() == 0);
        let mut out = Vec::new();
        if let Ok(restricted) = op.project_left_columns(&p) {
            restricted.for_each_nonzero(|r, c, v| {
                if c == 0 {
                    out.push((r, v.norm()));
                }
            });
        }
        out
    }

    /// `Zbar - Zbar^dagger` on safe columns.
    pub fn hermiticity_residual(&self, z: &KronSum) -> Result<f64> {
        z.sub(&z.dagger())?
            .project_left_columns(&self.safe_projector())
            .map(|d| d.max_abs())
    }

    /// Largest entry of `op` on safe columns connecting different values of
    /// `|n| + |f|`.
    pub fn level_mixing(&self, op: &KronSum) -> Result<f64> {
        let mut worst: f64 = 0.0;
        op.project_left_columns(&self.safe_projector())?
            .for_each_nonzero(|r, c, v| {
                if self.level(r) != self.level(c) {
                    worst = worst.max(v.norm());
                }
            });
        Ok(worst)
    }

    /// `kron(aleph, I) + kron(I, Sigma)`.
    pub fn total_occupation(&self) -> Result<KronSum> {
        self.lift_boson(&self.boson.total_number()?)?
            .add(&self.lift_fermion(&self.fermion.total_number()?)?)
    }

    pub fn check_z_squared(&self, z: &KronSum) -> Result<ZSquaredReport> {
        let sq = z.matmul(z)?;
        let diff = sq.sub(&self.total_occupation()?)?;
        let residual = diff.project_left_columns(&self.safe_projector())?.max_abs();
        let e0 = self.index(
            &BosonOccupation::new([1, 0, 0, 0, 0]),
            &FermionOccupation::from_index(0),
        )?;
        Ok(ZSquaredReport {
            residual,
            vacuum_value: sq.entry(0, 0).re,
            single_boson_value: sq.entry(e0, e0).re,
        })
    }

    pub fn casimir_hybrid(&self, order: CasimirOrder) -> Result<KronSum> {
        let conv = self.convention();
        let b = casimir_b(&self.upsilon, order, conv)?;
        let f = casimir_f(&self.xi, order, conv)?;
        self.lift_boson(&b)?.add(&self.lift_fermion(&f)?)
    }

    /// `kron(Upsilon_{mu nu}, I) + kron(I, Xi^{mu nu})`.
    pub fn lifted_generator(&self, mu: usize, nu: usize) -> Result<KronSum> {
        self.lift_boson(self.upsilon.get(mu, nu))?
            .add(&self.lift_fermion(self.xi.get(mu, nu))?)
    }

    /// Largest commutator of `Zbar` and both hybrid Casimirs with the 25
    /// lifted generators, on safe columns.
    pub fn invariance(&self) -> Result<InvarianceReport> {
        let p = self.safe_projector();
        let z = self.z_bar()?;
        let c1 = self.casimir_hybrid(CasimirOrder::Linear)?;
        let c2 = self.casimir_hybrid(CasimirOrder::Quadratic)?;
        let mut out = InvarianceReport::default();
        for mu in 0..MODES {
            for nu in 0..MODES {
                let g = self.lifted_generator(mu, nu)?;
                let r = |a: &KronSum| -> Result<f64> {
                    Ok(a.commutator(&g)?.project_left_columns(&p)?.max_abs())
                };
                out.z_bar = out.z_bar.max(r(&z)?);
                out.linear_casimir = out.linear_casimir.max(r(&c1)?);
                out.quadratic_casimir = out.quadratic_casimir.max(r(&c2)?);
            }
        }
        Ok(out)
    }

    /// Eigenvalue table over `(|n|, |f|)` with `|n| + |f| <= max_total`, read
    /// from the diagonal of both Casimirs on safe states.
    pub fn spectrum_table(&self, max_total: usize, tol: f64) -> Result<Vec<HybridSpectrumRow>> {
        let space = *self.boson.space();
        let p = self.projector(move |n| space.is_safe(n) && n.total() <= max_total);
        let c1 = self
            .casimir_hybrid(CasimirOrder::Linear)?
            .project_left_columns(&p)?;
        let c2 = self
            .casimir_hybrid(CasimirOrder::Quadratic)?
            .project_left_columns(&p)?;
        let read = |op: &KronSum| -> Result<BTreeMap<usize, f64>> {
            let mut diag = BTreeMap::new();
            let mut off: f64 = 0.0;
            op.for_each_nonzero(|r, c, v| {
                if r == c {
                    diag.insert(c, v.re);
                    off = off.max(v.im.abs());
                } else {
                    off = off.max(v.norm());
                }
            });
            if off > tol {
                return Err(Error::OffDiagonalResidual(off));
            }
            Ok(diag)
        };
        let d1 = read(&c1)?;
        let d2 = read(&c2)?;

        let mut groups: BTreeMap<(usize, usize), (Vec<f64>, Vec<f64>)> = BTreeMap::new();
        for (bi, n) in space.safe_states_up_to(max_total) {
            for f in FermionOccupation::all() {
                if n.total() + f.total() > max_total {
                    continue;
                }
                let h = bi * FERMION_DIM + f.index();
                let g = groups.entry((n.total(), f.total())).or_default();
                g.0.push(d1.get(&h).copied().unwrap_or(0.0));
                g.1.push(d2.get(&h).copied().unwrap_or(0.0));
            }
        }
        groups
            .into_iter()
            .map(|((n_total, f_total), (v1, v2))| {
                let common = |v: &[f64]| -> Result<Rational64> {
                    let spread = v.iter().map(|x| (x - v[0]).abs()).fold(0.0, f64::max);
                    if spread > tol {
                        return Err(Error::OffDiagonalResidual(spread));
                    }
                    to_rational(v[0], 12, tol)
                };
                Ok(HybridSpectrumRow {
                    n_total,
                    f_total,
                    c1: common(&v1)?,
                    c2: common(&v2)?,
                    degeneracy: v1.len(),
                })
            })
            .collect()
    }
}
