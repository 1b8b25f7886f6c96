//! End-to-end acceptance run. Each criterion prints one PASS/FAIL line; the
//! test fails if any criterion does. Oracles are computed here from first
//! principles wherever the library result could otherwise check itself.

use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::Rational64;
use qps_casimir::algebra::{
    anticommutator, commutator, matrix_exponential, Complex64, ComplexMatrix, MetricSignature,
    Operator, SparseMatrix,
};
use qps_casimir::boson::{casimir_b, BosonRep, TruncatedFockSpace};
use qps_casimir::conventions::ConventionRecord;
use qps_casimir::family::{CasimirOrder, MODES};
use qps_casimir::fermion::{
    casimir_f, classify_states, FermionOccupation, FermionRep, FERMION_DIM,
};
use qps_casimir::hybrid::HybridRep;
use qps_casimir::lct::{
    bosonic_covariance_check, conjugation_columns, double_cover_witness, exponentiate_to_group,
    fermionic_covariance_check, omega, phase_metric, random_algebra_element, to_symplectic_block,
    AlgebraElement,
};
use qps_casimir::sweep::resolve_conventions;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn eta() -> MetricSignature {
    MetricSignature::spacetime()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn boson_rep() -> BosonRep {
    BosonRep::new(
        TruncatedFockSpace::new(3, 2).unwrap(),
        &ConventionRecord::default(),
    )
    .unwrap()
}

fn max_off_and_diag<M: Operator>(
    op: &M,
    cols: &[usize],
    expect: impl Fn(usize) -> f64,
) -> (f64, f64) {
    let off = op.max_off_diagonal_in_columns(cols);
    let diag = cols
        .iter()
        .map(|&i| (op.entry(i, i) - Complex64::new(expect(i), 0.0)).norm())
        .fold(0.0, f64::max);
    (off, diag)
}

fn c1_clifford() -> Outcome {
    let start = Instant::now();
    let rep = FermionRep::new(&ConventionRecord::default()).unwrap();
    let gens: Vec<&ComplexMatrix> = (0..MODES)
        .map(|m| rep.alpha(m))
        .chain((0..MODES).map(|m| rep.beta(m)))
        .collect();
    let id = ComplexMatrix::identity(FERMION_DIM);
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for a in 0..10 {
        for b in 0..10 {
            let g = if a == b {
                2.0 * eta().eta(a % MODES)
            } else {
                0.0
            };
            let r = anticommutator(gens[a], gens[b])
                .unwrap()
                .max_abs_diff(&id.scale_real(g))
                .unwrap();
            worst = worst.max(r);
            pairs += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        pairs == 100 && worst <= 1e-12 && elapsed < Duration::from_secs(1),
        format!("{pairs} pairs, max residual {worst:e}, {elapsed:?}"),
    )
}

fn c2_linear_fermionic() -> Outcome {
    let rep = FermionRep::new(&ConventionRecord::default()).unwrap();
    let xi = rep.xi().unwrap();
    let mut c = ComplexMatrix::zeros(FERMION_DIM, FERMION_DIM);
    for mu in 0..MODES {
        c = c.add(&xi.get(mu, mu).scale_real(eta().eta(mu))).unwrap();
    }
    let lib = casimir_f(&xi, CasimirOrder::Linear, &ConventionRecord::default()).unwrap();
    let all: Vec<usize> = (0..FERMION_DIM).collect();
    let (off, _) = max_off_and_diag(&c, &all, |_| 0.0);
    let mut counts = [0usize; 6];
    let mut exact = true;
    for f in FermionOccupation::all() {
        let v = c.get(f.index(), f.index()).re;
        let k = ((v + 2.5).round()) as i64;
        exact &= (v - (k as f64 - 2.5)).abs() <= 1e-12 && k == f.total() as i64;
        if (0..=5).contains(&k) {
            counts[k as usize] += 1;
        }
    }
    let want: Vec<usize> = (0..=5).map(|k| binomial(5, k)).collect();
    let agree = lib.max_abs_diff(&c).unwrap();
    outcome(
        exact && counts.to_vec() == want && off <= 1e-12 && agree <= 1e-12,
        format!("multiplicities {counts:?}, off-diagonal {off:e}, library agreement {agree:e}"),
    )
}

fn c3_quadratic_fermionic() -> Outcome {
    let rep = FermionRep::new(&ConventionRecord::default()).unwrap();
    let xi = rep.xi().unwrap();
    let g = eta();
    let mut c = ComplexMatrix::zeros(FERMION_DIM, FERMION_DIM);
    for mu in 0..MODES {
        for nu in 0..MODES {
            let w = g.eta(mu) * g.eta(nu);
            c = c
                .add(&xi.get(mu, nu).matmul(xi.get(mu, nu)).unwrap().scale_real(w))
                .unwrap();
        }
    }
    let target = ComplexMatrix::identity(FERMION_DIM).scale_real(1.25);
    let r = c.max_abs_diff(&target).unwrap();
    let lib = casimir_f(&xi, CasimirOrder::Quadratic, &ConventionRecord::default()).unwrap();
    let comm = xi
        .iter()
        .map(|(_, x)| commutator(&lib, x).unwrap().max_abs())
        .fold(0.0, f64::max);
    let agree = lib.max_abs_diff(&c).unwrap();
    outcome(
        r <= 1e-12 && comm <= 1e-12 && agree <= 1e-12,
        format!("||C - 5/4 I|| {r:e}, max commutator over 25 generators {comm:e}"),
    )
}

fn c4_xi_structure() -> Outcome {
    let rep = FermionRep::new(&ConventionRecord::default()).unwrap();
    let xi = rep.xi().unwrap();
    let g = eta();
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for mu in 0..MODES {
        for nu in 0..MODES {
            for rho in 0..MODES {
                for sigma in 0..MODES {
                    let lhs = commutator(xi.get(mu, nu), xi.get(rho, sigma)).unwrap();
                    let rhs = xi
                        .get(mu, sigma)
                        .scale_real(g.entry(nu, rho))
                        .sub(&xi.get(rho, nu).scale_real(g.entry(mu, sigma)))
                        .unwrap();
                    worst = worst.max(lhs.max_abs_diff(&rhs).unwrap());
                    n += 1;
                }
            }
        }
    }
    outcome(
        n == 625 && worst <= 1e-12,
        format!("{n} quadruples, max residual {worst:e}"),
    )
}

fn c5_bosonic_spectra() -> Outcome {
    let rep = boson_rep();
    let space = *rep.space();
    let ups = rep.upsilon().unwrap();
    let g = eta();
    let safe: Vec<usize> = space
        .states()
        .filter(|(_, n)| n.max_mode() <= 1)
        .map(|(i, _)| i)
        .collect();
    let total = |i: usize| space.occupation(i).total() as f64;
    let mut c1 = SparseMatrix::zeros(space.dim(), space.dim());
    let mut c2 = SparseMatrix::zeros(space.dim(), space.dim());
    for mu in 0..MODES {
        c1 = c1.add(&ups.get(mu, mu).scale_real(g.eta(mu))).unwrap();
        for nu in 0..MODES {
            let t = ups.get(mu, nu).matmul(ups.get(nu, mu)).unwrap();
            c2 = c2.add(&t.scale_real(g.eta(mu) * g.eta(nu))).unwrap();
        }
    }
    let (o1, d1) = max_off_and_diag(&c1, &safe, |i| total(i) + 2.5);
    let (o2, d2) = max_off_and_diag(&c2, &safe, |i| {
        let n = total(i);
        n * n + 5.0 * n + 1.25
    });
    // N^2 + 5N + 5/4 built from the occupation labels alone
    let poly = SparseMatrix::from_diag(
        &(0..space.dim())
            .map(|i| {
                let n = total(i);
                Complex64::new(n * n + 5.0 * n + 1.25, 0.0)
            })
            .collect::<Vec<_>>(),
    );
    let ident = c2.max_abs_diff_on_columns(&poly, &safe).unwrap();
    let conv = ConventionRecord::default();
    let lib1 = casimir_b(&ups, CasimirOrder::Linear, &conv).unwrap();
    let lib2 = casimir_b(&ups, CasimirOrder::Quadratic, &conv).unwrap();
    let agree = lib1
        .max_abs_diff_on_columns(&c1, &safe)
        .unwrap()
        .max(lib2.max_abs_diff_on_columns(&c2, &safe).unwrap());
    let mut levels = [0usize; MODES + 1];
    for &i in &safe {
        levels[total(i) as usize] += 1;
    }
    let want: Vec<usize> = (0..=MODES).map(|k| binomial(MODES, k)).collect();
    let worst = o1.max(d1).max(o2).max(d2).max(ident).max(agree);
    outcome(
        worst <= 1e-10 && levels.to_vec() == want,
        format!(
            "{} safe states, multiplicities by N {levels:?}, C1 {:e}, C2 {:e}, operator identity {ident:e}",
            safe.len(),
            o1.max(d1),
            o2.max(d2)
        ),
    )
}

fn c6_literal_contraction() -> Outcome {
    let rep = boson_rep();
    let space = *rep.space();
    let ups = rep.upsilon().unwrap();
    let g = eta();
    // all 625 terms eta_{mu rho} eta_{nu sigma} U_{mu nu} U_{rho sigma}
    let mut lit = SparseMatrix::zeros(space.dim(), space.dim());
    let mut terms = 0;
    for mu in 0..MODES {
        for nu in 0..MODES {
            for rho in 0..MODES {
                for sigma in 0..MODES {
                    terms += 1;
                    let w = g.entry(mu, rho) * g.entry(nu, sigma);
                    if w != 0.0 {
                        let t = ups.get(mu, nu).matmul(ups.get(rho, sigma)).unwrap();
                        lit = lit.add(&t.scale_real(w)).unwrap();
                    }
                }
            }
        }
    }
    let shipped = casimir_b(&ups, CasimirOrder::Quadratic, &ConventionRecord::default()).unwrap();
    let ones: Vec<usize> = space
        .states()
        .filter(|(_, n)| n.total() == 1)
        .map(|(i, _)| i)
        .collect();
    let lit_dev = ones
        .iter()
        .map(|&i| (lit.get(i, i).re - 3.25).abs())
        .fold(0.0, f64::max);
    let ship_dev = ones
        .iter()
        .map(|&i| (shipped.get(i, i).re - 7.25).abs())
        .fold(0.0, f64::max);
    let off = lit.max_off_diagonal();
    outcome(
        terms == 625 && ones.len() == 5 && lit_dev <= 1e-12 && ship_dev <= 1e-10 && off > 1e-6,
        format!(
            "N=1 literal diagonal 13/4 within {lit_dev:e}, shipped 29/4 within {ship_dev:e}, literal off-diagonal mass {off:e}"
        ),
    )
}

fn c7_hybrid() -> Outcome {
    let h = HybridRep::build(3, 2, &ConventionRecord::default()).unwrap();
    let space = *h.boson().space();
    let level = |row: usize| {
        let (b, f) = (row / FERMION_DIM, row % FERMION_DIM);
        space.occupation(b).total() + FermionOccupation::from_index(f).total()
    };
    let z = h.z_bar().unwrap();
    let sq = z
        .matmul(&z)
        .unwrap()
        .project_left_columns(&h.safe_projector())
        .unwrap();
    let mut zres: f64 = 0.0;
    let mut seen = std::collections::HashSet::new();
    sq.for_each_nonzero(|r, c, v| {
        let want = if r == c { level(c) as f64 } else { 0.0 };
        zres = zres.max((v - Complex64::new(want, 0.0)).norm());
        if r == c {
            seen.insert(c);
        }
    });
    // diagonal zeros are not stored; only the hybrid vacuum has level 0
    for b in space.safe_columns() {
        for f in 0..FERMION_DIM {
            let c = b * FERMION_DIM + f;
            if !seen.contains(&c) && level(c) != 0 {
                zres = f64::INFINITY;
            }
        }
    }

    let low: Vec<usize> = space
        .safe_states_up_to(1)
        .into_iter()
        .map(|(i, _)| i)
        .collect();
    let p = SparseMatrix::from_diag(
        &(0..space.dim())
            .map(|i| Complex64::new(if low.contains(&i) { 1.0 } else { 0.0 }, 0.0))
            .collect::<Vec<_>>(),
    );
    let mut eres: f64 = 0.0;
    for (order, f) in [
        (
            CasimirOrder::Linear,
            Box::new(|n: f64, k: f64| n + k) as Box<dyn Fn(f64, f64) -> f64>,
        ),
        (
            CasimirOrder::Quadratic,
            Box::new(|n: f64, _| n * (n + 5.0) + 2.5),
        ),
    ] {
        let c = h
            .casimir_hybrid(order)
            .unwrap()
            .project_left_columns(&p)
            .unwrap();
        c.for_each_nonzero(|r, col, v| {
            if r != col {
                eres = eres.max(v.norm());
            }
        });
        for &b in &low {
            let n = space.occupation(b).total() as f64;
            for fo in FermionOccupation::all() {
                let i = b * FERMION_DIM + fo.index();
                let want = f(n, fo.total() as f64);
                eres = eres.max((c.entry(i, i) - Complex64::new(want, 0.0)).norm());
            }
        }
    }
    let rows = h.spectrum_table(2, 1e-10).unwrap();
    let r11 = rows.iter().find(|r| (r.n_total, r.f_total) == (1, 1));
    let r11_ok = r11.is_some_and(|r| {
        r.c1 == Rational64::from(2) && r.c2 == Rational64::new(17, 2) && r.degeneracy == 25
    });
    outcome(
        zres <= 1e-10 && eres <= 1e-10 && r11_ok,
        format!(
            "Z^2 - (N + |f|) on safe columns {zres:e}, Casimir eigenvalues for |n| <= 1 {eres:e}, (1,1) row ok {r11_ok}"
        ),
    )
}

fn c8_charges() -> Outcome {
    let third = Rational64::new(1, 3);
    let half = Rational64::new(1, 2);
    let one = Rational64::from(1);
    let mut neutral = Vec::new();
    let mut mismatches = 0;
    let rows = classify_states().unwrap();
    let again = classify_states().unwrap();
    for f in 0..32u32 {
        let b: Vec<Rational64> = (0..5)
            .map(|m| Rational64::from(((f >> m) & 1) as i64))
            .collect();
        let i3 = half * (b[0] + b[4]) - half;
        let yw = b[0] - Rational64::from(2) * third * (b[1] + b[2] + b[3]) - b[4] + one;
        let q = i3 + yw / Rational64::from(2);
        let bits: [u8; 5] = std::array::from_fn(|m| ((f >> m) & 1) as u8);
        if i3 == Rational64::from(0) && yw == Rational64::from(0) && q == Rational64::from(0) {
            neutral.push(bits);
        }
        match rows.iter().find(|r| r.occupation == bits) {
            Some(r) => {
                let ch = r.charges;
                if (ch.i3(), ch.yw(), ch.q()) != (i3, yw, q) || r.sterile != neutral.contains(&bits)
                {
                    mismatches += 1;
                }
            }
            None => mismatches += 1,
        }
    }
    let expected = vec![[1, 1, 1, 1, 0], [0, 0, 0, 0, 1]];
    let mut sorted = neutral.clone();
    sorted.sort();
    sorted.reverse();
    let identical = rows == again;
    outcome(
        sorted == expected && mismatches == 0 && identical && rows.iter().filter(|r| r.sterile).count() == 2,
        format!("neutral states {neutral:?}, mismatches vs oracle {mismatches}, repeat identical {identical}"),
    )
}

/// `[[Re m, Im m], [-Im m, Re m]]`.
fn oracle_block(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(2 * MODES, 2 * MODES, |r, c| {
        let v = m.get(r % MODES, c % MODES);
        let x = match (r < MODES, c < MODES) {
            (true, true) | (false, false) => v.re,
            (true, false) => v.im,
            (false, true) => -v.im,
        };
        Complex64::new(x, 0.0)
    })
}

fn c9_group() -> Outcome {
    let eta_m = eta().to_matrix();
    let mut unit: f64 = 0.0;
    let mut sympl: f64 = 0.0;
    let mut orth: f64 = 0.0;
    let mut embed: f64 = 0.0;
    let om = omega();
    let gm = phase_metric();
    for seed in 0..100 {
        let a = random_algebra_element(seed, 1.0).unwrap();
        let m = exponentiate_to_group(&a, 1e-9).unwrap();
        let mm = m.matrix();
        unit = unit.max(
            mm.dagger()
                .matmul(&eta_m)
                .unwrap()
                .matmul(mm)
                .unwrap()
                .max_abs_diff(&eta_m)
                .unwrap(),
        );
        let s = oracle_block(mm);
        embed = embed.max(s.max_abs_diff(to_symplectic_block(&m).matrix()).unwrap());
        sympl = sympl.max(
            s.transpose()
                .matmul(&om)
                .unwrap()
                .matmul(&s)
                .unwrap()
                .max_abs_diff(&om)
                .unwrap(),
        );
        orth = orth.max(
            s.transpose()
                .matmul(&gm)
                .unwrap()
                .matmul(&s)
                .unwrap()
                .max_abs_diff(&gm)
                .unwrap(),
        );
    }
    let mut hom: f64 = 0.0;
    for k in 0..50 {
        let m1 =
            exponentiate_to_group(&random_algebra_element(1000 + k, 1.0).unwrap(), 1e-9).unwrap();
        let m2 =
            exponentiate_to_group(&random_algebra_element(2000 + k, 1.0).unwrap(), 1e-9).unwrap();
        let prod = m1.matrix().matmul(m2.matrix()).unwrap();
        let lhs = oracle_block(&prod);
        let rhs = oracle_block(m1.matrix())
            .matmul(&oracle_block(m2.matrix()))
            .unwrap();
        hom = hom.max(lhs.max_abs_diff(&rhs).unwrap());
    }
    let worst = unit.max(sympl).max(orth).max(hom).max(embed);
    outcome(
        worst <= 1e-9,
        format!(
            "pseudo-unitarity {unit:e}, Omega {sympl:e}, G {orth:e}, homomorphism {hom:e}, embedding vs oracle {embed:e}"
        ),
    )
}

fn small_element(seed: u64) -> AlgebraElement {
    let a = random_algebra_element(seed, 1.0).unwrap();
    let f = a
        .matrix()
        .data()
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    AlgebraElement::new(a.matrix().scale_real(0.1 / f), 1e-12).unwrap()
}

fn c10_covariance() -> Outcome {
    let g = eta();
    let frep = FermionRep::new(&ConventionRecord::default()).unwrap();
    let xi = frep.xi().unwrap();
    let brep = boson_rep();
    let ups = brep.upsilon().unwrap();
    let safe = brep.safe_columns().to_vec();
    let mut falg: f64 = 0.0;
    let mut balg: f64 = 0.0;
    for mu in 0..MODES {
        for nu in 0..MODES {
            for rho in 0..MODES {
                let lhs = commutator(xi.get(mu, nu), frep.zeta(rho)).unwrap();
                let rhs = frep.zeta(nu).scale_real(-g.entry(mu, rho));
                falg = falg.max(lhs.max_abs_diff(&rhs).unwrap());
                let lhs = commutator(ups.get(mu, nu), brep.z(rho)).unwrap();
                let rhs = brep.z(nu).scale_real(-g.entry(mu, rho));
                balg = balg.max(lhs.max_abs_diff_on_columns(&rhs, &safe).unwrap());
            }
        }
    }
    let cols = conjugation_columns(&brep);
    let mut fgrp: f64 = 0.0;
    let mut bgrp: f64 = 0.0;
    for seed in 0..5 {
        let a = small_element(300 + seed);
        fgrp = fgrp.max(
            fermionic_covariance_check(&a, &frep, &xi)
                .unwrap()
                .group_residual,
        );
        bgrp = bgrp.max(
            bosonic_covariance_check(&a, &brep, &ups, &cols)
                .unwrap()
                .group_residual,
        );
    }
    outcome(
        falg <= 1e-12 && balg <= 1e-12 && fgrp <= 1e-6 && bgrp <= 1e-6,
        format!(
            "[Xi, zeta] {falg:e}, [U, z] on safe columns {balg:e}, finite conjugation fermionic {fgrp:e}, bosonic {bgrp:e} (on {} safe states with N <= cutoff - 1)",
            cols.len()
        ),
    )
}

fn c11_double_cover() -> Outcome {
    let rep = FermionRep::new(&ConventionRecord::default()).unwrap();
    let c = rep.xi().unwrap().linear_casimir().unwrap();
    let i = Complex64::new(0.0, 1.0);
    let tau = 2.0 * std::f64::consts::PI;
    let s2 = matrix_exponential(&c.scale(i * tau)).unwrap();
    let s2_inv = matrix_exponential(&c.scale(-i * tau)).unwrap();
    let s4 = matrix_exponential(&c.scale(i * 2.0 * tau)).unwrap();
    let id = ComplexMatrix::identity(FERMION_DIM);
    let minus = s2.max_abs_diff(&id.scale_real(-1.0)).unwrap();
    let conj = (0..MODES)
        .map(|mu| {
            s2.matmul(rep.zeta(mu))
                .unwrap()
                .matmul(&s2_inv)
                .unwrap()
                .max_abs_diff(rep.zeta(mu))
                .unwrap()
        })
        .fold(0.0, f64::max);
    let full = s4.max_abs_diff(&id).unwrap();
    let lib = double_cover_witness(&rep).unwrap();
    let worst = minus
        .max(conj)
        .max(full)
        .max(lib.minus_identity)
        .max(lib.trivial_conjugation)
        .max(lib.full_turn);
    outcome(
        worst <= 1e-9,
        format!("S(2pi) + I {minus:e}, conjugation {conj:e}, S(4pi) - I {full:e}"),
    )
}

fn c12_sweep() -> Outcome {
    let r = resolve_conventions(3, 2, &Default::default()).unwrap();
    let names: Vec<&str> = r.deviations.iter().map(|d| d.name).collect();
    let expected = [
        "xi_sigma_diagonal_signs",
        "z_star_commutator_sign",
        "upsilon_structure_indices",
        "bosonic_quadratic_pairing",
        "upsilon_aleph_diagonal_signs",
    ];
    let scores: Vec<usize> = r.rows.iter().map(|row| row.headline_passed).collect();
    let deviations_hold = r
        .deviations
        .iter()
        .all(|d| d.adopted_residual <= 1e-10 && d.literal_residual > 1e-6);
    outcome(
        r.rows.len() == 16
            && r.unique_best()
            && r.default_is_best()
            && names == expected
            && deviations_hold,
        format!("scores {scores:?}, best {:?}, deviations {names:?}", r.best),
    )
}

fn c13_performance() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_qps-casimir");
    let time = |args: &[&str]| {
        let start = Instant::now();
        let status = Command::new(bin).args(args).output().unwrap().status;
        (status.code(), start.elapsed())
    };
    let (all_code, all_t) = time(&[
        "verify", "--suite", "all", "--cutoff", "3", "--format", "json",
    ]);
    let (f_code, f_t) = time(&["verify", "--suite", "fermion", "--format", "json"]);
    outcome(
        all_code == Some(0)
            && f_code == Some(0)
            && all_t < Duration::from_secs(60)
            && f_t < Duration::from_secs(1),
        format!("suite all {all_t:?} (exit {all_code:?}), fermion {f_t:?} (exit {f_code:?})"),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("clifford relations", c1_clifford),
        ("fermionic linear Casimir spectrum", c2_linear_fermionic),
        ("fermionic quadratic Casimir", c3_quadratic_fermionic),
        ("Xi structure constants", c4_xi_structure),
        ("bosonic spectra", c5_bosonic_spectra),
        ("literal-contraction diagnostic", c6_literal_contraction),
        ("hybrid decomposition", c7_hybrid),
        ("charge classification", c8_charges),
        ("group layer", c9_group),
        ("covariance", c10_covariance),
        ("double cover", c11_double_cover),
        ("convention sweep", c12_sweep),
        ("performance envelope", c13_performance),
    ];
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        println!(
            "criterion {:>2} {name}: {} ({})",
            k + 1,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.passed {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
