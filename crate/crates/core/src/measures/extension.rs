//! Quasi-linear extension, α/V functionals and linear reconstruction.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use crate::albert::{AlbertElement, ComplexAlbert};
use crate::algebra::{
    calculus_unchecked, ensure_self_adjoint, resolve_unchecked, AlgebraDescriptor, Block, Element, FactorKind,
    Projection,
};
use crate::error::Result;
use crate::lattice::leq;
use crate::linalg::{c, outer, re, CMatrix, CVector, C64};
use crate::octonion::Octonion;
use crate::sampling::{random_positive_contraction, random_projection, random_subprojection, trial_rng};

use super::measure::{masses, pairing_sa, Measure};

/// Random subprojections drawn by the oracle estimators of α and V.
pub const ORACLE_SAMPLES: usize = 256;
const ORACLE_SEED: u64 = 0x5eed_0a1f;

/// Eigenvalues below this are left out of the positive support of a density.
const SUPPORT_FLOOR: f64 = 1e-12;

/// A value that is exact for density measures and a sampled lower bound for oracles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub exact: bool,
}

/// Sampled `sup μ̄(2p − 1)` next to its two theoretical bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetrySup {
    pub sup: f64,
    /// `2α(1) − μ(1)`
    pub alpha_bound: f64,
    /// `2V(1)`
    pub variation_bound: f64,
    pub exact: bool,
}

/// Density reconstructed from `μ̄` on a self-adjoint basis, with its worst
/// disagreement with `μ` over the validation projections.
#[derive(Debug, Clone)]
pub struct LinearFit {
    pub density: Element,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct QuasiLinearReport {
    pub additivity_residual: f64,
    pub symmetry: SymmetrySup,
    pub alpha_one: Estimate,
    pub mu_one: f64,
    pub fit: LinearFit,
}

/// `Σ λ μ(p_λ)` over the spectral resolution of a self-adjoint `x`.
pub(crate) fn extend_sa(mu: &Measure, x: &Element) -> f64 {
    resolve_unchecked(x).pairs().iter().filter(|(l, _)| *l != 0.0).map(|(l, p)| l * mu.eval_unchecked(p)).sum()
}

/// The quasi-linear extension `μ̄(x) = μ̄(Re x) + i μ̄(Im x)`.
pub fn quasi_linear_extend(mu: &Measure, x: &Element) -> Result<C64> {
    mu.descriptor().ensure_same(x.descriptor())?;
    Ok(c(extend_sa(mu, &x.real_part()), extend_sa(mu, &x.imag_part())))
}

fn difference(p: &Projection, q: &Projection) -> Projection {
    let rank = p.rank().iter().zip(q.rank()).map(|(a, b)| a - b).collect();
    Projection::new_unchecked(p.element() - q.element(), rank)
}

/// `μ` on `0`, `p`, the landmarks under `p` and sampled subprojections together with their complements in `p`.
fn sampled_subvalues(mu: &Measure, p: &Projection) -> Vec<f64> {
    let mut rng = trial_rng(ORACLE_SEED, 0);
    let mut values = vec![0.0, mu.eval_unchecked(p)];
    for l in mu.landmarks() {
        if leq(l, p).unwrap_or(false) {
            values.push(mu.eval_unchecked(l));
        }
    }
    for _ in 0..ORACLE_SAMPLES {
        let q = random_subprojection(p, &mut rng);
        values.push(mu.eval_unchecked(&q));
        values.push(mu.eval_unchecked(&difference(p, &q)));
    }
    values
}

/// `α(p) = sup{μ(q) : q ≤ p}`.
///
/// Density measures give the positive trace mass of the compression `U_p(ρ)`.
pub fn alpha(mu: &Measure, p: &Projection) -> Result<Estimate> {
    mu.descriptor().ensure_same(p.descriptor())?;
    Ok(match mu.witness() {
        Some(rho) => Estimate { value: masses(&p.u(rho)).0, exact: true },
        None => Estimate { value: sampled_subvalues(mu, p).into_iter().fold(0.0, f64::max), exact: false },
    })
}

/// `V(p) = sup{|μ(q)| : q ≤ p}`.
pub fn variation(mu: &Measure, p: &Projection) -> Result<Estimate> {
    mu.descriptor().ensure_same(p.descriptor())?;
    Ok(match mu.witness() {
        Some(rho) => {
            let (plus, minus) = masses(&p.u(rho));
            Estimate { value: plus.max(minus), exact: true }
        }
        None => Estimate { value: sampled_subvalues(mu, p).into_iter().fold(0.0, |m, v| m.max(v.abs())), exact: false },
    })
}

fn positive_support(rho: &Element) -> Projection {
    let e = calculus_unchecked(rho, |l| if l > SUPPORT_FLOOR { 1.0 } else { 0.0 });
    Projection::certify(e).expect("spectral projection")
}

/// Sampled `sup μ̄(2p − 1)` over `0`, `1`, the landmarks, the positive support
/// of the density when there is one, and `trials` random projections.
pub fn symmetry_sup_check<R: Rng + ?Sized>(mu: &Measure, trials: usize, rng: &mut R) -> SymmetrySup {
    let d = mu.descriptor();
    let mut candidates = vec![Projection::zero(d), Projection::unit(d)];
    candidates.extend(mu.landmarks().iter().cloned());
    if let Some(rho) = mu.witness() {
        candidates.push(positive_support(rho));
    }
    candidates.extend((0..trials).map(|_| random_projection(d, rng)));
    let sup = candidates.iter().map(|p| extend_sa(mu, &p.symmetry())).fold(f64::NEG_INFINITY, f64::max);
    let one = Projection::unit(d);
    let a = alpha(mu, &one).expect("same descriptor");
    let v = variation(mu, &one).expect("same descriptor");
    SymmetrySup {
        sup,
        alpha_bound: 2.0 * a.value - mu.eval_unchecked(&one),
        variation_bound: 2.0 * v.value,
        exact: a.exact,
    }
}

fn embed(descriptor: &AlgebraDescriptor, i: usize, block: Block) -> Element {
    let blocks = descriptor
        .summands()
        .iter()
        .enumerate()
        .map(|(j, k)| if j == i { block.clone() } else { Block::zero(*k) })
        .collect();
    Element::from_blocks_unchecked(descriptor.clone(), blocks)
}

fn unit_matrix(n: usize, entries: &[(usize, usize, C64)]) -> Block {
    let mut m = CMatrix::zeros(n, n);
    for &(i, j, z) in entries {
        m[(i, j)] = z;
    }
    Block::Matrix(m)
}

fn basis_blocks(kind: FactorKind) -> Vec<Block> {
    match kind {
        FactorKind::Matrix(n) | FactorKind::Symmetric(n) => {
            let complex = matches!(kind, FactorKind::Matrix(_));
            let mut out: Vec<Block> = (0..n).map(|i| unit_matrix(n, &[(i, i, re(1.0))])).collect();
            for i in 0..n {
                for j in i + 1..n {
                    out.push(unit_matrix(n, &[(i, j, re(1.0)), (j, i, re(1.0))]));
                    if complex {
                        out.push(unit_matrix(n, &[(i, j, c(0.0, 1.0)), (j, i, c(0.0, -1.0))]));
                    }
                }
            }
            out
        }
        FactorKind::Spin(k) => {
            let mut out = vec![Block::unit(kind)];
            for j in 0..k {
                let mut v = CVector::zeros(k);
                v[j] = re(1.0);
                out.push(Block::Spin { scalar: re(0.0), vector: v });
            }
            out
        }
        FactorKind::Albert => (0..27)
            .map(|i| {
                let mut coords = [0.0; 27];
                coords[i] = 1.0;
                Block::Albert(ComplexAlbert::real(AlbertElement::from_coordinates(&coords)))
            })
            .collect(),
    }
}

/// A real basis of the self-adjoint part, summand by summand: diagonal units
/// and symmetrized off-diagonal units (real and imaginary) for matrix
/// summands, `1` and `0 ⊕ eⱼ` for spin summands, coordinate units for Albert.
pub fn self_adjoint_basis(descriptor: &AlgebraDescriptor) -> Vec<Element> {
    descriptor
        .summands()
        .iter()
        .enumerate()
        .flat_map(|(i, k)| basis_blocks(*k).into_iter().map(move |b| (i, b)))
        .map(|(i, b)| embed(descriptor, i, b))
        .collect()
}

const ROTATION_ANGLES: [f64; 4] = [PI / 8.0, PI / 4.0, 0.955_316_618_124_509_2, 3.0 * PI / 8.0];

/// Frame projections and plane rotations of minimal projections, per summand.
fn structured(descriptor: &AlgebraDescriptor) -> (Vec<Projection>, Vec<Projection>) {
    let mut frame = Vec::new();
    let mut rotations = Vec::new();
    for (s, kind) in descriptor.summands().iter().enumerate() {
        let mut rank = vec![0; descriptor.len()];
        rank[s] = 1;
        let lift = |b: Block| Projection::new_unchecked(embed(descriptor, s, b), rank.clone());
        match *kind {
            FactorKind::Matrix(n) | FactorKind::Symmetric(n) => {
                let line = |v: CVector| Block::Matrix(outer(&v));
                let unit = |i: usize| CVector::from_fn(n, |r, _| re(if r == i { 1.0 } else { 0.0 }));
                frame.extend((0..n).map(|i| lift(line(unit(i)))));
                for i in 0..n {
                    for j in i + 1..n {
                        for t in ROTATION_ANGLES {
                            rotations.push(lift(line(unit(i).scale(t.cos()) + unit(j).scale(t.sin()))));
                        }
                    }
                }
            }
            FactorKind::Spin(k) => {
                let half = |u: CVector| Block::Spin { scalar: re(0.5), vector: u.scale(0.5) };
                let unit = |i: usize| CVector::from_fn(k, |r, _| re(if r == i { 1.0 } else { 0.0 }));
                for i in 0..k {
                    frame.push(lift(half(unit(i))));
                    frame.push(lift(half(-unit(i))));
                    for j in i + 1..k {
                        for t in ROTATION_ANGLES {
                            let u = unit(i).scale((2.0 * t).cos()) + unit(j).scale((2.0 * t).sin());
                            rotations.push(lift(half(u)));
                        }
                    }
                }
            }
            FactorKind::Albert => {
                let albert = |a: AlbertElement| Block::Albert(ComplexAlbert::real(a));
                frame.extend((0..3).map(|i| lift(albert(AlbertElement::diagonal_unit(i)))));
                for (i, j) in [(0, 1), (1, 2), (0, 2)] {
                    for t in ROTATION_ANGLES {
                        let (cs, sn) = (t.cos(), t.sin());
                        let mut m = [[Octonion::ZERO; 3]; 3];
                        m[i][i] = Octonion::real(cs * cs);
                        m[j][j] = Octonion::real(sn * sn);
                        m[i][j] = Octonion::real(cs * sn);
                        m[j][i] = Octonion::real(cs * sn);
                        rotations.push(lift(albert(AlbertElement::from_matrix(&m))));
                    }
                }
            }
        }
    }
    (frame, rotations)
}

/// Deterministic minimal projections used for validation: a frame per summand
/// and rotations of its members in every coordinate plane, at angles
/// `π/8, π/4, arccos(1/√3), 3π/8`.
pub fn structured_projections(descriptor: &AlgebraDescriptor) -> Vec<Projection> {
    let (mut frame, rotations) = structured(descriptor);
    frame.extend(rotations);
    frame
}

/// Solves `⟨ρ̂, bₖ⟩ = μ̄(bₖ)` over [`self_adjoint_basis`] and reports the
/// largest `|μ(p) − ⟨ρ̂, p⟩|` over the structured projections, the landmarks
/// and `validation_trials` random projections.
pub fn fit_linear_functional<R: Rng + ?Sized>(mu: &Measure, validation_trials: usize, rng: &mut R) -> LinearFit {
    let d = mu.descriptor();
    let basis = self_adjoint_basis(d);
    let n = basis.len();
    let gram = DMatrix::from_fn(n, n, |i, j| pairing_sa(&basis[i], &basis[j]));
    let rhs = DVector::from_iterator(n, basis.iter().map(|b| extend_sa(mu, b)));
    let coeffs = gram.lu().solve(&rhs).expect("the trace pairing is nondegenerate");
    let density = basis.iter().zip(coeffs.iter()).fold(Element::zero(d), |acc, (b, w)| acc + b.scale(*w));

    let mut validation = structured_projections(d);
    validation.extend(mu.landmarks().iter().cloned());
    validation.extend((0..validation_trials).map(|_| random_projection(d, rng)));
    let residual = validation
        .iter()
        .map(|p| (mu.eval_unchecked(p) - pairing_sa(&density, p)).abs())
        .fold(0.0, f64::max);
    LinearFit { density, residual }
}

fn defect(mu: &Measure, a: &Element, b: &Element) -> f64 {
    (extend_sa(mu, &(a + b)) - extend_sa(mu, a) - extend_sa(mu, b)).abs()
}

/// Largest `|μ̄(a + b) − μ̄(a) − μ̄(b)|` over positive pairs with `a + b ≤ 1`.
///
/// Pairs are `(½e, ½f)` with `e` a frame projection or landmark and `f` any
/// structured projection, then `trials` random pairs of halved projections and
/// `trials` random pairs of halved positive contractions.
pub fn additivity_residual<R: Rng + ?Sized>(mu: &Measure, trials: usize, rng: &mut R) -> f64 {
    let d = mu.descriptor();
    let (mut frame, rotations) = structured(d);
    frame.extend(mu.landmarks().iter().cloned());
    let mut worst: f64 = 0.0;
    for e in &frame {
        let a = e.element().scale(0.5);
        for f in frame.iter().chain(&rotations) {
            worst = worst.max(defect(mu, &a, &f.element().scale(0.5)));
        }
    }
    for _ in 0..trials {
        let (p, q) = (random_projection(d, rng), random_projection(d, rng));
        worst = worst.max(defect(mu, &p.element().scale(0.5), &q.element().scale(0.5)));
        let (a, b) = (random_positive_contraction(d, rng), random_positive_contraction(d, rng));
        worst = worst.max(defect(mu, &a.scale(0.5), &b.scale(0.5)));
    }
    worst
}

/// Every quasi-linearity diagnostic at once.
pub fn quasi_linear_report<R: Rng + ?Sized>(mu: &Measure, trials: usize, rng: &mut R) -> QuasiLinearReport {
    let one = Projection::unit(mu.descriptor());
    QuasiLinearReport {
        additivity_residual: additivity_residual(mu, trials, rng),
        symmetry: symmetry_sup_check(mu, trials, rng),
        alpha_one: alpha(mu, &one).expect("same descriptor"),
        mu_one: mu.eval_unchecked(&one),
        fit: fit_linear_functional(mu, trials, rng),
    }
}

/// `2(2α(1) − μ(1))(δ + √(2δ))`, the modulus of continuity of `μ` at distance `δ`.
pub fn continuity_bound(mu: &Measure, delta: f64) -> f64 {
    let one = Projection::unit(mu.descriptor());
    let a = alpha(mu, &one).expect("same descriptor").value;
    2.0 * (2.0 * a - mu.eval_unchecked(&one)) * (delta + (2.0 * delta).sqrt())
}

/// Shifts `ρ` by a scalar so that `μ(1) = 0`, then scales it so that
/// `sup{|μ̄(x)| : x = x*, ‖x‖ ≤ 1} = 1`; afterwards `α(1) = ½`.
pub fn normalize_witness(rho: &Element) -> Result<Element> {
    ensure_self_adjoint(rho)?;
    let d = rho.descriptor();
    let one = Element::unit(d);
    let shift = pairing_sa(rho, &one) / d.len() as f64;
    let centred = rho.real_part() - one.scale(shift);
    let (plus, minus) = masses(&centred);
    let total = plus + minus;
    Ok(if total > 0.0 { centred.scale(1.0 / total) } else { centred })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{operator_norm_sa, spectral_resolution};
    use crate::measures::{from_density, kadison_s2, spin_counterexample, pairing};
    use crate::sampling::{random_self_adjoint, random_subprojection};

    fn desc(s: &str) -> AlgebraDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn extension_on_projections_is_the_measure() {
        let mut rng = trial_rng(50, 0);
        let d = desc("m3+spin3");
        let mu = from_density(&random_self_adjoint(&d, &mut rng)).unwrap();
        for _ in 0..50 {
            let p = random_projection(&d, &mut rng);
            let got = quasi_linear_extend(&mu, &p).unwrap();
            assert!((got.re - mu.evaluate(&p).unwrap()).abs() <= 1e-12);
            assert_eq!(got.im, 0.0);
        }
        let k = kadison_s2();
        for p in structured_projections(k.descriptor()) {
            assert!((quasi_linear_extend(&k, &p).unwrap().re - k.evaluate(&p).unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn extension_of_density_is_the_pairing() {
        let mut rng = trial_rng(51, 0);
        let d = desc("m4");
        let rho = random_self_adjoint(&d, &mut rng);
        let mu = from_density(&rho).unwrap();
        for _ in 0..200 {
            let x = random_self_adjoint(&d, &mut rng).scale(3.0);
            let got = quasi_linear_extend(&mu, &x).unwrap();
            assert!((got - pairing(&rho, &x).unwrap()).norm() <= 1e-9);
        }
    }

    #[test]
    fn extension_is_linear_on_commuting_families() {
        let mut rng = trial_rng(52, 0);
        for name in ["m4", "s3", "spin4", "albert"] {
            let d = desc(name);
            for mu in [from_density(&random_self_adjoint(&d, &mut rng)).unwrap()] {
                for _ in 0..30 {
                    let frame = resolve_unchecked(&random_self_adjoint(&d, &mut rng));
                    let combo = |rng: &mut rand_chacha::ChaCha8Rng| {
                        frame.pairs().iter().fold(Element::zero(&d), |acc, (_, p)| {
                            acc + p.element().scale(rng.random_range(-2.0..2.0))
                        })
                    };
                    let (x, y) = (combo(&mut rng), combo(&mut rng));
                    assert!(defect(&mu, &x, &y) <= 1e-9, "{name}");
                }
            }
        }
        // on a commuting family even the counterexample is additive
        let k = kadison_s2();
        let d = k.descriptor().clone();
        let frame = spectral_resolution(&random_self_adjoint(&d, &mut rng)).unwrap();
        let (p, q) = (&frame.pairs()[0].1, &frame.pairs()[1].1);
        assert!(defect(&k, &p.element().scale(0.3), &q.element().scale(-1.7)) <= 1e-12);
    }

    #[test]
    fn alpha_and_variation_of_diag_one_minus_one() {
        let rho = Element::real_diagonal(FactorKind::Matrix(2), &[1.0, -1.0]).unwrap();
        let mu = from_density(&rho).unwrap();
        let one = Projection::unit(mu.descriptor());
        assert_eq!(alpha(&mu, &one).unwrap(), Estimate { value: 0.5, exact: true });
        assert_eq!(variation(&mu, &one).unwrap(), Estimate { value: 0.5, exact: true });
        let sup = symmetry_sup_check(&mu, 20, &mut trial_rng(53, 0));
        assert!((sup.sup - 1.0).abs() <= 1e-12);
        assert!((sup.alpha_bound - 1.0).abs() <= 1e-12);
        assert_eq!(sup.variation_bound, 1.0);
    }

    #[test]
    fn positive_measures_have_alpha_equal_to_total() {
        let d = desc("m3+albert");
        let mut rng = trial_rng(54, 0);
        let mu = from_density(&random_positive_contraction(&d, &mut rng)).unwrap();
        let one = Projection::unit(&d);
        let total = mu.evaluate(&one).unwrap();
        assert!((alpha(&mu, &one).unwrap().value - total).abs() <= 1e-12);
        assert!((variation(&mu, &one).unwrap().value - total).abs() <= 1e-12);
        let trace = Measure::trace(&desc("m3"));
        let sup = symmetry_sup_check(&trace, 10, &mut rng);
        assert!((sup.sup - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn alpha_is_additive_over_central_projections() {
        let d = desc("m3+spin4+albert");
        let mut rng = trial_rng(55, 0);
        for _ in 0..20 {
            let mu = from_density(&random_self_adjoint(&d, &mut rng)).unwrap();
            let parts: Vec<Projection> = (0..3).map(|i| Projection::certify(Element::summand_unit(&d, i)).unwrap()).collect();
            let sum: f64 = parts.iter().map(|z| alpha(&mu, z).unwrap().value).sum();
            let whole = alpha(&mu, &Projection::unit(&d)).unwrap().value;
            assert!((sum - whole).abs() <= 1e-9);
        }
    }

    #[test]
    fn alpha_dominates_every_subprojection() {
        let d = desc("m4+spin3");
        let mut rng = trial_rng(56, 0);
        for _ in 0..20 {
            let mu = from_density(&random_self_adjoint(&d, &mut rng)).unwrap();
            let p = random_projection(&d, &mut rng);
            let (a, v) = (alpha(&mu, &p).unwrap().value, variation(&mu, &p).unwrap().value);
            assert!(v >= a - 1e-15);
            for _ in 0..20 {
                let q = random_subprojection(&p, &mut rng);
                let m = mu.evaluate(&q).unwrap();
                assert!(m <= a + 1e-9 && m.abs() <= v + 1e-9);
            }
        }
    }

    #[test]
    fn oracle_estimates_are_flagged() {
        let k = kadison_s2();
        let one = Projection::unit(k.descriptor());
        assert_eq!(alpha(&k, &one).unwrap(), Estimate { value: 1.0, exact: false });
        assert_eq!(variation(&k, &one).unwrap(), Estimate { value: 1.0, exact: false });
    }

    #[test]
    fn positive_sup_is_alpha_and_attained() {
        let d = desc("m3+s3");
        let mut rng = trial_rng(57, 0);
        for _ in 0..10 {
            let rho = random_self_adjoint(&d, &mut rng);
            let mu = from_density(&rho).unwrap();
            let a = alpha(&mu, &Projection::unit(&d)).unwrap().value;
            for _ in 0..50 {
                let x = random_positive_contraction(&d, &mut rng);
                assert!(extend_sa(&mu, &x) <= a + 1e-9);
            }
            assert!((extend_sa(&mu, &positive_support(&rho)) - a).abs() <= 1e-9);
            let sup = symmetry_sup_check(&mu, 50, &mut rng);
            assert!((sup.sup - sup.alpha_bound).abs() <= 1e-9);
            assert!(sup.sup <= sup.variation_bound + 1e-9);
        }
    }

    #[test]
    fn fit_recovers_the_trace() {
        let mu = Measure::trace(&desc("m3"));
        let fit = fit_linear_functional(&mu, 100, &mut trial_rng(58, 0));
        let err = operator_norm_sa(&(&fit.density - &Element::unit(mu.descriptor()))).unwrap();
        assert!(err <= 1e-9 && fit.residual <= 1e-9, "{err} {}", fit.residual);
    }

    #[test]
    fn fit_round_trip() {
        let mut rng = trial_rng(59, 0);
        for name in ["m4+s3", "m2", "spin5", "albert"] {
            let d = desc(name);
            let rho = random_self_adjoint(&d, &mut rng);
            let fit = fit_linear_functional(&from_density(&rho).unwrap(), 100, &mut rng);
            let err = operator_norm_sa(&(&fit.density - &rho)).unwrap();
            assert!(err <= 1e-8 && fit.residual <= 1e-8, "{name}: {err} {}", fit.residual);
        }
    }

    #[test]
    fn counterexample_fit_is_the_first_diagonal_entry() {
        let k = kadison_s2();
        let fit = fit_linear_functional(&k, 50, &mut trial_rng(60, 0));
        // x ↦ x₁₁ is ⟨2E₁₁, x⟩ under the halved trace
        let expected = Element::real_diagonal(FactorKind::Symmetric(2), &[2.0, 0.0]).unwrap();
        assert!(operator_norm_sa(&(&fit.density - &expected)).unwrap() <= 1e-12);
        assert!(fit.residual >= 1.0 / 6.0 - 1e-6);
    }

    // Best linear fit over a dense grid of rank-one projections, by brute force over
    // (a, b, c) for φ([[x, y], [y, z]]) = a·x + 2b·y + c·z.
    #[test]
    fn no_linear_functional_fits_the_counterexample() {
        let k = kadison_s2();
        let rank_one: Vec<(f64, f64, f64, f64)> = (0..180)
            .map(|i| {
                let t = i as f64 * PI / 180.0;
                let (cs, sn) = (t.cos(), t.sin());
                let p = Projection::certify(
                    Element::from_real_rows(FactorKind::Symmetric(2), &[&[cs * cs, cs * sn], &[cs * sn, sn * sn]])
                        .unwrap(),
                )
                .unwrap();
                (cs * cs, cs * sn, sn * sn, k.evaluate(&p).unwrap())
            })
            .collect();
        let grid = |lo: f64, hi: f64, n: usize| (0..=n).map(move |i| lo + (hi - lo) * i as f64 / n as f64);
        let mut best = f64::INFINITY;
        for a in grid(-0.5, 1.5, 80) {
            for b in grid(-0.5, 0.5, 40) {
                for cc in grid(-0.5, 1.5, 80) {
                    let worst = rank_one
                        .iter()
                        .map(|(x, y, z, m)| (a * x + 2.0 * b * y + cc * z - m).abs())
                        .fold((a + cc - 1.0).abs(), f64::max);
                    best = best.min(worst);
                }
            }
        }
        assert!(best >= 1.0 / 6.0 - 1e-6, "{best}");
    }

    // The four displayed projections alone leave room for a closer fit.
    #[test]
    fn four_displayed_projections_alone_allow_a_closer_fit() {
        let r2 = 2f64.sqrt();
        let (a, b, cc) = (0.93, 0.08, 0.06);
        let phi = |x: f64, y: f64, z: f64| a * x + 2.0 * b * y + cc * z;
        let worst = [
            (phi(1.0, 0.0, 0.0) - 1.0).abs(),
            phi(0.0, 0.0, 1.0).abs(),
            (phi(0.5, 0.5, 0.5) - 0.5).abs(),
            (phi(1.0 / 3.0, r2 / 3.0, 2.0 / 3.0) - 0.5).abs(),
            (phi(1.0, 0.0, 1.0) - 1.0).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        assert!(worst < 0.08);
    }

    #[test]
    fn counterexample_additivity_defect() {
        let k = kadison_s2();
        let r = additivity_residual(&k, 20, &mut trial_rng(61, 0));
        assert!(r >= 1.0 / 6.0 - 1e-6, "{r}");
        // the targeted pair: ½E₁₁ and ½ of the second displayed projection
        let r2 = 2f64.sqrt();
        let a = Element::real_diagonal(FactorKind::Symmetric(2), &[0.5, 0.0]).unwrap();
        let b = Element::from_real_rows(FactorKind::Symmetric(2), &[&[1.0 / 6.0, r2 / 6.0], &[r2 / 6.0, 1.0 / 3.0]])
            .unwrap();
        assert!((defect(&k, &a, &b) - 0.25).abs() <= 1e-12);
    }

    #[test]
    fn spin_counterexamples_resist_fitting() {
        for n in [2, 3, 5] {
            let mu = spin_counterexample(n).unwrap();
            let mut rng = trial_rng(62, n as u64);
            let fit = fit_linear_functional(&mu, 50, &mut rng);
            assert!(fit.residual >= 1.0 / 6.0 - 1e-6, "spin{n}: {}", fit.residual);
            assert!(additivity_residual(&mu, 20, &mut rng) >= 1.0 / 6.0 - 1e-6);
        }
    }

    #[test]
    fn density_measures_are_additive() {
        let mut rng = trial_rng(63, 0);
        for name in ["m3", "s4", "spin5", "albert"] {
            let d = desc(name);
            let mu = from_density(&random_self_adjoint(&d, &mut rng)).unwrap();
            assert!(additivity_residual(&mu, 50, &mut rng) <= 1e-8, "{name}");
        }
        let zero = from_density(&Element::zero(&desc("m3"))).unwrap();
        assert_eq!(additivity_residual(&zero, 10, &mut rng), 0.0);
    }

    #[test]
    fn normalization() {
        let d = desc("m5");
        let mut rng = trial_rng(64, 0);
        let rho = normalize_witness(&random_self_adjoint(&d, &mut rng)).unwrap();
        let mu = from_density(&rho).unwrap();
        let one = Projection::unit(&d);
        assert!(mu.evaluate(&one).unwrap().abs() <= 1e-12);
        assert!((alpha(&mu, &one).unwrap().value - 0.5).abs() <= 1e-12);
        assert!((continuity_bound(&mu, 0.02) - 2.0 * (0.02 + 0.2)).abs() <= 1e-12);
    }

    #[test]
    fn basis_sizes() {
        for name in ["m3", "s4", "spin5", "albert", "m2+s3"] {
            let d = desc(name);
            let expected: usize = d.summands().iter().map(|k| k.self_adjoint_dim()).sum();
            assert_eq!(self_adjoint_basis(&d).len(), expected);
        }
        for p in structured_projections(&desc("m3+spin3+albert")) {
            Projection::certify(p.into_element()).unwrap();
        }
    }
}
