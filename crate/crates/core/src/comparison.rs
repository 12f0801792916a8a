//! Exchange symmetries, equivalence, halving, isoclinic projections, the `e_±`
//! construction and explicit orthogonal projection pairs with prescribed
//! compressions.

use crate::algebra::{
    calculus_unchecked, ensure_positive, inv_sqrt, sa_norm_unchecked, self_adjoint_residual, sqrt, sqrt_unchecked, AlgebraDescriptor,
    Block, Element, FactorKind, Projection, INVERSION_FLOOR, TOL_PROJ,
};
use crate::error::{Error, Result};
use crate::lattice::ORDER_TOL;
use crate::linalg::{hermitian_eigen, outer, CMatrix, CVector};

/// Distance at which two projections no longer admit an exchange symmetry.
pub const FAR_APART: f64 = 1.0 - 1e-9;

fn distance(f: &Projection, g: &Projection) -> f64 {
    sa_norm_unchecked(&(f.element() - g.element()))
}

/// The symmetry `s = c^{−1/2}∘(f + g − 1)` with `c = 1 − (f − g)²`, satisfying `U_s(f) = g`.
pub fn exchange_symmetry(f: &Projection, g: &Projection) -> Result<Element> {
    f.descriptor().ensure_same(g.descriptor())?;
    let d = f.descriptor();
    let dist = distance(f, g);
    if dist >= FAR_APART {
        return Err(Error::TooFarApart { distance: dist });
    }
    let one = Element::unit(d);
    let diff = f.element() - g.element();
    let c = &one - diff.square();
    let c_inv_sqrt = inv_sqrt(&c)?;
    Ok(c_inv_sqrt.circ(&(f.element() + g.element() - one)))
}

/// Jordan equivalence in a finite direct sum of factors: equal rank in every summand.
pub fn equivalent(p: &Projection, q: &Projection) -> Result<bool> {
    p.descriptor().ensure_same(q.descriptor())?;
    Ok(p.rank() == q.rank())
}

/// `p = first + second + remainder` with `U_symmetry(first) = second` and a remainder of rank ≤ 1 per summand.
#[derive(Debug, Clone)]
pub struct Halving {
    pub first: Projection,
    pub second: Projection,
    pub remainder: Projection,
    pub symmetry: Element,
}

fn symmetrize_for(kind: FactorKind, m: CMatrix) -> CMatrix {
    if matches!(kind, FactorKind::Symmetric(_)) {
        (&m + m.transpose()).scale(0.5)
    } else {
        m
    }
}

fn envelope_only(d: &AlgebraDescriptor, operation: &'static str) -> Result<()> {
    match d.summands().iter().find(|k| k.envelope_dim().is_none()) {
        Some(k) => Err(Error::UnsupportedFactor { operation, factor: k.to_string() }),
        None => Ok(()),
    }
}

/// Orthonormal basis of the range of a projection block, as columns in Jacobi order.
fn range_basis(p: &CMatrix, rank: usize) -> Vec<CVector> {
    let eig = hermitian_eigen(p);
    let n = p.nrows();
    (n - rank..n).map(|i| eig.vector(i)).collect()
}

/// Splits `p` into two exchanged halves plus a possibly zero abelian remainder.
///
/// Within each summand the range eigenvectors `v₁..v_r` of `p` are taken in
/// order; the first `⌊r/2⌋` span `first`, the next `⌊r/2⌋` span `second`.
pub fn halve(p: &Projection) -> Result<Halving> {
    if p.is_zero() {
        return Err(Error::ZeroProjection);
    }
    let d = p.descriptor();
    envelope_only(d, "halve")?;
    let mut blocks = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    let mut ranks = [Vec::new(), Vec::new(), Vec::new()];
    for (i, kind) in d.summands().iter().enumerate() {
        let n = kind.unit_rank();
        let r = p.rank()[i];
        let basis = range_basis(p.matrix_block(i).expect("envelope summand"), r);
        let half = r / 2;
        let q1 = crate::linalg::projector(&basis[..half], n);
        let q2 = crate::linalg::projector(&basis[half..2 * half], n);
        let rem = crate::linalg::projector(&basis[2 * half..], n);
        let mut w = CMatrix::zeros(n, n);
        for k in 0..half {
            w += &basis[half + k] * basis[k].adjoint();
        }
        let s = &w + w.adjoint() + CMatrix::identity(n, n) - &q1 - &q2;
        for (slot, m) in blocks.iter_mut().zip([q1, q2, rem, s]) {
            slot.push(Block::Matrix(symmetrize_for(*kind, m)));
        }
        ranks[0].push(half);
        ranks[1].push(half);
        ranks[2].push(r - 2 * half);
    }
    let [b1, b2, b3, bs] = blocks;
    let [r1, r2, r3] = ranks;
    let build = |b| Element::from_blocks(d.clone(), b);
    Ok(Halving {
        first: Projection::new_unchecked(build(b1)?, r1),
        second: Projection::new_unchecked(build(b2)?, r2),
        remainder: Projection::new_unchecked(build(b3)?, r3),
        symmetry: build(bs)?,
    })
}

/// The pair `f = E₁₁`, `h = [[cos²θ, cosθ sinθ], [cosθ sinθ, sin²θ]]` in `S₂(ℂ)`.
pub fn isoclinic_model(theta: f64) -> Result<(Projection, Projection)> {
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(Error::AngleOutOfRange(theta));
    }
    let (s, c) = theta.sin_cos();
    let kind = FactorKind::Symmetric(2);
    let f = Element::from_real_rows(kind, &[&[1.0, 0.0], &[0.0, 0.0]])?;
    let h = Element::from_real_rows(kind, &[&[c * c, c * s], &[c * s, s * s]])?;
    Ok((Projection::new_unchecked(f, vec![1]), Projection::new_unchecked(h, vec![1])))
}

/// A projection `h` isoclinic at angle `θ` to both `f` and `g`, with `θ = ½ asin(‖U_f(1−g)‖^{1/2})`.
///
/// `e` supplies the extra dimensions: it must have the rank of `f` and be
/// orthogonal to `f` and `g`. In the principal-vector pairs `(uₖ, vₖ)` of
/// `f` and `g` at angles `φₖ`, `h` is spanned by
/// `xₖ = aₖ(uₖ + vₖ)/(2cos(φₖ/2)) + (1 − aₖ²)^{1/2} wₖ` with `aₖ = cosθ / cos(φₖ/2)`.
pub fn isoclinic_mid(f: &Projection, g: &Projection, e: &Projection) -> Result<(Projection, f64)> {
    let d = f.descriptor();
    d.ensure_same(g.descriptor())?;
    d.ensure_same(e.descriptor())?;
    envelope_only(d, "isoclinic_mid")?;
    let dist = distance(f, g);
    if dist >= FAR_APART {
        return Err(Error::TooFarApart { distance: dist });
    }
    if e.rank() != f.rank() {
        return Err(Error::MissingSpareRoom(format!("rank {:?} of e differs from rank {:?} of f", e.rank(), f.rank())));
    }
    for (other, name) in [(f, "f"), (g, "g")] {
        let overlap = sa_norm_unchecked(&e.circ(other));
        if overlap > ORDER_TOL {
            return Err(Error::MissingSpareRoom(format!("e is not orthogonal to {name} (residual {overlap:.3e})")));
        }
    }

    struct Principal {
        u: Vec<CVector>,
        v: Vec<CVector>,
        angles: Vec<f64>,
        w: Vec<CVector>,
    }
    let mut per_summand = Vec::new();
    let mut max_angle: f64 = 0.0;
    for (i, _) in d.summands().iter().enumerate() {
        let r = f.rank()[i];
        let uf = range_basis(f.matrix_block(i).unwrap(), r);
        let vg = range_basis(g.matrix_block(i).unwrap(), r);
        let w = range_basis(e.matrix_block(i).unwrap(), r);
        let mut principal = Principal { u: Vec::new(), v: Vec::new(), angles: Vec::new(), w };
        if r == 0 {
            per_summand.push(principal);
            continue;
        }
        let umat = CMatrix::from_columns(&uf);
        let vmat = CMatrix::from_columns(&vg);
        let m = umat.adjoint() * &vmat;
        let eig = hermitian_eigen(&(m.adjoint() * &m));
        for k in 0..r {
            let b = eig.vector(k);
            let sigma = eig.values[k].max(0.0).sqrt();
            principal.v.push(&vmat * &b);
            principal.u.push((&umat * (&m * &b)).unscale(sigma));
            let phi = sigma.min(1.0).acos();
            max_angle = max_angle.max(phi);
            principal.angles.push(phi);
        }
        per_summand.push(principal);
    }
    let theta = 0.5 * max_angle;

    let mut blocks = Vec::new();
    for (kind, pr) in d.summands().iter().zip(per_summand) {
        let n = kind.unit_rank();
        let mut h = CMatrix::zeros(n, n);
        for k in 0..pr.u.len() {
            let half = 0.5 * pr.angles[k];
            let a = (theta.cos() / half.cos()).min(1.0);
            let mid = (&pr.u[k] + &pr.v[k]).unscale(2.0 * half.cos());
            let x = mid.scale(a) + pr.w[k].scale((1.0 - a * a).max(0.0).sqrt());
            h += outer(&x);
        }
        blocks.push(Block::Matrix(symmetrize_for(*kind, h)));
    }
    let h = Element::from_blocks(d.clone(), blocks)?;
    Ok((Projection::new_unchecked(h, f.rank().to_vec()), theta))
}

/// Output of [`e_pm_construct`].
#[derive(Debug, Clone)]
pub struct EPm {
    pub minus: Projection,
    pub plus: Projection,
    pub c: Element,
    pub d: Element,
}

/// `e_∓ = c + d ± 2ε²{p, e, q}` with
/// `c = ½p + (¼p − ε⁴U_pU_e(q))^{1/2}` and `d = ½q − (¼q − ε⁴U_qU_e(p))^{1/2}`.
pub fn e_pm_construct(p: &Projection, q: &Projection, e: &Projection, epsilon: f64) -> Result<EPm> {
    let desc = p.descriptor();
    desc.ensure_same(q.descriptor())?;
    desc.ensure_same(e.descriptor())?;
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} outside (0, 1/2)")));
    }
    let overlap = sa_norm_unchecked(&p.circ(q));
    if overlap > ORDER_TOL {
        return Err(Error::NotOrthogonal { residual: overlap });
    }
    let pq = p.element() + q.element();
    let excess = sa_norm_unchecked(&(e.circ(&pq) - e.element()));
    if excess > ORDER_TOL {
        return Err(Error::NotDominated { residual: excess });
    }
    let e4 = epsilon.powi(4);
    let c = p.element().scale(0.5) + sqrt(&(p.element().scale(0.25) - p.u(&e.u(q)).scale(e4)))?;
    let d = q.element().scale(0.5) - sqrt(&(q.element().scale(0.25) - q.u(&e.u(p)).scale(e4)))?;
    let twist = p.u2(q, &e.star()).scale(2.0 * epsilon * epsilon);
    let minus = Projection::certify(&c + &d + &twist)?;
    let plus = Projection::certify(&c + &d - &twist)?;
    Ok(EPm { minus, plus, c, d })
}

fn check_symmetry(s: &Element, name: &str) -> Result<()> {
    let adjoint = self_adjoint_residual(s);
    let square = sa_norm_unchecked(&(s.square() - Element::unit(s.descriptor())));
    if adjoint > TOL_PROJ || square > TOL_PROJ {
        return Err(Error::PreconditionViolation(format!(
            "{name} is not a symmetry (adjoint residual {adjoint:.3e}, square residual {square:.3e})"
        )));
    }
    Ok(())
}

/// Checks that `p` and the copies `U_{sᵢ}(p)` are mutually orthogonal.
fn check_copies(p: &Projection, symmetries: &[&Element]) -> Result<()> {
    for (i, s) in symmetries.iter().enumerate() {
        s.descriptor().ensure_same(p.descriptor())?;
        check_symmetry(s, &format!("s{}", i + 1))?;
    }
    let mut family = vec![("p".to_string(), p.element().clone())];
    for (i, s) in symmetries.iter().enumerate() {
        family.push((format!("U_s{}(p)", i + 1), s.u(p)));
    }
    for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            let residual = sa_norm_unchecked(&family[i].1.circ(&family[j].1));
            if residual > ORDER_TOL {
                return Err(Error::PreconditionViolation(format!(
                    "{} and {} are not orthogonal (residual {residual:.3e})",
                    family[i].0, family[j].0
                )));
            }
        }
    }
    Ok(())
}

/// Checks `0 ≤ x ≤ bound`.
fn check_between(x: &Element, bound: &Element, name: &str, bound_name: &str) -> Result<()> {
    x.descriptor().ensure_same(bound.descriptor())?;
    ensure_positive(x).map_err(|e| Error::PreconditionViolation(format!("{name} is not positive: {e}")))?;
    ensure_positive(&(bound - x))
        .map_err(|e| Error::PreconditionViolation(format!("{name} is not below {bound_name}: {e}")))
}

/// Orthogonal projections `r`, `q` with `U_p(r) = a` and `U_p(q) = b`, built from
/// three symmetries moving `p` to orthogonal copies, for `0 ≤ a, b ≤ ½p`:
///
/// ```text
/// r = a + 2a∘s₁ + U_{s₁}(a) + U_{s₂}(p−2a) + 2U_{s₂,a^{1/2}}((p−2a)^{1/2}) + 2U_{s₁,s₂}((a∘(p−2a))^{1/2})
/// q = b − 2b∘s₁ + U_{s₁}(b) + U_{s₃}(p−2b) + 2U_{s₃,b^{1/2}}((p−2b)^{1/2}) − 2U_{s₁,s₃}((b∘(p−2b))^{1/2})
/// ```
pub fn christensen_pair(
    p: &Projection,
    s1: &Element,
    s2: &Element,
    s3: &Element,
    a: &Element,
    b: &Element,
) -> Result<(Projection, Projection)> {
    envelope_only(p.descriptor(), "christensen_pair")?;
    check_copies(p, &[s1, s2, s3])?;
    let half_p = p.element().scale(0.5);
    check_between(a, &half_p, "a", "p/2")?;
    check_between(b, &half_p, "b", "p/2")?;

    let build = |x: &Element, sx: &Element, sign: f64| -> Result<Element> {
        let rest = p.element() - x.scale(2.0);
        let x_half = sqrt(x)?;
        let rest_half = sqrt(&rest)?;
        let mixed = sqrt_unchecked(&x.circ(&rest));
        Ok(x + &x.circ(s1).scale(2.0 * sign)
            + s1.u(x)
            + sx.u(&rest)
            + sx.u2(&x_half, &rest_half).scale(2.0)
            + s1.u2(sx, &mixed).scale(2.0 * sign))
    };
    let r = Projection::certify(build(a, s2, 1.0)?)?;
    let q = Projection::certify(build(b, s3, -1.0)?)?;
    Ok((r, q))
}

fn block_matrices(x: &Element) -> Vec<CMatrix> {
    (0..x.descriptor().len()).map(|i| x.matrix_block(i).expect("envelope summand").clone()).collect()
}

/// Orthogonal projections `r̃ = z*z`, `q̃ = t*t` with `U_p(r̃) = c` and `U_p(q̃) = d`,
/// for `c, d ≥ 0` with `c + d ≤ p`, computed in the envelope:
///
/// ```text
/// z = c^{1/2} + (p−c)^{1/2} s₄
/// t = d^{1/2} + T₄ s₄ + T₅ s₅,   T₄ = −d^{1/2} (p−c)^{+1/2} c^{1/2},   T₅ = (p − d − T₄T₄*)^{1/2}
/// ```
///
/// where `(p−c)^{+1/2}` inverts eigenvalues above `1e-12` and annihilates the rest.
/// `z` and `t` are partial isometries with `zz* = tt* = p` and `zt* = 0`.
pub fn reversible_pair(
    p: &Projection,
    symmetries: [&Element; 5],
    c: &Element,
    d: &Element,
) -> Result<(Projection, Projection)> {
    let desc = p.descriptor();
    envelope_only(desc, "reversible_pair")?;
    check_copies(p, &symmetries)?;
    check_between(c, p.element(), "c", "p")?;
    check_between(d, p.element(), "d", "p")?;
    ensure_positive(&(p.element() - c - d))
        .map_err(|e| Error::PreconditionViolation(format!("c + d is not below p: {e}")))?;

    let p_minus_c = p.element() - c;
    let c_half = block_matrices(&sqrt(c)?);
    let d_half = block_matrices(&sqrt(d)?);
    let pc_half = block_matrices(&sqrt(&p_minus_c)?);
    let pc_pinv_half = block_matrices(&calculus_unchecked(&p_minus_c, |l| {
        if l > INVERSION_FLOOR {
            1.0 / l.sqrt()
        } else {
            0.0
        }
    }));
    let s4 = block_matrices(symmetries[3]);
    let s5 = block_matrices(symmetries[4]);
    let pm = block_matrices(p.element());
    let dm = block_matrices(d);

    let mut r_blocks = Vec::new();
    let mut q_blocks = Vec::new();
    for (i, kind) in desc.summands().iter().enumerate() {
        let z = &c_half[i] + &pc_half[i] * &s4[i];
        let t4 = -(&d_half[i] * &pc_pinv_half[i] * &c_half[i]);
        let t5_sq = &pm[i] - &dm[i] - &t4 * t4.adjoint();
        let t5_elem = Element::matrix(t5_sq)?;
        let t5 = sqrt(&t5_elem.real_part())?.matrix_block(0).unwrap().clone();
        let t = &d_half[i] + &t4 * &s4[i] + &t5 * &s5[i];
        r_blocks.push(Block::Matrix(symmetrize_for(*kind, z.adjoint() * &z)));
        q_blocks.push(Block::Matrix(symmetrize_for(*kind, t.adjoint() * &t)));
    }
    let r = Projection::certify(Element::from_blocks(desc.clone(), r_blocks)?)?;
    let q = Projection::certify(Element::from_blocks(desc.clone(), q_blocks)?)?;
    Ok((r, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{is_positive, operator_norm_sa, triple_product};
    use crate::linalg::re;
    use crate::lattice::{leq, orthogonal};
    use crate::sampling::{
        random_basis, random_orthogonal_copies, random_positive_under, random_projection_with_rank, trial_rng,
    };

    fn norm(x: &Element) -> f64 {
        operator_norm_sa(&x.real_part()).unwrap() + operator_norm_sa(&x.imag_part()).unwrap()
    }

    fn diag(kind: FactorKind, bits: &[f64]) -> Projection {
        Projection::certify(Element::real_diagonal(kind, bits).unwrap()).unwrap()
    }

    #[test]
    fn exchange_identical_projections() {
        let f = diag(FactorKind::Matrix(3), &[1.0, 1.0, 0.0]);
        let s = exchange_symmetry(&f, &f).unwrap();
        assert!(norm(&(s.u(&f) - f.element())) <= 1e-15);
        assert!(norm(&(&s - f.symmetry())) <= 1e-15);
    }

    #[test]
    fn exchange_on_isoclinic_model() {
        let (f, h) = isoclinic_model(0.3).unwrap();
        let s = exchange_symmetry(&f, &h).unwrap();
        assert!(norm(&(s.u(&f) - h.element())) <= 1e-9);
        let one = Element::unit(f.descriptor());
        assert!(norm(&(s.square() - one)) <= 1e-9);
    }

    #[test]
    fn exchange_rejects_far_pairs() {
        let f = diag(FactorKind::Matrix(2), &[1.0, 0.0]);
        let g = diag(FactorKind::Matrix(2), &[0.0, 1.0]);
        assert!(matches!(exchange_symmetry(&f, &g), Err(Error::TooFarApart { .. })));
    }

    #[test]
    fn exchange_in_spin_and_albert() {
        let mut rng = trial_rng(20, 0);
        for desc in ["spin4", "albert"] {
            let d: AlgebraDescriptor = desc.parse().unwrap();
            for _ in 0..20 {
                let f = random_projection_with_rank(&d, &[1], &mut rng);
                let x = crate::sampling::random_self_adjoint(&d, &mut rng);
                let g = crate::lattice::range_projection(&calculus_unchecked(&(f.element() + &x.scale(0.3)), |l| {
                    if l > 0.5 { 1.0 } else { 0.0 }
                }))
                .unwrap();
                if distance(&f, &g) > 0.9 || g.rank() != f.rank() {
                    continue;
                }
                let s = exchange_symmetry(&f, &g).unwrap();
                assert!(norm(&(s.u(&f) - g.element())) <= 1e-8, "{desc}");
            }
        }
    }

    #[test]
    fn equivalence_examples() {
        let p = diag(FactorKind::Matrix(3), &[1.0, 0.0, 0.0]);
        let q = diag(FactorKind::Matrix(3), &[1.0, 1.0, 0.0]);
        assert!(equivalent(&p, &p).unwrap());
        assert!(!equivalent(&p, &q).unwrap());
        let mut rng = trial_rng(21, 0);
        let u = random_basis(FactorKind::Matrix(3), &mut rng);
        let conj = Projection::certify(Element::matrix(&u * q.matrix_block(0).unwrap() * u.adjoint()).unwrap()).unwrap();
        assert!(equivalent(&q, &conj).unwrap());
    }

    #[test]
    fn halve_rank_two() {
        let p = diag(FactorKind::Matrix(3), &[1.0, 1.0, 0.0]);
        let h = halve(&p).unwrap();
        assert_eq!(h.first.element(), diag(FactorKind::Matrix(3), &[1.0, 0.0, 0.0]).element());
        assert_eq!(h.second.element(), diag(FactorKind::Matrix(3), &[0.0, 1.0, 0.0]).element());
        assert!(h.remainder.is_zero());
        let s = Element::from_real_rows(FactorKind::Matrix(3), &[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]])
            .unwrap();
        assert_eq!(h.symmetry, s);
    }

    #[test]
    fn halve_rank_one_and_three() {
        let p = diag(FactorKind::Matrix(3), &[0.0, 1.0, 0.0]);
        let h = halve(&p).unwrap();
        assert!(h.first.is_zero() && h.second.is_zero());
        assert_eq!(h.remainder.element(), p.element());

        let mut rng = trial_rng(22, 0);
        for kind in [FactorKind::Matrix(4), FactorKind::Symmetric(4)] {
            let d = AlgebraDescriptor::single(kind).unwrap();
            let p = random_projection_with_rank(&d, &[3], &mut rng);
            let h = halve(&p).unwrap();
            assert_eq!((h.first.rank(), h.second.rank(), h.remainder.rank()), (&[1][..], &[1][..], &[1][..]));
            let sum = h.first.element() + h.second.element() + h.remainder.element();
            assert!(norm(&(sum - p.element())) <= 1e-12);
            assert!(orthogonal(&h.first, &h.second).unwrap() && orthogonal(&h.second, &h.remainder).unwrap());
            assert!(norm(&(h.symmetry.u(&h.first) - h.second.element())) <= 1e-12);
            assert!(norm(&(h.symmetry.square() - Element::unit(&d))) <= 1e-12);
            for q in [&h.first, &h.second, &h.remainder] {
                Projection::certify(q.element().clone()).unwrap();
            }
        }
    }

    #[test]
    fn halve_errors() {
        let d: AlgebraDescriptor = "m3".parse().unwrap();
        assert!(matches!(halve(&Projection::zero(&d)), Err(Error::ZeroProjection)));
        let d: AlgebraDescriptor = "spin3".parse().unwrap();
        assert!(matches!(halve(&Projection::unit(&d)), Err(Error::UnsupportedFactor { .. })));
    }

    #[test]
    fn isoclinic_model_identities() {
        let (f, h) = isoclinic_model(0.0).unwrap();
        assert_eq!(f.element(), h.element());
        let (f, h) = isoclinic_model(std::f64::consts::FRAC_PI_4).unwrap();
        let half = Element::from_real_rows(FactorKind::Symmetric(2), &[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        assert!(norm(&(h.element() - half)) <= 1e-15);
        assert!((distance(&f, &h) - 0.5f64.sqrt()).abs() <= 1e-12);
        let theta: f64 = 0.3;
        let (f, h) = isoclinic_model(theta).unwrap();
        let c2 = theta.cos().powi(2);
        assert!(norm(&(f.u(&h) - f.element().scale(c2))) <= 1e-12);
        assert!(norm(&(h.u(&f) - h.element().scale(c2))) <= 1e-12);
        assert!((distance(&f, &h) - theta.sin()).abs() <= 1e-12);
        assert!(matches!(isoclinic_model(std::f64::consts::FRAC_PI_2), Err(Error::AngleOutOfRange(_))));
        assert!(matches!(isoclinic_model(-0.1), Err(Error::AngleOutOfRange(_))));
    }

    fn embed_m4(block: &CMatrix) -> Projection {
        let m = CMatrix::from_fn(4, 4, |i, j| if i < 2 && j < 2 { block[(i, j)] } else { re(0.0) });
        Projection::certify(Element::matrix(m).unwrap()).unwrap()
    }

    #[test]
    fn isoclinic_mid_on_embedded_model() {
        let (f2, g2) = isoclinic_model(0.2).unwrap();
        let f = embed_m4(f2.matrix_block(0).unwrap());
        let g = embed_m4(g2.matrix_block(0).unwrap());
        let e = diag(FactorKind::Matrix(4), &[0.0, 0.0, 1.0, 0.0]);
        let (h, theta) = isoclinic_mid(&f, &g, &e).unwrap();
        assert!((theta - 0.1).abs() <= 1e-12);
        let c2 = theta.cos().powi(2);
        assert!(norm(&(f.u(&h) - f.element().scale(c2))) <= 1e-7);
        assert!(norm(&(g.u(&h) - g.element().scale(c2))) <= 1e-7);
        assert!(distance(&f, &h) <= distance(&f, &g) + 1e-7);
        assert!(distance(&g, &h) <= distance(&f, &g) + 1e-7);
    }

    #[test]
    fn isoclinic_mid_identical() {
        let f = diag(FactorKind::Matrix(3), &[1.0, 0.0, 0.0]);
        let e = diag(FactorKind::Matrix(3), &[0.0, 0.0, 1.0]);
        let (h, theta) = isoclinic_mid(&f, &f, &e).unwrap();
        assert_eq!(theta, 0.0);
        assert!(norm(&(h.element() - f.element())) <= 1e-14);
    }

    #[test]
    fn isoclinic_mid_needs_room() {
        let f = diag(FactorKind::Matrix(3), &[1.0, 0.0, 0.0]);
        let g = diag(FactorKind::Matrix(3), &[1.0, 0.0, 0.0]);
        assert!(matches!(isoclinic_mid(&f, &g, &f), Err(Error::MissingSpareRoom(_))));
        let e2 = diag(FactorKind::Matrix(3), &[0.0, 1.0, 1.0]);
        assert!(matches!(isoclinic_mid(&f, &g, &e2), Err(Error::MissingSpareRoom(_))));
    }

    #[test]
    fn e_pm_trivial_cases() {
        let p = diag(FactorKind::Matrix(4), &[1.0, 1.0, 0.0, 0.0]);
        let q = diag(FactorKind::Matrix(4), &[0.0, 0.0, 1.0, 0.0]);
        let out = e_pm_construct(&p, &q, &p, 0.2).unwrap();
        assert!(norm(&(out.plus.element() - p.element())) <= 1e-12);
        assert!(norm(&(out.minus.element() - p.element())) <= 1e-12);
        assert!(norm(&(&out.c - p.element())) <= 1e-12);
        assert!(norm(&out.d) <= 1e-12);
        let out = e_pm_construct(&p, &q, &q, 0.2).unwrap();
        assert!(norm(&(out.plus.element() - p.element())) <= 1e-12);
        assert!(norm(&out.d) <= 1e-12);
    }

    #[test]
    fn e_pm_errors() {
        let p = diag(FactorKind::Matrix(3), &[1.0, 0.0, 0.0]);
        let q = diag(FactorKind::Matrix(3), &[0.0, 1.0, 0.0]);
        let e = diag(FactorKind::Matrix(3), &[0.0, 0.0, 1.0]);
        assert!(matches!(e_pm_construct(&p, &p, &p, 0.2), Err(Error::NotOrthogonal { .. })));
        assert!(matches!(e_pm_construct(&p, &q, &e, 0.2), Err(Error::NotDominated { .. })));
        assert!(matches!(e_pm_construct(&p, &q, &p, 0.5), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn e_pm_random() {
        let d: AlgebraDescriptor = "m6".parse().unwrap();
        let mut rng = trial_rng(23, 0);
        for _ in 0..20 {
            let pq = random_projection_with_rank(&d, &[4], &mut rng);
            let p = crate::sampling::random_subprojection(&pq, &mut rng);
            let q = crate::lattice::complement(&p);
            let q = crate::lattice::meet(&q, &pq).unwrap();
            let e = crate::sampling::random_subprojection(&pq, &mut rng);
            let eps = 0.2;
            let out = e_pm_construct(&p, &q, &e, eps).unwrap();
            let e4 = eps.powi(4);
            for x in [&out.plus, &out.minus] {
                assert!(leq(x, &pq).unwrap());
                assert!(equivalent(x, &p).unwrap());
            }
            let pc = p.element() - &out.c;
            assert!(is_positive(&pc) && is_positive(&(p.element().scale(0.5 * e4) - &pc)));
            assert!(is_positive(&out.d) && is_positive(&(q.element().scale(0.5 * e4) - &out.d)));
            let twist = triple_product(&p, &e, &q).unwrap().scale(2.0 * eps * eps);
            assert!(norm(&(out.minus.element() - &out.c - &out.d - &twist)) <= 1e-8);
            assert!(norm(&(out.plus.element() - &out.c - &out.d + &twist)) <= 1e-8);
        }
    }

    #[test]
    fn christensen_zero_inputs() {
        let mut rng = trial_rng(24, 0);
        let (p, s) = random_orthogonal_copies(FactorKind::Matrix(4), 1, 3, &mut rng);
        let zero = Element::zero(p.descriptor());
        let (r, q) = christensen_pair(&p, &s[0], &s[1], &s[2], &zero, &zero).unwrap();
        assert!(norm(&(r.element() - s[1].u(&p))) <= 1e-12);
        assert!(norm(&(q.element() - s[2].u(&p))) <= 1e-12);
    }

    #[test]
    fn christensen_diagonal_swaps() {
        let kind = FactorKind::Matrix(4);
        let p = diag(kind, &[1.0, 0.0, 0.0, 0.0]);
        let swap = |j: usize| {
            let mut m = CMatrix::identity(4, 4);
            m.swap_columns(0, j);
            Element::matrix(m).unwrap()
        };
        let (s1, s2, s3) = (swap(1), swap(2), swap(3));
        let a = p.element().scale(0.5);
        let b = Element::zero(p.descriptor());
        let (r, q) = christensen_pair(&p, &s1, &s2, &s3, &a, &b).unwrap();
        assert!(norm(&r.circ(&q)) <= 1e-9);
        assert!(norm(&(p.u(&r) - &a)) <= 1e-9);
        assert!(norm(&p.u(&q)) <= 1e-9);
    }

    #[test]
    fn christensen_random() {
        let mut rng = trial_rng(25, 0);
        for (kind, k) in [(FactorKind::Matrix(4), 1), (FactorKind::Matrix(8), 2), (FactorKind::Symmetric(8), 2)] {
            for _ in 0..10 {
                let (p, s) = random_orthogonal_copies(kind, k, 3, &mut rng);
                let a = random_positive_under(&p, &mut rng).scale(0.5);
                let b = random_positive_under(&p, &mut rng).scale(0.5);
                let (r, q) = christensen_pair(&p, &s[0], &s[1], &s[2], &a, &b).unwrap();
                assert!(norm(&r.circ(&q)) <= 1e-8, "{kind}");
                assert!(norm(&(p.u(&r) - &a)) <= 1e-8);
                assert!(norm(&(p.u(&q) - &b)) <= 1e-8);
            }
        }
    }

    #[test]
    fn christensen_preconditions() {
        let mut rng = trial_rng(26, 0);
        let (p, s) = random_orthogonal_copies(FactorKind::Matrix(4), 1, 3, &mut rng);
        let too_big = p.element().scale(0.8);
        let zero = Element::zero(p.descriptor());
        assert!(matches!(
            christensen_pair(&p, &s[0], &s[1], &s[2], &too_big, &zero),
            Err(Error::PreconditionViolation(_))
        ));
        assert!(matches!(
            christensen_pair(&p, &s[0], &s[0], &s[2], &zero, &zero),
            Err(Error::PreconditionViolation(_))
        ));
    }

    #[test]
    fn reversible_trivial_cases() {
        let mut rng = trial_rng(27, 0);
        let (p, s) = random_orthogonal_copies(FactorKind::Matrix(8), 1, 5, &mut rng);
        let sym = [&s[0], &s[1], &s[2], &s[3], &s[4]];
        let zero = Element::zero(p.descriptor());
        let (r, q) = reversible_pair(&p, sym, &zero, &zero).unwrap();
        assert!(norm(&(r.element() - s[3].u(&p))) <= 1e-12);
        assert!(norm(&(q.element() - s[4].u(&p))) <= 1e-12);
        let (r, q) = reversible_pair(&p, sym, p.element(), &zero).unwrap();
        assert!(norm(&p.u(&q)) <= 1e-12);
        assert!(norm(&(p.u(&r) - p.element())) <= 1e-12);
    }

    #[test]
    fn reversible_random() {
        let mut rng = trial_rng(28, 0);
        for (kind, k) in [(FactorKind::Matrix(8), 1), (FactorKind::Matrix(12), 2), (FactorKind::Symmetric(6), 1)] {
            for _ in 0..10 {
                let (p, s) = random_orthogonal_copies(kind, k, 5, &mut rng);
                let sym = [&s[0], &s[1], &s[2], &s[3], &s[4]];
                // c + d ≤ p via a random split of a positive contraction under p
                let x = random_positive_under(&p, &mut rng);
                let split = random_positive_under(&p, &mut rng);
                let c = x.u(&split.scale(0.999));
                let rest = p.element() - &x.square();
                let d = sqrt(&rest).unwrap().u(&random_positive_under(&p, &mut rng));
                let (r, q) = reversible_pair(&p, sym, &c, &d).unwrap();
                assert!(norm(&r.circ(&q)) <= 1e-8, "{kind}");
                assert!(norm(&(p.u(&r) - &c)) <= 1e-8);
                assert!(norm(&(p.u(&q) - &d)) <= 1e-8);
            }
        }
    }

    #[test]
    fn reversible_rejects_spin() {
        let d: AlgebraDescriptor = "spin3".parse().unwrap();
        let p = Projection::unit(&d);
        let one = Element::unit(&d);
        let zero = Element::zero(&d);
        assert!(matches!(
            reversible_pair(&p, [&one, &one, &one, &one, &one], &zero, &zero),
            Err(Error::UnsupportedFactor { .. })
        ));
    }
}
