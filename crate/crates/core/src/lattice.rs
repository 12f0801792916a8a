//! The orthocomplemented projection lattice.

use crate::algebra::{
    ensure_positive, resolve_unchecked, sa_norm_unchecked, AlgebraDescriptor, Element, Projection,
};
use crate::error::{Error, Result};

/// Tolerance for `p∘q = p` and `p∘q = 0`.
pub const ORDER_TOL: f64 = 1e-8;
/// Eigenvalues of `p + q` within this of 2 belong to the meet.
pub const MEET_WINDOW: f64 = 1e-6;
/// Eigenvalues above this count towards the range projection.
pub const RANGE_FLOOR: f64 = 1e-8;

/// `p ≤ q` iff `‖p∘q − p‖ ≤ 1e-8`.
pub fn leq(p: &Projection, q: &Projection) -> Result<bool> {
    p.descriptor().ensure_same(q.descriptor())?;
    Ok(sa_norm_unchecked(&(p.circ(q) - p.element())) <= ORDER_TOL)
}

/// `p ⊥ q` iff `‖p∘q‖ ≤ 1e-8`.
pub fn orthogonal(p: &Projection, q: &Projection) -> Result<bool> {
    p.descriptor().ensure_same(q.descriptor())?;
    Ok(sa_norm_unchecked(&p.circ(q)) <= ORDER_TOL)
}

/// `1 − p`.
pub fn complement(p: &Projection) -> Projection {
    let d = p.descriptor();
    let rank = d.summands().iter().zip(p.rank()).map(|(k, r)| k.unit_rank() - r).collect();
    Projection::new_unchecked(Element::unit(d) - p.element(), rank)
}

/// `p ∧ q`: the spectral projection of `p + q` at eigenvalue 2.
///
/// Eigenvalues in `(2 − 1e-4, 2 − 1e-6)` come from nearly tangent ranges and
/// are treated as not intersecting.
pub fn meet(p: &Projection, q: &Projection) -> Result<Projection> {
    p.descriptor().ensure_same(q.descriptor())?;
    let d = p.descriptor();
    let sum = p.element() + q.element();
    let res = resolve_unchecked(&sum);
    let mut element = Element::zero(d);
    let mut rank = vec![0; d.len()];
    for (l, r) in res.pairs() {
        if (l - 2.0).abs() <= MEET_WINDOW {
            element = element + r.element();
            for (acc, k) in rank.iter_mut().zip(r.rank()) {
                *acc += k;
            }
        }
    }
    Ok(Projection::new_unchecked(element, rank))
}

/// `p ∨ q = (p^⊥ ∧ q^⊥)^⊥`.
pub fn join(p: &Projection, q: &Projection) -> Result<Projection> {
    Ok(complement(&meet(&complement(p), &complement(q))?))
}

/// Smallest central projection above `p`: the unit of every summand where `p ≠ 0`.
pub fn central_cover(p: &Projection) -> Projection {
    let d: &AlgebraDescriptor = p.descriptor();
    let values: Vec<f64> = p.rank().iter().map(|&r| if r > 0 { 1.0 } else { 0.0 }).collect();
    let rank = d.summands().iter().zip(p.rank()).map(|(k, &r)| if r > 0 { k.unit_rank() } else { 0 }).collect();
    Projection::new_unchecked(Element::central(d, &values), rank)
}

/// Support of a positive element: the sum of spectral projections with eigenvalue above `1e-8`.
pub fn range_projection(x: &Element) -> Result<Projection> {
    ensure_positive(x).map_err(|e| match e {
        Error::NotSelfAdjoint { .. } => Error::NotPositive { min_eigenvalue: f64::NAN },
        other => other,
    })?;
    let d = x.descriptor();
    let res = resolve_unchecked(x);
    let mut element = Element::zero(d);
    let mut rank = vec![0; d.len()];
    for (l, r) in res.pairs() {
        if *l > RANGE_FLOOR {
            element = element + r.element();
            for (acc, k) in rank.iter_mut().zip(r.rank()) {
                *acc += k;
            }
        }
    }
    Ok(Projection::new_unchecked(element, rank))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{operator_norm_sa, FactorKind};
    use crate::linalg::{hermitian_eigen, CMatrix};
    use crate::sampling::{random_positive_contraction, random_projection, random_subprojection, trial_rng};
    use proptest::prelude::*;

    fn diag(bits: &[f64]) -> Projection {
        Projection::certify(Element::real_diagonal(FactorKind::Matrix(bits.len()), bits).unwrap()).unwrap()
    }

    /// Column-space rank of a matrix via its Gram eigenvalues.
    fn numerical_rank(m: &CMatrix) -> usize {
        hermitian_eigen(&(m.adjoint() * m)).values.iter().filter(|&&l| l > 1e-9).count()
    }

    fn block(p: &Projection) -> &CMatrix {
        p.matrix_block(0).unwrap()
    }

    fn dist(a: &Projection, b: &Projection) -> f64 {
        operator_norm_sa(&(a.element() - b.element())).unwrap()
    }

    #[test]
    fn order_examples() {
        let p = diag(&[1.0, 0.0, 0.0]);
        let q = diag(&[1.0, 1.0, 0.0]);
        assert!(leq(&p, &p).unwrap());
        assert!(leq(&p, &q).unwrap());
        assert!(!leq(&q, &p).unwrap());
        assert!(orthogonal(&p, &complement(&p)).unwrap());
        assert!(!orthogonal(&p, &p).unwrap());
    }

    #[test]
    fn complement_examples() {
        let d: AlgebraDescriptor = "m3".parse().unwrap();
        assert_eq!(complement(&Projection::zero(&d)), Projection::unit(&d));
        assert_eq!(complement(&Projection::unit(&d)).rank(), &[0]);
        let mut rng = trial_rng(1, 0);
        let p = random_projection(&d, &mut rng);
        assert!(dist(&complement(&complement(&p)), &p) <= 1e-12);
    }

    #[test]
    fn meet_join_examples() {
        let mut rng = trial_rng(2, 0);
        for desc in ["m3", "spin4", "albert"] {
            let d: AlgebraDescriptor = desc.parse().unwrap();
            let p = random_projection(&d, &mut rng);
            assert!(dist(&meet(&p, &p).unwrap(), &p) <= 1e-9);
            assert!(meet(&p, &complement(&p)).unwrap().is_zero());
            assert!(dist(&join(&p, &Projection::zero(&d)).unwrap(), &p) <= 1e-9);
            assert_eq!(join(&p, &complement(&p)).unwrap().rank(), Projection::unit(&d).rank());
        }
        let d: AlgebraDescriptor = "m2".parse().unwrap();
        for _ in 0..20 {
            let p = crate::sampling::random_projection_with_rank(&d, &[1], &mut rng);
            let q = crate::sampling::random_projection_with_rank(&d, &[1], &mut rng);
            assert!(meet(&p, &q).unwrap().is_zero());
        }
    }

    #[test]
    fn leq_matches_range_inclusion() {
        let d: AlgebraDescriptor = "m4".parse().unwrap();
        let mut rng = trial_rng(3, 0);
        for i in 0..200 {
            let q = random_projection(&d, &mut rng);
            // half the pairs are nested by construction
            let p = if i % 2 == 0 { random_subprojection(&q, &mut rng) } else { random_projection(&d, &mut rng) };
            let stacked = CMatrix::from_fn(4, 8, |r, c| if c < 4 { block(&q)[(r, c)] } else { block(&p)[(r, c - 4)] });
            let inclusion = numerical_rank(&stacked.adjoint()) == numerical_rank(block(&q));
            assert_eq!(leq(&p, &q).unwrap(), inclusion);
        }
    }

    #[test]
    fn orthogonal_matches_envelope_product() {
        let d: AlgebraDescriptor = "m4".parse().unwrap();
        let mut rng = trial_rng(4, 0);
        for i in 0..100 {
            let p = random_projection(&d, &mut rng);
            let q = if i % 2 == 0 {
                random_subprojection(&complement(&p), &mut rng)
            } else {
                random_subprojection(&p, &mut rng)
            };
            let oracle = crate::linalg::max_abs(&(block(&p) * block(&q))) <= 1e-9;
            assert_eq!(orthogonal(&p, &q).unwrap(), oracle);
        }
    }

    #[test]
    fn join_rank_formula() {
        let d: AlgebraDescriptor = "m5".parse().unwrap();
        let mut rng = trial_rng(5, 0);
        for _ in 0..50 {
            let r = random_projection(&d, &mut rng);
            let p = crate::algebra::Projection::certify((random_subprojection(&r, &mut rng)).into_element()).unwrap();
            let q = random_projection(&d, &mut rng);
            let j = join(&p, &q).unwrap();
            let m = meet(&p, &q).unwrap();
            assert_eq!(j.rank()[0] + m.rank()[0], p.rank()[0] + q.rank()[0]);
        }
    }

    #[test]
    fn central_cover_examples() {
        let d: AlgebraDescriptor = "m3".parse().unwrap();
        let p = diag(&[0.0, 1.0, 0.0]);
        assert_eq!(central_cover(&p), Projection::unit(&d));
        assert!(central_cover(&Projection::zero(&d)).is_zero());
        let d2: AlgebraDescriptor = "m3+m3".parse().unwrap();
        let p2 = Projection::certify(Element::direct_sum(&[p.element().clone(), Element::zero(&d)]).unwrap()).unwrap();
        assert_eq!(central_cover(&p2).element(), &Element::central(&d2, &[1.0, 0.0]));
    }

    #[test]
    fn range_projection_examples() {
        let mut rng = trial_rng(6, 0);
        for desc in ["m4", "s3", "spin3", "albert"] {
            let d: AlgebraDescriptor = desc.parse().unwrap();
            let p = random_projection(&d, &mut rng);
            assert!(dist(&range_projection(p.element()).unwrap(), &p) <= 1e-9);
            assert!(range_projection(&Element::zero(&d)).unwrap().is_zero());
            for _ in 0..20 {
                let x = p.u(&random_positive_contraction(&d, &mut rng));
                let r = range_projection(&x).unwrap();
                assert!(operator_norm_sa(&(r.u(&x) - &x)).unwrap() <= 1e-8);
                assert!(leq(&r, &p).unwrap());
            }
        }
        let neg = Element::real_diagonal(FactorKind::Matrix(2), &[1.0, -0.5]).unwrap();
        assert!(matches!(range_projection(&neg), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn diagonal_pairs_match_subspace_oracle() {
        for a in 0..16u32 {
            for b in 0..16u32 {
                let bits = |m: u32| (0..4).map(|i| ((m >> i) & 1) as f64).collect::<Vec<_>>();
                let (p, q) = (diag(&bits(a)), diag(&bits(b)));
                assert_eq!(meet(&p, &q).unwrap().element(), diag(&bits(a & b)).element());
                assert!(dist(&join(&p, &q).unwrap(), &diag(&bits(a | b))) == 0.0);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn orthomodular_and_de_morgan(seed in any::<u64>(), which in 0usize..4) {
            let desc = ["m4", "s3", "spin4", "albert"][which];
            let d: AlgebraDescriptor = desc.parse().unwrap();
            let mut rng = trial_rng(seed, 0);
            let q = random_projection(&d, &mut rng);
            let p = random_subprojection(&q, &mut rng);
            let rebuilt = join(&p, &meet(&q, &complement(&p)).unwrap()).unwrap();
            prop_assert!(dist(&rebuilt, &q) <= 1e-8);

            let f = random_projection(&d, &mut rng);
            let g = random_projection(&d, &mut rng);
            let lhs = complement(&join(&f, &g).unwrap());
            let rhs = meet(&complement(&f), &complement(&g)).unwrap();
            prop_assert!(dist(&lhs, &rhs) <= 1e-8);
        }
    }
}
