//! Seeded random elements, projections and symmetries.
//!
//! Matrix projections are spectral projections of GUE (or real GOE for `Sₙ`)
//! samples, i.e. Haar-conjugated diagonal projections. Spin projections come
//! from Gaussian vectors, so rank-one ones are `½(1 ⊕ û)` with `û` uniform on
//! the sphere. Albert projections are spectral projections of Gaussian
//! elements, i.e. conjugates of diagonal frame idempotents.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;

use crate::albert::{AlbertElement, ComplexAlbert};
use crate::algebra::{
    calculus_unchecked, resolve_unchecked, sa_norm_unchecked, AlgebraDescriptor, Block, Element, FactorKind,
    Projection,
};
use crate::linalg::{c, hermitian_eigen, re, CMatrix, CVector};

/// Per-trial generator: `ChaCha8` seeded from `(seed, trial)` so trials are independent of scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn gauss<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn cgauss<R: Rng + ?Sized>(rng: &mut R) -> crate::linalg::C64 {
    c(gauss(rng), gauss(rng))
}

fn random_block<R: Rng + ?Sized>(kind: FactorKind, self_adjoint: bool, rng: &mut R) -> Block {
    match kind {
        FactorKind::Matrix(n) => {
            let g = CMatrix::from_fn(n, n, |_, _| cgauss(rng));
            Block::Matrix(if self_adjoint { (&g + g.adjoint()).scale(0.5) } else { g })
        }
        FactorKind::Symmetric(n) => {
            let g = if self_adjoint {
                CMatrix::from_fn(n, n, |_, _| re(gauss(rng)))
            } else {
                CMatrix::from_fn(n, n, |_, _| cgauss(rng))
            };
            Block::Matrix((&g + g.transpose()).scale(0.5))
        }
        FactorKind::Spin(k) => {
            if self_adjoint {
                Block::Spin { scalar: re(gauss(rng)), vector: CVector::from_fn(k, |_, _| re(gauss(rng))) }
            } else {
                Block::Spin { scalar: cgauss(rng), vector: CVector::from_fn(k, |_, _| cgauss(rng)) }
            }
        }
        FactorKind::Albert => {
            let mut draw = || {
                let coords: Vec<f64> = (0..27).map(|_| gauss(rng)).collect();
                AlbertElement::from_coordinates(&coords)
            };
            let re_part = draw();
            let im_part = if self_adjoint { AlbertElement::zero() } else { draw() };
            Block::Albert(ComplexAlbert { re: re_part, im: im_part })
        }
    }
}

fn normalized(x: Element) -> Element {
    let size = sa_norm_unchecked(&x) + sa_norm_unchecked(&x.imag_part());
    if size > 0.0 {
        x.scale(1.0 / size)
    } else {
        x
    }
}

/// Gaussian self-adjoint element scaled to operator norm 1.
pub fn random_self_adjoint<R: Rng + ?Sized>(descriptor: &AlgebraDescriptor, rng: &mut R) -> Element {
    let blocks = descriptor.summands().iter().map(|k| random_block(*k, true, rng)).collect();
    normalized(Element::from_blocks_unchecked(descriptor.clone(), blocks))
}

/// Gaussian general element scaled so that `‖Re x‖ + ‖Im x‖ = 1`.
pub fn random_element<R: Rng + ?Sized>(descriptor: &AlgebraDescriptor, rng: &mut R) -> Element {
    let blocks = descriptor.summands().iter().map(|k| random_block(*k, false, rng)).collect();
    normalized(Element::from_blocks_unchecked(descriptor.clone(), blocks))
}

/// Positive element with spectrum in `[0, 1]`.
pub fn random_positive_contraction<R: Rng + ?Sized>(descriptor: &AlgebraDescriptor, rng: &mut R) -> Element {
    let x = random_self_adjoint(descriptor, rng);
    let res = resolve_unchecked(&x);
    res.pairs()
        .iter()
        .fold(Element::zero(descriptor), |acc, (_, p)| acc + p.element().scale(rng.random::<f64>()))
}

/// Projection of the given rank per summand, drawn from the sampling distribution of the module docs.
pub fn random_projection_with_rank<R: Rng + ?Sized>(
    descriptor: &AlgebraDescriptor,
    rank: &[usize],
    rng: &mut R,
) -> Projection {
    assert_eq!(rank.len(), descriptor.len());
    let blocks: Vec<Block> = descriptor
        .summands()
        .iter()
        .zip(rank)
        .map(|(kind, &r)| {
            assert!(r <= kind.unit_rank(), "rank {r} exceeds {kind}");
            match random_block(*kind, true, rng) {
                Block::Matrix(m) => {
                    let eig = hermitian_eigen(&m);
                    let mut p = CMatrix::zeros(m.nrows(), m.ncols());
                    for i in 0..r {
                        p += crate::linalg::outer(&eig.vector(i));
                    }
                    if matches!(kind, FactorKind::Symmetric(_)) {
                        p = (&p + p.transpose()).scale(0.5);
                    }
                    Block::Matrix(p)
                }
                Block::Spin { vector, .. } => match r {
                    0 => Block::zero(*kind),
                    2 => Block::unit(*kind),
                    _ => {
                        let norm = vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                        Block::Spin { scalar: re(0.5), vector: vector.map(|z| z * (0.5 / norm)) }
                    }
                },
                Block::Albert(a) => {
                    let spec = a.re.spectral();
                    // generic Gaussian samples have simple spectrum
                    let mut p = AlbertElement::zero();
                    for (_, q, _) in spec.iter().take(r) {
                        p = p + *q;
                    }
                    Block::Albert(ComplexAlbert::real(p))
                }
            }
        })
        .collect();
    Projection::new_unchecked(Element::from_blocks_unchecked(descriptor.clone(), blocks), rank.to_vec())
}

/// Projection whose rank in each summand is uniform over `0..=unit_rank`.
pub fn random_projection<R: Rng + ?Sized>(descriptor: &AlgebraDescriptor, rng: &mut R) -> Projection {
    let rank: Vec<usize> = descriptor.summands().iter().map(|k| rng.random_range(0..=k.unit_rank())).collect();
    random_projection_with_rank(descriptor, &rank, rng)
}

/// Nonzero, non-unit projection in every summand (rank uniform over `1..unit_rank`).
pub fn random_proper_projection<R: Rng + ?Sized>(descriptor: &AlgebraDescriptor, rng: &mut R) -> Projection {
    let rank: Vec<usize> = descriptor.summands().iter().map(|k| rng.random_range(1..k.unit_rank().max(2))).collect();
    random_projection_with_rank(descriptor, &rank, rng)
}

/// Random symmetry `2p − 1`.
pub fn random_symmetry<R: Rng + ?Sized>(descriptor: &AlgebraDescriptor, rng: &mut R) -> Element {
    random_projection(descriptor, rng).symmetry()
}

/// Random subprojection of `p`.
///
/// A random self-adjoint `x` is compressed to `U_p(x)` and shifted by a
/// constant outside `[-1, 1]` on `1 − p`; eigenprojections of the result away
/// from that constant live under `p`, and a random subset of them is summed.
pub fn random_subprojection<R: Rng + ?Sized>(p: &Projection, rng: &mut R) -> Projection {
    const SHIFT: f64 = 4.0;
    let d = p.descriptor();
    let x = random_self_adjoint(d, rng);
    let one = Element::unit(d);
    let y = p.u(&x) + (&one - p.element()).scale(SHIFT);
    let res = resolve_unchecked(&y);
    let mut pieces: Vec<&Projection> =
        res.pairs().iter().filter(|(l, _)| (l - SHIFT).abs() > 0.5).map(|(_, q)| q).collect();
    pieces.shuffle(rng);
    let keep = rng.random_range(0..=pieces.len());
    let mut element = Element::zero(d);
    let mut rank = vec![0; d.len()];
    for q in &pieces[..keep] {
        element = element + q.element();
        for (r, s) in rank.iter_mut().zip(q.rank()) {
            *r += s;
        }
    }
    Projection::new_unchecked(element, rank)
}

/// Random positive element with spectrum in `[0, 1]` whose range sits under `p`.
pub fn random_positive_under<R: Rng + ?Sized>(p: &Projection, rng: &mut R) -> Element {
    let a = random_positive_contraction(p.descriptor(), rng);
    let compressed = p.u(&a);
    calculus_unchecked(&compressed, |l| l.clamp(0.0, 1.0))
}

/// Random unitary (orthogonal for `Sₙ`) basis of a single envelope summand, as matrix columns.
pub fn random_basis<R: Rng + ?Sized>(kind: FactorKind, rng: &mut R) -> CMatrix {
    match random_block(kind, true, rng) {
        Block::Matrix(m) => hermitian_eigen(&m).vectors,
        _ => panic!("random_basis needs a matrix or symmetric summand, got {kind}"),
    }
}

/// A rank-`k` projection `p` in a single `Mₙ`/`Sₙ` summand together with
/// symmetries `s₁..s_m` whose images `U_{sᵢ}(p)` are pairwise orthogonal and
/// orthogonal to `p`. Needs `(m + 1)·k ≤ n`.
pub fn random_orthogonal_copies<R: Rng + ?Sized>(
    kind: FactorKind,
    k: usize,
    copies: usize,
    rng: &mut R,
) -> (Projection, Vec<Element>) {
    let n = kind.envelope_dim().expect("envelope summand");
    assert!((copies + 1) * k <= n, "{kind} has no room for {copies} copies of rank {k}");
    let basis = random_basis(kind, rng);
    let descriptor = AlgebraDescriptor::single(kind).expect("valid kind");
    let span = |start: usize| {
        let mut m = CMatrix::zeros(n, n);
        for j in start..start + k {
            m += crate::linalg::outer(&basis.column(j).into_owned());
        }
        m
    };
    let symmetric = |m: CMatrix| if matches!(kind, FactorKind::Symmetric(_)) { (&m + m.transpose()).scale(0.5) } else { m };
    let p = symmetric(span(0));
    let mut symmetries = Vec::with_capacity(copies);
    for i in 1..=copies {
        let mut w = CMatrix::zeros(n, n);
        for j in 0..k {
            w += basis.column(i * k + j) * basis.column(j).adjoint();
        }
        let q = symmetric(span(i * k));
        let s = &w + w.adjoint() + CMatrix::identity(n, n) - &p - q;
        symmetries.push(Element::from_blocks_unchecked(descriptor.clone(), vec![Block::Matrix(symmetric(s))]));
    }
    let p = Projection::new_unchecked(Element::from_blocks_unchecked(descriptor, vec![Block::Matrix(p)]), vec![k]);
    (p, symmetries)
}
