use crate::albert::ComplexAlbert;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermitian_norm, largest_singular_value, outer, re, CVector};

use super::descriptor::FactorKind;
use super::element::{Block, Element};
use super::projection::Projection;

/// Eigenvalues closer than this (consecutive gaps) share one spectral projection.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Self-adjointness and idempotency tolerance, in operator norm.
pub const TOL_PROJ: f64 = 1e-9;
/// Smallest eigenvalue still counted as nonnegative.
pub const POSITIVITY_TOL: f64 = 1e-9;
/// Eigenvalues below this cannot be inverted.
pub const INVERSION_FLOOR: f64 = 1e-12;

/// `x = Σ λᵢ pᵢ` with ascending `λᵢ` and mutually orthogonal `pᵢ`.
///
/// The zero element has an empty resolution.
#[derive(Debug, Clone)]
pub struct SpectralResolution {
    pairs: Vec<(f64, Projection)>,
}

impl SpectralResolution {
    pub fn pairs(&self) -> &[(f64, Projection)] {
        &self.pairs
    }

    pub fn into_pairs(self) -> Vec<(f64, Projection)> {
        self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.pairs.iter().map(|(l, _)| *l).collect()
    }

    /// `Σ λᵢ pᵢ`, or zero for an empty resolution.
    pub fn reconstruct(&self, descriptor: &crate::algebra::AlgebraDescriptor) -> Element {
        self.pairs
            .iter()
            .fold(Element::zero(descriptor), |acc, (l, p)| acc + p.element().scale(*l))
    }
}

struct Atom {
    value: f64,
    summand: usize,
    multiplicity: usize,
    block: Block,
}

fn block_atoms(kind: FactorKind, block: &Block, summand: usize, out: &mut Vec<Atom>) {
    match block {
        Block::Matrix(m) => {
            let eig = hermitian_eigen(m);
            for (i, &value) in eig.values.iter().enumerate() {
                let mut p = outer(&eig.vector(i));
                if matches!(kind, FactorKind::Symmetric(_)) {
                    // real symmetric input yields real eigenvectors; keep the payload exactly symmetric
                    p = (&p + p.transpose()).scale(0.5);
                }
                out.push(Atom { value, summand, multiplicity: 1, block: Block::Matrix(p) });
            }
        }
        Block::Spin { scalar, vector } => {
            let alpha = scalar.re;
            let u: Vec<f64> = vector.iter().map(|z| z.re).collect();
            let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                out.push(Atom { value: alpha, summand, multiplicity: 2, block: Block::unit(kind) });
                return;
            }
            for sign in [-1.0, 1.0] {
                let v = CVector::from_iterator(u.len(), u.iter().map(|x| re(0.5 * sign * x / norm)));
                out.push(Atom {
                    value: alpha + sign * norm,
                    summand,
                    multiplicity: 1,
                    block: Block::Spin { scalar: re(0.5), vector: v },
                });
            }
        }
        Block::Albert(a) => {
            for (value, p, multiplicity) in a.re.spectral() {
                out.push(Atom { value, summand, multiplicity, block: Block::Albert(ComplexAlbert::real(p)) });
            }
        }
    }
}

fn add_block(a: &Block, b: &Block) -> Block {
    a.zip(b, |x, y| x + y)
}

/// Resolution of the Hermitian part of `x`, without the self-adjointness check.
pub(crate) fn resolve_unchecked(x: &Element) -> SpectralResolution {
    let h = x.real_part();
    if h.is_exact_zero() {
        return SpectralResolution { pairs: Vec::new() };
    }
    let descriptor = x.descriptor();
    let mut atoms = Vec::new();
    for (i, (kind, block)) in h.kinds_blocks().enumerate() {
        block_atoms(kind, block, i, &mut atoms);
    }
    atoms.sort_by(|a, b| a.value.total_cmp(&b.value));

    let mut pairs = Vec::new();
    let mut start = 0;
    while start < atoms.len() {
        let mut end = start + 1;
        while end < atoms.len() && atoms[end].value - atoms[end - 1].value < CLUSTER_TOL {
            end += 1;
        }
        let cluster = &atoms[start..end];
        let weight: usize = cluster.iter().map(|a| a.multiplicity).sum();
        let value = cluster.iter().map(|a| a.value * a.multiplicity as f64).sum::<f64>() / weight as f64;
        let mut blocks: Vec<Block> = descriptor.summands().iter().map(|k| Block::zero(*k)).collect();
        let mut rank = vec![0; descriptor.len()];
        for a in cluster {
            blocks[a.summand] = add_block(&blocks[a.summand], &a.block);
            rank[a.summand] += a.multiplicity;
        }
        let element = Element::from_blocks_unchecked(descriptor.clone(), blocks);
        pairs.push((value, Projection::new_unchecked(element, rank)));
        start = end;
    }
    SpectralResolution { pairs }
}

/// Spectral resolution of a self-adjoint element.
pub fn spectral_resolution(x: &Element) -> Result<SpectralResolution> {
    ensure_self_adjoint(x)?;
    Ok(resolve_unchecked(x))
}

/// Largest `|λ|` of the Hermitian part, block by block.
pub(crate) fn sa_norm_unchecked(x: &Element) -> f64 {
    let h = x.real_part();
    h.blocks().iter().fold(0.0, |acc, b| {
        let n = match b {
            Block::Matrix(m) => hermitian_norm(m),
            Block::Spin { scalar, vector } => {
                scalar.re.abs() + vector.iter().map(|z| z.re * z.re).sum::<f64>().sqrt()
            }
            Block::Albert(a) => a.re.eigenvalues().iter().fold(0.0_f64, |m, l| m.max(l.abs())),
        };
        acc.max(n)
    })
}

/// `‖x − x*‖`.
pub fn self_adjoint_residual(x: &Element) -> f64 {
    2.0 * sa_norm_unchecked(&x.imag_part())
}

pub(crate) fn ensure_self_adjoint(x: &Element) -> Result<()> {
    let residual = self_adjoint_residual(x);
    if residual <= TOL_PROJ {
        Ok(())
    } else {
        Err(Error::NotSelfAdjoint { residual })
    }
}

/// Operator norm of a self-adjoint element, `max |λᵢ|`; zero for the zero element.
pub fn operator_norm_sa(x: &Element) -> Result<f64> {
    ensure_self_adjoint(x)?;
    Ok(sa_norm_unchecked(x))
}

/// Operator norm of a general element.
///
/// Matrix and symmetric summands use the largest singular value in the
/// envelope. Spin and Albert summands are only supported when self-adjoint.
pub fn norm(x: &Element) -> Result<f64> {
    let mut out: f64 = 0.0;
    for (i, (kind, block)) in x.kinds_blocks().enumerate() {
        let n = match block {
            Block::Matrix(m) => largest_singular_value(m),
            _ => {
                let part = x.restrict(i);
                if self_adjoint_residual(&part) > TOL_PROJ {
                    return Err(Error::UnsupportedFactor {
                        operation: "norm of a non-self-adjoint element",
                        factor: kind.to_string(),
                    });
                }
                sa_norm_unchecked(&part)
            }
        };
        out = out.max(n);
    }
    Ok(out)
}

/// Self-adjoint within [`TOL_PROJ`] with every eigenvalue `≥ −1e-9`.
pub fn is_positive(x: &Element) -> bool {
    if self_adjoint_residual(x) > TOL_PROJ {
        return false;
    }
    min_eigenvalue_unchecked(x) >= -POSITIVITY_TOL
}

/// Smallest eigenvalue of the Hermitian part; `0` for the zero element.
pub(crate) fn min_eigenvalue_unchecked(x: &Element) -> f64 {
    let res = resolve_unchecked(x);
    res.pairs.first().map_or(0.0, |(l, _)| *l)
}

pub(crate) fn ensure_positive(x: &Element) -> Result<()> {
    ensure_self_adjoint(x)?;
    let min_eigenvalue = min_eigenvalue_unchecked(x);
    if min_eigenvalue >= -POSITIVITY_TOL {
        Ok(())
    } else {
        Err(Error::NotPositive { min_eigenvalue })
    }
}

pub(crate) fn calculus_unchecked(x: &Element, f: impl Fn(f64) -> f64) -> Element {
    let res = resolve_unchecked(x);
    if res.is_empty() {
        return Element::unit(x.descriptor()).scale(f(0.0));
    }
    res.pairs.iter().fold(Element::zero(x.descriptor()), |acc, (l, p)| acc + p.element().scale(f(*l)))
}

/// `f(x) = Σ f(λᵢ) pᵢ`; the zero element maps to `f(0)·1`.
pub fn functional_calculus(x: &Element, f: impl Fn(f64) -> f64) -> Result<Element> {
    ensure_self_adjoint(x)?;
    Ok(calculus_unchecked(x, f))
}

/// Eigenvalues within this multiple of `‖x‖` of zero are solver noise for square roots.
pub const SQRT_NOISE_FLOOR: f64 = 1e-14;

/// Square root of a positive element.
///
/// Eigenvalues below `1e-14·‖x‖` (including negative ones) are set to zero, so
/// rounding noise on a null space does not turn into `O(1e-8)` mass.
pub fn sqrt(x: &Element) -> Result<Element> {
    ensure_self_adjoint(x)?;
    Ok(sqrt_unchecked(x))
}

pub(crate) fn sqrt_unchecked(x: &Element) -> Element {
    let floor = SQRT_NOISE_FLOOR * sa_norm_unchecked(x);
    calculus_unchecked(x, |l| if l > floor { l.sqrt() } else { 0.0 })
}

/// `x^{−1/2}`; every eigenvalue must clear [`INVERSION_FLOOR`].
pub fn inv_sqrt(x: &Element) -> Result<Element> {
    ensure_self_adjoint(x)?;
    let res = resolve_unchecked(x);
    let min = res.pairs.first().map_or(0.0, |(l, _)| *l);
    if res.is_empty() || min < INVERSION_FLOOR {
        return Err(Error::InversionIllConditioned { eigenvalue: min });
    }
    Ok(calculus_unchecked(x, |l| 1.0 / l.sqrt()))
}

/// `(x₊, x₋)` with `x = x₊ − x₋` and `x₊∘x₋ = 0`.
pub fn positive_negative_parts(x: &Element) -> Result<(Element, Element)> {
    ensure_self_adjoint(x)?;
    Ok((calculus_unchecked(x, |l| l.max(0.0)), calculus_unchecked(x, |l| (-l).max(0.0))))
}
