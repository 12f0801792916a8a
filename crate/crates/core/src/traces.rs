//! Centre-valued traces on finite direct sums of factors.
//!
//! The centre of a direct sum is one real scalar per summand, so the trace is
//! the vector of per-summand normalized traces: `tr/n` on `Mₙ` and `Sₙ`, the
//! scalar part on spin factors and `T/3` on the Albert factor.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::albert::{AlbertElement, ComplexAlbert};
use crate::algebra::{ensure_self_adjoint, unnormalized_trace, Block, Element, FactorKind, Projection};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, projector, re, CVector};

/// Distance to the attainable grid still accepted as on-grid.
pub const GRID_TOL: f64 = 1e-9;

/// One real value per summand, ordered entrywise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentreValue(pub Vec<f64>);

impl CentreValue {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Entrywise `≤` within `tol`.
    pub fn le(&self, other: &CentreValue, tol: f64) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| *a <= b + tol)
    }
}

pub(crate) fn normalized_trace_unchecked(x: &Element) -> CentreValue {
    let raw = unnormalized_trace(x);
    CentreValue(raw.iter().zip(x.descriptor().summands()).map(|(t, k)| t / k.unit_rank() as f64).collect())
}

/// The centre-valued trace of a self-adjoint element.
pub fn normalized_trace(x: &Element) -> Result<CentreValue> {
    ensure_self_adjoint(x)?;
    Ok(normalized_trace_unchecked(x))
}

/// Per-summand comparison of traces; values within `1e-9` compare equal.
pub fn trace_compare(p: &Projection, q: &Projection) -> Result<Vec<Ordering>> {
    p.descriptor().ensure_same(q.descriptor())?;
    let (a, b) = (normalized_trace_unchecked(p), normalized_trace_unchecked(q));
    Ok(a.0
        .iter()
        .zip(&b.0)
        .map(|(x, y)| if (x - y).abs() <= GRID_TOL { Ordering::Equal } else { x.total_cmp(y) })
        .collect())
}

/// A subprojection `q ≤ p` with `τ(q) = w`.
///
/// In each summand the attainable traces are the multiples of `1/rank(1)` up to
/// `τ(p)`. Matrix summands take the lowest-index range eigenvectors of `p`.
/// Spin and Albert summands use diagonal frame projections when `p = 1` and the
/// normalized compression `U_p(e)` of a frame projection `e` otherwise.
pub fn subprojection_with_trace(p: &Projection, w: &CentreValue) -> Result<Projection> {
    let d = p.descriptor();
    if w.0.len() != d.len() {
        return Err(Error::TraceUnreachable(format!("{} values for {} summands", w.0.len(), d.len())));
    }
    let mut blocks = Vec::with_capacity(d.len());
    let mut ranks = Vec::with_capacity(d.len());
    for (i, (kind, block)) in p.kinds_blocks().enumerate() {
        let grid = kind.unit_rank() as f64;
        let target = w.0[i];
        let k = (target * grid).round();
        if (target - k / grid).abs() > GRID_TOL {
            return Err(Error::TraceUnreachable(format!("{target} is not a multiple of 1/{grid} in summand {kind}")));
        }
        if k < 0.0 || k as usize > p.rank()[i] {
            return Err(Error::TraceUnreachable(format!(
                "{target} lies outside [0, {}] in summand {kind}",
                p.rank()[i] as f64 / grid
            )));
        }
        let k = k as usize;
        blocks.push(sub_block(kind, block, p.rank()[i], k));
        ranks.push(k);
    }
    Ok(Projection::new_unchecked(Element::from_blocks(d.clone(), blocks)?, ranks))
}

fn sub_block(kind: FactorKind, block: &Block, rank: usize, k: usize) -> Block {
    if k == 0 {
        return Block::zero(kind);
    }
    if k == rank {
        return block.clone();
    }
    match (kind, block) {
        (_, Block::Matrix(m)) => {
            let eig = hermitian_eigen(m);
            let n = m.nrows();
            let range: Vec<CVector> = (n - rank..n).map(|i| eig.vector(i)).collect();
            let q = projector(&range[..k], n);
            if matches!(kind, FactorKind::Symmetric(_)) {
                Block::Matrix((&q + q.transpose()).scale(0.5))
            } else {
                Block::Matrix(q)
            }
        }
        // rank(p) = 2 = rank(1), k = 1
        (FactorKind::Spin(dim), Block::Spin { .. }) => {
            let mut v = CVector::zeros(dim);
            v[0] = re(0.5);
            Block::Spin { scalar: re(0.5), vector: v }
        }
        (_, Block::Albert(a)) => {
            if rank == 3 {
                let diag = if k == 1 { [1.0, 0.0, 0.0] } else { [1.0, 1.0, 0.0] };
                return Block::Albert(ComplexAlbert::real(AlbertElement::diagonal(diag)));
            }
            // rank(p) = 2, k = 1: U_p maps a minimal projection to a multiple of a minimal projection
            let p = a.re;
            let best = (0..3)
                .map(|i| {
                    let e = AlbertElement::diagonal_unit(i);
                    p.jordan_mul(&e).jordan_mul(&p).scale(2.0) - p.jordan_mul(&p).jordan_mul(&e)
                })
                .max_by(|x, y| x.trace().total_cmp(&y.trace()))
                .expect("three frame projections");
            Block::Albert(ComplexAlbert::real(best.scale(1.0 / best.trace())))
        }
        _ => unreachable!("block shapes are fixed by the descriptor"),
    }
}
