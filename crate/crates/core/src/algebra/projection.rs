use std::ops::Deref;

use crate::error::{Error, Result};

use super::descriptor::AlgebraDescriptor;
use super::element::{Block, Element};
use super::spectral::{sa_norm_unchecked, self_adjoint_residual, TOL_PROJ};

/// An element certified to satisfy `p* = p = p∘p` within [`TOL_PROJ`], with its rank per summand.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    element: Element,
    rank: Vec<usize>,
}

impl Projection {
    /// Certifies `element` as a projection.
    pub fn certify(element: Element) -> Result<Projection> {
        let adjoint = self_adjoint_residual(&element);
        let defect = element.square() - &element;
        let idempotency = sa_norm_unchecked(&defect) + sa_norm_unchecked(&defect.imag_part());
        if adjoint > TOL_PROJ || idempotency > TOL_PROJ {
            return Err(Error::NotProjection { idempotency, adjoint });
        }
        let rank = rank_by_trace(&element);
        Ok(Projection { element, rank })
    }

    pub(crate) fn new_unchecked(element: Element, rank: Vec<usize>) -> Projection {
        Projection { element, rank }
    }

    pub fn zero(descriptor: &AlgebraDescriptor) -> Projection {
        Projection { element: Element::zero(descriptor), rank: vec![0; descriptor.len()] }
    }

    pub fn unit(descriptor: &AlgebraDescriptor) -> Projection {
        let rank = descriptor.summands().iter().map(|k| k.unit_rank()).collect();
        Projection { element: Element::unit(descriptor), rank }
    }

    pub fn element(&self) -> &Element {
        &self.element
    }

    pub fn into_element(self) -> Element {
        self.element
    }

    pub fn rank(&self) -> &[usize] {
        &self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.rank.iter().all(|&r| r == 0)
    }

    /// The symmetry `2p − 1`.
    pub fn symmetry(&self) -> Element {
        self.element.scale(2.0) - Element::unit(self.element.descriptor())
    }

    /// `(1 + s)/2` for a symmetry `s`.
    pub fn from_symmetry(s: &Element) -> Result<Projection> {
        Projection::certify((s + &Element::unit(s.descriptor())).scale(0.5))
    }
}

impl Deref for Projection {
    type Target = Element;
    fn deref(&self) -> &Element {
        &self.element
    }
}

/// Trace of the Hermitian part per summand, without normalization: `Re tr` for
/// matrices, `2·Re α` for spin factors and `T` for the Albert factor.
pub fn unnormalized_trace(x: &Element) -> Vec<f64> {
    x.blocks()
        .iter()
        .map(|b| match b {
            Block::Matrix(m) => m.diagonal().iter().map(|z| z.re).sum(),
            Block::Spin { scalar, .. } => 2.0 * scalar.re,
            Block::Albert(a) => a.re.trace(),
        })
        .collect()
}

fn rank_by_trace(x: &Element) -> Vec<usize> {
    unnormalized_trace(x).iter().map(|t| t.round().max(0.0) as usize).collect()
}
