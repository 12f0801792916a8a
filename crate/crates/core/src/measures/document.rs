//! JSON documents for density measures.

use serde::{Deserialize, Serialize};

use crate::albert::{AlbertElement, ComplexAlbert};
use crate::algebra::{AlgebraDescriptor, Block, Element};
use crate::error::{Error, Result};
use crate::linalg::{c, re, CMatrix, CVector};

use super::measure::Measure;

/// Serialized form of a density measure: the descriptor and one block per summand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureDocument {
    pub descriptor: AlgebraDescriptor,
    pub density: Vec<DensityBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DensityBlock {
    /// Row-major real and imaginary parts; `im` may be omitted for real matrices.
    Matrix {
        re: Vec<Vec<f64>>,
        #[serde(default)]
        im: Vec<Vec<f64>>,
    },
    Spin { scalar: f64, vector: Vec<f64> },
    /// Three diagonal entries, then the octonions at positions (2,3), (3,1), (1,2).
    Albert { coordinates: Vec<f64> },
}

fn bad(reason: impl Into<String>) -> Error {
    Error::Document(reason.into())
}

impl DensityBlock {
    fn from_block(block: &Block) -> DensityBlock {
        match block {
            Block::Matrix(m) => {
                let rows = |f: fn(&crate::linalg::C64) -> f64| {
                    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect()).collect()
                };
                DensityBlock::Matrix { re: rows(|z| z.re), im: rows(|z| z.im) }
            }
            Block::Spin { scalar, vector } => {
                DensityBlock::Spin { scalar: scalar.re, vector: vector.iter().map(|z| z.re).collect() }
            }
            Block::Albert(a) => DensityBlock::Albert { coordinates: a.re.coordinates().to_vec() },
        }
    }

    fn to_block(&self) -> Result<Block> {
        Ok(match self {
            DensityBlock::Matrix { re: real, im } => {
                let n = real.len();
                if real.iter().any(|r| r.len() != n) {
                    return Err(bad("matrix block is not square"));
                }
                if !im.is_empty() && (im.len() != n || im.iter().any(|r| r.len() != n)) {
                    return Err(bad("imaginary part does not match the real part"));
                }
                let imag = |i: usize, j: usize| if im.is_empty() { 0.0 } else { im[i][j] };
                Block::Matrix(CMatrix::from_fn(n, n, |i, j| c(real[i][j], imag(i, j))))
            }
            DensityBlock::Spin { scalar, vector } => {
                Block::Spin { scalar: re(*scalar), vector: CVector::from_iterator(vector.len(), vector.iter().map(|x| re(*x))) }
            }
            DensityBlock::Albert { coordinates } => {
                if coordinates.len() != 27 {
                    return Err(bad(format!("albert block has {} coordinates, expected 27", coordinates.len())));
                }
                Block::Albert(ComplexAlbert::real(AlbertElement::from_coordinates(coordinates)))
            }
        })
    }
}

impl MeasureDocument {
    pub fn from_json(text: &str) -> Result<MeasureDocument> {
        serde_json::from_str(text).map_err(|e| bad(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn into_measure(self) -> Result<Measure> {
        let blocks = self.density.iter().map(DensityBlock::to_block).collect::<Result<Vec<_>>>()?;
        let rho = Element::from_blocks(self.descriptor, blocks)?;
        Measure::from_density(&rho)
    }

    /// `None` for oracle measures, which are referenced by identifier instead.
    pub fn from_measure(mu: &Measure) -> Option<MeasureDocument> {
        let rho = mu.witness()?;
        Some(MeasureDocument {
            descriptor: rho.descriptor().clone(),
            density: rho.blocks().iter().map(DensityBlock::from_block).collect(),
        })
    }
}
