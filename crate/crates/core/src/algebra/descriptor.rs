use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One simple summand of a finite-dimensional JB*-algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorKind {
    /// `Mₙ(ℂ)`
    Matrix(usize),
    /// `Sₙ(ℂ)`, complex symmetric matrices with entrywise conjugation as involution.
    Symmetric(usize),
    /// Spin factor with self-adjoint part `ℝ·1 ⊕ ℝᵏ`.
    Spin(usize),
    /// Complexified `H₃(𝕆)`.
    Albert,
}

impl FactorKind {
    /// Matrix size when the summand lives in an associative envelope.
    pub fn envelope_dim(&self) -> Option<usize> {
        match *self {
            FactorKind::Matrix(n) | FactorKind::Symmetric(n) => Some(n),
            _ => None,
        }
    }

    /// Rank of the unit: the number of pairwise orthogonal minimal projections in a frame.
    pub fn unit_rank(&self) -> usize {
        match *self {
            FactorKind::Matrix(n) | FactorKind::Symmetric(n) => n,
            FactorKind::Spin(_) => 2,
            FactorKind::Albert => 3,
        }
    }

    /// Real dimension of the self-adjoint part.
    pub fn self_adjoint_dim(&self) -> usize {
        match *self {
            FactorKind::Matrix(n) => n * n,
            FactorKind::Symmetric(n) => n * (n + 1) / 2,
            FactorKind::Spin(k) => k + 1,
            FactorKind::Albert => 27,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FactorKind::Matrix(_) => "matrix",
            FactorKind::Symmetric(_) => "symmetric",
            FactorKind::Spin(_) => "spin",
            FactorKind::Albert => "albert",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            FactorKind::Matrix(0) | FactorKind::Symmetric(0) => {
                Err(Error::InvalidDescriptor(format!("{self}: dimension must be positive")))
            }
            FactorKind::Spin(k) if k < 2 => Err(Error::DimensionTooSmall(k)),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorKind::Matrix(n) => write!(f, "m{n}"),
            FactorKind::Symmetric(n) => write!(f, "s{n}"),
            FactorKind::Spin(k) => write!(f, "spin{k}"),
            FactorKind::Albert => write!(f, "albert"),
        }
    }
}

/// A finite direct sum of factors. Descriptors are compatible iff equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AlgebraDescriptor {
    summands: Vec<FactorKind>,
}

impl AlgebraDescriptor {
    pub fn new(summands: Vec<FactorKind>) -> Result<Self> {
        if summands.is_empty() {
            return Err(Error::InvalidDescriptor("no summands".into()));
        }
        for s in &summands {
            s.validate()?;
        }
        Ok(AlgebraDescriptor { summands })
    }

    pub fn single(kind: FactorKind) -> Result<Self> {
        Self::new(vec![kind])
    }

    pub fn summands(&self) -> &[FactorKind] {
        &self.summands
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn ensure_same(&self, other: &AlgebraDescriptor) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch { left: self.to_string(), right: other.to_string() })
        }
    }

    /// True when every summand is `Mₙ` or `Sₙ`.
    pub fn is_envelope(&self) -> bool {
        self.summands.iter().all(|s| s.envelope_dim().is_some())
    }
}

impl fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.summands.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

fn parse_token(token: &str) -> std::result::Result<FactorKind, String> {
    let number = |digits: &str| -> std::result::Result<usize, String> {
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("expected a dimension in {token:?}"));
        }
        digits.parse().map_err(|_| format!("dimension out of range in {token:?}"))
    };
    if token == "albert" {
        Ok(FactorKind::Albert)
    } else if let Some(rest) = token.strip_prefix("spin") {
        Ok(FactorKind::Spin(number(rest)?))
    } else if let Some(rest) = token.strip_prefix('m') {
        Ok(FactorKind::Matrix(number(rest)?))
    } else if let Some(rest) = token.strip_prefix('s') {
        Ok(FactorKind::Symmetric(number(rest)?))
    } else {
        Err(format!("unknown factor token {token:?}"))
    }
}

impl FromStr for AlgebraDescriptor {
    type Err = Error;

    /// Grammar: tokens `mN`, `sN`, `spinK`, `albert` joined by `+`.
    fn from_str(input: &str) -> Result<Self> {
        let parse_err = |reason: String| Error::Parse { input: input.to_string(), reason };
        let summands = input
            .split('+')
            .map(parse_token)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(parse_err)?;
        AlgebraDescriptor::new(summands).map_err(|e| parse_err(e.to_string()))
    }
}

impl TryFrom<String> for AlgebraDescriptor {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<AlgebraDescriptor> for String {
    fn from(d: AlgebraDescriptor) -> String {
        d.to_string()
    }
}
