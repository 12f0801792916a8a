//! Dense arithmetic for `Mₙ(ℂ)`, `Sₙ(ℂ)`, spin factors, the Albert factor and
//! their finite direct sums.

mod descriptor;
mod element;
mod projection;
mod spectral;

pub use descriptor::{AlgebraDescriptor, FactorKind};
pub use element::{involution, jordan_mul, triple_product, u_bilinear, u_map, Block, Element, TOL_SYM};
pub use projection::{unnormalized_trace, Projection};
pub use spectral::{
    functional_calculus, inv_sqrt, is_positive, norm, operator_norm_sa, positive_negative_parts,
    self_adjoint_residual, spectral_resolution, sqrt, SpectralResolution, CLUSTER_TOL, INVERSION_FLOOR,
    POSITIVITY_TOL, SQRT_NOISE_FLOOR, TOL_PROJ,
};
pub(crate) use spectral::{
    calculus_unchecked, ensure_positive, ensure_self_adjoint, min_eigenvalue_unchecked, resolve_unchecked, sa_norm_unchecked, sqrt_unchecked,
};
