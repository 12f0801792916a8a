//! Bounded finitely additive measures on projection lattices.
//!
//! A [`Measure`] is either backed by a self-adjoint density `ρ`, evaluated
//! through the trace pairing `⟨ρ, x⟩ = Σᵢ τᵢ(ρ∘x)` (one unit weight per
//! summand), or by an opaque oracle on projections. The quasi-linear extension
//! `μ̄` is built from spectral resolutions, and the linear fit reconstructs a
//! density from `μ̄` on a self-adjoint basis. On rank-two factors the built-in
//! counterexamples admit no such density.

mod builtin;
mod document;
mod extension;
mod measure;

pub use builtin::{kadison_s2, measure_by_identifier, spin_counterexample, FRAME_MATCH_TOL};
pub use document::{DensityBlock, MeasureDocument};
pub use extension::{
    additivity_residual, alpha, continuity_bound, fit_linear_functional, normalize_witness, quasi_linear_extend,
    quasi_linear_report, self_adjoint_basis, structured_projections, symmetry_sup_check, variation, Estimate,
    LinearFit, QuasiLinearReport, SymmetrySup, ORACLE_SAMPLES,
};
pub(crate) use extension::extend_sa;
#[cfg(test)]
pub(crate) use measure::pairing_sa;
pub use measure::{from_density, pairing, Measure, ProjectionOracle};
