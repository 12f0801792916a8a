//! Finitely additive measures on rank-two factors with no linear extension.

use std::sync::Arc;

use crate::algebra::{AlgebraDescriptor, Block, Element, FactorKind, Projection};
use crate::error::{Error, Result};

use super::measure::Measure;

/// Distance (max-abs) within which a projection is matched to a distinguished one.
pub const FRAME_MATCH_TOL: f64 = 1e-10;

/// Values on a rank-one projection `[[a, b], [b, c]]` of `S₂(ℂ)`: `1` at `E₁₁`,
/// `0` at `E₂₂` and `½` everywhere else.
fn kadison_rank_one(a: f64, b: f64, c: f64) -> f64 {
    let dist = |x: f64, z: f64| (a - x).abs().max(b.abs()).max((c - z).abs());
    if dist(1.0, 0.0) <= FRAME_MATCH_TOL {
        1.0
    } else if dist(0.0, 1.0) <= FRAME_MATCH_TOL {
        0.0
    } else {
        0.5
    }
}

fn by_rank(p: &Projection, rank_one: impl Fn(&Block) -> f64) -> f64 {
    match p.rank()[0] {
        0 => 0.0,
        1 => rank_one(p.block(0)),
        _ => 1.0,
    }
}

fn s2_unit(i: usize) -> Projection {
    let mut diag = [0.0, 0.0];
    diag[i] = 1.0;
    Projection::certify(Element::real_diagonal(FactorKind::Symmetric(2), &diag).expect("2x2 diagonal"))
        .expect("diagonal unit")
}

/// The finitely additive measure on `S₂(ℂ)` with `μ(E₁₁) = 1`, `μ(E₂₂) = 0` and
/// `μ(p) = ½` on every other rank-one projection.
///
/// Complementary rank-one pairs always sum to `1`, so the rule is additive, but
/// a linear functional agreeing with it at `E₁₁` and `E₂₂` is `x ↦ x₁₁`, which
/// takes the value `⅓` at `[[⅓, √2/3], [√2/3, ⅔]]`.
pub fn kadison_s2() -> Measure {
    let descriptor = AlgebraDescriptor::single(FactorKind::Symmetric(2)).expect("s2");
    Measure::from_oracle(
        descriptor,
        "kadison_s2",
        1.0,
        vec![s2_unit(0), s2_unit(1)],
        Arc::new(|p: &Projection| {
            by_rank(p, |block| match block {
                Block::Matrix(m) => kadison_rank_one(m[(0, 0)].re, m[(0, 1)].re, m[(1, 1)].re),
                _ => unreachable!("s2 has a matrix block"),
            })
        }),
    )
}

fn spin_rank_one(direction: &[f64]) -> Element {
    Element::spin_real(0.5, &direction.iter().map(|u| 0.5 * u).collect::<Vec<_>>()).expect("nonempty vector")
}

/// The extension of [`kadison_s2`] to the spin factor with vector dimension `k`.
///
/// `S₂(ℂ)` is the spin factor on the first two coordinates through
/// `[[a, b], [b, c]] ↦ ½(a + c) ⊕ (½(a − c), b)`. Rank-one projections
/// `½(1 ⊕ û)` with `û` in that plane take the transported values; every other
/// rank-one projection gets `½`.
pub fn spin_counterexample(k: usize) -> Result<Measure> {
    if k < 2 {
        return Err(Error::DimensionTooSmall(k));
    }
    let descriptor = AlgebraDescriptor::single(FactorKind::Spin(k))?;
    let mut e1 = vec![0.0; k];
    e1[0] = 1.0;
    let minus_e1: Vec<f64> = e1.iter().map(|u| -u).collect();
    let landmarks = [e1, minus_e1]
        .iter()
        .map(|u| Projection::certify(spin_rank_one(u)).expect("spin rank-one projection"))
        .collect();
    Ok(Measure::from_oracle(
        descriptor,
        format!("spin_counterexample:{k}"),
        1.0,
        landmarks,
        Arc::new(|p: &Projection| {
            by_rank(p, |block| match block {
                Block::Spin { vector, .. } => {
                    let u: Vec<f64> = vector.iter().map(|z| 2.0 * z.re).collect();
                    let embedded = u[2..].iter().all(|x| x.abs() <= FRAME_MATCH_TOL);
                    if embedded {
                        kadison_rank_one(0.5 * (1.0 + u[0]), 0.5 * u[1], 0.5 * (1.0 - u[0]))
                    } else {
                        0.5
                    }
                }
                _ => unreachable!("spin factors have a spin block"),
            })
        }),
    ))
}

/// Built-in oracle measures: `kadison_s2` and `spin_counterexample:K`.
pub fn measure_by_identifier(id: &str) -> Result<Measure> {
    if id == "kadison_s2" {
        return Ok(kadison_s2());
    }
    if let Some(k) = id.strip_prefix("spin_counterexample:") {
        let k: usize = k.parse().map_err(|_| Error::UnknownMeasure(id.to_string()))?;
        return spin_counterexample(k);
    }
    Err(Error::UnknownMeasure(id.to_string()))
}
