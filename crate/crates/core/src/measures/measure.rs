use std::fmt;
use std::sync::Arc;

use crate::algebra::{calculus_unchecked, ensure_self_adjoint, AlgebraDescriptor, Element, Projection};
use crate::error::Result;
use crate::linalg::{c, C64};
use crate::traces::normalized_trace_unchecked;

/// Pure evaluation rule on projections; must be reentrant.
pub type ProjectionOracle = Arc<dyn Fn(&Projection) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Evaluation {
    Density(Element),
    Oracle { name: String, eval: ProjectionOracle, landmarks: Vec<Projection> },
}

/// A bounded finitely additive measure on the projections of one algebra.
#[derive(Clone)]
pub struct Measure {
    descriptor: AlgebraDescriptor,
    evaluation: Evaluation,
    bound: f64,
}

/// `Σᵢ τᵢ(ρ∘x)` for self-adjoint arguments.
pub(crate) fn pairing_sa(rho: &Element, x: &Element) -> f64 {
    normalized_trace_unchecked(&rho.circ(x)).0.iter().sum()
}

/// Trace pairing `⟨ρ, x⟩`, extended complex-linearly in `x`.
pub fn pairing(rho: &Element, x: &Element) -> Result<C64> {
    rho.descriptor().ensure_same(x.descriptor())?;
    ensure_self_adjoint(rho)?;
    Ok(c(pairing_sa(rho, &x.real_part()), pairing_sa(rho, &x.imag_part())))
}

/// Positive and negative trace masses of a self-adjoint element.
pub(crate) fn masses(x: &Element) -> (f64, f64) {
    let total = |y: &Element| normalized_trace_unchecked(y).0.iter().sum::<f64>();
    (total(&calculus_unchecked(x, |l| l.max(0.0))), total(&calculus_unchecked(x, |l| (-l).max(0.0))))
}

/// The measure `p ↦ ⟨ρ, p⟩`.
pub fn from_density(rho: &Element) -> Result<Measure> {
    Measure::from_density(rho)
}

impl Measure {
    pub fn from_density(rho: &Element) -> Result<Measure> {
        ensure_self_adjoint(rho)?;
        let rho = rho.real_part();
        let (plus, minus) = masses(&rho);
        Ok(Measure { descriptor: rho.descriptor().clone(), evaluation: Evaluation::Density(rho), bound: plus.max(minus) })
    }

    /// The normalized trace restricted to projections.
    pub fn trace(descriptor: &AlgebraDescriptor) -> Measure {
        Measure::from_density(&Element::unit(descriptor)).expect("the unit is self-adjoint")
    }

    /// An oracle measure. `landmarks` are projections where the rule departs
    /// from its generic behaviour; estimators always include them.
    pub fn from_oracle(
        descriptor: AlgebraDescriptor,
        name: impl Into<String>,
        bound: f64,
        landmarks: Vec<Projection>,
        eval: ProjectionOracle,
    ) -> Measure {
        Measure { descriptor, evaluation: Evaluation::Oracle { name: name.into(), eval, landmarks }, bound }
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    /// `sup |μ(p)|`; exact for densities, declared for oracles.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn witness(&self) -> Option<&Element> {
        match &self.evaluation {
            Evaluation::Density(rho) => Some(rho),
            Evaluation::Oracle { .. } => None,
        }
    }

    pub fn name(&self) -> &str {
        match &self.evaluation {
            Evaluation::Density(_) => "density",
            Evaluation::Oracle { name, .. } => name,
        }
    }

    pub fn landmarks(&self) -> &[Projection] {
        match &self.evaluation {
            Evaluation::Density(_) => &[],
            Evaluation::Oracle { landmarks, .. } => landmarks,
        }
    }

    pub fn evaluate(&self, p: &Projection) -> Result<f64> {
        self.descriptor.ensure_same(p.descriptor())?;
        Ok(self.eval_unchecked(p))
    }

    pub(crate) fn eval_unchecked(&self, p: &Projection) -> f64 {
        match &self.evaluation {
            Evaluation::Density(rho) => pairing_sa(rho, p),
            Evaluation::Oracle { eval, .. } => eval(p),
        }
    }
}

impl fmt::Debug for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = f.debug_struct("Measure");
        s.field("descriptor", &self.descriptor.to_string()).field("bound", &self.bound);
        match &self.evaluation {
            Evaluation::Density(rho) => s.field("density", rho),
            Evaluation::Oracle { name, .. } => s.field("oracle", name),
        };
        s.finish()
    }
}
