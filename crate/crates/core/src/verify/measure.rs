//! Quasi-linear extension, reconstruction, counterexample and continuity suites.

use rand::Rng;

use crate::algebra::{
    functional_calculus, sa_norm_unchecked, AlgebraDescriptor, Element, FactorKind, Projection,
};
use crate::error::{Error, Result};
use crate::measures::{
    additivity_residual, alpha, continuity_bound, extend_sa, fit_linear_functional, from_density, kadison_s2,
    normalize_witness, spin_counterexample, symmetry_sup_check, Measure,
};
use crate::sampling::{random_positive_contraction, random_projection, random_proper_projection, random_self_adjoint, trial_rng};

use super::checks::{size, Checks};
use super::comparison::close_pair;
use super::SuiteConfig;

/// Random pairs per trial fed to the additivity and symmetry estimators.
const INNER_TRIALS: usize = 5;
/// Random projections validating each reconstruction.
const VALIDATION_PROJECTIONS: usize = 200;
/// Largest projection distance in the continuity suite.
const CONTINUITY_DELTA: f64 = 0.25;

/// The supplied measure, or a fresh random witness on the configured algebra.
fn measure_for<R: Rng + ?Sized>(config: &SuiteConfig, rng: &mut R) -> Measure {
    match &config.measure {
        Some(mu) => mu.clone(),
        None => from_density(&random_self_adjoint(&config.algebra, rng)).expect("random densities are self-adjoint"),
    }
}

fn descriptor(config: &SuiteConfig) -> &AlgebraDescriptor {
    config.measure.as_ref().map_or(&config.algebra, Measure::descriptor)
}

pub(super) fn quasilinear(config: &SuiteConfig, checks: &mut Checks) -> Result<()> {
    let d = descriptor(config).clone();
    for name in ["commuting_linearity", "extension_on_projections", "sup_below_alpha", "sup_below_twice_variation"] {
        checks.upper(name, 1e-8);
    }
    checks.upper("central_alpha_additivity", 1e-8);
    let witnessed = config.measure.as_ref().is_none_or(|mu| mu.witness().is_some());
    if witnessed {
        checks.upper("support_attains_alpha", 1e-8);
        checks.upper("symmetry_sup_attains_bound", 1e-8);
        checks.upper("positive_additivity", 1e-8);
    } else {
        checks.note("oracle measure: alpha and V are sampled lower bounds, attainment and additivity checks are skipped");
    }
    for t in 0..config.trials {
        let mut rng = trial_rng(config.seed, t as u64);
        let mu = measure_for(config, &mut rng);
        let one = Projection::unit(&d);
        let alpha_one = alpha(&mu, &one)?.value;

        let x = random_self_adjoint(&d, &mut rng);
        let x2 = x.square();
        let cubic = functional_calculus(&x, |l| l * l * l - l)?;
        let linearity = (extend_sa(&mu, &(&x + &x2)) - extend_sa(&mu, &x) - extend_sa(&mu, &x2))
            .abs()
            .max((extend_sa(&mu, &(&x2 + &cubic)) - extend_sa(&mu, &x2) - extend_sa(&mu, &cubic)).abs());
        checks.observe("commuting_linearity", linearity);

        let p = random_projection(&d, &mut rng);
        checks.observe("extension_on_projections", (extend_sa(&mu, &p) - mu.evaluate(&p)?).abs());

        let a = random_positive_contraction(&d, &mut rng);
        checks.observe("sup_below_alpha", (extend_sa(&mu, &a) - alpha_one).max(0.0));

        let sup = symmetry_sup_check(&mu, INNER_TRIALS, &mut rng);
        checks.observe("sup_below_twice_variation", (sup.sup - sup.variation_bound).max(0.0));

        let mut by_summand = 0.0;
        for i in 0..d.len() {
            let zi = Projection::certify(p.u(&Element::summand_unit(&d, i)))?;
            by_summand += alpha(&mu, &zi)?.value;
        }
        checks.observe("central_alpha_additivity", (by_summand - alpha(&mu, &p)?.value).abs());

        if let Some(rho) = mu.witness() {
            let support = Projection::certify(functional_calculus(rho, |l| if l > 1e-12 { 1.0 } else { 0.0 })?)?;
            checks.observe("support_attains_alpha", (mu.evaluate(&support)? - alpha_one).abs());
            checks.observe("symmetry_sup_attains_bound", (sup.sup - sup.alpha_bound).abs());
            checks.observe("positive_additivity", additivity_residual(&mu, INNER_TRIALS, &mut rng));
        }
    }
    Ok(())
}

pub(super) fn gleason(config: &SuiteConfig, checks: &mut Checks) -> Result<()> {
    let d = descriptor(config).clone();
    let witnessed = config.measure.as_ref().is_none_or(|mu| mu.witness().is_some());
    if witnessed {
        checks.upper("witness_recovery", 1e-8);
    }
    checks.upper("validation_residual", 1e-8);
    if d.summands().iter().any(|k| k.unit_rank() == 2) {
        checks.note("rank-two summand present: witness measures extend even at n = 2, where general measures need not");
    }
    for t in 0..config.trials {
        let mut rng = trial_rng(config.seed, t as u64);
        let mu = measure_for(config, &mut rng);
        let fit = fit_linear_functional(&mu, VALIDATION_PROJECTIONS, &mut rng);
        if let Some(rho) = mu.witness() {
            checks.observe("witness_recovery", size(&(&fit.density - rho)));
        }
        checks.observe("validation_residual", fit.residual);
    }
    Ok(())
}

/// `[[a, b], [b, c]] ↦ ½(a + c) ⊕ (½(a − c), b, 0, …)` into the spin factor of dimension `k`.
fn embed_s2(k: usize, a: f64, b: f64, c: f64) -> Projection {
    let mut v = vec![0.0; k];
    v[0] = 0.5 * (a - c);
    v[1] = b;
    Projection::certify(Element::spin_real(0.5 * (a + c), &v).expect("spin dimension")).expect("rank-one image")
}

fn s2_projection(a: f64, b: f64, c: f64) -> Projection {
    Projection::certify(Element::from_real_rows(FactorKind::Symmetric(2), &[&[a, b], &[b, c]]).expect("2x2"))
        .expect("displayed projection")
}

pub(super) fn counterexample(config: &SuiteConfig, checks: &mut Checks) -> Result<()> {
    let mu = match &config.measure {
        Some(mu) => mu.clone(),
        None => match config.algebra.summands() {
            [FactorKind::Symmetric(2)] => kadison_s2(),
            [FactorKind::Spin(k)] => spin_counterexample(*k)?,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "the counterexample suite runs on s2 or a single spin factor, not {}",
                    config.algebra
                )))
            }
        },
    };
    let d = mu.descriptor().clone();
    checks.lower("fit_residual", 1.0 / 6.0);
    checks.lower("additivity_residual", 1.0 / 6.0);
    checks.upper("complementary_additivity", 1e-12);
    checks.upper("witness_separation", 1e-8);

    // the displayed clash: μ(1) = μ(p₁) = 1, μ(p₂) = 0 and ½ at the two rank-one projections
    let r2 = 2f64.sqrt() / 3.0;
    let displayed = [(1.0, 0.0, 0.0, 1.0), (0.0, 0.0, 1.0, 0.0), (0.5, 0.5, 0.5, 0.5), (1.0 / 3.0, r2, 2.0 / 3.0, 0.5)];
    let clash: Option<Vec<(Projection, f64)>> = match d.summands() {
        [FactorKind::Symmetric(2)] => Some(displayed.iter().map(|&(a, b, c, v)| (s2_projection(a, b, c), v)).collect()),
        [FactorKind::Spin(k)] => Some(displayed.iter().map(|&(a, b, c, v)| (embed_s2(*k, a, b, c), v)).collect()),
        _ => None,
    };
    if let Some(clash) = clash {
        checks.upper("displayed_values", 0.0);
        let one = Projection::unit(&d);
        checks.observe("displayed_values", (mu.evaluate(&one)? - 1.0).abs());
        for (p, v) in &clash {
            checks.observe("displayed_values", (mu.evaluate(p)? - v).abs());
        }
    } else {
        checks.note("supplied measure is not on s2 or a spin factor: displayed values are skipped");
    }

    let mut rng = trial_rng(config.seed, 0);
    let fit = fit_linear_functional(&mu, config.trials, &mut rng);
    checks.observe("fit_residual", fit.residual);
    checks.observe("additivity_residual", additivity_residual(&mu, config.trials, &mut rng));

    let one = Projection::unit(&d);
    let total = mu.evaluate(&one)?;
    let witness = from_density(&random_self_adjoint(&d, &mut rng))?;
    let fit = fit_linear_functional(&witness, config.trials, &mut rng);
    checks.observe("witness_separation", fit.residual.max(additivity_residual(&witness, config.trials, &mut rng)));
    for t in 0..config.trials {
        let mut rng = trial_rng(config.seed, t as u64 + 1);
        let p = random_proper_projection(&d, &mut rng);
        let rest = Projection::certify(one.element() - p.element())?;
        checks.observe("complementary_additivity", (mu.evaluate(&p)? + mu.evaluate(&rest)? - total).abs());
    }
    Ok(())
}

pub(super) fn uniform_continuity(config: &SuiteConfig, checks: &mut Checks) -> Result<()> {
    let d = descriptor(config).clone();
    checks.upper("continuity_bound", 1e-6);
    checks.upper("pair_distance", 0.0);
    if config.measure.as_ref().is_some_and(|mu| mu.witness().is_none()) {
        checks.note("oracle measure is used as given: the bound relies on a sampled alpha");
    }
    for t in 0..config.trials {
        let mut rng = trial_rng(config.seed, t as u64);
        let mu = match config.measure.as_ref().map(|m| m.witness()) {
            Some(None) => config.measure.clone().expect("supplied"),
            Some(Some(rho)) => from_density(&normalize_witness(rho)?)?,
            None => from_density(&normalize_witness(&random_self_adjoint(&d, &mut rng))?)?,
        };
        let p = random_proper_projection(&d, &mut rng);
        let q = close_pair(&p, CONTINUITY_DELTA * rng.random_range(0.02..0.99), &mut rng);
        let delta = sa_norm_unchecked(&(p.element() - q.element()));
        checks.observe("pair_distance", (delta - CONTINUITY_DELTA).max(0.0));
        let gap = (mu.evaluate(&p)? - mu.evaluate(&q)?).abs();
        checks.observe("continuity_bound", (gap - continuity_bound(&mu, delta)).max(0.0));
    }
    Ok(())
}
