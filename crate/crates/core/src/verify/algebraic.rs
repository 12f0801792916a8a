//! Axiom, lattice, trace and intermediate-value suites.

use std::cmp::Ordering;

use crate::algebra::{
    norm, sa_norm_unchecked, AlgebraDescriptor, Element, FactorKind, Projection,
};
use crate::error::Result;
use crate::lattice::{complement, join, leq, meet};
use crate::linalg::largest_singular_value;
use crate::sampling::{random_element, random_projection, random_self_adjoint, random_subprojection, random_symmetry, trial_rng};
use crate::traces::{normalized_trace, subprojection_with_trace, trace_compare, CentreValue};

use super::checks::{size, Checks};
use super::SuiteConfig;

fn envelope_summands(d: &AlgebraDescriptor) -> Vec<usize> {
    d.summands().iter().enumerate().filter(|(_, k)| k.envelope_dim().is_some()).map(|(i, _)| i).collect()
}

pub(super) fn axioms(config: &SuiteConfig, checks: &mut Checks) -> Result<()> {
    let d = &config.algebra;
    let envelope = envelope_summands(d);
    checks.upper("jordan_identity", 1e-7);
    checks.upper("jb1_square_norm", 1e-7);
    checks.upper("jb2_monotone", 1e-7);
    checks.upper("fundamental_identity", 1e-7);
    checks.upper("symmetry_is_2p_minus_1", 1e-7);
    if envelope.is_empty() {
        checks.note("no matrix or symmetric summand: JB*1, involution isometry and the norm chain are skipped");
    } else {
        checks.upper("jbstar1_cubic_norm", 1e-7);
        checks.upper("involution_isometry", 1e-7);
        checks.upper("norm_chain", 1e-7);
    }
    for t in 0..config.trials {
        let mut rng = trial_rng(config.seed, t as u64);
        let (a, b, c) =
            (random_self_adjoint(d, &mut rng), random_self_adjoint(d, &mut rng), random_self_adjoint(d, &mut rng));
        let (na, nb) = (sa_norm_unchecked(&a), sa_norm_unchecked(&b));
        let a2 = a.square();
        let jordan = size(&(a2.circ(&b).circ(&a) - a.circ(&b).circ(&a2)));
        checks.observe("jordan_identity", jordan / (na * na * nb).max(f64::MIN_POSITIVE));
        checks.observe("jb1_square_norm", (sa_norm_unchecked(&a2) - na * na).abs());
        let sum = &a2 + b.square();
        checks.observe("jb2_monotone", (sa_norm_unchecked(&a2) - sa_norm_unchecked(&sum)).max(0.0));
        let fundamental = a.u(&b).u(&c) - a.u(&b.u(&a.u(&c)));
        checks.observe("fundamental_identity", size(&fundamental));

        let s = random_symmetry(d, &mut rng);
        let p = (&Element::unit(d) + &s).scale(0.5);
        checks.observe("symmetry_is_2p_minus_1", size(&(p.square() - &p)));

        if envelope.is_empty() {
            continue;
        }
        let x = random_element(d, &mut rng);
        let (p, q) = (random_projection(d, &mut rng), random_projection(d, &mut rng));
        for &i in &envelope {
            let xi = x.restrict(i);
            let nx = norm(&xi)?;
            checks.observe("jbstar1_cubic_norm", (nx.powi(3) - norm(&xi.u(&xi.star()))?).abs());
            checks.observe("involution_isometry", (norm(&xi.star())? - nx).abs());
            let (pi, qi) = (p.restrict(i), q.restrict(i));
            let diff = &pi - &qi;
            let compressed = sa_norm_unchecked(&pi.u(&diff));
            let pm = pi.matrix_block(i).expect("envelope summand");
            let dm = diff.matrix_block(i).expect("envelope summand");
            let env = largest_singular_value(&(dm * pm)).powi(2);
            let over = (compressed - sa_norm_unchecked(&diff).powi(2)).max(0.0);
            checks.observe("norm_chain", (compressed - env).abs().max(over));
        }
    }
    Ok(())
}

fn diagonal(kind: FactorKind, mask: u32) -> Projection {
    let n = kind.envelope_dim().expect("envelope summand");
    let bits: Vec<f64> = (0..n).map(|i| f64::from((mask >> i) & 1)).collect();
    Projection::certify(Element::real_diagonal(kind, &bits).expect("diagonal")).expect("diagonal projection")
}

/// Largest summand size for which every pair of diagonal projections is enumerated.
const EXHAUSTIVE_DIM: usize = 6;

pub(super) fn lattice(config: &SuiteConfig, checks: &mut Checks) -> Result<()> {
    let d = &config.algebra;
    for name in ["orthomodularity", "de_morgan", "meet_below_both", "join_above_both", "double_complement"] {
        checks.upper(name, 1e-8);
    }
    let envelope = envelope_summands(d);
    if !envelope.is_empty() {
        checks.upper("join_rank_formula", 0.0);
    }
    let small: Vec<FactorKind> =
        d.summands().iter().copied().filter(|k| k.envelope_dim().is_some_and(|n| n <= EXHAUSTIVE_DIM)).collect();
    if small.is_empty() {
        checks.note(format!("no matrix or symmetric summand of size <= {EXHAUSTIVE_DIM}: diagonal oracle skipped"));
    } else {
        checks.upper("diagonal_meet_oracle", 1e-8);
        checks.upper("diagonal_join_oracle", 1e-8);
        for kind in small {
            let n = kind.envelope_dim().unwrap();
            for m1 in 0u32..(1 << n) {
                for m2 in 0u32..(1 << n) {
                    let (p, q) = (diagonal(kind, m1), diagonal(kind, m2));
                    let m = meet(&p, &q)?;
                    let j = join(&p, &q)?;
                    checks.observe("diagonal_meet_oracle", size(&(m.element() - diagonal(kind, m1 & m2).element())));
                    checks.observe("diagonal_join_oracle", size(&(j.element() - diagonal(kind, m1 | m2).element())));
                }
            }
        }
    }
    for t in 0..config.trials {
        let mut rng = trial_rng(config.seed, t as u64);
        let q = random_projection(d, &mut rng);
        let p = random_subprojection(&q, &mut rng);
        let rebuilt = join(&p, &meet(&q, &complement(&p))?)?;
        checks.observe("orthomodularity", size(&(rebuilt.element() - q.element())));

        let (a, b) = (random_projection(d, &mut rng), random_projection(d, &mut rng));
        let j = join(&a, &b)?;
        let m = meet(&a, &b)?;
        let dual = meet(&complement(&a), &complement(&b))?;
        checks.observe("de_morgan", size(&(complement(&j).element() - dual.element())));
        checks.observe("meet_below_both", size(&(m.circ(&a) - m.element())).max(size(&(m.circ(&b) - m.element()))));
        checks.observe("join_above_both", size(&(a.circ(&j) - a.element())).max(size(&(b.circ(&j) - b.element()))));
        checks.observe("double_complement", size(&(complement(&complement(&a)).element() - a.element())));
        for &i in &envelope {
            let formula = a.rank()[i] + b.rank()[i] - m.rank()[i];
            checks.observe("join_rank_formula", (j.rank()[i] as f64 - formula as f64).abs());
        }
    }
    Ok(())
}

pub(super) fn traces(config: &SuiteConfig, checks: &mut Checks) -> Result<()> {
    let d = &config.algebra;
    for name in ["unit_trace", "symmetry_invariance", "centre_linearity", "positivity", "faithfulness"] {
        checks.upper(name, 1e-9);
    }
    checks.upper("compare_matches_rank", 0.0);
    let unit = normalized_trace(&Element::unit(d))?;
    checks.observe("unit_trace", unit.0.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max));

    let small: Vec<FactorKind> =
        d.summands().iter().copied().filter(|k| k.envelope_dim().is_some_and(|n| n <= EXHAUSTIVE_DIM)).collect();
    if !small.is_empty() {
        checks.upper("compare_diagonal_oracle", 0.0);
        for kind in small {
            let n = kind.envelope_dim().unwrap();
            for m1 in 0u32..(1 << n) {
                for m2 in 0u32..(1 << n) {
                    let (p, q) = (diagonal(kind, m1), diagonal(kind, m2));
                    // p embeds under q by a coordinate permutation iff it has no more ones
                    let oracle = m1.count_ones().cmp(&m2.count_ones());
                    let miss = trace_compare(&p, &q)?[0] != oracle;
                    checks.observe("compare_diagonal_oracle", f64::from(u8::from(miss)));
                }
            }
        }
    }
    for t in 0..config.trials {
        let mut rng = trial_rng(config.seed, t as u64);
        let x = random_self_adjoint(d, &mut rng);
        let s = random_symmetry(d, &mut rng);
        let tx = normalized_trace(&x)?;
        let moved = normalized_trace(&s.u(&x))?;
        checks.observe("symmetry_invariance", max_gap(&tx, &moved));

        let z: Vec<f64> = (0..d.len()).map(|_| rand::Rng::random_range(&mut rng, -2.0..2.0)).collect();
        let scaled = normalized_trace(&Element::central(d, &z).circ(&x))?;
        let expected = CentreValue(tx.0.iter().zip(&z).map(|(v, w)| v * w).collect());
        checks.observe("centre_linearity", max_gap(&scaled, &expected));

        let sq = x.square();
        let tsq = normalized_trace(&sq)?;
        checks.observe("positivity", tsq.0.iter().map(|v| (-v).max(0.0)).fold(0.0, f64::max));
        for (i, kind) in d.summands().iter().enumerate() {
            let part = sa_norm_unchecked(&sq.restrict(i));
            checks.observe("faithfulness", (part - kind.unit_rank() as f64 * tsq.0[i]).max(0.0));
        }

        let (p, q) = (random_projection(d, &mut rng), random_projection(d, &mut rng));
        let oracle: Vec<Ordering> = p.rank().iter().zip(q.rank()).map(|(a, b)| a.cmp(b)).collect();
        checks.observe("compare_matches_rank", f64::from(u8::from(trace_compare(&p, &q)? != oracle)));
    }
    Ok(())
}

fn max_gap(a: &CentreValue, b: &CentreValue) -> f64 {
    a.0.iter().zip(&b.0).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub(super) fn ivp(config: &SuiteConfig, checks: &mut Checks) -> Result<()> {
    let d = &config.algebra;
    checks.upper("attainable_trace_hit", 1e-9);
    checks.upper("attainable_below_p", 1e-8);
    checks.upper("unattainable_rejected", 0.0);
    let grids: Vec<i64> = d.summands().iter().map(|k| 2 * k.unit_rank() as i64).collect();
    for t in 0..config.trials.max(1) {
        let mut rng = trial_rng(config.seed, t as u64);
        let p = if t == 0 { Projection::unit(d) } else { random_projection(d, &mut rng) };
        // half-steps from one below zero to one above the unit; odd indices are off-grid
        let mut idx: Vec<i64> = vec![-1; grids.len()];
        loop {
            let w = CentreValue(idx.iter().zip(&grids).map(|(j, g)| *j as f64 / *g as f64).collect());
            let attainable =
                idx.iter().zip(p.rank()).all(|(j, r)| *j >= 0 && j % 2 == 0 && (j / 2) as usize <= *r);
            match (subprojection_with_trace(&p, &w), attainable) {
                (Ok(q), true) => {
                    checks.observe("attainable_trace_hit", max_gap(&normalized_trace(&q)?, &w));
                    let below = leq(&q, &p)?;
                    checks.observe("attainable_below_p", if below { 0.0 } else { f64::INFINITY });
                }
                (Ok(_), false) => checks.observe("unattainable_rejected", 1.0),
                (Err(e), true) => checks.fail("attainable_trace_hit", format!("w = {:?}: {e}", w.0)),
                (Err(_), false) => {}
            }
            let mut pos = 0;
            while pos < idx.len() {
                idx[pos] += 1;
                if idx[pos] <= grids[pos] + 1 {
                    break;
                }
                idx[pos] = -1;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
        }
    }
    Ok(())
}
