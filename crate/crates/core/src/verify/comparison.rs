//! Exchange symmetry, isoclinic, halving, `e_±` and projection-pair suites.

use rand::Rng;

use crate::algebra::{calculus_unchecked, sa_norm_unchecked, AlgebraDescriptor, Element, Projection};
use crate::comparison::{
    christensen_pair, e_pm_construct, equivalent, exchange_symmetry, halve, isoclinic_mid, isoclinic_model,
    reversible_pair,
};
use crate::error::{Error, Result};
use crate::lattice::{complement, join};
use crate::linalg::hermitian_eigen;
use crate::sampling::{
    random_orthogonal_copies, random_positive_under, random_projection_with_rank,
    random_proper_projection, random_self_adjoint, random_subprojection, random_symmetry, trial_rng,
};
use crate::traces::{subprojection_with_trace, CentreValue};

use super::checks::{negativity, size, Checks};
use super::SuiteConfig;

/// Largest distance accepted for a generated exchange pair.
const CLOSE_PAIR_MAX: f64 = 0.9;

/// A projection of the same rank as `f` within `max_distance` of it: the
/// spectral projection above ½ of `f + εx` with `ε < ½`, halving `ε` until the distance fits.
pub(crate) fn close_pair<R: Rng + ?Sized>(f: &Projection, max_distance: f64, rng: &mut R) -> Projection {
    let x = random_self_adjoint(f.descriptor(), rng);
    let mut eps = 0.45 * rng.random_range(0.05..1.0);
    loop {
        let y = f.element() + &x.scale(eps);
        let g = Projection::certify(calculus_unchecked(&y, |l| if l > 0.5 { 1.0 } else { 0.0 }))
            .expect("spectral projection");
        if g.rank() == f.rank() && sa_norm_unchecked(&(f.element() - g.element())) <= max_distance {
            return g;
        }
        eps *= 0.5;
    }
}

fn envelope_only(d: &AlgebraDescriptor, suite: &'static str) -> Result<()> {
    match d.summands().iter().find(|k| k.envelope_dim().is_none()) {
        Some(k) => Err(Error::UnsupportedFactor { operation: suite, factor: k.to_string() }),
        None => Ok(()),
    }
}

const MODEL_ANGLES: usize = 20;

pub(super) fn comparison(config: &SuiteConfig, checks: &mut Checks) -> Result<()> {
    let d = &config.algebra;
    checks.upper("exchange_maps_f_to_g", 1e-8);
    checks.upper("exchange_is_symmetry", 1e-8);
    checks.upper("exchange_norm_bound", 1e-6);
    checks.upper("isoclinic_model", 1e-12);
    checks.upper("equivalence_under_symmetry", 0.0);
    let envelope = d.is_envelope();
    let iso_ranks: Vec<usize> = d.summands().iter().map(|k| k.unit_rank() / 3).collect();
    let isoclinic = envelope && iso_ranks.iter().any(|r| *r > 0);
    if envelope {
        checks.upper("exchange_commutation", 1e-9);
        checks.upper("halving", 1e-8);
    } else {
        checks.note("spin or Albert summand: commutation, halving and isoclinic_mid checks are skipped");
    }
    if isoclinic {
        checks.upper("isoclinic_mid_compression", 1e-7);
        checks.upper("isoclinic_mid_distance", 1e-7);
        checks.upper("isoclinic_mid_angle_spectrum", 1e-7);
    } else if envelope {
        checks.note("every summand is smaller than 3: isoclinic_mid needs room for a third copy");
    }

    for j in 0..MODEL_ANGLES {
        let theta = j as f64 * std::f64::consts::FRAC_PI_2 / MODEL_ANGLES as f64;
        let (f, h) = isoclinic_model(theta)?;
        let c2 = theta.cos().powi(2);
        let residual = size(&(f.u(&h) - f.element().scale(c2)))
            .max(size(&(h.u(&f) - h.element().scale(c2))))
            .max((sa_norm_unchecked(&(f.element() - h.element())) - theta.sin()).abs());
        checks.observe("isoclinic_model", residual);
    }

    for t in 0..config.trials {
        let mut rng = trial_rng(config.seed, t as u64);
        let f = random_proper_projection(d, &mut rng);
        let g = close_pair(&f, CLOSE_PAIR_MAX, &mut rng);
        let dist = sa_norm_unchecked(&(f.element() - g.element()));
        match exchange_symmetry(&f, &g) {
            Ok(s) => {
                checks.observe("exchange_maps_f_to_g", size(&(s.u(&f) - g.element())));
                let one = Element::unit(d);
                checks.observe("exchange_is_symmetry", size(&(s.square() - &one)).max(size(&(&s - s.star()))));
                let bound = 2f64.sqrt() * dist.sqrt();
                for _ in 0..5 {
                    let p = random_subprojection(&f, &mut rng);
                    let moved = sa_norm_unchecked(&(p.element() - s.u(&p)));
                    checks.observe("exchange_norm_bound", (moved - bound).max(0.0));
                }
                if envelope {
                    let diff = f.element() - g.element();
                    let c = &one - diff.square();
                    let mut worst: f64 = 0.0;
                    for i in 0..d.len() {
                        let (cm, fm) = (c.matrix_block(i).unwrap(), f.matrix_block(i).unwrap());
                        worst = worst.max(crate::linalg::max_abs(&(cm * fm - fm * cm)) * cm.nrows() as f64);
                    }
                    checks.observe("exchange_commutation", worst);
                }
            }
            Err(e) => checks.fail("exchange_maps_f_to_g", format!("trial {t}: {e}")),
        }

        let s = random_symmetry(d, &mut rng);
        let moved = Projection::certify(s.u(&f))?;
        checks.observe("equivalence_under_symmetry", if equivalent(&f, &moved)? { 0.0 } else { 1.0 });

        if envelope {
            let p = random_proper_projection(d, &mut rng);
            match halve(&p) {
                Ok(hv) => {
                    let (q1, q2, r) = (&hv.first, &hv.second, &hv.remainder);
                    let sum = q1.element() + q2.element() + r.element();
                    let residual = size(&(sum - p.element()))
                        .max(size(&(hv.symmetry.u(q1) - q2.element())))
                        .max(size(&q1.circ(q2)))
                        .max(size(&q1.circ(r)))
                        .max(size(&q2.circ(r)))
                        .max(if r.rank().iter().all(|k| *k <= 1) { 0.0 } else { 1.0 });
                    checks.observe("halving", residual);
                }
                Err(e) => checks.fail("halving", format!("trial {t}: {e}")),
            }
        }

        if isoclinic {
            isoclinic_trial(d, &iso_ranks, &mut rng, checks, t);
        }
    }
    Ok(())
}

fn isoclinic_trial<R: Rng + ?Sized>(d: &AlgebraDescriptor, ranks: &[usize], rng: &mut R, checks: &mut Checks, t: usize) {
    let f = random_projection_with_rank(d, ranks, rng);
    let g = close_pair(&f, CLOSE_PAIR_MAX, rng);
    let room = complement(&join(&f, &g).expect("same descriptor"));
    let w = CentreValue(ranks.iter().zip(d.summands()).map(|(r, k)| *r as f64 / k.unit_rank() as f64).collect());
    let e = match subprojection_with_trace(&room, &w) {
        Ok(e) => e,
        Err(err) => return checks.fail("isoclinic_mid_compression", format!("trial {t}: {err}")),
    };
    match isoclinic_mid(&f, &g, &e) {
        Ok((h, theta)) => {
            let c2 = theta.cos().powi(2);
            let compression = size(&(f.u(&h) - f.element().scale(c2))).max(size(&(g.u(&h) - g.element().scale(c2))));
            checks.observe("isoclinic_mid_compression", compression);
            let fg = sa_norm_unchecked(&(f.element() - g.element()));
            let fh = sa_norm_unchecked(&(f.element() - h.element()));
            let gh = sa_norm_unchecked(&(g.element() - h.element()));
            checks.observe("isoclinic_mid_distance", (fh - fg).max(gh - fg).max(0.0));
            // singular values of the envelope product f·h on the range of f
            let mut spread: f64 = 0.0;
            for (i, r) in f.rank().iter().enumerate() {
                let block = f.u(&h);
                let eig = hermitian_eigen(block.matrix_block(i).unwrap());
                let n = eig.values.len();
                for k in n - r..n {
                    spread = spread.max((eig.values[k].max(0.0).sqrt() - theta.cos()).abs());
                }
            }
            checks.observe("isoclinic_mid_angle_spectrum", spread);
        }
        Err(err) => checks.fail("isoclinic_mid_compression", format!("trial {t}: {err}")),
    }
}

pub(super) fn epm(config: &SuiteConfig, checks: &mut Checks) -> Result<()> {
    let d = &config.algebra;
    envelope_only(d, "epm suite")?;
    if d.summands().iter().any(|k| k.unit_rank() < 2) {
        return Err(Error::InvalidParameter("the epm suite needs summands of size at least 2".into()));
    }
    for name in ["projection_certified", "dominated_by_p_plus_q", "equivalent_to_p", "compression_bounds", "twist_identity"]
    {
        checks.upper(name, 1e-8);
    }
    for t in 0..config.trials {
        let mut rng = trial_rng(config.seed, t as u64);
        let ranks: Vec<usize> = d.summands().iter().map(|k| rng.random_range(2..=k.unit_rank())).collect();
        let pq = random_projection_with_rank(d, &ranks, &mut rng);
        let half = CentreValue(ranks.iter().zip(d.summands()).map(|(r, k)| (r / 2) as f64 / k.unit_rank() as f64).collect());
        let p = subprojection_with_trace(&pq, &half)?;
        let q = Projection::certify(pq.element() - p.element())?;
        let e = random_subprojection(&pq, &mut rng);
        let twist_base = p.u2(&q, &e.star()).scale(2.0);
        for eps in [0.1, 0.2, 0.3] {
            let out = match e_pm_construct(&p, &q, &e, eps) {
                Ok(out) => out,
                Err(err) => {
                    checks.fail("projection_certified", format!("trial {t}, eps {eps}: {err}"));
                    continue;
                }
            };
            let e4 = eps.powi(4);
            let mut idem: f64 = 0.0;
            let mut dom: f64 = 0.0;
            let mut equiv: f64 = 0.0;
            for x in [&out.minus, &out.plus] {
                idem = idem.max(size(&(x.square() - x.element())));
                dom = dom.max(size(&(x.circ(&pq) - x.element())));
                if x.rank() != p.rank() {
                    equiv = 1.0;
                }
            }
            checks.observe("projection_certified", idem);
            checks.observe("dominated_by_p_plus_q", dom);
            checks.observe("equivalent_to_p", equiv);
            let p_minus_c = p.element() - &out.c;
            let bounds = negativity(&p_minus_c)
                .max(negativity(&(p.element().scale(0.5 * e4) - &p_minus_c)))
                .max(negativity(&out.d))
                .max(negativity(&(q.element().scale(0.5 * e4) - &out.d)));
            checks.observe("compression_bounds", bounds);
            let twist = twist_base.scale(eps * eps);
            let identity = size(&(out.minus.element() - &out.c - &out.d - &twist))
                .max(size(&(out.plus.element() - &out.c - &out.d + &twist)));
            checks.observe("twist_identity", identity);
        }
    }
    Ok(())
}

/// `p` of rank `rank(kind)` per summand with symmetries carrying it to `copies` orthogonal copies.
fn copies_in<R: Rng + ?Sized>(
    d: &AlgebraDescriptor,
    ranks: &[usize],
    copies: usize,
    rng: &mut R,
) -> Result<(Projection, Vec<Element>)> {
    let mut ps = Vec::new();
    let mut syms: Vec<Vec<Element>> = vec![Vec::new(); copies];
    for (kind, r) in d.summands().iter().zip(ranks) {
        let (p, s) = random_orthogonal_copies(*kind, *r, copies, rng);
        ps.push(p.into_element());
        for (slot, si) in syms.iter_mut().zip(s) {
            slot.push(si);
        }
    }
    let p = Projection::certify(Element::direct_sum(&ps)?)?;
    let syms = syms.iter().map(|parts| Element::direct_sum(parts)).collect::<Result<Vec<_>>>()?;
    Ok((p, syms))
}

fn room(d: &AlgebraDescriptor, copies: usize) -> Option<Vec<usize>> {
    let ranks: Vec<usize> = d.summands().iter().map(|k| k.unit_rank() / (copies + 1)).collect();
    ranks.iter().all(|r| *r > 0).then_some(ranks)
}

pub(super) fn christensen(config: &SuiteConfig, checks: &mut Checks) -> Result<()> {
    let d = &config.algebra;
    envelope_only(d, "christensen suite")?;
    let Some(ranks) = room(d, 3) else {
        return Err(Error::InvalidParameter("the christensen suite needs summands of size at least 4".into()));
    };
    checks.upper("pair_orthogonal", 1e-8);
    checks.upper("compression_r_is_a", 1e-8);
    checks.upper("compression_q_is_b", 1e-8);
    let reversible = room(d, 5);
    if reversible.is_some() {
        checks.upper("reversible_orthogonal", 1e-8);
        checks.upper("reversible_compressions", 1e-8);
    } else {
        checks.note("some summand is smaller than 6: the five-symmetry variant is skipped");
    }
    for t in 0..config.trials {
        let mut rng = trial_rng(config.seed, t as u64);
        let (p, s) = copies_in(d, &ranks, 3, &mut rng)?;
        let (a, b) = if t == 0 {
            (Element::zero(d), p.element().scale(0.5))
        } else {
            (random_positive_under(&p, &mut rng).scale(0.5), random_positive_under(&p, &mut rng).scale(0.5))
        };
        match christensen_pair(&p, &s[0], &s[1], &s[2], &a, &b) {
            Ok((r, q)) => {
                checks.observe("pair_orthogonal", size(&r.circ(&q)));
                checks.observe("compression_r_is_a", size(&(p.u(&r) - &a)));
                checks.observe("compression_q_is_b", size(&(p.u(&q) - &b)));
            }
            Err(e) => checks.fail("pair_orthogonal", format!("trial {t}: {e}")),
        }
        if let Some(ranks5) = &reversible {
            let (p, s) = copies_in(d, ranks5, 5, &mut rng)?;
            let c = random_positive_under(&p, &mut rng).scale(0.5);
            let dd = random_positive_under(&p, &mut rng).scale(0.5);
            match reversible_pair(&p, [&s[0], &s[1], &s[2], &s[3], &s[4]], &c, &dd) {
                Ok((r, q)) => {
                    checks.observe("reversible_orthogonal", size(&r.circ(&q)));
                    checks.observe(
                        "reversible_compressions",
                        size(&(p.u(&r) - &c)).max(size(&(p.u(&q) - &dd))),
                    );
                }
                Err(e) => checks.fail("reversible_orthogonal", format!("trial {t}: {e}")),
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::random_projection;

    #[test]
    fn close_pairs_keep_rank_and_distance() {
        let d: AlgebraDescriptor = "m4+spin3".parse().unwrap();
        let mut rng = trial_rng(80, 0);
        for _ in 0..50 {
            let f = random_projection(&d, &mut rng);
            let g = close_pair(&f, CLOSE_PAIR_MAX, &mut rng);
            assert_eq!(f.rank(), g.rank());
            assert!(sa_norm_unchecked(&(f.element() - g.element())) <= CLOSE_PAIR_MAX);
        }
    }
}
