//! Exact integrals ∫_{B(c,α)} 1[constraints] Ψ(h(x)) dx for polynomial
//! phases h, by adaptive ball splitting.
//!
//! On a ball B(x, β) write h(x+z) = h(x) + ⟨∇h(x), z⟩ + Q(z). Once every
//! monomial of Q has ord ≥ 1 on B_β the integral over the ball is
//! Ψ(h(x)) L^{−mβ} [ord ∂_i h(x) ≥ 1 − β for all i]. Polynomial
//! constraints g(x) ∈ B(c', α') are decided on a ball as soon as the
//! variation of g there is small enough. Balls that are not yet decided
//! are split into their q^m children.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expr::Poly;
use crate::field::{FieldElement, LocalField};
use crate::scalar::MotivicScalar;

/// poly(x) ∈ B(center, radius)
#[derive(Clone, Debug)]
pub struct Constraint {
    pub map: Poly,
    pub center: FieldElement,
    pub radius: i64,
}

#[derive(Clone, Debug)]
pub struct Integrand {
    pub phase: Poly,
    pub constraints: Vec<Constraint>,
}

impl Integrand {
    pub fn phase(phase: Poly) -> Self {
        Integrand {
            phase,
            constraints: Vec::new(),
        }
    }
}

enum Decision {
    Inside,
    Outside,
    Split,
}

fn decide(k: &LocalField, c: &Constraint, x: &[FieldElement], beta: i64) -> Result<Decision> {
    let s = c.map.shift(k, x);
    let v = s.coeff(&vec![0; x.len()]);
    let d = k.sub(&v, &c.center).ord_or_max()?;
    let gamma = c.map.variation_lower(k, x, beta).unwrap_or(i64::MAX);
    Ok(if d >= c.radius && gamma >= c.radius {
        Decision::Inside
    } else if d < c.radius && gamma > d {
        Decision::Outside
    } else {
        Decision::Split
    })
}

/// Closed form on B(x, β) if the higher-order part of the phase is
/// negligible there: `Some(None)` for a vanishing integral,
/// `Some(Some(e))` for Ψ-exponent e.
fn closed_form(k: &LocalField, phase: &Poly, x: &[FieldElement], beta: i64) -> Result<Option<Option<u32>>> {
    let m = x.len();
    let s = phase.shift(k, x);
    let mut quad = Poly::zero(m);
    let mut linear_ok = true;
    let mut constant = FieldElement::zero();
    for (e, c) in s.terms() {
        let deg: u32 = e.iter().sum();
        match deg {
            0 => constant = c.clone(),
            1 => {
                if c.ord_or_max()? + beta < 1 {
                    linear_ok = false;
                }
            }
            _ => quad = quad.add(k, &Poly::from_terms(m, [(e.clone(), c.clone())], k)),
        }
    }
    match quad.newton_lower(beta) {
        Some(b) if b < 1 => Ok(None),
        _ if !linear_ok => Ok(Some(None)),
        _ => Ok(Some(Some(k.character_exponent(&constant)?))),
    }
}

/// Exact value of ∫_{B(c,α)} 1[constraints] Ψ(h) dx.
pub fn ball_integral(k: &LocalField, f: &Integrand, center: &[FieldElement], radius: i64) -> Result<MotivicScalar> {
    let m = center.len();
    if f.phase.nvars() != m {
        return Err(Error::MismatchedDimension(f.phase.nvars(), m));
    }
    let p = k.p();
    // (β, Ψ-exponent) -> number of balls
    let mut counts: BTreeMap<(i64, u32), i64> = BTreeMap::new();
    let root = center.iter().map(|c| c.head(radius)).collect::<Result<Vec<_>>>()?;
    let mut stack = vec![(root, radius)];
    let mut visited: u128 = 0;
    let fanout = k.coset_count(m, 0, 1);
    while let Some((x, beta)) = stack.pop() {
        visited += 1;
        k.check_budget(visited)?;
        let mut split = false;
        let mut outside = false;
        for c in &f.constraints {
            match decide(k, c, &x, beta)? {
                Decision::Inside => {}
                Decision::Outside => {
                    outside = true;
                    break;
                }
                Decision::Split => split = true,
            }
        }
        if outside {
            continue;
        }
        if !split {
            match closed_form(k, &f.phase, &x, beta)? {
                Some(None) => continue,
                Some(Some(e)) => {
                    *counts.entry((beta, e)).or_insert(0) += 1;
                    continue;
                }
                None => {}
            }
        }
        k.check_budget(visited + stack.len() as u128 + fanout)?;
        stack.extend(k.coset_reps(&x, beta, beta + 1)?.map(|c| (c, beta + 1)));
    }
    let mut acc = MotivicScalar::zero(p);
    for ((beta, e), n) in counts {
        acc.add_assign(&MotivicScalar::from_int(p, n).mul_zeta_pow(e as i64).mul_l_pow(-(m as i64) * beta));
    }
    Ok(acc)
}

/// Upper bound, valid on all of B(c, α), for min_i ord ∂_i g; or the first
/// point found where the gradient vanishes or cannot be bounded before
/// `max_depth`.
pub fn grad_ord_upper(
    k: &LocalField,
    grad: &[Poly],
    center: &[FieldElement],
    radius: i64,
    max_depth: i64,
) -> Result<std::result::Result<i64, Vec<FieldElement>>> {
    let root = center.iter().map(|c| c.head(radius)).collect::<Result<Vec<_>>>()?;
    let mut stack = vec![(root, radius)];
    let mut bound = i64::MIN;
    let mut visited: u128 = 0;
    while let Some((x, beta)) = stack.pop() {
        visited += 1;
        k.check_budget(visited)?;
        let mut node = None::<i64>;
        let mut all_zero = true;
        for d in grad {
            let v = d.eval(k, &x)?;
            let ov = v.ord_or_max()?;
            if ov != i64::MAX {
                all_zero = false;
            }
            let gamma = d.variation_lower(k, &x, beta).unwrap_or(i64::MAX);
            if ov < gamma {
                node = Some(node.map_or(ov, |n| n.min(ov)));
            }
        }
        if all_zero {
            return Ok(Err(x));
        }
        match node {
            Some(u) => bound = bound.max(u),
            None if beta >= max_depth => return Ok(Err(x)),
            None => stack.extend(k.coset_reps(&x, beta, beta + 1)?.map(|c| (c, beta + 1))),
        }
    }
    Ok(Ok(bound))
}
