//! Brute-force character sums over coset representatives, evaluated at
//! L = q. These never call the closed forms they are used to check.

use num_bigint::BigInt;

use crate::cyclotomic::{CycRational, CyclotomicInteger};
use crate::error::Result;
use crate::expr::Poly;
use crate::field::{FieldElement, LocalField};
use crate::scalar::MotivicScalar;
use crate::schwartz::SbFunction;

/// Σ_e counts[e] ζ^e / q^{scale}
fn weigh(p: u32, q: u64, counts: &[i64], scale: i64) -> Result<CycRational> {
    let num = CyclotomicInteger::from_exponent_counts(p, counts);
    if scale >= 0 {
        CycRational::new(num, BigInt::from(q).pow(scale as u32))
    } else {
        Ok(CycRational::from_integer(num.scale(&BigInt::from(q).pow((-scale) as u32))))
    }
}

/// Exponent tallies, one row per term of φ.
struct Tally {
    rows: Vec<Vec<i64>>,
}

impl Tally {
    fn new(terms: usize, p: u32) -> Self {
        Tally {
            rows: vec![vec![0; p as usize]; terms],
        }
    }

    fn hit(&mut self, term: usize, e: u32) {
        self.rows[term][e as usize] += 1;
    }

    fn total(&self, k: &LocalField, phi: &SbFunction, scale: i64) -> Result<CycRational> {
        let q = k.q() as u64;
        let mut acc = CycRational::zero(k.p());
        for (row, t) in self.rows.iter().zip(phi.terms()) {
            if row.iter().all(|&c| c == 0) {
                continue;
            }
            let s = weigh(k.p(), q, row, scale)?;
            acc = acc.add(&s.mul(&t.coeff.eval_at_q(q)?));
        }
        Ok(acc)
    }
}

fn add_vec(k: &LocalField, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    a.iter().zip(b).map(|(x, y)| k.add(x, y)).collect()
}

/// ∫ φ(x) Ψ(⟨x, y⟩) dx as the finite sum over x ∈ B_{αminus} mod B_D,
/// D = max(αplus(φ), 1 − min ord y).
pub fn fourier_at(k: &LocalField, phi: &SbFunction, y: &[FieldElement]) -> Result<CycRational> {
    let m = phi.dim();
    if phi.is_zero() {
        return Ok(CycRational::zero(k.p()));
    }
    let mut oy = i64::MAX;
    for yi in y {
        oy = oy.min(yi.ord_or_max()?);
    }
    let depth = phi.constancy_bound().max(1i64.saturating_sub(oy));
    let lo = phi.support_bound().min(depth);
    let zero = vec![FieldElement::zero(); m];
    k.check_budget(k.coset_count(m, lo, depth).saturating_mul(phi.terms().len() as u128))?;
    let shifted: Vec<Vec<FieldElement>> = phi.terms().iter().map(|t| add_vec(k, &t.freq, y)).collect();
    let mut tally = Tally::new(phi.terms().len(), k.p());
    for x in k.coset_reps(&zero, lo, depth)? {
        for (i, t) in phi.terms().iter().enumerate() {
            if t.contains(k, &x)? {
                tally.hit(i, k.pairing_exponent(&x, &shifted[i])?);
            }
        }
    }
    tally.total(k, phi, m as i64 * depth)
}

/// ∫_{B(c,α)} ψ(f(x)) Ψ(⟨x, ζ⟩) dx at a fixed enumeration depth.
pub fn composed_query(
    k: &LocalField,
    psi: &SbFunction,
    f: &[Poly],
    center: &[FieldElement],
    radius: i64,
    zeta: &[FieldElement],
    depth: i64,
) -> Result<CycRational> {
    let m = center.len();
    let mut tally = Tally::new(psi.terms().len(), k.p());
    k.check_budget(k.coset_count(m, radius, depth))?;
    for x in k.coset_reps(center, radius, depth)? {
        let y = f.iter().map(|g| g.eval(k, &x)).collect::<Result<Vec<_>>>()?;
        let base = k.pairing_exponent(&x, zeta)?;
        for (i, t) in psi.terms().iter().enumerate() {
            if t.contains(k, &y)? {
                let e = (base + k.pairing_exponent(&y, &t.freq)?) % k.p();
                tally.hit(i, e);
            }
        }
    }
    tally.total(k, psi, m as i64 * depth)
}

/// ∫_{B(c_x,α)} [g(x) ∈ B(c_y,α)] Ψ(⟨x,ξ⟩ + ⟨g(x),η⟩) dx at a fixed depth.
pub fn graph_query(
    k: &LocalField,
    g: &[Poly],
    center: &[FieldElement],
    radius: i64,
    freq: &[FieldElement],
    depth: i64,
) -> Result<CycRational> {
    let mx = g[0].nvars();
    let mut counts = vec![0i64; k.p() as usize];
    k.check_budget(k.coset_count(mx, radius, depth))?;
    'x: for x in k.coset_reps(&center[..mx], radius, depth)? {
        let y = g.iter().map(|gj| gj.eval(k, &x)).collect::<Result<Vec<_>>>()?;
        for (yj, cj) in y.iter().zip(&center[mx..]) {
            if !k.sub(yj, cj).head(radius)?.is_zero() {
                continue 'x;
            }
        }
        let e = (k.pairing_exponent(&x, &freq[..mx])? + k.pairing_exponent(&y, &freq[mx..])?) % k.p();
        counts[e as usize] += 1;
    }
    weigh(k.p(), k.q() as u64, &counts, mx as i64 * depth)
}

/// ∫_{B(c,α)} Ψ(h(x)) dx at a fixed depth.
pub fn phase_integral(k: &LocalField, h: &Poly, center: &[FieldElement], radius: i64, depth: i64) -> Result<CycRational> {
    let m = center.len();
    let mut counts = vec![0i64; k.p() as usize];
    k.check_budget(k.coset_count(m, radius, depth))?;
    for x in k.coset_reps(center, radius, depth)? {
        counts[k.character_exponent(&h.eval(k, &x)?)? as usize] += 1;
    }
    weigh(k.p(), k.q() as u64, &counts, m as i64 * depth)
}

/// A Fourier transform with its first coefficient multiplied by L: the
/// negative control for oracle comparisons.
pub fn corrupt(k: &LocalField, phi: &SbFunction) -> Result<SbFunction> {
    let mut terms = phi.terms().to_vec();
    if let Some(t) = terms.first_mut() {
        t.coeff = t.coeff.mul(&MotivicScalar::l_pow(k.p(), 1));
    }
    SbFunction::new(k, phi.dim(), terms)
}

/// First covector where the closed-form transform and the character sum
/// disagree, if any.
pub fn compare_fourier(
    k: &LocalField,
    phi: &SbFunction,
    transform: &SbFunction,
    ys: &[Vec<FieldElement>],
) -> Result<Option<(Vec<FieldElement>, CycRational, CycRational)>> {
    let q = k.q() as u64;
    for y in ys {
        let sym = transform.evaluate(k, y)?.eval_at_q(q)?;
        let brute = fourier_at(k, phi, y)?;
        if sym != brute {
            return Ok(Some((y.clone(), sym, brute)));
        }
    }
    Ok(None)
}

/// (φ ∗ ψ)(x) = ∫ φ(y) ψ(x − y) dy as a sum over y ∈ B_{αminus(φ)} mod B_D,
/// D the larger constancy radius, from pointwise values only.
pub fn convolution_at(k: &LocalField, phi: &SbFunction, psi: &SbFunction, x: &[FieldElement]) -> Result<CycRational> {
    let m = phi.dim();
    if phi.is_zero() || psi.is_zero() {
        return Ok(CycRational::zero(k.p()));
    }
    let q = k.q() as u64;
    let depth = phi.constancy_bound().max(psi.constancy_bound());
    let lo = phi.support_bound().min(depth);
    k.check_budget(k.coset_count(m, lo, depth))?;
    let zero = vec![FieldElement::zero(); m];
    let mut acc = MotivicScalar::zero(k.p());
    for y in k.coset_reps(&zero, lo, depth)? {
        let a = phi.evaluate(k, &y)?;
        if a.is_zero() {
            continue;
        }
        let shifted: Vec<FieldElement> = x.iter().zip(&y).map(|(xi, yi)| k.sub(xi, yi)).collect();
        acc.add_assign(&a.mul(&psi.evaluate(k, &shifted)?));
    }
    let total = acc.eval_at_q(q)?;
    let mut unit = vec![0i64; k.p() as usize];
    unit[0] = 1;
    Ok(total.mul(&weigh(k.p(), q, &unit, m as i64 * depth)?))
}
