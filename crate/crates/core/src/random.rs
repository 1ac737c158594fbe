//! Seeded generators for test batteries.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::cyclotomic::CyclotomicInteger;
use crate::distribution::BallQuery;
use crate::error::Result;
use crate::field::{FieldElement, LocalField};
use crate::residue::ResidueElement;
use crate::scalar::MotivicScalar;
use crate::schwartz::{SbFunction, SbTerm};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of random Schwartz-Bruhat functions.
#[derive(Clone, Copy, Debug)]
pub struct SbShape {
    pub m: usize,
    pub max_terms: usize,
    pub radius: (i64, i64),
    pub freq_ord: (i64, i64),
    /// lowest exponent appearing in a centre
    pub center_ord: i64,
}

impl SbShape {
    pub fn new(m: usize) -> Self {
        SbShape {
            m,
            max_terms: 4,
            radius: (-2, 2),
            freq_ord: (-2, 2),
            center_ord: -2,
        }
    }
}

/// Uniform element with coefficients at exponents lo..hi.
pub fn element(k: &LocalField, rng: &mut Rng64, lo: i64, hi: i64) -> FieldElement {
    if hi <= lo {
        return FieldElement::zero();
    }
    let q = k.q();
    let coeffs = (lo..hi)
        .map(|_| ResidueElement(rng.gen_range(0..q) as u16))
        .collect();
    FieldElement::from_coeffs(lo, coeffs)
}

/// Element of order exactly `ord`, with coefficients up to exponent hi.
pub fn element_of_ord(k: &LocalField, rng: &mut Rng64, ord: i64, hi: i64) -> FieldElement {
    let q = k.q();
    let lead = ResidueElement(rng.gen_range(1..q) as u16);
    let rest = element(k, rng, ord + 1, hi.max(ord + 1));
    k.add(&FieldElement::monomial(lead, ord), &rest)
}

pub fn scalar(p: u32, rng: &mut Rng64) -> MotivicScalar {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-3i64..=3);
    }
    MotivicScalar::monomial(CyclotomicInteger::from_int(p, n), rng.gen_range(-2i64..=2))
        .mul_zeta_pow(rng.gen_range(0..p as i64))
}

pub fn vector(k: &LocalField, rng: &mut Rng64, m: usize, lo: i64, hi: i64) -> Vec<FieldElement> {
    (0..m).map(|_| element(k, rng, lo, hi)).collect()
}

/// A frequency vector: zero half of the time, otherwise with some
/// coordinate of order in the given range.
pub fn frequency(k: &LocalField, rng: &mut Rng64, m: usize, ords: (i64, i64), radius: i64) -> Vec<FieldElement> {
    if rng.gen_bool(0.5) {
        return vec![FieldElement::zero(); m];
    }
    let hi = 1 - radius;
    let lead = rng.gen_range(0..m);
    (0..m)
        .map(|i| {
            let o = rng.gen_range(ords.0..=ords.1);
            if i == lead {
                element_of_ord(k, rng, o, hi)
            } else {
                element(k, rng, o, hi)
            }
        })
        .collect()
}

pub fn sb(k: &LocalField, rng: &mut Rng64, shape: &SbShape) -> Result<SbFunction> {
    loop {
        let n = rng.gen_range(1..=shape.max_terms);
        let mut terms = Vec::with_capacity(n);
        for _ in 0..n {
            let radius = rng.gen_range(shape.radius.0..=shape.radius.1);
            let center = vector(k, rng, shape.m, shape.center_ord, radius);
            let freq = frequency(k, rng, shape.m, shape.freq_ord, radius);
            terms.push(SbTerm::new(scalar(k.p(), rng), center, radius, freq));
        }
        let f = SbFunction::new(k, shape.m, terms)?;
        if !f.is_zero() {
            return Ok(f);
        }
    }
}

/// Ball queries with centres in B_{center_ord}, radii in the given range
/// and, half of the time, a twist.
pub fn queries(
    k: &LocalField,
    rng: &mut Rng64,
    m: usize,
    n: usize,
    center_ord: i64,
    radius: (i64, i64),
    freq_ord: (i64, i64),
) -> Vec<BallQuery> {
    (0..n)
        .map(|_| {
            let r = rng.gen_range(radius.0..=radius.1);
            let c = vector(k, rng, m, center_ord, r);
            let xi = frequency(k, rng, m, freq_ord, r);
            BallQuery::new(c, r, xi)
        })
        .collect()
}
