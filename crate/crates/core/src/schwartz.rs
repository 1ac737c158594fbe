//! Schwartz-Bruhat functions: finite combinations of twisted polyball
//! indicators x ↦ a · 1_{B(c,α)}(x) · Ψ(⟨x,ξ⟩), kept in a canonical form
//! where equality of functions built by the closed-form operations is
//! syntactic.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{FieldElement, LocalField};
use crate::scalar::MotivicScalar;

#[derive(Clone, Debug, PartialEq)]
pub struct SbTerm {
    pub coeff: MotivicScalar,
    pub center: Vec<FieldElement>,
    pub radius: i64,
    pub freq: Vec<FieldElement>,
}

type Key = (i64, Vec<FieldElement>, Vec<FieldElement>);

impl SbTerm {
    pub fn new(coeff: MotivicScalar, center: Vec<FieldElement>, radius: i64, freq: Vec<FieldElement>) -> Self {
        SbTerm {
            coeff,
            center,
            radius,
            freq,
        }
    }

    /// Reduces the centre mod t^α and the frequency mod t^{1-α}, folding
    /// the dropped phase Ψ(⟨c, ξ_dropped⟩) into the coefficient.
    pub fn canonical(&self, k: &LocalField) -> Result<SbTerm> {
        if self.center.len() != self.freq.len() {
            return Err(Error::MismatchedDimension(self.center.len(), self.freq.len()));
        }
        let a = self.radius;
        let center = self.center.iter().map(|c| c.head(a)).collect::<Result<Vec<_>>>()?;
        let lo = self.freq.iter().map(|x| x.head(1 - a)).collect::<Result<Vec<_>>>()?;
        let hi: Vec<FieldElement> = self.freq.iter().map(|x| x.tail(1 - a)).collect();
        let mut coeff = self.coeff.clone();
        if hi.iter().any(|h| !h.is_zero()) {
            let e = k.pairing_exponent(&center, &hi)?;
            coeff = coeff.mul_zeta_pow(e as i64);
        }
        Ok(SbTerm {
            coeff,
            center,
            radius: a,
            freq: lo,
        })
    }

    fn key(&self) -> Key {
        (self.radius, self.center.clone(), self.freq.clone())
    }

    pub fn contains(&self, k: &LocalField, x: &[FieldElement]) -> Result<bool> {
        for (xi, ci) in x.iter().zip(&self.center) {
            if !k.sub(xi, ci).head(self.radius)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn has_frequency(&self) -> bool {
        self.freq.iter().any(|x| !x.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SbFunction {
    p: u32,
    m: usize,
    terms: Vec<SbTerm>,
    alpha_minus: i64,
    alpha_plus: i64,
}

impl SbFunction {
    pub fn zero(p: u32, m: usize) -> Self {
        SbFunction {
            p,
            m,
            terms: Vec::new(),
            alpha_minus: 0,
            alpha_plus: 0,
        }
    }

    /// Canonical form of an arbitrary list of terms.
    pub fn new(k: &LocalField, m: usize, terms: Vec<SbTerm>) -> Result<Self> {
        let mut map: BTreeMap<Key, MotivicScalar> = BTreeMap::new();
        let p = k.p();
        for t in terms {
            if t.center.len() != m {
                return Err(Error::MismatchedDimension(m, t.center.len()));
            }
            if t.coeff.p() != p {
                return Err(Error::MismatchedPrime(p, t.coeff.p()));
            }
            if t.coeff.is_zero() {
                continue;
            }
            let c = t.canonical(k)?;
            let key = c.key();
            match map.get_mut(&key) {
                Some(acc) => acc.add_assign(&c.coeff),
                None => {
                    map.insert(key, c.coeff);
                }
            }
        }
        let terms: Vec<SbTerm> = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((radius, center, freq), coeff)| SbTerm {
                coeff,
                center,
                radius,
                freq,
            })
            .collect();
        Ok(Self::from_canonical(p, m, terms))
    }

    fn from_canonical(p: u32, m: usize, terms: Vec<SbTerm>) -> Self {
        let (alpha_minus, alpha_plus) = if terms.is_empty() {
            (0, 0)
        } else {
            let lo = terms
                .iter()
                .map(|t| {
                    t.center
                        .iter()
                        .map(|c| c.ord_or_max().unwrap())
                        .min()
                        .unwrap_or(i64::MAX)
                        .min(t.radius)
                })
                .min()
                .unwrap();
            let hi = terms
                .iter()
                .map(|t| {
                    t.freq
                        .iter()
                        .filter(|x| !x.is_zero())
                        .map(|x| 1 - x.ord_or_max().unwrap())
                        .max()
                        .unwrap_or(i64::MIN)
                        .max(t.radius)
                })
                .max()
                .unwrap();
            (lo, hi)
        };
        SbFunction {
            p,
            m,
            terms,
            alpha_minus,
            alpha_plus,
        }
    }

    /// a · 1_{B(c,α)}
    pub fn indicator(k: &LocalField, center: Vec<FieldElement>, radius: i64) -> Result<Self> {
        let m = center.len();
        Self::twisted(k, center, radius, vec![FieldElement::zero(); m])
    }

    /// 1_{B(c,α)} · Ψ(⟨·,ξ⟩)
    pub fn twisted(k: &LocalField, center: Vec<FieldElement>, radius: i64, freq: Vec<FieldElement>) -> Result<Self> {
        let m = center.len();
        Self::new(k, m, vec![SbTerm::new(MotivicScalar::one(k.p()), center, radius, freq)])
    }

    /// 1_{B_α} in dimension m.
    pub fn ball(k: &LocalField, m: usize, radius: i64) -> Self {
        Self::indicator(k, vec![FieldElement::zero(); m], radius).expect("origin ball is canonical")
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &[SbTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The function vanishes outside B_{αminus}.
    pub fn support_bound(&self) -> i64 {
        self.alpha_minus
    }

    /// The function is constant on cosets of B_{αplus}.
    pub fn constancy_bound(&self) -> i64 {
        self.alpha_plus
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::MismatchedPrime(self.p, other.p));
        }
        if self.m != other.m {
            return Err(Error::MismatchedDimension(self.m, other.m));
        }
        Ok(())
    }

    fn map_terms(&self, k: &LocalField, f: impl Fn(&SbTerm) -> Result<SbTerm>) -> Result<Self> {
        let terms = self.terms.iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(k, self.m, terms)
    }

    pub fn evaluate(&self, k: &LocalField, x: &[FieldElement]) -> Result<MotivicScalar> {
        if x.len() != self.m {
            return Err(Error::MismatchedDimension(self.m, x.len()));
        }
        let mut acc = MotivicScalar::zero(self.p);
        for t in &self.terms {
            if t.contains(k, x)? {
                let e = k.pairing_exponent(x, &t.freq)?;
                acc.add_assign(&t.coeff.mul_zeta_pow(e as i64));
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, k: &LocalField, s: &MotivicScalar) -> Result<Self> {
        self.map_terms(k, |t| Ok(SbTerm { coeff: t.coeff.mul(s), ..t.clone() }))
    }

    pub fn add(&self, k: &LocalField, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::new(k, self.m, terms)
    }

    pub fn neg(&self, k: &LocalField) -> Result<Self> {
        self.scale(k, &MotivicScalar::from_int(self.p, -1))
    }

    pub fn sub(&self, k: &LocalField, other: &Self) -> Result<Self> {
        self.add(k, &other.neg(k)?)
    }

    /// φ(x) ↦ φ(−x)
    pub fn reflect(&self, k: &LocalField) -> Result<Self> {
        self.map_terms(k, |t| {
            Ok(SbTerm {
                coeff: t.coeff.clone(),
                center: t.center.iter().map(|c| k.neg(c)).collect(),
                radius: t.radius,
                freq: t.freq.iter().map(|x| k.neg(x)).collect(),
            })
        })
    }

    /// φ(x) ↦ φ(x − a)
    pub fn translate(&self, k: &LocalField, a: &[FieldElement]) -> Result<Self> {
        if a.len() != self.m {
            return Err(Error::MismatchedDimension(self.m, a.len()));
        }
        self.map_terms(k, |t| {
            let e = k.pairing_exponent(a, &t.freq)?;
            Ok(SbTerm {
                coeff: t.coeff.mul_zeta_pow(-(e as i64)),
                center: t.center.iter().zip(a).map(|(c, ai)| k.add(c, ai)).collect(),
                radius: t.radius,
                freq: t.freq.clone(),
            })
        })
    }

    /// x ↦ φ(x) Ψ(⟨x, ξ⟩)
    pub fn twist(&self, k: &LocalField, xi: &[FieldElement]) -> Result<Self> {
        if xi.len() != self.m {
            return Err(Error::MismatchedDimension(self.m, xi.len()));
        }
        self.map_terms(k, |t| {
            Ok(SbTerm {
                freq: t.freq.iter().zip(xi).map(|(a, b)| k.add(a, b)).collect(),
                ..t.clone()
            })
        })
    }

    /// Termwise closed form: (a, c, α, ξ) ↦ (a Ψ(⟨c,ξ⟩) L^{−mα}, −ξ, 1−α, c).
    pub fn fourier(&self, k: &LocalField) -> Result<Self> {
        let m = self.m as i64;
        self.map_terms(k, |t| {
            let e = k.pairing_exponent(&t.center, &t.freq)?;
            Ok(SbTerm {
                coeff: t.coeff.mul_zeta_pow(e as i64).mul_l_pow(-m * t.radius),
                center: t.freq.iter().map(|x| k.neg(x)).collect(),
                radius: 1 - t.radius,
                freq: t.center.clone(),
            })
        })
    }

    /// L^m · fourier ∘ reflect
    pub fn fourier_inverse(&self, k: &LocalField) -> Result<Self> {
        self.reflect(k)?
            .fourier(k)?
            .scale(k, &MotivicScalar::l_pow(self.p, self.m as i64))
    }

    pub fn multiply(&self, k: &LocalField, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let (big, small) = if a.radius <= b.radius { (a, b) } else { (b, a) };
                if !big.contains(k, &small.center)? {
                    continue;
                }
                terms.push(SbTerm {
                    coeff: a.coeff.mul(&b.coeff),
                    center: small.center.clone(),
                    radius: small.radius,
                    freq: a.freq.iter().zip(&b.freq).map(|(x, y)| k.add(x, y)).collect(),
                });
            }
        }
        Self::new(k, self.m, terms)
    }

    pub fn integrate(&self) -> MotivicScalar {
        let m = self.m as i64;
        let mut acc = MotivicScalar::zero(self.p);
        for t in &self.terms {
            if !t.has_frequency() {
                acc.add_assign(&t.coeff.mul_l_pow(-m * t.radius));
            }
        }
        acc
    }

    /// fourier_inverse(fourier(φ) · fourier(ψ))
    pub fn convolve(&self, k: &LocalField, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.fourier(k)?.multiply(k, &other.fourier(k)?)?.fourier_inverse(k)
    }

    /// The same function written on disjoint cosets of B_D (requires
    /// D ≥ every radius).
    pub fn refine_to_depth(&self, k: &LocalField, depth: i64) -> Result<Self> {
        let mut total: u128 = 0;
        for t in &self.terms {
            if t.radius > depth {
                return Err(Error::Precondition(format!(
                    "refinement depth {depth} is below term radius {}",
                    t.radius
                )));
            }
            total = total.saturating_add(k.coset_count(self.m, t.radius, depth));
        }
        k.check_budget(total)?;
        let mut terms = Vec::new();
        for t in &self.terms {
            // the phase on each child coset is folded by canonicalisation
            for rep in k.coset_reps(&t.center, t.radius, depth)? {
                terms.push(SbTerm {
                    coeff: t.coeff.clone(),
                    center: rep,
                    radius: depth,
                    freq: t.freq.clone(),
                });
            }
        }
        Self::new(k, self.m, terms)
    }

    /// Semantic equality, decided on a common refinement.
    pub fn same_function(&self, k: &LocalField, other: &Self) -> Result<bool> {
        self.check(other)?;
        let diff = self.sub(k, other)?;
        if diff.is_zero() {
            return Ok(true);
        }
        let d = diff.constancy_bound();
        Ok(diff.refine_to_depth(k, d)?.is_zero())
    }

    /// φ ⊠ ψ on the product space; the term with the larger ball is split
    /// so both factors share one radius.
    pub fn tensor(&self, k: &LocalField, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::MismatchedPrime(self.p, other.p));
        }
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let r = a.radius.max(b.radius);
                let split = |t: &SbTerm| -> Result<Vec<SbTerm>> {
                    k.coset_reps(&t.center, t.radius, r)?
                        .map(|c| {
                            SbTerm {
                                coeff: t.coeff.clone(),
                                center: c,
                                radius: r,
                                freq: t.freq.clone(),
                            }
                            .canonical(k)
                        })
                        .collect()
                };
                for x in split(a)? {
                    for y in split(b)? {
                        terms.push(SbTerm {
                            coeff: x.coeff.mul(&y.coeff),
                            center: x.center.iter().chain(&y.center).cloned().collect(),
                            radius: r,
                            freq: x.freq.iter().chain(&y.freq).cloned().collect(),
                        });
                    }
                }
            }
        }
        Self::new(k, self.m + other.m, terms)
    }

    /// y ↦ φ(x, y) for a fixed leading block x.
    pub fn slice_first(&self, k: &LocalField, x: &[FieldElement]) -> Result<Self> {
        let mx = x.len();
        if mx > self.m {
            return Err(Error::MismatchedDimension(self.m, mx));
        }
        let mut terms = Vec::new();
        for t in &self.terms {
            let head = SbTerm {
                coeff: t.coeff.clone(),
                center: t.center[..mx].to_vec(),
                radius: t.radius,
                freq: t.freq[..mx].to_vec(),
            };
            if head.contains(k, x)? {
                let e = k.pairing_exponent(x, &head.freq)?;
                terms.push(SbTerm {
                    coeff: t.coeff.mul_zeta_pow(e as i64),
                    center: t.center[mx..].to_vec(),
                    radius: t.radius,
                    freq: t.freq[mx..].to_vec(),
                });
            }
        }
        Self::new(k, self.m - mx, terms)
    }

    /// x ↦ φ(x, y) for a fixed trailing block y.
    pub fn slice_last(&self, k: &LocalField, y: &[FieldElement]) -> Result<Self> {
        let my = y.len();
        if my > self.m {
            return Err(Error::MismatchedDimension(self.m, my));
        }
        let mx = self.m - my;
        let mut terms = Vec::new();
        for t in &self.terms {
            let tail = SbTerm {
                coeff: t.coeff.clone(),
                center: t.center[mx..].to_vec(),
                radius: t.radius,
                freq: t.freq[mx..].to_vec(),
            };
            if tail.contains(k, y)? {
                let e = k.pairing_exponent(y, &tail.freq)?;
                terms.push(SbTerm {
                    coeff: t.coeff.mul_zeta_pow(e as i64),
                    center: t.center[..mx].to_vec(),
                    radius: t.radius,
                    freq: t.freq[..mx].to_vec(),
                });
            }
        }
        Self::new(k, mx, terms)
    }
}
