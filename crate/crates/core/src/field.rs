//! Truncated Laurent series over F_q: the local field K = F_q((t)).
//!
//! A [`FieldElement`] is exact (finitely many nonzero coefficients, all
//! others zero) or carries a precision `N`: coefficients are known for
//! exponents below `N` and unknown from `N` on. Arithmetic propagates
//! precision; asking for data beyond the known window is an error, never a
//! silent truncation.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::residue::{ResidueElement, ResidueField};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElement {
    /// exponent of `coeffs[0]`
    val: i64,
    coeffs: Vec<ResidueElement>,
    /// `None` for exact elements
    prec: Option<i64>,
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    /// Deterministic total order used for canonical sorting: compares the
    /// coefficient sequences exponent by exponent.
    fn cmp(&self, other: &Self) -> Ordering {
        let lo = self.low().min(other.low());
        let hi = self.high().max(other.high());
        for e in lo..hi {
            let c = self.coeff_raw(e).cmp(&other.coeff_raw(e));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.prec.cmp(&other.prec)
    }
}

impl FieldElement {
    pub fn zero() -> Self {
        FieldElement {
            val: 0,
            coeffs: Vec::new(),
            prec: None,
        }
    }

    pub fn one() -> Self {
        Self::monomial(ResidueElement(1), 0)
    }

    /// `a · t^e`
    pub fn monomial(a: ResidueElement, e: i64) -> Self {
        Self::from_coeffs(e, vec![a])
    }

    pub fn t_pow(e: i64) -> Self {
        Self::monomial(ResidueElement(1), e)
    }

    /// Exact element Σ coeffs[i] t^{val+i}.
    pub fn from_coeffs(val: i64, coeffs: Vec<ResidueElement>) -> Self {
        let mut x = FieldElement {
            val,
            coeffs,
            prec: None,
        };
        x.strip();
        x
    }

    /// Element known only below exponent `prec`.
    pub fn from_coeffs_with_prec(val: i64, coeffs: Vec<ResidueElement>, prec: i64) -> Self {
        let mut x = FieldElement {
            val,
            coeffs,
            prec: Some(prec),
        };
        x.strip();
        x
    }

    /// The element `O(t^N)` about which nothing below `N` is nonzero.
    pub fn unknown_from(prec: i64) -> Self {
        FieldElement {
            val: prec,
            coeffs: Vec::new(),
            prec: Some(prec),
        }
    }

    fn strip(&mut self) {
        if let Some(n) = self.prec {
            let keep = (n - self.val).clamp(0, self.coeffs.len() as i64) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last() == Some(&ResidueElement(0)) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.0 == 0).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.val = self.prec.unwrap_or(0);
        }
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    /// Exact zero. An inexact element with no known nonzero coefficient is
    /// not zero: its order cannot be certified.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec.is_none()
    }

    /// Lowest exponent carrying a known nonzero coefficient, or the
    /// precision bound when there is none.
    fn low(&self) -> i64 {
        self.val
    }

    fn high(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    fn coeff_raw(&self, e: i64) -> ResidueElement {
        if e < self.val || e >= self.high() {
            ResidueElement(0)
        } else {
            self.coeffs[(e - self.val) as usize]
        }
    }

    /// Coefficient of t^e.
    pub fn coeff(&self, e: i64) -> Result<ResidueElement> {
        if let Some(n) = self.prec {
            if e >= n {
                return Err(Error::PrecisionExhausted(format!(
                    "coefficient of t^{e} requested, known below t^{n}"
                )));
            }
        }
        Ok(self.coeff_raw(e))
    }

    /// `Ok(None)` stands for ord 0 = +∞.
    pub fn ord(&self) -> Result<Option<i64>> {
        if !self.coeffs.is_empty() {
            Ok(Some(self.val))
        } else if let Some(n) = self.prec {
            Err(Error::PrecisionExhausted(format!("order of O(t^{n}) is not certified")))
        } else {
            Ok(None)
        }
    }

    /// Order for elements known to be nonzero; `i64::MAX` for exact zero.
    pub fn ord_or_max(&self) -> Result<i64> {
        Ok(self.ord()?.unwrap_or(i64::MAX))
    }

    /// ac(x) = x t^{-ord x} mod t, with ac(0) = 0.
    pub fn ac(&self) -> Result<ResidueElement> {
        Ok(match self.ord()? {
            Some(v) => self.coeff_raw(v),
            None => ResidueElement(0),
        })
    }

    /// Nonzero (exponent, coefficient) pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, ResidueElement)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.0 != 0)
            .map(move |(i, c)| (self.val + i as i64, *c))
    }

    /// Largest exponent with a nonzero coefficient.
    pub fn top_exponent(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.high() - 1)
        }
    }

    /// Exact element keeping only exponents below `n`.
    pub fn head(&self, n: i64) -> Result<Self> {
        if let Some(p) = self.prec {
            if n > p {
                return Err(Error::PrecisionExhausted(format!(
                    "truncation at t^{n} beyond known window t^{p}"
                )));
            }
        }
        let coeffs = self.terms().filter(|(e, _)| *e < n).collect::<Vec<_>>();
        Ok(Self::from_terms(coeffs))
    }

    /// Keeps only exponents at least `n` (same precision).
    pub fn tail(&self, n: i64) -> Self {
        let mut out = Self::from_terms(self.terms().filter(|(e, _)| *e >= n).collect());
        out.prec = self.prec;
        out.strip();
        out
    }

    fn from_terms(terms: Vec<(i64, ResidueElement)>) -> Self {
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms[0].0;
        let hi = terms.last().unwrap().0;
        let mut coeffs = vec![ResidueElement(0); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] = c;
        }
        Self::from_coeffs(lo, coeffs)
    }

    /// Multiplication by t^k.
    pub fn shift(&self, k: i64) -> Self {
        FieldElement {
            val: self.val + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec.map(|n| n + k),
        }
    }

    /// Restricts to a precision `n` (no-op if already coarser).
    pub fn with_prec(&self, n: i64) -> Self {
        let prec = Some(self.prec.map_or(n, |p| p.min(n)));
        let mut out = FieldElement {
            val: self.val,
            coeffs: self.coeffs.clone(),
            prec,
        };
        out.strip();
        out
    }
}

struct FieldInner {
    residue: ResidueField,
    budget: u128,
    window: (i64, i64),
}

/// The field K = F_q((t)) together with the enumeration budget and the
/// precision window for external input. Cheap to clone.
#[derive(Clone)]
pub struct LocalField {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalField")
            .field("p", &self.p())
            .field("f", &self.residue().f())
            .field("budget", &self.inner.budget)
            .field("window", &self.inner.window)
            .finish()
    }
}

pub const DEFAULT_BUDGET: u128 = 4_000_000;

impl LocalField {
    pub fn new(residue: ResidueField, budget: u128, window: (i64, i64)) -> Self {
        LocalField {
            inner: Arc::new(FieldInner {
                residue,
                budget,
                window,
            }),
        }
    }

    /// F_q((t)) with the shipped modulus, default budget and window [-32, 32].
    pub fn with_q(q: u32) -> Result<Self> {
        Ok(Self::new(ResidueField::default_for(q)?, DEFAULT_BUDGET, (-32, 32)))
    }

    pub fn with_budget(&self, budget: u128) -> Self {
        LocalField {
            inner: Arc::new(FieldInner {
                residue: self.inner.residue.clone(),
                budget,
                window: self.inner.window,
            }),
        }
    }

    pub fn residue(&self) -> &ResidueField {
        &self.inner.residue
    }

    pub fn p(&self) -> u32 {
        self.inner.residue.p()
    }

    pub fn q(&self) -> u32 {
        self.inner.residue.q()
    }

    pub fn budget(&self) -> u128 {
        self.inner.budget
    }

    pub fn window(&self) -> (i64, i64) {
        self.inner.window
    }

    /// Fails when `count` enumerations would exceed the budget.
    pub fn check_budget(&self, count: u128) -> Result<()> {
        if count > self.inner.budget {
            Err(Error::Budget {
                requested: count,
                budget: self.inner.budget,
            })
        } else {
            Ok(())
        }
    }

    /// q^e as u128, saturating.
    pub fn q_pow(&self, e: i64) -> u128 {
        if e <= 0 {
            return 1;
        }
        (self.q() as u128).checked_pow(e as u32).unwrap_or(u128::MAX)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement::monomial(self.residue().from_int(n), 0)
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let prec = match (x.prec, y.prec) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(i64::MAX).min(b.unwrap_or(i64::MAX))),
        };
        if x.coeffs.is_empty() {
            let mut out = y.clone();
            out.prec = prec;
            out.strip();
            return out;
        }
        if y.coeffs.is_empty() {
            let mut out = x.clone();
            out.prec = prec;
            out.strip();
            return out;
        }
        let lo = x.val.min(y.val);
        let hi = x.high().max(y.high());
        let k = self.residue();
        let coeffs = (lo..hi).map(|e| k.add(x.coeff_raw(e), y.coeff_raw(e))).collect();
        let mut out = FieldElement { val: lo, coeffs, prec };
        out.strip();
        out
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        let k = self.residue();
        FieldElement {
            val: x.val,
            coeffs: x.coeffs.iter().map(|&c| k.neg(c)).collect(),
            prec: x.prec,
        }
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        // precision: min(ord x + prec y, ord y + prec x), where an unknown
        // order is bounded below by the precision itself
        let lower = |z: &FieldElement| if z.coeffs.is_empty() { z.prec } else { Some(z.val) };
        let prec = match (x.prec, y.prec) {
            (None, None) => None,
            _ => {
                let a = match (lower(x), y.prec) {
                    (Some(o), Some(p)) => o.saturating_add(p),
                    _ => i64::MAX,
                };
                let b = match (lower(y), x.prec) {
                    (Some(o), Some(p)) => o.saturating_add(p),
                    _ => i64::MAX,
                };
                Some(a.min(b))
            }
        };
        if x.coeffs.is_empty() || y.coeffs.is_empty() {
            return match prec {
                None => FieldElement::zero(),
                Some(n) => FieldElement::unknown_from(n),
            };
        }
        let k = self.residue();
        let mut coeffs = vec![ResidueElement(0); x.coeffs.len() + y.coeffs.len() - 1];
        for (i, &a) in x.coeffs.iter().enumerate() {
            if a.0 == 0 {
                continue;
            }
            for (j, &b) in y.coeffs.iter().enumerate() {
                if b.0 != 0 {
                    coeffs[i + j] = k.add(coeffs[i + j], k.mul(a, b));
                }
            }
        }
        let mut out = FieldElement {
            val: x.val + y.val,
            coeffs,
            prec,
        };
        out.strip();
        out
    }

    /// Scalar multiplication by a residue constant.
    pub fn scale(&self, a: ResidueElement, x: &FieldElement) -> FieldElement {
        let k = self.residue();
        let mut out = FieldElement {
            val: x.val,
            coeffs: x.coeffs.iter().map(|&c| k.mul(a, c)).collect(),
            prec: x.prec,
        };
        out.strip();
        out
    }

    pub fn pow(&self, x: &FieldElement, e: u32) -> FieldElement {
        let mut acc = FieldElement::one();
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Inverse of a monomial `a t^e`; other elements have infinite
    /// expansions and are rejected.
    pub fn inv_monomial(&self, x: &FieldElement) -> Result<FieldElement> {
        let terms: Vec<_> = x.terms().collect();
        match (terms.as_slice(), x.prec) {
            ([(e, a)], None) => Ok(FieldElement::monomial(self.residue().inv(*a).unwrap(), -e)),
            _ => Err(Error::PrecisionExhausted(
                "inverse of a non-monomial element has an infinite expansion".into(),
            )),
        }
    }

    /// Exponent of the additive character: tr(a_0(x)) where a_0 is the
    /// coefficient of t^0. The character is Ψ(x) = ζ_p^{tr(a_0(x))}.
    pub fn character_exponent(&self, x: &FieldElement) -> Result<u32> {
        let a0 = x.coeff(0)?;
        Ok(self.residue().trace(a0))
    }

    /// Σ x_i ξ_i
    pub fn inner_product(&self, x: &[FieldElement], xi: &[FieldElement]) -> Result<FieldElement> {
        if x.len() != xi.len() {
            return Err(Error::MismatchedDimension(x.len(), xi.len()));
        }
        let mut acc = FieldElement::zero();
        for (a, b) in x.iter().zip(xi) {
            acc = self.add(&acc, &self.mul(a, b));
        }
        Ok(acc)
    }

    /// Character exponent of ⟨x, ξ⟩ computed from the coefficient of t^0
    /// only, without forming the full product.
    pub fn pairing_exponent(&self, x: &[FieldElement], xi: &[FieldElement]) -> Result<u32> {
        let k = self.residue();
        let mut acc = ResidueElement(0);
        for (a, b) in x.iter().zip(xi) {
            if a.coeffs.is_empty() && a.prec.is_none() || b.coeffs.is_empty() && b.prec.is_none() {
                continue;
            }
            for (e, c) in a.terms() {
                let d = b.coeff(-e)?;
                if d.0 != 0 {
                    acc = k.add(acc, k.mul(c, d));
                }
            }
            // unknown coefficients of a at exponents >= prec pair with b below -prec
            if let Some(n) = a.prec {
                if b.coeffs.is_empty() {
                    if b.prec.is_some() {
                        return Err(Error::PrecisionExhausted("pairing of two unknown elements".into()));
                    }
                } else if b.val <= -n {
                    return Err(Error::PrecisionExhausted(
                        "pairing needs coefficients beyond the precision window".into(),
                    ));
                }
            }
            if let Some(n) = b.prec {
                if a.coeffs.is_empty() {
                    if a.prec.is_some() {
                        return Err(Error::PrecisionExhausted("pairing of two unknown elements".into()));
                    }
                } else if a.val <= -n {
                    return Err(Error::PrecisionExhausted(
                        "pairing needs coefficients beyond the precision window".into(),
                    ));
                }
            }
        }
        Ok(k.trace(acc))
    }

    /// Number of representatives of B(c, α) mod B(c, D) in dimension m.
    pub fn coset_count(&self, m: usize, alpha: i64, depth: i64) -> u128 {
        let e = (m as i64).saturating_mul((depth - alpha).max(0));
        self.q_pow(e)
    }

    /// Representatives of B(c, α) modulo B(c, D): the canonical centre
    /// (c mod t^α) plus every choice of digits at exponents α..D-1 in each
    /// coordinate. Lexicographic order, last digit fastest.
    pub fn enumerate_coset_reps(&self, c: &[FieldElement], alpha: i64, depth: i64) -> Result<Vec<Vec<FieldElement>>> {
        let iter = self.coset_reps(c, alpha, depth)?;
        Ok(iter.collect())
    }

    /// Iterator form of [`enumerate_coset_reps`](Self::enumerate_coset_reps).
    pub fn coset_reps(&self, c: &[FieldElement], alpha: i64, depth: i64) -> Result<CosetReps> {
        if depth < alpha {
            return Err(Error::invalid(format!("depth {depth} below radius {alpha}")));
        }
        let count = self.coset_count(c.len(), alpha, depth);
        self.check_budget(count)?;
        let base = c.iter().map(|ci| ci.head(alpha)).collect::<Result<Vec<_>>>()?;
        Ok(CosetReps {
            q: self.q() as u16,
            base,
            alpha,
            width: (depth - alpha) as usize,
            digits: vec![0; c.len() * (depth - alpha) as usize],
            remaining: count,
        })
    }

    /// Representatives of the ball B(0, α) mod B_D in dimension m.
    pub fn ball_reps(&self, m: usize, alpha: i64, depth: i64) -> Result<CosetReps> {
        self.coset_reps(&vec![FieldElement::zero(); m], alpha, depth)
    }

    /// Text form `t^-1*[2] + t^0*[1]`, with `+ O(t^N)` for inexact elements.
    pub fn format(&self, x: &FieldElement) -> String {
        let mut parts: Vec<String> = x
            .terms()
            .map(|(e, c)| format!("t^{}*{}", e, self.residue().format(c)))
            .collect();
        if let Some(n) = x.prec {
            parts.push(format!("O(t^{n})"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    pub fn format_vec(&self, xs: &[FieldElement]) -> Vec<String> {
        xs.iter().map(|x| self.format(x)).collect()
    }

    pub fn parse(&self, text: &str) -> Result<FieldElement> {
        let text = text.trim();
        if text == "0" {
            return Ok(FieldElement::zero());
        }
        let mut acc = FieldElement::zero();
        let mut prec = None;
        for raw in text.split('+') {
            let part = raw.trim();
            let bad = || Error::Parse {
                pos: 0,
                msg: format!("bad field term {part:?}"),
            };
            if let Some(rest) = part.strip_prefix("O(t^").and_then(|r| r.strip_suffix(')')) {
                let n: i64 = rest.trim().parse().map_err(|_| bad())?;
                prec = Some(prec.map_or(n, |p: i64| p.min(n)));
                continue;
            }
            let (exp, coeff) = part
                .strip_prefix("t^")
                .and_then(|r| r.split_once('*'))
                .ok_or_else(bad)?;
            let e: i64 = exp.trim().parse().map_err(|_| bad())?;
            let c = self.residue().parse(coeff)?;
            acc = self.add(&acc, &FieldElement::monomial(c, e));
        }
        Ok(match prec {
            Some(n) => acc.with_prec(n),
            None => acc,
        })
    }

    /// Rejects elements with known nonzero coefficients outside the
    /// configured window.
    pub fn check_window(&self, x: &FieldElement) -> Result<()> {
        let (lo, hi) = self.inner.window;
        for (e, _) in x.terms() {
            if e < lo || e > hi {
                return Err(Error::PrecisionExhausted(format!(
                    "exponent {e} outside window [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}

/// Lazy enumeration of coset representatives.
pub struct CosetReps {
    q: u16,
    base: Vec<FieldElement>,
    alpha: i64,
    width: usize,
    digits: Vec<u16>,
    remaining: u128,
}

impl CosetReps {
    pub fn len(&self) -> u128 {
        self.remaining
    }

    pub fn is_empty(&self) -> bool {
        self.remaining == 0
    }
}

impl Iterator for CosetReps {
    type Item = Vec<FieldElement>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let out = self
            .base
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let digits = &self.digits[i * self.width..(i + 1) * self.width];
                if digits.iter().all(|&d| d == 0) {
                    return b.clone();
                }
                // base has no terms at exponents >= alpha
                let mut terms: Vec<(i64, ResidueElement)> = b.terms().collect();
                for (j, &d) in digits.iter().enumerate() {
                    if d != 0 {
                        terms.push((self.alpha + j as i64, ResidueElement(d)));
                    }
                }
                FieldElement::from_terms(terms)
            })
            .collect();
        // odometer, last digit fastest
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.q {
                break;
            }
            *d = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> LocalField {
        LocalField::with_q(3).unwrap()
    }

    #[test]
    fn add_mul_examples() {
        let k = k3();
        let a = k.add(&FieldElement::t_pow(-1), &FieldElement::one());
        let b = k.neg(&FieldElement::t_pow(-1));
        assert_eq!(k.add(&a, &b), FieldElement::one());
        assert_eq!(k.mul(&FieldElement::t_pow(2), &FieldElement::t_pow(-2)), FieldElement::one());
        let s = k.add(&FieldElement::t_pow(3), &FieldElement::t_pow(5));
        assert_eq!(s.ord().unwrap(), Some(3));
    }

    #[test]
    fn precision_rules() {
        let k = k3();
        let x = FieldElement::from_coeffs_with_prec(0, vec![ResidueElement(1)], 4);
        let y = FieldElement::from_coeffs_with_prec(-1, vec![ResidueElement(2)], 2);
        assert_eq!(k.add(&x, &y).prec(), Some(2));
        // ord x + prec y = 2, ord y + prec x = 3
        assert_eq!(k.mul(&x, &y).prec(), Some(2));
        let unknown = k.sub(&x, &x);
        assert!(unknown.ord().is_err());
        assert!(x.coeff(4).is_err());
        assert!(k.character_exponent(&FieldElement::unknown_from(0)).is_err());
    }

    #[test]
    fn ac_and_zero() {
        let k = k3();
        assert_eq!(FieldElement::zero().ord().unwrap(), None);
        assert_eq!(FieldElement::zero().ac().unwrap(), ResidueElement(0));
        let x = k.add(&FieldElement::monomial(ResidueElement(2), -2), &FieldElement::t_pow(1));
        assert_eq!(x.ac().unwrap(), ResidueElement(2));
    }

    #[test]
    fn character_examples() {
        let k = k3();
        assert_eq!(k.character_exponent(&FieldElement::t_pow(1)).unwrap(), 0);
        assert_eq!(k.character_exponent(&FieldElement::one()).unwrap(), 1);
        let x = k.add(&k.from_int(2), &FieldElement::t_pow(-1));
        assert_eq!(k.character_exponent(&x).unwrap(), 2);
    }

    #[test]
    fn inner_product_examples() {
        let k = k3();
        let one = FieldElement::one();
        let zero = FieldElement::zero();
        assert!(k.inner_product(&[one.clone(), zero.clone()], &[zero.clone(), one.clone()]).unwrap().is_zero());
        assert_eq!(
            k.inner_product(&[FieldElement::t_pow(1)], &[FieldElement::t_pow(-1)]).unwrap(),
            one
        );
        assert!(k.inner_product(&[one.clone(), one.clone()], &[one.clone(), k.from_int(2)]).unwrap().is_zero());
        assert!(k.inner_product(&[one.clone()], &[one.clone(), one]).is_err());
    }

    #[test]
    fn coset_examples() {
        let k = k3();
        let reps = k.enumerate_coset_reps(&[FieldElement::zero()], 0, 1).unwrap();
        assert_eq!(reps, vec![vec![FieldElement::zero()], vec![k.from_int(1)], vec![k.from_int(2)]]);
        assert_eq!(k.enumerate_coset_reps(&[FieldElement::zero()], 0, 2).unwrap().len(), 9);
        let k2 = LocalField::with_q(2).unwrap();
        let z = FieldElement::zero();
        assert_eq!(k2.enumerate_coset_reps(&[z.clone(), z], -1, 0).unwrap().len(), 4);
        let small = k.with_budget(8);
        assert!(matches!(
            small.enumerate_coset_reps(&[FieldElement::zero()], 0, 2),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn coset_reps_tile_the_ball() {
        let k = LocalField::with_q(2).unwrap();
        let c = vec![k.parse("t^-2*[1] + t^1*[1]").unwrap()];
        let reps = k.enumerate_coset_reps(&c, -1, 2).unwrap();
        assert_eq!(reps.len(), 8);
        for (i, a) in reps.iter().enumerate() {
            // every rep lies in B(c, -1)
            assert!(k.sub(&a[0], &c[0]).ord().unwrap().unwrap_or(i64::MAX) >= -1);
            for b in &reps[i + 1..] {
                let d = k.sub(&a[0], &b[0]).ord().unwrap().unwrap();
                assert!(d < 2, "representatives congruent mod t^2");
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let k = LocalField::with_q(9).unwrap();
        let x = k.parse("t^-1*[2,1] + t^0*[1] + t^2*[0,1]").unwrap();
        assert_eq!(k.format(&x), "t^-1*[2,1] + t^0*[1,0] + t^2*[0,1]");
        assert_eq!(k.parse(&k.format(&x)).unwrap(), x);
        let y = k.parse("t^0*[1] + O(t^3)").unwrap();
        assert_eq!(y.prec(), Some(3));
        assert_eq!(k.parse(&k.format(&y)).unwrap(), y);
        assert!(k.parse("t^x*[1]").is_err());
    }
}
