//! Exact arithmetic in the ring of cyclotomic integers Z[ζ_p] and its
//! localisation at positive integers.
//!
//! Elements are stored in the power basis ζ^0, …, ζ^{p-2}. Reducing modulo
//! the p-th cyclotomic polynomial makes the representation unique, so
//! equality is coordinate-wise.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CyclotomicInteger {
    p: u32,
    coords: Vec<BigInt>,
}

impl CyclotomicInteger {
    pub fn zero(p: u32) -> Self {
        assert!(p >= 2, "cyclotomic prime must be at least 2");
        CyclotomicInteger {
            p,
            coords: vec![BigInt::zero(); (p - 1) as usize],
        }
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, 1)
    }

    pub fn from_int(p: u32, n: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(p);
        z.coords[0] = n.into();
        z
    }

    /// ζ_p^k for any integer k.
    pub fn zeta_pow(p: u32, k: i64) -> Self {
        let mut counts = vec![0i64; p as usize];
        counts[k.rem_euclid(p as i64) as usize] = 1;
        Self::from_exponent_counts(p, &counts)
    }

    /// Σ_k counts[k]·ζ^k, for a vector of length p indexed by exponent.
    pub fn from_exponent_counts(p: u32, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), p as usize);
        let top = counts[p as usize - 1];
        let coords = counts[..p as usize - 1]
            .iter()
            .map(|&c| BigInt::from(c - top))
            .collect();
        CyclotomicInteger { p, coords }
    }

    /// Builds from coordinates in the reduced basis; `coords.len()` must be p−1.
    pub fn from_coords(p: u32, coords: Vec<BigInt>) -> Result<Self> {
        if coords.len() != (p - 1) as usize {
            return Err(Error::invalid(format!(
                "expected {} coordinates for p = {}, got {}",
                p - 1,
                p,
                coords.len()
            )));
        }
        Ok(CyclotomicInteger { p, coords })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if it lies in Z.
    pub fn as_integer(&self) -> Option<&BigInt> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            Err(Error::MismatchedPrime(self.p, other.p))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add(other))
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        CyclotomicInteger { p: self.p, coords }
    }

    pub fn add_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.p, other.p);
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a += b;
        }
    }

    pub fn neg(&self) -> Self {
        CyclotomicInteger {
            p: self.p,
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CyclotomicInteger {
            p: self.p,
            coords: self.coords.iter().map(|a| a * k).collect(),
        }
    }

    /// Exact division by an integer; `None` if some coordinate is not divisible.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        let mut coords = Vec::with_capacity(self.coords.len());
        for a in &self.coords {
            let (q, r) = a.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            coords.push(q);
        }
        Some(CyclotomicInteger { p: self.p, coords })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul(other))
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let p = self.p as usize;
        // product in Z[x]/(x^p - 1), then reduce by 1 + x + … + x^{p-1}
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                full[(i + j) % p] += a * b;
            }
        }
        let top = full.pop().unwrap();
        let coords = full.into_iter().map(|c| c - &top).collect();
        CyclotomicInteger { p: self.p, coords }
    }

    /// Multiplication by ζ^k, a rotation of exponents.
    pub fn mul_zeta_pow(&self, k: i64) -> Self {
        let p = self.p as usize;
        let shift = k.rem_euclid(p as i64) as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            full[(i + shift) % p] = a.clone();
        }
        let top = full.pop().unwrap();
        let coords = full.into_iter().map(|c| c - &top).collect();
        CyclotomicInteger { p: self.p, coords }
    }

    /// gcd of the coordinates (non-negative).
    pub fn content(&self) -> BigInt {
        self.coords
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }
}

impl fmt::Display for CyclotomicInteger {
    /// `c0 + c1*z + c2*z^2 - …` over the nonzero coordinates.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_integer() {
            return write!(f, "{n}");
        }
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude();
            let mono = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => mono,
                (false, false) => format!("{mag}*{mono}"),
            };
            let neg = c.is_negative();
            match (first, neg) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// An element of Q(ζ_p) written as a cyclotomic integer over a positive
/// integer denominator, kept in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycRational {
    num: CyclotomicInteger,
    den: BigInt,
}

impl CycRational {
    pub fn new(num: CyclotomicInteger, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        let (num, den) = if den.is_negative() {
            (num.neg(), -den)
        } else {
            (num, den)
        };
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: CyclotomicInteger, den: BigInt) -> Self {
        if num.is_zero() {
            return CycRational {
                num,
                den: BigInt::one(),
            };
        }
        let g = num.content().gcd(&den);
        if g.is_one() {
            CycRational { num, den }
        } else {
            CycRational {
                num: num.div_exact(&g).expect("gcd divides content"),
                den: den / g,
            }
        }
    }

    pub fn zero(p: u32) -> Self {
        CycRational {
            num: CyclotomicInteger::zero(p),
            den: BigInt::one(),
        }
    }

    pub fn from_integer(num: CyclotomicInteger) -> Self {
        CycRational {
            num,
            den: BigInt::one(),
        }
    }

    pub fn from_fraction(p: u32, n: i64, d: i64) -> Self {
        Self::new(CyclotomicInteger::from_int(p, n), BigInt::from(d)).expect("nonzero denominator")
    }

    pub fn numerator(&self) -> &CyclotomicInteger {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::reduced(self.num.add(&other.num), self.den.clone());
        }
        let num = self.num.scale(&other.den).add(&other.num.scale(&self.den));
        Self::reduced(num, &self.den * &other.den)
    }

    pub fn neg(&self) -> Self {
        CycRational {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::reduced(self.num.mul(&other.num), &self.den * &other.den)
    }
}

impl fmt::Display for CycRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else if self.num.as_integer().is_some() {
            write!(f, "{}/{}", self.num, self.den)
        } else {
            write!(f, "({}) / {}", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_orbit_sums_to_zero() {
        for p in [2u32, 3, 5, 7] {
            let mut s = CyclotomicInteger::zero(p);
            for k in 0..p as i64 {
                s = s.add(&CyclotomicInteger::zeta_pow(p, k));
            }
            assert!(s.is_zero(), "p = {p}");
        }
    }

    #[test]
    fn zeta_order() {
        for p in [2u32, 3, 5, 7] {
            let z = CyclotomicInteger::zeta_pow(p, 1);
            let zi = CyclotomicInteger::zeta_pow(p, p as i64 - 1);
            assert!(z.mul(&zi).is_one());
            assert_eq!(z.mul_zeta_pow(p as i64 - 1), CyclotomicInteger::one(p));
        }
    }

    #[test]
    fn p2_is_integers_with_sign() {
        let z = CyclotomicInteger::zeta_pow(2, 1);
        assert_eq!(z.as_integer(), Some(&BigInt::from(-1)));
    }

    #[test]
    fn rational_reduces() {
        let a = CycRational::from_fraction(3, 2, 4);
        assert_eq!(a, CycRational::from_fraction(3, 1, 2));
        let b = a.add(&a);
        assert_eq!(b, CycRational::from_fraction(3, 1, 1));
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn mismatched_prime() {
        let a = CyclotomicInteger::one(3);
        let b = CyclotomicInteger::one(5);
        assert_eq!(a.try_add(&b), Err(Error::MismatchedPrime(3, 5)));
    }
}
