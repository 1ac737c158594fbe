//! The residue field F_q = F_p[θ]/(modulus), tabulated.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element of F_q encoded as the integer Σ c_i p^i of its coordinates
/// in the basis 1, θ, …, θ^{f-1}.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
pub struct ResidueElement(pub u16);

#[derive(Clone, Debug)]
pub struct ResidueField {
    p: u32,
    f: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    trace: Vec<u8>,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl ResidueField {
    /// Shipped moduli for q ∈ {2,3,4,5,7,8,9}; any other prime q uses f = 1.
    pub fn default_modulus(q: u32) -> Option<(u32, u32, Vec<u32>)> {
        match q {
            4 => Some((2, 2, vec![1, 1, 1])),
            8 => Some((2, 3, vec![1, 1, 0, 1])),
            9 => Some((3, 2, vec![1, 0, 1])),
            q if is_prime(q) => Some((q, 1, vec![0, 1])),
            _ => None,
        }
    }

    pub fn default_for(q: u32) -> Result<Self> {
        let (p, f, modulus) =
            Self::default_modulus(q).ok_or_else(|| Error::invalid(format!("no shipped modulus for q = {q}")))?;
        Self::new(p, f, modulus)
    }

    /// `modulus` lists coefficients from degree 0 up to the leading 1.
    pub fn new(p: u32, f: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if f == 0 || modulus.len() != f as usize + 1 || modulus[f as usize] != 1 {
            return Err(Error::invalid("modulus must be monic of degree f"));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::invalid("modulus coefficients must lie in [0, p)"));
        }
        let q64 = (p as u64).pow(f);
        if q64 > 1 << 12 {
            return Err(Error::invalid(format!("q = {q64} is too large for tabulation")));
        }
        let q = q64 as u32;
        let coords = |x: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(f as usize);
            let mut x = x;
            for _ in 0..f {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let encode = |v: &[u32]| -> u16 { v.iter().rev().fold(0u32, |acc, &c| acc * p + c) as u16 };
        let n = q as usize;
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        for a in 0..q {
            let ca = coords(a);
            for b in 0..q {
                let cb = coords(b);
                let sum: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = encode(&sum);
                let mut prod = vec![0u32; 2 * f as usize];
                for (i, x) in ca.iter().enumerate() {
                    for (j, y) in cb.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for k in (f as usize..prod.len()).rev() {
                    let top = prod[k];
                    if top == 0 {
                        continue;
                    }
                    prod[k] = 0;
                    for (i, m) in modulus[..f as usize].iter().enumerate() {
                        let j = k - f as usize + i;
                        prod[j] = (prod[j] + (p - top) * m) % p;
                    }
                }
                mul[(a * q + b) as usize] = encode(&prod[..f as usize]);
            }
        }
        let neg: Vec<u16> = (0..q)
            .map(|a| encode(&coords(a).iter().map(|c| (p - c) % p).collect::<Vec<_>>()))
            .collect();
        let mut inv = vec![0u16; n];
        for a in 1..q {
            match (1..q).find(|&b| mul[(a * q + b) as usize] == 1) {
                Some(b) => inv[a as usize] = b as u16,
                None => return Err(Error::invalid("modulus is not irreducible")),
            }
        }
        let mut field = ResidueField {
            p,
            f,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
            trace: vec![0; n],
        };
        for a in 0..q {
            let mut x = ResidueElement(a as u16);
            let mut acc = ResidueElement(0);
            for _ in 0..f {
                acc = field.add(acc, x);
                x = field.pow(x, p as u64);
            }
            if acc.0 as u32 >= p {
                return Err(Error::invalid("trace left the prime field"));
            }
            field.trace[a as usize] = acc.0 as u8;
        }
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> ResidueElement {
        ResidueElement(0)
    }

    pub fn one(&self) -> ResidueElement {
        ResidueElement(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = ResidueElement> {
        (0..self.q as u16).map(ResidueElement)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> ResidueElement {
        ResidueElement(n.rem_euclid(self.p as i64) as u16)
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<ResidueElement> {
        if coords.len() > self.f as usize || coords.iter().any(|&c| c >= self.p) {
            return Err(Error::invalid(format!(
                "residue coordinates {coords:?} invalid for p = {}, f = {}",
                self.p, self.f
            )));
        }
        let v = coords.iter().rev().fold(0u32, |acc, &c| acc * self.p + c);
        Ok(ResidueElement(v as u16))
    }

    pub fn coords(&self, a: ResidueElement) -> Vec<u32> {
        let mut x = a.0 as u32;
        (0..self.f)
            .map(|_| {
                let c = x % self.p;
                x /= self.p;
                c
            })
            .collect()
    }

    #[inline]
    pub fn add(&self, a: ResidueElement, b: ResidueElement) -> ResidueElement {
        ResidueElement(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: ResidueElement, b: ResidueElement) -> ResidueElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: ResidueElement) -> ResidueElement {
        ResidueElement(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn mul(&self, a: ResidueElement, b: ResidueElement) -> ResidueElement {
        ResidueElement(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }

    pub fn inv(&self, a: ResidueElement) -> Option<ResidueElement> {
        if a.0 == 0 {
            None
        } else {
            Some(ResidueElement(self.inv[a.0 as usize]))
        }
    }

    pub fn pow(&self, a: ResidueElement, mut e: u64) -> ResidueElement {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// tr_{F_q/F_p}(a) as an integer in [0, p).
    #[inline]
    pub fn trace(&self, a: ResidueElement) -> u32 {
        self.trace[a.0 as usize] as u32
    }

    /// Bracketed coordinate form, e.g. `[1,2]`.
    pub fn format(&self, a: ResidueElement) -> String {
        let c: Vec<String> = self.coords(a).iter().map(u32::to_string).collect();
        format!("[{}]", c.join(","))
    }

    pub fn parse(&self, text: &str) -> Result<ResidueElement> {
        let t = text.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::Parse {
                pos: 0,
                msg: format!("residue element must be bracketed: {t}"),
            })?;
        let coords = inner
            .split(',')
            .map(|c| {
                c.trim().parse::<u32>().map_err(|_| Error::Parse {
                    pos: 0,
                    msg: format!("bad residue coordinate {c:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.from_coords(&coords)
    }
}

impl fmt::Display for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}
