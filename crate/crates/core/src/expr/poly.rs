//! Polynomials over K in finitely many variables, with the Taylor
//! expansion and Newton-polygon valuation bounds used by the oscillatory
//! machinery.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use super::{Expr, Sort, Term};
use crate::error::{Error, Result};
use crate::field::{FieldElement, LocalField};

/// Σ a_k x^k with exponent vectors of length `nvars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: FieldElement) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, FieldElement::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, FieldElement)>, k: &LocalField) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(k, e, &c);
        }
        p
    }

    fn add_term(&mut self, k: &LocalField, e: Vec<u32>, c: &FieldElement) {
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c.clone());
                }
            }
            Entry::Occupied(mut o) => {
                let s = k.add(o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> FieldElement {
        self.terms.get(e).cloned().unwrap_or_else(FieldElement::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, k: &LocalField, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(k, e.clone(), c);
        }
        out
    }

    pub fn neg(&self, k: &LocalField) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), k.neg(c))).collect(),
        }
    }

    pub fn sub(&self, k: &LocalField, other: &Poly) -> Poly {
        self.add(k, &other.neg(k))
    }

    pub fn scale(&self, k: &LocalField, c: &FieldElement) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, a) in &self.terms {
            out.add_term(k, e.clone(), &k.mul(a, c));
        }
        out
    }

    pub fn mul(&self, k: &LocalField, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e1, a) in &self.terms {
            for (e2, b) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                out.add_term(k, e, &k.mul(a, b));
            }
        }
        out
    }

    pub fn pow(&self, k: &LocalField, n: u32) -> Poly {
        let mut acc = Poly::constant(self.nvars, FieldElement::one());
        for _ in 0..n {
            acc = acc.mul(k, self);
        }
        acc
    }

    pub fn eval(&self, k: &LocalField, x: &[FieldElement]) -> Result<FieldElement> {
        if x.len() != self.nvars {
            return Err(Error::MismatchedDimension(self.nvars, x.len()));
        }
        let mut acc = FieldElement::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (xi, &ei) in x.iter().zip(e) {
                if ei > 0 {
                    m = k.mul(&m, &k.pow(xi, ei));
                }
            }
            acc = k.add(&acc, &m);
        }
        Ok(acc)
    }

    pub fn derivative(&self, k: &LocalField, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            let c2 = k.mul(c, &k.from_int(e[i] as i64));
            if !c2.is_zero() {
                out.add_term(k, e2, &c2);
            }
        }
        out
    }

    pub fn gradient(&self, k: &LocalField) -> Vec<Poly> {
        (0..self.nvars).map(|i| self.derivative(k, i)).collect()
    }

    /// Re-embeds into `n` variables, sending variable i to `map[i]`.
    pub fn embed(&self, n: usize, map: &[usize]) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = vec![0; n];
                for (i, &ei) in e.iter().enumerate() {
                    e2[map[i]] += ei;
                }
                (e2, c.clone())
            })
            .collect();
        Poly { nvars: n, terms }
    }

    /// Fixes the trailing variables to `vals`, keeping the leading ones.
    pub fn substitute_tail(&self, k: &LocalField, vals: &[FieldElement]) -> Result<Poly> {
        if vals.len() > self.nvars {
            return Err(Error::MismatchedDimension(self.nvars, vals.len()));
        }
        let n = self.nvars - vals.len();
        let mut out = Poly::zero(n);
        for (e, c) in &self.terms {
            let mut a = c.clone();
            for (v, &ei) in vals.iter().zip(&e[n..]) {
                if ei > 0 {
                    a = k.mul(&a, &k.pow(v, ei));
                }
            }
            out.add_term(k, e[..n].to_vec(), &a);
        }
        Ok(out)
    }

    /// The polynomial z ↦ p(c + z).
    pub fn shift(&self, k: &LocalField, c: &[FieldElement]) -> Poly {
        let n = self.nvars;
        let deg = (0..n)
            .map(|i| self.terms.keys().map(|e| e[i]).max().unwrap_or(0))
            .collect::<Vec<_>>();
        // powers (c_i + z_i)^j
        let lin: Vec<Poly> = (0..n)
            .map(|i| Poly::var(n, i).add(k, &Poly::constant(n, c[i].clone())))
            .collect();
        let pows: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                let mut v = vec![Poly::constant(n, FieldElement::one())];
                for j in 1..=deg[i] as usize {
                    let next = v[j - 1].mul(k, &lin[i]);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Poly::zero(n);
        for (e, a) in &self.terms {
            let mut m = Poly::constant(n, a.clone());
            for i in 0..n {
                if e[i] > 0 {
                    m = m.mul(k, &pows[i][e[i] as usize]);
                }
            }
            out = out.add(k, &m);
        }
        out
    }

    /// Lower bound for ord p(z) over z ∈ B(0, α): min over terms of
    /// ord a_k + |k| α. `None` means p = 0.
    pub fn newton_lower(&self, alpha: i64) -> Option<i64> {
        self.terms
            .iter()
            .map(|(e, c)| c.ord_or_max().unwrap() + e.iter().sum::<u32>() as i64 * alpha)
            .min()
    }

    /// Same bound over a polyball with per-variable radii.
    pub fn newton_lower_radii(&self, radii: &[i64]) -> Option<i64> {
        self.terms
            .iter()
            .map(|(e, c)| {
                c.ord_or_max().unwrap() + e.iter().zip(radii).map(|(&ei, &r)| ei as i64 * r).sum::<i64>()
            })
            .min()
    }

    /// Lower bound for ord (p(c+z) - p(c)) over z ∈ B(0, α).
    pub fn variation_lower(&self, k: &LocalField, c: &[FieldElement], alpha: i64) -> Option<i64> {
        let mut s = self.shift(k, c);
        s.terms.remove(&vec![0; self.nvars]);
        s.newton_lower(alpha)
    }

    /// Homogeneous parts split by total degree of the exponent restricted to
    /// the variables `vars`.
    fn degree_in(e: &[u32], vars: std::ops::Range<usize>) -> u32 {
        e[vars].iter().sum()
    }

    /// Remainder matrix R (in variables x then y, 2n in total) with
    /// p(x+y) = p(x) + ⟨∇p(x), y⟩ + ⟨R(x,y) y, y⟩, assigning each monomial
    /// y^k with |k| ≥ 2 to the lexicographically first pair (i, j).
    pub fn taylor_remainder(&self, k: &LocalField) -> Vec<Vec<Poly>> {
        let n = self.nvars;
        let xs: Vec<usize> = (0..n).collect();
        let lifted = self.embed(2 * n, &xs);
        let shift: Vec<Poly> = (0..n)
            .map(|i| Poly::var(2 * n, i).add(k, &Poly::var(2 * n, n + i)))
            .collect();
        let mut expanded = Poly::zero(2 * n);
        for (e, a) in &lifted.terms {
            let mut m = Poly::constant(2 * n, a.clone());
            for i in 0..n {
                if e[i] > 0 {
                    m = m.mul(k, &shift[i].pow(k, e[i]));
                }
            }
            expanded = expanded.add(k, &m);
        }
        let mut r = vec![vec![Poly::zero(2 * n); n]; n];
        for (e, a) in &expanded.terms {
            if Self::degree_in(e, n..2 * n) < 2 {
                continue;
            }
            let i = (0..n).find(|&i| e[n + i] > 0).unwrap();
            let mut rest = e.clone();
            rest[n + i] -= 1;
            let j = (0..n).find(|&j| rest[n + j] > 0).unwrap();
            rest[n + j] -= 1;
            r[i][j].add_term(k, rest, a);
        }
        r
    }

    /// Converts a field-sorted polynomial term over the given variable order.
    pub fn from_term(k: &LocalField, t: &Term, vars: &[&str]) -> Result<Poly> {
        let n = vars.len();
        let np = |msg: String| Error::NonPolynomial(msg);
        Ok(match t {
            Term::Var(v) => {
                let i = vars
                    .iter()
                    .position(|w| w == v)
                    .ok_or_else(|| np(format!("unknown variable {v}")))?;
                Poly::var(n, i)
            }
            Term::T => Poly::constant(n, FieldElement::t_pow(1)),
            Term::Num(c) => Poly::constant(n, k.from_int(*c)),
            Term::Res(c) => Poly::constant(n, FieldElement::monomial(k.residue().from_coords(c)?, 0)),
            Term::Neg(a) => Self::from_term(k, a, vars)?.neg(k),
            Term::Add(a, b) => Self::from_term(k, a, vars)?.add(k, &Self::from_term(k, b, vars)?),
            Term::Sub(a, b) => Self::from_term(k, a, vars)?.sub(k, &Self::from_term(k, b, vars)?),
            Term::Mul(a, b) => Self::from_term(k, a, vars)?.mul(k, &Self::from_term(k, b, vars)?),
            Term::Pow(a, e) => {
                let base = Self::from_term(k, a, vars)?;
                if *e >= 0 {
                    base.pow(k, *e as u32)
                } else {
                    // only constant monomials may be inverted
                    let c = match (base.terms.len(), base.terms.iter().next()) {
                        (0, _) => return Err(np("inverse of zero".into())),
                        (1, Some((ex, c))) if ex.iter().all(|&x| x == 0) => c.clone(),
                        _ => return Err(np(format!("negative power of `{a}`"))),
                    };
                    let inv = k.inv_monomial(&c).map_err(|_| np(format!("inverse of `{a}` is not a polynomial")))?;
                    Poly::constant(n, k.pow(&inv, e.unsigned_abs() as u32))
                }
            }
            other => return Err(np(format!("`{other}` is not a field polynomial"))),
        })
    }

    /// Polynomial from an expression, using its sorted free variables.
    pub fn from_expr(k: &LocalField, e: &Expr) -> Result<(Poly, Vec<String>)> {
        if e.sort != Sort::Field {
            return Err(Error::NonPolynomial(format!("`{e}` is not field-sorted")));
        }
        let names: Vec<String> = e.vars.keys().cloned().collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Ok((Self::from_term(k, &e.term, &refs)?, names))
    }

    /// Term form over the given variable names.
    pub fn to_term(&self, k: &LocalField, vars: &[&str]) -> Term {
        let mut acc: Option<Term> = None;
        for (e, c) in &self.terms {
            let coeff = coeff_term(k, c);
            let mut factors: Vec<Term> = Vec::new();
            for (i, &ei) in e.iter().enumerate() {
                let v = Term::Var(vars[i].to_string());
                match ei {
                    0 => {}
                    1 => factors.push(v),
                    _ => factors.push(Term::Pow(Box::new(v), ei as i64)),
                }
            }
            let mono = factors.into_iter().reduce(|a, b| Term::Mul(Box::new(a), Box::new(b)));
            let term = match (coeff, mono) {
                (c, None) => c,
                (Term::Num(1), Some(m)) => m,
                (c, Some(m)) => Term::Mul(Box::new(c), Box::new(m)),
            };
            acc = Some(match acc {
                None => term,
                Some(a) => Term::Add(Box::new(a), Box::new(term)),
            });
        }
        acc.unwrap_or(Term::Num(0))
    }
}

fn coeff_term(k: &LocalField, c: &FieldElement) -> Term {
    let mut acc: Option<Term> = None;
    for (e, a) in c.terms() {
        let coords = k.residue().coords(a);
        let digit = if coords[1..].iter().all(|&x| x == 0) {
            Term::Num(coords[0] as i64)
        } else {
            Term::Res(coords)
        };
        let term = match e {
            0 => digit,
            _ => {
                let tp = if e == 1 { Term::T } else { Term::Pow(Box::new(Term::T), e) };
                if digit == Term::Num(1) {
                    tp
                } else {
                    Term::Mul(Box::new(digit), Box::new(tp))
                }
            }
        };
        acc = Some(match acc {
            None => term,
            Some(a) => Term::Add(Box::new(a), Box::new(term)),
        });
    }
    acc.unwrap_or(Term::Num(0))
}

/// Symbolic gradient of a field polynomial with respect to `vars`.
pub fn grad(k: &LocalField, e: &Expr, vars: &[&str]) -> Result<Vec<Term>> {
    let p = Poly::from_term(k, &e.term, vars)?;
    Ok(p.gradient(k).iter().map(|d| d.to_term(k, vars)).collect())
}

/// Remainder matrix of the Taylor identity, over the variables `vars`
/// followed by the increment variables `incr`.
pub fn taylor_remainder(k: &LocalField, e: &Expr, vars: &[&str], incr: &[&str]) -> Result<Vec<Vec<Term>>> {
    if vars.len() != incr.len() {
        return Err(Error::MismatchedDimension(vars.len(), incr.len()));
    }
    let p = Poly::from_term(k, &e.term, vars)?;
    let all: Vec<&str> = vars.iter().chain(incr).copied().collect();
    Ok(p.taylor_remainder(k)
        .iter()
        .map(|row| row.iter().map(|r| r.to_term(k, &all)).collect())
        .collect())
}
