//! Quantifier-free Denef-Pas style terms: valued-field polynomials with
//! `ord` and `ac`, Presburger integer expressions, residue constants and
//! boolean combinations.
//!
//! Grammar (EBNF):
//!
//! ```text
//! formula  = conj { "or" conj } ;
//! conj     = neg { "and" neg } ;
//! neg      = "not" neg | rel ;
//! rel      = sum [ ( "=" | "!=" | "<" | "<=" | ">" | ">=" | "|" ) sum ] ;
//! sum      = prod { ( "+" | "-" ) prod } ;
//! prod     = unary { ( "*" | "mod" ) unary } ;
//! unary    = "-" unary | power ;
//! power    = atom [ "^" [ "-" ] integer ] ;
//! atom     = integer | ident | "t" | "oo" | "true" | "false"
//!          | "[" integer { "," integer } "]"
//!          | ( "ord" | "ac" ) "(" formula ")"
//!          | ( "min" | "max" ) "(" formula { "," formula } ")"
//!          | "(" formula ")" ;
//! ```
//!
//! `n | e` is divisibility on the integer sort, `oo` is ord(0). Variable
//! sorts are inferred from use; unconstrained variables are field-sorted.

mod bounds;
mod eval;
mod parser;
mod poly;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;
use crate::field::{FieldElement, LocalField};

pub use bounds::{range_enumerate, valuation_bounds, Domain, RangeReport};
pub use eval::{eval, Value};
pub use parser::{parse, parse_with};
pub use poly::{grad, taylor_remainder, Poly};

/// A variable-free field term such as `t^-1 + 2`.
pub fn constant(k: &LocalField, text: &str) -> Result<FieldElement> {
    Ok(Poly::from_term(k, &parse(text)?.term, &[])?.coeff(&[]))
}

/// Polynomial components over an explicit variable order.
pub fn poly_map(k: &LocalField, components: &[&str], vars: &[&str]) -> Result<Vec<Poly>> {
    let declared: BTreeMap<String, Sort> = vars.iter().map(|v| (v.to_string(), Sort::Field)).collect();
    components
        .iter()
        .map(|c| Poly::from_term(k, &parse_with(c, &declared)?.term, vars))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Sort {
    Field,
    Int,
    Residue,
    Bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    T,
    Num(i64),
    /// residue constant by F_p coordinates
    Res(Vec<u32>),
    Inf,
    Bool(bool),
    Neg(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Pow(Box<Term>, i64),
    Mod(Box<Term>, Box<Term>),
    Ord(Box<Term>),
    Ac(Box<Term>),
    Min(Vec<Term>),
    Max(Vec<Term>),
    Divides(Box<Term>, Box<Term>),
    Cmp(CmpOp, Box<Term>, Box<Term>),
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
    Not(Box<Term>),
}

/// Integers extended by the ord(0) sentinel +∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    Fin(i64),
    Inf,
}

impl ExtInt {
    pub fn from_ord(o: Option<i64>) -> Self {
        o.map_or(ExtInt::Inf, ExtInt::Fin)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Fin(v) => Some(v),
            ExtInt::Inf => None,
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::Fin(v) => write!(f, "{v}"),
            ExtInt::Inf => write!(f, "oo"),
        }
    }
}

impl serde::Serialize for ExtInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtInt::Fin(v) => s.serialize_i64(*v),
            ExtInt::Inf => s.serialize_str("oo"),
        }
    }
}

/// A parsed, well-sorted term with its explicit free-variable list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub term: Term,
    pub sort: Sort,
    pub vars: BTreeMap<String, Sort>,
}

impl Expr {
    pub fn free_vars(&self) -> Vec<&str> {
        self.vars.keys().map(String::as_str).collect()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.term)
    }
}

fn prec(t: &Term) -> u8 {
    match t {
        Term::Or(..) => 1,
        Term::And(..) => 2,
        Term::Not(..) => 3,
        Term::Cmp(..) | Term::Divides(..) => 4,
        Term::Add(..) | Term::Sub(..) => 5,
        Term::Mul(..) | Term::Mod(..) => 6,
        Term::Neg(..) => 7,
        Term::Pow(..) => 8,
        _ => 9,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, t: &Term, min: u8) -> fmt::Result {
    if prec(t) < min {
        write!(f, "(")?;
        write!(f, "{t}")?;
        write!(f, ")")
    } else {
        write!(f, "{t}")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::T => write!(f, "t"),
            Term::Num(n) => write!(f, "{n}"),
            Term::Res(c) => {
                let parts: Vec<String> = c.iter().map(u32::to_string).collect();
                write!(f, "[{}]", parts.join(","))
            }
            Term::Inf => write!(f, "oo"),
            Term::Bool(b) => write!(f, "{b}"),
            Term::Neg(a) => {
                write!(f, "-")?;
                write_at(f, a, 7)
            }
            Term::Add(a, b) => {
                write_at(f, a, 5)?;
                write!(f, " + ")?;
                write_at(f, b, 6)
            }
            Term::Sub(a, b) => {
                write_at(f, a, 5)?;
                write!(f, " - ")?;
                write_at(f, b, 6)
            }
            Term::Mul(a, b) => {
                write_at(f, a, 6)?;
                write!(f, "*")?;
                write_at(f, b, 7)
            }
            Term::Mod(a, b) => {
                write_at(f, a, 6)?;
                write!(f, " mod ")?;
                write_at(f, b, 7)
            }
            Term::Pow(a, e) => {
                write_at(f, a, 9)?;
                write!(f, "^{e}")
            }
            Term::Ord(a) => write!(f, "ord({a})"),
            Term::Ac(a) => write!(f, "ac({a})"),
            Term::Min(args) | Term::Max(args) => {
                let name = if matches!(self, Term::Min(_)) { "min" } else { "max" };
                let parts: Vec<String> = args.iter().map(Term::to_string).collect();
                write!(f, "{name}({})", parts.join(", "))
            }
            Term::Divides(n, a) => {
                write_at(f, n, 5)?;
                write!(f, " | ")?;
                write_at(f, a, 5)
            }
            Term::Cmp(op, a, b) => {
                write_at(f, a, 5)?;
                write!(f, " {} ", op.symbol())?;
                write_at(f, b, 5)
            }
            Term::And(a, b) => {
                write_at(f, a, 2)?;
                write!(f, " and ")?;
                write_at(f, b, 3)
            }
            Term::Or(a, b) => {
                write_at(f, a, 1)?;
                write!(f, " or ")?;
                write_at(f, b, 2)
            }
            Term::Not(a) => {
                write!(f, "not ")?;
                write_at(f, a, 3)
            }
        }
    }
}
