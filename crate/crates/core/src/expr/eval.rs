use std::collections::BTreeMap;

use super::{CmpOp, ExtInt, Term};
use crate::error::{Error, Result};
use crate::field::{FieldElement, LocalField};
use crate::residue::ResidueElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Field(FieldElement),
    Int(ExtInt),
    Residue(ResidueElement),
    Bool(bool),
}

impl Value {
    pub fn as_field(&self) -> Option<&FieldElement> {
        match self {
            Value::Field(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<ExtInt> {
        match self {
            Value::Int(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn format(&self, k: &LocalField) -> String {
        match self {
            Value::Field(x) => k.format(x),
            Value::Int(v) => v.to_string(),
            Value::Residue(a) => k.residue().format(*a),
            Value::Bool(b) => b.to_string(),
        }
    }
}

/// Intermediate value: integer literals stay sort-polymorphic until they
/// meet a sorted operand.
#[derive(Clone, Debug)]
enum V {
    Num(i64),
    Sorted(Value),
}

fn eerr<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Eval(msg.into()))
}

struct Ctx<'a> {
    k: &'a LocalField,
    env: &'a BTreeMap<String, Value>,
}

impl Ctx<'_> {
    fn to_field(&self, v: V) -> Result<FieldElement> {
        match v {
            V::Num(n) => Ok(self.k.from_int(n)),
            V::Sorted(Value::Field(x)) => Ok(x),
            V::Sorted(other) => eerr(format!("expected a field value, got {other:?}")),
        }
    }

    fn to_int(&self, v: V) -> Result<ExtInt> {
        match v {
            V::Num(n) => Ok(ExtInt::Fin(n)),
            V::Sorted(Value::Int(x)) => Ok(x),
            V::Sorted(other) => eerr(format!("expected an integer value, got {other:?}")),
        }
    }

    fn to_bool(&self, v: V) -> Result<bool> {
        match v {
            V::Sorted(Value::Bool(b)) => Ok(b),
            other => eerr(format!("expected a boolean, got {other:?}")),
        }
    }

    fn finite(&self, v: ExtInt, what: &str) -> Result<i64> {
        v.finite().ok_or_else(|| Error::Eval(format!("{what} of oo is undefined")))
    }

    fn arith(&self, op: char, a: V, b: V) -> Result<V> {
        let k = self.k;
        let kind = match (&a, &b) {
            (V::Num(x), V::Num(y)) => {
                let r = match op {
                    '+' => x.checked_add(*y),
                    '-' => x.checked_sub(*y),
                    _ => x.checked_mul(*y),
                };
                return r.map(V::Num).ok_or_else(|| Error::Eval("integer overflow".into()));
            }
            (V::Sorted(s), _) | (_, V::Sorted(s)) => s.clone(),
        };
        Ok(V::Sorted(match kind {
            Value::Field(_) => {
                let x = self.to_field(a)?;
                let y = self.to_field(b)?;
                Value::Field(match op {
                    '+' => k.add(&x, &y),
                    '-' => k.sub(&x, &y),
                    _ => k.mul(&x, &y),
                })
            }
            Value::Residue(_) => {
                let r = k.residue();
                let conv = |v: V| -> Result<ResidueElement> {
                    match v {
                        V::Num(n) => Ok(r.from_int(n)),
                        V::Sorted(Value::Residue(a)) => Ok(a),
                        other => eerr(format!("expected a residue value, got {other:?}")),
                    }
                };
                let x = conv(a)?;
                let y = conv(b)?;
                Value::Residue(match op {
                    '+' => r.add(x, y),
                    '-' => r.sub(x, y),
                    _ => r.mul(x, y),
                })
            }
            Value::Int(_) => {
                let x = self.to_int(a)?;
                let y = self.to_int(b)?;
                Value::Int(match (op, x, y) {
                    ('+', ExtInt::Fin(x), ExtInt::Fin(y)) => ExtInt::Fin(x + y),
                    ('+', _, _) => ExtInt::Inf,
                    ('-', ExtInt::Fin(x), ExtInt::Fin(y)) => ExtInt::Fin(x - y),
                    ('-', ExtInt::Inf, ExtInt::Fin(_)) => ExtInt::Inf,
                    ('-', _, _) => return eerr("subtraction of oo"),
                    (_, ExtInt::Fin(x), ExtInt::Fin(y)) => ExtInt::Fin(x * y),
                    (_, ExtInt::Inf, ExtInt::Fin(c)) | (_, ExtInt::Fin(c), ExtInt::Inf) if c > 0 => ExtInt::Inf,
                    _ => return eerr("product of oo with a non-positive constant"),
                })
            }
            Value::Bool(_) => return eerr("arithmetic on booleans"),
        }))
    }

    fn eq(&self, a: V, b: V) -> Result<bool> {
        Ok(match (a, b) {
            (V::Num(x), V::Num(y)) => x == y,
            (V::Sorted(x), V::Sorted(y)) => x == y,
            (V::Num(n), V::Sorted(s)) | (V::Sorted(s), V::Num(n)) => match s {
                Value::Field(x) => x == self.k.from_int(n),
                Value::Int(x) => x == ExtInt::Fin(n),
                Value::Residue(x) => x == self.k.residue().from_int(n),
                Value::Bool(_) => return eerr("boolean compared with integer"),
            },
        })
    }

    fn ev(&self, t: &Term) -> Result<V> {
        let k = self.k;
        Ok(match t {
            Term::Var(v) => V::Sorted(
                self.env
                    .get(v)
                    .cloned()
                    .ok_or_else(|| Error::Eval(format!("unassigned variable {v}")))?,
            ),
            Term::T => V::Sorted(Value::Field(FieldElement::t_pow(1))),
            Term::Num(n) => V::Num(*n),
            Term::Res(c) => V::Sorted(Value::Residue(k.residue().from_coords(c)?)),
            Term::Inf => V::Sorted(Value::Int(ExtInt::Inf)),
            Term::Bool(b) => V::Sorted(Value::Bool(*b)),
            Term::Neg(a) => self.arith('-', V::Num(0), self.ev(a)?)?,
            Term::Add(a, b) => self.arith('+', self.ev(a)?, self.ev(b)?)?,
            Term::Sub(a, b) => self.arith('-', self.ev(a)?, self.ev(b)?)?,
            Term::Mul(a, b) => self.arith('*', self.ev(a)?, self.ev(b)?)?,
            Term::Pow(a, e) => match self.ev(a)? {
                V::Num(n) if *e >= 0 => V::Num(
                    n.checked_pow(*e as u32)
                        .ok_or_else(|| Error::Eval("integer overflow".into()))?,
                ),
                V::Sorted(Value::Residue(r)) if *e >= 0 => V::Sorted(Value::Residue(k.residue().pow(r, *e as u64))),
                v => {
                    let x = self.to_field(v)?;
                    let base = if *e < 0 { k.inv_monomial(&x)? } else { x };
                    V::Sorted(Value::Field(k.pow(&base, e.unsigned_abs() as u32)))
                }
            },
            Term::Mod(a, b) => {
                let x = self.to_int(self.ev(a)?)?;
                let n = self.finite(self.to_int(self.ev(b)?)?, "modulus")?;
                if n <= 0 {
                    return eerr(format!("modulus {n} must be positive"));
                }
                V::Sorted(Value::Int(ExtInt::Fin(self.finite(x, "residue mod n")?.rem_euclid(n))))
            }
            Term::Ord(a) => {
                let x = self.to_field(self.ev(a)?)?;
                V::Sorted(Value::Int(ExtInt::from_ord(x.ord()?)))
            }
            Term::Ac(a) => {
                let x = self.to_field(self.ev(a)?)?;
                V::Sorted(Value::Residue(x.ac()?))
            }
            Term::Min(args) | Term::Max(args) => {
                let vals = args
                    .iter()
                    .map(|a| self.ev(a).and_then(|v| self.to_int(v)))
                    .collect::<Result<Vec<_>>>()?;
                let r = if matches!(t, Term::Min(_)) {
                    vals.into_iter().min()
                } else {
                    vals.into_iter().max()
                };
                V::Sorted(Value::Int(r.expect("parser guarantees arguments")))
            }
            Term::Divides(n, a) => {
                let n = self.finite(self.to_int(self.ev(n)?)?, "divisor")?;
                let x = self.to_int(self.ev(a)?)?;
                V::Sorted(Value::Bool(match x {
                    // every n divides ord 0
                    ExtInt::Inf => true,
                    ExtInt::Fin(_) if n == 0 => x == ExtInt::Fin(0),
                    ExtInt::Fin(v) => v.rem_euclid(n) == 0,
                }))
            }
            Term::Cmp(op, a, b) => {
                let x = self.ev(a)?;
                let y = self.ev(b)?;
                let r = match op {
                    CmpOp::Eq => self.eq(x, y)?,
                    CmpOp::Ne => !self.eq(x, y)?,
                    _ => {
                        let x = self.to_int(x)?;
                        let y = self.to_int(y)?;
                        match op {
                            CmpOp::Lt => x < y,
                            CmpOp::Le => x <= y,
                            CmpOp::Gt => x > y,
                            _ => x >= y,
                        }
                    }
                };
                V::Sorted(Value::Bool(r))
            }
            Term::And(a, b) => {
                let x = self.to_bool(self.ev(a)?)?;
                V::Sorted(Value::Bool(x && self.to_bool(self.ev(b)?)?))
            }
            Term::Or(a, b) => {
                let x = self.to_bool(self.ev(a)?)?;
                V::Sorted(Value::Bool(x || self.to_bool(self.ev(b)?)?))
            }
            Term::Not(a) => V::Sorted(Value::Bool(!self.to_bool(self.ev(a)?)?)),
        })
    }
}

/// Evaluates a term under an assignment of its free variables. Bare
/// numerals evaluate in the integer sort.
pub fn eval(k: &LocalField, t: &Term, env: &BTreeMap<String, Value>) -> Result<Value> {
    let ctx = Ctx { k, env };
    Ok(match ctx.ev(t)? {
        V::Num(n) => Value::Int(ExtInt::Fin(n)),
        V::Sorted(v) => v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn env(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    #[test]
    fn examples() {
        let k = LocalField::with_q(3).unwrap();
        let e = parse("ord(t^3)").unwrap();
        assert_eq!(eval(&k, &e.term, &env(&[])).unwrap(), Value::Int(ExtInt::Fin(3)));
        let e = parse("ac(x)").unwrap();
        let zero = env(&[("x", Value::Field(FieldElement::zero()))]);
        assert_eq!(eval(&k, &e.term, &zero).unwrap(), Value::Residue(ResidueElement(0)));
        let e = parse("n | ord(x) and ac(x) = 1").unwrap();
        let a = env(&[
            ("x", Value::Field(FieldElement::t_pow(2))),
            ("n", Value::Int(ExtInt::Fin(2))),
        ]);
        assert_eq!(eval(&k, &e.term, &a).unwrap(), Value::Bool(true));
        let e = parse("ord(x)").unwrap();
        assert_eq!(eval(&k, &e.term, &zero).unwrap(), Value::Int(ExtInt::Inf));
        let e = parse("min(ord(x), 4) + 1").unwrap();
        assert_eq!(eval(&k, &e.term, &zero).unwrap(), Value::Int(ExtInt::Fin(5)));
    }

    #[test]
    fn field_arithmetic() {
        let k = LocalField::with_q(3).unwrap();
        let e = parse("x*y - t^-1").unwrap();
        let a = env(&[
            ("x", Value::Field(FieldElement::t_pow(-1))),
            ("y", Value::Field(k.from_int(2))),
        ]);
        let v = eval(&k, &e.term, &a).unwrap();
        assert_eq!(v, Value::Field(FieldElement::t_pow(-1)));
        let e = parse("3*x").unwrap();
        let v = eval(&k, &e.term, &a).unwrap();
        assert_eq!(v, Value::Field(FieldElement::zero()));
    }
}
