//! Finite-range enumeration of integer-sorted terms over bounded balls.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{eval, ExtInt, Expr, Sort, Term, Value};
use crate::error::{Error, Result};
use crate::field::{FieldElement, LocalField};

/// A closed ball B(center, radius) in the field variables `vars`, cut by an
/// optional boolean filter; `fixed` assigns any remaining variables.
#[derive(Clone, Debug)]
pub struct Domain {
    pub vars: Vec<String>,
    pub center: Vec<FieldElement>,
    pub radius: i64,
    pub filter: Option<Term>,
    pub fixed: BTreeMap<String, Value>,
}

impl Domain {
    pub fn ball(vars: &[&str], center: Vec<FieldElement>, radius: i64) -> Self {
        Domain {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            center,
            radius,
            filter: None,
            fixed: BTreeMap::new(),
        }
    }

    pub fn with_filter(mut self, filter: Term) -> Self {
        self.filter = Some(filter);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RangeReport {
    pub values: BTreeSet<ExtInt>,
    pub min: Option<ExtInt>,
    pub max: Option<ExtInt>,
    pub depth: i64,
    pub cosets: u128,
    /// cosets meeting the zero locus of an `ord` argument, where the value
    /// keeps changing below the enumeration depth
    pub zero_locus: Vec<Vec<String>>,
}

fn ord_args<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
    match t {
        Term::Ord(a) => {
            out.push(a);
            ord_args(a, out);
        }
        Term::Neg(a) | Term::Pow(a, _) | Term::Ac(a) | Term::Not(a) => ord_args(a, out),
        Term::Add(a, b)
        | Term::Sub(a, b)
        | Term::Mul(a, b)
        | Term::Mod(a, b)
        | Term::Divides(a, b)
        | Term::Cmp(_, a, b)
        | Term::And(a, b)
        | Term::Or(a, b) => {
            ord_args(a, out);
            ord_args(b, out);
        }
        Term::Min(v) | Term::Max(v) => v.iter().for_each(|a| ord_args(a, out)),
        _ => {}
    }
}

/// Every value of the integer term over the domain, computed on coset
/// representatives at depth D and checked against all children at D + 1.
pub fn range_enumerate(k: &LocalField, e: &Expr, dom: &Domain, depth: i64) -> Result<RangeReport> {
    if e.sort != Sort::Int {
        return Err(Error::Sort(format!("`{e}` is not integer-sorted")));
    }
    if dom.vars.len() != dom.center.len() {
        return Err(Error::MismatchedDimension(dom.vars.len(), dom.center.len()));
    }
    let m = dom.vars.len();
    let count = k.coset_count(m, dom.radius, depth);
    let children = k.coset_count(m, depth, depth + 1);
    k.check_budget(count.saturating_mul(children + 1))?;

    let mut args = Vec::new();
    ord_args(&e.term, &mut args);
    if let Some(f) = &dom.filter {
        ord_args(f, &mut args);
    }

    let eval_at = |x: &[FieldElement]| -> Result<(bool, ExtInt, BTreeMap<String, Value>)> {
        let mut env = dom.fixed.clone();
        for (v, xi) in dom.vars.iter().zip(x) {
            env.insert(v.clone(), Value::Field(xi.clone()));
        }
        let keep = match &dom.filter {
            Some(f) => eval(k, f, &env)?
                .as_bool()
                .ok_or_else(|| Error::Sort("domain filter is not boolean".into()))?,
            None => true,
        };
        let v = eval(k, &e.term, &env)?
            .as_int()
            .ok_or_else(|| Error::Sort("term is not integer-valued".into()))?;
        Ok((keep, v, env))
    };

    let mut values = BTreeSet::new();
    let mut zero_locus = Vec::new();
    for z in k.coset_reps(&dom.center, dom.radius, depth)? {
        let (keep, v, env) = eval_at(&z)?;
        let mut seen = vec![(keep, v)];
        for c in k.coset_reps(&z, depth, depth + 1)? {
            let (ck, cv, _) = eval_at(&c)?;
            seen.push((ck, cv));
        }
        let stable = seen.iter().all(|s| *s == seen[0]);
        if stable {
            if keep {
                values.insert(v);
            }
            continue;
        }
        let near_zero = args.iter().any(|a| match eval(k, a, &env) {
            Ok(Value::Field(x)) => x.ord().map(|o| o.map_or(true, |o| o >= depth)).unwrap_or(false),
            _ => false,
        });
        if !near_zero {
            return Err(Error::Unstable {
                depth,
                coset: format!("{:?}", k.format_vec(&z)),
            });
        }
        zero_locus.push(k.format_vec(&z));
        values.extend(seen.iter().filter(|s| s.0).map(|s| s.1));
    }
    Ok(RangeReport {
        min: values.iter().next().copied(),
        max: values.iter().next_back().copied(),
        values,
        depth,
        cosets: count,
        zero_locus,
    })
}

/// (min, max) of an integer term over the domain.
pub fn valuation_bounds(k: &LocalField, e: &Expr, dom: &Domain, depth: i64) -> Result<(ExtInt, ExtInt)> {
    let r = range_enumerate(k, e, dom, depth)?;
    match (r.min, r.max) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::invalid("domain is empty at this depth")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn examples() {
        let k = LocalField::with_q(3).unwrap();
        let z = FieldElement::zero();
        let e = parse("ord(2*x)").unwrap();
        let r = range_enumerate(&k, &e, &Domain::ball(&["x"], vec![z.clone()], 0), 2).unwrap();
        assert_eq!(r.min, Some(ExtInt::Fin(0)));
        assert_eq!(r.zero_locus.len(), 1);
        assert!(r.values.contains(&ExtInt::Fin(1)));

        let sphere = Domain::ball(&["x"], vec![z.clone()], 0).with_filter(parse("ord(x) = 0").unwrap().term);
        let e = parse("ord(x)").unwrap();
        assert_eq!(
            valuation_bounds(&k, &e, &sphere, 1).unwrap(),
            (ExtInt::Fin(0), ExtInt::Fin(0))
        );

        let e = parse("5").unwrap();
        let r = range_enumerate(&k, &e, &Domain::ball(&["x"], vec![z], 0), 1).unwrap();
        assert_eq!(r.values.into_iter().collect::<Vec<_>>(), vec![ExtInt::Fin(5)]);
    }

    #[test]
    fn zeros_flagged_and_shallow_depth_reported() {
        let k = LocalField::with_q(3).unwrap();
        let dom = Domain::ball(&["x"], vec![FieldElement::zero()], 0);
        let e = parse("ord(x^2 - 1)").unwrap();
        assert_eq!(range_enumerate(&k, &e, &dom, 1).unwrap().zero_locus.len(), 2);
        // the argument varies at ord -4 inside cosets of B_1
        let e = parse("ord(t^-5*x + 1)").unwrap();
        assert!(matches!(range_enumerate(&k, &e, &dom, 1), Err(Error::Unstable { .. })));
        assert!(range_enumerate(&k, &e, &dom, 6).is_ok());
    }
}
