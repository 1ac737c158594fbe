use std::collections::BTreeMap;

use super::{CmpOp, Expr, Sort, Term};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Sym(&'static str),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let end = chars.get(j).map_or(text.len(), |c| c.0);
            let n = text[pos..end].parse::<i64>().map_err(|_| Error::Parse {
                pos,
                msg: "integer literal too large".into(),
            })?;
            out.push((pos, Tok::Int(n)));
            i = j;
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].1.is_alphanumeric() || chars[j].1 == '_') {
                j += 1;
            }
            let end = chars.get(j).map_or(text.len(), |c| c.0);
            out.push((pos, Tok::Ident(text[pos..end].to_string())));
            i = j;
            continue;
        }
        let two: String = chars[i..chars.len().min(i + 2)].iter().map(|c| c.1).collect();
        let sym2 = match two.as_str() {
            "<=" => Some("<="),
            ">=" => Some(">="),
            "!=" => Some("!="),
            "&&" => Some("and"),
            "||" => Some("or"),
            _ => None,
        };
        if let Some(s) = sym2 {
            out.push((pos, Tok::Sym(s)));
            i += 2;
            continue;
        }
        let sym = match c {
            '+' => "+",
            '-' => "-",
            '*' | '·' => "*",
            '^' => "^",
            '(' => "(",
            ')' => ")",
            '[' => "[",
            ']' => "]",
            ',' => ",",
            '=' => "=",
            '<' => "<",
            '>' => ">",
            '|' | '∣' => "|",
            '≤' => "<=",
            '≥' => ">=",
            '≠' => "!=",
            '∧' => "and",
            '∨' => "or",
            '¬' | '!' => "not",
            '∞' => "oo",
            _ => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("unexpected character {c:?}"),
                })
            }
        };
        out.push((pos, Tok::Sym(sym)));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.1)
    }

    fn is_word(&self, w: &str) -> bool {
        match self.peek() {
            Some(Tok::Ident(s)) => s == w,
            Some(Tok::Sym(s)) => *s == w,
            _ => false,
        }
    }

    fn eat(&mut self, w: &str) -> bool {
        if self.is_word(w) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, w: &str) -> Result<()> {
        if self.eat(w) {
            Ok(())
        } else {
            self.err(format!("expected {w:?}"))
        }
    }

    fn formula(&mut self) -> Result<Term> {
        let mut lhs = self.conj()?;
        while self.eat("or") {
            let rhs = self.conj()?;
            lhs = Term::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Term> {
        let mut lhs = self.neg()?;
        while self.eat("and") {
            let rhs = self.neg()?;
            lhs = Term::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn neg(&mut self) -> Result<Term> {
        if self.eat("not") {
            return Ok(Term::Not(Box::new(self.neg()?)));
        }
        self.rel()
    }

    fn rel(&mut self) -> Result<Term> {
        let lhs = self.sum()?;
        let op = match self.peek() {
            Some(Tok::Sym("=")) => Some(CmpOp::Eq),
            Some(Tok::Sym("!=")) => Some(CmpOp::Ne),
            Some(Tok::Sym("<")) => Some(CmpOp::Lt),
            Some(Tok::Sym("<=")) => Some(CmpOp::Le),
            Some(Tok::Sym(">")) => Some(CmpOp::Gt),
            Some(Tok::Sym(">=")) => Some(CmpOp::Ge),
            Some(Tok::Sym("|")) => {
                self.i += 1;
                let rhs = self.sum()?;
                return Ok(Term::Divides(Box::new(lhs), Box::new(rhs)));
            }
            _ => None,
        };
        match op {
            Some(op) => {
                self.i += 1;
                let rhs = self.sum()?;
                Ok(Term::Cmp(op, Box::new(lhs), Box::new(rhs)))
            }
            None => Ok(lhs),
        }
    }

    fn sum(&mut self) -> Result<Term> {
        let mut lhs = self.prod()?;
        loop {
            if self.eat("+") {
                lhs = Term::Add(Box::new(lhs), Box::new(self.prod()?));
            } else if self.eat("-") {
                lhs = Term::Sub(Box::new(lhs), Box::new(self.prod()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn prod(&mut self) -> Result<Term> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat("*") {
                lhs = Term::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat("mod") {
                lhs = Term::Mod(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Term> {
        if self.eat("-") {
            return Ok(Term::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Term> {
        let base = self.atom()?;
        if self.eat("^") {
            let negative = self.eat("-");
            match self.peek() {
                Some(Tok::Int(n)) => {
                    let n = *n;
                    self.i += 1;
                    Ok(Term::Pow(Box::new(base), if negative { -n } else { n }))
                }
                _ => self.err("exponent must be an integer literal"),
            }
        } else {
            Ok(base)
        }
    }

    fn args(&mut self) -> Result<Vec<Term>> {
        self.expect("(")?;
        let mut out = vec![self.formula()?];
        while self.eat(",") {
            out.push(self.formula()?);
        }
        self.expect(")")?;
        Ok(out)
    }

    fn atom(&mut self) -> Result<Term> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.err("unexpected end of input"),
        };
        match tok {
            Tok::Int(n) => {
                self.i += 1;
                Ok(Term::Num(n))
            }
            Tok::Sym("(") => {
                self.i += 1;
                let t = self.formula()?;
                self.expect(")")?;
                Ok(t)
            }
            Tok::Sym("[") => {
                self.i += 1;
                let mut coords = Vec::new();
                loop {
                    match self.peek() {
                        Some(Tok::Int(n)) if *n >= 0 && *n <= u32::MAX as i64 => {
                            coords.push(*n as u32);
                            self.i += 1;
                        }
                        _ => return self.err("residue coordinate expected"),
                    }
                    if !self.eat(",") {
                        break;
                    }
                }
                self.expect("]")?;
                Ok(Term::Res(coords))
            }
            Tok::Sym("oo") => {
                self.i += 1;
                Ok(Term::Inf)
            }
            Tok::Ident(name) => {
                let pos = self.pos();
                self.i += 1;
                match name.as_str() {
                    "t" => Ok(Term::T),
                    "oo" => Ok(Term::Inf),
                    "true" => Ok(Term::Bool(true)),
                    "false" => Ok(Term::Bool(false)),
                    "ord" | "ac" => {
                        let mut a = self.args()?;
                        if a.len() != 1 {
                            return Err(Error::Parse {
                                pos,
                                msg: format!("{name} takes one argument"),
                            });
                        }
                        let a = Box::new(a.pop().unwrap());
                        Ok(if name == "ord" { Term::Ord(a) } else { Term::Ac(a) })
                    }
                    "min" => Ok(Term::Min(self.args()?)),
                    "max" => Ok(Term::Max(self.args()?)),
                    "and" | "or" | "not" | "mod" => Err(Error::Parse {
                        pos,
                        msg: format!("keyword {name} out of place"),
                    }),
                    _ => Ok(Term::Var(name)),
                }
            }
            Tok::Sym(s) => self.err(format!("unexpected {s:?}")),
        }
    }
}

struct Infer {
    env: BTreeMap<String, Sort>,
    /// final pass: default unknown variables to the field sort and bare
    /// numerals to the integer sort
    finalize: bool,
}

fn serr<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Sort(msg.into()))
}

fn is_numeral(t: &Term) -> bool {
    match t {
        Term::Num(_) => true,
        Term::Neg(a) => is_numeral(a),
        _ => false,
    }
}

/// Built from numerals alone, so its sort comes from context.
fn is_sortless(t: &Term) -> bool {
    match t {
        Term::Num(_) => true,
        Term::Neg(a) | Term::Pow(a, _) => is_sortless(a),
        Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => is_sortless(a) && is_sortless(b),
        _ => false,
    }
}

impl Infer {
    fn unify(&self, got: Sort, want: Option<Sort>, t: &Term) -> Result<Sort> {
        match want {
            Some(w) if w != got => serr(format!("`{t}` has sort {got:?}, expected {w:?}")),
            _ => Ok(got),
        }
    }

    fn arith(&mut self, t: &Term, a: &Term, b: &Term, want: Option<Sort>) -> Result<Option<Sort>> {
        if want == Some(Sort::Bool) {
            return serr(format!("`{t}` is not boolean"));
        }
        let (sa, sb) = if want.is_none() && is_sortless(a) {
            // a literal takes the sort of the other operand
            let sb = self.infer(b, None)?;
            (self.infer(a, sb)?, sb)
        } else {
            let mut sa = self.infer(a, want)?;
            let sb = self.infer(b, want.or(sa))?;
            if sa.is_none() && sb.is_some() {
                sa = self.infer(a, sb)?;
            }
            (sa, sb)
        };
        match (sa, sb) {
            (Some(x), Some(y)) if x != y => serr(format!("mixed sorts {x:?} and {y:?} in `{t}`")),
            (Some(Sort::Bool), _) => serr(format!("arithmetic on booleans in `{t}`")),
            (s, _) => {
                if s == Some(Sort::Int) && matches!(t, Term::Mul(..)) && !is_numeral(a) && !is_numeral(b) {
                    return serr(format!("non-linear integer product `{t}`"));
                }
                Ok(s)
            }
        }
    }

    fn infer(&mut self, t: &Term, want: Option<Sort>) -> Result<Option<Sort>> {
        match t {
            Term::Var(v) => match self.env.get(v) {
                Some(&s) => Ok(Some(self.unify(s, want, t)?)),
                None => match want {
                    Some(s) => {
                        self.env.insert(v.clone(), s);
                        Ok(Some(s))
                    }
                    None if self.finalize => {
                        self.env.insert(v.clone(), Sort::Field);
                        Ok(Some(Sort::Field))
                    }
                    None => Ok(None),
                },
            },
            Term::T => Ok(Some(self.unify(Sort::Field, want, t)?)),
            Term::Res(_) => Ok(Some(self.unify(Sort::Residue, want, t)?)),
            Term::Inf => Ok(Some(self.unify(Sort::Int, want, t)?)),
            Term::Bool(_) => Ok(Some(self.unify(Sort::Bool, want, t)?)),
            Term::Num(_) => match want {
                Some(Sort::Bool) => serr(format!("`{t}` is not boolean")),
                Some(s) => Ok(Some(s)),
                None if self.finalize => Ok(Some(Sort::Int)),
                None => Ok(None),
            },
            Term::Neg(a) => {
                if want == Some(Sort::Bool) {
                    return serr(format!("`{t}` is not boolean"));
                }
                let s = self.infer(a, want)?;
                if s == Some(Sort::Bool) {
                    return serr(format!("negation of boolean `{t}`"));
                }
                Ok(s)
            }
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => self.arith(t, a, b, want),
            Term::Pow(a, e) => {
                // the integer sort has no powers, so `2^3` alone is a field constant
                let hint = match want {
                    None if self.finalize && is_sortless(a) => Some(Sort::Field),
                    w => w,
                };
                let s = self.infer(a, hint)?;
                match s {
                    Some(Sort::Int) | Some(Sort::Bool) => serr(format!("powers only on field or residue terms: `{t}`")),
                    Some(Sort::Residue) if *e < 0 => serr(format!("negative residue power `{t}`")),
                    s => Ok(s),
                }
            }
            Term::Mod(a, b) => {
                self.infer(a, Some(Sort::Int))?;
                self.infer(b, Some(Sort::Int))?;
                if !is_numeral(b) && !matches!(**b, Term::Var(_)) {
                    return serr(format!("modulus must be a constant or variable in `{t}`"));
                }
                Ok(Some(self.unify(Sort::Int, want, t)?))
            }
            Term::Ord(a) => {
                self.infer(a, Some(Sort::Field))?;
                Ok(Some(self.unify(Sort::Int, want, t)?))
            }
            Term::Ac(a) => {
                self.infer(a, Some(Sort::Field))?;
                Ok(Some(self.unify(Sort::Residue, want, t)?))
            }
            Term::Min(args) | Term::Max(args) => {
                for a in args {
                    self.infer(a, Some(Sort::Int))?;
                }
                Ok(Some(self.unify(Sort::Int, want, t)?))
            }
            Term::Divides(n, a) => {
                self.infer(n, Some(Sort::Int))?;
                self.infer(a, Some(Sort::Int))?;
                Ok(Some(self.unify(Sort::Bool, want, t)?))
            }
            Term::Cmp(op, a, b) => {
                let mut sa = self.infer(a, None)?;
                let sb = self.infer(b, sa)?;
                if sa.is_none() && sb.is_some() {
                    sa = self.infer(a, sb)?;
                }
                if let (Some(x), Some(y)) = (sa, sb) {
                    if x != y {
                        return serr(format!("comparison of {x:?} with {y:?} in `{t}`"));
                    }
                }
                let s = sa.or(sb);
                if s == Some(Sort::Bool) {
                    return serr(format!("comparison of booleans in `{t}`"));
                }
                if !matches!(op, CmpOp::Eq | CmpOp::Ne) && s.is_some() && s != Some(Sort::Int) {
                    return serr(format!("order comparison outside the integer sort in `{t}`"));
                }
                Ok(Some(self.unify(Sort::Bool, want, t)?))
            }
            Term::And(a, b) | Term::Or(a, b) => {
                self.infer(a, Some(Sort::Bool))?;
                self.infer(b, Some(Sort::Bool))?;
                Ok(Some(self.unify(Sort::Bool, want, t)?))
            }
            Term::Not(a) => {
                self.infer(a, Some(Sort::Bool))?;
                Ok(Some(self.unify(Sort::Bool, want, t)?))
            }
        }
    }
}

/// Sort-checks a term, inferring variable sorts; `declared` fixes some
/// sorts in advance.
pub fn check(term: Term, declared: &BTreeMap<String, Sort>) -> Result<Expr> {
    let mut inf = Infer {
        env: declared.clone(),
        finalize: false,
    };
    loop {
        let before = inf.env.len();
        inf.infer(&term, None)?;
        if inf.env.len() == before {
            break;
        }
    }
    inf.finalize = true;
    let sort = inf.infer(&term, None)?.expect("finalized inference yields a sort");
    let mut vars = BTreeMap::new();
    collect_vars(&term, &inf.env, &mut vars);
    Ok(Expr { term, sort, vars })
}

fn collect_vars(t: &Term, env: &BTreeMap<String, Sort>, out: &mut BTreeMap<String, Sort>) {
    match t {
        Term::Var(v) => {
            out.insert(v.clone(), env[v]);
        }
        Term::T | Term::Num(_) | Term::Res(_) | Term::Inf | Term::Bool(_) => {}
        Term::Neg(a) | Term::Pow(a, _) | Term::Ord(a) | Term::Ac(a) | Term::Not(a) => collect_vars(a, env, out),
        Term::Add(a, b)
        | Term::Sub(a, b)
        | Term::Mul(a, b)
        | Term::Mod(a, b)
        | Term::Divides(a, b)
        | Term::Cmp(_, a, b)
        | Term::And(a, b)
        | Term::Or(a, b) => {
            collect_vars(a, env, out);
            collect_vars(b, env, out);
        }
        Term::Min(args) | Term::Max(args) => args.iter().for_each(|a| collect_vars(a, env, out)),
    }
}

/// Parses and sort-checks a term.
pub fn parse(text: &str) -> Result<Expr> {
    parse_with(text, &BTreeMap::new())
}

pub fn parse_with(text: &str, declared: &BTreeMap<String, Sort>) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        i: 0,
        end: text.len(),
    };
    let term = p.formula()?;
    if p.i != p.toks.len() {
        return p.err("trailing input");
    }
    check(term, declared)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_of_examples() {
        assert_eq!(parse("ord(x^2 + t*x)").unwrap().sort, Sort::Int);
        let lam = parse("ac(x) = 1 and ord(x) mod 2 = 0").unwrap();
        assert_eq!(lam.sort, Sort::Bool);
        assert_eq!(lam.vars["x"], Sort::Field);
        let e = parse("n | ord(x) and ac(x) = 1").unwrap();
        assert_eq!(e.vars["n"], Sort::Int);
        assert_eq!(parse("5").unwrap().sort, Sort::Int);
        assert_eq!(parse("x + 1").unwrap().vars["x"], Sort::Field);
    }

    #[test]
    fn round_trip() {
        for s in [
            "x*y - t^-1",
            "ord(x^2 + t*x)",
            "ac(x) = 1 and ord(x) mod 2 = 0",
            "-(x + y)^3*[1,2] + 2",
            "not (ord(x) >= 3 or ord(y) < min(1, ord(x) - 2))",
            "2 | ord(x) + 1",
            "x - (y - z)",
        ] {
            let e = parse(s).unwrap();
            let printed = e.to_string();
            let again = parse(&printed).unwrap();
            assert_eq!(again.term, e.term, "{s} -> {printed}");
            assert_eq!(again.to_string(), printed);
        }
        assert_eq!(parse("x*y - t^-1").unwrap().to_string(), "x*y - t^-1");
    }

    #[test]
    fn errors_carry_positions() {
        match parse("x + * y") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("ord(x) + x"), Err(Error::Sort(_))));
        assert!(matches!(parse("x < y"), Err(Error::Sort(_))));
        assert!(matches!(parse("ord(x)*ord(y)"), Err(Error::Sort(_))));
        assert!(matches!(parse("(x"), Err(Error::Parse { .. })));
    }
}
