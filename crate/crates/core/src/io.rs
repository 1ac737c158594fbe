//! JSON forms of configurations, Schwartz-Bruhat functions, distribution
//! descriptors and ball queries.

use serde::{Deserialize, Serialize};

use crate::distribution::{diagonal_product, pullback, tensor, BallQuery, Distribution, PullbackData};
use crate::error::{Error, Result};
use crate::expr::{constant, poly_map};
use crate::field::{FieldElement, LocalField, DEFAULT_BUDGET};
use crate::residue::ResidueField;
use crate::scalar::{parse_scalar, MotivicScalar};
use crate::schwartz::{SbFunction, SbTerm};

fn default_f() -> u32 {
    1
}
fn default_window() -> (i64, i64) {
    (-32, 32)
}
fn default_budget() -> u128 {
    DEFAULT_BUDGET
}
fn default_depth() -> i64 {
    6
}
fn default_n() -> u32 {
    1
}
fn default_seed() -> u64 {
    2024
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub p: u32,
    #[serde(default = "default_f")]
    pub f: u32,
    /// coefficients of the residue modulus, constant term first
    #[serde(default)]
    pub modulus: Option<Vec<u32>>,
    #[serde(default = "default_window")]
    pub window: (i64, i64),
    #[serde(default = "default_budget")]
    pub budget: u128,
    #[serde(default = "default_depth")]
    pub depth: i64,
    #[serde(default = "default_n")]
    pub n: u32,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            p: 3,
            f: 1,
            modulus: None,
            window: default_window(),
            budget: default_budget(),
            depth: default_depth(),
            n: default_n(),
            seed: default_seed(),
        }
    }
}

impl Config {
    pub fn q(&self) -> u32 {
        self.p.pow(self.f)
    }

    pub fn field(&self) -> Result<LocalField> {
        if self.budget == 0 {
            return Err(Error::invalid("budget must be positive"));
        }
        if self.window.0 >= self.window.1 {
            return Err(Error::invalid("precision window must satisfy v_min < v_max"));
        }
        let residue = match &self.modulus {
            Some(m) => ResidueField::new(self.p, self.f, m.clone())?,
            None => {
                let r = ResidueField::default_for(self.q())?;
                if r.p() != self.p {
                    return Err(Error::invalid(format!("p = {} is not prime", self.p)));
                }
                r
            }
        };
        Ok(LocalField::new(residue, self.budget, self.window))
    }
}

/// Field elements as `t^-1 + 2*t`; over non-prime residue fields the
/// coefficients are bracketed coordinates, `t^-1*[1,1]`.
pub fn field_text(k: &LocalField, x: &FieldElement) -> String {
    if k.residue().f() > 1 {
        return k.format(x);
    }
    let mut parts = Vec::new();
    for (e, c) in x.terms() {
        let c = k.residue().coords(c)[0];
        let mono = match e {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{e}"),
        };
        parts.push(match (c, mono.is_empty()) {
            (_, true) => c.to_string(),
            (1, false) => mono,
            (_, false) => format!("{c}*{mono}"),
        });
    }
    if let Some(n) = x.prec() {
        parts.push(format!("O(t^{n})"));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub fn parse_field(k: &LocalField, text: &str) -> Result<FieldElement> {
    let x = match constant(k, text) {
        Ok(x) => x,
        Err(e) => k.parse(text).map_err(|_| e)?,
    };
    k.check_window(&x)?;
    Ok(x)
}

/// A point of K^m: a bare string when m = 1.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Coords {
    One(String),
    Many(Vec<String>),
}

impl Coords {
    pub fn from_vec(k: &LocalField, v: &[FieldElement]) -> Self {
        if v.len() == 1 {
            Coords::One(field_text(k, &v[0]))
        } else {
            Coords::Many(v.iter().map(|x| field_text(k, x)).collect())
        }
    }

    pub fn parse(&self, k: &LocalField) -> Result<Vec<FieldElement>> {
        match self {
            Coords::One(s) => Ok(vec![parse_field(k, s)?]),
            Coords::Many(v) => v.iter().map(|s| parse_field(k, s)).collect(),
        }
    }

    fn len(&self) -> usize {
        match self {
            Coords::One(_) => 1,
            Coords::Many(v) => v.len(),
        }
    }
}

fn one() -> String {
    "1".into()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    #[serde(default = "one")]
    pub coeff: String,
    pub center: Coords,
    pub radius: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub freq: Option<Coords>,
}

/// `{"m": 1, "terms": [...]}`, or just the list of terms.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum SbJson {
    Full {
        #[serde(default)]
        m: Option<usize>,
        terms: Vec<TermJson>,
    },
    Terms(Vec<TermJson>),
}

impl SbJson {
    pub fn from_sb(k: &LocalField, phi: &SbFunction) -> Self {
        let terms = phi
            .terms()
            .iter()
            .map(|t| TermJson {
                coeff: t.coeff.to_string(),
                center: Coords::from_vec(k, &t.center),
                radius: t.radius,
                freq: Some(Coords::from_vec(k, &t.freq)),
            })
            .collect();
        SbJson::Full {
            m: Some(phi.dim()),
            terms,
        }
    }

    pub fn to_sb(&self, k: &LocalField) -> Result<SbFunction> {
        let (m, terms) = match self {
            SbJson::Full { m, terms } => (*m, terms),
            SbJson::Terms(terms) => (None, terms),
        };
        let m = match (m, terms.first()) {
            (Some(m), _) => m,
            (None, Some(t)) => t.center.len(),
            (None, None) => return Err(Error::invalid("an empty function needs its dimension m")),
        };
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let center = t.center.parse(k)?;
            let freq = match &t.freq {
                Some(f) => f.parse(k)?,
                None => vec![FieldElement::zero(); m],
            };
            if center.len() != m || freq.len() != m {
                return Err(Error::MismatchedDimension(m, center.len().max(freq.len())));
            }
            out.push(SbTerm::new(parse_scalar(k.p(), &t.coeff)?, center, t.radius, freq));
        }
        SbFunction::new(k, m, out)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct QueryJson {
    pub center: Coords,
    pub radius: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub freq: Option<Coords>,
}

impl QueryJson {
    pub fn from_query(k: &LocalField, q: &BallQuery) -> Self {
        QueryJson {
            center: Coords::from_vec(k, &q.center),
            radius: q.radius,
            freq: Some(Coords::from_vec(k, &q.freq)),
        }
    }

    pub fn to_query(&self, k: &LocalField) -> Result<BallQuery> {
        let center = self.center.parse(k)?;
        let freq = match &self.freq {
            Some(f) => f.parse(k)?,
            None => vec![FieldElement::zero(); center.len()],
        };
        if freq.len() != center.len() {
            return Err(Error::MismatchedDimension(center.len(), freq.len()));
        }
        Ok(BallQuery::new(center, self.radius, freq))
    }
}

/// One query or a list of them.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Queries {
    One(QueryJson),
    Many(Vec<QueryJson>),
}

impl Queries {
    pub fn to_queries(&self, k: &LocalField) -> Result<Vec<BallQuery>> {
        match self {
            Queries::One(q) => Ok(vec![q.to_query(k)?]),
            Queries::Many(v) => v.iter().map(|q| q.to_query(k)).collect(),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PullbackDataJson {
    #[serde(default)]
    pub r_y: Option<i64>,
    #[serde(default)]
    pub n_delta: Option<i64>,
    #[serde(default)]
    pub n_r: Option<i64>,
    #[serde(default)]
    pub xi_bound: Option<i64>,
    #[serde(default)]
    pub check_shells: Option<u32>,
}

impl PullbackDataJson {
    pub fn to_data(&self) -> PullbackData {
        let d = PullbackData::default();
        PullbackData {
            r_y: self.r_y,
            n_delta: self.n_delta,
            n_r: self.n_r,
            xi_bound: self.xi_bound,
            check_shells: self.check_shells.unwrap_or(d.check_shells),
            n_r_cap: d.n_r_cap,
        }
    }
}

fn default_battery() -> usize {
    4
}

/// A distribution built from the shipped constructors.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DistJson {
    Function {
        sb: SbJson,
    },
    Dirac {
        point: Coords,
    },
    /// graph of the polynomial map `map` in the variables `vars`
    Graph {
        map: Vec<String>,
        vars: Vec<String>,
    },
    Fourier {
        of: Box<DistJson>,
    },
    Reflect {
        of: Box<DistJson>,
    },
    Scale {
        by: String,
        of: Box<DistJson>,
    },
    Sum {
        parts: Vec<DistJson>,
    },
    ProductBySb {
        sb: SbJson,
        of: Box<DistJson>,
    },
    Tensor {
        left: Box<DistJson>,
        right: Box<DistJson>,
        #[serde(default = "default_battery")]
        battery: usize,
    },
    Pullback {
        map: Vec<String>,
        vars: Vec<String>,
        of: Box<DistJson>,
        #[serde(default)]
        data: PullbackDataJson,
    },
    DiagonalProduct {
        left: Box<DistJson>,
        right: Box<DistJson>,
        #[serde(default)]
        data: PullbackDataJson,
        #[serde(default = "default_battery")]
        battery: usize,
    },
}

fn polys(k: &LocalField, map: &[String], vars: &[String]) -> Result<Vec<crate::expr::Poly>> {
    let m: Vec<&str> = map.iter().map(String::as_str).collect();
    let v: Vec<&str> = vars.iter().map(String::as_str).collect();
    poly_map(k, &m, &v)
}

impl DistJson {
    pub fn build(&self, k: &LocalField, seed: u64) -> Result<Distribution> {
        Ok(match self {
            DistJson::Function { sb } => Distribution::from_sb(&sb.to_sb(k)?),
            DistJson::Dirac { point } => Distribution::dirac(k, point.parse(k)?),
            DistJson::Graph { map, vars } => Distribution::graph(k, polys(k, map, vars)?)?,
            DistJson::Fourier { of } => of.build(k, seed)?.fourier(),
            DistJson::Reflect { of } => of.build(k, seed)?.reflect(),
            DistJson::Scale { by, of } => of.build(k, seed)?.scale(&parse_scalar(k.p(), by)?),
            DistJson::Sum { parts } => {
                let built = parts.iter().map(|d| d.build(k, seed)).collect::<Result<Vec<_>>>()?;
                let m = built.first().map(|d| d.dim()).ok_or_else(|| Error::invalid("empty sum"))?;
                Distribution::sum(k.p(), m, built)?
            }
            DistJson::ProductBySb { sb, of } => Distribution::product_by_sb(&sb.to_sb(k)?, &of.build(k, seed)?)?,
            DistJson::Tensor { left, right, battery } => {
                tensor(k, &left.build(k, seed)?, &right.build(k, seed)?, *battery, seed)?
            }
            DistJson::Pullback { map, vars, of, data } => {
                pullback(polys(k, map, vars)?, &of.build(k, seed)?, data.to_data())?
            }
            DistJson::DiagonalProduct {
                left,
                right,
                data,
                battery,
            } => diagonal_product(
                k,
                &left.build(k, seed)?,
                &right.build(k, seed)?,
                data.to_data(),
                *battery,
                seed,
            )?,
        })
    }
}

/// A scalar with its value at L = q.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ValueJson {
    pub symbolic: String,
    pub at_q: String,
}

impl ValueJson {
    pub fn new(k: &LocalField, v: &MotivicScalar) -> Result<Self> {
        Ok(ValueJson {
            symbolic: v.to_string(),
            at_q: v.eval_at_q(k.q() as u64)?.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sb_round_trip() {
        let k = LocalField::with_q(3).unwrap();
        let text = r#"[{"coeff": "L^-1", "center": "t^-1 + 2", "radius": 1, "freq": "2*t^-2"}]"#;
        let j: SbJson = serde_json::from_str(text).unwrap();
        let phi = j.to_sb(&k).unwrap();
        let back = SbJson::from_sb(&k, &phi);
        assert_eq!(back.to_sb(&k).unwrap(), phi);
        let s = serde_json::to_string(&SbJson::from_sb(&k, &SbFunction::ball(&k, 1, 0).fourier(&k).unwrap())).unwrap();
        assert_eq!(s, r#"{"m":1,"terms":[{"coeff":"1","center":"0","radius":1,"freq":"0"}]}"#);
    }

    #[test]
    fn field_text_parses_back() {
        for q in [2, 3, 4, 9] {
            let k = LocalField::with_q(q).unwrap();
            let mut rng = crate::random::rng(q as u64);
            for _ in 0..20 {
                let x = crate::random::element(&k, &mut rng, -3, 3);
                assert_eq!(parse_field(&k, &field_text(&k, &x)).unwrap(), x, "{}", field_text(&k, &x));
            }
        }
    }

    #[test]
    fn config_defaults_and_errors() {
        let c: Config = serde_json::from_str(r#"{"p": 2, "f": 2}"#).unwrap();
        assert_eq!(c.field().unwrap().q(), 4);
        let bad: Config = serde_json::from_str(r#"{"p": 4}"#).unwrap();
        assert!(bad.field().is_err());
        let bad: Config = serde_json::from_str(r#"{"p": 3, "budget": 0}"#).unwrap();
        assert!(bad.field().is_err());
        let red: Config = serde_json::from_str(r#"{"p": 2, "f": 2, "modulus": [1, 0, 1]}"#).unwrap();
        assert!(red.field().is_err());
        assert!(serde_json::from_str::<Config>(r#"{"p": 3, "bogus": 1}"#).is_err());
    }

    #[test]
    fn distribution_descriptors() {
        let k = LocalField::with_q(3).unwrap();
        let text = r#"{"kind": "scale", "by": "L^-1",
            "of": {"kind": "fourier", "of": {"kind": "dirac", "point": "0"}}}"#;
        let d: DistJson = serde_json::from_str(text).unwrap();
        let u = d.build(&k, 1).unwrap();
        let q = BallQuery::untwisted(vec![FieldElement::zero()], 1);
        assert_eq!(u.query(&k, &q).unwrap(), MotivicScalar::l_pow(3, -2));
        let g: DistJson = serde_json::from_str(r#"{"kind": "graph", "map": ["x^2"], "vars": ["x"]}"#).unwrap();
        assert_eq!(g.build(&k, 1).unwrap().dim(), 2);
    }
}
