//! The acceptance suite: thirteen exact checks, each with a wall-clock
//! limit. Used by the `selftest` command and the acceptance test target.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::distribution::{paley_wiener_check, pullback, same_at_q, Distribution, PullbackData};
use crate::error::{Error, Result};
use crate::expr::{constant, parse, poly_map, range_enumerate, Domain};
use crate::field::{FieldElement, LocalField};
use crate::microlocal::{
    lambda_reps, oscillatory_bound, oscillatory_integral, projection_property_check, wf_test, LambdaGroup, PhaseData,
    SsParams, Verdict, WfParams, DEFAULT_N_R_CAP,
};
use crate::oracle;
use crate::random::{self, SbShape};
use crate::scalar::MotivicScalar;
use crate::schwartz::SbFunction;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub limit_ms: u128,
}

/// Field and seed for the criteria that do not pin their own field.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub field: LocalField,
    pub seed: u64,
}

impl SuiteConfig {
    pub fn new(field: LocalField) -> Self {
        SuiteConfig { field, seed: 2024 }
    }
}

type Check = fn(&SuiteConfig) -> Result<String>;

const CRITERIA: [(u32, &str, u64, Check); 13] = [
    (1, "fourier-of-balls", 1, fourier_of_balls),
    (2, "fourier-inversion", 30, inversion),
    (3, "convolution-theorem", 60, convolution),
    (4, "oracle-equivalence", 120, oracle_equivalence),
    (5, "schwartz-identities", 30, schwartz_identities),
    (6, "average-formula", 60, average_formula),
    (7, "oscillatory-vanishing", 60, oscillatory_vanishing),
    (8, "dirac-wave-front", 10, dirac_wave_front),
    (9, "conormal-dichotomy", 120, conormal_dichotomy),
    (10, "paley-wiener-roundtrip", 60, paley_wiener),
    (11, "pullback-function-case", 60, pullback_function_case),
    (12, "projection-property", 120, projection_property),
    (13, "finiteness-shadows", 30, finiteness),
];

pub fn criterion_names() -> Vec<(u32, &'static str)> {
    CRITERIA.iter().map(|c| (c.0, c.1)).collect()
}

pub fn run_one(cfg: &SuiteConfig, id: u32) -> Result<CriterionReport> {
    let (id, name, secs, check) = *CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| Error::invalid(format!("no criterion {id}")))?;
    let start = Instant::now();
    let outcome = check(cfg);
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(secs);
    let (passed, detail) = match outcome {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("{d}; over the {secs} s limit")),
        Err(e) => (false, e.to_string()),
    };
    Ok(CriterionReport {
        id,
        name,
        passed,
        detail,
        elapsed_ms: elapsed.as_millis(),
        limit_ms: limit.as_millis(),
    })
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<CriterionReport> {
    CRITERIA
        .iter()
        .map(|c| run_one(cfg, c.0).expect("criterion ids are static"))
        .collect()
}

fn fail(msg: impl Into<String>) -> Error {
    Error::Eval(msg.into())
}

fn fe(k: &LocalField, s: &str) -> Result<FieldElement> {
    constant(k, s)
}

fn fes(k: &LocalField, s: &[&str]) -> Result<Vec<FieldElement>> {
    s.iter().map(|x| constant(k, x)).collect()
}

fn fourier_of_balls(_: &SuiteConfig) -> Result<String> {
    let mut n = 0;
    for q in [2, 3] {
        let k = LocalField::with_q(q)?;
        for m in 1..=2usize {
            for a in -2..=2 {
                let got = SbFunction::ball(&k, m, a).fourier(&k)?;
                let want = SbFunction::ball(&k, m, 1 - a).scale(&k, &MotivicScalar::l_pow(k.p(), -(m as i64) * a))?;
                if got != want {
                    return Err(fail(format!("q = {q}, m = {m}, α = {a}")));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} balls"))
}

fn inversion(cfg: &SuiteConfig) -> Result<String> {
    let k = &cfg.field;
    let mut rng = random::rng(cfg.seed);
    for i in 0..100 {
        let m = 1 + i % 2;
        let phi = random::sb(k, &mut rng, &SbShape::new(m))?;
        let ff = phi.fourier(k)?.fourier(k)?;
        let want = phi.reflect(k)?.scale(k, &MotivicScalar::l_pow(k.p(), -(m as i64)))?;
        if !ff.same_function(k, &want)? {
            return Err(fail(format!("sample {i}: {phi:?}")));
        }
    }
    Ok("100 functions".into())
}

fn convolution(cfg: &SuiteConfig) -> Result<String> {
    let k = &cfg.field;
    let mut rng = random::rng(cfg.seed + 1);
    let q = k.q() as u64;
    let small = SbShape {
        max_terms: 2,
        radius: (-1, 1),
        freq_ord: (-1, 1),
        center_ord: -1,
        ..SbShape::new(1)
    };
    for i in 0..100 {
        let m = 1 + i % 2;
        let phi = random::sb(k, &mut rng, &SbShape::new(m))?;
        let psi = random::sb(k, &mut rng, &SbShape::new(m))?;
        let conv = phi.convolve(k, &psi)?;
        if !conv.fourier(k)?.same_function(k, &phi.fourier(k)?.multiply(k, &psi.fourier(k)?)?)? {
            return Err(fail(format!("pair {i}")));
        }
        // the convolution itself against the defining integral
        if i < 20 {
            let a = random::sb(k, &mut rng, &small)?;
            let b = random::sb(k, &mut rng, &small)?;
            let c = a.convolve(k, &b)?;
            for _ in 0..3 {
                let x = random::vector(k, &mut rng, 1, -2, 2);
                if c.evaluate(k, &x)?.eval_at_q(q)? != oracle::convolution_at(k, &a, &b, &x)? {
                    return Err(fail(format!("convolution of pair {i} at {:?}", k.format_vec(&x))));
                }
            }
        }
    }
    Ok("100 pairs, 20 checked pointwise by enumeration".into())
}

fn oracle_equivalence(cfg: &SuiteConfig) -> Result<String> {
    let configs = [(2, 1), (3, 1), (5, 1), (2, 2), (4, 1)];
    let mut rng = random::rng(cfg.seed + 2);
    let mut points = 0;
    for (q, m) in configs {
        let k = LocalField::with_q(q)?;
        for _ in 0..40 {
            let phi = random::sb(&k, &mut rng, &SbShape::new(m))?;
            let ys: Vec<Vec<FieldElement>> = (0..50).map(|_| random::vector(&k, &mut rng, m, -2, 3)).collect();
            let f = phi.fourier(&k)?;
            if let Some((y, a, b)) = oracle::compare_fourier(&k, &phi, &f, &ys)? {
                return Err(fail(format!("q = {q}: at {:?}, {a} vs {b}", k.format_vec(&y))));
            }
            points += ys.len();
        }
        // negative control
        let phi = random::sb(&k, &mut rng, &SbShape::new(m))?;
        let bad = oracle::corrupt(&k, &phi.fourier(&k)?)?;
        let mut ys: Vec<Vec<FieldElement>> = (0..50).map(|_| random::vector(&k, &mut rng, m, -2, 3)).collect();
        ys.extend(bad.terms().iter().map(|t| t.center.clone()));
        if oracle::compare_fourier(&k, &phi, &bad, &ys)?.is_none() {
            return Err(fail(format!("q = {q}: corrupted transform not detected")));
        }
    }
    Ok(format!("200 functions, {points} covectors, corruption detected in every field"))
}

fn schwartz_identities(cfg: &SuiteConfig) -> Result<String> {
    let k = &cfg.field;
    let mut rng = random::rng(cfg.seed + 3);
    for i in 0..50 {
        let m = 1 + i % 2;
        let phi = random::sb(k, &mut rng, &SbShape::new(m))?;
        let hi = phi.constancy_bound();
        for a in hi..=hi + 3 {
            let c = phi.convolve(k, &SbFunction::ball(k, m, a))?;
            let want = phi.scale(k, &MotivicScalar::l_pow(k.p(), -a * m as i64))?;
            if !c.same_function(k, &want)? {
                return Err(fail(format!("φ ∗ 1_B at α = {a}, sample {i}")));
            }
        }
        let cut = phi.multiply(k, &SbFunction::ball(k, m, phi.support_bound()))?;
        if !cut.same_function(k, &phi)? {
            return Err(fail(format!("φ·1_B at α⁻, sample {i}")));
        }
    }
    Ok("50 functions".into())
}

fn average_formula(cfg: &SuiteConfig) -> Result<String> {
    let k = &cfg.field;
    let mut rng = random::rng(cfg.seed + 4);
    for i in 0..100 {
        let phi = random::sb(k, &mut rng, &SbShape::new(1))?;
        let psi = random::sb(k, &mut rng, &SbShape::new(1))?;
        let u = Distribution::from_sb(&phi);
        let want = phi.multiply(k, &psi)?.integrate();
        let (lo, hi) = (psi.support_bound(), psi.constancy_bound());
        for (a, b) in [(0, 0), (1, 0), (0, 1), (2, 2), (1, 2), (2, 0)] {
            let got = u.eval_on_sb_window(k, &psi, lo - a, hi + b)?;
            if !same_at_q(k, &got, &want)? {
                return Err(fail(format!("pair {i}, window widened by ({a}, {b}): {got} vs {want}")));
            }
        }
    }
    Ok("100 pairs, 6 windows each".into())
}

fn oscillatory_vanishing(_: &SuiteConfig) -> Result<String> {
    let k = LocalField::with_q(3)?;
    let g1 = LambdaGroup::new(1)?;
    let mut checked = 0;
    // (phase, variables, centre, radius, parameters)
    let cases: [(&str, &[&str], &[&str], i64, &[&str]); 5] = [
        ("x", &["x"], &["0"], 0, &[]),
        ("x^2", &["x"], &["1"], 1, &[]),
        ("x^2 + t*x", &["x"], &["1"], 1, &[]),
        ("x^2 + t*x", &["x"], &["2"], 1, &[]),
        ("x1*v1 + x2*v2 + x1*x2", &["x1", "x2", "v1", "v2"], &["0", "0"], 0, &["t^-1", "t^-1"]),
    ];
    for (g, vars, c, r, v) in cases {
        let full = poly_map(&k, &[g], vars)?.remove(0);
        let v = fes(&k, v)?;
        let c = fes(&k, c)?;
        let local = full.substitute_tail(&k, &v)?;
        let phi = SbFunction::indicator(&k, c.clone(), r)?;
        let pd = PhaseData::estimate_on(&k, &local, &c, r, phi.constancy_bound(), DEFAULT_N_R_CAP, 8)?;
        let pd = PhaseData { phase: full, ..pd };
        let th = oscillatory_bound(&pd, &phi);
        for o in (th - 6)..th {
            for lam in lambda_reps(&k, g1, o, o + 2)? {
                let val = oscillatory_integral(&k, &phi, &pd, &lam, &v)?;
                if !val.is_zero() {
                    return Err(fail(format!("{g} at λ = {}: {val}", k.format(&lam))));
                }
                checked += 1;
            }
        }
    }
    // x² on B_0 has no gradient bound: the estimator must say so
    let sq = poly_map(&k, &["x^2"], &["x"])?.remove(0);
    match PhaseData::estimate(&k, &sq, &SbFunction::ball(&k, 1, 0), DEFAULT_N_R_CAP, 8) {
        Err(Error::DataViolation { .. }) => {}
        other => return Err(fail(format!("x² on B_0: expected a gradient violation, got {other:?}"))),
    }
    Ok(format!("{checked} vanishing integrals"))
}

fn dirac_wave_front(_: &SuiteConfig) -> Result<String> {
    let k = LocalField::with_q(3)?;
    let d = Distribution::dirac(&k, vec![FieldElement::zero()]);
    let zero = [FieldElement::zero()];
    let mut n_tested = 0;
    for n in [1u32, 2] {
        let pr = WfParams::new(0, LambdaGroup::new(n)?);
        for xi in k.coset_reps(&zero, 0, n as i64)? {
            if xi[0].is_zero() {
                continue;
            }
            let c = wf_test(&k, &d, &zero, &xi, &pr)?;
            let ok = c.verdict == Verdict::NotSmooth && c.witness.as_ref().is_some_and(|w| w.value_at_q == "1");
            if !ok {
                return Err(fail(format!("ξ0 = {}: {:?}", k.format(&xi[0]), c.verdict)));
            }
            n_tested += 1;
        }
    }
    Ok(format!("{n_tested} covectors not smooth, witness 1"))
}

fn conormal_dichotomy(_: &SuiteConfig) -> Result<String> {
    let k = LocalField::with_q(3)?;
    let g = poly_map(&k, &["x^2"], &["x"])?;
    let u = Distribution::graph(&k, g.clone())?;
    let z = vec![FieldElement::zero(); 2];
    let pr = WfParams::new(0, LambdaGroup::new(1)?);
    let a = wf_test(&k, &u, &z, &fes(&k, &["1", "0"])?, &pr)?;
    if a.verdict != Verdict::SmoothCertified {
        return Err(fail(format!("(1,0): {:?}", a.verdict)));
    }
    let b = wf_test(&k, &u, &z, &fes(&k, &["0", "1"])?, &pr)?;
    let w = match (b.verdict, &b.witness) {
        (Verdict::NotSmooth, Some(w)) => w,
        _ => return Err(fail(format!("(0,1): {:?}", b.verdict))),
    };
    if !(-6..=0).contains(&w.ord_lambda) {
        return Err(fail(format!("witness at ord λ = {}", w.ord_lambda)));
    }
    let lam = k.parse(&w.lambda)?;
    let brute = oracle::graph_query(&k, &g, &z, 0, &[FieldElement::zero(), lam], 1 - w.ord_lambda)?;
    if brute.is_zero() || brute.to_string() != w.value_at_q {
        return Err(fail(format!("witness {} vs enumeration {brute}", w.value_at_q)));
    }
    Ok(format!(
        "(1,0) certified with threshold {:?}; (0,1) witness {} at ord λ = {}",
        a.threshold, w.value_at_q, w.ord_lambda
    ))
}

fn paley_wiener(cfg: &SuiteConfig) -> Result<String> {
    let k = &cfg.field;
    let mut rng = random::rng(cfg.seed + 5);
    for i in 0..25 {
        let psi = random::sb(k, &mut rng, &SbShape::new(1))?;
        let r = rand::Rng::gen_range(&mut rng, -1..=1);
        let c = random::vector(k, &mut rng, 1, -1, r);
        let phi = SbFunction::indicator(k, c, r)?;
        let u = Distribution::from_sb(&psi);
        let support = 1 - phi.constancy_bound().max(psi.constancy_bound());
        let depth = 1 - phi.support_bound().max(psi.support_bound());
        let battery = random::queries(k, &mut rng, 1, 30, -2, (-2, 2), (-2, 2));
        let pw = paley_wiener_check(k, &u, &phi, support, depth.max(support), &battery)?;
        if !pw.verdict {
            return Err(fail(format!("sample {i}: {:?}", pw.witness)));
        }
    }
    Ok("25 localized functions, 30 queries each".into())
}

fn pullback_function_case(cfg: &SuiteConfig) -> Result<String> {
    let k = &cfg.field;
    let q = k.q() as u64;
    let mut rng = random::rng(cfg.seed + 6);
    let shape = SbShape {
        max_terms: 3,
        radius: (-1, 2),
        freq_ord: (-1, 1),
        center_ord: -1,
        ..SbShape::new(1)
    };
    let l1 = MotivicScalar::l_pow(k.p(), -1);
    let a = fe(k, "t^-1 + 1")?;
    let id = poly_map(k, &["x"], &["x"])?;
    let tr = poly_map(k, &["x + t^-1 + 1"], &["x"])?;
    let sq = poly_map(k, &["x^2"], &["x"])?;
    let mut queries = 0;
    for _ in 0..4 {
        let psi = random::sb(k, &mut rng, &shape)?;
        let u = Distribution::from_sb(&psi);
        let qs = random::queries(k, &mut rng, 1, 15, -2, (-1, 2), (-2, 2));
        // closed forms: ψ∘id = ψ, ψ(x + a) = translate by −a
        let closed = [
            (&id, Distribution::from_sb(&psi).scale(&l1)),
            (&tr, Distribution::from_sb(&psi.translate(k, &[k.neg(&a)])?).scale(&l1)),
        ];
        for (f, want) in &closed {
            let pb = pullback((*f).clone(), &u, PullbackData::default())?;
            for bq in &qs {
                if !same_at_q(k, &pb.query(k, bq)?, &want.query(k, bq)?)? {
                    return Err(fail(format!("{f:?} at {}", bq.format(k))));
                }
                queries += 1;
            }
        }
        // x²: against the character sum of ψ(x²)
        let pb = pullback(sq.clone(), &u, PullbackData::default())?;
        let hi = psi.constancy_bound();
        for bq in &qs {
            let got = pb.query(k, bq)?.mul_l_pow(1).eval_at_q(q)?;
            let d = bq.radius.max(hi + 2).max(3);
            let brute = oracle::composed_query(k, &psi, &sq, &bq.center, bq.radius, &bq.freq, d)?;
            if brute != oracle::composed_query(k, &psi, &sq, &bq.center, bq.radius, &bq.freq, d + 1)? {
                return Err(fail(format!("enumeration depth {d} too shallow at {}", bq.format(k))));
            }
            if got != brute {
                return Err(fail(format!("x^2 at {}: {got} vs {brute}", bq.format(k))));
            }
            queries += 1;
        }
    }
    Ok(format!("{queries} queries"))
}

fn projection_property(cfg: &SuiteConfig) -> Result<String> {
    let k = &cfg.field;
    let wp = WfParams::new(0, LambdaGroup::new(1)?);
    let sp = SsParams::new(0);
    let mut rng = random::rng(cfg.seed + 7);
    let mut total = 0;

    let line: Vec<Vec<FieldElement>> = ["0", "1", "t", "t^-1", "t^-1 + 1"]
        .iter()
        .map(|s| fes(k, &[s]))
        .collect::<Result<_>>()?;
    let covectors: Vec<Vec<FieldElement>> = (1..k.q().min(3)).map(|c| vec![k.from_int(c as i64)]).collect();
    let phi = random::sb(k, &mut rng, &SbShape::new(1))?;
    for u in [Distribution::dirac(k, vec![FieldElement::zero()]), Distribution::from_sb(&phi)] {
        let mut certs = Vec::new();
        for x in &line {
            for xi in &covectors {
                certs.push(wf_test(k, &u, x, xi, &wp)?);
            }
        }
        let rep = projection_property_check(k, &u, &certs, &line, &sp)?;
        if !rep.violations.is_empty() {
            return Err(fail(format!("{}: {:?}", u.kind_name(), rep.violations)));
        }
        total += rep.certificates;
    }

    let g = poly_map(k, &["x^2"], &["x"])?;
    let u = Distribution::graph(k, g)?;
    let grid: Vec<Vec<FieldElement>> = [["0", "0"], ["1", "1"], ["0", "t^-1"], ["t^-1", "0"], ["1", "0"]]
        .iter()
        .map(|p| fes(k, p))
        .collect::<Result<_>>()?;
    let mut certs = Vec::new();
    for x in &grid {
        for xi in [["1", "0"], ["0", "1"]] {
            certs.push(wf_test(k, &u, x, &fes(k, &xi)?, &wp)?);
        }
    }
    let rep = projection_property_check(k, &u, &certs, &grid, &sp)?;
    if !rep.violations.is_empty() {
        return Err(fail(format!("graph: {:?}", rep.violations)));
    }
    total += rep.certificates;
    Ok(format!("{total} certificates, no violations"))
}

fn finiteness(cfg: &SuiteConfig) -> Result<String> {
    let k = &cfg.field;
    let z = FieldElement::zero();
    let cases: [(&str, &[&str], i64, i64); 8] = [
        ("ord(x)", &["x"], 0, 3),
        ("ord(2*x + 1)", &["x"], 0, 2),
        ("ord(x^2 + t*x)", &["x"], 0, 3),
        ("ord(x^2 - 1)", &["x"], 0, 2),
        ("ord(t^-1*x + 1)", &["x"], -1, 2),
        ("min(ord(x), ord(y))", &["x", "y"], 0, 2),
        ("ord(x*y - t)", &["x", "y"], 0, 2),
        ("2*ord(x) + 1", &["x"], -1, 2),
    ];
    let mut sizes = Vec::new();
    for (text, vars, radius, depth) in cases {
        let e = parse(text)?;
        let dom = Domain::ball(vars, vec![z.clone(); vars.len()], radius);
        let r = range_enumerate(k, &e, &dom, depth)?;
        if r.values.is_empty() {
            return Err(fail(format!("{text}: empty range")));
        }
        sizes.push(r.values.len());
    }
    Ok(format!("range sizes {sizes:?}"))
}
