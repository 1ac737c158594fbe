//! Λ_n-scaling, the oscillatory-integral bound, and pointwise wave front
//! and singular support tests.

use rand::Rng;
use serde::Serialize;

use crate::distribution::{paley_wiener_check, BallQuery, Distribution, Kind};
use crate::error::{Error, Result};
use crate::expr::Poly;
use crate::field::{FieldElement, LocalField};
use crate::phase::{ball_integral, grad_ord_upper, Integrand};
use crate::random;
use crate::scalar::MotivicScalar;
use crate::schwartz::SbFunction;

pub const DEFAULT_N_R_CAP: i64 = 64;

/// {x : n | ord x, ac x = 1}
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaGroup {
    pub n: u32,
}

impl LambdaGroup {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("Λ_n needs n ≥ 1"));
        }
        Ok(LambdaGroup { n })
    }

    pub fn contains(&self, k: &LocalField, x: &FieldElement) -> Result<bool> {
        match x.ord()? {
            None => Ok(false),
            Some(o) => Ok(o.rem_euclid(self.n as i64) == 0 && x.ac()? == k.residue().one()),
        }
    }
}

/// λ = t^{kn}(1 + μ) for μ over representatives of the maximal ideal
/// modulo t^{depth − kn}.
pub fn lambda_reps(k: &LocalField, group: LambdaGroup, level: i64, depth: i64) -> Result<Vec<FieldElement>> {
    let o = level * group.n as i64;
    if depth < o + 1 {
        return Err(Error::Precondition(format!("depth {depth} below ord λ + 1 = {}", o + 1)));
    }
    let lead = FieldElement::t_pow(o);
    Ok(k.coset_reps(&[lead], o + 1, depth)?.map(|mut v| v.pop().unwrap()).collect())
}

/// A polynomial phase with valuative bounds on a ball: ord ∇g ≤ n_grad
/// and every entry of the Taylor remainder has ord ≥ n_r.
#[derive(Clone, Debug)]
pub struct PhaseData {
    pub phase: Poly,
    pub n_grad: i64,
    pub n_r: i64,
    /// R ≡ 0 and n_r is the configured cap
    pub n_r_capped: bool,
    pub remainder: Vec<Vec<Poly>>,
}

fn remainder_lower(rem: &[Vec<Poly>], x_radius: i64, y_radius: i64, m: usize) -> Option<i64> {
    let mut radii = vec![x_radius; m];
    radii.extend(std::iter::repeat(y_radius).take(m));
    rem.iter()
        .flatten()
        .filter_map(|r| r.newton_lower_radii(&radii))
        .min()
}

impl PhaseData {
    /// Bounds for g on the support ball of φ.
    pub fn estimate(k: &LocalField, phase: &Poly, phi: &SbFunction, cap: i64, max_depth: i64) -> Result<Self> {
        let zero = vec![FieldElement::zero(); phi.dim()];
        Self::estimate_on(k, phase, &zero, phi.support_bound(), phi.constancy_bound(), cap, max_depth)
    }

    /// Bounds for g on B(center, radius); remainder increments range over
    /// B_{alpha_plus + 1}.
    pub fn estimate_on(
        k: &LocalField,
        phase: &Poly,
        center: &[FieldElement],
        radius: i64,
        alpha_plus: i64,
        cap: i64,
        max_depth: i64,
    ) -> Result<Self> {
        let m = phase.nvars();
        if center.len() != m {
            return Err(Error::MismatchedDimension(m, center.len()));
        }
        let grad = phase.gradient(k);
        let n_grad = match grad_ord_upper(k, &grad, center, radius, max_depth)? {
            Ok(b) => b,
            Err(x) => {
                return Err(Error::DataViolation {
                    msg: "gradient of the phase is not bounded away from zero on the ball".into(),
                    witness: format!("x = {:?}", k.format_vec(&x)),
                })
            }
        };
        let remainder = phase.taylor_remainder(k);
        let (n_r, n_r_capped) = match remainder_lower(&remainder, radius.min(min_ord(center)?), alpha_plus + 1, m) {
            Some(b) => (b.min(cap), b >= cap),
            None => (cap, true),
        };
        Ok(PhaseData {
            phase: phase.clone(),
            n_grad,
            n_r,
            n_r_capped,
            remainder,
        })
    }

    /// Re-checks declared bounds on B(center, radius).
    pub fn verify(&self, k: &LocalField, center: &[FieldElement], radius: i64, alpha_plus: i64, max_depth: i64) -> Result<()> {
        let fresh = Self::estimate_on(k, &self.phase, center, radius, alpha_plus, self.n_r, max_depth)?;
        if fresh.n_grad > self.n_grad {
            return Err(Error::DataViolation {
                msg: format!("ord grad reaches {} > N_grad = {}", fresh.n_grad, self.n_grad),
                witness: format!("ball B({:?}, {radius})", k.format_vec(center)),
            });
        }
        if fresh.n_r < self.n_r {
            return Err(Error::DataViolation {
                msg: format!("remainder bound {} < N_R = {}", fresh.n_r, self.n_r),
                witness: format!("ball B({:?}, {radius})", k.format_vec(center)),
            });
        }
        Ok(())
    }
}

fn min_ord(v: &[FieldElement]) -> Result<i64> {
    let mut o = i64::MAX;
    for x in v {
        o = o.min(x.ord_or_max()?);
    }
    Ok(o)
}

/// −A − N_grad with A = max(N_grad − N_R + 1, αplus(φ)): the oscillatory
/// integral vanishes for ord λ below this.
pub fn oscillatory_bound(pd: &PhaseData, phi: &SbFunction) -> i64 {
    threshold(pd, phi.constancy_bound())
}

fn threshold(pd: &PhaseData, alpha_plus: i64) -> i64 {
    let a = (pd.n_grad - pd.n_r + 1).max(alpha_plus);
    -a - pd.n_grad
}

/// ∫ φ(x) Ψ(λ g(x, v)) dx, exactly.
pub fn oscillatory_integral(
    k: &LocalField,
    phi: &SbFunction,
    pd: &PhaseData,
    lambda: &FieldElement,
    params: &[FieldElement],
) -> Result<MotivicScalar> {
    let m = phi.dim();
    let g = pd.phase.substitute_tail(k, params)?.scale(k, lambda);
    if g.nvars() != m {
        return Err(Error::MismatchedDimension(m, g.nvars()));
    }
    let mut acc = MotivicScalar::zero(phi.p());
    for t in phi.terms() {
        let mut h = g.clone();
        for (i, xi) in t.freq.iter().enumerate() {
            h = h.add(k, &Poly::var(m, i).scale(k, xi));
        }
        let v = ball_integral(k, &Integrand::phase(h), &t.center, t.radius)?;
        acc.add_assign(&v.mul(&t.coeff));
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    SmoothCertified,
    SmoothObserved,
    NotSmooth,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub lambda: String,
    pub ord_lambda: i64,
    pub value: String,
    pub value_at_q: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct WfCertificate {
    pub point: Vec<String>,
    pub covector: Vec<String>,
    pub r: i64,
    pub rcheck: i64,
    pub n: u32,
    #[serde(rename = "K")]
    pub depth: i64,
    pub verdict: Verdict,
    pub threshold: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem_basis: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_r_cap: Option<i64>,
    #[serde(skip)]
    pub raw_point: Vec<FieldElement>,
}

/// Parameters of a wave front sweep.
#[derive(Clone, Copy, Debug)]
pub struct WfParams {
    pub r: i64,
    pub rcheck: i64,
    pub depth: i64,
    pub group: LambdaGroup,
    pub n_r_cap: i64,
    pub max_grad_depth: i64,
}

impl WfParams {
    pub fn new(r: i64, group: LambdaGroup) -> Self {
        WfParams {
            r,
            rcheck: group.n as i64,
            depth: 6,
            group,
            n_r_cap: DEFAULT_N_R_CAP,
            max_grad_depth: 8,
        }
    }
}

struct Certified {
    threshold: Option<i64>,
    basis: String,
    n_r_cap: Option<i64>,
}

/// A theorem-backed threshold for the twisted values of u at x0, if the
/// kind of u allows one.
fn certify(
    k: &LocalField,
    u: &Distribution,
    x0: &[FieldElement],
    xi: &[FieldElement],
    pr: &WfParams,
) -> Result<Option<Certified>> {
    match u.kind() {
        Kind::Function(phi) => {
            let n = 1 - phi.constancy_bound().max(pr.r) - min_ord(xi)?;
            Ok(Some(Certified {
                threshold: Some(n),
                basis: "Schwartz-Bruhat closed form: N = 1 - max(alpha_plus, r) - ord xi".into(),
                n_r_cap: None,
            }))
        }
        Kind::Graph(g) => {
            let mx = g[0].nvars();
            let (a, b) = x0.split_at(mx);
            // decide whether g(B(a, r)) lies in, or misses, B(b, r)
            let mut inside = true;
            for (gj, bj) in g.iter().zip(b) {
                let d = k.sub(&gj.eval(k, a)?, bj).ord_or_max()?;
                let var = gj.variation_lower(k, a, pr.r).unwrap_or(i64::MAX);
                if d < pr.r && var > d {
                    return Ok(Some(Certified {
                        threshold: None,
                        basis: "the localizing ball misses the graph".into(),
                        n_r_cap: None,
                    }));
                }
                if !(d >= pr.r && var >= pr.r) {
                    inside = false;
                }
            }
            if !inside {
                return Ok(None);
            }
            let mut phase = Poly::zero(mx);
            for (i, c) in xi[..mx].iter().enumerate() {
                phase = phase.add(k, &Poly::var(mx, i).scale(k, c));
            }
            for (gj, eta) in g.iter().zip(&xi[mx..]) {
                phase = phase.add(k, &gj.scale(k, eta));
            }
            match PhaseData::estimate_on(k, &phase, a, pr.r, pr.r, pr.n_r_cap, pr.max_grad_depth) {
                Ok(pd) => Ok(Some(Certified {
                    threshold: Some(threshold(&pd, pr.r)),
                    basis: format!(
                        "oscillatory bound with N_grad = {}, N_R = {}, A = max(N_grad - N_R + 1, r)",
                        pd.n_grad, pd.n_r
                    ),
                    n_r_cap: pd.n_r_capped.then_some(pr.n_r_cap),
                })),
                Err(Error::DataViolation { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        }
        _ => Ok(None),
    }
}

/// Sweeps λ ∈ Λ_n with ord λ = 0, −n, …, −Kn over the twisted values
/// ⟨u, 1_{B(x0, r)} Ψ(⟨·, λξ⟩)⟩ at ξ = ξ0 mod t^ř.
pub fn wf_test(
    k: &LocalField,
    u: &Distribution,
    x0: &[FieldElement],
    xi0: &[FieldElement],
    pr: &WfParams,
) -> Result<WfCertificate> {
    let n = pr.group.n as i64;
    if x0.len() != u.dim() || xi0.len() != u.dim() {
        return Err(Error::MismatchedDimension(u.dim(), xi0.len()));
    }
    let o = min_ord(xi0)?;
    if o == i64::MAX {
        return Err(Error::Precondition("covector must be nonzero".into()));
    }
    if !(0..n).contains(&o) || pr.rcheck < n {
        return Err(Error::Precondition(format!(
            "need 0 ≤ ord ξ0 ≤ n − 1 and ř ≥ n (ord ξ0 = {o}, n = {n}, ř = {})",
            pr.rcheck
        )));
    }
    let xc = x0.iter().map(|x| x.head(pr.r)).collect::<Result<Vec<_>>>()?;
    let xi = xi0.iter().map(|x| x.head(pr.rcheck)).collect::<Result<Vec<_>>>()?;
    let q = k.q() as u64;

    // (level, λ, value) of the first nonzero value at each level
    let mut nonzero: Vec<(i64, FieldElement, MotivicScalar)> = Vec::new();
    for level in (-pr.depth..=0).rev() {
        let depth = (level * n + 1).max(1 - pr.r - o);
        for lambda in lambda_reps(k, pr.group, level, depth)? {
            let freq: Vec<FieldElement> = xi.iter().map(|c| k.mul(&lambda, c)).collect();
            let v = u.query(k, &BallQuery::new(xc.clone(), pr.r, freq))?;
            if !v.is_zero() {
                nonzero.push((level * n, lambda, v));
                break;
            }
        }
    }
    let witness_of = |(ol, lambda, v): &(i64, FieldElement, MotivicScalar)| -> Result<Witness> {
        Ok(Witness {
            lambda: k.format(lambda),
            ord_lambda: *ol,
            value: v.to_string(),
            value_at_q: v.eval_at_q(q)?.to_string(),
        })
    };
    let lowest = nonzero.last();
    let mut cert = WfCertificate {
        point: k.format_vec(x0),
        covector: k.format_vec(xi0),
        r: pr.r,
        rcheck: pr.rcheck,
        n: pr.group.n,
        depth: pr.depth,
        verdict: Verdict::SmoothObserved,
        threshold: None,
        witness: None,
        theorem_basis: None,
        n_r_cap: None,
        raw_point: x0.to_vec(),
    };
    if let Some(c) = certify(k, u, &xc, &xi, pr)? {
        if let (Some(t), Some(w)) = (c.threshold, lowest) {
            if w.0 < t {
                return Err(Error::Eval(format!(
                    "certified threshold {t} contradicted by a nonzero value at ord λ = {}",
                    w.0
                )));
            }
        }
        if c.threshold.is_none() && lowest.is_some() {
            return Err(Error::Eval("localization misses the support but a value is nonzero".into()));
        }
        cert.verdict = Verdict::SmoothCertified;
        cert.threshold = c.threshold;
        cert.theorem_basis = Some(c.basis);
        cert.n_r_cap = c.n_r_cap;
        return Ok(cert);
    }
    match lowest {
        Some(w) if w.0 == -pr.depth * n => {
            cert.verdict = Verdict::NotSmooth;
            cert.threshold = None;
            cert.witness = Some(witness_of(w)?);
        }
        Some(w) => cert.threshold = Some(w.0),
        None => cert.threshold = Some(0),
    }
    Ok(cert)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SsVerdict {
    Smooth,
    NonSmoothObserved,
}

#[derive(Clone, Debug)]
pub struct SsReport {
    pub verdict: SsVerdict,
    pub reconstruction: Option<SbFunction>,
    pub witness: Option<String>,
    /// lowest ord ξ with a nonzero localized value
    pub support: i64,
}

#[derive(Clone, Copy, Debug)]
pub struct SsParams {
    pub r: i64,
    pub depth: i64,
    /// shells with more representatives than this are sampled
    pub sample_cap: u128,
    pub battery: usize,
    pub seed: u64,
}

impl SsParams {
    pub fn new(r: i64) -> Self {
        SsParams {
            r,
            depth: 6,
            sample_cap: 256,
            battery: 8,
            seed: 7,
        }
    }
}

/// Shell representatives {ξ : min ord ξ = s} modulo B_top, all of them or
/// a seeded sample.
fn shell(k: &LocalField, m: usize, s: i64, top: i64, cap: u128, rng: &mut random::Rng64) -> Result<Vec<Vec<FieldElement>>> {
    let zero = vec![FieldElement::zero(); m];
    if k.coset_count(m, s, top) <= cap {
        let mut out = Vec::new();
        for xi in k.coset_reps(&zero, s, top)? {
            if min_ord(&xi)? == s {
                out.push(xi);
            }
        }
        return Ok(out);
    }
    Ok((0..cap)
        .map(|_| {
            let lead = rng.gen_range(0..m);
            (0..m)
                .map(|i| {
                    if i == lead {
                        random::element_of_ord(k, rng, s, top)
                    } else {
                        random::element(k, rng, s, top)
                    }
                })
                .collect()
        })
        .collect())
}

/// Localizes u to B(x0, r) and asks whether the result is a
/// Schwartz-Bruhat function: sweeps ord ξ = −1, …, −K, then reconstructs
/// and checks the Paley-Wiener identity.
pub fn ss_test(k: &LocalField, u: &Distribution, x0: &[FieldElement], pr: &SsParams) -> Result<SsReport> {
    let m = u.dim();
    if x0.len() != m {
        return Err(Error::MismatchedDimension(m, x0.len()));
    }
    let xc = x0.iter().map(|x| x.head(pr.r)).collect::<Result<Vec<_>>>()?;
    let ox = min_ord(&xc)?;
    let top = (1 - pr.r).max(1i64.saturating_sub(ox));
    let mut rng = random::rng(pr.seed);
    let mut support = 0;
    let mut witness = None;
    for s in (-pr.depth..=-1).rev() {
        for xi in shell(k, m, s, top, pr.sample_cap, &mut rng)? {
            let v = u.query(k, &BallQuery::new(xc.clone(), pr.r, xi.clone()))?;
            if !v.is_zero() {
                support = s;
                witness = Some(format!("value {v} at xi = {:?}", k.format_vec(&xi)));
                break;
            }
        }
    }
    if support == -pr.depth {
        return Ok(SsReport {
            verdict: SsVerdict::NonSmoothObserved,
            reconstruction: None,
            witness,
            support,
        });
    }
    let phi = SbFunction::indicator(k, xc.clone(), pr.r)?;
    let lo = ox.min(pr.r);
    let battery = random::queries(k, &mut rng, m, pr.battery, lo - 1, (lo - 1, pr.r + 1), (-1, 1));
    let pw = paley_wiener_check(k, u, &phi, support, top, &battery)?;
    Ok(if pw.verdict {
        SsReport {
            verdict: SsVerdict::Smooth,
            reconstruction: Some(pw.reconstruction),
            witness: None,
            support,
        }
    } else {
        SsReport {
            verdict: SsVerdict::NonSmoothObserved,
            reconstruction: None,
            witness: pw.witness,
            support,
        }
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectionReport {
    pub points: usize,
    pub certificates: usize,
    pub violations: Vec<String>,
}

/// Every not-smooth wave front verdict must sit over a point where the
/// singular support test is not smooth.
pub fn projection_property_check(
    k: &LocalField,
    u: &Distribution,
    certs: &[WfCertificate],
    points: &[Vec<FieldElement>],
    pr: &SsParams,
) -> Result<ProjectionReport> {
    let mut all: Vec<Vec<FieldElement>> = points.to_vec();
    for c in certs {
        if !all.contains(&c.raw_point) {
            all.push(c.raw_point.clone());
        }
    }
    let mut violations = Vec::new();
    for x in &all {
        let ss = ss_test(k, u, x, pr)?;
        if ss.verdict != SsVerdict::Smooth {
            continue;
        }
        for c in certs.iter().filter(|c| &c.raw_point == x) {
            if c.verdict == Verdict::NotSmooth {
                violations.push(format!(
                    "wave front not smooth at {:?} over {:?}, but singular support test is smooth",
                    c.covector, c.point
                ));
            }
        }
    }
    Ok(ProjectionReport {
        points: all.len(),
        certificates: certs.len(),
        violations,
    })
}
