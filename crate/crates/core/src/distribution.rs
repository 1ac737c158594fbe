//! Distributions given by their values on twisted ball indicators
//! 1_{B(c,α)} Ψ(⟨·,ξ⟩). Pairing with a Schwartz-Bruhat function is linear
//! in its terms; the average formula reproduces the same value from
//! untwisted ball values alone.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::Poly;
use crate::field::{FieldElement, LocalField};
use crate::phase::{ball_integral, Constraint, Integrand};
use crate::random::{self, SbShape};
use crate::scalar::MotivicScalar;
use crate::schwartz::SbFunction;

/// The test function 1_{B(center, radius)} Ψ(⟨·, freq⟩).
#[derive(Clone, Debug, PartialEq)]
pub struct BallQuery {
    pub center: Vec<FieldElement>,
    pub radius: i64,
    pub freq: Vec<FieldElement>,
}

impl BallQuery {
    pub fn new(center: Vec<FieldElement>, radius: i64, freq: Vec<FieldElement>) -> Self {
        BallQuery { center, radius, freq }
    }

    pub fn untwisted(center: Vec<FieldElement>, radius: i64) -> Self {
        let m = center.len();
        BallQuery::new(center, radius, vec![FieldElement::zero(); m])
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn to_sb(&self, k: &LocalField) -> Result<SbFunction> {
        SbFunction::twisted(k, self.center.clone(), self.radius, self.freq.clone())
    }

    fn contains(&self, k: &LocalField, x: &[FieldElement]) -> Result<bool> {
        for (xi, ci) in x.iter().zip(&self.center) {
            if !k.sub(xi, ci).head(self.radius)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn format(&self, k: &LocalField) -> String {
        format!(
            "B({:?}, {}) twisted by {:?}",
            k.format_vec(&self.center),
            self.radius,
            k.format_vec(&self.freq)
        )
    }
}

pub type QueryFn = dyn Fn(&LocalField, &BallQuery) -> Result<MotivicScalar> + Send + Sync;

/// Smooth data for a pull-back. Unset fields are estimated where possible.
#[derive(Clone, Debug)]
pub struct PullbackData {
    /// f(B(c, α)) ⊆ B(f(c), r_y) on every query ball
    pub r_y: Option<i64>,
    /// ord of ᵗdf(x)ξ̂ is at most n_delta for unit covectors ξ̂
    pub n_delta: Option<i64>,
    pub n_r: Option<i64>,
    /// asserted: the localized integrand vanishes for min ord ξ < xi_bound
    pub xi_bound: Option<i64>,
    pub check_shells: u32,
    pub n_r_cap: i64,
}

impl Default for PullbackData {
    fn default() -> Self {
        PullbackData {
            r_y: None,
            n_delta: None,
            n_r: None,
            xi_bound: None,
            check_shells: 1,
            n_r_cap: 64,
        }
    }
}

pub struct Pullback {
    map: Vec<Poly>,
    u: Distribution,
    data: PullbackData,
    diagonal: bool,
}

#[derive(Clone)]
pub enum Kind {
    Function(SbFunction),
    Dirac(Vec<FieldElement>),
    /// integration over the graph of x ↦ (g_1(x), …, g_k(x))
    Graph(Vec<Poly>),
    Fourier(Distribution),
    ProductBySb(SbFunction, Distribution),
    Tensor(Distribution, Distribution),
    Pullback(Arc<Pullback>),
    Scaled(MotivicScalar, Distribution),
    Reflected(Distribution),
    Sum(Vec<Distribution>),
    Custom(Arc<QueryFn>),
}

#[derive(Clone)]
pub struct Distribution {
    p: u32,
    m: usize,
    kind: Arc<Kind>,
}

impl fmt::Debug for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Distribution({}, m = {})", self.kind_name(), self.m)
    }
}

/// Equality after L = q. Identities that enumerate cosets produce integer
/// counts q^j where closed forms carry L^j, so they hold only here.
pub fn same_at_q(k: &LocalField, a: &MotivicScalar, b: &MotivicScalar) -> Result<bool> {
    let q = k.q() as u64;
    Ok(a == b || a.eval_at_q(q)? == b.eval_at_q(q)?)
}

fn min_ord(v: &[FieldElement]) -> Result<i64> {
    let mut o = i64::MAX;
    for x in v {
        o = o.min(x.ord_or_max()?);
    }
    Ok(o)
}

impl Distribution {
    fn with(p: u32, m: usize, kind: Kind) -> Self {
        Distribution {
            p,
            m,
            kind: Arc::new(kind),
        }
    }

    pub fn from_sb(phi: &SbFunction) -> Self {
        Self::with(phi.p(), phi.dim(), Kind::Function(phi.clone()))
    }

    pub fn dirac(k: &LocalField, x0: Vec<FieldElement>) -> Self {
        Self::with(k.p(), x0.len(), Kind::Dirac(x0))
    }

    /// ⟨u, φ⟩ = ∫ φ(x, g(x)) dx on V_x × V_y.
    pub fn graph(k: &LocalField, g: Vec<Poly>) -> Result<Self> {
        let mx = g.first().map(|p| p.nvars()).ok_or_else(|| Error::invalid("empty map"))?;
        if g.iter().any(|p| p.nvars() != mx) {
            return Err(Error::invalid("map components have different arity"));
        }
        let m = mx + g.len();
        Ok(Self::with(k.p(), m, Kind::Graph(g)))
    }

    pub fn custom(p: u32, m: usize, f: Arc<QueryFn>) -> Self {
        Self::with(p, m, Kind::Custom(f))
    }

    pub fn zero(p: u32, m: usize) -> Self {
        Self::with(p, m, Kind::Sum(Vec::new()))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match &*self.kind {
            Kind::Function(_) => "function",
            Kind::Dirac(_) => "dirac",
            Kind::Graph(_) => "graph",
            Kind::Fourier(_) => "fourier-of",
            Kind::ProductBySb(..) => "product-by-sb",
            Kind::Tensor(..) => "tensor",
            Kind::Pullback(_) => "pullback",
            Kind::Scaled(..) => "scaled",
            Kind::Reflected(_) => "reflected",
            Kind::Sum(_) => "sum",
            Kind::Custom(_) => "custom",
        }
    }

    pub fn scale(&self, s: &MotivicScalar) -> Self {
        Self::with(self.p, self.m, Kind::Scaled(s.clone(), self.clone()))
    }

    /// u ↦ (φ ↦ ⟨u, φ(−·)⟩)
    pub fn reflect(&self) -> Self {
        Self::with(self.p, self.m, Kind::Reflected(self.clone()))
    }

    pub fn sum(p: u32, m: usize, parts: Vec<Distribution>) -> Result<Self> {
        if let Some(u) = parts.iter().find(|u| u.m != m || u.p != p) {
            return Err(Error::MismatchedDimension(m, u.m));
        }
        Ok(Self::with(p, m, Kind::Sum(parts)))
    }

    pub fn add(&self, other: &Distribution) -> Result<Self> {
        Self::sum(self.p, self.m, vec![self.clone(), other.clone()])
    }

    /// ⟨Fu, φ⟩ = ⟨u, Fφ⟩
    pub fn fourier(&self) -> Self {
        Self::with(self.p, self.m, Kind::Fourier(self.clone()))
    }

    /// ⟨φu, ψ⟩ = ⟨u, φψ⟩
    pub fn product_by_sb(phi: &SbFunction, u: &Distribution) -> Result<Self> {
        if phi.dim() != u.m {
            return Err(Error::MismatchedDimension(u.m, phi.dim()));
        }
        Ok(Self::with(u.p, u.m, Kind::ProductBySb(phi.clone(), u.clone())))
    }

    /// Value on one twisted ball.
    pub fn query(&self, k: &LocalField, q: &BallQuery) -> Result<MotivicScalar> {
        if q.dim() != self.m || q.freq.len() != self.m {
            return Err(Error::MismatchedDimension(self.m, q.dim()));
        }
        match &*self.kind {
            Kind::Function(phi) => Ok(phi.multiply(k, &q.to_sb(k)?)?.integrate()),
            Kind::Dirac(x0) => {
                if q.contains(k, x0)? {
                    let e = k.pairing_exponent(x0, &q.freq)?;
                    Ok(MotivicScalar::zeta_pow(self.p, e as i64))
                } else {
                    Ok(MotivicScalar::zero(self.p))
                }
            }
            Kind::Graph(g) => graph_query(k, g, q),
            Kind::Fourier(u) => u.pair(k, &q.to_sb(k)?.fourier(k)?),
            Kind::ProductBySb(phi, u) => u.pair(k, &phi.multiply(k, &q.to_sb(k)?)?),
            Kind::Tensor(u, v) => {
                let mx = u.m;
                let a = u.query(
                    k,
                    &BallQuery::new(q.center[..mx].to_vec(), q.radius, q.freq[..mx].to_vec()),
                )?;
                if a.is_zero() {
                    return Ok(a);
                }
                let b = v.query(
                    k,
                    &BallQuery::new(q.center[mx..].to_vec(), q.radius, q.freq[mx..].to_vec()),
                )?;
                Ok(a.mul(&b))
            }
            Kind::Pullback(pb) => pb.query(k, q),
            Kind::Scaled(s, u) => Ok(u.query(k, q)?.mul(s)),
            Kind::Reflected(u) => u.query(
                k,
                &BallQuery::new(
                    q.center.iter().map(|c| k.neg(c)).collect(),
                    q.radius,
                    q.freq.iter().map(|x| k.neg(x)).collect(),
                ),
            ),
            Kind::Sum(parts) => {
                let mut acc = MotivicScalar::zero(self.p);
                for u in parts {
                    acc.add_assign(&u.query(k, q)?);
                }
                Ok(acc)
            }
            Kind::Custom(f) => f(k, q),
        }
    }

    /// ⟨u, φ⟩ by linearity over the terms of φ.
    pub fn pair(&self, k: &LocalField, phi: &SbFunction) -> Result<MotivicScalar> {
        if phi.dim() != self.m {
            return Err(Error::MismatchedDimension(self.m, phi.dim()));
        }
        let mut acc = MotivicScalar::zero(self.p);
        for t in phi.terms() {
            let v = self.query(k, &BallQuery::new(t.center.clone(), t.radius, t.freq.clone()))?;
            acc.add_assign(&v.mul(&t.coeff));
        }
        Ok(acc)
    }

    /// Average formula: Σ_z φ(z) ⟨u, 1_{B(z, α⁺)}⟩ over z ∈ B_{α⁻} mod B_{α⁺}.
    pub fn eval_on_sb(&self, k: &LocalField, phi: &SbFunction) -> Result<MotivicScalar> {
        self.eval_on_sb_window(k, phi, phi.support_bound(), phi.constancy_bound())
    }

    /// The average formula on a window α⁻ ≤ αminus(φ), α⁺ ≥ αplus(φ).
    pub fn eval_on_sb_window(&self, k: &LocalField, phi: &SbFunction, lo: i64, hi: i64) -> Result<MotivicScalar> {
        if phi.dim() != self.m {
            return Err(Error::MismatchedDimension(self.m, phi.dim()));
        }
        if phi.is_zero() {
            return Ok(MotivicScalar::zero(self.p));
        }
        if lo > phi.support_bound() || hi < phi.constancy_bound() {
            return Err(Error::Precondition(format!(
                "window ({lo}, {hi}) does not contain ({}, {})",
                phi.support_bound(),
                phi.constancy_bound()
            )));
        }
        let zero = vec![FieldElement::zero(); self.m];
        let mut acc = MotivicScalar::zero(self.p);
        for z in k.coset_reps(&zero, lo, hi)? {
            let w = phi.evaluate(k, &z)?;
            if w.is_zero() {
                continue;
            }
            acc.add_assign(&w.mul(&self.query(k, &BallQuery::untwisted(z, hi))?));
        }
        Ok(acc)
    }

    /// Frequency support of the localized distribution: some S with
    /// query(center, radius, ξ) = 0 whenever min ord ξ < S. `i64::MAX`
    /// means the localization vanishes.
    pub fn freq_support(&self, k: &LocalField, center: &[FieldElement], radius: i64) -> Result<Option<i64>> {
        Ok(match &*self.kind {
            Kind::Function(phi) => {
                let loc = phi.multiply(k, &SbFunction::indicator(k, center.to_vec(), radius)?)?;
                if loc.is_zero() {
                    Some(i64::MAX)
                } else {
                    Some(loc.fourier(k)?.support_bound())
                }
            }
            Kind::Dirac(x0) => {
                if BallQuery::untwisted(center.to_vec(), radius).contains(k, x0)? {
                    None
                } else {
                    Some(i64::MAX)
                }
            }
            Kind::Scaled(_, u) => u.freq_support(k, center, radius)?,
            Kind::Reflected(u) => {
                let c: Vec<_> = center.iter().map(|c| k.neg(c)).collect();
                u.freq_support(k, &c, radius)?
            }
            Kind::Sum(parts) => {
                let mut s = Some(i64::MAX);
                for u in parts {
                    s = match (s, u.freq_support(k, center, radius)?) {
                        (Some(a), Some(b)) => Some(a.min(b)),
                        _ => None,
                    };
                }
                s
            }
            Kind::Tensor(u, v) => {
                let mx = u.m;
                let a = u.freq_support(k, &center[..mx], radius)?;
                let b = v.freq_support(k, &center[mx..], radius)?;
                match (a, b) {
                    (Some(i64::MAX), _) | (_, Some(i64::MAX)) => Some(i64::MAX),
                    (Some(a), Some(b)) => Some(a.min(b)),
                    _ => None,
                }
            }
            _ => None,
        })
    }
}

fn graph_query(k: &LocalField, g: &[Poly], q: &BallQuery) -> Result<MotivicScalar> {
    let mx = g[0].nvars();
    let mut phase = Poly::zero(mx);
    for (i, xi) in q.freq[..mx].iter().enumerate() {
        phase = phase.add(k, &Poly::var(mx, i).scale(k, xi));
    }
    for (gj, eta) in g.iter().zip(&q.freq[mx..]) {
        phase = phase.add(k, &gj.scale(k, eta));
    }
    let constraints = g
        .iter()
        .zip(&q.center[mx..])
        .map(|(gj, c)| Constraint {
            map: gj.clone(),
            center: c.clone(),
            radius: q.radius,
        })
        .collect();
    ball_integral(k, &Integrand { phase, constraints }, &q.center[..mx], q.radius)
}

/// Checks ⟨u, ⟨v, φ⟩⟩ = ⟨v, ⟨u, φ⟩⟩ on `battery` random φ and returns u ⊗ v.
pub fn tensor(k: &LocalField, u: &Distribution, v: &Distribution, battery: usize, seed: u64) -> Result<Distribution> {
    if u.p != v.p {
        return Err(Error::MismatchedPrime(u.p, v.p));
    }
    let m = u.m + v.m;
    let mut rng = random::rng(seed);
    let shape = SbShape {
        m,
        max_terms: 3,
        radius: (-1, 1),
        freq_ord: (-1, 1),
        center_ord: -1,
    };
    for _ in 0..battery {
        let phi = random::sb(k, &mut rng, &shape)?;
        let (lo, hi) = (phi.support_bound(), phi.constancy_bound());
        // x ↦ ⟨v, φ(x, ·)⟩ is constant on cosets of B_hi in x
        let mut left = MotivicScalar::zero(u.p);
        for z in k.coset_reps(&vec![FieldElement::zero(); u.m], lo, hi)? {
            let inner = v.pair(k, &phi.slice_first(k, &z)?)?;
            if !inner.is_zero() {
                left.add_assign(&inner.mul(&u.query(k, &BallQuery::untwisted(z, hi))?));
            }
        }
        let mut right = MotivicScalar::zero(u.p);
        for z in k.coset_reps(&vec![FieldElement::zero(); v.m], lo, hi)? {
            let inner = u.pair(k, &phi.slice_last(k, &z)?)?;
            if !inner.is_zero() {
                right.add_assign(&inner.mul(&v.query(k, &BallQuery::untwisted(z, hi))?));
            }
        }
        if !same_at_q(k, &left, &right)? {
            return Err(Error::Precondition(format!(
                "tensor product undefined: iterated pairings differ ({left} vs {right})"
            )));
        }
    }
    Ok(Distribution::with(u.p, m, Kind::Tensor(u.clone(), v.clone())))
}

/// f*u for a polynomial map f: V_x → V_y, by the localization formula
/// ⟨f*u, 1_B E(·|ζ)⟩ = L^{m_y − m_x} ∫ ⟨u, χ E(·|ξ)⟩ ∫_B E(⟨x,ζ⟩ − ⟨f(x),ξ⟩) dx dξ
/// with χ the indicator of a ball containing f(B).
pub fn pullback(f: Vec<Poly>, u: &Distribution, data: PullbackData) -> Result<Distribution> {
    pullback_with(f, u, data, false)
}

fn pullback_with(
    f: Vec<Poly>,
    u: &Distribution,
    data: PullbackData,
    diagonal: bool,
) -> Result<Distribution> {
    if f.len() != u.m {
        return Err(Error::MismatchedDimension(u.m, f.len()));
    }
    let mx = f.first().map(|p| p.nvars()).ok_or_else(|| Error::invalid("empty map"))?;
    if f.iter().any(|p| p.nvars() != mx) {
        return Err(Error::invalid("map components have different arity"));
    }
    let pb = Pullback {
        map: f,
        u: u.clone(),
        data,
        diagonal,
    };
    Ok(Distribution::with(u.p, mx, Kind::Pullback(Arc::new(pb))))
}

/// u · v as the pull-back of u ⊗ v along the diagonal.
pub fn diagonal_product(
    k: &LocalField,
    u: &Distribution,
    v: &Distribution,
    data: PullbackData,
    battery: usize,
    seed: u64,
) -> Result<Distribution> {
    if u.m != v.m {
        return Err(Error::MismatchedDimension(u.m, v.m));
    }
    let m = u.m;
    let t = tensor(k, u, v, battery, seed)?;
    let diag: Vec<Poly> = (0..2 * m).map(|i| Poly::var(m, i % m)).collect();
    let w = pullback_with(diag, &t, data, true)?;
    // the smooth-data requirement is checked on the unit ball at the origin
    w.query(k, &BallQuery::untwisted(vec![FieldElement::zero(); m], 0))?;
    Ok(w)
}

impl Pullback {
    fn query(&self, k: &LocalField, q: &BallQuery) -> Result<MotivicScalar> {
        let p = self.u.p;
        let mx = q.dim() as i64;
        let my = self.map.len() as i64;
        let alpha = q.radius;
        let c: Vec<FieldElement> = q.center.iter().map(|x| x.head(alpha)).collect::<Result<_>>()?;
        let zeta: Vec<FieldElement> = q.freq.iter().map(|x| x.head(1 - alpha)).collect::<Result<_>>()?;
        // folded phase of the canonical query
        let fold = {
            let hi: Vec<FieldElement> = q.freq.iter().map(|x| x.tail(1 - alpha)).collect();
            k.pairing_exponent(&c, &hi)? as i64
        };

        let fc = self.map.iter().map(|g| g.eval(k, &c)).collect::<Result<Vec<_>>>()?;
        let r_y = match self.data.r_y {
            Some(r) => r,
            None => self
                .map
                .iter()
                .filter_map(|g| g.variation_lower(k, &c, alpha))
                .min()
                .unwrap_or(alpha),
        };
        let y0 = fc.iter().map(|y| y.head(r_y)).collect::<Result<Vec<_>>>()?;
        let top = 1 - r_y;

        let mut bounds = Vec::new();
        match self.u.freq_support(k, &y0, r_y)? {
            Some(i64::MAX) => return Ok(MotivicScalar::zero(p)),
            Some(s) => bounds.push(s),
            None => {}
        }
        if self.diagonal {
            if let Kind::Tensor(a, b) = &*self.u.kind {
                let h = a.m;
                let sa = a.freq_support(k, &y0[..h], r_y)?;
                let sb = b.freq_support(k, &y0[h..], r_y)?;
                if let Some(s) = [sa, sb].into_iter().flatten().min() {
                    if s == i64::MAX {
                        return Ok(MotivicScalar::zero(p));
                    }
                    // ξ + η ∈ ζ + B_{1−α} wherever the x-integral survives
                    bounds.push(s.min(min_ord(&zeta)?).min(1 - alpha));
                }
            }
        }
        if let Some(nd) = self.data.n_delta {
            let nr = match self.data.n_r {
                Some(r) => r,
                None => {
                    let mut radii = vec![alpha; mx as usize];
                    radii.extend(std::iter::repeat(alpha).take(mx as usize));
                    let mut lo = self.data.n_r_cap;
                    for g in &self.map {
                        for row in g.taylor_remainder(k) {
                            for r in row {
                                if let Some(b) = r.newton_lower_radii(&radii) {
                                    lo = lo.min(b);
                                }
                            }
                        }
                    }
                    lo
                }
            };
            let plus = if zeta.iter().all(|z| z.is_zero()) {
                alpha
            } else {
                alpha.max(1 - min_ord(&zeta)?)
            };
            let a = (nd - nr + 1).max(plus);
            bounds.push(-a - nd);
        }
        if let Some(b) = self.data.xi_bound {
            bounds.push(b);
        }
        let l = bounds.into_iter().min().ok_or_else(|| {
            Error::Precondition(format!(
                "no frequency bound for the pull-back at {}: the localized distribution has unbounded \
                 frequencies and no oscillatory data excludes them",
                q.format(k)
            ))
        })?;
        let l = l.min(top);

        let base = vec![FieldElement::zero(); my as usize];
        let term = |xi: &[FieldElement]| -> Result<MotivicScalar> {
            let uq = self.u.query(k, &BallQuery::new(y0.clone(), r_y, xi.to_vec()))?;
            if uq.is_zero() {
                return Ok(uq);
            }
            let mut phase = Poly::zero(mx as usize);
            for (i, z) in zeta.iter().enumerate() {
                phase = phase.add(k, &Poly::var(mx as usize, i).scale(k, z));
            }
            for (g, x) in self.map.iter().zip(xi) {
                phase = phase.sub(k, &g.scale(k, x));
            }
            let j = ball_integral(k, &Integrand::phase(phase), &c, alpha)?;
            Ok(uq.mul(&j))
        };

        k.check_budget(k.coset_count(my as usize, l - self.data.check_shells as i64, top))?;
        let mut acc = MotivicScalar::zero(p);
        for xi in k.coset_reps(&base, l, top)? {
            acc.add_assign(&term(&xi)?);
        }
        for s in 1..=self.data.check_shells as i64 {
            let shell = l - s;
            for xi in k.coset_reps(&base, shell, top)? {
                if min_ord(&xi)? != shell {
                    continue;
                }
                let v = term(&xi)?;
                if !v.is_zero() {
                    return Err(Error::DataViolation {
                        msg: format!(
                            "pull-back integrand does not vanish below the frequency bound {l} for {}",
                            q.format(k)
                        ),
                        witness: format!("xi = {:?}", k.format_vec(&xi)),
                    });
                }
            }
        }
        Ok(acc
            .mul_l_pow(-my * top + my - mx)
            .mul_zeta_pow(fold))
    }
}

/// A family of distributions indexed by a finite parameter set {0, …, n−1}.
#[derive(Clone, Debug)]
pub struct ParamFamily {
    pub members: Vec<Distribution>,
}

impl ParamFamily {
    pub fn new(members: Vec<Distribution>) -> Result<Self> {
        if let Some(u) = members.first() {
            if let Some(v) = members.iter().find(|v| v.m != u.m || v.p != u.p) {
                return Err(Error::MismatchedDimension(u.m, v.m));
            }
        }
        Ok(ParamFamily { members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Reindexing along map: W → W', with W = {0, …, map.len()−1}.
pub fn param_pullback(map: &[usize], fam: &ParamFamily) -> Result<ParamFamily> {
    let members = map
        .iter()
        .map(|&j| {
            fam.members
                .get(j)
                .cloned()
                .ok_or_else(|| Error::invalid(format!("parameter {j} out of range")))
        })
        .collect::<Result<_>>()?;
    Ok(ParamFamily { members })
}

/// Fibre sums along map: W → W' = {0, …, target−1}.
pub fn param_pushforward(map: &[usize], target: usize, fam: &ParamFamily) -> Result<ParamFamily> {
    if map.len() != fam.len() {
        return Err(Error::MismatchedDimension(fam.len(), map.len()));
    }
    let (p, m) = match fam.members.first() {
        Some(u) => (u.p, u.m),
        None => return Ok(ParamFamily { members: Vec::new() }),
    };
    let mut fibres = vec![Vec::new(); target];
    for (w, &j) in map.iter().enumerate() {
        fibres
            .get_mut(j)
            .ok_or_else(|| Error::invalid(format!("parameter {j} out of range")))?
            .push(fam.members[w].clone());
    }
    let members = fibres
        .into_iter()
        .map(|parts| Distribution::sum(p, m, parts))
        .collect::<Result<_>>()?;
    Ok(ParamFamily { members })
}

/// Outcome of a Paley-Wiener reconstruction.
#[derive(Clone, Debug)]
pub struct PaleyWiener {
    /// ξ ↦ ⟨u, φ Ψ(⟨·,ξ⟩)⟩ on B_support written on cosets of B_depth
    pub reconstruction: SbFunction,
    pub verdict: bool,
    pub witness: Option<String>,
}

/// Reconstructs u_φ(ξ) = ⟨u, φ Ψ(⟨·,ξ⟩)⟩ on B_support at the given depth,
/// checks that it vanishes on the next shell out, and compares
/// ⟨F̄u_φ, ψ⟩ with ⟨L^{−m} φ u, ψ⟩ on the battery.
pub fn paley_wiener_check(
    k: &LocalField,
    u: &Distribution,
    phi: &SbFunction,
    support: i64,
    depth: i64,
    battery: &[BallQuery],
) -> Result<PaleyWiener> {
    let m = u.m;
    if phi.dim() != m {
        return Err(Error::MismatchedDimension(m, phi.dim()));
    }
    if depth < support {
        return Err(Error::Precondition(format!("depth {depth} below support bound {support}")));
    }
    let zero = vec![FieldElement::zero(); m];
    let value = |xi: &[FieldElement]| u.pair(k, &phi.twist(k, xi)?);
    k.check_budget(k.coset_count(m, support - 1, depth + 1))?;

    let mut terms = Vec::new();
    let mut witness = None;
    for xi in k.coset_reps(&zero, support, depth)? {
        let v = value(&xi)?;
        // one deeper sample per coset
        let probe: Vec<FieldElement> = xi
            .iter()
            .map(|x| k.add(x, &FieldElement::t_pow(depth)))
            .collect();
        if !same_at_q(k, &value(&probe)?, &v)? {
            return Err(Error::Unstable {
                depth,
                coset: format!("{:?}", k.format_vec(&xi)),
            });
        }
        if !v.is_zero() {
            terms.push(crate::schwartz::SbTerm::new(v, xi, depth, zero.clone()));
        }
    }
    for xi in k.coset_reps(&zero, support - 1, depth)? {
        if min_ord(&xi)? != support - 1 {
            continue;
        }
        let v = value(&xi)?;
        if !v.is_zero() {
            witness = Some(format!("u_phi({:?}) = {v}", k.format_vec(&xi)));
            break;
        }
    }
    let reconstruction = SbFunction::new(k, m, terms)?;
    if witness.is_some() {
        return Ok(PaleyWiener {
            reconstruction,
            verdict: false,
            witness,
        });
    }
    let back = reconstruction.fourier(k)?.reflect(k)?;
    let lm = MotivicScalar::l_pow(u.p, -(m as i64));
    for psi in battery {
        let psi_sb = psi.to_sb(k)?;
        let lhs = back.multiply(k, &psi_sb)?.integrate();
        let rhs = u.pair(k, &phi.multiply(k, &psi_sb)?)?.mul(&lm);
        if !same_at_q(k, &lhs, &rhs)? {
            witness = Some(format!("{}: {lhs} vs {rhs}", psi.format(k)));
            break;
        }
    }
    Ok(PaleyWiener {
        reconstruction,
        verdict: witness.is_none(),
        witness,
    })
}
