//! Parallel transport of relative super connections along paths, super-time
//! transport, gauge and reparametrization covariance, and odd flows.
//!
//! Paths and pulled-back connections are superfields whose even variable 0
//! is the time `t`; their generator indices are those of the chart, so the
//! σ-dependence of a holonomy is carried exactly by the Grassmann arithmetic
//! while the body is integrated numerically.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::forms::{self, Chart, LieValuedForm, SuperForm, VectorField};
use crate::grassmann::{substitute_generators, GenTag, GrassmannNumber};
use crate::poly::{FormKey, Poly, Ring};
use crate::scalar::Scalar;
use crate::superfield::{self, Superfield};
use crate::superlie::{self, SuperLieAlgebra};
use crate::superlinalg::{lift, mexp, minv, SuperMatrix};

pub type G<S> = GrassmannNumber<S>;
pub type GMatrix<S> = SuperMatrix<G<S>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Rk4,
    ProductExponential,
    Magnus2,
}

impl Method {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "rk4" => Ok(Method::Rk4),
            "product-exponential" | "prodexp" => Ok(Method::ProductExponential),
            "magnus2" | "magnus" => Ok(Method::Magnus2),
            _ => Err(Error::Unknown(format!("method '{s}' (rk4, product-exponential, magnus2)"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Rk4 => "rk4",
            Method::ProductExponential => "product-exponential",
            Method::Magnus2 => "magnus2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Solver {
    pub steps: usize,
    pub method: Method,
}

impl Default for Solver {
    fn default() -> Self {
        Solver { steps: 1000, method: Method::Rk4 }
    }
}

/// Path `t ↦ (x^μ(t), θ^α(t))` on `[0,1]`, polynomial in `t` (variable 0)
/// with Grassmann coefficients in the chart's parametrizing generators.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSpec<S: Scalar> {
    pub x: Vec<Superfield<S>>,
    pub theta: Vec<Superfield<S>>,
}

impl<S: Scalar> PathSpec<S> {
    pub fn validate(&self, chart: &Chart) -> Result<()> {
        if self.x.len() != chart.m() || self.theta.len() != chart.n() {
            return Err(Error::Arity { expected: chart.dim(), got: self.x.len() + self.theta.len() });
        }
        let coord = chart.gens.mask_of(GenTag::Coordinate);
        for (i, f) in self.x.iter().chain(&self.theta).enumerate() {
            if superfield::n_vars(f) > 1 {
                return Err(Error::Dim("path components may only depend on t".into()));
            }
            if f.terms().iter().any(|(m, _)| m.g & coord != 0 || m.g & !chart.gens.mask() != 0) {
                return Err(Error::Parity("path coefficients must lie in the parametrizing generators".into()));
            }
            let want = (i >= chart.m()) as u8;
            if !f.has_parity(want) {
                return Err(Error::Parity(format!("path component {i} must have parity {want}")));
            }
        }
        Ok(())
    }

    /// Straight line between body points with a constant odd part.
    pub fn line(from: &[S], to: &[S], theta: Vec<Superfield<S>>) -> Self {
        let t: Superfield<S> = superfield::var(0);
        let x = from
            .iter()
            .zip(to)
            .map(|(a, b)| &Poly::scalar(a.clone()) + &t.scale(&b.sub(a)))
            .collect();
        PathSpec { x, theta }
    }

    /// Substitutes `t ↦ a + (b − a)t`.
    pub fn restrict(&self, a: &S, b: &S) -> Result<Self> {
        let t: Superfield<S> = superfield::var(0);
        let img = &Poly::scalar(a.clone()) + &t.scale(&b.sub(a));
        let sub = |f: &Superfield<S>| superfield::compose(f, std::slice::from_ref(&img), &[]);
        Ok(PathSpec {
            x: self.x.iter().map(sub).collect::<Result<_>>()?,
            theta: self.theta.iter().map(sub).collect::<Result<_>>()?,
        })
    }

    pub fn reversed(&self) -> Result<Self> {
        self.restrict(&S::one(), &S::zero())
    }

    /// Point `(x(t), θ(t))` as Grassmann numbers.
    pub fn eval(&self, t: &S) -> (Vec<G<S>>, Vec<G<S>>) {
        let tv = [t.clone()];
        (
            self.x.iter().map(|f| superfield::eval_vars(f, &tv)).collect(),
            self.theta.iter().map(|f| superfield::eval_vars(f, &tv)).collect(),
        )
    }

    pub fn substitute(&self, lam: &[Option<Superfield<S>>]) -> Result<Self> {
        let sub = |f: &Superfield<S>| superfield::compose(f, &[], lam);
        Ok(PathSpec {
            x: self.x.iter().map(sub).collect::<Result<_>>()?,
            theta: self.theta.iter().map(sub).collect::<Result<_>>()?,
        })
    }
}

/// Connection, path and solver settings for one transport.
#[derive(Clone, Debug)]
pub struct TransportProblem<S: Scalar> {
    pub chart: Chart,
    pub connection: LieValuedForm<S>,
    pub path: PathSpec<S>,
    pub solver: Solver,
}

/// Holonomy `g(1)` with trajectory samples and diagnostics.
#[derive(Clone, Debug)]
pub struct TransportResult<S: Scalar> {
    pub g: GMatrix<S>,
    pub samples: Vec<(f64, GMatrix<S>)>,
    pub solver: Solver,
    pub diagnostics: BTreeMap<String, f64>,
}

impl<S: Scalar> TransportResult<S> {
    pub fn to_json(&self, chart: &Chart) -> Value {
        json!({
            "holonomy": matrix_to_json(&self.g, chart),
            "method": self.solver.method.name(),
            "steps": self.solver.steps,
            "samples": self.samples.iter().map(|(t, g)| json!({"t": t, "g": matrix_to_json(g, chart)})).collect::<Vec<_>>(),
            "diagnostics": self.diagnostics,
        })
    }
}

pub fn matrix_to_json<S: Scalar>(g: &GMatrix<S>, chart: &Chart) -> Value {
    g.to_json(|e| chart.gens.to_json(e))
}

/// Realization matrices of the algebra.
pub fn realization<S: Scalar>(alg: &SuperLieAlgebra<S>) -> Result<&[SuperMatrix<S>]> {
    alg.realization
        .as_deref()
        .ok_or_else(|| Error::Unknown(format!("{} has no matrix realization", alg.name)))
}

/// Grassmann envelope `M(Σ a^i ⊗ e_i)_{kl} = Σ (−1)^{|a^i||k|} a^i ρ(e_i)_{kl}`.
pub fn envelope<S: Scalar>(alg: &SuperLieAlgebra<S>, a: &[G<S>]) -> Result<GMatrix<S>> {
    let mats = realization(alg)?;
    let (p, q) = mats[0].dims();
    let mut out = GMatrix::<S>::zeros(p, q);
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        let par = ai.parity().ok_or_else(|| Error::Parity("envelope coefficient not homogeneous".into()))?;
        let m = SuperMatrix::from_fn(p, q, |k, l| {
            let e = mats[i].get(k, l);
            if e.is_zero() {
                return Poly::zero();
            }
            let v = ai.scale(e);
            if par & mats[i].index_parity(k) == 1 {
                v.neg()
            } else {
                v
            }
        });
        out = out.add(&m)?;
    }
    out.with_parity(0)
}

/// Pulled-back coefficients `𝒜^γ(t)^i = ẋ^μ 𝒜^i_μ(γ(t)) + θ̇^α 𝒜^i_α(γ(t))`
/// as superfields in `t`.
pub fn pullback<S: Scalar>(chart: &Chart, a: &LieValuedForm<S>, path: &PathSpec<S>) -> Result<Vec<Superfield<S>>> {
    path.validate(chart)?;
    let mut gens: Vec<Option<Superfield<S>>> = vec![None; chart.gens.len()];
    for (al, th) in path.theta.iter().enumerate() {
        gens[al] = Some(th.clone());
    }
    let dot: Vec<Superfield<S>> = path.x.iter().chain(&path.theta).map(|f| superfield::partial_x(f, 0)).collect();
    let mut out = Vec::with_capacity(a.alg.dim());
    for (i, ai) in a.comps.iter().enumerate() {
        if forms::degree(ai).is_some_and(|d| d != 1) && !ai.is_zero() {
            return Err(Error::Dim("connection must be a 1-form".into()));
        }
        let mut acc = Poly::zero();
        for j in 0..chart.dim() {
            if dot[j].is_zero() {
                continue;
            }
            let pj = forms::pairing(chart, &VectorField::coord(chart, j), ai);
            if pj.is_zero() {
                continue;
            }
            let c = superfield::compose(&pj, &path.x, &gens)?;
            acc = &acc + &(&dot[j] * &c);
        }
        if !acc.has_parity(a.alg.parity[i]) {
            return Err(Error::Parity(format!("pulled-back component {} is not even-valued", a.alg.labels[i])));
        }
        out.push(acc);
    }
    Ok(out)
}

fn time<S: Scalar>(k: usize, n: usize) -> S {
    S::from_ratio(k as i64, n as i64)
}

fn to_f64<S: Scalar>(t: &S) -> f64 {
    t.to_c64().re
}

/// Integrates `ġ = −M(t) g`, `g(0) = 1` on `[0,1]`, returning `g(1)`, up to
/// eleven samples and (optionally) every step.
pub fn solve_linear<S: Scalar>(
    m: &dyn Fn(&S) -> Result<GMatrix<S>>,
    dims: (usize, usize),
    solver: Solver,
    keep_all: bool,
) -> Result<(GMatrix<S>, Vec<(f64, GMatrix<S>)>, Vec<GMatrix<S>>)> {
    let n = solver.steps;
    if n == 0 {
        return Err(Error::Solver("step count must be positive".into()));
    }
    let (p, q) = dims;
    let mut g = GMatrix::<S>::identity(p, q);
    let h = S::from_ratio(1, n as i64);
    let half = S::from_ratio(1, 2);
    let every = (n / 10).max(1);
    let mut samples = vec![(0.0, g.clone())];
    let mut all = if keep_all { vec![g.clone()] } else { vec![] };
    let f = |t: &S, y: &GMatrix<S>| -> Result<GMatrix<S>> { Ok(m(t)?.mul(y)?.neg()) };
    for k in 0..n {
        let t0: S = time(k, n);
        g = match solver.method {
            Method::Rk4 => {
                let tm = t0.add(&h.mul(&half));
                let t1: S = time(k + 1, n);
                let hh = h.mul(&half);
                let k1 = f(&t0, &g)?;
                let k2 = f(&tm, &g.add(&k1.scale(&hh))?)?;
                let k3 = f(&tm, &g.add(&k2.scale(&hh))?)?;
                let k4 = f(&t1, &g.add(&k3.scale(&h))?)?;
                let incr = k1.add(&k2.scale(&S::from_i64(2)))?.add(&k3.scale(&S::from_i64(2)))?.add(&k4)?;
                g.add(&incr.scale(&h.mul(&S::from_ratio(1, 6))))?
            }
            Method::ProductExponential => {
                let e = mexp(&m(&t0)?.scale(&h.neg()), 60)?;
                e.mul(&g)?
            }
            Method::Magnus2 => {
                let tm = t0.add(&h.mul(&half));
                let e = mexp(&m(&tm)?.scale(&h.neg()), 60)?;
                e.mul(&g)?
            }
        };
        g = g.with_parity(0)?;
        if keep_all {
            all.push(g.clone());
        }
        if (k + 1) % every == 0 || k + 1 == n {
            samples.push((to_f64(&time::<S>(k + 1, n)), g.clone()));
        }
    }
    Ok((g, samples, all))
}

/// Solves `∂_t g = −𝒜^γ(t) g` with `g(0) = 1` in the algebra's realization.
pub fn transport_even<S: Scalar>(p: &TransportProblem<S>) -> Result<TransportResult<S>> {
    let alg = p.connection.alg.clone();
    let mats = realization(&alg)?;
    let dims = mats[0].dims();
    let a = pullback(&p.chart, &p.connection, &p.path)?;
    let m = |t: &S| -> Result<GMatrix<S>> {
        let tv = [t.clone()];
        let coeffs: Vec<G<S>> = a.iter().map(|f| superfield::eval_vars(f, &tv)).collect();
        envelope(&alg, &coeffs)
    };
    let (g, samples, _) = solve_linear(&m, dims, p.solver, false)?;
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("initial_identity".into(), samples[0].1.sub(&GMatrix::identity(dims.0, dims.1))?.max_abs());
    if let Some(gm) = &alg.invariant_matrix {
        // body of g must preserve G: gᵀˢ G g = G
        let b = g.map(|e| e.constant()).with_parity(0)?;
        let r = b.stranspose()?.mul(gm)?.mul(&b)?.sub(gm)?.max_abs();
        diagnostics.insert("body_group".into(), r);
    }
    Ok(TransportResult { g, samples, solver: p.solver, diagnostics })
}

/// Functoriality: for `δ` followed by `γ`, the transport along the
/// concatenation is `𝒫_γ ∘ 𝒫_δ`.
pub fn compose_transport<S: Scalar>(first: &TransportProblem<S>, second: &TransportProblem<S>) -> Result<TransportResult<S>> {
    let end = first.path.eval(&S::one());
    let start = second.path.eval(&S::zero());
    let gap = end
        .0
        .iter()
        .chain(&end.1)
        .zip(start.0.iter().chain(&start.1))
        .map(|(a, b)| a.sub(b).max_abs())
        .fold(0.0, f64::max);
    if gap > 1e-12 {
        return Err(Error::Endpoint(format!("paths do not meet (gap {gap:e})")));
    }
    first.connection.same_alg(&second.connection)?;
    let r1 = transport_even(first)?;
    let r2 = transport_even(second)?;
    let g = r2.g.mul(&r1.g)?;
    let mut samples = r1.samples.iter().map(|(t, m)| (t / 2.0, m.clone())).collect::<Vec<_>>();
    for (t, m) in r2.samples.iter().skip(1) {
        samples.push((0.5 + t / 2.0, m.mul(&r1.g)?));
    }
    let mut diagnostics = r1.diagnostics;
    for (k, v) in r2.diagnostics {
        let e = diagnostics.entry(k).or_insert(0.0);
        *e = e.max(v);
    }
    Ok(TransportResult { g, samples, solver: first.solver, diagnostics })
}

/// Generator substitution `λ` on forms: each coefficient's generator blade is
/// replaced by the product of the images.
pub fn substitute_form<S: Scalar>(w: &SuperForm<S>, lam: &[Option<Superfield<S>>]) -> Result<SuperForm<S>> {
    let mut out = Poly::zero();
    for (k, c) in w.terms() {
        let f: Superfield<S> = Poly::monomial(k.m, c.clone());
        let g = superfield::compose(&f, &[], lam)?;
        let word: SuperForm<S> = Poly::monomial(FormKey { m: Default::default(), ..*k }, S::one());
        out = &out + &(&forms::func(&g) * &word);
    }
    Ok(out)
}

/// Checks that `λ` only moves parametrizing generators into odd expressions
/// in parametrizing generators.
fn check_lambda<S: Scalar>(chart: &Chart, lam: &[Option<G<S>>]) -> Result<()> {
    let pm = chart.param_mask();
    for (i, im) in lam.iter().enumerate() {
        let Some(im) = im else { continue };
        if i >= chart.gens.len() || pm >> i & 1 == 0 {
            return Err(Error::Parity(format!("generator {i} is not a parametrizing generator")));
        }
        if !im.has_parity(1) {
            return Err(Error::Parity(format!("image of generator {i} is not odd")));
        }
        if im.terms().iter().any(|(b, _)| b.0 & !pm != 0) {
            return Err(Error::Parity(format!("image of generator {i} leaves the parametrizing generators")));
        }
    }
    Ok(())
}

fn lambda_superfields<S: Scalar>(lam: &[Option<G<S>>]) -> Vec<Option<Superfield<S>>> {
    lam.iter().map(|o| o.as_ref().map(superfield::from_grassmann)).collect()
}

/// `λ*` of a transport problem (connection and path).
pub fn reparametrize<S: Scalar>(p: &TransportProblem<S>, lam: &[Option<G<S>>]) -> Result<TransportProblem<S>> {
    check_lambda(&p.chart, lam)?;
    let ls = lambda_superfields(lam);
    let comps = p.connection.comps.iter().map(|w| substitute_form(w, &ls)).collect::<Result<_>>()?;
    Ok(TransportProblem {
        chart: p.chart.clone(),
        connection: LieValuedForm::new(p.connection.alg.clone(), comps)?,
        path: p.path.substitute(&ls)?,
        solver: p.solver,
    })
}

/// `λ*` applied entrywise to a holonomy.
pub fn substitute_matrix<S: Scalar>(g: &GMatrix<S>, lam: &[Option<G<S>>]) -> Result<GMatrix<S>> {
    g.try_map(|e| substitute_generators(e, lam))
}

/// Max coefficient difference between `λ*(transport(𝒜,γ))` and
/// `transport(λ*𝒜, λ*γ)`.
pub fn reparametrization_residual<S: Scalar>(p: &TransportProblem<S>, lam: &[Option<G<S>>]) -> Result<f64> {
    let a = substitute_matrix(&transport_even(p)?.g, lam)?;
    let b = transport_even(&reparametrize(p, lam)?)?.g;
    Ok(a.sub(&b)?.max_abs())
}

/// Gauge map `σ_f = exp(Z_c) · exp(Z_n)`: a constant body element `Z_c`
/// (numbers on even generators) and a nilpotent superfield part `Z_n`.
#[derive(Clone, Debug)]
pub struct GaugeMap<S: Scalar> {
    pub constant: Vec<S>,
    pub nilpotent: Vec<Superfield<S>>,
}

impl<S: Scalar> GaugeMap<S> {
    pub fn identity(alg: &SuperLieAlgebra<S>) -> Self {
        GaugeMap { constant: vec![S::zero(); alg.dim()], nilpotent: vec![Poly::zero(); alg.dim()] }
    }

    fn validate(&self, alg: &SuperLieAlgebra<S>) -> Result<()> {
        if self.constant.len() != alg.dim() || self.nilpotent.len() != alg.dim() {
            return Err(Error::Arity { expected: alg.dim(), got: self.constant.len().min(self.nilpotent.len()) });
        }
        for i in 0..alg.dim() {
            if alg.parity[i] == 1 && !self.constant[i].is_zero() {
                return Err(Error::Parity(format!("constant part on odd generator {}", alg.labels[i])));
            }
            let z = &self.nilpotent[i];
            if !z.has_parity(alg.parity[i]) {
                return Err(Error::Parity(format!("gauge coordinate of {} has the wrong parity", alg.labels[i])));
            }
            if z.terms().iter().any(|(m, _)| m.g == 0) {
                return Err(Error::NotInvertible("nilpotent gauge part has a body".into()));
            }
        }
        Ok(())
    }

    /// `exp(−ad_{Z_c})` as a numeric matrix.
    fn ad_inverse(&self, alg: &SuperLieAlgebra<S>) -> Result<Vec<Vec<S>>> {
        let n = alg.dim();
        let mut ad = vec![vec![S::zero(); n]; n];
        for (i, c) in self.constant.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = alg.ad_matrix(i);
            for r in 0..n {
                for s in 0..n {
                    ad[r][s].add_assign(&m[r][s].mul(c).neg());
                }
            }
        }
        let am = SuperMatrix::from_fn(n, 0, |r, s| ad[r][s].clone()).with_parity(0)?;
        if S::is_exact() {
            let mut pw = am.clone();
            for _ in 0..n {
                pw = pw.mul(&am)?;
            }
            if !pw.is_zero() {
                return Err(Error::Solver("exact backends need a nilpotent constant gauge part".into()));
            }
        }
        let e = mexp(&lift::<crate::poly::Blade, S>(&am), 4 * n + 8)?;
        Ok((0..n).map(|r| (0..n).map(|s| e.get(r, s).constant()).collect()).collect())
    }

    /// `σ_f` at a point of the chart, in the realization.
    pub fn matrix_at(&self, alg: &SuperLieAlgebra<S>, x: &[G<S>], theta: &[G<S>]) -> Result<GMatrix<S>> {
        let odd: Vec<usize> = (0..theta.len()).collect();
        let zn: Vec<G<S>> = self
            .nilpotent
            .iter()
            .map(|f| superfield::eval_superfield(f, x, &odd, theta))
            .collect::<Result<_>>()?;
        let zc: Vec<G<S>> = self.constant.iter().map(|c| Poly::scalar(c.clone())).collect();
        let ec = mexp(&envelope(alg, &zc)?, 200)?;
        let en = mexp(&envelope(alg, &zn)?, 64)?;
        ec.mul(&en)
    }
}

/// `f*𝒜 = Ad_{σ_f⁻¹} ∘ 𝒜 + σ_f^* θ_MC`.
pub fn gauge_transform<S: Scalar>(chart: &Chart, a: &LieValuedForm<S>, gauge: &GaugeMap<S>) -> Result<LieValuedForm<S>> {
    let alg = a.alg.clone();
    gauge.validate(&alg)?;
    let e = gauge.ad_inverse(&alg)?;
    let n = alg.dim();
    let mut comps = vec![Poly::zero(); n];
    for k in 0..n {
        for j in 0..n {
            if !e[k][j].is_zero() && !a.comps[j].is_zero() {
                comps[k] = &comps[k] + &a.comps[j].scale(&e[k][j]);
            }
        }
    }
    let mid = LieValuedForm::new(alg.clone(), comps)?;
    if gauge.nilpotent.iter().all(Poly::is_zero) {
        return Ok(mid);
    }
    let steps = chart.gens.len() + 2;
    superlie::extend_to_ehresmann(&mid, chart, &gauge.nilpotent, u32::MAX, steps)
}

/// Gauge covariance: `𝒫(f*𝒜) = σ_f(γ(1))⁻¹ 𝒫(𝒜) σ_f(γ(0))`; returns the max
/// coefficient residual.
pub fn gauge_residual<S: Scalar>(p: &TransportProblem<S>, gauge: &GaugeMap<S>) -> Result<f64> {
    let g = transport_even(p)?.g;
    let ga = gauge_transform(&p.chart, &p.connection, gauge)?;
    let q = TransportProblem { connection: ga, ..p.clone() };
    let gp = transport_even(&q)?.g;
    let alg = &p.connection.alg;
    let (x0, t0) = p.path.eval(&S::zero());
    let (x1, t1) = p.path.eval(&S::one());
    let s0 = gauge.matrix_at(alg, &x0, &t0)?;
    let s1 = gauge.matrix_at(alg, &x1, &t1)?;
    let want = minv(&s1, None)?.mul(&g)?.mul(&s0)?;
    Ok(gp.sub(&want)?.max_abs())
}

/// Super-time data `𝒜^γ(t,θ) = a₀(t) + θ a₁(t)` as realization matrices with
/// superfield entries in `t` (variable 0).
#[derive(Clone, Debug)]
pub struct SuperTimeProblem<S: Scalar> {
    pub a0: SuperMatrix<Superfield<S>>,
    pub a1: SuperMatrix<Superfield<S>>,
    pub solver: Solver,
}

#[derive(Clone, Debug)]
pub struct SuperTimeResult<S: Scalar> {
    pub g0: GMatrix<S>,
    pub g1: GMatrix<S>,
    /// `g₀` at every step.
    pub trajectory: Vec<GMatrix<S>>,
}

fn entry_parity_offset<T: Ring>(m: &SuperMatrix<T>) -> Option<u8> {
    let n = m.n();
    let mut p = None;
    for i in 0..n {
        for j in 0..n {
            let e = m.get(i, j);
            if e.is_zero() {
                continue;
            }
            let q = (e.parity()? + m.index_parity(i) + m.index_parity(j)) & 1;
            match p {
                None => p = Some(q),
                Some(r) if r != q => return None,
                _ => {}
            }
        }
    }
    Some(p.unwrap_or(1))
}

fn eval_matrix<S: Scalar>(m: &SuperMatrix<Superfield<S>>, t: &S) -> GMatrix<S> {
    let tv = [t.clone()];
    m.map(|f| superfield::eval_vars(f, &tv))
}

/// Solves `𝒟g = −𝒜^γ g` for `g = g₀ + θ g₁`: `g₁ = −a₀g₀` and
/// `g₀′ = −(a₁ − 𝔠(a₀)a₀) g₀`, with `𝔠` the entrywise grade involution.
pub fn transport_super_time<S: Scalar>(p: &SuperTimeProblem<S>) -> Result<SuperTimeResult<S>> {
    if p.a0.dims() != p.a1.dims() {
        return Err(Error::Dim("a0 and a1 differ in shape".into()));
    }
    if entry_parity_offset(&p.a0) != Some(1) && !p.a0.is_zero() {
        return Err(Error::Parity("a0 must be an odd matrix".into()));
    }
    if entry_parity_offset(&p.a1) != Some(0) && !p.a1.is_zero() {
        return Err(Error::Parity("a1 must be an even matrix".into()));
    }
    let m = |t: &S| -> Result<GMatrix<S>> {
        let a0 = eval_matrix(&p.a0, t);
        let a1 = eval_matrix(&p.a1, t);
        a1.sub(&a0.map(Ring::involute).mul(&a0)?)
    };
    let (g0, _, trajectory) = solve_linear(&m, p.a0.dims(), p.solver, true)?;
    let g1 = eval_matrix(&p.a0, &S::one()).mul(&g0)?.neg();
    Ok(SuperTimeResult { g0, g1, trajectory })
}

/// Residual of `𝒟G + 𝒜^γ G = 0` with `G = g₀ + θg₁` built on the extra
/// generator `theta_gen`, at interior steps; `g₀′` from a sixth-order central
/// difference of the trajectory with stride `stride`.
pub fn super_time_residual<S: Scalar>(p: &SuperTimeProblem<S>, r: &SuperTimeResult<S>, theta_gen: usize, stride: usize) -> Result<f64> {
    let n = p.solver.steps;
    let th: G<S> = crate::grassmann::generator(theta_gen);
    let h = S::from_ratio(stride as i64, n as i64);
    let w = [(-3i64, -1i64), (-2, 9), (-1, -45), (1, 45), (2, -9), (3, 1)];
    let mut res: f64 = 0.0;
    let mut k = 3 * stride;
    while k + 3 * stride <= n {
        let t: S = time(k, n);
        let a0 = eval_matrix(&p.a0, &t);
        let a1 = eval_matrix(&p.a1, &t);
        let g0 = &r.trajectory[k];
        let g1 = a0.mul(g0)?.neg();
        let mut d = GMatrix::<S>::zeros(g0.dims().0, g0.dims().1);
        for (o, c) in w {
            let idx = (k as i64 + o * stride as i64) as usize;
            d = d.add(&r.trajectory[idx].scale(&S::from_i64(c)))?;
        }
        let inv = h.mul(&S::from_i64(60)).inv().ok_or_else(|| Error::Solver("zero stride".into()))?;
        let dg0 = d.scale(&inv);
        // 𝒟G = g₁ + θ g₀′
        let dg = g1.add(&dg0.lmul(&th))?;
        let a = a0.add(&a1.lmul(&th))?;
        let gg = g0.add(&g1.lmul(&th))?;
        res = res.max(dg.add(&a.mul(&gg)?)?.max_abs());
        k += stride;
    }
    Ok(res)
}

/// Pullback of the coordinate functions under the odd flow of `X`:
/// `φ^*(z) = e^{tY} z + θ X(e^{tY} z)` with `Y = ½[X,X] = X²`, where `t` is
/// even variable `t_var` and `θ` generator `theta_gen`. Errors when
/// `Σ tᵏ/k! Yᵏ z` does not terminate within `max_order`.
pub fn odd_flow<S: Scalar>(chart: &Chart, x: &VectorField<S>, t_var: usize, theta_gen: usize, max_order: usize) -> Result<Vec<Superfield<S>>> {
    if x.parity(chart) != Some(1) {
        return Err(Error::Parity("odd flow needs an odd vector field".into()));
    }
    if t_var < chart.m() || t_var >= crate::poly::MAX_EVEN {
        return Err(Error::Dim("flow time must be a fresh even variable".into()));
    }
    if theta_gen < chart.n() || theta_gen >= chart.gens.len() {
        return Err(Error::Dim("flow parameter must be a parametrizing generator".into()));
    }
    let th: Superfield<S> = superfield::gen(theta_gen);
    let t: Superfield<S> = superfield::var(t_var);
    (0..chart.dim())
        .map(|j| {
            let z = chart.coord::<S>(j);
            let mut e = z.clone();
            let mut term = z;
            let mut tk: Superfield<S> = Poly::one();
            let mut done = false;
            for k in 1..=max_order {
                term = x.apply(chart, &x.apply(chart, &term));
                if term.is_zero() {
                    done = true;
                    break;
                }
                tk = (&tk * &t).scale(&S::from_ratio(1, k as i64));
                e = &e + &(&tk * &term);
            }
            if !done {
                return Err(Error::Solver("odd flow series does not terminate on this chart".into()));
            }
            Ok(&e + &(&th * &x.apply(chart, &e)))
        })
        .collect()
}

/// `φ^* f` for any superfield, by substituting the flow coordinates.
pub fn pull_back_by_flow<S: Scalar>(chart: &Chart, flow: &[Superfield<S>], f: &Superfield<S>) -> Result<Superfield<S>> {
    let m = chart.m();
    let mut gens: Vec<Option<Superfield<S>>> = vec![None; chart.gens.len()];
    for a in 0..chart.n() {
        gens[a] = Some(flow[m + a].clone());
    }
    superfield::compose(f, &flow[..m], &gens)
}

/// Residual of `𝒟 ∘ φ^* = φ^* ∘ X` on the coordinate functions.
pub fn odd_flow_residual<S: Scalar>(chart: &Chart, x: &VectorField<S>, flow: &[Superfield<S>], t_var: usize, theta_gen: usize) -> Result<f64> {
    let th: Superfield<S> = superfield::gen(theta_gen);
    let mut r: f64 = 0.0;
    for (j, fj) in flow.iter().enumerate() {
        let d = &superfield::partial_gen(fj, theta_gen) + &(&th * &superfield::partial_x(fj, t_var));
        let xz = x.apply(chart, &chart.coord(j));
        let rhs = pull_back_by_flow(chart, flow, &xz)?;
        r = r.max((&d - &rhs).max_abs());
    }
    // initial condition φ_(0,0) = id
    let zero_t: Vec<Superfield<S>> = (0..=t_var).map(|i| if i == t_var { Poly::zero() } else { superfield::var(i) }).collect();
    let mut gens: Vec<Option<Superfield<S>>> = vec![None; chart.gens.len()];
    gens[theta_gen] = Some(Poly::zero());
    for (j, fj) in flow.iter().enumerate() {
        let at0 = superfield::compose(fj, &zero_t, &gens)?;
        r = r.max((&at0 - &chart.coord(j)).max_abs());
    }
    Ok(r)
}

/// Residual of `φ_(t,θ) ∘ φ_(s,η) = φ_(t+s+θη, θ+η)`, with `(s, η)` given
/// as a second fresh even variable and generator.
pub fn odd_flow_composition_residual<S: Scalar>(
    chart: &Chart,
    x: &VectorField<S>,
    (t_var, theta_gen): (usize, usize),
    (s_var, eta_gen): (usize, usize),
    max_order: usize,
) -> Result<f64> {
    let ft = odd_flow(chart, x, t_var, theta_gen, max_order)?;
    let fs = odd_flow(chart, x, s_var, eta_gen, max_order)?;
    let m = chart.m();
    // point composition: substitute the inner flow into the outer one
    let mut gens: Vec<Option<Superfield<S>>> = vec![None; chart.gens.len()];
    for a in 0..chart.n() {
        gens[a] = Some(fs[m + a].clone());
    }
    let nvars = t_var.max(s_var) + 1;
    let mut even: Vec<Superfield<S>> = (0..nvars).map(superfield::var).collect();
    even[..m].clone_from_slice(&fs[..m]);
    let lhs: Vec<Superfield<S>> = ft.iter().map(|f| superfield::compose(f, &even, &gens)).collect::<Result<_>>()?;
    // group product (t,θ)·(s,η) = (t+s+θη, θ+η)
    let th: Superfield<S> = superfield::gen(theta_gen);
    let eta: Superfield<S> = superfield::gen(eta_gen);
    let mut even2: Vec<Superfield<S>> = (0..nvars).map(superfield::var).collect();
    even2[t_var] = &(&superfield::var(t_var) + &superfield::var(s_var)) + &(&th * &eta);
    let mut gens2: Vec<Option<Superfield<S>>> = vec![None; chart.gens.len()];
    gens2[theta_gen] = Some(&th + &eta);
    let rhs: Vec<Superfield<S>> = ft.iter().map(|f| superfield::compose(f, &even2, &gens2)).collect::<Result<_>>()?;
    Ok(lhs.iter().zip(&rhs).map(|(a, b)| (a - b).max_abs()).fold(0.0, f64::max))
}

/// Even transport problem with a constant connection `𝒜 = Σ c_i e_i dx⁰` on
/// a one-dimensional chart along `x⁰ = t`.
pub fn constant_problem<S: Scalar>(alg: Arc<SuperLieAlgebra<S>>, chart: &Chart, coeffs: &[Superfield<S>], solver: Solver) -> Result<TransportProblem<S>> {
    let dx: SuperForm<S> = chart.dz(0);
    let comps = coeffs.iter().map(|c| &forms::func(c) * &dx).collect();
    let mut from = vec![S::zero(); chart.m()];
    let mut to = vec![S::zero(); chart.m()];
    from[0] = S::zero();
    to[0] = S::one();
    Ok(TransportProblem {
        chart: chart.clone(),
        connection: LieValuedForm::new(alg, comps)?,
        path: PathSpec::line(&from, &to, vec![Poly::zero(); chart.n()]),
        solver,
    })
}
