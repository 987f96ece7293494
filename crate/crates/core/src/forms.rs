//! Super differential forms on a chart of S×M.
//!
//! A form is a sum of `f · dx_A · dθ^c` with superfield coefficient `f` on the
//! left, an increasing `dx` word and a `dθ` multiset. Signs use the bigrading
//! (form degree, Grassmann parity): passing `(p,a)` past `(q,b)` costs
//! `(−1)^{pq+ab}`. `d` has bidegree (1,0) and differentiates from the left;
//! `ι_{∂_j}` has bidegree (−1,|j|).

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::grassmann::{GenTag, GeneratorSet, DEFAULT_CAP};
use crate::poly::{FormKey, Mono, Poly, MAX_EVEN, MAX_ODD};
use crate::scalar::Scalar;
use crate::superfield::{self, Superfield};
use crate::superlie::SuperLieAlgebra;
use crate::superlinalg::{minv, SuperMatrix};

pub type SuperForm<S> = Poly<FormKey, S>;

/// Coordinate chart: even coordinates `x`, odd coordinates `θ` (the first
/// `n` generators) and parametrizing generators `σ` (the rest).
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub even: Vec<String>,
    pub odd: Vec<String>,
    pub gens: GeneratorSet,
    /// Box domain of the even coordinates, used when sampling points.
    pub domain: Vec<(f64, f64)>,
}

impl Chart {
    pub fn new(even: &[&str], odd: &[&str], params: &[&str]) -> Result<Self> {
        Self::with_cap(even, odd, params, DEFAULT_CAP)
    }

    pub fn with_cap(even: &[&str], odd: &[&str], params: &[&str], cap: usize) -> Result<Self> {
        if even.len() > MAX_EVEN {
            return Err(Error::Capacity(format!("at most {MAX_EVEN} even coordinates")));
        }
        if odd.len() > MAX_ODD {
            return Err(Error::Capacity(format!("at most {MAX_ODD} odd coordinates")));
        }
        let mut names: Vec<String> = odd.iter().map(|s| s.to_string()).collect();
        names.extend(params.iter().map(|s| s.to_string()));
        let mut tags = vec![GenTag::Coordinate; odd.len()];
        tags.extend(vec![GenTag::Parametrizing; params.len()]);
        for e in even {
            if names.iter().any(|n| n == e) || even.iter().filter(|x| *x == e).count() > 1 {
                return Err(Error::Unknown(format!("coordinate name '{e}' is not unique")));
            }
        }
        let gens = GeneratorSet::with_cap(names, tags, cap)?;
        Ok(Chart {
            even: even.iter().map(|s| s.to_string()).collect(),
            odd: odd.iter().map(|s| s.to_string()).collect(),
            gens,
            domain: vec![(-1.0, 1.0); even.len()],
        })
    }

    /// Chart with generated names `x0.., th0.., s1..`.
    pub fn standard(m: usize, n: usize, k: usize) -> Result<Self> {
        Self::standard_with_cap(m, n, k, DEFAULT_CAP)
    }

    pub fn standard_with_cap(m: usize, n: usize, k: usize, cap: usize) -> Result<Self> {
        let e: Vec<String> = (0..m).map(|i| format!("x{i}")).collect();
        let o: Vec<String> = (0..n).map(|i| format!("th{i}")).collect();
        let p: Vec<String> = (1..=k).map(|i| format!("s{i}")).collect();
        let e: Vec<&str> = e.iter().map(String::as_str).collect();
        let o: Vec<&str> = o.iter().map(String::as_str).collect();
        let p: Vec<&str> = p.iter().map(String::as_str).collect();
        Self::with_cap(&e, &o, &p, cap)
    }

    pub fn m(&self) -> usize {
        self.even.len()
    }

    pub fn n(&self) -> usize {
        self.odd.len()
    }

    pub fn k(&self) -> usize {
        self.gens.len() - self.odd.len()
    }

    /// Number of coordinates `m + n`.
    pub fn dim(&self) -> usize {
        self.m() + self.n()
    }

    /// Parity of coordinate `j` (even coordinates first).
    pub fn coord_parity(&self, j: usize) -> u8 {
        (j >= self.m()) as u8
    }

    /// Generator index of parameter `σ_i` (0-based).
    pub fn param(&self, i: usize) -> usize {
        self.n() + i
    }

    pub fn param_mask(&self) -> u32 {
        self.gens.mask_of(GenTag::Parametrizing)
    }

    /// Coordinate function `z^j`.
    pub fn coord<S: Scalar>(&self, j: usize) -> Superfield<S> {
        if j < self.m() {
            superfield::var(j)
        } else {
            superfield::gen(j - self.m())
        }
    }

    pub fn sigma<S: Scalar>(&self, i: usize) -> Superfield<S> {
        superfield::gen(self.param(i))
    }

    /// `dz^j` (a `dx` for even coordinates, a `dθ` for odd ones).
    pub fn dz<S: Scalar>(&self, j: usize) -> SuperForm<S> {
        let mut k = FormKey::default();
        if j < self.m() {
            k.dx = 1 << j;
        } else {
            k.dth[j - self.m()] = 1;
        }
        Poly::monomial(k, S::one())
    }

    pub fn coord_index(&self, name: &str) -> Result<usize> {
        if let Some(i) = self.even.iter().position(|e| e == name) {
            return Ok(i);
        }
        if let Some(i) = self.odd.iter().position(|e| e == name) {
            return Ok(self.m() + i);
        }
        Err(Error::Unknown(format!("coordinate '{name}'")))
    }
}

/// Embeds a superfield as a 0-form.
pub fn func<S: Scalar>(f: &Superfield<S>) -> SuperForm<S> {
    f.map_terms(|m, c| Some((FormKey::func(m), c.clone())))
}

/// Coefficient superfield of a 0-form (terms of positive degree ignored).
pub fn to_function<S: Scalar>(w: &SuperForm<S>) -> Superfield<S> {
    w.map_terms(|k, c| (k.degree() == 0).then(|| (k.m, c.clone())))
}

/// Homogeneous form degree (`None` if mixed, `Some(0)` for zero).
pub fn degree<S: Scalar>(w: &SuperForm<S>) -> Option<u32> {
    let mut d = None;
    for (k, _) in w.terms() {
        match d {
            None => d = Some(k.degree()),
            Some(e) if e != k.degree() => return None,
            _ => {}
        }
    }
    Some(d.unwrap_or(0))
}

/// Part of the given form degree.
pub fn degree_part<S: Scalar>(w: &SuperForm<S>, p: u32) -> SuperForm<S> {
    w.filter(|k| k.degree() == p)
}

fn basis_word<S: Scalar>(k: FormKey) -> SuperForm<S> {
    Poly::monomial(FormKey { m: Mono::default(), ..k }, S::one())
}

/// Exterior derivative with left derivatives; never differentiates in σ.
pub fn ext_d<S: Scalar>(chart: &Chart, w: &SuperForm<S>) -> SuperForm<S> {
    let mut out = Vec::new();
    let m = chart.m();
    for (k, c) in w.terms() {
        let f: Superfield<S> = Poly::monomial(k.m, c.clone());
        let word = basis_word::<S>(*k);
        for j in 0..chart.dim() {
            let df = if j < m { superfield::partial_x(&f, j) } else { superfield::partial_gen(&f, j - m) };
            if df.is_zero() {
                continue;
            }
            let t = &(&chart.dz::<S>(j) * &func(&df)) * &word;
            out.extend(t.into_terms());
        }
    }
    Poly::from_terms(out)
}

/// Vector field `X = Σ X^j ∂_j` (even coordinates first).
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField<S: Scalar> {
    pub comps: Vec<Superfield<S>>,
}

impl<S: Scalar> VectorField<S> {
    pub fn new(chart: &Chart, comps: Vec<Superfield<S>>) -> Result<Self> {
        if comps.len() != chart.dim() {
            return Err(Error::Arity { expected: chart.dim(), got: comps.len() });
        }
        Ok(VectorField { comps })
    }

    pub fn zero(chart: &Chart) -> Self {
        VectorField { comps: vec![Poly::zero(); chart.dim()] }
    }

    /// Coordinate field `∂_j`.
    pub fn coord(chart: &Chart, j: usize) -> Self {
        let mut v = Self::zero(chart);
        v.comps[j] = Poly::one();
        v
    }

    /// Parity `|X^j| + |j|`, if homogeneous.
    pub fn parity(&self, chart: &Chart) -> Option<u8> {
        let mut p = None;
        for (j, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = (c.parity()? + chart.coord_parity(j)) & 1;
            match p {
                None => p = Some(q),
                Some(r) if r != q => return None,
                _ => {}
            }
        }
        Some(p.unwrap_or(0))
    }

    pub fn add(&self, o: &Self) -> Self {
        VectorField { comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        VectorField { comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a - b).collect() }
    }

    /// `f X` for a superfield `f` on the left.
    pub fn lmul(&self, f: &Superfield<S>) -> Self {
        VectorField { comps: self.comps.iter().map(|c| f * c).collect() }
    }

    pub fn scale(&self, s: &S) -> Self {
        VectorField { comps: self.comps.iter().map(|c| c.scale(s)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().map(Poly::max_abs).fold(0.0, f64::max)
    }

    /// `X(f) = Σ X^j ∂_j f`.
    pub fn apply(&self, chart: &Chart, f: &Superfield<S>) -> Superfield<S> {
        let m = chart.m();
        let mut acc = Poly::zero();
        for (j, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let df = if j < m { superfield::partial_x(f, j) } else { superfield::partial_gen(f, j - m) };
            acc = &acc + &(c * &df);
        }
        acc
    }

    pub fn to_json(&self, chart: &Chart) -> Value {
        json!({"components": self.comps.iter().map(|c| superfield::to_json(c, chart.m(), &chart.gens)).collect::<Vec<_>>()})
    }
}

/// `[X,Y]^k = X(Y^k) − (−1)^{|X||Y|} Y(X^k)`.
pub fn vf_bracket<S: Scalar>(chart: &Chart, x: &VectorField<S>, y: &VectorField<S>) -> Result<VectorField<S>> {
    let px = x.parity(chart).ok_or_else(|| Error::Parity("X not homogeneous".into()))?;
    let py = y.parity(chart).ok_or_else(|| Error::Parity("Y not homogeneous".into()))?;
    let comps = (0..chart.dim())
        .map(|k| {
            let a = x.apply(chart, &y.comps[k]);
            let b = y.apply(chart, &x.comps[k]);
            if px & py == 1 {
                &a + &b
            } else {
                &a - &b
            }
        })
        .collect();
    Ok(VectorField { comps })
}

/// `ι_{∂_j}` on one basis term `f·w`.
fn interior_coord_term<S: Scalar>(chart: &Chart, j: usize, k: FormKey, c: &S) -> Option<(FormKey, S)> {
    let m = chart.m();
    let mut neg = false;
    let mut k2 = k;
    let coef;
    if j < m {
        if k.dx >> j & 1 == 0 {
            return None;
        }
        neg ^= (k.dx & ((1u16 << j) - 1)).count_ones() & 1 == 1;
        k2.dx &= !(1 << j);
        coef = c.clone();
    } else {
        let a = j - m;
        let e = k.dth[a];
        if e == 0 {
            return None;
        }
        // passing f (parity |f|) and the dx word
        neg ^= (k.m.g.count_ones() + k.dx.count_ones()) & 1 == 1;
        k2.dth[a] -= 1;
        coef = c.mul(&S::from_i64(e as i64));
    }
    Some((k2, if neg { coef.neg() } else { coef }))
}

/// Interior product `ι_X ω` (left, graded derivation).
pub fn interior<S: Scalar>(chart: &Chart, x: &VectorField<S>, w: &SuperForm<S>) -> SuperForm<S> {
    let mut out = Vec::new();
    for (j, xj) in x.comps.iter().enumerate() {
        if xj.is_zero() {
            continue;
        }
        let part: SuperForm<S> = w.map_terms(|k, c| interior_coord_term(chart, j, k, c));
        if part.is_zero() {
            continue;
        }
        out.extend((&func(xj) * &part).into_terms());
    }
    Poly::from_terms(out)
}

/// `L_X = d ι_X + ι_X d`.
pub fn lie_deriv<S: Scalar>(chart: &Chart, x: &VectorField<S>, w: &SuperForm<S>) -> SuperForm<S> {
    &ext_d(chart, &interior(chart, x, w)) + &interior(chart, x, &ext_d(chart, w))
}

/// Pairing `⟨X|ω⟩` of a vector field with a 1-form.
pub fn pairing<S: Scalar>(chart: &Chart, x: &VectorField<S>, w: &SuperForm<S>) -> Superfield<S> {
    to_function(&interior(chart, x, w))
}

/// Two-vector pairing `⟨X,Y|α⟩ := ι_X ι_Y α`.
pub fn pairing2<S: Scalar>(chart: &Chart, x: &VectorField<S>, y: &VectorField<S>, a: &SuperForm<S>) -> Superfield<S> {
    to_function(&interior(chart, x, &interior(chart, y, a)))
}

/// Expands a 1-form as `Σ_j ω_j dz^j` (coefficients on the left).
pub fn one_form_coeffs<S: Scalar>(chart: &Chart, w: &SuperForm<S>) -> Result<Vec<Superfield<S>>> {
    let mut out = vec![Poly::zero(); chart.dim()];
    for (k, c) in w.terms() {
        if k.degree() != 1 {
            return Err(Error::Dim("expected a 1-form".into()));
        }
        let j = if k.dx != 0 { k.dx.trailing_zeros() as usize } else { chart.m() + k.dth.iter().position(|&e| e == 1).unwrap() };
        out[j] = &out[j] + &Poly::monomial(k.m, c.clone());
    }
    Ok(out)
}

/// Left-dual coframe `⟨X_i|ω^j⟩ = δ_i^j` of a homogeneous frame. Entries
/// with even-variable dependence need a `jet` truncation order.
pub fn dual_coframe<S: Scalar>(chart: &Chart, frame: &[VectorField<S>], jet: Option<u32>) -> Result<Vec<SuperForm<S>>> {
    let n = chart.dim();
    if frame.len() != n {
        return Err(Error::Frame(format!("{} vectors for a {n}-dimensional chart", frame.len())));
    }
    let par: Vec<u8> = frame
        .iter()
        .map(|x| x.parity(chart).ok_or_else(|| Error::Frame("frame vector not homogeneous".into())))
        .collect::<Result<_>>()?;
    let a = SuperMatrix::from_fn(n, 0, |i, k| frame[i].comps[k].clone());
    let b = minv(&a, jet).map_err(|e| Error::Frame(e.to_string()))?;
    // ⟨X_i|ω^j⟩ = Σ_k X_i^k (−1)^{|k||ω^j_k|} ω^j_k with |ω^j_k| = |X_j| + |k|
    Ok((0..n)
        .map(|j| {
            let mut w = Poly::zero();
            for k in 0..n {
                let pk = chart.coord_parity(k);
                let e = b.get(k, j);
                let e = if pk & (par[j] + pk) & 1 == 1 { e.neg() } else { e.clone() };
                w = &w + &(&func(&e) * &chart.dz::<S>(k));
            }
            w
        })
        .collect())
}

/// Frame dual to a coframe of 1-forms: `⟨X_i|ω^j⟩ = δ_i^j`.
pub fn dual_frame<S: Scalar>(chart: &Chart, coframe: &[SuperForm<S>], jet: Option<u32>) -> Result<Vec<VectorField<S>>> {
    let n = chart.dim();
    if coframe.len() != n {
        return Err(Error::Frame(format!("{} forms for a {n}-dimensional chart", coframe.len())));
    }
    let coeffs: Vec<Vec<Superfield<S>>> = coframe.iter().map(|w| one_form_coeffs(chart, w)).collect::<Result<_>>()?;
    let par: Vec<u8> = coframe
        .iter()
        .map(|w| w.parity().ok_or_else(|| Error::Frame("coframe form not homogeneous".into())))
        .collect::<Result<_>>()?;
    // B_{kj} = (−1)^{|k||ω^j_k|} ω^j_k, X^k_i = (B^{-1})_{ik}
    let b = SuperMatrix::from_fn(n, 0, |k, j| {
        let pk = chart.coord_parity(k);
        // the 1-form ω^j has total Grassmann parity |ω^j_k| + |k|
        let pc = (par[j] + pk) & 1;
        let e = &coeffs[j][k];
        if pk & pc == 1 {
            e.neg()
        } else {
            e.clone()
        }
    });
    let a = minv(&b, jet).map_err(|e| Error::Frame(e.to_string()))?;
    Ok((0..n).map(|i| VectorField { comps: (0..n).map(|k| a.get(i, k).clone()).collect() }).collect())
}

/// Truncates coefficients at even-variable degree `jet`.
pub fn truncate_form<S: Scalar>(w: &SuperForm<S>, jet: u32) -> SuperForm<S> {
    w.filter(|k| k.m.degree() <= jet)
}

pub fn form_to_json<S: Scalar>(chart: &Chart, w: &SuperForm<S>) -> Value {
    let terms: Vec<Value> = w
        .terms()
        .iter()
        .map(|(k, c)| {
            let dx: Vec<&str> = (0..16).filter(|i| k.dx >> i & 1 == 1).map(|i| chart.even[i].as_str()).collect();
            let mut dth = Vec::new();
            for (a, &e) in k.dth.iter().enumerate() {
                for _ in 0..e {
                    dth.push(chart.odd[a].as_str());
                }
            }
            let f: Superfield<S> = Poly::monomial(k.m, c.clone());
            json!({"dx": dx, "dtheta": dth, "coef": superfield::to_json(&f, chart.m(), &chart.gens)})
        })
        .collect();
    json!({"degree": degree(w), "terms": terms})
}

pub fn form_from_json<S: Scalar>(chart: &Chart, v: &Value) -> Result<SuperForm<S>> {
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("form needs terms".into()))?;
    let mut out = Poly::zero();
    for t in terms {
        let mut word: SuperForm<S> = Poly::one();
        let list = |key: &str| -> Result<Vec<String>> {
            match t.get(key) {
                None => Ok(vec![]),
                Some(Value::Array(a)) => a
                    .iter()
                    .map(|x| x.as_str().map(str::to_string).ok_or_else(|| Error::Parse(format!("{key} entries must be names"))))
                    .collect(),
                Some(_) => Err(Error::Parse(format!("{key} must be a list"))),
            }
        };
        for name in list("dx")? {
            let j = chart.coord_index(&name).map_err(|e| Error::Parse(e.to_string()))?;
            if j >= chart.m() {
                return Err(Error::Parse(format!("'{name}' is not an even coordinate")));
            }
            word = &word * &chart.dz::<S>(j);
        }
        for name in list("dtheta")? {
            let j = chart.coord_index(&name).map_err(|e| Error::Parse(e.to_string()))?;
            if j < chart.m() {
                return Err(Error::Parse(format!("'{name}' is not an odd coordinate")));
            }
            word = &word * &chart.dz::<S>(j);
        }
        let coef = superfield::from_json::<S>(t.get("coef").ok_or_else(|| Error::Parse("missing coef".into()))?, chart.m(), &chart.gens)?;
        out = &out + &(&func(&coef) * &word);
    }
    if let Some(d) = v.get("degree").and_then(Value::as_u64) {
        if degree(&out).is_some_and(|e| e as u64 != d) && !out.is_zero() {
            return Err(Error::Parse(format!("form is not of declared degree {d}")));
        }
    }
    Ok(out)
}

/// Lie-algebra-valued form `Σ ω^i ⊗ e_i`.
#[derive(Clone, Debug)]
pub struct LieValuedForm<S: Scalar> {
    pub alg: Arc<SuperLieAlgebra<S>>,
    pub comps: Vec<SuperForm<S>>,
}

impl<S: Scalar> LieValuedForm<S> {
    pub fn new(alg: Arc<SuperLieAlgebra<S>>, comps: Vec<SuperForm<S>>) -> Result<Self> {
        if comps.len() != alg.dim() {
            return Err(Error::Arity { expected: alg.dim(), got: comps.len() });
        }
        Ok(LieValuedForm { alg, comps })
    }

    pub fn zero(alg: Arc<SuperLieAlgebra<S>>) -> Self {
        let n = alg.dim();
        LieValuedForm { alg, comps: vec![Poly::zero(); n] }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_alg(o)?;
        Ok(LieValuedForm { alg: self.alg.clone(), comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.same_alg(o)?;
        Ok(LieValuedForm { alg: self.alg.clone(), comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a - b).collect() })
    }

    pub fn scale(&self, s: &S) -> Self {
        LieValuedForm { alg: self.alg.clone(), comps: self.comps.iter().map(|c| c.scale(s)).collect() }
    }

    pub fn map(&self, f: impl Fn(&SuperForm<S>) -> SuperForm<S>) -> Self {
        LieValuedForm { alg: self.alg.clone(), comps: self.comps.iter().map(f).collect() }
    }

    pub fn same_alg(&self, o: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.alg, &o.alg) && *self.alg != *o.alg {
            return Err(Error::AlgebraMismatch(format!("{} vs {}", self.alg.name, o.alg.name)));
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().map(Poly::max_abs).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    /// Total parity: every `ω^i` has Grassmann parity `|e_i| + p`.
    pub fn total_parity(&self) -> Option<u8> {
        let mut p = None;
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = (c.parity()? + self.alg.parity[i]) & 1;
            match p {
                None => p = Some(q),
                Some(r) if r != q => return None,
                _ => {}
            }
        }
        Some(p.unwrap_or(0))
    }

    pub fn degree(&self) -> Option<u32> {
        let mut d = None;
        for c in &self.comps {
            if c.is_zero() {
                continue;
            }
            let e = degree(c)?;
            match d {
                None => d = Some(e),
                Some(f) if f != e => return None,
                _ => {}
            }
        }
        Some(d.unwrap_or(0))
    }

    pub fn ext_d(&self, chart: &Chart) -> Self {
        self.map(|c| ext_d(chart, c))
    }

    pub fn to_json(&self, chart: &Chart) -> Value {
        json!({
            "algebra": self.alg.name,
            "components": self.alg.labels.iter().zip(&self.comps)
                .map(|(l, c)| json!({"generator": l, "form": form_to_json(chart, c)}))
                .collect::<Vec<_>>(),
        })
    }
}

/// `[α∧β] = Σ α^i ∧ 𝔠^{|e_i|}(β^j) ⊗ [e_i,e_j]`.
pub fn bracket_wedge<S: Scalar>(a: &LieValuedForm<S>, b: &LieValuedForm<S>) -> Result<LieValuedForm<S>> {
    a.same_alg(b)?;
    Ok(LieValuedForm { alg: a.alg.clone(), comps: a.alg.bracket_ring(&a.comps, &b.comps) })
}

/// Factor `c` in `F = d𝒜 + c[𝒜∧𝒜]`, fixed by [`calibrate_curvature_factor`].
pub fn curvature_factor<S: Scalar>() -> S {
    S::from_ratio(1, 2)
}

pub fn curvature_with_factor<S: Scalar>(chart: &Chart, a: &LieValuedForm<S>, c: &S) -> Result<LieValuedForm<S>> {
    if a.total_parity() != Some(0) {
        return Err(Error::Parity("connection form must be even".into()));
    }
    if a.degree().is_some_and(|d| d != 1) && !a.is_zero() || a.degree().is_none() {
        return Err(Error::Dim("connection form must be a 1-form".into()));
    }
    a.ext_d(chart).add(&bracket_wedge(a, a)?.scale(c))
}

/// `F(𝒜) = d𝒜 + ½[𝒜∧𝒜]`.
pub fn curvature<S: Scalar>(chart: &Chart, a: &LieValuedForm<S>) -> Result<LieValuedForm<S>> {
    curvature_with_factor(chart, a, &curvature_factor())
}

/// `D^{(𝒜)}ω = dω + Σ_i 𝒜^i ∧ 𝔠^{|e_i|}(ρ(e_i)ω)` for a vector-valued form
/// `ω` in a representation given by matrices `ρ(e_i)`.
pub fn cov_deriv<S: Scalar>(chart: &Chart, a: &LieValuedForm<S>, w: &[SuperForm<S>], rho: &[Vec<Vec<S>>]) -> Result<Vec<SuperForm<S>>> {
    if rho.len() != a.alg.dim() {
        return Err(Error::AlgebraMismatch(format!("{} representation matrices for a {}-dimensional algebra", rho.len(), a.alg.dim())));
    }
    let d = w.len();
    if rho.iter().any(|m| m.len() != d || m.iter().any(|r| r.len() != d)) {
        return Err(Error::Dim("representation matrices do not match the form".into()));
    }
    let mut out: Vec<SuperForm<S>> = w.iter().map(|c| ext_d(chart, c)).collect();
    for (i, ai) in a.comps.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for r in 0..d {
            let mut act = Poly::zero();
            for s in 0..d {
                if !rho[i][r][s].is_zero() {
                    act = &act + &w[s].scale(&rho[i][r][s]);
                }
            }
            if act.is_zero() {
                continue;
            }
            if a.alg.parity[i] == 1 {
                act = act.involute();
            }
            out[r] = &out[r] + &(ai * &act);
        }
    }
    Ok(out)
}

/// `D^{(𝒜)}F = dF + [𝒜∧F]`.
pub fn bianchi_residual<S: Scalar>(chart: &Chart, a: &LieValuedForm<S>) -> Result<LieValuedForm<S>> {
    let f = curvature(chart, a)?;
    f.ext_d(chart).add(&bracket_wedge(a, &f)?)
}

/// Picks `c ∈ {1, ½}` such that the Maurer–Cartan form of the super
/// translation group is flat and the Bianchi identity holds for the given
/// probe connection. Returns the selected factor.
pub fn calibrate_curvature_factor<S: Scalar>(mc_chart: &Chart, mc: &LieValuedForm<S>, probe_chart: &Chart, probe: &LieValuedForm<S>) -> Result<S> {
    for c in [S::one(), S::from_ratio(1, 2)] {
        let flat = curvature_with_factor(mc_chart, mc, &c)?.is_zero();
        let f = curvature_with_factor(probe_chart, probe, &c)?;
        let bianchi = f.ext_d(probe_chart).add(&bracket_wedge(probe, &f)?)?.is_zero();
        if flat && bianchi {
            return Ok(c);
        }
    }
    Err(Error::Calibration("no curvature factor passes flatness and Bianchi".into()))
}

/// Residuals of a principal connection on a trivialized chart.
#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct ConnectionReport {
    /// `max |⟨X̃_i|𝒜⟩ − e_i|`.
    pub axiom_i: f64,
    /// `max |L_{X̃_i}𝒜 + ad_{e_i}∘𝒜|`.
    pub axiom_ii: f64,
}

pub fn verify_connection_axioms<S: Scalar>(chart: &Chart, a: &LieValuedForm<S>, fundamental: &[VectorField<S>]) -> Result<ConnectionReport> {
    let alg = &a.alg;
    if fundamental.len() != alg.dim() {
        return Err(Error::Arity { expected: alg.dim(), got: fundamental.len() });
    }
    let mut rep = ConnectionReport::default();
    for (i, x) in fundamental.iter().enumerate() {
        for (k, ak) in a.comps.iter().enumerate() {
            let mut v = pairing(chart, x, ak);
            if k == i {
                v = &v - &Poly::one();
            }
            rep.axiom_i = rep.axiom_i.max(v.max_abs());
        }
        let mut unit = vec![Poly::zero(); alg.dim()];
        unit[i] = Poly::one();
        let ad = alg.bracket_ring(&unit, &a.comps);
        for (k, ak) in a.comps.iter().enumerate() {
            let r = &lie_deriv(chart, x, ak) + &ad[k];
            rep.axiom_ii = rep.axiom_ii.max(r.max_abs());
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type F = SuperForm<Rational>;

    fn r(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn wedge_examples() {
        let ch = Chart::standard(2, 2, 0).unwrap();
        let dx: F = ch.dz(0);
        let dth: F = ch.dz(2);
        assert!((&dx * &dx).is_zero());
        assert!(!(&dth * &dth).is_zero());
        assert!((&(&dx * &dth) + &(&dth * &dx)).is_zero());
    }

    #[test]
    fn d_examples() {
        let ch = Chart::standard(2, 2, 0).unwrap();
        let x0 = func::<Rational>(&ch.coord(0));
        let x1 = func::<Rational>(&ch.coord(1));
        let d = ext_d(&ch, &(&x0 * &x1));
        assert_eq!(d, &(&x1 * &ch.dz(0)) + &(&x0 * &ch.dz(1)));
        let th0 = func::<Rational>(&ch.coord(2));
        assert_eq!(ext_d(&ch, &th0), ch.dz(2));
        assert!(ext_d(&ch, &ch.dz::<Rational>(2)).is_zero());
        // d(x θ¹ dθ²) = dx θ¹ dθ² + x dθ¹ dθ²  (dx θ = θ dx)
        let w = &(&x0 * &th0) * &ch.dz(3);
        let expect = &(&(&ch.dz::<Rational>(0) * &th0) * &ch.dz(3)) + &(&(&x0 * &ch.dz(2)) * &ch.dz(3));
        assert_eq!(ext_d(&ch, &w), expect);
    }

    #[test]
    fn interior_and_lie_examples() {
        let ch = Chart::standard(2, 1, 0).unwrap();
        let e0 = VectorField::<Rational>::coord(&ch, 0);
        assert_eq!(interior(&ch, &e0, &ch.dz(0)), F::one());
        let x0 = func::<Rational>(&ch.coord(0));
        assert_eq!(lie_deriv(&ch, &e0, &(&x0 * &ch.dz(0))), ch.dz(0));
        let _ = r(0);
    }

    #[test]
    fn coordinate_coframe() {
        let ch = Chart::standard(2, 2, 0).unwrap();
        let frame: Vec<VectorField<Rational>> = (0..4).map(|j| VectorField::coord(&ch, j)).collect();
        let co = dual_coframe(&ch, &frame, None).unwrap();
        for j in 0..4 {
            assert_eq!(co[j], ch.dz(j));
        }
        let mut bad = frame.clone();
        bad[0] = VectorField::zero(&ch);
        assert!(matches!(dual_coframe(&ch, &bad, None), Err(Error::Frame(_))));
    }
}
