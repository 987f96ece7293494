//! Finite Grassmann algebras with tagged generators.
//!
//! A [`GrassmannNumber`] is a sparse sum over generator blades. The value does
//! not carry its algebra; instead a [`GeneratorSet`] validates that operands
//! only touch its generators, which is where algebra mismatches surface.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::{Blade, Mono, Poly, MAX_GENERATORS};
use crate::scalar::Scalar;

pub type GrassmannNumber<S> = Poly<Blade, S>;

/// Default generator cap.
pub const DEFAULT_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenTag {
    /// Odd generator of the parametrizing supermanifold S.
    Parametrizing,
    /// Odd coordinate θ of a base chart.
    Coordinate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    names: Vec<String>,
    tags: Vec<GenTag>,
}

impl GeneratorSet {
    pub fn new(names: Vec<String>, tags: Vec<GenTag>) -> Result<Self> {
        Self::with_cap(names, tags, DEFAULT_CAP)
    }

    pub fn with_cap(names: Vec<String>, tags: Vec<GenTag>, cap: usize) -> Result<Self> {
        if names.len() != tags.len() {
            return Err(Error::Arity { expected: names.len(), got: tags.len() });
        }
        if cap > MAX_GENERATORS {
            return Err(Error::Capacity(format!("cap {cap} exceeds {MAX_GENERATORS}")));
        }
        if names.len() > cap {
            return Err(Error::Capacity(format!("{} generators exceed cap {cap}", names.len())));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Unknown(format!("duplicate generator label '{n}'")));
            }
        }
        Ok(GeneratorSet { names, tags })
    }

    /// `n` parametrizing generators named `prefix1..prefixn`.
    pub fn parametrizing(prefix: &str, n: usize) -> Result<Self> {
        Self::with_cap(
            (1..=n).map(|i| format!("{prefix}{i}")).collect(),
            vec![GenTag::Parametrizing; n],
            MAX_GENERATORS,
        )
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn tags(&self) -> &[GenTag] {
        &self.tags
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Unknown(format!("generator '{name}'")))
    }

    pub fn mask(&self) -> u32 {
        if self.names.len() >= 32 {
            u32::MAX
        } else {
            (1u32 << self.names.len()) - 1
        }
    }

    pub fn mask_of(&self, tag: GenTag) -> u32 {
        self.tags
            .iter()
            .enumerate()
            .filter(|(_, t)| **t == tag)
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    /// Errors if `a` involves generators outside this set.
    pub fn check<S: Scalar>(&self, a: &GrassmannNumber<S>) -> Result<()> {
        let m = self.mask();
        if a.terms().iter().any(|(b, _)| b.0 & !m != 0) {
            return Err(Error::AlgebraMismatch(format!(
                "value uses generators beyond the {} of this algebra",
                self.len()
            )));
        }
        Ok(())
    }

    pub fn generator<S: Scalar>(&self, i: usize) -> Result<GrassmannNumber<S>> {
        if i >= self.len() {
            return Err(Error::Unknown(format!("generator index {i}")));
        }
        Ok(generator(i))
    }

    pub fn to_json<S: Scalar>(&self, a: &GrassmannNumber<S>) -> Value {
        let terms: Vec<Value> = a
            .terms()
            .iter()
            .map(|(b, c)| json!({"idx": self.labels(b.0), "coef": c.to_json()}))
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json<S: Scalar>(&self, v: &Value) -> Result<GrassmannNumber<S>> {
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("expected {\"terms\": [...]}".into()))?;
        let mut out = Vec::new();
        for t in terms {
            let (bits, neg) = self.parse_idx(t.get("idx"))?;
            let c = S::from_json(t.get("coef").ok_or_else(|| Error::Parse("missing coef".into()))?)?;
            match bits {
                Some(b) => out.push((Blade(b), if neg { c.neg() } else { c })),
                None => continue,
            }
        }
        Ok(Poly::from_terms(out))
    }

    pub(crate) fn labels(&self, bits: u32) -> Vec<String> {
        (0..32)
            .filter(|i| bits >> i & 1 == 1)
            .map(|i| self.names.get(i).cloned().unwrap_or_else(|| format!("#{i}")))
            .collect()
    }

    /// Parses a list of labels into a sorted blade, returning the reordering
    /// sign; `None` when a label repeats (the monomial vanishes).
    pub(crate) fn parse_idx(&self, v: Option<&Value>) -> Result<(Option<u32>, bool)> {
        let list = match v {
            None => return Ok((Some(0), false)),
            Some(v) => v.as_array().ok_or_else(|| Error::Parse("idx must be a list".into()))?,
        };
        let mut bits = 0u32;
        let mut neg = false;
        for l in list {
            let name = l.as_str().ok_or_else(|| Error::Parse("idx labels must be strings".into()))?;
            let i = self.index(name).map_err(|e| Error::Parse(e.to_string()))?;
            if bits >> i & 1 == 1 {
                return Ok((None, false));
            }
            neg ^= crate::poly::merge_sign(bits, 1 << i);
            bits |= 1 << i;
        }
        Ok((Some(bits), neg))
    }
}

pub fn generator<S: Scalar>(i: usize) -> GrassmannNumber<S> {
    Poly::monomial(Blade(1 << i), S::one())
}

/// Product with algebra membership checks.
pub fn gmul<S: Scalar>(alg: &GeneratorSet, a: &GrassmannNumber<S>, b: &GrassmannNumber<S>) -> Result<GrassmannNumber<S>> {
    alg.check(a)?;
    alg.check(b)?;
    Ok(a * b)
}

pub fn body<S: Scalar>(a: &GrassmannNumber<S>) -> S {
    a.constant()
}

pub fn soul<S: Scalar>(a: &GrassmannNumber<S>) -> GrassmannNumber<S> {
    a.filter(|b| b.0 != 0)
}

/// Inverse of an even element with invertible body, by the terminating
/// geometric series in `soul/body`.
pub fn ginv<S: Scalar>(a: &GrassmannNumber<S>) -> Result<GrassmannNumber<S>> {
    let b = body(a);
    let binv = b
        .inv()
        .ok_or_else(|| Error::NotInvertible("zero body".into()))?;
    if !a.has_parity(0) {
        return Err(Error::Parity("ginv requires an even element".into()));
    }
    let n = soul(a).scale(&binv.neg());
    let mut term = Poly::one();
    let mut sum = Poly::one();
    loop {
        term = &term * &n;
        if term.is_zero() {
            break;
        }
        sum = &sum + &term;
    }
    Ok(sum.scale(&binv))
}

/// Grassmann extension `G(f)(x) = Σ_J ∂_J f(ε(x)) s(x)^J / J!` of a body
/// polynomial `f` (a superfield without generators) in `x.len()` variables.
pub fn grassmann_extend<S: Scalar>(f: &Poly<Mono, S>, x: &[GrassmannNumber<S>]) -> Result<GrassmannNumber<S>> {
    if f.terms().iter().any(|(m, _)| m.g != 0) {
        return Err(Error::Parity("body polynomial must not contain generators".into()));
    }
    let m = x.len();
    if let Some((k, _)) = f.terms().iter().find(|(k, _)| k.x[m..].iter().any(|&e| e != 0)) {
        return Err(Error::Arity { expected: m, got: k.x.iter().rposition(|&e| e != 0).unwrap_or(0) + 1 });
    }
    if x.iter().any(|xi| !xi.has_parity(0)) {
        return Err(Error::Parity("Grassmann extension needs even arguments".into()));
    }
    let b: Vec<S> = x.iter().map(body).collect();
    let s: Vec<GrassmannNumber<S>> = x.iter().map(soul).collect();
    let deg = f.terms().iter().map(|(k, _)| k.degree()).max().unwrap_or(0) as usize;
    let mut out = Poly::zero();
    // enumerate multi-indices J with |J| ≤ deg
    let mut j = vec![0usize; m];
    loop {
        let dj = crate::superfield::partial_x_multi(f, &j);
        if !dj.is_zero() {
            let val = crate::superfield::eval_body(&dj, &b);
            if !val.is_zero() {
                let mut fact = S::one();
                let mut sj = Poly::<Blade, S>::one();
                for (i, &ji) in j.iter().enumerate() {
                    for k in 1..=ji {
                        fact = fact.mul(&S::from_i64(k as i64));
                    }
                    sj = &sj * &s[i].pow(ji as u32);
                }
                let coef = val.mul(&fact.inv().expect("nonzero factorial"));
                out = &out + &sj.scale(&coef);
            }
        }
        // next multi-index
        let mut i = 0;
        loop {
            if i == m {
                return Ok(out);
            }
            j[i] += 1;
            if j.iter().sum::<usize>() <= deg {
                break;
            }
            j[i] = 0;
            i += 1;
        }
    }
}

/// Grassmann extension of a univariate function known through its
/// derivatives `deriv(k, b)` at the body point, truncated at `order`.
/// With nilpotent soul the result is exact once `order ≥` the nilpotency
/// index of the soul.
pub fn grassmann_extend_series<S: Scalar>(
    deriv: impl Fn(usize, &S) -> S,
    x: &GrassmannNumber<S>,
    order: usize,
) -> Result<GrassmannNumber<S>> {
    if !x.has_parity(0) {
        return Err(Error::Parity("Grassmann extension needs an even argument".into()));
    }
    let b = body(x);
    let s = soul(x);
    let mut out = Poly::zero();
    let mut pow = Poly::one();
    let mut fact = S::one();
    for k in 0..=order {
        if k > 0 {
            pow = &pow * &s;
            fact = fact.mul(&S::from_i64(k as i64));
            if pow.is_zero() {
                break;
            }
        }
        out = &out + &pow.scale(&deriv(k, &b).mul(&fact.inv().unwrap()));
    }
    Ok(out)
}

/// Applies a generator substitution `ξ_i ↦ images[i]` (or `ξ_i ↦ ξ_i` when
/// `None`) as an algebra homomorphism. Images of generators must be odd.
pub fn substitute_generators<S: Scalar>(
    a: &GrassmannNumber<S>,
    images: &[Option<GrassmannNumber<S>>],
) -> Result<GrassmannNumber<S>> {
    for (i, im) in images.iter().enumerate() {
        if let Some(im) = im {
            if !im.has_parity(1) {
                return Err(Error::Parity(format!("image of generator {i} is not odd")));
            }
        }
    }
    let mut out = Poly::zero();
    for (b, c) in a.terms() {
        let mut t = Poly::scalar(c.clone());
        let mut bits = b.0;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let img = match images.get(i) {
                Some(Some(im)) => im.clone(),
                _ => generator(i),
            };
            t = &t * &img;
            if t.is_zero() {
                break;
            }
        }
        out = &out + &t;
    }
    Ok(out)
}
