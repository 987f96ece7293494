//! Polynomial superfields `f(x, ξ) = Σ f_{e,B} x^e ξ_B`.
//!
//! Even coordinates are polynomial variables; odd coordinates θ and
//! parametrizing generators σ share one generator pool, so a superfield on an
//! S-relative chart is a polynomial in `x` with Grassmann coefficients.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::grassmann::{GeneratorSet, GrassmannNumber};
use crate::poly::{Blade, Mono, Poly, MAX_EVEN};
use crate::scalar::Scalar;

pub type Superfield<S> = Poly<Mono, S>;

pub fn var<S: Scalar>(i: usize) -> Superfield<S> {
    assert!(i < MAX_EVEN, "even variable index {i} out of range");
    Poly::monomial(Mono::var(i), S::one())
}

pub fn gen<S: Scalar>(i: usize) -> Superfield<S> {
    Poly::monomial(Mono::blade(1 << i), S::one())
}

pub fn from_grassmann<S: Scalar>(a: &GrassmannNumber<S>) -> Superfield<S> {
    a.map_terms(|b, c| Some((Mono::blade(b.0), c.clone())))
}

/// The Grassmann number of an `x`-independent superfield.
pub fn to_grassmann<S: Scalar>(f: &Superfield<S>) -> Option<GrassmannNumber<S>> {
    if f.terms().iter().any(|(m, _)| m.degree() != 0) {
        return None;
    }
    Some(f.map_terms(|m, c| Some((Blade(m.g), c.clone()))))
}

pub fn partial_x<S: Scalar>(f: &Superfield<S>, i: usize) -> Superfield<S> {
    f.map_terms(|m, c| {
        let e = m.x[i];
        if e == 0 {
            return None;
        }
        let mut m2 = m;
        m2.x[i] -= 1;
        Some((m2, c.mul(&S::from_i64(e as i64))))
    })
}

pub fn partial_x_multi<S: Scalar>(f: &Superfield<S>, j: &[usize]) -> Superfield<S> {
    let mut g = f.clone();
    for (i, &ji) in j.iter().enumerate() {
        for _ in 0..ji {
            g = partial_x(&g, i);
        }
    }
    g
}

/// Left derivative with respect to generator `j`.
pub fn partial_gen<S: Scalar>(f: &Superfield<S>, j: usize) -> Superfield<S> {
    f.map_terms(|m, c| {
        if m.g >> j & 1 == 0 {
            return None;
        }
        let before = (m.g & ((1u32 << j) - 1)).count_ones();
        let mut m2 = m;
        m2.g &= !(1 << j);
        Some((m2, if before & 1 == 1 { c.neg() } else { c.clone() }))
    })
}

/// Evaluates a generator-free polynomial at a scalar point.
pub fn eval_body<S: Scalar>(f: &Superfield<S>, b: &[S]) -> S {
    let mut acc = S::zero();
    for (m, c) in f.terms() {
        if m.g != 0 {
            continue;
        }
        let mut t = c.clone();
        for (i, &e) in m.x.iter().enumerate() {
            for _ in 0..e {
                t = t.mul(&b[i]);
            }
        }
        acc.add_assign(&t);
    }
    acc
}

/// Evaluates all even variables at scalars, leaving a Grassmann number.
pub fn eval_vars<S: Scalar>(f: &Superfield<S>, vals: &[S]) -> GrassmannNumber<S> {
    let mut out = Vec::with_capacity(f.len());
    for (m, c) in f.terms() {
        let mut t = c.clone();
        for (i, &e) in m.x.iter().enumerate() {
            if e > 0 {
                let v = vals.get(i).cloned().unwrap_or_else(S::zero);
                for _ in 0..e {
                    t = t.mul(&v);
                }
            }
        }
        out.push((Blade(m.g), t));
    }
    Poly::from_terms(out)
}

/// Drops monomials of `x`-degree above `jet`.
pub fn truncate<S: Scalar>(f: &Superfield<S>, jet: u32) -> Superfield<S> {
    f.filter(|m| m.degree() <= jet)
}

/// Substitution homomorphism: `x_i ↦ even[i]`, generator `j ↦ gens[j]`
/// (kept when `None` or out of range). Variables beyond `even.len()` are
/// kept as they are.
pub fn compose<S: Scalar>(
    f: &Superfield<S>,
    even: &[Superfield<S>],
    gens: &[Option<Superfield<S>>],
) -> Result<Superfield<S>> {
    for (i, e) in even.iter().enumerate() {
        if !e.has_parity(0) {
            return Err(Error::Parity(format!("image of even variable {i} is not even")));
        }
    }
    for (j, g) in gens.iter().enumerate() {
        if let Some(g) = g {
            if !g.has_parity(1) {
                return Err(Error::Parity(format!("image of generator {j} is not odd")));
            }
        }
    }
    let mut powers: Vec<Vec<Superfield<S>>> = vec![vec![Poly::one()]; even.len()];
    let mut out = Poly::zero();
    for (m, c) in f.terms() {
        let mut kept = Mono::default();
        let mut t = Poly::scalar(c.clone());
        for (i, &e) in m.x.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if i < even.len() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &even[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            } else {
                kept.x[i] = e;
            }
        }
        if kept.degree() > 0 {
            t = &t * &Poly::monomial(kept, S::one());
        }
        let mut bits = m.g;
        // the x-part is even, so generator images can be multiplied on the right
        let mut gpart = Poly::one();
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let img = match gens.get(j) {
                Some(Some(g)) => g.clone(),
                _ => gen(j),
            };
            gpart = &gpart * &img;
            if gpart.is_zero() {
                break;
            }
        }
        out = &out + &(&t * &gpart);
    }
    Ok(out)
}

/// Evaluates a superfield at Grassmann arguments: even coordinates at `x`,
/// and the odd coordinates (generators `odd_gens`) at `theta`. Generators not
/// listed are kept.
pub fn eval_superfield<S: Scalar>(
    f: &Superfield<S>,
    x: &[GrassmannNumber<S>],
    odd_gens: &[usize],
    theta: &[GrassmannNumber<S>],
) -> Result<GrassmannNumber<S>> {
    if odd_gens.len() != theta.len() {
        return Err(Error::Arity { expected: odd_gens.len(), got: theta.len() });
    }
    let maxvar = f
        .terms()
        .iter()
        .filter_map(|(m, _)| m.x.iter().rposition(|&e| e != 0))
        .max()
        .map(|i| i + 1)
        .unwrap_or(0);
    if maxvar > x.len() {
        return Err(Error::Arity { expected: maxvar, got: x.len() });
    }
    for xi in x {
        if !xi.has_parity(0) {
            return Err(Error::Parity("even coordinate given an odd value".into()));
        }
    }
    for th in theta {
        if !th.has_parity(1) {
            return Err(Error::Parity("odd coordinate given an even value".into()));
        }
    }
    let even: Vec<Superfield<S>> = x.iter().map(from_grassmann).collect();
    let mut gens: Vec<Option<Superfield<S>>> = vec![None; 32];
    for (&j, th) in odd_gens.iter().zip(theta) {
        gens[j] = Some(from_grassmann(th));
    }
    let r = compose(f, &even, &gens)?;
    Ok(to_grassmann(&r).expect("all even variables substituted"))
}

/// Largest even-variable index used plus one.
pub fn n_vars<S: Scalar>(f: &Superfield<S>) -> usize {
    f.terms()
        .iter()
        .filter_map(|(m, _)| m.x.iter().rposition(|&e| e != 0))
        .max()
        .map(|i| i + 1)
        .unwrap_or(0)
}

pub fn to_json<S: Scalar>(f: &Superfield<S>, n_even: usize, alg: &GeneratorSet) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .iter()
        .map(|(m, c)| {
            json!({
                "exps": m.x[..n_even.max(n_vars(f))].to_vec(),
                "idx": alg.labels(m.g),
                "coef": c.to_json(),
            })
        })
        .collect();
    json!({ "terms": terms })
}

pub fn from_json<S: Scalar>(v: &Value, n_even: usize, alg: &GeneratorSet) -> Result<Superfield<S>> {
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("expected {\"terms\": [...]}".into()))?;
    let mut out = Vec::new();
    for t in terms {
        let mut m = Mono::default();
        if let Some(e) = t.get("exps") {
            let e = e.as_array().ok_or_else(|| Error::Parse("exps must be a list".into()))?;
            if e.len() > n_even {
                return Err(Error::Parse(format!("{} exponents for {n_even} even variables", e.len())));
            }
            for (i, ei) in e.iter().enumerate() {
                let k = ei
                    .as_u64()
                    .filter(|&k| k < 64)
                    .ok_or_else(|| Error::Parse("exponents must be small non-negative integers".into()))?;
                m.x[i] = k as u8;
            }
        }
        let (bits, neg) = alg.parse_idx(t.get("idx"))?;
        let Some(bits) = bits else { continue };
        m.g = bits;
        let c = S::from_json(t.get("coef").ok_or_else(|| Error::Parse("missing coef".into()))?)?;
        out.push((m, if neg { c.neg() } else { c }));
    }
    Ok(Poly::from_terms(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::{generator, grassmann_extend};
    use crate::scalar::Rational;

    type F = Superfield<Rational>;
    type G = GrassmannNumber<Rational>;

    fn r(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn eval_examples() {
        // generators: 0,1 = θ¹,θ²; 2,3 = σ
        let f: F = &var(0) * &gen(0);
        let v = eval_superfield(&f, &[G::scalar(r(2))], &[0, 1], &[generator(2), generator(3)]).unwrap();
        assert_eq!(v, generator::<Rational>(2).scale(&r(2)));
        let f: F = &gen(0) * &gen(1);
        let v = eval_superfield(&f, &[], &[0, 1], &[generator(2), generator(2)]).unwrap();
        assert!(v.is_zero());
        assert!(eval_superfield(&f, &[], &[0, 1], &[G::one(), generator(2)]).is_err());
    }

    #[test]
    fn eval_matches_extension_on_body() {
        // f = (x¹)² + θ¹θ², oracle: extension of x² plus product of images
        let f: F = &(&var(0) * &var(0)) + &(&gen(0) * &gen(1));
        let s = |i| generator::<Rational>(i);
        let x = &G::one() + &(&s(2) * &s(3));
        let th1 = &s(2) + &(&s(3) * &(&s(4) * &s(5)));
        let th2 = s(4);
        let v = eval_superfield(&f, &[x.clone()], &[0, 1], &[th1.clone(), th2.clone()]).unwrap();
        let sq = grassmann_extend(&(&var::<Rational>(0) * &var(0)), &[x]).unwrap();
        assert_eq!(v, &sq + &(&th1 * &th2));
    }

    #[test]
    fn left_derivative_sign() {
        let f: F = &gen(0) * &gen(1);
        assert_eq!(partial_gen(&f, 0), gen(1));
        assert_eq!(partial_gen(&f, 1), -gen::<Rational>(0));
    }
}
