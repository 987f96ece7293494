//! Supermatrices over a graded ring, with supertrace, supertranspose,
//! graded commutators, exponentials and inverses.
//!
//! Row/column `i` has parity `|i| = 0` for `i < p` and `1` otherwise. A
//! matrix is homogeneous of parity `x` when every entry `X_ij` is homogeneous
//! of parity `x + |i| + |j|`; scalar entries count as even, so numeric odd
//! matrices live in the off-diagonal blocks.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::{Key, Poly, Ring};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct SuperMatrix<T> {
    p: usize,
    q: usize,
    data: Vec<T>,
    parity: Option<u8>,
}

/// Equality compares entries only; the declared parity is bookkeeping.
impl<T: PartialEq> PartialEq for SuperMatrix<T> {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.q == o.q && self.data == o.data
    }
}

impl<T: Ring> SuperMatrix<T> {
    pub fn new(p: usize, q: usize, data: Vec<T>) -> Result<Self> {
        let n = p + q;
        if data.len() != n * n {
            return Err(Error::Dim(format!("{} entries for a {n}x{n} matrix", data.len())));
        }
        Ok(SuperMatrix { p, q, data, parity: None })
    }

    pub fn from_fn(p: usize, q: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let n = p + q;
        let data = (0..n * n).map(|k| f(k / n, k % n)).collect();
        SuperMatrix { p, q, data, parity: None }
    }

    pub fn zeros(p: usize, q: usize) -> Self {
        Self::from_fn(p, q, |_, _| T::zero())
    }

    pub fn identity(p: usize, q: usize) -> Self {
        let mut m = Self::from_fn(p, q, |i, j| if i == j { T::one() } else { T::zero() });
        m.parity = Some(0);
        m
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    pub fn index_parity(&self, i: usize) -> u8 {
        (i >= self.p) as u8
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        let n = self.n();
        self.data[i * n + j] = v;
        self.parity = None;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn declared_parity(&self) -> Option<u8> {
        self.parity
    }

    /// Parity inferred from the entries (`Some(0)` for the zero matrix).
    pub fn infer_parity(&self) -> Option<u8> {
        let n = self.n();
        let mut x: Option<u8> = None;
        for i in 0..n {
            for j in 0..n {
                let e = self.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let pe = e.parity()?;
                let px = (pe + self.index_parity(i) + self.index_parity(j)) & 1;
                match x {
                    None => x = Some(px),
                    Some(y) if y != px => return None,
                    _ => {}
                }
            }
        }
        Some(x.unwrap_or(0))
    }

    /// Declares a parity after checking the block structure.
    pub fn with_parity(mut self, par: u8) -> Result<Self> {
        let n = self.n();
        for i in 0..n {
            for j in 0..n {
                let e = self.get(i, j);
                let want = (par + self.index_parity(i) + self.index_parity(j)) & 1;
                if !e.is_zero() && e.parity() != Some(want) {
                    return Err(Error::Parity(format!(
                        "entry ({i},{j}) is not of parity {want} required by a parity-{par} matrix"
                    )));
                }
            }
        }
        self.parity = Some(par);
        Ok(self)
    }

    /// Declared parity, or the inferred one; errors if neither exists.
    pub fn parity(&self) -> Result<u8> {
        self.parity
            .or_else(|| self.infer_parity())
            .ok_or_else(|| Error::Parity("matrix is not homogeneous".into()))
    }

    fn check_dims(&self, o: &Self) -> Result<()> {
        if (self.p, self.q) != (o.p, o.q) {
            return Err(Error::Dim(format!(
                "({}|{}) vs ({}|{})",
                self.p, self.q, o.p, o.q
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_dims(o)?;
        let parity = if self.parity == o.parity { self.parity } else { None };
        Ok(SuperMatrix {
            p: self.p,
            q: self.q,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
            parity,
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        SuperMatrix { p: self.p, q: self.q, data: self.data.iter().map(T::neg).collect(), parity: self.parity }
    }

    pub fn scale(&self, s: &T::Scalar) -> Self {
        SuperMatrix { p: self.p, q: self.q, data: self.data.iter().map(|a| a.scale(s)).collect(), parity: self.parity }
    }

    /// Entrywise left multiplication `c · X`.
    pub fn lmul(&self, c: &T) -> Self {
        SuperMatrix::from_fn(self.p, self.q, |i, j| c.mul(self.get(i, j)))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_dims(o)?;
        let n = self.n();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = T::zero();
                for k in 0..n {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b));
                }
                data.push(acc);
            }
        }
        let parity = match (self.parity, o.parity) {
            (Some(a), Some(b)) => Some((a + b) & 1),
            _ => None,
        };
        Ok(SuperMatrix { p: self.p, q: self.q, data, parity })
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> SuperMatrix<U> {
        SuperMatrix { p: self.p, q: self.q, data: self.data.iter().map(f).collect(), parity: self.parity }
    }

    pub fn try_map<U: Ring>(&self, f: impl Fn(&T) -> Result<U>) -> Result<SuperMatrix<U>> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(SuperMatrix { p: self.p, q: self.q, data, parity: self.parity })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(T::max_abs).fold(0.0, f64::max)
    }

    /// `tr X_00 − tr X_11`.
    pub fn str(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.n() {
            let d = self.get(i, i);
            acc = if i < self.p { acc.add(d) } else { acc.sub(d) };
        }
        acc
    }

    /// Supertranspose `(X^sT)_ij = (-1)^{(|i|+|X|)(|i|+|j|)} X_ji`; requires a
    /// declared parity.
    pub fn stranspose(&self) -> Result<Self> {
        let x = self
            .parity
            .ok_or_else(|| Error::Parity("supertranspose needs a declared parity".into()))?;
        let mut m = SuperMatrix::from_fn(self.p, self.q, |i, j| {
            let (pi, pj) = (self.index_parity(i), self.index_parity(j));
            let e = self.get(j, i);
            if (pi + x) * (pi + pj) & 1 == 1 {
                e.neg()
            } else {
                e.clone()
            }
        });
        m.parity = Some(x);
        Ok(m)
    }

    /// `XY − (−1)^{|X||Y|} YX`.
    pub fn graded_comm(&self, o: &Self) -> Result<Self> {
        let (x, y) = (self.parity()?, o.parity()?);
        let xy = self.mul(o)?;
        let yx = o.mul(self)?;
        let mut r = if x & y == 1 { xy.add(&yx)? } else { xy.sub(&yx)? };
        r.parity = Some((x + y) & 1);
        Ok(r)
    }

    pub fn to_json(&self, entry: impl Fn(&T) -> Value) -> Value {
        let n = self.n();
        let rows: Vec<Value> = (0..n)
            .map(|i| Value::Array((0..n).map(|j| entry(self.get(i, j))).collect()))
            .collect();
        let parity = match self.parity {
            Some(0) => "even",
            Some(_) => "odd",
            None => "none",
        };
        json!({"dims": [self.p, self.q], "parity": parity, "entries": rows})
    }

    pub fn from_json(v: &Value, entry: impl Fn(&Value) -> Result<T>) -> Result<Self> {
        let dims = v
            .get("dims")
            .and_then(Value::as_array)
            .filter(|d| d.len() == 2)
            .ok_or_else(|| Error::Parse("matrix needs dims [p,q]".into()))?;
        let p = dims[0].as_u64().ok_or_else(|| Error::Parse("bad p".into()))? as usize;
        let q = dims[1].as_u64().ok_or_else(|| Error::Parse("bad q".into()))? as usize;
        let rows = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("matrix needs entries".into()))?;
        let n = p + q;
        if rows.len() != n {
            return Err(Error::Parse(format!("expected {n} rows")));
        }
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_array().filter(|r| r.len() == n).ok_or_else(|| Error::Parse(format!("rows need {n} entries")))?;
            for e in r {
                data.push(entry(e)?);
            }
        }
        let m = SuperMatrix::new(p, q, data)?;
        match v.get("parity").and_then(Value::as_str) {
            Some("even") => m.with_parity(0).map_err(|e| Error::Parse(e.to_string())),
            Some("odd") => m.with_parity(1).map_err(|e| Error::Parse(e.to_string())),
            Some("none") | None => Ok(m),
            Some(o) => Err(Error::Parse(format!("unknown parity '{o}'"))),
        }
    }
}

impl<T: Ring> SuperMatrix<T> {
    /// Matrix of constant (body) coefficients.
    pub fn body(&self) -> SuperMatrix<T::Scalar>
    where
        T::Scalar: Ring<Scalar = T::Scalar>,
    {
        SuperMatrix { p: self.p, q: self.q, data: self.data.iter().map(T::body).collect(), parity: None }
    }
}

/// Lifts a scalar matrix entrywise into a polynomial ring.
pub fn lift<K: Key, S: Scalar>(m: &SuperMatrix<S>) -> SuperMatrix<Poly<K, S>> {
    m.map(|s| Poly::scalar(s.clone()))
}

/// Exponential of an even matrix with polynomial entries.
///
/// Floats use scaling and squaring with a series run to convergence; exact
/// backends sum the series to `order` (exact whenever the matrix is
/// nilpotent, in which case the series stops at its last nonzero term).
pub fn mexp<K: Key, S: Scalar>(x: &SuperMatrix<Poly<K, S>>, order: usize) -> Result<SuperMatrix<Poly<K, S>>> {
    if x.parity()? != 0 {
        return Err(Error::Parity("exponential needs an even matrix".into()));
    }
    let n = x.n();
    if S::is_exact() {
        return exp_series(x, order, 0.0);
    }
    let norm = (0..n)
        .map(|i| (0..n).map(|j| x.get(i, j).max_abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut s = 0u32;
    while norm / f64::powi(2.0, s as i32) > 0.5 {
        s += 1;
    }
    let scale = S::from_c64(crate::scalar::C64::new(f64::powi(0.5, s as i32), 0.0)).expect("real scale");
    let y = x.scale(&scale);
    let mut e = exp_series(&y, order.max(40), 1e-18)?;
    for _ in 0..s {
        e = e.mul(&e)?;
    }
    e.parity = Some(0);
    Ok(e)
}

fn exp_series<K: Key, S: Scalar>(x: &SuperMatrix<Poly<K, S>>, order: usize, tol: f64) -> Result<SuperMatrix<Poly<K, S>>> {
    let (p, q) = x.dims();
    let mut sum = SuperMatrix::identity(p, q);
    let mut term = SuperMatrix::identity(p, q);
    for k in 1..=order {
        term = term.mul(x)?.scale(&S::from_ratio(1, k as i64));
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term)?;
        if tol > 0.0 && term.max_abs() < tol * sum.max_abs().max(1.0) {
            break;
        }
    }
    sum.parity = Some(0);
    Ok(sum)
}

/// Inverse of a polynomial-entry matrix with invertible body, via the
/// Neumann series in the nilpotent part. Entries with even-variable
/// dependence are truncated at x-degree `jet`.
pub fn minv<K: Key, S: Scalar>(x: &SuperMatrix<Poly<K, S>>, jet: Option<u32>) -> Result<SuperMatrix<Poly<K, S>>> {
    let (p, q) = x.dims();
    let b = x.map(|e| e.constant());
    let binv = scalar_inverse(&b).ok_or_else(|| Error::NotInvertible("body matrix is singular".into()))?;
    let binv = lift::<K, S>(&binv);
    let nil = x.sub(&lift::<K, S>(&b))?;
    let step = binv.mul(&nil)?.neg();
    let trunc = |m: SuperMatrix<Poly<K, S>>| match jet {
        Some(j) => m.map(|e| e.filter(|k| k.x_degree() <= j)),
        None => m,
    };
    let mut term = SuperMatrix::identity(p, q);
    let mut sum = SuperMatrix::identity(p, q);
    for _ in 0..4096 {
        term = trunc(term.mul(&step)?);
        if term.is_zero() {
            let mut r = trunc(sum.mul(&binv)?);
            r.parity = x.parity;
            return Ok(r);
        }
        sum = sum.add(&term)?;
    }
    Err(Error::NotInvertible("nilpotent series did not terminate (missing jet truncation?)".into()))
}

/// Gauss-Jordan inverse of a scalar matrix (partial pivoting by magnitude).
pub fn scalar_inverse<S: Scalar>(m: &SuperMatrix<S>) -> Option<SuperMatrix<S>> {
    let n = m.n();
    let mut a: Vec<Vec<S>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut inv: Vec<Vec<S>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].magnitude().total_cmp(&a[j][c].magnitude()))?;
        if Ring::is_zero(&a[piv][c]) {
            return None;
        }
        a.swap(c, piv);
        inv.swap(c, piv);
        let d = Scalar::inv(&a[c][c])?;
        for j in 0..n {
            a[c][j] = Ring::mul(&a[c][j], &d);
            inv[c][j] = Ring::mul(&inv[c][j], &d);
        }
        for i in 0..n {
            if i == c || Ring::is_zero(&a[i][c]) {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..n {
                let t = Ring::mul(&f, &a[c][j]);
                a[i][j] = Ring::sub(&a[i][j], &t);
                let t = Ring::mul(&f, &inv[c][j]);
                inv[i][j] = Ring::sub(&inv[i][j], &t);
            }
        }
    }
    let (p, q) = m.dims();
    Some(SuperMatrix::from_fn(p, q, |i, j| inv[i][j].clone()))
}

/// Solves `A x = b` for a square scalar system; `None` if singular.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let n = a.len();
    let mut m: Vec<Vec<S>> = a.iter().zip(b).map(|(r, bi)| {
        let mut r = r.clone();
        r.push(bi.clone());
        r
    }).collect();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| m[i][c].magnitude().total_cmp(&m[j][c].magnitude()))?;
        if m[piv][c].is_zero() {
            return None;
        }
        m.swap(c, piv);
        let d = m[c][c].inv()?;
        for j in c..=n {
            m[c][j] = m[c][j].mul(&d);
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..=n {
                let t = f.mul(&m[c][j]);
                m[i][j] = m[i][j].sub(&t);
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Least-squares-free decomposition: finds `c` with `Σ c_k v_k = w` for
/// linearly independent vectors `v_k` (rows of `basis`), exactly over exact
/// backends. Returns `None` when `w` is not in the span.
pub fn decompose<S: Scalar>(basis: &[Vec<S>], w: &[S]) -> Option<Vec<S>> {
    let k = basis.len();
    let dim = w.len();
    // reduced row echelon on the transposed system [v_1 .. v_k | w]
    let mut m: Vec<Vec<S>> = (0..dim)
        .map(|r| {
            let mut row: Vec<S> = basis.iter().map(|v| v[r].clone()).collect();
            row.push(w[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..k {
        let piv = (row..dim).filter(|&i| !m[i][c].is_zero()).max_by(|&i, &j| m[i][c].magnitude().total_cmp(&m[j][c].magnitude()));
        let Some(piv) = piv else { continue };
        if m[piv][c].magnitude() < 1e-300 && !S::is_exact() {
            continue;
        }
        m.swap(row, piv);
        let d = m[row][c].inv()?;
        for j in c..=k {
            m[row][j] = m[row][j].mul(&d);
        }
        for i in 0..dim {
            if i == row || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..=k {
                let t = f.mul(&m[row][j]);
                m[i][j] = m[i][j].sub(&t);
            }
        }
        pivots.push(c);
        row += 1;
    }
    if pivots.len() != k {
        return None;
    }
    let tol = if S::is_exact() { 0.0 } else { 1e-9 };
    if m[row..].iter().any(|r| r[k].magnitude() > tol) {
        return None;
    }
    Some((0..k).map(|i| m[i][k].clone()).collect())
}

/// Super bilinear form on a homogeneous basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperBilinearForm<S> {
    pub parities: Vec<u8>,
    pub matrix: Vec<Vec<S>>,
}

impl<S: Scalar> SuperBilinearForm<S> {
    /// Validates graded symmetry `S_ij = (−1)^{|i||j|} S_ji` and that the
    /// form is even (pairs only equal parities).
    pub fn new(parities: Vec<u8>, matrix: Vec<Vec<S>>) -> Result<Self> {
        let n = parities.len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Dim("bilinear form matrix shape".into()));
        }
        let f = SuperBilinearForm { parities, matrix };
        if f.symmetry_residual() != 0.0 {
            return Err(Error::Parity("form is not graded symmetric".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if f.parities[i] != f.parities[j] && !f.matrix[i][j].is_zero() {
                    return Err(Error::Parity("form pairs elements of different parity".into()));
                }
            }
        }
        Ok(f)
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.matrix[i][j]
    }

    pub fn symmetry_residual(&self) -> f64 {
        let n = self.parities.len();
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let s = if self.parities[i] & self.parities[j] == 1 { self.matrix[j][i].neg() } else { self.matrix[j][i].clone() };
                r = r.max(self.matrix[i][j].sub(&s).magnitude());
            }
        }
        r
    }

    pub fn is_nondegenerate(&self) -> bool {
        let n = self.parities.len();
        let id: Vec<Vec<S>> = (0..n).map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect()).collect();
        (0..n).all(|c| {
            let col: Vec<S> = id.iter().map(|r| r[c].clone()).collect();
            solve(&self.matrix, &col).is_some()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::{generator, GrassmannNumber};
    use crate::scalar::Rational;

    type G = GrassmannNumber<Rational>;
    type M = SuperMatrix<G>;

    fn r(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn supertrace_identity() {
        assert_eq!(M::identity(1, 4).str(), G::scalar(r(-3)));
    }

    #[test]
    fn odd_self_commutator_is_twice_square() {
        // odd numeric matrix in (1|1)
        let q = M::new(1, 1, vec![G::zero(), G::one(), G::scalar(r(2)), G::zero()]).unwrap().with_parity(1).unwrap();
        let c = q.graded_comm(&q).unwrap();
        assert_eq!(c, q.mul(&q).unwrap().scale(&r(2)));
    }

    #[test]
    fn nilpotent_exponential_is_finite() {
        let s = &generator::<Rational>(0) * &generator(1);
        let n = M::new(1, 1, vec![s.clone(), G::zero(), G::zero(), s.clone()]).unwrap();
        let e = mexp(&n, 10).unwrap();
        let expect = M::identity(1, 1).add(&n).unwrap();
        assert_eq!(e, expect);
    }

    #[test]
    fn double_supertranspose_flips_odd_blocks() {
        let x = M::from_fn(1, 1, |i, j| if i == j { G::scalar(r(1 + i as i64)) } else { generator(i) });
        let x = x.with_parity(0).unwrap();
        let tt = x.stranspose().unwrap().stranspose().unwrap();
        assert_eq!(tt.get(0, 0), x.get(0, 0));
        assert_eq!(tt.get(0, 1), &x.get(0, 1).neg());
    }

    #[test]
    fn inverse_with_soul() {
        let s = generator::<Rational>(0);
        let x = M::new(1, 1, vec![G::scalar(r(2)), s.clone(), s.clone(), G::one()]).unwrap();
        let xi = minv(&x, None).unwrap();
        assert_eq!(x.mul(&xi).unwrap(), M::identity(1, 1));
    }
}
