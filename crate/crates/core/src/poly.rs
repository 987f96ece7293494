//! Sparse graded polynomials over a monomial key.
//!
//! Grassmann numbers, superfields and super forms are all finite sums of
//! basis monomials with scalar coefficients; they differ only in how two
//! monomials multiply. [`Key`] captures that product (including the Koszul
//! sign), and [`Poly`] provides canonical storage and ring arithmetic.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{convert, Scalar};

/// Maximum number of even coordinates in a monomial key.
pub const MAX_EVEN: usize = 10;
/// Maximum number of odd coordinates (differentials `dθ`) in a form key.
pub const MAX_ODD: usize = 8;
/// Hard limit on Grassmann generators (bitmask width).
pub const MAX_GENERATORS: usize = 32;

/// A basis monomial with a sign-aware product.
pub trait Key: Copy + Ord + Eq + Hash + fmt::Debug + Send + Sync + 'static {
    fn unit() -> Self;
    /// Product of two basis monomials: `None` when it vanishes, otherwise the
    /// resulting monomial and whether the coefficient is negated.
    fn mul(self, rhs: Self) -> Option<(Self, bool)>;
    /// Grassmann parity (0 or 1).
    fn parity(self) -> u8;
    /// Total degree in the even variables.
    fn x_degree(self) -> u32 {
        0
    }
}

/// Number of transpositions needed to merge the sorted index sets `a` and `b`
/// into one sorted set, mod 2 (`true` means odd).
#[inline]
pub fn merge_sign(a: u32, b: u32) -> bool {
    let mut n = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        n += ((a >> j) >> 1).count_ones();
        bb &= bb - 1;
    }
    n & 1 == 1
}

/// Monomial of the exterior algebra on at most 32 generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Blade(pub u32);

impl Key for Blade {
    fn unit() -> Self {
        Blade(0)
    }
    #[inline]
    fn mul(self, rhs: Self) -> Option<(Self, bool)> {
        if self.0 & rhs.0 != 0 {
            return None;
        }
        Some((Blade(self.0 | rhs.0), merge_sign(self.0, rhs.0)))
    }
    fn parity(self) -> u8 {
        (self.0.count_ones() & 1) as u8
    }
}

/// Monomial `x^e · ξ_B` with even exponents `e` and a generator blade `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Mono {
    pub x: [u8; MAX_EVEN],
    pub g: u32,
}

impl Mono {
    pub fn degree(&self) -> u32 {
        self.x.iter().map(|&e| e as u32).sum()
    }
    pub fn blade(g: u32) -> Self {
        Mono { x: [0; MAX_EVEN], g }
    }
    pub fn var(i: usize) -> Self {
        let mut m = Mono::default();
        m.x[i] = 1;
        m
    }
}

impl Key for Mono {
    fn unit() -> Self {
        Mono::default()
    }
    #[inline]
    fn mul(self, rhs: Self) -> Option<(Self, bool)> {
        if self.g & rhs.g != 0 {
            return None;
        }
        let mut x = self.x;
        for (a, b) in x.iter_mut().zip(rhs.x.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        Some((Mono { x, g: self.g | rhs.g }, merge_sign(self.g, rhs.g)))
    }
    fn parity(self) -> u8 {
        (self.g.count_ones() & 1) as u8
    }
    fn x_degree(self) -> u32 {
        self.degree()
    }
}

/// Basis word of a super form: `dx_A` (antisymmetric, bitmask), a multiset of
/// `dθ` (exponents), and a coefficient monomial stored to the left.
///
/// Signs follow the bigraded rule: an object of form degree `p` and
/// Grassmann parity `a` passes one of degree `q`, parity `b` with sign
/// `(-1)^(pq + ab)`. Here `dx` has bidegree (1,0), `dθ` (1,1) and generators
/// (0,1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FormKey {
    pub dx: u16,
    pub dth: [u8; MAX_ODD],
    pub m: Mono,
}

impl FormKey {
    pub fn func(m: Mono) -> Self {
        FormKey { dx: 0, dth: [0; MAX_ODD], m }
    }
    pub fn n_dth(&self) -> u32 {
        self.dth.iter().map(|&e| e as u32).sum()
    }
    pub fn degree(&self) -> u32 {
        self.dx.count_ones() + self.n_dth()
    }
}

impl Key for FormKey {
    fn unit() -> Self {
        FormKey::default()
    }
    #[inline]
    fn mul(self, rhs: Self) -> Option<(Self, bool)> {
        if self.dx & rhs.dx != 0 || self.m.g & rhs.m.g != 0 {
            return None;
        }
        let q1 = self.n_dth();
        // move (f2 · dx2) left past dθ1: only the Grassmann parity of f2 and
        // the form degree of dx2 meet the odd-odd dθ's
        let mut neg = (q1 & 1 == 1) && ((rhs.m.g.count_ones() + rhs.dx.count_ones()) & 1 == 1);
        // f2 past dx1: bidegrees (0,a) and (p,0) commute
        neg ^= merge_sign(self.m.g, rhs.m.g);
        neg ^= merge_sign(self.dx as u32, rhs.dx as u32);
        let (m, _) = self.m.mul(rhs.m)?;
        let mut dth = self.dth;
        for (a, b) in dth.iter_mut().zip(rhs.dth.iter()) {
            *a = a.checked_add(*b).expect("dθ exponent overflow");
        }
        Some((FormKey { dx: self.dx | rhs.dx, dth, m }, neg))
    }
    fn parity(self) -> u8 {
        ((self.m.g.count_ones() + self.n_dth()) & 1) as u8
    }
    fn x_degree(self) -> u32 {
        self.m.degree()
    }
}

/// Finite sum of monomials with nonzero coefficients, sorted by key.
#[derive(Clone, PartialEq)]
pub struct Poly<K, S> {
    terms: Vec<(K, S)>,
}

impl<K: Key, S: Scalar> fmt::Debug for Poly<K, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})·{k:?}")?;
        }
        Ok(())
    }
}

impl<K: Key, S: Scalar> Default for Poly<K, S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Key, S: Scalar> Poly<K, S> {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::scalar(S::one())
    }

    pub fn scalar(s: S) -> Self {
        Self::monomial(K::unit(), s)
    }

    pub fn monomial(k: K, s: S) -> Self {
        if s.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(k, s)] }
        }
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated or
    /// zero) terms.
    pub fn from_terms(mut terms: Vec<(K, S)>) -> Self {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(K, S)> = Vec::with_capacity(terms.len());
        for (k, c) in terms {
            match out.last_mut() {
                Some((lk, lc)) if *lk == k => lc.add_assign(&c),
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if lc.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((k, c));
                }
            }
        }
        if let Some((_, lc)) = out.last() {
            if lc.is_zero() {
                out.pop();
            }
        }
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(K, S)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(K, S)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coef(&self, k: &K) -> S {
        match self.terms.binary_search_by(|t| t.0.cmp(k)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => S::zero(),
        }
    }

    /// Coefficient of the unit monomial.
    pub fn constant(&self) -> S {
        self.coef(&K::unit())
    }

    pub fn neg(&self) -> Self {
        Poly {
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, c.mul(s)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = a[i].1.add(&b[j].1);
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Poly { terms: out }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                if let Some((k, neg)) = ka.mul(*kb) {
                    let c = ca.mul(cb);
                    out.push((k, if neg { c.neg() } else { c }));
                }
            }
        }
        Self::from_terms(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// Maps every term through `f`, which may drop it or change its key.
    pub fn map_terms<K2: Key>(&self, mut f: impl FnMut(K, &S) -> Option<(K2, S)>) -> Poly<K2, S> {
        Poly::from_terms(self.terms.iter().filter_map(|(k, c)| f(*k, c)).collect())
    }

    pub fn filter(&self, mut pred: impl FnMut(&K) -> bool) -> Self {
        Poly {
            terms: self.terms.iter().filter(|(k, _)| pred(k)).cloned().collect(),
        }
    }

    /// Grade involution: negates Grassmann-odd terms.
    pub fn involute(&self) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, if k.parity() == 1 { c.neg() } else { c.clone() }))
                .collect(),
        }
    }

    pub fn even_part(&self) -> Self {
        self.filter(|k| k.parity() == 0)
    }

    pub fn odd_part(&self) -> Self {
        self.filter(|k| k.parity() == 1)
    }

    /// Parity of a homogeneous value (`Some(0)` for zero, `None` if mixed).
    pub fn parity(&self) -> Option<u8> {
        let mut p = None;
        for (k, _) in &self.terms {
            match p {
                None => p = Some(k.parity()),
                Some(q) if q != k.parity() => return None,
                _ => {}
            }
        }
        Some(p.unwrap_or(0))
    }

    pub fn has_parity(&self, p: u8) -> bool {
        self.terms.iter().all(|(k, _)| k.parity() == p)
    }

    /// Largest coefficient magnitude (max-norm).
    pub fn max_abs(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.magnitude()).fold(0.0, f64::max)
    }

    /// Coefficients converted to another backend.
    pub fn convert<T: Scalar>(&self) -> Option<Poly<K, T>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, c) in &self.terms {
            terms.push((*k, convert::<S, T>(c)?));
        }
        Some(Poly::from_terms(terms))
    }
}

macro_rules! poly_ops {
    ($tr:ident, $m:ident) => {
        impl<K: Key, S: Scalar> $tr<&Poly<K, S>> for &Poly<K, S> {
            type Output = Poly<K, S>;
            fn $m(self, o: &Poly<K, S>) -> Poly<K, S> {
                Poly::$m(self, o)
            }
        }
        impl<K: Key, S: Scalar> $tr<Poly<K, S>> for Poly<K, S> {
            type Output = Poly<K, S>;
            fn $m(self, o: Poly<K, S>) -> Poly<K, S> {
                Poly::$m(&self, &o)
            }
        }
        impl<K: Key, S: Scalar> $tr<&Poly<K, S>> for Poly<K, S> {
            type Output = Poly<K, S>;
            fn $m(self, o: &Poly<K, S>) -> Poly<K, S> {
                Poly::$m(&self, o)
            }
        }
        impl<K: Key, S: Scalar> $tr<Poly<K, S>> for &Poly<K, S> {
            type Output = Poly<K, S>;
            fn $m(self, o: Poly<K, S>) -> Poly<K, S> {
                Poly::$m(self, &o)
            }
        }
    };
}
poly_ops!(Add, add);
poly_ops!(Sub, sub);
poly_ops!(Mul, mul);

impl<K: Key, S: Scalar> Neg for Poly<K, S> {
    type Output = Poly<K, S>;
    fn neg(self) -> Poly<K, S> {
        Poly::neg(&self)
    }
}

impl<K: Key, S: Scalar> Neg for &Poly<K, S> {
    type Output = Poly<K, S>;
    fn neg(self) -> Poly<K, S> {
        Poly::neg(self)
    }
}

/// Commutative-ring-like interface shared by scalars and graded polynomials,
/// used by matrices, spinor bilinears and Lie-algebra-valued data.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Scalar: Scalar;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, s: &Self::Scalar) -> Self;
    fn from_scalar(s: Self::Scalar) -> Self;
    /// Grade involution (identity on scalars).
    fn involute(&self) -> Self;
    /// Parity of a homogeneous element; `Some(0)` for zero, `None` if mixed.
    fn parity(&self) -> Option<u8>;
    fn max_abs(&self) -> f64;
    /// Coefficient of the unit monomial.
    fn body(&self) -> Self::Scalar;
}

impl<K: Key, S: Scalar> Ring for Poly<K, S> {
    type Scalar = S;
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Poly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Poly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Poly::mul(self, o)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn scale(&self, s: &S) -> Self {
        Poly::scale(self, s)
    }
    fn from_scalar(s: S) -> Self {
        Poly::scalar(s)
    }
    fn involute(&self) -> Self {
        Poly::involute(self)
    }
    fn parity(&self) -> Option<u8> {
        Poly::parity(self)
    }
    fn max_abs(&self) -> f64 {
        Poly::max_abs(self)
    }
    fn body(&self) -> S {
        self.constant()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type P = Poly<Blade, Rational>;

    #[test]
    fn merge_sign_counts_inversions() {
        // {0} · {1}: already sorted
        assert!(!merge_sign(0b01, 0b10));
        // {1} · {0}: one swap
        assert!(merge_sign(0b10, 0b01));
        // {1,2} · {0}: two swaps
        assert!(!merge_sign(0b110, 0b001));
    }

    #[test]
    fn from_terms_cancels() {
        let r = Rational::from_i64(1);
        let p = P::from_terms(vec![(Blade(1), r.clone()), (Blade(1), Ring::neg(&r)), (Blade(2), r.clone())]);
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn form_key_sign_rule() {
        // dx^0 · dθ^0 = - dθ^0 · dx^0
        let dx = FormKey { dx: 1, ..Default::default() };
        let mut dth = FormKey::default();
        dth.dth[0] = 1;
        let (_, s1) = dx.mul(dth).unwrap();
        let (_, s2) = dth.mul(dx).unwrap();
        assert_ne!(s1, s2);
        // dθ commutes with dθ
        let (_, s) = dth.mul(dth).unwrap();
        assert!(!s);
    }
}
