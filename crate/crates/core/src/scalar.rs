//! Scalar backends.
//!
//! Four coefficient fields are supported: exact rationals, exact Gaussian
//! rationals (rationals adjoined `i`), `f64` and complex `f64`. The backend is
//! a type parameter, so mixing backends is rejected at compile time; explicit
//! conversion goes through [`Scalar::to_c64`] / [`Scalar::from_c64`].

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::poly::Ring;

pub type Rational = BigRational;
pub type GaussRational = Complex<BigRational>;
pub type C64 = Complex<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Rational,
    GaussRational,
    F64,
    C64,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Rational => "rational",
            Backend::GaussRational => "gauss-rational",
            Backend::F64 => "f64",
            Backend::C64 => "c64",
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Backend::Rational | Backend::GaussRational)
    }
}

/// Coefficient field of every algebraic object in the crate.
pub trait Scalar: Ring<Scalar = Self> {
    const BACKEND: Backend;

    fn from_i64(n: i64) -> Self;
    fn from_ratio(n: i64, d: i64) -> Self;
    fn add_assign(&mut self, o: &Self);
    fn inv(&self) -> Option<Self>;
    /// Absolute value as a float, used for residual norms and pivoting.
    fn magnitude(&self) -> f64;
    fn to_c64(&self) -> C64;
    /// Conversion from a complex float. Exact backends convert the binary
    /// value exactly; real backends reject a nonzero imaginary part.
    fn from_c64(z: C64) -> Option<Self>;
    /// The imaginary unit, when the field contains one.
    fn imag_unit() -> Option<Self>;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;

    fn is_exact() -> bool {
        Self::BACKEND.is_exact()
    }

    fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }
}

/// Fields that contain `i`.
pub trait ComplexField: Scalar {
    fn i() -> Self {
        Self::imag_unit().expect("complex field")
    }
}

impl ComplexField for GaussRational {}
impl ComplexField for C64 {}

fn rat_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

fn rat_to_json(r: &BigRational) -> Value {
    if r.denom().is_one() {
        Value::String(r.numer().to_string())
    } else {
        Value::String(format!("{}/{}", r.numer(), r.denom()))
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational literal '{s}'"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else if let Ok(n) = s.parse::<BigInt>() {
        Ok(BigRational::from_integer(n))
    } else {
        let f: f64 = s.parse().map_err(|_| bad())?;
        rat_from_f64(f).ok_or_else(bad)
    }
}

fn rat_from_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(i.into()))
            } else {
                let f = n.as_f64().unwrap_or(f64::NAN);
                rat_from_f64(f).ok_or_else(|| Error::Parse(format!("non-finite number {n}")))
            }
        }
        other => Err(Error::Parse(format!("expected rational, got {other}"))),
    }
}

fn f64_from_json(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::Parse(format!("bad number {n}"))),
        Value::String(s) => parse_rational(s)
            .ok()
            .and_then(|r| r.to_f64())
            .ok_or_else(|| Error::Parse(format!("bad number '{s}'"))),
        other => Err(Error::Parse(format!("expected number, got {other}"))),
    }
}

fn complex_parts(v: &Value) -> Option<(&Value, &Value)> {
    let o = v.as_object()?;
    Some((o.get("re")?, o.get("im")?))
}

impl Scalar for BigRational {
    const BACKEND: Backend = Backend::Rational;

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        BigRational::new(n.into(), d.into())
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn to_c64(&self) -> C64 {
        C64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_c64(z: C64) -> Option<Self> {
        if z.im != 0.0 {
            return None;
        }
        rat_from_f64(z.re)
    }
    fn imag_unit() -> Option<Self> {
        None
    }
    fn to_json(&self) -> Value {
        rat_to_json(self)
    }
    fn from_json(v: &Value) -> Result<Self> {
        rat_from_json(v)
    }
}

impl Ring for BigRational {
    type Scalar = BigRational;
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, s: &Self) -> Self {
        Ring::mul(self, s)
    }
    fn from_scalar(s: Self) -> Self {
        s
    }
    fn involute(&self) -> Self {
        self.clone()
    }
    fn parity(&self) -> Option<u8> {
        Some(0)
    }
    fn max_abs(&self) -> f64 {
        self.magnitude()
    }
    fn body(&self) -> Self {
        self.clone()
    }
}

impl Scalar for GaussRational {
    const BACKEND: Backend = Backend::GaussRational;

    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from_integer(n.into()), Zero::zero())
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        Complex::new(BigRational::new(n.into(), d.into()), Zero::zero())
    }
    fn add_assign(&mut self, o: &Self) {
        self.re += &o.re;
        self.im += &o.im;
    }
    fn inv(&self) -> Option<Self> {
        let n = &self.re * &self.re + &self.im * &self.im;
        if Zero::is_zero(&n) {
            return None;
        }
        Some(Complex::new(&self.re / &n, -&self.im / &n))
    }
    fn magnitude(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::INFINITY);
        let im = self.im.to_f64().unwrap_or(f64::INFINITY);
        re.hypot(im)
    }
    fn to_c64(&self) -> C64 {
        C64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn from_c64(z: C64) -> Option<Self> {
        Some(Complex::new(rat_from_f64(z.re)?, rat_from_f64(z.im)?))
    }
    fn imag_unit() -> Option<Self> {
        Some(Complex::new(Zero::zero(), One::one()))
    }
    fn to_json(&self) -> Value {
        if Zero::is_zero(&self.im) {
            rat_to_json(&self.re)
        } else {
            serde_json::json!({"re": rat_to_json(&self.re), "im": rat_to_json(&self.im)})
        }
    }
    fn from_json(v: &Value) -> Result<Self> {
        if let Some((re, im)) = complex_parts(v) {
            Ok(Complex::new(rat_from_json(re)?, rat_from_json(im)?))
        } else {
            Ok(Complex::new(rat_from_json(v)?, Zero::zero()))
        }
    }
}

impl Ring for GaussRational {
    type Scalar = GaussRational;
    fn zero() -> Self {
        Complex::new(Zero::zero(), Zero::zero())
    }
    fn one() -> Self {
        Complex::new(One::one(), Zero::zero())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn add(&self, o: &Self) -> Self {
        Complex::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn sub(&self, o: &Self) -> Self {
        Complex::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn mul(&self, o: &Self) -> Self {
        if Zero::is_zero(&self.im) && Zero::is_zero(&o.im) {
            return Complex::new(&self.re * &o.re, Zero::zero());
        }
        Complex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
    fn neg(&self) -> Self {
        Complex::new(-&self.re, -&self.im)
    }
    fn scale(&self, s: &Self) -> Self {
        Ring::mul(self, s)
    }
    fn from_scalar(s: Self) -> Self {
        s
    }
    fn involute(&self) -> Self {
        self.clone()
    }
    fn parity(&self) -> Option<u8> {
        Some(0)
    }
    fn max_abs(&self) -> f64 {
        self.magnitude()
    }
    fn body(&self) -> Self {
        self.clone()
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::F64;

    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn to_c64(&self) -> C64 {
        C64::new(*self, 0.0)
    }
    fn from_c64(z: C64) -> Option<Self> {
        (z.im == 0.0).then_some(z.re)
    }
    fn imag_unit() -> Option<Self> {
        None
    }
    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }
    fn from_json(v: &Value) -> Result<Self> {
        f64_from_json(v)
    }
}

impl Ring for f64 {
    type Scalar = f64;
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, s: &Self) -> Self {
        Ring::mul(self, s)
    }
    fn from_scalar(s: Self) -> Self {
        s
    }
    fn involute(&self) -> Self {
        self.clone()
    }
    fn parity(&self) -> Option<u8> {
        Some(0)
    }
    fn max_abs(&self) -> f64 {
        self.magnitude()
    }
    fn body(&self) -> Self {
        self.clone()
    }
}

impl Scalar for C64 {
    const BACKEND: Backend = Backend::C64;

    fn from_i64(n: i64) -> Self {
        C64::new(n as f64, 0.0)
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        C64::new(n as f64 / d as f64, 0.0)
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn inv(&self) -> Option<Self> {
        if Ring::is_zero(self) {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> C64 {
        *self
    }
    fn from_c64(z: C64) -> Option<Self> {
        Some(z)
    }
    fn imag_unit() -> Option<Self> {
        Some(C64::new(0.0, 1.0))
    }
    fn to_json(&self) -> Value {
        if self.im == 0.0 {
            self.re.to_json()
        } else {
            serde_json::json!({"re": self.re.to_json(), "im": self.im.to_json()})
        }
    }
    fn from_json(v: &Value) -> Result<Self> {
        if let Some((re, im)) = complex_parts(v) {
            Ok(C64::new(f64_from_json(re)?, f64_from_json(im)?))
        } else {
            Ok(C64::new(f64_from_json(v)?, 0.0))
        }
    }
}

impl Ring for C64 {
    type Scalar = C64;
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, s: &Self) -> Self {
        Ring::mul(self, s)
    }
    fn from_scalar(s: Self) -> Self {
        s
    }
    fn involute(&self) -> Self {
        self.clone()
    }
    fn parity(&self) -> Option<u8> {
        Some(0)
    }
    fn max_abs(&self) -> f64 {
        self.magnitude()
    }
    fn body(&self) -> Self {
        self.clone()
    }
}

/// Exact conversion of a rational into any backend.
pub fn from_rational<S: Scalar>(r: &BigRational) -> S {
    match S::BACKEND {
        Backend::Rational | Backend::GaussRational => {
            S::from_json(&rat_to_json(r)).expect("rational literal round-trips")
        }
        Backend::F64 | Backend::C64 => {
            S::from_c64(C64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)).expect("real value")
        }
    }
}

/// Converts between backends through `C64` (lossy for exact targets only in
/// the sense of binary float rounding of the source).
pub fn convert<S: Scalar, T: Scalar>(s: &S) -> Option<T> {
    if S::BACKEND == T::BACKEND {
        return T::from_json(&s.to_json()).ok();
    }
    if S::is_exact() && T::is_exact() {
        return T::from_json(&s.to_json()).ok();
    }
    T::from_c64(s.to_c64())
}
