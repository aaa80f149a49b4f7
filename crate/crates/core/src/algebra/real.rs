//! Scalar abstraction shared by the double and extended pipelines.

use std::fmt::Debug;

use num_complex::Complex;
use num_traits::{Num, NumAssign, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real scalar type a pipeline runs in.
///
/// Implemented for `f64` and for [`BigReal`](super::BigReal). Methods take
/// `&self` so the non-`Copy` extended type does not have to be cloned for
/// every elementary function call.
pub trait Real:
    Clone + Debug + PartialOrd + Num + NumAssign + std::ops::Neg<Output = Self> + Send + Sync + 'static
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn pi() -> Self;
    /// Unit roundoff of the current working precision.
    fn epsilon() -> Self;
    /// Significant decimal digits carried by the current working precision.
    fn digits() -> u32;
    fn parse_decimal(s: &str) -> Option<Self>;
    /// Decimal rendering with `Self::digits()` significant digits.
    fn to_decimal(&self) -> String;

    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn atan2(&self, x: &Self) -> Self;
    fn abs(&self) -> Self;
    fn floor(&self) -> Self;
    fn is_finite(&self) -> bool;

    fn from_i64(n: i64) -> Self {
        Self::from_f64(n as f64)
    }

    fn sinh(&self) -> Self {
        let e = self.exp();
        let inv = Self::one() / e.clone();
        (e - inv) / Self::from_f64(2.0)
    }

    fn cosh(&self) -> Self {
        let e = self.exp();
        let inv = Self::one() / e.clone();
        (e + inv) / Self::from_f64(2.0)
    }

    fn powr(&self, e: &Self) -> Self {
        (e.clone() * self.ln()).exp()
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn epsilon() -> Self {
        f64::EPSILON
    }
    fn digits() -> u32 {
        17
    }
    fn parse_decimal(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
    fn to_decimal(&self) -> String {
        format!("{:.16e}", self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn floor(&self) -> Self {
        f64::floor(*self)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn sinh(&self) -> Self {
        f64::sinh(*self)
    }
    fn cosh(&self) -> Self {
        f64::cosh(*self)
    }
    fn powr(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }
}

/// Arithmetic mode of a pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Double,
    Extended { digits: u32 },
}

impl Precision {
    pub const MIN_EXTENDED_DIGITS: u32 = 30;

    pub fn extended(digits: u32) -> Result<Self> {
        if digits < Self::MIN_EXTENDED_DIGITS {
            return Err(Error::InvalidParameter(format!(
                "extended precision needs at least {} digits, got {digits}",
                Self::MIN_EXTENDED_DIGITS
            )));
        }
        Ok(Precision::Extended { digits })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "double" {
            return Ok(Precision::Double);
        }
        if let Some(d) = s.strip_prefix("extended:") {
            let digits = d.parse().map_err(|_| Error::Parse(format!("bad digit count in precision '{s}'")))?;
            return Self::extended(digits);
        }
        if s == "extended" {
            return Self::extended(50);
        }
        Err(Error::Parse(format!("precision must be 'double' or 'extended:<digits>', got '{s}'")))
    }

    /// Mode matching the scalar type `T` at its current working precision.
    pub fn of<T: Real>() -> Self {
        if T::digits() <= 17 {
            Precision::Double
        } else {
            Precision::Extended { digits: T::digits() }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Precision::Double => "double".into(),
            Precision::Extended { digits } => format!("extended:{digits}"),
        }
    }

    pub fn default_tolerance(&self) -> f64 {
        match self {
            Precision::Double => 1e-8,
            Precision::Extended { .. } => 1e-20,
        }
    }
}

pub type Cx<T> = Complex<T>;

pub fn re<T: Real>(x: f64) -> T {
    T::from_f64(x)
}

pub fn cx<T: Real>(re: f64, im: f64) -> Cx<T> {
    Complex::new(T::from_f64(re), T::from_f64(im))
}

pub fn cx_of<T: Real>(z: Complex<f64>) -> Cx<T> {
    cx(z.re, z.im)
}

pub fn cx_real<T: Real>(x: T) -> Cx<T> {
    Complex::new(x, T::zero())
}

pub fn cx_to_f64<T: Real>(z: &Cx<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

pub fn cabs<T: Real>(z: &Cx<T>) -> T {
    let (a, b) = (z.re.abs(), z.im.abs());
    let (big, small) = if a > b { (a, b) } else { (b, a) };
    if big.is_zero() {
        return T::zero();
    }
    let q = small / big.clone();
    big * (T::one() + q.clone() * q).sqrt()
}

pub fn cabs_f64<T: Real>(z: &Cx<T>) -> f64 {
    cabs(z).to_f64()
}

pub fn carg<T: Real>(z: &Cx<T>) -> T {
    z.im.atan2(&z.re)
}

/// `e^{iθ}`.
pub fn cis<T: Real>(theta: &T) -> Cx<T> {
    Complex::new(theta.cos(), theta.sin())
}

pub fn cexp<T: Real>(z: &Cx<T>) -> Cx<T> {
    cis(&z.im) * z.re.exp()
}

/// Principal logarithm.
pub fn cln<T: Real>(z: &Cx<T>) -> Cx<T> {
    Complex::new(cabs(z).ln(), carg(z))
}

pub fn csin<T: Real>(z: &Cx<T>) -> Cx<T> {
    Complex::new(z.re.sin() * z.im.cosh(), z.re.cos() * z.im.sinh())
}

pub fn csqrt<T: Real>(z: &Cx<T>) -> Cx<T> {
    let r = cabs(z);
    if r.is_zero() {
        return Cx::zero();
    }
    let two = T::from_f64(2.0);
    let a = ((r.clone() + z.re.clone()) / two.clone()).sqrt();
    let b = ((r - z.re.clone()) / two).sqrt();
    if z.im < T::zero() {
        Complex::new(a, -b)
    } else {
        Complex::new(a, b)
    }
}
