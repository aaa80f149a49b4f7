//! Extended-precision real scalar backed by `astro-float`.
//!
//! The working precision lives in a thread-local that a [`PrecisionGuard`]
//! sets for the duration of a computation. Every arithmetic result is
//! rounded to that precision.

use std::cell::{Cell, RefCell};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_traits::{Num, One, Zero};

use super::real::Real;

const RM: RoundingMode = RoundingMode::ToEven;
const DEFAULT_DIGITS: u32 = 50;
const GUARD_BITS: usize = 64;

thread_local! {
    static DIGITS: Cell<u32> = const { Cell::new(DEFAULT_DIGITS) };
    static BITS: Cell<usize> = Cell::new(bits_for_digits(DEFAULT_DIGITS));
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

/// Mantissa bits used for `digits` significant decimal digits, guard bits included.
pub fn bits_for_digits(digits: u32) -> usize {
    let raw = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS;
    raw.div_ceil(64) * 64
}

fn bits() -> usize {
    BITS.with(|b| b.get())
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Sets the extended working precision of the current thread until dropped.
pub struct PrecisionGuard {
    prev_digits: u32,
    prev_bits: usize,
}

impl PrecisionGuard {
    pub fn new(digits: u32) -> Self {
        let prev_digits = DIGITS.with(|d| d.replace(digits));
        let prev_bits = BITS.with(|b| b.replace(bits_for_digits(digits)));
        PrecisionGuard { prev_digits, prev_bits }
    }
}

impl Drop for PrecisionGuard {
    fn drop(&mut self) {
        DIGITS.with(|d| d.set(self.prev_digits));
        BITS.with(|b| b.set(self.prev_bits));
    }
}

/// Runs `f` with the extended working precision set to `digits`.
pub fn with_digits<R>(digits: u32, f: impl FnOnce() -> R) -> R {
    let _g = PrecisionGuard::new(digits);
    f()
}

#[derive(Clone)]
pub struct BigReal(BigFloat);

impl BigReal {
    pub fn inner(&self) -> &BigFloat {
        &self.0
    }

    fn wrap(x: BigFloat) -> Self {
        BigReal(x)
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal())
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal())
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $atr:ident, $af:ident, $call:ident) => {
        impl $tr for BigReal {
            type Output = BigReal;
            fn $f(self, rhs: BigReal) -> BigReal {
                BigReal::wrap(self.0.$call(&rhs.0, bits(), RM))
            }
        }
        impl<'a> $tr<&'a BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $f(self, rhs: &'a BigReal) -> BigReal {
                BigReal::wrap(self.0.$call(&rhs.0, bits(), RM))
            }
        }
        impl $atr for BigReal {
            fn $af(&mut self, rhs: BigReal) {
                self.0 = self.0.$call(&rhs.0, bits(), RM);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, add);
binop!(Sub, sub, SubAssign, sub_assign, sub);
binop!(Mul, mul, MulAssign, mul_assign, mul);
binop!(Div, div, DivAssign, div_assign, div);

impl Rem for BigReal {
    type Output = BigReal;
    fn rem(self, rhs: BigReal) -> BigReal {
        let q = (self.clone() / rhs.clone()).0.int();
        self - rhs * BigReal(q)
    }
}

impl RemAssign for BigReal {
    fn rem_assign(&mut self, rhs: BigReal) {
        *self = self.clone() % rhs;
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(self.0.neg())
    }
}

impl Zero for BigReal {
    fn zero() -> Self {
        BigReal(BigFloat::from_f64(0.0, bits()))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for BigReal {
    fn one() -> Self {
        BigReal(BigFloat::from_f64(1.0, bits()))
    }
}

impl Num for BigReal {
    type FromStrRadixErr = String;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, String> {
        if radix != 10 {
            return Err(format!("radix {radix} unsupported"));
        }
        Self::parse_decimal(s).ok_or_else(|| format!("cannot parse '{s}'"))
    }
}

impl Real for BigReal {
    fn from_f64(x: f64) -> Self {
        BigReal(BigFloat::from_f64(x, bits()))
    }

    fn to_f64(&self) -> f64 {
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.0.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        match self.0.as_raw_parts() {
            Some((words, _, sign, exp, _)) => {
                let top = match words.last() {
                    Some(&w) if w != 0 => w,
                    _ => return 0.0,
                };
                let e = exp - 64;
                let mut v = top as f64;
                // split the scaling so neither factor overflows
                let half = e / 2;
                v *= 2f64.powi(half);
                v *= 2f64.powi(e - half);
                if sign == Sign::Neg {
                    -v
                } else {
                    v
                }
            }
            None => f64::NAN,
        }
    }

    fn pi() -> Self {
        BigReal(with_consts(|cc| cc.pi(bits(), RM)))
    }

    fn epsilon() -> Self {
        BigReal(BigFloat::from_f64(0.5, bits()).powi(bits(), bits(), RM))
    }

    fn digits() -> u32 {
        DIGITS.with(|d| d.get())
    }

    fn parse_decimal(s: &str) -> Option<Self> {
        let v = with_consts(|cc| BigFloat::parse(s.trim(), Radix::Dec, bits(), RM, cc));
        if v.is_nan() {
            None
        } else {
            Some(BigReal(v))
        }
    }

    fn to_decimal(&self) -> String {
        let raw = with_consts(|cc| self.0.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into());
        round_scientific(&raw, Self::digits() as usize)
    }

    fn sqrt(&self) -> Self {
        BigReal(self.0.sqrt(bits(), RM))
    }

    fn exp(&self) -> Self {
        BigReal(with_consts(|cc| self.0.exp(bits(), RM, cc)))
    }

    fn ln(&self) -> Self {
        BigReal(with_consts(|cc| self.0.ln(bits(), RM, cc)))
    }

    fn sin(&self) -> Self {
        BigReal(with_consts(|cc| self.0.sin(bits(), RM, cc)))
    }

    fn cos(&self) -> Self {
        BigReal(with_consts(|cc| self.0.cos(bits(), RM, cc)))
    }

    fn atan2(&self, x: &Self) -> Self {
        let y = self;
        if x.is_zero() {
            let half_pi = Self::pi() / Self::from_f64(2.0);
            return if y.0.is_negative() {
                -half_pi
            } else if y.is_zero() {
                Self::zero()
            } else {
                half_pi
            };
        }
        let base = BigReal(with_consts(|cc| (y.clone() / x.clone()).0.atan(bits(), RM, cc)));
        if x.0.is_positive() {
            base
        } else if y.0.is_negative() {
            base - Self::pi()
        } else {
            base + Self::pi()
        }
    }

    fn abs(&self) -> Self {
        BigReal(self.0.abs())
    }

    fn floor(&self) -> Self {
        BigReal(self.0.floor())
    }

    fn is_finite(&self) -> bool {
        !(self.0.is_nan() || self.0.is_inf())
    }

    fn sinh(&self) -> Self {
        BigReal(with_consts(|cc| self.0.sinh(bits(), RM, cc)))
    }

    fn cosh(&self) -> Self {
        BigReal(with_consts(|cc| self.0.cosh(bits(), RM, cc)))
    }

    fn powr(&self, e: &Self) -> Self {
        BigReal(with_consts(|cc| self.0.pow(&e.0, bits(), RM, cc)))
    }
}

/// Rounds a `d.ddd…e±x` string to `sig` significant digits.
pub(crate) fn round_scientific(raw: &str, sig: usize) -> String {
    let raw = raw.trim();
    let (neg, body) = match raw.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, raw.strip_prefix('+').unwrap_or(raw)),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    let mut digits: Vec<u8> =
        int_part.bytes().chain(frac_part.bytes()).filter(|b| b.is_ascii_digit()).map(|b| b - b'0').collect();
    // exponent of the first digit
    let mut e10 = exp + int_part.len() as i64 - 1;
    let lead = digits.iter().position(|&d| d != 0);
    let Some(lead) = lead else {
        return format!("{}e+0", "0.".to_string() + &"0".repeat(sig.saturating_sub(1)));
    };
    digits.drain(..lead);
    e10 -= lead as i64;
    let round_up = digits.get(sig).is_some_and(|&d| d >= 5);
    digits.truncate(sig);
    digits.resize(sig, 0);
    if round_up {
        let mut i = sig;
        loop {
            if i == 0 {
                digits.insert(0, 1);
                digits.truncate(sig);
                e10 += 1;
                break;
            }
            i -= 1;
            if digits[i] == 9 {
                digits[i] = 0;
            } else {
                digits[i] += 1;
                break;
            }
        }
    }
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push((b'0' + digits[0]) as char);
    if sig > 1 {
        s.push('.');
        for d in &digits[1..] {
            s.push((b'0' + d) as char);
        }
    }
    s.push_str(&format!("e{}{}", if e10 < 0 { '-' } else { '+' }, e10.abs()));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guard_restores_previous_precision() {
        let before = BigReal::digits();
        {
            let _g = PrecisionGuard::new(80);
            assert_eq!(BigReal::digits(), 80);
        }
        assert_eq!(BigReal::digits(), before);
    }

    #[test]
    fn sqrt_two_to_sixty_digits() {
        with_digits(60, || {
            let s = BigReal::from_f64(2.0).sqrt();
            let expected = "1.41421356237309504880168872420969807856967187537694807317668";
            let got = s.to_decimal();
            assert_eq!(&got[..expected.len() - 1], &expected[..expected.len() - 1]);
            let back = s.clone() * s;
            let err = (back - BigReal::from_f64(2.0)).abs();
            assert!(err < BigReal::parse_decimal("1e-60").unwrap());
        });
    }

    #[test]
    fn conversions_round_trip() {
        with_digits(40, || {
            for &x in &[0.0, 1.0, -1.25e-7, 3.5e12, -0.1, 6.02e23, 1e-300] {
                assert_eq!(BigReal::from_f64(x).to_f64(), x);
            }
        });
    }

    #[test]
    fn atan2_quadrants() {
        with_digits(40, || {
            let cases = [(1.0, 1.0), (1.0, -1.0), (-1.0, -1.0), (-1.0, 1.0), (2.0, 0.0), (-2.0, 0.0), (0.0, -3.0)];
            for (y, x) in cases {
                let got = BigReal::from_f64(y).atan2(&BigReal::from_f64(x)).to_f64();
                assert!((got - f64::atan2(y, x)).abs() < 1e-15, "{y} {x}");
            }
        });
    }

    #[test]
    fn pi_and_transcendentals() {
        with_digits(50, || {
            let pi = BigReal::pi();
            let s = pi.sin();
            assert!(s.abs() < BigReal::parse_decimal("1e-50").unwrap());
            let e = BigReal::one().exp();
            assert!((e.ln() - BigReal::one()).abs() < BigReal::parse_decimal("1e-50").unwrap());
            assert!(pi.to_decimal().starts_with("3.14159265358979323846264338327950288419716939937"));
        });
    }

    #[test]
    fn rounding_of_decimal_strings() {
        assert_eq!(round_scientific("1.2345e+0", 3), "1.23e+0");
        assert_eq!(round_scientific("9.996e-3", 3), "1.00e-2");
        assert_eq!(round_scientific("-0.000123456e+0", 2), "-1.2e-4");
        assert_eq!(round_scientific("0.0", 3), "0.00e+0");
    }
}
