//! Extended-precision real and complex arithmetic.
//!
//! Every computation carries its precision explicitly through a
//! [`PrecisionContext`]. Reals are MPFR floats ([`rug::Float`]); [`Complex`]
//! is a plain pair of them with the handful of operations the special
//! functions need.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Extended-precision real.
pub type Real = Float;

/// Lowest accepted `digits`.
pub const MIN_DIGITS: u32 = 15;
/// Guard digits added to every context by default.
pub const DEFAULT_GUARD_DIGITS: u32 = 10;
/// Lowest accepted `guard_digits`.
pub const MIN_GUARD_DIGITS: u32 = 5;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Decimal working precision shared by all evaluations of one run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrecisionContext {
    digits: u32,
    guard_digits: u32,
}

impl PrecisionContext {
    /// A context with `digits` significant decimal digits and the default
    /// ten guard digits.
    pub fn new(digits: u32) -> Result<Self> {
        Self::with_guard(digits, DEFAULT_GUARD_DIGITS)
    }

    pub fn with_guard(digits: u32, guard_digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::DigitsTooLow(digits));
        }
        if guard_digits < MIN_GUARD_DIGITS {
            return Err(Error::GuardTooLow(guard_digits));
        }
        Ok(Self {
            digits,
            guard_digits,
        })
    }

    /// Default precision for the `N`-th truncated Riemann approximate:
    /// `max(25, 20N - 10)` digits.
    pub fn for_xi(n: u32) -> Self {
        let digits = (20 * n as i64 - 10).max(25) as u32;
        Self::new(digits).expect("digits >= 25")
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    /// Same guard digits, `extra` more significant digits.
    pub fn widened(&self, extra: u32) -> Self {
        Self {
            digits: self.digits + extra,
            guard_digits: self.guard_digits,
        }
    }

    /// Binary precision of every value produced under this context.
    pub fn bits(&self) -> u32 {
        digits_to_bits(self.digits + self.guard_digits)
    }

    /// `10^(1 - digits)`.
    pub fn eps(&self) -> Real {
        pow10(self.bits(), 1 - self.digits as i32)
    }

    /// `eps` as an `f64` (may underflow to a subnormal or zero for very
    /// large `digits`; only use for coarse comparisons).
    pub fn eps_f64(&self) -> f64 {
        10f64.powi(1 - self.digits as i32)
    }

    pub fn real(&self, value: f64) -> Real {
        Float::with_val(self.bits(), value)
    }

    pub fn int(&self, value: i64) -> Real {
        Float::with_val(self.bits(), value)
    }

    pub fn ratio(&self, num: i64, den: i64) -> Real {
        Float::with_val(self.bits(), num) / den
    }

    /// Parses a decimal literal exactly rounded to working precision.
    pub fn parse(&self, text: &str) -> Result<Real> {
        parse_real(self.bits(), text)
    }

    pub fn pi(&self) -> Real {
        Float::with_val(self.bits(), Constant::Pi)
    }

    pub fn zero(&self) -> Complex {
        Complex::zero(self.bits())
    }

    pub fn one(&self) -> Complex {
        Complex::from_f64(self.bits(), 1.0, 0.0)
    }

    pub fn complex(&self, re: f64, im: f64) -> Complex {
        Complex::from_f64(self.bits(), re, im)
    }

    /// Parses `re` and `im` decimal literals.
    pub fn parse_complex(&self, re: &str, im: &str) -> Result<Complex> {
        Ok(Complex::new(self.parse(re)?, self.parse(im)?))
    }
}

pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32 + 8
}

pub fn bits_to_digits(bits: u32) -> u32 {
    (bits as f64 / LOG2_10).floor() as u32
}

/// `10^exp` at `bits` of precision.
pub fn pow10(bits: u32, exp: i32) -> Real {
    let ten = Float::with_val(bits, 10);
    ten.pow(exp)
}

pub fn parse_real(bits: u32, text: &str) -> Result<Real> {
    let parsed = Float::parse(text.trim()).map_err(|e| Error::Parse(format!("{text:?}: {e}")))?;
    Ok(Float::with_val(bits, parsed))
}

/// `(sin x, cos x)` at `bits`.
pub fn sin_cos(x: &Real, bits: u32) -> (Real, Real) {
    let mut s = Float::with_val(bits, x);
    let mut c = Float::new(bits);
    s.sin_cos_mut(&mut c);
    (s, c)
}

/// `(sinh x, cosh x)` at `bits`.
pub fn sinh_cosh(x: &Real, bits: u32) -> (Real, Real) {
    let mut s = Float::with_val(bits, x);
    let mut c = Float::new(bits);
    s.sinh_cosh_mut(&mut c);
    (s, c)
}

/// Decimal magnitude `log10|x|` computed without overflow; `-inf` for zero.
pub fn log10_abs(x: &Real) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (mantissa, exp) = x.to_f64_exp();
    mantissa.abs().log10() + exp as f64 * std::f64::consts::LOG10_2
}

/// Natural log of `|x|` without overflow.
pub fn ln_abs_f64(x: &Real) -> f64 {
    log10_abs(x) * std::f64::consts::LN_10
}

/// Formats `x` with `digits` significant digits, fixed-point when the
/// magnitude is moderate and scientific otherwise. No digits are dropped.
pub fn format_real(x: &Real, digits: usize) -> String {
    let (neg, mantissa, exp) = x.to_sign_string_exp(10, Some(digits.max(1)));
    let sign = if neg { "-" } else { "" };
    let exp = match exp {
        Some(e) => e,
        None => return format!("{sign}{mantissa}"),
    };
    // value = 0.mantissa * 10^exp
    if (-6..=40).contains(&exp) {
        if exp <= 0 {
            let zeros = "0".repeat((-exp) as usize);
            format!("{sign}0.{zeros}{mantissa}")
        } else {
            let exp = exp as usize;
            if mantissa.len() <= exp {
                let pad = "0".repeat(exp - mantissa.len());
                format!("{sign}{mantissa}{pad}")
            } else {
                format!("{sign}{}.{}", &mantissa[..exp], &mantissa[exp..])
            }
        }
    } else {
        format!("{sign}{}.{}e{}", &mantissa[..1], &mantissa[1..], exp - 1)
    }
}

/// A complex number with MPFR parts of equal precision.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

/// The spec-level name of [`Complex`].
pub type ComplexValue = Complex;

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Self { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        Self::new(Float::new(bits), Float::new(bits))
    }

    pub fn from_f64(bits: u32, re: f64, im: f64) -> Self {
        Self::new(Float::with_val(bits, re), Float::with_val(bits, im))
    }

    pub fn from_real(re: Real) -> Self {
        let im = Float::new(re.prec());
        Self { re, im }
    }

    /// `i`.
    pub fn i(bits: u32) -> Self {
        Self::from_f64(bits, 0.0, 1.0)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Copy rounded to `bits`.
    pub fn with_prec(&self, bits: u32) -> Self {
        Self::new(Float::with_val(bits, &self.re), Float::with_val(bits, &self.im))
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), Float::with_val(self.im.prec(), -&self.im))
    }

    pub fn abs(&self) -> Real {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn norm_sqr(&self) -> Real {
        let p = self.prec();
        let mut n = Float::with_val(p, self.re.square_ref());
        n += Float::with_val(p, self.im.square_ref());
        n
    }

    /// Principal argument in `(-pi, pi]`.
    pub fn arg(&self) -> Real {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    /// `log10 |z|`, overflow-free.
    pub fn log10_abs(&self) -> f64 {
        let a = log10_abs(&self.re);
        let b = log10_abs(&self.im);
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        hi + 0.5 * (1.0 + 10f64.powf(2.0 * (lo - hi))).log10()
    }

    /// Approximate `(re, im)` in `f64`; saturates for huge magnitudes.
    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// `arg z` as `f64`.
    pub fn arg_f64(&self) -> f64 {
        let (mr, er) = self.re.to_f64_exp();
        let (mi, ei) = self.im.to_f64_exp();
        if self.is_zero() {
            return 0.0;
        }
        // scale both parts to a common exponent before atan2
        let e = er.max(ei);
        let re = mr * 2f64.powi(er - e);
        let im = mi * 2f64.powi(ei - e);
        im.atan2(re)
    }

    pub fn scale(&self, k: &Real) -> Self {
        let p = self.prec();
        Self::new(
            Float::with_val(p, &self.re * k),
            Float::with_val(p, &self.im * k),
        )
    }

    pub fn scale_f64(&self, k: f64) -> Self {
        let p = self.prec();
        Self::new(
            Float::with_val(p, &self.re * k),
            Float::with_val(p, &self.im * k),
        )
    }

    /// `i * z`.
    pub fn mul_i(&self) -> Self {
        Self::new(Float::with_val(self.im.prec(), -&self.im), self.re.clone())
    }

    pub fn add_real(&self, x: &Real) -> Self {
        Self::new(Float::with_val(self.prec(), &self.re + x), self.im.clone())
    }

    pub fn sqr(&self) -> Self {
        let p = self.prec();
        let re = Float::with_val(p, self.re.mul_sub_mul_ref(&self.re, &self.im, &self.im));
        let mut im = Float::with_val(p, &self.re * &self.im);
        im <<= 1;
        Self::new(re, im)
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        let p = self.prec();
        Self::new(
            Float::with_val(p, &self.re / &n),
            Float::with_val(p, -Float::with_val(p, &self.im / &n)),
        )
    }

    /// In-place `self *= other`.
    pub fn mul_assign_ref(&mut self, other: &Complex) {
        let p = self.prec();
        let re = Float::with_val(p, self.re.mul_sub_mul_ref(&other.re, &self.im, &other.im));
        let im = Float::with_val(p, self.re.mul_add_mul_ref(&other.im, &self.im, &other.re));
        self.re = re;
        self.im = im;
    }

    pub fn add_assign_ref(&mut self, other: &Complex) {
        self.re += &other.re;
        self.im += &other.im;
    }

    pub fn sub_assign_ref(&mut self, other: &Complex) {
        self.re -= &other.re;
        self.im -= &other.im;
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let modulus = Float::with_val(p, self.re.exp_ref());
        let (sin, cos) = sin_cos(&self.im, p);
        Self::new(cos * &modulus, sin * &modulus)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        let re = Float::with_val(p, self.abs().ln_ref());
        Self::new(re, self.arg())
    }

    /// `sin z`.
    pub fn sin(&self) -> Self {
        let p = self.prec();
        let (s, c) = sin_cos(&self.re, p);
        let (sh, ch) = sinh_cosh(&self.im, p);
        Self::new(s * &ch, c * &sh)
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.is_zero() {
            return Self::zero(p);
        }
        let r = self.abs();
        // sqrt((r + |re|)/2) then the other part by division
        let mut t = Float::with_val(p, self.re.abs_ref()) + &r;
        t >>= 1;
        t.sqrt_mut();
        let mut other = Float::with_val(p, &self.im / &t);
        other >>= 1;
        if self.re.is_sign_positive() {
            Self::new(t, other)
        } else if self.im.is_sign_negative() {
            Self::new(other.abs(), -t)
        } else {
            Self::new(other.abs(), t)
        }
    }

    pub fn powi(&self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Complex::from_f64(self.prec(), 1.0, 0.0);
        while e > 0 {
            if e & 1 == 1 {
                acc.mul_assign_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// Renders with `digits` significant digits per part, e.g.
    /// `43.138 + 3.2809 I`.
    pub fn display(&self, digits: usize) -> String {
        let re = format_real(&self.re, digits);
        if self.im.is_zero() {
            return re;
        }
        let im = format_real(&Float::with_val(self.im.prec(), self.im.abs_ref()), digits);
        let sign = if self.im.is_sign_negative() { '-' } else { '+' };
        format!("{re} {sign} {im} I")
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(bits_to_digits(self.prec()) as usize);
        f.write_str(&self.display(digits))
    }
}

impl<'a> Add<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(
            Float::with_val(p, &self.re + &rhs.re),
            Float::with_val(p, &self.im + &rhs.im),
        )
    }
}

impl<'a> Sub<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(
            Float::with_val(p, &self.re - &rhs.re),
            Float::with_val(p, &self.im - &rhs.im),
        )
    }
}

impl<'a> Mul<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(
            Float::with_val(p, self.re.mul_sub_mul_ref(&rhs.re, &self.im, &rhs.im)),
            Float::with_val(p, self.re.mul_add_mul_ref(&rhs.im, &self.im, &rhs.re)),
        )
    }
}

impl<'a> Div<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn div(self, rhs: &Complex) -> Complex {
        let p = self.prec();
        let n = rhs.norm_sqr();
        let re = Float::with_val(p, self.re.mul_add_mul_ref(&rhs.re, &self.im, &rhs.im));
        let im = Float::with_val(p, self.im.mul_sub_mul_ref(&rhs.re, &self.re, &rhs.im));
        Complex::new(re / &n, im / &n)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(
            Float::with_val(self.re.prec(), -&self.re),
            Float::with_val(self.im.prec(), -&self.im),
        )
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Complex> for Complex {
            type Output = Complex;
            fn $m(self, rhs: Complex) -> Complex {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Complex> for Complex {
            type Output = Complex;
            fn $m(self, rhs: &Complex) -> Complex {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

/// `a^s = exp(s ln a)` for real `a > 0`.
pub fn complex_pow(a: &Real, s: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    if a.cmp0() != Some(Ordering::Greater) {
        return Err(Error::InvalidArgument(format!(
            "complex_pow base must be positive, got {}",
            format_real(a, 17)
        )));
    }
    let bits = ctx.bits().max(a.prec());
    // |s ln a| may be large; widen so the exponent keeps full relative accuracy
    let magnitude = s.log10_abs().max(0.0) + log10_abs(a).abs().max(1.0).log10();
    let work = bits + digits_to_bits(magnitude.ceil().max(0.0) as u32);
    let ln_a = Float::with_val(work, a.ln_ref());
    let s_work = s.with_prec(work);
    let value = s_work.scale(&ln_a).exp().with_prec(bits);
    if !value.is_finite() {
        return Err(Error::NonFinite("complex_pow"));
    }
    Ok(value)
}

/// `|x - y| <= tol * max(1, |x|, |y|)`.
pub fn near_equal(x: &Complex, y: &Complex, tol: f64) -> bool {
    let diff = x - y;
    let scale = 0f64.max(x.log10_abs()).max(y.log10_abs());
    let d = diff.log10_abs();
    d == f64::NEG_INFINITY || d <= tol.log10() + scale
}

/// Bits needed to hold a decimal literal without loss of its digits.
pub fn bits_for_literal(text: &str) -> u32 {
    let digits = text.chars().take_while(|c| *c != 'e' && *c != 'E').filter(char::is_ascii_digit).count();
    digits_to_bits(digits.max(17) as u32) + 16
}

/// Full-precision decimal rendering used by every serialized document.
pub fn to_decimal(x: &Real) -> String {
    format_real(x, bits_to_digits(x.prec()) as usize)
}

/// Serde adapter: reals as decimal strings carrying all their digits.
pub mod serde_real {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Real, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&to_decimal(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Real, D::Error> {
        let text = String::deserialize(d)?;
        parse_real(bits_for_literal(&text), &text).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Complex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Complex", 2)?;
        st.serialize_field("re", &to_decimal(&self.re))?;
        st.serialize_field("im", &to_decimal(&self.im))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Complex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Parts {
            re: String,
            im: String,
        }
        let p = Parts::deserialize(d)?;
        let bits = bits_for_literal(&p.re).max(bits_for_literal(&p.im));
        let re = parse_real(bits, &p.re).map_err(serde::de::Error::custom)?;
        let im = parse_real(bits, &p.im).map_err(serde::de::Error::custom)?;
        Ok(Complex::new(re, im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_eps_matches_digits() {
        let ctx = PrecisionContext::new(25).unwrap();
        assert_eq!(ctx.guard_digits(), 10);
        let expected = Float::with_val(ctx.bits(), Float::parse("1e-24").unwrap());
        let rel = Float::with_val(ctx.bits(), (ctx.eps() - &expected) / &expected);
        assert!(rel.abs() < 1e-40);
        let ctx35 = PrecisionContext::new(35).unwrap();
        assert!((log10_abs(&ctx35.eps()) + 34.0).abs() < 1e-12);
    }

    #[test]
    fn context_rejects_low_digits() {
        assert_eq!(PrecisionContext::new(14), Err(Error::DigitsTooLow(14)));
        assert!(PrecisionContext::with_guard(20, 4).is_err());
    }

    #[test]
    fn xi_default_digits() {
        assert_eq!(PrecisionContext::for_xi(1).digits(), 25);
        assert_eq!(PrecisionContext::for_xi(2).digits(), 30);
        assert_eq!(PrecisionContext::for_xi(10).digits(), 190);
    }

    #[test]
    fn pow_of_one_is_one() {
        let ctx = PrecisionContext::new(30).unwrap();
        let s = ctx.complex(3.7, -12.5);
        let v = complex_pow(&ctx.int(1), &s, &ctx).unwrap();
        assert!(near_equal(&v, &ctx.one(), 1e-40));
    }

    #[test]
    fn euler_identity() {
        let ctx = PrecisionContext::new(40).unwrap();
        let e = Float::with_val(ctx.bits(), 1).exp();
        let s = Complex::new(ctx.int(0), ctx.pi());
        let v = complex_pow(&e, &s, &ctx).unwrap();
        let minus_one = ctx.complex(-1.0, 0.0);
        assert!(near_equal(&v, &minus_one, 10.0 * ctx.eps_f64()));
    }

    #[test]
    fn pow_rejects_nonpositive_base() {
        let ctx = PrecisionContext::new(20).unwrap();
        let s = ctx.complex(1.0, 0.0);
        assert!(complex_pow(&ctx.int(0), &s, &ctx).is_err());
        assert!(complex_pow(&ctx.int(-2), &s, &ctx).is_err());
    }

    #[test]
    fn near_equal_examples() {
        let ctx = PrecisionContext::new(40).unwrap();
        let z = ctx.complex(1.5, -2.0);
        assert!(near_equal(&z, &z, 1e-30));
        let tiny = Complex::new(ctx.parse("1e-30").unwrap(), ctx.int(0));
        assert!(near_equal(&ctx.zero(), &tiny, 1e-20));
        let one_plus = Complex::new(ctx.parse("1.00001").unwrap(), ctx.int(0));
        assert!(!near_equal(&ctx.one(), &one_plus, 1e-10));
    }

    #[test]
    fn formatting_keeps_all_digits() {
        let ctx = PrecisionContext::new(30).unwrap();
        let x = ctx.parse("14.04543957882981756479858").unwrap();
        assert_eq!(format_real(&x, 25), "14.04543957882981756479858");
        let y = ctx.parse("-0.0000412").unwrap();
        assert_eq!(format_real(&y, 3), "-0.0000412");
        let big = ctx.parse("1.5e60").unwrap();
        assert_eq!(format_real(&big, 2), "1.5e60");
    }

    #[test]
    fn sqrt_and_powi() {
        let ctx = PrecisionContext::new(30).unwrap();
        let z = ctx.complex(-3.0, 4.0);
        let r = z.sqrt();
        assert!(near_equal(&r, &ctx.complex(1.0, 2.0), 1e-35));
        let cube = z.powi(3);
        assert!(near_equal(&cube, &(&(&z * &z) * &z), 1e-35));
        let inv = z.powi(-2);
        assert!(near_equal(&(&inv * &z.sqr()), &ctx.one(), 1e-35));
    }
}
