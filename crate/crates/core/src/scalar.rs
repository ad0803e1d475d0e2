//! Exact scalars: rationals and Gaussian rationals.
//!
//! `Rational` keeps an `i64` fast path and falls back to arbitrary precision
//! on overflow. Values are always reduced with a positive denominator, so the
//! derived equality is value equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ScalarError;

/// The coefficient field of an input document.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldTag {
    Rational,
    GaussianRational,
}

impl FieldTag {
    pub fn as_str(self) -> &'static str {
        match self {
            FieldTag::Rational => "rational",
            FieldTag::GaussianRational => "gaussian_rational",
        }
    }

    /// The smallest field containing both.
    pub fn join(self, other: FieldTag) -> FieldTag {
        if self == FieldTag::GaussianRational || other == FieldTag::GaussianRational {
            FieldTag::GaussianRational
        } else {
            FieldTag::Rational
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Rational {
    /// numerator, denominator; denominator > 0 and gcd = 1.
    Small(i64, i64),
    Big(BigRational),
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub fn zero() -> Self {
        Rational::Small(0, 1)
    }

    pub fn one() -> Self {
        Rational::Small(1, 1)
    }

    pub fn from_int(n: i64) -> Self {
        Rational::Small(n, 1)
    }

    /// Builds `num/den`, reducing. Fails when `den == 0`.
    pub fn new(num: i64, den: i64) -> Result<Self, ScalarError> {
        if den == 0 {
            return Err(ScalarError::ZeroDenominator);
        }
        Ok(Self::from_i128(num as i128, den as i128))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::ZeroDenominator);
        }
        Ok(Self::from_big(BigRational::new(num, den)))
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let g = gcd_i128(num, den).max(1);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::Big(BigRational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        // BigRational::new reduces and normalizes the sign already.
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(r),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(n, _) => BigInt::from(*n),
            Rational::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(_, d) => BigInt::from(*d),
            Rational::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rational::Small(1, 1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rational::Small(n, _) => *n < 0,
            Rational::Big(r) => r.is_negative(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        match self {
            Rational::Small(0, _) => Err(ScalarError::DivisionByZero),
            Rational::Small(n, d) => Ok(Self::from_i128(*d as i128, *n as i128)),
            Rational::Big(r) => Ok(Self::from_big(r.recip())),
        }
    }

    /// Parses `int` or `int/posint`.
    pub fn parse(text: &str) -> Result<Self, ScalarError> {
        parse_rational_at(text, 0)
    }
}

fn parse_rational_at(text: &str, base: usize) -> Result<Rational, ScalarError> {
    let bad = |off: usize, msg: &str| ScalarError::Parse { offset: base + off, message: msg.to_string() };
    let (neg, body, body_off) = match text.strip_prefix('-') {
        Some(rest) => (true, rest, 1),
        None => (false, text, 0),
    };
    let (num_txt, den_txt) = match body.find('/') {
        Some(p) => (&body[..p], Some((&body[p + 1..], body_off + p + 1))),
        None => (body, None),
    };
    let digits_ok = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits_ok(num_txt) {
        let off = num_txt.bytes().position(|b| !b.is_ascii_digit()).unwrap_or(0);
        return Err(bad(body_off + off, "expected digits"));
    }
    let mut num = BigInt::from_str(num_txt).map_err(|_| bad(body_off, "bad integer"))?;
    if neg {
        num = -num;
    }
    let den = match den_txt {
        Some((d, off)) => {
            if !digits_ok(d) {
                let p = d.bytes().position(|b| !b.is_ascii_digit()).unwrap_or(0);
                return Err(bad(off + p, "expected positive integer denominator"));
            }
            BigInt::from_str(d).map_err(|_| bad(off, "bad integer"))?
        }
        None => BigInt::one(),
    };
    Rational::from_bigints(num, den)
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::Small(n, 1)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Rational::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &'a Rational) -> Rational {
        match (self, rhs) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                if b == d {
                    Rational::from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    Rational::from_i128(
                        (*a as i128) * (*d as i128) + (*c as i128) * (*b as i128),
                        (*b as i128) * (*d as i128),
                    )
                }
            }
            _ => Rational::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &'a Rational) -> Rational {
        match (self, rhs) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                Rational::from_i128((*a as i128) * (*c as i128), (*b as i128) * (*d as i128))
            }
            _ => Rational::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Small(n, d) => Rational::from_i128(-(*n as i128), *d as i128),
            Rational::Big(r) => Rational::from_big(-r.clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &'a Rational) -> Rational {
        self + &(-rhs)
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        self * &rhs.inv().expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Rational, Add, add);
forward_owned!(Rational, Sub, sub);
forward_owned!(Rational, Mul, mul);
forward_owned!(Rational, Div, div);

/// An element `re + im·i` of ℚ(i). Elements of ℚ have `im == 0`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

/// The scalar type used throughout the engine.
pub type Scalar = GaussianRational;

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        GaussianRational { re: Rational::zero(), im: Rational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational { re: Rational::from_int(n), im: Rational::zero() }
    }

    pub fn from_rational(r: Rational) -> Self {
        GaussianRational { re: r, im: Rational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -&self.im }
    }

    /// `x · conj(x)`, a nonnegative rational.
    pub fn norm(&self) -> Rational {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let n = self.norm().inv()?;
        Ok(GaussianRational { re: &self.re * &n, im: -&(&self.im * &n) })
    }

    /// `(-1)^k · self`.
    pub fn signed(&self, negate: bool) -> Self {
        if negate {
            -self
        } else {
            self.clone()
        }
    }

    pub fn field(&self) -> FieldTag {
        if self.is_real() {
            FieldTag::Rational
        } else {
            FieldTag::GaussianRational
        }
    }

    /// Parses the scalar grammar and checks the value lies in `field`.
    pub fn parse(text: &str, field: FieldTag) -> Result<Self, ScalarError> {
        parse_scalar(text, field)
    }

    /// Canonical text: no `+0i`, `1i` written `i`.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

/// Parses `[-]rat | [-]rat"i" | rat("+"|"-")rat"i" | "i" | "-i"` with `rat = int["/"posint]`.
///
/// `rat("+"|"-")"i"` is also accepted so that canonical renderings such as
/// `1+i` parse back.
pub fn parse_scalar(text: &str, field: FieldTag) -> Result<Scalar, ScalarError> {
    let bad = |off: usize, msg: &str| ScalarError::Parse { offset: off, message: msg.to_string() };
    if text.is_empty() {
        return Err(bad(0, "empty scalar"));
    }
    let value = if let Some(body) = text.strip_suffix('i') {
        // Find a binary +/- separating real and imaginary parts (not at position 0).
        let split = body.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').map(|(p, _)| p).last();
        match split {
            Some(p) => {
                let re = parse_rational_at(&body[..p], 0)?;
                let sign_neg = &body[p..p + 1] == "-";
                let im_txt = &body[p + 1..];
                let mut im = if im_txt.is_empty() {
                    Rational::one()
                } else {
                    if im_txt.starts_with('-') || im_txt.starts_with('+') {
                        return Err(bad(p + 1, "unexpected sign"));
                    }
                    parse_rational_at(im_txt, p + 1)?
                };
                if sign_neg {
                    im = -im;
                }
                GaussianRational::new(re, im)
            }
            None => {
                let im = match body {
                    "" => Rational::one(),
                    "-" => -Rational::one(),
                    _ => parse_rational_at(body, 0)?,
                };
                GaussianRational::new(Rational::zero(), im)
            }
        }
    } else {
        if let Some(p) = text.find(|c: char| !(c.is_ascii_digit() || c == '-' || c == '/')) {
            return Err(bad(p, "unexpected character"));
        }
        GaussianRational::from_rational(parse_rational_at(text, 0)?)
    };
    if field == FieldTag::Rational && !value.is_real() {
        return Err(ScalarError::FieldMismatch(text.to_string()));
    }
    Ok(value)
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_txt = |im: &Rational| -> String {
            if im.is_one() {
                "i".to_string()
            } else if (-im).is_one() {
                "-i".to_string()
            } else {
                format!("{im}i")
            }
        };
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}", im_txt(&self.im))
        } else if self.im.is_negative() {
            write!(f, "{}{}", self.re, im_txt(&self.im))
        } else {
            write!(f, "{}+{}", self.re, im_txt(&self.im))
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        GaussianRational::from_int(n)
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        GaussianRational::from_rational(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::from_rational(&self.re * &rhs.re);
        }
        GaussianRational {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

forward_owned!(Scalar, Add, add);
forward_owned!(Scalar, Sub, sub);
forward_owned!(Scalar, Mul, mul);
forward_owned!(Scalar, Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_scalar(&s, FieldTag::GaussianRational).map_err(serde::de::Error::custom)
    }
}
