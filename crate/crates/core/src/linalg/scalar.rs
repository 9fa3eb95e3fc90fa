//! Exact scalars: rationals and Gaussian rationals `a + b i` with `a, b` in Q.

use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::LinalgError;

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Which exact field a value or algebra lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "Q")]
    Rational,
    #[serde(rename = "Qi")]
    GaussianRational,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => f.write_str("Q"),
            Field::GaussianRational => f.write_str("Qi"),
        }
    }
}

/// The exact field operations shared by [`Rational`] and [`GaussianRational`].
///
/// Equality is exact and decidable, which is what every downstream check relies on.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + for<'a> DivAssign<&'a Self>
    + Send
    + Sync
    + 'static
{
    const FIELD: Field;

    /// Complex conjugate (identity on Q).
    fn conj(&self) -> Self;

    fn from_rational(r: Rational) -> Self;

    /// Parses the scalar text format.
    fn parse_text(text: &str) -> Result<Self, LinalgError>;

    /// Least common multiple of all denominators appearing in `self`.
    fn denominator_lcm(&self) -> BigInt;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `self * other` without consuming either side.
    fn mul_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out *= other;
        out
    }
}

impl Scalar for Rational {
    const FIELD: Field = Field::Rational;

    fn conj(&self) -> Self {
        self.clone()
    }

    fn from_rational(r: Rational) -> Self {
        r
    }

    fn parse_text(text: &str) -> Result<Self, LinalgError> {
        parse_rational(text)
    }

    fn denominator_lcm(&self) -> BigInt {
        self.denom().clone()
    }
}

/// Parses `"p"` or `"p/q"` into a canonical rational.
pub fn parse_rational(text: &str) -> Result<Rational, LinalgError> {
    let t = text.trim();
    let bad = || LinalgError::Parse(text.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// A Gaussian rational `re + im * i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    /// `a/b + (c/d) i` from machine integers; handy for fixtures.
    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        GaussianRational {
            re: Rational::new(re.0.into(), re.1.into()),
            im: Rational::new(im.0.into(), im.1.into()),
        }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational {
            re: Rational::from_integer(re.into()),
            im: Rational::from_integer(im.into()),
        }
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational { re, im: Rational::zero() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `z * conj(z) = re^2 + im^2`.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "inverse of zero Gaussian rational");
        GaussianRational { re: &self.re / &n, im: -(&self.im) / &n }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Printer for the scalar text format: `p/q`, `r/s*i`, `p/q+r/s*i`, `p/q-r/s*i`.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}*i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{}-{}*i", self.re, -&self.im)
                } else {
                    write!(f, "{}+{}*i", self.re, self.im)
                }
            }
        }
    }
}

fn parse_imaginary(text: &str, original: &str) -> Result<Rational, LinalgError> {
    let t = text.trim();
    let body = t
        .strip_suffix("*i")
        .or_else(|| t.strip_suffix('i'))
        .ok_or_else(|| LinalgError::Parse(original.to_string()))?
        .trim();
    match body {
        "" | "+" => Ok(Rational::one()),
        "-" => Ok(-Rational::one()),
        b => parse_rational(b).map_err(|_| LinalgError::Parse(original.to_string())),
    }
}

impl FromStr for GaussianRational {
    type Err = LinalgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(LinalgError::Parse(s.to_string()));
        }
        if !t.ends_with('i') {
            return Ok(GaussianRational::real(parse_rational(&t)?));
        }
        // Split at the last sign that is not the leading one.
        let split = t
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        match split {
            Some(k) => {
                let re = parse_rational(&t[..k]).map_err(|_| LinalgError::Parse(s.to_string()))?;
                let im = parse_imaginary(&t[k..], s)?;
                Ok(GaussianRational { re, im })
            }
            None => Ok(GaussianRational { re: Rational::zero(), im: parse_imaginary(&t, s)? }),
        }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational { re: Rational::zero(), im: Rational::zero() }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational { re: Rational::one(), im: Rational::zero() }
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl<'a> AddAssign<&'a GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &'a GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<'a> SubAssign<&'a GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &'a GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl<'a> MulAssign<&'a GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &'a GaussianRational) {
        if rhs.im.is_zero() {
            self.re *= &rhs.re;
            self.im *= &rhs.re;
            return;
        }
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        self.re = re;
        self.im = im;
    }
}

impl<'a> DivAssign<&'a GaussianRational> for GaussianRational {
    fn div_assign(&mut self, rhs: &'a GaussianRational) {
        if rhs.im.is_zero() {
            assert!(!rhs.re.is_zero(), "division by zero Gaussian rational");
            self.re /= &rhs.re;
            self.im /= &rhs.re;
            return;
        }
        *self *= &rhs.inv();
    }
}

macro_rules! by_value_op {
    ($tr:ident, $method:ident, $assign:ident) => {
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $method(mut self, rhs: GaussianRational) -> GaussianRational {
                self.$assign(&rhs);
                self
            }
        }
    };
}

by_value_op!(Add, add, add_assign);
by_value_op!(Sub, sub, sub_assign);
by_value_op!(Mul, mul, mul_assign);
by_value_op!(Div, div, div_assign);

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        GaussianRational::real(r)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        GaussianRational::from_ints(n, 0)
    }
}

impl Scalar for GaussianRational {
    const FIELD: Field = Field::GaussianRational;

    fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -&self.im }
    }

    fn from_rational(r: Rational) -> Self {
        GaussianRational::real(r)
    }

    fn parse_text(text: &str) -> Result<Self, LinalgError> {
        text.parse()
    }

    fn denominator_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }
}
