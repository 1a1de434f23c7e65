//! Exact dyadic rationals `a / 2^e`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// `numerator / 2^exponent` with `exponent >= 0`.
///
/// Kept normalized: the numerator is odd, or the exponent is zero (this covers
/// zero and even integers). Structural equality is therefore value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    numerator: BigInt,
    exponent: u64,
}

impl DyadicRational {
    pub fn new(numerator: BigInt, exponent: u64) -> Self {
        let mut d = DyadicRational {
            numerator,
            exponent,
        };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        DyadicRational {
            numerator: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_integer(BigInt::one())
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        DyadicRational {
            numerator: value.into(),
            exponent: 0,
        }
    }

    /// `2^-e`.
    pub fn pow2_neg(e: u64) -> Self {
        DyadicRational {
            numerator: BigInt::one(),
            exponent: e,
        }
    }

    /// The exact value of a finite `f64`.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1 << 52) - 1);
        let (mantissa, exp2) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1 << 52), biased - 1075)
        };
        let num = BigInt::from(mantissa) * sign;
        Some(if exp2 >= 0 {
            Self::from_integer(num << exp2 as usize)
        } else {
            Self::new(num, (-exp2) as u64)
        })
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.numerator.is_negative()
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self
            .numerator
            .trailing_zeros()
            .unwrap_or(0)
            .min(self.exponent);
        if tz > 0 {
            self.numerator >>= tz as usize;
            self.exponent -= tz;
        }
    }

    /// Numerator rescaled to denominator `2^e`, `e >= self.exponent`.
    fn scaled_to(&self, e: u64) -> BigInt {
        &self.numerator << (e - self.exponent) as usize
    }

    /// Nearest `f64` (to within one rounding of a 64-bit truncation).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let (top, shift) = top_bits(&self.numerator);
        let mag = ldexp(top as f64, shift as i64 - self.exponent as i64);
        if self.is_negative() {
            -mag
        } else {
            mag
        }
    }

    /// `log2` of the value; `-inf` for zero, NaN for negative values.
    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        if self.is_negative() {
            return f64::NAN;
        }
        let (top, shift) = top_bits(&self.numerator);
        (top as f64).log2() + shift as f64 - self.exponent as f64
    }
}

/// Top (at most) 64 bits of `|x|` and the shift that restores its scale.
fn top_bits(x: &BigInt) -> (u64, u64) {
    let mag = x.magnitude();
    let bits = mag.bits();
    if bits <= 64 {
        (mag.to_u64().expect("fits in 64 bits"), 0)
    } else {
        let shift = bits - 64;
        let top = (mag >> shift as usize).to_u64().expect("fits in 64 bits");
        (top, shift)
    }
}

/// `x * 2^e` without intermediate overflow for representable results.
fn ldexp(mut x: f64, mut e: i64) -> f64 {
    const STEP: i64 = 1000;
    while e > STEP {
        x *= 2f64.powi(STEP as i32);
        e -= STEP;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -STEP {
        x *= 2f64.powi(-STEP as i32);
        e += STEP;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

impl Default for DyadicRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        self.scaled_to(e).cmp(&other.scaled_to(e))
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &DyadicRational {
    type Output = DyadicRational;

    fn add(self, rhs: &DyadicRational) -> DyadicRational {
        let e = self.exponent.max(rhs.exponent);
        DyadicRational::new(self.scaled_to(e) + rhs.scaled_to(e), e)
    }
}

impl Sub for &DyadicRational {
    type Output = DyadicRational;

    fn sub(self, rhs: &DyadicRational) -> DyadicRational {
        let e = self.exponent.max(rhs.exponent);
        DyadicRational::new(self.scaled_to(e) - rhs.scaled_to(e), e)
    }
}

impl Mul for &DyadicRational {
    type Output = DyadicRational;

    fn mul(self, rhs: &DyadicRational) -> DyadicRational {
        DyadicRational::new(
            &self.numerator * &rhs.numerator,
            self.exponent + rhs.exponent,
        )
    }
}

impl Neg for &DyadicRational {
    type Output = DyadicRational;

    fn neg(self) -> DyadicRational {
        DyadicRational {
            numerator: -&self.numerator,
            exponent: self.exponent,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for DyadicRational {
            type Output = DyadicRational;

            fn $method(self, rhs: DyadicRational) -> DyadicRational {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for DyadicRational {
    fn sum<I: Iterator<Item = DyadicRational>>(iter: I) -> Self {
        iter.fold(DyadicRational::zero(), |acc, x| &acc + &x)
    }
}

/// Formats as `numerator/2^exponent`, e.g. `7/2^3`.
impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numerator, self.exponent)
    }
}

impl fmt::Debug for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for DyadicRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::invalid(format!("not a dyadic rational: {s:?}"));
        let (num, exp) = s.split_once("/2^").ok_or_else(bad)?;
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let exp: u64 = exp.parse().map_err(|_| bad())?;
        Ok(Self::new(num, exp))
    }
}

impl serde::Serialize for DyadicRational {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl From<i64> for DyadicRational {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}
