//! Binary fixed-point reals over `BigInt`, used for the asymptotic constants
//! and main terms. A value is `raw / 2^bits`; all operands in one computation
//! share the same `bits`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixed {
    raw: BigInt,
    bits: u32,
}

/// Working precision in bits for `digits` significant decimal digits plus guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 64
}

impl Fixed {
    pub fn zero(bits: u32) -> Self {
        Fixed {
            raw: BigInt::zero(),
            bits,
        }
    }

    pub fn from_int(v: impl Into<BigInt>, bits: u32) -> Self {
        Fixed {
            raw: v.into() << bits,
            bits,
        }
    }

    /// p / q rounded toward zero.
    pub fn from_ratio(p: impl Into<BigInt>, q: impl Into<BigInt>, bits: u32) -> Self {
        let q = q.into();
        assert!(!q.is_zero(), "division by zero");
        Fixed {
            raw: (p.into() << bits) / q,
            bits,
        }
    }

    /// Same value at a different precision (truncating when narrowing).
    pub fn with_bits(&self, bits: u32) -> Self {
        let raw = if bits >= self.bits {
            &self.raw << (bits - self.bits)
        } else {
            &self.raw >> (self.bits - bits)
        };
        Fixed { raw, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn raw(&self) -> &BigInt {
        &self.raw
    }

    pub fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.raw.is_negative()
    }

    pub fn abs(&self) -> Self {
        Fixed {
            raw: self.raw.abs(),
            bits: self.bits,
        }
    }

    pub fn div_int(&self, d: impl Into<BigInt>) -> Self {
        Fixed {
            raw: &self.raw / d.into(),
            bits: self.bits,
        }
    }

    pub fn mul_int(&self, m: impl Into<BigInt>) -> Self {
        Fixed {
            raw: &self.raw * m.into(),
            bits: self.bits,
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn powi(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Fixed::from_int(1, self.bits);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "square root of a negative value");
        let scaled = self.raw.magnitude() << self.bits;
        Fixed {
            raw: BigInt::from(scaled.sqrt()),
            bits: self.bits,
        }
    }

    /// Rounds to the nearest integer.
    pub fn round(&self) -> BigInt {
        let half = BigInt::one() << self.bits.saturating_sub(1);
        if self.raw.is_negative() {
            -((-&self.raw + half) >> self.bits)
        } else {
            (&self.raw + half) >> self.bits
        }
    }

    pub fn to_f64(&self) -> f64 {
        // Keep 80 significant bits before converting.
        let len = self.raw.bits();
        let drop = len.saturating_sub(80);
        let top = (&self.raw >> drop).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powi(drop as i32 - self.bits as i32)
    }

    /// Decimal rendering with exactly `places` fractional digits, rounded half away from zero.
    pub fn to_decimal(&self, places: usize) -> String {
        let scale = BigUint::from(10u32).pow(places as u32);
        let mag = self.raw.magnitude() * &scale;
        let (q, r) = mag.div_rem(&(BigUint::one() << self.bits));
        let q = if r >= (BigUint::one() << self.bits.saturating_sub(1)) && self.bits > 0 {
            q + 1u32
        } else {
            q
        };
        let digits = q.to_string();
        let digits = if digits.len() <= places {
            format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
        } else {
            digits
        };
        let (int, frac) = digits.split_at(digits.len() - places);
        let sign = if self.raw.sign() == Sign::Minus && q_nonzero(&digits) {
            "-"
        } else {
            ""
        };
        if places == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// Decimal rendering with `sig` significant digits.
    pub fn to_significant(&self, sig: usize) -> String {
        let f = self.to_f64().abs();
        let int_digits = if f >= 1.0 { f.log10().floor() as i64 + 1 } else { 0 };
        let places = (sig as i64 - int_digits).max(0) as usize;
        self.to_decimal(places)
    }

    fn check(&self, other: &Fixed) {
        assert_eq!(self.bits, other.bits, "mixed fixed-point precisions");
    }
}

fn q_nonzero(digits: &str) -> bool {
    digits.bytes().any(|b| b != b'0')
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let places = f.precision().unwrap_or(20);
        f.write_str(&self.to_decimal(places))
    }
}

impl PartialOrd for Fixed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.check(other);
        self.raw.partial_cmp(&other.raw)
    }
}

impl<'a> Add<&'a Fixed> for &'a Fixed {
    type Output = Fixed;
    fn add(self, rhs: &Fixed) -> Fixed {
        self.check(rhs);
        Fixed {
            raw: &self.raw + &rhs.raw,
            bits: self.bits,
        }
    }
}

impl<'a> Sub<&'a Fixed> for &'a Fixed {
    type Output = Fixed;
    fn sub(self, rhs: &Fixed) -> Fixed {
        self.check(rhs);
        Fixed {
            raw: &self.raw - &rhs.raw,
            bits: self.bits,
        }
    }
}

impl<'a> Mul<&'a Fixed> for &'a Fixed {
    type Output = Fixed;
    fn mul(self, rhs: &Fixed) -> Fixed {
        self.check(rhs);
        Fixed {
            raw: (&self.raw * &rhs.raw) >> self.bits,
            bits: self.bits,
        }
    }
}

impl<'a> Div<&'a Fixed> for &'a Fixed {
    type Output = Fixed;
    fn div(self, rhs: &Fixed) -> Fixed {
        self.check(rhs);
        assert!(!rhs.raw.is_zero(), "division by zero");
        Fixed {
            raw: (&self.raw << self.bits) / &rhs.raw,
            bits: self.bits,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Fixed> for Fixed {
            type Output = Fixed;
            fn $m(self, rhs: Fixed) -> Fixed {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Fixed> for Fixed {
            type Output = Fixed;
            fn $m(self, rhs: &Fixed) -> Fixed {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Fixed> for &'a Fixed {
            type Output = Fixed;
            fn $m(self, rhs: Fixed) -> Fixed {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed {
            raw: -self.raw,
            bits: self.bits,
        }
    }
}

impl Neg for &Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed {
            raw: -&self.raw,
            bits: self.bits,
        }
    }
}

/// atan(1/q) by its Taylor series.
pub fn atan_inv(q: u64, bits: u32) -> Fixed {
    let q2 = BigInt::from(q) * q;
    let mut power = Fixed::from_ratio(1, q, bits);
    let mut sum = Fixed::zero(bits);
    let mut k = 0u64;
    while !power.is_zero() {
        let term = power.div_int(2 * k + 1);
        sum = if k.is_multiple_of(2) { sum + term } else { sum - term };
        power = power.div_int(q2.clone());
        k += 1;
    }
    sum
}

/// atanh(t) for |t| < 1 by its Taylor series.
pub fn atanh(t: &Fixed) -> Fixed {
    let bits = t.bits();
    let t2 = t.square();
    let mut power = t.clone();
    let mut sum = Fixed::zero(bits);
    let mut k = 0u64;
    while !power.is_zero() {
        sum = sum + power.div_int(2 * k + 1);
        power = &power * &t2;
        k += 1;
    }
    sum
}

/// ln 2 = 2 atanh(1/3).
pub fn ln2(bits: u32) -> Fixed {
    atanh(&Fixed::from_ratio(1, 3, bits)).mul_int(2)
}

/// Natural logarithm of a positive value: y = 2^s·m with m ∈ [1, 2), ln m = 2 atanh((m−1)/(m+1)).
pub fn ln(y: &Fixed) -> Fixed {
    assert!(y.raw().is_positive(), "logarithm of a nonpositive value");
    let bits = y.bits();
    let s = y.raw().bits() as i64 - 1 - bits as i64;
    let m = if s >= 0 {
        Fixed {
            raw: y.raw() >> s as u32,
            bits,
        }
    } else {
        Fixed {
            raw: y.raw() << (-s) as u32,
            bits,
        }
    };
    let one = Fixed::from_int(1, bits);
    let t = (&m - &one) / (&m + &one);
    atanh(&t).mul_int(2) + ln2(bits).mul_int(s)
}

pub fn ln_int(n: u64, bits: u32) -> Fixed {
    ln(&Fixed::from_int(n, bits))
}
