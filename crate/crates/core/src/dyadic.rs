//! Exact dyadic rationals `m * 2^e` with directed rounding.
//!
//! Every arithmetic result is exact unless it passes through [`Dyadic::round`]
//! or [`Dyadic::div`], both of which take an explicit [`Rounding`] direction.
//! This is the scalar type behind [`crate::CertifiedReal`] and the exact
//! sign tests of the root finder.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Direction for a rounding step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

impl Rounding {
    pub fn flip(self) -> Self {
        match self {
            Rounding::Down => Rounding::Up,
            Rounding::Up => Rounding::Down,
        }
    }
}

/// How a value is cut to a fixed number of decimals for display.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecimalMode {
    /// Nearest, ties away from zero.
    Round,
    /// Toward zero.
    Truncate,
}

/// `mant * 2^exp`, kept normalized (odd mantissa, or zero with `exp == 0`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

fn div_round(num: &BigInt, den: &BigInt, dir: Rounding) -> BigInt {
    match dir {
        Rounding::Down => num.div_floor(den),
        Rounding::Up => -((-num).div_floor(den)),
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: e,
        }
    }

    pub fn half() -> Self {
        Self::pow2(-1)
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Self::new(v.into(), 0)
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Self::zero());
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Self::new(BigInt::from(m) * sign, e))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Exponent of the leading bit: `2^(magnitude) <= |self| < 2^(magnitude+1)`.
    pub fn magnitude(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.bits() as i64 - 1)
        }
    }

    /// Multiplies by `2^k` exactly.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Rounds to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Rounding) -> Self {
        let bits = self.bits();
        if bits <= u64::from(prec) {
            return self.clone();
        }
        let shift = bits - u64::from(prec);
        let m = div_round(&self.mant, &pow2(shift), dir);
        Dyadic::new(m, self.exp + shift as i64)
    }

    /// `self / rhs` rounded to `prec` significant bits in direction `dir`.
    ///
    /// Panics if `rhs` is zero.
    pub fn div(&self, rhs: &Dyadic, prec: u32, dir: Rounding) -> Self {
        assert!(!rhs.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let k = (i64::from(prec) + rhs.bits() as i64 - self.bits() as i64 + 2).max(0) as u64;
        let num = &self.mant << k;
        let q = div_round(&num, &rhs.mant, dir);
        Dyadic::new(q, self.exp - rhs.exp - k as i64).round(prec, dir)
    }

    pub fn floor(&self) -> BigInt {
        self.to_integer(Rounding::Down)
    }

    pub fn ceil(&self) -> BigInt {
        self.to_integer(Rounding::Up)
    }

    fn to_integer(&self, dir: Rounding) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            div_round(&self.mant, &pow2((-self.exp) as u64), dir)
        }
    }

    /// Nearest `f64` (truncated mantissa; for display and heuristics only).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.bits();
        let (m, e) = if bits > 62 {
            let s = bits - 62;
            (&self.mant >> s, self.exp + s as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let m = m.to_f64().unwrap_or(f64::NAN);
        let e = e.clamp(-100_000, 100_000) as i32;
        if e.abs() <= 1000 {
            m * 2f64.powi(e)
        } else {
            // Split to avoid spurious overflow in the intermediate power.
            m * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
        }
    }

    /// Exact decimal expansion (dyadic rationals always terminate in base 10).
    pub fn to_decimal_exact(&self) -> String {
        if self.exp >= 0 {
            return (&self.mant << self.exp as u64).to_string();
        }
        let places = (-self.exp) as u64;
        let scaled = &self.mant * num_traits::pow(BigInt::from(5u8), places as usize);
        format_fixed(&scaled, places as usize)
    }

    /// Decimal string with exactly `decimals` places.
    pub fn to_decimal(&self, decimals: usize, mode: DecimalMode) -> String {
        let ten_pow = num_traits::pow(BigInt::from(10u8), decimals);
        let scaled = &self.mant * ten_pow;
        let v = if self.exp >= 0 {
            scaled << self.exp as u64
        } else {
            let den = pow2((-self.exp) as u64);
            let (q, r) = scaled.abs().div_rem(&den);
            let q = match mode {
                DecimalMode::Truncate => q,
                DecimalMode::Round => {
                    if (r << 1u8) >= den {
                        q + 1
                    } else {
                        q
                    }
                }
            };
            if self.is_negative() {
                -q
            } else {
                q
            }
        };
        let neg_zero = v.is_zero() && self.is_negative();
        let s = format_fixed(&v, decimals);
        if neg_zero {
            format!("-{s}")
        } else {
            s
        }
    }
}

fn format_fixed(v: &BigInt, places: usize) -> String {
    let neg = v.sign() == Sign::Minus;
    let digits = v.abs().to_string();
    let body = if places == 0 {
        digits
    } else if digits.len() > places {
        let (int, frac) = digits.split_at(digits.len() - places);
        format!("{int}.{frac}")
    } else {
        format!("0.{}{}", "0".repeat(places - digits.len()), digits)
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.mant.sign();
        let sb = other.mant.sign();
        if sa != sb {
            return sa.cmp(&sb);
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &rhs.mant << (rhs.exp - e) as u64;
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;

    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;

    fn mul(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        // Product of odd mantissas is odd: already normalized.
        Dyadic {
            mant: &self.mant * &rhs.mant,
            exp: self.exp + rhs.exp,
        }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v)
    }
}

impl From<BigInt> for Dyadic {
    fn from(v: BigInt) -> Self {
        Dyadic::from_int(v)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}
