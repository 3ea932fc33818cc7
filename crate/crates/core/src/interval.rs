//! Outward-rounded interval arithmetic over dyadic endpoints.
//!
//! A [`CertifiedReal`] is a closed interval `[lo, hi]` that is guaranteed to
//! contain the real number it stands for. Endpoints are rounded to the
//! interval's working precision after every operation, `lo` toward negative
//! infinity and `hi` toward positive infinity, so enclosure survives any
//! sequence of operations.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use crate::dyadic::{Dyadic, Rounding};
use crate::error::{Error, Result};

/// Outcome of a certified comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Holds for every pair of points in the enclosures.
    Holds,
    /// Fails for every pair of points in the enclosures.
    Violated,
    /// The enclosures are too wide to decide.
    Indeterminate,
}

impl Verdict {
    pub fn is_holds(self) -> bool {
        self == Verdict::Holds
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct CertifiedReal {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl CertifiedReal {
    /// Interval `[lo, hi]` rounded outward to `prec` bits. Panics if `lo > hi`.
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo:?} > {hi:?}");
        CertifiedReal {
            lo: lo.round(prec, Rounding::Down),
            hi: hi.round(prec, Rounding::Up),
            prec,
        }
    }

    /// The point `v`, widened only if `v` needs more than `prec` bits.
    pub fn point(v: Dyadic, prec: u32) -> Self {
        Self::new(v.clone(), v, prec)
    }

    pub fn from_int(v: impl Into<BigInt>, prec: u32) -> Self {
        Self::point(Dyadic::from_int(v), prec)
    }

    pub fn zero(prec: u32) -> Self {
        Self::point(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::point(Dyadic::one(), prec)
    }

    /// Enclosure of `num / den`.
    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>, prec: u32) -> Self {
        let n = Dyadic::from_int(num);
        let d = Dyadic::from_int(den);
        let lo = n.div(&d, prec, Rounding::Down);
        let hi = n.div(&d, prec, Rounding::Up);
        if lo <= hi {
            CertifiedReal { lo, hi, prec }
        } else {
            CertifiedReal {
                lo: hi,
                hi: lo,
                prec,
            }
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Same enclosure, with later operations rounded to `prec` bits.
    pub fn with_precision(&self, prec: u32) -> Self {
        Self::new(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    /// Exact midpoint of the enclosure.
    pub fn midpoint(&self) -> Dyadic {
        (&self.lo + &self.hi).shl(-1)
    }

    /// Exact half-width of the enclosure.
    pub fn radius(&self) -> Dyadic {
        self.width().shl(-1)
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }

    pub fn contains(&self, v: &Dyadic) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Dyadic::zero())
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(&self, other: &Self) -> Option<Self> {
        if !self.intersects(other) {
            return None;
        }
        Some(CertifiedReal {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
            prec: self.prec.max(other.prec),
        })
    }

    /// Certified `self < other`.
    pub fn lt(&self, other: &Self) -> Verdict {
        if self.hi < other.lo {
            Verdict::Holds
        } else if self.lo >= other.hi {
            Verdict::Violated
        } else {
            Verdict::Indeterminate
        }
    }

    /// Certified `self <= other`.
    pub fn le(&self, other: &Self) -> Verdict {
        if self.hi <= other.lo {
            Verdict::Holds
        } else if self.lo > other.hi {
            Verdict::Violated
        } else {
            Verdict::Indeterminate
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn neg(&self) -> Self {
        CertifiedReal {
            lo: -&self.hi,
            hi: -&self.lo,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let m = self.lo.abs().max(self.hi.clone());
            CertifiedReal {
                lo: Dyadic::zero(),
                hi: m,
                prec: self.prec,
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let prec = self.prec.max(rhs.prec);
        CertifiedReal {
            lo: (&self.lo + &rhs.lo).round(prec, Rounding::Down),
            hi: (&self.hi + &rhs.hi).round(prec, Rounding::Up),
            prec,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let prec = self.prec.max(rhs.prec);
        let (lo, hi) = if !self.lo.is_negative() && !rhs.lo.is_negative() {
            (&self.lo * &rhs.lo, &self.hi * &rhs.hi)
        } else {
            let p = [
                &self.lo * &rhs.lo,
                &self.lo * &rhs.hi,
                &self.hi * &rhs.lo,
                &self.hi * &rhs.hi,
            ];
            let lo = p.iter().min().cloned().unwrap_or_else(Dyadic::zero);
            let hi = p.iter().max().cloned().unwrap_or_else(Dyadic::zero);
            (lo, hi)
        };
        CertifiedReal {
            lo: lo.round(prec, Rounding::Down),
            hi: hi.round(prec, Rounding::Up),
            prec,
        }
    }

    /// Multiplication by an exact integer.
    pub fn mul_int(&self, k: impl Into<BigInt>) -> Self {
        self.mul(&CertifiedReal::point(Dyadic::from_int(k), u32::MAX))
            .with_precision_unchecked(self.prec)
    }

    // Used where the operand precision was a placeholder for "exact".
    fn with_precision_unchecked(mut self, prec: u32) -> Self {
        self.lo = self.lo.round(prec, Rounding::Down);
        self.hi = self.hi.round(prec, Rounding::Up);
        self.prec = prec;
        self
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        let prec = self.prec.max(rhs.prec);
        if rhs.contains_zero() {
            return Err(Error::ZeroDenominator { bits: prec });
        }
        let pairs = [
            (&self.lo, &rhs.lo),
            (&self.lo, &rhs.hi),
            (&self.hi, &rhs.lo),
            (&self.hi, &rhs.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| a.div(b, prec, Rounding::Down))
            .min()
            .unwrap_or_else(Dyadic::zero);
        let hi = pairs
            .iter()
            .map(|(a, b)| a.div(b, prec, Rounding::Up))
            .max()
            .unwrap_or_else(Dyadic::zero);
        Ok(CertifiedReal { lo, hi, prec })
    }

    pub fn recip(&self) -> Result<Self> {
        CertifiedReal::one(self.prec).div(self)
    }

    /// `self^k` by binary exponentiation. Tight for intervals with `lo >= 0`.
    pub fn powu(&self, mut k: u64) -> Self {
        let mut acc = CertifiedReal::one(self.prec);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self^k` for any integer `k`; negative powers go through the reciprocal.
    pub fn powi(&self, k: i64) -> Result<Self> {
        if k >= 0 {
            Ok(self.powu(k as u64))
        } else {
            Ok(self.recip()?.powu(k.unsigned_abs()))
        }
    }

    /// Natural logarithm of a strictly positive interval.
    pub fn ln(&self) -> Result<Self> {
        if !self.lo.is_positive() {
            return Err(Error::NonPositiveLog);
        }
        let lo = ln_enclosure(&self.lo, self.prec)?.lo;
        let hi = ln_enclosure(&self.hi, self.prec)?.hi;
        Ok(CertifiedReal {
            lo,
            hi,
            prec: self.prec,
        })
    }
}

/// Enclosure of `ln 2`.
pub fn ln2(prec: u32) -> CertifiedReal {
    // ln 2 = 2 atanh(1/3)
    let t = CertifiedReal::ratio(1, 3, prec + 16);
    atanh_series(&t, prec + 16).mul_int(2).with_precision(prec)
}

/// `ln x` for a positive dyadic point, via `x = y * 2^k` with `y` in `[1/2, 1)`
/// and `ln y = 2 atanh((y - 1) / (y + 1))`.
fn ln_enclosure(x: &Dyadic, prec: u32) -> Result<CertifiedReal> {
    let work = prec + 16;
    let k = x.magnitude().ok_or(Error::NonPositiveLog)? + 1;
    let y = CertifiedReal::point(x.shl(-k), work);
    let one = CertifiedReal::one(work);
    let t = y.sub(&one).div(&y.add(&one))?;
    let ln_y = atanh_series(&t, work).mul_int(2);
    let ln_x = if k == 0 {
        ln_y
    } else {
        ln_y.add(&ln2(work).mul_int(k))
    };
    Ok(ln_x.with_precision(prec))
}

/// `atanh t` for `|t| <= 1/3` with a rigorous tail bound.
fn atanh_series(t: &CertifiedReal, prec: u32) -> CertifiedReal {
    let t2 = t.mul(t);
    let mut term = t.clone();
    let mut sum = CertifiedReal::zero(prec);
    let mut j: u64 = 0;
    let target = Dyadic::pow2(-(i64::from(prec) + 4));
    loop {
        sum = sum.add(
            &term
                .div(&CertifiedReal::from_int(2 * j + 1, prec))
                .expect("odd divisor"),
        );
        term = term.mul(&t2);
        j += 1;
        // |remaining| <= |t|^(2j+1) / ((2j+1)(1 - t^2)) <= |t|^(2j+1) * 9/8 for |t| <= 1/3
        let bound = term.abs().hi().clone();
        let tail = (&bound * &Dyadic::from_int(9)).shl(-3);
        if tail <= target || j > 10 * u64::from(prec) {
            let slack = CertifiedReal::new(-&tail, tail, prec);
            return sum.add(&slack);
        }
    }
}

impl fmt::Debug for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:e}, {:e}]@{}",
            self.lo.to_f64(),
            self.hi.to_f64(),
            self.prec
        )
    }
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ± {:e}",
            self.midpoint().to_f64(),
            self.radius().to_f64()
        )
    }
}

impl PartialOrd for CertifiedReal {
    /// Ordered only when the enclosures are disjoint (or identical points).
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && self == other {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}
