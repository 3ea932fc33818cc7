//! The dominant root `q` of `q + q^2 + ... + q^d = 1`, the mean lifetime
//! `E[X] = sum i q^i`, and the renewal constant `c_d = 1 / E[X]`.
//!
//! Enclosures for `q` are certified by exact sign evaluation of
//! `f(q) = q + ... + q^d - 1` at both dyadic endpoints. Newton iteration is
//! used to find the bracket quickly; if the Newton bracket fails its sign
//! check the solver falls back to plain bisection on `[1/2, 1]`.

use crate::config::Config;
use crate::dyadic::{Dyadic, Rounding};
use crate::error::{Error, Result};
use crate::interval::CertifiedReal;
use crate::order::Order;

/// Extra bits carried by every interval derived from a root enclosure.
pub const GUARD_BITS: u32 = 32;

/// Certified bracket `[q_lo, q_hi]` around the root `q_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootEnclosure {
    d: Order,
    q_lo: Dyadic,
    q_hi: Dyadic,
    precision_bits: u32,
}

/// Which formula [`blackwell_constant`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantMethod {
    /// `1 / sum_{i=1}^d i q^i`.
    ReciprocalMean,
    /// `(q - 1)^2 / (d q^(d+2) - (d+1) q^(d+1) + q)`.
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedConstants {
    pub mean_lifetime: CertifiedReal,
    pub c_d: CertifiedReal,
}

impl RootEnclosure {
    pub fn order(&self) -> Order {
        self.d
    }

    pub fn q_lo(&self) -> &Dyadic {
        &self.q_lo
    }

    pub fn q_hi(&self) -> &Dyadic {
        &self.q_hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    /// Precision used for intervals computed from this enclosure.
    pub fn working_precision(&self) -> u32 {
        self.precision_bits + GUARD_BITS
    }

    /// `q` as an interval.
    pub fn q(&self) -> CertifiedReal {
        CertifiedReal::new(
            self.q_lo.clone(),
            self.q_hi.clone(),
            self.working_precision(),
        )
    }

    /// `1 - q` as an interval.
    pub fn one_minus_q(&self) -> CertifiedReal {
        let p = self.working_precision();
        CertifiedReal::one(p).sub(&self.q())
    }

    /// Re-validates every structural invariant, including the exact sign
    /// conditions `f(q_lo) <= 0 <= f(q_hi)`.
    pub fn verify(&self) -> bool {
        let half = Dyadic::half();
        let one = Dyadic::one();
        self.q_lo > half
            && self.q_lo <= self.q_hi
            && self.q_hi < one
            && &self.q_hi - &self.q_lo <= Dyadic::pow2(-i64::from(self.precision_bits))
            && !characteristic_sum(self.d, &self.q_lo).is_positive()
            && !characteristic_sum(self.d, &self.q_hi).is_negative()
    }
}

/// Exact `q + q^2 + ... + q^d - 1` by Horner's rule (no division).
pub fn characteristic_sum(d: Order, q: &Dyadic) -> Dyadic {
    let one = Dyadic::one();
    let mut acc = Dyadic::zero();
    for _ in 0..d.get() {
        acc = &(&acc + &one) * q;
    }
    &acc - &one
}

/// Exact derivative `1 + 2q + ... + d q^(d-1)`.
fn characteristic_slope(d: Order, q: &Dyadic) -> Dyadic {
    let mut acc = Dyadic::zero();
    for i in (1..=d.get()).rev() {
        acc = &(&acc * q) + &Dyadic::from_int(i as i64);
    }
    acc
}

/// Double-precision estimate of `q_d` (heuristics only, never certified).
pub fn q_estimate(d: Order) -> f64 {
    let f = |q: f64| (1..=d.get()).map(|i| q.powi(i as i32)).sum::<f64>() - 1.0;
    let (mut lo, mut hi) = (0.5f64, 1.0f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Rounds `x` to a multiple of `2^-frac_bits`.
fn quantize(x: &Dyadic, frac_bits: i64, dir: Rounding) -> Dyadic {
    let scaled = x.shl(frac_bits);
    let m = match dir {
        Rounding::Down => scaled.floor(),
        Rounding::Up => scaled.ceil(),
    };
    Dyadic::new(m, -frac_bits)
}

fn check_bracket(d: Order) -> Result<()> {
    if characteristic_sum(d, &Dyadic::half()).is_negative()
        && characteristic_sum(d, &Dyadic::one()).is_positive()
    {
        Ok(())
    } else {
        Err(Error::BracketViolation { d: d.get() })
    }
}

/// Certified enclosure of `q_d` with width at most `2^-precision_bits`.
pub fn solve_q(d: Order, precision_bits: u32, cfg: &Config) -> Result<RootEnclosure> {
    let bits = cfg.check_precision(u64::from(precision_bits))?;
    check_bracket(d)?;
    if let Some(enc) = newton_bracket(d, bits) {
        return Ok(enc);
    }
    bisect_from(d, bits, Dyadic::half(), Dyadic::one())
}

/// Pure bisection on `[1/2, 1]`, without Newton acceleration.
pub fn solve_q_bisection(d: Order, precision_bits: u32, cfg: &Config) -> Result<RootEnclosure> {
    let bits = cfg.check_precision(u64::from(precision_bits))?;
    check_bracket(d)?;
    bisect_from(d, bits, Dyadic::half(), Dyadic::one())
}

fn bisect_from(d: Order, bits: u32, mut lo: Dyadic, mut hi: Dyadic) -> Result<RootEnclosure> {
    let tol = Dyadic::pow2(-i64::from(bits));
    let half = Dyadic::half();
    // Keep halving until the bracket is narrow and has left the endpoint 1/2.
    while &hi - &lo > tol || lo == half {
        let mid = (&lo + &hi).shl(-1);
        if characteristic_sum(d, &mid).is_positive() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let enc = RootEnclosure {
        d,
        q_lo: lo,
        q_hi: hi,
        precision_bits: bits,
    };
    if enc.verify() {
        Ok(enc)
    } else {
        Err(Error::BracketViolation { d: d.get() })
    }
}

fn newton_bracket(d: Order, bits: u32) -> Option<RootEnclosure> {
    let target = bits + 16;
    let mut x = Dyadic::from_f64(q_estimate(d))?;
    let mut w: u32 = 48;
    loop {
        w = (2 * w).min(target);
        let xr = x.round(w, Rounding::Down);
        let step = characteristic_sum(d, &xr).div(&characteristic_slope(d, &xr), w, Rounding::Down);
        x = (&xr - &step).round(w, Rounding::Down);
        if w == target {
            break;
        }
    }
    let g = i64::from(bits) + 2;
    let eps = Dyadic::pow2(-g);
    let lo = quantize(&(&x - &eps), g, Rounding::Down);
    let hi = quantize(&(&x + &eps), g, Rounding::Up);
    let enc = RootEnclosure {
        d,
        q_lo: lo,
        q_hi: hi,
        precision_bits: bits,
    };
    enc.verify().then_some(enc)
}

/// `E[X] = sum_{i=1}^d i q^i` as an interval.
pub fn mean_lifetime(enc: &RootEnclosure) -> CertifiedReal {
    let q = enc.q();
    let mut power = q.clone();
    let mut sum = CertifiedReal::zero(enc.working_precision());
    for i in 1..=enc.d.get() {
        sum = sum.add(&power.mul_int(i as u64));
        power = power.mul(&q);
    }
    sum
}

/// The renewal constant `c_d`, by either of two independent formulas.
pub fn blackwell_constant(enc: &RootEnclosure, method: ConstantMethod) -> Result<CertifiedReal> {
    match method {
        ConstantMethod::ReciprocalMean => mean_lifetime(enc).recip(),
        ConstantMethod::ClosedForm => {
            let d = enc.d.get() as u64;
            let q = enc.q();
            let q_d1 = q.powu(d + 1);
            let q_d2 = q_d1.mul(&q);
            let num = enc.one_minus_q().powu(2);
            let den = q_d2.mul_int(d).sub(&q_d1.mul_int(d + 1)).add(&q);
            num.div(&den)
        }
    }
}

pub fn derived_constants(enc: &RootEnclosure) -> Result<DerivedConstants> {
    let mean_lifetime = mean_lifetime(enc);
    let c_d = mean_lifetime.recip()?;
    Ok(DerivedConstants { mean_lifetime, c_d })
}

/// `x^d - x^(d-1) - ... - x - 1` evaluated on the interval `x = 1/q`.
pub fn characteristic_residual(enc: &RootEnclosure) -> Result<CertifiedReal> {
    let x = enc.q().recip()?;
    let mut power = CertifiedReal::one(enc.working_precision());
    let mut lower = CertifiedReal::zero(enc.working_precision());
    for _ in 0..enc.d.get() {
        lower = lower.add(&power);
        power = power.mul(&x);
    }
    Ok(power.sub(&lower))
}
