//! `F_n^(d)` as the nearest integer to `c_d * q^-(n-1)`.
//!
//! The approximation is evaluated as an interval. An integer is emitted only
//! once that interval sits strictly inside `(m - 1/2, m + 1/2)` for a single
//! integer `m` and the geometric error bound `(1-q)((1-q)/q)^(n-1)` is
//! certified below `1/2`; together those force `F_n = m`. Precision starts at
//! [`required_precision`] and doubles until that holds or the configured
//! ceiling is reached.

use num_bigint::{BigInt, BigUint};

use crate::config::Config;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::exact::fib_at;
use crate::interval::{CertifiedReal, Verdict};
use crate::order::Order;
use crate::roots::{self, RootEnclosure};

/// Guard bits added on top of the magnitude of the approximation.
pub const ROUNDING_GUARD_BITS: u64 = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormValue {
    pub d: Order,
    pub n: i64,
    /// Enclosure of `c_d * q^-(n-1)`; `None` for `n <= 0`, where no root is computed.
    pub approx: Option<CertifiedReal>,
    pub rounded: BigUint,
    pub certified: bool,
    /// Working precision that produced the certificate.
    pub precision_bits: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorRecord {
    pub d: Order,
    pub n: i64,
    /// Enclosure of `F_n - c_d q^-(n-1)`.
    pub x_n: CertifiedReal,
    /// The geometric bound for `n >= 1`, or the formal cap `1/2` for `n <= 0`.
    pub bound: CertifiedReal,
}

impl ErrorRecord {
    /// Certified `|x_n| <= upper end of the bound`.
    pub fn within_bound(&self) -> Verdict {
        let abs = self.x_n.abs();
        let cap = self.bound.hi();
        if abs.hi() <= cap {
            Verdict::Holds
        } else if abs.lo() > cap {
            Verdict::Violated
        } else {
            Verdict::Indeterminate
        }
    }

    /// Certified `|x_n| < 1/2`.
    pub fn below_half(&self) -> Verdict {
        let half = CertifiedReal::point(Dyadic::half(), self.x_n.precision());
        self.x_n.abs().lt(&half)
    }
}

fn root_for(d: Order, n: i64, precision_bits: u32, cfg: &Config) -> Result<RootEnclosure> {
    cfg.check_precision(u64::from(precision_bits))?;
    // The root needs extra bits: its error is amplified about |n| times by the power.
    let extra = 64 - (n.unsigned_abs() + 1).leading_zeros() + 8;
    let root_cfg = cfg.with_max_precision_bits(cfg.max_precision_bits.saturating_add(96));
    roots::solve_q(d, precision_bits + extra, &root_cfg)
}

fn approx_from(enc: &RootEnclosure, n: i64) -> Result<CertifiedReal> {
    let c = roots::blackwell_constant(enc, roots::ConstantMethod::ReciprocalMean)?;
    let scale = enc.q().powi(1 - n)?;
    Ok(c.mul(&scale))
}

/// Enclosure of `c_d * q^-(n-1)`.
pub fn approx_value(d: Order, n: i64, precision_bits: u32, cfg: &Config) -> Result<CertifiedReal> {
    let enc = root_for(d, n, precision_bits, cfg)?;
    approx_from(&enc, n)
}

/// `(1 - q) ((1 - q) / q)^(n-1)` for `n >= 1`.
pub fn geometric_bound(enc: &RootEnclosure, n: i64) -> Result<CertifiedReal> {
    let omq = enc.one_minus_q();
    let ratio = omq.div(&enc.q())?;
    Ok(omq.mul(&ratio.powi(n - 1)?))
}

/// Starting precision for [`fib_closed`]: `ceil(n log2(1/q)) + 32`.
pub fn required_precision(d: Order, n: i64) -> u64 {
    let n = n.max(1) as f64;
    // Slightly low estimate of q gives a slightly high bit count.
    let q_lo = roots::q_estimate(d) * (1.0 - 1e-12);
    (n * (1.0 / q_lo).log2()).ceil() as u64 + ROUNDING_GUARD_BITS
}

fn nearest_integer(x: &Dyadic) -> BigInt {
    (x + &Dyadic::half()).floor()
}

/// Certified nearest-integer evaluation of `F_n^(d)`.
pub fn fib_closed(d: Order, n: i64, cfg: &Config) -> Result<ClosedFormValue> {
    if n <= 0 {
        return Ok(ClosedFormValue {
            d,
            n,
            approx: None,
            rounded: BigUint::default(),
            certified: true,
            precision_bits: 0,
        });
    }
    let max = u64::from(cfg.max_precision_bits);
    let mut bits = required_precision(d, n);
    loop {
        if bits > max {
            return Err(Error::PrecisionCeiling {
                requested: bits,
                max: cfg.max_precision_bits,
            });
        }
        let enc = root_for(d, n, bits as u32, cfg)?;
        let approx = approx_from(&enc, n)?;
        let bound = geometric_bound(&enc, n)?;
        let m = nearest_integer(&approx.midpoint());
        let md = Dyadic::from_int(m.clone());
        let half = Dyadic::half();
        let inside = approx.lo() > &(&md - &half) && approx.hi() < &(&md + &half);
        if inside && bound.hi() < &half {
            let rounded = m.to_biguint().ok_or(Error::Indeterminate {
                what: "nonnegative closed-form value",
                bits: bits as u32,
            })?;
            return Ok(ClosedFormValue {
                d,
                n,
                approx: Some(approx),
                rounded,
                certified: true,
                precision_bits: bits as u32,
            });
        }
        bits *= 2;
    }
}

/// The error `x_n = F_n - c_d q^-(n-1)` and its bound at a fixed precision.
pub fn error_term(d: Order, n: i64, precision_bits: u32, cfg: &Config) -> Result<ErrorRecord> {
    approx_with_error(d, n, precision_bits, cfg).map(|(_, rec)| rec)
}

/// [`approx_value`] together with the [`ErrorRecord`] built from the same
/// root enclosure.
pub fn approx_with_error(
    d: Order,
    n: i64,
    precision_bits: u32,
    cfg: &Config,
) -> Result<(CertifiedReal, ErrorRecord)> {
    let enc = root_for(d, n, precision_bits, cfg)?;
    let approx = approx_from(&enc, n)?;
    let exact = CertifiedReal::from_int(BigInt::from(fib_at(d, n)), approx.precision());
    let x_n = exact.sub(&approx);
    let bound = if n >= 1 {
        geometric_bound(&enc, n)?
    } else {
        CertifiedReal::point(Dyadic::half(), approx.precision())
    };
    Ok((approx, ErrorRecord { d, n, x_n, bound }))
}

/// [`error_term`] with precision doubled until both the bound comparison and
/// the half-unit comparison are decided.
pub fn certified_error_term(d: Order, n: i64, cfg: &Config) -> Result<ErrorRecord> {
    let max = u64::from(cfg.max_precision_bits);
    let mut bits = required_precision(d, n);
    loop {
        if bits > max {
            return Err(Error::Indeterminate {
                what: "error bound comparison",
                bits: cfg.max_precision_bits,
            });
        }
        let rec = error_term(d, n, bits as u32, cfg)?;
        if rec.within_bound() != Verdict::Indeterminate
            && rec.below_half() != Verdict::Indeterminate
        {
            return Ok(rec);
        }
        bits *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(d: i64) -> Order {
        Order::new(d).unwrap()
    }

    fn approx_f64(d: i64, n: i64) -> f64 {
        approx_value(ord(d), n, 64, &Config::default())
            .unwrap()
            .to_f64()
    }

    #[test]
    fn tribonacci_approximations() {
        assert!((approx_f64(3, 1) - 0.6184).abs() < 1e-4);
        assert!((approx_f64(3, 0) - 0.3362).abs() < 1e-3);
        assert!((approx_f64(3, 10) - 148.98).abs() < 1e-2);
    }

    #[test]
    fn closed_form_examples() {
        let cfg = Config::default();
        assert_eq!(
            fib_closed(ord(3), 10, &cfg).unwrap().rounded,
            BigUint::from(149u32)
        );
        let v = fib_closed(ord(3), 6, &cfg).unwrap();
        assert_eq!(v.rounded, BigUint::from(13u32));
        assert!((v.approx.unwrap().to_f64() - 13.01).abs() < 0.01);
        assert_eq!(
            fib_closed(ord(2), 50, &cfg).unwrap().rounded,
            BigUint::from(12_586_269_025u64)
        );
    }

    #[test]
    fn nonpositive_indices_skip_root() {
        let v = fib_closed(ord(4), -3, &Config::default()).unwrap();
        assert!(v.certified && v.approx.is_none());
        assert_eq!(v.rounded, BigUint::default());
    }

    #[test]
    fn ceiling_is_reported() {
        let cfg = Config::default().with_max_precision_bits(64);
        assert!(matches!(
            fib_closed(ord(3), 1000, &cfg),
            Err(Error::PrecisionCeiling { .. })
        ));
    }

    #[test]
    fn required_precision_examples() {
        assert!(required_precision(ord(3), 1) >= 33);
        assert_eq!(required_precision(ord(3), 1), 33);
        // 100 log2(1.839286755...) = 87.91...
        assert_eq!(required_precision(ord(3), 100), 120);
        for n in 1..300 {
            assert!(required_precision(ord(5), n + 1) >= required_precision(ord(5), n));
        }
    }

    #[test]
    fn error_examples() {
        let cfg = Config::default();
        let e = error_term(ord(3), 10, 64, &cfg).unwrap();
        assert!((e.x_n.to_f64() - 0.0198).abs() < 1e-3);
        assert_eq!(e.within_bound(), Verdict::Holds);

        let e = error_term(ord(3), 1, 64, &cfg).unwrap();
        assert!((e.bound.to_f64() - 0.4563).abs() < 1e-4);

        let e = error_term(ord(2), 1, 64, &cfg).unwrap();
        // 1 - 1/(2 - q) with q = (sqrt 5 - 1)/2
        assert!((e.x_n.to_f64() - 0.276_393_202_250_021).abs() < 1e-12);
    }

    #[test]
    fn nonpositive_error_uses_half_cap() {
        let e = error_term(ord(3), -4, 64, &Config::default()).unwrap();
        assert_eq!(e.bound.lo(), &Dyadic::half());
        assert_eq!(e.below_half(), Verdict::Holds);
    }
}
