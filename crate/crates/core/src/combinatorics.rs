//! Compositions of `n` with parts in `1..=d`: there are exactly `F_{n+1}^(d)`
//! of them, and under `P(X = i) = q^i` each one has probability `q^n`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::interval::CertifiedReal;
use crate::order::Order;
use crate::roots::RootEnclosure;

/// All compositions of `n` with parts in `1..=d`, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionSet {
    pub d: Order,
    pub n: i64,
    pub compositions: Vec<Vec<u32>>,
}

impl CompositionSet {
    pub fn len(&self) -> usize {
        self.compositions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.compositions.is_empty()
    }
}

pub fn enumerate_compositions(d: Order, n: i64, cfg: &Config) -> Result<CompositionSet> {
    if n > cfg.enumeration_cap {
        return Err(Error::EnumerationCap {
            n,
            cap: cfg.enumeration_cap,
        });
    }
    let mut compositions = Vec::new();
    if n >= 0 {
        let mut prefix = Vec::new();
        extend(d.get() as u32, n as u32, &mut prefix, &mut compositions);
    }
    Ok(CompositionSet { d, n, compositions })
}

fn extend(d: u32, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if remaining == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in 1..=d.min(remaining) {
        prefix.push(part);
        extend(d, remaining - part, prefix, out);
        prefix.pop();
    }
}

/// `|compositions of n|` by summing over the last part, without enumerating.
pub fn count_compositions(d: Order, n: i64) -> BigUint {
    if n < 0 {
        return BigUint::zero();
    }
    let n = n as usize;
    let mut counts: Vec<BigUint> = Vec::with_capacity(n + 1);
    counts.push(BigUint::one());
    for m in 1..=n {
        let c = (1..=d.get().min(m)).map(|last| &counts[m - last]).sum();
        counts.push(c);
    }
    counts.pop().unwrap_or_default()
}

/// Enclosure of `sum(parts) * ln q`, the log-probability of observing the
/// lifetimes `parts` in that order.
pub fn composition_log_probability(
    d: Order,
    composition: &[u32],
    enclosure: &RootEnclosure,
) -> Result<CertifiedReal> {
    let mut total: u64 = 0;
    for &part in composition {
        if part == 0 || part as usize > d.get() {
            return Err(Error::InvalidPart {
                part: u64::from(part),
                d: d.get(),
            });
        }
        total += u64::from(part);
    }
    Ok(enclosure.q().ln()?.mul_int(total))
}
