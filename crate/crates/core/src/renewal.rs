//! The renewal process with lifetimes `P(X = i) = q^i`, `i = 1..=d`.
//!
//! `u_k = P(the walk S_1, S_2, ... visits k)` satisfies the discrete renewal
//! equation `u_k = sum_{i=1}^{min(d,k)} p_i u_{k-i}` with `u_0 = 1`, and equals
//! `q^k F_{k+1}`. This module computes `u_k` as intervals, estimates it by
//! simulating first passages, and checks the new-better-than-used property
//! and the geometric rate `|u_{n-1} - c_d| <= (1-q)^n`.
//!
//! Simulation uses ChaCha8 (`rand_chacha::ChaCha8Rng`). Replications are split
//! into blocks of [`BLOCK_SIZE`]; block `b` draws from stream `b` of the
//! generator seeded with the user seed, so results do not depend on how the
//! blocks are scheduled across threads.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Config, MAX_RENEWAL_LENGTH};
use crate::error::{Error, Result};
use crate::exact::fib_at;
use crate::interval::{CertifiedReal, Verdict};
use crate::order::Order;
use crate::roots::{self, ConstantMethod, RootEnclosure};

/// Replications per independently seeded simulation block.
pub const BLOCK_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LifetimeDistribution {
    pub d: Order,
    pub enclosure: RootEnclosure,
    /// `pmf[i - 1]` encloses `P(X = i) = q^i`.
    pub pmf: Vec<CertifiedReal>,
    /// `cdf[i - 1]` encloses `P(X <= i)`.
    pub cdf: Vec<CertifiedReal>,
}

impl LifetimeDistribution {
    pub fn precision(&self) -> u32 {
        self.enclosure.working_precision()
    }

    /// `P(X > i)`, exact for `i = 0` and `i >= d`, otherwise the tail sum
    /// `q^(i+1) + ... + q^d`.
    pub fn survival(&self, i: u64) -> CertifiedReal {
        let p = self.precision();
        let d = self.d.get() as u64;
        if i == 0 {
            CertifiedReal::one(p)
        } else if i >= d {
            CertifiedReal::zero(p)
        } else {
            self.pmf[i as usize..]
                .iter()
                .fold(CertifiedReal::zero(p), |acc, pk| acc.add(pk))
        }
    }

    /// Midpoint pmf as `f64`, renormalized to sum to one, for sampling.
    fn sampling_cdf(&self) -> Vec<f64> {
        let mids: Vec<f64> = self.pmf.iter().map(CertifiedReal::to_f64).collect();
        let total: f64 = mids.iter().sum();
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = mids
            .iter()
            .map(|p| {
                acc += p / total;
                acc
            })
            .collect();
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        cdf
    }
}

pub fn build_distribution(enclosure: &RootEnclosure) -> LifetimeDistribution {
    let q = enclosure.q();
    let d = enclosure.order();
    let mut pmf = Vec::with_capacity(d.get());
    let mut power = q.clone();
    for _ in 0..d.get() {
        pmf.push(power.clone());
        power = power.mul(&q);
    }
    let mut cdf = Vec::with_capacity(d.get());
    let mut acc = CertifiedReal::zero(enclosure.working_precision());
    for p in &pmf {
        acc = acc.add(p);
        cdf.push(acc.clone());
    }
    LifetimeDistribution {
        d,
        enclosure: enclosure.clone(),
        pmf,
        cdf,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenewalMass {
    pub d: Order,
    /// `values[k]` encloses `u_k`; `values[0]` is exactly one.
    pub values: Vec<CertifiedReal>,
}

impl RenewalMass {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `u_0 ..= u_{n_max}` by the renewal equation.
pub fn renewal_mass_dp(dist: &LifetimeDistribution, n_max: i64) -> Result<RenewalMass> {
    if n_max < 0 {
        return Err(Error::NegativeLength(n_max));
    }
    if n_max as u64 > MAX_RENEWAL_LENGTH {
        return Err(Error::LengthLimit {
            requested: n_max as u64,
            max: MAX_RENEWAL_LENGTH,
        });
    }
    let n_max = n_max as usize;
    let prec = dist.precision();
    let mut values = Vec::with_capacity(n_max + 1);
    values.push(CertifiedReal::one(prec));
    for k in 1..=n_max {
        let u = (1..=dist.d.get().min(k)).fold(CertifiedReal::zero(prec), |acc, i| {
            acc.add(&dist.pmf[i - 1].mul(&values[k - i]))
        });
        values.push(u);
    }
    Ok(RenewalMass { d: dist.d, values })
}

/// Enclosure of `q^k F_{k+1}`, the closed expression for `u_k`.
pub fn renewal_mass_exact(dist: &LifetimeDistribution, k: u64) -> CertifiedReal {
    let f = BigInt::from(fib_at(dist.d, k as i64 + 1));
    dist.enclosure.q().powu(k).mul_int(f)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub d: Order,
    pub n: i64,
    pub replications: u64,
    pub seed: u64,
    pub hits: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub ci95: (f64, f64),
}

impl SimulationReport {
    fn from_hits(d: Order, n: i64, replications: u64, seed: u64, hits: u64) -> Self {
        let estimate = hits as f64 / replications as f64;
        let std_error = (estimate * (1.0 - estimate) / replications as f64).sqrt();
        let half = 1.96 * std_error;
        SimulationReport {
            d,
            n,
            replications,
            seed,
            hits,
            estimate,
            std_error,
            ci95: (estimate - half, estimate + half),
        }
    }

    pub fn ci_contains(&self, value: f64) -> bool {
        self.ci95.0 <= value && value <= self.ci95.1
    }

    /// `|estimate - value|` in units of the standard error.
    pub fn z_score(&self, value: f64) -> f64 {
        (self.estimate - value).abs() / self.std_error
    }
}

/// Estimates `u_n = P(S_{tau_n} = n)` by running the walk from `S_0 = 0` until
/// it reaches at least `n`, counting exact landings on `n`.
pub fn simulate_first_passage(
    dist: &LifetimeDistribution,
    n: i64,
    replications: u64,
    seed: u64,
) -> Result<SimulationReport> {
    if replications == 0 {
        return Err(Error::ZeroReplications);
    }
    if n < 1 {
        return Err(Error::InvalidLevel(n));
    }
    let cdf = dist.sampling_cdf();
    let target = n as u64;
    let blocks = replications.div_ceil(BLOCK_SIZE);
    let hits: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let count = BLOCK_SIZE.min(replications - b * BLOCK_SIZE);
            (0..count)
                .filter(|_| first_passage_hits(&cdf, target, &mut rng))
                .count() as u64
        })
        .sum();
    Ok(SimulationReport::from_hits(
        dist.d,
        n,
        replications,
        seed,
        hits,
    ))
}

fn first_passage_hits(cdf: &[f64], target: u64, rng: &mut impl Rng) -> bool {
    let mut s = 0u64;
    while s < target {
        let u: f64 = rng.gen();
        let idx = cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1);
        s += idx as u64 + 1;
    }
    s == target
}

fn rebuild(dist: &LifetimeDistribution) -> Result<LifetimeDistribution> {
    let bits = dist.enclosure.precision_bits().saturating_mul(2);
    let enc = roots::solve_q(dist.d, bits, &Config::default())?;
    Ok(build_distribution(&enc))
}

fn nbu_verdict(dist: &LifetimeDistribution, i: u64, j: u64) -> Verdict {
    let lhs = dist.survival(i + j);
    let rhs = dist.survival(i).mul(&dist.survival(j));
    lhs.le(&rhs)
}

/// Certified `P(X > i + j) <= P(X > i) P(X > j)`, the unconditional form of
/// `P(X > i + j | X > i) <= P(X > j)`.
pub fn nbu_check(dist: &LifetimeDistribution, i: u64, j: u64) -> Result<bool> {
    let d = dist.d.get() as u64;
    if i >= d {
        return Err(Error::NullConditioning { i, d: dist.d.get() });
    }
    // Equality cases, decided structurally.
    if i == 0 || j == 0 || i + j >= d {
        return Ok(true);
    }
    let verdict = match nbu_verdict(dist, i, j) {
        Verdict::Indeterminate => nbu_verdict(&rebuild(dist)?, i, j),
        v => v,
    };
    match verdict {
        Verdict::Holds => Ok(true),
        Verdict::Violated => Ok(false),
        Verdict::Indeterminate => Err(Error::Indeterminate {
            what: "new-better-than-used comparison",
            bits: dist.enclosure.precision_bits() * 2,
        }),
    }
}

fn rate_verdict(
    dist: &LifetimeDistribution,
    mass: &RenewalMass,
    c: &CertifiedReal,
    n: usize,
) -> Verdict {
    let lhs = mass.values[n - 1].sub(c).abs();
    let rhs = dist.enclosure.one_minus_q().powu(n as u64);
    lhs.le(&rhs)
}

/// Certified `|u_{n-1} - c| <= (1 - q)^n`. An undecided comparison is retried
/// once at double precision before being reported as
/// [`Verdict::Indeterminate`].
pub fn blackwell_rate_check(
    dist: &LifetimeDistribution,
    mass: &RenewalMass,
    c: &CertifiedReal,
    n: i64,
) -> Result<Verdict> {
    if n < 1 || n as usize > mass.len() {
        return Err(Error::IndexOutOfRange {
            index: n,
            len: mass.len(),
        });
    }
    let n = n as usize;
    match rate_verdict(dist, mass, c, n) {
        Verdict::Indeterminate => {
            let finer = rebuild(dist)?;
            let mass = renewal_mass_dp(&finer, n as i64 - 1)?;
            let c = roots::blackwell_constant(&finer.enclosure, ConstantMethod::ReciprocalMean)?;
            Ok(rate_verdict(&finer, &mass, &c, n))
        }
        v => Ok(v),
    }
}

/// Rate verdicts for every `n` in `1..=n_max`, with precision chosen so that
/// `(1 - q)^n_max` is resolved and doubled while anything stays undecided.
pub fn blackwell_rate_sweep(d: Order, n_max: i64, cfg: &Config) -> Result<Vec<Verdict>> {
    let q = roots::q_estimate(d);
    let mut bits = ((n_max.max(1) as f64) * (1.0 / (1.0 - q)).log2()).ceil() as u64 + 64;
    loop {
        let p = cfg.check_precision(bits)?;
        let enc = roots::solve_q(d, p, cfg)?;
        let dist = build_distribution(&enc);
        let mass = renewal_mass_dp(&dist, n_max - 1)?;
        let c = roots::blackwell_constant(&enc, ConstantMethod::ReciprocalMean)?;
        let verdicts: Vec<Verdict> = (1..=n_max as usize)
            .map(|n| rate_verdict(&dist, &mass, &c, n))
            .collect();
        if verdicts.iter().all(|v| *v != Verdict::Indeterminate) {
            return Ok(verdicts);
        }
        bits *= 2;
    }
}
