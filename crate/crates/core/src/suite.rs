//! Invariant suites over every module, run by `gfib verify`.

use std::time::Instant;

use num_bigint::BigUint;

use crate::closedform::{self, certified_error_term};
use crate::combinatorics::{count_compositions, enumerate_compositions};
use crate::config::Config;
use crate::dyadic::Dyadic;
use crate::error::Result;
use crate::exact::{fib_at, fib_sequence};
use crate::interval::{CertifiedReal, Verdict};
use crate::order::Order;
use crate::renewal::{
    self, build_distribution, nbu_check, renewal_mass_dp, simulate_first_passage,
};
use crate::roots::{self, ConstantMethod};

/// How much of each range to sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    /// The full ranges.
    Full,
    /// Reduced ranges for a fast smoke run.
    Quick,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type Check = fn(Scale, &Config) -> Result<std::result::Result<String, String>>;

const CHECKS: &[(&str, Check)] = &[
    (
        "exact: matrix power equals sliding window",
        exact_cross_method,
    ),
    (
        "exact: recursion closure and monotone growth",
        exact_recursion,
    ),
    (
        "roots: certified enclosures and ordering in d",
        roots_enclosures,
    ),
    (
        "roots: two formulas for c_d, residual, E[X]/q > 2",
        roots_constants,
    ),
    (
        "closedform: nearest integer equals exact value",
        closed_form_oracle,
    ),
    (
        "closedform: |x_n| under geometric bound and 1/2",
        closed_form_error,
    ),
    (
        "combinatorics: composition counts equal F_(n+1)",
        compositions,
    ),
    (
        "renewal: dynamic program equals q^k F_(k+1)",
        renewal_mass_identity,
    ),
    ("renewal: |u_(n-1) - c_d| <= (1-q)^n", renewal_rate),
    ("renewal: new better than used", renewal_nbu),
    (
        "renewal: Monte Carlo agrees with exact mass",
        renewal_monte_carlo,
    ),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(name, _)| *name).collect()
}

pub fn run_all(scale: Scale, cfg: &Config) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(name, check)| {
            let start = Instant::now();
            let (passed, detail) = match check(scale, cfg) {
                Ok(Ok(detail)) => (true, detail),
                Ok(Err(detail)) => (false, detail),
                Err(e) => (false, format!("error: {e}")),
            };
            CheckOutcome {
                name,
                passed,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

fn ord(d: i64) -> Order {
    Order::new(d).expect("suite orders are >= 2")
}

fn pick(scale: Scale, full: i64, quick: i64) -> i64 {
    match scale {
        Scale::Full => full,
        Scale::Quick => quick,
    }
}

fn exact_cross_method(scale: Scale, _: &Config) -> Result<std::result::Result<String, String>> {
    let n_max = pick(scale, 512, 64);
    for d in 2..=8 {
        let seq = fib_sequence(ord(d), n_max)?;
        for n in 0..=n_max {
            if fib_at(ord(d), n) != seq[n as usize] {
                return Ok(Err(format!("d={d} n={n}")));
            }
        }
    }
    Ok(Ok(format!("d in 2..=8, n in 0..={n_max}")))
}

fn exact_recursion(scale: Scale, _: &Config) -> Result<std::result::Result<String, String>> {
    let n_max = pick(scale, 512, 64);
    for d in 2..=8i64 {
        let seq = fib_sequence(ord(d), n_max)?;
        for n in 2..=n_max {
            let sum: BigUint = (1..=d).filter_map(|i| seq.get(n - i)).sum();
            if sum != seq[n as usize] {
                return Ok(Err(format!("closure d={d} n={n}")));
            }
            // F_{n+1} >= F_n from n = 1, strictly from n = 2
            let (cur, prev) = (&seq[n as usize], &seq[n as usize - 1]);
            if cur < prev || (n >= 3 && cur == prev) {
                return Ok(Err(format!("growth d={d} n={n}")));
            }
        }
    }
    Ok(Ok(format!("d in 2..=8, n in 2..={n_max}")))
}

fn roots_enclosures(_: Scale, cfg: &Config) -> Result<std::result::Result<String, String>> {
    let mut prev: Option<roots::RootEnclosure> = None;
    for d in 2..=16 {
        let enc = roots::solve_q(ord(d), 128, cfg)?;
        if !enc.verify() {
            return Ok(Err(format!("invalid enclosure d={d}")));
        }
        if let Some(p) = &prev {
            if enc.q_hi() >= p.q_lo() {
                return Ok(Err(format!("q_{d} not below q_{}", d - 1)));
            }
        }
        let dist = build_distribution(&enc);
        if !dist.cdf.last().is_some_and(|c| c.contains(&Dyadic::one())) {
            return Ok(Err(format!("pmf does not sum to 1 at d={d}")));
        }
        prev = Some(enc);
    }
    Ok(Ok("d in 2..=16".into()))
}

fn roots_constants(_: Scale, cfg: &Config) -> Result<std::result::Result<String, String>> {
    for d in 2..=16 {
        let enc = roots::solve_q(ord(d), 128, cfg)?;
        let a = roots::blackwell_constant(&enc, ConstantMethod::ReciprocalMean)?;
        let b = roots::blackwell_constant(&enc, ConstantMethod::ClosedForm)?;
        if !a.intersects(&b) {
            return Ok(Err(format!("c_d formulas disagree at d={d}")));
        }
        if !roots::characteristic_residual(&enc)?.contains_zero() {
            return Ok(Err(format!("residual excludes 0 at d={d}")));
        }
        let ratio = roots::mean_lifetime(&enc).div(&enc.q())?;
        let two = CertifiedReal::from_int(2, enc.working_precision());
        if two.lt(&ratio) != Verdict::Holds {
            return Ok(Err(format!("E[X]/q not above 2 at d={d}")));
        }
    }
    Ok(Ok("d in 2..=16".into()))
}

fn closed_form_oracle(scale: Scale, cfg: &Config) -> Result<std::result::Result<String, String>> {
    let n_max = pick(scale, 1000, 100);
    for d in 2..=8 {
        let seq = fib_sequence(ord(d), n_max)?;
        for n in 1..=n_max {
            let v = closedform::fib_closed(ord(d), n, cfg)?;
            if !v.certified || v.rounded != seq[n as usize] {
                return Ok(Err(format!("d={d} n={n}")));
            }
        }
    }
    Ok(Ok(format!("d in 2..=8, n in 1..={n_max}")))
}

fn closed_form_error(scale: Scale, cfg: &Config) -> Result<std::result::Result<String, String>> {
    let n_max = pick(scale, 200, 40);
    for d in 2..=8 {
        let mut last_bound: Option<CertifiedReal> = None;
        for n in -10..=n_max {
            let rec = certified_error_term(ord(d), n, cfg)?;
            if rec.below_half() != Verdict::Holds {
                return Ok(Err(format!("|x_n| not below 1/2 at d={d} n={n}")));
            }
            if n >= 1 {
                if rec.within_bound() != Verdict::Holds {
                    return Ok(Err(format!("bound violated at d={d} n={n}")));
                }
                if let Some(prev) = &last_bound {
                    if rec.bound.lt(prev) != Verdict::Holds {
                        return Ok(Err(format!("bound not decreasing at d={d} n={n}")));
                    }
                }
                last_bound = Some(rec.bound);
            }
        }
    }
    Ok(Ok(format!("d in 2..=8, n in -10..={n_max}")))
}

fn compositions(_: Scale, cfg: &Config) -> Result<std::result::Result<String, String>> {
    for d in 2..=5 {
        for n in 0..=20 {
            let listed = enumerate_compositions(ord(d), n, cfg)?.len();
            let counted = count_compositions(ord(d), n);
            let exact = fib_at(ord(d), n + 1);
            if BigUint::from(listed) != exact || counted != exact {
                return Ok(Err(format!("d={d} n={n}")));
            }
        }
    }
    Ok(Ok("d in 2..=5, n in 0..=20".into()))
}

fn renewal_mass_identity(scale: Scale, cfg: &Config) -> Result<std::result::Result<String, String>> {
    let k_max = pick(scale, 200, 50);
    for d in 2..=6 {
        let dist = build_distribution(&roots::solve_q(ord(d), 128, cfg)?);
        let mass = renewal_mass_dp(&dist, k_max)?;
        for k in 0..=k_max as u64 {
            if !mass.values[k as usize].intersects(&renewal::renewal_mass_exact(&dist, k)) {
                return Ok(Err(format!("d={d} k={k}")));
            }
        }
    }
    Ok(Ok(format!("d in 2..=6, k in 0..={k_max}")))
}

fn renewal_rate(scale: Scale, cfg: &Config) -> Result<std::result::Result<String, String>> {
    let n_max = pick(scale, 200, 50);
    for d in 2..=6 {
        let verdicts = renewal::blackwell_rate_sweep(ord(d), n_max, cfg)?;
        if let Some(pos) = verdicts.iter().position(|v| *v != Verdict::Holds) {
            return Ok(Err(format!("d={d} n={}: {:?}", pos + 1, verdicts[pos])));
        }
    }
    Ok(Ok(format!("d in 2..=6, n in 1..={n_max}")))
}

fn renewal_nbu(_: Scale, cfg: &Config) -> Result<std::result::Result<String, String>> {
    for d in 2..=8u64 {
        let dist = build_distribution(&roots::solve_q(ord(d as i64), 128, cfg)?);
        for i in 0..d {
            for j in 0..=d {
                if !nbu_check(&dist, i, j)? {
                    return Ok(Err(format!("d={d} i={i} j={j}")));
                }
            }
        }
    }
    Ok(Ok("d in 2..=8, 0 <= i < d, 0 <= j <= d".into()))
}

fn renewal_monte_carlo(_: Scale, cfg: &Config) -> Result<std::result::Result<String, String>> {
    let d = ord(3);
    let dist = build_distribution(&roots::solve_q(d, 128, cfg)?);
    let exact = renewal::renewal_mass_exact(&dist, 10).to_f64();
    let big = simulate_first_passage(&dist, 10, 1_000_000, 42)?;
    if big.z_score(exact) > 3.0 {
        return Ok(Err(format!("z = {:.2}", big.z_score(exact))));
    }
    let seeds = 20u64;
    let covered = (0..seeds)
        .map(|s| simulate_first_passage(&dist, 10, 100_000, s).map(|r| r.ci_contains(exact)))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&c| c)
        .count() as u64;
    let needed = 17;
    if covered < needed {
        return Ok(Err(format!("{covered}/{seeds} intervals cover {exact}")));
    }
    Ok(Ok(format!(
        "z = {:.2}; {covered}/{seeds} intervals cover",
        big.z_score(exact)
    )))
}
