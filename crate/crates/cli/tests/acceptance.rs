//! Acceptance suite. Each criterion prints one PASS or FAIL line with its
//! measured detail and wall time; the process exits nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use gfib_core::closedform::{certified_error_term, fib_closed};
use gfib_core::combinatorics::enumerate_compositions;
use gfib_core::renewal::{
    blackwell_rate_sweep, build_distribution, nbu_check, renewal_mass_dp, renewal_mass_exact,
    simulate_first_passage,
};
use gfib_core::roots::{blackwell_constant, characteristic_residual, solve_q, ConstantMethod};
use gfib_core::{fib_at, fib_sequence, Config, Order, Verdict};
use num_bigint::BigUint;

type Outcome = Result<String, String>;

fn ord(d: i64) -> Order {
    Order::new(d).unwrap()
}

fn within(limit: Duration, elapsed: Duration) -> Outcome {
    if elapsed < limit {
        Ok(String::new())
    } else {
        Err(format!(
            "took {:.2}s, limit {}s",
            elapsed.as_secs_f64(),
            limit.as_secs_f64()
        ))
    }
}

fn tribonacci_table() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_gfib"))
        .args([
            "table",
            "--d",
            "3",
            "--n-max",
            "10",
            "--decimals",
            "2",
            "--truncate",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if !out.status.success() {
        return Err(format!("exit status {}", out.status));
    }
    let stdout = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let mut lines = stdout.lines();
    let header: Vec<&str> = lines
        .next()
        .unwrap_or_default()
        .split_whitespace()
        .collect();
    if header != ["n", "exact", "approx", "error", "bound"] {
        return Err(format!("header {header:?}"));
    }
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split_whitespace().collect()).collect();
    let exact: Vec<&str> = rows.iter().map(|r| r[1]).collect();
    let approx: Vec<&str> = rows.iter().map(|r| r[2]).collect();
    let want_exact = ["0", "1", "1", "2", "4", "7", "13", "24", "44", "81", "149"];
    let want_approx = [
        "0.33", "0.61", "1.13", "2.09", "3.84", "7.07", "13.01", "23.94", "44.03", "80.99",
        "148.98",
    ];
    if exact != want_exact {
        return Err(format!("exact column {exact:?}"));
    }
    if approx != want_approx {
        return Err(format!("approx column {approx:?}"));
    }
    within(Duration::from_secs(1), elapsed)?;
    Ok(format!(
        "11 rows byte-exact in {:.3}s",
        elapsed.as_secs_f64()
    ))
}

fn rounding_representation(cfg: &Config) -> Outcome {
    let start = Instant::now();
    for d in 2..=8 {
        let seq = fib_sequence(ord(d), 1000).map_err(|e| e.to_string())?;
        for n in 1..=1000 {
            let v = fib_closed(ord(d), n, cfg).map_err(|e| format!("d={d} n={n}: {e}"))?;
            if v.rounded != seq[n as usize] || v.rounded != fib_at(ord(d), n) {
                return Err(format!("d={d} n={n}: {} != {}", v.rounded, seq[n as usize]));
            }
        }
    }
    within(Duration::from_secs(60), start.elapsed())?;
    Ok("7000 values equal".into())
}

fn error_bound(cfg: &Config) -> Outcome {
    let mut checked = 0;
    for d in 2..=8 {
        for n in -10..=200 {
            let rec =
                certified_error_term(ord(d), n, cfg).map_err(|e| format!("d={d} n={n}: {e}"))?;
            if rec.below_half() != Verdict::Holds {
                return Err(format!("|x_n| < 1/2 not certified at d={d} n={n}"));
            }
            if n >= 1 && rec.within_bound() != Verdict::Holds {
                return Err(format!("bound not certified at d={d} n={n}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} certified comparisons, 0 violations"))
}

fn composition_counts(cfg: &Config) -> Outcome {
    let start = Instant::now();
    for d in 2..=5 {
        for n in 0..=20 {
            let listed = enumerate_compositions(ord(d), n, cfg)
                .map_err(|e| e.to_string())?
                .len();
            let want = fib_at(ord(d), n + 1);
            if BigUint::from(listed) != want {
                return Err(format!("d={d} n={n}: {listed} != {want}"));
            }
        }
    }
    within(Duration::from_secs(30), start.elapsed())?;
    Ok("84 counts equal".into())
}

fn renewal_mass_identity(cfg: &Config) -> Outcome {
    for d in 2..=6 {
        let enc = solve_q(ord(d), 128, cfg).map_err(|e| e.to_string())?;
        let dist = build_distribution(&enc);
        let mass = renewal_mass_dp(&dist, 200).map_err(|e| e.to_string())?;
        for k in 0..=200u64 {
            if !mass.values[k as usize].intersects(&renewal_mass_exact(&dist, k)) {
                return Err(format!("empty intersection at d={d} k={k}"));
            }
        }
    }
    Ok("1005 intervals intersect at 128 bits".into())
}

fn blackwell_rate(cfg: &Config) -> Outcome {
    for d in 2..=6 {
        let verdicts = blackwell_rate_sweep(ord(d), 200, cfg).map_err(|e| e.to_string())?;
        if let Some(i) = verdicts.iter().position(|v| *v != Verdict::Holds) {
            return Err(format!("d={d} n={}: {:?}", i + 1, verdicts[i]));
        }
    }
    Ok("1000 inequalities certified".into())
}

fn new_better_than_used(cfg: &Config) -> Outcome {
    let mut pairs = 0;
    for d in 2..=8u64 {
        let dist =
            build_distribution(&solve_q(ord(d as i64), 128, cfg).map_err(|e| e.to_string())?);
        for i in 0..d {
            for j in 0..=d {
                if !nbu_check(&dist, i, j).map_err(|e| e.to_string())? {
                    return Err(format!("d={d} i={i} j={j}"));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn constant_consistency(cfg: &Config) -> Outcome {
    for d in 2..=16 {
        let enc = solve_q(ord(d), 128, cfg).map_err(|e| e.to_string())?;
        let a =
            blackwell_constant(&enc, ConstantMethod::ReciprocalMean).map_err(|e| e.to_string())?;
        let b = blackwell_constant(&enc, ConstantMethod::ClosedForm).map_err(|e| e.to_string())?;
        if !a.intersects(&b) {
            return Err(format!("c_d intervals disjoint at d={d}"));
        }
        if !characteristic_residual(&enc)
            .map_err(|e| e.to_string())?
            .contains_zero()
        {
            return Err(format!("residual excludes 0 at d={d}"));
        }
    }
    Ok("d in 2..=16".into())
}

fn monte_carlo(cfg: &Config) -> Outcome {
    let start = Instant::now();
    let dist = build_distribution(&solve_q(ord(3), 128, cfg).map_err(|e| e.to_string())?);
    let exact = renewal_mass_exact(&dist, 10).to_f64();
    let quoted = 0.61850;
    let report = simulate_first_passage(&dist, 10, 1_000_000, 42).map_err(|e| e.to_string())?;
    let (z_quoted, z_exact) = (report.z_score(quoted), report.z_score(exact));
    if z_quoted > 3.0 || z_exact > 3.0 {
        return Err(format!(
            "estimate {:.6} (se {:.2e}) is {z_quoted:.2} se from {quoted:.5} and {z_exact:.2} se from {exact:.6}",
            report.estimate, report.std_error
        ));
    }
    let mut covered = 0;
    for seed in 0..20 {
        let r = simulate_first_passage(&dist, 10, 100_000, seed).map_err(|e| e.to_string())?;
        covered += usize::from(r.ci_contains(exact));
    }
    if covered < 17 {
        return Err(format!("{covered}/20 intervals cover {exact:.6}"));
    }
    within(Duration::from_secs(60), start.elapsed())?;
    Ok(format!(
        "estimate {:.6}, {z_quoted:.2} se from {quoted:.5}, {z_exact:.2} se from {exact:.6}; {covered}/20 cover",
        report.estimate
    ))
}

fn main() -> ExitCode {
    let cfg = Config::default();
    let criteria: [(&str, &dyn Fn() -> Outcome); 9] = [
        ("1 tribonacci table", &tribonacci_table),
        ("2 nearest-integer representation", &|| {
            rounding_representation(&cfg)
        }),
        ("3 error bound and |x_n| < 1/2", &|| error_bound(&cfg)),
        ("4 composition counts", &|| composition_counts(&cfg)),
        ("5 renewal mass identity", &|| renewal_mass_identity(&cfg)),
        ("6 blackwell rate", &|| blackwell_rate(&cfg)),
        ("7 new better than used", &|| new_better_than_used(&cfg)),
        ("8 constant consistency", &|| constant_consistency(&cfg)),
        ("9 monte carlo", &|| monte_carlo(&cfg)),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS  criterion {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail} [{secs:.2}s]");
            }
        }
    }
    println!("acceptance: {}/9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
