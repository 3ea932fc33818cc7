//! The `gfib` command line.
//!
//! [`run`] takes the full argument vector and writes to the supplied streams,
//! returning the process exit status:
//!
//! | status | meaning |
//! |--------|---------|
//! | 0 | success |
//! | 1 | usage error (bad flag, bad value, d < 2, ...) |
//! | 2 | a verification check failed |
//! | 3 | precision ceiling reached |

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gfib_core::{
    blackwell_constant, build_distribution, characteristic_residual, count_compositions,
    enumerate_compositions, fib_at, fib_closed, fib_sequence, mean_lifetime, renewal,
    simulate_first_passage, solve_q, suite, CertifiedReal, Config, ConstantMethod, DecimalMode,
    Error as CoreError, Order,
};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

pub mod table;

use table::{Display, JsonRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Verification(_) => EXIT_VERIFY,
            CliError::Core(e) => match e {
                CoreError::PrecisionCeiling { .. }
                | CoreError::ZeroDenominator { .. }
                | CoreError::Indeterminate { .. } => EXIT_PRECISION,
                CoreError::BracketViolation { .. } => EXIT_VERIFY,
                _ => EXIT_USAGE,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    ReciprocalMean,
    ClosedForm,
    Both,
}

#[derive(Debug, Parser)]
#[command(
    name = "gfib",
    version,
    about = "Generalized Fibonacci numbers, exactly and by nearest-integer rounding"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    /// Decimal places for rendered reals.
    #[arg(long, default_value_t = 6)]
    pub decimals: usize,
    /// Truncate toward zero instead of rounding when rendering reals.
    #[arg(long)]
    pub truncate: bool,
}

impl Output {
    fn display(&self) -> Display {
        Display {
            decimals: self.decimals,
            mode: if self.truncate {
                DecimalMode::Truncate
            } else {
                DecimalMode::Round
            },
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact F_n (or F_0..F_{n-max}) by big-integer recursion.
    Exact {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long, allow_negative_numbers = true, required_unless_present = "n_max")]
        n: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        n_max: Option<i64>,
        #[command(flatten)]
        output: Output,
    },
    /// F_n as the certified nearest integer to c_d q^-(n-1).
    Closed {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[command(flatten)]
        output: Output,
    },
    /// Certified enclosure of the root q of q + ... + q^d = 1.
    Root {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long, default_value_t = gfib_core::DEFAULT_PRECISION_BITS)]
        precision_bits: u32,
        #[command(flatten)]
        output: Output,
    },
    /// The mean lifetime E[X] and the renewal constant c_d.
    Constant {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long, default_value_t = gfib_core::DEFAULT_PRECISION_BITS)]
        precision_bits: u32,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
        #[command(flatten)]
        output: Output,
    },
    /// Exact values next to the approximation, its error, and the error bound.
    Table {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long, allow_negative_numbers = true)]
        n_max: i64,
        #[arg(long, default_value_t = gfib_core::DEFAULT_PRECISION_BITS)]
        precision_bits: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Compositions of n with parts in 1..=d.
    Compositions {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        /// Print only the count (no enumeration cap applies).
        #[arg(long)]
        count: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Monte Carlo estimate of the probability that the walk lands on n.
    Simulate {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = gfib_core::DEFAULT_PRECISION_BITS)]
        precision_bits: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Run every invariant suite; exit status 2 if any fails.
    Verify {
        /// Reduced ranges.
        #[arg(long)]
        quick: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Wall time per call of the three evaluation paths.
    Bench {
        /// Largest order in the grid.
        #[arg(long, default_value_t = 8)]
        d: i64,
        /// Largest index in the grid (powers of ten up to this).
        #[arg(long, default_value_t = 10_000)]
        n_max: i64,
        /// Timed repetitions per cell.
        #[arg(long, default_value_t = 3)]
        iters: u32,
        #[command(flatten)]
        output: Output,
    },
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let cfg = Config::from_env();
    match execute(&cli.command, &cfg, stderr) {
        Ok((body, output, status)) => match emit(&body, output, stdout) {
            Ok(()) => status,
            Err(e) => {
                let _ = writeln!(stderr, "gfib: {e}");
                e.exit_code()
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "gfib: {e}");
            if matches!(e, CliError::Usage(_))
                || matches!(e, CliError::Core(CoreError::InvalidOrder(_)))
            {
                let _ = writeln!(stderr, "run `gfib --help` for usage");
            }
            e.exit_code()
        }
    }
}

fn emit(body: &str, output: &Output, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &output.out {
        Some(path) => std::fs::write(path, body)?,
        None => stdout.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn order(d: i64) -> Result<Order, CliError> {
    Order::new(d).map_err(|e| CliError::Usage(e.to_string()))
}

fn json_string<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

/// A real as display string plus exact midpoint and radius.
fn real_json(x: &CertifiedReal, disp: Display) -> Value {
    json!({
        "value": disp.render(x),
        "mid": x.midpoint().to_decimal_exact(),
        "radius": x.radius().to_decimal_exact(),
        "lo": x.lo().to_decimal_exact(),
        "hi": x.hi().to_decimal_exact(),
    })
}

/// Key/value records rendered as `key: value` lines or a two-row CSV.
fn records(pairs: &[(&str, String)], format: Format) -> String {
    match format {
        Format::Csv => {
            let keys: Vec<&str> = pairs.iter().map(|(k, _)| *k).collect();
            let vals: Vec<&str> = pairs.iter().map(|(_, v)| v.as_str()).collect();
            format!("{}\n{}\n", keys.join(","), vals.join(","))
        }
        _ => pairs.iter().map(|(k, v)| format!("{k}: {v}\n")).collect(),
    }
}

fn meta(precision_bits: Option<u32>) -> Value {
    json!({
        "precision_bits": precision_bits,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

fn execute<'a>(
    cmd: &'a Command,
    cfg: &Config,
    stderr: &mut dyn Write,
) -> Result<(String, &'a Output, i32), CliError> {
    match cmd {
        Command::Exact {
            d,
            n,
            n_max,
            output,
        } => {
            let d = order(*d)?;
            let body = match (n, n_max) {
                (Some(n), _) => {
                    let v = fib_at(d, *n);
                    match output.format {
                        Format::Text => format!("{v}\n"),
                        Format::Csv => format!("n,exact\n{n},{v}\n"),
                        Format::Json => json_string(&json!({
                            "params": {"d": d.get(), "n": n},
                            "value": v.to_string(),
                            "meta": meta(None),
                        })),
                    }
                }
                (None, Some(m)) => {
                    let seq = fib_sequence(d, *m).map_err(|e| CliError::Usage(e.to_string()))?;
                    let vals = seq.values();
                    match output.format {
                        Format::Text => vals.iter().map(|v| format!("{v}\n")).collect(),
                        Format::Csv => {
                            let mut s = String::from("n,exact\n");
                            for (i, v) in vals.iter().enumerate() {
                                s.push_str(&format!("{i},{v}\n"));
                            }
                            s
                        }
                        Format::Json => json_string(&json!({
                            "params": {"d": d.get(), "n_max": m},
                            "values": vals.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                            "meta": meta(None),
                        })),
                    }
                }
                (None, None) => {
                    return Err(CliError::Usage("one of --n or --n-max is required".into()))
                }
            };
            Ok((body, output, EXIT_OK))
        }
        Command::Closed { d, n, output } => {
            let d = order(*d)?;
            let v = fib_closed(d, *n, cfg)?;
            let disp = output.display();
            let body = match output.format {
                Format::Text => format!("{}\n", v.rounded),
                Format::Csv => {
                    let approx = v
                        .approx
                        .as_ref()
                        .map(|a| disp.render(a))
                        .unwrap_or_default();
                    format!(
                        "n,rounded,approx,precision_bits\n{},{},{},{}\n",
                        n, v.rounded, approx, v.precision_bits
                    )
                }
                Format::Json => json_string(&json!({
                    "params": {"d": d.get(), "n": n},
                    "rounded": v.rounded.to_string(),
                    "certified": v.certified,
                    "approx": v.approx.as_ref().map(|a| real_json(a, disp)),
                    "meta": meta(Some(v.precision_bits)),
                })),
            };
            Ok((body, output, EXIT_OK))
        }
        Command::Root {
            d,
            precision_bits,
            output,
        } => {
            let d = order(*d)?;
            let enc = solve_q(d, *precision_bits, cfg)?;
            let q = enc.q();
            let disp = output.display();
            let residual = characteristic_residual(&enc)?;
            let body = match output.format {
                Format::Json => json_string(&json!({
                    "params": {"d": d.get(), "precision_bits": precision_bits},
                    "q": real_json(&q, disp),
                    "q_lo": enc.q_lo().to_decimal_exact(),
                    "q_hi": enc.q_hi().to_decimal_exact(),
                    "characteristic_residual": real_json(&residual, disp),
                    "meta": meta(Some(*precision_bits)),
                })),
                f => records(
                    &[
                        ("d", d.to_string()),
                        ("q", disp.render(&q)),
                        ("q_lo", enc.q_lo().to_decimal_exact()),
                        ("q_hi", enc.q_hi().to_decimal_exact()),
                        ("width", format!("{:e}", enc.q().width().to_f64())),
                        (
                            "residual_contains_zero",
                            residual.contains_zero().to_string(),
                        ),
                    ],
                    f,
                ),
            };
            Ok((body, output, EXIT_OK))
        }
        Command::Constant {
            d,
            precision_bits,
            method,
            output,
        } => {
            let d = order(*d)?;
            let enc = solve_q(d, *precision_bits, cfg)?;
            let disp = output.display();
            let mean = mean_lifetime(&enc);
            let recip = blackwell_constant(&enc, ConstantMethod::ReciprocalMean)?;
            let closed = blackwell_constant(&enc, ConstantMethod::ClosedForm)?;
            let mut pairs = vec![("d", d.to_string()), ("mean_lifetime", disp.render(&mean))];
            let mut obj = serde_json::Map::new();
            obj.insert(
                "params".into(),
                json!({"d": d.get(), "precision_bits": precision_bits}),
            );
            obj.insert("mean_lifetime".into(), real_json(&mean, disp));
            if matches!(method, Method::ReciprocalMean | Method::Both) {
                pairs.push(("c_d_reciprocal_mean", disp.render(&recip)));
                obj.insert("c_d_reciprocal_mean".into(), real_json(&recip, disp));
            }
            if matches!(method, Method::ClosedForm | Method::Both) {
                pairs.push(("c_d_closed_form", disp.render(&closed)));
                obj.insert("c_d_closed_form".into(), real_json(&closed, disp));
            }
            if *method == Method::Both {
                pairs.push(("formulas_agree", recip.intersects(&closed).to_string()));
                obj.insert("formulas_agree".into(), json!(recip.intersects(&closed)));
            }
            obj.insert("meta".into(), meta(Some(*precision_bits)));
            let body = match output.format {
                Format::Json => json_string(&Value::Object(obj)),
                f => records(&pairs, f),
            };
            Ok((body, output, EXIT_OK))
        }
        Command::Table {
            d,
            n_max,
            precision_bits,
            output,
        } => {
            let d = order(*d)?;
            if *n_max < 0 {
                return Err(CliError::Usage(format!(
                    "--n-max must be nonnegative, got {n_max}"
                )));
            }
            let rows = table::build(d, *n_max, *precision_bits, cfg)?;
            let disp = output.display();
            let body = match output.format {
                Format::Text => table::to_text(&rows, disp),
                Format::Csv => table::to_csv(&rows, disp),
                Format::Json => {
                    let used = rows.iter().map(|r| r.approx.precision()).max();
                    json_string(&json!({
                        "params": {
                            "d": d.get(),
                            "n_max": n_max,
                            "precision_bits": precision_bits,
                            "decimals": output.decimals,
                            "truncate": output.truncate,
                        },
                        "rows": rows.iter().map(|r| JsonRow::new(r, disp)).collect::<Vec<_>>(),
                        "meta": meta(used),
                    }))
                }
            };
            Ok((body, output, EXIT_OK))
        }
        Command::Compositions {
            d,
            n,
            count,
            output,
        } => {
            let d = order(*d)?;
            let body = if *count {
                let c = count_compositions(d, *n);
                match output.format {
                    Format::Text => format!("{c}\n"),
                    Format::Csv => format!("n,count\n{n},{c}\n"),
                    Format::Json => json_string(&json!({
                        "params": {"d": d.get(), "n": n},
                        "count": c.to_string(),
                        "meta": meta(None),
                    })),
                }
            } else {
                let set = enumerate_compositions(d, *n, cfg)?;
                let join = |c: &Vec<u32>, sep: &str| {
                    c.iter().map(u32::to_string).collect::<Vec<_>>().join(sep)
                };
                match output.format {
                    Format::Text => set
                        .compositions
                        .iter()
                        .map(|c| {
                            if c.is_empty() {
                                "()\n".to_string()
                            } else {
                                format!("{}\n", join(c, "+"))
                            }
                        })
                        .collect(),
                    Format::Csv => {
                        let mut s = String::from("index,parts\n");
                        for (i, c) in set.compositions.iter().enumerate() {
                            s.push_str(&format!("{i},{}\n", join(c, " ")));
                        }
                        s
                    }
                    Format::Json => json_string(&json!({
                        "params": {"d": d.get(), "n": n},
                        "count": set.len(),
                        "compositions": set.compositions,
                        "meta": meta(None),
                    })),
                }
            };
            Ok((body, output, EXIT_OK))
        }
        Command::Simulate {
            d,
            n,
            reps,
            seed,
            precision_bits,
            output,
        } => {
            let d = order(*d)?;
            let enc = solve_q(d, *precision_bits, cfg)?;
            let dist = build_distribution(&enc);
            let report = simulate_first_passage(&dist, *n, *reps, *seed)?;
            let exact = renewal::renewal_mass_exact(&dist, *n as u64);
            let exact_f = exact.to_f64();
            let disp = output.display();
            let fmt = |x: f64| format!("{:.*}", output.decimals, x);
            let body = match output.format {
                Format::Json => json_string(&json!({
                    "params": {"d": d.get(), "n": n, "reps": reps, "seed": seed},
                    "hits": report.hits,
                    "estimate": report.estimate,
                    "std_error": report.std_error,
                    "ci95": [report.ci95.0, report.ci95.1],
                    "exact": real_json(&exact, disp),
                    "z_score": report.z_score(exact_f),
                    "meta": meta(Some(*precision_bits)),
                })),
                f => records(
                    &[
                        ("d", d.to_string()),
                        ("n", n.to_string()),
                        ("replications", reps.to_string()),
                        ("seed", seed.to_string()),
                        ("hits", report.hits.to_string()),
                        ("estimate", fmt(report.estimate)),
                        ("std_error", fmt(report.std_error)),
                        ("ci95_lo", fmt(report.ci95.0)),
                        ("ci95_hi", fmt(report.ci95.1)),
                        ("exact", disp.render(&exact)),
                        ("z_score", format!("{:.3}", report.z_score(exact_f))),
                    ],
                    f,
                ),
            };
            Ok((body, output, EXIT_OK))
        }
        Command::Verify { quick, output } => {
            let scale = if *quick {
                suite::Scale::Quick
            } else {
                suite::Scale::Full
            };
            let outcomes = suite::run_all(scale, cfg);
            for o in &outcomes {
                let _ = writeln!(stderr, "{:>8.2}s  {}", o.seconds, o.name);
            }
            let failed: Vec<&str> = outcomes
                .iter()
                .filter(|o| !o.passed)
                .map(|o| o.name)
                .collect();
            let body = match output.format {
                Format::Json => json_string(&json!({
                    "params": {"quick": quick},
                    "checks": outcomes.iter().map(|o| json!({
                        "name": o.name, "passed": o.passed, "detail": o.detail,
                    })).collect::<Vec<_>>(),
                    "passed": failed.is_empty(),
                    "meta": meta(None),
                })),
                Format::Csv => {
                    let mut s = String::from("check,passed,detail\n");
                    for o in &outcomes {
                        s.push_str(&format!("\"{}\",{},\"{}\"\n", o.name, o.passed, o.detail));
                    }
                    s
                }
                Format::Text => {
                    let mut s: String = outcomes
                        .iter()
                        .map(|o| {
                            format!(
                                "{} {} ({})\n",
                                if o.passed { "PASS" } else { "FAIL" },
                                o.name,
                                o.detail
                            )
                        })
                        .collect();
                    s.push_str(&format!(
                        "{}/{} checks passed\n",
                        outcomes.len() - failed.len(),
                        outcomes.len()
                    ));
                    s
                }
            };
            let status = if failed.is_empty() {
                EXIT_OK
            } else {
                EXIT_VERIFY
            };
            Ok((body, output, status))
        }
        Command::Bench {
            d,
            n_max,
            iters,
            output,
        } => {
            let d_max = order(*d)?;
            let body = bench(d_max, *n_max, (*iters).max(1), cfg, output.format)?;
            Ok((body, output, EXIT_OK))
        }
    }
}

fn bench(
    d_max: Order,
    n_max: i64,
    iters: u32,
    cfg: &Config,
    format: Format,
) -> Result<String, CliError> {
    let orders: Vec<i64> = [2, 3, 5, 8, 13]
        .into_iter()
        .filter(|&d| d <= d_max.get() as i64)
        .collect();
    let mut ns = vec![];
    let mut n = 10;
    while n <= n_max {
        ns.push(n);
        n *= 10;
    }
    let mut rows = vec![];
    for &d in &orders {
        let d = order(d)?;
        for &n in &ns {
            let time = |f: &mut dyn FnMut() -> Result<(), CoreError>| -> Result<f64, CliError> {
                let start = Instant::now();
                for _ in 0..iters {
                    f()?;
                }
                Ok(start.elapsed().as_secs_f64() / f64::from(iters))
            };
            let seq = time(&mut || fib_sequence(d, n).map(drop))?;
            let at = time(&mut || {
                fib_at(d, n);
                Ok(())
            })?;
            let closed = time(&mut || fib_closed(d, n, cfg).map(drop))?;
            rows.push((d.get(), n, seq, at, closed));
        }
    }
    Ok(match format {
        Format::Json => json_string(&json!({
            "rows": rows.iter().map(|(d, n, a, b, c)| json!({
                "d": d, "n": n, "fib_sequence_s": a, "fib_at_s": b, "fib_closed_s": c,
            })).collect::<Vec<_>>(),
            "meta": meta(None),
        })),
        Format::Csv => {
            let mut s = String::from("d,n,fib_sequence_s,fib_at_s,fib_closed_s\n");
            for (d, n, a, b, c) in &rows {
                s.push_str(&format!("{d},{n},{a:.9},{b:.9},{c:.9}\n"));
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "{:>4} {:>8} {:>14} {:>14} {:>14}\n",
                "d", "n", "fib_sequence", "fib_at", "fib_closed"
            );
            for (d, n, a, b, c) in &rows {
                s.push_str(&format!(
                    "{d:>4} {n:>8} {:>12.3}us {:>12.3}us {:>12.3}us\n",
                    a * 1e6,
                    b * 1e6,
                    c * 1e6
                ));
            }
            s
        }
    })
}
