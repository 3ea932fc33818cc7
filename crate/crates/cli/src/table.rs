//! Side-by-side table of exact values, the closed-form approximation, its
//! error, and the geometric error bound.

use gfib_core::closedform::approx_with_error;
use gfib_core::{
    fib_sequence, required_precision, CertifiedReal, Config, DecimalMode, Dyadic, Order, Result,
};
use num_bigint::BigUint;
use serde::Serialize;

#[derive(Debug, Clone)]
pub struct TableRow {
    pub n: i64,
    pub exact: BigUint,
    pub approx: CertifiedReal,
    pub error: CertifiedReal,
    pub bound: CertifiedReal,
}

/// Display settings for the decimal columns.
#[derive(Debug, Clone, Copy)]
pub struct Display {
    pub decimals: usize,
    pub mode: DecimalMode,
}

impl Display {
    pub fn render(&self, x: &CertifiedReal) -> String {
        x.midpoint().to_decimal(self.decimals, self.mode)
    }
}

/// Rows `n = 0..=n_max`, each evaluated at no less than `precision_bits`.
pub fn build(d: Order, n_max: i64, precision_bits: u32, cfg: &Config) -> Result<Vec<TableRow>> {
    let exact = fib_sequence(d, n_max)?;
    (0..=n_max)
        .map(|n| {
            let bits = required_precision(d, n).max(u64::from(precision_bits));
            let bits = cfg.check_precision(bits)?;
            let (approx, rec) = approx_with_error(d, n, bits, cfg)?;
            Ok(TableRow {
                n,
                exact: exact[n as usize].clone(),
                approx,
                error: rec.x_n,
                bound: rec.bound,
            })
        })
        .collect()
}

pub fn to_text(rows: &[TableRow], disp: Display) -> String {
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            [
                r.n.to_string(),
                r.exact.to_string(),
                disp.render(&r.approx),
                disp.render(&r.error),
                disp.render(&r.bound),
            ]
        })
        .collect();
    let header = ["n", "exact", "approx", "error", "bound"];
    let mut widths = header.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let mut push_line = |fields: &[&str]| {
        let line: Vec<String> = fields
            .iter()
            .zip(widths)
            .map(|(f, w)| format!("{f:>w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    };
    push_line(&header);
    for row in &cells {
        let refs: Vec<&str> = row.iter().map(String::as_str).collect();
        push_line(&refs);
    }
    out
}

pub fn to_csv(rows: &[TableRow], disp: Display) -> String {
    let mut out = String::from("n,exact,approx,error,bound\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n,
            r.exact,
            disp.render(&r.approx),
            disp.render(&r.error),
            disp.render(&r.bound)
        ));
    }
    out
}

#[derive(Debug, Serialize)]
pub struct JsonRow {
    pub n: i64,
    pub exact: String,
    pub approx: String,
    pub error: String,
    pub bound: String,
    pub approx_mid: String,
    pub approx_radius: String,
    pub error_mid: String,
    pub error_radius: String,
    pub bound_mid: String,
    pub bound_radius: String,
}

fn exact_decimal(x: &Dyadic) -> String {
    x.to_decimal_exact()
}

impl JsonRow {
    pub fn new(r: &TableRow, disp: Display) -> Self {
        JsonRow {
            n: r.n,
            exact: r.exact.to_string(),
            approx: disp.render(&r.approx),
            error: disp.render(&r.error),
            bound: disp.render(&r.bound),
            approx_mid: exact_decimal(&r.approx.midpoint()),
            approx_radius: exact_decimal(&r.approx.radius()),
            error_mid: exact_decimal(&r.error.midpoint()),
            error_radius: exact_decimal(&r.error.radius()),
            bound_mid: exact_decimal(&r.bound.midpoint()),
            bound_radius: exact_decimal(&r.bound.radius()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tribonacci_rows() {
        let rows = build(Order::TRIBONACCI, 10, 128, &Config::default()).unwrap();
        let disp = Display {
            decimals: 2,
            mode: DecimalMode::Truncate,
        };
        let approx: Vec<String> = rows.iter().map(|r| disp.render(&r.approx)).collect();
        assert_eq!(
            approx,
            [
                "0.33", "0.61", "1.13", "2.09", "3.84", "7.07", "13.01", "23.94", "44.03", "80.99",
                "148.98"
            ]
        );
        let csv = to_csv(&rows, disp);
        assert!(csv.starts_with("n,exact,approx,error,bound\n0,0,0.33,"));
        assert_eq!(csv.lines().count(), 12);
    }

    #[test]
    fn rounding_mode_differs_from_truncation() {
        let rows = build(Order::TRIBONACCI, 1, 128, &Config::default()).unwrap();
        let round = Display {
            decimals: 2,
            mode: DecimalMode::Round,
        };
        // 0.6184... rounds to 0.62 but the printed table shows 0.61
        assert_eq!(round.render(&rows[1].approx), "0.62");
    }
}
