//! CSV output, run summary and trend checks over sweep results.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use crate::error::{Error, Result};
use crate::metrics::Scheme;
use crate::sweep::SweepResult;

pub const CSV_HEADER: &str = "scheme,snr_db,n_elements,n_jammed,se_bits_per_hz,p_j,p_u,p_c,ber,trials,seed";

/// `%.9g`-style formatting: 9 significant digits, trailing zeros dropped,
/// exponent form outside `[1e-4, 1e9)`.
pub fn format_sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn csv_row(r: &SweepResult) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        r.scheme.name(),
        format_sig9(r.snr_db),
        r.n_elements,
        r.n_jammed,
        format_sig9(r.se_bits),
        format_sig9(r.p_j),
        format_sig9(r.p_u),
        format_sig9(r.p_c),
        format_sig9(r.ber),
        r.trials,
        r.seed
    )
}

pub fn write_csv<W: Write>(mut out: W, results: &[SweepResult]) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(format!("writing CSV: {e}"));
    writeln!(out, "{CSV_HEADER}").map_err(io)?;
    for r in results {
        writeln!(out, "{}", csv_row(r)).map_err(io)?;
    }
    out.flush().map_err(io)
}

pub fn to_csv_string(results: &[SweepResult]) -> String {
    let mut s = String::with_capacity(64 * (results.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in results {
        s.push_str(&csv_row(r));
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Number of comparisons made; zero means the sweep has no such axis.
    pub comparisons: usize,
    pub violations: Vec<String>,
}

impl TrendCheck {
    fn new(name: &'static str) -> Self {
        TrendCheck {
            name,
            passed: true,
            comparisons: 0,
            violations: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.comparisons += 1;
        if !ok {
            self.passed = false;
            self.violations.push(what());
        }
    }
}

/// Standard error of the difference of two independent-looking means.
fn slack(a: &SweepResult, b: &SweepResult) -> f64 {
    a.se_std_error.hypot(b.se_std_error)
}

type Key = (Scheme, usize, usize, i64);

fn index(results: &[SweepResult]) -> BTreeMap<Key, &SweepResult> {
    // SNR keyed in milli-dB so it orders as a number.
    results
        .iter()
        .map(|r| {
            (
                (r.scheme, r.n_elements, r.n_jammed, (r.snr_db * 1000.0).round() as i64),
                r,
            )
        })
        .collect()
}

/// Proposed mean SE is never below the baseline beyond one standard error.
pub fn check_dominance(results: &[SweepResult]) -> TrendCheck {
    let mut c = TrendCheck::new("proposed >= baseline");
    let idx = index(results);
    for (&(scheme, n, j, snr), p) in &idx {
        if scheme != Scheme::Proposed {
            continue;
        }
        if let Some(b) = idx.get(&(Scheme::Baseline, n, j, snr)) {
            c.record(p.se_bits >= b.se_bits - slack(p, b), || {
                format!("N={n} l_j={j} snr={}: {} < {}", p.snr_db, p.se_bits, b.se_bits)
            });
        }
    }
    c
}

/// Generic walk along one axis with the other three fixed.
fn along<F, G>(
    results: &[SweepResult],
    name: &'static str,
    axis: G,
    keep: impl Fn(&SweepResult) -> bool,
    ok: F,
) -> TrendCheck
where
    F: Fn(&SweepResult, &SweepResult) -> bool,
    G: Fn(&SweepResult) -> (Key, i64),
{
    let mut c = TrendCheck::new(name);
    let mut lines: BTreeMap<Key, Vec<(i64, &SweepResult)>> = BTreeMap::new();
    for r in results.iter().filter(|r| keep(r)) {
        let (key, pos) = axis(r);
        lines.entry(key).or_default().push((pos, r));
    }
    for line in lines.values_mut() {
        line.sort_by_key(|(pos, _)| *pos);
        for w in line.windows(2) {
            let (a, b) = (w[0].1, w[1].1);
            c.record(ok(a, b), || {
                format!(
                    "{} N={}->{} l_j={}->{} snr={}->{}: {} -> {}",
                    a.scheme.name(),
                    a.n_elements,
                    b.n_elements,
                    a.n_jammed,
                    b.n_jammed,
                    a.snr_db,
                    b.snr_db,
                    a.se_bits,
                    b.se_bits
                )
            });
        }
    }
    c
}

fn snr_key(r: &SweepResult) -> i64 {
    (r.snr_db * 1000.0).round() as i64
}

/// Mean SE does not grow with the number of jammed modes (one-SE slack).
pub fn check_jammed_monotone(results: &[SweepResult]) -> TrendCheck {
    along(
        results,
        "SE non-increasing in l_j",
        |r| ((r.scheme, r.n_elements, 0, snr_key(r)), r.n_jammed as i64),
        |_| true,
        |a, b| b.se_bits <= a.se_bits + slack(a, b),
    )
}

/// Mean SE does not drop with array size at SNR >= `min_snr_db` (one-SE slack).
pub fn check_elements_monotone(results: &[SweepResult], min_snr_db: f64) -> TrendCheck {
    along(
        results,
        "SE non-decreasing in N",
        |r| ((r.scheme, 0, r.n_jammed, snr_key(r)), r.n_elements as i64),
        |r| r.snr_db >= min_snr_db,
        |a, b| b.se_bits >= a.se_bits - slack(a, b),
    )
}

/// Mean SE strictly grows with SNR.
pub fn check_snr_increasing(results: &[SweepResult]) -> TrendCheck {
    along(
        results,
        "SE increasing in SNR",
        |r| ((r.scheme, r.n_elements, r.n_jammed, 0), snr_key(r)),
        |_| true,
        |a, b| b.se_bits > a.se_bits,
    )
}

pub fn trend_checks(results: &[SweepResult]) -> Vec<TrendCheck> {
    vec![
        check_dominance(results),
        check_jammed_monotone(results),
        check_elements_monotone(results, 0.0),
        check_snr_increasing(results),
    ]
}

/// Human-readable summary: row count and SE range per scheme, plus checks if given.
pub fn summary(results: &[SweepResult], checks: Option<&[TrendCheck]>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "rows: {}", results.len());
    let mut per: BTreeMap<Scheme, (f64, f64)> = BTreeMap::new();
    for r in results {
        let e = per.entry(r.scheme).or_insert((f64::INFINITY, f64::NEG_INFINITY));
        e.0 = e.0.min(r.se_bits);
        e.1 = e.1.max(r.se_bits);
    }
    for (scheme, (lo, hi)) in per {
        let _ = writeln!(
            s,
            "{:<9} SE min {} max {} bits/s/Hz",
            scheme.name(),
            format_sig9(lo),
            format_sig9(hi)
        );
    }
    for c in checks.unwrap_or(&[]) {
        let verdict = match (c.comparisons, c.passed) {
            (0, _) => "n/a",
            (_, true) => "PASS",
            (_, false) => "FAIL",
        };
        let _ = writeln!(s, "trend {:<26} {verdict} ({} comparisons)", c.name, c.comparisons);
        for v in &c.violations {
            let _ = writeln!(s, "    {v}");
        }
    }
    s
}
