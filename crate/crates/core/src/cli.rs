//! Command-line front end. [`run`] is the whole program minus process exit,
//! so it can be driven from tests.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::{contactomorphic, grid, signature_table, Verdict};
use crate::closedform::{bigraded_profile, level_of_degree, sh_rank};
use crate::invariants::{
    check_el_conjecture, check_rank_relation, check_refined_conjecture, fcd_from_profile, formal_period,
    rho_lambda, search_formal_period, search_window, signature, CheckReport, InvariantSignature,
};
use crate::oracle::oracle_profile;
use crate::polyspec::{Kind, PolySpec};

pub const SCHEMA: &str = "milnor-sh/1";

pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFY_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
}

#[derive(Parser, Debug)]
#[command(name = "milnor-sh", version, about = "Symplectic cohomology ranks and contact invariants of suspended cA_n links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the invariant signature of a polynomial.
    Invariants {
        spec: PolySpec,
        #[arg(long)]
        json: bool,
    },
    /// Print ranks (optionally by bidegree) over a degree window.
    Ranks {
        spec: PolySpec,
        #[arg(long, allow_hyphen_values = true, default_value_t = -10)]
        from: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 3)]
        to: i64,
        #[arg(long)]
        bigraded: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether two links are contactomorphic.
    Compare {
        left: PolySpec,
        right: PolySpec,
        #[arg(long)]
        json: bool,
    },
    /// Check closed formulas against the brute-force oracle over [from, 3].
    Verify {
        spec: PolySpec,
        #[arg(long, allow_hyphen_values = true, default_value_t = -24)]
        from: i64,
        #[arg(long)]
        json: bool,
    },
    /// Signature tables, checks or pairwise verdicts over an exponent grid.
    Sweep {
        #[arg(long = "type", value_enum, default_value_t = KindArg::All)]
        kind: KindArg,
        #[arg(long, default_value_t = 6)]
        max: i64,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        out: OutFormat,
        #[arg(long)]
        pairs: bool,
        #[arg(long, value_enum)]
        check: Option<CheckKind>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum KindArg {
    Chain,
    Loop,
    Fermat,
    All,
}

impl KindArg {
    fn kinds(self) -> Vec<Kind> {
        match self {
            KindArg::Chain => vec![Kind::Chain],
            KindArg::Loop => vec![Kind::Loop],
            KindArg::Fermat => vec![Kind::Fermat],
            KindArg::All => Kind::ALL.to_vec(),
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CheckKind {
    El,
    Refined,
    Ranks,
    Oracle,
    All,
}

/// Lowest level checked by the rank identities in sweeps.
const SWEEP_K_MIN: i64 = -20;
/// Lowest degree compared against the oracle in sweeps.
const SWEEP_ORACLE_FROM: i64 = -24;

fn to_json<T: Serialize>(value: &T) -> String {
    // Round-trip through Value: its map type keeps keys sorted.
    let v = serde_json::to_value(value).expect("serializable report");
    serde_json::to_string_pretty(&v).expect("printable json")
}

fn with_schema(mut v: Value) -> Value {
    v["schema"] = json!(SCHEMA);
    v["tool_version"] = json!(env!("CARGO_PKG_VERSION"));
    v
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// Run the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{e}");
            return code;
        }
    };
    let result = match cli.command {
        Command::Invariants { spec, json } => cmd_invariants(&spec, json, out),
        Command::Ranks { spec, from, to, bigraded, json } => cmd_ranks(&spec, from, to, bigraded, json, out, err),
        Command::Compare { left, right, json } => cmd_compare(&left, &right, json, out),
        Command::Verify { spec, from, json } => cmd_verify(&spec, from, json, out, err),
        Command::Sweep { kind, max, out: fmt, pairs, check } => cmd_sweep(kind, max, fmt, pairs, check, out, err),
    };
    result.unwrap_or_else(|e| {
        // A closed downstream pipe is not an error.
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return exit::OK;
        }
        let _ = writeln!(err, "error: {e}");
        exit::USAGE
    })
}

type CmdResult = std::io::Result<i32>;

fn signature_text(s: &InvariantSignature, out: &mut dyn Write) -> std::io::Result<()> {
    let ws = s.spec.weight_system();
    writeln!(out, "polynomial  {}", s.spec)?;
    writeln!(out, "weights     d=({},{},{},{}) h={} d0={}", ws.d[0], ws.d[1], ws.d[2], ws.d[3], ws.h, ws.d0)?;
    writeln!(out, "rho         {}", s.rho)?;
    writeln!(out, "lambda      {}", s.lambda)?;
    writeln!(out, "kappa       {}", s.kappa)?;
    writeln!(out, "sigma       {}", s.sigma)?;
    writeln!(out, "mu          {}", s.mu)?;
    writeln!(out, "b2          {}", s.b2)?;
    writeln!(out, "lct         {}", s.lct)?;
    writeln!(out, "small_res   {}", s.small_res.map_or("none".into(), |n| n.to_string()))?;
    match (s.theta, s.rho_b) {
        (Some(t), Some(b)) => writeln!(out, "theta       T={t} (degree {}) rho_b={b}", -t)?,
        _ => writeln!(out, "theta       undefined (rho != 1)")?,
    }
    writeln!(out, "g_w         {}", s.g_w)?;
    writeln!(out, "tilde       {}", s.tilde)
}

fn cmd_invariants(spec: &PolySpec, json: bool, out: &mut dyn Write) -> CmdResult {
    let sig = signature(spec);
    if json {
        let v = with_schema(json!({
            "polynomial": spec,
            "weights": spec.weight_system(),
            "signature": sig,
        }));
        writeln!(out, "{}", to_json(&v))?;
    } else {
        signature_text(&sig, out)?;
    }
    Ok(exit::OK)
}

fn cmd_ranks(
    spec: &PolySpec,
    from: i64,
    to: i64,
    bigraded: bool,
    json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    if from > to {
        writeln!(err, "error: empty window: --from {from} exceeds --to {to}")?;
        return Ok(exit::USAGE);
    }
    let ranks: Vec<(i64, u64)> = (from..=to).map(|r| (r, sh_rank(spec, r))).collect();
    let profile = bigraded.then(|| bigraded_profile(spec, from, to));
    if json {
        let mut v = json!({
            "polynomial": spec,
            "window": [from, to],
            "ranks": ranks,
        });
        if let Some(p) = &profile {
            v["bigraded"] = json!(p.triples());
        }
        writeln!(out, "{}", to_json(&with_schema(v)))?;
        return Ok(exit::OK);
    }
    writeln!(out, "degree,rank")?;
    for (r, n) in &ranks {
        writeln!(out, "{r},{n}")?;
    }
    if let Some(p) = profile {
        writeln!(out, "degree,bidegree,rank")?;
        for (r, b, n) in p.triples() {
            writeln!(out, "{r},{b},{n}")?;
        }
    }
    Ok(exit::OK)
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Contactomorphic { witness } => {
            let rel = serde_json::to_value(&witness.relation).expect("serializable");
            let swap = if witness.swapped { ", after swapping x3 and x4" } else { "" };
            format!("Contactomorphic ({}{swap})", rel["relation"].as_str().unwrap_or("?"))
        }
        Verdict::Distinct { separator } => {
            format!("Distinct ({}: {} vs {})", separator.invariant, separator.left, separator.right)
        }
    }
}

fn cmd_compare(left: &PolySpec, right: &PolySpec, json: bool, out: &mut dyn Write) -> CmdResult {
    let verdict = contactomorphic(left, right);
    if json {
        let v = with_schema(json!({ "left": left, "right": right, "verdict": verdict }));
        writeln!(out, "{}", to_json(&v))?;
    } else {
        writeln!(out, "{} vs {}: {}", left, right, verdict_text(&verdict))?;
    }
    Ok(exit::OK)
}

/// All verification checks for one spec over `[from, 3]`.
fn verify_reports(spec: &PolySpec, from: i64) -> Result<Vec<(CheckReport, Value)>, String> {
    let mut reports = Vec::new();
    let oracle = oracle_profile(spec, from, 3).map_err(|e| e.to_string())?;
    let formula = bigraded_profile(spec, from, 3);
    let diff = formula.diff(&oracle);
    let failures = diff.iter().map(|d| format!("{d:?}")).collect();
    reports.push((
        CheckReport { name: "oracle".into(), passed: diff.is_empty(), failures },
        json!({ "window": [from, 3], "diff": diff }),
    ));

    let k_min = level_of_degree(from.min(1));
    let mut rel_failures = Vec::new();
    for k in k_min..=0 {
        rel_failures.extend(check_rank_relation(spec, k).failures);
    }
    reports.push((
        CheckReport { name: "rank-relation".into(), passed: rel_failures.is_empty(), failures: rel_failures },
        json!({ "k_min": k_min }),
    ));
    reports.push((check_refined_conjecture(spec, k_min), json!({ "k_min": k_min })));
    reports.push((check_el_conjecture(spec), Value::Null));

    let (rho, lambda) = rho_lambda(spec);
    let (lo, hi) = search_window(spec);
    let profile = bigraded_profile(spec, lo, hi);
    if rho >= 2 {
        let table = crate::invariants::kappa_sigma(spec);
        let scanned = fcd_from_profile(&profile, rho).map_err(|e| e.to_string())?;
        let failures =
            if scanned == table { vec![] } else { vec![format!("table {table:?} vs profile scan {scanned:?}")] };
        reports.push((
            CheckReport { name: "kappa-sigma".into(), passed: failures.is_empty(), failures },
            json!({ "table": table, "scan": scanned }),
        ));
    } else if rho == 1 {
        let closed = formal_period(spec).expect("rho = 1");
        let scanned = search_formal_period(&profile, rho, lambda).map_err(|e| e.to_string())?;
        let failures =
            if scanned == closed { vec![] } else { vec![format!("closed {closed:?} vs search {scanned:?}")] };
        reports.push((
            CheckReport { name: "formal-period".into(), passed: failures.is_empty(), failures },
            json!({ "closed": closed, "search": scanned }),
        ));
    }
    Ok(reports)
}

fn cmd_verify(spec: &PolySpec, from: i64, json: bool, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    if from > 3 {
        writeln!(err, "error: --from {from} must not exceed 3")?;
        return Ok(exit::USAGE);
    }
    let reports = match verify_reports(spec, from) {
        Ok(r) => r,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(exit::VERIFY_FAILED);
        }
    };
    let passed = reports.iter().all(|(r, _)| r.passed);
    if json {
        let checks: Vec<Value> = reports
            .iter()
            .map(|(r, detail)| {
                let mut v = serde_json::to_value(r).expect("serializable");
                v["detail"] = detail.clone();
                v
            })
            .collect();
        let v = with_schema(json!({ "polynomial": spec, "passed": passed, "checks": checks }));
        writeln!(out, "{}", to_json(&v))?;
    } else {
        for (r, _) in &reports {
            writeln!(out, "{:<14} {}", r.name, if r.passed { "pass" } else { "FAIL" })?;
            for f in &r.failures {
                writeln!(out, "  {f}")?;
            }
        }
        writeln!(out, "{spec}: {}", if passed { "pass" } else { "FAIL" })?;
    }
    Ok(if passed { exit::OK } else { exit::VERIFY_FAILED })
}

const CSV_HEADER: &str = "kind,p,q,rho,lambda,kappa,sigma,mu,b2,theta,rho_b,g_w,tilde_e,tilde_f,small_res";

fn csv_row(s: &InvariantSignature) -> String {
    [
        s.spec.kind().to_string(),
        s.spec.p().to_string(),
        s.spec.q().to_string(),
        s.rho.to_string(),
        s.lambda.to_string(),
        s.kappa.to_string(),
        s.sigma.to_string(),
        s.mu.to_string(),
        s.b2.to_string(),
        opt(s.theta),
        opt(s.rho_b),
        s.g_w.to_string(),
        s.tilde.p().to_string(),
        s.tilde.q().to_string(),
        opt(s.small_res),
    ]
    .join(",")
}

fn sweep_checks(spec: &PolySpec, check: CheckKind) -> Vec<CheckReport> {
    let want = |c: CheckKind| check == c || check == CheckKind::All;
    let mut out = Vec::new();
    if want(CheckKind::El) {
        out.push(check_el_conjecture(spec));
    }
    if want(CheckKind::Refined) {
        out.push(check_refined_conjecture(spec, SWEEP_K_MIN));
    }
    if want(CheckKind::Ranks) {
        let failures: Vec<String> =
            (SWEEP_K_MIN..=0).flat_map(|k| check_rank_relation(spec, k).failures).collect();
        out.push(CheckReport { name: "ranks".into(), passed: failures.is_empty(), failures });
    }
    if want(CheckKind::Oracle) {
        let failures = match oracle_profile(spec, SWEEP_ORACLE_FROM, 3) {
            Ok(o) => o
                .diff(&bigraded_profile(spec, SWEEP_ORACLE_FROM, 3))
                .iter()
                .map(|d| format!("{d:?}"))
                .collect(),
            Err(e) => vec![e.to_string()],
        };
        out.push(CheckReport { name: "oracle".into(), passed: failures.is_empty(), failures });
    }
    out
}

fn cmd_sweep(
    kind: KindArg,
    max: i64,
    fmt: OutFormat,
    pairs: bool,
    check: Option<CheckKind>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    if max < 2 {
        writeln!(err, "error: --max must be at least 2")?;
        return Ok(exit::USAGE);
    }
    let specs = grid(&kind.kinds(), max);

    if pairs {
        let rows: Vec<(PolySpec, PolySpec, Verdict)> = specs
            .par_iter()
            .flat_map_iter(|a| specs.iter().map(move |b| (*a, *b, contactomorphic(a, b))))
            .collect();
        match fmt {
            OutFormat::Json => {
                let v: Vec<Value> =
                    rows.iter().map(|(a, b, v)| json!({ "left": a, "right": b, "verdict": v })).collect();
                writeln!(out, "{}", to_json(&with_schema(json!({ "pairs": v }))))?;
            }
            OutFormat::Csv => {
                writeln!(out, "left,right,verdict")?;
                for (a, b, v) in &rows {
                    writeln!(out, "{a},{b},\"{}\"", verdict_text(v))?;
                }
            }
        }
        return Ok(exit::OK);
    }

    if let Some(check) = check {
        let rows: Vec<(PolySpec, Vec<CheckReport>)> =
            specs.par_iter().map(|s| (*s, sweep_checks(s, check))).collect();
        let passed = rows.iter().all(|(_, rs)| rs.iter().all(|r| r.passed));
        match fmt {
            OutFormat::Json => {
                let v: Vec<Value> = rows.iter().map(|(s, rs)| json!({ "polynomial": s, "checks": rs })).collect();
                writeln!(out, "{}", to_json(&with_schema(json!({ "passed": passed, "rows": v }))))?;
            }
            OutFormat::Csv => {
                writeln!(out, "kind,p,q,check,passed")?;
                for (s, rs) in &rows {
                    for r in rs {
                        writeln!(out, "{},{},{},{},{}", s.kind(), s.p(), s.q(), r.name, r.passed)?;
                    }
                }
            }
        }
        return Ok(if passed { exit::OK } else { exit::VERIFY_FAILED });
    }

    let table = signature_table(&specs);
    match fmt {
        OutFormat::Json => writeln!(out, "{}", to_json(&with_schema(json!({ "rows": table }))))?,
        OutFormat::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for row in &table {
                writeln!(out, "{}", csv_row(row))?;
            }
        }
    }
    Ok(exit::OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["milnor-sh"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&["invariants", "loop:1,4"]).0, exit::USAGE);
        assert_eq!(run_str(&["ranks", "chain:3,4", "--from", "2", "--to", "1"]).0, exit::USAGE);
        assert_eq!(run_str(&["bogus"]).0, exit::USAGE);
        assert_eq!(run_str(&["sweep", "--max", "1"]).0, exit::USAGE);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, exit::OK);
        assert!(out.contains("verify"));
    }

    #[test]
    fn csv_row_layout() {
        let s = signature(&"fermat:2,6".parse().unwrap());
        assert_eq!(csv_row(&s), "fermat,2,6,1,1,-3,5,5,1,4,4,2,1,3,1");
        assert_eq!(CSV_HEADER.split(',').count(), csv_row(&s).split(',').count());
    }
}
