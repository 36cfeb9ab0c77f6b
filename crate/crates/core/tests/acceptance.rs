//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

use std::time::{Duration, Instant};

use milnor_sh::classify::{check_soundness, contactomorphic, grid, Verdict};
use milnor_sh::closedform::{bigraded_profile, sh_rank, sh_rank_piecewise};
use milnor_sh::invariants::{
    check_el_conjecture, check_rank_relation, check_refined_conjecture, fcd_from_profile, formal_period,
    kappa_sigma, period_window, q_factorialization, rho_lambda, search_formal_period, search_window,
};
use milnor_sh::oracle::oracle_profile;
use milnor_sh::{Kind, PolySpec};
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn spec(s: &str) -> PolySpec {
    s.parse().unwrap()
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    if took > limit {
        return Err(format!("took {took:?}, limit {limit:?}"));
    }
    Ok(())
}

fn loop_3_4_table() -> Outcome {
    let start = Instant::now();
    let pattern = [3, 3, 2, 2, 3, 3, 2, 2, 2, 2];
    let s = spec("loop:3,4");
    for r in -200..=1i64 {
        let want = pattern[r.rem_euclid(10) as usize];
        let got = sh_rank(&s, r);
        if got != want {
            return Err(format!("degree {r}: rank {got}, expected {want}"));
        }
    }
    within(Duration::from_secs(1), start)?;
    Ok("degrees [-200, 1] follow 3,3,2,2,3,3,2,2,2,2 by r mod 10".into())
}

fn loop_constant_ranks() -> Outcome {
    let start = Instant::now();
    for (s, want) in [("loop:5,3", 3), ("loop:7,4", 4)] {
        for r in -30..=1 {
            let got = sh_rank(&spec(s), r);
            if got != want {
                return Err(format!("{s} degree {r}: rank {got}, expected {want}"));
            }
        }
    }
    within(Duration::from_secs(1), start)?;
    Ok("loop:5,3 -> 3 and loop:7,4 -> 4 on [-30, 1]".into())
}

fn loop_family() -> Outcome {
    let mut n = 0;
    for l in 2..=6 {
        for delta in 1..=4 {
            let s = PolySpec::loop_(l, delta * (l - 1) + 1).unwrap();
            let (lo, hi) = period_window(&s);
            for r in lo..=hi {
                if sh_rank(&s, r) != l as u64 {
                    return Err(format!("{s} degree {r}: rank {} != {l}", sh_rank(&s, r)));
                }
            }
            n += 1;
        }
    }
    Ok(format!("{n} family members constant over one period"))
}

fn oracle_matches_formula() -> Outcome {
    let start = Instant::now();
    let specs = grid(&Kind::ALL, 6);
    let failures: Vec<String> = specs
        .par_iter()
        .filter_map(|s| match oracle_profile(s, -24, 3) {
            Ok(o) => {
                let diff = o.diff(&bigraded_profile(s, -24, 3));
                (!diff.is_empty()).then(|| format!("{s}: {} differing cells, first {:?}", diff.len(), diff[0]))
            }
            Err(e) => Some(e.to_string()),
        })
        .collect();
    if let Some(f) = failures.first() {
        return Err(format!("{} specs differ; {f}", failures.len()));
    }
    within(Duration::from_secs(300), start)?;
    Ok(format!("{} specs identical over [-24, 3] in {:?}", specs.len(), start.elapsed()))
}

fn boundary_degrees() -> Outcome {
    let specs = grid(&Kind::ALL, 6);
    for s in &specs {
        let (p, q) = (s.p(), s.q());
        let mu = match s.kind() {
            Kind::Chain => p * (q - 1) + 1,
            Kind::Loop => p * q,
            Kind::Fermat => (p - 1) * (q - 1),
        } as u64;
        let oracle = oracle_profile(s, 2, 10).map_err(|e| e.to_string())?;
        for r in 2..=10 {
            let want = if r == 3 { mu } else { 0 };
            if sh_rank(s, r) != want || oracle.rank(r) != want {
                return Err(format!("{s} degree {r}: formula {}, oracle {}, expected {want}", sh_rank(s, r), oracle.rank(r)));
            }
        }
        if oracle.bidegrees(3).any(|(b, _)| b != -1) {
            return Err(format!("{s}: degree 3 not concentrated at bidegree -1"));
        }
    }
    Ok(format!("{} specs: rank(2)=0, rank(3)=mu, rank(4..10)=0 by formula and oracle", specs.len()))
}

fn el_equivalence() -> Outcome {
    let specs = grid(&Kind::ALL, 12);
    let mut constant = 0;
    for s in &specs {
        let report = check_el_conjecture(s);
        if !report.passed {
            return Err(report.failures.join("; "));
        }
        constant += s.small_resolution().is_some() as usize;
    }
    Ok(format!("{} specs, {constant} with constant rank = exceptional curve count", specs.len()))
}

fn rank_identities() -> Outcome {
    let specs = grid(&Kind::ALL, 10);
    let mut degenerate = 0;
    for s in &specs {
        for k in -20..=0 {
            let r = check_rank_relation(s, k);
            if !r.passed {
                return Err(r.failures.join("; "));
            }
        }
        let r = check_refined_conjecture(s, -20);
        if !r.passed {
            return Err(r.failures.join("; "));
        }
        let (_, tilde) = q_factorialization(s);
        if tilde.is_extended() {
            degenerate += 1;
            if let Some(k) = (-20..=0).find(|&k| sh_rank_piecewise(&tilde, k) != 0) {
                return Err(format!("{s}: tilde {tilde} has nonzero rank at level {k}"));
            }
        }
    }
    Ok(format!("{} specs, k in [-20, 0]; {degenerate} with a degenerate tilde, all tilde ranks 0", specs.len()))
}

fn invariant_cross_checks() -> Outcome {
    let specs = grid(&Kind::ALL, 8);
    let (mut fcd, mut periods) = (0, 0);
    for s in &specs {
        let (rho, lambda) = rho_lambda(s);
        let (lo, hi) = search_window(s);
        let profile = bigraded_profile(s, lo, hi);
        if rho >= 2 {
            let scan = fcd_from_profile(&profile, rho).map_err(|e| format!("{s}: {e}"))?;
            if scan != kappa_sigma(s) {
                return Err(format!("{s}: table {:?} vs scan {scan:?}", kappa_sigma(s)));
            }
            fcd += 1;
        } else if rho == 1 {
            let scan = search_formal_period(&profile, rho, lambda).map_err(|e| format!("{s}: {e}"))?;
            let closed = formal_period(s).ok_or(format!("{s}: no closed form"))?;
            if scan != closed {
                return Err(format!("{s}: closed {closed:?} vs search {scan:?}"));
            }
            periods += 1;
        }
    }
    Ok(format!("{fcd} (kappa, sigma) and {periods} (theta, rho_b) cross-checks"))
}

fn classification() -> Outcome {
    let groups = [
        vec!["fermat:3,4", "fermat:4,3"],
        vec!["chain:7,3", "loop:3,5"],
        vec!["chain:2,3", "fermat:2,6"],
        vec!["chain:4,3", "loop:3,3", "fermat:4,4"],
    ];
    for g in &groups {
        for a in g {
            for b in g {
                if !contactomorphic(&spec(a), &spec(b)).is_contactomorphic() {
                    return Err(format!("{a} vs {b} not contactomorphic"));
                }
            }
        }
    }
    for (a, b) in [("chain:4,6", "loop:3,3"), ("fermat:2,4", "fermat:2,6")] {
        match contactomorphic(&spec(a), &spec(b)) {
            Verdict::Distinct { separator } if separator.invariant == "mu" => {}
            v => return Err(format!("{a} vs {b}: {v:?}")),
        }
    }
    let specs = grid(&Kind::ALL, 8);
    let window = 2 * (1 - 16);
    let violations: Vec<String> = specs
        .par_iter()
        .flat_map_iter(|a| specs.iter().filter_map(move |b| check_soundness(a, b, window).err()))
        .collect();
    if let Some(v) = violations.first() {
        return Err(format!("{} soundness violations; {v}", violations.len()));
    }
    Ok(format!("named groups pass; soundness sweep over {} pairs, 0 violations", specs.len() * specs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("loop(3,4) rank table", loop_3_4_table),
        ("loop(5,3), loop(7,4) constant ranks", loop_constant_ranks),
        ("loop family law", loop_family),
        ("oracle equals closed form", oracle_matches_formula),
        ("degree boundary constants", boundary_degrees),
        ("constant rank iff small resolution", el_equivalence),
        ("tilde rank identities", rank_identities),
        ("invariant cross-checks", invariant_cross_checks),
        ("classification", classification),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
