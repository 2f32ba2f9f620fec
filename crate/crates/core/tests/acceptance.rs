//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cayley_spectra::search::Predicate;
use cayley_spectra::verify::{self, GroupRecord, VerificationReport, VerifyConfig};

/// Outcome of one criterion: `Err` carries the reason for failure.
type Outcome = Result<String, String>;

fn within(label: &str, elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("{label} took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn require_pass(r: &VerificationReport) -> Result<(), String> {
    if r.pass {
        Ok(())
    } else {
        Err(format!("suite {} failed: {}", r.suite, r.failures().join("; ")))
    }
}

fn run(name: &str, cfg: &VerifyConfig) -> Result<(VerificationReport, Duration), String> {
    let t = Instant::now();
    let r = verify::run_suite(name, cfg).map_err(|e| format!("suite {name}: {e}"))?;
    Ok((r, t.elapsed()))
}

fn record<'a>(r: &'a VerificationReport, expr: &str) -> Result<&'a GroupRecord, String> {
    r.groups
        .iter()
        .find(|g| g.group_expr == expr)
        .ok_or_else(|| format!("no record for {expr}"))
}

fn names(v: &[&str]) -> BTreeSet<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn c1_witness_eigenvalues() -> Outcome {
    let t = Instant::now();
    let checks = verify::witness_checks();
    let elapsed = t.elapsed();
    if let Some(bad) = checks.iter().find(|c| !c.pass) {
        return Err(format!("{}: {}", bad.name, bad.detail));
    }
    if checks.len() != 6 {
        return Err(format!("expected 6 witness checks, got {}", checks.len()));
    }
    within("witnesses", elapsed, Duration::from_secs(1))?;
    Ok(format!("6 witnesses, {elapsed:.2?}"))
}

fn c2_sporadic(cfg: &VerifyConfig, sporadic: &VerificationReport, elapsed: Duration) -> Outcome {
    require_pass(sporadic)?;
    // 2^cells, cross-checked inside the suite by element orders and brute force
    let counts: [(&str, u64); 5] =
        [("S3", 16), ("Dic12", 64), ("Q8", 16), ("Q8xZ2", 1 << 9), ("Q8xZ2^2", 1 << 19)];
    let mut small = 0u64;
    for (expr, total) in counts {
        let g = record(sporadic, expr)?;
        if !g.observed || g.predicate != Predicate::CayleyIntegral {
            return Err(format!("{expr} not confirmed Cayley integral"));
        }
        if g.subsets_total != total || g.subsets_enumerated != total {
            return Err(format!(
                "{expr}: {} subsets ({} scanned), expected {total}",
                g.subsets_total, g.subsets_enumerated
            ));
        }
        if expr != "Q8xZ2^2" {
            small += g.wall_time_ms;
        }
    }
    within("small sporadic groups", Duration::from_millis(small), Duration::from_secs(1))?;
    let big = record(sporadic, "Q8xZ2^2")?;
    within("Q8xZ2^2", Duration::from_millis(big.wall_time_ms), Duration::from_secs(15 * 60))?;
    Ok(format!(
        "S3 16, Dic12 64, Q8 16, Q8xZ2 512, Q8xZ2^2 524288 subsets; Q8xZ2^2 in {} ms on {} thread(s) \
         ({} orbit representatives); suite {elapsed:.2?}",
        big.wall_time_ms, cfg.threads, big.reduced_count
    ))
}

fn c3_main(main: &VerificationReport, elapsed: Duration) -> Outcome {
    require_pass(main)?;
    let integral: BTreeSet<String> = main
        .groups
        .iter()
        .filter(|g| g.order <= 12 && g.observed)
        .map(|g| g.group_expr.clone())
        .collect();
    let want = names(&["Z1", "Z2", "Z3", "Z4", "Z2^2", "Z6", "S3", "Z2^3", "Z4xZ2", "Q8", "Z3^2", "Z2^2xZ3", "Dic12"]);
    if integral != want {
        return Err(format!("order <= 12 integral set {integral:?}"));
    }
    let small = main.groups.iter().filter(|g| g.order <= 12).count();
    if small != 24 {
        return Err(format!("{small} catalog groups of order <= 12, expected 24"));
    }
    let spots: [(&str, bool); 12] = [
        ("Z2^2xZ4", true),
        ("Z2^4", true),
        ("Q8xZ2", true),
        ("Z3^2xZ2", true),
        ("D4", false),
        ("Z8", false),
        ("Z12", false),
        ("A4", false),
        ("D6", false),
        ("SL2_3", false),
        ("Dic12xZ2", false),
        ("S4", false),
    ];
    for (expr, want) in spots.into_iter().chain([("S3xZ3", false)]) {
        if record(main, expr)?.observed != want {
            return Err(format!("{expr}: expected {want}"));
        }
    }
    within("main", elapsed, Duration::from_secs(120))?;
    Ok(format!("{} groups, 13 integral of 24 at order <= 12, {elapsed:.2?}", main.groups.len()))
}

fn c4_cis(cis: &VerificationReport, elapsed: Duration) -> Outcome {
    require_pass(cis)?;
    let holds: BTreeSet<String> = cis
        .groups
        .iter()
        .filter(|g| g.observed && g.order > 1)
        .map(|g| g.group_expr.clone())
        .collect();
    let want = names(&["Z2", "Z3", "Z4", "Z9", "Z2^2", "Z5", "Z7", "Z11", "Z25"]);
    if holds != want {
        return Err(format!("CIS set {holds:?}"));
    }
    for expr in ["Z8", "Z27", "Z2^3", "Z6", "Z12", "D4", "Q8", "A4", "SD(7,3,2)"] {
        let g = record(cis, expr)?;
        if g.observed || g.witnesses.is_empty() {
            return Err(format!("{expr}: expected non-CIS with a recorded witness"));
        }
    }
    for p in [8, 27] {
        let name = format!("Z{p} witness S = G \\ (Y \\ Z)");
        if !cis.checks.iter().any(|c| c.name == name && c.pass) {
            return Err(format!("missing or failing check `{name}`"));
        }
    }
    let z1 = record(cis, "Z1")?;
    let witnesses = cis.groups.iter().filter(|g| !g.witnesses.is_empty()).count();
    within("cis", elapsed, Duration::from_secs(120))?;
    Ok(format!(
        "9 CIS groups of order > 1 (Z1 holds trivially: {}), {witnesses} non-CIS groups with witnesses, {elapsed:.2?}",
        z1.observed
    ))
}

fn c5_bounds(sources: &[&VerificationReport], cfg: &VerifyConfig) -> Outcome {
    let r = verify::bounds_from(sources, cfg);
    require_pass(&r)?;
    let (mut checked, mut strong, mut violations) = (0u64, 0u64, 0u64);
    for src in sources {
        for g in &src.groups {
            checked += g.bounds.checked;
            strong += g.bounds.strong_checked;
            violations += g.bounds.violations;
        }
    }
    if violations != 0 || checked == 0 {
        return Err(format!("{checked} graphs, {violations} violations"));
    }
    Ok(format!(
        "{checked} connected integral graphs, {strong} under the strong form, 0 violations, perfect case vacuous"
    ))
}

fn suite_with_limit(name: &str, cfg: &VerifyConfig, limit: Duration) -> Outcome {
    let (r, elapsed) = run(name, cfg)?;
    require_pass(&r)?;
    within(name, elapsed, limit)?;
    let details: Vec<String> = r.checks.iter().map(|c| format!("{}: {}", c.name, c.detail)).collect();
    Ok(format!("{elapsed:.2?}; {}", details.join("; ")))
}

fn c6_lifts(cfg: &VerifyConfig) -> Outcome {
    if cfg.lift_instances != 200 {
        return Err(format!("{} lift instances configured", cfg.lift_instances));
    }
    suite_with_limit("lifts", cfg, Duration::from_secs(60))
}

fn c7_oracles(cfg: &VerifyConfig) -> Outcome {
    let (r, elapsed) = run("oracles", cfg)?;
    require_pass(&r)?;
    if r.checks.len() != 24 {
        return Err(format!("{} groups checked", r.checks.len()));
    }
    within("oracles", elapsed, Duration::from_secs(300))?;
    Ok(format!("24 groups, every symmetric subset, {elapsed:.2?}"))
}

fn c9_s4(cfg: &VerifyConfig) -> Outcome {
    let (r, elapsed) = run("s4-transitive", cfg)?;
    require_pass(&r)?;
    within("s4-transitive", elapsed, Duration::from_secs(60))?;
    let last = r.checks.last().map(|c| c.detail.clone()).unwrap_or_default();
    Ok(format!("{} subgroups; {last}; {elapsed:.2?}", r.groups.len()))
}

fn c10_semidirect() -> Outcome {
    let t = Instant::now();
    let (pass, detail) = verify::sd_witness_check().map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    if !pass {
        return Err(detail);
    }
    within("SD(7,3,2)", elapsed, Duration::from_secs(1))?;
    Ok(format!("{detail}; {elapsed:.2?}"))
}

fn main() -> ExitCode {
    let cfg = VerifyConfig::default();
    let mut results: BTreeMap<u32, (&str, Outcome)> = BTreeMap::new();
    results.insert(1, ("witness eigenvalues", c1_witness_eigenvalues()));

    let sporadic = run("sporadic", &cfg);
    let main_suite = run("main", &cfg);
    let cis = run("cis", &cfg);
    results.insert(
        2,
        ("positive sporadic groups", sporadic.as_ref().map_err(Clone::clone).and_then(|(r, t)| c2_sporadic(&cfg, r, *t))),
    );
    results.insert(
        3,
        ("Cayley-integral classification", main_suite.as_ref().map_err(Clone::clone).and_then(|(r, t)| c3_main(r, *t))),
    );
    results.insert(4, ("CIS classification", cis.as_ref().map_err(Clone::clone).and_then(|(r, t)| c4_cis(r, *t))));
    let bounds = match (&sporadic, &main_suite, &cis) {
        (Ok((a, _)), Ok((b, _)), Ok((c, _))) => c5_bounds(&[a, b, c], &cfg),
        _ => Err("an input suite did not run".into()),
    };
    results.insert(5, ("divisibility bound", bounds));
    results.insert(6, ("lift spectrum formulas", c6_lifts(&cfg)));
    results.insert(7, ("oracle equivalence", c7_oracles(&cfg)));
    results.insert(8, ("union property", suite_with_limit("ds", &cfg, Duration::from_secs(60))));
    results.insert(9, ("transitive subgroups of S4", c9_s4(&cfg)));
    results.insert(10, ("Z7 x| Z3 witness", c10_semidirect()));

    let mut failed = 0;
    for (n, (title, outcome)) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {n} ({title}): {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL criterion {n} ({title}): {reason}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
