//! Verification suites. Each suite runs an expectation table through the
//! exhaustive search or the exact spectral routines and collects the outcome
//! in a [`VerificationReport`]. Reports carry exact results only; float
//! eigenvalues appear solely as formatted evidence inside check details.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{self, group, permutation_of};
use crate::cayley::{
    lift_from_quotient, lift_from_subgroup, lift_preimage, union_product_subset, CayleyGraph, SymmetricSubset,
};
use crate::error::{Error, Result};
use crate::group::{ElementSet, FiniteGroup};
use crate::integrality::{self, verdict, verdict_with, Method, SpectrumVerdict};
use crate::linalg::{IntMatrix, IntPolynomial};
use crate::repcheck::{self, rep_eigenvalues, rep_integral, rep_system, ExplicitRep};
use crate::search::{self, BoundStats, Predicate, SearchOptions, SubsetFamily, Witness};

pub const SCHEMA: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Suite names accepted by [`run_suite`].
pub const SUITES: [&str; 11] = [
    "ab",
    "cis",
    "ks",
    "main",
    "bounds",
    "lifts",
    "ds",
    "s4-transitive",
    "sporadic",
    "witnesses",
    "oracles",
];

/// Tolerance for float evidence against closed-form irrational eigenvalues.
pub const EVIDENCE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub threads: usize,
    pub reduce_conjugacy: bool,
    /// Seed of the ChaCha stream behind the randomized lift instances.
    pub seed: u64,
    pub lift_instances: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            threads: search::default_threads(),
            reduce_conjugacy: true,
            seed: 0x5eed_ca1e,
            lift_instances: 200,
        }
    }
}

/// Outcome of one exhaustive group search against its expected value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub group_expr: String,
    pub order: usize,
    pub predicate: Predicate,
    pub expected: bool,
    pub observed: bool,
    pub matches: bool,
    pub witnesses: Vec<Witness>,
    pub cells: usize,
    pub subsets_total: u64,
    pub subsets_enumerated: u64,
    pub reduced_count: u64,
    pub integral_count: u64,
    pub bounds: BoundStats,
    pub wall_time_ms: u64,
}

/// A named pass/fail check that is not a whole-group search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub wall_time_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub tool_version: String,
    pub suite: String,
    pub config: VerifyConfig,
    pub groups: Vec<GroupRecord>,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
    pub wall_time_ms: u64,
}

impl VerificationReport {
    fn new(suite: &str, config: &VerifyConfig) -> Self {
        VerificationReport {
            schema: SCHEMA,
            tool_version: TOOL_VERSION.into(),
            suite: suite.into(),
            config: config.clone(),
            groups: Vec::new(),
            checks: Vec::new(),
            pass: false,
            wall_time_ms: 0,
        }
    }

    fn finish(mut self, started: Instant) -> Self {
        self.pass = self.groups.iter().all(|g| g.matches) && self.checks.iter().all(|c| c.pass);
        self.wall_time_ms = started.elapsed().as_millis() as u64;
        self
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Descriptions of every mismatching record and failing check.
    pub fn failures(&self) -> Vec<String> {
        let groups = self.groups.iter().filter(|g| !g.matches).map(|g| {
            format!(
                "{} {}: expected {}, observed {}",
                g.group_expr,
                g.predicate.name(),
                g.expected,
                g.observed
            )
        });
        let checks = self.checks.iter().filter(|c| !c.pass).map(|c| format!("{}: {}", c.name, c.detail));
        groups.chain(checks).collect()
    }

    /// Human-readable summary, one line per record.
    pub fn summary(&self) -> String {
        let mut out = format!("suite {} (schema {}, v{})\n", self.suite, self.schema, self.tool_version);
        for g in &self.groups {
            let witness = g
                .witnesses
                .first()
                .map(|w| format!(" witness {{{}}} {}", w.elements.join(","), w.hex))
                .unwrap_or_default();
            out += &format!(
                "  [{}] {} (order {}) {} = {} (expected {}), {} of {} subsets evaluated, {} ms{}\n",
                if g.matches { "ok" } else { "MISMATCH" },
                g.group_expr,
                g.order,
                g.predicate.name(),
                g.observed,
                g.expected,
                g.reduced_count,
                g.subsets_enumerated,
                g.wall_time_ms,
                witness
            );
        }
        for c in &self.checks {
            out += &format!("  [{}] {}: {}\n", if c.pass { "ok" } else { "FAIL" }, c.name, c.detail);
        }
        out += &format!("{} in {} ms\n", if self.pass { "PASS" } else { "FAIL" }, self.wall_time_ms);
        out
    }
}

/// Runs a suite by name.
pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Result<VerificationReport> {
    match name {
        "ab" => suite_ab(cfg),
        "cis" => suite_cis(cfg),
        "ks" => suite_ks(cfg),
        "main" => suite_main(cfg),
        "bounds" => suite_bounds(cfg),
        "lifts" => Ok(suite_lifts(cfg)),
        "ds" => Ok(suite_ds(cfg)),
        "s4-transitive" => suite_s4_transitive(cfg),
        "sporadic" => suite_sporadic(cfg),
        "witnesses" => Ok(suite_witnesses(cfg)),
        "oracles" => Ok(suite_oracles(cfg)),
        _ => Err(Error::Parse(format!("unknown suite `{name}`; expected one of {}", SUITES.join(", ")))),
    }
}

fn timed(name: impl Into<String>, f: impl FnOnce() -> Result<(bool, String)>) -> CheckRecord {
    let started = Instant::now();
    let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckRecord {
        name: name.into(),
        pass,
        detail,
        wall_time_ms: started.elapsed().as_millis() as u64,
    }
}

fn search_opts(cfg: &VerifyConfig, label: &str) -> SearchOptions {
    SearchOptions {
        reduce_conjugacy: cfg.reduce_conjugacy,
        threads: Some(cfg.threads),
        force: true,
        record_bounds: true,
        label: label.into(),
        ..SearchOptions::default()
    }
}

/// Exhaustively decides `predicate` for the group `expr` and compares with `expected`.
pub fn group_record(expr: &str, predicate: Predicate, expected: bool, cfg: &VerifyConfig) -> Result<GroupRecord> {
    let g = group(expr)?;
    let v = search::check(&g, predicate, &search_opts(cfg, expr))?;
    Ok(GroupRecord {
        group_expr: expr.into(),
        order: v.order,
        predicate,
        expected,
        observed: v.holds,
        matches: v.holds == expected,
        witnesses: v.witnesses,
        cells: v.cells,
        subsets_total: v.subsets_total,
        subsets_enumerated: v.stats.subsets_enumerated,
        reduced_count: v.stats.reduced_count,
        integral_count: v.stats.integral_count,
        bounds: v.stats.bounds,
        wall_time_ms: v.wall_time_ms,
    })
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Abelian CIS classification: `Z_p`, `Z_{p²}`, `Z2 × Z2`, and the trivial group.
pub fn ab_expected(g: &FiniteGroup) -> bool {
    let n = g.order();
    let prime_square = (2..=n).find(|&p| p * p == n).is_some_and(is_prime);
    n == 1 || is_prime(n) || (prime_square && (g.exponent() == n || n == 4))
}

/// Abelian Cayley-integral classification: `Z2^a × Z3^b` or `Z2^a × Z4^b`,
/// i.e. exponent dividing 6 or 4.
pub fn ks_expected(g: &FiniteGroup) -> bool {
    let e = g.exponent();
    6 % e == 0 || 4 % e == 0
}

/// Cayley-integral groups of order at most 12.
pub const MAIN_INTEGRAL: [&str; 13] =
    ["Z1", "Z2", "Z3", "Z4", "Z2^2", "Z6", "S3", "Z2^3", "Z4xZ2", "Q8", "Z3^2", "Z2^2xZ3", "Dic12"];

/// Spot checks above order 12 with the expected Cayley integrality.
pub const MAIN_SPOT: [(&str, bool); 14] = [
    ("Z2^2xZ4", true),
    ("Z2^4", true),
    ("Z4^2", true),
    ("Q8xZ2", true),
    ("Z3^2xZ2", true),
    ("Z2^3xZ3", true),
    ("SL2_3", false),
    ("Dic12xZ2", false),
    ("S4", false),
    ("S3xZ3", false),
    ("E9", false),
    ("D9", false),
    ("D8", false),
    ("Q8xZ4", false),
];

/// CIS groups among the order-at-most-12 catalog and the extra groups of [`CIS_EXTRA`].
pub const CIS_GROUPS: [&str; 10] = ["Z1", "Z2", "Z3", "Z4", "Z2^2", "Z5", "Z7", "Z9", "Z11", "Z25"];
pub const CIS_EXTRA: [&str; 3] = ["Z25", "Z27", "SD(7,3,2)"];

pub const SPORADIC: [&str; 5] = ["S3", "Dic12", "Q8", "Q8xZ2", "Q8xZ2^2"];

fn abelian_catalog() -> Vec<(String, FiniteGroup)> {
    catalog::complete_catalog().into_iter().filter(|(_, g)| g.is_abelian()).collect()
}

fn suite_ab(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut r = VerificationReport::new("ab", cfg);
    let mut exprs: Vec<String> = abelian_catalog().into_iter().map(|(s, _)| s).collect();
    exprs.extend(["Z25", "Z27", "Z5^2", "Z16", "Z2^4"].map(String::from));
    for e in &exprs {
        let expected = ab_expected(&group(e)?);
        r.groups.push(group_record(e, Predicate::Cis, expected, cfg)?);
    }
    r.checks.push(timed("cube Z2^3 {e1,e2,e3}", || cube_check("Z2^3", "e1,e2,e3")));
    for p in [2, 3] {
        r.checks.push(timed(format!("Z{} witness S = G \\ (Y \\ Z)", p * p * p), || zp3_check(p)));
    }
    for (a, m) in [("Z2", 3), ("Z3", 3), ("Z2", 4), ("Z2^2", 3), ("Z3", 4), ("Z5", 3)] {
        r.checks.push(timed(format!("complete product {a} x Z{m}"), || cartesian_complete_check(a, m)));
    }
    Ok(r.finish(started))
}

fn suite_cis(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut r = VerificationReport::new("cis", cfg);
    let mut exprs: Vec<String> = catalog::complete_catalog().into_iter().map(|(s, _)| s).collect();
    exprs.extend(CIS_EXTRA.map(String::from));
    for e in &exprs {
        let expected = CIS_GROUPS.contains(&e.as_str());
        r.groups.push(group_record(e, Predicate::Cis, expected, cfg)?);
    }
    let recorded: Vec<(String, Witness)> = r
        .groups
        .iter()
        .filter(|g| !g.observed)
        .map(|g| (g.group_expr.clone(), g.witnesses.first().cloned()))
        .map(|(e, w)| (e, w.expect("a failing search records its witness")))
        .collect();
    for (e, w) in recorded {
        r.checks.push(timed(format!("{e} witness recertified"), || recertify_cis_witness(&e, &w)));
    }
    r.checks.push(timed("cube D4 {y,y3,x}", || cube_check("D4", "y,y3,x")));
    r.checks.push(timed("Q8 {i,-i,j,-j,-1}", q8_cis_check));
    r.checks.push(timed("A4 nine-element witness", a4_cis_check));
    r.checks.push(timed("SD(7,3,2) powers of x and y", sd_witness_check));
    for p in [2, 3] {
        r.checks.push(timed(format!("Z{} witness S = G \\ (Y \\ Z)", p * p * p), || zp3_check(p)));
    }
    Ok(r.finish(started))
}

fn suite_ks(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut r = VerificationReport::new("ks", cfg);
    let mut exprs: Vec<String> = abelian_catalog().into_iter().map(|(s, _)| s).collect();
    exprs.extend(
        ["Z2^2xZ4", "Z2^4", "Z4^2", "Z3^2xZ2", "Z2^3xZ3", "Z3^3", "Z8xZ2", "Z16", "Z9xZ2", "Z4xZ3xZ2"].map(String::from),
    );
    for e in &exprs {
        let expected = ks_expected(&group(e)?);
        r.groups.push(group_record(e, Predicate::CayleyIntegral, expected, cfg)?);
    }
    Ok(r.finish(started))
}

fn suite_main(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut r = VerificationReport::new("main", cfg);
    for (e, _) in catalog::complete_catalog() {
        let expected = MAIN_INTEGRAL.contains(&e.as_str());
        r.groups.push(group_record(&e, Predicate::CayleyIntegral, expected, cfg)?);
    }
    for (e, expected) in MAIN_SPOT {
        r.groups.push(group_record(e, Predicate::CayleyIntegral, expected, cfg)?);
    }
    r.checks.push(timed("SL2_3 modulo its center is A4", sl2_3_quotient_check));
    Ok(r.finish(started))
}

fn suite_sporadic(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut r = VerificationReport::new("sporadic", cfg);
    for e in SPORADIC {
        r.groups.push(group_record(e, Predicate::CayleyIntegral, true, cfg)?);
    }
    let totals: Vec<(String, u64)> = r.groups.iter().map(|g| (g.group_expr.clone(), g.subsets_total)).collect();
    for (e, total) in totals {
        r.checks.push(timed(format!("{e} subset count"), || subset_count_check(&e, total)));
    }
    Ok(r.finish(started))
}

/// Cross-checks the cell-based count `2^cells` against a count from
/// element orders and, for small groups, against brute force.
fn subset_count_check(expr: &str, total: u64) -> Result<(bool, String)> {
    let g = group(expr)?;
    let n = g.order();
    let involutions = (0..n).filter(|&a| a != g.identity() && g.op(a, a) == g.identity()).count();
    let by_orders = 1u64 << (involutions + (n - 1 - involutions) / 2);
    let mut brute = None;
    if n <= 16 {
        let others: Vec<usize> = (0..n).filter(|&a| a != g.identity()).collect();
        let count = (0u64..1 << others.len())
            .filter(|mask| {
                let s = ElementSet::from_indices(
                    others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a),
                );
                s.iter().all(|a| s.contains(g.inv(a)))
            })
            .count() as u64;
        brute = Some(count);
    }
    let pass = total == by_orders && brute.is_none_or(|b| b == total);
    Ok((pass, format!("{total} symmetric subsets (element-order count {by_orders}, brute force {brute:?})")))
}

/// Reruns the sporadic, main and cis suites and tallies the divisibility bound.
fn suite_bounds(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let sources = [suite_sporadic(cfg)?, suite_main(cfg)?, suite_cis(cfg)?];
    Ok(bounds_from(&sources.iter().collect::<Vec<_>>(), cfg))
}

/// Builds the bounds report from already-run suite reports.
pub fn bounds_from(sources: &[&VerificationReport], cfg: &VerifyConfig) -> VerificationReport {
    let started = Instant::now();
    let mut r = VerificationReport::new("bounds", cfg);
    let mut total = BoundStats::default();
    let mut perfect_with_graphs = Vec::new();
    for src in sources {
        for g in &src.groups {
            let b = g.bounds;
            total.checked += b.checked;
            total.strong_checked += b.strong_checked;
            total.violations += b.violations;
            if b.perfect_group && b.checked > 0 {
                perfect_with_graphs.push(g.group_expr.clone());
            }
            r.checks.push(CheckRecord {
                name: format!("{} ({})", g.group_expr, src.suite),
                pass: b.violations == 0,
                detail: format!(
                    "{} connected integral graphs, {} under the strong form, {} violations",
                    b.checked, b.strong_checked, b.violations
                ),
                wall_time_ms: 0,
            });
        }
    }
    r.checks.push(CheckRecord {
        name: "total".into(),
        pass: total.violations == 0,
        detail: format!(
            "{} graphs, {} strong, {} violations",
            total.checked, total.strong_checked, total.violations
        ),
        wall_time_ms: 0,
    });
    r.checks.push(CheckRecord {
        name: "perfect groups".into(),
        pass: perfect_with_graphs.is_empty(),
        detail: if perfect_with_graphs.is_empty() {
            "no perfect group with a nonempty connection set was encountered; the perfect case holds vacuously"
                .into()
        } else {
            format!("perfect groups encountered: {}", perfect_with_graphs.join(", "))
        },
        wall_time_ms: 0,
    });
    r.finish(started)
}

fn set(g: &FiniteGroup, lit: &str) -> Result<SymmetricSubset> {
    SymmetricSubset::parse(g, lit)
}

/// Generating, exactly integral, and with a complement that is not a subgroup.
fn cis_violation(g: &FiniteGroup, s: SymmetricSubset) -> (bool, SpectrumVerdict) {
    let c = CayleyGraph::new(g, s);
    let v = verdict(&c);
    (c.generates() && v.is_integral() && !c.is_complete_multipartite(), v)
}

fn spectrum_string(m: &BTreeMap<i64, usize>) -> String {
    let parts: Vec<String> = m.iter().map(|(l, k)| format!("{l}:{k}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn cube_check(expr: &str, lit: &str) -> Result<(bool, String)> {
    let g = group(expr)?;
    let (violates, v) = cis_violation(&g, set(&g, lit)?);
    let cube: BTreeMap<i64, usize> = [(-3, 1), (-1, 3), (1, 3), (3, 1)].into();
    let pass = violates && v.spectrum() == Some(&cube);
    Ok((pass, format!("spectrum {}", v.spectrum().map_or("non-integral".into(), spectrum_string))))
}

/// `Z_{p³} = ⟨a⟩`, `Y = ⟨a^p⟩`, `Z = ⟨a^{p²}⟩`, `S = G ∖ (Y ∖ Z)` without the identity.
fn zp3_check(p: usize) -> Result<(bool, String)> {
    let n = p * p * p;
    let g = catalog::cyclic(n);
    let y = ElementSet::from_indices((0..n).filter(|k| k % p == 0));
    let z = ElementSet::from_indices((0..n).filter(|k| k % (p * p) == 0));
    let s = SymmetricSubset::new(&g, g.full_set() - (y - z) - ElementSet::singleton(0))?;
    let (violates, v) = cis_violation(&g, s);
    let complement = g.full_set() - s.bits();
    let shape = complement.contains(p) && !complement.contains(p * p);
    Ok((
        violates && shape,
        format!(
            "|S| = {}, spectrum {}",
            s.len(),
            v.spectrum().map_or("non-integral".into(), spectrum_string)
        ),
    ))
}

/// `(A ∖ 1) ∪ (Z_m ∖ 0)` in `A × Z_m`: complete graphs' Cartesian product.
fn cartesian_complete_check(a: &str, m: usize) -> Result<(bool, String)> {
    let ga = group(a)?;
    let zm = catalog::cyclic(m);
    let g = ga.direct_product(&zm)?;
    let s = union_product_subset(
        &ga,
        &zm,
        SymmetricSubset::all_nonidentity(&ga),
        SymmetricSubset::all_nonidentity(&zm),
    )?;
    let (violates, v) = cis_violation(&g, s);
    let (k, l) = (ga.order() as i64, m as i64);
    let mut want = BTreeMap::new();
    for (x, mx) in [(k - 1, 1usize), (-1, (k - 1) as usize)] {
        for (y, my) in [(l - 1, 1usize), (-1, (l - 1) as usize)] {
            *want.entry(x + y).or_insert(0) += mx * my;
        }
    }
    let pass = violates && v.spectrum() == Some(&want);
    Ok((pass, format!("spectrum {}", v.spectrum().map_or("non-integral".into(), spectrum_string))))
}

fn q8_cis_check() -> Result<(bool, String)> {
    let g = group("Q8")?;
    let s = set(&g, "i,-i,j,-j,-1")?;
    let (violates, v) = cis_violation(&g, s);
    // the 2-dimensional representation sends S to −I, the linear ones into {−3, 1, 5}
    let pi = repcheck::quaternion_pi(&g)?;
    let two_dim = rep_eigenvalues(&pi, s)?.iter().all(|x| (x + 1.0).abs() < EVIDENCE_TOL);
    let linear = repcheck::linear_characters(&g)?
        .iter()
        .map(|r| rep_eigenvalues(r, s).map(|e| e[0]))
        .collect::<Result<Vec<f64>>>()?;
    let linear_ok = linear.iter().all(|x| [-3.0, 1.0, 5.0].iter().any(|t| (x - t).abs() < EVIDENCE_TOL));
    Ok((
        violates && two_dim && linear_ok,
        format!(
            "spectrum {}, linear characters {linear:?}",
            v.spectrum().map_or("non-integral".into(), spectrum_string)
        ),
    ))
}

fn a4_cis_check() -> Result<(bool, String)> {
    let g = group("A4")?;
    let s = set(&g, "(12)(34),(123),(132),(124),(142),(234),(243),(134),(143)")?;
    let (violates, v) = cis_violation(&g, s);
    Ok((violates, format!("spectrum {}", v.spectrum().map_or("non-integral".into(), spectrum_string))))
}

/// `G = Z7 ⋊ Z3`, `S = {x, …, x⁶} ∪ {y, y²}`: spectrum inside `{−2, q−2, p−2, p+q−2}`.
pub fn sd_witness_check() -> Result<(bool, String)> {
    let g = group("SD(7,3,2)")?;
    // x^a y^b sits at index 7b + a
    let s = SymmetricSubset::new(&g, ElementSet::from_indices((1..7).chain([7, 14])))?;
    let (violates, v) = cis_violation(&g, s);
    let allowed = [-2, 5, 1, 8];
    let inside = v.spectrum().is_some_and(|m| m.keys().all(|l| allowed.contains(l)));
    let complement = g.order() - s.len();
    Ok((
        violates && inside && g.order() % complement != 0,
        format!(
            "S = {{{}}}, spectrum {}, |G \\ S| = {complement}",
            g.set_names(s.bits()).join(","),
            v.spectrum().map_or("non-integral".into(), spectrum_string)
        ),
    ))
}

/// Re-derives a search witness with the rank-based route.
fn recertify_cis_witness(expr: &str, w: &Witness) -> Result<(bool, String)> {
    let g = group(expr)?;
    let c = CayleyGraph::new(&g, w.subset);
    let integral = verdict_with(&c, Method::ExactRank).is_integral();
    let complement = c.is_complete_multipartite();
    let ok = c.generates()
        && match w.kind {
            search::WitnessKind::IntegralNoncomplement => integral && !complement,
            search::WitnessKind::NonintegralComplement => !integral && complement,
            search::WitnessKind::Nonintegral => !integral,
        };
    Ok((ok, format!("{{{}}} {}", w.elements.join(","), w.hex)))
}

fn sl2_3_quotient_check() -> Result<(bool, String)> {
    let g = group("SL2_3")?;
    let center = g.center();
    let q = g.quotient(center)?.group;
    let a4 = group("A4")?;
    let same = q.order() == 12 && q.order_profile() == a4.order_profile() && !q.is_abelian();
    Ok((
        same && center.len() == 2,
        format!("|Z| = {}, quotient order profile {:?}", center.len(), q.order_profile()),
    ))
}

fn suite_s4_transitive(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut r = VerificationReport::new("s4-transitive", cfg);
    let s4 = group("S4")?;
    let subs = s4.all_subgroups();
    r.checks.push(CheckRecord {
        name: "subgroup count".into(),
        pass: subs.len() == 30,
        detail: format!("{} subgroups", subs.len()),
        wall_time_ms: 0,
    });
    let mut transitive_integral = Vec::new();
    for h in subs {
        let (sub, embed) = s4.subgroup(h)?;
        let mut orbit = ElementSet::singleton(0);
        for &a in &embed {
            let p = permutation_of(&s4, a, 4).ok_or_else(|| Error::Parse("not a permutation".into()))?;
            orbit.insert(p[0]);
        }
        let transitive = orbit.len() == 4;
        let label = format!("S4<{}>", s4.set_names(h).join(","));
        let v = search::is_cayley_integral(&sub, &search_opts(cfg, &label))?;
        if transitive && v.holds {
            transitive_integral.push((label.clone(), sub.order()));
        }
        // no subgroup of S4 has an element of order 6, so the Cayley-integral
        // ones are exactly those of order at most 6
        let expected = sub.order() <= 6;
        r.groups.push(GroupRecord {
            group_expr: label,
            order: sub.order(),
            predicate: Predicate::CayleyIntegral,
            expected,
            observed: v.holds,
            matches: expected == v.holds,
            witnesses: v.witnesses,
            cells: v.cells,
            subsets_total: v.subsets_total,
            subsets_enumerated: v.stats.subsets_enumerated,
            reduced_count: v.stats.reduced_count,
            integral_count: v.stats.integral_count,
            bounds: v.stats.bounds,
            wall_time_ms: v.wall_time_ms,
        });
    }
    let klein = ["(12)(34)", "(13)(24)"].map(|n| s4.element(n).expect("S4 element name"));
    let v4 = s4.closure(ElementSet::from_indices(klein));
    let has_v4 = transitive_integral.iter().any(|(l, _)| *l == format!("S4<{}>", s4.set_names(v4).join(",")));
    r.checks.push(CheckRecord {
        name: "transitive Cayley-integral subgroups have order 4".into(),
        pass: !transitive_integral.is_empty() && transitive_integral.iter().all(|(_, o)| *o == 4) && has_v4,
        detail: transitive_integral
            .iter()
            .map(|(l, o)| format!("{l} (order {o})"))
            .collect::<Vec<_>>()
            .join("; "),
        wall_time_ms: 0,
    });
    Ok(r.finish(started))
}

fn suite_ds(cfg: &VerifyConfig) -> VerificationReport {
    let started = Instant::now();
    let mut r = VerificationReport::new("ds", cfg);
    for name in ["D4", "Q8", "S3", "Dic12"] {
        r.checks.push(timed(format!("{name} union property"), || ds_group_check(name)));
    }
    r.finish(started)
}

/// Every symmetric subset: the representation union matches the exact
/// spectrum, and per-representation integrality matches the exact verdict.
fn ds_group_check(name: &str) -> Result<(bool, String)> {
    let g = group(name)?;
    let rs = rep_system(&g, name)?;
    let (mut total, mut integral, mut bad) = (0, 0, Vec::new());
    for s in search::symmetric_subsets(&g, false) {
        total += 1;
        let exact = verdict(&CayleyGraph::new(&g, s)).is_integral();
        integral += exact as usize;
        let union_ok = repcheck::ds_union_check(&g, &rs, s)?;
        let per_rep = rs.reps.iter().map(|r| rep_integral(r, s, 1e-6)).collect::<Result<Vec<bool>>>()?;
        if !union_ok || per_rep.iter().all(|&b| b) != exact {
            bad.push(s.hex());
        }
    }
    Ok((
        bad.is_empty(),
        format!(
            "{total} subsets ({integral} integral), degrees {:?}, mismatches {:?}",
            rs.degrees(),
            bad
        ),
    ))
}

fn suite_oracles(cfg: &VerifyConfig) -> VerificationReport {
    let started = Instant::now();
    let mut r = VerificationReport::new("oracles", cfg);
    for (name, g) in catalog::complete_catalog() {
        r.checks.push(timed(format!("{name} oracle agreement"), || oracle_group_check(&g)));
    }
    r.finish(started)
}

/// All symmetric subsets: rank certification, char-poly root split, the
/// group-ring certifier and the annihilator product must agree, and the
/// integral spectra must coincide.
fn oracle_group_check(g: &FiniteGroup) -> Result<(bool, String)> {
    let (mut total, mut integral, mut bad) = (0, 0, Vec::new());
    for s in search::symmetric_subsets(g, false) {
        total += 1;
        let c = CayleyGraph::new(g, s);
        let rank = verdict_with(&c, Method::ExactRank);
        let cp = verdict_with(&c, Method::CharPoly);
        let ga = verdict_with(&c, Method::GroupAlgebra);
        let oracle = c.adjacency_matrix().annihilator_product_oracle(s.len() as i64)?;
        let agree = rank.is_integral() == oracle
            && cp.is_integral() == oracle
            && ga.is_integral() == oracle
            && rank.spectrum() == cp.spectrum()
            && rank.spectrum() == ga.spectrum();
        let remainder_ok = match cp.certificate() {
            Some(cert) => cert.remainder_degree.map(|d| d + cert.integer_eigenspace_total) == Some(g.order()),
            None => true,
        };
        integral += oracle as usize;
        if !agree || !remainder_ok {
            bad.push(s.hex());
        }
    }
    Ok((bad.is_empty(), format!("{total} subsets ({integral} integral), disagreements {bad:?}")))
}

fn evidence_has(evidence: &[f64], targets: &[f64]) -> bool {
    targets.iter().all(|t| evidence.iter().any(|e| (e - t).abs() <= EVIDENCE_TOL))
}

fn fmt_floats(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.9}")).collect();
    format!("[{}]", parts.join(", "))
}

/// Exact non-integrality plus float evidence containing every target.
fn evidence_check(expr: &str, lit: &str, targets: &[f64]) -> Result<(bool, String, SymmetricSubset, FiniteGroup)> {
    let g = group(expr)?;
    let s = set(&g, lit)?;
    let v = verdict(&CayleyGraph::new(&g, s));
    let evidence = v.certificate().map(|c| c.float_evidence.clone()).unwrap_or_default();
    let pass = !v.is_integral() && evidence_has(&evidence, targets);
    Ok((pass, format!("evidence {}", fmt_floats(&evidence)), s, g))
}

fn rep_route(r: &ExplicitRep, s: SymmetricSubset, want: &[f64]) -> Result<(bool, String)> {
    let mut got = rep_eigenvalues(r, s)?;
    got.sort_by(f64::total_cmp);
    let mut want = want.to_vec();
    want.sort_by(f64::total_cmp);
    let pass = got.len() == want.len() && got.iter().zip(&want).all(|(a, b)| (a - b).abs() <= EVIDENCE_TOL);
    Ok((pass, format!("{} eigenvalues {}", r.label, fmt_floats(&got))))
}

fn both(a: (bool, String), b: (bool, String)) -> (bool, String) {
    (a.0 && b.0, format!("{}; {}", a.1, b.1))
}

/// The named non-integral witnesses, each through the Cayley graph and
/// through the representation that exhibits it.
pub fn witness_checks() -> Vec<CheckRecord> {
    let (r2, r3, r17) = (2f64.sqrt(), 3f64.sqrt(), 17f64.sqrt());
    vec![
        timed("D4 {x,xy}", || {
            let (p, d, s, g) = evidence_check("D4", "x,xy", &[r2, -r2])?;
            Ok(both((p, d), rep_route(&repcheck::dihedral_theta(&g, 4, 1)?, s, &[r2, -r2])?))
        }),
        timed("D6 {x,xy}", || {
            let (p, d, s, g) = evidence_check("D6", "x,xy", &[r3, -r3])?;
            Ok(both((p, d), rep_route(&repcheck::dihedral_theta(&g, 6, 1)?, s, &[r3, -r3])?))
        }),
        timed("A4 {(13)(24),(14)(23),(123),(132)}", || {
            let roots = [(-1.0 + r17) / 2.0, (-1.0 - r17) / 2.0];
            let (p, d, s, g) = evidence_check("A4", "(13)(24),(14)(23),(123),(132)", &roots)?;
            let cp = integrality::char_poly(&CayleyGraph::new(&g, s));
            let quad = IntPolynomial::from_i64(&[-4, 1, 1]);
            let divides = cp.div_rem_monic(&quad).is_some_and(|(_, rem)| rem.is_zero());
            let rep = repcheck::natural_permutation(&g, 4)?;
            let route = rep_route(&rep, s, &[4.0, -1.0, roots[0], roots[1]])?;
            Ok(both((p && divides, format!("{d}, char poly {cp}")), route))
        }),
        timed("S3xZ3 {(12).x,(12).x2,(13).1}", || {
            let (p, d, s, g) = evidence_check("S3xZ3", "(12).x,(12).x2,(13).1", &[r3, -r3])?;
            let rep = repcheck::s3xz3_rep(&g, &group("S3")?)?;
            Ok(both((p, d), rep_route(&rep, s, &[0.0, r3, -r3])?))
        }),
        timed("E9 {xz,z,yz}", || {
            let (p, d, s, g) = evidence_check("E9", "xz,z,yz", &[r3, -r3])?;
            Ok(both((p, d), rep_route(&repcheck::e9_lifted(&g)?, s, &[3.0, r3, -r3])?))
        }),
        timed("Q8xZ4 {i.x,-i.x3,j.x,-j.x3}", || {
            let t = 2.0 * r2;
            let (p, d, s, g) = evidence_check("Q8xZ4", "i.x,-i.x3,j.x,-j.x3", &[t, -t])?;
            let rep = repcheck::q8xz4_rho(&g, &group("Q8")?)?;
            Ok(both((p, d), rep_route(&rep, s, &[t, -t])?))
        }),
    ]
}

fn suite_witnesses(cfg: &VerifyConfig) -> VerificationReport {
    let started = Instant::now();
    let mut r = VerificationReport::new("witnesses", cfg);
    r.checks = witness_checks();
    r.checks.push(timed("SD(7,3,2) powers of x and y", sd_witness_check));
    r.finish(started)
}

/// Order-at-most-16 pool for the randomized lift instances.
fn lift_pool() -> Result<Vec<(String, FiniteGroup)>> {
    let mut pool = catalog::complete_catalog();
    for e in ["Z16", "Z8xZ2", "Z4^2", "Z4xZ2^2", "Z2^4", "D8", "Q8xZ2", "D4xZ2"] {
        pool.push((e.to_string(), group(e)?));
    }
    Ok(pool)
}

/// Uniform random symmetric subset of `g` inside `within`.
fn random_subset(rng: &mut ChaCha8Rng, g: &FiniteGroup, within: ElementSet) -> SymmetricSubset {
    let family = SubsetFamily::new(g);
    let bits = family
        .cells()
        .iter()
        .filter(|c| c.is_subset(within) && rng.random_bool(0.5))
        .fold(ElementSet::EMPTY, |acc, &c| acc | c);
    SymmetricSubset::new(g, bits).expect("union of inverse-closed cells")
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, v: &'a [T]) -> &'a T {
    &v[rng.random_range(0..v.len())]
}

/// `M[perm[i]][perm[j]] == K[i][j]` for all `i, j`.
fn matches_under(m: &IntMatrix, perm: &[usize], k: &IntMatrix) -> bool {
    let n = perm.len();
    k.rows() == n && (0..n).all(|i| (0..n).all(|j| m.get(perm[i], perm[j]) == k.get(i, j)))
}

fn identity_block(n: usize) -> IntMatrix {
    IntMatrix::identity(n)
}

fn suite_lifts(cfg: &VerifyConfig) -> VerificationReport {
    let started = Instant::now();
    let mut r = VerificationReport::new("lifts", cfg);
    let pool = match lift_pool() {
        Ok(p) => p,
        Err(e) => {
            r.checks.push(timed("pool", || Err(e)));
            return r.finish(started);
        }
    };
    let runs: [(&str, LiftFn); 4] = [
        ("lift_from_subgroup", subgroup_instance),
        ("lift_from_quotient", quotient_instance),
        ("lift_preimage", preimage_instance),
        ("union_product_subset", product_instance),
    ];
    for (i, (name, f)) in runs.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i as u64));
        r.checks.push(timed(name, || {
            let mut bad = Vec::new();
            for _ in 0..cfg.lift_instances {
                let (ok, label) = f(&mut rng, &pool)?;
                if !ok {
                    bad.push(label);
                }
            }
            Ok((bad.is_empty(), format!("{} instances, failures {bad:?}", cfg.lift_instances)))
        }));
    }
    r.finish(started)
}

type LiftFn = fn(&mut ChaCha8Rng, &[(String, FiniteGroup)]) -> Result<(bool, String)>;

/// `T = S ∪ (G ∖ H)`: the adjacency matrix is `A_S ⊗ I_k + J_n ⊗ (J_k − I_k)`
/// in the order `h·r_j ↦ h·k + j`, and the characteristic polynomial is
/// `p_S^k · (x − λ₁ − n(k−1)) · (x − λ₁ + n)^{k−1} / (x − λ₁)^k`.
pub fn subgroup_instance(rng: &mut ChaCha8Rng, pool: &[(String, FiniteGroup)]) -> Result<(bool, String)> {
    let (name, g) = pick(rng, pool);
    let subs = g.all_subgroups();
    let h = *pick(rng, &subs);
    let s = random_subset(rng, g, h - ElementSet::singleton(g.identity()));
    let t = lift_from_subgroup(g, h, s)?;
    let (hg, embed) = g.subgroup(h)?;
    let mut pos = vec![usize::MAX; g.order()];
    for (i, &a) in embed.iter().enumerate() {
        pos[a] = i;
    }
    let s_h = SymmetricSubset::new(&hg, ElementSet::from_indices(s.iter().map(|a| pos[a])))?;
    let a_s = CayleyGraph::new(&hg, s_h).adjacency_matrix();
    let (n, k) = (hg.order(), g.order() / hg.order());

    // right coset representatives
    let mut reps = Vec::new();
    let mut covered = ElementSet::EMPTY;
    for x in 0..g.order() {
        if !covered.contains(x) {
            reps.push(x);
            covered = covered | ElementSet::from_indices(embed.iter().map(|&a| g.op(a, x)));
        }
    }
    let perm: Vec<usize> = (0..n * k).map(|i| g.op(embed[i / k], reps[i % k])).collect();
    let jk_minus_i = IntMatrix::ones(k, k).sub(&identity_block(k))?;
    let b = a_s.kron(&identity_block(k)).add(&IntMatrix::ones(n, n).kron(&jk_minus_i))?;
    let c = CayleyGraph::new(g, t);
    let kron_ok = matches_under(&c.adjacency_matrix(), &perm, &b);

    let p_s = a_s.char_poly()?;
    let lambda = s.len() as i64;
    let (n_i, k_i) = (n as i64, k as i64);
    let mut formula = p_s
        .pow(k as u32)
        .mul(&IntPolynomial::linear(lambda + n_i * (k_i - 1)))
        .mul(&IntPolynomial::linear(lambda - n_i).pow(k as u32 - 1));
    for _ in 0..k {
        formula = formula.divide_by_root(lambda).ok_or(Error::Indeterminate)?;
    }
    let spectrum_ok = integrality::char_poly(&c) == formula;
    Ok((kron_ok && spectrum_ok, format!("{name} H={} S={}", format!("{:#x}", h.0), s.hex())))
}

fn random_normal(rng: &mut ChaCha8Rng, g: &FiniteGroup) -> Result<ElementSet> {
    let normals: Vec<ElementSet> = g
        .all_subgroups()
        .into_iter()
        .filter(|&n| g.is_normal(n).unwrap_or(false))
        .collect();
    Ok(*pick(rng, &normals))
}

/// Orders `G` as `n_i · r_c ↦ outer · inner` with cosets `r_c` of `N` in
/// quotient order; `coset_major` puts the coset index first.
fn coset_order(g: &FiniteGroup, n: ElementSet, projection: &[usize], q: usize, coset_major: bool) -> Vec<usize> {
    let reps: Vec<usize> = (0..q)
        .map(|c| (0..g.order()).find(|&x| projection[x] == c).expect("cosets are nonempty"))
        .collect();
    let members: Vec<usize> = n.iter().collect();
    let k = members.len();
    (0..q * k)
        .map(|i| {
            let (c, m) = if coset_major { (i / k, i % k) } else { (i % q, i / q) };
            g.op(members[m], reps[c])
        })
        .collect()
}

/// `T = ⋃ sN`: the adjacency matrix is `J_k ⊗ A_{G/N}` and the
/// characteristic polynomial is `x^{|G|−|Q|} · k^{|Q|} p_Q(x / k)`.
pub fn quotient_instance(rng: &mut ChaCha8Rng, pool: &[(String, FiniteGroup)]) -> Result<(bool, String)> {
    let (name, g) = pick(rng, pool);
    let n = random_normal(rng, g)?;
    let q = g.quotient(n)?;
    let sbar = random_subset(rng, &q.group, q.group.full_set() - ElementSet::singleton(q.group.identity()));
    let t = lift_from_quotient(g, n, sbar)?;
    let a_q = CayleyGraph::new(&q.group, sbar).adjacency_matrix();
    let k = n.len();
    let c = CayleyGraph::new(g, t);
    let perm = coset_order(g, n, &q.projection, q.group.order(), false);
    let kron_ok = matches_under(&c.adjacency_matrix(), &perm, &IntMatrix::ones(k, k).kron(&a_q));
    let formula = IntPolynomial::monomial(g.order() - q.group.order())
        .mul(&a_q.char_poly()?.scale_roots(&BigInt::from(k)));
    let spectrum_ok = integrality::char_poly(&c) == formula;
    Ok((kron_ok && spectrum_ok, format!("{name} N={} S={}", format!("{:#x}", n.0), sbar.hex())))
}

/// `T = π⁻¹(S)`: the adjacency matrix is `A_H ⊗ J_k` with the coset index
/// first, with the same characteristic polynomial as the quotient lift.
pub fn preimage_instance(rng: &mut ChaCha8Rng, pool: &[(String, FiniteGroup)]) -> Result<(bool, String)> {
    let (name, g) = pick(rng, pool);
    let n = random_normal(rng, g)?;
    let q = g.quotient(n)?;
    let s = random_subset(rng, &q.group, q.group.full_set() - ElementSet::singleton(q.group.identity()));
    let t = lift_preimage(&q, s)?;
    let a_h = CayleyGraph::new(&q.group, s).adjacency_matrix();
    let k = n.len();
    let c = CayleyGraph::new(g, t);
    let perm = coset_order(g, n, &q.projection, q.group.order(), true);
    let kron_ok = matches_under(&c.adjacency_matrix(), &perm, &a_h.kron(&IntMatrix::ones(k, k)));
    let formula = IntPolynomial::monomial(g.order() - q.group.order())
        .mul(&a_h.char_poly()?.scale_roots(&BigInt::from(k)));
    let spectrum_ok = integrality::char_poly(&c) == formula;
    Ok((kron_ok && spectrum_ok, format!("{name} N={} S={}", format!("{:#x}", n.0), s.hex())))
}

/// Cartesian product: the adjacency matrix is `A₁ ⊗ I + I ⊗ A₂` and the
/// eigenvalues are the pairwise sums, rebuilt through power sums
/// `R_m = Σ_j C(m, j) P_j(λ) P_{m−j}(μ)`.
pub fn product_instance(rng: &mut ChaCha8Rng, pool: &[(String, FiniteGroup)]) -> Result<(bool, String)> {
    let (a_name, a, b_name, b) = loop {
        let (an, a) = pick(rng, pool);
        let (bn, b) = pick(rng, pool);
        if a.order() * b.order() <= 64 {
            break (an, a, bn, b);
        }
    };
    let s1 = random_subset(rng, a, a.full_set() - ElementSet::singleton(a.identity()));
    let s2 = random_subset(rng, b, b.full_set() - ElementSet::singleton(b.identity()));
    let g = a.direct_product(b)?;
    let s = union_product_subset(a, b, s1, s2)?;
    let a1 = CayleyGraph::new(a, s1).adjacency_matrix();
    let a2 = CayleyGraph::new(b, s2).adjacency_matrix();
    let sum = a1.kron(&identity_block(b.order())).add(&identity_block(a.order()).kron(&a2))?;
    let c = CayleyGraph::new(&g, s);
    let kron_ok = c.adjacency_matrix() == sum;

    let total = g.order();
    let p = a1.char_poly()?.power_sums(total);
    let q = a2.char_poly()?.power_sums(total);
    let mut sums = vec![BigInt::from(total)];
    for m in 1..=total {
        let mut acc = BigInt::from(0);
        let mut binom = BigInt::from(1);
        for j in 0..=m {
            acc += &binom * &p[j] * &q[m - j];
            binom = binom * BigInt::from(m - j) / BigInt::from(j + 1);
        }
        sums.push(acc);
    }
    let formula = IntPolynomial::from_power_sums(total, &sums);
    let spectrum_ok = integrality::char_poly(&c) == formula;
    Ok((
        kron_ok && spectrum_ok,
        format!("{a_name} x {b_name} S1={} S2={}", s1.hex(), s2.hex()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> VerifyConfig {
        VerifyConfig { threads: 2, lift_instances: 10, ..VerifyConfig::default() }
    }

    #[test]
    fn classifiers() {
        let yes = ["Z1", "Z2", "Z4", "Z2^2", "Z9", "Z25", "Z7"];
        let no = ["Z8", "Z2^3", "Z3^2", "Z6", "Z4xZ2"];
        assert!(yes.iter().all(|e| ab_expected(&group(e).unwrap())));
        assert!(no.iter().all(|e| !ab_expected(&group(e).unwrap())));
        let ks_yes = ["Z1", "Z6", "Z4^2", "Z3^3", "Z2^4"];
        let ks_no = ["Z8", "Z12", "Z9", "Z5"];
        assert!(ks_yes.iter().all(|e| ks_expected(&group(e).unwrap())));
        assert!(ks_no.iter().all(|e| !ks_expected(&group(e).unwrap())));
    }

    #[test]
    fn witness_suite_passes() {
        let r = run_suite("witnesses", &cfg()).unwrap();
        assert!(r.pass, "{}", r.summary());
    }

    #[test]
    fn lift_suite_passes_on_a_few_instances() {
        let r = run_suite("lifts", &cfg()).unwrap();
        assert!(r.pass, "{}", r.summary());
    }

    #[test]
    fn report_round_trips() {
        let r = run_suite("witnesses", &cfg()).unwrap();
        let json = r.to_json().unwrap();
        let back = VerificationReport::from_json(&json).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json().unwrap(), json);
        assert!(json.contains("\"schema\": 1"));
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", &cfg()), Err(Error::Parse(_))));
    }
}
