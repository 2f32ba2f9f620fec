//! Exhaustive enumeration of symmetric subsets and per-group verdicts.
//!
//! Every symmetric, identity-free subset is a union of *cells*: singletons
//! `{g}` for involutions and pairs `{g, g⁻¹}` otherwise. Cells are sorted by
//! their least element and a subset is addressed by a counter whose bit `i`
//! selects cell `i`. Counters are scanned in ascending order, so the first
//! witness found is the one with the least counter.
//!
//! With conjugacy reduction only counters that are minimal in their orbit
//! under inner automorphisms are evaluated. The least witness is always
//! such a representative, because both predicates are conjugation invariant.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cayley::{CayleyGraph, SymmetricSubset};
use crate::error::{Error, Result};
use crate::group::{ElementSet, FiniteGroup};
use crate::integrality::{verdict_with, BoundCheck, FastCertifier, Method};

/// Groups above this order need an explicit override for exhaustive search.
pub const SEARCH_CAP: usize = 32;

/// The cell decomposition of `G ∖ {1}` under inversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetFamily {
    cells: Vec<ElementSet>,
}

impl SubsetFamily {
    pub fn new(g: &FiniteGroup) -> Self {
        let mut cells = Vec::new();
        let mut seen = ElementSet::singleton(g.identity());
        for a in 0..g.order() {
            if seen.contains(a) {
                continue;
            }
            let cell = ElementSet::from_indices([a, g.inv(a)]);
            seen = seen | cell;
            cells.push(cell);
        }
        SubsetFamily { cells }
    }

    pub fn cells(&self) -> &[ElementSet] {
        &self.cells
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    /// Number of symmetric subsets, `2^(#cells)`.
    pub fn count(&self) -> u64 {
        1u64 << self.cells.len()
    }

    /// The subset selected by `counter`.
    pub fn subset(&self, counter: u64) -> SymmetricSubset {
        let mut bits = ElementSet::EMPTY;
        let mut c = counter;
        while c != 0 {
            let i = c.trailing_zeros() as usize;
            bits = bits | self.cells[i];
            c &= c - 1;
        }
        SymmetricSubset::new_unchecked(bits)
    }

    /// Inverse of [`SubsetFamily::subset`].
    pub fn counter_of(&self, s: SymmetricSubset) -> u64 {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_subset(s.bits()))
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }

    fn cell_of(&self, a: usize) -> usize {
        self.cells.iter().position(|c| c.contains(a)).expect("non-identity element")
    }
}

/// Byte-sliced lookup tables for the cell permutations induced by inner
/// automorphisms; decides whether a counter is least in its orbit.
#[derive(Clone)]
struct Canonicalizer {
    tables: Vec<Vec<[u64; 256]>>,
}

impl Canonicalizer {
    fn new(g: &FiniteGroup, family: &SubsetFamily) -> Self {
        let m = family.num_cells();
        let mut perms: Vec<Vec<usize>> = Vec::new();
        for a in 0..g.order() {
            let perm: Vec<usize> = family
                .cells()
                .iter()
                .map(|c| {
                    let rep = ElementSet::min(*c).expect("non-empty cell");
                    family.cell_of(g.op(g.op(a, rep), g.inv(a)))
                })
                .collect();
            let identity = perm.iter().enumerate().all(|(i, &p)| i == p);
            if !identity && !perms.contains(&perm) {
                perms.push(perm);
            }
        }
        let bytes = m.div_ceil(8);
        let tables = perms
            .iter()
            .map(|perm| {
                (0..bytes)
                    .map(|b| {
                        let mut t = [0u64; 256];
                        for (v, slot) in t.iter_mut().enumerate() {
                            let mut img = 0u64;
                            for bit in 0..8 {
                                let i = b * 8 + bit;
                                if i < m && v & (1 << bit) != 0 {
                                    img |= 1 << perm[i];
                                }
                            }
                            *slot = img;
                        }
                        t
                    })
                    .collect()
            })
            .collect();
        Canonicalizer { tables }
    }

    fn num_automorphisms(&self) -> usize {
        self.tables.len() + 1
    }

    fn is_canonical(&self, mask: u64) -> bool {
        self.tables.iter().all(|t| {
            let img = t
                .iter()
                .enumerate()
                .fold(0u64, |acc, (b, tb)| acc | tb[((mask >> (8 * b)) & 0xff) as usize]);
            img >= mask
        })
    }
}

/// Lazily enumerates symmetric subsets in counter order, optionally one
/// representative per conjugacy orbit.
pub struct SymmetricSubsets {
    family: SubsetFamily,
    canon: Option<Canonicalizer>,
    next: u64,
}

impl Iterator for SymmetricSubsets {
    type Item = SymmetricSubset;

    fn next(&mut self) -> Option<SymmetricSubset> {
        while self.next < self.family.count() {
            let c = self.next;
            self.next += 1;
            if self.canon.as_ref().is_none_or(|k| k.is_canonical(c)) {
                return Some(self.family.subset(c));
            }
        }
        None
    }
}

pub fn symmetric_subsets(g: &FiniteGroup, reduce_conjugacy: bool) -> SymmetricSubsets {
    let family = SubsetFamily::new(g);
    let canon = reduce_conjugacy.then(|| Canonicalizer::new(g, &family));
    SymmetricSubsets { family, canon, next: 0 }
}

/// The property being decided for a group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Predicate {
    CayleyIntegral,
    Cis,
}

impl Predicate {
    pub fn name(self) -> &'static str {
        match self {
            Predicate::CayleyIntegral => "cayley-integral",
            Predicate::Cis => "cis",
        }
    }
}

impl std::str::FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cayley-integral" => Ok(Predicate::CayleyIntegral),
            "cis" => Ok(Predicate::Cis),
            _ => Err(Error::Parse(format!("unknown predicate `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    /// A subset whose Cayley graph has a non-integer eigenvalue.
    Nonintegral,
    /// A generating subset with integral spectrum whose complement is not a subgroup.
    IntegralNoncomplement,
    /// A generating complement of a subgroup whose spectrum is not integral.
    NonintegralComplement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub counter: u64,
    pub subset: SymmetricSubset,
    pub elements: Vec<String>,
    pub hex: String,
}

/// Tallies of the order-divisibility test over connected integral graphs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundStats {
    pub checked: u64,
    pub strong_checked: u64,
    pub violations: u64,
    pub perfect_group: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Counters scanned (including those skipped by the reduction).
    pub subsets_enumerated: u64,
    /// Orbit representatives actually evaluated.
    pub reduced_count: u64,
    pub generating_count: u64,
    pub integral_count: u64,
    pub bounds: BoundStats,
}

impl SearchStats {
    fn merge(&mut self, o: &SearchStats) {
        self.subsets_enumerated += o.subsets_enumerated;
        self.reduced_count += o.reduced_count;
        self.generating_count += o.generating_count;
        self.integral_count += o.integral_count;
        self.bounds.checked += o.bounds.checked;
        self.bounds.strong_checked += o.bounds.strong_checked;
        self.bounds.violations += o.bounds.violations;
        self.bounds.perfect_group |= o.bounds.perfect_group;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupVerdict {
    pub group: String,
    pub order: usize,
    pub predicate: Predicate,
    pub holds: bool,
    pub witnesses: Vec<Witness>,
    pub cells: usize,
    pub subsets_total: u64,
    pub automorphisms_used: usize,
    pub stats: SearchStats,
    pub wall_time_ms: u64,
}

/// What the scan looks for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    /// Any non-integral subset (optionally generating subsets only).
    Nonintegral { generating_only: bool },
    /// Generating subsets where integrality and being a subgroup complement disagree.
    Cis,
    /// Only integral generating subsets that are not subgroup complements.
    IntegralNoncomplement,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub reduce_conjugacy: bool,
    pub threads: Option<usize>,
    pub force: bool,
    /// For Cayley integrality, only consider generating subsets.
    pub generating_only: bool,
    /// Tally the order-divisibility bound over connected integral subsets.
    pub record_bounds: bool,
    pub checkpoint: Option<PathBuf>,
    /// Label recorded in verdicts and checkpoints.
    pub label: String,
    /// Counters per work unit.
    pub chunk: u64,
    /// Certification route; the group-ring route is used when `None`.
    pub method: Option<Method>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            reduce_conjugacy: true,
            threads: None,
            force: false,
            generating_only: false,
            record_bounds: false,
            checkpoint: None,
            label: String::new(),
            chunk: 4096,
            method: None,
        }
    }
}

/// Resumable progress record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub group_expr: String,
    pub predicate: String,
    pub reduce_conjugacy: bool,
    pub cell_order: Vec<Vec<usize>>,
    pub next_counter: u64,
    pub partial_stats: SearchStats,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Option<Checkpoint>> {
        match std::fs::read_to_string(path) {
            Ok(text) => serde_json::from_str(&text)
                .map(Some)
                .map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display()))),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::Checkpoint(format!("{}: {e}", path.display()))),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("checkpoint serializes");
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, text)
            .and_then(|()| std::fs::rename(&tmp, path))
            .map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))
    }
}

struct Scanner<'g> {
    g: &'g FiniteGroup,
    family: SubsetFamily,
    canon: Option<Canonicalizer>,
    target: Target,
    opts: &'g SearchOptions,
    perfect: bool,
}

struct ChunkResult {
    stats: SearchStats,
    witness: Option<(u64, WitnessKind)>,
}

impl Scanner<'_> {
    fn integral(&self, cert: &mut FastCertifier, s: SymmetricSubset) -> bool {
        match self.opts.method {
            None => cert.is_integral(s.bits()),
            Some(m) => verdict_with(&CayleyGraph::new(self.g, s), m).is_integral(),
        }
    }

    fn bound(&self, s: SymmetricSubset, stats: &mut SearchStats) {
        let k = s.len();
        if k == 0 {
            return;
        }
        let n = self.g.order();
        let f = (1..2 * k).fold(1 % n, |acc, i| acc * (i % n) % n);
        let check = BoundCheck {
            applies: true,
            strong: self.perfect || s.iter().any(|a| self.g.order_of(a) % 2 == 1),
            holds: (2 * f) % n == 0,
            strong_holds: f == 0,
        };
        stats.bounds.checked += 1;
        if check.strong {
            stats.bounds.strong_checked += 1;
        }
        if check.violated() {
            stats.bounds.violations += 1;
        }
    }

    fn scan(&self, start: u64, end: u64) -> ChunkResult {
        let mut cert = FastCertifier::new(self.g);
        let mut stats = SearchStats::default();
        let full = self.g.full_set();
        for counter in start..end {
            stats.subsets_enumerated += 1;
            if let Some(c) = &self.canon {
                if !c.is_canonical(counter) {
                    continue;
                }
            }
            stats.reduced_count += 1;
            let s = self.family.subset(counter);
            let needs_generating = match self.target {
                Target::Nonintegral { generating_only } => generating_only || self.opts.record_bounds,
                _ => true,
            };
            let generating = needs_generating && self.g.closure(s.bits()) == full;
            if generating {
                stats.generating_count += 1;
            }
            let witness = match self.target {
                Target::Nonintegral { generating_only } => {
                    if generating_only && !generating {
                        None
                    } else {
                        let integral = self.integral(&mut cert, s);
                        if integral {
                            stats.integral_count += 1;
                            if generating && self.opts.record_bounds {
                                self.bound(s, &mut stats);
                            }
                            None
                        } else {
                            Some(WitnessKind::Nonintegral)
                        }
                    }
                }
                Target::Cis | Target::IntegralNoncomplement => {
                    if !generating {
                        None
                    } else {
                        let integral = self.integral(&mut cert, s);
                        if integral {
                            stats.integral_count += 1;
                            if self.opts.record_bounds {
                                self.bound(s, &mut stats);
                            }
                        }
                        let complement = self.g.is_subgroup(full - s.bits());
                        match (integral, complement) {
                            (true, false) => Some(WitnessKind::IntegralNoncomplement),
                            (false, true) if self.target == Target::Cis => {
                                Some(WitnessKind::NonintegralComplement)
                            }
                            _ => None,
                        }
                    }
                }
            };
            if let Some(kind) = witness {
                return ChunkResult { stats, witness: Some((counter, kind)) };
            }
        }
        ChunkResult { stats, witness: None }
    }
}

fn run(g: &FiniteGroup, predicate: Predicate, target: Target, opts: &SearchOptions) -> Result<GroupVerdict> {
    let started = Instant::now();
    if g.order() > SEARCH_CAP && !opts.force {
        return Err(Error::SearchCap { order: g.order(), cap: SEARCH_CAP });
    }
    let family = SubsetFamily::new(g);
    let canon = opts.reduce_conjugacy.then(|| Canonicalizer::new(g, &family));
    let automorphisms_used = canon.as_ref().map_or(1, Canonicalizer::num_automorphisms);
    let total = family.count();
    let cell_order: Vec<Vec<usize>> = family.cells().iter().map(|c| c.iter().collect()).collect();
    let scanner = Scanner {
        g,
        family,
        canon,
        target,
        opts,
        perfect: g.is_perfect(),
    };

    let mut stats = SearchStats::default();
    let mut next = 0u64;
    if let Some(path) = &opts.checkpoint {
        if let Some(cp) = Checkpoint::load(path)? {
            let matches = cp.group_expr == opts.label
                && cp.predicate == predicate.name()
                && cp.reduce_conjugacy == opts.reduce_conjugacy
                && cp.cell_order == cell_order;
            if !matches {
                return Err(Error::Checkpoint(format!(
                    "{} belongs to a different search",
                    path.display()
                )));
            }
            next = cp.next_counter;
            stats = cp.partial_stats;
        }
    }

    let threads = opts.threads.unwrap_or_else(default_threads).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Checkpoint(format!("thread pool: {e}")))?;
    let chunk = opts.chunk.max(1);
    let wave = chunk * 4 * threads as u64;
    let mut witness = None;
    while next < total && witness.is_none() {
        let end = next.saturating_add(wave).min(total);
        let starts: Vec<u64> = (next..end).step_by(chunk as usize).collect();
        let results: Vec<ChunkResult> = pool.install(|| {
            starts
                .par_iter()
                .map(|&s| scanner.scan(s, (s + chunk).min(end)))
                .collect()
        });
        for r in &results {
            stats.merge(&r.stats);
            if r.witness.is_some() {
                witness = r.witness;
                break;
            }
        }
        next = end;
        if witness.is_none() {
            if let Some(path) = &opts.checkpoint {
                Checkpoint {
                    group_expr: opts.label.clone(),
                    predicate: predicate.name().into(),
                    reduce_conjugacy: opts.reduce_conjugacy,
                    cell_order: cell_order.clone(),
                    next_counter: next,
                    partial_stats: stats,
                }
                .save(path)?;
            }
        }
    }
    stats.bounds.perfect_group = scanner.perfect;

    let witnesses = witness
        .map(|(counter, kind)| {
            let subset = scanner.family.subset(counter);
            vec![Witness {
                kind,
                counter,
                subset,
                elements: g.set_names(subset.bits()),
                hex: subset.hex(),
            }]
        })
        .unwrap_or_default();
    Ok(GroupVerdict {
        group: opts.label.clone(),
        order: g.order(),
        predicate,
        holds: witnesses.is_empty(),
        witnesses,
        cells: scanner.family.num_cells(),
        subsets_total: total,
        automorphisms_used,
        stats,
        wall_time_ms: started.elapsed().as_millis() as u64,
    })
}

/// Thread count from `CAYLEY_SPECTRA_THREADS`, else the available parallelism.
pub fn default_threads() -> usize {
    std::env::var("CAYLEY_SPECTRA_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Whether every symmetric subset (or every generating one, with
/// `generating_only`) gives an integral Cayley graph.
pub fn is_cayley_integral(g: &FiniteGroup, opts: &SearchOptions) -> Result<GroupVerdict> {
    run(
        g,
        Predicate::CayleyIntegral,
        Target::Nonintegral { generating_only: opts.generating_only },
        opts,
    )
}

/// Whether the integral generating subsets are exactly the complements of
/// subgroups. Groups without generating subsets hold vacuously.
pub fn is_cis(g: &FiniteGroup, opts: &SearchOptions) -> Result<GroupVerdict> {
    run(g, Predicate::Cis, Target::Cis, opts)
}

pub fn check(g: &FiniteGroup, predicate: Predicate, opts: &SearchOptions) -> Result<GroupVerdict> {
    match predicate {
        Predicate::CayleyIntegral => is_cayley_integral(g, opts),
        Predicate::Cis => is_cis(g, opts),
    }
}

/// The witness of the given kind with the least counter, if any.
pub fn find_witness(g: &FiniteGroup, kind: WitnessKind) -> Result<Option<SymmetricSubset>> {
    let opts = SearchOptions { threads: Some(1), ..SearchOptions::default() };
    let target = match kind {
        WitnessKind::Nonintegral => Target::Nonintegral { generating_only: false },
        WitnessKind::IntegralNoncomplement => Target::IntegralNoncomplement,
        WitnessKind::NonintegralComplement => {
            let v = run(g, Predicate::Cis, Target::Cis, &opts)?;
            return Ok(v
                .witnesses
                .into_iter()
                .find(|w| w.kind == kind)
                .map(|w| w.subset));
        }
    };
    let v = run(g, Predicate::CayleyIntegral, target, &opts)?;
    Ok(v.witnesses.first().map(|w| w.subset))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{group, quaternion};

    #[test]
    fn subset_counts() {
        assert_eq!(SubsetFamily::new(&group("Z4").unwrap()).count(), 4);
        assert_eq!(SubsetFamily::new(&group("S3").unwrap()).count(), 16);
        assert_eq!(SubsetFamily::new(&quaternion()).count(), 16);
        assert_eq!(SubsetFamily::new(&group("Z1").unwrap()).count(), 1);
        let z4 = group("Z4").unwrap();
        let all: Vec<_> = symmetric_subsets(&z4, false).map(|s| s.bits()).collect();
        assert_eq!(
            all,
            vec![
                ElementSet::EMPTY,
                ElementSet::from_indices([1, 3]),
                ElementSet::from_indices([2]),
                ElementSet::from_indices([1, 2, 3])
            ]
        );
    }

    #[test]
    fn counters_round_trip() {
        let g = group("D4").unwrap();
        let f = SubsetFamily::new(&g);
        for c in 0..f.count() {
            assert_eq!(f.counter_of(f.subset(c)), c);
        }
    }

    #[test]
    fn reduction_keeps_one_per_orbit() {
        let g = group("S3").unwrap();
        let reps: Vec<_> = symmetric_subsets(&g, true).collect();
        // orbits: ∅, transpositions (1 orbit of 3), 3-cycles, and combinations
        let mut orbits = std::collections::BTreeSet::new();
        for s in symmetric_subsets(&g, false) {
            let orbit: std::collections::BTreeSet<_> = (0..6).map(|a| s.conjugate(&g, a)).collect();
            orbits.insert(orbit.into_iter().min().unwrap());
        }
        assert_eq!(reps.len(), orbits.len());
    }

    #[test]
    fn small_verdicts() {
        let opts = SearchOptions::default();
        assert!(is_cayley_integral(&group("S3").unwrap(), &opts).unwrap().holds);
        assert!(is_cis(&group("Z4").unwrap(), &opts).unwrap().holds);
        let v = is_cis(&group("Z2^3").unwrap(), &opts).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witnesses[0].kind, WitnessKind::IntegralNoncomplement);
        let v = is_cayley_integral(&group("A4").unwrap(), &opts).unwrap();
        assert!(!v.holds);
        assert_eq!(find_witness(&group("Z2^2").unwrap(), WitnessKind::Nonintegral).unwrap(), None);
        assert_eq!(find_witness(&group("Z3").unwrap(), WitnessKind::IntegralNoncomplement).unwrap(), None);
    }

    #[test]
    fn cap_is_enforced() {
        let g = group("Z36").unwrap();
        let err = is_cayley_integral(&g, &SearchOptions::default()).unwrap_err();
        assert_eq!(err, Error::SearchCap { order: 36, cap: SEARCH_CAP });
    }
}
