//! Exhaustive search behaviour: determinism, reduction, checkpoints and heredity.

use cayley_spectra::catalog::{self, group};
use cayley_spectra::search::{self, Checkpoint, GroupVerdict, Predicate, SearchOptions};
use cayley_spectra::{Error, FiniteGroup};

fn opts(threads: usize, reduce: bool) -> SearchOptions {
    SearchOptions {
        threads: Some(threads),
        reduce_conjugacy: reduce,
        chunk: 64,
        ..SearchOptions::default()
    }
}

fn strip_time(mut v: GroupVerdict) -> GroupVerdict {
    v.wall_time_ms = 0;
    v
}

#[test]
fn verdicts_do_not_depend_on_thread_count() {
    for e in ["D6", "Q8xZ2", "A4", "Z2^4", "S3xZ3"] {
        let g = group(e).unwrap();
        for p in [Predicate::CayleyIntegral, Predicate::Cis] {
            let one = strip_time(search::check(&g, p, &opts(1, true)).unwrap());
            let three = strip_time(search::check(&g, p, &opts(3, true)).unwrap());
            assert_eq!(one, three, "{e} {}", p.name());
        }
    }
}

#[test]
fn reduction_keeps_verdict_and_least_witness() {
    for (e, g) in catalog::complete_catalog().into_iter().chain([
        ("S3xZ3".to_string(), group("S3xZ3").unwrap()),
        ("Dic12xZ2".to_string(), group("Dic12xZ2").unwrap()),
    ]) {
        for p in [Predicate::CayleyIntegral, Predicate::Cis] {
            let on = search::check(&g, p, &opts(2, true)).unwrap();
            let off = search::check(&g, p, &opts(2, false)).unwrap();
            assert_eq!(on.holds, off.holds, "{e} {}", p.name());
            assert_eq!(on.witnesses, off.witnesses, "{e} {}", p.name());
            assert!(on.stats.reduced_count <= off.stats.reduced_count);
        }
    }
}

#[test]
fn witnesses_are_genuine() {
    let g = group("Dic12xZ2").unwrap();
    let v = search::is_cayley_integral(&g, &opts(1, true)).unwrap();
    assert!(!v.holds);
    let w = &v.witnesses[0];
    assert_eq!(w.elements, g.set_names(w.subset.bits()));
    let c = cayley_spectra::cayley::CayleyGraph::new(&g, w.subset);
    assert!(!cayley_spectra::integrality::verdict(&c).is_integral());
}

#[test]
fn checkpoint_resumes_and_rejects_foreign_searches() {
    let dir = std::env::temp_dir().join(format!("cayley-spectra-cp-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z2_4.json");
    let _ = std::fs::remove_file(&path);
    let g = group("Z2^4").unwrap();
    let mut o = opts(1, true);
    o.checkpoint = Some(path.clone());
    o.label = "Z2^4".into();
    let first = search::is_cayley_integral(&g, &o).unwrap();
    let cp = Checkpoint::load(&path).unwrap().expect("checkpoint written");
    assert_eq!(cp.next_counter, first.subsets_total);
    assert_eq!(cp.partial_stats, first.stats);

    // resuming from a half-way checkpoint scans only the remaining counters
    let mut half = cp.clone();
    half.next_counter = first.subsets_total / 2;
    half.partial_stats = Default::default();
    half.save(&path).unwrap();
    let resumed = search::is_cayley_integral(&g, &o).unwrap();
    assert!(resumed.holds);
    assert_eq!(resumed.stats.subsets_enumerated, first.subsets_total - half.next_counter);

    // a finished checkpoint is returned as is
    let resumed = search::is_cayley_integral(&g, &o).unwrap();
    assert_eq!(resumed.stats.subsets_enumerated, first.subsets_total - half.next_counter);

    let other = group("Z4^2").unwrap();
    let mut foreign = o.clone();
    foreign.label = "Z4^2".into();
    assert!(matches!(search::is_cayley_integral(&other, &foreign), Err(Error::Checkpoint(_))));
    std::fs::remove_dir_all(&dir).unwrap();
}

fn integral(g: &FiniteGroup) -> bool {
    search::is_cayley_integral(g, &opts(1, true)).unwrap().holds
}

#[test]
fn cayley_integrality_passes_to_subgroups_and_quotients() {
    for e in ["Q8xZ2", "Dic12", "Z2^2xZ4", "Z3^2xZ2", "S3"] {
        let g = group(e).unwrap();
        assert!(integral(&g), "{e}");
        for h in g.all_subgroups() {
            let (sub, _) = g.subgroup(h).unwrap();
            assert!(integral(&sub), "{e} subgroup {:?}", g.set_names(h));
            if g.is_normal(h).unwrap() {
                let q = g.quotient(h).unwrap();
                assert!(integral(&q.group), "{e} quotient by {:?}", g.set_names(h));
            }
        }
    }
}

#[test]
fn cis_passes_to_subgroups_and_quotients() {
    for e in ["Z25", "Z9", "Z2^2", "Z7"] {
        let g = group(e).unwrap();
        let cis = |x: &FiniteGroup| search::is_cis(x, &opts(1, true)).unwrap().holds;
        assert!(cis(&g));
        for h in g.all_subgroups() {
            let (sub, _) = g.subgroup(h).unwrap();
            assert!(cis(&sub));
            assert!(cis(&g.quotient(h).unwrap().group));
        }
    }
}

#[test]
fn s4_has_thirty_subgroups() {
    let s4 = group("S4").unwrap();
    let subs = s4.all_subgroups();
    assert_eq!(subs.len(), 30);
    let mut by_order = std::collections::BTreeMap::new();
    for h in subs {
        *by_order.entry(h.len()).or_insert(0) += 1;
    }
    // 1, 9 of order 2, 4 of order 3, 7 of order 4, 4 of order 6, 3 of order 8, A4, S4
    let want: std::collections::BTreeMap<usize, usize> =
        [(1, 1), (2, 9), (3, 4), (4, 7), (6, 4), (8, 3), (12, 1), (24, 1)].into();
    assert_eq!(by_order, want);
}
