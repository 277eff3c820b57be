mod common;

use std::fs;
use std::path::Path;

use fqhyper::groebner::{self, Ideal};
use fqhyper::search::*;
use fqhyper::Hypersurface;

fn job(dir: &Path, name: &str, family: FamilySpec, threshold: u64) -> SearchJob {
    let mut j = SearchJob::new(family, threshold, dir.join(format!("{name}.jsonl")));
    j.threads = 1;
    j
}

fn quadric_run(dir: &Path, name: &str, shard: (u64, u64), threads: usize) -> (SearchSummary, String) {
    let mut j = job(dir, name, FamilySpec::quadrics(), 0);
    j.shard_index = shard.0;
    j.shard_count = shard.1;
    j.threads = threads;
    let s = run(&j).unwrap();
    (s, fs::read_to_string(&j.out).unwrap())
}

/// A small family: all conics over F_2 (64 candidates).
fn conics() -> FamilySpec {
    FamilySpec::all_forms("2", 2, 2)
}

#[test]
fn quadric_scan_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let (base, base_out) = quadric_run(dir.path(), "s1", (0, 1), 1);
    let c = &base.counters;
    assert!(base.complete);
    assert_eq!(c.candidates, 1 << 15);
    assert_eq!(c.categorized(), c.candidates);
    assert_eq!(c.quarantined, 0);
    // nonsingular quadric threefolds over F_2: |PGL(5,2)| / |Sp(4,2)|
    assert_eq!(c.extremal + c.exceptional, 9_999_360 / 720);

    let recs: Vec<SearchRecord> = base_out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(recs.windows(2).all(|w| w[0].index < w[1].index));
    let fam = Family::compile(&FamilySpec::quadrics()).unwrap();
    for r in &recs {
        match r.category {
            Category::Extremal | Category::Exceptional => {
                assert_eq!(r.points, 15, "candidate {}", r.index);
                assert_eq!(r.thas_invariant, Some(1));
                assert_eq!(r.cone_points, Some(15));
                assert_eq!(r.cone_bases_nonsingular, Some(true));
            }
            Category::RejectedRationalSingular => {
                // stage-2 rejections are confirmed by the exact test
                let p = fam.candidate(r.index);
                let empty = !p.is_zero() && groebner::is_projectively_empty(&Ideal::jacobian(&p).unwrap()).unwrap();
                assert!(!empty, "candidate {}", r.index);
            }
            other => panic!("unexpected category {other:?}"),
        }
    }

    // shard-count and thread-count invariance
    let dir4 = dir.path().join("s4");
    fs::create_dir(&dir4).unwrap();
    let shards: Vec<_> = (0..4)
        .map(|i| {
            let (s, _) = quadric_run(&dir4, &format!("part{i}"), (i, 4), 2);
            (s, dir4.join(format!("part{i}.jsonl")))
        })
        .collect();
    let merged_path = dir.path().join("merged.jsonl");
    let merged = merge(&shards, &merged_path).unwrap();
    assert_eq!(merged, base);
    assert_eq!(fs::read_to_string(&merged_path).unwrap(), base_out);
    assert_eq!(serde_json::to_string(&merged).unwrap(), serde_json::to_string(&base).unwrap());

    // kill at 50% and resume
    let mut j = job(dir.path(), "resumed", FamilySpec::quadrics(), 0);
    j.checkpoint = Some(dir.path().join("resumed.ckpt"));
    j.checkpoint_every = 1000;
    j.halt_after = Some(1 << 14);
    let half = run(&j).unwrap();
    assert!(!half.complete);
    assert_eq!(half.counters.candidates, 1 << 14);
    // garbage past the checkpointed length is discarded on resume
    let mut f = fs::OpenOptions::new().append(true).open(&j.out).unwrap();
    std::io::Write::write_all(&mut f, b"{\"index\": 99999, \"trunc").unwrap();
    drop(f);
    j.halt_after = None;
    let full = run(&j).unwrap();
    assert_eq!(full, base);
    assert_eq!(fs::read_to_string(&j.out).unwrap(), base_out);
}

#[test]
fn merge_identity_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let j = job(dir.path(), "one", conics(), 0);
    let s = run(&j).unwrap();
    let m = merge(&[(s.clone(), j.out.clone())], &dir.path().join("m.jsonl")).unwrap();
    assert_eq!(m, s);
    assert_eq!(fs::read(dir.path().join("m.jsonl")).unwrap(), fs::read(&j.out).unwrap());

    let parts: Vec<_> = (0..3)
        .map(|i| {
            let mut j = job(dir.path(), &format!("p{i}"), conics(), 0);
            j.shard_index = i;
            j.shard_count = 3;
            (run(&j).unwrap(), j.out)
        })
        .collect();
    let out = dir.path().join("x.jsonl");
    assert!(matches!(merge(&parts[..2], &out), Err(SearchError::Merge(_))));
    let dup = vec![parts[0].clone(), parts[0].clone(), parts[1].clone()];
    assert!(matches!(merge(&dup, &out), Err(SearchError::Merge(_))));
    assert!(matches!(merge(&[], &out), Err(SearchError::Merge(_))));
    let mut mixed = parts.clone();
    mixed[2].0.threshold = 5;
    assert!(matches!(merge(&mixed, &out), Err(SearchError::Merge(_))));
    assert_eq!(merge(&parts, &out).unwrap(), s);
}

#[test]
fn checkpoint_guards() {
    let dir = tempfile::tempdir().unwrap();
    let mut j = job(dir.path(), "c", conics(), 0);
    j.checkpoint = Some(dir.path().join("c.ckpt"));
    j.halt_after = Some(0);
    let s = run(&j).unwrap();
    assert_eq!(s.counters.candidates, 0);
    let ckpt: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("c.ckpt")).unwrap()).unwrap();
    assert_eq!(ckpt["cursor"], 0);

    let mut altered = j.clone();
    altered.family.fixed = "x0*x1".into();
    altered.family.slots.retain(|m| m != "x0*x1");
    assert!(matches!(run(&altered), Err(SearchError::CheckpointMismatch(_))));
    let mut other = j.clone();
    other.threshold = 3;
    assert!(matches!(run(&other), Err(SearchError::CheckpointMismatch(_))));

    fs::write(dir.path().join("c.ckpt"), "{not json").unwrap();
    assert!(matches!(run(&j), Err(SearchError::CorruptCheckpoint(_))));

    let mut bad = job(dir.path(), "b", conics(), 0);
    bad.shard_index = 2;
    bad.shard_count = 2;
    assert!(matches!(run(&bad), Err(SearchError::Shard { .. })));
}

#[test]
fn small_families_against_direct_classification() {
    // every candidate of the conic and F_3 binary-cubic-cone families,
    // checked against independent computations
    for (spec, threshold) in [(conics(), 3), (FamilySpec::all_forms("3", 2, 2), 4)] {
        let fam = Family::compile(&spec).unwrap();
        for i in 0..fam.size() {
            let rec = classify(&spec, threshold, i).unwrap();
            let p = fam.candidate(i);
            let n = common::count_points(&p, 1);
            assert_eq!(rec.points, n);
            let expected = if n < threshold {
                Category::RejectedStage1Count
            } else if p.is_zero() || (1..=3).any(|m| common::has_singular_point(&p, m)) {
                assert!(
                    rec.category == Category::RejectedRationalSingular
                        || rec.category == Category::RejectedGroebnerSingular
                );
                rec.category
            } else {
                let x = Hypersurface::new(p.clone()).unwrap();
                assert!(x.is_nonsingular().unwrap());
                if x.cone_points().is_empty() {
                    Category::Exceptional
                } else {
                    Category::Extremal
                }
            };
            assert_eq!(rec.category, expected, "{spec:?} candidate {i}");
        }
    }
}

#[test]
fn flagship_prefix_is_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let mut j = job(dir.path(), "f", FamilySpec::flagship(), 27);
    j.halt_after = Some(1 << 16);
    let s = run(&j).unwrap();
    assert_eq!(s.counters.categorized(), s.counters.candidates);
    for r in read_records(&j.out).unwrap() {
        assert!(r.points >= 27);
        assert!(r.index < 1 << 16);
    }
}
