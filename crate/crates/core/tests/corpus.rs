use std::path::PathBuf;

use nfreg::bounds::{verify_field, TheoremId, Verdict};
use nfreg::io::{self, find, load_corpus, parse_field, FieldRecord, ParsedField, ReportOptions};
use nfreg::towers::{check_aleph_monotonic, lambda, rho};
use nfreg::Error;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/corpus")
}

fn corpus() -> Vec<ParsedField> {
    load_corpus(&corpus_dir(), 128).expect("bundled corpus is valid")
}

fn record(label: &str) -> FieldRecord {
    io::read_record(&corpus_dir().join(format!("{label}.json"))).unwrap()
}

#[test]
fn corpus_covers_the_required_fields() {
    let c = corpus();
    assert!(c.len() >= 15);
    for label in ["x2-2", "x2+1", "x3+x2-2x-1", "x4-10x2+1", "x4+x3+x2+x+1", "x6-x5+2x4-2x3+2x2-2x+1"] {
        find(&c, label).unwrap();
    }
    assert_eq!(find(&c, "x6-x5+2x4-2x3+2x2-2x+1").unwrap().field.discriminant(), &(-10051).into());
    for p in &c {
        let prov = p.record.provenance.as_ref().expect("every record names its oracle");
        assert!(!prov.oracle.is_empty() && !prov.date.is_empty());
    }
}

#[test]
fn rank_and_tower_invariants() {
    for p in corpus() {
        let (d, r) = (p.field.degree(), p.field.unit_rank());
        assert!(d - 2 <= 2 * r && 2 * r < 2 * d, "{}", p.label());
        let top = p.lattice.top().label.clone();
        assert!(1usize << lambda(&p.lattice, &top).unwrap() <= d);
        for path in p.lattice.maximal_paths() {
            assert!(check_aleph_monotonic(&p.lattice, &path).unwrap().holds);
        }
        let rh = rho(&p.lattice);
        // totally complex fields with a totally real subfield of half degree
        let cm = p.field.signature().0 == 0 && p.lattice.nodes().iter().any(|n| 2 * n.degree == d && n.signature.1 == 0);
        if cm {
            assert_eq!(rh, r, "{}", p.label());
        } else {
            assert!(rh < r || r == 0, "{}", p.label());
        }
    }
}

#[test]
fn verify_field_examples() {
    let c = corpus();
    let get = |label: &str, t: TheoremId| {
        let p = find(&c, label).unwrap();
        verify_field(&p.field, &p.lattice, &p.units).unwrap().into_iter().find(|r| r.theorem == t).unwrap()
    };
    let t1 = get("x3+x2-2x-1", TheoremId::RhoBound);
    assert_eq!(t1.verdict, Verdict::Verified);
    assert!((t1.margin.unwrap().mid_f64() - 0.518).abs() < 1e-3);
    for cm in ["x4+x3+x2+x+1", "x4+1", "x6+x5+x4+x3+x2+x+1"] {
        for t in [TheoremId::RhoBound, TheoremId::TowerBound] {
            let r = get(cm, t);
            assert_eq!(r.verdict, Verdict::HypothesisFailed, "{cm}");
            assert_eq!(r.hypotheses.cm, Some(true));
        }
    }
    let q = get("x2-2", TheoremId::Quadratic);
    assert_eq!(q.verdict, Verdict::Verified);
    assert!((q.margin.unwrap().mid_f64() - 0.535).abs() < 1e-3);
    // the sextic lies below d^d, where the small discriminant argument applies
    let s = get("x6-x5+2x4-2x3+2x2-2x+1", TheoremId::SmallDiscRho);
    assert_eq!(s.verdict, Verdict::Verified);
    assert_eq!(get("x6-x5+2x4-2x3+2x2-2x+1", TheoremId::RhoBound).verdict, Verdict::HypothesisFailed);
}

#[test]
fn no_bound_fails_on_the_corpus() {
    for p in corpus() {
        for r in verify_field(&p.field, &p.lattice, &p.units).unwrap() {
            assert_ne!(r.verdict, Verdict::Failed, "{} {:?}", p.label(), r.theorem);
            if r.verdict == Verdict::Verified {
                let m = r.margin.unwrap();
                assert!(!m.is_negative());
            }
        }
    }
}

#[test]
fn kstar_of_the_quartics() {
    let c = corpus();
    // 5^4 = 625 < 725
    assert_eq!(nfreg::towers::maximal_kstar(&find(&c, "x4-x3-3x2+x+1").unwrap().lattice).unwrap().label, "x2-x-1");
    // 8^4, 12^4 and 24^4 all exceed 2304
    assert_eq!(nfreg::towers::maximal_kstar(&find(&c, "x4-10x2+1").unwrap().lattice).unwrap().label, "Q");
}

#[test]
fn rejects_non_unit() {
    let mut r = record("x2-2");
    r.fundamental_units = vec![vec!["0".into(), "1".into()]];
    let Err(Error::Invalid { violations, .. }) = parse_field(&r, 128) else { panic!("accepted a non-unit") };
    assert!(violations.iter().any(|v| v.contains("fundamental_units") && v.contains("norm -2")), "{violations:?}");
}

#[test]
fn rejects_wrong_signature() {
    let mut r = record("x3+x2-2x-1");
    r.signature = [1, 1];
    let Err(Error::Invalid { violations, .. }) = parse_field(&r, 128) else { panic!() };
    assert!(violations[0].starts_with("x3+x2-2x-1.signature"));
}

#[test]
fn rejects_discriminant_divisibility_failure() {
    let mut r = record("x4-10x2+1");
    for s in &mut r.subfields {
        if s.label == "x2-3" {
            s.discriminant = io::Integer(7.into());
        }
    }
    let Err(Error::Invalid { violations, .. }) = parse_field(&r, 128) else { panic!() };
    assert!(violations.iter().any(|v| v.contains("lattice_edges") && v.contains("does not divide")), "{violations:?}");
}

#[test]
fn corpus_report_round_trip() {
    let c = corpus();
    let opts = ReportOptions { seed: 11, ..ReportOptions::default() };
    let doc = io::build_report(&c, 128, &opts).unwrap();
    assert_eq!(doc.summary.failed, 0);
    assert_eq!(doc.summary.checks_failed, 0);
    let json = io::to_json(&doc).unwrap();
    let back = io::from_json(&json).unwrap();
    assert_eq!(io::to_json(&back).unwrap(), json);
    assert_eq!(io::to_json(&io::build_report(&c, 128, &opts).unwrap()).unwrap(), json);
}
