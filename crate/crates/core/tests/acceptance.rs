//! Acceptance suite: one pass/fail line per criterion.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nfreg::bounds::{
    friedman_floor_bound, quadratic_bound, rho_bound, tower_bound, voutier_constant, GammaChoice, Invariants,
    Verdict,
};
use nfreg::heights::{check_tensor_height, weil_height_mahler, weil_height_places};
use nfreg::ideal::{f_k, lattice_index, random_independent_vector, verify_fk_identity};
use nfreg::io::{find, load_corpus, parse_decimal, ParsedField};
use nfreg::nf::FieldElement;
use nfreg::towers::{check_aleph_monotonic, check_aleph_gap, maximal_kstar, synthetic_lattice, verify_kstar};
use nfreg::units::{relative_regulator, search_small_units};

const P: usize = 128;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/corpus")
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn real_quadratics(corpus: &[ParsedField]) -> Vec<&ParsedField> {
    corpus.iter().filter(|p| p.field.degree() == 2 && p.field.signature().0 == 2).collect()
}

fn invariants(p: &ParsedField) -> Invariants {
    Invariants::from_field(&p.field, &p.lattice)
}

fn nonzero(p: &ParsedField, rng: &mut ChaCha8Rng) -> FieldElement {
    loop {
        let a = p.field.random_element(rng, 9, 4);
        if !a.is_zero() {
            return a;
        }
    }
}

fn c1_friedman(start: Instant) -> Outcome {
    let corpus = match load_corpus(&corpus_dir(), P) {
        Ok(c) => c,
        Err(e) => return outcome(false, format!("corpus failed to load: {e}")),
    };
    let below: Vec<&str> = corpus
        .iter()
        .filter(|p| friedman_floor_bound(&p.regulator, P).verdict != Verdict::Verified)
        .map(|p| p.label())
        .collect();
    let sextic = corpus.iter().find(|p| p.field.discriminant() == &(-10051).into());
    let Some(sextic) = sextic else { return outcome(false, "no sextic of discriminant -10051".into()) };
    let reg = sextic.regulator.mid_f64();
    let hint = sextic.record.regulator_hint.as_deref().and_then(parse_decimal).map(|h| {
        use num_traits::ToPrimitive;
        h.to_f64().unwrap()
    });
    let near = (reg - 0.2052).abs() <= 5e-4 && hint.is_some_and(|h| (reg - h).abs() <= 5e-4);
    let elapsed = start.elapsed();
    outcome(
        below.is_empty() && near && elapsed < Duration::from_secs(5),
        format!(
            "{} fields, below floor {:?}, sextic Reg {reg:.7} (hint {:?}), {:.2}s",
            corpus.len(),
            below,
            hint,
            elapsed.as_secs_f64()
        ),
    )
}

fn c2_fk_identity(corpus: &[ParsedField]) -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut failures = Vec::new();
    for p in corpus.iter().filter(|p| p.field.degree() <= 4) {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for i in 0..10 {
            let v = random_independent_vector(&p.field, &mut rng);
            match verify_fk_identity(&v) {
                Ok(r) if r.holds() => checked += 1,
                Ok(_) => failures.push(format!("{}#{i}", p.label())),
                Err(e) => failures.push(format!("{}#{i}: {e}", p.label())),
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && elapsed < Duration::from_secs(30),
        format!("{checked} vectors, failures {failures:?}, {:.2}s", elapsed.as_secs_f64()),
    )
}

fn c3_dual_heights(corpus: &[ParsedField]) -> Outcome {
    let mut worst = 0.0f64;
    let mut failures = 0;
    let mut count = 0;
    for p in corpus {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let a = nonzero(p, &mut rng);
            let ok = match (weil_height_places(&a), weil_height_mahler(&a)) {
                (Ok(x), Ok(y)) => {
                    let d = x.value.sub(&y.value).abs().upper_f64();
                    worst = worst.max(d);
                    d <= 1e-10
                }
                _ => false,
            };
            failures += usize::from(!ok);
            count += 1;
        }
    }
    outcome(failures == 0, format!("{count} elements, {failures} failures, max difference {worst:.2e}"))
}

fn c4_tensor_height(corpus: &[ParsedField]) -> Outcome {
    let Ok(p) = find(corpus, "x4-10x2+1") else { return outcome(false, "biquadratic field missing".into()) };
    let k = &p.field;
    let half = |c: [i64; 4]| -> FieldElement {
        k.from_i64(&c).scale(&BigRational::new(1.into(), 2.into()))
    };
    let s2 = half([0, -9, 0, 1]);
    let s3 = half([0, 11, 0, -1]);
    let s6 = s2.mul(&s3);
    let pairs = [("√2,√3", &s2, &s3), ("√2,√6", &s2, &s6), ("√3,√6", &s3, &s6)];
    let mut lines = Vec::new();
    let mut pass = true;
    for (name, a, b) in pairs {
        match check_tensor_height(k, &[a.clone(), b.clone()], &[2, 2]) {
            Ok(r) => {
                let diff = r.difference.abs().upper_f64();
                let ok = diff <= 1e-10 && r.bound.holds && !r.bound.margin.is_negative();
                pass &= ok;
                lines.push(format!("{name}: diff {diff:.1e} slack {}", r.bound.margin.to_decimal(6)));
            }
            Err(e) => {
                pass = false;
                lines.push(format!("{name}: {e}"));
            }
        }
    }
    outcome(pass, lines.join("; "))
}

fn eligible_nonquadratic(corpus: &[ParsedField], choice: GammaChoice) -> Vec<&ParsedField> {
    corpus
        .iter()
        .filter(|p| {
            let inv = invariants(p);
            inv.degree >= 3 && !inv.is_cm() && inv.gamma_regime(choice, P).ok().flatten() == Some(true)
        })
        .collect()
}

fn c5_rho_bound(corpus: &[ParsedField]) -> Outcome {
    let Ok(cubic) = find(corpus, "x3+x2-2x-1") else { return outcome(false, "cyclic cubic missing".into()) };
    let r = match rho_bound(&invariants(cubic), &cubic.regulator, P) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let bound = r.bound.as_ref().map_or(f64::NAN, |b| b.mid_f64());
    let margin = r.margin.as_ref().map_or(f64::NAN, |m| m.mid_f64());
    let cubic_ok = r.verdict == Verdict::Verified && (bound - 0.00740).abs() <= 1e-5 && (margin - 0.518).abs() <= 1e-3;
    let fields = eligible_nonquadratic(corpus, GammaChoice::DegreePower);
    let bad: Vec<&str> = fields
        .iter()
        .filter(|p| rho_bound(&invariants(p), &p.regulator, P).map(|r| r.verdict) != Ok(Verdict::Verified))
        .map(|p| p.label())
        .collect();
    outcome(
        cubic_ok && bad.is_empty() && !fields.is_empty(),
        format!("cubic bound {bound:.6} margin {margin:.6}; {} eligible fields, not verified {bad:?}", fields.len()),
    )
}

fn c6_tower_bound(corpus: &[ParsedField]) -> Outcome {
    let Ok(cubic) = find(corpus, "x3+x2-2x-1") else { return outcome(false, "cyclic cubic missing".into()) };
    let r = match tower_bound(&invariants(cubic), &cubic.regulator, P) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let bound = r.bound.as_ref().map_or(f64::NAN, |b| b.mid_f64());
    let cubic_ok = r.verdict == Verdict::Verified && (bound - 0.0637).abs() <= 1e-3;
    let fields = eligible_nonquadratic(corpus, GammaChoice::Tower);
    let bad: Vec<&str> = fields
        .iter()
        .filter(|p| tower_bound(&invariants(p), &p.regulator, P).map(|r| r.verdict) != Ok(Verdict::Verified))
        .map(|p| p.label())
        .collect();
    outcome(
        cubic_ok && bad.is_empty() && !fields.is_empty(),
        format!("cubic bound {bound:.6}; {} eligible fields, not verified {bad:?}", fields.len()),
    )
}

fn c7_quadratic(corpus: &[ParsedField]) -> Outcome {
    let fields: Vec<&ParsedField> =
        real_quadratics(corpus).into_iter().filter(|p| p.field.abs_discriminant() < 1000.into()).collect();
    let bad: Vec<&str> = fields
        .iter()
        .filter(|p| quadratic_bound(&invariants(p), &p.regulator, P).map(|r| r.verdict) != Ok(Verdict::Verified))
        .map(|p| p.label())
        .collect();
    outcome(fields.len() >= 20 && bad.is_empty(), format!("{} real quadratic fields, failures {bad:?}", fields.len()))
}

fn c8_scaling(corpus: &[ParsedField]) -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for p in corpus {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let v = random_independent_vector(&p.field, &mut rng);
        let (Ok(f0), Ok(i0)) = (f_k(&v), lattice_index(&v)) else {
            failures.push(p.label().to_string());
            continue;
        };
        for _ in 0..20 {
            let w = v.scale(&nonzero(p, &mut rng));
            if f_k(&w).as_ref() != Ok(&f0) || lattice_index(&w).as_ref() != Ok(&i0) {
                failures.push(p.label().to_string());
            }
            count += 1;
        }
    }
    outcome(failures.is_empty(), format!("{count} scalings over {} fields, failures {failures:?}", corpus.len()))
}

fn c9_towers() -> Outcome {
    let mut failures = Vec::new();
    let (mut paths, mut triples, mut deepest, mut largest) = (0, 0, 0, 0);
    for seed in 0..200u64 {
        let lat = synthetic_lattice(seed);
        largest = largest.max(lat.top().degree);
        let mut ok = true;
        for path in lat.maximal_paths() {
            deepest = deepest.max(path.len() - 1);
            paths += 1;
            ok &= check_aleph_monotonic(&lat, &path).is_ok_and(|r| r.holds);
        }
        for a in lat.nodes() {
            for b in lat.above(&a.label).unwrap_or_default() {
                triples += 1;
                ok &= check_aleph_gap(&lat, &a.label, &b).is_ok_and(|r| r.holds);
            }
        }
        ok &= maximal_kstar(&lat).is_ok_and(|k| verify_kstar(&lat, &k.label) == Ok(true));
        if !ok {
            failures.push(seed);
        }
    }
    outcome(
        failures.is_empty() && deepest <= 5 && largest <= 32,
        format!("200 lattices, {paths} paths, {triples} pairs, depth <= {deepest}, degree <= {largest}, failures {failures:?}"),
    )
}

fn c10_relative(corpus: &[ParsedField]) -> Outcome {
    let mut over_q = Vec::new();
    let mut failures = Vec::new();
    for p in real_quadratics(corpus) {
        for e in &p.extensions {
            if e.extension.base().degree() != 1 {
                continue;
            }
            let ok = relative_regulator(&e.extension, &e.relative_units)
                .is_ok_and(|r| r.sub(&p.regulator).abs().upper_f64() <= 1e-10);
            if !ok {
                failures.push(p.label().to_string());
            }
            over_q.push(p.label().to_string());
        }
    }
    let mut choices = 0;
    if let Ok(b) = find(corpus, "x4-10x2+1") {
        for e in &b.extensions {
            let values: Vec<_> = e
                .extension
                .all_choices()
                .into_iter()
                .filter_map(|c| e.extension.with_chosen(c).ok())
                .map(|x| relative_regulator(&x, &e.relative_units))
                .collect();
            choices += values.len();
            let first = values.first().and_then(|v| v.as_ref().ok()).cloned();
            let agree = first.is_some_and(|f| {
                values.iter().all(|v| v.as_ref().is_ok_and(|v| v.sub(&f).abs().upper_f64() <= 1e-10))
            });
            if !agree || values.len() < 2 {
                failures.push(format!("x4-10x2+1/{}", e.extension.base().label()));
            }
        }
    } else {
        failures.push("biquadratic missing".into());
    }
    outcome(
        over_q.len() >= 5 && choices > 0 && failures.is_empty(),
        format!("over Q: {over_q:?}; biquadratic choices checked {choices}; failures {failures:?}"),
    )
}

fn c11_unit_search(corpus: &[ParsedField]) -> Outcome {
    let mut fields = real_quadratics(corpus);
    if let Ok(c) = find(corpus, "x3+x2-2x-1") {
        fields.push(c);
    }
    let mut worst = f64::INFINITY;
    let mut failures = Vec::new();
    for p in &fields {
        match search_small_units(&p.units, 3) {
            Ok(s) => match &s.margin {
                Some(m) => {
                    let v = m.margin.mid_f64();
                    worst = worst.min(v);
                    if v < -1e-10 {
                        failures.push(p.label().to_string());
                    }
                }
                None => failures.push(format!("{}: too few products", p.label())),
            },
            Err(e) => failures.push(format!("{}: {e}", p.label())),
        }
    }
    outcome(failures.is_empty(), format!("{} fields, smallest margin {worst:.4e}, failures {failures:?}", fields.len()))
}

fn c12_voutier() -> Outcome {
    match voutier_constant(3, P) {
        Ok(c) => {
            let v = c.mid_f64();
            outcome((v - 1.569e-4).abs() <= 1e-7, format!("value {v:.6e}"))
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut results = vec![("friedman floor", c1_friedman(start))];
    let corpus = load_corpus(&corpus_dir(), P).expect("corpus loads");
    results.push(("f_k exact identity", c2_fk_identity(&corpus)));
    results.push(("height dual-method agreement", c3_dual_heights(&corpus)));
    results.push(("height multiplicativity", c4_tensor_height(&corpus)));
    results.push(("rho bound", c5_rho_bound(&corpus)));
    results.push(("tower bound", c6_tower_bound(&corpus)));
    results.push(("real quadratic bound", c7_quadratic(&corpus)));
    results.push(("scaling invariance", c8_scaling(&corpus)));
    results.push(("tower properties", c9_towers()));
    results.push(("relative regulator", c10_relative(&corpus)));
    results.push(("unit search certification", c11_unit_search(&corpus)));
    results.push(("voutier constant", c12_voutier()));
    let mut all = true;
    for (i, (name, o)) in results.iter().enumerate() {
        all &= o.pass;
        println!("criterion {:>2} {:<30} {}  {}", i + 1, name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", results.iter().filter(|r| r.1.pass).count(), results.len());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
