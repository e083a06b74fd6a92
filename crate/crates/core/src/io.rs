//! Corpus records, ingestion with validation, and report documents.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bounds::{verify_field, BoundReport, Hypotheses, Quantity, Verdict};
use crate::error::{Error, Result};
use crate::heights::{check_power_vector_height, weil_height_mahler, weil_height_places};
use crate::ideal::{f_k, lattice_index, random_independent_vector, verify_fk_identity};
use crate::linalg;
use crate::nf::{Field, FieldElement, NumberField};
use crate::poly::IntPolynomial;
use crate::real::Real;
use crate::towers::{lambda, maximal_kstar, rho, SubfieldLattice, SubfieldNode};
use crate::units::{parse_rational, regulator, relative_regulator, search_small_units, RelativeExtension, UnitSystem};

/// An integer that reads from a JSON number or a decimal string and writes
/// as a number when it fits in 64 bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Integer(pub BigInt);

impl Serialize for Integer {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Integer {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            I(i64),
            U(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::I(v) => Ok(Integer(v.into())),
            Raw::U(v) => Ok(Integer(v.into())),
            Raw::S(s) => s.trim().parse().map(Integer).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubfieldRecord {
    pub label: String,
    pub poly: Vec<Integer>,
    pub discriminant: Integer,
    pub signature: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionRecord {
    pub base_label: String,
    pub embedding_matrix: Vec<Vec<String>>,
    pub relative_units: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub oracle: String,
    pub date: String,
    pub method: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldRecord {
    pub label: String,
    /// `a_0, …, a_d`.
    pub poly: Vec<Integer>,
    /// Signed field discriminant.
    pub discriminant: Integer,
    pub signature: [usize; 2],
    /// Rows are power-basis coordinates of the basis elements.
    pub integral_basis: Vec<Vec<String>>,
    pub torsion_order: u64,
    pub fundamental_units: Vec<Vec<String>>,
    #[serde(default)]
    pub regulator_hint: Option<String>,
    pub subfields: Vec<SubfieldRecord>,
    pub lattice_edges: Vec<[String; 2]>,
    #[serde(default)]
    pub extensions: Option<Vec<ExtensionRecord>>,
    #[serde(default)]
    pub provenance: Option<Provenance>,
}

#[derive(Clone, Debug)]
pub struct ParsedExtension {
    pub extension: RelativeExtension,
    pub relative_units: Vec<FieldElement>,
}

/// A validated record.
#[derive(Clone, Debug)]
pub struct ParsedField {
    pub record: FieldRecord,
    pub field: Field,
    pub lattice: SubfieldLattice,
    pub units: UnitSystem,
    pub regulator: Real,
    pub extensions: Vec<ParsedExtension>,
}

impl ParsedField {
    pub fn label(&self) -> &str {
        &self.record.label
    }
}

/// Agreement required between the computed regulator and the hint.
const HINT_TOLERANCE: f64 = 1e-20;

fn rational_rows(rows: &[Vec<String>]) -> Result<Vec<Vec<BigRational>>> {
    rows.iter().map(|r| r.iter().map(|s| parse_rational(s)).collect()).collect()
}

fn poly_of(coeffs: &[Integer]) -> IntPolynomial {
    IntPolynomial::new(coeffs.iter().map(|c| c.0.clone()).collect())
}

fn field_name(e: &Error) -> &'static str {
    match e {
        Error::NotMonic(_) | Error::NotSquarefree | Error::Reducible(_) => "poly",
        Error::SignatureMismatch { .. } => "signature",
        Error::DiscriminantMismatch { .. } => "discriminant",
        _ => "integral_basis",
    }
}

/// Number field for a subfield record: the equation order of its polynomial,
/// which is all that relative norms and embeddings need.
fn subfield_field(sub: &SubfieldRecord, precision: usize) -> Result<Field> {
    if sub.label == "Q" {
        return Ok(NumberField::rationals(precision));
    }
    let poly = poly_of(&sub.poly);
    let d = poly.degree();
    let disc = crate::poly::discriminant(&poly)?;
    NumberField::new(&sub.label, poly, disc, (sub.signature[0], sub.signature[1]), linalg::identity(d), precision)
}

/// Builds every object a record describes and checks all invariants. The
/// error lists each violation as `label.field: message`.
pub fn parse_field(record: &FieldRecord, precision: usize) -> Result<ParsedField> {
    let label = record.label.clone();
    let mut violations: Vec<String> = Vec::new();
    let mut bad = |field: &str, msg: String| violations.push(format!("{label}.{field}: {msg}"));

    let field = rational_rows(&record.integral_basis).and_then(|basis| {
        NumberField::new(
            &record.label,
            poly_of(&record.poly),
            record.discriminant.0.clone(),
            (record.signature[0], record.signature[1]),
            basis,
            precision,
        )
    });
    let field = match field {
        Ok(f) => Some(f),
        Err(e) => {
            bad(field_name(&e), e.to_string());
            None
        }
    };

    let mut units = None;
    let mut reg = None;
    if let Some(k) = &field {
        let parsed = rational_rows(&record.fundamental_units)
            .and_then(|rows| rows.into_iter().map(|r| k.element(r)).collect::<Result<Vec<_>>>())
            .and_then(|us| UnitSystem::new(k, us, record.torsion_order));
        match parsed {
            Ok(u) => {
                match regulator(&u) {
                    Ok(r) => {
                        if let Some(hint) = &record.regulator_hint {
                            match parse_decimal(hint) {
                                Some(h) => {
                                    let diff = r.sub(&Real::from_rational(&h, k.working_precision())).abs();
                                    if diff.lower_f64() > HINT_TOLERANCE {
                                        bad("regulator_hint", format!("computed {} but hint is {hint}", r.to_decimal(25)));
                                    }
                                }
                                None => bad("regulator_hint", format!("not a decimal: {hint:?}")),
                            }
                        }
                        reg = Some(r);
                    }
                    Err(e) => bad("fundamental_units", e.to_string()),
                }
                units = Some(u);
            }
            Err(e) => {
                let name = if matches!(&e, Error::BadUnit(m) if m.contains("torsion")) { "torsion_order" } else { "fundamental_units" };
                bad(name, e.to_string());
            }
        }
    }

    let mut nodes = Vec::new();
    for s in &record.subfields {
        if s.label == record.label {
            bad("subfields", "the field itself is listed as a subfield".into());
            continue;
        }
        let d = s.poly.len().saturating_sub(1);
        nodes.push(SubfieldNode::new(&s.label, d, (s.signature[0], s.signature[1]), s.discriminant.0.abs()));
    }
    if !nodes.iter().any(|n| n.label == "Q") {
        nodes.push(SubfieldNode::rationals());
    }
    let top_degree = record.poly.len().saturating_sub(1);
    nodes.push(SubfieldNode::new(
        &record.label,
        top_degree,
        (record.signature[0], record.signature[1]),
        record.discriminant.0.abs(),
    ));
    let edges: Vec<(String, String)> = record.lattice_edges.iter().map(|[a, b]| (a.clone(), b.clone())).collect();
    let lattice = match SubfieldLattice::new(nodes, &edges) {
        Ok(l) => Some(l),
        Err(e) => {
            bad("lattice_edges", e.to_string());
            None
        }
    };

    let mut extensions = Vec::new();
    if let Some(k) = &field {
        for (i, ext) in record.extensions.iter().flatten().enumerate() {
            let name = format!("extensions[{i}]");
            let built = (|| -> Result<ParsedExtension> {
                let sub = if ext.base_label == "Q" {
                    SubfieldRecord {
                        label: "Q".into(),
                        poly: vec![Integer(0.into()), Integer(1.into())],
                        discriminant: Integer(1.into()),
                        signature: [1, 0],
                    }
                } else {
                    record
                        .subfields
                        .iter()
                        .find(|s| s.label == ext.base_label)
                        .cloned()
                        .ok_or_else(|| Error::UnknownNode(ext.base_label.clone()))?
                };
                let base = subfield_field(&sub, precision)?;
                let extension = RelativeExtension::new(&base, k, rational_rows(&ext.embedding_matrix)?)?;
                let relative_units =
                    rational_rows(&ext.relative_units)?.into_iter().map(|r| k.element(r)).collect::<Result<Vec<_>>>()?;
                relative_regulator(&extension, &relative_units)?;
                Ok(ParsedExtension { extension, relative_units })
            })();
            match built {
                Ok(p) => extensions.push(p),
                Err(e) => bad(&name, e.to_string()),
            }
        }
    }

    match (field, lattice, units, reg) {
        (Some(field), Some(lattice), Some(units), Some(regulator)) if violations.is_empty() => {
            Ok(ParsedField { record: record.clone(), field, lattice, units, regulator, extensions })
        }
        _ => Err(Error::Invalid { label, violations }),
    }
}

/// Exact value of a plain decimal string such as `-0.2052`.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}0").parse().ok()?;
    let scale = num_traits::pow(BigInt::from(10), frac.len() + 1);
    let q = BigRational::new(digits, scale);
    Some(if neg { -q } else { q })
}

pub fn read_record(path: &Path) -> Result<FieldRecord> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

/// Loads a directory of records, or a single record file. Every violation in
/// every record is collected before failing.
pub fn load_corpus(path: &Path, precision: usize) -> Result<Vec<ParsedField>> {
    let files = if path.is_dir() {
        let mut v: Vec<_> = std::fs::read_dir(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        v.sort();
        v
    } else {
        vec![path.to_path_buf()]
    };
    let mut parsed = Vec::new();
    let mut violations = Vec::new();
    for f in &files {
        match read_record(f).and_then(|r| parse_field(&r, precision)) {
            Ok(p) => {
                if parsed.iter().any(|q: &ParsedField| q.label() == p.label()) {
                    violations.push(format!("{}.label: duplicate label", p.label()));
                } else {
                    parsed.push(p);
                }
            }
            Err(Error::Invalid { violations: v, .. }) => violations.extend(v),
            Err(e) => violations.push(e.to_string()),
        }
    }
    if !violations.is_empty() {
        return Err(Error::Invalid { label: path.display().to_string(), violations });
    }
    parsed.sort_by(|a, b| a.label().cmp(b.label()));
    Ok(parsed)
}

pub fn find<'a>(corpus: &'a [ParsedField], label: &str) -> Result<&'a ParsedField> {
    corpus.iter().find(|p| p.label() == label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
}

/// Significant digits of decimal values in reports.
pub const REPORT_DIGITS: usize = 25;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub theorem: String,
    pub quantity: Quantity,
    pub hypotheses: Hypotheses,
    pub bound: Option<String>,
    pub value: String,
    pub margin: Option<String>,
    /// Radius of the margin ball.
    pub error: Option<String>,
    pub verdict: Verdict,
    pub note: Option<String>,
}

impl BoundEntry {
    pub fn from_report(r: &BoundReport) -> Self {
        BoundEntry {
            theorem: r.theorem.as_str().to_string(),
            quantity: r.quantity,
            hypotheses: r.hypotheses.clone(),
            bound: r.bound.as_ref().map(|b| b.to_decimal(REPORT_DIGITS)),
            value: r.value.to_decimal(REPORT_DIGITS),
            margin: r.margin.as_ref().map(|m| m.to_decimal(REPORT_DIGITS)),
            error: r.margin.as_ref().map(Real::radius_decimal),
            verdict: r.verdict,
            note: r.note.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Passed,
    Failed,
    /// The check could not decide, e.g. a search box held too few products.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl CheckEntry {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        let status = if passed { CheckStatus::Passed } else { CheckStatus::Failed };
        CheckEntry { name: name.to_string(), status, detail }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeEntry {
    pub label: String,
    pub degree: usize,
    pub lambda: usize,
    /// Exact rational `p/q`.
    pub aleph: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldReport {
    pub label: String,
    pub degree: usize,
    pub discriminant: String,
    pub signature: [usize; 2],
    pub unit_rank: usize,
    pub rho: usize,
    pub cm: bool,
    pub kstar: String,
    pub nodes: Vec<NodeEntry>,
    pub regulator: String,
    pub regulator_error: String,
    pub bounds: Vec<BoundEntry>,
    pub height_checks: Vec<CheckEntry>,
    pub identity_checks: Vec<CheckEntry>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub verified: usize,
    pub vacuous: usize,
    pub hypothesis_failed: usize,
    pub failed: usize,
    pub checks_passed: usize,
    pub checks_failed: usize,
    pub checks_inconclusive: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub artifact: String,
    pub version: String,
    pub precision: usize,
    pub seed: u64,
    pub unit_search_box: i64,
    pub fields: Vec<FieldReport>,
    pub summary: Summary,
}

impl ReportDocument {
    /// Any bound or check failed.
    pub fn has_failures(&self) -> bool {
        self.summary.failed > 0 || self.summary.checks_failed > 0
    }
}

/// Settings for the randomized checks in a report.
#[derive(Clone, Copy, Debug)]
pub struct ReportOptions {
    pub seed: u64,
    pub unit_search_box: i64,
    pub random_elements: usize,
    pub random_vectors: usize,
    /// Identity checks on random vectors run up to this degree.
    pub max_vector_degree: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { seed: 0, unit_search_box: 5, random_elements: 3, random_vectors: 2, max_vector_degree: 4 }
    }
}

/// Per-field generator seed, independent of corpus order.
pub fn field_seed(seed: u64, label: &str) -> u64 {
    label.bytes().fold(seed ^ 0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

fn height_checks(p: &ParsedField, rng: &mut ChaCha8Rng, opts: &ReportOptions) -> Result<Vec<CheckEntry>> {
    let k = &p.field;
    let mut out = Vec::new();
    let mut elems = vec![k.generator()];
    elems.extend((0..opts.random_elements).map(|_| k.random_element(rng, 9, 4)).filter(|e| !e.is_zero()));
    let mut worst = 0.0f64;
    let mut ok = true;
    for e in &elems {
        let diff = weil_height_places(e)?.value.sub(&weil_height_mahler(e)?.value).abs();
        worst = worst.max(diff.upper_f64());
        ok &= diff.upper_f64() <= 1e-10;
    }
    out.push(CheckEntry::new("weil-dual-method", ok, format!("{} elements, max |difference| <= {worst:.3e}", elems.len())));
    let m = check_power_vector_height(&k.generator(), 3)?;
    out.push(CheckEntry::new("power-vector-height", m.holds, format!("margin {}", m.margin.to_decimal(REPORT_DIGITS))));
    Ok(out)
}

fn identity_checks(p: &ParsedField, rng: &mut ChaCha8Rng, opts: &ReportOptions) -> Result<Vec<CheckEntry>> {
    let k = &p.field;
    let mut out = Vec::new();
    if k.degree() <= opts.max_vector_degree {
        let mut ok = true;
        let mut scale_ok = true;
        let mut detail = Vec::new();
        for _ in 0..opts.random_vectors {
            let v = random_independent_vector(k, rng);
            let r = verify_fk_identity(&v)?;
            ok &= r.holds();
            detail.push(format!("{} = {}^2*{}", r.f_k, r.index, r.discriminant));
            let alpha = loop {
                let a = k.random_element(rng, 9, 4);
                if !a.is_zero() {
                    break a;
                }
            };
            let w = v.scale(&alpha);
            scale_ok &= f_k(&w)? == r.f_k && lattice_index(&w)? == r.index;
        }
        out.push(CheckEntry::new("fk-index-identity", ok, detail.join("; ")));
        out.push(CheckEntry::new("fk-scaling-invariance", scale_ok, format!("{} vectors", opts.random_vectors)));
    }
    for e in &p.extensions {
        let ext = &e.extension;
        let base = ext.base().label().to_string();
        let values = ext
            .all_choices()
            .into_iter()
            .map(|c| relative_regulator(&ext.with_chosen(c)?, &e.relative_units))
            .collect::<Result<Vec<_>>>()?;
        let spread = values.iter().map(|v| v.sub(&values[0]).abs().upper_f64()).fold(0.0, f64::max);
        let mut ok = spread <= 1e-20;
        let mut detail = format!("over {base}: {} choices, value {}", values.len(), values[0].to_decimal(REPORT_DIGITS));
        if ext.base().degree() == 1 {
            let d = values[0].sub(&p.regulator).abs().upper_f64();
            ok &= d <= 1e-20;
            let _ = write!(detail, ", equals Reg");
        }
        out.push(CheckEntry::new(&format!("relative-regulator/{base}"), ok, detail));
    }
    let s = search_small_units(&p.units, opts.unit_search_box)?;
    let entry = match &s.margin {
        Some(m) => CheckEntry::new(
            "unit-search",
            m.holds,
            format!("box {}: product {} <= {}", opts.unit_search_box, m.lhs.to_decimal(REPORT_DIGITS), m.rhs.to_decimal(REPORT_DIGITS)),
        ),
        None => CheckEntry {
            name: "unit-search".into(),
            status: CheckStatus::Inconclusive,
            detail: format!("box {} holds fewer than {} independent products", opts.unit_search_box, p.units.rank()),
        },
    };
    out.push(entry);
    Ok(out)
}

pub fn field_report(p: &ParsedField, opts: &ReportOptions) -> Result<FieldReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(field_seed(opts.seed, p.label()));
    let k = &p.field;
    let lat = &p.lattice;
    let bounds = verify_field(k, lat, &p.units)?.iter().map(BoundEntry::from_report).collect();
    let nodes = lat
        .nodes()
        .iter()
        .map(|n| {
            Ok(NodeEntry {
                label: n.label.clone(),
                degree: n.degree,
                lambda: lambda(lat, &n.label)?,
                aleph: crate::towers::aleph(lat, &n.label)?.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FieldReport {
        label: p.label().to_string(),
        degree: k.degree(),
        discriminant: k.discriminant().to_string(),
        signature: [k.signature().0, k.signature().1],
        unit_rank: k.unit_rank(),
        rho: rho(lat),
        cm: rho(lat) == k.unit_rank(),
        kstar: maximal_kstar(lat)?.label,
        nodes,
        regulator: p.regulator.to_decimal(REPORT_DIGITS),
        regulator_error: p.regulator.radius_decimal(),
        bounds,
        height_checks: height_checks(p, &mut rng, opts)?,
        identity_checks: identity_checks(p, &mut rng, opts)?,
    })
}

/// Builds the report for a corpus, one worker thread per field; the output
/// order follows the corpus.
pub fn build_report(corpus: &[ParsedField], precision: usize, opts: &ReportOptions) -> Result<ReportDocument> {
    let fields: Vec<Result<FieldReport>> = std::thread::scope(|s| {
        let handles: Vec<_> = corpus.iter().map(|p| s.spawn(move || field_report(p, opts))).collect();
        handles.into_iter().map(|h| h.join().expect("report worker panicked")).collect()
    });
    let fields = fields.into_iter().collect::<Result<Vec<_>>>()?;
    let mut summary = Summary::default();
    for f in &fields {
        for b in &f.bounds {
            match b.verdict {
                Verdict::Verified => summary.verified += 1,
                Verdict::Vacuous => summary.vacuous += 1,
                Verdict::HypothesisFailed => summary.hypothesis_failed += 1,
                Verdict::Failed => summary.failed += 1,
            }
        }
        for c in f.height_checks.iter().chain(&f.identity_checks) {
            match c.status {
                CheckStatus::Passed => summary.checks_passed += 1,
                CheckStatus::Failed => summary.checks_failed += 1,
                CheckStatus::Inconclusive => summary.checks_inconclusive += 1,
            }
        }
    }
    Ok(ReportDocument {
        artifact: "nfreg".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        precision,
        seed: opts.seed,
        unit_search_box: opts.unit_search_box,
        fields,
        summary,
    })
}

/// Canonical JSON: keys sorted, two-space indentation, trailing newline.
pub fn to_json(doc: &ReportDocument) -> Result<String> {
    // serde_json's default map is ordered by key
    let value = serde_json::to_value(doc).map_err(|e| Error::Io(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(s: &str) -> Result<ReportDocument> {
    serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))
}

pub fn format_bound(b: &BoundEntry) -> String {
    let mut line = format!("  {:<20} {:<18}", b.theorem, b.verdict.as_str());
    if let Some(bound) = &b.bound {
        let _ = write!(line, " bound {bound}");
    }
    let _ = write!(line, " value {}", b.value);
    if let Some(m) = &b.margin {
        let _ = write!(line, " margin {m}");
    }
    if let Some(n) = &b.note {
        let _ = write!(line, " ({n})");
    }
    line
}

pub fn to_text(doc: &ReportDocument) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {} precision {} seed {} box {}", doc.artifact, doc.version, doc.precision, doc.seed, doc.unit_search_box);
    for f in &doc.fields {
        let _ = writeln!(
            s,
            "{}  degree {}  disc {}  signature ({}, {})  r {}  rho {}{}  k* {}",
            f.label,
            f.degree,
            f.discriminant,
            f.signature[0],
            f.signature[1],
            f.unit_rank,
            f.rho,
            if f.cm { " (CM)" } else { "" },
            f.kstar
        );
        let _ = writeln!(s, "  regulator {} +- {}", f.regulator, f.regulator_error);
        for b in &f.bounds {
            let _ = writeln!(s, "{}", format_bound(b));
        }
        for c in f.height_checks.iter().chain(&f.identity_checks) {
            let status = match c.status {
                CheckStatus::Passed => "passed",
                CheckStatus::Failed => "FAILED",
                CheckStatus::Inconclusive => "inconclusive",
            };
            let _ = writeln!(s, "  check {:<28} {:<12} {}", c.name, status, c.detail);
        }
    }
    let m = &doc.summary;
    let _ = writeln!(
        s,
        "summary: {} verified, {} vacuous, {} hypothesis-failed, {} failed; checks {} passed, {} failed, {} inconclusive",
        m.verified, m.vacuous, m.hypothesis_failed, m.failed, m.checks_passed, m.checks_failed, m.checks_inconclusive
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x2_2() -> FieldRecord {
        serde_json::from_str(
            r#"{"label":"x2-2","poly":[-2,0,1],"discriminant":8,"signature":[2,0],
                "integral_basis":[["1","0"],["0","1"]],"torsion_order":2,
                "fundamental_units":[["1","1"]],"regulator_hint":"0.8813735870195430252326093",
                "subfields":[{"label":"Q","poly":[0,1],"discriminant":1,"signature":[1,0]}],
                "lattice_edges":[["Q","x2-2"]]}"#,
        )
        .unwrap()
    }

    #[test]
    fn parses_a_clean_record() {
        let p = parse_field(&x2_2(), 128).unwrap();
        assert_eq!(p.field.degree(), 2);
        assert!((p.regulator.mid_f64() - 0.881373587).abs() < 1e-9);
    }

    #[test]
    fn collects_every_violation() {
        let mut r = x2_2();
        r.fundamental_units = vec![vec!["0".into(), "1".into()]];
        r.lattice_edges.push(["x2-2".into(), "Q".into()]);
        let Error::Invalid { violations, .. } = parse_field(&r, 128).unwrap_err() else { panic!() };
        assert_eq!(violations.len(), 2, "{violations:?}");
        assert!(violations[0].starts_with("x2-2.fundamental_units"));
        assert!(violations[1].starts_with("x2-2.lattice_edges"));
    }

    #[test]
    fn signature_mismatch_is_rejected() {
        let r: FieldRecord = serde_json::from_str(
            r#"{"label":"x3+x2-2x-1","poly":[-1,-2,1,1],"discriminant":49,"signature":[1,1],
                "integral_basis":[["1","0","0"],["0","1","0"],["0","0","1"]],"torsion_order":2,
                "fundamental_units":[["0","1","0"]],"subfields":[],"lattice_edges":[]}"#,
        )
        .unwrap();
        let Error::Invalid { violations, .. } = parse_field(&r, 128).unwrap_err() else { panic!() };
        assert!(violations[0].starts_with("x3+x2-2x-1.signature"), "{violations:?}");
    }

    #[test]
    fn wrong_hint_is_rejected() {
        let mut r = x2_2();
        r.regulator_hint = Some("0.88137358701954302523".into());
        assert!(parse_field(&r, 128).is_ok());
        r.regulator_hint = Some("1.7627471740390860504652".into());
        assert!(parse_field(&r, 128).is_err());
    }

    #[test]
    fn decimals_and_integers() {
        assert_eq!(parse_decimal("-0.25"), Some(BigRational::new((-1).into(), 4.into())));
        assert_eq!(parse_decimal("3"), Some(BigRational::from_integer(3.into())));
        assert_eq!(parse_decimal("1e5"), None);
        let i: Integer = serde_json::from_str("\"123456789012345678901234567890\"").unwrap();
        assert_eq!(serde_json::to_string(&i).unwrap(), "\"123456789012345678901234567890\"");
        let j: Integer = serde_json::from_str("-7").unwrap();
        assert_eq!(serde_json::to_string(&j).unwrap(), "-7");
    }

    #[test]
    fn report_round_trip() {
        let p = parse_field(&x2_2(), 128).unwrap();
        let doc = build_report(&[p], 128, &ReportOptions::default()).unwrap();
        assert!(!doc.has_failures());
        let json = to_json(&doc).unwrap();
        let back = from_json(&json).unwrap();
        assert_eq!(back, doc);
        assert_eq!(to_json(&back).unwrap(), json);
        assert!(to_text(&doc).contains("quadratic"));
    }
}
