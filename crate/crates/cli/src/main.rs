use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nfreg::bounds::{verify_field, TheoremId, Verdict};
use nfreg::heights::{arakelov_height, weil_height_mahler, weil_height_places, FieldVector};
use nfreg::ideal::verify_fk_identity;
use nfreg::io::{self, BoundEntry, ParsedField, ReportOptions};
use nfreg::towers::{aleph, lambda, maximal_kstar, rho};
use nfreg::units::parse_rational;
use nfreg::{Error, Result};

#[derive(Parser)]
#[command(name = "nfreg", version, about = "Heights, regulators and regulator lower bounds for number fields")]
struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, env = "NFREG_PRECISION", default_value_t = 128)]
    precision: usize,

    /// Directory of field records, or a single record file.
    #[arg(long, global = true, env = "NFREG_CORPUS", default_value = "data/corpus")]
    corpus: PathBuf,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Exponent box for the small unit search.
    #[arg(long = "box", global = true, default_value_t = 5)]
    unit_box: i64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Absolute logarithmic Weil height of an element given by power-basis
    /// coordinates, e.g. "1,1".
    Height { label: String, element: String },
    /// Arakelov height of a vector, rows separated by ';', e.g. "1,0;0,1".
    Arakelov { label: String, vector: String },
    /// Regulator of the field.
    Regulator { label: String },
    /// Exact f_k of a vector with its index decomposition.
    Fk { label: String, vector: String },
    /// Tower lengths, weights, rho and k* of the subfield lattice.
    Tower { label: String },
    /// Evaluate every applicable regulator lower bound.
    Verify {
        label: Option<String>,
        #[arg(long, conflicts_with = "label")]
        all: bool,
        /// Only report this bound, e.g. rho-bound, quadratic.
        #[arg(long)]
        theorem: Option<String>,
    },
    /// Write a full report document.
    Report {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn parse_coords(s: &str) -> Result<Vec<num_rational::BigRational>> {
    s.split(',').map(parse_rational).collect()
}

fn parse_vector(field: &nfreg::nf::Field, s: &str) -> Result<FieldVector> {
    let rows = s.split(';').map(parse_coords).collect::<Result<Vec<_>>>()?;
    FieldVector::from_coords(field, rows)
}

fn load_one(cli: &Cli, label: &str) -> Result<ParsedField> {
    let corpus = io::load_corpus(&cli.corpus, cli.precision)?;
    let p = io::find(&corpus, label)?;
    Ok(p.clone())
}

/// Outcome of a command: `true` when every check held.
fn run(cli: &Cli) -> Result<bool> {
    let digits = io::REPORT_DIGITS;
    match &cli.command {
        Command::Height { label, element } => {
            let p = load_one(cli, label)?;
            let e = p.field.element(parse_coords(element)?)?;
            let h = weil_height_places(&e)?.value;
            let m = weil_height_mahler(&e)?.value;
            println!("h = {} +- {}", h.to_decimal(digits), h.radius_decimal());
            println!("mahler route = {} +- {}", m.to_decimal(digits), m.radius_decimal());
            Ok(h.sub(&m).abs().upper_f64() <= 1e-10)
        }
        Command::Arakelov { label, vector } => {
            let p = load_one(cli, label)?;
            let h = arakelov_height(&parse_vector(&p.field, vector)?)?.value;
            println!("log H = {} +- {}", h.to_decimal(digits), h.radius_decimal());
            Ok(true)
        }
        Command::Regulator { label } => {
            let p = load_one(cli, label)?;
            println!("Reg = {} +- {}", p.regulator.to_decimal(digits), p.regulator.radius_decimal());
            Ok(true)
        }
        Command::Fk { label, vector } => {
            let p = load_one(cli, label)?;
            let r = verify_fk_identity(&parse_vector(&p.field, vector)?)?;
            println!("f_k = {} = {}^2 * {}", r.f_k, r.index, r.discriminant);
            println!("identity {}", if r.identity_holds { "holds" } else { "FAILS" });
            println!(
                "log f_k = {} <= 2d log H = {} (margin {})",
                r.hadamard.lhs.to_decimal(digits),
                r.hadamard.rhs.to_decimal(digits),
                r.hadamard.margin.to_decimal(digits)
            );
            Ok(r.holds())
        }
        Command::Tower { label } => {
            let p = load_one(cli, label)?;
            let lat = &p.lattice;
            for n in lat.nodes() {
                println!(
                    "{:<28} degree {:<3} lambda {} aleph {}",
                    n.label,
                    n.degree,
                    lambda(lat, &n.label)?,
                    aleph(lat, &n.label)?
                );
            }
            let r = rho(lat);
            let cm = r == p.field.unit_rank();
            println!("rho = {r}{}", if cm { " (CM)" } else { "" });
            println!("k* = {}", maximal_kstar(lat)?.label);
            Ok(true)
        }
        Command::Verify { label, all, theorem } => {
            let filter = match theorem {
                Some(t) => Some(TheoremId::parse(t).ok_or_else(|| Error::Malformed(format!("unknown theorem {t}")))?),
                None => None,
            };
            let corpus = io::load_corpus(&cli.corpus, cli.precision)?;
            let selected: Vec<&ParsedField> = match (label, all) {
                (Some(l), false) => vec![io::find(&corpus, l)?],
                (None, true) => corpus.iter().collect(),
                _ => return Err(Error::Malformed("give a field label or --all".into())),
            };
            let mut ok = true;
            for p in selected {
                println!("{}", p.label());
                for r in verify_field(&p.field, &p.lattice, &p.units)? {
                    if filter.is_some_and(|t| t != r.theorem) {
                        continue;
                    }
                    ok &= r.verdict != Verdict::Failed;
                    println!("{}", io::format_bound(&BoundEntry::from_report(&r)));
                }
            }
            Ok(ok)
        }
        Command::Report { format, out } => {
            let corpus = io::load_corpus(&cli.corpus, cli.precision)?;
            let opts = ReportOptions { seed: cli.seed, unit_search_box: cli.unit_box, ..ReportOptions::default() };
            let doc = io::build_report(&corpus, cli.precision, &opts)?;
            let text = match format {
                Format::Json => io::to_json(&doc)?,
                Format::Text => io::to_text(&doc),
            };
            match out {
                Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
                None => print!("{text}"),
            }
            Ok(!doc.has_failures())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.precision < 16 {
        eprintln!("error: precision must be at least 16 bits");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Error::Invalid { label, violations }) => {
            eprintln!("error: invalid data in {label}");
            for v in violations {
                eprintln!("  {v}");
            }
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
