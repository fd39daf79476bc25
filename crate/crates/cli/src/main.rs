//! `nodaltorus`: exact spectra and nodal sequences of the Conway–Sloane
//! isospectral flat tori.
//!
//! Exit codes: 0 success, 1 invariant or certificate failure, 2 invalid
//! input, 3 `compare` found no difference below the cutoff.

mod pretty;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nodaltorus::oracle::{validate_formula_with, GridPolicy, NodalFormula};
use nodaltorus::spectral::{build_spectrum, compare_sequences, cutoff_for_lines};
use nodaltorus::theorem::{
    check_isometric_degenerate, forms_with_witnesses, verify_theorem_with, GoldenLists, Verdict,
    VerifyOptions, GOLDEN_MINUS_ONLY, GOLDEN_PLUS_ONLY,
};
use nodaltorus::{scalar, Error, ParamTuple, Rational, Sign};
use serde::Serialize;
use serde_json::json;

const THREADS_VAR: &str = "NODALTORUS_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "nodaltorus",
    version,
    about = "Exact spectra and nodal sequences of the Conway-Sloane flat 4-tori"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectrum of T+ or T- with representing vectors and nodal counts
    Spectrum(SpectrumArgs),
    /// First eigenvalue where the nodal sequences of T+ and T- differ
    Compare(CompareArgs),
    /// Symbolic check that the nodal sequences differ for distinct parameters
    VerifyTheorem(VerifyArgs),
    /// Cross-check the closed-form nodal count against two independent counters
    ValidateNodal(ValidateArgs),
    /// Dump the eigenvalue forms E_m+ and E_m- attained on |q|_1 = m
    ESets(ESetsArgs),
    /// Confirm that tuples with an equal pair give identical nodal sequences
    IsometricCheck(IsometricArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    /// `+` or `-` (also `plus`, `minus`)
    #[arg(long, allow_hyphen_values = true)]
    sign: String,
    /// Four positive rationals, e.g. `1,2,3,4` or `1/2,1,3/2,2`
    #[arg(long, allow_hyphen_values = true)]
    params: String,
    /// Largest eigenvalue of qᵀQq to include (the 4π² factor is implied)
    #[arg(
        long,
        allow_hyphen_values = true,
        conflicts_with = "min_lines",
        required_unless_present = "min_lines"
    )]
    cutoff: Option<String>,
    /// Choose the cutoff so that at least this many distinct eigenvalues appear
    #[arg(long)]
    min_lines: Option<usize>,
    /// Add a display-only decimal column 4π²·eigenvalue
    #[arg(long)]
    approx: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[arg(long, allow_hyphen_values = true)]
    params: String,
    #[arg(long, allow_hyphen_values = true)]
    cutoff: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    max_m: u64,
    /// Seed for the random evaluation-consistency sweep
    #[arg(long)]
    seed: Option<u64>,
    /// Replacement golden list for E_4+ \ E_4-
    #[arg(long)]
    golden_plus: Option<PathBuf>,
    /// Replacement golden list for E_4- \ E_4+
    #[arg(long)]
    golden_minus: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Bug {
    DropPlusOne,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long)]
    max_m: u64,
    /// Replace the closed-form count with a deliberately wrong one
    #[arg(long, value_enum)]
    inject_bug: Option<Bug>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct ESetsArgs {
    #[arg(long)]
    m: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct IsometricArgs {
    #[arg(long, allow_hyphen_values = true)]
    params: String,
    #[arg(
        long,
        allow_hyphen_values = true,
        conflicts_with = "min_lines",
        required_unless_present = "min_lines"
    )]
    cutoff: Option<String>,
    #[arg(long)]
    min_lines: Option<usize>,
    #[command(flatten)]
    out: OutputArgs,
}

/// Failure of a command, mapped onto the exit-code contract.
enum Failure {
    Lib(Error),
    Io(io::Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<u8, Failure>;

fn parse_cutoff(s: &str) -> Result<Rational, Error> {
    let c = scalar::parse_rational(s)?;
    if c <= Rational::from_integer(0.into()) {
        return Err(Error::NonPositiveCutoff(s.to_string()));
    }
    Ok(c)
}

fn open_output(out: &OutputArgs) -> io::Result<Box<dyn Write>> {
    Ok(match &out.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)
}

fn cmd_spectrum(args: &SpectrumArgs) -> Outcome {
    let sign: Sign = args.sign.parse()?;
    let p: ParamTuple = args.params.parse()?;
    let cutoff = match (&args.cutoff, args.min_lines) {
        (Some(c), _) => parse_cutoff(c)?,
        (None, Some(n)) => cutoff_for_lines(sign, &p, n)?,
        (None, None) => unreachable!("clap requires one of them"),
    };
    let seq = build_spectrum(sign, &p, &cutoff)?;
    seq.check_invariants()?;
    let mut w = open_output(&args.out)?;
    match args.out.format {
        Format::Json => {
            let mut value = serde_json::to_value(&seq).expect("serializable");
            if args.approx {
                for (line, v) in seq
                    .lines
                    .iter()
                    .zip(value["lines"].as_array_mut().expect("array"))
                {
                    v["laplace_approx"] = json!(pretty::approx_string(&line.eigenvalue));
                }
            }
            write_json(&mut w, &value)?;
        }
        Format::Csv => seq.write_csv(&mut w, args.approx)?,
        Format::Pretty => pretty::spectrum(&mut w, &seq, args.approx)?,
    }
    w.flush()?;
    Ok(0)
}

#[derive(Serialize)]
struct CompareReport<'a> {
    params: &'a ParamTuple,
    #[serde(with = "scalar::serde_rational")]
    cutoff: Rational,
    lines_compared: usize,
    distinguished: bool,
    difference: Option<nodaltorus::spectral::NodalDifference>,
}

fn cmd_compare(args: &CompareArgs) -> Outcome {
    let p: ParamTuple = args.params.parse()?;
    let cutoff = parse_cutoff(&args.cutoff)?;
    let (plus, minus) = rayon::join(
        || build_spectrum(Sign::Plus, &p, &cutoff),
        || build_spectrum(Sign::Minus, &p, &cutoff),
    );
    let (plus, minus) = (plus?, minus?);
    let difference = compare_sequences(&plus, &minus)?;
    let report = CompareReport {
        params: &p,
        cutoff,
        lines_compared: plus.lines.len(),
        distinguished: difference.is_some(),
        difference,
    };
    let mut w = open_output(&args.out)?;
    match args.out.format {
        Format::Json => write_json(&mut w, &report)?,
        Format::Csv => pretty::compare_csv(&mut w, report.difference.as_ref())?,
        Format::Pretty => pretty::compare(
            &mut w,
            &p,
            &report.cutoff,
            report.lines_compared,
            report.difference.as_ref(),
        )?,
    }
    w.flush()?;
    Ok(if report.distinguished { 0 } else { 3 })
}

fn read_golden(path: &Option<PathBuf>, shipped: &'static str) -> Result<String, Failure> {
    match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Failure::Input(format!("cannot read golden list {}: {e}", p.display()))),
        None => Ok(shipped.to_string()),
    }
}

fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let plus = read_golden(&args.golden_plus, GOLDEN_PLUS_ONLY)?;
    let minus = read_golden(&args.golden_minus, GOLDEN_MINUS_ONLY)?;
    let opts = VerifyOptions {
        golden: GoldenLists::parse(&plus, &minus)?,
        seed: args.seed,
        ..VerifyOptions::default()
    };
    let report = verify_theorem_with(args.max_m, &opts)?;
    let mut w = open_output(&args.out)?;
    match args.out.format {
        Format::Json => write_json(&mut w, &report)?,
        Format::Csv => pretty::theorem_csv(&mut w, &report)?,
        Format::Pretty => pretty::theorem(&mut w, &report)?,
    }
    w.flush()?;
    Ok(match report.verdict {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
    })
}

fn cmd_validate(args: &ValidateArgs) -> Outcome {
    let formula = match args.inject_bug {
        Some(Bug::DropPlusOne) => NodalFormula::DropPlusOne,
        None => NodalFormula::Closed,
    };
    let report = validate_formula_with(args.max_m, &GridPolicy::default(), formula)?;
    let mut w = open_output(&args.out)?;
    match args.out.format {
        Format::Json => write_json(&mut w, &report)?,
        Format::Csv => report.write_csv(&mut w)?,
        Format::Pretty => pretty::validation(&mut w, &report)?,
    }
    w.flush()?;
    Ok(if report.passed() { 0 } else { 1 })
}

#[derive(Serialize)]
struct ESetEntry {
    form: String,
    factored: String,
    witnesses: usize,
    in_other: bool,
}

#[derive(Serialize)]
struct ESetsReport {
    m: u64,
    equal: bool,
    plus: Vec<ESetEntry>,
    minus: Vec<ESetEntry>,
}

fn cmd_e_sets(args: &ESetsArgs) -> Outcome {
    let (plus, minus) = rayon::join(
        || forms_with_witnesses(Sign::Plus, args.m),
        || forms_with_witnesses(Sign::Minus, args.m),
    );
    let (plus, minus) = (plus?, minus?);
    let entries = |own: &std::collections::BTreeMap<_, Vec<_>>,
                   other: &std::collections::BTreeMap<_, _>| {
        own.iter()
            .map(|(f, qs): (&nodaltorus::LinearForm, &Vec<_>)| ESetEntry {
                form: f.to_string(),
                factored: pretty::form(f),
                witnesses: qs.len(),
                in_other: other.contains_key(f),
            })
            .collect::<Vec<_>>()
    };
    let report = ESetsReport {
        m: args.m,
        equal: plus.keys().eq(minus.keys()),
        plus: entries(&plus, &minus),
        minus: entries(&minus, &plus),
    };
    let mut w = open_output(&args.out)?;
    match args.out.format {
        Format::Json => write_json(&mut w, &report)?,
        Format::Csv => {
            writeln!(w, "sign,form,witnesses,in_other")?;
            for (sign, list) in [("+", &report.plus), ("-", &report.minus)] {
                for e in list {
                    writeln!(w, "{sign},{},{},{}", e.form, e.witnesses, e.in_other)?;
                }
            }
        }
        Format::Pretty => {
            writeln!(
                w,
                "m = {}: |E+| = {}, |E-| = {}, equal = {}",
                report.m,
                report.plus.len(),
                report.minus.len(),
                report.equal
            )?;
            for (sign, list) in [("+", &report.plus), ("-", &report.minus)] {
                writeln!(w, "only in E{sign}:")?;
                for e in list.iter().filter(|e| !e.in_other) {
                    writeln!(w, "  {}", e.factored)?;
                }
            }
        }
    }
    w.flush()?;
    Ok(0)
}

fn cmd_isometric(args: &IsometricArgs) -> Outcome {
    let p: ParamTuple = args.params.parse()?;
    let cutoff = match (&args.cutoff, args.min_lines) {
        (Some(c), _) => parse_cutoff(c)?,
        (None, Some(n)) => cutoff_for_lines(Sign::Plus, &p, n)?,
        (None, None) => unreachable!("clap requires one of them"),
    };
    let report = check_isometric_degenerate(&p, &cutoff)?;
    let mut w = open_output(&args.out)?;
    match args.out.format {
        Format::Json => write_json(&mut w, &report)?,
        Format::Csv => {
            writeln!(w, "params,cutoff,lines_compared,consistent")?;
            writeln!(
                w,
                "\"{}\",{},{},{}",
                p, report.cutoff, report.lines_compared, report.consistent
            )?;
        }
        Format::Pretty => pretty::compare(
            &mut w,
            &p,
            &report.cutoff,
            report.lines_compared,
            report.difference.as_ref(),
        )?,
    }
    w.flush()?;
    Ok(if report.consistent { 0 } else { 1 })
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::Input(format!(
            "{THREADS_VAR} must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Input(format!("cannot configure thread pool: {e}")))
}

fn run(cli: &Cli) -> Outcome {
    configure_threads()?;
    match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Compare(a) => cmd_compare(a),
        Command::VerifyTheorem(a) => cmd_verify(a),
        Command::ValidateNodal(a) => cmd_validate(a),
        Command::ESets(a) => cmd_e_sets(a),
        Command::IsometricCheck(a) => cmd_isometric(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_invalid_input() { 2 } else { 1 })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
