//! The `sni` command line.
//!
//! Exit status: 0 success, 1 verification or golden-diff failure, 2 invalid
//! arguments or parameters, 3 malformed input files, 4 a receiver could not
//! decode.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::air::{
    build_air, check_adjacent_independence_over, check_span_exclusion_over, AirJson, AirMatrix, Orientation,
    TEST_FIELDS,
};
use crate::codec::{
    Broadcast, BroadcastFile, DecodeTrace, IndexCode, MessageFile, MessageVector, PaddedScalarCode, PartitionedCode,
    SchemeKind, SideInfo, WindowCode,
};
use crate::error::Error;
use crate::galois::PrimeField;
use crate::harness::{
    apply_errata, diff_tables, read_csv, reproduce_full_rate_table, reproduce_interval_table, reproduce_table1,
    verify_scheme, write_csv, Erratum, TableRow, VerificationReport, FULL_RATE_CELLS,
};
use crate::suicp::{serialize_rate, Rate, SniProblem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SCHEMA: i32 = 3;
pub const EXIT_UNDECODABLE: i32 = 4;

const MAX_Q: u32 = 97;

#[derive(Debug, Parser)]
#[command(
    name = "sni",
    version,
    about = "AIR matrices and index codes for symmetric neighbouring interference"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    Partitioned,
    ScalarPadded,
    ScalarDu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Table {
    /// Partition encoding for U ≤ D ≤ Dmax
    Partition,
    /// D_l / U_l intervals
    Intervals,
    /// Minimum vector rate on the full-rate boundary cells
    FullRate,
}

#[derive(Debug, clap::Args)]
pub struct ProblemArgs {
    /// Number of messages
    #[arg(short = 'K', long = "K")]
    pub messages: usize,
    /// Interfering messages after the wanted one
    #[arg(short = 'D', long = "D")]
    pub after: usize,
    /// Interfering messages before the wanted one
    #[arg(short = 'U', long = "U")]
    pub before: usize,
}

impl ProblemArgs {
    fn problem(&self) -> Result<SniProblem, Error> {
        SniProblem::new(self.messages, self.after, self.before)
    }
}

#[derive(Debug, clap::Args)]
pub struct CodeArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_enum, default_value = "partitioned")]
    pub scheme: Scheme,
    /// Override a (partitioned: rate numerator slack; padded: zero messages)
    #[arg(long)]
    pub a: Option<usize>,
    /// Override b (partitioned: dimension; padded: extra columns)
    #[arg(long)]
    pub b: Option<usize>,
    /// Field modulus
    #[arg(long, default_value_t = 2)]
    pub q: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print an AIR matrix
    Air {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Field for --check (in addition to GF(2), GF(3))
        #[arg(long)]
        q: Option<u32>,
        /// Run both property checks
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum-rate feasible (a, b) and the partition scheme it induces
    Rate {
        #[command(flatten)]
        problem: ProblemArgs,
    },
    /// Lower bound and the min(l1, l2, D+U+1) upper bound
    Bounds {
        #[command(flatten)]
        problem: ProblemArgs,
    },
    /// Encode a message file into a broadcast file
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode a broadcast at one or all receivers
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        /// Broadcast file
        #[arg(long = "in")]
        input: PathBuf,
        /// Message file the receivers' side information is drawn from
        #[arg(long = "messages")]
        message_file: PathBuf,
        #[arg(long)]
        receiver: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce a reference table
    Table {
        #[arg(long = "K", default_value_t = 71)]
        messages: usize,
        #[arg(long = "Dmax", default_value_t = 10)]
        d_max: usize,
        #[arg(long, value_enum, default_value = "partition")]
        which: Table,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Compare against a CSV file; nonzero exit on any difference
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Errata CSV applied to the golden file before comparing
        #[arg(long)]
        errata: Option<PathBuf>,
    },
    /// Basis round-trip verification
    Verify {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, value_enum, default_value = "partitioned")]
        scheme: Scheme,
        /// Verify all three constructions
        #[arg(long)]
        all_schemes: bool,
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// JSON AIR matrix to use instead of the built one (partitioned only)
        #[arg(long)]
        air_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

struct CliError {
    code: i32,
    message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotDecodable | Error::SingularWindow { .. } => EXIT_UNDECODABLE,
            Error::Schema(_)
            | Error::DimensionMismatch(_)
            | Error::FieldMismatch { .. }
            | Error::ElementOutOfRange { .. }
            | Error::MissingSideInfo(_)
            | Error::UnexpectedSideInfo(_) => EXIT_SCHEMA,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn schema(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_SCHEMA,
        message: message.into(),
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(stdout, "{e}");
            } else {
                let _ = write!(stderr, "{e}");
            }
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn field(q: u32) -> CliResult<PrimeField> {
    if q > MAX_Q {
        return Err(usage(format!("q must be a prime no larger than {MAX_Q}")));
    }
    Ok(PrimeField::new(q)?)
}

fn emit(out: Option<&Path>, stdout: &mut dyn Write, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| usage(e.to_string())),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn read_json<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| schema(format!("{}: {e}", path.display())))
}

fn build_code(args: &CodeArgs) -> CliResult<Box<dyn IndexCode>> {
    let problem = args.problem.problem()?;
    let f = field(args.q)?;
    Ok(match args.scheme {
        Scheme::Partitioned => {
            let (a, b) = match (args.a, args.b) {
                (Some(a), Some(b)) => (a, b),
                (None, None) => {
                    let r = problem.min_rate_fraction();
                    (r.a, r.b)
                }
                _ => return Err(usage("--a and --b must be given together")),
            };
            Box::new(PartitionedCode::new(problem, problem.partition_params(a, b)?, f))
        }
        Scheme::ScalarPadded => {
            let (a, b) = match (args.a, args.b) {
                (Some(a), Some(b)) => (a, b),
                (None, None) => {
                    let p = problem.scalar_padding();
                    (p.a, p.b)
                }
                _ => return Err(usage("--a and --b must be given together")),
            };
            Box::new(PaddedScalarCode::new(problem, a, b, f)?)
        }
        Scheme::ScalarDu => {
            if args.a.is_some() || args.b.is_some() {
                return Err(usage("scalar_du takes no --a/--b"));
            }
            Box::new(WindowCode::new(problem, f)?)
        }
    })
}

fn execute(command: Command, stdout: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Air {
            m,
            n,
            q,
            check,
            format,
            out,
        } => cmd_air(m, n, q, check, format, out.as_deref(), stdout),
        Command::Rate { problem } => cmd_rate(&problem, stdout),
        Command::Bounds { problem } => {
            let report = problem.problem()?.bounds();
            emit(None, stdout, &to_json(&report))?;
            Ok(EXIT_OK)
        }
        Command::Encode { code, input, out } => cmd_encode(&code, &input, out.as_deref(), stdout),
        Command::Decode {
            code,
            input,
            message_file,
            receiver,
            out,
        } => cmd_decode(&code, &input, &message_file, receiver, out.as_deref(), stdout),
        Command::Table {
            messages,
            d_max,
            which,
            format,
            golden,
            errata,
        } => cmd_table(
            messages,
            d_max,
            which,
            format,
            golden.as_deref(),
            errata.as_deref(),
            stdout,
        ),
        Command::Verify {
            problem,
            scheme,
            all_schemes,
            q,
            air_file,
            format,
        } => cmd_verify(&problem, scheme, all_schemes, q, air_file.as_deref(), format, stdout),
    }
}

fn cmd_air(
    m: usize,
    n: usize,
    q: Option<u32>,
    check: bool,
    format: Format,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> CliResult<i32> {
    let air = build_air(m, n)?;
    let mut fields = TEST_FIELDS.to_vec();
    if let Some(q) = q {
        let f = field(q)?;
        if !fields.contains(&f) {
            fields.push(f);
        }
    }
    let checks = check.then(|| {
        (
            check_adjacent_independence_over(&air, true, &fields),
            check_span_exclusion_over(&air, Orientation::AboveIsEarlier, &fields),
        )
    });
    let text = match format {
        Format::Json => {
            let mut v = serde_json::to_value(air.to_json()).expect("serializable");
            if let Some((adj, span)) = checks {
                v["checks"] = json!({
                    "fields": fields.iter().map(|f| f.modulus()).collect::<Vec<_>>(),
                    "adjacent_independence": adj,
                    "span_exclusion": span,
                });
            }
            to_json(&v)
        }
        Format::Text | Format::Csv => {
            let mut s = if format == Format::Csv {
                air.to_text().replace(' ', ",")
            } else {
                air.to_text()
            };
            if let Some((adj, span)) = checks {
                let verdict = |ok: bool| if ok { "pass" } else { "FAIL" };
                s.push_str(&format!(
                    "# adjacent_independence: {}\n# span_exclusion: {}\n",
                    verdict(adj),
                    verdict(span)
                ));
            }
            s
        }
    };
    emit(out, stdout, &text)?;
    Ok(match checks {
        Some((true, true)) | None => EXIT_OK,
        Some(_) => EXIT_FAILED,
    })
}

#[derive(Serialize)]
struct RateOutput {
    problem: SniProblem,
    a_min: usize,
    b_min: usize,
    #[serde(serialize_with = "serialize_rate")]
    l1: Rate,
    c: usize,
    tau: usize,
    t: usize,
    gamma: usize,
    code_len: usize,
    air_size: String,
    instant: bool,
}

fn cmd_rate(args: &ProblemArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let problem = args.problem()?;
    let r = problem.min_rate_fraction();
    let s = problem.partition_params(r.a, r.b)?;
    let output = RateOutput {
        problem,
        a_min: r.a,
        b_min: r.b,
        l1: r.rate,
        c: s.c,
        tau: s.tau,
        t: s.partition_size,
        gamma: s.gamma,
        code_len: s.code_len,
        air_size: format!("{}x{}", s.partition_size, s.gamma),
        instant: s.is_instantly_decodable(),
    };
    emit(None, stdout, &to_json(&output))?;
    Ok(EXIT_OK)
}

fn scheme_kind(s: Scheme) -> SchemeKind {
    match s {
        Scheme::Partitioned => SchemeKind::Partitioned,
        Scheme::ScalarPadded => SchemeKind::ScalarPadded,
        Scheme::ScalarDu => SchemeKind::ScalarDu,
    }
}

fn cmd_encode(args: &CodeArgs, input: &Path, out: Option<&Path>, stdout: &mut dyn Write) -> CliResult<i32> {
    let code = build_code(args)?;
    let msg = MessageVector::from_file(&read_json::<MessageFile>(input)?)?;
    let bc = code.encode(&msg)?;
    emit(out, stdout, &to_json(&bc.to_file()))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ReceiverOutput {
    receiver: usize,
    symbols: Vec<u32>,
    traces: Vec<DecodeTrace>,
}

fn cmd_decode(
    args: &CodeArgs,
    input: &Path,
    messages: &Path,
    receiver: Option<usize>,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> CliResult<i32> {
    let code = build_code(args)?;
    let bc = Broadcast::from_file(&read_json::<BroadcastFile>(input)?)?;
    if bc.scheme() != scheme_kind(args.scheme) {
        return Err(schema(format!(
            "broadcast is {}, not {}",
            bc.scheme().name(),
            code.kind().name()
        )));
    }
    let msg = MessageVector::from_file(&read_json::<MessageFile>(messages)?)?;
    if msg.messages() != code.problem().messages() || msg.dim() != code.dim() || msg.field() != code.field() {
        return Err(schema("message file does not match the code parameters"));
    }
    let receivers: Vec<usize> = match receiver {
        Some(k) if k >= code.problem().messages() => return Err(usage(format!("receiver {k} out of range"))),
        Some(k) => vec![k],
        None => (0..code.problem().messages()).collect(),
    };
    let mut results = Vec::new();
    for k in receivers {
        let side = SideInfo::for_receiver(code.problem(), k, &msg);
        let decoded = code.decode_receiver(&bc, k, &side)?;
        let (symbols, traces) = decoded.into_iter().map(|(v, t)| (v.value(), t)).unzip();
        results.push(ReceiverOutput {
            receiver: k,
            symbols,
            traces,
        });
    }
    emit(
        out,
        stdout,
        &to_json(&json!({ "scheme": code.kind(), "receivers": results })),
    )?;
    Ok(EXIT_OK)
}

fn render<T: Serialize + std::fmt::Debug>(rows: &[T], format: Format) -> String {
    match format {
        Format::Csv => write_csv(rows),
        Format::Json => to_json(&rows),
        Format::Text => write_csv(rows).replace(',', "\t"),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_table(
    messages: usize,
    d_max: usize,
    which: Table,
    format: Format,
    golden_path: Option<&Path>,
    errata_path: Option<&Path>,
    stdout: &mut dyn Write,
) -> CliResult<i32> {
    if d_max + 1 >= messages {
        return Err(usage("Dmax must be smaller than K - 1"));
    }
    let read = |p: &Path| fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())));
    let (text, diffs) = match which {
        Table::Partition => {
            let rows = reproduce_table1(messages, d_max);
            let diffs = match golden_path {
                Some(p) => {
                    let expected: Vec<TableRow> = read_csv(&read(p)?).map_err(|e| schema(e.to_string()))?;
                    let errata: Vec<Erratum> = match errata_path {
                        Some(e) => read_csv(&read(e)?).map_err(|e| schema(e.to_string()))?,
                        None => Vec::new(),
                    };
                    let expected = apply_errata(&expected, &errata).map_err(schema)?;
                    Some(diff_tables(&expected, &rows))
                }
                None => None,
            };
            (render(&rows, format), diffs)
        }
        Table::Intervals => {
            let rows = reproduce_interval_table(messages, 5);
            let diffs = golden_path
                .map(|p| -> CliResult<Vec<String>> {
                    let expected: Vec<crate::harness::IntervalRow> =
                        read_csv(&read(p)?).map_err(|e| schema(e.to_string()))?;
                    Ok(if expected == rows {
                        vec![]
                    } else {
                        vec!["interval table differs".into()]
                    })
                })
                .transpose()?;
            (render(&rows, format), diffs)
        }
        Table::FullRate => {
            let rows = reproduce_full_rate_table(messages, &FULL_RATE_CELLS);
            let diffs = golden_path
                .map(|p| -> CliResult<Vec<String>> {
                    let mut expected: Vec<crate::harness::FullRateRow> =
                        read_csv(&read(p)?).map_err(|e| schema(e.to_string()))?;
                    for r in &mut expected {
                        r.rate = crate::harness::normalize_decimal(&r.rate);
                    }
                    Ok(expected
                        .iter()
                        .zip(&rows)
                        .filter(|(e, a)| e != a)
                        .map(|(e, a)| format!("expected {e:?}, got {a:?}"))
                        .chain((expected.len() != rows.len()).then(|| "row count differs".to_string()))
                        .collect())
                })
                .transpose()?;
            (render(&rows, format), diffs)
        }
    };
    match diffs {
        None => {
            emit(None, stdout, &text)?;
            Ok(EXIT_OK)
        }
        Some(d) if d.is_empty() => {
            emit(None, stdout, "golden: match\n")?;
            Ok(EXIT_OK)
        }
        Some(d) => {
            let mut s = String::new();
            for line in d {
                s.push_str(&line);
                s.push('\n');
            }
            emit(None, stdout, &s)?;
            Ok(EXIT_FAILED)
        }
    }
}

fn cmd_verify(
    args: &ProblemArgs,
    scheme: Scheme,
    all: bool,
    q: u32,
    air_file: Option<&Path>,
    format: Format,
    stdout: &mut dyn Write,
) -> CliResult<i32> {
    let problem = args.problem()?;
    let f = field(q)?;
    let schemes: Vec<Scheme> = if all {
        vec![Scheme::Partitioned, Scheme::ScalarPadded, Scheme::ScalarDu]
    } else {
        vec![scheme]
    };
    if air_file.is_some() && schemes != [Scheme::Partitioned] {
        return Err(usage("--air-file applies to the partitioned scheme only"));
    }
    let mut reports: Vec<VerificationReport> = Vec::new();
    for s in schemes {
        let code: Box<dyn IndexCode> = match s {
            Scheme::Partitioned => {
                let r = problem.min_rate_fraction();
                let mut params = problem.partition_params(r.a, r.b)?;
                if let Some(path) = air_file {
                    let air = AirMatrix::from_json(&read_json::<AirJson>(path)?)?;
                    params = params.with_air(air)?;
                }
                Box::new(PartitionedCode::new(problem, params, f))
            }
            Scheme::ScalarPadded => Box::new(PaddedScalarCode::min_length(problem, f)?),
            Scheme::ScalarDu => Box::new(WindowCode::new(problem, f)?),
        };
        reports.push(verify_scheme(code.as_ref()));
    }
    let text = match format {
        Format::Json => to_json(&reports),
        Format::Text | Format::Csv => reports
            .iter()
            .map(|r| {
                format!(
                    "{} {}: {} ({} basis vectors, {} decodes, {} failures, max touched {})\n",
                    r.problem,
                    r.scheme.kind.name(),
                    if r.verified() { "verified" } else { "FAILED" },
                    r.basis_vectors,
                    r.decodes,
                    r.failures.len(),
                    r.max_touched
                )
            })
            .collect(),
    };
    emit(None, stdout, &text)?;
    Ok(if reports.iter().all(VerificationReport::verified) {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn argument_definitions_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn run_reports_usage_errors() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(
            run(["sni", "rate", "-K", "3", "-D", "2", "-U", "1"], &mut out, &mut err),
            EXIT_USAGE
        );
        assert!(String::from_utf8(err).unwrap().starts_with("error:"));
    }
}
