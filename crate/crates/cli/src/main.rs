//! `qtails`: verify q-series identities, print coefficients, count partitions.

mod render;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qtails_core::fault::Fault;
use qtails_core::registry::{self, IdentityDef, RunParams, Summary};

use render::{Format, Rendered};

const EXIT_FAIL: u8 = 1;
const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "qtails", version, about = "Exact verification of sums-of-tails q-series identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify registry identities coefficient by coefficient.
    Verify(VerifyArgs),
    /// Print the coefficients of a named q-series.
    Coeffs(CoeffsArgs),
    /// Evaluate the partition counters.
    Partitions(PartitionsArgs),
    /// Run the whole registry and write one summary document.
    Report(ReportArgs),
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Truncation order N: coefficients of q^k for k <= N are compared.
    #[arg(long, default_value_t = 40)]
    order: i64,
    /// Largest j for the per-j families.
    #[arg(long = "j-max", default_value_t = 15)]
    j_max: usize,
    /// Degree cap of z in the generating-function entry.
    #[arg(long = "z-cap", default_value_t = 10)]
    z_cap: u32,
    /// Range of the numeric and positivity entries (defaults to the order).
    #[arg(long = "n-max")]
    n_max: Option<u32>,
    /// Override a parameter cap, as NAME=VALUE. Repeatable.
    #[arg(long = "cap", value_parser = parse_cap)]
    caps: Vec<(String, u32)>,
    /// Perturb one primitive before verifying.
    #[arg(long, hide = true, value_parser = parse_fault)]
    fault: Option<Fault>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn params(&self) -> Result<RunParams, String> {
        if self.order < 0 {
            return Err(format!("--order must be nonnegative, got {}", self.order));
        }
        Ok(RunParams {
            order: self.order,
            j_max: self.j_max,
            z_cap: self.z_cap,
            n_max: self.n_max,
            caps: self.caps.iter().cloned().collect::<BTreeMap<_, _>>(),
            fault: self.fault,
        })
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity ids, comma separated, or `all`.
    #[arg(long, default_value = "all", value_delimiter = ',')]
    identity: Vec<String>,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Function {
    Sigma,
    Sigma2,
    SigmaStar,
    Lambert,
    PartitionGf,
}

#[derive(Args)]
pub struct CoeffsArgs {
    #[arg(long, value_enum)]
    pub function: Function,
    #[arg(long, default_value_t = 40)]
    pub order: i64,
    /// Exponent a of `sum_k q^(ak)/(1-q^(bk))`.
    #[arg(long, default_value_t = 1)]
    pub a: i64,
    /// Exponent b of `sum_k q^(ak)/(1-q^(bk))`.
    #[arg(long, default_value_t = 1)]
    pub b: i64,
    /// Counter whose generating function `partition_gf` prints.
    #[arg(long, value_enum, default_value_t = Counter::P1)]
    pub count: Counter,
    /// Part bound for `ae_ao`.
    #[arg(long, default_value_t = 1)]
    pub j: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Counter {
    P1,
    P2,
    TauE,
    TauO,
    SigmaWeight,
    Sigma2Weight,
    AeAo,
}

#[derive(Args)]
struct PartitionsArgs {
    #[arg(long, value_enum)]
    count: Counter,
    /// A single n.
    #[arg(long, conflicts_with_all = ["from", "to"])]
    n: Option<u32>,
    /// First n of a range.
    #[arg(long, requires = "to")]
    from: Option<u32>,
    /// Last n of a range, inclusive.
    #[arg(long, requires = "from")]
    to: Option<u32>,
    /// Part bound for `ae_ao`.
    #[arg(long, default_value_t = 1)]
    j: usize,
    /// Also list the partitions (or divisors) and their weights.
    #[arg(long)]
    list: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, value_enum, default_value_t = ReportFormat::Markdown)]
    format: ReportFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Markdown,
    Json,
}

fn parse_cap(s: &str) -> Result<(String, u32), String> {
    let (name, v) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let v = v.trim().parse::<u32>().map_err(|e| format!("bad cap value in {s:?}: {e}"))?;
    Ok((name.trim().to_string(), v))
}

fn parse_fault(s: &str) -> Result<Fault, String> {
    Fault::ALL
        .into_iter()
        .find(|f| format!("{f:?}").eq_ignore_ascii_case(s))
        .ok_or_else(|| format!("unknown fault {s:?}"))
}

/// A failed command: message for stderr and exit code.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn select(ids: &[String]) -> Result<Vec<&'static IdentityDef>, Failure> {
    if ids.iter().any(|s| s.eq_ignore_ascii_case("all")) {
        return Ok(registry::registry().iter().collect());
    }
    ids.iter()
        .map(|id| {
            registry::lookup(id.trim()).map_err(|_| {
                Failure(format!("unknown identity `{id}`; valid ids: {}", registry::ids().join(", ")))
            })
        })
        .collect()
}

fn summary_code(s: &Summary) -> u8 {
    if s.error > 0 {
        EXIT_ERROR
    } else if s.fail > 0 {
        EXIT_FAIL
    } else {
        0
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let params = args.run.params()?;
    let defs = select(&args.identity)?;
    let summary = registry::verify_many(&defs, &params);
    emit(&args.run.out, &render::summary(&summary, args.format)?)?;
    Ok(summary_code(&summary))
}

fn cmd_report(args: &ReportArgs) -> Result<u8, Failure> {
    let params = args.run.params()?;
    let summary = registry::verify_all(&params);
    let text = match args.format {
        ReportFormat::Json => render::summary(&summary, Format::Json)?,
        ReportFormat::Markdown => render::markdown(&summary, &params),
    };
    emit(&args.run.out, &text)?;
    Ok(0)
}

fn cmd_coeffs(args: &CoeffsArgs) -> Result<u8, Failure> {
    let table = render::coefficients(args)?;
    emit(&args.out, &table.to(args.format)?)?;
    Ok(0)
}

fn cmd_partitions(args: &PartitionsArgs) -> Result<u8, Failure> {
    let range = match (args.n, args.from, args.to) {
        (Some(n), _, _) => n..=n,
        (None, Some(a), Some(b)) if a <= b => a..=b,
        (None, Some(a), Some(b)) => return Err(Failure(format!("empty range {a}..={b}"))),
        _ => return Err(Failure("give --n or --from/--to".into())),
    };
    let table: Rendered = render::partition_counts(args.count, range, args.j, args.list)?;
    emit(&args.out, &table.to(args.format)?)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Coeffs(a) => cmd_coeffs(a),
        Command::Partitions(a) => cmd_partitions(a),
        Command::Report(a) => cmd_report(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_syntax() {
        assert_eq!(parse_cap("b=12").unwrap(), ("b".to_string(), 12));
        assert!(parse_cap("b12").is_err());
        assert!(parse_cap("b=-1").is_err());
    }

    #[test]
    fn fault_names() {
        assert_eq!(parse_fault("tailshort").unwrap(), Fault::TailShort);
        assert!(parse_fault("nothing").is_err());
    }

    #[test]
    fn exit_codes_from_counts() {
        let mut s = Summary { total: 3, pass: 3, fail: 0, error: 0, elapsed_ms: 0, reports: Vec::new() };
        assert_eq!(summary_code(&s), 0);
        s.fail = 1;
        assert_eq!(summary_code(&s), EXIT_FAIL);
        s.error = 1;
        assert_eq!(summary_code(&s), EXIT_ERROR);
    }

    #[test]
    fn clap_definition() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
