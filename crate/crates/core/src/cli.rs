//! The `minfact` command line.
//!
//! Exit codes: 0 on success, 1 when a verification check fails or output
//! cannot be written, 2 on usage errors (including invalid objects passed
//! on the command line). `MINFACT_MAX_N` caps every size argument.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::builder::PossibleValuesParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::chains::{
    count_chains, enumerate_chains, enumerate_factorizations, enumerate_final_chains,
    final_weighted_sum, final_weighted_sum_parallel, weighted_sum, weighted_sum_parallel, Chain,
    FactorizationType,
};
use crate::poly::Polynomial;
use crate::psi::psi;
use crate::trees::{andre_weighted_sum, cayley_weighted_sum, enumerate_andre, enumerate_cayley};
use crate::verify::{run_all, run_check, BatteryOptions, CheckReport, CHECK_NAMES};

const MAX_N_VAR: &str = "MINFACT_MAX_N";
const DEFAULT_MAX_N: usize = 9;

#[derive(Parser, Debug)]
#[command(
    name = "minfact",
    version,
    about = "Minimal factorizations of the long cycle and noncrossing partition chains"
)]
struct Cli {
    /// Output format; defaults to text, except json for `verify` and `psi`
    /// and csv for `export`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads; defaults to the number of available cores.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    parallel: Option<u16>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List objects, one per line.
    Enumerate {
        #[arg(value_enum)]
        kind: EnumKind,
        #[command(flatten)]
        sel: Selector,
    },
    /// Print a weighted sum as a polynomial.
    Wsum {
        #[arg(value_enum)]
        kind: SumKind,
        #[command(flatten)]
        sel: Selector,
    },
    /// Apply the last-two-steps merge to a chain given as JSON.
    Psi {
        #[arg(long)]
        chain: String,
    },
    /// Run the verification battery.
    Verify {
        /// Run every check (the default).
        #[arg(long, conflicts_with = "check")]
        all: bool,
        #[arg(long, value_parser = PossibleValuesParser::new(CHECK_NAMES))]
        check: Option<String>,
        #[arg(long, default_value_t = 7)]
        max_n: usize,
        /// Add elapsed milliseconds to each report.
        #[arg(long)]
        timing: bool,
    },
    /// Chain counts per type against `n^(r-1)`.
    Export {
        #[arg(long, default_value_t = 7)]
        max_n: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EnumKind {
    Chains,
    Factorizations,
    Andre,
    Cayley,
    Final,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SumKind {
    Chains,
    Andre,
    Cayley,
    Final,
}

#[derive(Args, Debug)]
struct Selector {
    /// Factorization type, e.g. `2,3,2`.
    #[arg(long)]
    a: Option<FactorizationType>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{failed} of {total} checks failed")]
    Failed { failed: usize, total: usize },
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("minfact: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> CliResult<()> {
    let cap = max_n_cap()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = cli.parallel {
        builder = builder.num_threads(k as usize);
    }
    let pool = builder.build().map_err(|e| usage(e.to_string()))?;
    let mut out: Box<dyn Write + Send> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    };
    let threads = pool.current_num_threads();
    let result = pool.install(|| dispatch(&cli, cap, threads, &mut out));
    out.flush()?;
    result
}

fn max_n_cap() -> CliResult<usize> {
    match std::env::var(MAX_N_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{MAX_N_VAR} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn check_cap(n: usize, cap: usize) -> CliResult<()> {
    if n > cap {
        return Err(usage(format!(
            "n = {n} exceeds the cap {cap}; raise {MAX_N_VAR} to allow it"
        )));
    }
    Ok(())
}

impl Selector {
    fn n(&self, cap: usize) -> CliResult<usize> {
        let n = self.n.ok_or_else(|| usage("--n is required"))?;
        if n == 0 {
            return Err(usage("--n must be positive"));
        }
        check_cap(n, cap)?;
        Ok(n)
    }

    /// `--a`, or the all-twos type when only `--n` is given.
    fn a(&self, cap: usize) -> CliResult<FactorizationType> {
        let a = match (&self.a, self.n) {
            (Some(a), None) => a.clone(),
            (Some(a), Some(n)) if a.n() == n => a.clone(),
            (Some(a), Some(n)) => {
                return Err(usage(format!("type {a} has n = {}, not {n}", a.n())))
            }
            (None, Some(n)) => FactorizationType::maximal(n)?,
            (None, None) => return Err(usage("--a or --n is required")),
        };
        check_cap(a.n(), cap)?;
        Ok(a)
    }

    fn k(&self) -> CliResult<usize> {
        self.k.ok_or_else(|| usage("--k is required"))
    }
}

fn dispatch(cli: &Cli, cap: usize, threads: usize, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Enumerate { kind, sel } => {
            enumerate(*kind, sel, cli.format.unwrap_or(Format::Text), cap, out)
        }
        Command::Wsum { kind, sel } => {
            let p = wsum(*kind, sel, cap, threads > 1)?;
            write_poly(&p, cli.format.unwrap_or(Format::Text), out)
        }
        Command::Psi { chain } => run_psi(chain, cli.format.unwrap_or(Format::Json), out),
        Command::Verify {
            check,
            max_n,
            timing,
            ..
        } => {
            check_cap(*max_n, cap)?;
            let opts = BatteryOptions {
                max_n: *max_n,
                timing: *timing,
            };
            let reports = match check {
                Some(name) => {
                    run_check(name, opts).ok_or_else(|| usage(format!("unknown check {name}")))?
                }
                None => run_all(opts),
            };
            write_reports(&reports, cli.format.unwrap_or(Format::Json), out)?;
            let failed = reports.iter().filter(|r| !r.passed()).count();
            if failed > 0 {
                return Err(CliError::Failed {
                    failed,
                    total: reports.len(),
                });
            }
            Ok(())
        }
        Command::Export { max_n } => {
            check_cap(*max_n, cap)?;
            export(*max_n, cli.format.unwrap_or(Format::Csv), out)
        }
    }
}

/// One enumerated object: its JSON form, text form and weight.
struct Row {
    json: String,
    text: String,
    weight: String,
}

fn row<T: Serialize + std::fmt::Display>(x: &T, weight: String) -> CliResult<Row> {
    Ok(Row {
        json: serde_json::to_string(x)?,
        text: x.to_string(),
        weight,
    })
}

fn enumerate(
    kind: EnumKind,
    sel: &Selector,
    format: Format,
    cap: usize,
    out: &mut dyn Write,
) -> CliResult<()> {
    let rows: Box<dyn Iterator<Item = CliResult<Row>>> = match kind {
        EnumKind::Chains => {
            Box::new(enumerate_chains(&sel.a(cap)?).map(|c| row(&c, c.weight().to_string())))
        }
        EnumKind::Factorizations => Box::new(enumerate_factorizations(&sel.a(cap)?).map(|f| {
            Ok(Row {
                json: format!("{{\"factors\":{}}}", serde_json::to_string(f.factors())?),
                text: f.to_string(),
                weight: f.weight()?.to_string(),
            })
        })),
        EnumKind::Andre => Box::new(
            enumerate_andre(sel.n(cap)?)
                .into_iter()
                .map(|t| row(&t, t.weight().to_string())),
        ),
        EnumKind::Cayley => {
            Box::new(enumerate_cayley(sel.n(cap)?)?.map(|t| row(&t, t.weight().to_string())))
        }
        EnumKind::Final => Box::new(
            enumerate_final_chains(sel.n(cap)?, sel.k()?)?.map(|c| row(&c, c.weight().to_string())),
        ),
    };
    match format {
        Format::Json => {
            for r in rows {
                writeln!(out, "{}", r?.json)?;
            }
        }
        Format::Text => {
            for r in rows {
                let r = r?;
                writeln!(out, "{}\t{}", r.text, r.weight)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["index", "object", "weight"])?;
            for (i, r) in rows.enumerate() {
                let r = r?;
                w.write_record([(i + 1).to_string(), r.text, r.weight])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn wsum(kind: SumKind, sel: &Selector, cap: usize, parallel: bool) -> CliResult<Polynomial> {
    Ok(match kind {
        SumKind::Chains => {
            let a = sel.a(cap)?;
            if parallel {
                weighted_sum_parallel(&a)
            } else {
                weighted_sum(&a)
            }
        }
        SumKind::Andre => andre_weighted_sum(sel.n(cap)?),
        SumKind::Cayley => cayley_weighted_sum(sel.n(cap)?)?,
        SumKind::Final => {
            let (n, k) = (sel.n(cap)?, sel.k()?);
            if parallel {
                final_weighted_sum_parallel(n, k)?
            } else {
                final_weighted_sum(n, k)?
            }
        }
    })
}

fn write_poly(p: &Polynomial, format: Format, out: &mut dyn Write) -> CliResult<()> {
    match format {
        Format::Text => writeln!(out, "{p}")?,
        Format::Json => {
            serde_json::to_writer(&mut *out, p)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["coefficient", "monomial"])?;
            for (m, c) in p.terms().rev() {
                w.write_record([c.to_string(), m.to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn run_psi(chain: &str, format: Format, out: &mut dyn Write) -> CliResult<()> {
    let chain: Chain =
        serde_json::from_str(chain).map_err(|e| usage(format!("bad --chain: {e}")))?;
    if chain.factorization_type().r() < 2 {
        return Err(usage("the chain needs at least two steps"));
    }
    let image = psi(&chain)?;
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct PsiOut<'a> {
                case: u8,
                gamma: &'a Chain,
                bar: usize,
                sigma: &'a crate::Permutation,
            }
            let v = PsiOut {
                case: image.case,
                gamma: &image.gamma,
                bar: image.bar,
                sigma: &image.sigma,
            };
            serde_json::to_writer(&mut *out, &v)?;
            writeln!(out)?;
        }
        Format::Text => {
            writeln!(out, "case\t{}", image.case)?;
            writeln!(out, "bar\t{}", image.bar)?;
            writeln!(out, "gamma\t{}", image.gamma)?;
            writeln!(out, "sigma\t{}", image.sigma)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["case", "bar", "gamma", "sigma"])?;
            w.write_record([
                image.case.to_string(),
                image.bar.to_string(),
                image.gamma.to_string(),
                image.sigma.to_string(),
            ])?;
            w.flush()?;
        }
    }
    Ok(())
}

fn param_text(r: &CheckReport) -> (String, String, String) {
    let show = |x: Option<String>| x.unwrap_or_default();
    (
        show(r.params.n.map(|n| n.to_string())),
        show(r.params.a.as_ref().map(|a| a.to_string())),
        show(r.params.k.map(|k| k.to_string())),
    )
}

fn write_reports(reports: &[CheckReport], format: Format, out: &mut dyn Write) -> CliResult<()> {
    match format {
        Format::Json => {
            for r in reports {
                serde_json::to_writer(&mut *out, r)?;
                writeln!(out)?;
            }
        }
        Format::Text => {
            for r in reports {
                let (n, a, k) = param_text(r);
                let status = if r.passed() { "pass" } else { "FAIL" };
                let mut line = format!("{status} {}", r.check);
                for (label, v) in [("n", n), ("a", a), ("k", k)] {
                    if !v.is_empty() {
                        line.push_str(&format!(" {label}={v}"));
                    }
                }
                if let Some(ms) = r.elapsed_ms {
                    line.push_str(&format!(" {ms}ms"));
                }
                writeln!(out, "{line}")?;
                if let Some(w) = &r.witness {
                    writeln!(out, "  witness: {w}")?;
                }
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["check", "n", "a", "k", "status"])?;
            for r in reports {
                let (n, a, k) = param_text(r);
                let status = if r.passed() { "pass" } else { "fail" };
                w.write_record([r.check.as_str(), &n, &a, &k, status])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CountRow {
    n: usize,
    r: usize,
    a: String,
    count: u64,
    formula_count: u64,
    #[serde(rename = "match")]
    matches: bool,
}

fn export(max_n: usize, format: Format, out: &mut dyn Write) -> CliResult<()> {
    let rows = (2..=max_n).flat_map(FactorizationType::all_for).map(|a| {
        let count = count_chains(&a);
        let formula_count = (a.n() as u64).pow(a.r() as u32 - 1);
        CountRow {
            n: a.n(),
            r: a.r(),
            a: a.parts()
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(","),
            count,
            formula_count,
            matches: count == formula_count,
        }
    });
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            for r in rows {
                serde_json::to_writer(&mut *out, &r)?;
                writeln!(out)?;
            }
        }
        Format::Text => {
            writeln!(out, "n\tr\ta\tcount\tformula_count\tmatch")?;
            for r in rows {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    r.n, r.r, r.a, r.count, r.formula_count, r.matches
                )?;
            }
        }
    }
    Ok(())
}
