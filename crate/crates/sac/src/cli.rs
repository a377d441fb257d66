//! Command-line surface: summarize, accumarray and bench over CSV streams.
//!
//! Exit codes: 0 on success, 2 for parse and shape errors (including bad
//! flag values), 3 for unknown columns, aggregators or engines, 4 when the
//! benchmark detects a cross-engine mismatch.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::accum::{accumarray, AccumResult, AccumSpec, SubscriptMatrix};
use crate::agg::Aggregator;
use crate::bench::{self, BenchConfig};
use crate::csvio;
use crate::engines::{self, EngineKind};
use crate::error::{Error, Result};
use crate::types::OrderPolicy;

#[derive(Parser)]
#[command(
    name = "sac",
    version,
    about = "Grouped aggregation over CSV with interchangeable engines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Group rows by a key column and reduce a value column per group.
    Summarize(SummarizeArgs),
    /// Accumulate values into an array addressed by subscript columns.
    Accumarray(AccumarrayArgs),
    /// Verify the engines agree, then time them on synthetic workloads.
    Bench(BenchArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    /// Ascending key order.
    Sorted,
    /// Keys in order of first appearance.
    First,
}

impl From<OrderArg> for OrderPolicy {
    fn from(arg: OrderArg) -> OrderPolicy {
        match arg {
            OrderArg::Sorted => OrderPolicy::SortedAscending,
            OrderArg::First => OrderPolicy::FirstOccurrence,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    /// Machine-readable, floats in shortest round-trip form.
    Csv,
    /// Aligned columns, six significant digits.
    Text,
}

#[derive(Args)]
struct SummarizeArgs {
    /// CSV input path; standard input when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output path; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Key column name.
    #[arg(long)]
    key: String,
    /// Value column name.
    #[arg(long)]
    value: String,
    /// Aggregator: mean, sum, count, min or max.
    #[arg(long, default_value = "mean")]
    agg: String,
    /// Engine: hash, dense, streaming, apl or linear-scan.
    #[arg(long, default_value = "hash")]
    engine: String,
    /// Output row order.
    #[arg(long, value_enum, default_value_t = OrderArg::Sorted)]
    order: OrderArg,
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args)]
struct AccumarrayArgs {
    /// CSV input path; standard input when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output path; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Value column name; defaults to the last column. Every other column
    /// is a subscript dimension, in header order.
    #[arg(long)]
    value: Option<String>,
    /// Aggregator: mean, sum, count, min or max.
    #[arg(long, default_value = "mean")]
    agg: String,
    /// Store only referenced cells, printed as a sorted coordinate list.
    #[arg(long)]
    sparse: bool,
    /// Output extents d1[,d2[,...]]; defaults to the subscript maxima.
    #[arg(long)]
    sz: Option<String>,
    /// Value of cells no subscript addresses.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    fillval: f64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args)]
struct BenchArgs {
    /// Report path; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Comma-separated input sizes.
    #[arg(long, default_value = "1000,10000")]
    sizes: String,
    /// Comma-separated distinct-key counts.
    #[arg(long, default_value = "10,100")]
    keys: String,
    /// Timed repetitions per engine per workload; at least 3.
    #[arg(long, default_value_t = 5)]
    reps: usize,
    /// Workload seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn invalid_flag(flag: &'static str, message: impl Into<String>) -> Error {
    Error::InvalidFlag {
        flag,
        message: message.into(),
    }
}

fn parse_usize_list(flag: &'static str, text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| invalid_flag(flag, format!("`{part}` is not a nonnegative integer")))
        })
        .collect()
}

fn open_input(path: &Option<PathBuf>) -> Result<Box<dyn BufRead>> {
    Ok(match path {
        Some(p) => Box::new(BufReader::new(File::open(p)?)),
        None => Box::new(BufReader::new(io::stdin())),
    })
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_summarize(args: &SummarizeArgs) -> Result<()> {
    let agg: Aggregator = args.agg.parse()?;
    let engine: EngineKind = args.engine.parse()?;
    let mut input = open_input(&args.input)?;
    let table = csvio::read_table(&mut input, &[args.key.as_str()])?;
    let keys = table.key_column(&args.key)?;
    let values = table.value_column(&args.value)?;
    let summary = engines::summarize(keys, values, agg, engine, args.order.into())?;

    let value_header = format!("{}_{agg}", args.value);
    let mut out = open_output(&args.output)?;
    match args.format {
        FormatArg::Csv => csvio::write_summary_csv(&mut *out, &summary, &value_header)?,
        FormatArg::Text => csvio::write_summary_text(&mut *out, &summary, &value_header)?,
    }
    out.flush()?;
    Ok(())
}

fn format_cell(v: f64, format: FormatArg) -> String {
    match format {
        FormatArg::Csv => csvio::format_float(v),
        FormatArg::Text => csvio::format_significant(v, 6),
    }
}

fn write_accum(out: &mut dyn Write, result: &AccumResult, format: FormatArg) -> Result<()> {
    if let Some(entries) = result.sparse_entries() {
        // Coordinate list, one `(i,j) value` line per stored cell; a
        // one-dimensional result is displayed as a single-column matrix.
        for (coords, v) in entries {
            let i = coords[0];
            let j = coords.get(1).copied().unwrap_or(1);
            writeln!(out, "({i},{j}) {}", format_cell(*v, format))?;
        }
        return Ok(());
    }
    let cells = result.dense_cells().expect("not sparse");
    if let [rows, cols] = *result.extents() {
        // Two-dimensional results print as a matrix, row-major.
        let rendered: Vec<String> = cells.iter().map(|&v| format_cell(v, format)).collect();
        let width = rendered.iter().map(String::len).max().unwrap_or(0);
        for r in 0..rows {
            let row = &rendered[r * cols..(r + 1) * cols];
            let line = match format {
                FormatArg::Csv => row.join(","),
                FormatArg::Text => row
                    .iter()
                    .map(|c| format!("{c:>width$}"))
                    .collect::<Vec<_>>()
                    .join("  "),
            };
            writeln!(out, "{line}")?;
        }
    } else {
        for &v in cells {
            writeln!(out, "{}", format_cell(v, format))?;
        }
    }
    Ok(())
}

fn cmd_accumarray(args: &AccumarrayArgs) -> Result<()> {
    let agg: Aggregator = args.agg.parse()?;
    let sz = match &args.sz {
        Some(text) => Some(parse_usize_list("sz", text)?),
        None => None,
    };
    let mut input = open_input(&args.input)?;
    let (sub_rows, values, sub_names) = csvio::read_subscripts(&mut input, args.value.as_deref())?;
    let flat: Vec<usize> = sub_rows.iter().flatten().copied().collect();
    let subs = SubscriptMatrix::new(sub_rows.len(), sub_names.len(), flat)?;
    let spec = AccumSpec {
        sz,
        fillval: args.fillval,
        sparse: args.sparse,
    };
    let result = accumarray(&subs, &values, agg, &spec)?;

    let mut out = open_output(&args.output)?;
    write_accum(&mut *out, &result, args.format)?;
    out.flush()?;
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let sizes = parse_usize_list("sizes", &args.sizes)?;
    let keys = parse_usize_list("keys", &args.keys)?;
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(invalid_flag("sizes", "every size must be at least 1"));
    }
    if keys.is_empty() || keys.contains(&0) {
        return Err(invalid_flag("keys", "every key count must be at least 1"));
    }
    if args.reps < 3 {
        return Err(invalid_flag("reps", "need at least 3 repetitions"));
    }

    let config = BenchConfig {
        sizes,
        keys,
        reps: args.reps,
        seed: args.seed,
    };
    let report = bench::run(&config)?;
    for v in &report.verified {
        eprintln!("verified n={} k={}: {} engines agree", v.n, v.k, v.engines);
    }

    let mut out = open_output(&args.output)?;
    writeln!(out, "engine,n,k,median_ns")?;
    for row in &report.rows {
        writeln!(out, "{},{},{},{}", row.engine, row.n, row.k, row.median_ns)?;
    }
    out.flush()?;
    Ok(())
}

/// Exit code for a library error: 3 for unknown names, 4 for benchmark
/// disagreement, 2 for everything else.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NoSuchColumn(_) | Error::UnknownAggregator(_) | Error::UnknownEngine(_) => 3,
        Error::EngineMismatch { .. } => 4,
        _ => 2,
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests print to stdout and succeed; real
            // usage errors go to stderr with the parse-error exit code.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Summarize(a) => cmd_summarize(a),
        Command::Accumarray(a) => cmd_accumarray(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs the command named by the process arguments.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn run_args(args: &[&str]) -> i32 {
        run_from(std::iter::once("sac").chain(args.iter().copied()))
    }

    #[test]
    fn exit_codes_by_error_class() {
        assert_eq!(exit_code(&Error::ShapeMismatch { left: 1, right: 2 }), 2);
        assert_eq!(exit_code(&Error::Csv { line: 3, message: String::new() }), 2);
        assert_eq!(exit_code(&Error::NoSuchColumn("x".into())), 3);
        assert_eq!(exit_code(&Error::UnknownAggregator("x".into())), 3);
        assert_eq!(exit_code(&Error::UnknownEngine("x".into())), 3);
        assert_eq!(
            exit_code(&Error::EngineMismatch {
                engine: "a".into(),
                baseline: "b".into(),
                n: 1,
                k: 1,
            }),
            4
        );
    }

    #[test]
    fn parse_usize_list_accepts_and_rejects() {
        assert_eq!(parse_usize_list("sz", "3").unwrap(), vec![3]);
        assert_eq!(parse_usize_list("sz", "3, 4").unwrap(), vec![3, 4]);
        assert!(matches!(
            parse_usize_list("sz", "3,x"),
            Err(Error::InvalidFlag { flag: "sz", .. })
        ));
    }

    #[test]
    fn summarize_file_to_file() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in.csv");
        let output = dir.path().join("out.csv");
        fs::write(&input, "userid,rating\n381,5\n381,4\n2,1\n").unwrap();

        let code = run_args(&[
            "summarize",
            "--input",
            input.to_str().unwrap(),
            "--output",
            output.to_str().unwrap(),
            "--key",
            "userid",
            "--value",
            "rating",
            "--agg",
            "sum",
        ]);
        assert_eq!(code, 0);
        assert_eq!(
            fs::read_to_string(&output).unwrap(),
            "key,rating_sum\n2,1\n381,9\n"
        );
    }

    #[test]
    fn unknown_aggregator_and_engine_exit_3() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in.csv");
        fs::write(&input, "k,v\n1,2\n").unwrap();
        let base = [
            "summarize",
            "--input",
            input.to_str().unwrap(),
            "--key",
            "k",
            "--value",
            "v",
        ];

        let mut with_agg = base.to_vec();
        with_agg.extend(["--agg", "median"]);
        assert_eq!(run_args(&with_agg), 3);

        let mut with_engine = base.to_vec();
        with_engine.extend(["--engine", "quantum"]);
        assert_eq!(run_args(&with_engine), 3);

        let mut with_col = base.to_vec();
        with_col[6] = "missing";
        assert_eq!(run_args(&with_col), 3);
    }

    #[test]
    fn malformed_csv_exits_2() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in.csv");
        fs::write(&input, "k,v\n1,2,3\n").unwrap();
        let code = run_args(&[
            "summarize",
            "--input",
            input.to_str().unwrap(),
            "--key",
            "k",
            "--value",
            "v",
        ]);
        assert_eq!(code, 2);
    }

    #[test]
    fn bench_flag_validation() {
        assert_eq!(run_args(&["bench", "--reps", "2"]), 2);
        assert_eq!(run_args(&["bench", "--sizes", "0"]), 2);
        assert_eq!(run_args(&["bench", "--keys", "nope"]), 2);
    }

    #[test]
    fn accumarray_sparse_file_round() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in.csv");
        let output = dir.path().join("out.txt");
        fs::write(&input, "i,val\n2,1.5\n2,2.5\n5,1\n").unwrap();

        let code = run_args(&[
            "accumarray",
            "--input",
            input.to_str().unwrap(),
            "--output",
            output.to_str().unwrap(),
            "--agg",
            "sum",
            "--sparse",
        ]);
        assert_eq!(code, 0);
        assert_eq!(
            fs::read_to_string(&output).unwrap(),
            "(2,1) 4\n(5,1) 1\n"
        );
    }

    #[test]
    fn help_exits_0() {
        assert_eq!(run_args(&["--help"]), 0);
    }
}
