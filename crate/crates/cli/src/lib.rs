//! `hpqe` command-line harness.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 capacity error, 4 I/O
//! error.

pub mod bench;
pub mod source;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use hpqe_core::oracle::{ref_run, Metrics, RefState};
use hpqe_core::state::DEFAULT_MAX_QUBITS;
use hpqe_core::{
    estimate_time, gate_count, Circuit, Engine, HpqeError, MemMode, PerfConfig, StateVector,
};
use serde::Serialize;

use bench::{cx_compare_rows, run_suite, BenchOptions, BenchRow, CxCompareRow, SuiteEntry};
use source::{load_circuit, Generator, UsageError};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAPACITY: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "hpqe",
    version,
    about = "Fixed-point FPGA quantum accelerator emulator"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Qubit count.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Performance-model overrides as JSON.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for output files.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Stdout format; defaults to json for run/compare and csv for tables.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Largest state the emulator will allocate.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_QUBITS)]
    pub max_qubits: usize,
    /// Engine worker threads. Results do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
#[command(group(ArgGroup::new("source").required(true).args(["gen", "circuit"])))]
pub struct SourceArgs {
    /// Built-in generator.
    #[arg(long, value_enum)]
    pub gen: Option<Generator>,
    /// Circuit text file.
    #[arg(long, value_name = "FILE")]
    pub circuit: Option<PathBuf>,
    /// Layers for topology templates.
    #[arg(long)]
    pub layers: Option<usize>,
    /// Gate count for the random generator.
    #[arg(long)]
    pub gates: Option<usize>,
    /// Initial basis state index.
    #[arg(long, default_value_t = 0)]
    pub init: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a circuit on the fixed-point engine; write the state dump and reports.
    Run(SourceArgs),
    /// Score the fixed-point result against the double-precision oracle.
    Compare(SourceArgs),
    /// Run a benchmark suite, one row per circuit.
    Bench {
        /// Entries like `qft:3..17`, `chain:4..10:2` or `random:5:40`.
        #[arg(long, value_delimiter = ',')]
        suite: Vec<SuiteEntry>,
        /// Cycle accounting only, no functional run.
        #[arg(long)]
        model_only: bool,
        /// Leave wall_clock_s empty so output is reproducible byte for byte.
        #[arg(long)]
        no_wall_clock: bool,
    },
    /// Print a generated circuit in text form.
    Gen {
        #[arg(value_enum)]
        kind: Generator,
        #[arg(long)]
        layers: Option<usize>,
        #[arg(long)]
        gates: Option<usize>,
    },
    /// Sequential vs pipelined CX cycle table.
    CxCompare {
        #[arg(long, default_value_t = 2)]
        from: usize,
        #[arg(long, default_value_t = 20)]
        to: usize,
    },
}

/// Maps an error chain to the process exit code.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<HpqeError>() {
            return match e {
                HpqeError::Capacity { .. } => EXIT_CAPACITY,
                HpqeError::Io(_) => EXIT_IO,
                _ => EXIT_USAGE,
            };
        }
        if cause.is::<io::Error>() {
            return EXIT_IO;
        }
        if let Some(e) = cause.downcast_ref::<csv::Error>() {
            if matches!(e.kind(), csv::ErrorKind::Io(_)) {
                return EXIT_IO;
            }
        }
    }
    EXIT_USAGE
}

/// Parses `args` and runs the command, writing results to `stdout`.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match dispatch(&cli, stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

pub fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> anyhow::Result<()> {
    let g = &cli.global;
    let cfg = match &g.config {
        Some(path) => {
            PerfConfig::load(path).with_context(|| format!("loading {}", path.display()))?
        }
        None => PerfConfig::default(),
    };
    let engine = Engine::with_workers(cfg, g.workers)?;
    match &cli.command {
        Command::Run(src) => cmd_run(g, src, &engine, stdout),
        Command::Compare(src) => cmd_compare(g, src, &engine, stdout),
        Command::Bench {
            suite,
            model_only,
            no_wall_clock,
        } => {
            let opts = BenchOptions {
                seed: g.seed,
                max_qubits: g.max_qubits,
                model_only: *model_only,
                wall_clock: !no_wall_clock,
            };
            cmd_bench(g, suite, &opts, &engine, stdout)
        }
        Command::Gen {
            kind,
            layers,
            gates,
        } => cmd_gen(g, *kind, layers.or(*gates), stdout),
        Command::CxCompare { from, to } => {
            let rows = cx_compare_rows(*from, *to);
            emit_table(
                stdout,
                g.format.unwrap_or(Format::Csv),
                &CxCompareRow::COLUMNS,
                &rows,
            )?;
            if let Some(dir) = &g.out {
                write_table_file(dir, "cx_compare.csv", &CxCompareRow::COLUMNS, &rows)?;
            }
            Ok(())
        }
    }
}

fn require_n(g: &GlobalArgs) -> anyhow::Result<usize> {
    g.n.ok_or_else(|| UsageError("--n is required with a generator".into()).into())
}

fn resolve_source(g: &GlobalArgs, src: &SourceArgs) -> anyhow::Result<(Circuit, String)> {
    match (&src.gen, &src.circuit) {
        (Some(gen), _) => {
            let n = require_n(g)?;
            let depth = match gen {
                Generator::Random => src.gates,
                _ => src.layers,
            };
            Ok((gen.build(n, depth, g.seed)?, gen.label(n, depth)))
        }
        (None, Some(path)) => Ok((load_circuit(path, g.n)?, path.display().to_string())),
        (None, None) => unreachable!("clap enforces the source group"),
    }
}

#[derive(Serialize)]
struct RunSummary {
    label: String,
    n: usize,
    init: usize,
    gates: usize,
    cx_gates: usize,
    single_gates: usize,
    mem_mode: MemMode,
    total_cycles: u64,
    compute_s: f64,
    transfer_s: f64,
    predicted_time_s: f64,
    ngs: f64,
}

fn cmd_run(
    g: &GlobalArgs,
    src: &SourceArgs,
    engine: &Engine,
    stdout: &mut dyn Write,
) -> anyhow::Result<()> {
    let (circuit, label) = resolve_source(g, src)?;
    let n = circuit.n();
    let mut state = StateVector::init_basis_with(n, src.init, g.max_qubits, engine.config())?;
    let report = engine.run_circuit(&mut state, &circuit)?;
    let time = estimate_time(&report, n, engine.config());

    let dir = g.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    let mut dump = io::BufWriter::new(fs::File::create(dir.join("state.bin"))?);
    state.write_dump(&mut dump)?;
    dump.flush()?;
    fs::write(dir.join("cycles.json"), report.to_json() + "\n")?;
    fs::write(
        dir.join("time.json"),
        serde_json::to_string_pretty(&time)? + "\n",
    )?;

    let counts = gate_count(&circuit);
    let summary = RunSummary {
        label,
        n,
        init: src.init,
        gates: counts.total,
        cx_gates: counts.cx,
        single_gates: counts.single,
        mem_mode: report.mem_mode,
        total_cycles: report.total_cycles,
        compute_s: time.compute_s,
        transfer_s: time.transfer_s,
        predicted_time_s: time.total_s,
        ngs: time.ngs,
    };
    emit_record(stdout, g.format.unwrap_or(Format::Json), &summary)
}

fn cmd_compare(
    g: &GlobalArgs,
    src: &SourceArgs,
    engine: &Engine,
    stdout: &mut dyn Write,
) -> anyhow::Result<()> {
    let (circuit, _) = resolve_source(g, src)?;
    let n = circuit.n();
    let mut state = StateVector::init_basis_with(n, src.init, g.max_qubits, engine.config())?;
    engine.run_circuit(&mut state, &circuit)?;
    let reference = ref_run(&circuit, &RefState::basis(n, src.init))?;
    let metrics = Metrics::of_fixed(&state, &reference, &circuit)?;
    if let Some(dir) = &g.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("metrics.json"), metrics.to_json() + "\n")?;
    }
    emit_record(stdout, g.format.unwrap_or(Format::Json), &metrics)
}

fn cmd_bench(
    g: &GlobalArgs,
    suite: &[SuiteEntry],
    opts: &BenchOptions,
    engine: &Engine,
    stdout: &mut dyn Write,
) -> anyhow::Result<()> {
    let rows = run_suite(suite, engine, opts);
    let format = g.format.unwrap_or(Format::Csv);
    emit_table(stdout, format, &BenchRow::COLUMNS, &rows)?;
    if let Some(dir) = &g.out {
        match format {
            Format::Csv => write_table_file(dir, "bench.csv", &BenchRow::COLUMNS, &rows)?,
            Format::Json => {
                fs::create_dir_all(dir)?;
                fs::write(
                    dir.join("bench.json"),
                    serde_json::to_string_pretty(&rows)? + "\n",
                )?;
            }
        }
        let hi = suite.iter().map(|e| e.hi).max().unwrap_or(0);
        write_table_file(
            dir,
            "cx_compare.csv",
            &CxCompareRow::COLUMNS,
            &cx_compare_rows(2, hi),
        )?;
    }
    Ok(())
}

fn cmd_gen(
    g: &GlobalArgs,
    kind: Generator,
    depth: Option<usize>,
    stdout: &mut dyn Write,
) -> anyhow::Result<()> {
    let n = require_n(g)?;
    let text = kind.build(n, depth, g.seed)?.to_text();
    if let Some(dir) = &g.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(format!("{kind}-{n}.qc")), &text)?;
    }
    stdout.write_all(text.as_bytes())?;
    Ok(())
}

fn emit_record<T: Serialize>(
    out: &mut dyn Write,
    format: Format,
    record: &T,
) -> anyhow::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(record)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.serialize(record)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn write_csv<T: Serialize>(out: impl Write, columns: &[&str], rows: &[T]) -> anyhow::Result<()> {
    // header written by hand so an empty table still has one
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(columns)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn emit_table<T: Serialize>(
    out: &mut dyn Write,
    format: Format,
    columns: &[&str],
    rows: &[T],
) -> anyhow::Result<()> {
    match format {
        Format::Csv => write_csv(out, columns, rows),
        Format::Json => {
            writeln!(out, "{}", serde_json::to_string_pretty(rows)?)?;
            Ok(())
        }
    }
}

fn write_table_file<T: Serialize>(
    dir: &Path,
    name: &str,
    columns: &[&str],
    rows: &[T],
) -> anyhow::Result<()> {
    fs::create_dir_all(dir)?;
    let file = fs::File::create(dir.join(name)).with_context(|| format!("creating {name}"))?;
    write_csv(io::BufWriter::new(file), columns, rows)
}
