//! Benchmark suites and the rows they produce.

use std::str::FromStr;
use std::time::Instant;

use clap::ValueEnum;
use hpqe_core::engine::swapper::{cx_cycles, cx_cycles_legacy};
use hpqe_core::oracle::{ref_run, Metrics, RefState};
use hpqe_core::{account_cycles, estimate_time, gate_count, Engine, MemMode, StateVector};
use serde::Serialize;

use crate::source::Generator;

/// One suite entry: `kind:lo..hi[:depth]` or `kind:n[:depth]`, range inclusive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteEntry {
    pub generator: Generator,
    pub lo: usize,
    pub hi: usize,
    pub depth: Option<usize>,
}

impl FromStr for SuiteEntry {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(format!("expected kind:lo..hi[:depth], got `{s}`"));
        }
        let generator = Generator::from_str(parts[0], true)?;
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad number `{t}` in `{s}`"))
        };
        let (lo, hi) = match parts[1].split_once("..") {
            Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
            None => {
                let n = num(parts[1])?;
                (n, n)
            }
        };
        if lo == 0 || lo > hi {
            return Err(format!("empty or invalid qubit range in `{s}`"));
        }
        let depth = parts.get(2).map(|d| num(d)).transpose()?;
        if generator == Generator::Qft && depth.is_some() {
            return Err("qft takes no depth".into());
        }
        Ok(SuiteEntry {
            generator,
            lo,
            hi,
            depth,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub label: String,
    pub n: usize,
    pub gates: Option<usize>,
    pub cx_gates: Option<usize>,
    pub single_gates: Option<usize>,
    pub mem_mode: Option<MemMode>,
    pub total_cycles: Option<u64>,
    pub predicted_time_s: Option<f64>,
    pub transfer_s: Option<f64>,
    pub ngs: Option<f64>,
    pub fidelity: Option<f64>,
    pub mse_raw: Option<f64>,
    pub mse_aligned: Option<f64>,
    /// Emulator wall clock, never the modeled device time.
    pub wall_clock_s: Option<f64>,
    pub status: String,
}

impl BenchRow {
    pub const COLUMNS: [&'static str; 15] = [
        "label",
        "n",
        "gates",
        "cx_gates",
        "single_gates",
        "mem_mode",
        "total_cycles",
        "predicted_time_s",
        "transfer_s",
        "ngs",
        "fidelity",
        "mse_raw",
        "mse_aligned",
        "wall_clock_s",
        "status",
    ];

    fn failed(label: String, n: usize, err: impl std::fmt::Display) -> Self {
        BenchRow {
            label,
            n,
            gates: None,
            cx_gates: None,
            single_gates: None,
            mem_mode: None,
            total_cycles: None,
            predicted_time_s: None,
            transfer_s: None,
            ngs: None,
            fidelity: None,
            mse_raw: None,
            mse_aligned: None,
            wall_clock_s: None,
            status: format!("error: {err}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub seed: u64,
    pub max_qubits: usize,
    /// Cycle accounting only: no state is allocated, so no fidelity.
    pub model_only: bool,
    pub wall_clock: bool,
}

fn bench_one(
    entry: &SuiteEntry,
    n: usize,
    engine: &Engine,
    opts: &BenchOptions,
) -> hpqe_core::Result<BenchRow> {
    let cfg = engine.config();
    let label = entry.generator.label(n, entry.depth);
    let circuit = entry.generator.build(n, entry.depth, opts.seed)?;
    let counts = gate_count(&circuit);

    let (report, functional, wall) = if opts.model_only {
        (account_cycles(&circuit, cfg)?, None, None)
    } else {
        let mut state = StateVector::init_basis_with(n, 0, opts.max_qubits, cfg)?;
        let start = Instant::now();
        let report = engine.run_circuit(&mut state, &circuit)?;
        let wall = start.elapsed().as_secs_f64();
        let reference = ref_run(&circuit, &RefState::basis(n, 0))?;
        let metrics = Metrics::of_fixed(&state, &reference, &circuit)?;
        (report, Some(metrics), Some(wall))
    };
    let time = estimate_time(&report, n, cfg);

    Ok(BenchRow {
        label,
        n,
        gates: Some(counts.total),
        cx_gates: Some(counts.cx),
        single_gates: Some(counts.single),
        mem_mode: Some(report.mem_mode),
        total_cycles: Some(report.total_cycles),
        predicted_time_s: Some(time.total_s),
        transfer_s: Some(time.transfer_s),
        ngs: Some(time.ngs),
        fidelity: functional.map(|m| m.fidelity),
        mse_raw: functional.map(|m| m.mse_raw),
        mse_aligned: functional.map(|m| m.mse_aligned),
        wall_clock_s: wall.filter(|_| opts.wall_clock),
        status: "ok".into(),
    })
}

/// Runs every entry in order. A failing row records its error and the
/// suite moves on.
pub fn run_suite(suite: &[SuiteEntry], engine: &Engine, opts: &BenchOptions) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for entry in suite {
        for n in entry.lo..=entry.hi {
            rows.push(
                bench_one(entry, n, engine, opts).unwrap_or_else(|e| {
                    BenchRow::failed(entry.generator.label(n, entry.depth), n, e)
                }),
            );
        }
    }
    rows
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CxCompareRow {
    pub n: usize,
    pub pairs: u64,
    pub legacy_cycles: u64,
    pub pipelined_cycles: u64,
    pub ratio: f64,
}

impl CxCompareRow {
    pub const COLUMNS: [&'static str; 5] =
        ["n", "pairs", "legacy_cycles", "pipelined_cycles", "ratio"];
}

/// Sequential vs pipelined CX cost for each width in `lo..=hi`.
pub fn cx_compare_rows(lo: usize, hi: usize) -> Vec<CxCompareRow> {
    (lo.max(2)..=hi)
        .map(|n| {
            let legacy = cx_cycles_legacy(n);
            let pipelined = cx_cycles(n);
            CxCompareRow {
                n,
                pairs: 1 << (n - 2),
                legacy_cycles: legacy,
                pipelined_cycles: pipelined,
                ratio: legacy as f64 / pipelined as f64,
            }
        })
        .collect()
}
