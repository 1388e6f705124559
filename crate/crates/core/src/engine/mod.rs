//! Fixed-point gate application.
//!
//! Single-qubit gates follow the PE dataflow: every amplitude pair
//! `(i, i + 2^t)` is read into two registers and both outputs are produced by
//! SU evaluations before either is written back, in place. When the pair
//! lies inside one segment (mode 1) each PE works alone; otherwise (mode 2)
//! the two partner segments are processed together at equal offsets, which is
//! the exchange over the shared bus.
//!
//! CX gates run through the swapper state machine in [`swapper`].
//!
//! Work is split by segment or segment pair, so every pair has exactly one
//! owner and results do not depend on the worker count.

pub mod swapper;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HpqeError, Result};
use crate::fxp::{su_eval, CFx, SuMode};
use crate::gateset::{Circuit, GateKind, GateOp};
use crate::perfmodel::{cycles_single, memory_mode, MemMode, PerfConfig};
use crate::state::{StateVector, SEGMENT_BITS};

pub use swapper::{
    count_swapper_cycles, cx_cycles, cx_cycles_legacy, simulate_swapper, CxSwapper, SwapStage,
    SwapperRun, SwapperState,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AccessMode {
    /// Pair lives in one PE's own segment.
    Mode1,
    /// Pair spans two PEs.
    Mode2,
}

/// Access mode of a single-qubit gate on bit `t` of an `n >= 3` qubit state.
pub fn access_mode(t: usize, n: usize) -> AccessMode {
    debug_assert!(n >= SEGMENT_BITS && t < n);
    if t + SEGMENT_BITS < n {
        AccessMode::Mode1
    } else {
        AccessMode::Mode2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCycles {
    pub index: usize,
    pub kind: GateKind,
    pub cycles: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleReport {
    pub n: usize,
    pub mem_mode: MemMode,
    #[serde(rename = "gates")]
    pub per_gate: Vec<GateCycles>,
    pub total_cycles: u64,
    pub single_cycles: u64,
    pub cx_cycles: u64,
    pub cx_pairs_swapped: u64,
    /// Single-qubit gates that needed cross-PE exchange.
    pub mode2_gate_count: u64,
}

impl CycleReport {
    fn empty(n: usize, mem_mode: MemMode) -> Self {
        CycleReport {
            n,
            mem_mode,
            per_gate: Vec::new(),
            total_cycles: 0,
            single_cycles: 0,
            cx_cycles: 0,
            cx_pairs_swapped: 0,
            mode2_gate_count: 0,
        }
    }

    fn record(&mut self, index: usize, op: &GateOp, cycles: u64) {
        let n = self.n;
        self.per_gate.push(GateCycles {
            index,
            kind: op.kind,
            cycles,
        });
        self.total_cycles += cycles;
        if op.kind == GateKind::Cx {
            self.cx_cycles += cycles;
            self.cx_pairs_swapped += 1 << (n - 2);
        } else {
            self.single_cycles += cycles;
            if n >= SEGMENT_BITS && access_mode(op.target, n) == AccessMode::Mode2 {
                self.mode2_gate_count += 1;
            }
        }
    }

    pub fn gate_count(&self) -> usize {
        self.per_gate.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cycle report serializes")
    }
}

/// Cycle accounting for `circuit` without touching a state vector.
pub fn account_cycles(circuit: &Circuit, cfg: &PerfConfig) -> Result<CycleReport> {
    let n = circuit.n();
    let mut report = CycleReport::empty(n, memory_mode(n, cfg)?);
    let single = cycles_single(n, cfg);
    for (index, op) in circuit.ops().iter().enumerate() {
        let cycles = match op.kind {
            GateKind::Cx => cx_cycles(n),
            _ => single,
        };
        report.record(index, op, cycles);
    }
    Ok(report)
}

#[inline]
fn update_pair(m: &[CFx; 4], mode: SuMode, lo: &mut CFx, hi: &mut CFx) {
    let (x, y) = (*lo, *hi);
    match mode {
        SuMode::Dense => {
            *lo = su_eval(m[0], m[1], x, y, SuMode::Dense);
            *hi = su_eval(m[2], m[3], x, y, SuMode::Dense);
        }
        SuMode::Sparse => {
            *lo = su_eval(m[0], m[1], x, y, SuMode::Sparse);
            *hi = su_eval(m[3], m[2], y, x, SuMode::Sparse);
        }
    }
}

/// All pairs at distance `stride` inside one contiguous slice.
fn update_strided(m: &[CFx; 4], mode: SuMode, amps: &mut [CFx], stride: usize) {
    for block in amps.chunks_exact_mut(2 * stride) {
        let (lo, hi) = block.split_at_mut(stride);
        for (a, b) in lo.iter_mut().zip(hi) {
            update_pair(m, mode, a, b);
        }
    }
}

fn update_zipped(m: &[CFx; 4], mode: SuMode, lo: &mut [CFx], hi: &mut [CFx]) {
    for (a, b) in lo.iter_mut().zip(hi) {
        update_pair(m, mode, a, b);
    }
}

pub struct Engine {
    cfg: PerfConfig,
    workers: usize,
    pool: Option<rayon::ThreadPool>,
}

impl Engine {
    /// Single-worker engine.
    pub fn new(cfg: PerfConfig) -> Self {
        Engine {
            cfg,
            workers: 1,
            pool: None,
        }
    }

    pub fn with_workers(cfg: PerfConfig, workers: usize) -> Result<Self> {
        if workers == 0 {
            return Err(HpqeError::Config("worker count must be positive".into()));
        }
        let pool = if workers > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .map_err(|e| HpqeError::Config(e.to_string()))?,
            )
        } else {
            None
        };
        Ok(Engine { cfg, workers, pool })
    }

    pub fn config(&self) -> &PerfConfig {
        &self.cfg
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    fn for_each_task<T, F>(&self, tasks: Vec<T>, work: F)
    where
        T: Send,
        F: Fn(T) + Send + Sync,
    {
        match &self.pool {
            Some(pool) => pool.install(|| tasks.into_par_iter().for_each(work)),
            None => tasks.into_iter().for_each(work),
        }
    }

    /// Applies a quantized single-qubit gate; returns the modeled cycles.
    pub fn apply_single(&self, state: &mut StateVector, gate: &GateOp) -> u64 {
        debug_assert!(gate.kind.is_single());
        let n = state.n();
        let t = gate.target;
        assert!(t < n, "target {t} out of range for {n} qubits");
        let m = gate.matrix;
        let mode = gate.su_mode();

        if n < SEGMENT_BITS {
            update_strided(&m, mode, state.amplitudes_mut(), 1 << t);
            return cycles_single(n, &self.cfg);
        }

        match access_mode(t, n) {
            AccessMode::Mode1 => {
                let segs: Vec<&mut [CFx]> = state.segments_mut().collect();
                self.for_each_task(segs, |seg| update_strided(&m, mode, seg, 1 << t));
            }
            AccessMode::Mode2 => {
                let partner_bit = 1 << (t + SEGMENT_BITS - n);
                let mut segs: Vec<Option<&mut [CFx]>> = state.segments_mut().map(Some).collect();
                let mut pairs = Vec::with_capacity(segs.len() / 2);
                for id in 0..segs.len() {
                    if id & partner_bit == 0 {
                        let lo = segs[id].take().unwrap();
                        let hi = segs[id | partner_bit].take().unwrap();
                        pairs.push((lo, hi));
                    }
                }
                self.for_each_task(pairs, |(lo, hi)| update_zipped(&m, mode, lo, hi));
            }
        }
        cycles_single(n, &self.cfg)
    }

    /// Swaps every `(control=1, target=0)` amplitude with its target-flipped
    /// partner by running the swapper; returns its cycle count.
    pub fn apply_cx(&self, state: &mut StateVector, control: usize, target: usize) -> u64 {
        let n = state.n();
        assert!(control < n && target < n && control != target);
        let run = CxSwapper::new(n, control, target).run(state.amplitudes_mut(), false);
        debug_assert_eq!(run.cycles, cx_cycles(n));
        run.cycles
    }

    /// Applies `circuit` gate by gate in order.
    pub fn run_circuit(&self, state: &mut StateVector, circuit: &Circuit) -> Result<CycleReport> {
        let n = state.n();
        if circuit.n() != n {
            return Err(HpqeError::QubitMismatch {
                circuit: circuit.n(),
                state: n,
            });
        }
        let mut report = CycleReport::empty(n, memory_mode(n, &self.cfg)?);
        for (index, op) in circuit.ops().iter().enumerate() {
            let cycles = match op.kind {
                GateKind::Cx => self.apply_cx(state, op.control.unwrap(), op.target),
                _ => self.apply_single(state, op),
            };
            report.record(index, op, cycles);
        }
        Ok(report)
    }
}
