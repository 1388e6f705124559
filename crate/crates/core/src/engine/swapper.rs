//! Cycle-level model of the pipelined CX swapper.
//!
//! ```text
//! Start -> IDLE -> LOAD -> STORE -> LOAD -> STORE ... -> End
//! ```
//!
//! `Start` opens the read channel, `IDLE` computes the first pair's
//! addresses, each `LOAD` reads one pair, and each `STORE` writes the pair
//! back exchanged while computing the next pair's addresses. Writes issued in
//! a `STORE` retire at the start of the following cycle, so `End` exists to
//! retire the last pair. Total: `2 * (2^(n-2) + 1) + 1` cycles.

use serde::{Deserialize, Serialize};

use crate::fxp::CFx;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SwapStage {
    Start,
    Idle,
    Load,
    Store,
    End,
}

impl SwapStage {
    pub const ALL: [SwapStage; 5] = [
        SwapStage::Start,
        SwapStage::Idle,
        SwapStage::Load,
        SwapStage::Store,
        SwapStage::End,
    ];

    fn slot(self) -> usize {
        self as usize
    }
}

/// Closed form of the pipelined schedule.
pub fn cx_cycles(n: usize) -> u64 {
    debug_assert!(n >= 2);
    2 * ((1u64 << (n - 2)) + 1) + 1
}

/// Sequential predecessor: 1 index cycle, 2 load cycles, 2 store cycles per pair.
pub fn cx_cycles_legacy(n: usize) -> u64 {
    debug_assert!(n >= 2);
    5 * (1u64 << (n - 2))
}

/// Backing store the swapper reads and writes.
pub trait SwapMemory {
    fn read(&self, index: usize) -> CFx;
    fn write(&mut self, index: usize, value: CFx);
}

impl SwapMemory for [CFx] {
    #[inline]
    fn read(&self, index: usize) -> CFx {
        self[index]
    }

    #[inline]
    fn write(&mut self, index: usize, value: CFx) {
        self[index] = value;
    }
}

/// Memory that discards writes, for schedule-only runs.
pub struct NullMemory;

impl SwapMemory for NullMemory {
    fn read(&self, _: usize) -> CFx {
        CFx::ZERO
    }

    fn write(&mut self, _: usize, _: CFx) {}
}

#[inline]
fn insert_zero_bit(x: usize, pos: usize) -> usize {
    let low = x & ((1 << pos) - 1);
    ((x >> pos) << (pos + 1)) | low
}

/// Global indices `(control=1,target=0)` and `(control=1,target=1)` of the
/// `k`-th pair, enumerating compressed indices in ascending order.
#[inline]
pub fn pair_addresses(k: usize, control: usize, target: usize) -> (usize, usize) {
    let (lo, hi) = if control < target {
        (control, target)
    } else {
        (target, control)
    };
    let base = insert_zero_bit(insert_zero_bit(k, lo), hi) | (1 << control);
    (base, base | (1 << target))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SwapperState {
    pub stage: SwapStage,
    pub pair_counter: u64,
    pub pending: (usize, usize),
}

/// Result of one full swapper run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SwapperRun {
    pub cycles: u64,
    pub pairs: u64,
    pub writes_retired: u64,
    /// Cycles per stage, indexed Start, Idle, Load, Store, End.
    pub stage_cycles: [u64; 5],
    /// Stage executed in each cycle, when recording was requested.
    pub trace: Vec<SwapStage>,
}

impl SwapperRun {
    pub fn stage_count(&self, stage: SwapStage) -> u64 {
        self.stage_cycles[stage.slot()]
    }
}

pub struct CxSwapper {
    control: usize,
    target: usize,
    pairs: u64,
    state: Option<SwapperState>,
    regs: (CFx, CFx),
    inflight: [(usize, CFx); 2],
    inflight_len: usize,
    writes_retired: u64,
}

impl CxSwapper {
    pub fn new(n: usize, control: usize, target: usize) -> Self {
        debug_assert!(n >= 2 && control != target && control < n && target < n);
        CxSwapper {
            control,
            target,
            pairs: 1 << (n - 2),
            state: Some(SwapperState {
                stage: SwapStage::Start,
                pair_counter: 0,
                pending: (0, 0),
            }),
            regs: (CFx::ZERO, CFx::ZERO),
            inflight: [(0, CFx::ZERO); 2],
            inflight_len: 0,
            writes_retired: 0,
        }
    }

    pub fn state(&self) -> Option<SwapperState> {
        self.state
    }

    pub fn writes_retired(&self) -> u64 {
        self.writes_retired
    }

    pub fn inflight_writes(&self) -> usize {
        self.inflight_len
    }

    fn retire<M: SwapMemory + ?Sized>(&mut self, mem: &mut M) {
        for &(index, value) in &self.inflight[..self.inflight_len] {
            mem.write(index, value);
        }
        self.writes_retired += self.inflight_len as u64;
        self.inflight_len = 0;
    }

    /// Runs one clock cycle. Returns the stage that executed, or `None`
    /// once `End` has completed.
    pub fn step<M: SwapMemory + ?Sized>(&mut self, mem: &mut M) -> Option<SwapStage> {
        let mut st = self.state?;
        self.retire(mem);
        let executed = st.stage;
        match st.stage {
            SwapStage::Start => st.stage = SwapStage::Idle,
            SwapStage::Idle => {
                st.pending = pair_addresses(0, self.control, self.target);
                st.stage = SwapStage::Load;
            }
            SwapStage::Load => {
                self.regs = (mem.read(st.pending.0), mem.read(st.pending.1));
                st.stage = SwapStage::Store;
            }
            SwapStage::Store => {
                self.inflight = [(st.pending.0, self.regs.1), (st.pending.1, self.regs.0)];
                self.inflight_len = 2;
                st.pair_counter += 1;
                if st.pair_counter < self.pairs {
                    st.pending =
                        pair_addresses(st.pair_counter as usize, self.control, self.target);
                    st.stage = SwapStage::Load;
                } else {
                    st.stage = SwapStage::End;
                }
            }
            SwapStage::End => {
                self.state = None;
                return Some(executed);
            }
        }
        self.state = Some(st);
        Some(executed)
    }

    /// Steps to completion.
    pub fn run<M: SwapMemory + ?Sized>(mut self, mem: &mut M, record_trace: bool) -> SwapperRun {
        let mut run = SwapperRun::default();
        if record_trace {
            run.trace.reserve(cx_cycles_from_pairs(self.pairs) as usize);
        }
        while let Some(stage) = self.step(mem) {
            run.cycles += 1;
            run.stage_cycles[stage.slot()] += 1;
            if record_trace {
                run.trace.push(stage);
            }
        }
        debug_assert_eq!(self.inflight_len, 0);
        run.pairs = self.pairs;
        run.writes_retired = self.writes_retired;
        run
    }
}

fn cx_cycles_from_pairs(pairs: u64) -> u64 {
    2 * (pairs + 1) + 1
}

/// Schedule-only run with the full per-cycle trace.
pub fn simulate_swapper(n: usize) -> SwapperRun {
    CxSwapper::new(n, 1, 0).run(&mut NullMemory, true)
}

/// Schedule-only run without storing the trace.
pub fn count_swapper_cycles(n: usize) -> SwapperRun {
    CxSwapper::new(n, 1, 0).run(&mut NullMemory, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(cx_cycles(17), 65_539);
        assert_eq!(cx_cycles(2), 5);
        assert_eq!(cx_cycles(3), 7);
        assert_eq!(cx_cycles_legacy(17), 163_840);
        assert_eq!(cx_cycles_legacy(2), 5);
        let ratio = cx_cycles_legacy(17) as f64 / cx_cycles(17) as f64;
        assert!((ratio - 163_840.0 / 65_539.0).abs() < 1e-12);
        assert!((ratio - 2.5).abs() < 0.001);
    }

    #[test]
    fn small_traces() {
        use SwapStage::*;
        assert_eq!(
            simulate_swapper(2).trace,
            vec![Start, Idle, Load, Store, End]
        );
        assert_eq!(
            simulate_swapper(3).trace,
            vec![Start, Idle, Load, Store, Load, Store, End]
        );
    }

    #[test]
    fn trace_properties() {
        for n in 2..=14 {
            let run = simulate_swapper(n);
            assert_eq!(run.cycles, cx_cycles(n));
            assert_eq!(run.trace.len() as u64, run.cycles);
            assert_eq!(run.stage_count(SwapStage::Idle), 1);
            assert_eq!(run.stage_count(SwapStage::Start), 1);
            assert_eq!(run.stage_count(SwapStage::End), 1);
            assert_eq!(run.stage_count(SwapStage::Load), 1 << (n - 2));
            assert_eq!(run.stage_count(SwapStage::Store), 1 << (n - 2));
            assert_eq!(run.pairs, 1 << (n - 2));
            assert_eq!(run.writes_retired, 2 << (n - 2));
            let body = &run.trace[2..run.trace.len() - 1];
            for (k, s) in body.iter().enumerate() {
                assert_eq!(
                    *s,
                    if k % 2 == 0 {
                        SwapStage::Load
                    } else {
                        SwapStage::Store
                    }
                );
            }
            let total: u64 = SwapStage::ALL.iter().map(|&s| run.stage_count(s)).sum();
            assert_eq!(total, run.cycles);
        }
    }

    #[test]
    fn pair_enumeration() {
        // control 2, target 0 on 3 qubits: pairs (4,5), (6,7)
        assert_eq!(pair_addresses(0, 2, 0), (4, 5));
        assert_eq!(pair_addresses(1, 2, 0), (6, 7));
        // control 0, target 2: pairs (1,5), (3,7)
        assert_eq!(pair_addresses(0, 0, 2), (1, 5));
        assert_eq!(pair_addresses(1, 0, 2), (3, 7));
        for n in 2..=8 {
            for c in 0..n {
                for t in (0..n).filter(|&t| t != c) {
                    let mut seen = Vec::new();
                    for k in 0..1 << (n - 2) {
                        let (a, b) = pair_addresses(k, c, t);
                        assert_eq!(a >> c & 1, 1);
                        assert_eq!(a >> t & 1, 0);
                        assert_eq!(b, a | 1 << t);
                        seen.push(a);
                    }
                    assert!(seen.windows(2).all(|w| w[0] < w[1]));
                }
            }
        }
    }

    #[test]
    fn writes_retire_one_cycle_late() {
        let mut mem = vec![
            CFx::from_raw(0, 0),
            CFx::from_raw(1, 0),
            CFx::from_raw(2, 0),
            CFx::from_raw(3, 0),
        ];
        let mut sw = CxSwapper::new(2, 1, 0);
        let stages: Vec<_> = (0..4)
            .map(|_| sw.step(mem.as_mut_slice()).unwrap())
            .collect();
        assert_eq!(stages.last(), Some(&SwapStage::Store));
        // STORE issued, not yet retired
        assert_eq!(sw.inflight_writes(), 2);
        assert_eq!(mem[2].re.raw(), 2);
        assert_eq!(sw.step(mem.as_mut_slice()), Some(SwapStage::End));
        assert_eq!(sw.inflight_writes(), 0);
        assert_eq!(sw.writes_retired(), 2);
        assert_eq!((mem[2].re.raw(), mem[3].re.raw()), (3, 2));
        assert_eq!(sw.step(mem.as_mut_slice()), None);
    }
}
