//! Analytic timing model.
//!
//! Compute time comes from the cycle counts the engine reports. States of up
//! to `bram_qubit_limit` qubits live in on-chip BRAM and incur no transfer
//! cost; larger states live in HBM and are streamed in once and out once per
//! circuit execution across all AXI ports, plus fixed per-transaction setup.
//!
//! `cycles_single` and `hbm_setup_cycles` are calibration points, not
//! measured hardware figures. With the defaults below a 17-qubit QFT lands at
//! about 0.0915 s. All fields can be overridden from a JSON config file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::CycleReport;
use crate::error::{HpqeError, Result, HARD_QUBIT_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum MemMode {
    Bram,
    Hbm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PerfConfig {
    /// Clock frequency in Hz.
    pub freq_hz: f64,
    /// Amplitude pairs the PE grid retires per cycle.
    pub pe_pairs_per_cycle: u64,
    /// Latency to fill the SU pipeline once per single-qubit gate.
    pub pipeline_fill: u64,
    /// AXI ports into HBM (two stacks of 16).
    pub hbm_ports: u64,
    /// 256-bit bus per port.
    pub bus_bytes_per_cycle_per_port: u64,
    /// Setup cost per bulk transaction (one load, one store).
    pub hbm_setup_cycles: u64,
    /// Largest qubit count held entirely in BRAM.
    pub bram_qubit_limit: usize,
}

impl Default for PerfConfig {
    fn default() -> Self {
        PerfConfig {
            freq_hz: 250e6,
            pe_pairs_per_cycle: 8,
            pipeline_fill: 4,
            hbm_ports: 32,
            bus_bytes_per_cycle_per_port: 32,
            hbm_setup_cycles: 200,
            bram_qubit_limit: 19,
        }
    }
}

impl PerfConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.freq_hz.is_finite() && self.freq_hz > 0.0) {
            return Err(HpqeError::Config("freq_hz must be positive".into()));
        }
        let ints = [
            ("pe_pairs_per_cycle", self.pe_pairs_per_cycle),
            ("pipeline_fill", self.pipeline_fill),
            ("hbm_ports", self.hbm_ports),
            (
                "bus_bytes_per_cycle_per_port",
                self.bus_bytes_per_cycle_per_port,
            ),
            ("hbm_setup_cycles", self.hbm_setup_cycles),
            ("bram_qubit_limit", self.bram_qubit_limit as u64),
        ];
        if let Some((name, _)) = ints.iter().find(|(_, v)| *v == 0) {
            return Err(HpqeError::Config(format!("{name} must be positive")));
        }
        if self.bram_qubit_limit >= HARD_QUBIT_LIMIT {
            return Err(HpqeError::Config(format!(
                "bram_qubit_limit must be below {HARD_QUBIT_LIMIT}"
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: PerfConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Which memory holds an `n`-qubit state.
pub fn memory_mode(n: usize, cfg: &PerfConfig) -> Result<MemMode> {
    if n > HARD_QUBIT_LIMIT {
        return Err(HpqeError::Capacity {
            n,
            limit: HARD_QUBIT_LIMIT,
        });
    }
    if n == 0 {
        return Err(HpqeError::InvalidQubitCount(n));
    }
    Ok(if n <= cfg.bram_qubit_limit {
        MemMode::Bram
    } else {
        MemMode::Hbm
    })
}

/// Cycles for one single-qubit gate over `2^(n-1)` amplitude pairs.
pub fn cycles_single(n: usize, cfg: &PerfConfig) -> u64 {
    let pairs = 1u64 << n.saturating_sub(1);
    pairs.div_ceil(cfg.pe_pairs_per_cycle) + cfg.pipeline_fill
}

/// Bulk load + store of the whole state over HBM, or `None` in BRAM mode.
pub fn transfer_overhead(n: usize, cfg: &PerfConfig) -> Option<u64> {
    match memory_mode(n, cfg) {
        Ok(MemMode::Hbm) => {
            let bytes = (1u64 << n) * 8;
            let per_cycle = cfg.hbm_ports * cfg.bus_bytes_per_cycle_per_port;
            Some(2 * bytes.div_ceil(per_cycle) + 2 * cfg.hbm_setup_cycles)
        }
        _ => None,
    }
}

/// Normalized gate speed: seconds per (gate x amplitude).
pub fn ngs(time_s: f64, gate_count: usize, n: usize) -> f64 {
    debug_assert!(gate_count >= 1);
    time_s / (gate_count as f64 * (n as f64).exp2())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeEstimate {
    pub compute_s: f64,
    pub transfer_s: f64,
    pub total_s: f64,
    pub ngs: f64,
}

/// Modeled device time for a circuit whose cycle accounting is `report`.
pub fn estimate_time(report: &CycleReport, n: usize, cfg: &PerfConfig) -> TimeEstimate {
    debug_assert_eq!(report.n, n);
    let compute_s = report.total_cycles as f64 / cfg.freq_hz;
    let transfer_s = transfer_overhead(n, cfg).map_or(0.0, |c| c as f64 / cfg.freq_hz);
    let total_s = compute_s + transfer_s;
    let gates = report.per_gate.len().max(1);
    TimeEstimate {
        compute_s,
        transfer_s,
        total_s,
        ngs: ngs(total_s, gates, n),
    }
}
