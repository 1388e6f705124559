//! Software model of a dual-PEA FPGA state-vector quantum accelerator.
//!
//! The crate reproduces the machine at three levels:
//!
//! * numerics: amplitudes are Q2.30 fixed-point words ([`fxp`]) and every
//!   gate update goes through the same SU arithmetic the hardware uses
//!   ([`engine`]), so results are bit-exact for a given rounding mode;
//! * schedule: CX gates run on a cycle-level model of the pipelined swapper
//!   and single-qubit gates are charged by an analytic PE-array model;
//! * timing: [`perfmodel`] turns cycle counts into device time, including
//!   the BRAM/HBM switch at 20 qubits.
//!
//! [`oracle`] is an independent double-precision reference used to score the
//! fixed-point results.
//!
//! Qubit 0 is the least-significant bit of the basis index throughout.

pub mod circuits;
pub mod engine;
pub mod error;
pub mod fxp;
pub mod gateset;
pub mod oracle;
pub mod perfmodel;
pub mod state;

pub use circuits::{gate_count, qft, template, GateCounts, TopologyKind};
pub use engine::{access_mode, account_cycles, AccessMode, CycleReport, Engine};
pub use error::{HpqeError, Result, HARD_QUBIT_LIMIT};
pub use fxp::{CFx, Fx32, SuMode};
pub use gateset::{Circuit, GateKind, GateOp};
pub use oracle::{Metrics, RefState};
pub use perfmodel::{estimate_time, MemMode, PerfConfig, TimeEstimate};
pub use state::StateVector;
