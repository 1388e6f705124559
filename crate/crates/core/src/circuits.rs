//! Benchmark circuit generators.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HpqeError, Result};
use crate::gateset::{Circuit, GateKind, GateOp};

/// QFT in the base set: for `q = n-1 .. 0`, `H(q)` followed by
/// `CP(pi / 2^(q-j))` controlled by each lower qubit `j`, then the
/// bit-reversal SWAPs. Every CP costs 5 gates and every SWAP 3.
pub fn qft(n: usize) -> Circuit {
    assert!(n >= 1, "qft needs at least one qubit");
    let mut c = Circuit::new(n);
    for q in (0..n).rev() {
        c.h(q).unwrap();
        for j in (0..q).rev() {
            let theta = PI / (1u64 << (q - j)) as f64;
            c.cp(theta, j, q).unwrap();
        }
    }
    for i in 0..n / 2 {
        c.swap(i, n - 1 - i).unwrap();
    }
    c
}

/// `n + 5 n(n-1)/2 + 3 floor(n/2)`
pub fn qft_gate_count(n: usize) -> usize {
    n + 5 * n * (n - 1) / 2 + 3 * (n / 2)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GateCounts {
    pub total: usize,
    pub cx: usize,
    pub single: usize,
}

pub fn gate_count(circuit: &Circuit) -> GateCounts {
    let cx = circuit
        .ops()
        .iter()
        .filter(|op| op.kind == GateKind::Cx)
        .count();
    GateCounts {
        total: circuit.len(),
        cx,
        single: circuit.len() - cx,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TopologyKind {
    /// CX between neighbours `q -> q+1`.
    Chain,
    /// CX on (even, odd) pairs, then (odd, even) pairs.
    Alternating,
    /// CX for every ordered pair.
    AllToAll,
    /// Rotations only.
    Rotation,
}

impl TopologyKind {
    pub const ALL: [TopologyKind; 4] = [
        TopologyKind::Chain,
        TopologyKind::Alternating,
        TopologyKind::AllToAll,
        TopologyKind::Rotation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TopologyKind::Chain => "chain",
            TopologyKind::Alternating => "alternating",
            TopologyKind::AllToAll => "all-to-all",
            TopologyKind::Rotation => "rotation",
        }
    }

    pub fn entangles(self) -> bool {
        self != TopologyKind::Rotation
    }

    /// Entangling pattern of one layer.
    pub fn cx_pairs(self, n: usize) -> Vec<(usize, usize)> {
        match self {
            TopologyKind::Chain => (0..n.saturating_sub(1)).map(|q| (q, q + 1)).collect(),
            TopologyKind::Alternating => {
                let even = (0..n.saturating_sub(1)).step_by(2).map(|q| (q, q + 1));
                let odd = (1..n.saturating_sub(1)).step_by(2).map(|q| (q, q + 1));
                even.chain(odd).collect()
            }
            TopologyKind::AllToAll => (0..n)
                .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
                .collect(),
            TopologyKind::Rotation => Vec::new(),
        }
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TopologyKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "chain" => Ok(TopologyKind::Chain),
            "alternating" => Ok(TopologyKind::Alternating),
            "all-to-all" | "alltoall" | "all_to_all" => Ok(TopologyKind::AllToAll),
            "rotation" => Ok(TopologyKind::Rotation),
            other => Err(format!("unknown topology `{other}`")),
        }
    }
}

/// Rotation angles a template needs: an Ry and an Rz per qubit per layer.
pub fn rotation_slots(n: usize, layers: usize) -> usize {
    2 * n * layers
}

/// Layered ansatz: each layer is an Ry column, an Rz column, then the
/// topology's CX pattern. `angles` are consumed layer by layer, Ry slots
/// before Rz slots, qubit 0 first.
pub fn template(kind: TopologyKind, n: usize, layers: usize, angles: &[f64]) -> Result<Circuit> {
    if n == 0 || (kind.entangles() && n < 2) {
        return Err(HpqeError::InvalidQubitCount(n));
    }
    let expected = rotation_slots(n, layers);
    if angles.len() != expected {
        return Err(HpqeError::AngleCount {
            expected,
            got: angles.len(),
        });
    }
    let pairs = kind.cx_pairs(n);
    let mut c = Circuit::new(n);
    for layer in angles.chunks_exact(2 * n) {
        let (ry, rz) = layer.split_at(n);
        for (q, &theta) in ry.iter().enumerate() {
            c.ry(q, theta)?;
        }
        for (q, &theta) in rz.iter().enumerate() {
            c.rz(q, theta)?;
        }
        for &(a, b) in &pairs {
            c.cx(a, b)?;
        }
    }
    Ok(c)
}

/// Template with angles drawn uniformly from `[-pi, pi)`.
pub fn random_template(kind: TopologyKind, n: usize, layers: usize, seed: u64) -> Result<Circuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let angles: Vec<f64> = (0..rotation_slots(n, layers))
        .map(|_| rng.random_range(-PI..PI))
        .collect();
    template(kind, n, layers, &angles)
}

/// Uniform mix of base-set gates on random qubits.
pub fn random_circuit(n: usize, gates: usize, seed: u64) -> Circuit {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinds: &[GateKind] = if n >= 2 {
        &[
            GateKind::H,
            GateKind::S,
            GateKind::Rx,
            GateKind::Ry,
            GateKind::Rz,
            GateKind::Cx,
        ]
    } else {
        &[
            GateKind::H,
            GateKind::S,
            GateKind::Rx,
            GateKind::Ry,
            GateKind::Rz,
        ]
    };
    let mut c = Circuit::new(n);
    for _ in 0..gates {
        let kind = kinds[rng.random_range(0..kinds.len())];
        let op = match kind {
            GateKind::Cx => {
                let control = rng.random_range(0..n);
                let mut target = rng.random_range(0..n - 1);
                if target >= control {
                    target += 1;
                }
                GateOp::cx(control, target)
            }
            k => GateOp::new(k, &[rng.random_range(0..n)], rng.random_range(-PI..PI)).unwrap(),
        };
        c.push(op).unwrap();
    }
    c
}
