//! Where a command's circuit comes from: a generator or a circuit file.

use std::fmt;
use std::path::Path;

use clap::ValueEnum;
use hpqe_core::circuits::{qft, random_circuit, random_template};
use hpqe_core::{Circuit, HpqeError, TopologyKind, HARD_QUBIT_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Generator {
    Qft,
    Chain,
    Alternating,
    AllToAll,
    Rotation,
    Random,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::Qft => "qft",
            Generator::Chain => "chain",
            Generator::Alternating => "alternating",
            Generator::AllToAll => "all-to-all",
            Generator::Rotation => "rotation",
            Generator::Random => "random",
        }
    }

    fn topology(self) -> Option<TopologyKind> {
        match self {
            Generator::Chain => Some(TopologyKind::Chain),
            Generator::Alternating => Some(TopologyKind::Alternating),
            Generator::AllToAll => Some(TopologyKind::AllToAll),
            Generator::Rotation => Some(TopologyKind::Rotation),
            Generator::Qft | Generator::Random => None,
        }
    }

    /// Gates drawn by the random generator when no count is given.
    pub fn default_random_gates(n: usize) -> usize {
        10 * n
    }

    /// Builds the circuit. `depth` is the layer count for topology templates
    /// and the gate count for `random`; QFT has no depth.
    pub fn build(self, n: usize, depth: Option<usize>, seed: u64) -> hpqe_core::Result<Circuit> {
        // refuse before building: generator cost grows with n
        if n > HARD_QUBIT_LIMIT {
            return Err(HpqeError::Capacity {
                n,
                limit: HARD_QUBIT_LIMIT,
            });
        }
        if n == 0 {
            return Err(HpqeError::InvalidQubitCount(0));
        }
        match (self, self.topology()) {
            (Generator::Qft, _) => Ok(qft(n)),
            (Generator::Random, _) => Ok(random_circuit(
                n,
                depth.unwrap_or_else(|| Self::default_random_gates(n)),
                seed,
            )),
            (_, Some(kind)) => random_template(kind, n, depth.unwrap_or(1), seed),
            (_, None) => unreachable!(),
        }
    }

    /// Row label, e.g. `qft`, `chain/L2`, `random/g40`.
    pub fn label(self, n: usize, depth: Option<usize>) -> String {
        match self {
            Generator::Qft => "qft".into(),
            Generator::Random => format!(
                "random/g{}",
                depth.unwrap_or_else(|| Self::default_random_gates(n))
            ),
            g => format!("{}/L{}", g.name(), depth.unwrap_or(1)),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Reads a circuit file. A file without a `QUBITS` header takes its width
/// from `n`; when both are present they must agree.
pub fn load_circuit(path: &Path, n: Option<usize>) -> anyhow::Result<Circuit> {
    let text = std::fs::read_to_string(path)?;
    let has_header = text.lines().any(|l| {
        l.split('#')
            .next()
            .and_then(|s| s.split_whitespace().next())
            .is_some_and(|w| w.eq_ignore_ascii_case("QUBITS"))
    });
    let circuit = match (has_header, n) {
        (true, _) => Circuit::parse(&text)?,
        (false, Some(n)) => {
            if n > HARD_QUBIT_LIMIT {
                return Err(HpqeError::Capacity {
                    n,
                    limit: HARD_QUBIT_LIMIT,
                }
                .into());
            }
            Circuit::parse(&format!("QUBITS {n}\n{text}"))?
        }
        (false, None) => anyhow::bail!(UsageError(format!(
            "{} has no QUBITS header; pass --n",
            path.display()
        ))),
    };
    if let Some(n) = n {
        if n != circuit.n() {
            anyhow::bail!(UsageError(format!(
                "--n {n} disagrees with the {}-qubit circuit in {}",
                circuit.n(),
                path.display()
            )));
        }
    }
    Ok(circuit)
}

/// Bad flag combination detected after argument parsing.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(Generator::Qft.label(5, None), "qft");
        assert_eq!(Generator::Chain.label(5, Some(2)), "chain/L2");
        assert_eq!(Generator::AllToAll.label(5, None), "all-to-all/L1");
        assert_eq!(Generator::Random.label(4, None), "random/g40");
    }

    #[test]
    fn build_checks_width_first() {
        assert!(matches!(
            Generator::Qft.build(1_000_000, None, 0),
            Err(HpqeError::Capacity { .. })
        ));
        assert!(Generator::Chain.build(0, None, 0).is_err());
        assert_eq!(Generator::Random.build(3, Some(7), 1).unwrap().len(), 7);
        assert_eq!(Generator::Qft.build(17, None, 0).unwrap().len(), 721);
    }

    #[test]
    fn value_names() {
        for g in Generator::value_variants() {
            let v = g.to_possible_value().unwrap();
            assert_eq!(v.get_name(), g.name());
        }
    }
}
