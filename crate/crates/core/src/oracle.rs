//! Double-precision reference simulator and state comparison metrics.
//!
//! Two independent routes compute a circuit's output: [`ref_run`] applies
//! exact 2x2 and CX actions gate by gate, and [`ref_run_matrix`] builds
//! every gate's full operator from Kronecker products, multiplies them into
//! one unitary and applies that. Both multiply by `e^{i global_phase}` at the
//! end, so they reproduce the untranspiled circuit's action.
//!
//! All reductions run sequentially in index order.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HpqeError, Result};
use crate::gateset::{Circuit, GateKind, GateOp, Mat2};
use crate::state::StateVector;

/// Largest circuit the matrix route accepts (64 x 64 operators).
pub const MATRIX_ORACLE_MAX_QUBITS: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct RefState {
    pub n: usize,
    pub amps: Vec<Complex64>,
}

impl RefState {
    pub fn basis(n: usize, k: usize) -> Self {
        assert!(k < 1 << n);
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[k] = Complex64::new(1.0, 0.0);
        RefState { n, amps }
    }

    pub fn from_amps(amps: Vec<Complex64>) -> Self {
        assert!(amps.len().is_power_of_two());
        RefState {
            n: amps.len().trailing_zeros() as usize,
            amps,
        }
    }

    /// Real-valued view of a fixed-point state, rotated by `phase`.
    pub fn from_fixed(state: &StateVector, phase: f64) -> Self {
        let rot = Complex64::from_polar(1.0, phase);
        RefState {
            n: state.n(),
            amps: state
                .amplitudes()
                .iter()
                .map(|a| a.to_complex() * rot)
                .collect(),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn scale(&mut self, factor: Complex64) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }
}

fn apply_mat2(amps: &mut [Complex64], m: &Mat2, target: usize) {
    let stride = 1 << target;
    for i in (0..amps.len()).filter(|i| i & stride == 0) {
        let (x, y) = (amps[i], amps[i | stride]);
        amps[i] = m[0][0] * x + m[0][1] * y;
        amps[i | stride] = m[1][0] * x + m[1][1] * y;
    }
}

fn apply_cx(amps: &mut [Complex64], control: usize, target: usize) {
    for i in 0..amps.len() {
        if (i >> control) & 1 == 1 && (i >> target) & 1 == 0 {
            amps.swap(i, i | 1 << target);
        }
    }
}

/// Gate-by-gate exact simulation.
pub fn ref_run(circuit: &Circuit, init: &RefState) -> Result<RefState> {
    if circuit.n() != init.n {
        return Err(HpqeError::QubitMismatch {
            circuit: circuit.n(),
            state: init.n,
        });
    }
    let mut out = init.clone();
    for op in circuit.ops() {
        match op.exact_matrix() {
            Some(m) => apply_mat2(&mut out.amps, &m, op.target),
            None => apply_cx(&mut out.amps, op.control.unwrap(), op.target),
        }
    }
    out.scale(Complex64::from_polar(1.0, circuit.global_phase()));
    Ok(out)
}

fn to_dmatrix(m: &Mat2) -> DMatrix<Complex64> {
    DMatrix::from_fn(2, 2, |r, c| m[r][c])
}

/// Full `2^n x 2^n` operator of one gate. Qubit 0 is the rightmost factor.
pub fn gate_operator(op: &GateOp, n: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n;
    match op.kind {
        GateKind::Cx => {
            let (c, t) = (op.control.unwrap(), op.target);
            let mut p = DMatrix::zeros(dim, dim);
            for col in 0..dim {
                let row = if (col >> c) & 1 == 1 {
                    col ^ (1 << t)
                } else {
                    col
                };
                p[(row, col)] = Complex64::new(1.0, 0.0);
            }
            p
        }
        _ => {
            let t = op.target;
            let g = to_dmatrix(&op.exact_matrix().unwrap());
            let high = DMatrix::<Complex64>::identity(1 << (n - 1 - t), 1 << (n - 1 - t));
            let low = DMatrix::<Complex64>::identity(1 << t, 1 << t);
            high.kronecker(&g).kronecker(&low)
        }
    }
}

/// Product of all gate operators, including the global phase.
pub fn circuit_unitary(circuit: &Circuit) -> Result<DMatrix<Complex64>> {
    let n = circuit.n();
    if n > MATRIX_ORACLE_MAX_QUBITS {
        return Err(HpqeError::Size {
            n,
            max: MATRIX_ORACLE_MAX_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mut u = DMatrix::<Complex64>::identity(dim, dim);
    for op in circuit.ops() {
        u = gate_operator(op, n) * u;
    }
    Ok(u * Complex64::from_polar(1.0, circuit.global_phase()))
}

/// Whole-operator simulation.
pub fn ref_run_matrix(circuit: &Circuit, init: &RefState) -> Result<RefState> {
    if circuit.n() != init.n {
        return Err(HpqeError::QubitMismatch {
            circuit: circuit.n(),
            state: init.n,
        });
    }
    let u = circuit_unitary(circuit)?;
    let psi = nalgebra::DVector::from_column_slice(&init.amps);
    Ok(RefState {
        n: init.n,
        amps: (u * psi).iter().copied().collect(),
    })
}

pub fn max_norm_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Max-norm distance between two operators after removing the best global
/// phase from `b`.
pub fn distance_up_to_phase(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    let overlap: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    let rot = Complex64::from_polar(1.0, -overlap.arg());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y * rot).norm())
        .fold(0.0, f64::max)
}

fn check_lengths(a: &[Complex64], b: &[Complex64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(HpqeError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `|<a|b>|^2`.
pub fn fidelity(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    check_lengths(a, b)?;
    Ok(inner(a, b).norm_sqr())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mse {
    pub raw: f64,
    pub aligned: f64,
    /// `arg <a|b>`, in `(-pi, pi]`.
    pub phase: f64,
}

/// Per-amplitude mean squared error, raw and after removing the global
/// phase `arg <a|b>` from `b`.
pub fn mse(a: &[Complex64], b: &[Complex64]) -> Result<Mse> {
    check_lengths(a, b)?;
    let len = a.len().max(1) as f64;
    let raw = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        / len;
    let overlap = inner(a, b);
    let mut phase = overlap.arg();
    if phase == -std::f64::consts::PI {
        phase = std::f64::consts::PI;
    }
    let rot = Complex64::from_polar(1.0, -phase);
    let aligned = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y * rot).norm_sqr())
        .sum::<f64>()
        / len;
    Ok(Mse {
        raw,
        // rounding can leave the aligned sum a hair above raw when they coincide
        aligned: aligned.min(raw),
        phase,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub fidelity: f64,
    pub mse_raw: f64,
    pub mse_aligned: f64,
    pub phase: f64,
    pub n: usize,
    pub gates: usize,
}

impl Metrics {
    pub fn compute(a: &[Complex64], b: &[Complex64], gates: usize) -> Result<Self> {
        let m = mse(a, b)?;
        Ok(Metrics {
            fidelity: fidelity(a, b)?,
            mse_raw: m.raw,
            mse_aligned: m.aligned,
            phase: m.phase,
            n: a.len().trailing_zeros() as usize,
            gates,
        })
    }

    /// Fixed-point result (with the circuit's global phase applied on the
    /// host) against the reference result.
    pub fn of_fixed(fixed: &StateVector, reference: &RefState, circuit: &Circuit) -> Result<Self> {
        let device = RefState::from_fixed(fixed, circuit.global_phase());
        Self::compute(&reference.amps, &device.amps, circuit.len())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metrics serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{qft, random_circuit};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn empty_and_hadamard() {
        let init = RefState::basis(3, 5);
        assert_eq!(ref_run(&Circuit::new(3), &init).unwrap(), init);
        let mut circ = Circuit::new(1);
        circ.h(0).unwrap();
        let out = ref_run(&circ, &RefState::basis(1, 0)).unwrap();
        assert!(max_norm_diff(&out.amps, &[c(FRAC_1_SQRT_2, 0.0); 2]) <= f64::EPSILON);
    }

    #[test]
    fn qft4_is_uniform_and_matches_dft() {
        let n = 4;
        let dim = 1usize << n;
        for k in 0..dim {
            let out = ref_run(&qft(n), &RefState::basis(n, k)).unwrap();
            for (j, a) in out.amps.iter().enumerate() {
                // QFT|k> = 2^{-n/2} sum_j e^{2 pi i jk / 2^n} |j>
                let want = Complex64::from_polar(0.25, 2.0 * PI * (j * k) as f64 / dim as f64);
                assert!((a - want).norm() < 1e-12, "k={k} j={j}: {a} vs {want}");
            }
        }
    }

    #[test]
    fn cx_operator_is_permutation() {
        let mut circ = Circuit::new(2);
        circ.cx(1, 0).unwrap();
        let u = circuit_unitary(&circ).unwrap();
        let mut expected = DMatrix::<Complex64>::identity(4, 4);
        expected.swap_columns(2, 3);
        assert_eq!(u, expected);
        assert_eq!(
            circuit_unitary(&Circuit::new(3)).unwrap(),
            DMatrix::identity(8, 8)
        );
    }

    #[test]
    fn matrix_route_agrees_with_gate_route() {
        for seed in 0..10 {
            let circ = random_circuit(4, 20, seed);
            let init = RefState::basis(4, seed as usize % 16);
            let a = ref_run(&circ, &init).unwrap();
            let b = ref_run_matrix(&circ, &init).unwrap();
            assert!(max_norm_diff(&a.amps, &b.amps) < 1e-12);
        }
        assert!(matches!(
            ref_run_matrix(&Circuit::new(7), &RefState::basis(7, 0)),
            Err(HpqeError::Size { n: 7, .. })
        ));
    }

    #[test]
    fn unitarity_over_many_gates() {
        let circ = random_circuit(6, 1000, 11);
        let out = ref_run(&circ, &RefState::basis(6, 3)).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_examples() {
        let psi = ref_run(&random_circuit(3, 15, 2), &RefState::basis(3, 0))
            .unwrap()
            .amps;
        assert!((fidelity(&psi, &psi).unwrap() - 1.0).abs() < 1e-12);
        let zero = RefState::basis(1, 0).amps;
        let one = RefState::basis(1, 1).amps;
        assert_eq!(fidelity(&zero, &one).unwrap(), 0.0);
        for phi in [0.3, -1.2, PI] {
            let rotated: Vec<_> = psi
                .iter()
                .map(|a| a * Complex64::from_polar(1.0, phi))
                .collect();
            assert!((fidelity(&psi, &rotated).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(matches!(
            fidelity(&zero, &psi),
            Err(HpqeError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn mse_examples() {
        let psi = vec![c(0.6, 0.0), c(0.0, 0.8)];
        let m = mse(&psi, &psi).unwrap();
        assert_eq!((m.raw, m.aligned, m.phase), (0.0, 0.0, 0.0));

        let neg: Vec<_> = psi.iter().map(|a| -a).collect();
        let m = mse(&psi, &neg).unwrap();
        assert!(m.aligned < 1e-30);
        assert!((m.phase - PI).abs() < 1e-15);
        assert!((m.raw - 4.0 / 2.0).abs() < 1e-15);

        let rot: Vec<_> = psi
            .iter()
            .map(|a| a * Complex64::from_polar(1.0, 0.7))
            .collect();
        let m = mse(&psi, &rot).unwrap();
        assert!((m.phase - 0.7).abs() < 1e-12);
        assert!(m.aligned < 1e-30);
        assert!(m.raw > 0.1);
    }

    #[test]
    fn metrics_json_fields() {
        let psi = RefState::basis(2, 1).amps;
        let m = Metrics::compute(&psi, &psi, 3).unwrap();
        let v: serde_json::Value = serde_json::from_str(&m.to_json()).unwrap();
        for key in ["fidelity", "mse_raw", "mse_aligned", "phase", "n", "gates"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["n"], 2);
    }
}
