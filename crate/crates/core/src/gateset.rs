//! Gate IR for the base set `{H, S, Rx, Ry, Rz, CX}`.
//!
//! Angles stay in `f64` on the host; only the resulting 2x2 matrices are
//! quantized, once, when a gate is built. Composite gates (CP, SWAP, CRx)
//! are transpiled into the base set as they are appended to a [`Circuit`].
//!
//! `Circuit::global_phase` is the phase `phi` such that
//! `e^{i phi} * U_transpiled = U_original`. The fixed-point engine never
//! applies it; reference comparisons do.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HpqeError, Result};
use crate::fxp::{CFx, SuMode};

/// Exact 2x2 matrix, row-major.
pub type Mat2 = [[Complex64; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    H,
    S,
    Rx,
    Ry,
    Rz,
    Cx,
}

impl GateKind {
    pub fn is_single(self) -> bool {
        self != GateKind::Cx
    }

    /// Diagonal gates run the SUs in sparse mode.
    pub fn is_sparse(self) -> bool {
        matches!(self, GateKind::S | GateKind::Rz)
    }

    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Ry | GateKind::Rz)
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::Rx => "RX",
            GateKind::Ry => "RY",
            GateKind::Rz => "RZ",
            GateKind::Cx => "CX",
        }
    }

    fn code(self) -> u8 {
        match self {
            GateKind::H => 0,
            GateKind::S => 1,
            GateKind::Rx => 2,
            GateKind::Ry => 3,
            GateKind::Rz => 4,
            GateKind::Cx => 5,
        }
    }

    fn from_code(code: u8) -> Option<Self> {
        Some(match code {
            0 => GateKind::H,
            1 => GateKind::S,
            2 => GateKind::Rx,
            3 => GateKind::Ry,
            4 => GateKind::Rz,
            5 => GateKind::Cx,
            _ => return None,
        })
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

impl FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "H" => GateKind::H,
            "S" => GateKind::S,
            "RX" => GateKind::Rx,
            "RY" => GateKind::Ry,
            "RZ" => GateKind::Rz,
            "CX" | "CNOT" => GateKind::Cx,
            other => return Err(format!("unknown gate `{other}`")),
        })
    }
}

/// Exact unitary of a single-qubit kind, `None` for CX.
pub fn matrix_of(kind: GateKind, angle: f64) -> Option<Mat2> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let (cos, sin) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    Some(match kind {
        GateKind::H => {
            let h = c(FRAC_1_SQRT_2, 0.0);
            [[h, h], [h, -h]]
        }
        GateKind::S => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]],
        GateKind::Rx => [[c(cos, 0.0), c(0.0, -sin)], [c(0.0, -sin), c(cos, 0.0)]],
        GateKind::Ry => [[c(cos, 0.0), c(-sin, 0.0)], [c(sin, 0.0), c(cos, 0.0)]],
        GateKind::Rz => [[c(cos, -sin), c(0.0, 0.0)], [c(0.0, 0.0), c(cos, sin)]],
        GateKind::Cx => return None,
    })
}

/// One base-set instruction as delivered to the accelerator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    pub target: usize,
    pub control: Option<usize>,
    /// Radians; zero for H, S and CX.
    pub angle: f64,
    /// Quantized `[m00, m01, m10, m11]`; all zero for CX.
    pub matrix: [CFx; 4],
    pub sparse: bool,
}

impl GateOp {
    fn single(kind: GateKind, target: usize, angle: f64) -> Self {
        quantize_gate(GateOp {
            kind,
            target,
            control: None,
            angle,
            matrix: [CFx::ZERO; 4],
            sparse: kind.is_sparse(),
        })
    }

    pub fn h(q: usize) -> Self {
        Self::single(GateKind::H, q, 0.0)
    }

    pub fn s(q: usize) -> Self {
        Self::single(GateKind::S, q, 0.0)
    }

    pub fn rx(q: usize, theta: f64) -> Self {
        Self::single(GateKind::Rx, q, theta)
    }

    pub fn ry(q: usize, theta: f64) -> Self {
        Self::single(GateKind::Ry, q, theta)
    }

    pub fn rz(q: usize, theta: f64) -> Self {
        Self::single(GateKind::Rz, q, theta)
    }

    pub fn cx(control: usize, target: usize) -> Self {
        GateOp {
            kind: GateKind::Cx,
            target,
            control: Some(control),
            angle: 0.0,
            matrix: [CFx::ZERO; 4],
            sparse: false,
        }
    }

    pub fn new(kind: GateKind, qubits: &[usize], angle: f64) -> Result<Self> {
        let arity = if kind.is_single() { 1 } else { 2 };
        if qubits.len() != arity {
            return Err(HpqeError::Format(format!(
                "{kind} takes {arity} qubit(s), got {}",
                qubits.len()
            )));
        }
        Ok(match kind {
            GateKind::Cx => Self::cx(qubits[0], qubits[1]),
            _ => Self::single(kind, qubits[0], angle),
        })
    }

    pub fn su_mode(&self) -> SuMode {
        if self.sparse {
            SuMode::Sparse
        } else {
            SuMode::Dense
        }
    }

    /// Exact unitary, `None` for CX.
    pub fn exact_matrix(&self) -> Option<Mat2> {
        matrix_of(self.kind, self.angle)
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> {
        self.control.into_iter().chain(std::iter::once(self.target))
    }
}

/// Fills in the quantized matrix for a single-qubit op.
pub fn quantize_gate(mut op: GateOp) -> GateOp {
    if let Some(m) = matrix_of(op.kind, op.angle) {
        op.matrix = [
            CFx::quantize(m[0][0]),
            CFx::quantize(m[0][1]),
            CFx::quantize(m[1][0]),
            CFx::quantize(m[1][1]),
        ];
        op.sparse = op.kind.is_sparse();
    }
    op
}

/// A base-set expansion of a composite gate.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub ops: Vec<GateOp>,
    /// Added to the circuit's global phase.
    pub phase: f64,
}

/// `CP(theta) = e^{i theta/4} Rz_t(theta/2) CX Rz_t(-theta/2) CX Rz_c(theta/2)`.
pub fn decompose_cp(theta: f64, control: usize, target: usize) -> Decomposition {
    debug_assert_ne!(control, target);
    Decomposition {
        ops: vec![
            GateOp::rz(control, theta / 2.0),
            GateOp::cx(control, target),
            GateOp::rz(target, -theta / 2.0),
            GateOp::cx(control, target),
            GateOp::rz(target, theta / 2.0),
        ],
        phase: theta / 4.0,
    }
}

pub fn decompose_swap(a: usize, b: usize) -> Decomposition {
    debug_assert_ne!(a, b);
    Decomposition {
        ops: vec![GateOp::cx(a, b), GateOp::cx(b, a), GateOp::cx(a, b)],
        phase: 0.0,
    }
}

/// Controlled-Ry conjugated into the X basis by `S` and `Rz(-pi/2)` on the
/// target. `S = e^{i pi/4} Rz(pi/2)`, hence the `-pi/4` phase.
pub fn decompose_crx(theta: f64, control: usize, target: usize) -> Decomposition {
    debug_assert_ne!(control, target);
    Decomposition {
        ops: vec![
            GateOp::s(target),
            GateOp::ry(target, theta / 2.0),
            GateOp::cx(control, target),
            GateOp::ry(target, -theta / 2.0),
            GateOp::cx(control, target),
            GateOp::rz(target, -FRAC_PI_2),
        ],
        phase: -FRAC_PI_4,
    }
}

/// Ordered base-set program.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n: usize,
    ops: Vec<GateOp>,
    global_phase: f64,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit {
            n,
            ops: Vec::new(),
            global_phase: 0.0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn add_phase(&mut self, phi: f64) {
        self.global_phase += phi;
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(HpqeError::QubitOutOfRange {
                qubit: q,
                n: self.n,
            });
        }
        Ok(())
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(HpqeError::SameControlTarget(a));
        }
        Ok(())
    }

    pub fn push(&mut self, op: GateOp) -> Result<&mut Self> {
        match op.control {
            Some(c) => self.check_pair(c, op.target)?,
            None => self.check_qubit(op.target)?,
        }
        self.ops.push(op);
        Ok(self)
    }

    fn extend(&mut self, d: Decomposition) -> &mut Self {
        self.ops.extend(d.ops);
        self.global_phase += d.phase;
        self
    }

    pub fn h(&mut self, q: usize) -> Result<&mut Self> {
        self.push(GateOp::h(q))
    }

    pub fn s(&mut self, q: usize) -> Result<&mut Self> {
        self.push(GateOp::s(q))
    }

    pub fn rx(&mut self, q: usize, theta: f64) -> Result<&mut Self> {
        self.push(GateOp::rx(q, theta))
    }

    pub fn ry(&mut self, q: usize, theta: f64) -> Result<&mut Self> {
        self.push(GateOp::ry(q, theta))
    }

    pub fn rz(&mut self, q: usize, theta: f64) -> Result<&mut Self> {
        self.push(GateOp::rz(q, theta))
    }

    pub fn cx(&mut self, control: usize, target: usize) -> Result<&mut Self> {
        self.push(GateOp::cx(control, target))
    }

    pub fn cp(&mut self, theta: f64, control: usize, target: usize) -> Result<&mut Self> {
        self.check_pair(control, target)?;
        Ok(self.extend(decompose_cp(theta, control, target)))
    }

    pub fn swap(&mut self, a: usize, b: usize) -> Result<&mut Self> {
        self.check_pair(a, b)?;
        Ok(self.extend(decompose_swap(a, b)))
    }

    pub fn crx(&mut self, theta: f64, control: usize, target: usize) -> Result<&mut Self> {
        self.check_pair(control, target)?;
        Ok(self.extend(decompose_crx(theta, control, target)))
    }

    /// Text form: `QUBITS <n>`, an optional `PHASE <radians>` line, then one
    /// gate per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("QUBITS {}\n", self.n);
        if self.global_phase != 0.0 {
            out += &format!("PHASE {}\n", self.global_phase);
        }
        for op in &self.ops {
            out += &match op.kind {
                GateKind::Cx => format!("CX {} {}\n", op.control.unwrap(), op.target),
                k if k.is_rotation() => format!("{k} {} {}\n", op.target, op.angle),
                k => format!("{k} {}\n", op.target),
            };
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |msg: String| HpqeError::Parse { line: line_no, msg };
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().unwrap();
            let args: Vec<&str> = words.collect();
            let int = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| err(format!("expected a non-negative integer, got `{s}`")))
            };
            let real = |s: &str| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err(format!("expected a finite angle, got `{s}`")))
            };
            let expect_args = |want: usize| {
                if args.len() == want {
                    Ok(())
                } else {
                    Err(err(format!(
                        "`{head}` takes {want} argument(s), got {}",
                        args.len()
                    )))
                }
            };

            if head.eq_ignore_ascii_case("QUBITS") {
                if circuit.is_some() {
                    return Err(err("duplicate QUBITS header".into()));
                }
                expect_args(1)?;
                let n = int(args[0])?;
                if n == 0 {
                    return Err(err("QUBITS must be at least 1".into()));
                }
                circuit = Some(Circuit::new(n));
                continue;
            }
            let c = circuit
                .as_mut()
                .ok_or_else(|| err("missing QUBITS header".into()))?;
            if head.eq_ignore_ascii_case("PHASE") {
                expect_args(1)?;
                c.global_phase += real(args[0])?;
                continue;
            }
            let kind: GateKind = head.parse().map_err(err)?;
            let op = match kind {
                GateKind::Cx => {
                    expect_args(2)?;
                    GateOp::cx(int(args[0])?, int(args[1])?)
                }
                k if k.is_rotation() => {
                    expect_args(2)?;
                    GateOp::single(k, int(args[0])?, real(args[1])?)
                }
                k => {
                    expect_args(1)?;
                    GateOp::single(k, int(args[0])?, 0.0)
                }
            };
            c.push(op).map_err(|e| err(e.to_string()))?;
        }
        circuit.ok_or(HpqeError::Parse {
            line: 0,
            msg: "missing QUBITS header".into(),
        })
    }
}

/// Size of one gate-arbiter instruction record.
pub const RECORD_LEN: usize = 40;
const NO_CONTROL: u8 = 0xFF;

/// Record layout (little-endian):
///
/// | bytes  | field                                  |
/// |--------|----------------------------------------|
/// | 0      | kind (H=0 S=1 RX=2 RY=3 RZ=4 CX=5)     |
/// | 1      | control qubit, 0xFF if none            |
/// | 2      | target qubit                           |
/// | 3      | sparse flag                            |
/// | 4..8   | angle as f32 (informational)           |
/// | 8..40  | m00 m01 m10 m11, each `re:i32 im:i32`  |
pub fn encode_record(op: &GateOp) -> [u8; RECORD_LEN] {
    let mut rec = [0u8; RECORD_LEN];
    rec[0] = op.kind.code();
    rec[1] = op.control.map_or(NO_CONTROL, |c| c as u8);
    rec[2] = op.target as u8;
    rec[3] = op.sparse as u8;
    rec[4..8].copy_from_slice(&(op.angle as f32).to_le_bytes());
    for (k, m) in op.matrix.iter().enumerate() {
        rec[8 + 8 * k..16 + 8 * k].copy_from_slice(&m.to_le_bytes());
    }
    rec
}

/// Decodes a record. The matrix is taken as stored, not recomputed.
pub fn decode_record(rec: &[u8; RECORD_LEN]) -> Result<GateOp> {
    let kind = GateKind::from_code(rec[0])
        .ok_or_else(|| HpqeError::Format(format!("unknown gate code {}", rec[0])))?;
    let control = match (kind, rec[1]) {
        (GateKind::Cx, NO_CONTROL) => {
            return Err(HpqeError::Format("CX record without control".into()))
        }
        (GateKind::Cx, c) => Some(c as usize),
        (_, NO_CONTROL) => None,
        (_, c) => {
            return Err(HpqeError::Format(format!(
                "single-qubit record with control {c}"
            )))
        }
    };
    let mut matrix = [CFx::ZERO; 4];
    for (k, m) in matrix.iter_mut().enumerate() {
        *m = CFx::from_le_bytes(rec[8 + 8 * k..16 + 8 * k].try_into().unwrap());
    }
    Ok(GateOp {
        kind,
        target: rec[2] as usize,
        control,
        angle: f32::from_le_bytes(rec[4..8].try_into().unwrap()) as f64,
        matrix,
        sparse: rec[3] != 0,
    })
}

/// Concatenated instruction records for a whole circuit.
pub fn encode_stream(circuit: &Circuit) -> Vec<u8> {
    circuit.ops().iter().flat_map(encode_record).collect()
}

pub fn decode_stream(n: usize, bytes: &[u8]) -> Result<Circuit> {
    if !bytes.len().is_multiple_of(RECORD_LEN) {
        return Err(HpqeError::Format(format!(
            "stream length {} is not a multiple of {RECORD_LEN}",
            bytes.len()
        )));
    }
    let mut c = Circuit::new(n);
    for rec in bytes.chunks_exact(RECORD_LEN) {
        c.push(decode_record(rec.try_into().unwrap())?)?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const INV_SQRT2_RAW: i32 = 759_250_125;

    fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    }

    fn max_diff(a: &Mat2, b: &Mat2) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((a[i][j] - b[i][j]).norm());
            }
        }
        worst
    }

    fn identity() -> Mat2 {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        [[o, z], [z, o]]
    }

    #[test]
    fn matrix_examples() {
        let rz0 = matrix_of(GateKind::Rz, 0.0).unwrap();
        assert_eq!(rz0, identity());
        let rx = matrix_of(GateKind::Rx, PI).unwrap();
        let expected = [
            [Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
            [Complex64::new(0.0, -1.0), Complex64::new(0.0, 0.0)],
        ];
        assert!(max_diff(&rx, &expected) < 1e-15);
        let h = matrix_of(GateKind::H, 0.0).unwrap();
        assert!(max_diff(&mat_mul(&h, &h), &identity()) < 1e-15);
        assert!(matrix_of(GateKind::Cx, 0.0).is_none());
    }

    #[test]
    fn quantized_matrices() {
        let h = GateOp::h(0);
        let raws: Vec<i32> = h.matrix.iter().map(|m| m.re.raw()).collect();
        assert_eq!(
            raws,
            vec![INV_SQRT2_RAW, INV_SQRT2_RAW, INV_SQRT2_RAW, -INV_SQRT2_RAW]
        );
        assert!(h.matrix.iter().all(|m| m.im.raw() == 0));

        let s = GateOp::s(0);
        assert_eq!(s.matrix, [CFx::ONE, CFx::ZERO, CFx::ZERO, CFx::I]);

        let rz = GateOp::rz(0, PI / 2.0);
        assert_eq!(rz.matrix[0], CFx::from_raw(INV_SQRT2_RAW, -INV_SQRT2_RAW));
        assert_eq!(rz.matrix[3], CFx::from_raw(INV_SQRT2_RAW, INV_SQRT2_RAW));
        assert_eq!(rz.matrix[1], CFx::ZERO);
    }

    #[test]
    fn sparse_flag_tracks_kind() {
        for kind in [
            GateKind::H,
            GateKind::S,
            GateKind::Rx,
            GateKind::Ry,
            GateKind::Rz,
        ] {
            let op = GateOp::new(kind, &[0], 0.3).unwrap();
            assert_eq!(op.sparse, matches!(kind, GateKind::S | GateKind::Rz));
        }
        assert!(!GateOp::cx(0, 1).sparse);
    }

    #[test]
    fn decomposition_shapes() {
        let cp = decompose_cp(0.7, 0, 1);
        assert_eq!(cp.ops.len(), 5);
        assert_eq!(cp.ops.iter().filter(|o| o.kind == GateKind::Cx).count(), 2);
        assert_eq!(cp.ops.iter().filter(|o| o.kind == GateKind::Rz).count(), 3);
        assert_eq!(cp.phase, 0.7 / 4.0);

        let sw = decompose_swap(2, 0);
        let pairs: Vec<_> = sw
            .ops
            .iter()
            .map(|o| (o.control.unwrap(), o.target))
            .collect();
        assert_eq!(pairs, vec![(2, 0), (0, 2), (2, 0)]);

        let crx = decompose_crx(1.1, 1, 0);
        assert!(crx.ops.iter().all(|o| o.kind != GateKind::H));
        assert_eq!(crx.ops.iter().filter(|o| o.kind == GateKind::Cx).count(), 2);
    }

    #[test]
    fn circuit_validation() {
        let mut c = Circuit::new(2);
        assert!(c.h(2).is_err());
        assert!(matches!(c.cx(1, 1), Err(HpqeError::SameControlTarget(1))));
        assert!(c.cp(0.3, 0, 5).is_err());
        c.h(0).unwrap().cx(0, 1).unwrap().cp(0.5, 0, 1).unwrap();
        assert_eq!(c.len(), 7);
        assert_eq!(c.global_phase(), 0.125);
    }

    #[test]
    fn text_format() {
        let src = "# bell\nQUBITS 3\nH 0   # hadamard\nCX 0 1\nRZ 2 -0.25\nRX 1 3.5\nS 2\n\n";
        let c = Circuit::parse(src).unwrap();
        assert_eq!(c.n(), 3);
        assert_eq!(c.len(), 5);
        assert_eq!(c.ops()[2], GateOp::rz(2, -0.25));
        let again = Circuit::parse(&c.to_text()).unwrap();
        assert_eq!(again, c);

        let mut q = Circuit::new(2);
        q.cp(1.0, 0, 1).unwrap();
        let text = q.to_text();
        assert!(text.contains("PHASE 0.25"));
        assert_eq!(Circuit::parse(&text).unwrap(), q);
    }

    #[test]
    fn text_format_errors() {
        let cases = [
            ("H 0\n", 1),
            ("QUBITS 2\nH 2\n", 2),
            ("QUBITS 2\nFOO 1\n", 2),
            ("QUBITS 2\nRX 0\n", 2),
            ("QUBITS 2\nCX 0 0\n", 2),
            ("QUBITS 2\nRY 0 nan\n", 2),
            ("QUBITS 2\nQUBITS 3\n", 2),
            ("QUBITS 0\n", 1),
        ];
        for (src, line) in cases {
            match Circuit::parse(src) {
                Err(HpqeError::Parse { line: l, .. }) => assert_eq!(l, line, "{src:?}"),
                other => panic!("{src:?} gave {other:?}"),
            }
        }
        assert!(Circuit::parse("# nothing\n").is_err());
    }

    #[test]
    fn binary_records() {
        assert_eq!(RECORD_LEN, 40);
        let op = GateOp::ry(3, 0.5);
        let rec = encode_record(&op);
        assert_eq!(&rec[..4], &[3, 0xFF, 3, 0]);
        let back = decode_record(&rec).unwrap();
        assert_eq!(back.matrix, op.matrix);
        assert_eq!(back.kind, op.kind);
        assert_eq!(back.angle, 0.5);

        let cx = encode_record(&GateOp::cx(4, 1));
        assert_eq!(&cx[..4], &[5, 4, 1, 0]);
        assert!(cx[8..].iter().all(|&b| b == 0));

        let mut bad = rec;
        bad[0] = 9;
        assert!(decode_record(&bad).is_err());
        bad = cx;
        bad[1] = 0xFF;
        assert!(decode_record(&bad).is_err());

        let mut c = Circuit::new(3);
        c.h(0).unwrap().cx(0, 2).unwrap().rz(1, 0.125).unwrap();
        let stream = encode_stream(&c);
        assert_eq!(stream.len(), 3 * RECORD_LEN);
        assert_eq!(decode_stream(3, &stream).unwrap(), c);
        assert!(decode_stream(3, &stream[..39]).is_err());
    }
}
