//! Partitioned fixed-point state vector.
//!
//! Qubit 0 is the least-significant bit of the basis index. For `n >= 3` the
//! `2^n` amplitudes are split into 8 segments of `2^(n-3)` amplitudes, one per
//! PE (2 PEAs x 4 PEs), selected by the top three index bits: bit `n-1`
//! picks the PEA and bits `n-2..n-3` pick the PE. Amplitudes keep their
//! relative order inside a segment, so the segments are contiguous slices of
//! the global-order vector. Below 3 qubits there is a single segment.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{HpqeError, Result, HARD_QUBIT_LIMIT};
use crate::fxp::CFx;
use crate::perfmodel::{memory_mode, MemMode, PerfConfig};

pub const NUM_PEAS: usize = 2;
pub const PES_PER_PEA: usize = 4;
pub const NUM_SEGMENTS: usize = NUM_PEAS * PES_PER_PEA;
/// Index bits consumed by segment selection.
pub const SEGMENT_BITS: usize = 3;

/// Default desk-scale limit: 2^26 amplitudes = 512 MiB of CFx.
pub const DEFAULT_MAX_QUBITS: usize = 26;

pub const DUMP_MAGIC: &[u8; 4] = b"HPQE";
pub const DUMP_VERSION: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SegmentAddress {
    pub pea: usize,
    pub pe: usize,
    pub offset: usize,
}

impl SegmentAddress {
    pub fn segment_id(&self) -> usize {
        self.pea * PES_PER_PEA + self.pe
    }
}

/// Location of global index `i` in an `n`-qubit layout (`n >= 3`).
pub fn segment_of(i: usize, n: usize) -> SegmentAddress {
    debug_assert!(n >= SEGMENT_BITS && i < 1 << n);
    let shift = n - SEGMENT_BITS;
    SegmentAddress {
        pea: (i >> (n - 1)) & 1,
        pe: (i >> shift) & 0b11,
        offset: i & ((1 << shift) - 1),
    }
}

/// Inverse of [`segment_of`].
pub fn global_index(addr: SegmentAddress, n: usize) -> usize {
    (addr.segment_id() << (n - SEGMENT_BITS)) | addr.offset
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateVector {
    n: usize,
    amps: Vec<CFx>,
    mem_mode: MemMode,
}

fn check_capacity(n: usize, max_qubits: usize) -> Result<()> {
    if n == 0 {
        return Err(HpqeError::InvalidQubitCount(0));
    }
    let limit = max_qubits.min(HARD_QUBIT_LIMIT);
    if n > limit {
        return Err(HpqeError::Capacity { n, limit });
    }
    Ok(())
}

impl StateVector {
    /// `|k>` on `n` qubits with the default capacity limit.
    pub fn init_basis(n: usize, k: usize) -> Result<Self> {
        Self::init_basis_with(n, k, DEFAULT_MAX_QUBITS, &PerfConfig::default())
    }

    pub fn init_basis_with(
        n: usize,
        k: usize,
        max_qubits: usize,
        cfg: &PerfConfig,
    ) -> Result<Self> {
        check_capacity(n, max_qubits)?;
        if k >= 1 << n {
            return Err(HpqeError::BasisIndex { index: k, n });
        }
        let mut amps = vec![CFx::ZERO; 1 << n];
        amps[k] = CFx::ONE;
        Ok(StateVector {
            n,
            amps,
            mem_mode: memory_mode(n, cfg)?,
        })
    }

    /// Builds a state from amplitudes in global-index order.
    pub fn from_amplitudes(amps: Vec<CFx>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(HpqeError::Format(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let n = len.trailing_zeros() as usize;
        check_capacity(n, HARD_QUBIT_LIMIT)?;
        Ok(StateVector {
            n,
            amps,
            mem_mode: memory_mode(n, &PerfConfig::default())?,
        })
    }

    /// Quantizes a double-precision state.
    pub fn from_complex(amps: &[Complex64]) -> Result<Self> {
        Self::from_amplitudes(amps.iter().copied().map(CFx::quantize).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn mem_mode(&self) -> MemMode {
        self.mem_mode
    }

    pub fn set_mem_mode(&mut self, mode: MemMode) {
        self.mem_mode = mode;
    }

    pub fn num_segments(&self) -> usize {
        if self.n >= SEGMENT_BITS {
            NUM_SEGMENTS
        } else {
            1
        }
    }

    pub fn segment_len(&self) -> usize {
        self.amps.len() / self.num_segments()
    }

    pub fn segment(&self, id: usize) -> &[CFx] {
        let len = self.segment_len();
        &self.amps[id * len..(id + 1) * len]
    }

    pub fn segments(&self) -> std::slice::Chunks<'_, CFx> {
        let len = self.segment_len();
        self.amps.chunks(len)
    }

    pub fn segments_mut(&mut self) -> std::slice::ChunksMut<'_, CFx> {
        let len = self.segment_len();
        self.amps.chunks_mut(len)
    }

    pub fn get(&self, i: usize) -> CFx {
        self.amps[i]
    }

    /// Amplitudes in global-index order.
    pub fn amplitudes(&self) -> &[CFx] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [CFx] {
        &mut self.amps
    }

    pub fn flatten(&self) -> Vec<CFx> {
        self.amps.clone()
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.amps.iter().map(|a| a.to_complex()).collect()
    }

    /// Sum of squared magnitudes in double precision.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.to_complex().norm_sqr()).sum()
    }

    /// Binary dump: `"HPQE"`, version byte, `n` byte, then `2^n` amplitudes of
    /// 8 bytes each (little-endian `re`, `im`) in global-index order.
    pub fn write_dump<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(DUMP_MAGIC)?;
        w.write_all(&[DUMP_VERSION, self.n as u8])?;
        let mut buf = Vec::with_capacity(self.amps.len() * 8);
        for a in &self.amps {
            buf.extend_from_slice(&a.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_dump<R: Read>(mut r: R) -> Result<Self> {
        let mut header = [0u8; 6];
        r.read_exact(&mut header)?;
        if &header[..4] != DUMP_MAGIC {
            return Err(HpqeError::Format("bad state dump magic".into()));
        }
        if header[4] != DUMP_VERSION {
            return Err(HpqeError::Format(format!(
                "unsupported state dump version {}",
                header[4]
            )));
        }
        let n = header[5] as usize;
        check_capacity(n, HARD_QUBIT_LIMIT)?;
        let mut body = vec![0u8; 8 << n];
        r.read_exact(&mut body)?;
        let amps = body
            .chunks_exact(8)
            .map(|c| CFx::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Self::from_amplitudes(amps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fxp::Fx32;
    use proptest::prelude::*;

    /// Independent bit-by-bit extraction used as the layout oracle.
    fn address_by_bits(i: usize, n: usize) -> (usize, usize, usize) {
        let bit = |k: usize| (i >> k) & 1;
        let pea = bit(n - 1);
        let pe = bit(n - 2) * 2 + bit(n - 3);
        let mut offset = 0;
        for k in (0..n - 3).rev() {
            offset = offset * 2 + bit(k);
        }
        (pea, pe, offset)
    }

    fn tuple(a: SegmentAddress) -> (usize, usize, usize) {
        (a.pea, a.pe, a.offset)
    }

    #[test]
    fn basis_states() {
        let s = StateVector::init_basis(1, 0).unwrap();
        assert_eq!(s.flatten(), vec![CFx::ONE, CFx::ZERO]);

        let s = StateVector::init_basis(3, 5).unwrap();
        assert_eq!(s.num_segments(), 8);
        assert_eq!(s.segment(5), &[CFx::ONE]);
        assert_eq!(tuple(segment_of(5, 3)), (1, 1, 0));
        assert_eq!(segment_of(5, 3).segment_id(), 5);

        let s = StateVector::init_basis(3, 2).unwrap();
        assert_eq!(s.flatten()[2], CFx::ONE);
        assert_eq!(s.flatten().iter().filter(|a| !a.is_zero()).count(), 1);
    }

    #[test]
    fn capacity_limits() {
        assert!(matches!(
            StateVector::init_basis(31, 0),
            Err(HpqeError::Capacity { n: 31, .. })
        ));
        assert!(matches!(
            StateVector::init_basis(27, 0),
            Err(HpqeError::Capacity { n: 27, limit: 26 })
        ));
        assert!(matches!(
            StateVector::init_basis_with(31, 0, 40, &PerfConfig::default()),
            Err(HpqeError::Capacity { n: 31, limit: 30 })
        ));
        assert!(StateVector::init_basis(0, 0).is_err());
        assert!(matches!(
            StateVector::init_basis(2, 4),
            Err(HpqeError::BasisIndex { .. })
        ));
    }

    #[test]
    fn mem_mode_annotation() {
        assert_eq!(
            StateVector::init_basis(10, 0).unwrap().mem_mode(),
            MemMode::Bram
        );
        assert_eq!(
            StateVector::init_basis(20, 0).unwrap().mem_mode(),
            MemMode::Hbm
        );
    }

    #[test]
    fn small_states_use_one_segment() {
        let s = StateVector::init_basis(2, 3).unwrap();
        assert_eq!(s.num_segments(), 1);
        assert_eq!(s.segment(0).len(), 4);
    }

    #[test]
    fn segment_examples() {
        assert_eq!(tuple(segment_of(0, 4)), (0, 0, 0));
        assert_eq!(tuple(segment_of(15, 4)), (1, 3, 1));
        assert_eq!(tuple(segment_of(1 << 19, 20)), address_by_bits(1 << 19, 20));
        assert_eq!(tuple(segment_of(1 << 19, 20)), (1, 0, 0));
        assert_eq!(tuple(segment_of(1 << 18, 20)), (0, 2, 0));
    }

    #[test]
    fn segments_agree_with_address_map() {
        let amps: Vec<CFx> = (0..64).map(|i| CFx::from_raw(i, -i)).collect();
        let s = StateVector::from_amplitudes(amps).unwrap();
        for (id, seg) in s.segments().enumerate() {
            for (off, a) in seg.iter().enumerate() {
                let i = a.re.raw() as usize;
                let addr = segment_of(i, 6);
                assert_eq!((addr.segment_id(), addr.offset), (id, off));
            }
        }
    }

    #[test]
    fn segment_bijection_all_sizes() {
        for n in 3..=16 {
            let mut seen = vec![false; 1 << n];
            for i in 0..1usize << n {
                let a = segment_of(i, n);
                assert_eq!(tuple(a), address_by_bits(i, n));
                assert_eq!(global_index(a, n), i);
                let slot = a.segment_id() * (1 << (n - 3)) + a.offset;
                assert!(!seen[slot]);
                seen[slot] = true;
            }
        }
    }

    #[test]
    fn pair_locality() {
        for n in 3..=12 {
            for t in 0..n {
                for i in (0..1usize << n).filter(|i| i & (1 << t) == 0) {
                    let a = segment_of(i, n).segment_id();
                    let b = segment_of(i | 1 << t, n).segment_id();
                    if t + 4 <= n {
                        assert_eq!(a, b);
                    } else {
                        assert_eq!((a ^ b).count_ones(), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn quantized_norm_bound() {
        let n = 6usize;
        let amp = 1.0 / (1u64 << n) as f64;
        let raw: Vec<Complex64> = (0..1 << n)
            .map(|k| Complex64::from_polar(amp.sqrt(), k as f64 * 0.37))
            .collect();
        let s = StateVector::from_complex(&raw).unwrap();
        let eps = (1u64 << n) as f64 * 4.0 * Fx32::ULP;
        assert!((s.norm_sqr() - 1.0).abs() <= eps);
    }

    #[test]
    fn dump_header_and_errors() {
        let s = StateVector::init_basis(3, 1).unwrap();
        let mut buf = Vec::new();
        s.write_dump(&mut buf).unwrap();
        assert_eq!(&buf[..6], b"HPQE\x01\x03");
        assert_eq!(buf.len(), 6 + 8 * 8);
        assert_eq!(&buf[6 + 8..6 + 16], &[0, 0, 0, 0x40, 0, 0, 0, 0]);
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(StateVector::read_dump(&bad[..]).is_err());
        assert!(StateVector::read_dump(&buf[..buf.len() - 1]).is_err());
    }

    proptest! {
        #[test]
        fn dump_roundtrip(n in 1usize..8, seed in any::<u64>()) {
            let amps: Vec<CFx> = (0..1u64 << n)
                .map(|i| {
                    let h = seed.wrapping_mul(6364136223846793005).wrapping_add(i.wrapping_mul(1442695040888963407));
                    CFx::from_raw((h >> 32) as i32, h as i32)
                })
                .collect();
            let s = StateVector::from_amplitudes(amps).unwrap();
            let mut buf = Vec::new();
            s.write_dump(&mut buf).unwrap();
            let back = StateVector::read_dump(&buf[..]).unwrap();
            prop_assert_eq!(back.flatten(), s.flatten());
            let rebuilt = StateVector::from_amplitudes(s.segments().flatten().copied().collect()).unwrap();
            prop_assert_eq!(rebuilt, s);
        }
    }
}
