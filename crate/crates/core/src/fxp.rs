//! Q2.30 fixed-point arithmetic.
//!
//! Every amplitude component in the emulated machine is a 32-bit two's
//! complement word holding `raw * 2^-30`. The representable range is
//! `[-2.0, 2.0 - 2^-30]`. All operations saturate at those bounds, and
//! multiplication and quantization round to nearest with ties to even.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const FRAC_BITS: u32 = 30;
const SCALE: f64 = (1u64 << FRAC_BITS) as f64;
const HALF: i64 = 1 << (FRAC_BITS - 1);
const FRAC_MASK: i64 = (1 << FRAC_BITS) - 1;

/// Signed Q2.30 scalar.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fx32(i32);

impl Fx32 {
    pub const ZERO: Fx32 = Fx32(0);
    pub const ONE: Fx32 = Fx32(1 << FRAC_BITS);
    pub const MAX: Fx32 = Fx32(i32::MAX);
    pub const MIN: Fx32 = Fx32(i32::MIN);
    /// One unit in the last place, `2^-30`.
    pub const ULP: f64 = 1.0 / SCALE;

    #[inline]
    pub const fn from_raw(raw: i32) -> Self {
        Fx32(raw)
    }

    #[inline]
    pub const fn raw(self) -> i32 {
        self.0
    }

    /// Rounds `x * 2^30` to nearest (ties to even) and saturates.
    ///
    /// `x` must be finite.
    #[inline]
    pub fn quantize(x: f64) -> Self {
        debug_assert!(x.is_finite(), "quantize of non-finite value {x}");
        // Scaling by a power of two is exact, so the only rounding is here.
        let scaled = (x * SCALE).round_ties_even();
        Fx32(scaled.clamp(i32::MIN as f64, i32::MAX as f64) as i32)
    }

    #[inline]
    pub fn to_real(self) -> f64 {
        self.0 as f64 / SCALE
    }

    #[inline]
    fn saturate(v: i64) -> Self {
        Fx32(v.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }

    pub fn to_le_bytes(self) -> [u8; 4] {
        self.0.to_le_bytes()
    }

    pub fn from_le_bytes(bytes: [u8; 4]) -> Self {
        Fx32(i32::from_le_bytes(bytes))
    }
}

impl fmt::Debug for Fx32 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fx32({} = {})", self.0, self.to_real())
    }
}

impl fmt::Display for Fx32 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_real())
    }
}

/// Saturating sum.
#[inline]
pub fn fx_add(a: Fx32, b: Fx32) -> Fx32 {
    Fx32(a.0.saturating_add(b.0))
}

/// Saturating difference.
#[inline]
pub fn fx_sub(a: Fx32, b: Fx32) -> Fx32 {
    Fx32(a.0.saturating_sub(b.0))
}

/// Full 64-bit product shifted back by 30 bits, rounded half to even, saturated.
#[inline]
pub fn fx_mul(a: Fx32, b: Fx32) -> Fx32 {
    let p = a.0 as i64 * b.0 as i64;
    let mut q = p >> FRAC_BITS;
    let rem = p & FRAC_MASK;
    if rem > HALF || (rem == HALF && q & 1 == 1) {
        q += 1;
    }
    Fx32::saturate(q)
}

impl Add for Fx32 {
    type Output = Fx32;
    #[inline]
    fn add(self, rhs: Fx32) -> Fx32 {
        fx_add(self, rhs)
    }
}

impl Sub for Fx32 {
    type Output = Fx32;
    #[inline]
    fn sub(self, rhs: Fx32) -> Fx32 {
        fx_sub(self, rhs)
    }
}

impl Mul for Fx32 {
    type Output = Fx32;
    #[inline]
    fn mul(self, rhs: Fx32) -> Fx32 {
        fx_mul(self, rhs)
    }
}

impl Neg for Fx32 {
    type Output = Fx32;
    #[inline]
    fn neg(self) -> Fx32 {
        Fx32(self.0.saturating_neg())
    }
}

/// Complex amplitude as a pair of Q2.30 words.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CFx {
    pub re: Fx32,
    pub im: Fx32,
}

impl CFx {
    pub const ZERO: CFx = CFx::new(Fx32::ZERO, Fx32::ZERO);
    pub const ONE: CFx = CFx::new(Fx32::ONE, Fx32::ZERO);
    pub const I: CFx = CFx::new(Fx32::ZERO, Fx32::ONE);

    #[inline]
    pub const fn new(re: Fx32, im: Fx32) -> Self {
        CFx { re, im }
    }

    #[inline]
    pub const fn from_raw(re: i32, im: i32) -> Self {
        CFx::new(Fx32::from_raw(re), Fx32::from_raw(im))
    }

    #[inline]
    pub fn quantize(z: Complex64) -> Self {
        CFx::new(Fx32::quantize(z.re), Fx32::quantize(z.im))
    }

    #[inline]
    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re.to_real(), self.im.to_real())
    }

    pub fn is_zero(self) -> bool {
        self == CFx::ZERO
    }

    pub fn to_le_bytes(self) -> [u8; 8] {
        let mut out = [0u8; 8];
        out[..4].copy_from_slice(&self.re.to_le_bytes());
        out[4..].copy_from_slice(&self.im.to_le_bytes());
        out
    }

    pub fn from_le_bytes(bytes: [u8; 8]) -> Self {
        let re = Fx32::from_le_bytes(bytes[..4].try_into().unwrap());
        let im = Fx32::from_le_bytes(bytes[4..].try_into().unwrap());
        CFx::new(re, im)
    }
}

impl fmt::Debug for CFx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CFx({}, {} = {}{:+}i)",
            self.re.raw(),
            self.im.raw(),
            self.re.to_real(),
            self.im.to_real()
        )
    }
}

#[inline]
pub fn cfx_add(a: CFx, b: CFx) -> CFx {
    CFx::new(fx_add(a.re, b.re), fx_add(a.im, b.im))
}

/// Schoolbook complex product: four rounded real products, two saturating adds.
#[inline]
pub fn cfx_mul(a: CFx, b: CFx) -> CFx {
    CFx::new(
        fx_sub(fx_mul(a.re, b.re), fx_mul(a.im, b.im)),
        fx_add(fx_mul(a.re, b.im), fx_mul(a.im, b.re)),
    )
}

impl Add for CFx {
    type Output = CFx;
    #[inline]
    fn add(self, rhs: CFx) -> CFx {
        cfx_add(self, rhs)
    }
}

impl Mul for CFx {
    type Output = CFx;
    #[inline]
    fn mul(self, rhs: CFx) -> CFx {
        cfx_mul(self, rhs)
    }
}

/// Operation signal of a Special Unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SuMode {
    /// `c0*x + c1*y`
    Dense,
    /// `c0*x`, second multiplier bypassed.
    Sparse,
}

/// One Special Unit evaluation.
#[inline]
pub fn su_eval(c0: CFx, c1: CFx, x: CFx, y: CFx, op: SuMode) -> CFx {
    match op {
        SuMode::Dense => cfx_add(cfx_mul(c0, x), cfx_mul(c1, y)),
        SuMode::Sparse => cfx_mul(c0, x),
    }
}
