//! Scalar types.

use nalgebra::{ComplexField, RealField};
use num_complex::Complex;
use rustfft::FftNum;

/// Real scalar type the numerical core is generic over: `f32` or `f64`.
///
/// Tolerances throughout the crate are written for `f64`; `f32` works for
/// the algebra but will trip most of the default thresholds.
pub trait Real: RealField + FftNum + Copy + Default {
    /// Converts an `f64` constant into `Self`.
    fn lit(x: f64) -> Self {
        <Self as num_traits::FromPrimitive>::from_f64(x).expect("finite literal")
    }

    /// Converts a count into `Self`.
    fn count(n: usize) -> Self {
        <Self as num_traits::FromPrimitive>::from_usize(n).expect("representable count")
    }

    /// Lossy conversion to `f64` for reporting.
    fn to_f64(self) -> f64;
}

impl Real for f32 {
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    fn to_f64(self) -> f64 {
        self
    }
}

/// `e^{it}`.
pub fn cis<T: Real>(t: T) -> Complex<T> {
    Complex::new(t.cos(), t.sin())
}

/// `|z|`.
pub fn modulus<T: Real>(z: Complex<T>) -> T {
    ComplexField::modulus(z)
}

/// `z / |z|`, or `1` for `z = 0`.
pub fn unit_phase<T: Real>(z: Complex<T>) -> Complex<T> {
    let r = modulus(z);
    if r == T::zero() {
        Complex::new(T::one(), T::zero())
    } else {
        z.unscale(r)
    }
}

/// Real complex number.
pub fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

pub(crate) fn is_finite<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
