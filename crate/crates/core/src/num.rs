//! Scalar abstraction and complex-power helpers.
//!
//! All chart geometry is generic over a floating-point scalar so the same
//! formulas run at `f32` and `f64` precision. Exact fiber arithmetic stays
//! in integers and never touches this module.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use std::fmt::Debug;

/// Floating-point scalar usable as the real/imaginary part of chart
/// coordinates.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Converts an `f64` constant into the scalar type, panicking only on
/// genuinely unrepresentable values (never for the constants used here).
pub fn from_f64<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("constant representable in scalar type")
}

/// Integer power of a complex number by binary exponentiation.
///
/// Negative exponents invert first; `z = 0` with a negative exponent yields
/// a non-finite result, which callers screen out via domain checks.
pub fn cpowi<T: Scalar>(z: Complex<T>, n: i64) -> Complex<T> {
    if n == 0 {
        return Complex::new(T::one(), T::zero());
    }
    let (mut base, mut e) = if n < 0 {
        (Complex::new(T::one(), T::zero()) / z, n.unsigned_abs())
    } else {
        (z, n.unsigned_abs())
    };
    let mut acc = Complex::new(T::one(), T::zero());
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        e >>= 1;
    }
    acc
}

/// Principal fractional power `z^(n/d)` via the principal logarithm.
///
/// Used only where a map is genuinely multivalued; integer powers always go
/// through [`cpowi`] so they stay exact up to rounding.
pub fn cpow_ratio<T: Scalar>(z: Complex<T>, n: i64, d: i64) -> Complex<T> {
    debug_assert!(d > 0, "denominator must be positive");
    let exponent = Complex::new(from_f64::<T>(n as f64) / from_f64::<T>(d as f64), T::zero());
    (z.ln() * exponent).exp()
}

/// Unit-modulus part `z / |z|`.
pub fn unit<T: Scalar>(z: Complex<T>) -> Complex<T> {
    z / z.norm()
}

/// Relative max-norm distance between two coordinate vectors.
///
/// Per coordinate the error is `|x_k - y_k| / max(1, |x_k|, |y_k|)`; the
/// result is the maximum over coordinates. The scaling keeps the metric
/// meaningful when polynomial transition maps push moduli far above 1.
pub fn scaled_distance<T: Scalar>(xs: &[Complex<T>], ys: &[Complex<T>]) -> T {
    debug_assert_eq!(xs.len(), ys.len());
    let mut worst = T::zero();
    for (x, y) in xs.iter().zip(ys.iter()) {
        let scale = T::one().max(x.norm()).max(y.norm());
        let err = (*x - *y).norm() / scale;
        if err > worst {
            worst = err;
        }
    }
    worst
}
