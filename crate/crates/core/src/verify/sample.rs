//! Deterministic sample generation for the check suite.
//!
//! Every check owns an independent RNG stream derived from the run seed
//! and the check's name, so checks are reproducible in isolation and the
//! suite's output does not depend on check execution order.

use crate::chart::{ChartPoint, SlotKind};
use crate::num::{from_f64, Scalar};
use num_complex::Complex;
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

/// Derives a check-local RNG from the run seed and the check name
/// (FNV-1a over the seed bytes followed by the name bytes).
pub(crate) fn check_rng(seed: u64, name: &str) -> ChaCha12Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in seed.to_le_bytes() {
        h = (h ^ u64::from(byte)).wrapping_mul(0x0100_0000_01b3);
    }
    for byte in name.as_bytes() {
        h = (h ^ u64::from(*byte)).wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha12Rng::seed_from_u64(h)
}

/// Uniform draw in `[0, 1)` from the top 53 bits of one RNG word.
pub(crate) fn u01(rng: &mut ChaCha12Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn angle(rng: &mut ChaCha12Rng) -> f64 {
    std::f64::consts::TAU * u01(rng)
}

/// A point on the unit circle at a uniform angle.
pub(crate) fn unit_complex<T: Scalar>(rng: &mut ChaCha12Rng) -> Complex<T> {
    Complex::from_polar(T::one(), from_f64(angle(rng)))
}

/// A modulus drawn log-uniformly from `range`.
pub(crate) fn log_uniform_modulus(rng: &mut ChaCha12Rng, range: (f64, f64)) -> f64 {
    let (lo, hi) = range;
    (lo.ln() + u01(rng) * (hi.ln() - lo.ln())).exp()
}

/// One coordinate for a slot of the given kind. Plane slots are sampled
/// at generic (nonzero) moduli from `range`; disk moduli are uniform in
/// `[0, 1)`.
pub(crate) fn sample_slot<T: Scalar>(
    rng: &mut ChaCha12Rng,
    kind: SlotKind,
    range: (f64, f64),
) -> Complex<T> {
    match kind {
        SlotKind::ComplexPlane | SlotKind::PuncturedPlane => {
            let m = log_uniform_modulus(rng, range);
            Complex::from_polar(from_f64(m), from_f64(angle(rng)))
        }
        SlotKind::UnitCircle => unit_complex(rng),
        SlotKind::UnitDisk => Complex::from_polar(from_f64(u01(rng)), from_f64(angle(rng))),
    }
}

/// A point of the given slot shape in the named chart. When `sphere_pair`
/// names two slots, they are drawn jointly uniform on the unit 3-sphere.
pub(crate) fn sample_shape<T: Scalar>(
    rng: &mut ChaCha12Rng,
    chart: &str,
    shape: &[SlotKind],
    sphere_pair: Option<(usize, usize)>,
    range: (f64, f64),
) -> ChartPoint<T> {
    let mut coords: Vec<Complex<T>> = shape
        .iter()
        .map(|&kind| sample_slot(rng, kind, range))
        .collect();
    if let Some((i, j)) = sphere_pair {
        let u = u01(rng);
        let (ci, cj) = (u.sqrt(), (1.0 - u).sqrt());
        coords[i] = Complex::from_polar(from_f64(ci), from_f64(angle(rng)));
        coords[j] = Complex::from_polar(from_f64(cj), from_f64(angle(rng)));
    }
    ChartPoint::new(chart, coords)
}

/// The modulus band used when sampling inputs to coefficient maps, which
/// raise plane coordinates to integer powers as large as `r`: moduli stay
/// within `exp(±2 / r)` of 1 so every value produced along a composed
/// chain remains well inside its slot's domain.
pub(crate) fn power_safe_range(r: i64) -> (f64, f64) {
    let w = 2.0 / (r.max(2) as f64);
    ((-w).exp(), w.exp())
}
