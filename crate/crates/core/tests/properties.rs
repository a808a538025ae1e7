//! Property-based tests: exact continued-fraction arithmetic round-trips
//! on random inputs, bijective transition maps invert on random points,
//! and the orbit distance vanishes on actual orbits.

use hj_atlas::chart::{za_orbit_distance, ChartPoint};
use hj_atlas::num::scaled_distance;
use hj_atlas::{FiberType, MapTag, TransitionMap};
use num_complex::Complex64;
use proptest::prelude::*;

fn gcd(mut x: i64, mut y: i64) -> i64 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

/// A uniformly random coprime pair `(r, a)` with `1 <= a < r <= max_r`.
fn coprime_pair(max_r: i64) -> impl Strategy<Value = (i64, i64)> {
    (2..=max_r)
        .prop_flat_map(|r| (Just(r), 1..r))
        .prop_filter("coprime", |&(r, a)| gcd(r, a) == 1)
}

fn polar(modulus: f64, angle: f64) -> Complex64 {
    Complex64::from_polar(modulus, angle)
}

/// Plane coordinate bounded away from zero and infinity.
fn punctured() -> impl Strategy<Value = Complex64> {
    (0.25f64..4.0, 0.0..std::f64::consts::TAU).prop_map(|(m, a)| polar(m, a))
}

/// Unrestricted plane coordinate (may come close to zero).
fn plane() -> impl Strategy<Value = Complex64> {
    (0.0f64..4.0, 0.0..std::f64::consts::TAU).prop_map(|(m, a)| polar(m, a))
}

fn circle() -> impl Strategy<Value = Complex64> {
    (0.0..std::f64::consts::TAU).prop_map(|a| polar(1.0, a))
}

proptest! {
    #[test]
    fn expansion_round_trips_through_evaluation((r, a) in coprime_pair(10_000)) {
        let fiber = FiberType::new(r, a).unwrap();
        let exp = fiber.expansion().unwrap();
        prop_assert_eq!(hj_atlas::hj_evaluate(&exp.coefficients).unwrap(), (r, a));
        prop_assert!(exp.coefficients.iter().all(|&b| b >= 2));
        prop_assert_eq!(exp.remainders[0], r);
        prop_assert_eq!(exp.remainders[1], a);
        prop_assert!(exp.remainders.ends_with(&[1, 0]));
    }

    #[test]
    fn fiber_type_canonicalizes_the_weight(r in 2i64..500, k in -3i64..=3, a in 1i64..500) {
        prop_assume!(a < r && gcd(r, a) == 1);
        let shifted = FiberType::new(r, a + k * r).unwrap();
        prop_assert_eq!(shifted, FiberType::new(r, a).unwrap());
    }

    #[test]
    fn glue_f_inverts(c0 in plane(), c1 in punctured(), c2 in circle()) {
        let m = TransitionMap::new(MapTag::GlueF, "Xp", "X");
        let x = ChartPoint::new("Xp", vec![c0, c1, c2]);
        let y = m.eval(&x).unwrap();
        let back = m.eval_inverse(&y).unwrap();
        prop_assert!(scaled_distance(&back.coords, &x.coords) < 1e-12);
    }

    #[test]
    fn chain_g_inverts(b in 2i64..=7, c0 in plane(), c1 in circle(), c2 in punctured()) {
        let m = TransitionMap::new(MapTag::ChainG { b, index: 1 }, "X0", "X1");
        let x = ChartPoint::new("X0", vec![c0, c1, c2]);
        let y = m.eval(&x).unwrap();
        let back = m.eval_inverse(&y).unwrap();
        prop_assert!(scaled_distance(&back.coords, &x.coords) < 1e-12);
    }

    #[test]
    fn normalize_b_inverts(b in 2i64..=7, c0 in plane(), c1 in plane(), c2 in circle()) {
        let m = TransitionMap::new(MapTag::NormalizeB { b }, "Xp", "Xs");
        let x = ChartPoint::new("Xp", vec![c0, c1, c2]);
        let y = m.eval(&x).unwrap();
        let back = m.eval_inverse(&y).unwrap();
        prop_assert!(scaled_distance(&back.coords, &x.coords) < 1e-12);
    }

    #[test]
    fn reid_f_inverts(b in 2i64..=7, c0 in plane(), c1 in punctured()) {
        let m = TransitionMap::new(MapTag::ReidF { b }, "Y0", "Y1");
        let x = ChartPoint::new("Y0", vec![c0, c1]);
        let y = m.eval(&x).unwrap();
        let back = m.eval_inverse(&y).unwrap();
        prop_assert!(scaled_distance(&back.coords, &x.coords) < 1e-11);
    }

    #[test]
    fn pi_tilde_is_an_involution(
        (r, a) in coprime_pair(13),
        c0 in plane(),
        c1 in circle(),
        c2 in plane(),
    ) {
        let m = TransitionMap::new(MapTag::PiTilde { r, a }, "Xtil", "X");
        let x = ChartPoint::new("Xtil", vec![c0, c1, c2]);
        let once = m.eval(&x).unwrap().with_chart("Xtil");
        let twice = m.eval(&once).unwrap();
        prop_assert!(scaled_distance(&twice.coords, &x.coords) < 1e-12);
    }

    #[test]
    fn orbit_distance_vanishes_on_orbits(
        (a, a1) in coprime_pair(12),
        k in 0i64..12,
        c0 in punctured(),
        c1 in punctured(),
    ) {
        let step = std::f64::consts::TAU / a as f64;
        let rot = |m: i64| polar(1.0, step * (m.rem_euclid(a)) as f64);
        let x = [c0, c1];
        let y = [c0 * rot(a1 * k), c1 * rot(k)];
        prop_assert!(za_orbit_distance(a, a1, &x, &y) < 1e-12);
    }

    #[test]
    fn scaled_distance_is_symmetric_and_definite(
        c0 in plane(),
        c1 in punctured(),
        d0 in plane(),
        d1 in punctured(),
    ) {
        let x = [c0, c1];
        let y = [d0, d1];
        prop_assert_eq!(scaled_distance(&x, &y), scaled_distance(&y, &x));
        prop_assert_eq!(scaled_distance(&x, &x), 0.0);
    }
}
