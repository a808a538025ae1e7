//! Charts, chart points, weighted circle actions, and circle quotients.
//!
//! A chart is a product of one-complex-dimensional slots (plane, punctured
//! plane, unit circle, unit disk), optionally carrying an integer weight
//! vector that defines a circle action `t · (z_k) = (t^{w_k} z_k)`, and
//! optionally a pair of disk slots jointly constrained to the unit 3-sphere.

use crate::error::{Error, Result};
use crate::num::{cpowi, from_f64, scaled_distance, Scalar};
use num_complex::Complex;
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};

/// Tolerance for modulus constraints (unit circles, punctured planes,
/// sphere pairs) and for the unit-modulus requirement on group elements.
pub const MOD_TOL: f64 = 1e-9;

/// The modulus tolerance for a given scalar: [`MOD_TOL`] for `f64`,
/// widened to a small multiple of the machine epsilon for scalars too
/// narrow to hold a unit modulus that precisely.
pub fn mod_tol<T: Scalar>() -> T {
    let base = from_f64::<T>(MOD_TOL);
    let eps = T::epsilon() * from_f64::<T>(128.0);
    if eps > base {
        eps
    } else {
        base
    }
}

/// The kind of a single complex coordinate slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotKind {
    /// All of ℂ.
    ComplexPlane,
    /// ℂ with the origin removed: modulus must exceed [`MOD_TOL`].
    PuncturedPlane,
    /// The unit circle: modulus must equal 1 within [`MOD_TOL`].
    UnitCircle,
    /// The closed unit disk: modulus at most 1 + [`MOD_TOL`].
    UnitDisk,
}

impl SlotKind {
    /// Checks one coordinate against this slot's modulus constraint,
    /// returning a human-readable reason on failure.
    pub(crate) fn check<T: Scalar>(
        &self,
        index: usize,
        z: Complex<T>,
    ) -> std::result::Result<(), String> {
        let n = z.norm();
        if !n.is_finite() {
            return Err(format!("coordinate {index} is not finite"));
        }
        let tol = mod_tol::<T>();
        match self {
            SlotKind::ComplexPlane => Ok(()),
            SlotKind::PuncturedPlane => {
                if n <= tol {
                    Err(format!(
                        "coordinate {index} must stay away from 0 (modulus <= {MOD_TOL})"
                    ))
                } else {
                    Ok(())
                }
            }
            SlotKind::UnitCircle => {
                if (n - T::one()).abs() > tol {
                    Err(format!("coordinate {index} must have modulus 1"))
                } else {
                    Ok(())
                }
            }
            SlotKind::UnitDisk => {
                if n > T::one() + tol {
                    Err(format!("coordinate {index} must lie in the unit disk"))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Integer weights of a circle action, one per slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    /// Number of weights.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// True if empty (never the case for charts built by this crate).
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A named coordinate domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chart {
    /// Identifier used by points and transition maps.
    pub id: String,
    /// Slot kinds, in coordinate order.
    pub slots: Vec<SlotKind>,
    /// Weights of the circle action, when the chart carries one.
    pub weights: Option<WeightVector>,
    /// Indices of two disk slots jointly constrained by
    /// `|z_i|^2 + |z_j|^2 = 1` (the unit-3-sphere factor).
    pub sphere_pair: Option<(usize, usize)>,
}

impl Chart {
    /// Builds a chart, validating internal consistency.
    pub fn new(
        id: impl Into<String>,
        slots: Vec<SlotKind>,
        weights: Option<Vec<i64>>,
        sphere_pair: Option<(usize, usize)>,
    ) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(Error::InvalidPoint {
                chart: id,
                reason: "chart id must be nonempty".to_string(),
            });
        }
        if let Some(w) = &weights {
            if w.len() != slots.len() {
                return Err(Error::InvalidPoint {
                    chart: id,
                    reason: format!(
                        "weight count {} does not match slot count {}",
                        w.len(),
                        slots.len()
                    ),
                });
            }
        }
        if let Some((i, j)) = sphere_pair {
            let ok = i != j
                && i < slots.len()
                && j < slots.len()
                && slots[i] == SlotKind::UnitDisk
                && slots[j] == SlotKind::UnitDisk;
            if !ok {
                return Err(Error::InvalidPoint {
                    chart: id,
                    reason: "sphere pair must name two distinct unit-disk slots".to_string(),
                });
            }
        }
        Ok(Chart {
            id,
            slots,
            weights: weights.map(WeightVector),
            sphere_pair,
        })
    }

    /// Number of slots.
    pub fn dim(&self) -> usize {
        self.slots.len()
    }

    /// Checks that a point structurally belongs to this chart and satisfies
    /// every slot and sphere constraint.
    pub fn validate_point<T: Scalar>(&self, p: &ChartPoint<T>) -> Result<()> {
        if p.chart != self.id {
            return Err(Error::ChartMismatch {
                expected: self.id.clone(),
                found: p.chart.clone(),
            });
        }
        if p.coords.len() != self.slots.len() {
            return Err(Error::InvalidPoint {
                chart: self.id.clone(),
                reason: format!(
                    "coordinate count {} does not match slot count {}",
                    p.coords.len(),
                    self.slots.len()
                ),
            });
        }
        for (k, (slot, &z)) in self.slots.iter().zip(p.coords.iter()).enumerate() {
            slot.check(k, z).map_err(|reason| Error::InvalidPoint {
                chart: self.id.clone(),
                reason,
            })?;
        }
        if let Some((i, j)) = self.sphere_pair {
            let s = (p.coords[i].norm_sqr() + p.coords[j].norm_sqr()).sqrt();
            if (s - T::one()).abs() > mod_tol::<T>() {
                return Err(Error::InvalidPoint {
                    chart: self.id.clone(),
                    reason: format!("slots {i},{j} must satisfy |z_{i}|^2 + |z_{j}|^2 = 1"),
                });
            }
        }
        Ok(())
    }

    /// Applies the chart's own circle action to a point of this chart.
    pub fn act<T: Scalar>(&self, t: Complex<T>, p: &ChartPoint<T>) -> Result<ChartPoint<T>> {
        let weights = self.weights.as_ref().ok_or_else(|| Error::NoGauge {
            chart: self.id.clone(),
        })?;
        if p.chart != self.id {
            return Err(Error::ChartMismatch {
                expected: self.id.clone(),
                found: p.chart.clone(),
            });
        }
        act(weights, t, p)
    }
}

/// A point in a chart: one complex value per slot.
#[derive(Debug, Clone)]
pub struct ChartPoint<T: Scalar> {
    /// Identifier of the chart the point lives in.
    pub chart: String,
    /// Coordinates, one per slot.
    pub coords: Vec<Complex<T>>,
}

impl<T: Scalar> ChartPoint<T> {
    /// Builds a point from raw coordinates.
    pub fn new(chart: impl Into<String>, coords: Vec<Complex<T>>) -> Self {
        ChartPoint {
            chart: chart.into(),
            coords,
        }
    }

    /// Same coordinates, relabeled as a point in another chart. Used when
    /// two charts are identified by construction.
    pub fn with_chart(mut self, chart: impl Into<String>) -> Self {
        self.chart = chart.into();
        self
    }
}

impl<T: Scalar> Serialize for ChartPoint<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Coords<'a, T: Scalar>(&'a [Complex<T>]);
        impl<T: Scalar> Serialize for Coords<'_, T> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
                for z in self.0 {
                    let re = z.re.to_f64().unwrap_or(f64::MAX);
                    let im = z.im.to_f64().unwrap_or(f64::MAX);
                    seq.serialize_element(&[re, im])?;
                }
                seq.end()
            }
        }
        let mut st = serializer.serialize_struct("ChartPoint", 2)?;
        st.serialize_field("chart", &self.chart)?;
        st.serialize_field("coords", &Coords(&self.coords))?;
        st.end()
    }
}

/// Normalizes a group element to exact unit modulus, rejecting values whose
/// modulus deviates from 1 by more than [`MOD_TOL`].
fn unit_group_element<T: Scalar>(t: Complex<T>) -> Result<Complex<T>> {
    let n = t.norm();
    if !n.is_finite() || (n - T::one()).abs() > mod_tol::<T>() {
        return Err(Error::InvalidGroupElement {
            modulus: n.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(t / n)
}

/// Weighted circle action: multiplies coordinate `k` by `t^{w_k}`.
///
/// `t` must have unit modulus within [`MOD_TOL`]; it is renormalized to
/// exact unit modulus before use so repeated actions cannot drift.
pub fn act<T: Scalar>(
    weights: &WeightVector,
    t: Complex<T>,
    p: &ChartPoint<T>,
) -> Result<ChartPoint<T>> {
    if weights.len() != p.coords.len() {
        return Err(Error::InvalidPoint {
            chart: p.chart.clone(),
            reason: format!(
                "weight count {} does not match coordinate count {}",
                weights.len(),
                p.coords.len()
            ),
        });
    }
    let tu = unit_group_element(t)?;
    let coords = p
        .coords
        .iter()
        .zip(weights.0.iter())
        .map(|(&z, &w)| z * cpowi(tu, w))
        .collect();
    Ok(ChartPoint {
        chart: p.chart.clone(),
        coords,
    })
}

/// Passes to the circle quotient by gauge-fixing a free direction.
///
/// The chart must have a unit-circle slot with weight `-1` or `+1`; the
/// unique group element moving that coordinate to `1` is applied to the
/// whole point and the gauge slot is dropped. The resulting point is
/// labeled as belonging to chart `"<id>_bar"` and is constant along
/// orbits: `quotient_point(c, act(w, t, p)) = quotient_point(c, p)`.
pub fn quotient_point<T: Scalar>(chart: &Chart, p: &ChartPoint<T>) -> Result<ChartPoint<T>> {
    chart.validate_point(p)?;
    let weights = chart.weights.as_ref().ok_or_else(|| Error::NoGauge {
        chart: chart.id.clone(),
    })?;
    let gauge = chart
        .slots
        .iter()
        .zip(weights.0.iter())
        .position(|(slot, &w)| *slot == SlotKind::UnitCircle && (w == 1 || w == -1))
        .ok_or_else(|| Error::NoGauge {
            chart: chart.id.clone(),
        })?;
    let z = p.coords[gauge];
    // Choose t with t^{w_gauge} · z = 1; for |z| = 1 this is z itself when
    // the weight is -1 and its conjugate when the weight is +1.
    let t = if weights.0[gauge] == -1 { z } else { z.conj() };
    let moved = act(weights, t, p)?;
    let coords = moved
        .coords
        .into_iter()
        .enumerate()
        .filter_map(|(k, z)| (k != gauge).then_some(z))
        .collect();
    Ok(ChartPoint {
        chart: format!("{}_bar", chart.id),
        coords,
    })
}

/// Minimum scaled distance from `x` to the Z_a-orbit of `y` in ℂ², where
/// the generator acts as `(y_0, y_1) ↦ (ε^{a_1} y_0, ε y_1)` with
/// `ε = e^{2πi/a}`.
pub fn za_orbit_distance<T: Scalar>(a: i64, a1: i64, x: &[Complex<T>], y: &[Complex<T>]) -> T {
    debug_assert!(a >= 1);
    debug_assert_eq!(x.len(), 2);
    debug_assert_eq!(y.len(), 2);
    let two_pi = T::PI() + T::PI();
    let mut best = T::infinity();
    for k in 0..a {
        let ang0 = two_pi * from_f64::<T>((a1 * k).rem_euclid(a) as f64 / a as f64);
        let ang1 = two_pi * from_f64::<T>(k.rem_euclid(a) as f64 / a as f64);
        let rotated = [
            y[0] * Complex::from_polar(T::one(), ang0),
            y[1] * Complex::from_polar(T::one(), ang1),
        ];
        let d = scaled_distance(x, &rotated);
        if d < best {
            best = d;
        }
    }
    best
}

/// Whether `x` lies within `tol` (scaled distance) of the Z_a-orbit of `y`.
pub fn za_orbit_equal<T: Scalar>(
    a: i64,
    a1: i64,
    x: &[Complex<T>],
    y: &[Complex<T>],
    tol: T,
) -> bool {
    za_orbit_distance(a, a1, x, y) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn chart_us() -> Chart {
        Chart::new(
            "US",
            vec![
                SlotKind::UnitCircle,
                SlotKind::ComplexPlane,
                SlotKind::ComplexPlane,
            ],
            Some(vec![7, -1, -3]),
            None,
        )
        .unwrap()
    }

    #[test]
    fn act_matches_hand_computations() {
        let w = WeightVector(vec![7, -1, -3]);
        let p = ChartPoint::new("US", vec![c(2.0, 0.0), c(0.0, 1.0), c(5.0, 0.0)]);
        let fixed = act(&w, c(1.0, 0.0), &p).unwrap();
        assert!(scaled_distance(&fixed.coords, &p.coords) < 1e-15);

        let q = act(
            &w,
            c(-1.0, 0.0),
            &ChartPoint::new("US", vec![c(1.0, 0.0); 3]),
        )
        .unwrap();
        for z in &q.coords {
            assert!((z - c(-1.0, 0.0)).norm() < 1e-15);
        }

        let w2 = WeightVector(vec![2, -1, -1]);
        let q2 = act(
            &w2,
            c(0.0, 1.0),
            &ChartPoint::new("X", vec![c(1.0, 0.0); 3]),
        )
        .unwrap();
        let expect = [c(-1.0, 0.0), c(0.0, -1.0), c(0.0, -1.0)];
        assert!(scaled_distance(&q2.coords, &expect) < 1e-15);
    }

    #[test]
    fn act_rejects_non_unit_elements() {
        let w = WeightVector(vec![1]);
        let p = ChartPoint::new("C", vec![c(1.0, 0.0)]);
        assert!(matches!(
            act(&w, c(2.0, 0.0), &p),
            Err(Error::InvalidGroupElement { .. })
        ));
        // Within tolerance is fine and gets renormalized.
        let q = act(&w, c(1.0 + 1e-12, 0.0), &p).unwrap();
        assert!((q.coords[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quotient_point_gauges_the_circle_slot() {
        let chart = Chart::new(
            "X",
            vec![
                SlotKind::ComplexPlane,
                SlotKind::UnitCircle,
                SlotKind::ComplexPlane,
            ],
            Some(vec![7, -1, -3]),
            None,
        )
        .unwrap();
        let p = ChartPoint::new("X", vec![c(2.0, 0.0), c(1.0, 0.0), c(5.0, 0.0)]);
        let q = quotient_point(&chart, &p).unwrap();
        assert_eq!(q.chart, "X_bar");
        assert!(scaled_distance(&q.coords, &[c(2.0, 0.0), c(5.0, 0.0)]) < 1e-15);

        let p = ChartPoint::new("X", vec![c(1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)]);
        let q = quotient_point(&chart, &p).unwrap();
        // (1·i^7, 1·i^{-3}) = (-i, i)
        assert!(scaled_distance(&q.coords, &[c(0.0, -1.0), c(0.0, 1.0)]) < 1e-14);
    }

    #[test]
    fn quotient_point_is_orbit_invariant() {
        let chart = chart_us(); // gauge slot is index 0 with weight +7: no gauge
        assert!(matches!(
            quotient_point(&chart, &ChartPoint::new("US", vec![c(1.0, 0.0); 3])),
            Err(Error::NoGauge { .. })
        ));

        let chart = Chart::new(
            "X",
            vec![
                SlotKind::ComplexPlane,
                SlotKind::UnitCircle,
                SlotKind::ComplexPlane,
            ],
            Some(vec![5, -1, -2]),
            None,
        )
        .unwrap();
        let p = ChartPoint::new("X", vec![c(1.5, -0.25), c(0.6, 0.8), c(-2.0, 1.0)]);
        let base = quotient_point(&chart, &p).unwrap();
        for k in 0..32 {
            let ang = 2.0 * std::f64::consts::PI * (k as f64) / 32.0 + 0.1;
            let t = Complex64::from_polar(1.0, ang);
            let moved = chart.act(t, &p).unwrap();
            let q = quotient_point(&chart, &moved).unwrap();
            assert!(scaled_distance(&base.coords, &q.coords) < 1e-12);
        }
    }

    #[test]
    fn quotient_point_handles_positive_gauge_weight() {
        let chart = Chart::new(
            "Xptil",
            vec![
                SlotKind::ComplexPlane,
                SlotKind::ComplexPlane,
                SlotKind::UnitCircle,
            ],
            Some(vec![0, 0, 1]),
            None,
        )
        .unwrap();
        let p = ChartPoint::new("Xptil", vec![c(3.0, 1.0), c(-1.0, 2.0), c(0.0, 1.0)]);
        let q = quotient_point(&chart, &p).unwrap();
        // Weight-0 slots are untouched, the gauge slot is dropped.
        assert_eq!(q.chart, "Xptil_bar");
        assert!(scaled_distance(&q.coords, &[c(3.0, 1.0), c(-1.0, 2.0)]) < 1e-15);
    }

    #[test]
    fn za_orbit_distance_brute_force() {
        let eps = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let x = [c(1.0, 0.0), c(1.0, 0.0)];
        // y = g·x with a=3, a1=2: orbit member, distance ~ 0.
        let y = [eps * eps, eps];
        assert!(za_orbit_equal(3, 2, &x, &y, 1e-12));
        // Mismatched pairing is not in the orbit.
        let y_bad = [c(1.0, 0.0), eps];
        assert!(!za_orbit_equal(3, 2, &x, &y_bad, 1e-6));
        // a = 1 reduces to plain comparison.
        assert!(za_orbit_equal(1, 0, &x, &x, 1e-15));
    }

    #[test]
    fn validate_point_enforces_slot_constraints() {
        let chart = chart_us();
        let ok = ChartPoint::new("US", vec![c(0.6, 0.8), c(0.0, 0.0), c(9.0, 0.0)]);
        chart.validate_point(&ok).unwrap();
        let off_circle = ChartPoint::new("US", vec![c(1.1, 0.0), c(0.0, 0.0), c(9.0, 0.0)]);
        assert!(chart.validate_point(&off_circle).is_err());
        let wrong_chart = ok.clone().with_chart("X");
        assert!(matches!(
            chart.validate_point(&wrong_chart),
            Err(Error::ChartMismatch { .. })
        ));
    }

    #[test]
    fn sphere_pair_constraint() {
        let chart = Chart::new(
            "CxS3",
            vec![
                SlotKind::ComplexPlane,
                SlotKind::UnitDisk,
                SlotKind::UnitDisk,
            ],
            Some(vec![7, -1, -3]),
            Some((1, 2)),
        )
        .unwrap();
        let ok = ChartPoint::new("CxS3", vec![c(4.0, 0.0), c(0.6, 0.0), c(0.0, 0.8)]);
        chart.validate_point(&ok).unwrap();
        let bad = ChartPoint::new("CxS3", vec![c(4.0, 0.0), c(0.6, 0.0), c(0.6, 0.0)]);
        assert!(chart.validate_point(&bad).is_err());
    }

    #[test]
    fn chart_point_serializes_as_re_im_pairs() {
        let p = ChartPoint::new("X0", vec![c(1.0, -2.0), c(0.5, 0.0)]);
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"chart": "X0", "coords": [[1.0, -2.0], [0.5, 0.0]]})
        );
    }
}
