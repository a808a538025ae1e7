//! The enumerated family of closed-form transition maps.
//!
//! Every gluing, covering, embedding, and descended map used by the 5-d and
//! 4-d resolution atlases is one of the tags below, with integer parameters.
//! Each tag declares the shape of its domain and codomain (as slot-kind
//! lists), a domain predicate, and — when it exists — a closed-form inverse.
//! Maps evaluate on [`ChartPoint`]s and check chart ids, so composing along
//! a mis-wired atlas fails loudly instead of silently producing numbers.

use crate::chart::{mod_tol, ChartPoint, SlotKind};
use crate::error::{Error, Result};
use crate::num::{cpow_ratio, cpowi, from_f64, unit, Scalar};
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::fmt;

use SlotKind::{ComplexPlane as P, PuncturedPlane as Q, UnitCircle as S, UnitDisk as D};

const SHAPE_PQS: [SlotKind; 3] = [P, Q, S];
const SHAPE_PSQ: [SlotKind; 3] = [P, S, Q];
const SHAPE_PSP: [SlotKind; 3] = [P, S, P];
const SHAPE_PPS: [SlotKind; 3] = [P, P, S];
const SHAPE_PDD: [SlotKind; 3] = [P, D, D];
const SHAPE_QDD: [SlotKind; 3] = [Q, D, D];
const SHAPE_SPP: [SlotKind; 3] = [S, P, P];
const SHAPE_SQP: [SlotKind; 3] = [S, Q, P];
const SHAPE_SPQ: [SlotKind; 3] = [S, P, Q];
const SHAPE_QSP: [SlotKind; 3] = [Q, S, P];
const SHAPE_QPS: [SlotKind; 3] = [Q, P, S];
const SHAPE_PQ: [SlotKind; 2] = [P, Q];
const SHAPE_QP: [SlotKind; 2] = [Q, P];
const SHAPE_QQ: [SlotKind; 2] = [Q, Q];
const SHAPE_SD: [SlotKind; 2] = [S, D];
const SHAPE_DS: [SlotKind; 2] = [D, S];

/// How a map can be run backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invertibility {
    /// A diffeomorphism between its domain and codomain shapes.
    Bijective,
    /// Injective; the inverse is defined on the image only.
    OntoImage,
    /// Finite-to-one or collapsing; no inverse.
    None,
}

/// Closed-form map family. Integer parameters are the fiber-type data
/// `(r, a)`, continued-fraction coefficients `b`, and — for the chain
/// gluing — the 1-based position `index` in the chart chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum MapTag {
    /// `(p', q1', q2') ↦ (p'|q1'|, q1'/|q1'|, q2'/|q1'|)`: glues the
    /// plane×plane×circle chart to the plane×circle×plane chart.
    GlueF,
    /// `(p, q1, q2) ↦ (p·n, q1/n, q2/n)`, `n = √(|q1|²+|q2|²)`:
    /// identifies the plane×circle×plane chart with ℂ×S³.
    IotaX,
    /// Same formula from the plane×plane×circle chart into ℂ×S³.
    IotaXPrime,
    /// `(p̃, q̃1, q̃2) ↦ (q̃1^r·p̃, q̃1^{-1}, q̃2·q̃1^{-a})`: the weight-1
    /// model of the plane×circle×plane chart; an involution.
    PiTilde { r: i64, a: i64 },
    /// `(p̃', q̃1', q̃2') ↦ (q̃2'^r·p̃', q̃2'^{-1}·q̃1', q̃2'^{-a})`: the
    /// a-to-1 covering of the plane×plane×circle chart.
    PiPrimeTilde { r: i64, a: i64 },
    /// `(p', q1', q2') ↦ (q2'^{-1}, q1', p'·q2'^b)`: renormalizes the
    /// primed chart into the model chart of the reduced fiber type.
    NormalizeB { b: i64 },
    /// `(p, q1, q2) ↦ (q2^{-1}, q1, p·|q2|²·(q2/|q2|)^b)`: the chain
    /// gluing at position `index` between consecutive resolution charts.
    ChainG { b: i64, index: usize },
    /// `(u, v1, v2) ↦ (u·n, v1/n, v2/n)`, `n = √(|v1|²+|v2|²)`: embeds the
    /// punctured model neighborhood into ℂ×S³.
    EmbedE,
    /// `(u, v1, v2) ↦ (u·|v1|, v1/|v1|, v2/|v1|)`: embeds the locus
    /// `v1 ≠ 0` of the model into the plane×circle×plane chart.
    EmbedE1,
    /// `(u, v1, v2) ↦ (u·|v2|, v1/|v2|, v2/|v2|)`: embeds the locus
    /// `v2 ≠ 0` of the model into the plane×plane×circle chart.
    EmbedE2,
    /// `(u, v1, v2) ↦ (u^r, u^{-1}v1, u^{-a}v2)`: the r-to-1 covering of
    /// the model neighborhood by its weight-(1,0,0) model.
    ModelCover { r: i64, a: i64 },
    /// `(ξ, η) ↦ (η^{-1}, ξ·η^b)`: the standard 4-d resolution gluing.
    ReidF { b: i64 },
    /// `(ζ1', ζ2') ↦ (ζ2'^r·ζ1', ζ2'^{-a})`: the two-chart gluing; a-to-1,
    /// invariant under the deck Z_a-action.
    ReidTwoChartF { r: i64, a: i64 },
    /// `(v1, v2) ↦ (v1^r, v2·v1^{-a})`: embeds the punctured plane locus
    /// `v1 ≠ 0` into the first 4-d chart.
    ReidEmbed0 { r: i64, a: i64 },
    /// `(v1, v2) ↦ (v2^{-1}·v1^a, v1^r·(v2·v1^{-a})^{b1})`: embeds the
    /// locus `v1, v2 ≠ 0` into the second 4-d chart.
    ReidEmbed1 { r: i64, a: i64, b1: i64 },
    /// `(v1, v2) ↦ (v2^{r/a}, v1·v2^{-1/a})` with the principal branch:
    /// the fractional embedding into the primed two-chart; well defined
    /// only modulo the Z_a deck action.
    TwoChartEmbed2 { r: i64, a: i64 },
    /// `(v1, v2) ↦ (v1^r, v2·v1^{-a})` on the solid torus |v1| = 1.
    TopModelH1 { r: i64, a: i64 },
    /// `(v1, v2) ↦ (v2^{r/a}, v1·v2^{-1/a})` on the solid torus |v2| = 1,
    /// principal branch, compared modulo Z_a.
    TopModelH2 { r: i64, a: i64 },
    /// `(ζ1', ζ2') ↦ (ζ1'·ζ2'^r, ζ2'^{-a})` on the solid torus |ζ2'| = 1.
    TopModelF3 { r: i64, a: i64 },
    /// `(ṽ1, ṽ2) ↦ (|ṽ1|·u^r, ṽ2·u^{-a}/|ṽ1|)`, `u = ṽ1/|ṽ1|`: the circle
    /// quotient of the first model embedding.
    QuotEmbed1 { r: i64, a: i64 },
    /// `(ṽ1, ṽ2) ↦ (|ṽ2|·w^r, ṽ1·w^{-1}/|ṽ2|)`, `w` the principal a-th
    /// root of ṽ2/|ṽ2|: the circle quotient of the second model embedding,
    /// defined modulo Z_a.
    QuotEmbed2 { r: i64, a: i64 },
    /// `(p̃', q̃1') ↦ (p̃'·|q̃1'|·u^r, u^{-a}/|q̃1'|)`, `u = q̃1'/|q̃1'|`:
    /// the circle-quotient descent of the 5-d gluing; a-to-1.
    DescendedG { r: i64, a: i64 },
}

impl MapTag {
    /// Required slot kinds on the domain side.
    pub fn src_shape(&self) -> &'static [SlotKind] {
        match self {
            MapTag::GlueF => &SHAPE_PQS,
            MapTag::IotaX => &SHAPE_PSP,
            MapTag::IotaXPrime => &SHAPE_PPS,
            MapTag::PiTilde { .. } => &SHAPE_PSP,
            MapTag::PiPrimeTilde { .. } => &SHAPE_PPS,
            MapTag::NormalizeB { .. } => &SHAPE_PPS,
            MapTag::ChainG { .. } => &SHAPE_PSQ,
            MapTag::EmbedE => &SHAPE_SPP,
            MapTag::EmbedE1 => &SHAPE_SQP,
            MapTag::EmbedE2 => &SHAPE_SPQ,
            MapTag::ModelCover { .. } => &SHAPE_SPP,
            MapTag::ReidF { .. } => &SHAPE_PQ,
            MapTag::ReidTwoChartF { .. } => &SHAPE_PQ,
            MapTag::ReidEmbed0 { .. } => &SHAPE_QP,
            MapTag::ReidEmbed1 { .. } => &SHAPE_QQ,
            MapTag::TwoChartEmbed2 { .. } => &SHAPE_PQ,
            MapTag::TopModelH1 { .. } => &SHAPE_SD,
            MapTag::TopModelH2 { .. } => &SHAPE_DS,
            MapTag::TopModelF3 { .. } => &SHAPE_DS,
            MapTag::QuotEmbed1 { .. } => &SHAPE_QP,
            MapTag::QuotEmbed2 { .. } => &SHAPE_PQ,
            MapTag::DescendedG { .. } => &SHAPE_PQ,
        }
    }

    /// Slot kinds guaranteed on the codomain side.
    pub fn dst_shape(&self) -> &'static [SlotKind] {
        match self {
            MapTag::GlueF => &SHAPE_PSQ,
            MapTag::IotaX => &SHAPE_PDD,
            MapTag::IotaXPrime => &SHAPE_PDD,
            MapTag::PiTilde { .. } => &SHAPE_PSP,
            MapTag::PiPrimeTilde { .. } => &SHAPE_PPS,
            MapTag::NormalizeB { .. } => &SHAPE_SPP,
            MapTag::ChainG { .. } => &SHAPE_QSP,
            MapTag::EmbedE => &SHAPE_QDD,
            MapTag::EmbedE1 => &SHAPE_QSP,
            MapTag::EmbedE2 => &SHAPE_QPS,
            MapTag::ModelCover { .. } => &SHAPE_SPP,
            MapTag::ReidF { .. } => &SHAPE_QP,
            MapTag::ReidTwoChartF { .. } => &SHAPE_PQ,
            MapTag::ReidEmbed0 { .. } => &SHAPE_QP,
            MapTag::ReidEmbed1 { .. } => &SHAPE_QQ,
            MapTag::TwoChartEmbed2 { .. } => &SHAPE_QP,
            MapTag::TopModelH1 { .. } => &SHAPE_SD,
            MapTag::TopModelH2 { .. } => &SHAPE_SD,
            MapTag::TopModelF3 { .. } => &SHAPE_DS,
            MapTag::QuotEmbed1 { .. } => &SHAPE_QP,
            MapTag::QuotEmbed2 { .. } => &SHAPE_QP,
            MapTag::DescendedG { .. } => &SHAPE_PQ,
        }
    }

    /// Two domain slots that must not vanish simultaneously (joint-norm
    /// embeddings only).
    pub fn src_nonzero_pair(&self) -> Option<(usize, usize)> {
        match self {
            MapTag::EmbedE => Some((1, 2)),
            _ => None,
        }
    }

    /// Two codomain slots jointly constrained to the unit 3-sphere.
    pub fn dst_sphere_pair(&self) -> Option<(usize, usize)> {
        match self {
            MapTag::IotaX | MapTag::IotaXPrime | MapTag::EmbedE => Some((1, 2)),
            _ => None,
        }
    }

    /// Whether (and how) the map can be inverted.
    pub fn invertibility(&self) -> Invertibility {
        match self {
            MapTag::GlueF
            | MapTag::PiTilde { .. }
            | MapTag::NormalizeB { .. }
            | MapTag::ChainG { .. }
            | MapTag::ReidF { .. } => Invertibility::Bijective,
            MapTag::IotaX
            | MapTag::IotaXPrime
            | MapTag::EmbedE
            | MapTag::EmbedE1
            | MapTag::EmbedE2 => Invertibility::OntoImage,
            _ => Invertibility::None,
        }
    }

    /// Applies the closed form to domain-validated coordinates.
    fn apply<T: Scalar>(&self, c: &[Complex<T>]) -> Vec<Complex<T>> {
        match *self {
            MapTag::GlueF => {
                let n = c[1].norm();
                vec![c[0] * n, c[1] / n, c[2] / n]
            }
            MapTag::IotaX | MapTag::IotaXPrime => {
                let n = (c[1].norm_sqr() + c[2].norm_sqr()).sqrt();
                vec![c[0] * n, c[1] / n, c[2] / n]
            }
            MapTag::PiTilde { r, a } => {
                vec![
                    cpowi(c[1], r) * c[0],
                    cpowi(c[1], -1),
                    c[2] * cpowi(c[1], -a),
                ]
            }
            MapTag::PiPrimeTilde { r, a } => {
                vec![
                    cpowi(c[2], r) * c[0],
                    cpowi(c[2], -1) * c[1],
                    cpowi(c[2], -a),
                ]
            }
            MapTag::NormalizeB { b } => {
                vec![cpowi(c[2], -1), c[1], c[0] * cpowi(c[2], b)]
            }
            MapTag::ChainG { b, .. } => {
                let n = c[2].norm();
                let u = c[2] / n;
                vec![
                    Complex::new(T::one(), T::zero()) / c[2],
                    c[1],
                    c[0] * (n * n) * cpowi(u, b),
                ]
            }
            MapTag::EmbedE => {
                let n = (c[1].norm_sqr() + c[2].norm_sqr()).sqrt();
                vec![c[0] * n, c[1] / n, c[2] / n]
            }
            MapTag::EmbedE1 => {
                let n = c[1].norm();
                vec![c[0] * n, c[1] / n, c[2] / n]
            }
            MapTag::EmbedE2 => {
                let n = c[2].norm();
                vec![c[0] * n, c[1] / n, c[2] / n]
            }
            MapTag::ModelCover { r, a } => {
                vec![
                    cpowi(c[0], r),
                    cpowi(c[0], -1) * c[1],
                    cpowi(c[0], -a) * c[2],
                ]
            }
            MapTag::ReidF { b } => {
                vec![cpowi(c[1], -1), c[0] * cpowi(c[1], b)]
            }
            MapTag::ReidTwoChartF { r, a } => {
                vec![cpowi(c[1], r) * c[0], cpowi(c[1], -a)]
            }
            MapTag::ReidEmbed0 { r, a } => {
                vec![cpowi(c[0], r), c[1] * cpowi(c[0], -a)]
            }
            MapTag::ReidEmbed1 { r, a, b1 } => {
                let t = c[1] * cpowi(c[0], -a);
                vec![
                    cpowi(c[1], -1) * cpowi(c[0], a),
                    cpowi(c[0], r) * cpowi(t, b1),
                ]
            }
            MapTag::TwoChartEmbed2 { r, a } | MapTag::TopModelH2 { r, a } => {
                vec![cpow_ratio(c[1], r, a), c[0] * cpow_ratio(c[1], -1, a)]
            }
            MapTag::TopModelH1 { r, a } => {
                vec![cpowi(c[0], r), c[1] * cpowi(c[0], -a)]
            }
            MapTag::TopModelF3 { r, a } => {
                vec![c[0] * cpowi(c[1], r), cpowi(c[1], -a)]
            }
            MapTag::QuotEmbed1 { r, a } => {
                let n = c[0].norm();
                let u = c[0] / n;
                vec![cpowi(u, r) * n, c[1] * cpowi(u, -a) / n]
            }
            MapTag::QuotEmbed2 { r, a } => {
                let n = c[1].norm();
                let w = Complex::from_polar(T::one(), (c[1] / n).arg() / from_f64::<T>(a as f64));
                vec![cpowi(w, r) * n, c[0] * cpowi(w, -1) / n]
            }
            MapTag::DescendedG { r, a } => {
                let n = c[1].norm();
                let u = c[1] / n;
                vec![c[0] * n * cpowi(u, r), cpowi(u, -a) / n]
            }
        }
    }

    /// Applies the closed-form inverse to image-validated coordinates.
    /// Only called for bijective or onto-image tags.
    fn apply_inverse<T: Scalar>(&self, q: &[Complex<T>]) -> Vec<Complex<T>> {
        match *self {
            MapTag::GlueF => {
                let n = q[2].norm();
                vec![q[0] * n, q[1] / n, q[2] / n]
            }
            MapTag::IotaX => {
                let n = q[1].norm();
                vec![q[0] * n, q[1] / n, q[2] / n]
            }
            MapTag::IotaXPrime => {
                let n = q[2].norm();
                vec![q[0] * n, q[1] / n, q[2] / n]
            }
            MapTag::PiTilde { .. } => self.apply(q),
            MapTag::NormalizeB { b } => {
                vec![q[2] * cpowi(q[0], b), q[1], cpowi(q[0], -1)]
            }
            MapTag::ChainG { b, .. } => {
                let n = q[0].norm();
                let u = q[0] / n;
                vec![
                    q[2] * (n * n) * cpowi(u, b),
                    q[1],
                    Complex::new(T::one(), T::zero()) / q[0],
                ]
            }
            MapTag::EmbedE | MapTag::EmbedE1 | MapTag::EmbedE2 => {
                let n = q[0].norm();
                vec![q[0] / n, q[1] * n, q[2] * n]
            }
            MapTag::ReidF { b } => {
                vec![q[1] * cpowi(q[0], b), cpowi(q[0], -1)]
            }
            _ => unreachable!("apply_inverse called on a non-invertible tag"),
        }
    }

    /// Extra constraint a point must satisfy to lie in the image
    /// (beyond the codomain shape and sphere pair).
    fn image_constraint<T: Scalar>(&self, q: &[Complex<T>]) -> std::result::Result<(), String> {
        let tol = mod_tol::<T>();
        match self {
            MapTag::IotaX => {
                if q[1].norm() <= tol {
                    Err("second coordinate vanishes on the image boundary".to_string())
                } else {
                    Ok(())
                }
            }
            MapTag::IotaXPrime => {
                if q[2].norm() <= tol {
                    Err("third coordinate vanishes on the image boundary".to_string())
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for MapTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MapTag::GlueF => write!(f, "glue_f"),
            MapTag::IotaX => write!(f, "iota_x"),
            MapTag::IotaXPrime => write!(f, "iota_x_prime"),
            MapTag::PiTilde { r, a } => write!(f, "pi_tilde({r},{a})"),
            MapTag::PiPrimeTilde { r, a } => write!(f, "pi_prime_tilde({r},{a})"),
            MapTag::NormalizeB { b } => write!(f, "normalize_b({b})"),
            MapTag::ChainG { b, .. } => write!(f, "chain_g({b})"),
            MapTag::EmbedE => write!(f, "embed_e"),
            MapTag::EmbedE1 => write!(f, "embed_e1"),
            MapTag::EmbedE2 => write!(f, "embed_e2"),
            MapTag::ModelCover { r, a } => write!(f, "model_cover({r},{a})"),
            MapTag::ReidF { b } => write!(f, "reid_f({b})"),
            MapTag::ReidTwoChartF { r, a } => write!(f, "reid_two_chart_f({r},{a})"),
            MapTag::ReidEmbed0 { r, a } => write!(f, "reid_embed0({r},{a})"),
            MapTag::ReidEmbed1 { r, a, b1 } => write!(f, "reid_embed1({r},{a},{b1})"),
            MapTag::TwoChartEmbed2 { r, a } => write!(f, "two_chart_embed2({r},{a})"),
            MapTag::TopModelH1 { r, a } => write!(f, "top_model_h1({r},{a})"),
            MapTag::TopModelH2 { r, a } => write!(f, "top_model_h2({r},{a})"),
            MapTag::TopModelF3 { r, a } => write!(f, "top_model_f3({r},{a})"),
            MapTag::QuotEmbed1 { r, a } => write!(f, "quot_embed1({r},{a})"),
            MapTag::QuotEmbed2 { r, a } => write!(f, "quot_embed2({r},{a})"),
            MapTag::DescendedG { r, a } => write!(f, "descended_g({r},{a})"),
        }
    }
}

/// Validates coordinates against a slot-kind shape; returns the reason of
/// the first violation.
fn check_shape<T: Scalar>(
    coords: &[Complex<T>],
    shape: &[SlotKind],
) -> std::result::Result<(), String> {
    if coords.len() != shape.len() {
        return Err(format!(
            "expected {} coordinates, got {}",
            shape.len(),
            coords.len()
        ));
    }
    for (k, (slot, &z)) in shape.iter().zip(coords.iter()).enumerate() {
        slot.check(k, z)?;
    }
    Ok(())
}

fn check_sphere<T: Scalar>(
    coords: &[Complex<T>],
    pair: Option<(usize, usize)>,
) -> std::result::Result<(), String> {
    if let Some((i, j)) = pair {
        let s = (coords[i].norm_sqr() + coords[j].norm_sqr()).sqrt();
        if (s - T::one()).abs() > mod_tol::<T>() {
            return Err(format!(
                "slots {i},{j} must satisfy |z_{i}|^2 + |z_{j}|^2 = 1"
            ));
        }
    }
    Ok(())
}

fn check_nonzero_pair<T: Scalar>(
    coords: &[Complex<T>],
    pair: Option<(usize, usize)>,
) -> std::result::Result<(), String> {
    if let Some((i, j)) = pair {
        let s = (coords[i].norm_sqr() + coords[j].norm_sqr()).sqrt();
        if s <= mod_tol::<T>() {
            return Err(format!("slots {i},{j} must not vanish simultaneously"));
        }
    }
    Ok(())
}

/// Renormalizes codomain circle slots to exact unit modulus, and sphere
/// pairs to the exact unit sphere, to prevent drift across compositions.
fn renormalize<T: Scalar>(
    coords: &mut [Complex<T>],
    shape: &[SlotKind],
    sphere: Option<(usize, usize)>,
) {
    for (slot, z) in shape.iter().zip(coords.iter_mut()) {
        if *slot == SlotKind::UnitCircle {
            *z = unit(*z);
        }
    }
    if let Some((i, j)) = sphere {
        let s = (coords[i].norm_sqr() + coords[j].norm_sqr()).sqrt();
        coords[i] = coords[i] / s;
        coords[j] = coords[j] / s;
    }
}

fn all_finite<T: Scalar>(coords: &[Complex<T>]) -> bool {
    coords.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// A closed-form map between two named charts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionMap {
    /// Which closed form, with its integer parameters.
    #[serde(flatten)]
    pub tag: MapTag,
    /// Chart id of the domain.
    pub src: String,
    /// Chart id of the codomain.
    pub dst: String,
}

impl TransitionMap {
    /// Builds a map between two chart ids.
    pub fn new(tag: MapTag, src: impl Into<String>, dst: impl Into<String>) -> Self {
        TransitionMap {
            tag,
            src: src.into(),
            dst: dst.into(),
        }
    }

    /// Evaluates the map at a point of the source chart.
    pub fn eval<T: Scalar>(&self, p: &ChartPoint<T>) -> Result<ChartPoint<T>> {
        if p.chart != self.src {
            return Err(Error::ChartMismatch {
                expected: self.src.clone(),
                found: p.chart.clone(),
            });
        }
        let shape = self.tag.src_shape();
        check_shape(&p.coords, shape)
            .and_then(|()| check_nonzero_pair(&p.coords, self.tag.src_nonzero_pair()))
            .map_err(|reason| Error::OutsideDomain {
                map: self.tag.to_string(),
                reason,
            })?;
        let mut coords = self.tag.apply(&p.coords);
        renormalize(
            &mut coords,
            self.tag.dst_shape(),
            self.tag.dst_sphere_pair(),
        );
        if !all_finite(&coords) {
            return Err(Error::OutsideDomain {
                map: self.tag.to_string(),
                reason: "evaluation produced a non-finite coordinate".to_string(),
            });
        }
        Ok(ChartPoint::new(self.dst.clone(), coords))
    }

    /// Evaluates the closed-form inverse at a point of the target chart.
    ///
    /// Fails with [`Error::NotInvertible`] for finite-to-one tags and with
    /// [`Error::OutsideImage`] when the point violates an image constraint
    /// (embeddings invert only on their image).
    pub fn eval_inverse<T: Scalar>(&self, q: &ChartPoint<T>) -> Result<ChartPoint<T>> {
        if self.tag.invertibility() == Invertibility::None {
            return Err(Error::NotInvertible {
                map: self.tag.to_string(),
            });
        }
        if q.chart != self.dst {
            return Err(Error::ChartMismatch {
                expected: self.dst.clone(),
                found: q.chart.clone(),
            });
        }
        check_shape(&q.coords, self.tag.dst_shape())
            .and_then(|()| check_sphere(&q.coords, self.tag.dst_sphere_pair()))
            .and_then(|()| self.tag.image_constraint(&q.coords))
            .map_err(|reason| Error::OutsideImage {
                map: self.tag.to_string(),
                reason,
            })?;
        let mut coords = self.tag.apply_inverse(&q.coords);
        renormalize(&mut coords, self.tag.src_shape(), None);
        if !all_finite(&coords) {
            return Err(Error::OutsideImage {
                map: self.tag.to_string(),
                reason: "inversion produced a non-finite coordinate".to_string(),
            });
        }
        Ok(ChartPoint::new(self.src.clone(), coords))
    }
}

/// A chain of transition maps evaluated left to right.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComposedMap {
    /// The maps, in application order; consecutive chart ids must match.
    pub maps: Vec<TransitionMap>,
}

impl ComposedMap {
    /// Builds a composition, validating chart-id continuity.
    pub fn new(maps: Vec<TransitionMap>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::InvalidConfig {
                reason: "composition must contain at least one map".to_string(),
            });
        }
        for pair in maps.windows(2) {
            if pair[0].dst != pair[1].src {
                return Err(Error::ChartMismatch {
                    expected: pair[0].dst.clone(),
                    found: pair[1].src.clone(),
                });
            }
        }
        Ok(ComposedMap { maps })
    }

    /// Chart id of the overall domain.
    pub fn src(&self) -> &str {
        &self.maps[0].src
    }

    /// Chart id of the overall codomain.
    pub fn dst(&self) -> &str {
        &self.maps[self.maps.len() - 1].dst
    }

    /// Evaluates the whole chain.
    pub fn eval<T: Scalar>(&self, p: &ChartPoint<T>) -> Result<ChartPoint<T>> {
        let mut current = p.clone();
        for m in &self.maps {
            current = m.eval(&current)?;
        }
        Ok(current)
    }
}
