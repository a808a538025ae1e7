//! The 5-dimensional equivariant resolution atlas.
//!
//! For a fiber type `1/r (1, a)` with minus-continued-fraction expansion
//! `[b_1, ..., b_n]` and remainder sequence `rem`, the atlas consists of a
//! chain of three-slot charts `X_0, ..., X_{n-1}` (each plane × circle ×
//! plane, carrying the weighted circle action `(rem[i], -1, -rem[i+1])`),
//! a primed copy of the final chart, and the model neighborhood `US` of
//! the singular fiber. The chain gluings, the final gluing, and the model
//! embedding are all members of the closed-form map family in [`crate::map`].
//!
//! The atlas also records the exceptional chain: the `n` compact
//! components created by the resolution, each visible in two charts as a
//! coordinate locus, with the circles along which consecutive components
//! intersect.

use crate::chart::{Chart, SlotKind};
use crate::error::{Error, Result};
use crate::hj::{FiberType, HjExpansion};
use crate::map::{MapTag, TransitionMap};
use serde::Serialize;

use SlotKind::{ComplexPlane as P, UnitCircle as S, UnitDisk as D};

/// How an exceptional locus sits inside a chart, slot by slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotPattern {
    /// The coordinate is pinned to 0.
    Zero,
    /// The coordinate ranges over the unit circle.
    Circle,
    /// The coordinate ranges over the whole plane.
    Plane,
}

impl SlotPattern {
    /// Whether every point matching `self` also matches `other`.
    pub fn within(self, other: SlotPattern) -> bool {
        self == other || (other == SlotPattern::Plane && self == SlotPattern::Zero)
    }
}

/// Diffeomorphism type of a compact exceptional component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// `S² × S¹`.
    SphereTimesCircle,
    /// `S³`.
    ThreeSphere,
}

/// One coordinate-locus description of an exceptional component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentView {
    /// Chart the locus lives in.
    pub chart: String,
    /// Per-slot locus description.
    pub pattern: Vec<SlotPattern>,
}

/// One compact component of the exceptional set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionalComponent {
    /// 1-based position along the chain.
    pub index: usize,
    /// Diffeomorphism type.
    pub topology: Topology,
    /// The charts in which the component is a coordinate locus.
    pub views: Vec<ComponentView>,
}

/// The circle along which two consecutive exceptional components meet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionCircle {
    /// 1-based `j`: the circle where components `j` and `j + 1` meet.
    pub index: usize,
    /// Chart in which both components are visible.
    pub chart: String,
    /// Per-slot locus description (zero, circle, zero).
    pub pattern: Vec<SlotPattern>,
}

/// The exceptional set of the resolution: a path-adjacent chain of
/// components, the first `n - 1` diffeomorphic to `S² × S¹` and the last
/// to `S³`, meeting consecutively along circles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionalChain {
    /// Components `Q_1, ..., Q_n` in chain order.
    pub components: Vec<ExceptionalComponent>,
    /// Intersection circles `R_1, ..., R_{n-1}`.
    pub circles: Vec<IntersectionCircle>,
}

/// The 5-d resolution atlas of one fiber type.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Atlas5 {
    /// The fiber type being resolved.
    pub fiber: FiberType,
    /// Its minus-continued-fraction data.
    pub expansion: HjExpansion,
    /// Chain charts `X0, ..., X{n-1}`, then the primed final chart.
    pub charts: Vec<Chart>,
    /// The model neighborhood of the singular fiber.
    pub model: Chart,
    /// Chain gluings `X{i-1} -> Xi` for `i = 1..n-1`, then the final
    /// gluing from the primed chart onto `X{n-1}`.
    pub transitions: Vec<TransitionMap>,
    /// Embedding of the punctured model neighborhood into `X0`.
    pub embedding: TransitionMap,
    /// The exceptional chain.
    pub exceptional: ExceptionalChain,
}

impl Atlas5 {
    /// Builds the atlas for a fiber type. Fails with
    /// [`Error::RegularFiber`] when `r = 1` (nothing to resolve).
    pub fn for_fiber(fiber: FiberType) -> Result<Self> {
        let expansion = fiber.expansion()?;
        let rem = &expansion.remainders;
        let b = &expansion.coefficients;
        let n = b.len();

        // The remainder recurrence is what makes every weight/coefficient
        // identity below hold; re-verify it as a defense against bad data.
        for i in 1..=n {
            if b[i - 1] * rem[i] - rem[i + 1] != rem[i - 1] {
                return Err(Error::InvalidExpansion {
                    reason: format!(
                        "remainder recurrence fails at position {i}: \
                         {} * {} - {} != {}",
                        b[i - 1],
                        rem[i],
                        rem[i + 1],
                        rem[i - 1]
                    ),
                });
            }
        }

        let mut charts = Vec::with_capacity(n + 1);
        for i in 0..n {
            charts.push(Chart::new(
                format!("X{i}"),
                vec![P, S, P],
                Some(vec![rem[i], -1, -rem[i + 1]]),
                None,
            )?);
        }
        let prime_id = format!("Xp{}", n - 1);
        charts.push(Chart::new(
            prime_id.clone(),
            vec![P, P, S],
            Some(vec![rem[n - 1], -1, -1]),
            None,
        )?);

        let model = Chart::new(
            "US",
            vec![S, P, P],
            Some(vec![fiber.r(), -1, -fiber.a()]),
            None,
        )?;

        let mut transitions = Vec::with_capacity(n);
        for i in 1..n {
            transitions.push(TransitionMap::new(
                MapTag::ChainG {
                    b: b[i - 1],
                    index: i,
                },
                format!("X{}", i - 1),
                format!("X{i}"),
            ));
        }
        transitions.push(TransitionMap::new(
            MapTag::GlueF,
            prime_id.clone(),
            format!("X{}", n - 1),
        ));

        let embedding = TransitionMap::new(MapTag::EmbedE1, "US", "X0");

        let mut components = Vec::with_capacity(n);
        for j in 1..=n {
            let views = if j < n {
                vec![
                    ComponentView {
                        chart: format!("X{}", j - 1),
                        pattern: vec![SlotPattern::Zero, SlotPattern::Circle, SlotPattern::Plane],
                    },
                    ComponentView {
                        chart: format!("X{j}"),
                        pattern: vec![SlotPattern::Plane, SlotPattern::Circle, SlotPattern::Zero],
                    },
                ]
            } else {
                vec![
                    ComponentView {
                        chart: format!("X{}", n - 1),
                        pattern: vec![SlotPattern::Zero, SlotPattern::Circle, SlotPattern::Plane],
                    },
                    ComponentView {
                        chart: prime_id.clone(),
                        pattern: vec![SlotPattern::Zero, SlotPattern::Plane, SlotPattern::Circle],
                    },
                ]
            };
            components.push(ExceptionalComponent {
                index: j,
                topology: if j < n {
                    Topology::SphereTimesCircle
                } else {
                    Topology::ThreeSphere
                },
                views,
            });
        }
        let circles = (1..n)
            .map(|j| IntersectionCircle {
                index: j,
                chart: format!("X{j}"),
                pattern: vec![SlotPattern::Zero, SlotPattern::Circle, SlotPattern::Zero],
            })
            .collect();

        Ok(Atlas5 {
            fiber,
            expansion,
            charts,
            model,
            transitions,
            embedding,
            exceptional: ExceptionalChain {
                components,
                circles,
            },
        })
    }

    /// Number of chain charts (the expansion length `n`).
    pub fn chain_length(&self) -> usize {
        self.expansion.coefficients.len()
    }

    /// The chain gluing `X{i-1} -> Xi`, 1-based, `i = 1..n-1`.
    pub fn chain_transition(&self, i: usize) -> Result<&TransitionMap> {
        if i == 0 || i >= self.chain_length() {
            return Err(Error::IndexOutOfRange {
                index: i,
                context: "chain transition".to_string(),
            });
        }
        Ok(&self.transitions[i - 1])
    }

    /// The final gluing from the primed chart onto the last chain chart.
    pub fn final_transition(&self) -> &TransitionMap {
        &self.transitions[self.transitions.len() - 1]
    }

    /// Looks up a chart (chain, primed, or model) by id.
    pub fn chart(&self, id: &str) -> Option<&Chart> {
        if self.model.id == id {
            return Some(&self.model);
        }
        self.charts.iter().find(|c| c.id == id)
    }
}

/// Builds the 5-d atlas from raw fiber-type integers.
pub fn build_atlas5(r: i64, a: i64) -> Result<Atlas5> {
    Atlas5::for_fiber(FiberType::new(r, a)?)
}

/// The charts and maps that exhibit one reduction step: the model
/// neighborhood, its weight-one cover, the two resolution charts of the
/// first step with their weight-one covers, the renormalized model of the
/// reduced fiber type, and the ℂ × S³ picture that glues everything.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstStep {
    /// The fiber type being reduced.
    pub fiber: FiberType,
    /// First expansion coefficient `b_1`.
    pub b1: i64,
    /// The reduced fiber type `1/a (1, a_1)` with `a_1 = a b_1 - r`.
    pub reduced: FiberType,
    /// Model neighborhood of the singular fiber.
    pub model: Chart,
    /// Weight-one cover of the model.
    pub model_cover: Chart,
    /// First resolution chart (plane × circle × plane).
    pub chart_x: Chart,
    /// Second resolution chart (plane × plane × circle).
    pub chart_xp: Chart,
    /// Weight-one cover of `chart_x`.
    pub chart_xtil: Chart,
    /// Weight-one cover of `chart_xp`.
    pub chart_xptil: Chart,
    /// Renormalized model of the reduced fiber type.
    pub chart_xs: Chart,
    /// The ℂ × S³ chart both resolution charts embed into.
    pub chart_cs3: Chart,
    /// Gluing `chart_xp -> chart_x`.
    pub glue: TransitionMap,
    /// Weight-one covering `chart_xtil -> chart_x` (an involution).
    pub pi: TransitionMap,
    /// Weight-one covering `chart_xptil -> chart_xp` (a-to-1).
    pub pi_prime: TransitionMap,
    /// Identification `chart_x -> chart_cs3`.
    pub iota: TransitionMap,
    /// Identification `chart_xp -> chart_cs3`.
    pub iota_prime: TransitionMap,
    /// Model embedding `model -> chart_cs3` off the zero section.
    pub embed: TransitionMap,
    /// Model embedding `model -> chart_x` where the first plane slot is
    /// nonzero.
    pub embed1: TransitionMap,
    /// Model embedding `model -> chart_xp` where the second plane slot is
    /// nonzero.
    pub embed2: TransitionMap,
    /// r-to-1 covering `model_cover -> model`.
    pub cover: TransitionMap,
    /// Renormalization `chart_xp -> chart_xs` exhibiting the reduced
    /// fiber type.
    pub normalize: TransitionMap,
}

/// Builds the first-step picture for a fiber type; fails with
/// [`Error::RegularFiber`] when `r = 1`.
pub fn first_step(fiber: FiberType) -> Result<FirstStep> {
    let expansion = fiber.expansion()?;
    let (r, a) = (fiber.r(), fiber.a());
    let b1 = expansion.coefficients[0];
    let a1 = a * b1 - r;
    debug_assert_eq!(a1, expansion.remainders[2]);
    let reduced = FiberType::new(a, a1)?;

    let model = Chart::new("US", vec![S, P, P], Some(vec![r, -1, -a]), None)?;
    let model_cover = Chart::new("UStil", vec![S, P, P], Some(vec![1, 0, 0]), None)?;
    let chart_x = Chart::new("X", vec![P, S, P], Some(vec![r, -1, -a]), None)?;
    let chart_xp = Chart::new("Xp", vec![P, P, S], Some(vec![r, -1, -a]), None)?;
    let chart_xtil = Chart::new("Xtil", vec![P, S, P], Some(vec![0, 1, 0]), None)?;
    let chart_xptil = Chart::new("Xptil", vec![P, P, S], Some(vec![0, 0, 1]), None)?;
    let chart_xs = Chart::new("Xs", vec![S, P, P], Some(vec![a, -1, -a1]), None)?;
    let chart_cs3 = Chart::new("CxS3", vec![P, D, D], Some(vec![r, -1, -a]), Some((1, 2)))?;

    Ok(FirstStep {
        fiber,
        b1,
        reduced,
        glue: TransitionMap::new(MapTag::GlueF, "Xp", "X"),
        pi: TransitionMap::new(MapTag::PiTilde { r, a }, "Xtil", "X"),
        pi_prime: TransitionMap::new(MapTag::PiPrimeTilde { r, a }, "Xptil", "Xp"),
        iota: TransitionMap::new(MapTag::IotaX, "X", "CxS3"),
        iota_prime: TransitionMap::new(MapTag::IotaXPrime, "Xp", "CxS3"),
        embed: TransitionMap::new(MapTag::EmbedE, "US", "CxS3"),
        embed1: TransitionMap::new(MapTag::EmbedE1, "US", "X"),
        embed2: TransitionMap::new(MapTag::EmbedE2, "US", "Xp"),
        cover: TransitionMap::new(MapTag::ModelCover { r, a }, "UStil", "US"),
        normalize: TransitionMap::new(MapTag::NormalizeB { b: b1 }, "Xp", "Xs"),
        model,
        model_cover,
        chart_x,
        chart_xp,
        chart_xtil,
        chart_xptil,
        chart_xs,
        chart_cs3,
    })
}

/// The outcome of one reduction step on a fiber type.
// Variant sizes are lopsided by design: `Step` carries the full chart
// data and is produced at most a handful of times per fiber type.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reduction {
    /// One chart pair is split off and the fiber type drops to `next`.
    Step {
        /// The reduced fiber type `1/a (1, a_1)`.
        next: FiberType,
        /// The coefficient consumed by this step.
        b1: i64,
        /// First resolution chart of the step.
        chart_x: Chart,
        /// Second resolution chart of the step.
        chart_xp: Chart,
        /// Renormalization exhibiting `next` on the model of the second
        /// chart.
        normalize: TransitionMap,
    },
    /// The action near this fiber is free; the reduction terminates.
    Free,
}

/// Performs one reduction step. `1/r (1, 1)` fibers terminate the
/// sequence immediately; regular fibers (`r = 1`) are rejected.
pub fn reduce_once(fiber: FiberType) -> Result<Reduction> {
    if fiber.is_regular() {
        return Err(Error::RegularFiber);
    }
    if fiber.a() == 1 {
        return Ok(Reduction::Free);
    }
    let step = first_step(fiber)?;
    Ok(Reduction::Step {
        next: step.reduced,
        b1: step.b1,
        chart_x: step.chart_x,
        chart_xp: step.chart_xp,
        normalize: step.normalize,
    })
}
