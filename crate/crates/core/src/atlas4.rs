//! The 4-dimensional cyclic-quotient resolution atlas.
//!
//! For the quotient surface singularity of type `1/r (1, a)` with
//! minus-continued-fraction expansion `[b_1, ..., b_n]`, the minimal
//! resolution is covered by `n + 1` two-slot charts `Y0, ..., Yn` glued
//! consecutively by the standard coefficient maps, together with two
//! embeddings of the (punctured) base chart `Up`. The exceptional curves
//! form a chain with self-intersections `-b_1, ..., -b_n`.
//!
//! Two further structures are recorded: the two-chart reduction (valid
//! for `a >= 2`), which covers the resolution by one chart at each end of
//! the chain glued by an `a`-to-1 map invariant under the deck action of
//! `Z_a`, and the boundary model — solid-torus charts for the boundary
//! lens space with the three closed-form torus maps between them.

use crate::chart::{Chart, SlotKind};
use crate::error::{Error, Result};
use crate::hj::{FiberType, HjExpansion};
use crate::map::{ComposedMap, MapTag, TransitionMap};
use serde::Serialize;

use SlotKind::{ComplexPlane as P, UnitCircle as S, UnitDisk as D};

/// Intersection data of one exceptional curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CurveData {
    /// 1-based position along the chain.
    pub index: usize,
    /// Self-intersection number (the negated expansion coefficient).
    pub self_intersection: i64,
}

/// The two-chart covering of the resolution, available when `a >= 2`.
///
/// The first chart sees the chain from the `Y0` end, the primed chart
/// from the `Yn` end; the gluing between them is `a`-to-1 and descends
/// from the deck action of `Z_a` with weights `(a_1, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoChartReduction {
    /// The unprimed end chart.
    pub chart_y: Chart,
    /// The primed end chart.
    pub chart_yprime: Chart,
    /// Deck-action data `(a, a_1)`: the order of the group and the
    /// weight of its action on the first primed coordinate.
    pub za: (i64, i64),
    /// The `a`-to-1 gluing from the primed chart to the unprimed one.
    pub gluing: TransitionMap,
    /// Embedding of the base where the first coordinate is nonzero.
    pub embed_plane: TransitionMap,
    /// Fractional-power embedding of the base where the second
    /// coordinate is nonzero; well defined modulo the deck action.
    pub embed_frac: TransitionMap,
}

/// Solid-torus charts for the boundary lens space, with the closed-form
/// maps relating the base tori to the resolution-side tori.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryModel {
    /// Base torus where the first coordinate is on the circle.
    pub chart_tu1: Chart,
    /// Base torus where the second coordinate is on the circle.
    pub chart_tu2: Chart,
    /// Image torus of `h1`.
    pub chart_ty1: Chart,
    /// Image torus of `h2` (primed side).
    pub chart_typ1: Chart,
    /// Primed-side torus where the second coordinate is on the circle.
    pub chart_typ2: Chart,
    /// Image torus of `f3`.
    pub chart_ty2: Chart,
    /// Boundary restriction of the plane embedding.
    pub h1: TransitionMap,
    /// Boundary restriction of the fractional embedding (modulo the deck
    /// action).
    pub h2: TransitionMap,
    /// Boundary restriction of the two-chart gluing.
    pub f3: TransitionMap,
}

/// The 4-d resolution atlas of one cyclic quotient singularity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Atlas4 {
    /// The singularity type being resolved.
    pub fiber: FiberType,
    /// Its minus-continued-fraction data.
    pub expansion: HjExpansion,
    /// Charts `Y0, ..., Yn`.
    pub charts: Vec<Chart>,
    /// The base chart the resolution maps down to.
    pub model: Chart,
    /// Gluings `Yi -> Y(i+1)` with coefficient `b_{i+1}`, `i = 0..n-1`.
    pub transitions: Vec<TransitionMap>,
    /// Embeddings of the punctured base into `Y0` and `Y1`.
    pub embeddings: Vec<TransitionMap>,
    /// The two-chart covering; absent exactly when `a = 1`.
    pub two_chart: Option<TwoChartReduction>,
    /// Boundary lens-space model.
    pub boundary: BoundaryModel,
    /// Exceptional curves with self-intersections `-b_i`.
    pub curves: Vec<CurveData>,
}

impl Atlas4 {
    /// Builds the atlas for a singularity type. Fails with
    /// [`Error::RegularFiber`] when `r = 1` (the quotient is smooth).
    pub fn for_fiber(fiber: FiberType) -> Result<Self> {
        let expansion = fiber.expansion()?;
        let b = expansion.coefficients.clone();
        let n = b.len();
        let (r, a) = (fiber.r(), fiber.a());
        let b1 = b[0];
        let a1 = expansion.remainders[2];

        let charts: Vec<Chart> = (0..=n)
            .map(|i| Chart::new(format!("Y{i}"), vec![P, P], None, None))
            .collect::<Result<_>>()?;
        let model = Chart::new("Up", vec![P, P], None, None)?;

        let transitions: Vec<TransitionMap> = (0..n)
            .map(|i| {
                TransitionMap::new(
                    MapTag::ReidF { b: b[i] },
                    format!("Y{i}"),
                    format!("Y{}", i + 1),
                )
            })
            .collect();

        let embeddings = vec![
            TransitionMap::new(MapTag::ReidEmbed0 { r, a }, "Up", "Y0"),
            TransitionMap::new(MapTag::ReidEmbed1 { r, a, b1 }, "Up", "Y1"),
        ];

        let two_chart = if a >= 2 {
            Some(TwoChartReduction {
                chart_y: Chart::new("Y", vec![P, P], None, None)?,
                chart_yprime: Chart::new("Yp", vec![P, P], None, None)?,
                za: (a, a1),
                gluing: TransitionMap::new(MapTag::ReidTwoChartF { r, a }, "Yp", "Y"),
                embed_plane: TransitionMap::new(MapTag::ReidEmbed0 { r, a }, "Up", "Y"),
                embed_frac: TransitionMap::new(MapTag::TwoChartEmbed2 { r, a }, "Up", "Yp"),
            })
        } else {
            None
        };

        let boundary = BoundaryModel {
            chart_tu1: Chart::new("TU1", vec![S, D], None, None)?,
            chart_tu2: Chart::new("TU2", vec![D, S], None, None)?,
            chart_ty1: Chart::new("TY1", vec![S, D], None, None)?,
            chart_typ1: Chart::new("TYp1", vec![S, D], None, None)?,
            chart_typ2: Chart::new("TYp2", vec![D, S], None, None)?,
            chart_ty2: Chart::new("TY2", vec![D, S], None, None)?,
            h1: TransitionMap::new(MapTag::TopModelH1 { r, a }, "TU1", "TY1"),
            h2: TransitionMap::new(MapTag::TopModelH2 { r, a }, "TU2", "TYp1"),
            f3: TransitionMap::new(MapTag::TopModelF3 { r, a }, "TYp2", "TY2"),
        };

        let curves = b
            .iter()
            .enumerate()
            .map(|(i, &bi)| CurveData {
                index: i + 1,
                self_intersection: -bi,
            })
            .collect();

        Ok(Atlas4 {
            fiber,
            expansion,
            charts,
            model,
            transitions,
            embeddings,
            two_chart,
            boundary,
            curves,
        })
    }

    /// Number of exceptional curves (the expansion length `n`).
    pub fn chain_length(&self) -> usize {
        self.expansion.coefficients.len()
    }

    /// The gluing `Yi -> Y(i+1)`, `i = 0..n-1`.
    pub fn transition(&self, i: usize) -> Result<&TransitionMap> {
        self.transitions
            .get(i)
            .ok_or_else(|| Error::IndexOutOfRange {
                index: i,
                context: "chart gluing".to_string(),
            })
    }

    /// The composite embedding of the punctured base into chart `Yj`,
    /// rebuilt from the expansion coefficients: the plane embedding for
    /// `j = 0`, the fractional-free embedding into `Y1` for `j = 1`, and
    /// that embedding pushed along the gluings for `j >= 2`.
    pub fn general_embedding(&self, j: usize) -> Result<ComposedMap> {
        let n = self.chain_length();
        if j > n {
            return Err(Error::IndexOutOfRange {
                index: j,
                context: "chart embedding".to_string(),
            });
        }
        let (r, a) = (self.fiber.r(), self.fiber.a());
        let b = &self.expansion.coefficients;
        if j == 0 {
            return ComposedMap::new(vec![TransitionMap::new(
                MapTag::ReidEmbed0 { r, a },
                "Up",
                "Y0",
            )]);
        }
        let mut maps = vec![TransitionMap::new(
            MapTag::ReidEmbed1 { r, a, b1: b[0] },
            "Up",
            "Y1",
        )];
        for (i, &bi) in b.iter().enumerate().take(j).skip(1) {
            maps.push(TransitionMap::new(
                MapTag::ReidF { b: bi },
                format!("Y{i}"),
                format!("Y{}", i + 1),
            ));
        }
        ComposedMap::new(maps)
    }

    /// The composite `Up -> Yi` through `Y0`, rebuilt from the expansion
    /// coefficients: the plane embedding followed by the first `i`
    /// gluings. Together with [`Atlas4::general_embedding`] this gives two
    /// independent routes into each chart, whose agreement is the overlap
    /// (cocycle) condition of the atlas.
    pub fn plane_route(&self, i: usize) -> Result<ComposedMap> {
        let n = self.chain_length();
        if i > n {
            return Err(Error::IndexOutOfRange {
                index: i,
                context: "plane route".to_string(),
            });
        }
        let (r, a) = (self.fiber.r(), self.fiber.a());
        let b = &self.expansion.coefficients;
        let mut maps = vec![TransitionMap::new(MapTag::ReidEmbed0 { r, a }, "Up", "Y0")];
        for (k, &bk) in b.iter().enumerate().take(i) {
            maps.push(TransitionMap::new(
                MapTag::ReidF { b: bk },
                format!("Y{k}"),
                format!("Y{}", k + 1),
            ));
        }
        ComposedMap::new(maps)
    }

    /// Looks up a chart (chain or base) by id.
    pub fn chart(&self, id: &str) -> Option<&Chart> {
        if self.model.id == id {
            return Some(&self.model);
        }
        self.charts.iter().find(|c| c.id == id)
    }
}

/// Builds the 4-d atlas from raw singularity-type integers.
pub fn build_atlas4(r: i64, a: i64) -> Result<Atlas4> {
    Atlas4::for_fiber(FiberType::new(r, a)?)
}
