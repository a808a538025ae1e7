//! Seeded, deterministic numerical verification of the resolution data.
//!
//! [`run_suite`] builds both atlases for a fiber type, runs the full
//! fixed-order check list, and returns a [`VerificationReport`] that is a
//! pure function of the fiber type and the [`CheckConfig`] — two runs
//! with the same inputs produce byte-identical canonical JSON.
//!
//! [`run_suite_mutated`] runs the same suite after deliberately
//! perturbing one integer of the atlas data (a gluing coefficient, a
//! chart weight, or the deck rotation); a healthy suite must report at
//! least one failed check for every such [`Mutation`].

mod checks;
mod mutation;
mod report;
mod sample;

pub use mutation::{standard_mutations, Mutation};
pub use report::{CheckRecord, VerificationReport, Witness};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::atlas4::Atlas4;
use crate::atlas5::{first_step, Atlas5, FirstStep};
use crate::chart::{Chart, WeightVector, MOD_TOL};
use crate::error::{Error, Result};
use crate::hj::{FiberType, HjExpansion};
use crate::num::Scalar;

/// Parameters of a verification run.
///
/// The defaults match the command-line defaults: seed 0, 1000 samples
/// per check, 100 group elements per sampled point, tolerance `1e-9`,
/// and plane moduli drawn log-uniformly from `[0.1, 10]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckConfig {
    /// Seed from which every check derives its own random stream.
    pub seed: u64,
    /// Number of base points drawn per sampled check.
    pub samples_per_check: usize,
    /// Number of circle-group elements tested per base point in the
    /// equivariance checks.
    pub group_samples: usize,
    /// Comparison tolerance for the scaled distance.
    pub tol: f64,
    /// Modulus range for coordinates drawn from plane slots.
    pub radius_range: (f64, f64),
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 0,
            samples_per_check: 1000,
            group_samples: 100,
            tol: 1e-9,
            radius_range: (0.1, 10.0),
        }
    }
}

impl CheckConfig {
    /// Rejects configurations that would make the checks vacuous or
    /// numerically meaningless.
    pub fn validate(&self) -> Result<()> {
        if self.samples_per_check == 0 {
            return Err(Error::InvalidConfig {
                reason: "samples_per_check must be at least 1".to_string(),
            });
        }
        if self.group_samples == 0 {
            return Err(Error::InvalidConfig {
                reason: "group_samples must be at least 1".to_string(),
            });
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig {
                reason: "tol must be positive and finite".to_string(),
            });
        }
        let (lo, hi) = self.radius_range;
        if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
            return Err(Error::InvalidConfig {
                reason: "radius_range must satisfy 0 < lo < hi with both finite".to_string(),
            });
        }
        if lo <= MOD_TOL {
            return Err(Error::InvalidConfig {
                reason: format!("radius_range lower bound must exceed {MOD_TOL:e}"),
            });
        }
        Ok(())
    }
}

/// Everything the checks need, assembled once per run. Mutations are
/// applied to the owned atlas data *before* the chart index is built, so
/// every check sees the perturbed integers.
pub(crate) struct SuiteData {
    pub(crate) fiber: FiberType,
    pub(crate) expansion: HjExpansion,
    pub(crate) atlas5: Atlas5,
    pub(crate) atlas4: Atlas4,
    pub(crate) first: FirstStep,
    charts: BTreeMap<String, Chart>,
}

impl SuiteData {
    pub(crate) fn build(fiber: FiberType) -> Result<Self> {
        Self::build_with(fiber, None)
    }

    pub(crate) fn build_with(fiber: FiberType, mutation: Option<&Mutation>) -> Result<Self> {
        let expansion = fiber.expansion()?;
        let mut suite = SuiteData {
            fiber,
            expansion,
            atlas5: Atlas5::for_fiber(fiber)?,
            atlas4: Atlas4::for_fiber(fiber)?,
            first: first_step(fiber)?,
            charts: BTreeMap::new(),
        };
        if let Some(m) = mutation {
            m.apply(&mut suite)?;
        }
        suite.index_charts();
        Ok(suite)
    }

    pub(crate) fn with_atlas5(atlas: &Atlas5) -> Result<Self> {
        let fiber = atlas.fiber;
        let mut suite = SuiteData {
            fiber,
            expansion: atlas.expansion.clone(),
            atlas5: atlas.clone(),
            atlas4: Atlas4::for_fiber(fiber)?,
            first: first_step(fiber)?,
            charts: BTreeMap::new(),
        };
        suite.index_charts();
        Ok(suite)
    }

    fn index_charts(&mut self) {
        let mut add = |c: &Chart| {
            self.charts.entry(c.id.clone()).or_insert_with(|| c.clone());
        };
        for c in &self.atlas5.charts {
            add(c);
        }
        add(&self.atlas5.model);
        let f = &self.first;
        for c in [
            &f.model,
            &f.model_cover,
            &f.chart_x,
            &f.chart_xp,
            &f.chart_xtil,
            &f.chart_xptil,
            &f.chart_xs,
            &f.chart_cs3,
        ] {
            add(c);
        }
        for c in &self.atlas4.charts {
            add(c);
        }
        add(&self.atlas4.model);
        if let Some(tc) = &self.atlas4.two_chart {
            add(&tc.chart_y);
            add(&tc.chart_yprime);
        }
        let b = &self.atlas4.boundary;
        for c in [
            &b.chart_tu1,
            &b.chart_tu2,
            &b.chart_ty1,
            &b.chart_typ1,
            &b.chart_typ2,
            &b.chart_ty2,
        ] {
            add(c);
        }
    }

    pub(crate) fn chart_weights(&self, id: &str) -> Result<&WeightVector> {
        let chart = self.charts.get(id).ok_or_else(|| Error::InvalidPoint {
            chart: id.to_string(),
            reason: "chart id is not in the verification index".to_string(),
        })?;
        chart.weights.as_ref().ok_or_else(|| Error::NoGauge {
            chart: id.to_string(),
        })
    }

    /// Order and rotation weight of the deck group acting on the primed
    /// covers; `(1, 0)` when the deck group is trivial.
    pub(crate) fn za(&self) -> (i64, i64) {
        self.atlas4
            .two_chart
            .as_ref()
            .map(|tc| tc.za)
            .unwrap_or((1, 0))
    }
}

fn run_all_checks<T: Scalar>(suite: &SuiteData, cfg: &CheckConfig) -> Vec<CheckRecord> {
    let mut out = vec![
        checks::hj_roundtrip(suite),
        checks::reduction_sequence(suite),
        checks::atlas_counts(suite),
    ];
    out.extend(checks::equivariance::<T>(suite, cfg));
    out.push(checks::za_collapse::<T>(suite, cfg));
    out.extend(checks::compositions::<T>(suite, cfg));
    out.extend(checks::quotient::<T>(suite, cfg));
    out.extend(checks::exceptional::<T>(suite, cfg));
    out.extend(checks::reid::<T>(suite, cfg));
    out
}

/// Equivariance records for every transition and embedding reachable
/// from the given 5-d atlas (its own maps plus the first-step maps of
/// its fiber type).
pub fn check_equivariance_suite<T: Scalar>(
    atlas: &Atlas5,
    cfg: &CheckConfig,
) -> Result<Vec<CheckRecord>> {
    cfg.validate()?;
    let suite = SuiteData::with_atlas5(atlas)?;
    Ok(checks::equivariance::<T>(&suite, cfg))
}

/// The deck-collapse record for one fiber type: the a-to-1 covering of
/// the primed chart identifies exactly the deck orbits.
pub fn check_za_collapse<T: Scalar>(fiber: FiberType, cfg: &CheckConfig) -> Result<CheckRecord> {
    cfg.validate()?;
    if fiber.is_regular() {
        return Err(Error::RegularFiber);
    }
    let suite = SuiteData::build(fiber)?;
    Ok(checks::za_collapse::<T>(&suite, cfg))
}

/// The records comparing the 5-d atlas with its circle quotient: torus
/// restrictions of the descended maps and all commuting squares.
pub fn check_quotient_compatibility<T: Scalar>(
    fiber: FiberType,
    cfg: &CheckConfig,
) -> Result<Vec<CheckRecord>> {
    cfg.validate()?;
    if fiber.is_regular() {
        return Err(Error::RegularFiber);
    }
    let suite = SuiteData::build(fiber)?;
    Ok(checks::quotient::<T>(&suite, cfg))
}

/// The exceptional-chain records for the given 5-d atlas: restriction
/// normal forms, the final gluing, and the intersection circles.
pub fn check_exceptional_chain<T: Scalar>(
    atlas: &Atlas5,
    cfg: &CheckConfig,
) -> Result<Vec<CheckRecord>> {
    cfg.validate()?;
    let suite = SuiteData::with_atlas5(atlas)?;
    Ok(checks::exceptional::<T>(&suite, cfg))
}

/// Runs the full verification suite for a fiber type.
///
/// For a regular fiber (`r = 1`) there is nothing to resolve; the report
/// carries a note and zero checks, and passes.
pub fn run_suite<T: Scalar>(fiber: FiberType, cfg: &CheckConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    if fiber.is_regular() {
        return Ok(VerificationReport::assemble(
            fiber,
            None,
            cfg.clone(),
            Some("regular fiber: the space is already smooth, nothing to verify".to_string()),
            Vec::new(),
        ));
    }
    let suite = SuiteData::build(fiber)?;
    let checks = run_all_checks::<T>(&suite, cfg);
    Ok(VerificationReport::assemble(
        fiber,
        Some(suite.expansion.clone()),
        cfg.clone(),
        None,
        checks,
    ))
}

/// Runs the full suite against atlas data perturbed by one mutation.
///
/// Used to demonstrate that the checks have teeth: every standard
/// mutation must make at least one check fail.
pub fn run_suite_mutated<T: Scalar>(
    fiber: FiberType,
    cfg: &CheckConfig,
    mutation: &Mutation,
) -> Result<VerificationReport> {
    cfg.validate()?;
    if fiber.is_regular() {
        return Err(Error::RegularFiber);
    }
    let suite = SuiteData::build_with(fiber, Some(mutation))?;
    let checks = run_all_checks::<T>(&suite, cfg);
    Ok(VerificationReport::assemble(
        fiber,
        Some(suite.expansion.clone()),
        cfg.clone(),
        Some(format!("mutated: {mutation}")),
        checks,
    ))
}
