//! Structured perturbations of a built atlas.
//!
//! Each mutation changes exactly one integer in the atlas data — one
//! gluing coefficient, one chart weight, or the deck-rotation weight —
//! by ±1. The check suite is required to fail on every one of them;
//! [`standard_mutations`] enumerates the complete list for a fiber type.

use crate::error::{Error, Result};
use crate::hj::FiberType;
use crate::map::MapTag;
use serde::Serialize;
use std::fmt;

use super::SuiteData;

/// A single ±1 perturbation of atlas data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mutation {
    /// Perturbs the coefficient of the `index`-th 5-d chain gluing
    /// (0-based; valid for `index < n - 1`).
    ChainCoefficient { index: usize, delta: i64 },
    /// Perturbs one weight of one 5-d atlas chart.
    ChartWeight {
        chart: String,
        slot: usize,
        delta: i64,
    },
    /// Perturbs the coefficient of the `index`-th 4-d gluing
    /// (0-based; valid for `index < n`).
    ReidCoefficient { index: usize, delta: i64 },
    /// Perturbs the deck-rotation weight of the two-chart reduction
    /// (valid only when `a >= 2`).
    ZaRotation { delta: i64 },
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mutation::ChainCoefficient { index, delta } => {
                write!(f, "chain coefficient [{index}] {delta:+}")
            }
            Mutation::ChartWeight { chart, slot, delta } => {
                write!(f, "weight {chart}[{slot}] {delta:+}")
            }
            Mutation::ReidCoefficient { index, delta } => {
                write!(f, "gluing coefficient [{index}] {delta:+}")
            }
            Mutation::ZaRotation { delta } => write!(f, "deck rotation weight {delta:+}"),
        }
    }
}

impl Mutation {
    /// Applies the perturbation to built suite data. Must be called
    /// before the chart index is assembled.
    pub(crate) fn apply(&self, suite: &mut SuiteData) -> Result<()> {
        match self {
            Mutation::ChainCoefficient { index, delta } => {
                let n = suite.atlas5.chain_length();
                if *index + 1 >= n {
                    return Err(Error::IndexOutOfRange {
                        index: *index,
                        context: "chain coefficient mutation".to_string(),
                    });
                }
                match &mut suite.atlas5.transitions[*index].tag {
                    MapTag::ChainG { b, .. } => *b += delta,
                    other => {
                        return Err(Error::InvalidConfig {
                            reason: format!("transition {index} is {other}, not a chain gluing"),
                        })
                    }
                }
            }
            Mutation::ChartWeight { chart, slot, delta } => {
                let target = if suite.atlas5.model.id == *chart {
                    Some(&mut suite.atlas5.model)
                } else {
                    suite.atlas5.charts.iter_mut().find(|c| c.id == *chart)
                };
                let target = target.ok_or_else(|| Error::InvalidConfig {
                    reason: format!("no atlas chart named {chart}"),
                })?;
                let weights = target.weights.as_mut().ok_or_else(|| Error::NoGauge {
                    chart: chart.clone(),
                })?;
                if *slot >= weights.0.len() {
                    return Err(Error::IndexOutOfRange {
                        index: *slot,
                        context: format!("weight slot of chart {chart}"),
                    });
                }
                weights.0[*slot] += delta;
            }
            Mutation::ReidCoefficient { index, delta } => {
                if *index >= suite.atlas4.transitions.len() {
                    return Err(Error::IndexOutOfRange {
                        index: *index,
                        context: "gluing coefficient mutation".to_string(),
                    });
                }
                match &mut suite.atlas4.transitions[*index].tag {
                    MapTag::ReidF { b } => *b += delta,
                    other => {
                        return Err(Error::InvalidConfig {
                            reason: format!("transition {index} is {other}, not a coefficient map"),
                        })
                    }
                }
            }
            Mutation::ZaRotation { delta } => {
                let tc = suite
                    .atlas4
                    .two_chart
                    .as_mut()
                    .ok_or_else(|| Error::InvalidConfig {
                        reason: "deck rotation mutation needs the two-chart reduction (a >= 2)"
                            .to_string(),
                    })?;
                tc.za.1 += delta;
            }
        }
        Ok(())
    }
}

/// Enumerates every single-integer ±1 perturbation of the atlas data for
/// a fiber type: all chain coefficients, all weights of all 5-d charts,
/// all 4-d gluing coefficients, and (when present) the deck-rotation
/// weight.
pub fn standard_mutations(fiber: FiberType) -> Result<Vec<Mutation>> {
    let expansion = fiber.expansion()?;
    let n = expansion.coefficients.len();
    let mut out = Vec::new();
    for index in 0..n.saturating_sub(1) {
        for delta in [-1, 1] {
            out.push(Mutation::ChainCoefficient { index, delta });
        }
    }
    let mut chart_ids: Vec<String> = (0..n).map(|i| format!("X{i}")).collect();
    chart_ids.push(format!("Xp{}", n - 1));
    chart_ids.push("US".to_string());
    for chart in chart_ids {
        for slot in 0..3 {
            for delta in [-1, 1] {
                out.push(Mutation::ChartWeight {
                    chart: chart.clone(),
                    slot,
                    delta,
                });
            }
        }
    }
    for index in 0..n {
        for delta in [-1, 1] {
            out.push(Mutation::ReidCoefficient { index, delta });
        }
    }
    if fiber.a() >= 2 {
        for delta in [-1, 1] {
            out.push(Mutation::ZaRotation { delta });
        }
    }
    Ok(out)
}
