//! Error type shared across the crate.

use thiserror::Error;

/// Unified error type for fiber arithmetic, chart geometry and verification.
#[derive(Debug, Error)]
pub enum Error {
    /// Fiber type parameters violate `r >= 1`.
    #[error("invalid fiber type: r = {r} must be >= 1 (got a = {a})")]
    InvalidFiberType {
        /// Requested order.
        r: i64,
        /// Requested rotation parameter.
        a: i64,
    },

    /// Fiber type parameters share a common factor, so the action is not
    /// faithful on the model chart.
    #[error("fiber type ({r},{a}) is not faithful: gcd = {g}")]
    NonFaithful {
        /// Requested order.
        r: i64,
        /// Canonicalized rotation parameter.
        a: i64,
        /// Common factor.
        g: i64,
    },

    /// A continued-fraction coefficient list contains an entry below 2,
    /// or is empty.
    #[error("invalid continued-fraction expansion: {reason}")]
    InvalidExpansion {
        /// Human-readable cause.
        reason: String,
    },

    /// The operation requires a singular fiber but the fiber is regular
    /// (`r = 1`).
    #[error("operation requires a singular fiber, but r = 1 (regular)")]
    RegularFiber,

    /// A point lies outside the domain of a transition map.
    #[error("point outside domain of {map}: {reason}")]
    OutsideDomain {
        /// Display name of the map.
        map: String,
        /// Which constraint failed.
        reason: String,
    },

    /// The map has no inverse (it is finite-to-one or collapsing).
    #[error("map {map} is not invertible")]
    NotInvertible {
        /// Display name of the map.
        map: String,
    },

    /// The point does not lie in the image of the map, so the inverse is
    /// undefined there.
    #[error("point outside image of {map}: {reason}")]
    OutsideImage {
        /// Display name of the map.
        map: String,
        /// Which constraint failed.
        reason: String,
    },

    /// A circle-group element fails the unit-modulus requirement.
    #[error("group element has modulus {modulus}, expected 1 within tolerance")]
    InvalidGroupElement {
        /// Observed modulus.
        modulus: f64,
    },

    /// No coordinate slot of the chart can serve as a gauge for passing to
    /// the circle quotient.
    #[error("chart {chart} has no circle slot of weight +1 or -1 to gauge-fix")]
    NoGauge {
        /// Chart identifier.
        chart: String,
    },

    /// A point is structurally incompatible with its chart.
    #[error("invalid point in chart {chart}: {reason}")]
    InvalidPoint {
        /// Chart identifier.
        chart: String,
        /// Which constraint failed.
        reason: String,
    },

    /// Integer overflow during exact arithmetic.
    #[error("integer overflow in exact continued-fraction arithmetic")]
    Overflow,

    /// A chart or component index is out of range.
    #[error("index {index} out of range: {context}")]
    IndexOutOfRange {
        /// Offending index.
        index: usize,
        /// What was being indexed.
        context: String,
    },

    /// A point was fed to a map expecting a different source chart.
    #[error("chart mismatch: map expects {expected}, point lies in {found}")]
    ChartMismatch {
        /// Chart the map expects.
        expected: String,
        /// Chart the point carries.
        found: String,
    },

    /// A verification configuration parameter is out of range.
    #[error("invalid configuration: {reason}")]
    InvalidConfig {
        /// Which parameter failed and why.
        reason: String,
    },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
