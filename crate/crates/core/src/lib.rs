//! Resolution chart atlases for circle-equivariant five-manifolds and
//! cyclic surface quotient singularities, with a seeded numerical
//! verification engine.
//!
//! The crate is organized bottom-up:
//!
//! - [`hj`] — exact minus-continued-fraction arithmetic on fiber types
//!   `1/r (1, a)`, the integer data everything else is built from;
//! - [`chart`] — complex coordinate charts with per-slot domains, weighted
//!   circle actions, and circle quotients;
//! - [`map`] — the enumerated family of closed-form transition maps
//!   between charts, with domains, inverses, and serialization;
//! - [`atlas5`] — the 5-d equivariant resolution atlas: the chart chain,
//!   its gluings, the model neighborhood, and the exceptional chain;
//! - [`atlas4`] — the 4-d cyclic-quotient resolution atlas: chart chain,
//!   embeddings, the two-chart reduction, and boundary model maps;
//! - [`verify`] — the seeded, deterministic numerical check suite and its
//!   report types.
//!
//! All numerics are generic over the floating-point scalar through
//! [`num::Scalar`] (implemented for `f32` and `f64`); the concrete
//! aliases [`C64`], [`Point64`], and [`Point32`] cover common use.

pub mod atlas4;
pub mod atlas5;
pub mod chart;
pub mod error;
pub mod hj;
pub mod jsonfmt;
pub mod map;
pub mod num;
pub mod verify;

pub use atlas4::{build_atlas4, Atlas4};
pub use atlas5::{build_atlas5, Atlas5};
pub use chart::{mod_tol, Chart, ChartPoint, SlotKind, WeightVector, MOD_TOL};
pub use error::{Error, Result};
pub use hj::{hj_evaluate, hj_expand, FiberType, HjExpansion};
pub use map::{ComposedMap, Invertibility, MapTag, TransitionMap};
pub use verify::{
    run_suite, run_suite_mutated, standard_mutations, CheckConfig, CheckRecord, Mutation,
    VerificationReport,
};

/// Double-precision complex number.
pub type C64 = num_complex::Complex64;
/// Single-precision complex number.
pub type C32 = num_complex::Complex32;
/// Chart point over `f64`.
pub type Point64 = chart::ChartPoint<f64>;
/// Chart point over `f32`.
pub type Point32 = chart::ChartPoint<f32>;
