//! Multiple points of immersion lifts versus Morin singularities of prim maps.
//!
//! The exact half of the crate ([`poly`], [`normal_form`],
//! [`local_cobordism`]) works with rational arithmetic on the local normal
//! form of a `Σ^{1_r}` prim germ. The numerical half ([`prim_map`],
//! [`multipoint`], [`bordism`]) computes multiple points, folds, cusps and
//! mixed sets on concrete maps and checks the mod-2 parity chain and the
//! arcs of the cobordism between consecutive mixed sets.

// Index loops follow the formulas; `!(a > b)` is how NaN gets rejected.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod bordism;
pub mod cli;
pub mod config;
pub mod continuation;
pub mod domain;
pub mod error;
pub mod jet;
pub mod local_cobordism;
pub mod mesh;
pub mod multipoint;
pub mod normal_form;
pub mod poly;
pub mod prim_map;
pub mod report;
pub mod solve;
pub mod svg;
pub mod tolerances;

pub use error::{Error, Result};
