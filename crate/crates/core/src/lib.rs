//! Analysis and simulation of short-packet cooperative NOMA with a two-zone
//! reconfigurable intelligent surface.
//!
//! A base station serves a cell-center user (CU) and a cell-edge user (CEU)
//! by power-domain NOMA. The CU decodes the CEU message by SIC and relays it
//! in a second phase; the CEU combines both copies by selection or
//! maximum-ratio combining. Each user is helped by its own zone of `R`
//! phase-aligned RIS elements.
//!
//! - [`numerics`]: special functions and Gauss–Chebyshev quadrature.
//! - [`fbl`]: finite-blocklength BLER and its linearization.
//! - [`channel`]: configuration, gamma fit of the cascaded channel, fading draws.
//! - [`analytic`]: closed-form CDFs, average BLERs and diversity orders.
//! - [`montecarlo`]: seeded, chunk-parallel BLER estimation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod channel;
mod error;
pub mod fbl;
pub mod montecarlo;
pub mod numerics;

pub use analytic::{AnalyticBler, AnalyticModel, DiversityScheme, SinrKind, SinrTag};
pub use channel::{GammaFit, Link, RelayDirectVariance, SystemConfig};
pub use error::{Error, Result};
pub use fbl::CodeSpec;
pub use montecarlo::{BlerEstimate, Execution, McResult, ScenarioKind, SweepAxis};
