//! Moment calculus, overlap counting and exact solvers for the chromatic
//! number of the dense random graph `G(n, p)`.
//!
//! - [`theory`]: `gamma`, `Delta`, the convex function `phi`, its root `x0`,
//!   the predicted colouring-rate interval and the explicit lemma constants.
//! - [`moments`]: exact and log-domain first moments (`P`, `f`, `mu_k`),
//!   independent-set and precolouring expectations.
//! - [`overlap`]: overlap sequences between pairs of equipartitions, 0-1
//!   matrix counting with prescribed margins, McKay's estimate and the exact
//!   desk-scale second moment.
//! - [`graphs`]: seeded `G(n, p)` sampling and exact solvers for `alpha`,
//!   `chi` and the number of proper equipartitions.
//! - [`oracle`]: exhaustive brute-force counterparts used for verification.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // negated guards also reject NaN

pub mod error;
pub mod exact;
pub mod graphs;
pub mod logvalue;
pub mod moments;
pub mod oracle;
pub mod overlap;
pub mod theory;

pub use error::{Error, Result};
pub use logvalue::LogValue;
pub use theory::ModelParams;
