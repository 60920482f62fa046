//! Polygon equations: compilation, evaluation, verification and search for
//! set-theoretic solutions over finite carriers, plus the reductions and
//! extensions relating solutions of neighbouring orders.

pub mod catalog;
pub mod combinat;
pub mod conditions;
pub mod engine;
pub mod eqcompiler;
pub mod error;
pub mod reductions;
pub mod search;
pub mod verifier;

pub use error::{Error, Result};
