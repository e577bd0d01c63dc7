//! Exact equivariant Chern characters of elliptic-genus index bundles,
//! computed from circle-action fixed-point data.

pub mod algebra;
pub mod catalog;
pub mod dataset;
pub mod error;
pub mod genera;
pub mod jacobi;
pub mod localization;
pub mod theta;

pub use error::{Error, Result};
