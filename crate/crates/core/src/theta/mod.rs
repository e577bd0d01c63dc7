//! The four Jacobi theta functions
//!
//! ```text
//! theta (v) = c(q) q^{1/8} 2 sin(pi v) prod (1 - q^n L)(1 - q^n / L)
//! theta1(v) = c(q) q^{1/8} 2 cos(pi v) prod (1 + q^n L)(1 + q^n / L)
//! theta2(v) = c(q)                     prod (1 - q^{n-1/2} L)(1 - q^{n-1/2} / L)
//! theta3(v) = c(q)                     prod (1 + q^{n-1/2} L)(1 + q^{n-1/2} / L)
//! ```
//!
//! with `L = e^{2 pi i v}` and `c(q) = prod (1 - q^n)`, both as exact
//! q-expansions and numerically.

mod formal;
mod laws;
mod ledger;
mod numeric;

pub use formal::{c_power, c_series, theta_formal, theta_taylor, theta_taylor_payload, ThetaExpansion, ThetaKind, ThetaTaylorStack};
pub use laws::{
    check_modular_st, check_quasi_periodicity, relative_discrepancy, samples, LawReport, ModularGenerator, Sample,
};
pub use ledger::{Ledger, Prefactor};
pub use numeric::{direct_product, eval_all, theta_numeric, theta_prime_zero, S_THRESHOLD};
