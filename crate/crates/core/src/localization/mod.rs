//! Fixed-point data and the localization engine.
mod component;
mod engine;
mod numeric;

pub use component::{ActionData, FixedComponent};
pub use engine::{
    anomaly_both_conventions, anomaly_index, base_monomials, component_contribution, component_contributions,
    constants_are_integers, dataset_digest, degree_component, equivariant_character, monomial_series,
    pole_cancellation_check, rigidity_check, validate, ComponentContribution, GenusResult, PoleLine, PoleReport,
    RigidConstant, RigidityVerdict, ValidationReport,
};
pub use numeric::{evaluate_numeric, evaluate_numeric_with, numeric_integrand, NumericOptions};
