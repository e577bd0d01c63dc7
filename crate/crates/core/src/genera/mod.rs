//! Characteristic-class integrands of the elliptic operators.
//!
//! Every integrand is built twice: once as a quotient of theta functions
//! evaluated on shifted Chern roots ([`theta_quotient_integrand`]), and once
//! by expanding the twisting bundles through `Lambda_t` / `S_t` and
//! multiplying by the Dirac-operator localization factors
//! ([`expansion_integrand`]). The second route never touches a theta
//! function, so agreement of the two is a real check.

mod classes;
mod closed;
mod expand;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{GradedElement, HalfInt};
use crate::error::{Error, Result};
use crate::theta::ThetaKind;

pub use classes::{a_hat, a_hat_coefficients, chern_character, conjugate_characters, line_characters};
pub use closed::{theta_quotient_integrand, Integrand};
pub(crate) use closed::{numeric_integrand_value, NumericContext};
pub(crate) use expand::{index_bridge, trivial_factor};
pub use expand::{
    expansion_integrand, lambda_ch, oracle_expand_vs_closed, symmetric_ch, witten_element_ch, OracleReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OperatorKind {
    DsThetaPrime,
    DThetaQ,
    DThetaMinusQ,
    DeltaVThetaPrime,
    DVThetaQ,
    DVThetaMinusQ,
    DVStarDifference,
    WittenH,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 8] = [
        OperatorKind::DsThetaPrime,
        OperatorKind::DThetaQ,
        OperatorKind::DThetaMinusQ,
        OperatorKind::DeltaVThetaPrime,
        OperatorKind::DVThetaQ,
        OperatorKind::DVThetaMinusQ,
        OperatorKind::DVStarDifference,
        OperatorKind::WittenH,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::DsThetaPrime => "ds-theta-prime",
            OperatorKind::DThetaQ => "d-theta-q",
            OperatorKind::DThetaMinusQ => "d-theta-minus-q",
            OperatorKind::DeltaVThetaPrime => "delta-v-theta-prime",
            OperatorKind::DVThetaQ => "dv-theta-q",
            OperatorKind::DVThetaMinusQ => "dv-theta-minus-q",
            OperatorKind::DVStarDifference => "dv-star",
            OperatorKind::WittenH => "witten-h",
        }
    }

    /// Short spelling accepted by `from_str`.
    pub fn short_name(self) -> &'static str {
        match self {
            OperatorKind::DsThetaPrime => "ds",
            OperatorKind::DThetaQ => "d",
            OperatorKind::DThetaMinusQ => "minus-d",
            OperatorKind::DeltaVThetaPrime => "ds-v",
            OperatorKind::DVThetaQ => "d-v",
            OperatorKind::DVThetaMinusQ => "minus-d-v",
            OperatorKind::DVStarDifference => "dstar-v",
            OperatorKind::WittenH => "h",
        }
    }

    pub fn uses_v(self) -> bool {
        matches!(
            self,
            OperatorKind::DeltaVThetaPrime
                | OperatorKind::DVThetaQ
                | OperatorKind::DVThetaMinusQ
                | OperatorKind::DVStarDifference
        )
    }

    /// The theta function in the numerators (`None` for `H`).
    pub fn numerator_theta(self) -> Option<ThetaKind> {
        match self {
            OperatorKind::DsThetaPrime | OperatorKind::DeltaVThetaPrime => Some(ThetaKind::Theta1),
            OperatorKind::DThetaQ | OperatorKind::DVThetaQ => Some(ThetaKind::Theta2),
            OperatorKind::DThetaMinusQ | OperatorKind::DVThetaMinusQ => Some(ThetaKind::Theta3),
            OperatorKind::DVStarDifference => Some(ThetaKind::Theta),
            OperatorKind::WittenH => None,
        }
    }

    pub fn supports(self, norm: Normalization) -> bool {
        match norm {
            Normalization::Raw => true,
            Normalization::VNormalized => self.uses_v() || self == OperatorKind::WittenH,
        }
    }

    pub(crate) fn check_normalization(self, norm: Normalization) -> Result<()> {
        if self.supports(norm) {
            Ok(())
        } else {
            Err(Error::UnsupportedNormalization {
                operator: self.name().into(),
                normalization: norm.name().into(),
            })
        }
    }

    /// The normalization under which the theory is a Jacobi form.
    pub fn default_normalization(self) -> Normalization {
        if self.uses_v() {
            Normalization::VNormalized
        } else {
            Normalization::Raw
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        OperatorKind::ALL
            .into_iter()
            .find(|k| k.name() == s || k.short_name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = OperatorKind::ALL.iter().map(|k| k.name()).collect();
                Error::Parse(format!("unknown operator `{s}` (one of {})", names.join(", ")))
            })
    }
}

/// `VNormalized` uses the `- dim` virtual bundles and the
/// `theta'(0)` / `theta_a(0)` rescaling under which the `V` kinds become
/// Jacobi forms. For `H` both settings coincide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Default)]
pub enum Normalization {
    #[default]
    Raw,
    VNormalized,
}

impl Normalization {
    pub fn name(self) -> &'static str {
        match self {
            Normalization::Raw => "raw",
            Normalization::VNormalized => "v",
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Normalization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(Normalization::Raw),
            "v" | "v-normalized" => Ok(Normalization::VNormalized),
            _ => Err(Error::Parse(format!("unknown normalization `{s}` (raw or v)"))),
        }
    }
}

/// A complex bundle on which the circle acts by a single weight, given by
/// its Chern roots (degree >= 2, nilpotent).
#[derive(Clone, Debug, PartialEq)]
pub struct RootBundle {
    pub weight: HalfInt,
    pub roots: Vec<GradedElement>,
}

impl RootBundle {
    pub fn new(weight: HalfInt, roots: Vec<GradedElement>) -> Self {
        Self { weight, roots }
    }

    pub fn rank(&self) -> usize {
        self.roots.len()
    }
}
