use std::sync::Arc;

use crate::algebra::{GradedSpace, IntegrationTable};
use crate::genera::RootBundle;

/// One connected component of the fixed-point set, as seen by a fiber.
///
/// `space` holds the component's fiber generators followed by the base
/// generators; every root lives there.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedComponent {
    pub name: String,
    pub space: Arc<GradedSpace>,
    /// Weight 0; one `+y_j` representative per real 2-plane.
    pub tangent: RootBundle,
    pub normals: Vec<RootBundle>,
    pub vbundles: Vec<RootBundle>,
    pub table: IntegrationTable,
    pub orientation: i8,
}

impl FixedComponent {
    pub fn fiber_half_dim(&self) -> usize {
        self.tangent.rank()
    }

    /// `k_alpha + sum_gamma d(m_gamma)`.
    pub fn total_half_dim(&self) -> usize {
        self.fiber_half_dim() + self.normals.iter().map(RootBundle::rank).sum::<usize>()
    }

    /// `sum_v d(n_v)`.
    pub fn v_half_rank(&self) -> usize {
        self.vbundles.iter().map(RootBundle::rank).sum()
    }

    /// The same component with every rotation weight negated.
    pub fn negate_weights(&self) -> Self {
        let flip = |b: &RootBundle| RootBundle {
            weight: -b.weight,
            roots: b.roots.clone(),
        };
        Self {
            normals: self.normals.iter().map(flip).collect(),
            vbundles: self.vbundles.iter().map(flip).collect(),
            ..self.clone()
        }
    }
}

/// Fixed-point data of a fiberwise circle action.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionData {
    pub name: String,
    /// Fiber half-dimension `k`.
    pub k: usize,
    /// Half-rank `l` of `V`; `None` when the dataset carries no `V`.
    pub l: Option<usize>,
    pub base: Arc<GradedSpace>,
    pub components: Vec<FixedComponent>,
    pub declared_anomaly: Option<i64>,
}

impl ActionData {
    pub fn has_v(&self) -> bool {
        self.l.is_some()
    }

    pub fn negate_weights(&self) -> Self {
        Self {
            components: self.components.iter().map(FixedComponent::negate_weights).collect(),
            ..self.clone()
        }
    }

    /// Disjoint union over the same base.
    pub fn disjoint_union(&self, other: &ActionData) -> Option<ActionData> {
        if self.k != other.k || self.l != other.l || self.base != other.base {
            return None;
        }
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        Some(ActionData {
            name: format!("{}+{}", self.name, other.name),
            components,
            declared_anomaly: None,
            ..self.clone()
        })
    }
}
