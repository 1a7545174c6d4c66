//! On-disk JSON schemas for chamber design files and their conversion to the
//! core types. Unknown fields are rejected everywhere; serde_json reports the
//! offending line/column.

use nalgebra::Point3;
use serde::{Deserialize, Serialize};

use uhvforge_core::model::{ChamberSpec, MaterialSpec};
use uhvforge_core::structure::{ConstraintRegion, StiffnessConstraint, StiffnessScaling};

/// Top-level chamber design file: the geometric spec plus optional
/// structural-qualification and mass-comparison sections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChamberFile {
    pub chamber: ChamberSpec,
    /// Material used only for the mass-comparison metrics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_material: Option<MaterialSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureSection {
    /// External-over-internal pressure differential on the skin, Pa.
    pub pressure_delta_pa: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stiffness_scaling: Option<ScalingSection>,
    #[serde(default)]
    pub constraints: Vec<ConstraintSection>,
}

/// `E*/Es = c · φⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingSection {
    pub c: f64,
    pub n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSection {
    pub region: RegionSection,
    pub min_relative_modulus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RegionSection {
    Global,
    Sphere { center_mm: [f64; 3], radius_mm: f64 },
}

impl StructureSection {
    pub fn scaling(&self) -> StiffnessScaling {
        match self.stiffness_scaling {
            Some(ScalingSection { c, n }) => StiffnessScaling { c, n },
            None => StiffnessScaling::default(),
        }
    }

    pub fn constraints(&self) -> Vec<StiffnessConstraint> {
        self.constraints
            .iter()
            .map(|c| StiffnessConstraint {
                region: match c.region {
                    RegionSection::Global => ConstraintRegion::Global,
                    RegionSection::Sphere { center_mm, radius_mm } => ConstraintRegion::Sphere {
                        center_mm: Point3::new(center_mm[0], center_mm[1], center_mm[2]),
                        radius_mm,
                    },
                },
                min_relative_modulus: c.min_relative_modulus,
            })
            .collect()
    }
}
