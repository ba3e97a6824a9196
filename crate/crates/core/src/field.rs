//! Per-vertex scalar fields on a mesh.

use crate::error::{Error, Result};
use crate::mesh::DomainMesh;

/// What a field represents; carried through reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldTag {
    /// A Dirichlet solve output f.
    Solution,
    /// The weight V.
    Potential,
    /// Anything else (manufactured data, distance fields, ...).
    Custom,
}

/// Vertex values of a scalar function on the mesh.
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub values: Vec<f64>,
    pub tag: FieldTag,
}

impl ScalarField {
    pub fn new(values: Vec<f64>, tag: FieldTag) -> Self {
        ScalarField { values, tag }
    }

    /// Sample a function of the chart point at every vertex.
    pub fn sample(mesh: &DomainMesh, tag: FieldTag, f: impl Fn([f64; 2]) -> f64) -> Self {
        ScalarField {
            values: mesh.vertices.iter().map(|&p| f(p)).collect(),
            tag,
        }
    }

    pub fn constant(mesh: &DomainMesh, value: f64, tag: FieldTag) -> Self {
        ScalarField {
            values: vec![value; mesh.vertex_count()],
            tag,
        }
    }

    pub fn check_mesh(&self, mesh: &DomainMesh) -> Result<()> {
        if self.values.len() != mesh.vertex_count() {
            return Err(Error::FieldSizeMismatch {
                expected: mesh.vertex_count(),
                got: self.values.len(),
            });
        }
        if !self.values.iter().all(|v| v.is_finite()) {
            return Err(Error::UnsupportedConfiguration(
                "field contains non-finite values".into(),
            ));
        }
        Ok(())
    }
}
