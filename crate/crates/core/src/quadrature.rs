//! Metric-weighted quadrature on cells and boundary facets.
//!
//! Cell rule: the three edge-midpoint points per triangle (degree 2), with
//! weights (flat area / 3) * lambda^n at the point. Boundary rule: 5-point
//! Gauss-Legendre per facet chord (degree 9 in the flat parameter), weighted
//! by the induced metric length element lambda * |chord|.

use crate::error::{Error, Result};
use crate::mesh::DomainMesh;
use crate::spaceform::SpaceFormModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Cells,
    Boundary,
}

/// Sample points with metric-volume weights.
#[derive(Debug, Clone)]
pub struct QuadratureScheme {
    pub region: Region,
    pub points: Vec<[f64; 2]>,
    /// Metric weights: these already include lambda^n (cells) or the induced
    /// boundary length element.
    pub weights: Vec<f64>,
    /// Owning cell (or facet) of each point.
    pub owners: Vec<usize>,
}

const GAUSS5_T: [f64; 5] = [
    0.046910077030668,
    0.230765344947158,
    0.5,
    0.769234655052841,
    0.953089922969332,
];
const GAUSS5_W: [f64; 5] = [
    0.118463442528095,
    0.239314335249683,
    0.284444444444444,
    0.239314335249683,
    0.118463442528095,
];

impl QuadratureScheme {
    /// Cell scheme: 3 edge midpoints per triangle.
    pub fn cells(mesh: &DomainMesh, model: &SpaceFormModel) -> Self {
        let n = model.dim as i32;
        let mut points = Vec::with_capacity(3 * mesh.cell_count());
        let mut weights = Vec::with_capacity(3 * mesh.cell_count());
        let mut owners = Vec::with_capacity(3 * mesh.cell_count());
        for (ci, c) in mesh.cells.iter().enumerate() {
            let area = mesh.flat_cell_area(ci);
            for (a, b) in [(c[0], c[1]), (c[1], c[2]), (c[2], c[0])] {
                let pa = mesh.vertices[a];
                let pb = mesh.vertices[b];
                let p = [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0];
                let lam = model.lambda(&p);
                points.push(p);
                weights.push(area / 3.0 * lam.powi(n));
                owners.push(ci);
            }
        }
        QuadratureScheme {
            region: Region::Cells,
            points,
            weights,
            owners,
        }
    }

    /// Boundary scheme: 5 Gauss points per facet chord.
    pub fn boundary(mesh: &DomainMesh, model: &SpaceFormModel) -> Self {
        let facets = mesh.boundary_facets();
        let mut points = Vec::with_capacity(5 * facets.len());
        let mut weights = Vec::with_capacity(5 * facets.len());
        let mut owners = Vec::with_capacity(5 * facets.len());
        for (fi, f) in facets.iter().enumerate() {
            let a = mesh.vertices[f[0]];
            let b = mesh.vertices[f[1]];
            let flat = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
            for q in 0..5 {
                let p = [
                    a[0] + GAUSS5_T[q] * (b[0] - a[0]),
                    a[1] + GAUSS5_T[q] * (b[1] - a[1]),
                ];
                points.push(p);
                weights.push(GAUSS5_W[q] * flat * model.lambda(&p));
                owners.push(fi);
            }
        }
        QuadratureScheme {
            region: Region::Boundary,
            points,
            weights,
            owners,
        }
    }

    /// Weighted sum of per-point integrand values.
    pub fn integrate(&self, values: &[f64], region: Region) -> Result<f64> {
        if region != self.region {
            return Err(Error::QuadratureMismatch(format!(
                "scheme covers {:?}, integrand declared for {:?}",
                self.region, region
            )));
        }
        if values.len() != self.points.len() {
            return Err(Error::QuadratureMismatch(format!(
                "integrand has {} values, scheme has {} points",
                values.len(),
                self.points.len()
            )));
        }
        Ok(values
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| v * w)
            .sum())
    }

    /// Integrate a pointwise function of the chart coordinates.
    pub fn integrate_fn(&self, f: impl Fn([f64; 2]) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&p, w)| f(p) * w)
            .sum()
    }

    /// Total metric measure covered by the scheme.
    pub fn total_measure(&self) -> f64 {
        self.weights.iter().sum()
    }
}
