//! Sectional (Gauss) curvature screening for custom conformal metrics.

use crate::error::{Error, Result};
use crate::mesh::DomainMesh;
use crate::spaceform::SpaceFormModel;

/// Result of the lower-bound screen Sect >= bound.
#[derive(Debug, Clone, Copy)]
pub struct ScreenReport {
    pub min_curvature: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Minimum Gauss curvature over the mesh quadrature points (cell edge
/// midpoints and vertices), evaluated analytically from the conformal
/// factor, and whether it clears the bound.
pub fn curvature_screen(
    mesh: &DomainMesh,
    model: &SpaceFormModel,
    bound: f64,
) -> Result<ScreenReport> {
    if model.dim != 2 {
        return Err(Error::UnsupportedConfiguration(format!(
            "curvature screen needs dim = 2, model has dim = {}",
            model.dim
        )));
    }
    let mut min_curvature = f64::INFINITY;
    for &p in &mesh.vertices {
        min_curvature = min_curvature.min(model.gauss_curvature2(p)?);
    }
    for c in &mesh.cells {
        for (a, b) in [(c[0], c[1]), (c[1], c[2]), (c[2], c[0])] {
            let pa = mesh.vertices[a];
            let pb = mesh.vertices[b];
            let mid = [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0];
            min_curvature = min_curvature.min(model.gauss_curvature2(mid)?);
        }
    }
    Ok(ScreenReport {
        min_curvature,
        bound,
        pass: min_curvature >= bound - 1e-8,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_mesh, RadialProfile, StarDomainSpec};
    use crate::poly::Poly2;
    use crate::spaceform::CustomFactor;

    fn mesh_for(model: &SpaceFormModel, radius: f64) -> DomainMesh {
        build_mesh(
            &StarDomainSpec {
                dim: 2,
                profile: RadialProfile::circle(radius),
                level: 1,
            },
            model,
        )
        .unwrap()
    }

    #[test]
    fn poincare_factor_is_exactly_minus_one() {
        let model = SpaceFormModel::custom(CustomFactor::PoincareLog);
        let mesh = mesh_for(&model, 0.6);
        let rep = curvature_screen(&mesh, &model, -1.0).unwrap();
        assert!((rep.min_curvature + 1.0).abs() < 1e-8);
        assert!(rep.pass);
    }

    #[test]
    fn flat_factor_passes() {
        let model = SpaceFormModel::custom(CustomFactor::Poly(Poly2::zero()));
        let mesh = mesh_for(&model, 0.8);
        let rep = curvature_screen(&mesh, &model, -1.0).unwrap();
        assert_eq!(rep.min_curvature, 0.0);
        assert!(rep.pass);
    }

    #[test]
    fn engineered_factor_fails() {
        // phi = 0.3 |x|^2: Gauss curvature -1.2 e^(-0.6 |x|^2) dips below -1.
        let phi = Poly2::from_terms(&[(2, 0, 0.3), (0, 2, 0.3)]).unwrap();
        let model = SpaceFormModel::custom(CustomFactor::Poly(phi));
        let mesh = mesh_for(&model, 0.5);
        let rep = curvature_screen(&mesh, &model, -1.0).unwrap();
        assert!(rep.min_curvature < -1.0);
        assert!(!rep.pass);
    }
}
