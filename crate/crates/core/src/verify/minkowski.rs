//! The two Minkowski-type identities on closed curves in space forms:
//! int_M V dA = int_M H p dA (first identity) and
//! int_M p dA = n int_O V dO (divergence of the position field
//! sn_K(r) grad r).

use crate::boundary::boundary_geometry;
use crate::error::{Error, Result};
use crate::mesh::DomainMesh;
use crate::quadrature::QuadratureScheme;
use crate::spaceform::SpaceFormModel;

#[derive(Debug, Clone)]
pub struct MinkowskiReport {
    /// int_M V dA.
    pub first_lhs: f64,
    /// int_M H p dA.
    pub first_rhs: f64,
    /// int_M p dA.
    pub second_lhs: f64,
    /// n int_O V dO.
    pub second_rhs: f64,
    pub h_max: f64,
}

impl MinkowskiReport {
    pub fn first_discrepancy(&self) -> f64 {
        (self.first_lhs - self.first_rhs).abs() / self.first_lhs.abs().max(1e-300)
    }

    pub fn second_discrepancy(&self) -> f64 {
        (self.second_lhs - self.second_rhs).abs() / self.second_lhs.abs().max(1e-300)
    }
}

/// Evaluate both identity pairs; they hold on every closed boundary, not
/// only constant-mean-curvature ones.
pub fn minkowski_check(mesh: &DomainMesh, model: &SpaceFormModel) -> Result<MinkowskiReport> {
    if model.is_custom() {
        return Err(Error::UnsupportedConfiguration(
            "Minkowski identities are evaluated in space-form modes".into(),
        ));
    }
    let bg = boundary_geometry(mesh, model)?;
    let mut first_lhs = 0.0;
    let mut first_rhs = 0.0;
    let mut second_lhs = 0.0;
    for i in 0..bg.length.len() {
        let v = model.potential2(bg.midpoint[i])?.v;
        first_lhs += v * bg.length[i];
        first_rhs += bg.mean_curv[i] * bg.support[i] * bg.length[i];
        second_lhs += bg.support[i] * bg.length[i];
    }
    let cells = QuadratureScheme::cells(mesh, model);
    let vol_v = cells.integrate_fn(|p| model.potential2(p).map(|s| s.v).unwrap_or(f64::NAN));
    Ok(MinkowskiReport {
        first_lhs,
        first_rhs,
        second_lhs,
        second_rhs: model.dim as f64 * vol_v,
        h_max: mesh.h_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_mesh, RadialProfile, StarDomainSpec};
    use std::f64::consts::PI;

    fn mesh_for(model: &SpaceFormModel, profile: RadialProfile, level: u32) -> DomainMesh {
        build_mesh(
            &StarDomainSpec {
                dim: 2,
                profile,
                level,
            },
            model,
        )
        .unwrap()
    }

    #[test]
    fn euclidean_disk_flat_divergence() {
        // int <x, nu> dA = 2 Area = 2 pi on the unit disk.
        let model = SpaceFormModel::euclidean(2);
        let mesh = mesh_for(&model, RadialProfile::circle(1.0), 3);
        let rep = minkowski_check(&mesh, &model).unwrap();
        assert!((rep.second_lhs - 2.0 * PI).abs() / (2.0 * PI) < 2e-3);
        assert!(rep.second_discrepancy() < 2e-3);
        assert!(rep.first_discrepancy() < 2e-3);
    }

    #[test]
    fn hyperbolic_ball_closed_forms() {
        // int p dA = 2 pi sinh^2(R) = 2 int cosh r dO.
        let model = SpaceFormModel::hyperbolic(2);
        let mesh = mesh_for(&model, RadialProfile::circle((0.35f64).tanh()), 3);
        let rep = minkowski_check(&mesh, &model).unwrap();
        let exact = 2.0 * PI * (0.7f64).sinh().powi(2);
        assert!((rep.second_lhs - exact).abs() / exact < 5e-3);
        assert!((rep.second_rhs - exact).abs() / exact < 5e-3);
        assert!(rep.first_discrepancy() < 1e-3);
    }

    #[test]
    fn noncircular_domains_converge() {
        // The identities hold for all closed boundaries; discrepancies decay
        // under refinement.
        let model = SpaceFormModel::hyperbolic(2);
        let profile = RadialProfile::new(
            0.4,
            [0.0, 0.06, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.03, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        );
        let mut d1 = Vec::new();
        let mut d2 = Vec::new();
        for level in 1..=3 {
            let mesh = mesh_for(&model, profile.clone(), level);
            let rep = minkowski_check(&mesh, &model).unwrap();
            d1.push(rep.first_discrepancy());
            d2.push(rep.second_discrepancy());
        }
        assert!(
            (d1[0] / d1[2]).log2() / 2.0 >= 0.8,
            "first-pair discrepancies {d1:?}"
        );
        assert!(
            (d2[0] / d2[2]).log2() / 2.0 >= 0.8,
            "second-pair discrepancies {d2:?}"
        );
    }

    #[test]
    fn custom_mode_unsupported() {
        let model = SpaceFormModel::custom(crate::spaceform::CustomFactor::PoincareLog);
        let mesh = mesh_for(&model, RadialProfile::circle(0.4), 1);
        assert!(minkowski_check(&mesh, &model).is_err());
    }
}
