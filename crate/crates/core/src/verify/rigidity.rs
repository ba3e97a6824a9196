//! Obata-type rigidity diagnostics for the growth problem
//! Laplace f = n f, f = c > 0 on the boundary, with the hyperbolic weight
//! V = cosh r.
//!
//! On a geodesic ball the solution satisfies D2 f = f g exactly, so the
//! normalized residual int |D2 f - f g|^2 dO / (int |D2 f|^2 dO + int f^2 dO)
//! vanishes under refinement; on any other domain it stays bounded away from
//! zero. The Schwarz deficit is the slack of the inequality chain between
//! ((n-1)/n) int V (Lf - nf)^2 dO and its boundary expression.

use crate::boundary::{boundary_geometry, boundary_tangential_ops_with};
use crate::elliptic::SolveReport;
use crate::error::{Error, Result};
use crate::mesh::DomainMesh;
use crate::spaceform::{SpaceFormKind, SpaceFormModel};

use super::{avg, avg22, integrate_cells_midpoint, FieldData};

#[derive(Debug, Clone)]
pub struct RigidityReport {
    /// int |D2 f - f g|^2 dO.
    pub obata_raw: f64,
    /// obata_raw / (int |D2 f|^2 dO + int f^2 dO).
    pub obata_normalized: f64,
    /// ((n-1)/n) int V (Lf - n f)^2 dO.
    pub schwarz_lhs: f64,
    /// int_M V ((n-1) H u^2 - (2n-2) c u) + (n-1) c^2 d_nu V dA.
    pub schwarz_rhs: f64,
    /// schwarz_lhs - schwarz_rhs (nonnegative up to discretization).
    pub schwarz_deficit: f64,
    pub h_max: f64,
}

/// Rigidity residuals for a growth-problem solve on a hyperbolic-mode mesh.
pub fn rigidity_residual(
    mesh: &DomainMesh,
    model: &SpaceFormModel,
    solve: &SolveReport,
) -> Result<RigidityReport> {
    if model.kind != SpaceFormKind::Hyperbolic {
        return Err(Error::UnsupportedConfiguration(
            "rigidity residual is defined for the hyperbolic growth problem (V = cosh r)".into(),
        ));
    }
    let n = model.dim as f64;
    if (solve.c0 - n).abs() > 1e-12 {
        return Err(Error::UnsupportedConfiguration(format!(
            "rigidity residual needs the growth problem c0 = n, got c0 = {}",
            solve.c0
        )));
    }
    let Some(c) = solve.boundary_constant else {
        return Err(Error::UnsupportedConfiguration(
            "rigidity residual needs a constant boundary value".into(),
        ));
    };
    let fd = FieldData::build(mesh, model, &solve.solution)?;

    let obata_raw = integrate_cells_midpoint(mesh, model, |a, b, _mid, lam| {
        let l2 = lam * lam;
        let hf = avg22(&fd.hess, a, b);
        let f = avg(&fd.values, a, b);
        let mut acc = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let delta = if i == j { 1.0 } else { 0.0 };
                let aij = hf[i][j] - f * l2 * delta;
                acc += aij * aij;
            }
        }
        acc / (l2 * l2)
    });
    let denom = integrate_cells_midpoint(mesh, model, |a, b, _mid, lam| {
        let l2 = lam * lam;
        let hf = avg22(&fd.hess, a, b);
        let f = avg(&fd.values, a, b);
        let mut acc = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                acc += hf[i][j] * hf[i][j];
            }
        }
        acc / (l2 * l2) + f * f
    });

    let schwarz_lhs = (n - 1.0) / n
        * integrate_cells_midpoint(mesh, model, |a, b, mid, lam| {
            let l2 = lam * lam;
            let hf = avg22(&fd.hess, a, b);
            let f = avg(&fd.values, a, b);
            let lap = (hf[0][0] + hf[1][1]) / l2;
            let v = model.potential2(mid).map(|s| s.v).unwrap_or(f64::NAN);
            v * (lap - n * f) * (lap - n * f)
        });

    let bg = boundary_geometry(mesh, model)?;
    let ops = boundary_tangential_ops_with(mesh, model, &solve.solution, &bg, &fd.rec)?;
    let mut schwarz_rhs = 0.0;
    for i in 0..mesh.boundary_loop.len() {
        let vtx = mesh.boundary_loop[i];
        let pot = model.potential2(mesh.vertices[vtx])?;
        let lam = model.lambda(&mesh.vertices[vtx]);
        let nf = bg.vertex_normal_flat[i];
        let dnu_v = (pot.grad[0] * nf[0] + pot.grad[1] * nf[1]) / lam;
        let u = ops.u[i];
        schwarz_rhs += bg.vertex_weight[i]
            * (pot.v * ((n - 1.0) * bg.vertex_mean_curv[i] * u * u - (2.0 * n - 2.0) * c * u)
                + (n - 1.0) * c * c * dnu_v);
    }

    Ok(RigidityReport {
        obata_raw,
        obata_normalized: obata_raw / denom,
        schwarz_lhs,
        schwarz_rhs,
        schwarz_deficit: schwarz_lhs - schwarz_rhs,
        h_max: mesh.h_max,
    })
}
