//! Boundary geometry: outward normals, second fundamental form, mean
//! curvature, support function and tangential derivatives on the boundary
//! curve.
//!
//! The boundary is exactly parametrized by the radial profile, so the flat
//! curvature of the curve is closed-form; the conformal change gives the
//! geodesic curvature kappa_g = (kappa_flat + d ln(lambda)/d n) / lambda with
//! respect to the flat outward normal n. For n = 2 this is both h(T, T) for
//! the metric-unit tangent T and the normalized mean curvature H.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::mesh::{metric_edge_length, DomainMesh};
use crate::recovery::{recover_derivatives, PatchTable, RecoveredDerivs};
use crate::spaceform::SpaceFormModel;

/// Per-element and per-vertex boundary data. Elements are indexed by the
/// boundary-loop position of their start vertex.
#[derive(Debug, Clone)]
pub struct BoundaryGeometry {
    /// Metric-normalized outward normal (chart components) at element midpoints.
    pub normal: Vec<[f64; 2]>,
    /// h(T, T) for the metric-unit tangent T.
    pub second_ff: Vec<f64>,
    /// Normalized mean curvature H per element.
    pub mean_curv: Vec<f64>,
    /// Support function p = sn_K(r) g(grad r, nu) per element (NaN in custom
    /// mode until a distance field is attached).
    pub support: Vec<f64>,
    /// Metric length of each element (boundary measure weight).
    pub length: Vec<f64>,
    /// Chart midpoint of each element (on the exact profile arc).
    pub midpoint: Vec<[f64; 2]>,
    /// Flat outward unit normal at each boundary vertex.
    pub vertex_normal_flat: Vec<[f64; 2]>,
    /// H at each boundary vertex.
    pub vertex_mean_curv: Vec<f64>,
    /// p at each boundary vertex.
    pub vertex_support: Vec<f64>,
    /// Trapezoid metric weight of each boundary vertex.
    pub vertex_weight: Vec<f64>,
    /// Cumulative metric arclength of each boundary vertex.
    pub vertex_arclength: Vec<f64>,
    pub min_mean_curv: f64,
}

/// Tangential boundary data of a field: restriction z, normal derivative u,
/// arclength derivatives of z and the curvature form on its gradient.
#[derive(Debug, Clone)]
pub struct BoundaryFieldOps {
    pub z: Vec<f64>,
    pub u: Vec<f64>,
    /// dz/ds in the metric arclength parameter (the 1-D gradient of z).
    pub dz_ds: Vec<f64>,
    /// d2z/ds2, the boundary Laplacian of z for n = 2.
    pub d2z_ds2: Vec<f64>,
    /// h(grad z, grad z) = kappa_g (dz/ds)^2.
    pub h_grad_grad: Vec<f64>,
}

fn curvature_at(model: &SpaceFormModel, mesh: &DomainMesh, theta: f64) -> (f64, [f64; 2], [f64; 2]) {
    let p = mesh.profile.point(theta);
    let (_t, n) = mesh.profile.frame(theta);
    let kappa_flat = mesh.profile.flat_curvature(theta);
    let w = model.grad_ln_lambda2(p);
    let lam = model.lambda(&p);
    let kappa_g = (kappa_flat + n[0] * w[0] + n[1] * w[1]) / lam;
    (kappa_g, n, p)
}

fn support_space_form(model: &SpaceFormModel, point: [f64; 2], n_flat: [f64; 2]) -> f64 {
    let s = (point[0] * point[0] + point[1] * point[1]).sqrt();
    if s < 1e-300 {
        return 0.0;
    }
    let pot = model
        .potential2(point)
        .expect("space-form potential inside chart");
    model.sn(pot.r) * (point[0] * n_flat[0] + point[1] * n_flat[1]) / s
}

/// Boundary geometry from the exact profile parametrization. In custom mode
/// the support function is NaN (attach a distance field with
/// [`boundary_geometry_with_distance`]).
pub fn boundary_geometry(mesh: &DomainMesh, model: &SpaceFormModel) -> Result<BoundaryGeometry> {
    let n = mesh.boundary_loop.len();
    let mut normal = Vec::with_capacity(n);
    let mut second_ff = Vec::with_capacity(n);
    let mut mean_curv = Vec::with_capacity(n);
    let mut support = Vec::with_capacity(n);
    let mut length = Vec::with_capacity(n);
    let mut midpoint = Vec::with_capacity(n);
    let mut vertex_normal_flat = Vec::with_capacity(n);
    let mut vertex_mean_curv = Vec::with_capacity(n);
    let mut vertex_support = Vec::with_capacity(n);

    let custom = model.is_custom();
    for i in 0..n {
        let a = mesh.boundary_loop[i];
        let b = mesh.boundary_loop[(i + 1) % n];
        let pa = mesh.vertices[a];
        let pb = mesh.vertices[b];
        let chord = ((pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2)).sqrt();
        if chord < 1e-14 {
            return Err(Error::DegenerateFacet {
                facet: i,
                length: chord,
            });
        }
        let ta = mesh.boundary_theta[i];
        let mut tb = mesh.boundary_theta[(i + 1) % n];
        if tb <= ta {
            tb += TAU;
        }
        let tm = 0.5 * (ta + tb);
        let (kappa_g, nf, pm) = curvature_at(model, mesh, tm);
        let lam = model.lambda(&pm);
        normal.push([nf[0] / lam, nf[1] / lam]);
        second_ff.push(kappa_g);
        mean_curv.push(kappa_g);
        support.push(if custom {
            f64::NAN
        } else {
            support_space_form(model, pm, nf)
        });
        length.push(metric_edge_length(model, pa, pb));
        midpoint.push(pm);

        let (kv, nv, pv) = curvature_at(model, mesh, ta);
        vertex_normal_flat.push(nv);
        vertex_mean_curv.push(kv);
        vertex_support.push(if custom {
            f64::NAN
        } else {
            support_space_form(model, pv, nv)
        });
    }

    let mut vertex_weight = vec![0.0; n];
    let mut vertex_arclength = vec![0.0; n];
    for i in 0..n {
        vertex_weight[i] = 0.5 * (length[(i + n - 1) % n] + length[i]);
        if i > 0 {
            vertex_arclength[i] = vertex_arclength[i - 1] + length[i - 1];
        }
    }
    let min_mean_curv = mean_curv
        .iter()
        .chain(vertex_mean_curv.iter())
        .fold(f64::INFINITY, |a, &b| a.min(b));

    Ok(BoundaryGeometry {
        normal,
        second_ff,
        mean_curv,
        support,
        length,
        midpoint,
        vertex_normal_flat,
        vertex_mean_curv,
        vertex_support,
        vertex_weight,
        vertex_arclength,
        min_mean_curv,
    })
}

/// Boundary geometry with the support function evaluated from a vertex
/// distance field (custom metrics).
pub fn boundary_geometry_with_distance(
    mesh: &DomainMesh,
    model: &SpaceFormModel,
    distance: &ScalarField,
) -> Result<BoundaryGeometry> {
    distance.check_mesh(mesh)?;
    let mut bg = boundary_geometry(mesh, model)?;
    let patches = PatchTable::new(mesh);
    let rec = recover_derivatives(mesh, &patches, &distance.values)?;
    let n = mesh.boundary_loop.len();
    for i in 0..n {
        let a = mesh.boundary_loop[i];
        let b = mesh.boundary_loop[(i + 1) % n];
        // Element values from endpoint averages; vertex values directly.
        let r_mid = 0.5 * (distance.values[a] + distance.values[b]);
        let dr_mid = [
            0.5 * (rec.grad[a][0] + rec.grad[b][0]),
            0.5 * (rec.grad[a][1] + rec.grad[b][1]),
        ];
        let lam_mid = model.lambda(&bg.midpoint[i]);
        let nm = [bg.normal[i][0] * lam_mid, bg.normal[i][1] * lam_mid];
        bg.support[i] = model.sn(r_mid) * (dr_mid[0] * nm[0] + dr_mid[1] * nm[1]) / lam_mid;
        let va = mesh.vertices[a];
        let lam_v = model.lambda(&va);
        let nv = bg.vertex_normal_flat[i];
        bg.vertex_support[i] =
            model.sn(distance.values[a]) * (rec.grad[a][0] * nv[0] + rec.grad[a][1] * nv[1]) / lam_v;
    }
    Ok(bg)
}

/// Restriction, normal derivative and tangential derivatives of a field on
/// the boundary loop. The normal derivative is a one-sided quadratic
/// least-squares fit over the boundary vertex's patch evaluated along -nu;
/// tangential derivatives are 3-point finite differences in the metric
/// arclength parameter.
pub fn boundary_tangential_ops(
    mesh: &DomainMesh,
    model: &SpaceFormModel,
    field: &ScalarField,
    bg: &BoundaryGeometry,
) -> Result<BoundaryFieldOps> {
    field.check_mesh(mesh)?;
    let patches = PatchTable::new(mesh);
    let rec = recover_derivatives(mesh, &patches, &field.values)?;
    boundary_tangential_ops_with(mesh, model, field, bg, &rec)
}

/// Same as [`boundary_tangential_ops`] with precomputed recovered
/// derivatives (avoids re-fitting when the caller already has them).
pub fn boundary_tangential_ops_with(
    mesh: &DomainMesh,
    model: &SpaceFormModel,
    field: &ScalarField,
    bg: &BoundaryGeometry,
    rec: &RecoveredDerivs,
) -> Result<BoundaryFieldOps> {
    let n = mesh.boundary_loop.len();
    let mut z = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    for i in 0..n {
        let v = mesh.boundary_loop[i];
        z.push(field.values[v]);
        let lam = model.lambda(&mesh.vertices[v]);
        let nf = bg.vertex_normal_flat[i];
        u.push((rec.grad[v][0] * nf[0] + rec.grad[v][1] * nf[1]) / lam);
    }
    let mut dz_ds = vec![0.0; n];
    let mut d2z_ds2 = vec![0.0; n];
    for i in 0..n {
        let hm = bg.length[(i + n - 1) % n];
        let hp = bg.length[i];
        let zm = z[(i + n - 1) % n];
        let zp = z[(i + 1) % n];
        let zi = z[i];
        let denom = hm * hp * (hm + hp);
        dz_ds[i] = (zp * hm * hm - zm * hp * hp + zi * (hp * hp - hm * hm)) / denom;
        d2z_ds2[i] = 2.0 * (zm * hp + zp * hm - zi * (hm + hp)) / denom;
    }
    let h_grad_grad = (0..n)
        .map(|i| bg.vertex_mean_curv[i] * dz_ds[i] * dz_ds[i])
        .collect();
    Ok(BoundaryFieldOps {
        z,
        u,
        dz_ds,
        d2z_ds2,
        h_grad_grad,
    })
}

/// Weighted sum of per-vertex boundary values (trapezoid rule in metric
/// arclength; second order on smooth closed curves).
pub fn integrate_boundary_vertices(bg: &BoundaryGeometry, values: &[f64]) -> f64 {
    values
        .iter()
        .zip(&bg.vertex_weight)
        .map(|(v, w)| v * w)
        .sum()
}

/// Weighted sum of per-element boundary values (midpoint rule).
pub fn integrate_boundary_elements(bg: &BoundaryGeometry, values: &[f64]) -> f64 {
    values.iter().zip(&bg.length).map(|(v, w)| v * w).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldTag;
    use crate::mesh::{build_mesh, RadialProfile, StarDomainSpec};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn disk(model: &SpaceFormModel, radius: f64, level: u32) -> DomainMesh {
        build_mesh(
            &StarDomainSpec {
                dim: 2,
                profile: RadialProfile::circle(radius),
                level,
            },
            model,
        )
        .unwrap()
    }

    #[test]
    fn euclidean_unit_circle_curvature() {
        let model = SpaceFormModel::euclidean(2);
        let mesh = disk(&model, 1.0, 1);
        let bg = boundary_geometry(&mesh, &model).unwrap();
        for (&h, &p) in bg.mean_curv.iter().zip(&bg.support) {
            assert_relative_eq!(h, 1.0, epsilon = 1e-12);
            assert_relative_eq!(p, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn hyperbolic_geodesic_circle_curvature() {
        let model = SpaceFormModel::hyperbolic(2);
        let mesh = disk(&model, (0.35f64).tanh(), 1);
        let bg = boundary_geometry(&mesh, &model).unwrap();
        let expected = 1.0 / (0.7f64).tanh();
        for &h in &bg.mean_curv {
            assert_relative_eq!(h, expected, max_relative = 1e-12);
        }
        assert_relative_eq!(bg.min_mean_curv, expected, max_relative = 1e-12);
        // Constant H across elements: geodesic circles are CMC.
        let mean: f64 = bg.mean_curv.iter().sum::<f64>() / bg.mean_curv.len() as f64;
        let dev = bg
            .mean_curv
            .iter()
            .fold(0.0f64, |a, &b| a.max((b - mean).abs()));
        assert!(dev / mean < 1e-12);
    }

    #[test]
    fn spherical_circle_curvature_and_support() {
        let model = SpaceFormModel::spherical(2);
        let mesh = disk(&model, (0.25f64).tan(), 1);
        let bg = boundary_geometry(&mesh, &model).unwrap();
        let expect_h = 1.0 / (0.5f64).tan();
        let expect_p = (0.5f64).sin();
        for (&h, &p) in bg.mean_curv.iter().zip(&bg.support) {
            assert_relative_eq!(h, expect_h, max_relative = 1e-12);
            assert_relative_eq!(p, expect_p, max_relative = 1e-12);
        }
    }

    #[test]
    fn normal_is_metric_unit_and_tangent_orthogonal() {
        let model = SpaceFormModel::hyperbolic(2);
        let profile = RadialProfile::new(
            0.4,
            [0.0, 0.05, 0.0, 0.02, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.03, 0.0, 0.0, 0.0, 0.0, 0.0],
        );
        let mesh = build_mesh(
            &StarDomainSpec {
                dim: 2,
                profile,
                level: 1,
            },
            &model,
        )
        .unwrap();
        let bg = boundary_geometry(&mesh, &model).unwrap();
        let n = mesh.boundary_loop.len();
        for i in 0..n {
            let lam = model.lambda(&bg.midpoint[i]);
            let nu = bg.normal[i];
            let g_nn = lam * lam * (nu[0] * nu[0] + nu[1] * nu[1]);
            assert_relative_eq!(g_nn, 1.0, epsilon = 1e-12);
            // g(nu, t) = lambda^2 (nu . t) for the metric-unit tangent
            // t = that/lambda; conformal metrics preserve flat angles.
            let ta = mesh.boundary_theta[i];
            let mut tb = mesh.boundary_theta[(i + 1) % n];
            if tb <= ta {
                tb += std::f64::consts::TAU;
            }
            let (t, _) = mesh.profile.frame(0.5 * (ta + tb));
            let g_nt = lam * lam * (nu[0] * t[0] / lam + nu[1] * t[1] / lam);
            assert!(g_nt.abs() < 1e-8);
        }
    }

    #[test]
    fn constant_field_tangential_ops() {
        let model = SpaceFormModel::hyperbolic(2);
        let mesh = disk(&model, 0.4, 2);
        let bg = boundary_geometry(&mesh, &model).unwrap();
        let f = ScalarField::constant(&mesh, 2.5, FieldTag::Custom);
        let ops = boundary_tangential_ops(&mesh, &model, &f, &bg).unwrap();
        for i in 0..ops.z.len() {
            assert_relative_eq!(ops.z[i], 2.5);
            assert!(ops.u[i].abs() < 1e-10);
            assert!(ops.dz_ds[i].abs() < 1e-10);
            assert!(ops.d2z_ds2[i].abs() < 1e-10);
            assert!(ops.h_grad_grad[i].abs() < 1e-20);
        }
    }

    #[test]
    fn radial_potential_normal_derivative() {
        // f = V = cosh r on the geodesic ball of radius 0.7: u = sinh(0.7)
        // with second-order convergence.
        let model = SpaceFormModel::hyperbolic(2);
        let expected = (0.7f64).sinh();
        let mut errs = Vec::new();
        for level in 1..=3 {
            let mesh = disk(&model, (0.35f64).tanh(), level);
            let bg = boundary_geometry(&mesh, &model).unwrap();
            let f = ScalarField::sample(&mesh, FieldTag::Potential, |p| {
                model.potential2(p).unwrap().v
            });
            let ops = boundary_tangential_ops(&mesh, &model, &f, &bg).unwrap();
            let err = ops
                .u
                .iter()
                .fold(0.0f64, |a, &u| a.max((u - expected).abs()));
            errs.push(err);
        }
        let order = (errs[0] / errs[2]).log2() / 2.0;
        assert!(
            order >= 1.8,
            "u errors {errs:?} give mean order {order}"
        );
    }

    #[test]
    fn first_harmonic_boundary_laplacian() {
        // f = x1 on the euclidean unit disk: z = cos(theta),
        // d2z/ds2 = -cos(theta). The chord parametrization reproduces first
        // harmonics on a circle exactly.
        let model = SpaceFormModel::euclidean(2);
        let mesh = disk(&model, 1.0, 2);
        let bg = boundary_geometry(&mesh, &model).unwrap();
        let f = ScalarField::sample(&mesh, FieldTag::Custom, |p| p[0]);
        let ops = boundary_tangential_ops(&mesh, &model, &f, &bg).unwrap();
        for (i, &t) in mesh.boundary_theta.iter().enumerate() {
            assert!((ops.z[i] - t.cos()).abs() < 1e-12);
            assert!((ops.d2z_ds2[i] + t.cos()).abs() < 1e-10);
        }
    }

    #[test]
    fn cubic_harmonic_boundary_laplacian_order() {
        // f = x1^3: z = cos^3(theta), z'' = 6 cos sin^2 - 3 cos^3; the
        // arclength second difference converges at order 2.
        let model = SpaceFormModel::euclidean(2);
        let mut errs = Vec::new();
        for level in 1..=3 {
            let mesh = disk(&model, 1.0, level);
            let bg = boundary_geometry(&mesh, &model).unwrap();
            let f = ScalarField::sample(&mesh, FieldTag::Custom, |p| p[0].powi(3));
            let ops = boundary_tangential_ops(&mesh, &model, &f, &bg).unwrap();
            let mut err = 0.0f64;
            for (i, &t) in mesh.boundary_theta.iter().enumerate() {
                let exact = 6.0 * t.cos() * t.sin() * t.sin() - 3.0 * t.cos().powi(3);
                err = err.max((ops.d2z_ds2[i] - exact).abs());
            }
            errs.push(err);
        }
        let order = (errs[0] / errs[2]).log2() / 2.0;
        assert!(order >= 1.8, "d2z errors {errs:?}, order {order}");
    }

    #[test]
    fn boundary_length_of_hyperbolic_circle() {
        let model = SpaceFormModel::hyperbolic(2);
        let mesh = disk(&model, (0.35f64).tanh(), 3);
        let bg = boundary_geometry(&mesh, &model).unwrap();
        let total: f64 = bg.length.iter().sum();
        let exact = 2.0 * PI * (0.7f64).sinh();
        assert!((total - exact).abs() / exact < 2e-3);
        let vertex_total: f64 = bg.vertex_weight.iter().sum();
        assert_relative_eq!(total, vertex_total, max_relative = 1e-13);
    }
}
