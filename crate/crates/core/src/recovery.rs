//! Gradients and recovered second derivatives of vertex fields.
//!
//! Per-cell gradients are the exact P1 gradients raised with the inverse
//! metric. Pointwise derivatives at vertices come from a quadratic
//! least-squares fit over the vertex's two-ring patch; the covariant Hessian
//! is the fitted second partials minus the Christoffel correction
//! (nabla^2 f)_ij = d_i d_j f - Gamma^k_ij d_k f.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::mesh::DomainMesh;
use crate::spaceform::SpaceFormModel;

/// Minimum patch size for the 6-coefficient quadratic fit.
const MIN_PATCH: usize = 6;

/// Two-ring vertex patches, reusable across fields on the same mesh.
#[derive(Debug, Clone)]
pub struct PatchTable {
    pub patches: Vec<Vec<usize>>,
}

impl PatchTable {
    pub fn new(mesh: &DomainMesh) -> Self {
        let n = mesh.vertex_count();
        let mut ring1: Vec<Vec<usize>> = vec![Vec::new(); n];
        for c in &mesh.cells {
            for (a, b) in [(c[0], c[1]), (c[1], c[2]), (c[2], c[0])] {
                ring1[a].push(b);
                ring1[b].push(a);
            }
        }
        for r in &mut ring1 {
            r.sort_unstable();
            r.dedup();
        }
        let patches = (0..n)
            .map(|v| {
                let mut patch = vec![v];
                patch.extend_from_slice(&ring1[v]);
                for &w in &ring1[v] {
                    patch.extend_from_slice(&ring1[w]);
                }
                patch.sort_unstable();
                patch.dedup();
                patch
            })
            .collect();
        PatchTable { patches }
    }
}

/// Chart first and second partial derivatives recovered at every vertex.
#[derive(Debug, Clone)]
pub struct RecoveredDerivs {
    pub grad: Vec<[f64; 2]>,
    pub hess: Vec<[[f64; 2]; 2]>,
}

/// Quadratic least-squares fit over each vertex patch.
pub fn recover_derivatives(
    mesh: &DomainMesh,
    patches: &PatchTable,
    values: &[f64],
) -> Result<RecoveredDerivs> {
    if values.len() != mesh.vertex_count() {
        return Err(Error::FieldSizeMismatch {
            expected: mesh.vertex_count(),
            got: values.len(),
        });
    }
    let n = mesh.vertex_count();
    let mut grad = vec![[0.0; 2]; n];
    let mut hess = vec![[[0.0; 2]; 2]; n];
    for v in 0..n {
        let patch = &patches.patches[v];
        if patch.len() < MIN_PATCH {
            return Err(Error::RecoveryPatchTooSmall {
                vertex: v,
                got: patch.len(),
                need: MIN_PATCH,
            });
        }
        let center = mesh.vertices[v];
        let scale = patch
            .iter()
            .map(|&p| {
                let d = [
                    mesh.vertices[p][0] - center[0],
                    mesh.vertices[p][1] - center[1],
                ];
                (d[0] * d[0] + d[1] * d[1]).sqrt()
            })
            .fold(0.0f64, f64::max)
            .max(1e-300);
        // Normal equations for q(xi) = c0 + c1 x + c2 y + c3 x^2/2 + c4 xy + c5 y^2/2
        // in patch-scaled coordinates.
        let mut ata = DMatrix::<f64>::zeros(6, 6);
        let mut atb = DVector::<f64>::zeros(6);
        for &p in patch {
            let xi = (mesh.vertices[p][0] - center[0]) / scale;
            let eta = (mesh.vertices[p][1] - center[1]) / scale;
            let row = [1.0, xi, eta, 0.5 * xi * xi, xi * eta, 0.5 * eta * eta];
            for i in 0..6 {
                for j in 0..6 {
                    ata[(i, j)] += row[i] * row[j];
                }
                atb[i] += row[i] * values[p];
            }
        }
        let chol = nalgebra::linalg::Cholesky::new(ata).ok_or(Error::RecoveryPatchTooSmall {
            vertex: v,
            got: patch.len(),
            need: MIN_PATCH,
        })?;
        let c = chol.solve(&atb);
        grad[v] = [c[1] / scale, c[2] / scale];
        let s2 = scale * scale;
        hess[v] = [[c[3] / s2, c[4] / s2], [c[4] / s2, c[5] / s2]];
    }
    Ok(RecoveredDerivs { grad, hess })
}

/// Per-cell metric gradient vectors: g_inv * (flat P1 gradient).
pub fn gradient(
    mesh: &DomainMesh,
    model: &SpaceFormModel,
    field: &ScalarField,
) -> Result<Vec<[f64; 2]>> {
    field.check_mesh(mesh)?;
    let mut out = Vec::with_capacity(mesh.cell_count());
    for (ci, c) in mesh.cells.iter().enumerate() {
        let area = mesh.flat_cell_area(ci);
        let [a, b, d] = [mesh.vertices[c[0]], mesh.vertices[c[1]], mesh.vertices[c[2]]];
        let rot = |p: [f64; 2], q: [f64; 2]| [-(q[1] - p[1]), q[0] - p[0]];
        // grad phi_a = rot90(c - b)/(2A), cyclically.
        let ga = rot(b, d);
        let gb = rot(d, a);
        let gd = rot(a, b);
        let fa = field.values[c[0]];
        let fb = field.values[c[1]];
        let fd = field.values[c[2]];
        let flat = [
            (fa * ga[0] + fb * gb[0] + fd * gd[0]) / (2.0 * area),
            (fa * ga[1] + fb * gb[1] + fd * gd[1]) / (2.0 * area),
        ];
        let centroid = [(a[0] + b[0] + d[0]) / 3.0, (a[1] + b[1] + d[1]) / 3.0];
        let lam = model.lambda(&centroid);
        out.push([flat[0] / (lam * lam), flat[1] / (lam * lam)]);
    }
    Ok(out)
}

/// Covariant Hessian components at every vertex.
pub fn recovered_hessian(
    mesh: &DomainMesh,
    model: &SpaceFormModel,
    field: &ScalarField,
) -> Result<Vec<[[f64; 2]; 2]>> {
    field.check_mesh(mesh)?;
    let patches = PatchTable::new(mesh);
    let rec = recover_derivatives(mesh, &patches, &field.values)?;
    Ok(covariant_hessian(mesh, model, &rec))
}

/// Apply the Christoffel correction to recovered chart derivatives.
pub fn covariant_hessian(
    mesh: &DomainMesh,
    model: &SpaceFormModel,
    rec: &RecoveredDerivs,
) -> Vec<[[f64; 2]; 2]> {
    (0..mesh.vertex_count())
        .map(|v| {
            let gamma = model.christoffel2(mesh.vertices[v]);
            let g = rec.grad[v];
            let mut h = [[0.0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    h[i][j] = rec.hess[v][i][j] - gamma[0][i][j] * g[0] - gamma[1][i][j] * g[1];
                }
            }
            h
        })
        .collect()
}
