//! First-arrival geodesic distance from the base point on a triangle mesh.
//!
//! Monotone front propagation: every triangle supplies the classical
//! two-point update (linear front across the opposite edge, computed in an
//! isometric planar unfolding from the metric edge lengths), and Gauss-Seidel
//! sweeps with alternating cell order iterate the min-updates to a fixed
//! point. First-order accurate in the metric mesh size.

use crate::error::{Error, Result};
use crate::field::{FieldTag, ScalarField};
use crate::laplace::assemble_laplace_beltrami;
use crate::mesh::{metric_edge_length, DomainMesh};
use crate::recovery::{recover_derivatives, PatchTable};
use crate::spaceform::SpaceFormModel;

/// Distance field plus the eikonal post-checks.
#[derive(Debug, Clone)]
pub struct EikonalReport {
    pub field: ScalarField,
    /// max | |grad r|_g - 1 | over cells away from the base point.
    pub max_eikonal_residual: f64,
    /// Vertices whose recovered distance Hessian blows up (cut-locus
    /// suspects; empty on smooth star-shaped domains).
    pub suspects: Vec<usize>,
    /// Metric measure carried by the suspect vertices.
    pub excluded_measure: f64,
    pub sweeps: usize,
}

/// Two-point update at the apex C of a triangle whose base vertices A, B
/// carry first-arrival values, computed in an isometric planar unfolding
/// from the metric edge lengths.
///
/// Primary model: reconstruct the virtual point source S behind the base
/// edge from the two circles |S - A| = ta, |S - B| = tb and take |C - S|
/// (exact for point sources in flat metrics). When the circles do not
/// intersect or the characteristic misses the triangle, fall back to the
/// linear-front update, and last to the edge paths.
fn triangle_update(ta: f64, tb: f64, l_ca: f64, l_cb: f64, l_ab: f64) -> f64 {
    let mut best = (ta + l_ca).min(tb + l_cb);
    let cx = (l_ca * l_ca + l_ab * l_ab - l_cb * l_cb) / (2.0 * l_ab);
    let cy2 = l_ca * l_ca - cx * cx;
    if cy2 <= 0.0 {
        return best;
    }
    let cy = cy2.sqrt();

    // Source reconstruction.
    let px = (ta * ta - tb * tb + l_ab * l_ab) / (2.0 * l_ab);
    let py2 = ta * ta - px * px;
    if py2 > 0.0 {
        let py = -py2.sqrt(); // source on the far side of the base edge
        // The ray S -> C must cross the open base segment.
        let denom = cy - py;
        let x_cross = px + (cx - px) * (-py) / denom;
        if x_cross > 0.0 && x_cross < l_ab {
            let d = ((cx - px) * (cx - px) + (cy - py) * (cy - py)).sqrt();
            best = best.min(d);
        }
    }

    // Linear-front fallback.
    let m = (tb - ta) / l_ab;
    if m.abs() < 1.0 {
        let xi = m * cy / (1.0 - m * m).sqrt();
        let lam = (cx - xi) / l_ab;
        if (0.0..=1.0).contains(&lam) {
            let dx = cx - lam * l_ab;
            let d = (dx * dx + cy * cy).sqrt();
            best = best.min((1.0 - lam) * ta + lam * tb + d);
        }
    }
    best
}

/// Solve |grad r|_g = 1 with r(base point) = 0 at the chart origin.
pub fn eikonal_distance(mesh: &DomainMesh, model: &SpaceFormModel) -> Result<EikonalReport> {
    let origin = mesh.vertices[0];
    if (origin[0] * origin[0] + origin[1] * origin[1]).sqrt() > 1e-12 {
        return Err(Error::BasePointOutsideMesh(format!(
            "vertex 0 at {origin:?} is not the chart origin"
        )));
    }
    let nv = mesh.vertex_count();
    // Metric edge lengths per cell: [ |01|, |12|, |20| ].
    let lengths: Vec<[f64; 3]> = mesh
        .cells
        .iter()
        .map(|c| {
            let p = [mesh.vertices[c[0]], mesh.vertices[c[1]], mesh.vertices[c[2]]];
            [
                metric_edge_length(model, p[0], p[1]),
                metric_edge_length(model, p[1], p[2]),
                metric_edge_length(model, p[2], p[0]),
            ]
        })
        .collect();
    let edge_len = |ci: usize, a: usize, b: usize| -> f64 {
        let c = mesh.cells[ci];
        let l = lengths[ci];
        match (a, b) {
            _ if (a, b) == (c[0], c[1]) || (a, b) == (c[1], c[0]) => l[0],
            _ if (a, b) == (c[1], c[2]) || (a, b) == (c[2], c[1]) => l[1],
            _ => l[2],
        }
    };

    let mut r = vec![f64::INFINITY; nv];
    r[0] = 0.0;
    // Seed a neighborhood of the base point with chord metric lengths
    // (radial chords approximate short geodesics to third order). A seed
    // radius ~ h^(2/3) keeps the front curvature bounded where linear-front
    // updates start, trading the O(h) near-source pollution for O(h^(4/3)).
    let seed_radius = mesh.h_max.sqrt();
    for v in 1..nv {
        let p = mesh.vertices[v];
        // composite 3-point Gauss on 8 sub-segments of the chord
        let mut len = 0.0;
        let mut prev = [0.0, 0.0];
        for s in 1..=8 {
            let t = s as f64 / 8.0;
            let q = [p[0] * t, p[1] * t];
            len += metric_edge_length(model, prev, q);
            prev = q;
        }
        if len <= seed_radius {
            r[v] = len;
        }
    }
    let mut sweeps = 0;
    loop {
        let mut max_delta = 0.0f64;
        let forward = sweeps % 2 == 0;
        let order: Box<dyn Iterator<Item = usize>> = if forward {
            Box::new(0..mesh.cell_count())
        } else {
            Box::new((0..mesh.cell_count()).rev())
        };
        for ci in order {
            let c = mesh.cells[ci];
            for k in 0..3 {
                let apex = c[k];
                let a = c[(k + 1) % 3];
                let b = c[(k + 2) % 3];
                if !r[a].is_finite() || !r[b].is_finite() {
                    // edge-path fallback keeps the front moving
                    if r[a].min(r[b]).is_finite() {
                        let (known, l) = if r[a] <= r[b] {
                            (r[a], edge_len(ci, apex, a))
                        } else {
                            (r[b], edge_len(ci, apex, b))
                        };
                        let cand = known + l;
                        if cand < r[apex] {
                            if r[apex].is_finite() {
                                max_delta = max_delta.max(r[apex] - cand);
                            } else {
                                max_delta = f64::INFINITY;
                            }
                            r[apex] = cand;
                        }
                    }
                    continue;
                }
                let cand = triangle_update(
                    r[a],
                    r[b],
                    edge_len(ci, apex, a),
                    edge_len(ci, apex, b),
                    edge_len(ci, a, b),
                );
                if cand < r[apex] {
                    max_delta = max_delta.max(if r[apex].is_finite() {
                        r[apex] - cand
                    } else {
                        f64::INFINITY
                    });
                    r[apex] = cand;
                }
            }
        }
        sweeps += 1;
        if max_delta < 1e-13 || sweeps > 500 {
            break;
        }
    }

    // Eikonal residual away from the base point: per-cell P1 gradient.
    let excl = 3.0 * mesh.h_max;
    let mut max_res = 0.0f64;
    for (ci, c) in mesh.cells.iter().enumerate() {
        if c.iter().any(|&v| r[v] < excl) {
            continue;
        }
        let area = mesh.flat_cell_area(ci);
        let [pa, pb, pd] = [mesh.vertices[c[0]], mesh.vertices[c[1]], mesh.vertices[c[2]]];
        let rot = |p: [f64; 2], q: [f64; 2]| [-(q[1] - p[1]), q[0] - p[0]];
        let (ga, gb, gd) = (rot(pb, pd), rot(pd, pa), rot(pa, pb));
        let flat = [
            (r[c[0]] * ga[0] + r[c[1]] * gb[0] + r[c[2]] * gd[0]) / (2.0 * area),
            (r[c[0]] * ga[1] + r[c[1]] * gb[1] + r[c[2]] * gd[1]) / (2.0 * area),
        ];
        let cen = [(pa[0] + pb[0] + pd[0]) / 3.0, (pa[1] + pb[1] + pd[1]) / 3.0];
        let lam = model.lambda(&cen);
        let grad_norm = (flat[0] * flat[0] + flat[1] * flat[1]).sqrt() / lam;
        max_res = max_res.max((grad_norm - 1.0).abs());
    }

    // Cut-locus suspects: recovered Hessian magnitude wildly above the
    // median, away from the base-point cone.
    let patches = PatchTable::new(mesh);
    let rec = recover_derivatives(mesh, &patches, &r)?;
    let lumped = {
        let m = assemble_laplace_beltrami(mesh, model, 0.0).mass;
        m.apply(&vec![1.0; nv])
    };
    let mut frob: Vec<(usize, f64)> = Vec::new();
    for v in 0..nv {
        if r[v] < excl {
            continue;
        }
        let lam = model.lambda(&mesh.vertices[v]);
        let h = rec.hess[v];
        let f = (h[0][0] * h[0][0] + 2.0 * h[0][1] * h[0][1] + h[1][1] * h[1][1]).sqrt()
            / (lam * lam);
        frob.push((v, f));
    }
    let mut sorted: Vec<f64> = frob.iter().map(|e| e.1).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = if sorted.is_empty() {
        0.0
    } else {
        sorted[sorted.len() / 2]
    };
    let threshold = 10.0 * median.max(1.0);
    let suspects: Vec<usize> = frob
        .iter()
        .filter(|e| e.1 > threshold)
        .map(|e| e.0)
        .collect();
    let excluded_measure = suspects.iter().map(|&v| lumped[v]).sum();

    Ok(EikonalReport {
        field: ScalarField::new(r, FieldTag::Custom),
        max_eikonal_residual: max_res,
        suspects,
        excluded_measure,
        sweeps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_mesh, RadialProfile, StarDomainSpec};
    use crate::poly::Poly2;
    use crate::spaceform::CustomFactor;

    fn mesh_for(model: &SpaceFormModel, radius: f64, level: u32) -> DomainMesh {
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
    fn flat_factor_gives_euclidean_distance() {
        // The source-reconstruction update is exact for point sources in a
        // flat metric; errors sit at roundoff.
        let model = SpaceFormModel::custom(CustomFactor::Poly(Poly2::zero()));
        for level in 1..=2 {
            let mesh = mesh_for(&model, 0.8, level);
            let rep = eikonal_distance(&mesh, &model).unwrap();
            let err = mesh
                .vertices
                .iter()
                .zip(&rep.field.values)
                .map(|(&p, &r)| (r - (p[0] * p[0] + p[1] * p[1]).sqrt()).abs())
                .fold(0.0f64, f64::max);
            assert!(err < 1e-12, "level {level} error {err}");
            assert!(rep.suspects.is_empty());
        }
    }

    #[test]
    fn poincare_factor_matches_hyperbolic_distance() {
        let model = SpaceFormModel::custom(CustomFactor::PoincareLog);
        let mut errs = Vec::new();
        for level in 1..=3 {
            let mesh = mesh_for(&model, 0.45, level);
            let rep = eikonal_distance(&mesh, &model).unwrap();
            let err = mesh
                .vertices
                .iter()
                .zip(&rep.field.values)
                .map(|(&p, &r)| {
                    (r - 2.0 * (p[0] * p[0] + p[1] * p[1]).sqrt().atanh()).abs()
                })
                .fold(0.0f64, f64::max);
            errs.push(err);
        }
        let order = (errs[0] / errs[2]).log2() / 2.0;
        assert!(order >= 0.8, "errors {errs:?}, order {order}");
    }

    #[test]
    fn eikonal_residual_decreases() {
        let phi = Poly2::from_terms(&[(2, 0, 0.1), (0, 2, -0.1)]).unwrap();
        let model = SpaceFormModel::custom(CustomFactor::Poly(phi));
        let profile = RadialProfile::new(
            0.6,
            [0.0, 0.05, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0; 8],
        );
        let mut res = Vec::new();
        for level in 1..=3 {
            let mesh = build_mesh(
                &StarDomainSpec {
                    dim: 2,
                    profile: profile.clone(),
                    level,
                },
                &model,
            )
            .unwrap();
            let rep = eikonal_distance(&mesh, &model).unwrap();
            res.push(rep.max_eikonal_residual);
        }
        assert!(
            res[2] < res[0],
            "eikonal residuals not decreasing: {res:?}"
        );
    }
}
