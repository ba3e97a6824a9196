//! Identity and inequality verification: term-by-term assembly, Richardson
//! extrapolation and three-valued verdicts.

use crate::error::Result;
use crate::field::ScalarField;
use crate::mesh::DomainMesh;
use crate::recovery::{covariant_hessian, recover_derivatives, PatchTable, RecoveredDerivs};
use crate::spaceform::SpaceFormModel;

mod alexandrov;
mod eikonal;
mod hk;
mod minkowski;
mod reilly;
mod rigidity;
mod screen;

pub use alexandrov::{alexandrov_chain, alexandrov_chain_with_tol, AlexandrovReport, ChainValues, DEFAULT_CMC_TOL};
pub use eikonal::{eikonal_distance, EikonalReport};
pub use hk::{brendle_spherical, heintze_karcher, HKReport};
pub use minkowski::{minkowski_check, MinkowskiReport};
pub use reilly::{reilly_residual, PotentialSpec, ReillyReport};
pub use rigidity::{rigidity_residual, RigidityReport};
pub use screen::{curvature_screen, ScreenReport};

/// Three-valued verification outcome. `Violated` is only ever claimed when
/// the extrapolated discrepancy exceeds three times the discretization-error
/// estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    HoldsWithinTolerance,
    ViolatedBeyondTolerance,
    Inconclusive,
    /// A theorem hypothesis failed (e.g. mean curvature not positive); no
    /// claim is made.
    PreconditionViolated,
    /// The constant-mean-curvature screen rejected the boundary.
    NotCmc,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::HoldsWithinTolerance => "holds-within-tolerance",
            Verdict::ViolatedBeyondTolerance => "violated-beyond-tolerance",
            Verdict::Inconclusive => "inconclusive",
            Verdict::PreconditionViolated => "precondition-violated",
            Verdict::NotCmc => "not-cmc",
        }
    }
}

/// Richardson/Aitken extrapolation over the last three refinement levels.
#[derive(Debug, Clone, Copy)]
pub struct Extrapolation {
    /// Estimated continuum value.
    pub value: f64,
    /// Estimated remaining discretization error of the finest value.
    pub error_estimate: f64,
    /// Observed convergence order, when the sequence behaves geometrically.
    pub order: Option<f64>,
}

/// Extrapolate a sequence of level values (coarse to fine, h halving).
pub fn richardson(values: &[f64]) -> Extrapolation {
    let n = values.len();
    if n < 3 {
        let last = *values.last().unwrap_or(&f64::NAN);
        let err = if n == 2 {
            (values[1] - values[0]).abs()
        } else {
            f64::NAN
        };
        return Extrapolation {
            value: last,
            error_estimate: err,
            order: None,
        };
    }
    let d1 = values[n - 2] - values[n - 3];
    let d2 = values[n - 1] - values[n - 2];
    let last = values[n - 1];
    if d2 == 0.0 {
        return Extrapolation {
            value: last,
            error_estimate: 0.0,
            order: None,
        };
    }
    let ratio = d1 / d2;
    if ratio <= 1.0 {
        // Not geometrically convergent; be conservative.
        return Extrapolation {
            value: last,
            error_estimate: d2.abs(),
            order: None,
        };
    }
    let extrapolated = last + d2 / (ratio - 1.0);
    Extrapolation {
        value: extrapolated,
        error_estimate: (extrapolated - last).abs(),
        order: Some(ratio.log2()),
    }
}

/// Convergence orders between consecutive levels of a positive error
/// sequence.
pub fn convergence_orders(errors: &[f64]) -> Vec<f64> {
    errors
        .windows(2)
        .map(|w| {
            if w[1] == 0.0 {
                f64::INFINITY
            } else {
                (w[0] / w[1]).log2()
            }
        })
        .collect()
}

/// Verdict for an inequality `quantity >= 0` from its extrapolated gap.
/// Returns the verdict and whether the inequality is strict beyond the error
/// estimate.
pub fn inequality_verdict(gap: &Extrapolation) -> (Verdict, bool) {
    let e = gap.error_estimate.max(f64::MIN_POSITIVE);
    if gap.value < -3.0 * e {
        (Verdict::ViolatedBeyondTolerance, false)
    } else {
        (Verdict::HoldsWithinTolerance, gap.value > 3.0 * e)
    }
}

/// Mean convergence order across a whole error sequence,
/// log2(first/last)/(len-1). Robust to late levels hitting quadrature or
/// solver-tolerance floors.
pub fn mean_order(errors: &[f64]) -> f64 {
    if errors.len() < 2 {
        return f64::NAN;
    }
    let first = errors[0].abs();
    let last = errors[errors.len() - 1].abs();
    if last == 0.0 {
        return f64::INFINITY;
    }
    (first / last).log2() / (errors.len() - 1) as f64
}

/// Verdict for an identity whose relative residuals should vanish under
/// refinement.
pub fn identity_verdict(relative_residuals: &[f64], threshold: f64, min_order: f64) -> Verdict {
    let Some(&last) = relative_residuals.last() else {
        return Verdict::Inconclusive;
    };
    let order = mean_order(relative_residuals);
    if last.abs() <= threshold {
        if relative_residuals.len() < 2 || order >= min_order {
            Verdict::HoldsWithinTolerance
        } else {
            Verdict::Inconclusive
        }
    } else if order.is_finite() && order < 0.3 {
        Verdict::ViolatedBeyondTolerance
    } else {
        Verdict::Inconclusive
    }
}

/// Per-vertex potential data used by the identity assemblers.
#[derive(Debug, Clone)]
pub(crate) struct PotentialData {
    pub v: Vec<f64>,
    /// Chart partials of V at vertices.
    pub grad: Vec<[f64; 2]>,
    /// Covariant Hessian of V at vertices.
    pub hess: Vec<[[f64; 2]; 2]>,
}

impl PotentialData {
    pub fn space_form(mesh: &DomainMesh, model: &SpaceFormModel) -> Result<Self> {
        let n = mesh.vertex_count();
        let mut v = Vec::with_capacity(n);
        let mut grad = Vec::with_capacity(n);
        let mut hess = Vec::with_capacity(n);
        for &p in &mesh.vertices {
            let pot = model.potential2(p)?;
            v.push(pot.v);
            grad.push(pot.grad);
            hess.push(pot.hess_cov);
        }
        Ok(PotentialData { v, grad, hess })
    }

    pub fn from_field(
        mesh: &DomainMesh,
        model: &SpaceFormModel,
        field: &ScalarField,
    ) -> Result<Self> {
        field.check_mesh(mesh)?;
        let patches = PatchTable::new(mesh);
        let rec = recover_derivatives(mesh, &patches, &field.values)?;
        let hess = covariant_hessian(mesh, model, &rec);
        Ok(PotentialData {
            v: field.values.clone(),
            grad: rec.grad,
            hess,
        })
    }
}

/// Recovered derivatives of a solution field plus its covariant Hessian.
#[derive(Debug, Clone)]
pub(crate) struct FieldData {
    pub values: Vec<f64>,
    pub rec: RecoveredDerivs,
    pub hess: Vec<[[f64; 2]; 2]>,
}

impl FieldData {
    pub fn build(mesh: &DomainMesh, model: &SpaceFormModel, field: &ScalarField) -> Result<Self> {
        field.check_mesh(mesh)?;
        let patches = PatchTable::new(mesh);
        let rec = recover_derivatives(mesh, &patches, &field.values)?;
        let hess = covariant_hessian(mesh, model, &rec);
        Ok(FieldData {
            values: field.values.clone(),
            rec,
            hess,
        })
    }
}

/// Scalar Ricci factor at a chart point: Ric = ric_scalar(x) * g. For space
/// forms this is (n-1) K; for custom 2-D metrics the Gauss curvature.
pub(crate) fn ric_scalar(model: &SpaceFormModel, x: [f64; 2]) -> Result<f64> {
    match model.curvature_constant() {
        Some(k) => Ok((model.dim as f64 - 1.0) * k),
        None => model.gauss_curvature2(x),
    }
}

/// Integrate a cell integrand sampled at edge midpoints: the closure gets
/// the two edge-endpoint vertex indices, the midpoint and lambda there.
pub(crate) fn integrate_cells_midpoint(
    mesh: &DomainMesh,
    model: &SpaceFormModel,
    mut integrand: impl FnMut(usize, usize, [f64; 2], f64) -> f64,
) -> f64 {
    let n = model.dim as i32;
    let mut acc = 0.0;
    for (ci, c) in mesh.cells.iter().enumerate() {
        let area = mesh.flat_cell_area(ci);
        for (a, b) in [(c[0], c[1]), (c[1], c[2]), (c[2], c[0])] {
            let pa = mesh.vertices[a];
            let pb = mesh.vertices[b];
            let mid = [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0];
            let lam = model.lambda(&mid);
            acc += area / 3.0 * lam.powi(n) * integrand(a, b, mid, lam);
        }
    }
    acc
}

/// Average of a per-vertex scalar at an edge midpoint.
#[inline]
pub(crate) fn avg(vals: &[f64], a: usize, b: usize) -> f64 {
    0.5 * (vals[a] + vals[b])
}

/// Average of per-vertex 2-vectors.
#[inline]
pub(crate) fn avg2(vals: &[[f64; 2]], a: usize, b: usize) -> [f64; 2] {
    [
        0.5 * (vals[a][0] + vals[b][0]),
        0.5 * (vals[a][1] + vals[b][1]),
    ]
}

/// Average of per-vertex symmetric 2x2 tensors.
#[inline]
pub(crate) fn avg22(vals: &[[[f64; 2]; 2]], a: usize, b: usize) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = 0.5 * (vals[a][i][j] + vals[b][i][j]);
        }
    }
    out
}
