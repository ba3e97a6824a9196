//! Dirichlet solves for the canonical operator -Laplace + c0 on a meshed
//! domain.
//!
//! Problem mapping used throughout the crate (n = dimension, K = curvature):
//!
//! * growth problem: Laplace f = n f in Omega, f = c on the boundary
//!   <-> c0 = n, rhs = 0, bdry = c (`growth_problem`);
//! * torsion-type problem: Laplace f + K n f = 1 in Omega, f = 0 on the
//!   boundary <-> c0 = -K n, rhs = -1, bdry = 0 (`torsion_problem`).
//!
//! Boundary conditions are imposed by elimination, so solved fields carry the
//! prescribed boundary values exactly. The reduced system is solved by
//! Jacobi-preconditioned conjugate gradients with indefiniteness detection;
//! for c0 < 0 (the spherical torsion case) a coercivity-margin pre-check
//! estimates the smallest generalized eigenvalue of (S, M) and refuses
//! systems whose zeroth-order shift cancels the coercivity to within the
//! margin tolerance.

use crate::error::{Error, Result};
use crate::field::{FieldTag, ScalarField};
use crate::laplace::{assemble_laplace_beltrami, SparseSym};
use crate::mesh::DomainMesh;
use crate::spaceform::SpaceFormModel;

#[derive(Debug, Clone)]
pub enum RhsSpec {
    Constant(f64),
    Field(Vec<f64>),
}

#[derive(Debug, Clone)]
pub enum BoundaryValues {
    Constant(f64),
    /// Values per boundary-loop position.
    PerVertex(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct DirichletProblem {
    pub c0: f64,
    pub rhs: RhsSpec,
    pub bdry: BoundaryValues,
    /// Relative residual target of the Krylov solve.
    pub tol: f64,
    pub max_iter: usize,
    /// Relative coercivity margin below which a c0 < 0 system is declared
    /// numerically singular.
    pub margin_tol: f64,
}

impl DirichletProblem {
    pub fn new(c0: f64, rhs: RhsSpec, bdry: BoundaryValues) -> Self {
        DirichletProblem {
            c0,
            rhs,
            bdry,
            tol: 1e-10,
            max_iter: 50_000,
            margin_tol: 1e-2,
        }
    }

    /// Laplace f = n f in Omega, f = c on the boundary.
    pub fn growth_problem(dim: usize, boundary_value: f64) -> Self {
        Self::new(
            dim as f64,
            RhsSpec::Constant(0.0),
            BoundaryValues::Constant(boundary_value),
        )
    }

    /// Laplace f + K n f = 1 in Omega, f = 0 on the boundary.
    pub fn torsion_problem(curvature: f64, dim: usize) -> Self {
        Self::new(
            -curvature * dim as f64,
            RhsSpec::Constant(-1.0),
            BoundaryValues::Constant(0.0),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    PositiveDefinite,
    IndefiniteDetected,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solution: ScalarField,
    /// Final relative algebraic residual of the reduced system.
    pub algebraic_residual: f64,
    pub iterations: usize,
    pub definiteness: Definiteness,
    pub c0: f64,
    /// Set when the boundary condition is a constant.
    pub boundary_constant: Option<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Jacobi-preconditioned CG; returns (x, iterations, relative residual).
fn cg(
    a: &SparseSym,
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, usize, f64)> {
    let n = a.n;
    let bnorm = dot(b, b).sqrt();
    if bnorm == 0.0 {
        return Ok((vec![0.0; n], 0, 0.0));
    }
    let diag = a.diag();
    let precond = |r: &[f64]| -> Vec<f64> {
        r.iter()
            .zip(&diag)
            .map(|(ri, di)| if *di != 0.0 { ri / di } else { *ri })
            .collect()
    };
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z = precond(&r);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut history = Vec::new();
    for it in 0..max_iter {
        let ap = a.apply(&p);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            return Err(Error::Indefinite {
                iteration: it,
                curvature: pap,
            });
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rel = dot(&r, &r).sqrt() / bnorm;
        history.push(rel);
        if rel <= tol {
            return Ok((x, it + 1, rel));
        }
        z = precond(&r);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let tail = history.len().saturating_sub(8);
    Err(Error::IterationLimit {
        iterations: max_iter,
        residual: *history.last().unwrap_or(&f64::NAN),
        history: history[tail..].to_vec(),
    })
}

/// Smallest generalized eigenvalue of (S, M) by inverse power iteration with
/// CG inner solves. Diagnostic quality (relative accuracy ~ 1e-4 on the
/// meshes used here); deterministic.
pub fn estimate_smallest_eigenvalue(s: &SparseSym, m: &SparseSym, outer_iters: usize) -> Result<f64> {
    let n = s.n;
    let mut x = vec![1.0; n];
    let mut lambda = 0.0;
    for _ in 0..outer_iters {
        let mx = m.apply(&x);
        let norm = dot(&x, &mx).sqrt();
        let mx_n: Vec<f64> = mx.iter().map(|v| v / norm).collect();
        let (y, _, _) = cg(s, &mx_n, 1e-8, 20_000)?;
        let my = m.apply(&y);
        lambda = dot(&y, &mx_n) / dot(&y, &my);
        x = y;
    }
    Ok(lambda)
}

/// Solve the Dirichlet problem on the mesh.
pub fn solve_dirichlet(
    mesh: &DomainMesh,
    model: &SpaceFormModel,
    prob: &DirichletProblem,
) -> Result<SolveReport> {
    if !(prob.tol > 0.0 && prob.tol <= 1e-6) {
        return Err(Error::UnsupportedConfiguration(format!(
            "solver tolerance {} outside (0, 1e-6]",
            prob.tol
        )));
    }
    if !prob.c0.is_finite() {
        return Err(Error::UnsupportedConfiguration("c0 is not finite".into()));
    }
    let nv = mesh.vertex_count();
    let forms = assemble_laplace_beltrami(mesh, model, prob.c0);
    let a = forms.system();

    // Full-length boundary-value vector (zero at interior vertices).
    let mut f_b = vec![0.0; nv];
    let (boundary_constant, bvals): (Option<f64>, Vec<f64>) = match &prob.bdry {
        BoundaryValues::Constant(c) => (Some(*c), vec![*c; mesh.boundary_loop.len()]),
        BoundaryValues::PerVertex(v) => {
            if v.len() != mesh.boundary_loop.len() {
                return Err(Error::FieldSizeMismatch {
                    expected: mesh.boundary_loop.len(),
                    got: v.len(),
                });
            }
            (None, v.clone())
        }
    };
    for (pos, &v) in mesh.boundary_loop.iter().enumerate() {
        f_b[v] = bvals[pos];
    }

    let interior: Vec<usize> = (0..nv).filter(|&v| !mesh.is_boundary_vertex(v)).collect();

    // Load vector: M * rhs (metric-weighted P1 load).
    let load = match &prob.rhs {
        RhsSpec::Constant(r) => {
            let ones = vec![*r; nv];
            forms.mass.apply(&ones)
        }
        RhsSpec::Field(f) => {
            if f.len() != nv {
                return Err(Error::FieldSizeMismatch {
                    expected: nv,
                    got: f.len(),
                });
            }
            forms.mass.apply(f)
        }
    };
    let lift = a.apply(&f_b);
    let b_reduced: Vec<f64> = interior.iter().map(|&v| load[v] - lift[v]).collect();
    let a_reduced = a.restrict(&interior);

    // Coercivity margin pre-check for negative shifts.
    if prob.c0 < 0.0 {
        let s_reduced = forms.stiffness.restrict(&interior);
        let m_reduced = forms.mass.restrict(&interior);
        let lam1 = estimate_smallest_eigenvalue(&s_reduced, &m_reduced, 16)?;
        let shift = -prob.c0;
        let margin = (lam1 - shift) / shift;
        if margin <= prob.margin_tol {
            return Err(Error::NearSingular {
                eigenvalue_estimate: lam1,
                shift,
                margin,
                margin_tol: prob.margin_tol,
            });
        }
    }

    let (x, iterations, residual) = cg(&a_reduced, &b_reduced, prob.tol, prob.max_iter)?;
    let mut values = f_b;
    for (k, &v) in interior.iter().enumerate() {
        values[v] = x[k];
    }
    Ok(SolveReport {
        solution: ScalarField::new(values, FieldTag::Solution),
        algebraic_residual: residual,
        iterations,
        definiteness: Definiteness::PositiveDefinite,
        c0: prob.c0,
        boundary_constant,
    })
}
