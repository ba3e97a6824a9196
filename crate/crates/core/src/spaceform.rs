//! Exact ambient geometry for the three space forms and custom conformal
//! metrics.
//!
//! Every model is conformal to a flat chart: g = lambda(x)^2 * (flat metric).
//! The three space forms use the Poincare ball (K = -1, lambda = 2/(1-|x|^2)),
//! the stereographic hemisphere chart (K = +1, lambda = 2/(1+|x|^2)) and the
//! identity chart (K = 0). Custom metrics supply lambda = e^phi with phi a
//! polynomial coefficient table, or the built-in closed-form Poincare factor.
//!
//! The base point of all radial quantities (geodesic distance r, potential V)
//! is pinned to the chart origin, which keeps r and V closed-form:
//! r = 2 artanh|x| (hyperbolic), 2 arctan|x| (spherical), |x| (euclidean),
//! and V = cosh r, cos r, 1 respectively.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::poly::Poly2;

/// Custom conformal factor lambda = e^phi.
#[derive(Debug, Clone, PartialEq)]
pub enum CustomFactor {
    /// phi given as a polynomial coefficient table, differentiated exactly.
    Poly(Poly2),
    /// phi = ln(2/(1-|x|^2)): the hyperbolic factor expressed as a custom
    /// metric. Used to cross-check the custom-metric code paths against the
    /// closed-form hyperbolic kernel.
    PoincareLog,
}

/// Ambient geometry selector.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceFormKind {
    Euclidean,
    Hyperbolic,
    Spherical,
    Custom(CustomFactor),
}

/// An n-dimensional conformally-flat ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceFormModel {
    pub kind: SpaceFormKind,
    pub dim: usize,
}

/// Metric data at one chart point.
#[derive(Debug, Clone)]
pub struct MetricSample {
    pub point: DVector<f64>,
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    /// christoffels[k] is the matrix Gamma^k_{ij}.
    pub christoffels: Vec<DMatrix<f64>>,
    /// sqrt(det g) = lambda^n.
    pub vol_density: f64,
}

/// Potential data (V, its derivatives, geodesic distance) at one chart point.
#[derive(Debug, Clone)]
pub struct PotentialSample {
    pub v: f64,
    /// Chart partial derivatives of V.
    pub grad_v: DVector<f64>,
    /// Covariant Hessian components (nabla^2 V)_{ij} in the chart frame.
    pub hess_v: DMatrix<f64>,
    /// Geodesic distance to the base point (chart origin).
    pub r: f64,
    /// Curvature constant of the model.
    pub curvature: f64,
}

/// Fast-path potential data for the 2-D pipelines.
#[derive(Debug, Clone, Copy)]
pub struct Potential2 {
    pub v: f64,
    /// Chart partials of V.
    pub grad: [f64; 2],
    /// Covariant Hessian of V.
    pub hess_cov: [[f64; 2]; 2],
    pub r: f64,
    /// Chart partials of r (zero vector at the origin).
    pub grad_r: [f64; 2],
    /// dV/dr along the radial direction.
    pub dv_dr: f64,
}

fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

impl SpaceFormModel {
    pub fn euclidean(dim: usize) -> Self {
        assert!(dim >= 2);
        SpaceFormModel {
            kind: SpaceFormKind::Euclidean,
            dim,
        }
    }

    pub fn hyperbolic(dim: usize) -> Self {
        assert!(dim >= 2);
        SpaceFormModel {
            kind: SpaceFormKind::Hyperbolic,
            dim,
        }
    }

    pub fn spherical(dim: usize) -> Self {
        assert!(dim >= 2);
        SpaceFormModel {
            kind: SpaceFormKind::Spherical,
            dim,
        }
    }

    /// Custom conformal metric on the 2-D chart.
    pub fn custom(factor: CustomFactor) -> Self {
        SpaceFormModel {
            kind: SpaceFormKind::Custom(factor),
            dim: 2,
        }
    }

    pub fn is_custom(&self) -> bool {
        matches!(self.kind, SpaceFormKind::Custom(_))
    }

    /// Curvature constant K for the space forms; None for custom metrics.
    pub fn curvature_constant(&self) -> Option<f64> {
        match self.kind {
            SpaceFormKind::Euclidean => Some(0.0),
            SpaceFormKind::Hyperbolic => Some(-1.0),
            SpaceFormKind::Spherical => Some(1.0),
            SpaceFormKind::Custom(_) => None,
        }
    }

    /// Chart radius: 1 for the ball models, infinite for the whole plane.
    pub fn chart_radius(&self) -> f64 {
        match &self.kind {
            SpaceFormKind::Euclidean | SpaceFormKind::Custom(CustomFactor::Poly(_)) => {
                f64::INFINITY
            }
            SpaceFormKind::Hyperbolic
            | SpaceFormKind::Spherical
            | SpaceFormKind::Custom(CustomFactor::PoincareLog) => 1.0,
        }
    }

    pub fn check_chart(&self, x: &[f64]) -> Result<()> {
        let s = norm_sq(x).sqrt();
        let cr = self.chart_radius();
        if s < cr {
            Ok(())
        } else {
            Err(Error::OutsideChart {
                radius: s,
                chart_radius: cr,
            })
        }
    }

    /// Conformal factor lambda at a chart point.
    pub fn lambda(&self, x: &[f64]) -> f64 {
        let rho = norm_sq(x);
        match &self.kind {
            SpaceFormKind::Euclidean => 1.0,
            SpaceFormKind::Hyperbolic => 2.0 / (1.0 - rho),
            SpaceFormKind::Spherical => 2.0 / (1.0 + rho),
            SpaceFormKind::Custom(CustomFactor::Poly(phi)) => phi.eval(x[0], x[1]).exp(),
            SpaceFormKind::Custom(CustomFactor::PoincareLog) => 2.0 / (1.0 - rho),
        }
    }

    /// Chart gradient of ln(lambda).
    pub fn ln_lambda_grad(&self, x: &[f64]) -> Vec<f64> {
        let rho = norm_sq(x);
        match &self.kind {
            SpaceFormKind::Euclidean => vec![0.0; x.len()],
            SpaceFormKind::Hyperbolic | SpaceFormKind::Custom(CustomFactor::PoincareLog) => {
                let lam = 2.0 / (1.0 - rho);
                x.iter().map(|&xi| lam * xi).collect()
            }
            SpaceFormKind::Spherical => {
                let lam = 2.0 / (1.0 + rho);
                x.iter().map(|&xi| -lam * xi).collect()
            }
            SpaceFormKind::Custom(CustomFactor::Poly(phi)) => phi.grad(x[0], x[1]).to_vec(),
        }
    }

    /// Chart second partials of ln(lambda).
    pub fn ln_lambda_hess(&self, x: &[f64]) -> DMatrix<f64> {
        let n = x.len();
        let rho = norm_sq(x);
        match &self.kind {
            SpaceFormKind::Euclidean => DMatrix::zeros(n, n),
            SpaceFormKind::Hyperbolic | SpaceFormKind::Custom(CustomFactor::PoincareLog) => {
                let lam = 2.0 / (1.0 - rho);
                DMatrix::from_fn(n, n, |i, j| {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    lam * delta + lam * lam * x[i] * x[j]
                })
            }
            SpaceFormKind::Spherical => {
                let lam = 2.0 / (1.0 + rho);
                DMatrix::from_fn(n, n, |i, j| {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    -lam * delta + lam * lam * x[i] * x[j]
                })
            }
            SpaceFormKind::Custom(CustomFactor::Poly(phi)) => {
                let h = phi.hess(x[0], x[1]);
                DMatrix::from_fn(2, 2, |i, j| h[i][j])
            }
        }
    }

    /// Flat Laplacian of ln(lambda); enters the Gauss curvature of 2-D
    /// conformal metrics.
    pub fn flat_laplacian_ln_lambda(&self, x: &[f64]) -> f64 {
        let n = x.len() as f64;
        let rho = norm_sq(x);
        match &self.kind {
            SpaceFormKind::Euclidean => 0.0,
            SpaceFormKind::Hyperbolic | SpaceFormKind::Custom(CustomFactor::PoincareLog) => {
                let lam = 2.0 / (1.0 - rho);
                n * lam + lam * lam * rho
            }
            SpaceFormKind::Spherical => {
                let lam = 2.0 / (1.0 + rho);
                -n * lam + lam * lam * rho
            }
            SpaceFormKind::Custom(CustomFactor::Poly(phi)) => phi.laplacian().eval(x[0], x[1]),
        }
    }

    /// Gauss curvature of the 2-D conformal metric: -lambda^-2 * flat
    /// Laplacian of ln(lambda). Exact for polynomial and built-in factors.
    pub fn gauss_curvature2(&self, x: [f64; 2]) -> Result<f64> {
        if self.dim != 2 {
            return Err(Error::UnsupportedConfiguration(format!(
                "Gauss curvature needs dim = 2, model has dim = {}",
                self.dim
            )));
        }
        let lam = self.lambda(&x);
        Ok(-self.flat_laplacian_ln_lambda(&x) / (lam * lam))
    }

    /// Metric tensor, inverse, Christoffel symbols and volume density at one
    /// chart point. For a conformal metric
    /// Gamma^k_{ij} = delta_ik d_j(ln lambda) + delta_jk d_i(ln lambda)
    ///              - delta_ij d_k(ln lambda).
    pub fn metric_at(&self, x: &[f64]) -> Result<MetricSample> {
        assert_eq!(x.len(), self.dim, "chart point has wrong dimension");
        self.check_chart(x)?;
        let n = self.dim;
        let lam = self.lambda(x);
        let w = self.ln_lambda_grad(x);
        let g = DMatrix::from_fn(n, n, |i, j| if i == j { lam * lam } else { 0.0 });
        let g_inv = DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 / (lam * lam) } else { 0.0 });
        let christoffels = (0..n)
            .map(|k| {
                DMatrix::from_fn(n, n, |i, j| {
                    let mut v = 0.0;
                    if i == k {
                        v += w[j];
                    }
                    if j == k {
                        v += w[i];
                    }
                    if i == j {
                        v -= w[k];
                    }
                    v
                })
            })
            .collect();
        Ok(MetricSample {
            point: DVector::from_column_slice(x),
            g,
            g_inv,
            christoffels,
            vol_density: lam.powi(n as i32),
        })
    }

    /// Geodesic distance from the chart origin to chart radius s.
    pub fn geodesic_of_chart(&self, s: f64) -> f64 {
        match self.kind {
            SpaceFormKind::Euclidean => s,
            SpaceFormKind::Hyperbolic => 2.0 * s.atanh(),
            SpaceFormKind::Spherical => 2.0 * s.atan(),
            SpaceFormKind::Custom(_) => f64::NAN,
        }
    }

    /// Chart radius of the geodesic sphere of radius R about the origin.
    pub fn chart_of_geodesic(&self, r: f64) -> f64 {
        match self.kind {
            SpaceFormKind::Euclidean => r,
            SpaceFormKind::Hyperbolic => (r / 2.0).tanh(),
            SpaceFormKind::Spherical => (r / 2.0).tan(),
            SpaceFormKind::Custom(_) => f64::NAN,
        }
    }

    /// sn_K: sinh, identity or sin.
    pub fn sn(&self, r: f64) -> f64 {
        match self.kind {
            SpaceFormKind::Euclidean => r,
            SpaceFormKind::Hyperbolic => r.sinh(),
            SpaceFormKind::Spherical => r.sin(),
            SpaceFormKind::Custom(_) => r.sinh(), // custom screening assumes Sect >= -1
        }
    }

    /// cn_K = sn_K'.
    pub fn cn(&self, r: f64) -> f64 {
        match self.kind {
            SpaceFormKind::Euclidean => 1.0,
            SpaceFormKind::Hyperbolic => r.cosh(),
            SpaceFormKind::Spherical => r.cos(),
            SpaceFormKind::Custom(_) => r.cosh(),
        }
    }

    /// cn_K(r)/sn_K(r): the mean curvature of the geodesic sphere of radius r.
    pub fn comparison_ratio(&self, r: f64) -> f64 {
        self.cn(r) / self.sn(r)
    }

    /// Geodesic distance to the origin, the potential V and its analytic
    /// derivatives. Custom metrics have no closed-form distance; their
    /// distance field comes from the eikonal solver.
    pub fn distance_and_potential(&self, x: &[f64]) -> Result<PotentialSample> {
        assert_eq!(x.len(), self.dim, "chart point has wrong dimension");
        self.check_chart(x)?;
        if self.is_custom() {
            return Err(Error::MissingDistanceField);
        }
        let n = self.dim;
        let rho = norm_sq(x);
        let s = rho.sqrt();
        let k = self.curvature_constant().unwrap();
        let lam = self.lambda(x);
        let (r, v) = match self.kind {
            SpaceFormKind::Euclidean => (s, 1.0),
            SpaceFormKind::Hyperbolic => (2.0 * s.atanh(), (1.0 + rho) / (1.0 - rho)),
            SpaceFormKind::Spherical => (2.0 * s.atan(), (1.0 - rho) / (1.0 + rho)),
            SpaceFormKind::Custom(_) => unreachable!(),
        };
        // Chart partials of V: 0, lambda^2 x, -lambda^2 x.
        let grad_v = match self.kind {
            SpaceFormKind::Euclidean => DVector::zeros(n),
            SpaceFormKind::Hyperbolic => DVector::from_iterator(n, x.iter().map(|&xi| lam * lam * xi)),
            SpaceFormKind::Spherical => {
                DVector::from_iterator(n, x.iter().map(|&xi| -lam * lam * xi))
            }
            SpaceFormKind::Custom(_) => unreachable!(),
        };
        // Covariant Hessian from chart second partials minus the Christoffel
        // correction; this is an independent algebraic route that should land
        // on -K V g.
        let sample = self.metric_at(x)?;
        let hess_chart: DMatrix<f64> = match self.kind {
            SpaceFormKind::Euclidean => DMatrix::zeros(n, n),
            SpaceFormKind::Hyperbolic => DMatrix::from_fn(n, n, |i, j| {
                let delta = if i == j { 1.0 } else { 0.0 };
                lam * lam * delta + 2.0 * lam.powi(3) * x[i] * x[j]
            }),
            SpaceFormKind::Spherical => DMatrix::from_fn(n, n, |i, j| {
                let delta = if i == j { 1.0 } else { 0.0 };
                -lam * lam * delta + 2.0 * lam.powi(3) * x[i] * x[j]
            }),
            SpaceFormKind::Custom(_) => unreachable!(),
        };
        let hess_v = DMatrix::from_fn(n, n, |i, j| {
            let mut corr = 0.0;
            for kk in 0..n {
                corr += sample.christoffels[kk][(i, j)] * grad_v[kk];
            }
            hess_chart[(i, j)] - corr
        });
        Ok(PotentialSample {
            v,
            grad_v,
            hess_v,
            r,
            curvature: k,
        })
    }

    /// Largest-magnitude eigenvalue of
    /// nabla^2 r - (cn_K(r)/sn_K(r)) (g - dr (x) dr),
    /// the deficit in the Hessian comparison bound. Space forms achieve
    /// equality, so the result is pure roundoff.
    pub fn hessian_comparison_residual(&self, x: &[f64]) -> Result<f64> {
        assert_eq!(x.len(), self.dim, "chart point has wrong dimension");
        self.check_chart(x)?;
        if self.is_custom() {
            return Err(Error::UnsupportedConfiguration(
                "Hessian comparison residual is defined for space-form modes".into(),
            ));
        }
        let rho = norm_sq(x);
        let s = rho.sqrt();
        if s < 1e-14 {
            return Err(Error::BasePointSingularity);
        }
        let n = self.dim;
        let sample = self.metric_at(x)?;
        let r = self.geodesic_of_chart(s);
        // dr_i = q x_i with q = lambda/s; closed-form q'.
        let (q, qp) = match self.kind {
            SpaceFormKind::Euclidean => (1.0 / s, -1.0 / (s * s)),
            SpaceFormKind::Hyperbolic => {
                let d = s - s * rho;
                (2.0 / d, -2.0 * (1.0 - 3.0 * rho) / (d * d))
            }
            SpaceFormKind::Spherical => {
                let d = s + s * rho;
                (2.0 / d, -2.0 * (1.0 + 3.0 * rho) / (d * d))
            }
            SpaceFormKind::Custom(_) => unreachable!(),
        };
        let dr: Vec<f64> = x.iter().map(|&xi| q * xi).collect();
        let ratio = self.comparison_ratio(r);
        let m = DMatrix::from_fn(n, n, |i, j| {
            let delta = if i == j { 1.0 } else { 0.0 };
            let hess_chart = q * delta + (qp / s) * x[i] * x[j];
            let mut corr = 0.0;
            for kk in 0..n {
                corr += sample.christoffels[kk][(i, j)] * dr[kk];
            }
            let hess_cov = hess_chart - corr;
            hess_cov - ratio * (sample.g[(i, j)] - dr[i] * dr[j])
        });
        let eig = nalgebra::linalg::SymmetricEigen::new(m);
        Ok(eig
            .eigenvalues
            .iter()
            .fold(0.0f64, |acc, &e| acc.max(e.abs())))
    }

    /// 2-D fast path for the potential and distance data.
    pub fn potential2(&self, x: [f64; 2]) -> Result<Potential2> {
        self.check_chart(&x)?;
        if self.is_custom() {
            return Err(Error::MissingDistanceField);
        }
        let rho = x[0] * x[0] + x[1] * x[1];
        let s = rho.sqrt();
        let lam = self.lambda(&x);
        let grad_r = if s < 1e-300 {
            [0.0, 0.0]
        } else {
            // Chart partials of r are lambda x / s in every space form.
            [lam * x[0] / s, lam * x[1] / s]
        };
        let (r, v, dv_dr, c) = match self.kind {
            SpaceFormKind::Euclidean => (s, 1.0, 0.0, 0.0),
            SpaceFormKind::Hyperbolic => {
                let r = 2.0 * s.atanh();
                ((r), (1.0 + rho) / (1.0 - rho), r.sinh(), lam * lam)
            }
            SpaceFormKind::Spherical => {
                let r = 2.0 * s.atan();
                (r, (1.0 - rho) / (1.0 + rho), -r.sin(), -lam * lam)
            }
            SpaceFormKind::Custom(_) => unreachable!(),
        };
        let grad = [c * x[0], c * x[1]];
        // Covariant Hessian of V is -K V g in space forms; the chart-algebra
        // route in distance_and_potential cross-checks this closed form.
        let k = self.curvature_constant().unwrap();
        let hess_cov = {
            let coeff = -k * v * lam * lam;
            [[coeff, 0.0], [0.0, coeff]]
        };
        Ok(Potential2 {
            v,
            grad,
            hess_cov,
            r,
            grad_r,
            dv_dr,
        })
    }

    /// Christoffel symbols on the 2-D chart, christoffel2(x)[k][i][j].
    pub fn christoffel2(&self, x: [f64; 2]) -> [[[f64; 2]; 2]; 2] {
        let w = self.grad_ln_lambda2(x);
        let mut gamma = [[[0.0; 2]; 2]; 2];
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    let mut v = 0.0;
                    if i == k {
                        v += w[j];
                    }
                    if j == k {
                        v += w[i];
                    }
                    if i == j {
                        v -= w[k];
                    }
                    gamma[k][i][j] = v;
                }
            }
        }
        gamma
    }

    pub fn grad_ln_lambda2(&self, x: [f64; 2]) -> [f64; 2] {
        let g = self.ln_lambda_grad(&x);
        [g[0], g[1]]
    }
}
