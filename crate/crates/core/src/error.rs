//! Error type shared by the whole crate.

use thiserror::Error;

/// Errors produced by geometry kernels, mesh generation, discrete operators,
/// the elliptic solver and the verification drivers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A chart point lies outside the model's chart domain.
    #[error("point outside chart domain: |x| = {radius:.6} exceeds chart radius {chart_radius}")]
    OutsideChart { radius: f64, chart_radius: f64 },

    /// Evaluation at the base point where r = 0 makes cn/sn singular.
    #[error("evaluation at the base point: r = 0 is a pole of cn_K/sn_K")]
    BasePointSingularity,

    /// A custom-metric operation that needs a geodesic distance field was
    /// called without one.
    #[error("custom metric has no distance field; run the eikonal solver first")]
    MissingDistanceField,

    /// A radial profile that is non-positive somewhere.
    #[error("invalid radial profile: min rho = {min_rho:.6} at theta = {theta:.4}")]
    InvalidProfile { min_rho: f64, theta: f64 },

    /// A radial profile that leaves the chart domain.
    #[error("radial profile exceeds chart: max rho = {max_rho:.6}, chart radius {chart_radius}")]
    ProfileExceedsChart { max_rho: f64, chart_radius: f64 },

    /// Requested configuration is outside the supported feature set.
    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    /// A boundary facet with numerically vanishing tangent.
    #[error("degenerate boundary facet {facet}: length {length:.3e}")]
    DegenerateFacet { facet: usize, length: f64 },

    /// A vertex patch too small for the quadratic least-squares fit.
    #[error("recovery patch at vertex {vertex} has {got} samples, need at least {need}")]
    RecoveryPatchTooSmall { vertex: usize, got: usize, need: usize },

    /// Field length does not match the mesh it is used with.
    #[error("field has {got} values but the mesh has {expected} vertices")]
    FieldSizeMismatch { expected: usize, got: usize },

    /// Scheme/region/integrand mismatch in quadrature.
    #[error("quadrature usage error: {0}")]
    QuadratureMismatch(String),

    /// The Krylov iteration detected a non-positive curvature direction.
    #[error("indefinite system: p'Ap = {curvature:.6e} at iteration {iteration}")]
    Indefinite { iteration: usize, curvature: f64 },

    /// The zeroth-order shift cancels the operator's coercivity to within the
    /// margin tolerance; the discrete system is numerically singular.
    #[error("near-singular system: smallest eigenvalue estimate {eigenvalue_estimate:.6e} vs shift {shift:.6e} (relative margin {margin:.3e} <= {margin_tol:.1e})")]
    NearSingular {
        eigenvalue_estimate: f64,
        shift: f64,
        margin: f64,
        margin_tol: f64,
    },

    /// The iterative solver hit its iteration cap. Carries the tail of the
    /// relative-residual history.
    #[error("solver did not converge in {iterations} iterations; last relative residual {residual:.3e}")]
    IterationLimit {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },

    /// Origin (the base point) is not a mesh vertex / not inside the mesh.
    #[error("base point is not inside the mesh: {0}")]
    BasePointOutsideMesh(String),
}

pub type Result<T> = std::result::Result<T, Error>;
