//! Numerical workbench for integral identities and inequalities of weighted
//! Reilly type on compact 2-D domains in space forms and conformal metrics.
//!
//! The crate discretizes star-shaped domains in the Poincare disk, the
//! stereographic hemisphere chart, the Euclidean plane or a user-supplied
//! conformal metric; solves the associated elliptic Dirichlet problems; and
//! assembles, term by term, the weighted Reilly identity, Heintze-Karcher
//! type inequalities, Minkowski identities, the Alexandrov constant-mean-
//! curvature chain and Obata-type rigidity residuals, with mesh-convergence
//! evidence for each claim.

pub mod boundary;
pub mod elliptic;
pub mod error;
pub mod field;
pub mod laplace;
pub mod mesh;
pub mod poly;
pub mod quadrature;
pub mod recovery;
pub mod spaceform;
pub mod verify;

pub use error::{Error, Result};
