//! Student-t membership-mapping regression.
//!
//! A membership-mapping represents a function through a Student-t shaped
//! membership function over its output values, with covariance given by a
//! squared-exponential kernel. This crate learns such mappings from data in
//! closed form over a set of inducing points, predicts with them, and ships
//! numerical oracles for the identities the construction relies on.
//!
//! ```
//! use membership_mapping::{fit, predict, Dataset, HyperParams};
//! use nalgebra::DMatrix;
//!
//! let x = DMatrix::from_fn(40, 1, |i, _| i as f64 / 39.0);
//! let y = x.map(|v| (2.0 * v).sin());
//! let data = Dataset::new(x, y).unwrap();
//! let (model, report) = fit(&data, &HyperParams::new(10), None).unwrap();
//! assert!(report.converged);
//! let y_hat = predict(&[0.5], &model).unwrap();
//! assert!((y_hat[0] - 1f64.sin()).abs() < 0.1);
//! ```

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod auxiliary;
pub mod error;
pub mod kernel;
pub mod learner;
pub mod linalg;
pub mod membership;
pub mod model;
pub mod oracle;
pub mod predictor;
pub mod quadrature;
pub mod special;
pub mod store;

pub use auxiliary::{kmeans_centroids, width_heuristic, KMeansConfig};
pub use error::{Error, Result};
pub use kernel::{
    compute_phi, compute_psi, compute_xi, eval_kernel, feature_row, gram_matrix, DesignMatrices, KernelConfig,
};
pub use learner::{fit, Dataset, FitReport, HyperParams, Priors, VariationalState};
pub use membership::{
    conditional_eval, conditional_membership, membership_eval, normalization_constant, weighted_average,
    ConditionalMembership, StudentTMembership,
};
pub use model::ModelParams;
pub use predictor::{predict, predict_batch, predict_jacobian, PredictionBatch};
pub use special::digamma;
