//! ŷ(x*) = αᵀ G(x*)ᵀ.

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Result};
use crate::kernel::{feature_row, feature_row_jacobian};
use crate::model::ModelParams;

/// Inputs (Q×n) with their predictions (Q×p).
#[derive(Clone, Debug, PartialEq)]
pub struct PredictionBatch {
    pub inputs: DMatrix<f64>,
    pub outputs: DMatrix<f64>,
}

pub fn predict(x_star: &[f64], model: &ModelParams) -> Result<DVector<f64>> {
    let g = DVector::from_vec(feature_row(x_star, model)?);
    Ok(model.alpha.tr_mul(&g))
}

pub fn predict_batch(x_star: &DMatrix<f64>, model: &ModelParams) -> Result<PredictionBatch> {
    if x_star.ncols() != model.n_inputs() {
        return Err(invalid(format!("inputs have {} columns, model expects n = {}", x_star.ncols(), model.n_inputs())));
    }
    let mut outputs = DMatrix::zeros(x_star.nrows(), model.n_outputs());
    let mut row = vec![0.0; x_star.ncols()];
    for q in 0..x_star.nrows() {
        for (k, v) in row.iter_mut().enumerate() {
            *v = x_star[(q, k)];
        }
        outputs.row_mut(q).copy_from(&predict(&row, model)?.transpose());
    }
    Ok(PredictionBatch { inputs: x_star.clone(), outputs })
}

/// ∂ŷ_j/∂x_k as a p×n matrix.
pub fn predict_jacobian(x_star: &[f64], model: &ModelParams) -> Result<DMatrix<f64>> {
    Ok(model.alpha.transpose() * feature_row_jacobian(x_star, model)?)
}
