//! Symmetric positive-definite factorization helpers.
//!
//! Every "inverse times" expression in the crate goes through [`SpdFactor`];
//! no explicit inverse is formed.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{numeric, Result};

/// Relative diagonal jitter applied before factorizing kernel matrices.
pub const JITTER: f64 = 1e-8;

/// Cholesky factor of a symmetric positive-definite matrix.
#[derive(Clone, Debug)]
pub struct SpdFactor {
    chol: Cholesky<f64, Dyn>,
}

impl SpdFactor {
    /// Factorizes `m` as given. Fails if `m` is not numerically positive-definite.
    pub fn new(m: &DMatrix<f64>, what: &str) -> Result<Self> {
        if !m.is_square() {
            return Err(numeric(format!("{what}: matrix is {}x{}, not square", m.nrows(), m.ncols())));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(numeric(format!("{what}: matrix has non-finite entries")));
        }
        Cholesky::new(m.clone()).map(|chol| Self { chol }).ok_or_else(|| {
            let diag_min = m.diagonal().min();
            let diag_max = m.diagonal().max();
            numeric(format!(
                "{what}: {}x{} matrix is not positive-definite (diagonal range [{diag_min:e}, {diag_max:e}])",
                m.nrows(),
                m.ncols()
            ))
        })
    }

    /// Adds `jitter` to the diagonal of a copy of `m`, then factorizes.
    pub fn with_jitter(m: &DMatrix<f64>, jitter: f64, what: &str) -> Result<Self> {
        let mut j = m.clone();
        for i in 0..j.nrows() {
            j[(i, i)] += jitter;
        }
        Self::new(&j, what)
    }

    pub fn dim(&self) -> usize {
        self.chol.l_dirty().nrows()
    }

    pub fn solve(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        self.chol.solve(b)
    }

    pub fn solve_vec(&self, b: &DVector<f64>) -> DVector<f64> {
        self.chol.solve(b)
    }

    /// bᵀ M⁻¹ b via one triangular solve: ‖L⁻¹ b‖².
    pub fn quad_form(&self, b: &DVector<f64>) -> f64 {
        let mut z = b.clone();
        self.chol.l_dirty().solve_lower_triangular_mut(&mut z);
        z.norm_squared()
    }

    pub fn ln_det(&self) -> f64 {
        2.0 * self.chol.l_dirty().diagonal().iter().map(|d| d.ln()).sum::<f64>()
    }

    /// Tr(M⁻¹ B).
    pub fn trace_solve(&self, b: &DMatrix<f64>) -> f64 {
        self.solve(b).trace()
    }
}

/// Largest absolute asymmetry |m_ij − m_ji|.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}
