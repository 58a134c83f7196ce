use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::kernel::KernelConfig;

/// Learned membership-mapping model: everything prediction needs plus the
/// training-side matrix B.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    /// M×p; column j maps features G(x) to output j.
    pub alpha: DMatrix<f64>,
    pub w: Vec<f64>,
    /// M×n inducing points, one per row.
    pub a: DMatrix<f64>,
    pub sigma2: f64,
    pub sigma_x2: f64,
    /// M×N; `None` when the model was saved without it.
    pub b: Option<DMatrix<f64>>,
    pub nu: f64,
    /// Number of training samples N.
    pub n_samples: usize,
}

impl ModelParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha: DMatrix<f64>,
        w: Vec<f64>,
        a: DMatrix<f64>,
        sigma2: f64,
        sigma_x2: f64,
        b: Option<DMatrix<f64>>,
        nu: f64,
        n_samples: usize,
    ) -> Result<Self> {
        let model = Self { alpha, w, a, sigma2, sigma_x2, b, nu, n_samples };
        model.validate()?;
        Ok(model)
    }

    /// Input dimension n.
    pub fn n_inputs(&self) -> usize {
        self.w.len()
    }

    /// Output dimension p.
    pub fn n_outputs(&self) -> usize {
        self.alpha.ncols()
    }

    /// Number of inducing points M.
    pub fn n_inducing(&self) -> usize {
        self.a.nrows()
    }

    pub fn kernel_config(&self) -> KernelConfig {
        KernelConfig { sigma2: self.sigma2, sigma_x2: self.sigma_x2, w: self.w.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Validation(msg));
        let (m, n) = (self.a.nrows(), self.a.ncols());
        if m == 0 {
            return bad("model has no inducing points".into());
        }
        if n != self.w.len() {
            return bad(format!("inducing points have {n} columns but w has {} entries", self.w.len()));
        }
        if self.alpha.nrows() != m {
            return bad(format!("alpha has {} rows, expected M = {m}", self.alpha.nrows()));
        }
        if self.alpha.ncols() == 0 {
            return bad("alpha has no output columns".into());
        }
        if let Some(b) = &self.b {
            if b.nrows() != m || b.ncols() != self.n_samples {
                return bad(format!("B is {}x{}, expected {m}x{}", b.nrows(), b.ncols(), self.n_samples));
            }
            if b.iter().any(|v| !v.is_finite()) {
                return bad("B has non-finite entries".into());
            }
        }
        if !(self.nu > 2.0) || !self.nu.is_finite() {
            return bad(format!("nu must exceed 2, got {}", self.nu));
        }
        if self.alpha.iter().any(|v| !v.is_finite()) {
            return bad("alpha has non-finite entries".into());
        }
        if self.a.iter().any(|v| !v.is_finite()) {
            return bad("inducing points have non-finite entries".into());
        }
        self.kernel_config().validate().map_err(|e| Error::Validation(e.to_string()))
    }

    #[cfg(test)]
    pub(crate) fn zeros_for_tests(a: DMatrix<f64>, w: Vec<f64>, sigma2: f64, sigma_x2: f64, p: usize) -> Self {
        let m = a.nrows();
        Self::new(DMatrix::zeros(m, p), w, a, sigma2, sigma_x2, None, 5.0, 1).unwrap()
    }
}
