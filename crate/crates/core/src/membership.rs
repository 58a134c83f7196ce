//! Student-t membership functions, the interpolating conditional membership
//! μ_{f;u}, and membership-weighted averages.
//!
//! A Student-t membership with mean m, covariance K and degrees of freedom ν
//! over R^d is
//!
//! ```text
//! ζ(y) = (1 + (y − m)ᵀ K⁻¹ (y − m) / (ν − 2))^{−(ν + d)/2}
//! ```
//!
//! It peaks at 1 for y = m and never vanishes. Normalized by its integral it
//! is the multivariate-t density with covariance K (scale ((ν−2)/ν)K).
//! Everything is evaluated in log space and exponentiated last.

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, numeric, Error, Result};
use crate::kernel::{gram_matrix, KernelConfig};
use crate::linalg::{asymmetry, SpdFactor, JITTER};
use crate::quadrature::QuadratureBox;
use crate::special::ln_gamma;

/// Symmetry tolerance for covariance inputs.
const SYMMETRY_TOL: f64 = 1e-12;

fn check_nu(nu: f64) -> Result<()> {
    if !(nu > 2.0) || !nu.is_finite() {
        return Err(invalid(format!("nu must exceed 2, got {nu}")));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct StudentTMembership {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
    nu: f64,
    factor: SpdFactor,
}

impl StudentTMembership {
    /// Builds a membership from an explicit mean and covariance. The
    /// covariance is factorized as given; only if that fails is a diagonal
    /// jitter of 1e-8·max(diag) added.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>, nu: f64) -> Result<Self> {
        check_nu(nu)?;
        let d = mean.len();
        if d == 0 {
            return Err(invalid("membership dimension must be positive"));
        }
        if cov.nrows() != d || cov.ncols() != d {
            return Err(invalid(format!("covariance is {}x{}, mean has length {d}", cov.nrows(), cov.ncols())));
        }
        if mean.iter().any(|v| !v.is_finite()) {
            return Err(invalid("mean has non-finite entries"));
        }
        let asym = asymmetry(&cov);
        if asym > SYMMETRY_TOL {
            return Err(invalid(format!("covariance is not symmetric (max asymmetry {asym:e})")));
        }
        let factor = match SpdFactor::new(&cov, "membership covariance") {
            Ok(f) => f,
            Err(_) => {
                let scale = cov.diagonal().max().max(f64::MIN_POSITIVE);
                SpdFactor::with_jitter(&cov, JITTER * scale, "membership covariance")?
            }
        };
        Ok(Self { mean, cov, nu, factor })
    }

    /// Membership over the outputs at `points`, with covariance given by the
    /// kernel Gram matrix plus the 1e-8·σ² diagonal jitter.
    pub fn from_points(points: &DMatrix<f64>, cfg: &KernelConfig, nu: f64, mean: Option<DVector<f64>>) -> Result<Self> {
        let mut k = gram_matrix(points, points, cfg)?;
        for i in 0..k.nrows() {
            k[(i, i)] += cfg.jitter();
        }
        let mean = mean.unwrap_or_else(|| DVector::zeros(points.nrows()));
        Self::new(mean, k, nu)
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// (y − m)ᵀ K⁻¹ (y − m).
    pub fn mahalanobis2(&self, y: &[f64]) -> Result<f64> {
        if y.len() != self.dim() {
            return Err(invalid(format!("point has length {}, membership has dimension {}", y.len(), self.dim())));
        }
        let diff = DVector::from_iterator(y.len(), y.iter().zip(self.mean.iter()).map(|(a, b)| a - b));
        Ok(self.factor.quad_form(&diff))
    }

    pub fn ln_eval(&self, y: &[f64]) -> Result<f64> {
        let q = self.mahalanobis2(y)?;
        Ok(-0.5 * (self.nu + self.dim() as f64) * (q / (self.nu - 2.0)).ln_1p())
    }

    pub fn eval(&self, y: &[f64]) -> Result<f64> {
        self.ln_eval(y).map(f64::exp)
    }

    /// ln ∫ ζ(y) dy.
    pub fn ln_normalization_constant(&self) -> f64 {
        let d = self.dim() as f64;
        let nu = self.nu;
        ln_gamma(nu / 2.0) - ln_gamma((nu + d) / 2.0)
            + 0.5 * d * (nu * std::f64::consts::PI).ln()
            + 0.5 * d * ((nu - 2.0) / nu).ln()
            + 0.5 * self.factor.ln_det()
    }

    pub fn normalization_constant(&self) -> f64 {
        self.ln_normalization_constant().exp()
    }

    /// ζ(y) / ∫ζ, the multivariate-t density.
    pub fn density(&self, y: &[f64]) -> Result<f64> {
        Ok((self.ln_eval(y)? - self.ln_normalization_constant()).exp())
    }

    /// Default quadrature box for this membership.
    pub fn quadrature_box(&self) -> Result<QuadratureBox> {
        let diag: Vec<f64> = self.cov.diagonal().iter().copied().collect();
        QuadratureBox::around(self.mean.iter().copied().collect(), &diag)
    }
}

pub fn membership_eval(m: &StudentTMembership, y: &[f64]) -> Result<f64> {
    m.eval(y)
}

pub fn normalization_constant(m: &StudentTMembership) -> f64 {
    m.normalization_constant()
}

/// The membership of outputs f at N points x, given outputs u at M inducing
/// points a: a Student-t membership centred on the interpolation
/// m̄_f = K_xa K_aa⁻¹ u.
#[derive(Clone, Debug)]
pub struct ConditionalMembership {
    /// m̄_f = K_xa K_aa⁻¹ u.
    pub mean: DVector<f64>,
    /// K̄_xx = K_xx − K_xa K_aa⁻¹ K_xaᵀ.
    pub base_scale: DMatrix<f64>,
    /// (ν + uᵀK_aa⁻¹u − 2)/(ν + M − 2).
    pub scale_multiplier: f64,
    /// (ν + M + N)/2.
    pub nu_eff_exponent: f64,
    /// ν + M − 2.
    pub dof_shift: f64,
}

/// Builds μ_{f;u}. K_xx and K_aa both carry the 1e-8·σ² diagonal jitter, so
/// the result is exactly the conditional of the jittered joint membership.
pub fn conditional_membership(
    x_pts: &DMatrix<f64>,
    a_pts: &DMatrix<f64>,
    u: &DVector<f64>,
    cfg: &KernelConfig,
    nu: f64,
) -> Result<ConditionalMembership> {
    check_nu(nu)?;
    let (n, m) = (x_pts.nrows(), a_pts.nrows());
    if m == 0 || n == 0 {
        return Err(invalid("need at least one data point and one inducing point"));
    }
    if u.len() != m {
        return Err(invalid(format!("u has length {}, expected M = {m}", u.len())));
    }
    let k_aa = SpdFactor::with_jitter(&gram_matrix(a_pts, a_pts, cfg)?, cfg.jitter(), "K_aa")?;
    let k_xa = gram_matrix(x_pts, a_pts, cfg)?;
    let mut k_xx = gram_matrix(x_pts, x_pts, cfg)?;
    for i in 0..n {
        k_xx[(i, i)] += cfg.jitter();
    }

    let mean = &k_xa * k_aa.solve_vec(u);
    let explained = &k_xa * k_aa.solve(&k_xa.transpose());
    let mut base_scale = k_xx - explained;
    // exact symmetry; the product above is symmetric only up to rounding
    let sym = (&base_scale + base_scale.transpose()) * 0.5;
    base_scale.copy_from(&sym);

    let q_u = k_aa.quad_form(u);
    let dof_shift = nu + m as f64 - 2.0;
    Ok(ConditionalMembership {
        mean,
        base_scale,
        scale_multiplier: (nu + q_u - 2.0) / dof_shift,
        nu_eff_exponent: 0.5 * (nu + (m + n) as f64),
        dof_shift,
    })
}

impl ConditionalMembership {
    pub fn ln_eval(&self, f_tilde: &[f64]) -> Result<f64> {
        let n = self.mean.len();
        if f_tilde.len() != n {
            return Err(invalid(format!("f has length {}, expected N = {n}", f_tilde.len())));
        }
        let factor = SpdFactor::new(&self.base_scale, "conditional scale")
            .map_err(|e| numeric(format!("singular effective scale: {e}")))?;
        let diff = DVector::from_iterator(n, f_tilde.iter().zip(self.mean.iter()).map(|(a, b)| a - b));
        let q = factor.quad_form(&diff) / self.scale_multiplier;
        Ok(-self.nu_eff_exponent * (q / self.dof_shift).ln_1p())
    }

    pub fn eval(&self, f_tilde: &[f64]) -> Result<f64> {
        self.ln_eval(f_tilde).map(f64::exp)
    }
}

pub fn conditional_eval(c: &ConditionalMembership, f_tilde: &[f64]) -> Result<f64> {
    c.eval(f_tilde)
}

/// ⟨g⟩_μ = ∫ g μ / ∫ μ over the box, by tensor trapezoid quadrature.
pub fn weighted_average(g: impl Fn(&[f64]) -> f64, mu: impl Fn(&[f64]) -> f64, domain: &QuadratureBox) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    domain.for_each_node(|y, w| {
        let m = mu(y);
        num += w * g(y) * m;
        den += w * m;
    });
    if !(den > 0.0) || !den.is_finite() {
        return Err(Error::Numeric(format!("weighted average has zero or invalid total weight {den}")));
    }
    Ok(num / den)
}
