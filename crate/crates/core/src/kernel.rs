//! Squared-exponential kernel and the expected design quantities used by
//! learning and prediction.
//!
//! Points are stored as matrix rows. All exponent sums run over the input
//! dimension in ascending order so results are reproducible bit-for-bit.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{SpdFactor, JITTER};
use crate::model::ModelParams;

/// Parameters of kr(x, y) = σ² exp(−½ Σ_k w_k (x_k − y_k)²), plus the input
/// noise variance σ_x² that smooths Ψ, Φ and G.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    pub sigma2: f64,
    pub sigma_x2: f64,
    pub w: Vec<f64>,
}

impl KernelConfig {
    pub fn new(sigma2: f64, sigma_x2: f64, w: Vec<f64>) -> Result<Self> {
        let cfg = Self { sigma2, sigma_x2, w };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma2 > 0.0) || !self.sigma2.is_finite() {
            return Err(invalid(format!("sigma2 must be a finite positive number, got {}", self.sigma2)));
        }
        if !(self.sigma_x2 >= 0.0) || !self.sigma_x2.is_finite() {
            return Err(invalid(format!("sigma_x2 must be finite and >= 0, got {}", self.sigma_x2)));
        }
        if let Some(bad) = self.w.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(invalid(format!("width weights must be finite and >= 0, got {bad}")));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    /// Diagonal jitter for K_aa: 1e-8·σ².
    pub fn jitter(&self) -> f64 {
        JITTER * self.sigma2
    }

    fn check_dim(&self, len: usize, what: &str) -> Result<()> {
        if len != self.w.len() {
            return Err(invalid(format!("{what} has dimension {len}, kernel expects {}", self.w.len())));
        }
        Ok(())
    }
}

/// Expected design quantities for one training set and one set of inducing points.
#[derive(Clone, Debug)]
pub struct DesignMatrices {
    /// Gram matrix over the inducing points, jitter not included.
    pub k_aa: DMatrix<f64>,
    /// N×M.
    pub psi: DMatrix<f64>,
    /// M×M.
    pub phi: DMatrix<f64>,
    pub xi: f64,
}

impl DesignMatrices {
    pub fn build(x: &DMatrix<f64>, a: &DMatrix<f64>, cfg: &KernelConfig) -> Result<Self> {
        Ok(Self {
            k_aa: gram_matrix(a, a, cfg)?,
            psi: compute_psi(x, a, cfg)?,
            phi: compute_phi(x, a, cfg)?,
            xi: compute_xi(x.nrows(), cfg.sigma2)?,
        })
    }

    /// K_aa with the diagonal jitter applied.
    pub fn k_aa_jittered(&self, cfg: &KernelConfig) -> DMatrix<f64> {
        let mut k = self.k_aa.clone();
        for i in 0..k.nrows() {
            k[(i, i)] += cfg.jitter();
        }
        k
    }

    pub fn factor_k_aa(&self, cfg: &KernelConfig) -> Result<SpdFactor> {
        SpdFactor::with_jitter(&self.k_aa, cfg.jitter(), "K_aa")
    }

    pub fn n_inducing(&self) -> usize {
        self.k_aa.nrows()
    }

    pub fn n_samples(&self) -> usize {
        self.psi.nrows()
    }
}

#[inline]
fn weighted_sq_dist<'a>(x: impl Iterator<Item = &'a f64>, y: impl Iterator<Item = &'a f64>, w: &[f64]) -> f64 {
    let mut s = 0.0;
    for ((xk, yk), wk) in x.zip(y).zip(w) {
        let d = xk - yk;
        s += wk * d * d;
    }
    s
}

pub fn eval_kernel(xi: &[f64], xj: &[f64], cfg: &KernelConfig) -> Result<f64> {
    cfg.check_dim(xi.len(), "first point")?;
    cfg.check_dim(xj.len(), "second point")?;
    Ok(cfg.sigma2 * (-0.5 * weighted_sq_dist(xi.iter(), xj.iter(), &cfg.w)).exp())
}

/// Entry (i, j) is kr(A_i, B_j).
pub fn gram_matrix(a: &DMatrix<f64>, b: &DMatrix<f64>, cfg: &KernelConfig) -> Result<DMatrix<f64>> {
    cfg.check_dim(a.ncols(), "first point set")?;
    cfg.check_dim(b.ncols(), "second point set")?;
    Ok(DMatrix::from_fn(a.nrows(), b.nrows(), |i, j| {
        cfg.sigma2 * (-0.5 * weighted_sq_dist(a.row(i).iter(), b.row(j).iter(), &cfg.w)).exp()
    }))
}

/// ξ = N σ².
pub fn compute_xi(n_samples: usize, sigma2: f64) -> Result<f64> {
    if n_samples == 0 {
        return Err(invalid("xi needs at least one sample"));
    }
    Ok(n_samples as f64 * sigma2)
}

/// Per-dimension smoothed widths w_k / (1 + c w_k σ_x²) and the prefactor
/// σ^{2·power} / ∏_k √(1 + c w_k σ_x²).
fn smoothed(cfg: &KernelConfig, c: f64, power: i32) -> (Vec<f64>, f64) {
    let mut prod = 1.0;
    let mut eff = Vec::with_capacity(cfg.w.len());
    for &wk in &cfg.w {
        let s = 1.0 + c * wk * cfg.sigma_x2;
        prod *= s.sqrt();
        eff.push(wk / s);
    }
    (eff, cfg.sigma2.powi(power) / prod)
}

/// Ψ (N×M): the kernel between data and inducing points averaged over
/// Gaussian input noise of variance σ_x².
pub fn compute_psi(x: &DMatrix<f64>, a: &DMatrix<f64>, cfg: &KernelConfig) -> Result<DMatrix<f64>> {
    cfg.check_dim(x.ncols(), "data")?;
    cfg.check_dim(a.ncols(), "inducing points")?;
    let (eff, pre) = smoothed(cfg, 1.0, 1);
    Ok(DMatrix::from_fn(x.nrows(), a.nrows(), |i, m| {
        pre * (-0.5 * weighted_sq_dist(a.row(m).iter(), x.row(i).iter(), &eff)).exp()
    }))
}

/// Φ (M×M): Σ_i of the expected product of kernels at a^m and a^{m'}
/// under input noise.
pub fn compute_phi(x: &DMatrix<f64>, a: &DMatrix<f64>, cfg: &KernelConfig) -> Result<DMatrix<f64>> {
    cfg.check_dim(x.ncols(), "data")?;
    cfg.check_dim(a.ncols(), "inducing points")?;
    let n = cfg.dim();
    let m_count = a.nrows();
    let (eff, pre) = smoothed(cfg, 2.0, 2);
    let mut phi = DMatrix::zeros(m_count, m_count);
    let mut mid = vec![0.0; n];
    for m in 0..m_count {
        for mp in m..m_count {
            let mut sep = 0.0;
            for k in 0..n {
                let d = a[(m, k)] - a[(mp, k)];
                sep += cfg.w[k] * d * d;
                mid[k] = 0.5 * (a[(m, k)] + a[(mp, k)]);
            }
            let mut acc = 0.0;
            for i in 0..x.nrows() {
                let near = weighted_sq_dist(mid.iter(), x.row(i).iter(), &eff);
                acc += (-0.25 * sep - near).exp();
            }
            phi[(m, mp)] = pre * acc;
            phi[(mp, m)] = pre * acc;
        }
    }
    Ok(phi)
}

/// G(x) (length M): the Ψ row formula evaluated at a single point against
/// the model's inducing points.
pub fn feature_row(x: &[f64], model: &ModelParams) -> Result<Vec<f64>> {
    let cfg = model.kernel_config();
    cfg.check_dim(x.len(), "query point")?;
    let (eff, pre) = smoothed(&cfg, 1.0, 1);
    Ok((0..model.a.nrows())
        .map(|m| pre * (-0.5 * weighted_sq_dist(model.a.row(m).iter(), x.iter(), &eff)).exp())
        .collect())
}

/// ∂G_m/∂x_k as an M×n matrix.
pub fn feature_row_jacobian(x: &[f64], model: &ModelParams) -> Result<DMatrix<f64>> {
    let g = feature_row(x, model)?;
    let cfg = model.kernel_config();
    let (eff, _) = smoothed(&cfg, 1.0, 1);
    Ok(DMatrix::from_fn(model.a.nrows(), x.len(), |m, k| -g[m] * eff[k] * (x[k] - model.a[(m, k)])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::asymmetry;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg1(sigma2: f64, sigma_x2: f64, w: f64) -> KernelConfig {
        KernelConfig::new(sigma2, sigma_x2, vec![w]).unwrap()
    }

    fn random_points(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
        DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-2.0..2.0))
    }

    #[test]
    fn kernel_basic_values() {
        let cfg = KernelConfig::new(2.5, 0.0, vec![0.7, 1.3]).unwrap();
        assert_eq!(eval_kernel(&[0.3, -1.0], &[0.3, -1.0], &cfg).unwrap(), 2.5);
        let flat = KernelConfig::new(2.5, 0.0, vec![0.0, 0.0]).unwrap();
        assert_eq!(eval_kernel(&[0.3, -1.0], &[9.0, 4.0], &flat).unwrap(), 2.5);
        let v = eval_kernel(&[0.0], &[1.0], &cfg1(1.0, 0.0, 2.0)).unwrap();
        assert!((v - 0.367_879_441_171_442_3).abs() < 1e-15);
    }

    #[test]
    fn kernel_dimension_mismatch() {
        let cfg = cfg1(1.0, 0.0, 1.0);
        assert!(matches!(eval_kernel(&[0.0, 1.0], &[1.0], &cfg), Err(crate::Error::InvalidArgument(_))));
        let a = DMatrix::zeros(2, 2);
        assert!(gram_matrix(&a, &a, &cfg).is_err());
        assert!(compute_psi(&a, &a, &cfg).is_err());
        assert!(compute_phi(&a, &a, &cfg).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(KernelConfig::new(0.0, 0.0, vec![1.0]).is_err());
        assert!(KernelConfig::new(1.0, -0.1, vec![1.0]).is_err());
        assert!(KernelConfig::new(1.0, 0.0, vec![-1.0]).is_err());
        assert!(KernelConfig::new(1.0, 0.0, vec![f64::NAN]).is_err());
    }

    #[test]
    fn gram_small_cases() {
        let cfg = cfg1(1.0, 0.0, 3.0);
        let one = DMatrix::from_row_slice(1, 1, &[0.4]);
        assert_eq!(gram_matrix(&one, &one, &cfg).unwrap()[(0, 0)], 1.0);
        let twin = DMatrix::from_row_slice(2, 1, &[0.4, 0.4]);
        assert_eq!(gram_matrix(&twin, &twin, &cfg).unwrap(), DMatrix::from_element(2, 2, 1.0));
    }

    #[test]
    fn gram_is_psd() {
        // eigendecomposition oracle
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &count in &[5usize, 16, 64] {
            let pts = random_points(&mut rng, count, 2);
            let cfg = KernelConfig::new(1.7, 0.0, vec![0.8, 2.0]).unwrap();
            let k = gram_matrix(&pts, &pts, &cfg).unwrap();
            assert_eq!(asymmetry(&k), 0.0);
            let min_eig = k.symmetric_eigenvalues().min();
            assert!(min_eig >= -1e-10 * cfg.sigma2, "min eigenvalue {min_eig}");
        }
    }

    #[test]
    fn xi_values() {
        assert_eq!(compute_xi(1, 1.0).unwrap(), 1.0);
        assert_eq!(compute_xi(100, 2.0).unwrap(), 200.0);
        assert_eq!(compute_xi(200, 1.0).unwrap(), 200.0);
        assert!(compute_xi(0, 1.0).is_err());
    }

    #[test]
    fn psi_values() {
        let x = DMatrix::from_row_slice(1, 1, &[0.25]);
        let psi = compute_psi(&x, &x, &cfg1(1.0, 0.0, 5.0)).unwrap();
        assert_eq!(psi[(0, 0)], 1.0);
        let psi = compute_psi(&x, &x, &cfg1(1.0, 0.01, 1.0)).unwrap();
        assert!((psi[(0, 0)] - 0.995_037_190_209_989_1).abs() < 1e-15);
    }

    #[test]
    fn psi_degenerates_to_gram() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_points(&mut rng, 12, 3);
        let a = random_points(&mut rng, 4, 3);
        let cfg = KernelConfig::new(1.3, 0.0, vec![0.5, 1.0, 2.0]).unwrap();
        let psi = compute_psi(&x, &a, &cfg).unwrap();
        let gram = gram_matrix(&x, &a, &cfg).unwrap();
        assert!((psi - gram).amax() <= 1e-12);
    }

    /// Brute-force ΨᵀΨ, one kernel evaluation at a time.
    fn naive_psi_t_psi(x: &DMatrix<f64>, a: &DMatrix<f64>, cfg: &KernelConfig) -> DMatrix<f64> {
        let m = a.nrows();
        let mut out = DMatrix::zeros(m, m);
        for p in 0..m {
            for q in 0..m {
                let mut s = 0.0;
                for i in 0..x.nrows() {
                    let xi: Vec<f64> = x.row(i).iter().copied().collect();
                    let ap: Vec<f64> = a.row(p).iter().copied().collect();
                    let aq: Vec<f64> = a.row(q).iter().copied().collect();
                    s += eval_kernel(&xi, &ap, cfg).unwrap() * eval_kernel(&xi, &aq, cfg).unwrap();
                }
                out[(p, q)] = s;
            }
        }
        out
    }

    #[test]
    fn phi_degenerates_to_psi_t_psi() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = random_points(&mut rng, 20, 2);
        let a = random_points(&mut rng, 5, 2);
        let cfg = KernelConfig::new(0.9, 0.0, vec![1.5, 0.4]).unwrap();
        let phi = compute_phi(&x, &a, &cfg).unwrap();
        let want = naive_psi_t_psi(&x, &a, &cfg);
        assert!((&phi - &want).norm() / phi.norm() <= 1e-10);
    }

    #[test]
    fn phi_small_cases() {
        let x = DMatrix::from_row_slice(1, 1, &[0.1]);
        let phi = compute_phi(&x, &x, &cfg1(1.0, 0.0, 2.0)).unwrap();
        assert_eq!(phi[(0, 0)], 1.0);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = random_points(&mut rng, 9, 2);
        let a = random_points(&mut rng, 6, 2);
        let cfg = KernelConfig::new(1.1, 0.02, vec![0.6, 1.9]).unwrap();
        let phi = compute_phi(&x, &a, &cfg).unwrap();
        assert!(asymmetry(&phi) <= 1e-12);
        assert!(phi.iter().all(|v| v.is_finite() && *v > 0.0));

        // w = 0: every kernel equals σ², so Φ = N σ⁴ everywhere.
        let flat = KernelConfig::new(1.1, 0.0, vec![0.0, 0.0]).unwrap();
        let phi = compute_phi(&x, &a, &flat).unwrap();
        assert!(phi.iter().all(|v| (v - 9.0 * 1.21).abs() < 1e-12));
    }

    #[test]
    fn feature_row_matches_psi() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_points(&mut rng, 4, 2);
        let model = ModelParams::zeros_for_tests(a.clone(), vec![0.7, 1.2], 1.4, 0.01, 1);
        let x = [0.3, -0.8];
        let g = feature_row(&x, &model).unwrap();
        let psi = compute_psi(&DMatrix::from_row_slice(1, 2, &x), &a, &model.kernel_config()).unwrap();
        for m in 0..4 {
            assert!((g[m] - psi[(0, m)]).abs() <= 1e-15);
        }

        let exact = ModelParams::zeros_for_tests(a.clone(), vec![0.7, 1.2], 1.0, 0.0, 1);
        let at_a: Vec<f64> = a.row(2).iter().copied().collect();
        assert_eq!(feature_row(&at_a, &exact).unwrap()[2], 1.0);

        let flat = ModelParams::zeros_for_tests(a, vec![0.0, 0.0], 1.0, 0.01, 1);
        assert!(feature_row(&x, &flat).unwrap().iter().all(|g| *g == 1.0));
        assert!(feature_row(&[0.0], &flat).is_err());
    }

    #[test]
    fn kernel_symmetry_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cfg = KernelConfig::new(1.0, 0.0, vec![0.3, 4.0, 1.0]).unwrap();
        for _ in 0..200 {
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-5.0..5.0)).collect();
            let y: Vec<f64> = (0..3).map(|_| rng.random_range(-5.0..5.0)).collect();
            let kxy = eval_kernel(&x, &y, &cfg).unwrap();
            assert_eq!(kxy.to_bits(), eval_kernel(&y, &x, &cfg).unwrap().to_bits());
            assert!(kxy > 0.0 && kxy <= cfg.sigma2);
        }
    }
}
