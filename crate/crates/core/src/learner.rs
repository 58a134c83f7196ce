//! Closed-form variational learning of a Student-t membership-mapping
//! regression model over inducing points.
//!
//! The learner alternates between the expected inducing outputs
//! E(m̂_{u_j}), the expected residual energy E(O) and the Gamma-style
//! hyperposterior parameters (â_τ, b̂_τ, â_z, b̂_z, â_r, b̂_r, â_s, b̂_s),
//! until β = (â_τ/b̂_τ)(â_z/b̂_z) settles. The model is then read off the
//! final state as B = A⁻¹Ψᵀ and α = B Y with
//!
//! ```text
//! A = Φ + c·K_aa + (b̂_τ b̂_z)/(â_τ â_z)·K_aa,   c = (ξ − Tr(K_aa⁻¹Φ))/(ν + M − 2)
//! ```

use log::{debug, info};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::auxiliary::{kmeans_centroids, width_heuristic, KMeansConfig};
use crate::error::{invalid, numeric, Result};
use crate::kernel::{DesignMatrices, KernelConfig};
use crate::linalg::{SpdFactor, JITTER};
use crate::model::ModelParams;
use crate::special::digamma;

/// Floor applied to E(O) before it enters b̂_τ and b̂_z.
pub const EXPECTED_O_FLOOR: f64 = 1e-12;

/// Paired inputs (N×n) and targets (N×p).
#[derive(Clone, Debug)]
pub struct Dataset {
    pub x: DMatrix<f64>,
    pub y: DMatrix<f64>,
    pub feature_names: Vec<String>,
    pub target_names: Vec<String>,
}

impl Dataset {
    pub fn new(x: DMatrix<f64>, y: DMatrix<f64>) -> Result<Self> {
        let feature_names = (1..=x.ncols()).map(|i| format!("x_{i}")).collect();
        let target_names = (1..=y.ncols()).map(|i| format!("y_{i}")).collect();
        let data = Self { x, y, feature_names, target_names };
        data.validate()?;
        Ok(data)
    }

    pub fn validate(&self) -> Result<()> {
        if self.x.nrows() != self.y.nrows() {
            return Err(invalid(format!("inputs have {} rows but targets have {}", self.x.nrows(), self.y.nrows())));
        }
        if self.x.nrows() == 0 {
            return Err(invalid("dataset is empty"));
        }
        if self.x.ncols() == 0 || self.y.ncols() == 0 {
            return Err(invalid("dataset needs at least one feature and one target column"));
        }
        if let Some((i, _)) = self.x.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(invalid(format!("non-finite input at row {}", i % self.x.nrows() + 1)));
        }
        if let Some((i, _)) = self.y.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(invalid(format!("non-finite target at row {}", i % self.y.nrows() + 1)));
        }
        Ok(())
    }

    pub fn n_samples(&self) -> usize {
        self.x.nrows()
    }
}

/// Prior constants of the hyperposteriors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Priors {
    pub a_tau: f64,
    pub b_tau: f64,
    pub a_r: f64,
    pub b_r: f64,
    pub a_s: f64,
    pub b_s: f64,
}

impl Default for Priors {
    fn default() -> Self {
        Self { a_tau: 1.0, b_tau: 1.0, a_r: 1.0, b_r: 1.0, a_s: 1.0, b_s: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyperParams {
    /// Number of inducing points M (ignored when inducing points are supplied).
    pub m: usize,
    pub nu: f64,
    pub sigma2: f64,
    pub sigma_x2: f64,
    pub priors: Priors,
    pub beta_rel_tol: f64,
    pub min_outer_iters: usize,
    pub max_outer_iters: usize,
    pub seed: u64,
    /// Kernel widths; computed from the data when `None`.
    pub w: Option<Vec<f64>>,
}

impl HyperParams {
    pub fn new(m: usize) -> Self {
        Self {
            m,
            nu: 5.0,
            sigma2: 1.0,
            sigma_x2: 0.01,
            priors: Priors::default(),
            beta_rel_tol: 1e-6,
            min_outer_iters: 3,
            max_outer_iters: 1000,
            seed: 0,
            w: None,
        }
    }

    /// Defaults with M = min(N, 50).
    pub fn for_samples(n_samples: usize) -> Self {
        Self::new(n_samples.min(50))
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(invalid("M must be at least 1"));
        }
        if !(self.nu > 2.0) || !self.nu.is_finite() {
            return Err(invalid(format!("nu must exceed 2, got {}", self.nu)));
        }
        let p = &self.priors;
        for (name, v) in
            [("a_tau", p.a_tau), ("b_tau", p.b_tau), ("a_r", p.a_r), ("b_r", p.b_r), ("a_s", p.a_s), ("b_s", p.b_s)]
        {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(format!("prior {name} must be positive, got {v}")));
            }
        }
        if !(self.beta_rel_tol > 0.0) {
            return Err(invalid("beta tolerance must be positive"));
        }
        if self.max_outer_iters == 0 {
            return Err(invalid("max_outer_iters must be at least 1"));
        }
        KernelConfig { sigma2: self.sigma2, sigma_x2: self.sigma_x2, w: vec![] }.validate()
    }
}

/// Hyperposterior parameters and the current expectations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariationalState {
    pub a_tau_hat: f64,
    pub b_tau_hat: f64,
    pub a_z_hat: f64,
    pub b_z_hat: f64,
    pub a_r_hat: f64,
    pub b_r_hat: f64,
    pub a_s_hat: f64,
    pub b_s_hat: f64,
    pub e_o: f64,
    /// M×p, column j is E(m̂_{u_j}).
    #[serde(skip)]
    pub e_m_u: DMatrix<f64>,
    pub beta: f64,
    pub iter: usize,
}

impl VariationalState {
    /// Starting point: all of â_τ, b̂_τ, â_z, b̂_z, â_r, b̂_r equal to 1, then
    /// â_s and b̂_s from their own update equations.
    pub fn initial(priors: &Priors, m: usize, p: usize) -> Self {
        let mut s = Self {
            a_tau_hat: 1.0,
            b_tau_hat: 1.0,
            a_z_hat: 1.0,
            b_z_hat: 1.0,
            a_r_hat: 1.0,
            b_r_hat: 1.0,
            a_s_hat: 0.0,
            b_s_hat: 0.0,
            e_o: 0.0,
            e_m_u: DMatrix::zeros(m, p),
            beta: 0.0,
            iter: 0,
        };
        s.a_s_hat = priors.a_s + s.r_mean();
        s.b_s_hat = priors.b_s + s.r_mean() * s.z_mean();
        s.beta = s.tau_mean() * s.z_mean();
        s
    }

    fn r_mean(&self) -> f64 {
        self.a_r_hat / self.b_r_hat
    }

    fn z_mean(&self) -> f64 {
        self.a_z_hat / self.b_z_hat
    }

    fn tau_mean(&self) -> f64 {
        self.a_tau_hat / self.b_tau_hat
    }

    /// (b̂_τ b̂_z)/(â_τ â_z), the ridge weight on K_aa.
    pub fn ridge(&self) -> f64 {
        (self.b_tau_hat * self.b_z_hat) / (self.a_tau_hat * self.a_z_hat)
    }

    pub fn hatted(&self) -> [(&'static str, f64); 8] {
        [
            ("a_tau_hat", self.a_tau_hat),
            ("b_tau_hat", self.b_tau_hat),
            ("a_z_hat", self.a_z_hat),
            ("b_z_hat", self.b_z_hat),
            ("a_r_hat", self.a_r_hat),
            ("b_r_hat", self.b_r_hat),
            ("a_s_hat", self.a_s_hat),
            ("b_s_hat", self.b_s_hat),
        ]
    }

    pub fn min_hatted(&self) -> f64 {
        self.hatted().iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min)
    }
}

/// Everything derived once from the design matrices and reused by every
/// iteration.
#[derive(Clone, Debug)]
pub struct PreparedDesign {
    pub design: DesignMatrices,
    /// K_aa plus the 1e-8·σ² diagonal jitter; used wherever K_aa appears.
    pub k_aa: DMatrix<f64>,
    k_factor: SpdFactor,
    /// (ξ − Tr(K_aa⁻¹Φ))/(ν + M − 2).
    pub trace_correction: f64,
    pub nu: f64,
}

impl PreparedDesign {
    pub fn new(design: DesignMatrices, cfg: &KernelConfig, nu: f64) -> Result<Self> {
        let k_aa = design.k_aa_jittered(cfg);
        let k_factor = SpdFactor::new(&k_aa, "K_aa")?;
        let m = design.n_inducing() as f64;
        let trace = k_factor.trace_solve(&design.phi);
        let trace_correction = (design.xi - trace) / (nu + m - 2.0);
        Ok(Self { design, k_aa, k_factor, trace_correction, nu })
    }

    /// Factor of Φ + (c + ridge)·K_aa. A relative diagonal jitter is added
    /// only if the plain factorization fails.
    pub fn system_factor(&self, ridge: f64) -> Result<SpdFactor> {
        let a = &self.design.phi + &self.k_aa * (self.trace_correction + ridge);
        SpdFactor::new(&a, "system matrix").or_else(|_| {
            let scale = a.diagonal().max();
            SpdFactor::with_jitter(&a, JITTER * scale, "system matrix")
                .map_err(|e| numeric(format!("{e}; trace correction {:e}, ridge {ridge:e}", self.trace_correction)))
        })
    }
}

fn check_targets(prep: &PreparedDesign, y: &DMatrix<f64>) -> Result<()> {
    if y.nrows() != prep.design.n_samples() {
        return Err(invalid(format!("targets have {} rows, design has N = {}", y.nrows(), prep.design.n_samples())));
    }
    Ok(())
}

/// E(m̂_{u_j}) for every output column: K_aa A⁻¹ Ψᵀ y_j.
pub fn update_mean_u(prep: &PreparedDesign, state: &VariationalState, y: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_targets(prep, y)?;
    let factor = prep.system_factor(state.ridge())?;
    let rhs = prep.design.psi.transpose() * y;
    Ok(&prep.k_aa * factor.solve(&rhs))
}

/// E(O) before the floor is applied.
pub fn expected_o_unclamped(prep: &PreparedDesign, e_m_u: &DMatrix<f64>, y: &DMatrix<f64>) -> Result<f64> {
    check_targets(prep, y)?;
    if e_m_u.nrows() != prep.design.n_inducing() || e_m_u.ncols() != y.ncols() {
        return Err(invalid("E(m_u) shape does not match (M, p)"));
    }
    let v = prep.k_factor.solve(e_m_u);
    let psi_t_y = prep.design.psi.transpose() * y;
    let mut total = 0.0;
    for j in 0..y.ncols() {
        let vj = v.column(j);
        let ej = e_m_u.column(j);
        total += y.column(j).norm_squared() - 2.0 * vj.dot(&psi_t_y.column(j))
            + vj.dot(&(&prep.design.phi * vj))
            + prep.trace_correction * ej.dot(&vj);
    }
    Ok(total)
}

/// E(O), floored at 1e-12.
pub fn update_expected_o(prep: &PreparedDesign, e_m_u: &DMatrix<f64>, y: &DMatrix<f64>) -> Result<f64> {
    expected_o_unclamped(prep, e_m_u, y).map(|o| o.max(EXPECTED_O_FLOOR))
}

/// Applies the eight hyperposterior updates in order
/// (â_τ, b̂_τ, â_z, b̂_z, â_r, b̂_r, â_s, b̂_s), each using the freshest values,
/// then recomputes β.
pub fn update_hyperposteriors(
    state: &VariationalState,
    e_o: f64,
    priors: &Priors,
    n_samples: usize,
    n_outputs: usize,
) -> Result<VariationalState> {
    if !(e_o >= 0.0) || !e_o.is_finite() {
        return Err(invalid(format!("E(O) must be finite and >= 0, got {e_o}")));
    }
    let half_np = 0.5 * (n_samples * n_outputs) as f64;
    let mut s = state.clone();
    s.e_o = e_o;
    s.a_tau_hat = priors.a_tau + half_np;
    s.b_tau_hat = priors.b_tau + s.a_z_hat / (2.0 * s.b_z_hat) * e_o;
    s.a_z_hat = 1.0 + half_np + s.r_mean();
    s.b_z_hat = s.r_mean() * (s.a_s_hat / s.b_s_hat) + s.a_tau_hat / (2.0 * s.b_tau_hat) * e_o;
    s.a_r_hat = priors.a_r;
    s.b_r_hat = priors.b_r + (s.a_s_hat / s.b_s_hat) * s.z_mean() - digamma(s.a_s_hat)? + s.b_s_hat.ln()
        - 1.0
        - digamma(s.a_z_hat)?
        + s.b_z_hat.ln();
    s.a_s_hat = priors.a_s + s.r_mean();
    s.b_s_hat = priors.b_s + s.r_mean() * s.z_mean();
    s.beta = s.tau_mean() * s.z_mean();
    for (name, v) in s.hatted() {
        if !(v > 0.0) || !v.is_finite() {
            return Err(numeric(format!("hyperposterior {name} = {v} is not positive")));
        }
    }
    Ok(s)
}

/// Diagnostics of one learning run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub converged: bool,
    pub iterations: usize,
    /// β after each outer iteration.
    pub beta_trace: Vec<f64>,
    pub final_relative_change: f64,
    /// Iterations in which E(O) fell below the floor and was clamped.
    pub e_o_clamp_count: usize,
    /// Smallest hatted hyperposterior value seen in any iteration.
    pub min_hatted_value: f64,
    pub n_inducing: usize,
    pub trace_correction: f64,
    pub final_state: VariationalState,
    pub notes: Vec<String>,
}

/// Learns a model from data.
///
/// Widths come from `hp.w` or the width heuristic; inducing points come from
/// `aux_override` or k-means with `hp.seed`. Non-convergence is reported in
/// [`FitReport::converged`], not as an error.
pub fn fit(data: &Dataset, hp: &HyperParams, aux_override: Option<&DMatrix<f64>>) -> Result<(ModelParams, FitReport)> {
    data.validate()?;
    hp.validate()?;
    let (n_samples, n_inputs, n_outputs) = (data.n_samples(), data.x.ncols(), data.y.ncols());

    let w = match &hp.w {
        Some(w) if w.len() != n_inputs => {
            return Err(invalid(format!("w has {} entries, data has {n_inputs} features", w.len())))
        }
        Some(w) => w.clone(),
        None => width_heuristic(&data.x)?,
    };
    let cfg = KernelConfig::new(hp.sigma2, hp.sigma_x2, w)?;

    let a = match aux_override {
        Some(a) => {
            if a.ncols() != n_inputs || a.nrows() == 0 {
                return Err(invalid(format!(
                    "inducing points are {}x{}, expected Mx{n_inputs} with M >= 1",
                    a.nrows(),
                    a.ncols()
                )));
            }
            if a.iter().any(|v| !v.is_finite()) {
                return Err(invalid("inducing points have non-finite entries"));
            }
            a.clone()
        }
        None => {
            if hp.m > n_samples {
                return Err(invalid(format!("M = {} exceeds N = {n_samples}", hp.m)));
            }
            kmeans_centroids(&data.x, &KMeansConfig::new(hp.m, hp.seed))?
        }
    };
    let m = a.nrows();

    let design = DesignMatrices::build(&data.x, &a, &cfg)?;
    let prep = PreparedDesign::new(design, &cfg, hp.nu)?;
    info!(
        "fit: N = {n_samples}, n = {n_inputs}, p = {n_outputs}, M = {m}, trace correction = {:e}",
        prep.trace_correction
    );

    let mut state = VariationalState::initial(&hp.priors, m, n_outputs);
    let mut beta_trace = Vec::new();
    let mut clamp_count = 0;
    let mut min_hatted = state.min_hatted();
    let mut converged = false;
    let mut rel_change = f64::INFINITY;

    for iter in 1..=hp.max_outer_iters {
        let previous_beta = state.beta;
        state.e_m_u = update_mean_u(&prep, &state, &data.y)?;
        let raw_o = expected_o_unclamped(&prep, &state.e_m_u, &data.y)?;
        if raw_o < EXPECTED_O_FLOOR {
            clamp_count += 1;
        }
        state = update_hyperposteriors(&state, raw_o.max(EXPECTED_O_FLOOR), &hp.priors, n_samples, n_outputs)?;
        state.iter = iter;
        min_hatted = min_hatted.min(state.min_hatted());
        beta_trace.push(state.beta);

        rel_change = (state.beta - previous_beta).abs() / previous_beta;
        debug!("iter {iter}: E(O) = {raw_o:e}, beta = {:e}, rel change = {rel_change:e}", state.beta);
        if iter >= hp.min_outer_iters && rel_change < hp.beta_rel_tol {
            converged = true;
            break;
        }
    }

    let factor = prep.system_factor(state.ridge())?;
    let b = factor.solve(&prep.design.psi.transpose());
    let alpha = &b * &data.y;
    let model = ModelParams::new(alpha, cfg.w.clone(), a, cfg.sigma2, cfg.sigma_x2, Some(b), hp.nu, n_samples)?;

    let report = FitReport {
        converged,
        iterations: state.iter,
        beta_trace,
        final_relative_change: rel_change,
        e_o_clamp_count: clamp_count,
        min_hatted_value: min_hatted,
        n_inducing: m,
        trace_correction: prep.trace_correction,
        final_state: state,
        notes: vec!["predictions decay toward zero away from the inducing points (no extrapolation guard)".into()],
    };
    if converged {
        info!("fit converged after {} iterations, beta = {:e}", report.iterations, report.final_state.beta);
    } else {
        info!("fit stopped after {} iterations without converging", report.iterations);
    }
    Ok((model, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_prep(x: f64, a: f64, sigma2: f64, w: f64, nu: f64) -> (PreparedDesign, KernelConfig) {
        let cfg = KernelConfig::new(sigma2, 0.01, vec![w]).unwrap();
        let xm = DMatrix::from_element(1, 1, x);
        let am = DMatrix::from_element(1, 1, a);
        let design = DesignMatrices::build(&xm, &am, &cfg).unwrap();
        (PreparedDesign::new(design, &cfg, nu).unwrap(), cfg)
    }

    /// 1×1 hand arithmetic for Ψ, Φ, K.
    fn scalar_pieces(x: f64, a: f64, sigma2: f64, w: f64, nu: f64) -> (f64, f64, f64, f64) {
        let sx2 = 0.01;
        let psi = sigma2 / (1.0 + w * sx2).sqrt() * (-0.5 * w * (a - x).powi(2) / (1.0 + w * sx2)).exp();
        let phi = sigma2 * sigma2 / (1.0 + 2.0 * w * sx2).sqrt() * (-w * (a - x).powi(2) / (1.0 + 2.0 * w * sx2)).exp();
        let k = sigma2 * (1.0 + 1e-8);
        let c = (sigma2 - phi / k) / (nu + 1.0 - 2.0);
        (psi, phi, k, c)
    }

    #[test]
    fn scalar_mean_u_and_expected_o() {
        let (x, a, sigma2, w, nu) = (0.3, 0.1, 1.3, 2.0, 5.0);
        let (prep, _) = scalar_prep(x, a, sigma2, w, nu);
        let (psi, phi, k, c) = scalar_pieces(x, a, sigma2, w, nu);
        assert!((prep.trace_correction - c).abs() < 1e-14);

        let mut state = VariationalState::initial(&Priors::default(), 1, 1);
        state.a_tau_hat = 3.0;
        state.b_tau_hat = 0.5;
        state.a_z_hat = 2.0;
        state.b_z_hat = 4.0;
        let y = DMatrix::from_element(1, 1, 0.9);
        let ridge = (0.5 * 4.0) / (3.0 * 2.0);
        let want = k * psi * 0.9 / (phi + c * k + ridge * k);
        let e = update_mean_u(&prep, &state, &y).unwrap();
        assert!((e[(0, 0)] - want).abs() < 1e-12, "{} vs {want}", e[(0, 0)]);

        let v = want / k;
        let want_o = 0.81 - 2.0 * v * psi * 0.9 + v * phi * v + c * want * v;
        let o = update_expected_o(&prep, &e, &y).unwrap();
        assert!((o - want_o).abs() < 1e-12);
    }

    #[test]
    fn mean_u_is_linear_in_targets() {
        let (prep, _) = scalar_prep(0.2, 0.4, 1.0, 1.0, 4.0);
        let state = VariationalState::initial(&Priors::default(), 1, 1);
        let zero = update_mean_u(&prep, &state, &DMatrix::zeros(1, 1)).unwrap();
        assert_eq!(zero[(0, 0)], 0.0);
        let y = DMatrix::from_element(1, 1, 0.7);
        let base = update_mean_u(&prep, &state, &y).unwrap();
        let scaled = update_mean_u(&prep, &state, &(y * 3.0)).unwrap();
        assert!((scaled[(0, 0)] - 3.0 * base[(0, 0)]).abs() < 1e-14);
    }

    #[test]
    fn expected_o_edge_cases() {
        let (prep, _) = scalar_prep(0.2, 0.4, 1.0, 1.0, 4.0);
        let zero = DMatrix::zeros(1, 1);
        assert_eq!(update_expected_o(&prep, &zero, &zero).unwrap(), EXPECTED_O_FLOOR);
        let y = DMatrix::from_element(1, 1, 1.5);
        assert_eq!(update_expected_o(&prep, &zero, &y).unwrap(), 2.25);
        assert!(update_expected_o(&prep, &DMatrix::zeros(2, 1), &y).is_err());
    }

    #[test]
    fn hyperposterior_updates() {
        let priors = Priors::default();
        let s0 = VariationalState::initial(&priors, 1, 1);
        assert_eq!((s0.a_s_hat, s0.b_s_hat, s0.beta), (2.0, 2.0, 1.0));

        let s = update_hyperposteriors(&s0, 0.0, &priors, 10, 1).unwrap();
        assert_eq!(s.a_tau_hat, 6.0);
        assert_eq!(s.b_tau_hat, 1.0);
        assert_eq!(s.a_z_hat, 7.0);
        assert_eq!(s.a_r_hat, 1.0);
        // b̂_z = (â_r/b̂_r)(â_s/b̂_s) with E(O) = 0
        assert_eq!(s.b_z_hat, 1.0);
        let b_r = 1.0 + 1.0 * 7.0 - digamma(2.0).unwrap() + 2f64.ln() - 1.0 - digamma(7.0).unwrap() + 0.0;
        assert!((s.b_r_hat - b_r).abs() < 1e-14);
        assert!((s.a_s_hat - (1.0 + 1.0 / b_r)).abs() < 1e-15);
        assert!((s.b_s_hat - (1.0 + 7.0 / b_r)).abs() < 1e-14);
        assert!((s.beta - (6.0 / 1.0) * (7.0 / 1.0)).abs() < 1e-12);

        let s = update_hyperposteriors(&s0, 4.0, &priors, 10, 1).unwrap();
        // b̂_τ uses the previous â_z/b̂_z = 1
        assert_eq!(s.b_tau_hat, 3.0);
        // b̂_z uses the new â_τ/b̂_τ = 2
        assert_eq!(s.b_z_hat, 1.0 + 4.0);

        assert!(update_hyperposteriors(&s0, -1.0, &priors, 10, 1).is_err());
    }

    #[test]
    fn hyperparam_validation() {
        let mut hp = HyperParams::new(3);
        assert!(hp.validate().is_ok());
        hp.nu = 2.0;
        assert!(hp.validate().is_err());
        let mut hp = HyperParams::new(0);
        assert!(hp.validate().is_err());
        hp.m = 1;
        hp.priors.b_s = 0.0;
        assert!(hp.validate().is_err());
        assert_eq!(HyperParams::for_samples(20).m, 20);
        assert_eq!(HyperParams::for_samples(200).m, 50);
    }

    #[test]
    fn dataset_validation() {
        assert!(Dataset::new(DMatrix::zeros(3, 1), DMatrix::zeros(2, 1)).is_err());
        assert!(Dataset::new(DMatrix::zeros(0, 1), DMatrix::zeros(0, 1)).is_err());
        let mut x = DMatrix::zeros(3, 1);
        x[(1, 0)] = f64::NAN;
        let err = Dataset::new(x, DMatrix::zeros(3, 1)).unwrap_err();
        assert!(err.to_string().contains("row 2"), "{err}");
    }
}
