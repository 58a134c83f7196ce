//! WebAssembly bindings behind `www/index.html`.
//!
//! Three operations are exposed: fitting a 1-D curve to clicked points,
//! the membership profile for a given ν, and the conditional band between
//! draggable values at fixed inducing points. Everything returns flat
//! `Float64Array`s so the page can draw with a plain 2-D canvas.

use membership_mapping::{
    conditional_membership, fit, predict, Dataset, HyperParams, KernelConfig, StudentTMembership,
};
use nalgebra::{DMatrix, DVector};
use wasm_bindgen::prelude::*;

fn msg(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn to_js<T>(r: Result<T, String>) -> Result<T, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

#[wasm_bindgen]
pub struct CurveFit {
    grid_x: Vec<f64>,
    grid_y: Vec<f64>,
    inducing: Vec<f64>,
    beta_trace: Vec<f64>,
    converged: bool,
    width: f64,
}

#[wasm_bindgen]
impl CurveFit {
    #[wasm_bindgen(getter)]
    pub fn grid_x(&self) -> Vec<f64> {
        self.grid_x.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn grid_y(&self) -> Vec<f64> {
        self.grid_y.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn inducing(&self) -> Vec<f64> {
        self.inducing.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn beta_trace(&self) -> Vec<f64> {
        self.beta_trace.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn converged(&self) -> bool {
        self.converged
    }
    /// Kernel width actually used.
    #[wasm_bindgen(getter)]
    pub fn width(&self) -> f64 {
        self.width
    }
}

/// Fits a 1-D model to `(xs, ys)` and evaluates it on `grid` points over
/// `[lo, hi]`. A `width` of 0 selects the width heuristic.
#[allow(clippy::too_many_arguments)]
#[wasm_bindgen]
pub fn fit_curve(
    xs: &[f64],
    ys: &[f64],
    m: usize,
    nu: f64,
    sigma_x2: f64,
    width: f64,
    lo: f64,
    hi: f64,
    grid: usize,
) -> Result<CurveFit, JsValue> {
    to_js(try_fit_curve(xs, ys, m, nu, sigma_x2, width, lo, hi, grid))
}

#[allow(clippy::too_many_arguments)]
fn try_fit_curve(
    xs: &[f64],
    ys: &[f64],
    m: usize,
    nu: f64,
    sigma_x2: f64,
    width: f64,
    lo: f64,
    hi: f64,
    grid: usize,
) -> Result<CurveFit, String> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(msg("need the same, nonzero number of x and y values"));
    }
    let n = xs.len();
    let data = Dataset::new(DMatrix::from_column_slice(n, 1, xs), DMatrix::from_column_slice(n, 1, ys)).map_err(msg)?;
    let mut hp = HyperParams::new(m.clamp(1, n));
    hp.nu = nu;
    hp.sigma_x2 = sigma_x2;
    if width > 0.0 {
        hp.w = Some(vec![width]);
    }
    let (model, report) = fit(&data, &hp, None).map_err(msg)?;
    let grid_x = linspace(lo, hi, grid);
    let grid_y =
        grid_x.iter().map(|&x| predict(&[x], &model).map(|y| y[0])).collect::<Result<Vec<_>, _>>().map_err(msg)?;
    Ok(CurveFit {
        grid_x,
        grid_y,
        inducing: model.a.column(0).iter().copied().collect(),
        beta_trace: report.beta_trace,
        converged: report.converged,
        width: model.w[0],
    })
}

/// Membership ζ(y) of a scalar Student-t membership with mean 0 and the given
/// variance, followed by its normalized density, each on `grid` points over
/// `[-span, span]`: the result holds `2 * grid` values.
#[wasm_bindgen]
pub fn membership_profile(nu: f64, variance: f64, span: f64, grid: usize) -> Result<Vec<f64>, JsValue> {
    to_js(try_membership_profile(nu, variance, span, grid))
}

fn try_membership_profile(nu: f64, variance: f64, span: f64, grid: usize) -> Result<Vec<f64>, String> {
    let member = StudentTMembership::new(DVector::zeros(1), DMatrix::from_element(1, 1, variance), nu).map_err(msg)?;
    let ys = linspace(-span, span, grid);
    let mut out = Vec::with_capacity(2 * grid);
    for y in &ys {
        out.push(member.eval(&[*y]).map_err(msg)?);
    }
    for y in &ys {
        out.push(member.density(&[*y]).map_err(msg)?);
    }
    Ok(out)
}

/// Conditional mean and spread of the mapping output at each grid point,
/// given values `u` at inducing points `a` (1-D). Returns `2 * grid` values:
/// the means, then the square roots of the effective scales.
#[wasm_bindgen]
pub fn conditional_band(
    a: &[f64],
    u: &[f64],
    width: f64,
    nu: f64,
    lo: f64,
    hi: f64,
    grid: usize,
) -> Result<Vec<f64>, JsValue> {
    to_js(try_conditional_band(a, u, width, nu, lo, hi, grid))
}

fn try_conditional_band(
    a: &[f64],
    u: &[f64],
    width: f64,
    nu: f64,
    lo: f64,
    hi: f64,
    grid: usize,
) -> Result<Vec<f64>, String> {
    if a.len() != u.len() || a.is_empty() {
        return Err(msg("need the same, nonzero number of inducing points and values"));
    }
    let cfg = KernelConfig::new(1.0, 0.0, vec![width]).map_err(msg)?;
    let a_mat = DMatrix::from_column_slice(a.len(), 1, a);
    let u_vec = DVector::from_column_slice(u);
    let xs = linspace(lo, hi, grid);
    let mut means = Vec::with_capacity(grid);
    let mut spreads = Vec::with_capacity(grid);
    for x in xs {
        let c = conditional_membership(&DMatrix::from_element(1, 1, x), &a_mat, &u_vec, &cfg, nu).map_err(msg)?;
        means.push(c.mean[0]);
        spreads.push((c.scale_multiplier * c.base_scale[(0, 0)]).max(0.0).sqrt());
    }
    means.extend(spreads);
    Ok(means)
}
