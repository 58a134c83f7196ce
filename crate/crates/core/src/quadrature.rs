//! Tensor-grid trapezoid quadrature over axis-aligned boxes (d ≤ 3).
//!
//! Student-t tails decay polynomially, so boxes are wide and the truncation
//! error is controlled by the box size rather than by adaptivity.

use crate::error::{invalid, Error, Result};

/// Largest dimension the tensor grid supports.
pub const MAX_DIM: usize = 3;

/// Box half-width in units of √(max diagonal of the covariance).
pub const BOX_HALF_WIDTH_SDS: f64 = 50.0;

/// Nodes per axis for d ≤ 2.
pub const NODES_LOW_DIM: usize = 4096;

/// Nodes per axis for d = 3.
pub const NODES_3D: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureBox {
    pub center: Vec<f64>,
    pub half_width: Vec<f64>,
    /// Nodes per axis, endpoints included.
    pub nodes: usize,
}

impl QuadratureBox {
    pub fn new(center: Vec<f64>, half_width: Vec<f64>, nodes: usize) -> Result<Self> {
        if center.len() != half_width.len() {
            return Err(invalid("box center and half-width differ in length"));
        }
        if center.is_empty() {
            return Err(invalid("box must have at least one axis"));
        }
        if center.len() > MAX_DIM {
            return Err(Error::Unsupported(format!(
                "tensor quadrature supports d <= {MAX_DIM}, got d = {}",
                center.len()
            )));
        }
        if nodes < 2 {
            return Err(invalid("need at least two nodes per axis"));
        }
        if half_width.iter().any(|h| !(*h > 0.0) || !h.is_finite()) {
            return Err(invalid("half-widths must be finite and positive"));
        }
        Ok(Self { center, half_width, nodes })
    }

    /// The default box for a distribution with the given center and covariance
    /// diagonal: half-width 50·√(max diagonal), 4096 nodes per axis for d ≤ 2
    /// and 256 for d = 3.
    pub fn around(center: Vec<f64>, cov_diag: &[f64]) -> Result<Self> {
        let d = center.len();
        let spread = cov_diag.iter().copied().fold(0.0f64, f64::max).sqrt();
        let nodes = if d <= 2 { NODES_LOW_DIM } else { NODES_3D };
        Self::new(center, vec![BOX_HALF_WIDTH_SDS * spread; d], nodes)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    fn axis(&self, k: usize) -> (Vec<f64>, Vec<f64>) {
        let lo = self.center[k] - self.half_width[k];
        let h = 2.0 * self.half_width[k] / (self.nodes - 1) as f64;
        let pts = (0..self.nodes).map(|i| lo + h * i as f64).collect();
        let wts = (0..self.nodes).map(|i| if i == 0 || i == self.nodes - 1 { 0.5 * h } else { h }).collect();
        (pts, wts)
    }

    /// Visits every grid node with its tensor trapezoid weight, in
    /// lexicographic order (last axis fastest).
    pub fn for_each_node(&self, mut visit: impl FnMut(&[f64], f64)) {
        let axes: Vec<_> = (0..self.dim()).map(|k| self.axis(k)).collect();
        let mut y = vec![0.0; self.dim()];
        match self.dim() {
            1 => {
                for (p, w) in axes[0].0.iter().zip(&axes[0].1) {
                    y[0] = *p;
                    visit(&y, *w);
                }
            }
            2 => {
                for (p0, w0) in axes[0].0.iter().zip(&axes[0].1) {
                    y[0] = *p0;
                    for (p1, w1) in axes[1].0.iter().zip(&axes[1].1) {
                        y[1] = *p1;
                        visit(&y, w0 * w1);
                    }
                }
            }
            _ => {
                for (p0, w0) in axes[0].0.iter().zip(&axes[0].1) {
                    y[0] = *p0;
                    for (p1, w1) in axes[1].0.iter().zip(&axes[1].1) {
                        y[1] = *p1;
                        for (p2, w2) in axes[2].0.iter().zip(&axes[2].1) {
                            y[2] = *p2;
                            visit(&y, w0 * w1 * w2);
                        }
                    }
                }
            }
        }
    }
}

/// ∫ f over the box.
pub fn integrate(f: impl Fn(&[f64]) -> f64, bx: &QuadratureBox) -> f64 {
    let mut acc = 0.0;
    bx.for_each_node(|y, w| acc += w * f(y));
    acc
}

/// One-dimensional trapezoid rule on [lo, hi] with `nodes` equispaced nodes.
pub fn trapezoid(f: impl Fn(f64) -> f64, lo: f64, hi: f64, nodes: usize) -> f64 {
    debug_assert!(nodes >= 2);
    let h = (hi - lo) / (nodes - 1) as f64;
    let mut acc = 0.5 * (f(lo) + f(hi));
    for i in 1..nodes - 1 {
        acc += f(lo + h * i as f64);
    }
    acc * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_mass() {
        let bx = QuadratureBox::new(vec![0.0, 0.0], vec![10.0, 10.0], 401).unwrap();
        let z = integrate(|y| (-0.5 * (y[0] * y[0] + y[1] * y[1])).exp(), &bx);
        assert!((z - 2.0 * std::f64::consts::PI).abs() < 1e-10);
        let z1 = trapezoid(|t| (-0.5 * t * t).exp(), -10.0, 10.0, 401);
        assert!((z1 - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn three_dim_volume() {
        let bx = QuadratureBox::new(vec![1.0, 2.0, 3.0], vec![0.5, 1.0, 2.0], 17).unwrap();
        assert!((integrate(|_| 1.0, &bx) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_boxes() {
        assert!(matches!(QuadratureBox::new(vec![0.0; 4], vec![1.0; 4], 8), Err(Error::Unsupported(_))));
        assert!(QuadratureBox::new(vec![0.0], vec![0.0], 8).is_err());
        assert!(QuadratureBox::new(vec![0.0], vec![1.0], 1).is_err());
        assert!(QuadratureBox::new(vec![0.0, 1.0], vec![1.0], 8).is_err());
    }

    #[test]
    fn default_box_sizes() {
        let bx = QuadratureBox::around(vec![0.0, 0.0], &[4.0, 1.0]).unwrap();
        assert_eq!(bx.nodes, NODES_LOW_DIM);
        assert_eq!(bx.half_width, vec![100.0, 100.0]);
        let bx = QuadratureBox::around(vec![0.0; 3], &[1.0; 3]).unwrap();
        assert_eq!(bx.nodes, NODES_3D);
    }
}
