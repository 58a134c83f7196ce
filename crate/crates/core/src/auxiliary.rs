//! Inducing-point selection and the kernel width heuristic.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct KMeansConfig {
    pub m: usize,
    pub seed: u64,
    pub max_iters: usize,
    /// Lloyd also stops once the inertia improves by less than `tol`
    /// (relative). Zero means "only stop on unchanged assignments".
    pub tol: f64,
}

impl KMeansConfig {
    pub fn new(m: usize, seed: u64) -> Self {
        Self { m, seed, max_iters: 100, tol: 0.0 }
    }
}

#[derive(Clone, Debug)]
pub struct KMeansResult {
    /// M×n.
    pub centroids: DMatrix<f64>,
    pub labels: Vec<usize>,
    /// Inertia after seeding, then after each Lloyd iteration.
    pub inertia_trace: Vec<f64>,
    pub iterations: usize,
}

fn sq_dist(x: &DMatrix<f64>, i: usize, c: &DMatrix<f64>, j: usize) -> f64 {
    x.row(i).iter().zip(c.row(j).iter()).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Index and squared distance of the nearest centroid; ties go to the lower index.
fn nearest(x: &DMatrix<f64>, i: usize, c: &DMatrix<f64>) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for j in 0..c.nrows() {
        let d = sq_dist(x, i, c, j);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

fn plus_plus_seeds(x: &DMatrix<f64>, m: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let n = x.nrows();
    let mut chosen = Vec::with_capacity(m);
    let mut taken = vec![false; n];
    let first = rng.random_range(0..n);
    chosen.push(first);
    taken[first] = true;
    let mut d2: Vec<f64> = (0..n).map(|i| sq_dist(x, i, x, first)).collect();
    while chosen.len() < m {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, d) in d2.iter().enumerate() {
                acc += d;
                if acc > target && *d > 0.0 {
                    pick = Some(i);
                    break;
                }
            }
            // rounding can leave `target` past the last increment
            pick.unwrap_or_else(|| d2.iter().rposition(|d| *d > 0.0).unwrap())
        } else {
            // every remaining point coincides with a chosen one
            (0..n).find(|i| !taken[*i]).unwrap()
        };
        chosen.push(pick);
        taken[pick] = true;
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(sq_dist(x, i, x, pick));
        }
    }
    DMatrix::from_fn(m, x.ncols(), |r, c| x[(chosen[r], c)])
}

/// Lloyd's algorithm with k-means++ seeding from a ChaCha8 stream.
///
/// Deterministic for fixed row order and seed. An empty cluster is moved to
/// the point farthest from its assigned centroid.
pub fn kmeans(x: &DMatrix<f64>, cfg: &KMeansConfig) -> Result<KMeansResult> {
    let n = x.nrows();
    if cfg.m == 0 {
        return Err(invalid("k-means needs M >= 1"));
    }
    if cfg.m > n {
        return Err(invalid(format!("cannot pick M = {} centroids from N = {n} points", cfg.m)));
    }
    if cfg.max_iters == 0 {
        return Err(invalid("k-means needs max_iters >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut centroids = plus_plus_seeds(x, cfg.m, &mut rng);

    let mut labels = vec![usize::MAX; n];
    let mut inertia_trace = Vec::new();
    let assign = |centroids: &DMatrix<f64>, labels: &mut [usize]| -> (bool, f64) {
        let mut changed = false;
        let mut inertia = 0.0;
        for (i, label) in labels.iter_mut().enumerate() {
            let (j, d) = nearest(x, i, centroids);
            inertia += d;
            if *label != j {
                *label = j;
                changed = true;
            }
        }
        (changed, inertia)
    };
    let (_, seeded) = assign(&centroids, &mut labels);
    inertia_trace.push(seeded);

    let mut iterations = 0;
    while iterations < cfg.max_iters {
        iterations += 1;
        // update step
        let mut sums = DMatrix::zeros(cfg.m, x.ncols());
        let mut counts = vec![0usize; cfg.m];
        for i in 0..n {
            counts[labels[i]] += 1;
            let mut row = sums.row_mut(labels[i]);
            row += x.row(i);
        }
        for (j, &count) in counts.iter().enumerate() {
            if count > 0 {
                let mean = sums.row(j) / count as f64;
                centroids.row_mut(j).copy_from(&mean);
            } else {
                let far = (0..n)
                    .map(|i| (i, sq_dist(x, i, &centroids, labels[i])))
                    .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best })
                    .0;
                centroids.row_mut(j).copy_from(&x.row(far));
                labels[far] = j;
            }
        }
        let (changed, inertia) = assign(&centroids, &mut labels);
        let previous = *inertia_trace.last().unwrap();
        inertia_trace.push(inertia);
        if !changed {
            break;
        }
        if cfg.tol > 0.0 && previous - inertia <= cfg.tol * previous {
            break;
        }
    }
    Ok(KMeansResult { centroids, labels, inertia_trace, iterations })
}

pub fn kmeans_centroids(x: &DMatrix<f64>, cfg: &KMeansConfig) -> Result<DMatrix<f64>> {
    kmeans(x, cfg).map(|r| r.centroids)
}

/// w_k = 1/(max_i x_k − min_i x_k)², or 0 for a constant feature.
pub fn width_heuristic(x: &DMatrix<f64>) -> Result<Vec<f64>> {
    if x.nrows() == 0 {
        return Err(invalid("width heuristic needs at least one sample"));
    }
    Ok(x.column_iter()
        .map(|col| {
            let range = col.max() - col.min();
            if range > 0.0 {
                1.0 / (range * range)
            } else {
                0.0
            }
        })
        .collect())
}
