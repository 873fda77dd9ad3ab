//! Maximum interpoint distance, the k largest distances and the scaled
//! statistics built from them.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limitlaw::bounds::MultiMajorBounds;
use crate::points::Points;

/// The `l_p` norm used to measure distances (`p = 2` is Euclidean).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceSpec {
    pub p: f64,
}

impl Default for DistanceSpec {
    fn default() -> Self {
        DistanceSpec::EUCLIDEAN
    }
}

impl DistanceSpec {
    pub const EUCLIDEAN: DistanceSpec = DistanceSpec { p: 2.0 };

    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(DistanceSpec { p })
        } else {
            Err(Error::invalid("norm_p", format!("must be a finite real >= 1, got {p}")))
        }
    }

    /// `|x - y|_p^p` (squared distance for `p = 2`). Monotone in the
    /// distance, so maxima can be taken in this domain exactly.
    #[inline]
    pub fn pow_dist(&self, x: &[f64], y: &[f64]) -> f64 {
        if self.p == 2.0 {
            x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
        } else if self.p == 1.0 {
            x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum()
        } else {
            x.iter().zip(y).map(|(a, b)| (a - b).abs().powf(self.p)).sum()
        }
    }

    #[inline]
    pub fn root(&self, pow: f64) -> f64 {
        if self.p == 2.0 {
            pow.sqrt()
        } else if self.p == 1.0 {
            pow
        } else {
            pow.powf(1.0 / self.p)
        }
    }

    #[inline]
    pub fn dist(&self, x: &[f64], y: &[f64]) -> f64 {
        self.root(self.pow_dist(x, y))
    }
}

/// The k largest pairwise distances, descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopKDistances {
    pub values: Vec<f64>,
}

/// Exact maximum over all pairs. Fewer than two points give 0.
pub fn diameter_brute(points: &Points, norm: DistanceSpec) -> f64 {
    let n = points.len();
    let mut best = 0.0_f64;
    for i in 0..n {
        let x = points.get(i);
        for j in (i + 1)..n {
            let d = norm.pow_dist(x, points.get(j));
            if d > best {
                best = d;
            }
        }
    }
    norm.root(best)
}

// Relative slack on the triangle-inequality bound, covering rounding in the
// computed center distances.
const BOUND_SLACK: f64 = 1e-10;

/// Radii about the centroid and the point indices sorted by decreasing radius.
fn radial_order(points: &Points, norm: DistanceSpec) -> (Vec<f64>, Vec<usize>) {
    let n = points.len();
    let d = points.dim();
    let mut center = vec![0.0; d];
    for p in points.iter() {
        center.iter_mut().zip(p).for_each(|(c, x)| *c += x);
    }
    center.iter_mut().for_each(|c| *c /= n as f64);
    let radii: Vec<f64> = points.iter().map(|p| norm.dist(p, &center)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| radii[b].total_cmp(&radii[a]).then(a.cmp(&b)));
    (radii, order)
}

/// Same value as [`diameter_brute`], bit for bit, but only evaluates pairs
/// whose triangle-inequality bound `r_i + r_j` (radii about the centroid)
/// can still beat the running maximum.
pub fn diameter_pruned(points: &Points, norm: DistanceSpec) -> f64 {
    let n = points.len();
    if n < 2 {
        return 0.0;
    }
    let (radii, order) = radial_order(points, norm);

    // two farthest-point sweeps give a good starting value
    let mut best_pow = 0.0_f64;
    let mut anchor = order[0];
    for _ in 0..2 {
        let x = points.get(anchor);
        let mut far = anchor;
        for j in 0..n {
            let d = norm.pow_dist(x, points.get(j));
            if d > best_pow {
                best_pow = d;
                far = j;
            }
        }
        anchor = far;
    }
    let mut best = norm.root(best_pow);

    let r0 = radii[order[0]];
    for ii in 1..n {
        let i = order[ii];
        let ri = radii[i];
        if (r0 + ri) * (1.0 + BOUND_SLACK) < best {
            break;
        }
        let x = points.get(i);
        for &j in &order[..ii] {
            if (radii[j] + ri) * (1.0 + BOUND_SLACK) < best {
                break;
            }
            let d = norm.pow_dist(x, points.get(j));
            if d > best_pow {
                best_pow = d;
                best = norm.root(d);
            }
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Exact top-k over unordered pairs `i < j`; equal distances are kept as
/// separate entries.
pub fn k_largest(points: &Points, k: usize, norm: DistanceSpec) -> Result<TopKDistances> {
    if k == 0 {
        return Err(Error::invalid("k", "must be >= 1"));
    }
    let n = points.len();
    let available = n * n.saturating_sub(1) / 2;
    if available < k {
        return Err(Error::NotEnoughPairs { k, available });
    }
    if k == 1 {
        return Ok(TopKDistances {
            values: vec![diameter_pruned(points, norm)],
        });
    }
    let (radii, order) = radial_order(points, norm);
    // min-heap of the k largest pow-distances seen so far
    let mut heap: BinaryHeap<Reverse<OrdF64>> = BinaryHeap::with_capacity(k + 1);
    let mut threshold = f64::NEG_INFINITY;
    let r0 = radii[order[0]];
    for ii in 1..n {
        let i = order[ii];
        let ri = radii[i];
        if (r0 + ri) * (1.0 + BOUND_SLACK) < threshold {
            break;
        }
        let x = points.get(i);
        for &j in &order[..ii] {
            if (radii[j] + ri) * (1.0 + BOUND_SLACK) < threshold {
                break;
            }
            let d = norm.pow_dist(x, points.get(j));
            if heap.len() < k {
                heap.push(Reverse(OrdF64(d)));
                if heap.len() == k {
                    threshold = norm.root(heap.peek().unwrap().0 .0);
                }
            } else if d > heap.peek().unwrap().0 .0 {
                heap.pop();
                heap.push(Reverse(OrdF64(d)));
                threshold = norm.root(heap.peek().unwrap().0 .0);
            }
        }
    }
    let mut values: Vec<f64> = heap.into_iter().map(|Reverse(OrdF64(d))| norm.root(d)).collect();
    values.sort_unstable_by(|a, b| b.total_cmp(a));
    Ok(TopKDistances { values })
}

/// Normalizing rate for the deficit `2a - D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RateSpec {
    /// `n^{2/(d+1)}` (densities bounded away from zero at the poles).
    Main { d: usize },
    /// `n^{2/(d+1+2 beta)}`.
    #[serde(rename = "pearson_ii")]
    PearsonII { d: usize, beta: f64 },
    /// `n^{p/(d+p-1)}` for the `p`-norm diameter of a `p`-superellipsoid.
    PNorm { d: usize, p: f64 },
    /// `b_n = (sigma/2)^{2/q} n^{4/q}` with `q = 2d - e + 4 beta + 3`.
    MultiMajor { d: usize, e: usize, beta: f64 },
}

impl RateSpec {
    pub fn exponent(&self) -> f64 {
        match *self {
            RateSpec::Main { d } => 2.0 / (d as f64 + 1.0),
            RateSpec::PearsonII { d, beta } => 2.0 / (d as f64 + 1.0 + 2.0 * beta),
            RateSpec::PNorm { d, p } => p / (d as f64 + p - 1.0),
            RateSpec::MultiMajor { d, e, beta } => {
                4.0 / (2.0 * d as f64 - e as f64 + 4.0 * beta + 3.0)
            }
        }
    }

    /// Multiplier applied to `2a - D` for intensity `n`.
    pub fn factor(&self, n: f64) -> Result<f64> {
        match *self {
            RateSpec::MultiMajor { d, e, beta } => Ok(MultiMajorBounds::new(d, e, beta)?.b_n(n)),
            _ => Ok(n.powf(self.exponent())),
        }
    }
}

/// `factor(n) * (2a - diam_value)`, where `n` is the requested intensity
/// (not the realized Poisson count).
pub fn scaled_statistic(diam_value: f64, n: f64, rate: RateSpec, half_diameter: f64) -> Result<f64> {
    Ok(rate.factor(n)? * (2.0 * half_diameter - diam_value))
}
