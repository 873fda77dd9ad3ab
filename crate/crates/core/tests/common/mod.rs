//! Independent reference implementations used to check the library.
//! Everything here is deliberately naive: rejection from bounding boxes,
//! brute-force enumeration, midpoint quadrature.

#![allow(dead_code)]

use diamlimit::experiments::{ks_distance, Ecdf};
use diamlimit::limitlaw::{IntensitySpec, ParaboloidShape, TruncatedParaboloid};
use diamlimit::Points;
use rand::Rng;

/// Uniform point of the cube `[-1, 1]^dim` conditioned on the unit ball.
fn ball_by_rejection<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        if x.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
            return x;
        }
    }
}

pub fn rejection_ellipsoid<R: Rng>(half_axes: &[f64], n: usize, rng: &mut R) -> Points {
    let mut pts = Points::new(half_axes.len());
    for _ in 0..n {
        let x = ball_by_rejection(rng, half_axes.len());
        let z: Vec<f64> = x.iter().zip(half_axes).map(|(u, a)| u * a).collect();
        pts.push(&z);
    }
    pts
}

/// Pearson Type II with `2 beta + 2 = k` a positive integer: the first `d`
/// coordinates of a uniform point on the unit sphere of `R^{d+k}` have
/// density proportional to `(1 - |x|^2)^{(k-2)/2}`.
pub fn rejection_pearson<R: Rng>(half_axes: &[f64], beta: f64, n: usize, rng: &mut R) -> Points {
    let k = 2.0 * beta + 2.0;
    assert!(k >= 1.0 && k.fract() == 0.0, "oracle needs 2 beta + 2 integer");
    let d = half_axes.len();
    let mut pts = Points::new(d);
    for _ in 0..n {
        let x = loop {
            let x = ball_by_rejection(rng, d + k as usize);
            let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if r > 1e-3 {
                break x.iter().map(|v| v / r).collect::<Vec<_>>();
            }
        };
        let z: Vec<f64> = x[..d].iter().zip(half_axes).map(|(u, a)| u * a).collect();
        pts.push(&z);
    }
    pts
}

pub fn rejection_superellipsoid<R: Rng>(p: f64, half_axes: &[f64], n: usize, rng: &mut R) -> Points {
    let mut pts = Points::new(half_axes.len());
    while pts.len() < n {
        let x: Vec<f64> = (0..half_axes.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        if x.iter().map(|v| v.abs().powf(p)).sum::<f64>() <= 1.0 {
            let z: Vec<f64> = x.iter().zip(half_axes).map(|(u, a)| u * a).collect();
            pts.push(&z);
        }
    }
    pts
}

/// Bounding box of a truncated paraboloid: `[0, b] x prod [-r_k, r_k]`.
pub fn paraboloid_box(region: &TruncatedParaboloid) -> (Vec<f64>, Vec<f64>) {
    let b = region.b;
    let d = region.dim();
    let mut lo = vec![0.0; d];
    let mut hi = vec![b; d];
    for k in 1..d {
        let r = match &region.shape {
            ParaboloidShape::Quadratic(g) => {
                // |z_k| <= sqrt(2 b / kappa_min) on the whole cap
                (2.0 * b / g.min_curvature()).sqrt()
            }
            ParaboloidShape::PNorm { p, half_axes } => half_axes[k] * (p * b / half_axes[0]).powf(1.0 / p),
        };
        lo[k] = -r;
        hi[k] = r;
    }
    (lo, hi)
}

fn lambda_weight(z: &[f64], beta: f64, half_axes: &[f64]) -> f64 {
    let w = 2.0 * z[0] / half_axes[0]
        - z[1..].iter().zip(&half_axes[1..]).map(|(x, a)| (x / a) * (x / a)).sum::<f64>();
    if w <= 0.0 {
        0.0
    } else {
        w.powf(beta)
    }
}

/// Points of the normalized intensity on the region, by rejection from the
/// bounding box. Needs `beta >= 0` for Lambda_beta.
pub fn rejection_prm_points<R: Rng>(
    region: &TruncatedParaboloid,
    intensity: &IntensitySpec,
    n: usize,
    rng: &mut R,
) -> Points {
    let (lo, hi) = paraboloid_box(region);
    let (beta, axes, envelope) = match intensity {
        IntensitySpec::Uniform { .. } => (0.0, vec![], 1.0),
        IntensitySpec::LambdaBeta { beta, half_axes, .. } => {
            assert!(*beta >= 0.0);
            (*beta, half_axes.clone(), (2.0 * region.b / half_axes[0]).powf(*beta))
        }
    };
    let mut pts = Points::new(region.dim());
    while pts.len() < n {
        let z: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| rng.random_range(*l..*h)).collect();
        if !region.contains(&z) {
            continue;
        }
        if !axes.is_empty() && rng.random::<f64>() * envelope > lambda_weight(&z, beta, &axes) {
            continue;
        }
        pts.push(&z);
    }
    pts
}

/// Hit-or-miss estimate of the intensity mass of the region and its
/// standard error.
pub fn rejection_mass<R: Rng>(
    region: &TruncatedParaboloid,
    intensity: &IntensitySpec,
    trials: usize,
    rng: &mut R,
) -> (f64, f64) {
    let (lo, hi) = paraboloid_box(region);
    let vol: f64 = lo.iter().zip(&hi).map(|(l, h)| h - l).product();
    let (mut s, mut s2) = (0.0, 0.0);
    let mut z = vec![0.0; lo.len()];
    for _ in 0..trials {
        for k in 0..z.len() {
            z[k] = rng.random_range(lo[k]..hi[k]);
        }
        if region.contains(&z) {
            let f = match intensity {
                IntensitySpec::Uniform { density } => *density,
                IntensitySpec::LambdaBeta { alpha, beta, half_axes } => alpha * lambda_weight(&z, *beta, half_axes),
            };
            s += f;
            s2 += f * f;
        }
    }
    let n = trials as f64;
    let mean = s / n;
    let var = s2 / n - mean * mean;
    (vol * mean, vol * (var / n).sqrt())
}

/// All pairwise distances, descending.
pub fn brute_all_distances(pts: &Points, p: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let s: f64 = pts.get(i).iter().zip(pts.get(j)).map(|(a, b)| (a - b).abs().powf(p)).sum();
            out.push(s.powf(1.0 / p));
        }
    }
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// Midpoint rule for `int int f` over a rectangle.
pub fn midpoint_2d(f: impl Fn(f64, f64) -> f64, x: (f64, f64), y: (f64, f64), cells: usize) -> f64 {
    let hx = (x.1 - x.0) / cells as f64;
    let hy = (y.1 - y.0) / cells as f64;
    let mut s = 0.0;
    for i in 0..cells {
        let u = x.0 + (i as f64 + 0.5) * hx;
        for j in 0..cells {
            s += f(u, y.0 + (j as f64 + 0.5) * hy);
        }
    }
    s * hx * hy
}

/// Largest two-sample KS distance over the coordinates and the given
/// scalar summary.
pub fn ks_coordinates(a: &Points, b: &Points, summary: impl Fn(&[f64]) -> f64) -> f64 {
    let mut worst = 0.0_f64;
    let col = |p: &Points, f: &dyn Fn(&[f64]) -> f64| Ecdf::new(p.iter().map(f).collect()).unwrap();
    for k in 0..a.dim() {
        let f = move |z: &[f64]| z[k];
        worst = worst.max(ks_distance(&col(a, &f), &col(b, &f)).unwrap());
    }
    worst.max(ks_distance(&col(a, &summary), &col(b, &summary)).unwrap())
}

/// Plain Pearson correlation.
pub fn correlation(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    sxy / (sxx * syy).sqrt()
}

/// One line per criterion, collected and printed at the end.
#[derive(Default)]
pub struct Ledger {
    lines: Vec<(usize, bool, String)>,
}

impl Ledger {
    pub fn record(&mut self, id: usize, pass: bool, detail: impl Into<String>) {
        let detail = detail.into();
        println!("criterion {id:>2}: {} {detail}", if pass { "PASS" } else { "FAIL" });
        self.lines.push((id, pass, detail));
    }

    pub fn results(&self) -> impl Iterator<Item = (usize, bool, &str)> {
        self.lines.iter().map(|(id, pass, detail)| (*id, *pass, detail.as_str()))
    }
}
