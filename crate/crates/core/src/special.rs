//! Gamma-function constants and a small Gauss-Legendre rule.

use statrs::function::beta::beta_reg;
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

/// `ln` of the volume of the unit Euclidean ball in `m` dimensions.
pub fn ln_unit_ball_volume(m: usize) -> f64 {
    let h = m as f64 / 2.0;
    h * PI.ln() - ln_gamma(h + 1.0)
}

pub fn unit_ball_volume(m: usize) -> f64 {
    ln_unit_ball_volume(m).exp()
}

/// `ln` of the volume of the unit `l_p` ball in `m` dimensions,
/// `(2 Gamma(1 + 1/p))^m / Gamma(1 + m/p)`.
pub fn ln_lp_ball_volume(m: usize, p: f64) -> f64 {
    m as f64 * (2.0_f64.ln() + ln_gamma(1.0 + 1.0 / p)) - ln_gamma(1.0 + m as f64 / p)
}

/// Volume of the ellipsoid with the given half-axes.
pub fn ellipsoid_volume(half_axes: &[f64]) -> f64 {
    let ln_prod: f64 = half_axes.iter().map(|a| a.ln()).sum();
    (ln_unit_ball_volume(half_axes.len()) + ln_prod).exp()
}

/// Volume of `{ sum (|z_k|/a_k)^p <= 1 }`.
pub fn superellipsoid_volume(p: f64, half_axes: &[f64]) -> f64 {
    let ln_prod: f64 = half_axes.iter().map(|a| a.ln()).sum();
    (ln_lp_ball_volume(half_axes.len(), p) + ln_prod).exp()
}

/// Normalizing constant of the Pearson Type II density on the ellipsoid,
/// `Gamma(d/2 + beta + 1) / (Gamma(beta + 1) pi^{d/2} prod a_i)`.
pub fn pearson2_constant(half_axes: &[f64], beta: f64) -> f64 {
    let h = half_axes.len() as f64 / 2.0;
    let ln_prod: f64 = half_axes.iter().map(|a| a.ln()).sum();
    (ln_gamma(h + beta + 1.0) - ln_gamma(beta + 1.0) - h * PI.ln() - ln_prod).exp()
}

/// `int_{|w|^2 <= 1} (1 - |w|^2)^beta dw` over the unit ball in `m`
/// dimensions: `pi^{m/2} Gamma(beta + 1) / Gamma(beta + 1 + m/2)`.
pub fn ln_weighted_ball_integral(m: usize, beta: f64) -> f64 {
    let h = m as f64 / 2.0;
    h * PI.ln() + ln_gamma(beta + 1.0) - ln_gamma(beta + 1.0 + h)
}

/// `int_0^s (1 - t^2)^beta dt` for `s` in `[-1, 1]` (odd in `s`).
pub fn weighted_chord_integral(s: f64, beta: f64) -> f64 {
    let s = s.clamp(-1.0, 1.0);
    if s == 0.0 {
        return 0.0;
    }
    let full = 0.5 * (ln_gamma(0.5) + ln_gamma(beta + 1.0) - ln_gamma(beta + 1.5)).exp();
    let v = if s.abs() == 1.0 {
        full
    } else {
        full * beta_reg(0.5, beta + 1.0, s * s)
    };
    v.copysign(s)
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pnm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre quadrature of `f` over `[lo, hi]`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, panels: usize, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let h = (hi - lo) / panels as f64;
    let mut acc = 0.0;
    for k in 0..panels {
        let mid = lo + (k as f64 + 0.5) * h;
        for (x, w) in rule.0.iter().zip(&rule.1) {
            acc += w * f(mid + 0.5 * h * x);
        }
    }
    acc * 0.5 * h
}
