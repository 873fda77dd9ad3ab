//! Bounding distributions for ellipsoids with `e >= 2` equal major half-axes
//! under a Pearson Type II law.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiMajorBounds {
    pub d: usize,
    pub e: usize,
    pub beta: f64,
    /// Tail constant: `P(1 - |Z_bar| <= s) ~ a s^alpha`.
    pub a: f64,
    pub alpha: f64,
    pub sigma: f64,
    /// `q = 2d - e + 4 beta + 3`.
    pub q: f64,
    pub bn_prefactor: f64,
    pub bn_exponent: f64,
    pub g_exponent: f64,
}

impl MultiMajorBounds {
    pub fn new(d: usize, e: usize, beta: f64) -> Result<Self> {
        if d < 3 || e < 2 || e > d - 1 {
            return Err(Error::DimensionMismatch(format!(
                "need d >= 3 and 2 <= e <= d - 1 (got d = {d}, e = {e})"
            )));
        }
        if !(beta.is_finite() && beta > -1.0) {
            return Err(Error::BetaOutOfRange(beta));
        }
        let (df, ef) = (d as f64, e as f64);
        let ln_a = ln_gamma(df / 2.0 + beta + 1.0) - ln_gamma((df - ef) / 2.0 + beta + 2.0)
            - ef / 2.0 * PI.ln()
            + ef.ln()
            + special::ln_unit_ball_volume(e)
            + ((df - ef) / 2.0 + beta) * 2.0_f64.ln();
        let a = ln_a.exp();
        let alpha = (df - ef) / 2.0 + beta + 1.0;
        let ln_sigma = (ef - 2.0) * 2.0_f64.ln() + ln_gamma(ef / 2.0) + 2.0 * ln_a
            + 2.0 * ln_gamma(alpha + 1.0)
            - 0.5 * PI.ln()
            - ln_gamma((ef + 1.0) / 2.0 + 2.0 * alpha);
        let sigma = ln_sigma.exp();
        let q = 2.0 * df - ef + 4.0 * beta + 3.0;
        Ok(MultiMajorBounds {
            d,
            e,
            beta,
            a,
            alpha,
            sigma,
            q,
            bn_prefactor: (sigma / 2.0).powf(2.0 / q),
            bn_exponent: 4.0 / q,
            g_exponent: q / 2.0,
        })
    }

    pub fn b_n(&self, n: f64) -> f64 {
        self.bn_prefactor * n.powf(self.bn_exponent)
    }

    /// `G(t) = 1 - exp(-t^{q/2})`, zero for `t <= 0`.
    pub fn g(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            -(-t.powf(self.g_exponent)).exp_m1()
        }
    }

    pub fn g_quantile(&self, prob: f64) -> f64 {
        (-(-prob).ln_1p()).powf(1.0 / self.g_exponent)
    }

    /// `(G(t), G(t / (1 - a_next^2)))`.
    pub fn band(&self, t: f64, a_next: f64) -> (f64, f64) {
        (self.g(t), self.g(t / (1.0 - a_next * a_next)))
    }
}

pub fn bounds_distribution(d: usize, e: usize, beta: f64) -> Result<MultiMajorBounds> {
    MultiMajorBounds::new(d, e, beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d3_e2_beta0_constants() {
        let b = bounds_distribution(3, 2, 0.0).unwrap();
        assert!((b.alpha - 1.5).abs() < 1e-15);
        assert!((b.a - 2.0 * 2.0_f64.sqrt()).abs() < 1e-12);
        assert!((b.g_exponent - 3.5).abs() < 1e-15);
        assert!((b.bn_exponent - 4.0 / 7.0).abs() < 1e-15);
        // sigma = 8 Gamma(5/2)^2 / (sqrt(pi) Gamma(9/2))
        let g52 = 0.75 * PI.sqrt();
        let g92 = 105.0 / 16.0 * PI.sqrt();
        let sigma = 8.0 * g52 * g52 / (PI.sqrt() * g92);
        assert!((b.sigma - sigma).abs() < 1e-12);
    }

    #[test]
    fn g_is_a_cdf() {
        let b = bounds_distribution(4, 2, 1.0).unwrap();
        assert_eq!(b.g(0.0), 0.0);
        assert!(b.g(1e3) > 1.0 - 1e-15);
        let mut prev = 0.0;
        for i in 1..100 {
            let v = b.g(i as f64 * 0.05);
            assert!(v >= prev);
            prev = v;
        }
        let t = b.g_quantile(0.3);
        assert!((b.g(t) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn band_collapses_without_minor_axis() {
        let b = bounds_distribution(3, 2, 0.0).unwrap();
        let (lo, hi) = b.band(0.7, 0.0);
        assert_eq!(lo, hi);
        assert_eq!(b.band(0.0, 0.5), (0.0, 0.0));
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(matches!(bounds_distribution(3, 3, 0.0), Err(Error::DimensionMismatch(_))));
        assert!(matches!(bounds_distribution(3, 1, 0.0), Err(Error::DimensionMismatch(_))));
        assert!(matches!(bounds_distribution(2, 2, 0.0), Err(Error::DimensionMismatch(_))));
        assert!(matches!(bounds_distribution(3, 2, -1.0), Err(Error::BetaOutOfRange(_))));
    }
}
