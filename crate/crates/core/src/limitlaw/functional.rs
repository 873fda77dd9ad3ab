//! Pairwise functionals of the limit processes and their order statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::points::Points;

/// `x_1 + y_1 - |x~ - y~|^2 / (4a)`.
pub fn functional_g(x: &[f64], y: &[f64], a: f64) -> f64 {
    let sq: f64 = x[1..].iter().zip(&y[1..]).map(|(u, v)| (u - v) * (u - v)).sum();
    x[0] + y[0] - sq / (4.0 * a)
}

/// `x_1 + y_1 - |x~ - y~|_p^p / (p (2 a_1)^{p-1})`.
pub fn functional_g_p(x: &[f64], y: &[f64], a1: f64, p: f64) -> f64 {
    let s: f64 = x[1..].iter().zip(&y[1..]).map(|(u, v)| (u - v).abs().powf(p)).sum();
    x[0] + y[0] - s / (p * (2.0 * a1).powf(p - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Functional {
    Quadratic { a: f64 },
    PNorm { a1: f64, p: f64 },
}

impl Functional {
    #[inline]
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        match *self {
            Functional::Quadratic { a } => functional_g(x, y, a),
            Functional::PNorm { a1, p } => functional_g_p(x, y, a1, p),
        }
    }
}

/// The k smallest functional values over the cross product, ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSample {
    pub t_values: Vec<f64>,
}

pub fn limit_min_k(left: &Points, right: &Points, functional: Functional, k: usize) -> Result<LimitSample> {
    if k == 0 {
        return Err(Error::invalid("k", "must be >= 1"));
    }
    if left.is_empty() || right.is_empty() {
        return Err(Error::EmptyProcess);
    }
    let available = left.len() * right.len();
    if available < k {
        return Err(Error::NotEnoughPairs { k, available });
    }
    if k == 1 {
        let mut best = f64::INFINITY;
        for x in left.iter() {
            for y in right.iter() {
                best = best.min(functional.eval(x, y));
            }
        }
        return Ok(LimitSample { t_values: vec![best] });
    }
    let mut all = Vec::with_capacity(available);
    for x in left.iter() {
        for y in right.iter() {
            all.push(functional.eval(x, y));
        }
    }
    all.select_nth_unstable_by(k - 1, f64::total_cmp);
    all.truncate(k);
    all.sort_unstable_by(f64::total_cmp);
    Ok(LimitSample { t_values: all })
}

/// `min_i { x_1 - |x~|^2 / (4 a_1) }`, the limit when only one pole carries
/// the slower-vanishing density.
pub fn one_sided_limit(left: &Points, a1: f64) -> Result<f64> {
    if left.is_empty() {
        return Err(Error::EmptyProcess);
    }
    Ok(left
        .iter()
        .map(|x| x[0] - x[1..].iter().map(|v| v * v).sum::<f64>() / (4.0 * a1))
        .fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_examples() {
        assert_eq!(functional_g(&[0.0, 0.0], &[0.0, 0.0], 1.0), 0.0);
        assert_eq!(functional_g(&[1.0, 1.0], &[1.0, -1.0], 1.0), 1.0);
        assert_eq!(
            functional_g(&[0.3, 0.2, -0.1], &[0.4, -0.5, 0.6], 1.5),
            functional_g(&[0.3, -0.5, 0.6], &[0.4, 0.2, -0.1], 1.5)
        );
        assert_eq!(functional_g_p(&[0.2, 0.5], &[0.3, 0.0], 1.0, 1.0), 0.2 + 0.3 - 0.5);
    }

    #[test]
    fn min_k_examples() {
        let l = Points::from_rows(&[vec![1.0, 0.0]]);
        let r = Points::from_rows(&[vec![2.0, 0.0]]);
        let s = limit_min_k(&l, &r, Functional::Quadratic { a: 1.0 }, 1).unwrap();
        assert_eq!(s.t_values, vec![3.0]);
        assert_eq!(limit_min_k(&Points::new(2), &r, Functional::Quadratic { a: 1.0 }, 1), Err(Error::EmptyProcess));
        assert!(matches!(
            limit_min_k(&l, &r, Functional::Quadratic { a: 1.0 }, 2),
            Err(Error::NotEnoughPairs { .. })
        ));
    }

    #[test]
    fn one_sided_examples() {
        assert_eq!(one_sided_limit(&Points::from_rows(&[vec![1.0, 0.0]]), 1.0).unwrap(), 1.0);
        assert_eq!(one_sided_limit(&Points::new(2), 1.0), Err(Error::EmptyProcess));
    }
}
