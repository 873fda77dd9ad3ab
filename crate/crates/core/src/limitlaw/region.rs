//! Truncated paraboloids, their intensity measures and Poisson sampling.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ellipsoid_hessian, in_limit_set, in_limit_set_p, PoleCapGeometry};
use crate::points::Points;
use crate::sampling::{unit_ball_point, unit_direction, unit_lp_ball_point};
use crate::special;

/// The untruncated limit set.
#[derive(Debug, Clone, PartialEq)]
pub enum ParaboloidShape {
    /// `{ z~^T H z~ / 2 <= z_1 }`.
    Quadratic(PoleCapGeometry),
    /// `{ sum_{k>=2} (|z_k|/a_k)^p <= p z_1 / a_1 }`.
    PNorm { p: f64, half_axes: Vec<f64> },
}

/// A limit set cut off at height `z_1 <= b`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedParaboloid {
    pub shape: ParaboloidShape,
    pub b: f64,
}

fn check_b(b: f64) -> Result<()> {
    if b.is_finite() && b > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("b", format!("truncation height must be positive, got {b}")))
    }
}

impl TruncatedParaboloid {
    pub fn quadratic(geom: PoleCapGeometry, b: f64) -> Result<Self> {
        check_b(b)?;
        Ok(TruncatedParaboloid {
            shape: ParaboloidShape::Quadratic(geom),
            b,
        })
    }

    /// Osculating paraboloid at either pole of the ellipsoid with `half_axes`.
    pub fn ellipsoidal(half_axes: &[f64], b: f64) -> Result<Self> {
        let geom = PoleCapGeometry::from_hessian(half_axes[0], &ellipsoid_hessian(half_axes)?)?;
        Self::quadratic(geom, b)
    }

    pub fn p_norm(p: f64, half_axes: &[f64], b: f64) -> Result<Self> {
        check_b(b)?;
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::invalid("p", format!("must be >= 1, got {p}")));
        }
        if half_axes.len() < 2 || half_axes.iter().any(|a| !(*a > 0.0)) {
            return Err(Error::invalid("half_axes", "need d >= 2 positive half-axes"));
        }
        Ok(TruncatedParaboloid {
            shape: ParaboloidShape::PNorm {
                p,
                half_axes: half_axes.to_vec(),
            },
            b,
        })
    }

    pub fn with_truncation(&self, b: f64) -> Result<Self> {
        check_b(b)?;
        Ok(TruncatedParaboloid {
            shape: self.shape.clone(),
            b,
        })
    }

    pub fn dim(&self) -> usize {
        match &self.shape {
            ParaboloidShape::Quadratic(g) => g.dim(),
            ParaboloidShape::PNorm { half_axes, .. } => half_axes.len(),
        }
    }

    /// Membership in the untruncated limit set.
    pub fn in_limit_set(&self, z: &[f64]) -> bool {
        match &self.shape {
            ParaboloidShape::Quadratic(g) => in_limit_set(z, g),
            ParaboloidShape::PNorm { p, half_axes } => in_limit_set_p(z, *p, half_axes),
        }
    }

    pub fn contains(&self, z: &[f64]) -> bool {
        z[0] <= self.b && self.in_limit_set(z)
    }

    /// Half-axes that define the Lambda_beta weight, when the shape is the
    /// osculating paraboloid of an ellipsoid with exactly those half-axes.
    fn lambda_axes_match(&self, half_axes: &[f64]) -> Result<()> {
        match &self.shape {
            ParaboloidShape::Quadratic(g) => {
                let h = ellipsoid_hessian(half_axes)
                    .map_err(|e| Error::IntensityMismatch(e.to_string()))?;
                if h.nrows() != g.tangent_dim() {
                    return Err(Error::IntensityMismatch("dimension differs from region".into()));
                }
                let scale = h.amax().max(1.0);
                if (g.hessian() - h).amax() > 1e-9 * scale || g.half_diameter() != half_axes[0] {
                    return Err(Error::IntensityMismatch(
                        "Lambda_beta requires the osculating paraboloid of the ellipsoid with the same half-axes"
                            .into(),
                    ));
                }
                Ok(())
            }
            ParaboloidShape::PNorm { p, half_axes: own } => {
                if *p == 2.0 && own.as_slice() == half_axes {
                    Ok(())
                } else {
                    Err(Error::IntensityMismatch(
                        "Lambda_beta is only defined on the quadratic (p = 2) paraboloid".into(),
                    ))
                }
            }
        }
    }
}

/// Intensity of a limit Poisson process on a paraboloid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntensitySpec {
    /// Constant density (the density of the sampling law at the pole).
    Uniform { density: f64 },
    /// `alpha * Lambda_beta` with weight `(2 z_1/a_1 - sum_{k>=2} (z_k/a_k)^2)^beta`.
    LambdaBeta {
        alpha: f64,
        beta: f64,
        half_axes: Vec<f64>,
    },
}

impl IntensitySpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            IntensitySpec::Uniform { density } => {
                if density.is_finite() && *density > 0.0 {
                    Ok(())
                } else {
                    Err(Error::invalid("density", "must be positive"))
                }
            }
            IntensitySpec::LambdaBeta {
                alpha,
                beta,
                half_axes,
            } => {
                if !(alpha.is_finite() && *alpha > 0.0) {
                    return Err(Error::invalid("alpha", "must be positive"));
                }
                if !(beta.is_finite() && *beta > -1.0) {
                    return Err(Error::BetaOutOfRange(*beta));
                }
                if half_axes.len() < 2 || half_axes.iter().any(|a| !(*a > 0.0)) {
                    return Err(Error::invalid("half_axes", "need d >= 2 positive half-axes"));
                }
                Ok(())
            }
        }
    }

    fn check_region(&self, region: &TruncatedParaboloid) -> Result<()> {
        self.validate()?;
        if let IntensitySpec::LambdaBeta { half_axes, .. } = self {
            region.lambda_axes_match(half_axes)?;
        }
        Ok(())
    }

    /// Exponent beta of the weight (0 for uniform intensities).
    pub fn beta(&self) -> f64 {
        match self {
            IntensitySpec::Uniform { .. } => 0.0,
            IntensitySpec::LambdaBeta { beta, .. } => *beta,
        }
    }

    /// Scales the intensity by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        match self {
            IntensitySpec::Uniform { density } => IntensitySpec::Uniform {
                density: density * factor,
            },
            IntensitySpec::LambdaBeta {
                alpha,
                beta,
                half_axes,
            } => IntensitySpec::LambdaBeta {
                alpha: alpha * factor,
                beta: *beta,
                half_axes: half_axes.clone(),
            },
        }
    }

    /// Intensity density at `z`, assuming `z` lies in the region.
    pub fn density_at(&self, z: &[f64]) -> f64 {
        match self {
            IntensitySpec::Uniform { density } => *density,
            IntensitySpec::LambdaBeta {
                alpha,
                beta,
                half_axes,
            } => {
                let w = 2.0 * z[0] / half_axes[0]
                    - z[1..]
                        .iter()
                        .zip(&half_axes[1..])
                        .map(|(x, a)| (x / a) * (x / a))
                        .sum::<f64>();
                if w <= 0.0 {
                    0.0
                } else {
                    alpha * w.powf(*beta)
                }
            }
        }
    }
}

/// Total intensity of the truncated region.
///
/// Cross-sections at height `z_1` are ellipsoids (or `l_p` balls) whose
/// content scales like `z_1^{m/2}` (resp. `z_1^{m/p}`), `m = d - 1`; the
/// Lambda_beta weight adds `z_1^beta` times a Beta-function factor.
pub fn paraboloid_mass(region: &TruncatedParaboloid, intensity: &IntensitySpec) -> Result<f64> {
    intensity.check_region(region)?;
    let b = region.b;
    let m = region.dim() - 1;
    let mh = m as f64 / 2.0;
    match (intensity, &region.shape) {
        (IntensitySpec::Uniform { density }, ParaboloidShape::Quadratic(g)) => {
            let ln = special::ln_unit_ball_volume(m) + mh * 2.0_f64.ln() + (mh + 1.0) * b.ln()
                - (mh + 1.0).ln()
                - 0.5 * g.determinant().ln();
            Ok(density * ln.exp())
        }
        (IntensitySpec::Uniform { density }, ParaboloidShape::PNorm { p, half_axes }) => {
            let e = m as f64 / p;
            let ln_prod: f64 = half_axes[1..].iter().map(|a| a.ln()).sum();
            let ln = special::ln_lp_ball_volume(m, *p) + ln_prod + e * (p / half_axes[0]).ln()
                + (e + 1.0) * b.ln()
                - (e + 1.0).ln();
            Ok(density * ln.exp())
        }
        (
            IntensitySpec::LambdaBeta {
                alpha,
                beta,
                half_axes,
            },
            _,
        ) => {
            let gamma = beta + mh;
            let ln_prod: f64 = half_axes[1..].iter().map(|a| a.ln()).sum();
            let ln = ln_prod + special::ln_weighted_ball_integral(m, *beta)
                + gamma * (2.0 / half_axes[0]).ln()
                + (gamma + 1.0) * b.ln()
                - (gamma + 1.0).ln();
            Ok(alpha * ln.exp())
        }
    }
}

/// One realization of the Poisson process with the given intensity on the
/// truncated region: a `Poisson(mass)` count of i.i.d. points.
pub fn sample_prm<R: Rng + ?Sized>(
    region: &TruncatedParaboloid,
    intensity: &IntensitySpec,
    rng: &mut R,
) -> Result<Points> {
    let mass = paraboloid_mass(region, intensity)?;
    let count = Poisson::new(mass)
        .map_err(|e| Error::invalid("mass", e.to_string()))?
        .sample(rng) as usize;
    Ok(sample_prm_points(region, intensity, count, rng))
}

/// `count` i.i.d. points from the normalized intensity on the region.
pub fn sample_prm_points<R: Rng + ?Sized>(
    region: &TruncatedParaboloid,
    intensity: &IntensitySpec,
    count: usize,
    rng: &mut R,
) -> Points {
    let d = region.dim();
    let m = d - 1;
    let b = region.b;
    let mut pts = Points::with_capacity(d, count);
    let mut z = vec![0.0; d];
    let mut w = vec![0.0; m];
    match (intensity, &region.shape) {
        (IntensitySpec::Uniform { .. }, ParaboloidShape::Quadratic(g)) => {
            let height_exp = 2.0 / (d as f64 + 1.0);
            let mut y = vec![0.0; m];
            for _ in 0..count {
                let u: f64 = rng.random();
                z[0] = b * u.powf(height_exp);
                unit_ball_point(rng, &mut w);
                for j in 0..m {
                    y[j] = w[j] * (2.0 * z[0] / g.curvatures()[j]).sqrt();
                }
                g.from_principal(&y, &mut z[1..]);
                pts.push(&z);
            }
        }
        (IntensitySpec::Uniform { .. }, ParaboloidShape::PNorm { p, half_axes }) => {
            let height_exp = 1.0 / (m as f64 / p + 1.0);
            let gamma = Gamma::new(1.0 / p, 1.0).expect("positive shape");
            for _ in 0..count {
                let u: f64 = rng.random();
                z[0] = b * u.powf(height_exp);
                unit_lp_ball_point(rng, &gamma, *p, &mut w);
                let r = (p * z[0] / half_axes[0]).powf(1.0 / p);
                for k in 0..m {
                    z[k + 1] = half_axes[k + 1] * r * w[k];
                }
                pts.push(&z);
            }
        }
        (
            IntensitySpec::LambdaBeta {
                beta, half_axes, ..
            },
            _,
        ) => {
            let height_exp = 1.0 / (beta + (d as f64 + 1.0) / 2.0);
            let ga = Gamma::new(m as f64 / 2.0, 1.0).expect("positive shape");
            let gb = Gamma::new(beta + 1.0, 1.0).expect("positive shape");
            for _ in 0..count {
                let u: f64 = rng.random();
                z[0] = b * u.powf(height_exp);
                let c = 2.0 * z[0] / half_axes[0];
                let frac = loop {
                    let x: f64 = ga.sample(rng);
                    let y: f64 = gb.sample(rng);
                    if y > 0.0 {
                        break x / (x + y);
                    }
                };
                unit_direction(rng, &mut w);
                let r = (c * frac).sqrt();
                for k in 0..m {
                    z[k + 1] = half_axes[k + 1] * r * w[k];
                }
                pts.push(&z);
            }
        }
    }
    pts
}

/// Axis-aligned box `[lo_1, hi_1] x ... x [lo_d, hi_d]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl TestBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.iter().zip(&hi).any(|(l, h)| !(l < h)) {
            return Err(Error::invalid("box", "need lo < hi in every coordinate"));
        }
        Ok(TestBox { lo, hi })
    }

    pub fn contains(&self, z: &[f64]) -> bool {
        z.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (l, h))| *l <= *x && *x <= *h)
    }
}

const BOX_PANELS: usize = 400;
const BOX_NODES: usize = 8;

/// Limit measure `intensity(B)` of a box for quadratic shapes in `d = 2, 3`
/// (truncation ignored). The innermost `z_2` integral is exact; the outer
/// ones use composite Gauss-Legendre.
pub fn limit_box_measure(shape: &ParaboloidShape, intensity: &IntensitySpec, bx: &TestBox) -> Result<f64> {
    let ParaboloidShape::Quadratic(g) = shape else {
        return Err(Error::invalid("shape", "box measure is implemented for quadratic paraboloids"));
    };
    let d = g.dim();
    if !(2..=3).contains(&d) || bx.lo.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "box measure supports d in {{2, 3}} with a matching box (d = {d})"
        )));
    }
    let region = TruncatedParaboloid::quadratic(g.clone(), 1.0)?;
    intensity.check_region(&region)?;
    let h = g.hessian();
    let rule = special::gauss_legendre(BOX_NODES);
    let z1_lo = bx.lo[0].max(0.0);
    let z1_hi = bx.hi[0];

    // integral over z_2 in the box for fixed (z_1, z_3)
    let chord = |z1: f64, z3: f64| -> f64 {
        match intensity {
            IntensitySpec::Uniform { density } => {
                // h22/2 z2^2 + h23 z3 z2 + h33/2 z3^2 - z1 <= 0
                let qa = 0.5 * h[(0, 0)];
                let (qb, qc) = if d == 3 {
                    (h[(0, 1)] * z3, 0.5 * h[(1, 1)] * z3 * z3 - z1)
                } else {
                    (0.0, -z1)
                };
                let disc = qb * qb - 4.0 * qa * qc;
                if disc <= 0.0 {
                    return 0.0;
                }
                let sq = disc.sqrt();
                let (r0, r1) = ((-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa));
                let lo = r0.max(bx.lo[1]);
                let hi = r1.min(bx.hi[1]);
                density * (hi - lo).max(0.0)
            }
            IntensitySpec::LambdaBeta {
                alpha,
                beta,
                half_axes,
            } => {
                let mut rest = 2.0 * z1 / half_axes[0];
                if d == 3 {
                    rest -= (z3 / half_axes[2]).powi(2);
                }
                if rest <= 0.0 {
                    return 0.0;
                }
                let half_width = half_axes[1] * rest.sqrt();
                let s0 = (bx.lo[1] / half_width).clamp(-1.0, 1.0);
                let s1 = (bx.hi[1] / half_width).clamp(-1.0, 1.0);
                if s1 <= s0 {
                    return 0.0;
                }
                alpha
                    * half_width
                    * rest.powf(*beta)
                    * (special::weighted_chord_integral(s1, *beta)
                        - special::weighted_chord_integral(s0, *beta))
            }
        }
    };

    let total = if d == 2 {
        special::integrate(|z1| chord(z1, 0.0), z1_lo, z1_hi, BOX_PANELS, &rule)
    } else {
        special::integrate(
            |z1| special::integrate(|z3| chord(z1, z3), bx.lo[2], bx.hi[2], BOX_PANELS / 4, &rule),
            z1_lo,
            z1_hi,
            BOX_PANELS,
            &rule,
        )
    };
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use std::f64::consts::PI;

    #[test]
    fn uniform_mass_ellipse_example() {
        let region = TruncatedParaboloid::ellipsoidal(&[1.0, 0.5], 10.0).unwrap();
        let mass = paraboloid_mass(&region, &IntensitySpec::Uniform { density: 2.0 / PI }).unwrap();
        let expected = 2.0 / PI * (2.0 * 2.0_f64.sqrt() / 3.0) * 10.0_f64.powf(1.5);
        assert!((mass - expected).abs() < 1e-10);
        assert!((mass - 18.99).abs() < 0.01);
    }

    #[test]
    fn uniform_mass_homogeneity() {
        let geom = PoleCapGeometry::from_hessian(
            1.0,
            &nalgebra::DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 3.0]),
        )
        .unwrap();
        let r = TruncatedParaboloid::quadratic(geom, 3.0).unwrap();
        let i = IntensitySpec::Uniform { density: 0.7 };
        let m1 = paraboloid_mass(&r, &i).unwrap();
        let m2 = paraboloid_mass(&r.with_truncation(6.0).unwrap(), &i).unwrap();
        assert!((m2 / m1 - 2.0_f64.powf(2.0)).abs() < 1e-12);
    }

    #[test]
    fn lambda_zero_equals_uniform() {
        let axes = [2.0, 1.0, 0.7];
        let r = TruncatedParaboloid::ellipsoidal(&axes, 4.0).unwrap();
        let u = paraboloid_mass(&r, &IntensitySpec::Uniform { density: 0.3 }).unwrap();
        let l = paraboloid_mass(
            &r,
            &IntensitySpec::LambdaBeta {
                alpha: 0.3,
                beta: 0.0,
                half_axes: axes.to_vec(),
            },
        )
        .unwrap();
        assert!((u - l).abs() < 1e-12 * u);
    }

    #[test]
    fn p_norm_mass_at_two_matches_quadratic() {
        let axes = [1.0, 0.5, 0.4];
        let q = TruncatedParaboloid::ellipsoidal(&axes, 5.0).unwrap();
        let p = TruncatedParaboloid::p_norm(2.0, &axes, 5.0).unwrap();
        let i = IntensitySpec::Uniform { density: 1.3 };
        let a = paraboloid_mass(&q, &i).unwrap();
        let b = paraboloid_mass(&p, &i).unwrap();
        assert!((a - b).abs() < 1e-12 * a);
    }

    #[test]
    fn lambda_requires_matching_axes() {
        let r = TruncatedParaboloid::ellipsoidal(&[1.0, 0.5], 4.0).unwrap();
        let wrong = IntensitySpec::LambdaBeta {
            alpha: 1.0,
            beta: 1.0,
            half_axes: vec![1.0, 0.4],
        };
        assert!(matches!(paraboloid_mass(&r, &wrong), Err(Error::IntensityMismatch(_))));
        let p = TruncatedParaboloid::p_norm(3.0, &[1.0, 0.5], 4.0).unwrap();
        let right_axes = IntensitySpec::LambdaBeta {
            alpha: 1.0,
            beta: 1.0,
            half_axes: vec![1.0, 0.5],
        };
        assert!(paraboloid_mass(&p, &right_axes).is_err());
    }

    #[test]
    fn prm_points_in_support() {
        let mut rng = stream(5, 0);
        let geom = PoleCapGeometry::from_hessian(
            1.0,
            &nalgebra::DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 3.0]),
        )
        .unwrap();
        let regions = [
            (
                TruncatedParaboloid::quadratic(geom, 3.0).unwrap(),
                IntensitySpec::Uniform { density: 2.0 },
            ),
            (
                TruncatedParaboloid::ellipsoidal(&[1.0, 0.5, 0.3], 2.0).unwrap(),
                IntensitySpec::LambdaBeta {
                    alpha: 3.0,
                    beta: -0.5,
                    half_axes: vec![1.0, 0.5, 0.3],
                },
            ),
            (
                TruncatedParaboloid::p_norm(1.5, &[1.0, 0.5, 0.3], 2.0).unwrap(),
                IntensitySpec::Uniform { density: 2.0 },
            ),
        ];
        for (region, intensity) in &regions {
            let pts = sample_prm_points(region, intensity, 2000, &mut rng);
            for z in pts.iter() {
                assert!(z[0] >= 0.0 && z[0] <= region.b);
                // tiny relative slack for the boundary rounding
                let mut inner = z.to_vec();
                inner[0] *= 1.0 + 1e-12;
                inner[0] += 1e-300;
                assert!(region.in_limit_set(&inner), "{z:?}");
            }
        }
    }

    #[test]
    fn box_measure_full_cross_section_equals_mass() {
        // the paraboloid cross-section |z2| <= 0.5 sqrt(2 z1) stays inside [-1, 1] for z1 <= 2
        let region = TruncatedParaboloid::ellipsoidal(&[1.0, 0.5], 2.0).unwrap();
        let bx = TestBox::new(vec![0.0, -1.0], vec![2.0, 1.0]).unwrap();
        for intensity in [
            IntensitySpec::Uniform { density: 2.0 / PI },
            IntensitySpec::LambdaBeta {
                alpha: 1.9,
                beta: 2.0,
                half_axes: vec![1.0, 0.5],
            },
            IntensitySpec::LambdaBeta {
                alpha: 1.0,
                beta: -0.5,
                half_axes: vec![1.0, 0.5],
            },
        ] {
            let exact = paraboloid_mass(&region, &intensity).unwrap();
            let quad = limit_box_measure(&region.shape, &intensity, &bx).unwrap();
            assert!((quad - exact).abs() < 1e-6 * exact, "{quad} vs {exact}");
        }
    }
}
