//! Samplers for the point distributions on `E` and Poissonized sample sizes.
//!
//! All samplers are direct (no rejection): a uniform direction, a radial
//! law, and a coordinatewise scaling by the half-axes.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::BodySpec;
use crate::points::Points;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionSpec {
    UniformEllipsoid,
    /// Density proportional to `(1 - z^T Sigma^{-1} z)^beta` on the open ellipsoid.
    #[serde(rename = "pearson_ii")]
    PearsonII { beta: f64 },
    UniformPSuperellipsoid { p: f64 },
}

impl DistributionSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DistributionSpec::UniformEllipsoid => Ok(()),
            DistributionSpec::PearsonII { beta } => {
                if beta.is_finite() && beta > -1.0 {
                    Ok(())
                } else {
                    Err(Error::BetaOutOfRange(beta))
                }
            }
            DistributionSpec::UniformPSuperellipsoid { p } => {
                if p.is_finite() && p >= 1.0 {
                    Ok(())
                } else {
                    Err(Error::invalid("p", format!("must be a finite real >= 1, got {p}")))
                }
            }
        }
    }

    /// Density exponent at the poles (0 for the uniform laws).
    pub fn beta(&self) -> f64 {
        match *self {
            DistributionSpec::PearsonII { beta } => beta,
            _ => 0.0,
        }
    }

    /// Checks that the distribution lives on `body`.
    pub fn check_body(&self, body: &BodySpec) -> Result<()> {
        self.validate()?;
        match (self, body) {
            (
                DistributionSpec::UniformEllipsoid | DistributionSpec::PearsonII { .. },
                BodySpec::Ellipsoid { .. },
            ) => Ok(()),
            (DistributionSpec::UniformPSuperellipsoid { p }, BodySpec::PSuperellipsoid { p: q, .. })
                if p == q =>
            {
                Ok(())
            }
            _ => Err(Error::invalid(
                "dist",
                format!("distribution {self:?} cannot be sampled on body {body:?}"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMode {
    Fixed,
    Poissonized,
}

/// A realized sample together with how it was generated.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub points: Points,
    pub n_requested: u64,
    pub mode: SampleMode,
    pub seed: u64,
    pub body: BodySpec,
    pub dist: DistributionSpec,
}

impl PointCloud {
    /// Draws a cloud from stream 0 of `seed`.
    pub fn generate(
        body: &BodySpec,
        dist: DistributionSpec,
        n: u64,
        mode: SampleMode,
        seed: u64,
    ) -> Result<Self> {
        let mut rng = rng::stream(seed, 0);
        let count = match mode {
            SampleMode::Fixed => n,
            SampleMode::Poissonized => poissonized_count(n as f64, &mut rng)?,
        };
        let points = sample_points(body, dist, count as usize, &mut rng)?;
        Ok(PointCloud {
            points,
            n_requested: n,
            mode,
            seed,
            body: body.clone(),
            dist,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Dispatches to the sampler matching `dist` after checking it fits `body`.
pub fn sample_points<R: Rng + ?Sized>(
    body: &BodySpec,
    dist: DistributionSpec,
    count: usize,
    rng: &mut R,
) -> Result<Points> {
    dist.check_body(body)?;
    body.validate(false)?;
    let axes = body.half_axes().expect("checked by check_body");
    match dist {
        DistributionSpec::UniformEllipsoid => Ok(sample_uniform_ellipsoid(axes, count, rng)),
        DistributionSpec::PearsonII { beta } => sample_pearson2(axes, beta, count, rng),
        DistributionSpec::UniformPSuperellipsoid { p } => {
            sample_uniform_psuperellipsoid(axes, p, count, rng)
        }
    }
}

/// Fills `out` with a uniform direction on the unit sphere.
pub(crate) fn unit_direction<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        let mut sq = 0.0;
        for x in out.iter_mut() {
            let g: f64 = StandardNormal.sample(rng);
            *x = g;
            sq += g * g;
        }
        if sq > 0.0 {
            let inv = sq.sqrt().recip();
            out.iter_mut().for_each(|x| *x *= inv);
            return;
        }
    }
}

/// Uniform point in the unit ball of dimension `out.len()`.
pub(crate) fn unit_ball_point<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    unit_direction(rng, out);
    let u: f64 = rng.random();
    let r = u.powf(1.0 / out.len() as f64);
    out.iter_mut().for_each(|x| *x *= r);
}

/// Uniform point in the unit `l_p` ball: signed `Gamma(1/p)^(1/p)` coordinates
/// normalized to the unit sphere, then a `U^(1/m)` radius.
pub(crate) fn unit_lp_ball_point<R: Rng + ?Sized>(
    rng: &mut R,
    gamma: &Gamma<f64>,
    p: f64,
    out: &mut [f64],
) {
    loop {
        let mut norm_p = 0.0;
        for x in out.iter_mut() {
            let g: f64 = gamma.sample(rng);
            let t = g.powf(1.0 / p);
            *x = if rng.random::<bool>() { t } else { -t };
            norm_p += g;
        }
        if norm_p > 0.0 {
            let u: f64 = rng.random();
            let scale = u.powf(1.0 / out.len() as f64) / norm_p.powf(1.0 / p);
            out.iter_mut().for_each(|x| *x *= scale);
            return;
        }
    }
}

pub fn sample_uniform_ellipsoid<R: Rng + ?Sized>(
    half_axes: &[f64],
    count: usize,
    rng: &mut R,
) -> Points {
    let d = half_axes.len();
    let mut pts = Points::with_capacity(d, count);
    let mut z = vec![0.0; d];
    for _ in 0..count {
        unit_ball_point(rng, &mut z);
        z.iter_mut().zip(half_axes).for_each(|(x, a)| *x *= a);
        pts.push(&z);
    }
    pts
}

/// Pearson Type II on the ellipsoid: the squared normalized radius is
/// `Beta(d/2, beta + 1)`, drawn as a ratio of Gamma variates.
pub fn sample_pearson2<R: Rng + ?Sized>(
    half_axes: &[f64],
    beta: f64,
    count: usize,
    rng: &mut R,
) -> Result<Points> {
    DistributionSpec::PearsonII { beta }.validate()?;
    let d = half_axes.len();
    let ga = Gamma::new(d as f64 / 2.0, 1.0).expect("positive shape");
    let gb = Gamma::new(beta + 1.0, 1.0).expect("positive shape");
    let mut pts = Points::with_capacity(d, count);
    let mut z = vec![0.0; d];
    for _ in 0..count {
        unit_direction(rng, &mut z);
        // points must stay strictly inside E
        let r = loop {
            let x: f64 = ga.sample(rng);
            let y: f64 = gb.sample(rng);
            if y > 0.0 && x + y > 0.0 {
                let r = (x / (x + y)).sqrt();
                if r < 1.0 {
                    break r;
                }
            }
        };
        z.iter_mut()
            .zip(half_axes)
            .for_each(|(x, a)| *x *= r * a);
        pts.push(&z);
    }
    Ok(pts)
}

pub fn sample_uniform_psuperellipsoid<R: Rng + ?Sized>(
    half_axes: &[f64],
    p: f64,
    count: usize,
    rng: &mut R,
) -> Result<Points> {
    DistributionSpec::UniformPSuperellipsoid { p }.validate()?;
    let d = half_axes.len();
    let gamma = Gamma::new(1.0 / p, 1.0).expect("positive shape");
    let mut pts = Points::with_capacity(d, count);
    let mut z = vec![0.0; d];
    for _ in 0..count {
        unit_lp_ball_point(rng, &gamma, p, &mut z);
        z.iter_mut().zip(half_axes).for_each(|(x, a)| *x *= a);
        pts.push(&z);
    }
    Ok(pts)
}

/// One `Poisson(n)` draw.
pub fn poissonized_count<R: Rng + ?Sized>(n: f64, rng: &mut R) -> Result<u64> {
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::invalid("n", format!("Poisson mean must be positive, got {n}")));
    }
    let dist = Poisson::new(n).map_err(|e| Error::invalid("n", e.to_string()))?;
    let k: f64 = dist.sample(rng);
    Ok(k as u64)
}
