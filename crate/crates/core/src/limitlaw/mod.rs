//! Simulation of the limit laws: Poisson processes on truncated
//! paraboloids and the minima of pairwise functionals over them.

pub mod bounds;
pub mod functional;
pub mod region;

use rand::Rng;

pub use bounds::{bounds_distribution, MultiMajorBounds};
pub use functional::{functional_g, functional_g_p, limit_min_k, one_sided_limit, Functional, LimitSample};
pub use region::{
    limit_box_measure, paraboloid_mass, sample_prm, sample_prm_points, IntensitySpec, ParaboloidShape,
    TestBox, TruncatedParaboloid,
};

use crate::error::{Error, Result};
use crate::geometry::BodySpec;
use crate::sampling::DistributionSpec;
use crate::special;

/// Default truncation height.
pub const DEFAULT_TRUNCATION: f64 = 10.0;

/// Density (or Lambda_beta weight) of the sampling law at the poles, as the
/// intensity of the limit processes.
pub fn default_intensity(body: &BodySpec, dist: DistributionSpec) -> Result<IntensitySpec> {
    dist.check_body(body)?;
    match (body, dist) {
        (BodySpec::Ellipsoid { half_axes }, DistributionSpec::UniformEllipsoid) => Ok(IntensitySpec::Uniform {
            density: 1.0 / special::ellipsoid_volume(half_axes),
        }),
        (BodySpec::Ellipsoid { half_axes }, DistributionSpec::PearsonII { beta }) => Ok(IntensitySpec::LambdaBeta {
            alpha: special::pearson2_constant(half_axes, beta),
            beta,
            half_axes: half_axes.clone(),
        }),
        (BodySpec::PSuperellipsoid { p, half_axes }, DistributionSpec::UniformPSuperellipsoid { .. }) => {
            Ok(IntensitySpec::Uniform {
                density: 1.0 / special::superellipsoid_volume(*p, half_axes),
            })
        }
        _ => unreachable!("rejected by check_body"),
    }
}

/// One pole's limit process.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleProcess {
    pub region: TruncatedParaboloid,
    pub intensity: IntensitySpec,
}

impl PoleProcess {
    pub fn new(region: TruncatedParaboloid, intensity: IntensitySpec) -> Result<Self> {
        // validates the pairing
        paraboloid_mass(&region, &intensity)?;
        Ok(PoleProcess { region, intensity })
    }

    pub fn mass(&self) -> f64 {
        paraboloid_mass(&self.region, &self.intensity).expect("validated on construction")
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<crate::points::Points> {
        sample_prm(&self.region, &self.intensity, rng)
    }

    pub fn with_truncation(&self, b: f64) -> Result<Self> {
        Ok(PoleProcess {
            region: self.region.with_truncation(b)?,
            intensity: self.intensity.clone(),
        })
    }
}

/// Independent processes at the two poles of one diameter and the
/// functional that couples them.
#[derive(Debug, Clone, PartialEq)]
pub struct PolePair {
    pub left: PoleProcess,
    pub right: PoleProcess,
    pub functional: Functional,
}

impl PolePair {
    /// Limit configuration of a body. `intensities` overrides the defaults
    /// derived from `dist`; pole-cap bodies need explicit intensities.
    pub fn from_body(
        body: &BodySpec,
        dist: Option<DistributionSpec>,
        intensities: Option<(IntensitySpec, IntensitySpec)>,
        b: f64,
    ) -> Result<Self> {
        body.validate(true)?;
        let (li, ri) = match intensities {
            Some(pair) => pair,
            None => {
                let dist = dist.ok_or_else(|| {
                    Error::invalid("intensity", "pole-cap bodies need explicit intensities")
                })?;
                let i = default_intensity(body, dist)?;
                (i.clone(), i)
            }
        };
        let (left_region, right_region, functional) = match body {
            BodySpec::PSuperellipsoid { p, half_axes } => (
                TruncatedParaboloid::p_norm(*p, half_axes, b)?,
                TruncatedParaboloid::p_norm(*p, half_axes, b)?,
                Functional::PNorm {
                    a1: half_axes[0],
                    p: *p,
                },
            ),
            _ => {
                let (gl, gr) = body.pole_caps()?;
                for g in [&gl, &gr] {
                    if !g.lemma1_ok() {
                        return Err(Error::Lemma1Violated {
                            kappa: g.min_curvature(),
                            bound: 1.0 / (2.0 * g.half_diameter()),
                        });
                    }
                }
                (
                    TruncatedParaboloid::quadratic(gl, b)?,
                    TruncatedParaboloid::quadratic(gr, b)?,
                    Functional::Quadratic {
                        a: body.half_diameter(),
                    },
                )
            }
        };
        Ok(PolePair {
            left: PoleProcess::new(left_region, li)?,
            right: PoleProcess::new(right_region, ri)?,
            functional,
        })
    }

    /// Draws both processes and returns the `k` smallest functional values.
    pub fn sample<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> Result<LimitSample> {
        let left = self.left.sample(rng)?;
        let right = self.right.sample(rng)?;
        limit_min_k(&left, &right, self.functional, k)
    }

    pub fn with_truncation(&self, b: f64) -> Result<Self> {
        Ok(PolePair {
            left: self.left.with_truncation(b)?,
            right: self.right.with_truncation(b)?,
            functional: self.functional,
        })
    }
}

/// Minimum of independent single-diameter limits, one per pole pair.
pub fn multi_axes_limit<R: Rng + ?Sized>(configs: &[PolePair], rng: &mut R) -> Result<f64> {
    if configs.is_empty() {
        return Err(Error::invalid("configs", "need at least one pole pair"));
    }
    let mut best = f64::INFINITY;
    for c in configs {
        best = best.min(c.sample(1, rng)?.t_values[0]);
    }
    Ok(best)
}

/// What a limit replication draws.
#[derive(Debug, Clone, PartialEq)]
pub enum LimitModel {
    /// One or more independent pole pairs; `k > 1` needs exactly one pair.
    PolePairs(Vec<PolePair>),
    /// Only the pole with the larger density exponent contributes.
    OneSided { process: PoleProcess, a1: f64 },
}

impl LimitModel {
    pub fn draw<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> Result<Vec<f64>> {
        match self {
            LimitModel::PolePairs(pairs) if pairs.len() == 1 => Ok(pairs[0].sample(k, rng)?.t_values),
            LimitModel::PolePairs(pairs) => {
                if k != 1 {
                    return Err(Error::invalid("k", "several pole pairs support k = 1 only"));
                }
                Ok(vec![multi_axes_limit(pairs, rng)?])
            }
            LimitModel::OneSided { process, a1 } => {
                if k != 1 {
                    return Err(Error::invalid("k", "the one-sided limit supports k = 1 only"));
                }
                let pts = process.sample(rng)?;
                Ok(vec![one_sided_limit(&pts, *a1)?])
            }
        }
    }

    /// Expected point counts of every process involved.
    pub fn masses(&self) -> Vec<f64> {
        match self {
            LimitModel::PolePairs(pairs) => pairs
                .iter()
                .flat_map(|p| [p.left.mass(), p.right.mass()])
                .collect(),
            LimitModel::OneSided { process, .. } => vec![process.mass()],
        }
    }

    pub fn with_truncation(&self, b: f64) -> Result<Self> {
        Ok(match self {
            LimitModel::PolePairs(pairs) => {
                LimitModel::PolePairs(pairs.iter().map(|p| p.with_truncation(b)).collect::<Result<_>>()?)
            }
            LimitModel::OneSided { process, a1 } => LimitModel::OneSided {
                process: process.with_truncation(b)?,
                a1: *a1,
            },
        })
    }
}
