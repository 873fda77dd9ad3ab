//! Run configurations and the textual flag formats that build them.

use diamlimit::limitlaw::{IntensitySpec, LimitModel, PolePair, PoleProcess, TruncatedParaboloid};
use diamlimit::sampling::{DistributionSpec, SampleMode};
use diamlimit::BodySpec;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Everything needed to reproduce one command. Embedded in every sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum RunConfig {
    Check(CheckConfig),
    Simulate(SimulateConfig),
    Limit(LimitConfig),
    Bounds(BoundsRunConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub body: BodySpec,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateConfig {
    pub body: BodySpec,
    pub dist: DistributionSpec,
    pub n: u64,
    pub reps: usize,
    pub mode: SampleMode,
    pub norm_p: f64,
    pub k: usize,
    pub seed: u64,
    pub out: Option<String>,
}

/// Intensities given on the command line. Unequal Lambda exponents select
/// the one-sided limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntensityArg {
    Uniform {
        left: f64,
        right: f64,
    },
    Lambda {
        alpha_left: f64,
        alpha_right: f64,
        beta_left: f64,
        beta_right: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitConfig {
    pub body: BodySpec,
    pub dist: Option<DistributionSpec>,
    pub intensity: Option<IntensityArg>,
    pub b: f64,
    pub reps: usize,
    pub k: usize,
    pub pole_pairs: usize,
    pub seed: u64,
    pub out: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRunConfig {
    pub d: usize,
    pub e: usize,
    pub beta: f64,
    pub axes: Vec<f64>,
    pub n: u64,
    pub reps: usize,
    pub t_grid: Option<Vec<f64>>,
    pub seed: u64,
    pub out: Option<String>,
}

fn bad(field: &'static str, msg: impl Into<String>) -> CliError {
    CliError::Input {
        field,
        msg: msg.into(),
    }
}

fn parse_real(field: &'static str, s: &str) -> Result<f64, CliError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| bad(field, format!("'{s}' is not a number")))?;
    if !v.is_finite() {
        return Err(bad(field, format!("'{s}' is not finite")));
    }
    Ok(v)
}

/// `"1,0.5,0.25"`.
pub fn parse_list(field: &'static str, s: &str) -> Result<Vec<f64>, CliError> {
    if s.trim().is_empty() {
        return Err(bad(field, "empty list"));
    }
    s.split(',').map(|x| parse_real(field, x)).collect()
}

/// Rows separated by `;`, entries by `,`: `"4,0;0,9"`.
pub fn parse_matrix(field: &'static str, s: &str) -> Result<Vec<Vec<f64>>, CliError> {
    let rows: Vec<Vec<f64>> = s.split(';').map(|r| parse_list(field, r)).collect::<Result<_, _>>()?;
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err(bad(field, format!("matrix '{s}' is not square")));
    }
    Ok(rows)
}

/// `uniform | pearson:<beta> | uniform-p:<p>`.
pub fn parse_dist(s: &str) -> Result<DistributionSpec, CliError> {
    let dist = match s.split_once(':') {
        None if s == "uniform" => DistributionSpec::UniformEllipsoid,
        Some(("pearson", b)) => DistributionSpec::PearsonII {
            beta: parse_real("dist", b)?,
        },
        Some(("uniform-p", p)) => DistributionSpec::UniformPSuperellipsoid {
            p: parse_real("dist", p)?,
        },
        _ => {
            return Err(bad("dist", format!("'{s}': expected uniform, pearson:<beta> or uniform-p:<p>")));
        }
    };
    dist.validate().map_err(|e| bad("dist", e.to_string()))?;
    Ok(dist)
}

/// `uniform:<p_l>,<p_r> | lambda:<alpha_l>,<alpha_r>,<beta>[,<beta_r>]`.
pub fn parse_intensity(s: &str) -> Result<IntensityArg, CliError> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| bad("intensity", format!("'{s}': expected uniform:... or lambda:...")))?;
    let v = parse_list("intensity", rest)?;
    match (kind, v.as_slice()) {
        ("uniform", [l, r]) => Ok(IntensityArg::Uniform { left: *l, right: *r }),
        ("lambda", [al, ar, b]) => Ok(IntensityArg::Lambda {
            alpha_left: *al,
            alpha_right: *ar,
            beta_left: *b,
            beta_right: *b,
        }),
        ("lambda", [al, ar, bl, br]) => Ok(IntensityArg::Lambda {
            alpha_left: *al,
            alpha_right: *ar,
            beta_left: *bl,
            beta_right: *br,
        }),
        _ => Err(bad(
            "intensity",
            format!("'{s}': expected uniform:<p_l>,<p_r> or lambda:<alpha_l>,<alpha_r>,<beta>[,<beta_r>]"),
        )),
    }
}

pub fn parse_mode(s: &str) -> Result<SampleMode, CliError> {
    match s {
        "poissonized" => Ok(SampleMode::Poissonized),
        "fixed" => Ok(SampleMode::Fixed),
        _ => Err(bad("mode", format!("'{s}': expected poissonized or fixed"))),
    }
}

/// Body flags as given on the command line.
#[derive(Debug, Clone, Default)]
pub struct BodyArgs {
    pub body: String,
    pub axes: Option<String>,
    pub p: Option<f64>,
    pub a: Option<f64>,
    pub hl: Option<String>,
    pub hr: Option<String>,
}

impl BodyArgs {
    pub fn build(&self) -> Result<BodySpec, CliError> {
        let axes = || -> Result<Vec<f64>, CliError> {
            parse_list("axes", self.axes.as_deref().ok_or_else(|| bad("axes", "required for this body"))?)
        };
        match self.body.as_str() {
            "ellipsoid" => Ok(BodySpec::Ellipsoid { half_axes: axes()? }),
            "superellipsoid" => Ok(BodySpec::PSuperellipsoid {
                p: self.p.ok_or_else(|| bad("p", "required for --body superellipsoid"))?,
                half_axes: axes()?,
            }),
            "polecaps" => Ok(BodySpec::PoleCaps {
                a: self.a.ok_or_else(|| bad("a", "required for --body polecaps"))?,
                h_left: parse_matrix("hl", self.hl.as_deref().ok_or_else(|| bad("hl", "required for --body polecaps"))?)?,
                h_right: parse_matrix("hr", self.hr.as_deref().ok_or_else(|| bad("hr", "required for --body polecaps"))?)?,
            }),
            other => Err(bad("body", format!("'{other}': expected ellipsoid, superellipsoid or polecaps"))),
        }
    }
}

impl LimitConfig {
    /// The limit model this configuration describes.
    pub fn model(&self) -> Result<LimitModel, CliError> {
        if self.pole_pairs == 0 {
            return Err(bad("pole-pairs", "must be >= 1"));
        }
        let lambda_axes = || -> Result<Vec<f64>, CliError> {
            match &self.body {
                BodySpec::Ellipsoid { half_axes } => Ok(half_axes.clone()),
                _ => Err(bad("intensity", "lambda intensities need an ellipsoid body")),
            }
        };
        let explicit = match &self.intensity {
            None => None,
            Some(IntensityArg::Uniform { left, right }) => Some((
                IntensitySpec::Uniform { density: *left },
                IntensitySpec::Uniform { density: *right },
            )),
            Some(IntensityArg::Lambda {
                alpha_left,
                alpha_right,
                beta_left,
                beta_right,
            }) => {
                let half_axes = lambda_axes()?;
                if beta_left != beta_right {
                    // the pole with the larger exponent alone carries the limit
                    let (alpha, beta) = if beta_left > beta_right {
                        (*alpha_left, *beta_left)
                    } else {
                        (*alpha_right, *beta_right)
                    };
                    if self.pole_pairs != 1 {
                        return Err(bad("pole-pairs", "the one-sided limit has a single process"));
                    }
                    let intensity = IntensitySpec::LambdaBeta {
                        alpha,
                        beta,
                        half_axes: half_axes.clone(),
                    };
                    let region = TruncatedParaboloid::ellipsoidal(&half_axes, self.b)?;
                    return Ok(LimitModel::OneSided {
                        process: PoleProcess::new(region, intensity)?,
                        a1: half_axes[0],
                    });
                }
                let mk = |alpha: f64| IntensitySpec::LambdaBeta {
                    alpha,
                    beta: *beta_left,
                    half_axes: half_axes.clone(),
                };
                Some((mk(*alpha_left), mk(*alpha_right)))
            }
        };
        let pair = PolePair::from_body(&self.body, self.dist, explicit, self.b)?;
        Ok(LimitModel::PolePairs(vec![pair; self.pole_pairs]))
    }
}
