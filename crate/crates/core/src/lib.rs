//! Extreme-value asymptotics for the diameter of random point clouds in
//! convex bodies with a unique longest axis.

pub mod diameter;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod limitlaw;
pub mod points;
pub mod rng;
pub mod sampling;
pub mod special;

pub use diameter::{diameter_brute, diameter_pruned, k_largest, scaled_statistic, DistanceSpec, RateSpec};
pub use error::{Error, Result};
pub use geometry::{check_condition3, BodySpec, ConditionReport, PoleCapGeometry, Verdict};
pub use points::Points;
pub use sampling::{DistributionSpec, PointCloud, SampleMode};
