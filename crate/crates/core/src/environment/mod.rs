//! Workspace representation: the input point cloud, distance fields for the
//! UAV/tether and the UGV, and the UGV-traversable point set.

mod cloud;
mod edf;
mod kdtree;
mod traversability;

use std::path::PathBuf;

use thiserror::Error;

pub use cloud::{load_point_cloud, parse_point_cloud, write_point_cloud, PointCloud};
pub use edf::{build_edf, build_edf_capped, DistanceQuery, EdfGrid, DEFAULT_MAX_VOXELS};
pub use kdtree::KdTree;
pub use traversability::{analyze_traversability, fit_normal, TraversabilityParams, TraversableSet};

use crate::geometry::{Aabb, Point3};

/// Anything that can report the distance from a point to the nearest obstacle.
pub trait DistanceField {
    fn distance(&self, p: &Point3) -> f64;
}

impl<F: DistanceField + ?Sized> DistanceField for &F {
    fn distance(&self, p: &Point3) -> f64 {
        (**self).distance(p)
    }
}

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("point cloud line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("distance grid needs {voxels} voxels, more than the cap of {cap}")]
    GridTooLarge { voxels: usize, cap: usize },
    #[error("grid resolution must be positive and finite (got {0})")]
    InvalidResolution(f64),
    #[error("invalid grid bounds")]
    InvalidBounds,
    #[error("no traversable cloud point near the UGV start {0}")]
    NoTraversableSeed(Point3),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvironmentConfig {
    pub resolution: f64,
    pub max_voxels: usize,
    pub traversability: TraversabilityParams,
}

impl Default for EnvironmentConfig {
    fn default() -> Self {
        Self { resolution: 0.1, max_voxels: DEFAULT_MAX_VOXELS, traversability: TraversabilityParams::default() }
    }
}

/// Everything the planner and optimizer need to know about the workspace.
/// Immutable after construction.
#[derive(Debug, Clone)]
pub struct Environment {
    pub bounds: Aabb,
    /// Distance to any cloud point. Used for the UAV and the tether.
    pub edf: EdfGrid,
    /// Distance to non-traversable cloud points. Used for the UGV.
    pub ugv_edf: EdfGrid,
    pub traversable: TraversableSet,
}

impl Environment {
    pub fn build(cloud: &PointCloud, bounds: Aabb, start_ugv: Point3, cfg: &EnvironmentConfig) -> Result<Self, EnvError> {
        if cloud.is_empty() {
            return Err(EnvError::EmptyCloud);
        }
        let traversable = analyze_traversability(cloud, start_ugv, &cfg.traversability)?;
        let edf = build_edf_capped(&cloud.points, bounds, cfg.resolution, cfg.max_voxels)?;
        let ugv_edf = build_edf_capped(&traversable.obstacle_points(cloud), bounds, cfg.resolution, cfg.max_voxels)?;
        Ok(Self { bounds, edf, ugv_edf, traversable })
    }

    /// Obstacle distance for the UAV (and tether samples).
    #[inline]
    pub fn uav_distance(&self, p: &Point3) -> f64 {
        self.edf.distance(p)
    }

    /// Obstacle distance for a UGV at `p_g`.
    #[inline]
    pub fn ugv_distance(&self, p_g: &Point3) -> f64 {
        self.ugv_edf.distance(p_g)
    }
}
