//! Path and trajectory planning for a marsupial UGV-UAV team joined by a
//! non-taut tether of controllable length.
//!
//! The pipeline has two stages:
//!
//! 1. [`planner`]: an RRT* over the joint UGV+UAV position space. The tether
//!    length is not sampled; each new node gets the shortest collision-free
//!    catenary found by [`tether::check_catenary`].
//! 2. [`optimizer`]: the path becomes a time-parameterized trajectory
//!    (positions, tether length and time step per state) refined by a sparse
//!    Levenberg-Marquardt solver over weighted, Cauchy-robustified residuals.
//!
//! [`scenario`] ties both stages to scenario files, metrics and CSV export.

pub mod environment;
pub mod geometry;
pub mod optimizer;
pub mod planner;
pub mod scenario;
pub mod synth;
pub mod tether;

pub use environment::{DistanceField, EdfGrid, Environment, EnvironmentConfig, PointCloud, TraversableSet};
pub use geometry::{Aabb, Point3};
pub use tether::{CatenarySolution, TetherConfig, TetherShape};
