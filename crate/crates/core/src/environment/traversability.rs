//! UGV traversability: slope, step and overhead filters plus a flood fill from
//! the start position.

use std::collections::VecDeque;

use nalgebra::{Matrix3, SymmetricEigen};

use crate::environment::{EnvError, KdTree, PointCloud};
use crate::geometry::Point3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraversabilityParams {
    /// Maximum angle between the local surface normal and vertical.
    pub normal_max_slope: f64,
    /// Maximum height difference between adjacent traversable points.
    pub step_max: f64,
    /// Neighborhood radius of the flood fill.
    pub adjacency_radius: f64,
    /// Points need this much free space above them.
    pub ugv_height: f64,
    /// Horizontal radius of the overhead-clearance column.
    pub footprint_radius: f64,
    /// Neighbors used for the plane fit behind each normal.
    pub normal_neighbors: usize,
}

impl Default for TraversabilityParams {
    fn default() -> Self {
        Self {
            normal_max_slope: 30f64.to_radians(),
            step_max: 0.2,
            adjacency_radius: 0.3,
            ugv_height: 1.0,
            footprint_radius: 0.3,
            normal_neighbors: 12,
        }
    }
}

/// Cloud points the UGV can drive on, connected to the start position.
#[derive(Debug, Clone)]
pub struct TraversableSet {
    index: KdTree,
    /// Position of each traversable point in the source cloud.
    cloud_indices: Vec<usize>,
}

impl TraversableSet {
    /// Builds a set directly from points, bypassing the analysis.
    pub fn from_points(points: Vec<Point3>) -> Self {
        let cloud_indices = (0..points.len()).collect();
        Self { index: KdTree::new(points), cloud_indices }
    }

    pub fn points(&self) -> &[Point3] {
        self.index.points()
    }

    pub fn cloud_indices(&self) -> &[usize] {
        &self.cloud_indices
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Nearest traversable point and its distance to `p`.
    pub fn distance_to_traversable(&self, p: &Point3) -> (f64, Point3) {
        let (i, d) = self.index.nearest(p).expect("empty traversable set");
        (d, self.index.points()[i])
    }

    /// Cloud points that are not traversable; these are the UGV's obstacles.
    pub fn obstacle_points(&self, cloud: &PointCloud) -> Vec<Point3> {
        let mut is_trav = vec![false; cloud.len()];
        for &i in &self.cloud_indices {
            is_trav[i] = true;
        }
        cloud.points.iter().zip(is_trav).filter_map(|(p, t)| (!t).then_some(*p)).collect()
    }
}

/// Unit normal of the plane fitted through `points` (least-squares, via the
/// smallest eigenvector of the covariance). `None` for fewer than 3 points.
pub fn fit_normal(points: &[Point3]) -> Option<Point3> {
    if points.len() < 3 {
        return None;
    }
    let n = points.len() as f64;
    let mean = points.iter().fold(Point3::ZERO, |acc, p| acc + *p) / n;
    let mut cov = Matrix3::zeros();
    for p in points {
        let d = *p - mean;
        let v = nalgebra::Vector3::new(d.x, d.y, d.z);
        cov += v * v.transpose();
    }
    let eig = SymmetricEigen::new(cov / n);
    let (min_idx, _) = eig.eigenvalues.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1))?;
    let v = eig.eigenvectors.column(min_idx);
    let normal = Point3::new(v[0], v[1], v[2]);
    let len = normal.norm();
    (len > 0.0).then(|| normal / len)
}

pub fn analyze_traversability(cloud: &PointCloud, start_ugv: Point3, params: &TraversabilityParams) -> Result<TraversableSet, EnvError> {
    if cloud.is_empty() {
        return Err(EnvError::EmptyCloud);
    }
    let index = KdTree::new(cloud.points.clone());
    let pts = &cloud.points;
    let cos_max = params.normal_max_slope.cos();

    let candidate: Vec<bool> = pts
        .iter()
        .map(|p| {
            let neigh: Vec<Point3> = index.nearest_n(p, params.normal_neighbors.max(3)).into_iter().map(|i| pts[i]).collect();
            let flat = fit_normal(&neigh).is_some_and(|n| n.z.abs() >= cos_max);
            flat && has_overhead_clearance(&index, p, params)
        })
        .collect();

    let seed = index
        .within(&start_ugv, params.adjacency_radius)
        .into_iter()
        .filter(|&i| candidate[i])
        .min_by(|&a, &b| pts[a].distance_squared(&start_ugv).total_cmp(&pts[b].distance_squared(&start_ugv)).then(a.cmp(&b)))
        .ok_or(EnvError::NoTraversableSeed(start_ugv))?;

    let mut visited = vec![false; pts.len()];
    visited[seed] = true;
    let mut queue = VecDeque::from([seed]);
    let mut members = Vec::new();
    while let Some(i) = queue.pop_front() {
        members.push(i);
        for j in index.within(&pts[i], params.adjacency_radius) {
            if !visited[j] && candidate[j] && (pts[j].z - pts[i].z).abs() <= params.step_max {
                visited[j] = true;
                queue.push_back(j);
            }
        }
    }
    members.sort_unstable();
    let points = members.iter().map(|&i| pts[i]).collect();
    Ok(TraversableSet { index: KdTree::new(points), cloud_indices: members })
}

fn has_overhead_clearance(index: &KdTree, p: &Point3, params: &TraversabilityParams) -> bool {
    let half = 0.5 * (params.ugv_height + params.step_max);
    let center = Point3::new(p.x, p.y, p.z + half);
    let radius = params.footprint_radius.hypot(half);
    index.within(&center, radius).into_iter().all(|i| {
        let q = index.points()[i];
        let dz = q.z - p.z;
        let horizontal = (q - *p).horizontal_norm();
        !(dz > params.step_max && dz <= params.ugv_height && horizontal <= params.footprint_radius)
    })
}
