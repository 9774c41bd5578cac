//! Euclidean distance field over a regular voxel grid.
//!
//! Voxel `(i, j, k)` is centered at `origin + res * (i, j, k)`. Every cloud point
//! marks the voxel whose center is nearest; the field then stores the exact
//! Euclidean distance from each voxel center to the nearest marked center,
//! computed with the separable lower-envelope transform of Felzenszwalb and
//! Huttenlocher (one 1D pass per axis over squared distances).

use crate::environment::{DistanceField, EnvError};
use crate::geometry::{Aabb, Point3};

/// Default voxel budget for [`build_edf`].
pub const DEFAULT_MAX_VOXELS: usize = 64_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct EdfGrid {
    /// Center of voxel (0, 0, 0).
    origin: Point3,
    resolution: f64,
    dims: [usize; 3],
    distances: Vec<f64>,
}

/// Result of a field lookup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceQuery {
    pub distance: f64,
    /// The query point was outside the grid and was clamped to its boundary.
    pub clamped: bool,
}

pub fn build_edf(points: &[Point3], bounds: Aabb, resolution: f64) -> Result<EdfGrid, EnvError> {
    build_edf_capped(points, bounds, resolution, DEFAULT_MAX_VOXELS)
}

pub fn build_edf_capped(points: &[Point3], bounds: Aabb, resolution: f64, max_voxels: usize) -> Result<EdfGrid, EnvError> {
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(EnvError::InvalidResolution(resolution));
    }
    let extent = bounds.extent();
    let mut dims = [0usize; 3];
    for (axis, dim) in dims.iter_mut().enumerate() {
        let e = extent.component(axis);
        if !(e >= 0.0 && e.is_finite()) {
            return Err(EnvError::InvalidBounds);
        }
        *dim = (e / resolution).ceil() as usize + 1;
    }
    let voxels = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).unwrap_or(usize::MAX);
    if voxels > max_voxels {
        return Err(EnvError::GridTooLarge { voxels, cap: max_voxels });
    }

    let origin = bounds.min;
    let mut field = vec![f64::INFINITY; voxels];
    let idx = |i: usize, j: usize, k: usize| (k * dims[1] + j) * dims[0] + i;
    for p in points {
        let mut cell = [0usize; 3];
        let mut inside = true;
        for axis in 0..3 {
            let u = ((p.component(axis) - origin.component(axis)) / resolution).round();
            if u < 0.0 || u >= dims[axis] as f64 {
                inside = false;
                break;
            }
            cell[axis] = u as usize;
        }
        if inside {
            field[idx(cell[0], cell[1], cell[2])] = 0.0;
        }
    }

    let max_dim = *dims.iter().max().unwrap();
    let mut line = vec![0.0; max_dim];
    let mut out = vec![0.0; max_dim];
    let mut scratch = Scratch::new(max_dim);
    // x lines
    for k in 0..dims[2] {
        for j in 0..dims[1] {
            let n = dims[0];
            for i in 0..n {
                line[i] = field[idx(i, j, k)];
            }
            transform_1d(&line[..n], &mut out[..n], &mut scratch);
            for i in 0..n {
                field[idx(i, j, k)] = out[i];
            }
        }
    }
    // y lines
    for k in 0..dims[2] {
        for i in 0..dims[0] {
            let n = dims[1];
            for j in 0..n {
                line[j] = field[idx(i, j, k)];
            }
            transform_1d(&line[..n], &mut out[..n], &mut scratch);
            for j in 0..n {
                field[idx(i, j, k)] = out[j];
            }
        }
    }
    // z lines
    for j in 0..dims[1] {
        for i in 0..dims[0] {
            let n = dims[2];
            for k in 0..n {
                line[k] = field[idx(i, j, k)];
            }
            transform_1d(&line[..n], &mut out[..n], &mut scratch);
            for k in 0..n {
                field[idx(i, j, k)] = out[k];
            }
        }
    }

    // An empty cloud leaves every voxel at infinity; report the grid diagonal instead.
    let diagonal = extent.norm().max(resolution);
    for v in field.iter_mut() {
        *v = if v.is_finite() { v.sqrt() * resolution } else { diagonal };
    }

    Ok(EdfGrid { origin, resolution, dims, distances: field })
}

struct Scratch {
    v: Vec<usize>,
    z: Vec<f64>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self { v: vec![0; n], z: vec![0.0; n + 1] }
    }
}

/// 1D squared-distance transform: `out[q] = min_p (q - p)^2 + f[p]`.
fn transform_1d(f: &[f64], out: &mut [f64], s: &mut Scratch) {
    let n = f.len();
    let first = match f.iter().position(|x| x.is_finite()) {
        Some(p) => p,
        None => {
            out.copy_from_slice(f);
            return;
        }
    };
    let (v, z) = (&mut s.v, &mut s.z);
    let mut k = 0usize;
    v[0] = first;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in first + 1..n {
        if !f[q].is_finite() {
            continue;
        }
        let qf = q as f64;
        loop {
            let p = v[k];
            let pf = p as f64;
            let sep = ((f[q] + qf * qf) - (f[p] + pf * pf)) / (2.0 * (qf - pf));
            if sep <= z[k] {
                // k > 0 here because z[0] is -inf
                k -= 1;
            } else {
                k += 1;
                v[k] = q;
                z[k] = sep;
                z[k + 1] = f64::INFINITY;
                break;
            }
        }
    }
    k = 0;
    for (q, o) in out.iter_mut().enumerate() {
        let qf = q as f64;
        while z[k + 1] < qf {
            k += 1;
        }
        let p = v[k];
        let d = qf - p as f64;
        *o = d * d + f[p];
    }
}

impl EdfGrid {
    pub fn origin(&self) -> Point3 {
        self.origin
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    /// Box spanned by the voxel centers.
    pub fn bounds(&self) -> Aabb {
        let r = self.resolution;
        let max = Point3::new((self.dims[0] - 1) as f64 * r, (self.dims[1] - 1) as f64 * r, (self.dims[2] - 1) as f64 * r);
        Aabb::new(self.origin, self.origin + max)
    }

    /// Length of one voxel diagonal, the accuracy bound of interpolated queries.
    pub fn voxel_diagonal(&self) -> f64 {
        self.resolution * 3f64.sqrt()
    }

    #[inline]
    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.dims[1] + j) * self.dims[0] + i
    }

    pub fn voxel_value(&self, i: usize, j: usize, k: usize) -> f64 {
        self.distances[self.index(i, j, k)]
    }

    pub fn voxel_center(&self, i: usize, j: usize, k: usize) -> Point3 {
        self.origin + Point3::new(i as f64, j as f64, k as f64) * self.resolution
    }

    /// Overrides one voxel value; intended for building synthetic fields.
    pub fn set_voxel_value(&mut self, i: usize, j: usize, k: usize, value: f64) {
        let idx = self.index(i, j, k);
        self.distances[idx] = value;
    }

    /// Trilinear interpolation of the 8 voxels around `p`. Points outside the
    /// grid are clamped to its boundary and flagged.
    pub fn query_distance(&self, p: &Point3) -> DistanceQuery {
        let mut base = [0usize; 3];
        let mut frac = [0.0; 3];
        let mut clamped = false;
        for axis in 0..3 {
            let n = self.dims[axis];
            let u = (p.component(axis) - self.origin.component(axis)) / self.resolution;
            let max_u = (n - 1) as f64;
            let uc = if u.is_nan() || u < 0.0 {
                clamped = true;
                0.0
            } else if u > max_u {
                clamped = true;
                max_u
            } else {
                u
            };
            if n == 1 {
                base[axis] = 0;
                frac[axis] = 0.0;
            } else {
                let b = (uc.floor() as usize).min(n - 2);
                base[axis] = b;
                frac[axis] = uc - b as f64;
            }
        }
        let [i, j, k] = base;
        let step = |axis: usize| usize::from(self.dims[axis] > 1);
        let (di, dj, dk) = (step(0), step(1), step(2));
        let [tx, ty, tz] = frac;
        let c = |a: usize, b: usize, c: usize| self.voxel_value(i + a * di, j + b * dj, k + c * dk);
        let c00 = c(0, 0, 0) * (1.0 - tx) + c(1, 0, 0) * tx;
        let c10 = c(0, 1, 0) * (1.0 - tx) + c(1, 1, 0) * tx;
        let c01 = c(0, 0, 1) * (1.0 - tx) + c(1, 0, 1) * tx;
        let c11 = c(0, 1, 1) * (1.0 - tx) + c(1, 1, 1) * tx;
        let c0 = c00 * (1.0 - ty) + c10 * ty;
        let c1 = c01 * (1.0 - ty) + c11 * ty;
        DistanceQuery { distance: c0 * (1.0 - tz) + c1 * tz, clamped }
    }
}

impl DistanceField for EdfGrid {
    #[inline]
    fn distance(&self, p: &Point3) -> f64 {
        self.query_distance(p).distance
    }
}
