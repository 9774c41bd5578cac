//! Tether geometry: catenary solving, discretization into sample points, and
//! the search for the shortest collision-free tether length.
//!
//! The tether hangs in the vertical plane through the UGV attachment point and
//! the UAV. Inside that plane, with horizontal coordinate `x` measured from the
//! attachment point toward the UAV, the curve is
//!
//! ```text
//! z(x) = z_v + a * (cosh((x - x_v) / a) - 1)
//! ```
//!
//! where `(x_v, z_v)` is the (possibly virtual) lowest point and `a > 0` the
//! catenary scale. For horizontal separation `d`, vertical separation `v` and
//! length `L`, the scale is the root of `sqrt(L^2 - v^2) = 2a sinh(d / 2a)`,
//! found by bisection.

use thiserror::Error;

use crate::environment::DistanceField;
use crate::geometry::{polyline_length, Point3};

/// Lengths within this relative margin of the chord are solved as straight segments.
pub const TAUT_EPSILON: f64 = 1e-3;
/// Endpoints closer than this horizontally are solved as a vertical segment.
pub const PLANAR_EPSILON: f64 = 1e-3;
/// Absolute slack allowed when comparing a length to the endpoint distance.
pub const LENGTH_EPSILON: f64 = 1e-6;
/// Bisection stops once the transcendental residual is below this value.
pub const BISECTION_TOLERANCE: f64 = 1e-8;
pub const MAX_BISECTION_ITERS: usize = 100;

const SCALE_BRACKET: (f64, f64) = (1e-4, 1e4);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TetherError {
    #[error("tether length {length} m is shorter than the endpoint distance {distance} m")]
    LengthTooShort { length: f64, distance: f64 },
    #[error("tether length must be positive (got {0} m)")]
    ZeroLength(f64),
    #[error("catenary bisection did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("non-finite tether input")]
    NonFinite,
    #[error("a tether needs at least two samples (got {0})")]
    TooFewSamples(usize),
}

/// How the solved tether is represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TetherRegime {
    Catenary,
    /// Taut: the length is within [`TAUT_EPSILON`] of the chord.
    StraightSegment,
    /// Endpoints vertically aligned; any slack is ignored.
    VerticalSegment,
}

/// A solved tether between the UGV attachment point and the UAV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatenarySolution {
    pub regime: TetherRegime,
    pub start: Point3,
    pub end: Point3,
    /// Requested tether length.
    pub length: f64,
    /// Catenary scale `a`; infinite for the segment regimes.
    pub parameter_a: f64,
    /// Horizontal position of the lowest point, measured from `plane_origin`
    /// along `plane_direction`. May lie outside `[0, d]`.
    pub vertex_offset_h: f64,
    /// World height of the (possibly virtual) lowest point.
    pub vertex_offset_v: f64,
    pub plane_origin: Point3,
    /// Unit horizontal vector from the attachment point toward the UAV.
    pub plane_direction: Point3,
}

impl CatenarySolution {
    /// Horizontal span between the endpoints.
    pub fn horizontal_span(&self) -> f64 {
        (self.end - self.start).horizontal_norm()
    }

    /// Height of the curve at horizontal offset `x` inside the tether plane.
    pub fn height_at(&self, x: f64) -> f64 {
        match self.regime {
            TetherRegime::Catenary => {
                let a = self.parameter_a;
                self.vertex_offset_v + a * (((x - self.vertex_offset_h) / a).cosh() - 1.0)
            }
            _ => {
                let d = self.horizontal_span();
                if d == 0.0 {
                    self.start.z
                } else {
                    self.start.z + (self.end.z - self.start.z) * x / d
                }
            }
        }
    }

    /// World point at horizontal offset `x`.
    pub fn point_at(&self, x: f64) -> Point3 {
        let h = self.plane_origin + self.plane_direction * x;
        Point3::new(h.x, h.y, self.height_at(x))
    }

    /// Lowest point of the tether between the endpoints.
    pub fn lowest_point(&self) -> Point3 {
        match self.regime {
            TetherRegime::Catenary => {
                let x = self.vertex_offset_h.clamp(0.0, self.horizontal_span());
                self.point_at(x)
            }
            _ => {
                if self.start.z <= self.end.z {
                    self.start
                } else {
                    self.end
                }
            }
        }
    }

    /// Arc length of the modelled curve from the attachment point to horizontal offset `x`.
    pub fn arc_length_to(&self, x: f64) -> f64 {
        match self.regime {
            TetherRegime::Catenary => {
                let a = self.parameter_a;
                let x0 = self.vertex_offset_h;
                a * (((x - x0) / a).sinh() - (-x0 / a).sinh())
            }
            _ => {
                let d = self.horizontal_span();
                let chord = self.start.distance(&self.end);
                if d == 0.0 {
                    chord
                } else {
                    chord * x / d
                }
            }
        }
    }

    /// Length of the curve the solution actually represents. Equal to the
    /// requested length for catenaries; the chord for segment regimes.
    pub fn modelled_length(&self) -> f64 {
        match self.regime {
            TetherRegime::Catenary => self.arc_length_to(self.horizontal_span()),
            _ => self.start.distance(&self.end),
        }
    }
}

/// A tether discretized into ordered sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct TetherShape {
    /// Samples from the UGV attachment point to the UAV.
    pub samples: Vec<Point3>,
    /// Length of the modelled curve (the chord for segment regimes).
    pub length: f64,
}

impl TetherShape {
    pub fn polyline_length(&self) -> f64 {
        polyline_length(&self.samples)
    }
}

/// Number of samples used to discretize a tether.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleCount {
    Fixed(usize),
    /// `max(min, ceil(per_meter * length))`.
    PerMeter {
        per_meter: f64,
        min: usize,
    },
}

impl SampleCount {
    pub fn for_length(&self, length: f64) -> usize {
        match *self {
            SampleCount::Fixed(m) => m,
            SampleCount::PerMeter { per_meter, min } => {
                let n = (per_meter * length.max(0.0)).ceil();
                (n as usize).max(min).max(2)
            }
        }
    }
}

impl Default for SampleCount {
    fn default() -> Self {
        SampleCount::PerMeter { per_meter: 5.0, min: 10 }
    }
}

/// Tether parameters shared by the planner and the optimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetherConfig {
    /// Height of the tether exit point above the UGV position.
    pub attach_z: f64,
    /// Length increment used by [`check_catenary`].
    pub delta_l: f64,
    /// Maximum deployable tether length.
    pub l_max: f64,
    pub samples: SampleCount,
}

impl Default for TetherConfig {
    fn default() -> Self {
        Self { attach_z: 0.5, delta_l: 0.1, l_max: 20.0, samples: SampleCount::default() }
    }
}

impl TetherConfig {
    /// Tether exit point for a UGV at `p_g`.
    #[inline]
    pub fn attach(&self, p_g: &Point3) -> Point3 {
        Point3::new(p_g.x, p_g.y, p_g.z + self.attach_z)
    }
}

/// Solves the catenary of the given length hanging between `attach_ugv` and `p_uav`.
pub fn solve_catenary(attach_ugv: Point3, p_uav: Point3, length: f64) -> Result<CatenarySolution, TetherError> {
    if !attach_ugv.is_finite() || !p_uav.is_finite() || !length.is_finite() {
        return Err(TetherError::NonFinite);
    }
    if length <= LENGTH_EPSILON {
        return Err(TetherError::ZeroLength(length));
    }
    let delta = p_uav - attach_ugv;
    let distance = delta.norm();
    if length < distance - LENGTH_EPSILON {
        return Err(TetherError::LengthTooShort { length, distance });
    }
    let d = delta.horizontal_norm();
    let v = delta.z;
    let plane_direction = if d > 0.0 { Point3::new(delta.x / d, delta.y / d, 0.0) } else { Point3::new(1.0, 0.0, 0.0) };
    let segment = |regime| CatenarySolution {
        regime,
        start: attach_ugv,
        end: p_uav,
        length,
        parameter_a: f64::INFINITY,
        vertex_offset_h: 0.0,
        vertex_offset_v: attach_ugv.z.min(p_uav.z),
        plane_origin: attach_ugv,
        plane_direction,
    };

    if d < PLANAR_EPSILON {
        return Ok(segment(TetherRegime::VerticalSegment));
    }
    if length <= distance * (1.0 + TAUT_EPSILON) {
        return Ok(segment(TetherRegime::StraightSegment));
    }

    let target = (length * length - v * v).sqrt();
    let a = bisect_scale(d, target)?;
    let x0 = 0.5 * d - a * (v / length).atanh();
    let z_vertex = attach_ugv.z - a * ((x0 / a).cosh() - 1.0);
    Ok(CatenarySolution {
        regime: TetherRegime::Catenary,
        start: attach_ugv,
        end: p_uav,
        length,
        parameter_a: a,
        vertex_offset_h: x0,
        vertex_offset_v: z_vertex,
        plane_origin: attach_ugv,
        plane_direction,
    })
}

/// Root of `2a sinh(d / 2a) - target` for `target > d`. The left side decreases
/// monotonically from +inf (a -> 0) to `d` (a -> inf).
fn bisect_scale(d: f64, target: f64) -> Result<f64, TetherError> {
    let f = |a: f64| 2.0 * a * (d / (2.0 * a)).sinh() - target;
    let (mut lo, mut hi) = SCALE_BRACKET;
    // Expand geometrically until the root is bracketed.
    let mut expansions = 0;
    while f(lo) <= 0.0 && expansions < 60 {
        lo *= 0.1;
        expansions += 1;
    }
    while f(hi) >= 0.0 && expansions < 120 {
        hi *= 10.0;
        expansions += 1;
    }
    let mut mid = 0.5 * (lo + hi);
    let mut residual = f(mid);
    for _ in 0..MAX_BISECTION_ITERS {
        mid = 0.5 * (lo + hi);
        residual = f(mid);
        if residual.abs() < BISECTION_TOLERANCE {
            return Ok(mid);
        }
        if residual > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(TetherError::NoConvergence { iterations: MAX_BISECTION_ITERS, residual })
}

/// Discretizes a solved tether into `m` points, uniformly spaced in arc length.
pub fn sample_tether(sol: &CatenarySolution, m: usize) -> Result<TetherShape, TetherError> {
    if m < 2 {
        return Err(TetherError::TooFewSamples(m));
    }
    let mut samples = Vec::with_capacity(m);
    samples.push(sol.start);
    match sol.regime {
        TetherRegime::Catenary => {
            let a = sol.parameter_a;
            let x0 = sol.vertex_offset_h;
            let total = sol.arc_length_to(sol.horizontal_span());
            let s_offset = (-x0 / a).sinh();
            for j in 1..m - 1 {
                let s = total * j as f64 / (m - 1) as f64;
                let x = x0 + a * (s / a + s_offset).asinh();
                samples.push(sol.point_at(x));
            }
        }
        _ => {
            for j in 1..m - 1 {
                samples.push(sol.start.lerp(&sol.end, j as f64 / (m - 1) as f64));
            }
        }
    }
    samples.push(sol.end);
    Ok(TetherShape { samples, length: sol.modelled_length() })
}

/// Solves and samples in one step; `m` follows the sample policy.
pub fn tether_shape(attach_ugv: Point3, p_uav: Point3, length: f64, samples: SampleCount) -> Result<TetherShape, TetherError> {
    let sol = solve_catenary(attach_ugv, p_uav, length)?;
    sample_tether(&sol, samples.for_length(length))
}

/// True when every sample is strictly farther than `clearance` from obstacles.
pub fn shape_is_clear<F: DistanceField + ?Sized>(shape: &TetherShape, field: &F, clearance: f64) -> bool {
    shape.samples.iter().all(|p| field.distance(p) > clearance)
}

/// Shortest collision-free tether length on the grid
/// `{distance, distance + delta_l, ..., l_max}`.
///
/// Returns `Ok(None)` when no candidate is clear, including when the endpoints
/// are farther apart than `l_max`.
pub fn check_catenary<F: DistanceField + ?Sized>(
    attach_ugv: Point3,
    p_uav: Point3,
    field: &F,
    l_max: f64,
    delta_l: f64,
    samples: SampleCount,
    clearance: f64,
) -> Result<Option<f64>, TetherError> {
    assert!(delta_l > 0.0, "delta_l must be positive");
    let distance = attach_ugv.distance(&p_uav);
    if distance > l_max + LENGTH_EPSILON {
        return Ok(None);
    }
    for k in 0.. {
        let length = distance + k as f64 * delta_l;
        if length > l_max + LENGTH_EPSILON {
            break;
        }
        if length <= LENGTH_EPSILON {
            // coincident endpoints: only the endpoint itself needs clearing
            if field.distance(&attach_ugv) > clearance {
                return Ok(Some(length));
            }
            continue;
        }
        let shape = tether_shape(attach_ugv, p_uav, length, samples)?;
        if shape_is_clear(&shape, field, clearance) {
            return Ok(Some(length));
        }
        // Vertical segments ignore slack, so longer candidates cannot differ.
        if is_vertical(attach_ugv, p_uav) {
            break;
        }
    }
    Ok(None)
}

fn is_vertical(a: Point3, b: Point3) -> bool {
    (b - a).horizontal_norm() < PLANAR_EPSILON
}
