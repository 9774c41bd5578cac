//! Procedural point clouds for the bundled scenarios.
//!
//! The geometry is built from axis-aligned rectangular patches sampled on a
//! regular lattice. These are reconstructions with the same flavor as typical
//! benchmark maps (a straight corridor, a wall with an arch, a covered
//! corridor with a vertical chimney); they are not copies of any published map.

use crate::environment::PointCloud;
use crate::geometry::{Aabb, Point3};

/// Lattice spacing of generated clouds.
pub const DEFAULT_SPACING: f64 = 0.1;

/// A scenario description together with its generated cloud.
#[derive(Debug, Clone)]
pub struct SynthScenario {
    pub name: &'static str,
    pub cloud: PointCloud,
    pub bounds: Aabb,
    pub start_ugv: Point3,
    pub start_uav: Point3,
    pub goal_uav: Point3,
    pub l_max: f64,
}

/// Accumulates axis-aligned patches into a point list.
#[derive(Debug, Default)]
pub struct CloudBuilder {
    spacing: f64,
    points: Vec<Point3>,
}

fn lattice(lo: f64, hi: f64, spacing: f64) -> impl Iterator<Item = f64> {
    let n = ((hi - lo) / spacing + 1e-9).floor() as usize;
    (0..=n).map(move |i| lo + i as f64 * spacing)
}

impl CloudBuilder {
    pub fn new(spacing: f64) -> Self {
        Self { spacing, points: Vec::new() }
    }

    /// Horizontal patch at height `z`, optionally with a rectangular hole
    /// `(x0, x1, y0, y1)` (open interval) left empty.
    pub fn horizontal(&mut self, x: (f64, f64), y: (f64, f64), z: f64, hole: Option<(f64, f64, f64, f64)>) -> &mut Self {
        for px in lattice(x.0, x.1, self.spacing) {
            for py in lattice(y.0, y.1, self.spacing) {
                if let Some((hx0, hx1, hy0, hy1)) = hole {
                    if px > hx0 && px < hx1 && py > hy0 && py < hy1 {
                        continue;
                    }
                }
                self.points.push(Point3::new(px, py, z));
            }
        }
        self
    }

    /// Vertical patch in the plane `x = const`.
    pub fn wall_x(&mut self, x: f64, y: (f64, f64), z: (f64, f64)) -> &mut Self {
        for py in lattice(y.0, y.1, self.spacing) {
            for pz in lattice(z.0, z.1, self.spacing) {
                self.points.push(Point3::new(x, py, pz));
            }
        }
        self
    }

    /// Vertical patch in the plane `y = const`.
    pub fn wall_y(&mut self, y: f64, x: (f64, f64), z: (f64, f64)) -> &mut Self {
        for px in lattice(x.0, x.1, self.spacing) {
            for pz in lattice(z.0, z.1, self.spacing) {
                self.points.push(Point3::new(px, y, pz));
            }
        }
        self
    }

    /// Wall in the plane `x = const` with a rectangular doorway cut out.
    pub fn wall_x_with_opening(&mut self, x: f64, y: (f64, f64), z: (f64, f64), opening_y: (f64, f64), opening_z: (f64, f64)) -> &mut Self {
        for py in lattice(y.0, y.1, self.spacing) {
            for pz in lattice(z.0, z.1, self.spacing) {
                let inside = py > opening_y.0 && py < opening_y.1 && pz > opening_z.0 && pz < opening_z.1;
                if !inside {
                    self.points.push(Point3::new(x, py, pz));
                }
            }
        }
        self
    }

    pub fn build(&mut self) -> PointCloud {
        // walls share edges with floors; drop exact duplicates
        let mut pts = std::mem::take(&mut self.points);
        let key = |p: &Point3| {
            let s = self.spacing * 0.01;
            ((p.x / s).round() as i64, (p.y / s).round() as i64, (p.z / s).round() as i64)
        };
        pts.sort_by_key(key);
        pts.dedup_by_key(|p| key(p));
        PointCloud::new(pts)
    }
}

/// Straight covered corridor, 16 m x 6 m x 7 m. The tether cannot reach the
/// goal from the UGV start, so both robots have to advance.
pub fn corridor(spacing: f64) -> SynthScenario {
    let (len, width, height) = (16.0, 6.0, 7.0);
    let cloud = CloudBuilder::new(spacing)
        .horizontal((0.0, len), (0.0, width), 0.0, None)
        .horizontal((0.0, len), (0.0, width), height, None)
        .wall_y(0.0, (0.0, len), (spacing, height))
        .wall_y(width, (0.0, len), (spacing, height))
        .wall_x(0.0, (0.0, width), (spacing, height))
        .wall_x(len, (0.0, width), (spacing, height))
        .build();
    SynthScenario {
        name: "corridor",
        cloud,
        bounds: Aabb::new(Point3::new(0.0, 0.0, 0.0), Point3::new(len, width, height)),
        start_ugv: Point3::new(2.0, 3.0, 0.0),
        start_uav: Point3::new(2.0, 3.0, 2.0),
        goal_uav: Point3::new(13.5, 3.0, 2.0),
        l_max: 8.0,
    }
}

/// Closed 7 m high room split by a wall with a 5 m wide, full-height opening
/// in the middle. Stands in for an arch: any lintel sits where the UAV cruises.
pub fn arch(spacing: f64) -> SynthScenario {
    let (len, width, height) = (16.0, 10.0, 7.0);
    let cloud = CloudBuilder::new(spacing)
        .horizontal((0.0, len), (0.0, width), 0.0, None)
        .horizontal((0.0, len), (0.0, width), height, None)
        .wall_y(0.0, (0.0, len), (spacing, height))
        .wall_y(width, (0.0, len), (spacing, height))
        .wall_x(0.0, (0.0, width), (spacing, height))
        .wall_x(len, (0.0, width), (spacing, height))
        .wall_x_with_opening(8.0, (0.0, width), (spacing, height), (2.5, 7.5), (0.0, 7.0))
        .build();
    SynthScenario {
        name: "arch",
        cloud,
        bounds: Aabb::new(Point3::new(0.0, 0.0, 0.0), Point3::new(len, width, height)),
        start_ugv: Point3::new(2.0, 5.0, 0.0),
        start_uav: Point3::new(2.0, 5.0, 2.0),
        goal_uav: Point3::new(13.0, 5.0, 2.0),
        l_max: 10.0,
    }
}

/// Covered corridor with a 4 m x 4 m chimney rising from the ceiling near
/// its far end. The goal is inside the chimney, so the UGV has to drive under
/// it before the UAV can climb.
pub fn chimney(spacing: f64) -> SynthScenario {
    let (len, width, ceiling, top) = (16.0, 5.0, 4.0, 9.0);
    let hole = (11.0, 15.0, 0.5, 4.5);
    let cloud = CloudBuilder::new(spacing)
        .horizontal((0.0, len), (0.0, width), 0.0, None)
        .horizontal((0.0, len), (0.0, width), ceiling, Some(hole))
        .wall_y(0.0, (0.0, len), (spacing, ceiling))
        .wall_y(width, (0.0, len), (spacing, ceiling))
        .wall_x(0.0, (0.0, width), (spacing, ceiling))
        .wall_x(len, (0.0, width), (spacing, ceiling))
        .wall_x(hole.0, (hole.2, hole.3), (ceiling, top))
        .wall_x(hole.1, (hole.2, hole.3), (ceiling, top))
        .wall_y(hole.2, (hole.0, hole.1), (ceiling, top))
        .wall_y(hole.3, (hole.0, hole.1), (ceiling, top))
        .horizontal((hole.0, hole.1), (hole.2, hole.3), top, None)
        .build();
    SynthScenario {
        name: "chimney",
        cloud,
        bounds: Aabb::new(Point3::new(0.0, 0.0, 0.0), Point3::new(len, width, top)),
        start_ugv: Point3::new(2.0, 2.5, 0.0),
        start_uav: Point3::new(2.0, 2.5, 2.0),
        goal_uav: Point3::new(13.0, 2.5, 7.0),
        l_max: 12.0,
    }
}

/// The bundled scenarios, in a fixed order.
pub fn all(spacing: f64) -> Vec<SynthScenario> {
    vec![corridor(spacing), arch(spacing), chimney(spacing)]
}
