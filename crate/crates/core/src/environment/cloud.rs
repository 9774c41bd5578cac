//! Plain-text point cloud files: one `x y z` record per line, `#` comments.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::environment::EnvError;
use crate::geometry::Point3;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    pub points: Vec<Point3>,
}

impl PointCloud {
    pub fn new(points: Vec<Point3>) -> Self {
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn load_point_cloud(path: impl AsRef<Path>) -> Result<PointCloud, EnvError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| EnvError::Io { path: path.to_path_buf(), source })?;
    parse_point_cloud(&text)
}

pub fn parse_point_cloud(text: &str) -> Result<PointCloud, EnvError> {
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(EnvError::Parse { line: idx + 1, message: format!("expected 3 coordinates, found {}", fields.len()) });
        }
        let mut xyz = [0.0; 3];
        for (slot, field) in xyz.iter_mut().zip(&fields) {
            *slot = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| EnvError::Parse { line: idx + 1, message: format!("invalid coordinate {field:?}") })?;
        }
        points.push(Point3::from(xyz));
    }
    if points.is_empty() {
        return Err(EnvError::EmptyCloud);
    }
    Ok(PointCloud { points })
}

/// Writes `cloud` in the text format, coordinates rounded to `decimals` places.
pub fn write_point_cloud(path: impl AsRef<Path>, cloud: &PointCloud, decimals: usize, header: &str) -> Result<(), EnvError> {
    let path = path.as_ref();
    let io_err = |source| EnvError::Io { path: path.to_path_buf(), source };
    let mut out = std::io::BufWriter::new(fs::File::create(path).map_err(io_err)?);
    for line in header.lines() {
        writeln!(out, "# {line}").map_err(io_err)?;
    }
    for p in &cloud.points {
        writeln!(out, "{:.*} {:.*} {:.*}", decimals, p.x, decimals, p.y, decimals, p.z).map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}
