mod common;

use std::collections::VecDeque;

use common::{random_point, rng, Brute};
use marsupial::environment::*;
use marsupial::{Aabb, Point3};
use proptest::prelude::*;
use rand::Rng;

fn cube(lo: f64, hi: f64) -> Aabb {
    Aabb::new(Point3::new(lo, lo, lo), Point3::new(hi, hi, hi))
}

fn random_cloud(seed: u64, n: usize) -> Vec<Point3> {
    let mut r = rng(seed);
    (0..n).map(|_| random_point(&mut r, 0.0, 4.0)).collect()
}

#[test]
fn edf_queries_match_brute_force() {
    let pts = random_cloud(1, 100);
    let grid = build_edf(&pts, cube(0.0, 4.0), 0.1).unwrap();
    let brute = Brute(pts);
    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let p = random_point(&mut r, 0.0, 4.0);
        let q = grid.query_distance(&p);
        assert!(!q.clamped);
        worst = worst.max((q.distance - brute.distance(&p)).abs());
    }
    assert!(worst < grid.voxel_diagonal(), "{worst}");
}

#[test]
fn edf_voxels_match_brute_force() {
    let pts = random_cloud(3, 100);
    let grid = build_edf(&pts, cube(0.0, 4.0), 0.1).unwrap();
    let brute = Brute(pts);
    let [nx, ny, nz] = grid.dims();
    let mut r = rng(4);
    for _ in 0..1000 {
        let (i, j, k) = (r.gen_range(0..nx), r.gen_range(0..ny), r.gen_range(0..nz));
        let c = grid.voxel_center(i, j, k);
        // each point moves at most half a voxel diagonal when marked
        assert!((grid.voxel_value(i, j, k) - brute.distance(&c)).abs() <= 0.5 * grid.voxel_diagonal() + 1e-12);
    }
}

#[test]
fn edf_build_is_deterministic() {
    let pts = random_cloud(5, 300);
    let a = build_edf(&pts, cube(-1.0, 5.0), 0.1).unwrap();
    let b = build_edf(&pts, cube(-1.0, 5.0), 0.1).unwrap();
    assert_eq!(a, b);
}

#[test]
fn loader_reports_bad_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.xyz");
    std::fs::write(&path, "0 0 0\n1 2 3\na b c\n").unwrap();
    assert!(matches!(load_point_cloud(&path), Err(EnvError::Parse { line: 3, .. })));
    std::fs::write(&path, "0 0 0\n1 2 3\n").unwrap();
    assert_eq!(load_point_cloud(&path).unwrap().len(), 2);
    std::fs::write(&path, "").unwrap();
    assert!(matches!(load_point_cloud(&path), Err(EnvError::EmptyCloud)));
}

fn floor(x: std::ops::Range<i32>, y: std::ops::Range<i32>, z: f64) -> Vec<Point3> {
    let mut v = Vec::new();
    for i in x {
        for j in y.clone() {
            v.push(Point3::new(i as f64 * 0.1, j as f64 * 0.1, z));
        }
    }
    v
}

/// Points reachable from the cloud point nearest `start` through hops no
/// longer than `radius`.
fn component(pts: &[Point3], start: Point3, radius: f64) -> Vec<bool> {
    let seed = (0..pts.len()).min_by(|&a, &b| pts[a].distance(&start).total_cmp(&pts[b].distance(&start))).unwrap();
    let mut seen = vec![false; pts.len()];
    let mut queue = VecDeque::from([seed]);
    seen[seed] = true;
    while let Some(i) = queue.pop_front() {
        for j in 0..pts.len() {
            if !seen[j] && pts[i].distance(&pts[j]) <= radius {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    seen
}

#[test]
fn chasm_splits_the_floor() {
    // two 2 m slabs with a 1 m gap between them
    let mut pts = floor(0..20, 0..15, 0.0);
    pts.extend(floor(30..50, 0..15, 0.0));
    let cloud = PointCloud::new(pts.clone());
    let start = Point3::new(0.5, 0.5, 0.0);
    let t = analyze_traversability(&cloud, start, &TraversabilityParams::default()).unwrap();
    let expected = component(&pts, start, 0.3);
    let mut got = vec![false; pts.len()];
    for &i in t.cloud_indices() {
        got[i] = true;
    }
    assert_eq!(got, expected);
    assert!(t.points().iter().all(|p| p.x < 2.0));
}

#[test]
fn raised_platform_needs_small_steps() {
    let mut low = floor(0..20, 0..15, 0.0);
    low.extend(floor(20..40, 0..15, 0.1));
    let t = analyze_traversability(&PointCloud::new(low), Point3::new(0.5, 0.5, 0.0), &TraversabilityParams::default()).unwrap();
    assert!(t.points().iter().any(|p| p.z == 0.1 && p.x > 3.0));

    let mut high = floor(0..20, 0..15, 0.0);
    high.extend(floor(20..40, 0..15, 0.5));
    let t = analyze_traversability(&PointCloud::new(high), Point3::new(0.5, 0.5, 0.0), &TraversabilityParams::default()).unwrap();
    assert!(t.points().iter().all(|p| p.z == 0.0));
}

#[test]
fn nearest_traversable_matches_linear_scan() {
    let mut r = rng(9);
    let pts: Vec<Point3> = (0..500).map(|_| Point3::new(r.gen_range(0.0..5.0), r.gen_range(0.0..5.0), r.gen_range(0.0..0.3))).collect();
    let tset = TraversableSet::from_points(pts.clone());
    for _ in 0..1000 {
        let q = random_point(&mut r, -1.0, 6.0);
        let (d, p) = tset.distance_to_traversable(&q);
        let best = pts.iter().map(|x| x.distance(&q)).fold(f64::INFINITY, f64::min);
        assert_eq!(d, best);
        assert_eq!(p.distance(&q), d);
    }
    let (d, p) = tset.distance_to_traversable(&pts[17]);
    assert_eq!((d, p), (0.0, pts[17]));
    let single = TraversableSet::from_points(vec![Point3::new(1.0, 1.0, 0.0)]);
    assert_eq!(single.distance_to_traversable(&Point3::new(1.0, 1.0, 1.0)), (1.0, Point3::new(1.0, 1.0, 0.0)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edf_is_lipschitz(ax in 0.0..4.0f64, ay in 0.0..4.0f64, az in 0.0..4.0f64, bx in 0.0..4.0f64, by in 0.0..4.0f64, bz in 0.0..4.0f64) {
        use std::sync::OnceLock;
        static GRID: OnceLock<EdfGrid> = OnceLock::new();
        let grid = GRID.get_or_init(|| build_edf(&random_cloud(6, 100), cube(0.0, 4.0), 0.1).unwrap());
        let (p, q) = (Point3::new(ax, ay, az), Point3::new(bx, by, bz));
        let diff = (grid.distance(&p) - grid.distance(&q)).abs();
        prop_assert!(diff <= p.distance(&q) + grid.voxel_diagonal());
    }
}
