//! Builds a distance field over a random cloud and compares a few queries
//! with exact nearest-point distances.
//!
//! cargo run --release --example edf

use marsupial::environment::{build_edf, KdTree};
use marsupial::{Aabb, Point3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut pt = |lo: f64, hi: f64| Point3::new(rng.gen_range(lo..hi), rng.gen_range(lo..hi), rng.gen_range(lo..hi));
    let cloud: Vec<Point3> = (0..2000).map(|_| pt(0.0, 10.0)).collect();
    let bounds = Aabb::new(Point3::ZERO, Point3::new(10.0, 10.0, 10.0));

    let clock = std::time::Instant::now();
    let grid = build_edf(&cloud, bounds, 0.1)?;
    println!("grid {:?} voxels, built in {:.2} s", grid.dims(), clock.elapsed().as_secs_f64());

    let exact = KdTree::new(cloud);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let q = pt(0.0, 10.0);
        let (_, e) = exact.nearest(&q).unwrap();
        worst = worst.max((grid.query_distance(&q).distance - e).abs());
    }
    println!("1000 queries inside the grid: worst error {worst:.3} m, voxel diagonal {:.3} m", grid.voxel_diagonal());

    // outside the bounds the query is clamped to the boundary and flagged
    let q = Point3::new(5.0, 5.0, 12.0);
    let d = grid.query_distance(&q);
    println!("query {q}: field {:.3} m, exact {:.3} m, clamped {}", d.distance, exact.nearest(&q).unwrap().1, d.clamped);
    Ok(())
}
