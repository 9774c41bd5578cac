#![allow(dead_code)]

use marsupial::environment::DistanceField;
use marsupial::Point3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exact distance to the nearest point by linear scan.
pub struct Brute(pub Vec<Point3>);

impl DistanceField for Brute {
    fn distance(&self, p: &Point3) -> f64 {
        self.0.iter().map(|q| q.distance(p)).fold(f64::INFINITY, f64::min)
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_point<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Point3 {
    Point3::new(rng.gen_range(lo..hi), rng.gen_range(lo..hi), rng.gen_range(lo..hi))
}

/// Root of `f` on `[lo, hi]` by plain interval halving, `f(lo) > 0 > f(hi)`.
pub fn halve(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
