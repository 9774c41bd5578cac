mod common;

use common::{halve, random_point, rng, Brute};
use marsupial::environment::DistanceField;
use marsupial::tether::*;
use marsupial::Point3;
use proptest::prelude::*;
use rand::Rng;

struct Empty;
impl DistanceField for Empty {
    fn distance(&self, _: &Point3) -> f64 {
        f64::INFINITY
    }
}

/// Catenary scale for horizontal span `d`, rise `v` and length `l`, solved
/// in log space so the bracket covers every scale.
fn oracle_scale(d: f64, v: f64, l: f64) -> f64 {
    let target = (l * l - v * v).sqrt();
    let f = |t: f64| {
        let a = t.exp();
        2.0 * a * (d / (2.0 * a)).sinh() - target
    };
    halve(f, -20.0, 20.0).exp()
}

/// Curve height at horizontal offset `x` from the lower-left endpoint.
fn oracle_height(z0: f64, d: f64, v: f64, l: f64, x: f64) -> f64 {
    let a = oracle_scale(d, v, l);
    let x0 = 0.5 * d - a * (v / l).atanh();
    z0 + a * (((x - x0) / a).cosh() - (x0 / a).cosh())
}

#[test]
fn taut_example_is_straight() {
    let sol = solve_catenary(Point3::new(0.0, 0.0, 1.0), Point3::new(4.0, 0.0, 1.0), 4.0).unwrap();
    assert_eq!(sol.regime, TetherRegime::StraightSegment);
}

#[test]
fn symmetric_example_matches_oracle_sag() {
    let sol = solve_catenary(Point3::new(0.0, 0.0, 1.0), Point3::new(4.0, 0.0, 1.0), 5.0).unwrap();
    assert_eq!(sol.regime, TetherRegime::Catenary);
    let a = halve(|a| 2.0 * a * (2.0 / a).sinh() - 5.0, 0.01, 100.0);
    let z_min = 1.0 - a * ((2.0 / a).cosh() - 1.0);
    let low = sol.lowest_point();
    assert!((low.x - 2.0).abs() < 1e-6);
    assert!((low.z - z_min).abs() < 1e-6, "{} vs {z_min}", low.z);

    let shape = sample_tether(&sol, 101).unwrap();
    let mid = shape.samples[50];
    assert!(mid.distance(&Point3::new(2.0, 0.0, z_min)) < 1e-3);
}

#[test]
fn segment_sampling_examples() {
    let sol = solve_catenary(Point3::ZERO, Point3::new(1.0, 0.0, 0.0), 1.0).unwrap();
    let s = sample_tether(&sol, 3).unwrap();
    assert_eq!(s.samples, vec![Point3::ZERO, Point3::new(0.5, 0.0, 0.0), Point3::new(1.0, 0.0, 0.0)]);
    let sol = solve_catenary(Point3::ZERO, Point3::new(0.0, 0.0, 2.0), 2.5).unwrap();
    assert_eq!(sol.regime, TetherRegime::VerticalSegment);
    let s = sample_tether(&sol, 2).unwrap();
    assert_eq!(s.samples, vec![Point3::ZERO, Point3::new(0.0, 0.0, 2.0)]);
    assert!(matches!(sample_tether(&sol, 1), Err(TetherError::TooFewSamples(1))));
}

#[test]
fn random_triples_match_oracle_and_conserve_length() {
    let mut r = rng(7);
    let mut checked = 0;
    while checked < 1000 {
        let a = random_point(&mut r, -5.0, 5.0);
        let b = random_point(&mut r, -5.0, 5.0);
        let chord = a.distance(&b);
        let d = (b - a).horizontal_norm();
        if d < 0.1 {
            continue;
        }
        let l = chord * r.gen_range(1.01..2.0);
        let sol = solve_catenary(a, b, l).unwrap();
        assert_eq!(sol.regime, TetherRegime::Catenary);
        let shape = sample_tether(&sol, 200).unwrap();
        let poly = shape.polyline_length();
        assert!((poly - l).abs() < 0.01 * l, "polyline {poly} vs {l}");
        assert!(shape.samples[0].distance(&a) < 1e-6);
        assert!(shape.samples[199].distance(&b) < 1e-6);
        // every sample in the vertical plane of the endpoints
        let n = Point3::new(-(b.y - a.y), b.x - a.x, 0.0) / d;
        assert!(shape.samples.iter().all(|p| (*p - a).dot(&n).abs() < 1e-9));
        for t in [0.25, 0.5, 0.75] {
            let x = t * d;
            let want = oracle_height(a.z, d, b.z - a.z, l, x);
            assert!((sol.height_at(x) - want).abs() < 1e-6, "x {x}: {} vs {want}", sol.height_at(x));
        }
        checked += 1;
    }
}

#[test]
fn equal_height_vertex_is_at_midpoint() {
    let mut r = rng(11);
    for _ in 0..1000 {
        let z = r.gen_range(0.0..5.0);
        let a = Point3::new(r.gen_range(-5.0..5.0), r.gen_range(-5.0..5.0), z);
        let b = Point3::new(r.gen_range(-5.0..5.0), r.gen_range(-5.0..5.0), z);
        let d = a.distance(&b);
        if d < 0.1 {
            continue;
        }
        let sol = solve_catenary(a, b, d * r.gen_range(1.01..3.0)).unwrap();
        let mid = a.lerp(&b, 0.5);
        let low = sol.lowest_point();
        assert!((low.x - mid.x).abs() < 1e-6 && (low.y - mid.y).abs() < 1e-6);
    }
}

#[test]
fn short_or_degenerate_lengths_are_rejected() {
    let a = Point3::ZERO;
    let b = Point3::new(3.0, 0.0, 4.0);
    assert!(matches!(solve_catenary(a, b, 4.0), Err(TetherError::LengthTooShort { .. })));
    assert!(matches!(solve_catenary(a, a, 0.0), Err(TetherError::ZeroLength(_))));
    assert!(matches!(solve_catenary(a, b, f64::NAN), Err(TetherError::NonFinite)));
}

#[test]
fn empty_space_gives_the_chord() {
    let (a, b) = (Point3::new(0.0, 0.0, 0.5), Point3::new(3.0, 1.0, 2.0));
    let l = check_catenary(a, b, &Empty, 10.0, 0.1, SampleCount::default(), 0.1).unwrap();
    assert_eq!(l, Some(a.distance(&b)));
}

/// Horizontal slab of points at height `z` over `x0..x1`, full width.
fn slab(x0: f64, x1: f64, z: f64) -> Vec<Point3> {
    let mut pts = Vec::new();
    let mut x = x0;
    while x <= x1 + 1e-9 {
        let mut y = -2.0;
        while y <= 2.0 + 1e-9 {
            pts.push(Point3::new(x, y, z));
            y += 0.05;
        }
        x += 0.05;
    }
    pts
}

#[test]
fn slab_over_chord_matches_exhaustive_scan() {
    let cloud = Brute(slab(1.5, 2.5, 1.05));
    let (a, b) = (Point3::new(0.0, 0.0, 1.0), Point3::new(4.0, 0.0, 1.0));
    let (l_max, delta_l, clearance) = (8.0, 0.1, 0.1);
    let got = check_catenary(a, b, &cloud, l_max, delta_l, SampleCount::default(), clearance).unwrap();

    // oracle: every candidate length, densely sampled
    let chord = a.distance(&b);
    let mut expected = None;
    for k in 0.. {
        let l = chord + k as f64 * delta_l;
        if l > l_max + 1e-6 {
            break;
        }
        let shape = tether_shape(a, b, l, SampleCount::Fixed(2000)).unwrap();
        if shape.samples.iter().all(|p| cloud.distance(p) > clearance) {
            expected = Some(l);
            break;
        }
    }
    assert!(got.unwrap() > chord);
    assert_eq!(got, expected);
}

#[test]
fn tube_narrower_than_clearance_has_no_tether() {
    let mut pts = Vec::new();
    for i in 0..=100 {
        let x = -0.5 + i as f64 * 0.05;
        for (y, z) in [(0.05, 1.0), (-0.05, 1.0), (0.0, 1.05), (0.0, 0.95)] {
            pts.push(Point3::new(x, y, z));
        }
    }
    let got = check_catenary(Point3::new(0.0, 0.0, 1.0), Point3::new(4.0, 0.0, 1.0), &Brute(pts), 8.0, 0.1, SampleCount::default(), 0.1);
    assert_eq!(got.unwrap(), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sag_deepens_with_length(x in 0.5..6.0f64, z in -3.0..3.0f64, f1 in 1.01..2.0f64, f2 in 1.01..2.0f64) {
        let a = Point3::new(0.0, 0.0, 1.0);
        let b = Point3::new(x, 0.3 * x, 1.0 + z);
        let chord = a.distance(&b);
        let (short, long) = (chord * f1.min(f2), chord * f1.max(f2));
        prop_assume!(long - short > 1e-3);
        let s = solve_catenary(a, b, short).unwrap();
        let l = solve_catenary(a, b, long).unwrap();
        // a longer tether hangs below a shorter one everywhere between the
        // endpoints. The vertex itself need not drop: on steep tethers it lies
        // outside the span and rises from far below as slack is added.
        let d = s.horizontal_span();
        for k in 1..20 {
            let x = d * k as f64 / 20.0;
            prop_assert!(l.height_at(x) < s.height_at(x) + 1e-9, "x {}: {} vs {}", x, l.height_at(x), s.height_at(x));
        }
        prop_assert!(l.lowest_point().z <= s.lowest_point().z + 1e-9);
    }

    #[test]
    fn check_catenary_is_minimal(h in 1.05..1.4f64, x0 in 0.5..2.0f64) {
        let cloud = Brute(slab(x0, x0 + 1.0, h));
        let (a, b) = (Point3::new(0.0, 0.0, 1.0), Point3::new(4.0, 0.0, 1.0));
        if let Some(l) = check_catenary(a, b, &cloud, 8.0, 0.1, SampleCount::default(), 0.1).unwrap() {
            let chord = a.distance(&b);
            let mut k = 0;
            while chord + k as f64 * 0.1 < l - 1e-9 {
                let shape = tether_shape(a, b, chord + k as f64 * 0.1, SampleCount::default()).unwrap();
                prop_assert!(!shape_is_clear(&shape, &cloud, 0.1));
                k += 1;
            }
        }
    }
}
