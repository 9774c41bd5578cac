//! Solves a few tether shapes and prints their sag and sample points.
//!
//! cargo run --example catenary

use marsupial::environment::DistanceField;
use marsupial::tether::{check_catenary, sample_tether, solve_catenary, SampleCount};
use marsupial::Point3;

/// Distance to a horizontal plate at z = 1 spanning x in [1, 3].
struct Plate;
impl DistanceField for Plate {
    fn distance(&self, p: &Point3) -> f64 {
        let dx = (1.0 - p.x).max(p.x - 3.0).max(0.0);
        (dx * dx + (p.z - 1.0).powi(2)).sqrt()
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let attach = Point3::new(0.0, 0.0, 0.5);
    let uav = Point3::new(4.0, 0.0, 3.0);
    let chord = attach.distance(&uav);
    println!("chord {chord:.3} m");

    for slack in [1.0, 1.05, 1.25, 1.6] {
        let sol = solve_catenary(attach, uav, chord * slack)?;
        let low = sol.lowest_point();
        println!(
            "length {:.3} m: {:?}, scale {:.3}, lowest point ({:.3}, {:.3}, {:.3})",
            sol.length, sol.regime, sol.parameter_a, low.x, low.y, low.z
        );
    }

    let sol = solve_catenary(attach, uav, chord * 1.25)?;
    let shape = sample_tether(&sol, 9)?;
    println!("9 samples, polyline length {:.3} m:", shape.polyline_length());
    for p in &shape.samples {
        println!("  {:7.3} {:7.3} {:7.3}", p.x, p.y, p.z);
    }

    // shortest length whose curve clears the plate by 0.1 m
    match check_catenary(Point3::new(0.0, 0.0, 0.5), Point3::new(4.0, 0.0, 2.0), &Plate, 10.0, 0.1, SampleCount::default(), 0.1)? {
        Some(l) => println!("under the plate: shortest clear length {l:.2} m"),
        None => println!("under the plate: no clear tether up to 10 m"),
    }
    Ok(())
}
