//! Scalar residuals of the trajectory cost and their closed-form Jacobians.
//!
//! Every function here is pure. Jacobian arrays list partial derivatives in
//! argument order, points expanded to their x, y, z components.

use crate::geometry::Point3;

/// Segments shorter than this are treated as stationary.
pub const DEGENERATE_SEGMENT: f64 = 1e-6;

/// Segment length below which the smoothness penalty is faded out.
pub const SMOOTHNESS_FADE_LENGTH: f64 = 1e-2;

/// Distances below this are clamped before inversion in the tether term.
pub const MIN_INVERSE_DISTANCE: f64 = 1e-3;

fn unit_or_zero(d: Point3) -> Point3 {
    let n = d.norm();
    if n > 1e-12 {
        d / n
    } else {
        Point3::ZERO
    }
}

/// Signed deviation of the spacing between consecutive states from `rho_e`.
pub fn equidistance(p0: &Point3, p1: &Point3, rho_e: f64) -> f64 {
    p0.distance(p1) - rho_e
}

/// d/d(p0, p1).
pub fn equidistance_jacobian(p0: &Point3, p1: &Point3) -> [f64; 6] {
    let u = unit_or_zero(*p1 - *p0);
    [-u.x, -u.y, -u.z, u.x, u.y, u.z]
}

/// Hinge on the obstacle distance: `rho_o - d` inside the clearance, else 0.
pub fn obstacle(d: f64, rho_o: f64) -> f64 {
    if d < rho_o {
        rho_o - d
    } else {
        0.0
    }
}

/// Sum of inverse sample distances, samples inside `rho_ot` weighted by `beta`.
pub fn tether_obstacle<I: IntoIterator<Item = f64>>(distances: I, rho_ot: f64, beta: f64) -> f64 {
    distances
        .into_iter()
        .map(|d| {
            let w = if d > rho_ot { 1.0 } else { beta };
            w / d.max(MIN_INVERSE_DISTANCE)
        })
        .sum()
}

/// Hinge on the distance to the nearest traversable point.
pub fn traversability(d_trav: f64, rho_trav: f64) -> f64 {
    if d_trav > rho_trav {
        d_trav - rho_trav
    } else {
        0.0
    }
}

/// `1 - cos(theta)` for turns sharper than `rho_s`, else the constant `1 - cos(rho_s)`.
///
/// The turn angle of a very short segment is meaningless (a robot nudged off
/// a stationary spot points anywhere), so the excess over the constant is
/// faded in linearly while either segment is shorter than
/// [`SMOOTHNESS_FADE_LENGTH`]. Segments under [`DEGENERATE_SEGMENT`] give
/// exactly the constant.
pub fn smoothness(p0: &Point3, p1: &Point3, p2: &Point3, rho_s: f64) -> f64 {
    let a = *p1 - *p0;
    let b = *p2 - *p1;
    let (na, nb) = (a.norm(), b.norm());
    let floor = 1.0 - rho_s.cos();
    if na < DEGENERATE_SEGMENT || nb < DEGENERATE_SEGMENT {
        return floor;
    }
    let cos_t = (a.dot(&b) / (na * nb)).clamp(-1.0, 1.0);
    if cos_t.acos().abs() > rho_s {
        let fade = (na.min(nb) / SMOOTHNESS_FADE_LENGTH).min(1.0);
        floor + fade * (rho_s.cos() - cos_t)
    } else {
        floor
    }
}

/// Speed over a segment minus the desired speed.
pub fn velocity(p0: &Point3, p1: &Point3, dt: f64, rho_v: f64) -> f64 {
    p0.distance(p1) / dt - rho_v
}

/// d/d(p0, p1, dt).
pub fn velocity_jacobian(p0: &Point3, p1: &Point3, dt: f64) -> [f64; 7] {
    let d = *p1 - *p0;
    let u = unit_or_zero(d) / dt;
    [-u.x, -u.y, -u.z, u.x, u.y, u.z, -d.norm() / (dt * dt)]
}

/// Speed change between two segments over their combined duration.
pub fn acceleration(v_prev: f64, v_next: f64, dt_prev: f64, dt_next: f64) -> f64 {
    (v_next - v_prev) / (dt_prev + dt_next)
}

/// Acceleration residual written in positions: speeds are `|p1-p0|/dt_prev`
/// and `|p2-p1|/dt_next`.
pub fn acceleration_from_positions(p0: &Point3, p1: &Point3, p2: &Point3, dt_prev: f64, dt_next: f64) -> f64 {
    acceleration(p0.distance(p1) / dt_prev, p1.distance(p2) / dt_next, dt_prev, dt_next)
}

/// d/d(p0, p1, p2, dt_prev, dt_next) of [`acceleration_from_positions`].
pub fn acceleration_jacobian(p0: &Point3, p1: &Point3, p2: &Point3, dt_prev: f64, dt_next: f64) -> [f64; 11] {
    let (d1, d2) = (*p1 - *p0, *p2 - *p1);
    let (u1, u2) = (unit_or_zero(d1), unit_or_zero(d2));
    let s = dt_prev + dt_next;
    let delta = acceleration_from_positions(p0, p1, p2, dt_prev, dt_next);
    let g0 = u1 / (dt_prev * s);
    let g2 = u2 / (dt_next * s);
    let g1 = -(g0 + g2);
    [
        g0.x,
        g0.y,
        g0.z,
        g1.x,
        g1.y,
        g1.z,
        g2.x,
        g2.y,
        g2.z,
        d1.norm() / (dt_prev * dt_prev * s) - delta / s,
        -d2.norm() / (dt_next * dt_next * s) - delta / s,
    ]
}

/// Exponential penalty when the tether is shorter than the endpoint distance.
pub fn tether_length(d_u: f64, l: f64) -> f64 {
    if d_u > l {
        (d_u - l).exp() - 1.0
    } else {
        0.0
    }
}

/// d/d(p_g, p_a, l) of [`tether_length`], with `d_u = |p_a - attach(p_g)|`.
pub fn tether_length_jacobian(attach: &Point3, p_a: &Point3, l: f64) -> [f64; 7] {
    let d = *p_a - *attach;
    let d_u = d.norm();
    if d_u <= l {
        return [0.0; 7];
    }
    let e = (d_u - l).exp();
    let u = unit_or_zero(d) * e;
    [-u.x, -u.y, -u.z, u.x, u.y, u.z, -e]
}

/// Cauchy-robustified weighted cost of one residual: `gamma s^2 ln(1 + delta^2/s^2)`.
pub fn robust_cost(delta: f64, gamma: f64, scale: f64) -> f64 {
    let s2 = scale * scale;
    gamma * s2 * (delta * delta / s2).ln_1p()
}

/// Derivative of [`robust_cost`] with respect to `delta^2`.
pub fn robust_weight(delta: f64, gamma: f64, scale: f64) -> f64 {
    gamma / (1.0 + delta * delta / (scale * scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{E, PI};

    fn p(x: f64, y: f64, z: f64) -> Point3 {
        Point3::new(x, y, z)
    }

    #[test]
    fn equidistance_examples() {
        let o = Point3::ZERO;
        assert_eq!(equidistance(&o, &p(1.0, 0.0, 0.0), 1.0), 0.0);
        assert!((equidistance(&o, &p(1.2, 0.0, 0.0), 1.0) - 0.2).abs() < 1e-12);
        assert!((equidistance(&o, &p(0.0, 0.7, 0.0), 1.0) + 0.3).abs() < 1e-12);
    }

    #[test]
    fn obstacle_examples() {
        assert_eq!(obstacle(2.0, 1.2), 0.0);
        assert!((obstacle(1.0, 1.2) - 0.2).abs() < 1e-12);
        assert_eq!(obstacle(1.2, 1.2), 0.0);
    }

    #[test]
    fn tether_obstacle_examples() {
        assert_eq!(tether_obstacle([2.0], 0.1, 10.0), 0.5);
        assert!((tether_obstacle([0.05], 0.1, 10.0) - 200.0).abs() < 1e-9);
        assert_eq!(tether_obstacle(vec![1.0; 7], 0.1, 10.0), 7.0);
    }

    #[test]
    fn traversability_examples() {
        assert_eq!(traversability(0.0, 0.001), 0.0);
        assert!((traversability(0.101, 0.001) - 0.1).abs() < 1e-12);
        assert_eq!(traversability(0.0005, 0.001), 0.0);
    }

    #[test]
    fn smoothness_examples() {
        let floor = 1.0 - (PI / 9.0).cos();
        let o = Point3::ZERO;
        assert!((smoothness(&o, &p(1.0, 0.0, 0.0), &p(2.0, 0.0, 0.0), PI / 9.0) - floor).abs() < 1e-12);
        assert!((floor - 0.0603).abs() < 1e-4);
        assert!((smoothness(&o, &p(1.0, 0.0, 0.0), &p(1.0, 1.0, 0.0), PI / 9.0) - 1.0).abs() < 1e-12);
        let t = PI / 9.0;
        let at_limit = smoothness(&o, &p(1.0, 0.0, 0.0), &p(1.0 + t.cos(), t.sin(), 0.0), t);
        assert!((at_limit - floor).abs() < 1e-9);
        // stationary robot takes the constant branch
        assert_eq!(smoothness(&o, &o, &p(1.0, 0.0, 0.0), PI / 9.0), floor);
        // a nudge off a stationary spot does not jump to the full penalty
        let nudged = smoothness(&o, &p(1.0, 0.0, 0.0), &p(1.0, 1e-4, 0.0), PI / 9.0);
        let full = 1.0 - floor;
        assert!((nudged - floor - full * 1e-4 / SMOOTHNESS_FADE_LENGTH).abs() < 1e-9);
    }

    #[test]
    fn velocity_and_acceleration_examples() {
        let o = Point3::ZERO;
        assert_eq!(velocity(&o, &p(1.0, 0.0, 0.0), 1.0, 1.0), 0.0);
        assert_eq!(velocity(&o, &p(2.0, 0.0, 0.0), 1.0, 1.0), 1.0);
        assert_eq!(velocity(&o, &o, 1.0, 1.0), -1.0);
        assert_eq!(acceleration(1.0, 1.0, 0.5, 0.5), 0.0);
        assert_eq!(acceleration(1.0, 2.0, 1.0, 1.0), 0.5);
        assert_eq!(acceleration(2.0, 1.0, 0.5, 0.5), -1.0);
    }

    #[test]
    fn tether_length_examples() {
        assert_eq!(tether_length(3.0, 3.0), 0.0);
        assert!((tether_length(3.0, 2.0) - (E - 1.0)).abs() < 1e-12);
        assert_eq!(tether_length(2.0, 3.0), 0.0);
    }

    // central differences of `f` over the flattened argument vector
    fn fd(x: &[f64], f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
        let h = 1e-6;
        (0..x.len())
            .map(|i| {
                let (mut xp, mut xm) = (x.to_vec(), x.to_vec());
                xp[i] += h;
                xm[i] -= h;
                (f(&xp) - f(&xm)) / (2.0 * h)
            })
            .collect()
    }

    fn assert_close(an: &[f64], num: &[f64]) -> Result<(), TestCaseError> {
        for (i, (a, n)) in an.iter().zip(num).enumerate() {
            let scale = a.abs().max(n.abs()).max(1.0);
            prop_assert!((a - n).abs() <= 1e-4 * scale, "entry {i}: analytic {a} vs fd {n}");
        }
        Ok(())
    }

    fn pt(x: &[f64]) -> Point3 {
        p(x[0], x[1], x[2])
    }

    fn coords() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-5.0..5.0f64, 9)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn equidistance_jacobian_matches_fd(c in coords()) {
            prop_assume!(pt(&c[0..3]).distance(&pt(&c[3..6])) > 1e-2);
            let an = equidistance_jacobian(&pt(&c[0..3]), &pt(&c[3..6]));
            let num = fd(&c[0..6], |x| equidistance(&pt(&x[0..3]), &pt(&x[3..6]), 1.0));
            assert_close(&an, &num)?;
        }

        #[test]
        fn velocity_jacobian_matches_fd(c in coords(), dt in 0.1..3.0f64) {
            prop_assume!(pt(&c[0..3]).distance(&pt(&c[3..6])) > 1e-2);
            let an = velocity_jacobian(&pt(&c[0..3]), &pt(&c[3..6]), dt);
            let mut x = c[0..6].to_vec();
            x.push(dt);
            let num = fd(&x, |x| velocity(&pt(&x[0..3]), &pt(&x[3..6]), x[6], 1.0));
            assert_close(&an, &num)?;
        }

        #[test]
        fn acceleration_jacobian_matches_fd(c in coords(), dt0 in 0.1..3.0f64, dt1 in 0.1..3.0f64) {
            prop_assume!(pt(&c[0..3]).distance(&pt(&c[3..6])) > 1e-2);
            prop_assume!(pt(&c[3..6]).distance(&pt(&c[6..9])) > 1e-2);
            let an = acceleration_jacobian(&pt(&c[0..3]), &pt(&c[3..6]), &pt(&c[6..9]), dt0, dt1);
            let mut x = c.clone();
            x.extend([dt0, dt1]);
            let num = fd(&x, |x| {
                acceleration_from_positions(&pt(&x[0..3]), &pt(&x[3..6]), &pt(&x[6..9]), x[9], x[10])
            });
            assert_close(&an, &num)?;
        }

        #[test]
        fn tether_length_jacobian_matches_fd(c in coords(), l in 0.5..8.0f64) {
            let d_u = pt(&c[0..3]).distance(&pt(&c[3..6]));
            // the hinge has a kink at d_u == l
            prop_assume!((d_u - l).abs() > 1e-3 && d_u > 1e-2);
            let an = tether_length_jacobian(&pt(&c[0..3]), &pt(&c[3..6]), l);
            let mut x = c[0..6].to_vec();
            x.push(l);
            let num = fd(&x, |x| tether_length(pt(&x[0..3]).distance(&pt(&x[3..6])), x[6]));
            assert_close(&an, &num)?;
        }
    }

    #[test]
    fn cauchy_kernel_properties() {
        assert_eq!(robust_cost(0.0, 0.3, 1.0), 0.0);
        for k in 1..=10 {
            let d = 0.01 * k as f64;
            let ratio = robust_cost(d, 0.3, 1.0) / (0.3 * d * d);
            assert!((ratio - 1.0).abs() < 0.01, "{d}: {ratio}");
        }
        assert!(robust_cost(10.0, 1.0, 1.0) / robust_cost(1.0, 1.0, 1.0) < 10.0);
        for d in [0.0, 0.5, 3.0, 40.0] {
            assert!(robust_cost(d, 0.2, 1.0) <= 0.2 * d * d);
        }
    }
}
