//! Residual assembly and the damped normal equations.

use crate::environment::Environment;
use crate::geometry::Point3;
use crate::optimizer::band::BandMatrix;
use crate::optimizer::residuals as r;
use crate::optimizer::{tether_polyline, Family, OptimizerConfig, Thresholds, STATE_DIM};
use crate::tether::SampleCount;

const G: usize = 0;
const A: usize = 3;
const L: usize = 6;
const DT: usize = 7;

/// Damping diagonal floor, as a fraction of the mean Gauss-Newton diagonal.
pub const DAMPING_FLOOR: f64 = 1.0;

/// One scalar residual with its sparse gradient.
#[derive(Debug, Clone)]
pub(crate) struct Term {
    pub family: Family,
    pub value: f64,
    pub jac: Vec<(usize, f64)>,
}

/// The trajectory cost over a fixed environment and parameter set.
pub struct CostModel<'a> {
    env: &'a Environment,
    thr: &'a Thresholds,
    cfg: &'a OptimizerConfig,
    n: usize,
}

fn point(x: &[f64], i: usize, off: usize) -> Point3 {
    Point3::from_slice(&x[STATE_DIM * i + off..STATE_DIM * i + off + 3])
}

fn var(i: usize, off: usize) -> usize {
    STATE_DIM * i + off
}

impl<'a> CostModel<'a> {
    pub fn new(env: &'a Environment, thr: &'a Thresholds, cfg: &'a OptimizerConfig, n: usize) -> Self {
        Self { env, thr, cfg, n }
    }

    pub fn num_vars(&self) -> usize {
        self.n * STATE_DIM
    }

    /// Endpoint positions and the first `dt` are held constant, and UGV
    /// heights too when so configured.
    pub fn is_fixed(&self, v: usize) -> bool {
        let (i, k) = (v / STATE_DIM, v % STATE_DIM);
        (k < L && (i == 0 || i + 1 == self.n)) || (i == 0 && k == DT) || (k == G + 2 && self.cfg.fix_ugv_height)
    }

    /// Applies the box bounds: `dt >= dt_min` after the first state, `l >= 0`.
    pub fn project(&self, x: &mut [f64]) {
        for i in 0..self.n {
            x[var(i, L)] = x[var(i, L)].max(0.0);
            if i > 0 {
                x[var(i, DT)] = x[var(i, DT)].max(self.cfg.dt_min);
            }
        }
    }

    fn at_bound(&self, x: &[f64], v: usize) -> bool {
        match v % STATE_DIM {
            L => x[v] <= 0.0,
            DT => v >= STATE_DIM && x[v] <= self.cfg.dt_min,
            _ => false,
        }
    }

    /// Total robustified cost and its split by family.
    pub fn cost(&self, x: &[f64]) -> (f64, [f64; 13]) {
        let mut fam = [0.0; 13];
        for t in self.terms(x, false) {
            fam[t.family.index()] += r::robust_cost(t.value, self.cfg.weights.gamma(t.family), self.cfg.cauchy_scale);
        }
        (fam.iter().sum(), fam)
    }

    /// Total weighted cost without the robust kernel, split by family.
    pub fn plain_cost(&self, x: &[f64]) -> [f64; 13] {
        let mut fam = [0.0; 13];
        for t in self.terms(x, false) {
            fam[t.family.index()] += self.cfg.weights.gamma(t.family) * t.value * t.value;
        }
        fam
    }

    /// Every residual, optionally with its gradient.
    pub(crate) fn terms(&self, x: &[f64], with_jac: bool) -> Vec<Term> {
        let n = self.n;
        let cfg = self.cfg;
        let thr = self.thr;
        let mut out = Vec::with_capacity(n * 14);
        let mut scratch = if with_jac { x.to_vec() } else { Vec::new() };
        let weights = &cfg.weights;

        let push = |family: Family, value: f64, jac: Vec<(usize, f64)>, out: &mut Vec<Term>| {
            if weights.gamma(family) > 0.0 {
                out.push(Term { family, value, jac });
            }
        };

        for (off, fe, fv, fa, rho_e, rho_v) in [
            (G, Family::EquidistanceUgv, Family::VelocityUgv, Family::AccelerationUgv, thr.rho_eg, thr.rho_vg),
            (A, Family::EquidistanceUav, Family::VelocityUav, Family::AccelerationUav, thr.rho_ea, thr.rho_va),
        ] {
            for i in 0..n.saturating_sub(1) {
                let (p0, p1) = (point(x, i, off), point(x, i + 1, off));
                let dt = x[var(i + 1, DT)];
                let mut jac = Vec::new();
                if with_jac {
                    let j = r::equidistance_jacobian(&p0, &p1);
                    jac = self.sparse(&[(i, off, 3), (i + 1, off, 3)], &j);
                }
                push(fe, r::equidistance(&p0, &p1, rho_e), jac, &mut out);

                let mut jac = Vec::new();
                if with_jac {
                    let j = r::velocity_jacobian(&p0, &p1, dt);
                    jac = self.sparse(&[(i, off, 3), (i + 1, off, 3), (i + 1, DT, 1)], &j);
                }
                push(fv, r::velocity(&p0, &p1, dt, rho_v), jac, &mut out);
            }
            for i in 1..n.saturating_sub(1) {
                let (p0, p1, p2) = (point(x, i - 1, off), point(x, i, off), point(x, i + 1, off));
                let (dt0, dt1) = (x[var(i, DT)], x[var(i + 1, DT)]);
                let mut jac = Vec::new();
                if with_jac {
                    let j = r::acceleration_jacobian(&p0, &p1, &p2, dt0, dt1);
                    jac = self.sparse(&[(i - 1, off, 3), (i, off, 3), (i + 1, off, 3), (i, DT, 1), (i + 1, DT, 1)], &j);
                }
                push(fa, r::acceleration_from_positions(&p0, &p1, &p2, dt0, dt1), jac, &mut out);
            }
        }

        // field-dependent families use central differences
        for (off, family, rho) in [(G, Family::ObstacleUgv, thr.rho_og), (A, Family::ObstacleUav, thr.rho_oa)] {
            let f = |x: &[f64], i: usize| {
                let p = point(x, i, off);
                let d = if off == G { self.env.ugv_distance(&p) } else { self.env.uav_distance(&p) };
                r::obstacle(d, rho)
            };
            for i in 0..n {
                let jac = if with_jac { self.numeric(&mut scratch, &[(i, off, 3)], |x| f(x, i)) } else { Vec::new() };
                push(family, f(x, i), jac, &mut out);
            }
        }

        let trav = |x: &[f64], i: usize| {
            let d = self.env.traversable.distance_to_traversable(&point(x, i, G)).0;
            r::traversability(d, thr.rho_trav)
        };
        for i in 0..n {
            let jac = if with_jac { self.numeric(&mut scratch, &[(i, G, 3)], |x| trav(x, i)) } else { Vec::new() };
            push(Family::Traversability, trav(x, i), jac, &mut out);
        }

        for (off, family, rho_s) in [(G, Family::SmoothnessUgv, thr.rho_sg), (A, Family::SmoothnessUav, thr.rho_sa)] {
            let f = |x: &[f64], i: usize| r::smoothness(&point(x, i - 1, off), &point(x, i, off), &point(x, i + 1, off), rho_s);
            for i in 1..n.saturating_sub(1) {
                let jac = if with_jac {
                    self.numeric(&mut scratch, &[(i - 1, off, 3), (i, off, 3), (i + 1, off, 3)], |x| f(x, i))
                } else {
                    Vec::new()
                };
                push(family, f(x, i), jac, &mut out);
            }
        }

        let samples = SampleCount::Fixed(cfg.tether_samples);
        let tether_obstacle = |x: &[f64], i: usize| {
            let pts = tether_polyline(&point(x, i, G), &point(x, i, A), x[var(i, L)], &cfg.tether, samples);
            // the end samples are the attach point and the UAV, which the
            // robot terms already cover; counting them rewards lifting the UGV
            let inner = &pts[1..pts.len() - 1];
            r::tether_obstacle(inner.iter().map(|p| self.env.uav_distance(p)), thr.rho_ot, thr.beta)
        };
        for i in 0..n {
            let jac = if with_jac {
                self.numeric(&mut scratch, &[(i, G, 3), (i, A, 3), (i, L, 1)], |x| tether_obstacle(x, i))
            } else {
                Vec::new()
            };
            push(Family::TetherObstacle, tether_obstacle(x, i), jac, &mut out);

            let (p_g, p_a, l) = (point(x, i, G), point(x, i, A), x[var(i, L)]);
            let attach = cfg.tether.attach(&p_g);
            let mut jac = Vec::new();
            if with_jac {
                let j = r::tether_length_jacobian(&attach, &p_a, l);
                jac = self.sparse(&[(i, G, 3), (i, A, 3), (i, L, 1)], &j);
            }
            push(Family::TetherLength, r::tether_length(attach.distance(&p_a), l), jac, &mut out);
        }
        out
    }

    /// Scatters a dense local Jacobian into global indices, dropping fixed variables.
    fn sparse(&self, blocks: &[(usize, usize, usize)], local: &[f64]) -> Vec<(usize, f64)> {
        let mut out = Vec::with_capacity(local.len());
        let mut k = 0;
        for &(i, off, len) in blocks {
            for c in 0..len {
                let v = var(i, off + c);
                if !self.is_fixed(v) && local[k] != 0.0 {
                    out.push((v, local[k]));
                }
                k += 1;
            }
        }
        out
    }

    /// Central differences of `f` over the free variables in `blocks`.
    fn numeric(&self, x: &mut [f64], blocks: &[(usize, usize, usize)], f: impl Fn(&[f64]) -> f64) -> Vec<(usize, f64)> {
        let h = self.cfg.fd_step;
        let mut out = Vec::new();
        for &(i, off, len) in blocks {
            for c in 0..len {
                let v = var(i, off + c);
                if self.is_fixed(v) {
                    continue;
                }
                let orig = x[v];
                x[v] = orig + h;
                let fp = f(x);
                x[v] = orig - h;
                let fm = f(x);
                x[v] = orig;
                let d = (fp - fm) / (2.0 * h);
                if d != 0.0 && d.is_finite() {
                    out.push((v, d));
                }
            }
        }
        out
    }

    /// Gauss-Newton normal equations with per-residual Cauchy weights.
    pub fn normal_equations(&self, x: &[f64]) -> NormalEquations {
        let terms = self.terms(x, true);
        let bw = terms
            .iter()
            .filter_map(|t| {
                let lo = t.jac.iter().map(|e| e.0).min()?;
                let hi = t.jac.iter().map(|e| e.0).max()?;
                Some(hi - lo)
            })
            .max()
            .unwrap_or(0);
        let nv = self.num_vars();
        let mut h = BandMatrix::zeros(nv, bw);
        let mut g = vec![0.0; nv];
        for t in &terms {
            let w = r::robust_weight(t.value, self.cfg.weights.gamma(t.family), self.cfg.cauchy_scale);
            for &(a, ja) in &t.jac {
                g[a] += w * t.value * ja;
                for &(b, jb) in &t.jac {
                    if b <= a {
                        h.add(a, b, w * ja * jb);
                    }
                }
            }
        }
        // variables resting on a bound with the descent direction pointing out
        // of the box are held for this step (projected Levenberg-Marquardt)
        let fixed: Vec<bool> = (0..nv).map(|v| self.is_fixed(v) || (self.at_bound(x, v) && g[v] > 0.0)).collect();
        NormalEquations { h, g, fixed }
    }
}

/// `H = sum w J^T J` and `g = sum w r J` at one iterate.
pub struct NormalEquations {
    h: BandMatrix,
    g: Vec<f64>,
    fixed: Vec<bool>,
}

impl NormalEquations {
    /// Max-norm of the cost gradient (which is `2 g`).
    pub fn gradient_norm(&self) -> f64 {
        self.g.iter().fold(0.0f64, |m, v| m.max(2.0 * v.abs()))
    }

    /// Gradient of the total cost with respect to every variable (zero for fixed ones).
    pub fn gradient(&self) -> Vec<f64> {
        self.g.iter().map(|v| 2.0 * v).collect()
    }

    /// Decrease of the cost predicted by the quadratic model for `step`:
    /// `-(2 g.step + step.H.step)`.
    pub fn predicted_decrease(&self, step: &[f64]) -> f64 {
        let hs = self.h.mul_vec(step);
        let gs: f64 = self.g.iter().zip(step).map(|(a, b)| a * b).sum();
        let shs: f64 = hs.iter().zip(step).map(|(a, b)| a * b).sum();
        -(2.0 * gs + shs)
    }

    /// Solves `(H + lambda D) step = -g` with `D` the clamped diagonal of `H`.
    /// Fixed variables get a zero step. `None` if the system is not positive definite.
    pub fn solve_damped(&self, lambda: f64) -> Option<Vec<f64>> {
        let mut a = self.h.clone();
        // Directions the Gauss-Newton model sees as flat (sideways motion
        // under a spacing residual) still get damped, relative to the mean
        // curvature, so a small lambda cannot produce meter-sized steps.
        let free: Vec<usize> = (0..a.size()).filter(|&i| !self.fixed[i]).collect();
        let mean = free.iter().map(|&i| a.diagonal(i)).sum::<f64>() / free.len().max(1) as f64;
        let floor = (DAMPING_FLOOR * mean).max(1e-6);
        for i in 0..a.size() {
            let d = a.diagonal(i).clamp(floor, 1e32);
            a.add(i, i, lambda * d);
        }
        let mut rhs: Vec<f64> = self.g.iter().map(|v| -v).collect();
        for (i, &f) in self.fixed.iter().enumerate() {
            if f {
                a.pin(i);
                rhs[i] = 0.0;
            }
        }
        let mut step = a.cholesky().ok()?.solve(&rhs);
        for (s, &f) in step.iter_mut().zip(&self.fixed) {
            if f {
                *s = 0.0;
            }
        }
        Some(step)
    }
}
