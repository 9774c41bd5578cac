use crate::tether::TetherConfig;

/// RRT* parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannerConfig {
    /// Maximum UGV displacement per steering step.
    pub epsilon_g: f64,
    /// Maximum UAV displacement per steering step.
    pub epsilon_a: f64,
    /// Cost weight of UGV motion; must exceed `w_a` so the UAV moves first.
    pub w_g: f64,
    pub w_a: f64,
    /// Weight of the UGV heading change in the nearest-node metric.
    pub w_yaw: f64,
    /// Radius (in weighted cost units) for choose-parent and rewiring.
    pub neighbor_radius: f64,
    pub goal_tolerance: f64,
    /// Iterations between solution checks.
    pub batch_size: usize,
    pub max_iters: usize,
    pub rng_seed: u64,
    /// Spacing of the interpolated states checked along an edge.
    pub interp_step: f64,
    /// Probability of steering toward the goal instead of a uniform sample.
    pub goal_bias: f64,
    /// Rejection-sampling attempts for a collision-free UAV position.
    pub sample_budget: usize,
    /// Heading assigned to the root node.
    pub root_yaw: f64,
    pub uav_clearance: f64,
    pub ugv_clearance: f64,
    pub tether_clearance: f64,
    /// Interpolated UGV positions must stay this close to a traversable point.
    pub max_traversable_gap: f64,
    pub tether: TetherConfig,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            epsilon_g: 0.5,
            epsilon_a: 0.5,
            w_g: 1.5,
            w_a: 1.0,
            w_yaw: 0.2,
            neighbor_radius: 1.5,
            goal_tolerance: 0.3,
            batch_size: 500,
            max_iters: 50_000,
            rng_seed: 0,
            interp_step: 0.2,
            goal_bias: 0.05,
            sample_budget: 10_000,
            root_yaw: 0.0,
            uav_clearance: 1.3,
            ugv_clearance: 1.3,
            tether_clearance: 0.15,
            max_traversable_gap: 0.3,
            tether: TetherConfig::default(),
        }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("epsilon_g", self.epsilon_g),
            ("epsilon_a", self.epsilon_a),
            ("w_g", self.w_g),
            ("w_a", self.w_a),
            ("neighbor_radius", self.neighbor_radius),
            ("goal_tolerance", self.goal_tolerance),
            ("interp_step", self.interp_step),
            ("l_max", self.tether.l_max),
            ("delta_l", self.tether.delta_l),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{name} must be positive (got {v})"));
            }
        }
        if self.w_yaw < 0.0 {
            return Err("w_yaw must be non-negative".into());
        }
        if self.w_g <= self.w_a {
            return Err(format!("w_g ({}) must exceed w_a ({})", self.w_g, self.w_a));
        }
        if self.batch_size == 0 || self.max_iters == 0 {
            return Err("batch_size and max_iters must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.goal_bias) {
            return Err("goal_bias must lie in [0, 1]".into());
        }
        Ok(())
    }
}
