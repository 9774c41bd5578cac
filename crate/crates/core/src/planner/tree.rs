use crate::geometry::{wrap_angle, Point3};
use crate::planner::{JointState, PlannerConfig, StateChecker, Steered};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannerNode {
    pub p_g: Point3,
    pub p_a: Point3,
    /// UGV heading, taken from the parent-to-node ground motion.
    pub yaw_g: f64,
    pub tether_len: f64,
    pub cost: f64,
    pub parent: Option<usize>,
}

impl PlannerNode {
    pub fn joint(&self) -> JointState {
        JointState { p_g: self.p_g, p_a: self.p_a }
    }
}

/// Weighted edge cost between two joint states.
#[inline]
pub fn edge_cost(a: &JointState, b: &JointState, cfg: &PlannerConfig) -> f64 {
    cfg.w_g * a.p_g.distance(&b.p_g) + cfg.w_a * a.p_a.distance(&b.p_a)
}

/// Nearest-node metric: weighted robot distances plus the heading change the
/// UGV would need to drive from `node` toward `sample`.
pub fn nearest_metric(node: &PlannerNode, sample: &JointState, cfg: &PlannerConfig) -> f64 {
    let mut m = edge_cost(&node.joint(), sample, cfg);
    let ground = sample.p_g - node.p_g;
    if ground.horizontal_norm() > 1e-9 {
        let heading = ground.y.atan2(ground.x);
        m += cfg.w_yaw * wrap_angle(node.yaw_g - heading).abs();
    }
    m
}

/// Lowest-metric node; ties go to the lowest id.
pub fn nearest(tree: &Tree, sample: &JointState, cfg: &PlannerConfig) -> usize {
    let mut best = 0;
    let mut best_m = f64::INFINITY;
    for (i, n) in tree.nodes.iter().enumerate() {
        let m = nearest_metric(n, sample, cfg);
        if m < best_m {
            best_m = m;
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone)]
pub struct Tree {
    nodes: Vec<PlannerNode>,
    children: Vec<Vec<usize>>,
}

impl Tree {
    pub fn new(root: PlannerNode) -> Self {
        Self { nodes: vec![root], children: vec![Vec::new()] }
    }

    pub fn node(&self, id: usize) -> &PlannerNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[PlannerNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Root-to-node id chain.
    pub fn branch(&self, id: usize) -> Vec<usize> {
        let mut chain = vec![id];
        let mut cur = id;
        while let Some(p) = self.nodes[cur].parent {
            chain.push(p);
            cur = p;
        }
        chain.reverse();
        chain
    }

    /// Appends a node without choose-parent or rewiring.
    pub fn push_child(&mut self, parent: usize, state: JointState, tether_len: f64, cfg: &PlannerConfig) -> usize {
        let p = self.nodes[parent];
        let id = self.nodes.len();
        self.nodes.push(PlannerNode {
            p_g: state.p_g,
            p_a: state.p_a,
            yaw_g: heading_after(&p, &state.p_g),
            tether_len,
            cost: p.cost + edge_cost(&p.joint(), &state, cfg),
            parent: Some(parent),
        });
        self.children.push(Vec::new());
        self.children[parent].push(id);
        id
    }

    /// Inserts a steered state RRT*-style: picks the cheapest collision-free
    /// parent among the neighbors, then rewires neighbors through the new node.
    pub fn insert(&mut self, nearest_id: usize, steered: Steered, checker: &StateChecker<'_>) -> usize {
        let cfg = checker.cfg;
        let new = steered.state;
        let near: Vec<usize> =
            (0..self.nodes.len()).filter(|&i| edge_cost(&self.nodes[i].joint(), &new, cfg) <= cfg.neighbor_radius).collect();

        let mut parent = nearest_id;
        let via_nearest = self.nodes[nearest_id].cost + edge_cost(&self.nodes[nearest_id].joint(), &new, cfg);
        let mut options: Vec<(f64, usize)> = near
            .iter()
            .filter(|&&i| i != nearest_id)
            .map(|&i| (self.nodes[i].cost + edge_cost(&self.nodes[i].joint(), &new, cfg), i))
            .filter(|&(c, _)| c < via_nearest)
            .collect();
        options.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for (_, i) in options {
            if checker.obstacle_free(&self.nodes[i].joint(), &new) {
                parent = i;
                break;
            }
        }
        let id = self.push_child(parent, new, steered.tether_len, cfg);

        for i in near {
            if i == parent {
                continue;
            }
            let via = self.nodes[id].cost + edge_cost(&new, &self.nodes[i].joint(), cfg);
            if via < self.nodes[i].cost - 1e-12 && checker.obstacle_free(&new, &self.nodes[i].joint()) {
                self.reparent(i, id, via);
            }
        }
        id
    }

    fn reparent(&mut self, child: usize, new_parent: usize, new_cost: f64) {
        if let Some(old) = self.nodes[child].parent {
            self.children[old].retain(|&c| c != child);
        }
        self.children[new_parent].push(child);
        let p = self.nodes[new_parent];
        let node = &mut self.nodes[child];
        node.parent = Some(new_parent);
        node.yaw_g = heading_after(&p, &node.p_g);
        let delta = new_cost - node.cost;
        node.cost = new_cost;
        let mut stack = self.children[child].clone();
        while let Some(c) = stack.pop() {
            self.nodes[c].cost += delta;
            stack.extend_from_slice(&self.children[c]);
        }
    }
}

fn heading_after(parent: &PlannerNode, p_g: &Point3) -> f64 {
    let d = *p_g - parent.p_g;
    if d.horizontal_norm() > 1e-9 {
        d.y.atan2(d.x)
    } else {
        parent.yaw_g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(g: Point3, a: Point3, yaw: f64) -> PlannerNode {
        PlannerNode { p_g: g, p_a: a, yaw_g: yaw, tether_len: 1.0, cost: 0.0, parent: None }
    }

    #[test]
    fn single_node_tree() {
        let cfg = PlannerConfig::default();
        let t = Tree::new(node(Point3::ZERO, Point3::new(0.0, 0.0, 2.0), 0.0));
        let s = JointState { p_g: Point3::new(5.0, 5.0, 0.0), p_a: Point3::new(1.0, 1.0, 1.0) };
        assert_eq!(nearest(&t, &s, &cfg), 0);
    }

    #[test]
    fn nearer_ugv_wins() {
        let cfg = PlannerConfig { w_yaw: 0.0, ..Default::default() };
        let a = Point3::new(0.0, 0.0, 2.0);
        let mut t = Tree::new(node(Point3::new(1.0, 0.0, 0.0), a, 0.0));
        t.push_child(0, JointState { p_g: Point3::new(2.0, 0.0, 0.0), p_a: a }, 1.0, &cfg);
        let s = JointState { p_g: Point3::ZERO, p_a: Point3::new(0.0, 3.0, 2.0) };
        assert_eq!(nearest(&t, &s, &cfg), 0);
    }

    #[test]
    fn yaw_term_breaks_geometric_ties() {
        let cfg = PlannerConfig::default();
        let a = Point3::new(0.0, 0.0, 2.0);
        // both nodes at the same place, one facing the sample, one facing away
        let mut t = Tree::new(node(Point3::ZERO, a, std::f64::consts::PI));
        t.push_child(0, JointState { p_g: Point3::ZERO, p_a: a }, 1.0, &cfg);
        t.nodes[1].yaw_g = 0.0;
        let s = JointState { p_g: Point3::new(1.0, 0.0, 0.0), p_a: a };
        assert_eq!(nearest(&t, &s, &cfg), 1);
    }

    #[test]
    fn branch_runs_root_to_leaf() {
        let cfg = PlannerConfig::default();
        let a = Point3::new(0.0, 0.0, 2.0);
        let mut t = Tree::new(node(Point3::ZERO, a, 0.0));
        let s1 = t.push_child(0, JointState { p_g: Point3::new(0.0, 1.0, 0.0), p_a: a }, 1.0, &cfg);
        let s2 = t.push_child(s1, JointState { p_g: Point3::new(0.0, 1.0, 0.0), p_a: Point3::new(1.0, 0.0, 2.0) }, 1.0, &cfg);
        assert_eq!(t.branch(s2), vec![0, s1, s2]);
        assert!((t.node(s1).yaw_g - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        // zero ground motion inherits the parent heading
        assert_eq!(t.node(s2).yaw_g, t.node(s1).yaw_g);
        assert!((t.node(s2).cost - 2.5).abs() < 1e-12);
    }
}
