//! Static 3D kd-tree with exact nearest, k-nearest and radius queries.
//!
//! Splits at the median along the widest axis of each node's bounding box, so
//! structured clouds with many equal coordinates (walls, floors) stay balanced.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::geometry::Point3;

const LEAF_SIZE: usize = 16;

#[derive(Debug, Clone)]
enum Node {
    Leaf { start: usize, end: usize },
    Split { axis: usize, value: f64, left: usize, right: usize },
}

#[derive(Debug, Clone)]
pub struct KdTree {
    points: Vec<Point3>,
    /// Permutation of point indices; leaves own contiguous ranges.
    order: Vec<usize>,
    nodes: Vec<Node>,
}

#[derive(PartialEq)]
struct Candidate {
    dist2: f64,
    index: usize,
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist2.total_cmp(&other.dist2).then(self.index.cmp(&other.index))
    }
}

impl KdTree {
    pub fn new(points: Vec<Point3>) -> Self {
        let mut tree = Self { order: (0..points.len()).collect(), points, nodes: Vec::new() };
        if !tree.points.is_empty() {
            let n = tree.points.len();
            tree.build(0, n);
        }
        tree
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for &i in &self.order[start..end] {
            for a in 0..3 {
                let c = self.points[i].component(a);
                lo[a] = lo[a].min(c);
                hi[a] = hi[a].max(c);
            }
        }
        let axis = (0..3).max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b]))).unwrap();
        if hi[axis] - lo[axis] == 0.0 {
            // all points coincide
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let mid = start + (end - start) / 2;
        let points = &self.points;
        self.order[start..end]
            .select_nth_unstable_by(mid - start, |&a, &b| points[a].component(axis).total_cmp(&points[b].component(axis)));
        let value = self.points[self.order[mid]].component(axis);
        self.nodes.push(Node::Leaf { start: 0, end: 0 });
        let left = self.build(start, mid);
        let right = self.build(mid, end);
        self.nodes[id] = Node::Split { axis, value, left, right };
        id
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index and distance of the nearest point; ties go to the lowest index.
    pub fn nearest(&self, p: &Point3) -> Option<(usize, f64)> {
        let mut best = self.nearest_n(p, 1);
        best.pop().map(|i| (i, self.points[i].distance(p)))
    }

    /// The `k` nearest points, closest first.
    pub fn nearest_n(&self, p: &Point3, k: usize) -> Vec<usize> {
        if self.points.is_empty() || k == 0 {
            return Vec::new();
        }
        let mut heap: BinaryHeap<Candidate> = BinaryHeap::with_capacity(k + 1);
        self.knn_recurse(0, p, k, &mut heap);
        heap.into_sorted_vec().into_iter().map(|c| c.index).collect()
    }

    fn knn_recurse(&self, node: usize, p: &Point3, k: usize, heap: &mut BinaryHeap<Candidate>) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    let cand = Candidate { dist2: self.points[i].distance_squared(p), index: i };
                    if heap.len() < k {
                        heap.push(cand);
                    } else if cand < *heap.peek().unwrap() {
                        heap.pop();
                        heap.push(cand);
                    }
                }
            }
            Node::Split { axis, value, left, right } => {
                let diff = p.component(axis) - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.knn_recurse(near, p, k, heap);
                if heap.len() < k || diff * diff <= heap.peek().unwrap().dist2 {
                    self.knn_recurse(far, p, k, heap);
                }
            }
        }
    }

    /// Indices of all points within `radius` (inclusive), ascending.
    pub fn within(&self, p: &Point3, radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if !self.points.is_empty() {
            self.within_recurse(0, p, radius * radius, radius, &mut out);
        }
        out.sort_unstable();
        out
    }

    fn within_recurse(&self, node: usize, p: &Point3, r2: f64, r: f64, out: &mut Vec<usize>) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                out.extend(self.order[start..end].iter().copied().filter(|&i| self.points[i].distance_squared(p) <= r2));
            }
            Node::Split { axis, value, left, right } => {
                let c = p.component(axis);
                if c - r <= value {
                    self.within_recurse(left, p, r2, r, out);
                }
                if c + r >= value {
                    self.within_recurse(right, p, r2, r, out);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_linear_scan_on_structured_and_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut pts = Vec::new();
        for j in 0..30 {
            for k in 0..30 {
                pts.push(Point3::new(1.0, j as f64 * 0.1, k as f64 * 0.1));
            }
        }
        for _ in 0..300 {
            pts.push(Point3::new(rng.gen_range(-1.0..3.0), rng.gen_range(-1.0..3.0), rng.gen_range(-1.0..3.0)));
        }
        pts.push(pts[10]);
        let tree = KdTree::new(pts.clone());
        for _ in 0..200 {
            let q = Point3::new(rng.gen_range(-2.0..4.0), rng.gen_range(-2.0..4.0), rng.gen_range(-2.0..4.0));
            let (_, d) = tree.nearest(&q).unwrap();
            let brute = pts.iter().map(|p| p.distance(&q)).fold(f64::INFINITY, f64::min);
            assert_eq!(d, brute);

            let knn = tree.nearest_n(&q, 12);
            let mut sorted: Vec<f64> = pts.iter().map(|p| p.distance_squared(&q)).collect();
            sorted.sort_by(f64::total_cmp);
            let got: Vec<f64> = knn.iter().map(|&i| pts[i].distance_squared(&q)).collect();
            assert_eq!(got, sorted[..12].to_vec());

            let r = 0.4;
            let within = tree.within(&q, r);
            let brute_within: Vec<usize> = (0..pts.len()).filter(|&i| pts[i].distance_squared(&q) <= r * r).collect();
            assert_eq!(within, brute_within);
        }
    }

    #[test]
    fn all_duplicates() {
        let tree = KdTree::new(vec![Point3::ZERO; 100]);
        assert_eq!(tree.within(&Point3::ZERO, 0.0).len(), 100);
        assert_eq!(tree.nearest_n(&Point3::ZERO, 5).len(), 5);
        assert!(KdTree::new(Vec::new()).nearest(&Point3::ZERO).is_none());
    }
}
