//! Symmetric banded matrices and their Cholesky factorization.
//!
//! Every residual touches at most three consecutive trajectory states, so the
//! normal equations have a half-bandwidth of at most 23 and factor in
//! `O(n * bw^2)`.

/// Lower band of a symmetric `n x n` matrix with half-bandwidth `bw`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

/// The matrix was not numerically positive definite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotPositiveDefinite {
    pub row: usize,
}

impl BandMatrix {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self { n, bw, data: vec![0.0; n * (bw + 1)] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && i - j <= self.bw);
        i * (self.bw + 1) + (i - j)
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.bw {
            0.0
        } else {
            self.data[self.idx(i, j)]
        }
    }

    /// Adds `v` to the symmetric pair `(i, j)`, `(j, i)`.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        assert!(i - j <= self.bw, "entry ({i}, {j}) outside bandwidth {}", self.bw);
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn diagonal(&self, i: usize) -> f64 {
        self.data[self.idx(i, i)]
    }

    /// Replaces row and column `i` with the identity row.
    pub fn pin(&mut self, i: usize) {
        let lo = i.saturating_sub(self.bw);
        let hi = (i + self.bw).min(self.n - 1);
        for j in lo..=hi {
            let (a, b) = if i >= j { (i, j) } else { (j, i) };
            let k = self.idx(a, b);
            self.data[k] = if i == j { 1.0 } else { 0.0 };
        }
    }

    /// `A v`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        let mut out = vec![0.0; self.n];
        for i in 0..self.n {
            out[i] += self.data[self.idx(i, i)] * v[i];
            for j in i.saturating_sub(self.bw)..i {
                let a = self.data[self.idx(i, j)];
                out[i] += a * v[j];
                out[j] += a * v[i];
            }
        }
        out
    }

    /// In-place Cholesky factorization `A = L L^T`.
    pub fn cholesky(mut self) -> Result<BandCholesky, NotPositiveDefinite> {
        let bw = self.bw;
        for i in 0..self.n {
            let lo = i.saturating_sub(bw);
            for j in lo..=i {
                let mut sum = self.data[self.idx(i, j)];
                let klo = lo.max(j.saturating_sub(bw));
                for k in klo..j {
                    sum -= self.data[self.idx(i, k)] * self.data[self.idx(j, k)];
                }
                let at = self.idx(i, j);
                if i == j {
                    if !(sum > 0.0) || !sum.is_finite() {
                        return Err(NotPositiveDefinite { row: i });
                    }
                    self.data[at] = sum.sqrt();
                } else {
                    self.data[at] = sum / self.data[self.idx(j, j)];
                }
            }
        }
        Ok(BandCholesky { l: self })
    }
}

/// Lower-triangular banded Cholesky factor.
#[derive(Debug, Clone)]
pub struct BandCholesky {
    l: BandMatrix,
}

impl BandCholesky {
    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let l = &self.l;
        let (n, bw) = (l.n, l.bw);
        assert_eq!(b.len(), n);
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in i.saturating_sub(bw)..i {
                s -= l.data[l.idx(i, k)] * y[k];
            }
            y[i] = s / l.data[l.idx(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..(i + bw + 1).min(n) {
                s -= l.data[l.idx(k, i)] * y[k];
            }
            y[i] = s / l.data[l.idx(i, i)];
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_dense_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, bw) in [(1, 0), (5, 1), (40, 7), (64, 23)] {
            let mut a = BandMatrix::zeros(n, bw);
            let mut dense = DMatrix::<f64>::zeros(n, n);
            // sum of rank-one banded blocks plus a diagonal shift is SPD
            for _ in 0..3 * n {
                let start = rng.gen_range(0..n);
                let end = (start + bw + 1).min(n);
                let v: Vec<f64> = (start..end).map(|_| rng.gen_range(-1.0..1.0)).collect();
                for (p, i) in (start..end).enumerate() {
                    for (q, j) in (start..end).enumerate() {
                        if j <= i {
                            a.add(i, j, v[p] * v[q]);
                        }
                        dense[(i, j)] += v[p] * v[q];
                    }
                }
            }
            for i in 0..n {
                a.add(i, i, 0.1);
                dense[(i, i)] += 0.1;
            }
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x = a.clone().cholesky().unwrap().solve(&b);
            let ax = a.mul_vec(&x);
            for i in 0..n {
                assert!((ax[i] - b[i]).abs() < 1e-9);
            }
            let expected = dense.cholesky().unwrap().solve(&DVector::from_vec(b));
            for i in 0..n {
                assert!((x[i] - expected[i]).abs() < 1e-9, "n={n} bw={bw} i={i}");
            }
        }
    }

    #[test]
    fn pin_decouples_a_row() {
        let mut a = BandMatrix::zeros(3, 1);
        for i in 0..3 {
            a.add(i, i, 4.0);
        }
        a.add(1, 0, 1.0);
        a.add(2, 1, 1.0);
        a.pin(1);
        let x = a.cholesky().unwrap().solve(&[4.0, 0.0, 8.0]);
        assert_eq!(x, vec![1.0, 0.0, 2.0]);
    }

    #[test]
    fn indefinite_is_reported() {
        let mut a = BandMatrix::zeros(2, 1);
        a.add(0, 0, 1.0);
        a.add(1, 0, 2.0);
        a.add(1, 1, 1.0);
        assert_eq!(a.cholesky().unwrap_err(), NotPositiveDefinite { row: 1 });
    }
}
