//! Small dense symmetric eigenproblems in `f64`.

use serde::{Deserialize, Serialize};

/// Off-diagonal Frobenius norm at which the sweep stops, relative to the
/// matrix norm (absolute when the matrix is below unit scale).
pub const JACOBI_TOL: f64 = 1e-12;
/// Relative gap below which neighbouring eigenvalues count as one.
pub const CLUSTER_REL: f64 = 1e-6;

const MAX_SWEEPS: usize = 100;

/// Row-major symmetric matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![0.0; n * n] }
    }

    /// Symmetrizes `rows` as `(A + A^T) / 2`.
    #[allow(clippy::needless_range_loop)]
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            assert_eq!(rows[i].len(), n, "matrix must be square");
            for j in 0..n {
                m.data[i * n + j] = 0.5 * (rows[i][j] + rows[j][i]);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    fn off_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self.data[i * self.n + j].powi(2);
                }
            }
        }
        s.sqrt()
    }

    fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Eigenvalues in ascending order and the matching unit eigenvectors
/// (`vectors[k]` belongs to `values[k]`).
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi rotations until the off-diagonal mass is negligible.
pub fn jacobi_eigen(m: &SymMatrix) -> EigenDecomposition {
    let n = m.n;
    let mut a = m.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let tol = JACOBI_TOL * a.norm().max(1.0);
    for _ in 0..MAX_SWEEPS {
        if a.off_norm() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.data[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a.data[p * n + p];
                let aqq = a.data[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.data[k * n + p];
                    let akq = a.data[k * n + q];
                    a.data[k * n + p] = c * akp - s * akq;
                    a.data[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a.data[p * n + k];
                    let aqk = a.data[q * n + k];
                    a.data[p * n + k] = c * apk - s * aqk;
                    a.data[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.data[i * n + i].total_cmp(&a.data[j * n + j]));
    EigenDecomposition {
        values: order.iter().map(|&i| a.data[i * n + i]).collect(),
        vectors: order.iter().map(|&j| (0..n).map(|k| v[k * n + j]).collect()).collect(),
    }
}

pub fn eigenvalues(m: &SymMatrix) -> Vec<f64> {
    jacobi_eigen(m).values
}

/// An eigenvalue cluster: representative value (cluster mean) and size.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub value: f64,
    pub multiplicity: usize,
}

/// Groups sorted eigenvalues whose neighbours differ by at most
/// `rel * max(|a|, |b|)`, with an absolute floor tied to the spectral scale.
pub fn cluster(values: &[f64], rel: f64) -> Vec<Eigenvalue> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let scale = sorted.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = JACOBI_TOL * scale.max(1.0) * 10.0;
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for v in sorted {
        match groups.last_mut() {
            Some(g) if (v - g[g.len() - 1]).abs() <= rel * v.abs().max(g[g.len() - 1].abs()) + floor => g.push(v),
            _ => groups.push(vec![v]),
        }
    }
    groups
        .into_iter()
        .map(|g| Eigenvalue { value: g.iter().sum::<f64>() / g.len() as f64, multiplicity: g.len() })
        .collect()
}

/// Eigenvalues with multiplicities, sorted ascending.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub clusters: Vec<Eigenvalue>,
}

impl Spectrum {
    pub fn of(m: &SymMatrix) -> Self {
        Self::from_values(eigenvalues(m))
    }

    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        let clusters = cluster(&values, CLUSTER_REL);
        Spectrum { eigenvalues: values, clusters }
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }

    /// True when `expected` (unordered, with repeats) matches this spectrum
    /// elementwise after sorting, within `rel` of the spectral scale.
    pub fn matches(&self, expected: &[f64], rel: f64) -> bool {
        if expected.len() != self.eigenvalues.len() {
            return false;
        }
        let mut e = expected.to_vec();
        e.sort_by(f64::total_cmp);
        let scale = e.iter().chain(&self.eigenvalues).fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        self.eigenvalues.iter().zip(&e).all(|(a, b)| (a - b).abs() <= rel * scale)
    }
}

/// Solves `m x = b` through the eigendecomposition, discarding directions
/// whose eigenvalue magnitude is below `cutoff`.
pub fn solve_symmetric(m: &SymMatrix, b: &[f64], cutoff: f64) -> Vec<f64> {
    let eig = jacobi_eigen(m);
    let n = m.dim();
    let mut x = vec![0.0; n];
    for (lambda, v) in eig.values.iter().zip(&eig.vectors) {
        if lambda.abs() <= cutoff {
            continue;
        }
        let coef = v.iter().zip(b).map(|(a, c)| a * c).sum::<f64>() / lambda;
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi += coef * vi;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, seed: u64) -> SymMatrix {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, next());
            }
        }
        m
    }

    #[test]
    fn diagonal_is_fixed_point() {
        let mut m = SymMatrix::zeros(3);
        m.set(0, 0, 3.0);
        m.set(1, 1, -1.0);
        m.set(2, 2, 2.0);
        assert_eq!(eigenvalues(&m), vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn agrees_with_nalgebra() {
        for seed in 0..10 {
            let m = sample(12, seed);
            let ours = eigenvalues(&m);
            let na = nalgebra::DMatrix::from_row_slice(12, 12, &m.data);
            let mut theirs: Vec<f64> = na.symmetric_eigenvalues().iter().copied().collect();
            theirs.sort_by(f64::total_cmp);
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a - b).abs() < 1e-10, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn eigenvectors_satisfy_definition() {
        let m = sample(8, 99);
        let eig = jacobi_eigen(&m);
        for (lambda, v) in eig.values.iter().zip(&eig.vectors) {
            for i in 0..8 {
                let mv: f64 = (0..8).map(|j| m.get(i, j) * v[j]).sum();
                assert!((mv - lambda * v[i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn clusters_multiplicities() {
        let s = Spectrum::from_values(vec![1.0, 0.1, 0.1 + 1e-9, 1.0, 1.0, -2.0]);
        let mults: Vec<usize> = s.clusters.iter().map(|c| c.multiplicity).collect();
        assert_eq!(mults, vec![1, 2, 3]);
        assert!(s.matches(&[-2.0, 1.0, 0.1, 1.0, 0.1, 1.0], 1e-8));
        assert!(!s.matches(&[-2.0, 1.0, 0.2, 1.0, 0.1, 1.0], 1e-8));
    }

    #[test]
    fn solves_indefinite_systems() {
        let m = sample(6, 3);
        let x0 = [1.0, -2.0, 0.5, 0.0, 3.0, -1.0];
        let b: Vec<f64> = (0..6).map(|i| (0..6).map(|j| m.get(i, j) * x0[j]).sum()).collect();
        let x = solve_symmetric(&m, &b, 1e-14);
        for (a, e) in x.iter().zip(&x0) {
            assert!((a - e).abs() < 1e-9);
        }
    }
}
