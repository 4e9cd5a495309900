//! Multistart descent: a numeric oracle for the set of minima.
//!
//! Each start runs gradient descent with Barzilai-Borwein step lengths and
//! Armijo backtracking. Once the gradient is small and the Hessian positive
//! definite, Newton steps finish the job; near the stability boundaries the
//! smallest Hessian eigenvalue can be tiny and plain descent would stall.
//! Start `i` draws from ChaCha8 stream `i` of the seed, and results are
//! reduced in start order, so output does not depend on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::energy::CompiledEnergy;
use crate::group::NFACES;
use crate::linalg::{jacobi_eigen, solve_symmetric};

use super::branches::{branch_solutions_exact, BranchReport};
use super::classify::{classify_point, inf_norm, orbit, sup_distance, CriticalPoint};
use super::BifurcationError;

/// Half-width of the sampling box when no non-trivial branch exists.
pub const DEFAULT_HALF_WIDTH: f64 = 5.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimizeOptions {
    pub n_starts: usize,
    pub seed: u64,
    /// Starts are uniform in `[-L, L]^12`; `None` picks `L` from the branches.
    pub half_width: Option<f64>,
    pub max_iter: usize,
    /// Convergence threshold on `|grad E|_inf`.
    pub grad_tol: f64,
    /// Sup-norm radius for merging converged points.
    pub dedup_tol: f64,
}

impl MinimizeOptions {
    pub fn new(n_starts: usize, seed: u64) -> Self {
        MinimizeOptions { n_starts, seed, half_width: None, max_iter: 20_000, grad_tol: 1e-8, dedup_tol: 1e-5 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinimizeResult {
    /// Distinct converged points, in order of first discovery.
    pub points: Vec<CriticalPoint>,
    pub half_width: f64,
    pub converged: usize,
    /// Starts that hit the iteration cap.
    pub dropped: usize,
}

impl MinimizeResult {
    pub fn minima(&self) -> impl Iterator<Item = &CriticalPoint> {
        self.points.iter().filter(|p| p.stable)
    }

    pub fn admissible_minima(&self) -> impl Iterator<Item = &CriticalPoint> {
        self.points.iter().filter(|p| p.stable && p.admissible)
    }
}

/// `3 * max |x_i|` over existing branch points, or [`DEFAULT_HALF_WIDTH`].
pub fn sampling_half_width(reports: &[BranchReport]) -> f64 {
    let amp = reports.iter().filter_map(|r| r.coords.as_ref()).map(|x| inf_norm(x)).fold(0.0f64, f64::max);
    if amp > 0.0 {
        3.0 * amp
    } else {
        DEFAULT_HALF_WIDTH
    }
}

const NEWTON_SWITCH: f64 = 1e-3;
const ARMIJO: f64 = 1e-4;

/// One descent run; `None` when the iteration cap is hit.
pub fn descend(ce: &CompiledEnergy, start: [f64; NFACES], max_iter: usize, grad_tol: f64) -> Option<[f64; NFACES]> {
    let mut x = start;
    let (mut e, mut g) = ce.energy_and_gradient(&x);
    let mut step = 1.0;
    for _ in 0..max_iter {
        let gn = inf_norm(&g);
        if gn <= grad_tol {
            return Some(polish(ce, x, g));
        }
        if gn <= NEWTON_SWITCH {
            if let Some((xn, en, gnew)) = newton_step(ce, &x, &g) {
                (x, e, g) = (xn, en, gnew);
                continue;
            }
        }
        let g2: f64 = g.iter().map(|v| v * v).sum();
        let mut t = step;
        let (xn, en, gnew) = loop {
            let xn: [f64; NFACES] = std::array::from_fn(|i| x[i] - t * g[i]);
            let (en, gnew) = ce.energy_and_gradient(&xn);
            if en <= e - ARMIJO * t * g2 {
                break (xn, en, gnew);
            }
            t *= 0.5;
            if t < 1e-20 {
                return None;
            }
        };
        let (mut ss, mut sy) = (0.0, 0.0);
        for i in 0..NFACES {
            let s = xn[i] - x[i];
            ss += s * s;
            sy += s * (gnew[i] - g[i]);
        }
        step = if sy > 0.0 { ss / sy } else { 2.0 * t };
        (x, e, g) = (xn, en, gnew);
    }
    None
}

/// A Newton step from `x`, taken only if the Hessian is positive definite
/// and the gradient shrinks.
fn newton_step(ce: &CompiledEnergy, x: &[f64; NFACES], g: &[f64; NFACES]) -> Option<([f64; NFACES], f64, [f64; NFACES])> {
    let h = ce.hessian(x);
    if jacobi_eigen(&h).values[0] <= 0.0 {
        return None;
    }
    let dx = solve_symmetric(&h, g, 0.0);
    let xn: [f64; NFACES] = std::array::from_fn(|i| x[i] - dx[i]);
    let (en, gn) = ce.energy_and_gradient(&xn);
    (inf_norm(&gn) < inf_norm(g)).then_some((xn, en, gn))
}

/// Converged descent can sit `|g| / lambda_min` away from the minimum, enough
/// to push a zero face slightly negative. A few Newton steps remove that.
fn polish(ce: &CompiledEnergy, mut x: [f64; NFACES], mut g: [f64; NFACES]) -> [f64; NFACES] {
    for _ in 0..4 {
        match newton_step(ce, &x, &g) {
            Some((xn, _, gn)) => (x, g) = (xn, gn),
            None => break,
        }
    }
    x
}

fn sample_start(seed: u64, index: usize, l: f64) -> [f64; NFACES] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    std::array::from_fn(|_| rng.random_range(-l..=l))
}

/// Runs `opts.n_starts` descents and classifies the distinct limits.
pub fn minimize_restarts(ce: &CompiledEnergy, opts: &MinimizeOptions) -> Result<MinimizeResult, BifurcationError> {
    if opts.n_starts == 0 {
        return Err(BifurcationError::NoStarts);
    }
    let l = match opts.half_width {
        Some(l) if l > 0.0 && l.is_finite() => l,
        Some(l) => return Err(BifurcationError::InvalidHalfWidth(l)),
        None => sampling_half_width(&branch_solutions_exact(ce.params(), ce.exact_params())),
    };
    let limits: Vec<Option<[f64; NFACES]>> = (0..opts.n_starts)
        .into_par_iter()
        .map(|i| descend(ce, sample_start(opts.seed, i, l), opts.max_iter, opts.grad_tol))
        .collect();
    let converged: Vec<[f64; NFACES]> = limits.iter().flatten().copied().collect();
    let mut distinct: Vec<[f64; NFACES]> = Vec::new();
    for x in &converged {
        if !distinct.iter().any(|y| sup_distance(x, y) <= opts.dedup_tol) {
            distinct.push(*x);
        }
    }
    let points = distinct.iter().map(|x| classify_point(ce, x)).collect::<Result<Vec<_>, _>>()?;
    Ok(MinimizeResult { points, half_width: l, converged: converged.len(), dropped: opts.n_starts - converged.len() })
}

/// Outcome of matching numeric admissible minima against the orbits of the
/// closed-form admissible minima.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleComparison {
    pub expected: usize,
    pub found: usize,
    /// Closed-form points with no numeric counterpart.
    pub missing: Vec<[f64; NFACES]>,
    /// Numeric admissible minima matching no closed-form point.
    pub unexpected: Vec<[f64; NFACES]>,
}

impl OracleComparison {
    pub fn agrees(&self) -> bool {
        self.missing.is_empty() && self.unexpected.is_empty()
    }
}

/// Every point of every orbit of a stable admissible branch.
pub fn expected_minima(reports: &[BranchReport]) -> Vec<[f64; NFACES]> {
    reports.iter().filter(|r| r.is_minimum()).filter_map(|r| r.coords).flat_map(|x| orbit(&x)).collect()
}

pub fn compare_with_branches(result: &MinimizeResult, reports: &[BranchReport], tol: f64) -> OracleComparison {
    let expected = expected_minima(reports);
    let found: Vec<[f64; NFACES]> = result.admissible_minima().map(|p| p.coords).collect();
    let near = |x: &[f64; NFACES], set: &[[f64; NFACES]]| set.iter().any(|y| sup_distance(x, y) <= tol);
    OracleComparison {
        expected: expected.len(),
        found: found.len(),
        missing: expected.iter().filter(|x| !near(x, &found)).copied().collect(),
        unexpected: found.iter().filter(|x| !near(x, &expected)).copied().collect(),
    }
}

/// Groups points into group orbits: indices of each class, in order of first
/// appearance. Sorted coordinate multisets screen candidates before the orbit
/// test.
pub fn orbit_classes(points: &[[f64; NFACES]], tol: f64) -> Vec<Vec<usize>> {
    let sorted = |x: &[f64; NFACES]| {
        let mut s = *x;
        s.sort_by(f64::total_cmp);
        s
    };
    // (orbit of the first member, its sorted coordinates, member indices)
    type Class = (Vec<[f64; NFACES]>, [f64; NFACES], Vec<usize>);
    let mut classes: Vec<Class> = Vec::new();
    for (i, x) in points.iter().enumerate() {
        let key = sorted(x);
        match classes.iter_mut().find(|(orb, k, _)| sup_distance(k, &key) <= tol && orb.iter().any(|y| sup_distance(x, y) <= tol)) {
            Some((_, _, members)) => members.push(i),
            None => classes.push((orbit(x), key, vec![i])),
        }
    }
    classes.into_iter().map(|(_, _, m)| m).collect()
}
