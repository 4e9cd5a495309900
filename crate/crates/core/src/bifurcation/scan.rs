//! `(a, d)` phase diagram from the branch predicates, optionally checked
//! cell by cell against the multistart oracle.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{parse_rational, rational_from_f64, Q5Scalar, Rational};
use crate::energy::{CompiledEnergy, EnergyParams, PARAM_NAMES};

use super::branches::{branch_solutions_exact, BranchId, BranchReport};
use super::minimize::{compare_with_branches, minimize_restarts, MinimizeOptions};
use super::BifurcationError;

/// Inclusive grid `start, start + step, ..., <= stop`, stepped in exact
/// rationals so that `-5:5:0.1` lands on `0.3` rather than `0.30000000000000004`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridRange {
    pub start: Rational,
    pub stop: Rational,
    pub step: Rational,
}

impl GridRange {
    pub fn new(start: Rational, stop: Rational, step: Rational) -> Result<Self, BifurcationError> {
        if !step.is_positive() || stop < start {
            return Err(BifurcationError::InvalidRange(format!("{start}:{stop}:{step}")));
        }
        Ok(GridRange { start, stop, step })
    }

    pub fn len(&self) -> usize {
        ((&self.stop - &self.start) / &self.step).floor().to_integer().to_usize().expect("grid fits in memory") + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> Vec<Rational> {
        (0..self.len()).map(|i| &self.start + &self.step * Rational::from_integer(i.into())).collect()
    }
}

impl FromStr for GridRange {
    type Err = BifurcationError;
    /// `start:stop:step`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BifurcationError::InvalidRange(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(bad());
        };
        let p = |t: &str| parse_rational(t.trim()).ok_or_else(bad);
        GridRange::new(p(start)?, p(stop)?, p(step)?)
    }
}

impl fmt::Display for GridRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    /// Supplies every parameter except `a` and `d`, whose slots are ignored.
    pub base: [Rational; 9],
    pub a: GridRange,
    pub d: GridRange,
    /// Starts per cell for the numeric cross-check; `None` skips it.
    pub verify_restarts: Option<usize>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseCell {
    pub a: f64,
    pub d: f64,
    /// Families of the stable admissible branches joined by `+`, or `none`.
    pub label: String,
    pub branches: Vec<BranchId>,
    /// Sum of orbit sizes over `branches`.
    pub n_minima_closed_form: usize,
    /// Distinct admissible minima found numerically.
    pub n_minima_numeric: Option<usize>,
    /// Numeric minima coincide with the closed-form orbits.
    pub oracle_agrees: Option<bool>,
}

/// E.g. `icosahedral`, `D10`, `closed`; `none` when nothing qualifies.
pub fn region_label(reports: &[BranchReport]) -> String {
    let mut families: Vec<&str> = Vec::new();
    for r in reports.iter().filter(|r| r.is_minimum()) {
        if !families.contains(&r.id.family()) {
            families.push(r.id.family());
        }
    }
    if families.is_empty() {
        "none".to_string()
    } else {
        families.join("+")
    }
}

fn q(x: &Rational) -> f64 {
    Q5Scalar::from_rational(x.clone()).to_f64()
}

/// One cell per grid point, `a` varying slowest.
pub fn scan_phase_diagram(config: &ScanConfig) -> Result<Vec<PhaseCell>, BifurcationError> {
    // b and c fix the sign of the origin's other blocks; quartics keep E bounded below
    for i in [1, 2, 4, 5, 6, 7, 8] {
        if !config.base[i].is_positive() {
            return Err(BifurcationError::NonPositive { name: PARAM_NAMES[i] });
        }
    }
    let base = &config.base;
    let grid: Vec<(Rational, Rational)> = config
        .a
        .values()
        .into_iter()
        .flat_map(|a| config.d.values().into_iter().map(move |d| (a.clone(), d)))
        .collect();
    grid.par_iter().map(|(a, d)| scan_cell(config, base, a, d)).collect()
}

fn scan_cell(config: &ScanConfig, base: &[Rational; 9], a: &Rational, d: &Rational) -> Result<PhaseCell, BifurcationError> {
    let mut exact = base.clone();
    exact[0] = a.clone();
    exact[3] = d.clone();
    let params = EnergyParams::from_array(exact.clone().map(|v| q(&v)));
    let reports = branch_solutions_exact(&params, &exact);
    let branches: Vec<BranchId> = reports.iter().filter(|r| r.is_minimum()).map(|r| r.id).collect();
    let (n_minima_numeric, oracle_agrees) = match config.verify_restarts {
        None => (None, None),
        Some(n) => {
            let ce = CompiledEnergy::build_exact(exact)?;
            let result = minimize_restarts(&ce, &MinimizeOptions::new(n, config.seed))?;
            let cmp = compare_with_branches(&result, &reports, 1e-5);
            (Some(cmp.found), Some(cmp.agrees()))
        }
    };
    Ok(PhaseCell {
        a: params.a,
        d: params.d,
        label: region_label(&reports),
        n_minima_closed_form: branches.iter().map(|b| b.orbit_size()).sum(),
        branches,
        n_minima_numeric,
        oracle_agrees,
    })
}

/// A grid holding the single value `x`.
pub fn single_point(x: f64) -> Result<GridRange, BifurcationError> {
    let v = rational_from_f64(x).ok_or_else(|| BifurcationError::InvalidRange(x.to_string()))?;
    GridRange::new(v.clone(), v, Rational::from_integer(1.into()))
}

impl Default for GridRange {
    fn default() -> Self {
        GridRange { start: Rational::zero(), stop: Rational::zero(), step: Rational::from_integer(1.into()) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> [Rational; 9] {
        [1, 1, 1, 1, 1, 1, 1, 3, 1].map(|v| Rational::from_integer(v.into()))
    }

    #[test]
    fn range_parsing() {
        let r: GridRange = "-5:5:0.25".parse().unwrap();
        assert_eq!(r.len(), 41);
        let v = r.values();
        assert_eq!(q(&v[1]), -4.75);
        assert_eq!(q(&v[40]), 5.0);
        let r: GridRange = "-5:5:0.1".parse().unwrap();
        assert_eq!(r.len(), 101);
        assert_eq!(q(&r.values()[53]), 0.3);
        assert_eq!("0:1:0.3".parse::<GridRange>().unwrap().len(), 4);
        for bad in ["1:0:1", "0:1:0", "0:1", "a:b:c", "0:1:-1"] {
            assert!(bad.parse::<GridRange>().is_err(), "{bad}");
        }
    }

    #[test]
    fn quadrants() {
        let cfg = ScanConfig {
            base: base(),
            a: "-1:1:2".parse().unwrap(),
            d: "-1:1:2".parse().unwrap(),
            verify_restarts: None,
            seed: 0,
        };
        let cells = scan_phase_diagram(&cfg).unwrap();
        let labels: Vec<(f64, f64, &str)> = cells.iter().map(|c| (c.a, c.d, c.label.as_str())).collect();
        assert_eq!(labels, vec![(-1.0, -1.0, "D10"), (-1.0, 1.0, "icosahedral"), (1.0, -1.0, "none"), (1.0, 1.0, "closed")]);
        // a/c1 = d/c5: only the second fivefold point is admissible, on the boundary
        assert_eq!(cells[0].branches, vec![BranchId::D10Minus]);
        assert_eq!(cells[0].n_minima_closed_form, 6);
        assert_eq!(cells[1].n_minima_closed_form, 1);
    }

    #[test]
    fn threefold_region_label() {
        let mut b = base();
        b[7] = Rational::from_integer(1.into());
        let cfg = ScanConfig { base: b, a: single_point(-8.0).unwrap(), d: single_point(-0.1).unwrap(), verify_restarts: None, seed: 0 };
        let cells = scan_phase_diagram(&cfg).unwrap();
        assert_eq!(cells[0].label, "D6");
        assert_eq!(cells[0].n_minima_closed_form, 20);
    }

    #[test]
    fn verified_cell_agrees() {
        let cfg = ScanConfig {
            base: base(),
            a: single_point(-2.0).unwrap(),
            d: single_point(1.0).unwrap(),
            verify_restarts: Some(30),
            seed: 3,
        };
        let cell = &scan_phase_diagram(&cfg).unwrap()[0];
        assert_eq!(cell.n_minima_numeric, Some(1));
        assert_eq!(cell.oracle_agrees, Some(true));
    }

    #[test]
    fn rejects_non_positive_b() {
        let mut b = base();
        b[1] = Rational::from_integer((-1).into());
        let cfg = ScanConfig { base: b, a: GridRange::default(), d: GridRange::default(), verify_restarts: None, seed: 0 };
        assert!(matches!(scan_phase_diagram(&cfg), Err(BifurcationError::NonPositive { name: "b" })));
    }
}
