//! Closed-form critical points on the three maximal isotropy branches.
//!
//! With `A = sqrt(-a/2c1)`, `B = sqrt(-d/2c5)` and `C = (3/5) sqrt(-15d/c4)`:
//! the icosahedral point is `A` on every face, the fivefold pair is
//! `(x, y) = (A + B, A - 5B)` and `(A - B, A + 5B)` on the pattern of
//! `Fix(D10)`, the threefold pair is `(A + C, A - C)` and `(A - C, A + C)` on
//! the pattern of `Fix(D6)`. Predicates are decided on exact rationals so that
//! boundary cases such as `a/c1 = 25 d/c5` are not lost to rounding.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{int, ratio, sqrt_exact, Q5Scalar, Rational};
use crate::energy::{expected_origin_spectrum, EnergyError, EnergyParams};
use crate::group::{SubgroupName, NFACES};

use super::fixed::fixed_subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BranchId {
    #[serde(rename = "origin")]
    Origin,
    #[serde(rename = "icosahedral")]
    Icosahedral,
    #[serde(rename = "D10_plus")]
    D10Plus,
    #[serde(rename = "D10_minus")]
    D10Minus,
    #[serde(rename = "D6_plus")]
    D6Plus,
    #[serde(rename = "D6_minus")]
    D6Minus,
}

impl BranchId {
    pub const ALL: [BranchId; 6] =
        [BranchId::Origin, BranchId::Icosahedral, BranchId::D10Plus, BranchId::D10Minus, BranchId::D6Plus, BranchId::D6Minus];

    pub fn name(self) -> &'static str {
        match self {
            BranchId::Origin => "origin",
            BranchId::Icosahedral => "icosahedral",
            BranchId::D10Plus => "D10_plus",
            BranchId::D10Minus => "D10_minus",
            BranchId::D6Plus => "D6_plus",
            BranchId::D6Minus => "D6_minus",
        }
    }

    /// Phase label: `closed`, `icosahedral`, `D10` or `D6`.
    pub fn family(self) -> &'static str {
        match self {
            BranchId::Origin => "closed",
            BranchId::Icosahedral => "icosahedral",
            BranchId::D10Plus | BranchId::D10Minus => "D10",
            BranchId::D6Plus | BranchId::D6Minus => "D6",
        }
    }

    /// Order of the stabilizer of a generic point on the branch.
    pub fn stabilizer_order(self) -> usize {
        match self {
            BranchId::Origin | BranchId::Icosahedral => 60,
            BranchId::D10Plus | BranchId::D10Minus => 10,
            BranchId::D6Plus | BranchId::D6Minus => 6,
        }
    }

    /// `60 / |H|`.
    pub fn orbit_size(self) -> usize {
        60 / self.stabilizer_order()
    }

    fn subspace(self) -> Option<SubgroupName> {
        match self {
            BranchId::Origin => None,
            BranchId::Icosahedral => Some(SubgroupName::T),
            BranchId::D10Plus | BranchId::D10Minus => Some(SubgroupName::D10),
            BranchId::D6Plus | BranchId::D6Minus => Some(SubgroupName::D6),
        }
    }
}

impl fmt::Display for BranchId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BranchId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BranchId::ALL.into_iter().find(|b| b.name() == s).ok_or_else(|| format!("unknown branch {s:?}"))
    }
}

/// One closed-form branch evaluated at a parameter vector.
///
/// `coords`, `amplitudes` and `energy` are present iff `exists`.
/// `stable` and `admissible` are only meaningful when it exists and are
/// reported `false` otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchReport {
    pub id: BranchId,
    pub exists: bool,
    pub admissible: bool,
    /// Admissible with equality in the defining inequality: a face sits at zero.
    pub boundary: bool,
    pub stable: bool,
    /// Values of the subspace variables `(x)` or `(x, y)`.
    pub amplitudes: Option<Vec<f64>>,
    pub coords: Option<[f64; NFACES]>,
    pub energy: Option<f64>,
    pub orbit_size: usize,
}

impl BranchReport {
    /// Stable and admissible: a physical minimum.
    pub fn is_minimum(&self) -> bool {
        self.exists && self.admissible && self.stable
    }
}

fn q(x: &Rational) -> f64 {
    Q5Scalar::from_rational(x.clone()).to_f64()
}

struct Exact<'a> {
    a: &'a Rational,
    b: &'a Rational,
    c: &'a Rational,
    d: &'a Rational,
    c1: &'a Rational,
    c4: &'a Rational,
    c5: &'a Rational,
}

impl<'a> Exact<'a> {
    fn new(p: &'a [Rational; 9]) -> Self {
        Exact { a: &p[0], b: &p[1], c: &p[2], d: &p[3], c1: &p[4], c4: &p[7], c5: &p[8] }
    }

    fn exists(&self, id: BranchId) -> bool {
        match id {
            BranchId::Origin => true,
            BranchId::Icosahedral => self.a.is_negative(),
            _ => self.a.is_negative() && self.d.is_negative(),
        }
    }

    /// `(lhs, rhs)` of the admissibility inequality `lhs <= rhs`, if any.
    fn admissibility(&self, id: BranchId) -> Option<(Rational, Rational)> {
        let lhs = self.a / self.c1;
        match id {
            BranchId::Origin | BranchId::Icosahedral => None,
            BranchId::D10Plus => Some((lhs, int(25) * self.d / self.c5)),
            BranchId::D10Minus => Some((lhs, self.d / self.c5)),
            BranchId::D6Plus | BranchId::D6Minus => Some((lhs, ratio(54, 5) * self.d / self.c4)),
        }
    }

    fn stable(&self, id: BranchId) -> bool {
        let bc = self.b.is_positive() && self.c.is_positive();
        match id {
            BranchId::Origin => bc && self.a.is_positive() && self.d.is_positive(),
            BranchId::Icosahedral => bc && self.d.is_positive(),
            BranchId::D10Plus | BranchId::D10Minus => bc && *self.c4 > ratio(54, 25) * self.c5,
            BranchId::D6Plus | BranchId::D6Minus => bc && *self.c5 > ratio(25, 54) * self.c4,
        }
    }

    /// `A^2`, `B^2`, `(C / (3/5))^2`.
    fn squares(&self) -> (Rational, Rational, Rational) {
        (-self.a / (int(2) * self.c1), -self.d / (int(2) * self.c5), int(-15) * self.d / self.c4)
    }
}

/// Subspace amplitudes from `A` and the branch's second amplitude.
fn combine<T>(id: BranchId, a: T, b: T, c: T, five: T) -> Vec<T>
where
    T: Clone + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + std::ops::Mul<Output = T>,
{
    let five = || five.clone();
    match id {
        BranchId::Origin => vec![],
        BranchId::Icosahedral => vec![a],
        BranchId::D10Plus => vec![a.clone() + b.clone(), a - five() * b],
        BranchId::D10Minus => vec![a.clone() - b.clone(), a + five() * b],
        BranchId::D6Plus => vec![a.clone() + c.clone(), a - c],
        BranchId::D6Minus => vec![a.clone() - c.clone(), a + c],
    }
}

fn embed(id: BranchId, t: &[f64]) -> [f64; NFACES] {
    match id.subspace() {
        None => [0.0; NFACES],
        Some(h) => fixed_subspace(h).embed(t),
    }
}

/// Closed-form energy of a branch; `None` for an absent branch.
pub fn closed_form_energy(id: BranchId, p: &EnergyParams) -> Option<f64> {
    let e = match id {
        BranchId::Origin => 0.0,
        BranchId::Icosahedral => -p.a * p.a / (4.0 * p.c1),
        BranchId::D10Plus | BranchId::D10Minus => -(p.c5 * p.a * p.a + p.c1 * p.d * p.d) / (4.0 * p.c1 * p.c5),
        BranchId::D6Plus | BranchId::D6Minus => {
            -(p.c4 * p.a * p.a + 54.0 / 25.0 * p.c1 * p.d * p.d) / (4.0 * p.c1 * p.c4)
        }
    };
    let exists = match id {
        BranchId::Origin => true,
        BranchId::Icosahedral => p.a < 0.0,
        _ => p.a < 0.0 && p.d < 0.0,
    };
    exists.then_some(e)
}

/// Hessian spectrum predicted at the branch point, with repeats.
pub fn predicted_spectrum(id: BranchId, p: &EnergyParams) -> Vec<f64> {
    let mut v = match id {
        BranchId::Origin => expected_origin_spectrum(p),
        BranchId::Icosahedral => {
            let mut v = expected_origin_spectrum(p);
            let i = v.iter().position(|&x| x == p.a / 6.0).expect("a/6 present");
            v[i] = -p.a / 3.0;
            v
        }
        BranchId::D10Plus | BranchId::D10Minus | BranchId::D6Plus | BranchId::D6Minus => {
            let four = if id.family() == "D10" {
                p.d / 1440.0 * (54.0 - 25.0 * p.c4 / p.c5)
            } else {
                p.d / 1200.0 * (25.0 - 54.0 * p.c5 / p.c4)
            };
            let mut v = vec![-p.d / 15.0, -p.a / 3.0];
            v.extend([p.c / 10.0; 3]);
            v.extend([p.b / 10.0; 3]);
            v.extend([four; 4]);
            v
        }
    };
    v.sort_by(f64::total_cmp);
    v
}

/// Reports for all six branches, in [`BranchId::ALL`] order.
pub fn branch_solutions(params: &EnergyParams) -> Result<Vec<BranchReport>, EnergyError> {
    params.validate()?;
    Ok(branch_solutions_exact(params, &params.to_exact()?))
}

/// As [`branch_solutions`], with predicates decided on `exact`, which must
/// be the rational reading of `params`.
pub fn branch_solutions_exact(params: &EnergyParams, exact: &[Rational; 9]) -> Vec<BranchReport> {
    let ex = Exact::new(exact);
    let (a2, b2, c2) = ex.squares();
    BranchId::ALL
        .into_iter()
        .map(|id| {
            let exists = ex.exists(id);
            let (admissible, boundary) = match ex.admissibility(id) {
                _ if !exists => (false, false),
                None => (true, false),
                Some((lhs, rhs)) => (lhs <= rhs, lhs == rhs),
            };
            let amplitudes = exists.then(|| {
                let root = |r: &Rational| q(r).max(0.0).sqrt();
                combine(id, root(&a2), root(&b2), 0.6 * root(&c2), 5.0)
            });
            BranchReport {
                id,
                exists,
                admissible,
                boundary,
                stable: exists && ex.stable(id),
                coords: amplitudes.as_ref().map(|t| embed(id, t)),
                amplitudes,
                energy: closed_form_energy(id, params),
                orbit_size: id.orbit_size(),
            }
        })
        .collect()
}

/// The branch point in exact arithmetic, when every square root involved is
/// rational. `None` also for an absent branch.
pub fn exact_branch_point(id: BranchId, exact: &[Rational; 9]) -> Option<Vec<Q5Scalar>> {
    let ex = Exact::new(exact);
    if !ex.exists(id) {
        return None;
    }
    if id == BranchId::Origin {
        return Some(vec![Q5Scalar::zero(); NFACES]);
    }
    let (a2, b2, c2) = ex.squares();
    let a = sqrt_exact(&a2)?;
    let (b, c) = match id.family() {
        "D10" => (sqrt_exact(&b2)?, Rational::zero()),
        "D6" => (Rational::zero(), ratio(3, 5) * sqrt_exact(&c2)?),
        _ => (Rational::zero(), Rational::zero()),
    };
    let t: Vec<Q5Scalar> = combine(id, a, b, c, int(5)).into_iter().map(Q5Scalar::from_rational).collect();
    let h = id.subspace().expect("non-origin branch");
    Some(fixed_subspace(h).embed_exact(&t))
}
