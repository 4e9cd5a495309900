//! The degree-four invariant energy in the twelve face displacements.
//!
//! `E = a q1 + b q2 + c q3 + d q5 + c1 q1^2 + c2 q2^2 + c3 q3^2 + c4 r41 + c5 r42`
//! where `q_i` is the quadratic invariant of block `i` and `r41`, `r42` are
//! the quartic invariants of the five-dimensional block, all evaluated at
//! `eta = P^{-1} x`. Numeric evaluation goes through the block coordinates;
//! the expanded 12-variable form is kept as an independent route.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{rational_from_f64, NumericPoly, Q5Scalar, Rational, SparsePoly};
use crate::group::{IcosahedralGroup, NFACES};
use crate::invariants::{lifted_reference, reference_polynomial};
use crate::irreps::{reference_basis_inverse, IrrepId};
use crate::linalg::{Spectrum, SymMatrix};
use crate::report::CheckResult;

pub const PARAM_NAMES: [&str; 9] = ["a", "b", "c", "d", "c1", "c2", "c3", "c4", "c5"];

/// `(block, degree, index)` of the invariant multiplying each parameter.
pub const ENERGY_TERMS: [(IrrepId, u32, u32); 9] = [
    (IrrepId::Rho1, 2, 1),
    (IrrepId::Rho2, 2, 1),
    (IrrepId::Rho3, 2, 1),
    (IrrepId::Rho5, 2, 1),
    (IrrepId::Rho1, 4, 1),
    (IrrepId::Rho2, 4, 1),
    (IrrepId::Rho3, 4, 1),
    (IrrepId::Rho5, 4, 1),
    (IrrepId::Rho5, 4, 2),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnergyError {
    #[error("parameter {name} is not finite")]
    NotFinite { name: &'static str },
    #[error("quartic coefficient {name} = {value} must be positive")]
    NonPositiveQuartic { name: &'static str, value: String },
}

/// The nine coefficients `(a, b, c, d, c1, ..., c5)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
}

impl EnergyParams {
    pub fn from_array(v: [f64; 9]) -> Self {
        let [a, b, c, d, c1, c2, c3, c4, c5] = v;
        EnergyParams { a, b, c, d, c1, c2, c3, c4, c5 }
    }

    pub fn to_array(&self) -> [f64; 9] {
        [self.a, self.b, self.c, self.d, self.c1, self.c2, self.c3, self.c4, self.c5]
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        PARAM_NAMES.iter().position(|n| *n == name).map(|i| self.to_array()[i])
    }

    pub fn with(&self, name: &str, value: f64) -> Option<Self> {
        let i = PARAM_NAMES.iter().position(|n| *n == name)?;
        let mut v = self.to_array();
        v[i] = value;
        Some(Self::from_array(v))
    }

    /// Finite values and positive quartic coefficients.
    pub fn validate(&self) -> Result<(), EnergyError> {
        for (name, v) in PARAM_NAMES.iter().zip(self.to_array()) {
            if !v.is_finite() {
                return Err(EnergyError::NotFinite { name });
            }
        }
        for (name, v) in PARAM_NAMES.iter().zip(self.to_array()).skip(4) {
            if v <= 0.0 {
                return Err(EnergyError::NonPositiveQuartic { name, value: v.to_string() });
            }
        }
        Ok(())
    }

    /// Each value as the rational of its shortest decimal form.
    pub fn to_exact(&self) -> Result<[Rational; 9], EnergyError> {
        let mut out: [Rational; 9] = Default::default();
        for (i, v) in self.to_array().into_iter().enumerate() {
            out[i] = rational_from_f64(v).ok_or(EnergyError::NotFinite { name: PARAM_NAMES[i] })?;
        }
        Ok(out)
    }
}

impl fmt::Display for EnergyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = PARAM_NAMES.iter().zip(self.to_array()).map(|(n, v)| format!("{n}={v}")).collect();
        f.write_str(&parts.join(", "))
    }
}

fn validate_exact(exact: &[Rational; 9]) -> Result<(), EnergyError> {
    for (name, v) in PARAM_NAMES.iter().zip(exact).skip(4) {
        if !v.is_positive() {
            return Err(EnergyError::NonPositiveQuartic { name, value: v.to_string() });
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
struct Block {
    offset: usize,
    dim: usize,
    exact: SparsePoly,
    exact_gradient: Vec<SparsePoly>,
    value: NumericPoly,
    gradient: Vec<NumericPoly>,
    // Row-major dim x dim.
    hessian: Vec<NumericPoly>,
}

impl Block {
    fn new(irrep: IrrepId, poly: SparsePoly) -> Self {
        let (offset, dim) = irrep.block().expect("block occurs in faces");
        let exact_gradient = poly.gradient();
        let gradient = exact_gradient.iter().map(NumericPoly::from_poly).collect();
        let hessian = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| NumericPoly::from_poly(&exact_gradient[i].derivative(j)))
            .collect();
        Block { offset, dim, value: NumericPoly::from_poly(&poly), exact: poly, exact_gradient, gradient, hessian }
    }
}

/// Expanded 12-variable numeric form: value, gradient and upper Hessian.
#[derive(Clone, Debug)]
pub struct ExpandedEnergy {
    pub value: NumericPoly,
    pub gradient: Vec<NumericPoly>,
    /// `hessian[i][j - i]` for `j >= i`.
    pub hessian: Vec<Vec<NumericPoly>>,
}

/// The energy for one parameter vector, ready for evaluation.
#[derive(Debug)]
pub struct CompiledEnergy {
    params: EnergyParams,
    exact_params: [Rational; 9],
    pinv: [[f64; NFACES]; NFACES],
    blocks: Vec<Block>,
    symbolic: OnceLock<SparsePoly>,
    expanded: OnceLock<ExpandedEnergy>,
}

impl CompiledEnergy {
    /// Builds from float parameters, read as their shortest decimals.
    pub fn build(params: &EnergyParams) -> Result<Self, EnergyError> {
        params.validate()?;
        Self::build_exact(params.to_exact()?)
    }

    /// Builds from exact rational parameters.
    pub fn build_exact(exact: [Rational; 9]) -> Result<Self, EnergyError> {
        validate_exact(&exact)?;
        let params = EnergyParams::from_array(exact.clone().map(|q| Q5Scalar::from_rational(q).to_f64()));
        let mut per_block: Vec<(IrrepId, SparsePoly)> =
            IrrepId::IN_FACES.iter().map(|&i| (i, SparsePoly::zero(i.dim()))).collect();
        for (k, &(irrep, degree, index)) in ENERGY_TERMS.iter().enumerate() {
            let p = &reference_polynomial(irrep, degree, index).expect("energy term exists").poly;
            let slot = per_block.iter_mut().find(|(i, _)| *i == irrep).expect("block listed");
            slot.1 += &p.scale(&Q5Scalar::from_rational(exact[k].clone()));
        }
        let blocks = per_block.into_iter().map(|(i, p)| Block::new(i, p)).collect();
        let mut pinv = [[0.0; NFACES]; NFACES];
        let exact_pinv = reference_basis_inverse();
        for (r, row) in pinv.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = exact_pinv[(r, c)].to_f64();
            }
        }
        Ok(CompiledEnergy {
            params,
            exact_params: exact,
            pinv,
            blocks,
            symbolic: OnceLock::new(),
            expanded: OnceLock::new(),
        })
    }

    pub fn params(&self) -> &EnergyParams {
        &self.params
    }

    pub fn exact_params(&self) -> &[Rational; 9] {
        &self.exact_params
    }

    /// `eta = P^{-1} x`.
    pub fn block_coordinates(&self, x: &[f64]) -> [f64; NFACES] {
        assert_eq!(x.len(), NFACES, "energy takes 12 coordinates");
        let mut eta = [0.0; NFACES];
        for (r, row) in self.pinv.iter().enumerate() {
            eta[r] = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
        eta
    }

    pub fn energy(&self, x: &[f64]) -> f64 {
        let eta = self.block_coordinates(x);
        self.blocks.iter().map(|b| b.value.eval(&eta[b.offset..b.offset + b.dim])).sum()
    }

    pub fn gradient(&self, x: &[f64]) -> [f64; NFACES] {
        self.energy_and_gradient(x).1
    }

    pub fn energy_and_gradient(&self, x: &[f64]) -> (f64, [f64; NFACES]) {
        let eta = self.block_coordinates(x);
        let mut e = 0.0;
        let mut geta = [0.0; NFACES];
        for b in &self.blocks {
            let local = &eta[b.offset..b.offset + b.dim];
            let table = NumericPoly::power_table(local, 4);
            e += b.value.eval_with(&table, 4);
            for (j, g) in b.gradient.iter().enumerate() {
                geta[b.offset + j] = g.eval_with(&table, 4);
            }
        }
        let mut gx = [0.0; NFACES];
        for (r, row) in self.pinv.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                gx[c] += v * geta[r];
            }
        }
        (e, gx)
    }

    #[allow(clippy::needless_range_loop)]
    pub fn hessian(&self, x: &[f64]) -> SymMatrix {
        let eta = self.block_coordinates(x);
        let mut heta = [[0.0; NFACES]; NFACES];
        for b in &self.blocks {
            let local = &eta[b.offset..b.offset + b.dim];
            let table = NumericPoly::power_table(local, 4);
            for i in 0..b.dim {
                for j in 0..b.dim {
                    heta[b.offset + i][b.offset + j] = b.hessian[i * b.dim + j].eval_with(&table, 4);
                }
            }
        }
        // P^{-T} H_eta P^{-1}
        let mut tmp = [[0.0; NFACES]; NFACES];
        for r in 0..NFACES {
            for k in 0..NFACES {
                tmp[r][k] = (0..NFACES).map(|s| heta[r][s] * self.pinv[s][k]).sum();
            }
        }
        let mut h = SymMatrix::zeros(NFACES);
        for j in 0..NFACES {
            for k in j..NFACES {
                let v: f64 = (0..NFACES).map(|r| self.pinv[r][j] * tmp[r][k]).sum();
                h.set(j, k, v);
            }
        }
        h
    }

    /// Exact gradient at an exact point.
    pub fn gradient_exact(&self, x: &[Q5Scalar]) -> Vec<Q5Scalar> {
        assert_eq!(x.len(), NFACES, "energy takes 12 coordinates");
        let pinv = reference_basis_inverse();
        let eta = pinv.mul_vec(x).expect("12 coordinates");
        let mut geta = vec![Q5Scalar::zero(); NFACES];
        for b in &self.blocks {
            let local = &eta[b.offset..b.offset + b.dim];
            for (j, g) in b.exact_gradient.iter().enumerate() {
                geta[b.offset + j] = g.eval(local);
            }
        }
        pinv.transpose().mul_vec(&geta).expect("12 coordinates")
    }

    pub fn energy_exact(&self, x: &[Q5Scalar]) -> Q5Scalar {
        let eta = reference_basis_inverse().mul_vec(x).expect("12 coordinates");
        self.blocks.iter().map(|b| b.exact.eval(&eta[b.offset..b.offset + b.dim])).sum()
    }

    /// The expanded polynomial in `x1..x12`, exact.
    pub fn symbolic(&self) -> &SparsePoly {
        self.symbolic.get_or_init(|| {
            let mut e = SparsePoly::zero(NFACES);
            for (k, &(irrep, degree, index)) in ENERGY_TERMS.iter().enumerate() {
                if self.exact_params[k].is_zero() {
                    continue;
                }
                let lifted = lifted_reference(irrep, degree, index).expect("energy term exists");
                e += &lifted.scale(&Q5Scalar::from_rational(self.exact_params[k].clone()));
            }
            e
        })
    }

    pub fn expanded(&self) -> &ExpandedEnergy {
        self.expanded.get_or_init(|| {
            let e = self.symbolic();
            let grad = e.gradient();
            let hessian = (0..NFACES)
                .map(|i| (i..NFACES).map(|j| NumericPoly::from_poly(&grad[i].derivative(j))).collect())
                .collect();
            ExpandedEnergy {
                value: NumericPoly::from_poly(e),
                gradient: grad.iter().map(NumericPoly::from_poly).collect(),
                hessian,
            }
        })
    }

    pub fn expanded_energy(&self, x: &[f64]) -> f64 {
        self.expanded().value.eval(x)
    }

    pub fn expanded_gradient(&self, x: &[f64]) -> [f64; NFACES] {
        let ex = self.expanded();
        let table = NumericPoly::power_table(x, 4);
        let mut g = [0.0; NFACES];
        for (gi, p) in g.iter_mut().zip(&ex.gradient) {
            *gi = p.eval_with(&table, 4);
        }
        g
    }

    pub fn expanded_hessian(&self, x: &[f64]) -> SymMatrix {
        let ex = self.expanded();
        let table = NumericPoly::power_table(x, 4);
        let mut h = SymMatrix::zeros(NFACES);
        for i in 0..NFACES {
            for j in i..NFACES {
                h.set(i, j, ex.hessian[i][j - i].eval_with(&table, 4));
            }
        }
        h
    }
}

/// `{a/6, b/10 x3, c/10 x3, d/30 x5}`.
pub fn expected_origin_spectrum(p: &EnergyParams) -> Vec<f64> {
    let mut v = vec![p.a / 6.0];
    v.extend([p.b / 10.0; 3]);
    v.extend([p.c / 10.0; 3]);
    v.extend([p.d / 30.0; 5]);
    v.sort_by(f64::total_cmp);
    v
}

/// Numeric spectrum of the Hessian at the origin.
pub fn hessian_spectrum_origin(ce: &CompiledEnergy) -> Spectrum {
    Spectrum::of(&ce.hessian(&[0.0; NFACES]))
}

/// Checks the origin spectrum against the block quadratic coefficients.
pub fn check_origin_spectrum(ce: &CompiledEnergy, rel: f64) -> CheckResult {
    let s = hessian_spectrum_origin(ce);
    let expected = expected_origin_spectrum(ce.params());
    let ok = s.matches(&expected, rel);
    CheckResult::new(
        "origin Hessian spectrum",
        ok,
        if ok { format!("{} eigenvalue clusters", s.clusters.len()) } else { format!("{:?} vs {expected:?}", s.eigenvalues) },
    )
}

/// Largest `|grad E(g x) - g grad E(x)|` over the samples and all 60 elements.
pub fn equivariance_defect(ce: &CompiledEnergy, samples: &[[f64; NFACES]]) -> (f64, Option<String>) {
    let group = IcosahedralGroup::get();
    let mut worst = 0.0;
    let mut witness = None;
    for x in samples {
        let gx = ce.gradient(x);
        for g in group.elements() {
            let lhs = ce.gradient(&g.act(x));
            let rhs = g.act(&gx);
            let d = lhs.iter().zip(&rhs).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            if d > worst {
                worst = d;
                witness = Some(format!("g = {g}"));
            }
        }
    }
    (worst, witness)
}

pub fn check_equivariance(ce: &CompiledEnergy, samples: &[[f64; NFACES]], tol: f64) -> CheckResult {
    let (worst, witness) = equivariance_defect(ce, samples);
    CheckResult::new(
        "gradient equivariance",
        worst <= tol,
        format!("max defect {worst:.3e}{}", witness.map(|w| format!(" at {w}")).unwrap_or_default()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;

    fn ones() -> EnergyParams {
        EnergyParams::from_array([1.0; 9])
    }

    fn point(seed: u64) -> [f64; NFACES] {
        let mut s = seed.wrapping_add(0x9e3779b97f4a7c15);
        let mut x = [0.0; NFACES];
        for v in &mut x {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            *v = (s >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0;
        }
        x
    }

    #[test]
    fn rejects_non_positive_quartics() {
        let p = ones().with("c4", 0.0).unwrap();
        assert!(matches!(CompiledEnergy::build(&p), Err(EnergyError::NonPositiveQuartic { name: "c4", .. })));
        let p = ones().with("a", f64::NAN).unwrap();
        assert!(matches!(CompiledEnergy::build(&p), Err(EnergyError::NotFinite { name: "a" })));
    }

    #[test]
    fn vanishes_to_first_order_at_origin() {
        let ce = CompiledEnergy::build(&ones()).unwrap();
        assert_eq!(ce.energy(&[0.0; 12]), 0.0);
        assert!(ce.gradient(&[0.0; 12]).iter().all(|g| *g == 0.0));
    }

    #[test]
    fn routes_agree() {
        let p = EnergyParams::from_array([-1.3, 0.7, 2.0, -0.4, 1.1, 0.9, 1.7, 3.0, 0.6]);
        let ce = CompiledEnergy::build(&p).unwrap();
        for seed in 0..5 {
            let x = point(seed);
            assert!((ce.energy(&x) - ce.expanded_energy(&x)).abs() < 1e-10);
            let (g1, g2) = (ce.gradient(&x), ce.expanded_gradient(&x));
            assert!(g1.iter().zip(&g2).all(|(a, b)| (a - b).abs() < 1e-10));
            let (h1, h2) = (ce.hessian(&x), ce.expanded_hessian(&x));
            for i in 0..12 {
                for j in 0..12 {
                    assert!((h1.get(i, j) - h2.get(i, j)).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn symbolic_energy_is_quartic_and_even() {
        let ce = CompiledEnergy::build(&ones()).unwrap();
        let e = ce.symbolic();
        assert_eq!(e.degree(), 4);
        assert!(e.terms().all(|(m, _)| m.degree() == 2 || m.degree() == 4));
    }

    #[test]
    fn origin_spectrum() {
        let ce = CompiledEnergy::build(&EnergyParams::from_array([6.0, 10.0, 10.0, 30.0, 1.0, 1.0, 1.0, 1.0, 1.0])).unwrap();
        let s = hessian_spectrum_origin(&ce);
        assert_eq!(s.clusters.len(), 1);
        assert!((s.clusters[0].value - 1.0).abs() < 1e-12);
        assert_eq!(s.clusters[0].multiplicity, 12);
        let ce = CompiledEnergy::build(&ones().with("a", -1.0).unwrap()).unwrap();
        assert_eq!(hessian_spectrum_origin(&ce).eigenvalues.iter().filter(|v| **v < 0.0).count(), 1);
        assert!(check_origin_spectrum(&ce, 1e-9).passed);
    }

    #[test]
    fn icosahedral_point_is_critical() {
        // a = -2, c1 = 1: x = 1 everywhere, E = -1
        let ce = CompiledEnergy::build(&ones().with("a", -2.0).unwrap()).unwrap();
        let x = [1.0; 12];
        assert!(ce.gradient(&x).iter().all(|g| g.abs() < 1e-12));
        assert!((ce.energy(&x) + 1.0).abs() < 1e-12);
        let exact: Vec<Q5Scalar> = vec![Q5Scalar::from_int(1); 12];
        assert!(ce.gradient_exact(&exact).iter().all(Zero::is_zero));
        assert_eq!(ce.energy_exact(&exact), Q5Scalar::from_int(-1));
    }

    #[test]
    fn exact_parameters() {
        let mut exact: [Rational; 9] = Default::default();
        for (i, v) in exact.iter_mut().enumerate() {
            *v = ratio(1, 1 + i as i64 % 3);
        }
        let ce = CompiledEnergy::build_exact(exact).unwrap();
        assert!((ce.params().b - 0.5).abs() < 1e-16);
        let p = EnergyParams::from_array([-0.1; 9]);
        assert!(CompiledEnergy::build(&p).is_err());
    }

    #[test]
    fn equivariant_gradient() {
        let ce = CompiledEnergy::build(&EnergyParams::from_array([0.3, -1.0, 2.0, -0.5, 1.0, 2.0, 0.5, 3.0, 1.5])).unwrap();
        let samples: Vec<[f64; 12]> = (0..3).map(point).collect();
        assert!(check_equivariance(&ce, &samples, 1e-9).passed);
    }

    #[test]
    fn coercive_along_rays() {
        let ce = CompiledEnergy::build(&EnergyParams::from_array([-5.0, -5.0, -5.0, -5.0, 0.1, 0.1, 0.1, 0.1, 0.1])).unwrap();
        for seed in 0..20 {
            let u = point(seed);
            let far: Vec<f64> = u.iter().map(|v| v * 1e3).collect();
            assert!(ce.energy(&far) > 0.0);
        }
    }
}
