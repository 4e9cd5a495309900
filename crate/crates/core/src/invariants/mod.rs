//! Reynolds averaging, per-block invariant bases and lifting to face
//! coordinates.

mod reference;

use std::sync::OnceLock;

use num_traits::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{homogeneous_monomials, AlgebraError, LinearSpan, Q5Matrix, Q5Scalar, Rational, SparsePoly};
use crate::group::{Generator, NFACES};
use crate::irreps::{reference_basis_inverse, reference_generator_matrix, IrrepError, IrrepId, IrrepMatrices};
use crate::report::CheckResult;

pub use reference::{reference_polynomial, reference_polynomials, ReferencePolynomial, P42_RHO5_REPEATED_TERMS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("polynomial has {found} variables, block {irrep} has {expected}")]
    Arity { irrep: IrrepId, expected: usize, found: usize },
    #[error(transparent)]
    Irrep(#[from] IrrepError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Variable names of a block's coordinates.
pub fn variable_names(irrep: IrrepId) -> &'static [&'static str] {
    match irrep.dim() {
        1 => &["x"],
        3 => &["x", "y", "z"],
        4 => &["x", "y", "z", "t"],
        _ => &["x", "y", "z", "t", "u"],
    }
}

/// `R(f)(x) = (1/|G|) sum_g f(M_g x)`.
///
/// The action is `(g.f)(x) = f(M_g^{-1} x)`; summing over a group visits
/// every inverse exactly once, so `M_g` can be used directly.
pub fn reynolds(f: &SparsePoly, matrices: &[Q5Matrix]) -> SparsePoly {
    let n = f.nvars();
    let maxdeg = f.terms().map(|(m, _)| m.degree()).max().unwrap_or(0) as usize;
    let images: Vec<SparsePoly> = matrices
        .par_iter()
        .map(|m| {
            let powers: Vec<Vec<SparsePoly>> = (0..n)
                .map(|i| {
                    let form = SparsePoly::linear_form(m.row(i));
                    let mut pw = vec![SparsePoly::constant(n, Q5Scalar::one())];
                    for e in 0..maxdeg {
                        let next = &pw[e] * &form;
                        pw.push(next);
                    }
                    pw
                })
                .collect();
            let mut out = SparsePoly::zero(n);
            for (mono, c) in f.terms() {
                let mut acc = SparsePoly::constant(n, c.clone());
                for (i, &e) in mono.exponents().iter().enumerate() {
                    if e > 0 {
                        acc = &acc * &powers[i][e as usize];
                    }
                }
                out += &acc;
            }
            out
        })
        .collect();
    let mut sum = SparsePoly::zero(n);
    for p in &images {
        sum += p;
    }
    sum.scale(&Q5Scalar::from_rational(Rational::new(1.into(), (matrices.len() as i64).into())))
}

/// Reynolds operator of a tabulated block.
pub fn reynolds_irrep(f: &SparsePoly, irrep: IrrepId) -> Result<SparsePoly, InvariantError> {
    let reps = IrrepMatrices::get(irrep)?;
    if f.nvars() != reps.dim() {
        return Err(InvariantError::Arity { irrep, expected: reps.dim(), found: f.nvars() });
    }
    Ok(reynolds(f, &reps.matrices))
}

/// Index of the first matrix under which `p` changes, if any.
pub fn invariance_witness(p: &SparsePoly, matrices: &[Q5Matrix]) -> Option<usize> {
    matrices.iter().position(|m| p.compose_linear(m).map_or(true, |q| &q != p))
}

/// A basis of the degree-`k` invariants of one block.
#[derive(Clone, Debug)]
pub struct InvariantBasis {
    pub irrep: IrrepId,
    pub degree: u32,
    pub polynomials: Vec<SparsePoly>,
}

impl InvariantBasis {
    pub fn dim(&self) -> usize {
        self.polynomials.len()
    }

    pub fn contains(&self, p: &SparsePoly) -> bool {
        let monos = homogeneous_monomials(variable_names(self.irrep).len(), self.degree);
        if !p.is_homogeneous(self.degree) && !p.is_zero() {
            return false;
        }
        let mut span = LinearSpan::new(monos.len());
        for q in &self.polynomials {
            span.insert(&q.coefficient_vector(&monos));
        }
        span.contains(&p.coefficient_vector(&monos))
    }
}

/// Reynolds images of every degree-`k` monomial, largest first, keeping
/// those independent of the ones already kept. Members are scaled to a unit
/// leading coefficient.
pub fn invariant_basis(irrep: IrrepId, degree: u32) -> Result<InvariantBasis, InvariantError> {
    if degree == 0 {
        return Err(InvariantError::ZeroDegree);
    }
    let reps = IrrepMatrices::get(irrep)?;
    let n = reps.dim();
    let monos = homogeneous_monomials(n, degree);
    let images: Vec<SparsePoly> =
        monos.par_iter().map(|m| reynolds(&SparsePoly::term(m.clone(), Q5Scalar::one()), &reps.matrices)).collect();
    let mut span = LinearSpan::new(monos.len());
    let mut polynomials = Vec::new();
    for img in images {
        if img.is_zero() {
            continue;
        }
        if span.insert(&img.coefficient_vector(&monos)) {
            polynomials.push(img.monic());
        }
    }
    Ok(InvariantBasis { irrep, degree, polynomials })
}

/// Checks every reference invariant against the tabulated generators and
/// against the span of the computed basis of its degree.
pub fn match_reference_polynomials() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for rp in reference_polynomials() {
        let name = rp.name();
        let gens: Vec<(Generator, Q5Matrix)> = [Generator::G2, Generator::G5]
            .into_iter()
            .filter_map(|g| reference_generator_matrix(rp.irrep, g).map(|m| (g, m)))
            .collect();
        let mats: Vec<Q5Matrix> = gens.iter().map(|(_, m)| m.clone()).collect();
        match invariance_witness(&rp.poly, &mats) {
            None => out.push(CheckResult::pass(format!("{name} invariant"), "fixed by g2 and g5")),
            Some(w) => out.push(CheckResult::fail(format!("{name} invariant"), format!("changed by {}", gens[w].0.name()))),
        }
        match invariant_basis(rp.irrep, rp.degree) {
            Ok(b) if b.contains(&rp.poly) => {
                out.push(CheckResult::pass(format!("{name} in span"), format!("basis dimension {}", b.dim())))
            }
            Ok(b) => out.push(CheckResult::fail(format!("{name} in span"), format!("outside span of {} computed", b.dim()))),
            Err(e) => out.push(CheckResult::fail(format!("{name} in span"), e.to_string())),
        }
    }
    for irrep in [IrrepId::Rho2, IrrepId::Rho3] {
        let q = reference_polynomial(irrep, 2, 1).expect("quadratic present");
        let f = reference_polynomial(irrep, 4, 1).expect("quartic present");
        out.push(CheckResult::new(
            format!("p41_{irrep} is the square of p21_{irrep}"),
            f.poly == q.poly.pow(2),
            "",
        ));
    }
    out
}

/// Linear forms `eta_j(x)` of one block, as polynomials in the 12 faces.
pub fn block_coordinates(irrep: IrrepId) -> Vec<SparsePoly> {
    let Some((offset, dim)) = irrep.block() else {
        return Vec::new();
    };
    let pinv = reference_basis_inverse();
    (offset..offset + dim).map(|r| SparsePoly::linear_form(pinv.row(r))).collect()
}

/// `p(eta^{(i)}(x))`: a block polynomial rewritten in face coordinates.
pub fn lift_to_faces(p: &SparsePoly, irrep: IrrepId) -> Result<SparsePoly, InvariantError> {
    let coords = block_coordinates(irrep);
    if coords.len() != p.nvars() || coords.is_empty() {
        return Err(InvariantError::Arity { irrep, expected: coords.len(), found: p.nvars() });
    }
    if p.is_zero() {
        return Ok(SparsePoly::zero(NFACES));
    }
    Ok(p.substitute(&coords)?)
}

/// Lifted reference invariant, computed once.
pub fn lifted_reference(irrep: IrrepId, degree: u32, index: u32) -> Option<&'static SparsePoly> {
    static CACHE: [OnceLock<SparsePoly>; 13] = [const { OnceLock::new() }; 13];
    let list = reference_polynomials();
    let pos = list.iter().position(|p| p.irrep == irrep && p.degree == degree && p.index == index)?;
    Some(CACHE[pos].get_or_init(|| lift_to_faces(&list[pos].poly, irrep).expect("reference blocks lift")))
}

/// Parses block-coordinate text, e.g. `"x^2 + y*z"` for a three-dimensional block.
pub fn parse_block_polynomial(irrep: IrrepId, src: &str) -> Result<SparsePoly, InvariantError> {
    Ok(crate::algebra::parse_poly(src, variable_names(irrep))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::IcosahedralGroup;

    #[test]
    fn reynolds_fixes_invariants_and_kills_linear_forms() {
        let p = &reference_polynomial(IrrepId::Rho2, 2, 1).unwrap().poly;
        assert_eq!(&reynolds_irrep(p, IrrepId::Rho2).unwrap(), p);
        assert!(reynolds_irrep(&SparsePoly::var(3, 0), IrrepId::Rho2).unwrap().is_zero());
        let x3 = SparsePoly::var(1, 0).pow(3);
        assert_eq!(reynolds_irrep(&x3, IrrepId::Rho1).unwrap(), x3);
    }

    #[test]
    fn basis_dimensions_low_degree() {
        let dims = |i, k| invariant_basis(i, k).unwrap().dim();
        assert_eq!(dims(IrrepId::Rho1, 3), 1);
        assert_eq!(dims(IrrepId::Rho2, 1), 0);
        assert_eq!(dims(IrrepId::Rho2, 2), 1);
        assert_eq!(dims(IrrepId::Rho3, 3), 0);
        assert_eq!(dims(IrrepId::Rho5, 2), 1);
        assert_eq!(dims(IrrepId::Rho5, 3), 2);
        assert!(invariant_basis(IrrepId::Rho4, 2).is_err());
        assert_eq!(invariant_basis(IrrepId::Rho2, 0).unwrap_err(), InvariantError::ZeroDegree);
    }

    #[test]
    fn quadratic_basis_is_the_reference() {
        let b = invariant_basis(IrrepId::Rho2, 2).unwrap();
        let p = &reference_polynomial(IrrepId::Rho2, 2, 1).unwrap().poly;
        assert_eq!(&b.polynomials[0], p);
    }

    #[test]
    fn repeated_terms_variant_is_not_invariant() {
        let bad = reference::parse_block(IrrepId::Rho5, P42_RHO5_REPEATED_TERMS);
        let reps = IrrepMatrices::get(IrrepId::Rho5).unwrap();
        assert!(invariance_witness(&bad, &reps.matrices).is_some());
        let good = &reference_polynomial(IrrepId::Rho5, 4, 2).unwrap().poly;
        assert!(invariance_witness(good, &reps.matrices).is_none());
    }

    #[test]
    fn lifted_quadratic_of_trivial_block() {
        let lifted = lifted_reference(IrrepId::Rho1, 2, 1).unwrap();
        let sum = SparsePoly::linear_form(&vec![Q5Scalar::one(); 12]);
        let expected = sum.pow(2).scale(&Q5Scalar::from_rational(Rational::new(1.into(), 144.into())));
        assert_eq!(lifted, &expected);
        assert!(lift_to_faces(&SparsePoly::zero(1), IrrepId::Rho1).unwrap().is_zero());
    }

    #[test]
    fn lifted_quadratics_are_face_invariant() {
        let group = IcosahedralGroup::get();
        for irrep in IrrepId::IN_FACES {
            let p = lifted_reference(irrep, 2, 1).unwrap();
            for g in group.elements() {
                assert_eq!(&p.compose_linear(&g.to_matrix()).unwrap(), p, "{irrep} {g}");
            }
        }
    }
}
