//! Canonical per-block invariants used by the energy.
//!
//! Variables are `x` for rho1, `x, y, z` for rho2 and rho3, and
//! `x, y, z, t, u` for rho5, ordered as the block coordinates of `eta`.

use std::sync::OnceLock;

use crate::algebra::{parse_poly, SparsePoly};
use crate::irreps::IrrepId;

use super::variable_names;

/// A named invariant `p{k}{j}` of block `irrep`.
#[derive(Clone, Debug)]
pub struct ReferencePolynomial {
    pub irrep: IrrepId,
    pub degree: u32,
    pub index: u32,
    pub poly: SparsePoly,
}

impl ReferencePolynomial {
    /// E.g. `p42_rho5`.
    pub fn name(&self) -> String {
        format!("p{}{}_{}", self.degree, self.index, self.irrep)
    }
}

const P21_RHO2: &str = "x^2 + y^2 + z^2 + 2*sqrt5/5*(x*z + y*z - x*y)";
const P21_RHO3: &str = "x^2 + y^2 + z^2 + 2*sqrt5/5*(x*z - y*z - x*y)";
const P21_RHO5: &str = "x^2 + y^2 + z^2 + t^2 + u^2 \
    - 2/5*(x*y + x*z + y*z + x*t + y*t + z*t + x*u + y*u + z*u + t*u)";
const P31_RHO5: &str = "x*y*z - x*y*t - x*z*t + y*z*t + x*y*u - x*z*u - y*z*u + x*t*u - y*t*u + z*t*u";
const P32_RHO5: &str = "x^3 + y^3 + z^3 + t^3 + u^3 + 6/5*(x*y*t + x*z*t + x*z*u + y*z*u + y*t*u) \
    - 3/5*(x^2*y + x*y^2 + x^2*z + y^2*z + x*z^2 + y*z^2 + x^2*t + y^2*t + z^2*t + x*t^2 + y*t^2 + z*t^2 \
    + x^2*u + y^2*u + z^2*u + t^2*u + x*u^2 + y*u^2 + z*u^2 + t*u^2)";
const P41_RHO5: &str = "x^2*y^2 + x^2*z^2 + y^2*z^2 + x^2*t^2 + z^2*t^2 + x^2*u^2 + t^2*u^2 + z^2*u^2 + y^2*u^2 + y^2*t^2 \
    + x*y*z*t + x*y*z*u + x*y*t*u + x*z*t*u + y*z*t*u \
    - 1/2*(x^2*y*z + x*y^2*z + x*y*z^2 + x^2*y*t + x*y^2*t + x^2*z*t + y^2*z*t + x*z^2*t + y*z^2*t + x*y*t^2 \
    + x*z*t^2 + y*z*t^2 + x^2*y*u + x*y^2*u + x^2*z*u + y^2*z*u + x*z^2*u + y*z^2*u + x^2*t*u + y^2*t*u \
    + z^2*t*u + x*t^2*u + y*t^2*u + z*t^2*u + x*y*u^2 + x*z*u^2 + y*z*u^2 + x*t*u^2 + y*t*u^2 + z*t*u^2)";
/// The middle group runs over all 30 monomials `a^2 b c` with distinct
/// `a, b, c`, each once.
const P42_RHO5: &str = "x^4 + y^4 + z^4 + t^4 + u^4 \
    - 4/5*(x^3*y + x*y^3 + x^3*z + y^3*z + x^3*t + x*z^3 + y*z^3 + y^3*t + z^3*t + x*t^3 + y*t^3 + z*t^3 \
    + x^3*u + y^3*u + z^3*u + t^3*u + x*u^3 + y*u^3 + z*u^3 + t*u^3) \
    + 3/5*(x^2*y*z + x*y^2*z + x*y*z^2 + x^2*y*t + x*y^2*t + x^2*z*t + y^2*z*t + x*z^2*t + y*z^2*t + x*y*t^2 \
    + x*z*t^2 + y*z*t^2 + x^2*y*u + x*y^2*u + x^2*z*u + y^2*z*u + x*z^2*u + y*z^2*u + x^2*t*u + y^2*t*u \
    + z^2*t*u + x*t^2*u + y*t^2*u + z*t^2*u + x*y*u^2 + x*z*u^2 + y*z*u^2 + x*t*u^2 + y*t*u^2 + z*t*u^2) \
    - 6/5*(x*y*z*t + x*y*z*u + x*y*t*u + x*z*t*u + y*z*t*u)";

/// A variant of the quartic with `z^2 t u`, `x t^2 u` and `y t^2 u` listed
/// twice in the middle group. Not invariant; kept to pin that fact.
pub const P42_RHO5_REPEATED_TERMS: &str = "x^4 + y^4 + z^4 + t^4 + u^4 \
    - 4/5*(x^3*y + x*y^3 + x^3*z + y^3*z + x^3*t + x*z^3 + y*z^3 + y^3*t + z^3*t + x*t^3 + y*t^3 + z*t^3 \
    + x^3*u + y^3*u + z^3*u + t^3*u + x*u^3 + y*u^3 + z*u^3 + t*u^3) \
    + 3/5*(x^2*y*z + x*y^2*z + x*y*z^2 + x^2*y*t + x*y^2*t + x^2*z*t + y^2*z*t + x*z^2*t + y*z^2*t + x*y*t^2 \
    + x*z*t^2 + y*z*t^2 + x^2*y*u + x*y^2*u + x^2*z*u + y^2*z*u + x*z^2*u + y*z^2*u + x^2*t*u + y^2*t*u \
    + z^2*t*u + x*t^2*u + y*t^2*u + z^2*t*u + x*t^2*u + y*t^2*u + z*t^2*u + x*y*u^2 \
    + x*z*u^2 + y*z*u^2 + x*t*u^2 + y*t*u^2 + z*t*u^2) \
    - 6/5*(x*y*z*t + x*y*z*u + x*y*t*u + x*z*t*u + y*z*t*u)";

pub(crate) fn parse_block(irrep: IrrepId, src: &str) -> SparsePoly {
    let names = variable_names(irrep);
    parse_poly(src, names).expect("reference polynomial text parses")
}

/// All reference invariants, ordered by block, then degree, then index.
pub fn reference_polynomials() -> &'static [ReferencePolynomial] {
    static LIST: OnceLock<Vec<ReferencePolynomial>> = OnceLock::new();
    LIST.get_or_init(|| {
        let mut out = Vec::new();
        let mut push = |irrep, degree, index, poly| out.push(ReferencePolynomial { irrep, degree, index, poly });
        for k in 1..=4 {
            push(IrrepId::Rho1, k, 1, SparsePoly::var(1, 0).pow(k));
        }
        let p21_2 = parse_block(IrrepId::Rho2, P21_RHO2);
        push(IrrepId::Rho2, 4, 1, p21_2.pow(2));
        push(IrrepId::Rho2, 2, 1, p21_2);
        let p21_3 = parse_block(IrrepId::Rho3, P21_RHO3);
        push(IrrepId::Rho3, 4, 1, p21_3.pow(2));
        push(IrrepId::Rho3, 2, 1, p21_3);
        push(IrrepId::Rho5, 2, 1, parse_block(IrrepId::Rho5, P21_RHO5));
        push(IrrepId::Rho5, 3, 1, parse_block(IrrepId::Rho5, P31_RHO5));
        push(IrrepId::Rho5, 3, 2, parse_block(IrrepId::Rho5, P32_RHO5));
        push(IrrepId::Rho5, 4, 1, parse_block(IrrepId::Rho5, P41_RHO5));
        push(IrrepId::Rho5, 4, 2, parse_block(IrrepId::Rho5, P42_RHO5));
        out.sort_by_key(|p| (p.irrep, p.degree, p.index));
        out
    })
}

/// Looks up `p{degree}{index}` of block `irrep`.
pub fn reference_polynomial(irrep: IrrepId, degree: u32, index: u32) -> Option<&'static ReferencePolynomial> {
    reference_polynomials().iter().find(|p| p.irrep == irrep && p.degree == degree && p.index == index)
}
