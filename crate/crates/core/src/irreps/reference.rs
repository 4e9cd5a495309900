//! Canonical change of basis and irrep generator matrices.
//!
//! Column `j` of [`reference_basis`] is the `j`-th symmetry-adapted vector;
//! columns are grouped as rho1 (1), rho2 (3), rho3 (3), rho5 (5). With
//! `eta = P^{-1} x`, `P^{-1} rho(g) P` is block diagonal with the blocks below.

use std::sync::OnceLock;

use crate::algebra::{parse_poly, Q5Matrix, Q5Scalar};
use crate::group::Generator;

use super::IrrepId;

/// Parses a constant such as `1-tau`, `-sqrt5` or `3/2`.
pub(crate) fn q5(src: &str) -> Q5Scalar {
    let expanded = src.replace("tau", "(1/2+1/2*sqrt5)");
    parse_poly(&expanded, &[]).expect("reference constants parse").constant_term()
}

fn matrix(rows: &[&[&str]]) -> Q5Matrix {
    Q5Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| q5(s)).collect()).collect())
        .expect("reference matrices are rectangular")
}

const P_ROWS: [[&str; 12]; 12] = [
    ["1", "-1", "sqrt5", "1", "sqrt5", "-1", "1", "1", "1", "1", "-5", "1"],
    ["1", "-1", "1", "1", "-1", "sqrt5", "-1", "1", "1", "1", "1", "-5"],
    ["1", "-1", "-1", "-1", "1", "-1", "sqrt5", "1", "1", "1", "1", "1"],
    ["1", "-1", "-1", "-sqrt5", "1", "1", "-1", "-5", "1", "1", "1", "1"],
    ["1", "-1", "1", "-1", "-1", "1", "1", "1", "-5", "1", "1", "1"],
    ["1", "-sqrt5", "1", "-1", "-1", "-1", "-1", "1", "1", "-5", "1", "1"],
    ["1", "1", "-sqrt5", "-1", "-sqrt5", "1", "-1", "1", "1", "1", "-5", "1"],
    ["1", "1", "-1", "-1", "1", "-sqrt5", "1", "1", "1", "1", "1", "-5"],
    ["1", "1", "1", "1", "-1", "1", "-sqrt5", "1", "1", "1", "1", "1"],
    ["1", "1", "1", "sqrt5", "-1", "-1", "1", "-5", "1", "1", "1", "1"],
    ["1", "1", "-1", "1", "1", "-1", "-1", "1", "-5", "1", "1", "1"],
    ["1", "sqrt5", "-1", "1", "1", "1", "1", "1", "1", "-5", "1", "1"],
];

/// The canonical 12x12 change of basis `P` (`x = P eta`).
pub fn reference_basis() -> &'static Q5Matrix {
    static P: OnceLock<Q5Matrix> = OnceLock::new();
    P.get_or_init(|| {
        let rows: Vec<&[&str]> = P_ROWS.iter().map(|r| r.as_slice()).collect();
        matrix(&rows)
    })
}

/// `P^{-1}`, computed exactly.
pub fn reference_basis_inverse() -> &'static Q5Matrix {
    static PINV: OnceLock<Q5Matrix> = OnceLock::new();
    PINV.get_or_init(|| reference_basis().inverse().expect("reference basis is invertible"))
}

/// Printed generator matrices of the irreps that occur in the face action.
/// `None` for `rho4`, which does not occur and is not tabulated.
pub fn reference_generator_matrix(irrep: IrrepId, g: Generator) -> Option<Q5Matrix> {
    let rows: &[&[&str]] = match (irrep, g) {
        (IrrepId::Rho1, Generator::G2 | Generator::G5) => &[&["1"]],
        (IrrepId::Rho2, Generator::G2) => &[&["0", "-1", "0"], &["-1", "0", "0"], &["0", "0", "-1"]],
        (IrrepId::Rho2, Generator::G5) => &[&["1", "-tau", "-1"], &["0", "-1", "-tau"], &["0", "tau", "tau"]],
        (IrrepId::Rho3, Generator::G2) => {
            &[&["1-tau", "1-tau", "0"], &["-1", "tau-1", "0"], &["1-tau", "1", "-1"]]
        }
        (IrrepId::Rho3, Generator::G5) => &[&["0", "0", "1"], &["1", "0", "tau-1"], &["0", "1", "1-tau"]],
        (IrrepId::Rho5, Generator::G2) => &[
            &["1", "0", "0", "0", "0"],
            &["0", "0", "0", "0", "1"],
            &["0", "0", "0", "1", "0"],
            &["0", "0", "1", "0", "0"],
            &["0", "1", "0", "0", "0"],
        ],
        (IrrepId::Rho5, Generator::G5) => &[
            &["0", "0", "0", "0", "-1"],
            &["1", "0", "0", "0", "-1"],
            &["0", "0", "1", "0", "-1"],
            &["0", "1", "0", "0", "-1"],
            &["0", "0", "0", "1", "-1"],
        ],
        _ => return None,
    };
    Some(matrix(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Q5Matrix;
    use num_traits::One;

    #[test]
    fn constants() {
        assert_eq!(q5("tau"), Q5Scalar::tau());
        assert_eq!(q5("1-tau"), &Q5Scalar::one() - &Q5Scalar::tau());
        assert_eq!(q5("-sqrt5"), -Q5Scalar::sqrt5());
    }

    #[test]
    fn basis_is_invertible() {
        let p = reference_basis();
        assert_eq!(p.rank(), 12);
        assert_eq!(p * reference_basis_inverse(), Q5Matrix::identity(12));
    }

    #[test]
    fn only_tabulated_generators() {
        assert!(reference_generator_matrix(IrrepId::Rho4, Generator::G2).is_none());
        assert!(reference_generator_matrix(IrrepId::Rho2, Generator::G3).is_none());
        assert_eq!(reference_generator_matrix(IrrepId::Rho5, Generator::G5).unwrap().rows(), 5);
    }
}
