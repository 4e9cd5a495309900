//! Fixed subspaces of subgroups and the stationary equations restricted to them.

use serde::{Deserialize, Serialize};

use crate::algebra::{Q5Scalar, Rational, SparsePoly};
use crate::energy::ENERGY_TERMS;
use crate::group::{Generator, SubgroupName, NFACES};
use crate::invariants::lifted_reference;

const VARIABLE_NAMES: [&str; 6] = ["x", "y", "z", "t", "u", "w"];

/// `Fix(H)` parametrized by assigning each face one of `dim` free variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedSubspace {
    pub subgroup: SubgroupName,
    pub dim: usize,
    /// Variable index of each face; indices appear in order of first use.
    pub pattern: [usize; NFACES],
}

impl FixedSubspace {
    /// Variable names, `x, y, z, ...`.
    pub fn names(&self) -> &'static [&'static str] {
        &VARIABLE_NAMES[..self.dim]
    }

    /// E.g. `(x,y,x,x,x,x,x,y,x,x,x,x)`.
    pub fn pattern_string(&self) -> String {
        let parts: Vec<&str> = self.pattern.iter().map(|&v| VARIABLE_NAMES[v]).collect();
        format!("({})", parts.join(","))
    }

    /// `gamma(t)`.
    pub fn embed(&self, t: &[f64]) -> [f64; NFACES] {
        assert_eq!(t.len(), self.dim);
        self.pattern.map(|v| t[v])
    }

    pub fn embed_exact(&self, t: &[Q5Scalar]) -> Vec<Q5Scalar> {
        assert_eq!(t.len(), self.dim);
        self.pattern.iter().map(|&v| t[v].clone()).collect()
    }

    /// First face (0-based) carrying each variable.
    pub fn representative_faces(&self) -> Vec<usize> {
        (0..self.dim).map(|v| self.pattern.iter().position(|&p| p == v).expect("every variable used")).collect()
    }

    /// Coordinates of `x` if it lies in the subspace within `tol`.
    pub fn restrict(&self, x: &[f64], tol: f64) -> Option<Vec<f64>> {
        let t: Vec<f64> = self.representative_faces().iter().map(|&f| x[f]).collect();
        x.iter().zip(&self.pattern).all(|(xi, &v)| (xi - t[v]).abs() <= tol).then_some(t)
    }
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut j = i;
    while parent[j] != r {
        let next = parent[j];
        parent[j] = r;
        j = next;
    }
    r
}

/// Faces sharing a cycle of any generator must carry equal values.
pub fn fixed_subspace(subgroup: SubgroupName) -> FixedSubspace {
    fixed_subspace_of(subgroup, subgroup.generators())
}

pub fn fixed_subspace_of(subgroup: SubgroupName, generators: &[Generator]) -> FixedSubspace {
    let mut parent: Vec<usize> = (0..NFACES).collect();
    for g in generators {
        for cycle in g.permutation().cycles() {
            let first = (cycle[0] - 1) as usize;
            for &f in &cycle[1..] {
                let (ra, rb) = (find(&mut parent, first), find(&mut parent, (f - 1) as usize));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut pattern = [0usize; NFACES];
    let mut roots: Vec<usize> = Vec::new();
    for (i, slot) in pattern.iter_mut().enumerate() {
        let r = find(&mut parent, i);
        *slot = match roots.iter().position(|&x| x == r) {
            Some(k) => k,
            None => {
                roots.push(r);
                roots.len() - 1
            }
        };
    }
    FixedSubspace { subgroup, dim: roots.len(), pattern }
}

/// The restricted stationary system split by parameter:
/// `terms[e][k]` is the coefficient of parameter `k` in equation `e`,
/// a polynomial in the subspace variables. Equation `e` is the gradient
/// component at the first face carrying variable `e`.
pub fn restricted_system_terms(fix: &FixedSubspace) -> Vec<Vec<SparsePoly>> {
    let images: Vec<SparsePoly> = fix.pattern.iter().map(|&v| SparsePoly::var(fix.dim, v)).collect();
    fix.representative_faces()
        .into_iter()
        .map(|face| {
            ENERGY_TERMS
                .iter()
                .map(|&(irrep, degree, index)| {
                    let lifted = lifted_reference(irrep, degree, index).expect("energy term exists");
                    lifted.derivative(face).substitute(&images).expect("pattern has 12 entries")
                })
                .collect()
        })
        .collect()
}

/// The restricted system at exact parameter values.
pub fn restricted_system(fix: &FixedSubspace, params: &[Rational; 9]) -> Vec<SparsePoly> {
    restricted_system_terms(fix)
        .into_iter()
        .map(|eq| {
            let mut acc = SparsePoly::zero(fix.dim);
            for (term, alpha) in eq.iter().zip(params) {
                acc += &term.scale(&Q5Scalar::from_rational(alpha.clone()));
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::group::{make_subgroup, IcosahedralGroup};

    #[test]
    fn dimensions_and_patterns() {
        let dims: Vec<usize> = SubgroupName::ALL.iter().map(|&h| fixed_subspace(h).dim).collect();
        assert_eq!(dims, vec![1, 2, 2, 4, 3, 4, 6]);
        assert_eq!(fixed_subspace(SubgroupName::D10).pattern_string(), "(x,y,x,x,x,x,x,y,x,x,x,x)");
        assert_eq!(fixed_subspace(SubgroupName::D6).pattern_string(), "(x,x,y,y,y,x,x,x,y,y,y,x)");
        assert_eq!(fixed_subspace(SubgroupName::T).pattern_string(), "(x,x,x,x,x,x,x,x,x,x,x,x)");
    }

    #[test]
    fn subspace_is_fixed_by_whole_subgroup() {
        for h in SubgroupName::ALL {
            let fix = fixed_subspace(h);
            let t: Vec<f64> = (0..fix.dim).map(|i| 1.0 + i as f64).collect();
            let x = fix.embed(&t);
            for g in make_subgroup(h).unwrap().elements {
                assert_eq!(g.act(&x), x, "{h}");
            }
            assert_eq!(fix.restrict(&x, 0.0), Some(t));
        }
        // a generic point of Fix(D10) is moved by an element outside D10
        let x = fixed_subspace(SubgroupName::D10).embed(&[1.0, 2.0]);
        assert!(IcosahedralGroup::get().elements().iter().any(|g| g.act(&x) != x));
    }

    fn expect(eq: &[SparsePoly], names: &[&str], reference: [&str; 9]) {
        for (k, src) in reference.iter().enumerate() {
            let expected = parse_poly(src, names).unwrap();
            assert_eq!(eq[k], expected, "parameter {}", crate::energy::PARAM_NAMES[k]);
        }
    }

    #[test]
    fn icosahedral_equation() {
        let terms = restricted_system_terms(&fixed_subspace(SubgroupName::T));
        expect(&terms[0], &["x"], ["x/6", "0", "0", "0", "x^3/3", "0", "0", "0", "0"]);
    }

    #[test]
    fn fivefold_equations() {
        let terms = restricted_system_terms(&fixed_subspace(SubgroupName::D10));
        let n = ["x", "y"];
        expect(&terms[0], &n, ["(5*x+y)/36", "0", "0", "(x-y)/180", "(5*x+y)^3/648", "0", "0", "0", "(x-y)^3/3240"]);
        expect(&terms[1], &n, ["(5*x+y)/36", "0", "0", "(y-x)/36", "(5*x+y)^3/648", "0", "0", "0", "(y-x)^3/648"]);
    }

    #[test]
    fn threefold_equations() {
        let terms = restricted_system_terms(&fixed_subspace(SubgroupName::D6));
        let n = ["x", "y"];
        expect(&terms[0], &n, ["(x+y)/12", "0", "0", "(x-y)/60", "(x+y)^3/24", "0", "0", "(x-y)^3/1296", "0"]);
        expect(&terms[1], &n, ["(x+y)/12", "0", "0", "-(x-y)/60", "(x+y)^3/24", "0", "0", "-(x-y)^3/1296", "0"]);
    }
}
