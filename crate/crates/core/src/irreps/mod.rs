//! Characters, isotypic projectors and block diagonalization of the face
//! representation.

mod reference;

use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, LinearSpan, Q5Matrix, Q5Scalar, Rational};
use crate::group::{ClassId, Generator, IcosahedralGroup, NFACES};
use crate::report::CheckResult;

pub use reference::{reference_basis, reference_basis_inverse, reference_generator_matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IrrepError {
    #[error("class function is not a character: multiplicity of {irrep} is {value}")]
    NotACharacter { irrep: IrrepId, value: String },
    #[error("no tabulated matrices for {0}")]
    NotTabulated(IrrepId),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The five irreducible representations, by dimension 1, 3, 3, 4, 5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IrrepId {
    Rho1,
    Rho2,
    Rho3,
    Rho4,
    Rho5,
}

impl IrrepId {
    pub const ALL: [IrrepId; 5] = [IrrepId::Rho1, IrrepId::Rho2, IrrepId::Rho3, IrrepId::Rho4, IrrepId::Rho5];

    /// The irreps occurring in the face action, in block order.
    pub const IN_FACES: [IrrepId; 4] = [IrrepId::Rho1, IrrepId::Rho2, IrrepId::Rho3, IrrepId::Rho5];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn dim(self) -> usize {
        [1, 3, 3, 4, 5][self.index()]
    }

    /// 1-based number, as in `rho5`.
    pub fn number(self) -> usize {
        self.index() + 1
    }

    pub fn from_number(n: usize) -> Option<IrrepId> {
        IrrepId::ALL.get(n.checked_sub(1)?).copied()
    }

    /// `(offset, dim)` of this irrep's block in `eta = P^{-1} x`.
    pub fn block(self) -> Option<(usize, usize)> {
        match self {
            IrrepId::Rho1 => Some((0, 1)),
            IrrepId::Rho2 => Some((1, 3)),
            IrrepId::Rho3 => Some((4, 3)),
            IrrepId::Rho4 => None,
            IrrepId::Rho5 => Some((7, 5)),
        }
    }
}

impl fmt::Display for IrrepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rho{}", self.number())
    }
}

impl std::str::FromStr for IrrepId {
    type Err = String;
    /// Accepts `rho5` or `5`.
    fn from_str(s: &str) -> Result<Self, String> {
        let digits = s.trim().strip_prefix("rho").unwrap_or(s.trim());
        digits.parse().ok().and_then(IrrepId::from_number).ok_or_else(|| format!("unknown irrep {s:?}, expected rho1..rho5"))
    }
}

/// A class function, valued on `(e, g5, g5^2, g2, g2g5)`.
pub type ClassFunction = [Q5Scalar; 5];

#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub rows: [ClassFunction; 5],
    pub class_sizes: [usize; 5],
}

impl CharacterTable {
    pub fn icosahedral() -> &'static CharacterTable {
        static TABLE: OnceLock<CharacterTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            let q = reference::q5;
            let row = |v: [&str; 5]| v.map(q);
            CharacterTable {
                rows: [
                    row(["1", "1", "1", "1", "1"]),
                    row(["3", "tau", "1-tau", "-1", "0"]),
                    row(["3", "1-tau", "tau", "-1", "0"]),
                    row(["4", "-1", "-1", "0", "1"]),
                    row(["5", "0", "0", "1", "-1"]),
                ],
                class_sizes: [1, 12, 12, 15, 20],
            }
        })
    }

    pub fn row(&self, irrep: IrrepId) -> &ClassFunction {
        &self.rows[irrep.index()]
    }

    /// `(1/|G|) sum_C |C| chi(C) psi(C)`; characters are real.
    pub fn inner(&self, chi: &ClassFunction, psi: &ClassFunction) -> Q5Scalar {
        let order: usize = self.class_sizes.iter().sum();
        let total: Q5Scalar = (0..5).map(|c| &(&chi[c] * &psi[c]) * &Q5Scalar::from_int(self.class_sizes[c] as i64)).sum();
        total.scale_rational(&Rational::new(1.into(), (order as i64).into()))
    }

    /// Multiplicity of each irrep in the representation with character `chi`.
    pub fn decompose(&self, chi: &ClassFunction) -> Result<[u32; 5], IrrepError> {
        let mut out = [0u32; 5];
        for irrep in IrrepId::ALL {
            let m = self.inner(chi, self.row(irrep));
            let ok = m.irr.is_zero() && m.rat.is_integer() && m.rat >= Rational::zero();
            let value = if ok { m.rat.to_integer().try_into().ok() } else { None };
            out[irrep.index()] =
                value.ok_or_else(|| IrrepError::NotACharacter { irrep, value: m.to_string() })?;
        }
        Ok(out)
    }

    pub fn class_value(&self, irrep: IrrepId, class: ClassId) -> &Q5Scalar {
        &self.row(irrep)[class.index()]
    }
}

/// Trace of a representation on each class representative.
pub fn character_of(matrix_of: impl Fn(ClassId) -> Q5Matrix) -> ClassFunction {
    ClassId::ALL.map(|c| matrix_of(c).trace())
}

/// Character of the 12-dimensional face permutation representation.
pub fn face_character() -> ClassFunction {
    character_of(|c| c.representative().to_matrix())
}

/// `sum_g chi_i(g) rho(g)` for the face representation; no normalization.
pub fn projection_operator(irrep: IrrepId) -> Q5Matrix {
    let group = IcosahedralGroup::get();
    let table = CharacterTable::icosahedral();
    let mut m = Q5Matrix::zeros(NFACES, NFACES);
    for (idx, g) in group.elements().iter().enumerate() {
        let chi = table.class_value(irrep, group.class_of(idx));
        if chi.is_zero() {
            continue;
        }
        for j in 0..NFACES {
            let i = (g.apply(j as u8 + 1) - 1) as usize;
            m[(i, j)] += chi;
        }
    }
    m
}

/// The first linearly independent columns of `projector`, in index order.
pub fn extract_basis(projector: &Q5Matrix) -> Vec<Vec<Q5Scalar>> {
    projector.independent_columns().into_iter().map(|j| projector.column(j)).collect()
}

/// Multiplicities and the canonical change of basis for the face action.
#[derive(Clone, Debug)]
pub struct IrrepDecomposition {
    pub multiplicities: [u32; 5],
    /// `(irrep, dim)` for each block of `P`, in column order.
    pub blocks: Vec<(IrrepId, usize)>,
    pub change_of_basis: Q5Matrix,
    pub inverse: Q5Matrix,
}

pub fn decompose_faces() -> Result<IrrepDecomposition, IrrepError> {
    let multiplicities = CharacterTable::icosahedral().decompose(&face_character())?;
    let blocks = IrrepId::IN_FACES.iter().map(|&i| (i, i.dim())).collect();
    Ok(IrrepDecomposition {
        multiplicities,
        blocks,
        change_of_basis: reference_basis().clone(),
        inverse: reference_basis_inverse().clone(),
    })
}

/// An irrep evaluated on every group element, aligned with
/// [`IcosahedralGroup::elements`]. Built from the tabulated generator
/// matrices along each element's word.
#[derive(Clone, Debug)]
pub struct IrrepMatrices {
    pub irrep: IrrepId,
    pub matrices: Vec<Q5Matrix>,
}

impl IrrepMatrices {
    pub fn get(irrep: IrrepId) -> Result<&'static IrrepMatrices, IrrepError> {
        static CACHE: [OnceLock<Option<IrrepMatrices>>; 5] =
            [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
        CACHE[irrep.index()].get_or_init(|| Self::build(irrep)).as_ref().ok_or(IrrepError::NotTabulated(irrep))
    }

    fn build(irrep: IrrepId) -> Option<IrrepMatrices> {
        let g2 = reference_generator_matrix(irrep, Generator::G2)?;
        let g5 = reference_generator_matrix(irrep, Generator::G5)?;
        let group = IcosahedralGroup::get();
        let n = irrep.dim();
        let matrices = (0..group.order())
            .map(|i| {
                group.word(i).iter().fold(Q5Matrix::identity(n), |acc, g| match g {
                    Generator::G2 => &acc * &g2,
                    _ => &acc * &g5,
                })
            })
            .collect();
        Some(IrrepMatrices { irrep, matrices })
    }

    pub fn dim(&self) -> usize {
        self.irrep.dim()
    }
}

/// `P^{-1} rho(g) P` for a face permutation `g`; exploits that `rho(g) P`
/// only permutes rows of `P`.
pub fn conjugated_face_matrix(g: &crate::group::Permutation12) -> Q5Matrix {
    let p = reference_basis();
    let pinv = reference_basis_inverse();
    let mut permuted = Q5Matrix::zeros(NFACES, NFACES);
    for i in 0..NFACES {
        let target = (g.apply(i as u8 + 1) - 1) as usize;
        for j in 0..NFACES {
            permuted[(target, j)] = p[(i, j)].clone();
        }
    }
    pinv * &permuted
}

fn blocks_of(g_index: usize) -> Result<Q5Matrix, IrrepError> {
    let blocks: Result<Vec<Q5Matrix>, IrrepError> =
        IrrepId::IN_FACES.iter().map(|&i| Ok(IrrepMatrices::get(i)?.matrices[g_index].clone())).collect();
    Ok(Q5Matrix::block_diagonal(&blocks?))
}

/// Checks the canonical basis against the tabulated irreps: relations of
/// the generator matrices, isotypic membership of each column, and exact
/// block form for both generators.
pub fn validate_reference_basis() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for irrep in IrrepId::IN_FACES {
        let g2 = reference_generator_matrix(irrep, Generator::G2).expect("tabulated");
        let g5 = reference_generator_matrix(irrep, Generator::G5).expect("tabulated");
        let ok = g2.pow(2).is_identity() && g5.pow(5).is_identity() && (&g2 * &g5).pow(3).is_identity();
        out.push(CheckResult::new(
            format!("relations {irrep}"),
            ok,
            if ok { "g2^2 = g5^5 = (g2 g5)^3 = I".to_string() } else { "a defining relation fails".to_string() },
        ));
    }

    let p = reference_basis();
    out.push(CheckResult::new("basis rank", p.rank() == NFACES, format!("rank {}", p.rank())));
    for irrep in IrrepId::IN_FACES {
        let (offset, dim) = irrep.block().expect("occurs in faces");
        let mut span = LinearSpan::new(NFACES);
        for v in extract_basis(&projection_operator(irrep)) {
            span.insert(&v);
        }
        let bad: Vec<usize> = (offset..offset + dim).filter(|&j| !span.contains(&p.column(j))).collect();
        out.push(CheckResult::new(
            format!("isotypic columns {irrep}"),
            bad.is_empty(),
            if bad.is_empty() {
                format!("columns {}..={} lie in the image of the {irrep} projector", offset + 1, offset + dim)
            } else {
                format!("columns {bad:?} (0-based) leave the image")
            },
        ));
    }

    for g in [Generator::G2, Generator::G5] {
        let conj = conjugated_face_matrix(&g.permutation());
        for irrep in IrrepId::IN_FACES {
            let (offset, dim) = irrep.block().expect("occurs in faces");
            let expected = reference_generator_matrix(irrep, g).expect("tabulated");
            let block_ok = conj.block(offset, offset, dim, dim) == expected;
            let off_ok = (0..NFACES).all(|r| {
                (0..NFACES).all(|c| {
                    let inside = (offset..offset + dim).contains(&r) || (offset..offset + dim).contains(&c);
                    let same = (offset..offset + dim).contains(&r) && (offset..offset + dim).contains(&c);
                    !inside || same || conj[(r, c)].is_zero()
                })
            });
            let ok = block_ok && off_ok;
            out.push(CheckResult::new(
                format!("block {irrep} at {}", g.name()),
                ok,
                if ok { "matches tabulated matrix".to_string() } else { format!("mismatch in block {irrep}") },
            ));
        }
    }
    out
}

/// Exact block diagonalization over all 60 elements, plus block traces
/// against the character table.
pub fn check_block_diagonalization() -> Vec<CheckResult> {
    let group = IcosahedralGroup::get();
    let table = CharacterTable::icosahedral();
    let mut failures = Vec::new();
    for (i, g) in group.elements().iter().enumerate() {
        match blocks_of(i) {
            Ok(expected) if conjugated_face_matrix(g) == expected => {}
            Ok(_) => failures.push(format!("{g}")),
            Err(e) => failures.push(e.to_string()),
        }
    }
    let mut out = vec![CheckResult::new(
        "block diagonal on all elements",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} elements", group.order())
        } else {
            format!("fails at {}", failures.join(", "))
        },
    )];
    for irrep in IrrepId::IN_FACES {
        let Ok(reps) = IrrepMatrices::get(irrep) else {
            out.push(CheckResult::fail(format!("characters {irrep}"), "not tabulated"));
            continue;
        };
        let chi = character_of(|c| {
            let idx = group.index_of(&c.representative()).expect("representative in group");
            reps.matrices[idx].clone()
        });
        let ok = &chi == table.row(irrep);
        let shown: Vec<String> = chi.iter().map(Q5Scalar::to_string).collect();
        out.push(CheckResult::new(format!("characters {irrep}"), ok, shown.join(", ")));
    }
    out
}
