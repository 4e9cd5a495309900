//! Icosahedrally invariant Landau energy for a dodecahedral capsid whose twelve
//! faces translate independently along their axes, together with the
//! equivariant bifurcation analysis of its minima.
//!
//! The pipeline runs bottom-up: the icosahedral group as permutations of the
//! faces ([`group`]), its isotypic decomposition ([`irreps`]), per-block
//! invariant polynomials from the Reynolds operator ([`invariants`]), the
//! degree-four energy ([`energy`]) and finally fixed subspaces, closed-form
//! branches, a multistart minimizer and a phase-diagram scanner
//! ([`bifurcation`]).

pub mod algebra;
pub mod bifurcation;
pub mod energy;
pub mod group;
pub mod invariants;
pub mod irreps;
pub mod linalg;
pub mod report;
pub mod selftest;

pub use algebra::{Monomial, Q5Matrix, Q5Scalar, Rational, SparsePoly};
pub use bifurcation::{BranchId, BranchReport, CriticalPoint, FixedSubspace, IsotropyType, PhaseCell};
pub use energy::{CompiledEnergy, EnergyParams};
pub use group::{IcosahedralGroup, Permutation12, SubgroupName};
pub use irreps::IrrepId;
