//! Critical-point classification: spectrum, stabilizer, admissibility, orbit.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::energy::CompiledEnergy;
use crate::group::{IcosahedralGroup, SubgroupName, GROUP_ORDER, NFACES};
use crate::linalg::Spectrum;

use super::BifurcationError;

/// Largest `|grad E|_inf` accepted by [`classify_point`].
pub const STATIONARY_TOL: f64 = 1e-6;
/// Eigenvalues above this count as positive.
pub const STABILITY_TOL: f64 = 1e-9;
/// `g x = x` tolerance, scaled by `max(1, |x|_inf)`.
pub const ISOTROPY_TOL: f64 = 1e-9;
/// Components above `-ADMISSIBLE_TOL * max(1, |x|_inf)` count as non-negative.
pub const ADMISSIBLE_TOL: f64 = 1e-12;

/// Symmetry type of a stabilizer. Every subgroup of the rotation group of the
/// icosahedron is conjugate to one of these, and the order alone tells them apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum IsotropyType {
    Full,
    Proper(SubgroupName),
    Trivial,
}

impl IsotropyType {
    /// `None` only for orders that no subgroup has.
    pub fn from_order(order: usize) -> Option<Self> {
        match order {
            GROUP_ORDER => Some(IsotropyType::Full),
            1 => Some(IsotropyType::Trivial),
            n => SubgroupName::from_order(n).map(IsotropyType::Proper),
        }
    }
}

impl fmt::Display for IsotropyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsotropyType::Full => f.write_str("I"),
            IsotropyType::Proper(h) => write!(f, "{h}"),
            IsotropyType::Trivial => f.write_str("trivial"),
        }
    }
}

impl From<IsotropyType> for String {
    fn from(t: IsotropyType) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for IsotropyType {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        match s.as_str() {
            "I" => Ok(IsotropyType::Full),
            "trivial" => Ok(IsotropyType::Trivial),
            other => other.parse().map(IsotropyType::Proper).map_err(|_| format!("unknown isotropy {other:?}")),
        }
    }
}

/// Indices (into [`IcosahedralGroup::elements`]) of the elements fixing `x`.
pub fn stabilizer(x: &[f64]) -> Vec<usize> {
    let tol = ISOTROPY_TOL * inf_norm(x).max(1.0);
    IcosahedralGroup::get()
        .elements()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.act(x).iter().zip(x).all(|(a, b)| (a - b).abs() <= tol))
        .map(|(i, _)| i)
        .collect()
}

pub fn isotropy(x: &[f64]) -> IsotropyType {
    // Orders outside the table cannot occur for a subgroup, so fall back to
    // `Trivial` only defensively.
    IsotropyType::from_order(stabilizer(x).len()).unwrap_or(IsotropyType::Trivial)
}

pub(crate) fn inf_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// `(admissible, boundary)`: boundary when some face sits at zero on a
/// non-zero admissible point.
pub fn admissibility(x: &[f64]) -> (bool, bool) {
    let tol = ADMISSIBLE_TOL * inf_norm(x).max(1.0);
    let admissible = x.iter().all(|&v| v >= -tol);
    let boundary = admissible && inf_norm(x) > tol && x.iter().any(|v| v.abs() <= tol);
    (admissible, boundary)
}

/// A classified critical point of the energy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub coords: [f64; NFACES],
    pub energy: f64,
    pub gradient_norm: f64,
    pub spectrum: Spectrum,
    pub isotropy: IsotropyType,
    pub stabilizer_order: usize,
    /// All Hessian eigenvalues exceed [`STABILITY_TOL`].
    pub stable: bool,
    /// All components non-negative.
    pub admissible: bool,
    pub boundary: bool,
}

impl CriticalPoint {
    /// `60 / |stabilizer|`.
    pub fn orbit_size(&self) -> usize {
        GROUP_ORDER / self.stabilizer_order
    }
}

/// Classifies a near-stationary point. Errors when `|grad E|_inf` exceeds
/// [`STATIONARY_TOL`].
pub fn classify_point(ce: &CompiledEnergy, x: &[f64]) -> Result<CriticalPoint, BifurcationError> {
    if x.len() != NFACES {
        return Err(BifurcationError::Dimension(x.len()));
    }
    let (energy, grad) = ce.energy_and_gradient(x);
    let gradient_norm = inf_norm(&grad);
    if gradient_norm.is_nan() || gradient_norm > STATIONARY_TOL {
        return Err(BifurcationError::NotStationary { residual: gradient_norm });
    }
    let spectrum = Spectrum::of(&ce.hessian(x));
    let stab = stabilizer(x);
    let (admissible, boundary) = admissibility(x);
    let mut coords = [0.0; NFACES];
    coords.copy_from_slice(x);
    Ok(CriticalPoint {
        coords,
        energy,
        gradient_norm,
        stable: spectrum.min() > STABILITY_TOL,
        spectrum,
        isotropy: IsotropyType::from_order(stab.len()).unwrap_or(IsotropyType::Trivial),
        stabilizer_order: stab.len(),
        admissible,
        boundary,
    })
}

/// `{g x : g in G}` with duplicates within `1e-9` (sup norm) removed, in
/// group-element order.
pub fn orbit(x: &[f64]) -> Vec<[f64; NFACES]> {
    let tol = ISOTROPY_TOL * inf_norm(x).max(1.0);
    let mut out: Vec<[f64; NFACES]> = Vec::new();
    for g in IcosahedralGroup::get().elements() {
        let y = g.act(x);
        if !out.iter().any(|z| sup_distance(z, &y) <= tol) {
            out.push(y);
        }
    }
    out
}

pub(crate) fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bifurcation::branches::{branch_solutions, predicted_spectrum, BranchId};
    use crate::energy::EnergyParams;

    fn energy(v: [f64; 9]) -> CompiledEnergy {
        CompiledEnergy::build(&EnergyParams::from_array(v)).unwrap()
    }

    #[test]
    fn origin_is_fully_symmetric() {
        let ce = energy([1.0; 9]);
        let p = classify_point(&ce, &[0.0; NFACES]).unwrap();
        assert_eq!(p.isotropy, IsotropyType::Full);
        assert!(p.stable && p.admissible && !p.boundary);
        assert_eq!(p.orbit_size(), 1);
        let q = classify_point(&energy([1.0, 1.0, 1.0, -1.0, 1.0, 1.0, 1.0, 1.0, 1.0]), &[0.0; NFACES]).unwrap();
        assert!(!q.stable);
    }

    #[test]
    fn rejects_non_stationary_points() {
        let ce = energy([1.0; 9]);
        assert!(matches!(classify_point(&ce, &[0.1; NFACES]), Err(BifurcationError::NotStationary { .. })));
        assert!(matches!(classify_point(&ce, &[0.0; 3]), Err(BifurcationError::Dimension(3))));
    }

    #[test]
    fn fivefold_point() {
        let v = [-8.0, 1.0, 1.0, -0.1, 1.0, 1.0, 1.0, 3.0, 1.0];
        let ce = energy(v);
        let reports = branch_solutions(ce.params()).unwrap();
        let r = reports.iter().find(|r| r.id == BranchId::D10Plus).unwrap();
        let p = classify_point(&ce, &r.coords.unwrap()).unwrap();
        assert_eq!(p.isotropy, IsotropyType::Proper(SubgroupName::D10));
        assert!(p.stable && p.admissible);
        assert!(p.spectrum.matches(&predicted_spectrum(BranchId::D10Plus, ce.params()), 1e-8));
        let four = p.spectrum.clusters.iter().find(|c| c.multiplicity == 4).unwrap();
        assert!((four.value - (-0.1 / 1440.0) * (54.0 - 75.0)).abs() < 1e-12);
        assert_eq!(orbit(&p.coords).len(), 6);
    }

    #[test]
    fn orbit_sizes_follow_stabilizers() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0];
        assert_eq!(isotropy(&x), IsotropyType::Trivial);
        assert_eq!(orbit(&x).len(), 60);
        assert_eq!(orbit(&[2.5; NFACES]).len(), 1);
    }

    #[test]
    fn admissibility_flags() {
        assert_eq!(admissibility(&[0.0; NFACES]), (true, false));
        let mut x = [1.0; NFACES];
        x[3] = 0.0;
        assert_eq!(admissibility(&x), (true, true));
        x[3] = -1e-6;
        assert_eq!(admissibility(&x), (false, false));
    }

    #[test]
    fn isotropy_labels_round_trip() {
        for t in [IsotropyType::Full, IsotropyType::Trivial, IsotropyType::Proper(SubgroupName::D6)] {
            let s = serde_json::to_string(&t).unwrap();
            assert_eq!(serde_json::from_str::<IsotropyType>(&s).unwrap(), t);
        }
        assert_eq!(IsotropyType::from_order(7), None);
    }
}
