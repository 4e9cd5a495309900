//! End-to-end validation against the tabulated reference data: group
//! structure, characters, block form, invariants, spectra and branches.
//! Every check is deterministic; `icoflux selftest` prints them.

use num_traits::Zero;

use crate::algebra::{parse_poly, Q5Scalar};
use crate::bifurcation::{
    branch_solutions, classify_point, exact_branch_point, fixed_subspace, orbit, predicted_spectrum,
    restricted_system_terms, BranchId,
};
use crate::energy::{check_equivariance, check_origin_spectrum, CompiledEnergy, EnergyParams, PARAM_NAMES};
use crate::group::{make_subgroup, IcosahedralGroup, SubgroupName, NFACES};
use crate::invariants::{invariant_basis, match_reference_polynomials};
use crate::irreps::{
    check_block_diagonalization, face_character, validate_reference_basis, CharacterTable, IrrepId,
};
use crate::report::CheckResult;

/// `(block, degree, dimension)` of the invariant spaces up to degree four.
pub const INVARIANT_DIMENSIONS: [(IrrepId, u32, usize); 16] = [
    (IrrepId::Rho1, 1, 1),
    (IrrepId::Rho1, 2, 1),
    (IrrepId::Rho1, 3, 1),
    (IrrepId::Rho1, 4, 1),
    (IrrepId::Rho2, 1, 0),
    (IrrepId::Rho2, 2, 1),
    (IrrepId::Rho2, 3, 0),
    (IrrepId::Rho2, 4, 1),
    (IrrepId::Rho3, 1, 0),
    (IrrepId::Rho3, 2, 1),
    (IrrepId::Rho3, 3, 0),
    (IrrepId::Rho3, 4, 1),
    (IrrepId::Rho5, 1, 0),
    (IrrepId::Rho5, 2, 1),
    (IrrepId::Rho5, 3, 2),
    (IrrepId::Rho5, 4, 2),
];

/// Reference restricted systems per parameter `(a, b, c, d, c1, ..., c5)`,
/// one row per equation, for the maximal isotropy subgroups.
pub const REFERENCE_RESTRICTED: [(SubgroupName, [&str; 9]); 5] = [
    (SubgroupName::T, ["x/6", "0", "0", "0", "x^3/3", "0", "0", "0", "0"]),
    (SubgroupName::D10, ["(5*x+y)/36", "0", "0", "(x-y)/180", "(5*x+y)^3/648", "0", "0", "0", "(x-y)^3/3240"]),
    (SubgroupName::D10, ["(5*x+y)/36", "0", "0", "(y-x)/36", "(5*x+y)^3/648", "0", "0", "0", "(y-x)^3/648"]),
    (SubgroupName::D6, ["(x+y)/12", "0", "0", "(x-y)/60", "(x+y)^3/24", "0", "0", "(x-y)^3/1296", "0"]),
    (SubgroupName::D6, ["(x+y)/12", "0", "0", "-(x-y)/60", "(x+y)^3/24", "0", "0", "-(x-y)^3/1296", "0"]),
];

/// Fixed sample points: fivefold-stable, threefold-stable, and a point
/// where every square root in the branch formulas is rational.
pub fn sample_parameters() -> [EnergyParams; 3] {
    [
        EnergyParams::from_array([-8.0, 1.0, 1.0, -0.1, 1.0, 1.0, 1.0, 3.0, 1.0]),
        EnergyParams::from_array([-8.0, 1.0, 1.0, -0.1, 1.0, 1.0, 1.0, 1.0, 1.0]),
        EnergyParams::from_array([-2.0, 1.0, 1.0, -0.02, 1.0, 1.0, 1.0, 1.2, 1.0]),
    ]
}

pub fn group_checks() -> Vec<CheckResult> {
    let g = IcosahedralGroup::get();
    let mut sizes: Vec<usize> = g.classes().iter().map(|c| c.size()).collect();
    sizes.sort_unstable();
    let mut out = vec![
        CheckResult::new("group order", g.order() == 60, format!("{} elements", g.order())),
        CheckResult::new("class sizes", sizes == [1, 12, 12, 15, 20], format!("{sizes:?}")),
        CheckResult::new("transitive on faces", g.orbit_of_face(1).len() == NFACES, ""),
    ];
    for h in SubgroupName::ALL {
        let r = make_subgroup(h);
        out.push(match r {
            Ok(s) => CheckResult::pass(format!("subgroup {h}"), format!("order {}", s.order())),
            Err(e) => CheckResult::fail(format!("subgroup {h}"), e.to_string()),
        });
    }
    out
}

pub fn character_checks() -> Vec<CheckResult> {
    let chi = face_character();
    let values: Vec<String> = chi.iter().map(|v| v.to_string()).collect();
    let expected = ["12", "2", "2", "0", "0"];
    let mut out = vec![CheckResult::new("face character", values == expected, values.join(", "))];
    out.push(match CharacterTable::icosahedral().decompose(&chi) {
        Ok(m) => CheckResult::new("face multiplicities", m == [1, 1, 1, 0, 1], format!("{m:?}")),
        Err(e) => CheckResult::fail("face multiplicities", e.to_string()),
    });
    out
}

pub fn invariant_dimension_checks() -> Vec<CheckResult> {
    INVARIANT_DIMENSIONS
        .iter()
        .map(|&(irrep, k, dim)| {
            let name = format!("dim invariants {irrep} degree {k}");
            match invariant_basis(irrep, k) {
                Ok(b) => CheckResult::new(name, b.dim() == dim, format!("{} (expected {dim})", b.dim())),
                Err(e) => CheckResult::fail(name, e.to_string()),
            }
        })
        .collect()
}

pub fn restricted_system_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut row = [0usize; 3];
    for (h, reference) in REFERENCE_RESTRICTED {
        let slot = match h {
            SubgroupName::T => 0,
            SubgroupName::D10 => 1,
            _ => 2,
        };
        let eq = row[slot];
        row[slot] += 1;
        let fix = fixed_subspace(h);
        let terms = &restricted_system_terms(&fix)[eq];
        let bad: Vec<&str> = reference
            .iter()
            .enumerate()
            .filter(|(k, src)| parse_poly(src, fix.names()).map_or(true, |p| p != terms[*k]))
            .map(|(k, _)| PARAM_NAMES[k])
            .collect();
        out.push(CheckResult::new(
            format!("restricted system {h} equation {}", eq + 1),
            bad.is_empty(),
            if bad.is_empty() { "all nine coefficients agree".to_string() } else { format!("differs in {bad:?}") },
        ));
    }
    out
}

pub fn branch_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for p in sample_parameters() {
        let ce = match CompiledEnergy::build(&p) {
            Ok(ce) => ce,
            Err(e) => {
                out.push(CheckResult::fail(format!("branches at {p}"), e.to_string()));
                continue;
            }
        };
        let reports = branch_solutions(&p).expect("validated above");
        for r in reports.iter().filter(|r| r.exists && r.id != BranchId::Origin) {
            let x = r.coords.expect("existing branch has coordinates");
            let name = format!("{} at {p}", r.id);
            let grad = ce.gradient(&x).iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let e = ce.energy(&x);
            let e_ref = r.energy.expect("existing branch has an energy");
            let spectrum_ok = classify_point(&ce, &x)
                .map(|cp| cp.spectrum.matches(&predicted_spectrum(r.id, &p), 1e-8))
                .unwrap_or(false);
            let ok = grad <= 1e-10 && (e - e_ref).abs() <= 1e-10 * e_ref.abs().max(1.0) && spectrum_ok;
            out.push(CheckResult::new(
                name,
                ok,
                format!("|grad|={grad:.1e}, E={e:.12} vs {e_ref:.12}, spectrum {}", if spectrum_ok { "ok" } else { "off" }),
            ));
            if let Some(xe) = exact_branch_point(r.id, ce.exact_params()) {
                let zero = ce.gradient_exact(&xe).iter().all(Q5Scalar::is_zero);
                out.push(CheckResult::new(format!("{} exact at {p}", r.id), zero, "gradient vanishes exactly"));
            }
        }
    }
    out
}

pub fn orbit_checks() -> Vec<CheckResult> {
    let p = sample_parameters()[0];
    let q = sample_parameters()[1];
    let pick = |p: &EnergyParams, id: BranchId| {
        branch_solutions(p).ok().and_then(|r| r.into_iter().find(|b| b.id == id)).and_then(|b| b.coords)
    };
    [(BranchId::Icosahedral, &p, 1), (BranchId::D10Plus, &p, 6), (BranchId::D10Minus, &p, 6), (BranchId::D6Plus, &q, 10)]
        .into_iter()
        .map(|(id, params, n)| match pick(params, id) {
            Some(x) => {
                let len = orbit(&x).len();
                CheckResult::new(format!("orbit size {id}"), len == n, format!("{len} (expected {n})"))
            }
            None => CheckResult::fail(format!("orbit size {id}"), "branch absent"),
        })
        .collect()
}

pub fn energy_checks() -> Vec<CheckResult> {
    let p = EnergyParams::from_array([0.7, -1.3, 2.1, 0.4, 1.0, 2.0, 3.0, 4.0, 5.0]);
    let ce = CompiledEnergy::build(&p).expect("positive quartics");
    let samples: Vec<[f64; NFACES]> =
        (0..3).map(|k| std::array::from_fn(|i| ((i * 7 + k * 5) % 11) as f64 / 5.0 - 1.0)).collect();
    vec![check_origin_spectrum(&ce, 1e-9), check_equivariance(&ce, &samples, 1e-10)]
}

/// Every check, in pipeline order.
pub fn run_all() -> Vec<CheckResult> {
    let mut out = group_checks();
    out.extend(character_checks());
    out.extend(validate_reference_basis());
    out.extend(check_block_diagonalization());
    out.extend(invariant_dimension_checks());
    out.extend(match_reference_polynomials());
    out.extend(energy_checks());
    out.extend(restricted_system_checks());
    out.extend(branch_checks());
    out.extend(orbit_checks());
    out
}
