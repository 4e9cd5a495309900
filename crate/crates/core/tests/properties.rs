//! Randomized invariants across the pipeline.

use icoflux_core::algebra::{homogeneous_monomials, ratio, NumericPoly, Q5Scalar, Rational, SparsePoly};
use icoflux_core::bifurcation::{
    branch_solutions, fixed_subspace, predicted_spectrum, restricted_system, BranchId,
};
use icoflux_core::energy::{CompiledEnergy, EnergyParams};
use icoflux_core::group::{IcosahedralGroup, SubgroupName, NFACES};
use icoflux_core::invariants::reynolds_irrep;
use icoflux_core::irreps::IrrepId;
use icoflux_core::linalg::Spectrum;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| ratio(n, d))
}

fn q5() -> impl Strategy<Value = Q5Scalar> {
    (rational(), rational()).prop_map(|(r, i)| Q5Scalar::new(r, i))
}

fn element() -> impl Strategy<Value = usize> {
    0usize..60
}

fn face_vector() -> impl Strategy<Value = [f64; NFACES]> {
    proptest::array::uniform12(-2.0f64..2.0)
}

/// Quadratic and quartic coefficients positive, linear ones of either sign.
fn energy_params() -> impl Strategy<Value = EnergyParams> {
    (proptest::array::uniform4(-5.0f64..5.0), proptest::array::uniform5(0.2f64..5.0)).prop_map(|(l, q)| {
        EnergyParams::from_array([l[0], l[1], l[2], l[3], q[0], q[1], q[2], q[3], q[4]])
    })
}

/// Small random polynomial in `n` variables with rational coefficients.
fn poly(n: usize, degree: u32) -> impl Strategy<Value = SparsePoly> {
    let monos = homogeneous_monomials(n, degree);
    let k = monos.len();
    proptest::collection::vec((0..k, rational()), 1..4).prop_map(move |terms| {
        let mut p = SparsePoly::zero(n);
        for (i, c) in terms {
            p.add_term(monos[i].clone(), Q5Scalar::from_rational(c));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in q5(), b in q5(), c in q5()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        prop_assert!((a.to_f64() * b.to_f64() - (&a * &b).to_f64()).abs() <= 1e-9 * (1.0 + (&a * &b).to_f64().abs()));
    }

    #[test]
    fn composition_is_associative(i in element(), j in element(), k in element()) {
        let g = IcosahedralGroup::get().elements();
        let (a, b, c) = (g[i], g[j], g[k]);
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert!(IcosahedralGroup::get().contains(&a.compose(&b)));
    }

    #[test]
    fn action_composes(i in element(), j in element(), x in face_vector()) {
        let g = IcosahedralGroup::get().elements();
        prop_assert_eq!(g[i].act(&g[j].act(&x)), g[i].compose(&g[j]).act(&x));
    }

    #[test]
    fn evaluation_routes_agree(p in poly(3, 3), q in poly(3, 2), x in proptest::array::uniform3(-1.5f64..1.5)) {
        let prod = &p * &q;
        let lhs = prod.eval_f64(&x);
        prop_assert!((lhs - p.eval_f64(&x) * q.eval_f64(&x)).abs() <= 1e-9 * (1.0 + lhs.abs()));
        prop_assert!((NumericPoly::from_poly(&prod).eval(&x) - lhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
        let exact: Vec<Q5Scalar> = x.iter().map(|v| Q5Scalar::from_rational(icoflux_core::algebra::rational_from_f64(*v).unwrap())).collect();
        prop_assert!((prod.eval(&exact).to_f64() - lhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reynolds_is_a_linear_projection(p in poly(3, 2), q in poly(3, 2), s in rational()) {
        let r = |f: &SparsePoly| reynolds_irrep(f, IrrepId::Rho2).unwrap();
        let rp = r(&p);
        prop_assert_eq!(r(&rp), rp.clone());
        let combo = &p + &q.scale(&Q5Scalar::from_rational(s.clone()));
        prop_assert_eq!(r(&combo), &rp + &r(&q).scale(&Q5Scalar::from_rational(s)));
    }

    #[test]
    fn reynolds_image_is_invariant(p in poly(5, 3)) {
        let rp = reynolds_irrep(&p, IrrepId::Rho5).unwrap();
        let mats = &icoflux_core::irreps::IrrepMatrices::get(IrrepId::Rho5).unwrap().matrices;
        for m in mats.iter().step_by(7) {
            prop_assert_eq!(rp.compose_linear(m).unwrap(), rp.clone());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn energy_is_invariant(p in energy_params(), x in face_vector(), i in element()) {
        let ce = CompiledEnergy::build(&p).unwrap();
        let g = IcosahedralGroup::get().elements()[i];
        let (e, ge) = (ce.energy(&x), ce.energy(&g.act(&x)));
        prop_assert!((e - ge).abs() <= 1e-10 * (1.0 + e.abs()));
        prop_assert!((ce.expanded_energy(&x) - e).abs() <= 1e-9 * (1.0 + e.abs()));
    }

    #[test]
    fn fixed_subspaces_are_fixed(t in proptest::array::uniform6(-3.0f64..3.0)) {
        for h in SubgroupName::ALL {
            let fix = fixed_subspace(h);
            let x = fix.embed(&t[..fix.dim]);
            for g in icoflux_core::group::make_subgroup(h).unwrap().elements {
                prop_assert_eq!(g.act(&x), x);
            }
        }
    }

    #[test]
    fn stability_regions_are_disjoint(p in energy_params()) {
        let fivefold = p.c4 > 54.0 / 25.0 * p.c5;
        let threefold = p.c5 > 25.0 / 54.0 * p.c4;
        prop_assert!(!(fivefold && threefold));
        let mut q = p;
        q.a = -p.a.abs() - 0.1;
        q.d = -p.d.abs() - 0.1;
        let r = branch_solutions(&q).unwrap();
        let stable = |id: BranchId| r.iter().find(|b| b.id == id).unwrap().stable;
        prop_assert!(!(stable(BranchId::D10Plus) && stable(BranchId::D6Plus)));
    }

    #[test]
    fn fivefold_energy_lies_below_icosahedral(p in energy_params()) {
        let mut q = p;
        q.a = -p.a.abs() - 0.1;
        q.d = -p.d.abs() - 0.1;
        let r = branch_solutions(&q).unwrap();
        let get = |id: BranchId| r.iter().find(|b| b.id == id).unwrap().clone();
        let (x1, x2, x0) = (get(BranchId::D10Plus), get(BranchId::D10Minus), get(BranchId::Icosahedral));
        prop_assert_eq!(x1.energy, x2.energy);
        prop_assert!(x1.energy.unwrap() < x0.energy.unwrap());
    }

    #[test]
    fn admissibility_predicate_matches_coordinates(p in energy_params()) {
        let mut q = p;
        q.a = -p.a.abs() - 0.1;
        q.d = -p.d.abs() - 0.1;
        for r in branch_solutions(&q).unwrap().into_iter().filter(|r| r.exists) {
            let min = r.coords.unwrap().iter().copied().fold(f64::INFINITY, f64::min);
            // skip draws within rounding of the boundary
            if min.abs() > 1e-9 {
                prop_assert_eq!(r.admissible, min > 0.0, "{} min {}", r.id, min);
            }
        }
    }
}

/// Negative Hessian eigenvalues at a branch point. With `a, d < 0` and
/// `b, c > 0` only the four-fold one can be negative.
fn negative_eigenvalues(p: &EnergyParams, id: BranchId) -> usize {
    let ce = CompiledEnergy::build(p).unwrap();
    let x = branch_solutions(p).unwrap().into_iter().find(|r| r.id == id).unwrap().coords.unwrap();
    let s = Spectrum::of(&ce.hessian(&x));
    assert!(s.matches(&predicted_spectrum(id, p), 1e-8));
    s.eigenvalues.iter().filter(|v| **v < 0.0).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn crossing_the_stability_line_flips_the_fourfold_eigenvalue(p in energy_params()) {
        let mut q = p;
        q.a = -p.a.abs() - 0.5;
        q.b = p.b.abs() + 0.1;
        q.c = p.c.abs() + 0.1;
        q.d = -p.d.abs() - 0.05;
        // fivefold: c4 = (54/25) c5 (1 +/- 1e-2)
        let mut lo = q;
        lo.c4 = 54.0 / 25.0 * q.c5 * (1.0 - 1e-2);
        let mut hi = q;
        hi.c4 = 54.0 / 25.0 * q.c5 * (1.0 + 1e-2);
        prop_assert_eq!(negative_eigenvalues(&lo, BranchId::D10Plus), 4);
        prop_assert_eq!(negative_eigenvalues(&hi, BranchId::D10Plus), 0);
        // threefold: c5 = (25/54) c4 (1 +/- 1e-2)
        let mut lo = q;
        lo.c5 = 25.0 / 54.0 * q.c4 * (1.0 - 1e-2);
        let mut hi = q;
        hi.c5 = 25.0 / 54.0 * q.c4 * (1.0 + 1e-2);
        prop_assert_eq!(negative_eigenvalues(&lo, BranchId::D6Plus), 4);
        prop_assert_eq!(negative_eigenvalues(&hi, BranchId::D6Plus), 0);
    }

    #[test]
    fn restricted_system_vanishes_at_branch_points(p in energy_params()) {
        let mut q = p;
        q.a = -p.a.abs() - 0.1;
        q.d = -p.d.abs() - 0.1;
        let exact = q.to_exact().unwrap();
        for r in branch_solutions(&q).unwrap().into_iter().filter(|r| r.exists && r.id != BranchId::Origin) {
            let h = match r.id {
                BranchId::Icosahedral => SubgroupName::T,
                BranchId::D10Plus | BranchId::D10Minus => SubgroupName::D10,
                _ => SubgroupName::D6,
            };
            let t = r.amplitudes.unwrap();
            for eq in restricted_system(&fixed_subspace(h), &exact) {
                prop_assert!(eq.eval_f64(&t).abs() <= 1e-10, "{}", r.id);
            }
        }
    }
}
