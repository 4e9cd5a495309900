//! Public-API walk from parameters to classified minima.

use icoflux_core::bifurcation::{
    branch_solutions, classify_point, fixed_subspace, minimize_restarts, IsotropyType, MinimizeOptions,
};
use icoflux_core::energy::{expected_origin_spectrum, CompiledEnergy, EnergyParams};
use icoflux_core::group::{SubgroupName, NFACES};

fn params(v: [f64; 9]) -> EnergyParams {
    EnergyParams::from_array(v)
}

#[test]
fn icosahedral_point_changes_only_the_trivial_eigenvalue() {
    let p = params([-2.0, 0.7, 1.3, 0.4, 1.0, 1.0, 1.0, 1.0, 1.0]);
    let ce = CompiledEnergy::build(&p).unwrap();
    let x0 = branch_solutions(&p).unwrap()[1].coords.unwrap();
    let cp = classify_point(&ce, &x0).unwrap();
    assert_eq!(cp.isotropy, IsotropyType::Full);
    let mut expected = expected_origin_spectrum(&p);
    let i = expected.iter().position(|v| *v == p.a / 6.0).unwrap();
    expected[i] = -p.a / 3.0;
    assert!(cp.spectrum.matches(&expected, 1e-10));
    assert!(cp.stable && cp.admissible);
}

#[test]
fn origin_is_a_saddle_when_d_is_negative() {
    let p = params([1.0, 1.0, 1.0, -1.0, 1.0, 1.0, 1.0, 3.0, 1.0]);
    let ce = CompiledEnergy::build(&p).unwrap();
    let cp = classify_point(&ce, &[0.0; NFACES]).unwrap();
    assert!(!cp.stable);
    let r = minimize_restarts(&ce, &MinimizeOptions::new(60, 11)).unwrap();
    // minima exist, but none has all faces non-negative
    assert!(r.minima().count() > 0);
    assert_eq!(r.admissible_minima().count(), 0);
}

#[test]
fn twofold_subspace_has_six_variables() {
    let fix = fixed_subspace(SubgroupName::Z2);
    assert_eq!(fix.dim, 6);
    assert_eq!(fix.names(), ["x", "y", "z", "t", "u", "w"]);
    // every variable sits on exactly two faces
    for v in 0..6 {
        assert_eq!(fix.pattern.iter().filter(|&&p| p == v).count(), 2);
    }
}

#[test]
fn minimizer_output_is_serializable() {
    let ce = CompiledEnergy::build(&params([-2.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0])).unwrap();
    let r = minimize_restarts(&ce, &MinimizeOptions::new(20, 5)).unwrap();
    let json = serde_json::to_value(&r.points).unwrap();
    let labels: Vec<&str> = json.as_array().unwrap().iter().map(|p| p["isotropy"].as_str().unwrap()).collect();
    assert!(labels.contains(&"I"), "{labels:?}");
    assert!(json[0]["spectrum"]["clusters"].is_array());
}
