use invlab_core::group::FiniteOrthogonalGroup;
use invlab_core::slow_decrease::{ViolationPoint, ViolationSequence};
use invlab_core::witness::*;
use num_complex::Complex64 as C64;

fn single_point(xi: Vec<f64>) -> ViolationSequence {
    ViolationSequence {
        points: vec![ViolationPoint {
            j: 1,
            xi,
            certified_radius: 0.0,
            certified_bound: 0.0,
            sampled_max: 0.0,
        }],
        failed_at: None,
    }
}

#[test]
fn peak_value_at_violation_point() {
    let fam = WitnessFamily::new(
        FiniteOrthogonalGroup::trivial(2),
        single_point(vec![3.0, 0.0]),
    )
    .unwrap();
    assert_eq!(fam.k(1), 3);
    let v = fam.eval_f_sigma_real(1, 0, &[3.0, 0.0]);
    assert!((v - 20.085_536_923_187_668).abs() < 1e-12, "{v}");
    assert!(v >= 25.0 / std::f64::consts::E);
}

#[test]
fn sign_group_average_at_violation_point() {
    let fam = WitnessFamily::new(
        FiniteOrthogonalGroup::signs(2).unwrap(),
        single_point(vec![3.0, 0.0]),
    )
    .unwrap();
    for s in 0..fam.group().order() {
        let p = invlab_core::group::apply(&fam.group().elements()[s], &[3.0, 0.0]);
        assert!((fam.eval_f_sigma_real(1, s, &p) - 3f64.exp()).abs() < 1e-12);
    }
    // (3, 0) is fixed by the flip of the second axis, so two of the four
    // elements land on ξ_1 and the far orbit point adds almost nothing
    let f = fam.eval_f_real(1, &[3.0, 0.0]);
    let expected = 3f64.exp() * 2.0 / 4.0;
    assert!(f >= expected && f < expected * 1.01, "{f}");
}

#[test]
fn big_h_reference_values() {
    let zero = [C64::new(0.0, 0.0); 2];
    assert!((eval_big_h(3, &zero) - 1.0).norm() < 1e-15);
    assert!(eval_big_h(2, &[C64::new(2.0, 0.0), C64::new(0.0, 0.0)]).norm() < 1e-28);
}

#[test]
fn far_from_orbit_values_stay_below_one() {
    let fam = WitnessFamily::new(
        FiniteOrthogonalGroup::named("B2", 2).unwrap(),
        single_point(vec![3.0, 1.0]),
    )
    .unwrap();
    let radius = fam.ball_radius(1);
    for k in 0..200 {
        let t = k as f64 * 0.1;
        let x = [-20.0 + t, 7.0 - 0.5 * t];
        if fam.orbit_distance(1, &x) >= radius {
            for s in 0..fam.group().order() {
                let v = fam.eval_f_sigma_real(1, s, &x);
                assert!((0.0..=1.0).contains(&v), "{v}");
            }
        }
    }
}

#[test]
fn constant_symbol_has_no_family() {
    let one = invlab_core::entire_fn::FnEvaluator::new(1, |_: &[C64]| C64::new(1.0, 0.0));
    let r = WitnessFamily::from_symbol(
        &one,
        FiniteOrthogonalGroup::signs(1).unwrap(),
        1,
        invlab_core::slow_decrease::RadiusSchedule {
            max_radius: 100.0,
            ..Default::default()
        },
        invlab_core::search::BallSearch::default(),
    );
    assert!(r.is_err());
}
