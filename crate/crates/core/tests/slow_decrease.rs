use invlab_core::distributions::PointMassDistribution;
use invlab_core::entire_fn::{norm, EntireFn, FnEvaluator};
use invlab_core::group::{apply, FiniteOrthogonalGroup};
use invlab_core::search::BallSearch;
use invlab_core::slow_decrease::*;
use num_complex::Complex64 as C64;

fn super_decaying(dim: usize) -> impl EntireFn {
    FnEvaluator::new(dim, |z: &[C64]| {
        (-(z.iter().map(|c| c * c).sum::<C64>() + 1.0).sqrt()).exp()
    })
}

/// `FT(δ_0 − δ_1)`, with `|F(ξ)| = |2 sin(ξ/2)|` on the real line.
fn two_point_difference() -> impl EntireFn {
    PointMassDistribution::delta(vec![0.0])
        .add(&PointMassDistribution::delta(vec![1.0]).scale(C64::new(-1.0, 0.0)))
        .unwrap()
        .fourier_transform()
}

#[test]
fn two_point_difference_needs_a_equal_two() {
    // dense scan of |2 sin(ξ/2)| over every ball up to |ξ| = 1e3 gives
    // failure at A = 1 (ratio 2 sin(ln 2 / 2) at ξ = 0) and success for A >= 2
    let f = two_point_difference();
    let p = SearchParams::default();
    assert_eq!(
        minimal_a_search(&f, 1e3, &[1.0, 2.0, 4.0, 8.0], &p).unwrap(),
        Some(2.0)
    );
    let at_one = check_slow_decrease(&f, 1.0, 1e3, &p).unwrap();
    let origin = at_one.records.iter().find(|r| r.xi_norm == 0.0).unwrap();
    assert!(!origin.pass);
    assert!(
        (origin.best_abs_f - 2.0 * (2f64.ln() / 2.0).sin()).abs() < 1e-6,
        "{}",
        origin.best_abs_f
    );
}

#[test]
fn super_decaying_fails_beyond_the_crossing_radius() {
    // radius beyond which e^{-sqrt(1+(r-A log(2+r))^2)} < (A+r)^{-A}, from a scalar scan
    let crossings = [(2.0, 9.755), (4.0, 27.23), (8.0, 68.7925)];
    let f = super_decaying(1);
    for (a, r_star) in crossings {
        let v = check_slow_decrease(&f, a, 1e3, &SearchParams::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Violated);
        for r in &v.records {
            if r.xi_norm >= 1.05 * r_star {
                assert!(!r.pass, "A={a} |xi|={}", r.xi_norm);
            }
            if r.xi_norm <= 0.95 * r_star {
                assert!(r.pass, "A={a} |xi|={}", r.xi_norm);
            }
        }
    }
    assert_eq!(
        minimal_a_search(&f, 1e3, &[1.0, 2.0, 4.0, 8.0], &SearchParams::default()).unwrap(),
        None
    );
}

#[test]
fn violation_sequence_is_increasing_in_two_dimensions() {
    let f = super_decaying(2);
    let seq =
        find_violation_sequence(&f, 4, RadiusSchedule::default(), BallSearch::default()).unwrap();
    assert!(seq.is_complete());
    let norms: Vec<f64> = seq.points.iter().map(|p| norm(&p.xi)).collect();
    assert!(norms.windows(2).all(|w| w[0] < w[1]), "{norms:?}");
}

#[test]
fn violations_are_orbit_invariant() {
    let f = super_decaying(2);
    let seq =
        find_violation_sequence(&f, 3, RadiusSchedule::default(), BallSearch::default()).unwrap();
    let g = FiniteOrthogonalGroup::named("G2", 2).unwrap();
    for p in &seq.points {
        for s in g.elements() {
            let q = certify_violation(&f, &apply(s, &p.xi), p.j, BallSearch::default()).unwrap();
            assert!(q.holds(), "j={} sigma={s:?}", p.j);
        }
    }
}

#[test]
fn complex_search_agrees_where_the_real_ball_suffices() {
    // the complex ball contains the real one, so a satisfied verdict carries over
    let f = two_point_difference();
    let p = SearchParams {
        complex_search: true,
        ..Default::default()
    };
    let v = check_slow_decrease(&f, 2.0, 1e3, &p).unwrap();
    assert_eq!(v.verdict, Verdict::SatisfiedAt { a: 2.0 });
    assert_eq!(v.records[0].best_zeta.len(), 2);
}
