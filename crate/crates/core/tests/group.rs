use std::f64::consts::PI;

use invlab_core::distributions::PointMassDistribution;
use invlab_core::group::FiniteOrthogonalGroup;
use proptest::prelude::*;

fn rotation(theta: f64) -> Vec<Vec<f64>> {
    vec![
        vec![theta.cos(), -theta.sin()],
        vec![theta.sin(), theta.cos()],
    ]
}

#[test]
fn rotation_and_reflection_generate_order_six() {
    let reflection = vec![vec![1.0, 0.0], vec![0.0, -1.0]];
    let g = FiniteOrthogonalGroup::generate(2, &[rotation(2.0 * PI / 3.0), reflection]).unwrap();
    assert_eq!(g.order(), 6);
}

#[test]
fn orbit_sizes() {
    let a2 = FiniteOrthogonalGroup::named("A2", 2).unwrap();
    assert_eq!(a2.orbit(&[0.0, 0.0]).len(), 1);
    let x = a2.generic_point(1.0).unwrap();
    let orbit = a2.orbit(&x);
    assert_eq!(orbit.len(), 6);
    for (i, p) in orbit.iter().enumerate() {
        for q in &orbit[i + 1..] {
            assert!((p[0] - q[0]).hypot(p[1] - q[1]) > 1e-6);
        }
    }
    let signs = FiniteOrthogonalGroup::signs(1).unwrap();
    let x = signs.generic_point(1.0).unwrap();
    assert!((x[0].abs() - 1.0).abs() < 1e-15);
    assert_eq!(signs.orbit(&x).len(), 2);
}

#[test]
fn symmetrized_point_mass() {
    let signs = FiniteOrthogonalGroup::signs(1).unwrap();
    let s = signs
        .symmetrize_distribution(&PointMassDistribution::delta(vec![0.7]))
        .unwrap();
    let half = num_complex::Complex64::new(0.5, 0.0);
    let want = PointMassDistribution::delta(vec![0.7])
        .add(&PointMassDistribution::delta(vec![-0.7]))
        .unwrap()
        .scale(half);
    assert_eq!(s, want);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn symmetrization_is_idempotent(
        name in prop::sample::select(vec!["signs", "A2", "B2", "G2"]),
        points in prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 1..5),
    ) {
        let g = FiniteOrthogonalGroup::named(name, 2).unwrap();
        let mut s = PointMassDistribution::delta(vec![points[0].0, points[0].1]);
        for p in &points[1..] {
            s = s.add(&PointMassDistribution::delta(vec![p.0, p.1])).unwrap();
        }
        let once = g.symmetrize_distribution(&s).unwrap();
        let twice = g.symmetrize_distribution(&once).unwrap();
        let a = once.atoms();
        let b = twice.atoms();
        // orbit images can differ in the last bits, so atoms are compared by position
        let mass = |d: &PointMassDistribution, x: &[f64]| -> f64 {
            d.atoms().iter().filter(|t| (t.point[0] - x[0]).abs() < 1e-9 && (t.point[1] - x[1]).abs() < 1e-9).map(|t| t.coeff.re).sum()
        };
        for t in a.iter().chain(b) {
            prop_assert!((mass(&once, &t.point) - mass(&twice, &t.point)).abs() < 1e-12);
        }
    }
}
