use invlab_core::distributions::{Atom, ConvexHull, PointMassDistribution};
use invlab_core::entire_fn::EntireFn;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn atom_strategy(dim: usize) -> impl Strategy<Value = Atom> {
    (
        (-2.0..2.0f64, -2.0..2.0f64),
        prop::collection::vec(0u32..3, dim),
        prop::collection::vec(-3.0..3.0f64, dim),
    )
        .prop_map(|((re, im), deriv, point)| Atom {
            coeff: C64::new(re, im),
            deriv,
            point,
        })
}

fn dist_strategy(dim: usize, atoms: usize) -> impl Strategy<Value = PointMassDistribution> {
    prop::collection::vec(atom_strategy(dim), 1..=atoms)
        .prop_map(move |a| PointMassDistribution::new(dim, a).unwrap())
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_of_convolution_is_product(
        s in dist_strategy(2, 4),
        t in dist_strategy(2, 4),
        xi in prop::collection::vec(-4.0..4.0f64, 2),
    ) {
        let lhs = s.convolve(&t).unwrap().fourier_transform().eval_real(&xi);
        let rhs = s.fourier_transform().eval_real(&xi) * t.fourier_transform().eval_real(&xi);
        prop_assert!(rel(lhs, rhs) < 1e-10, "{lhs} vs {rhs}");
    }

    #[test]
    fn reflection_flips_frequency(s in dist_strategy(1, 5), xi in -6.0..6.0f64) {
        let lhs = s.reflect().fourier_transform().eval_real(&[xi]);
        let rhs = s.fourier_transform().eval_real(&[-xi]);
        prop_assert!(rel(lhs, rhs) < 1e-12);
    }

    #[test]
    fn supports_add_under_convolution(s in dist_strategy(2, 5), t in dist_strategy(2, 5)) {
        let lhs = s.convolve(&t).unwrap().support_hull().unwrap();
        let rhs = s.support_hull().unwrap().minkowski_sum(&t.support_hull().unwrap()).unwrap();
        prop_assert!(lhs.same_vertices(&rhs, 1e-9));
    }
}

#[test]
fn unit_square_hull() {
    let pair = |e: Vec<f64>| {
        PointMassDistribution::delta(vec![0.0, 0.0])
            .add(&PointMassDistribution::delta(e))
            .unwrap()
    };
    let conv = pair(vec![1.0, 0.0])
        .convolve(&pair(vec![0.0, 1.0]))
        .unwrap();
    let square = ConvexHull::of_points(
        2,
        &[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ],
    )
    .unwrap();
    assert!(conv.support_hull().unwrap().same_vertices(&square, 0.0));
}

#[test]
fn derivative_squared_at_two() {
    let d = PointMassDistribution::derivative_of_delta(vec![1], vec![0.0]);
    let v = d
        .convolve(&d)
        .unwrap()
        .fourier_transform()
        .eval_real(&[2.0]);
    assert!((v - C64::new(-4.0, 0.0)).norm() < 1e-14);
}
