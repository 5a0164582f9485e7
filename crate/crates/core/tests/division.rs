use invlab_core::distributions::{Atom, PointMassDistribution};
use invlab_core::division::*;
use invlab_core::rank_one::{RadialAtom, RadialDistribution, RadialProfile};
use invlab_core::symbols::{Operator, SymbolSpec};
use invlab_core::Error;
use num_complex::Complex64 as C64;

#[test]
fn hyperbolic_laplacian_fundamental_solution() {
    let op = Operator::Hyperbolic(RadialDistribution::laplacian_delta());
    let r = fundamental_solution(&op, &DivisionConfig::default()).unwrap();
    assert_eq!(r.report.gate_a, 2.0);
    for x in &r.report.residuals {
        eprintln!("{} {} {:e}", x.route, x.test, x.value);
    }
    assert!(r.report.passed);
    assert_eq!(r.report.residuals.len(), 12);
}

#[test]
fn hyperbolic_operator_with_density() {
    let mu = RadialDistribution::new(
        vec![RadialAtom {
            coeff: C64::new(1.0, 0.0),
            power: 0,
        }],
        Some(RadialProfile::Bump {
            radius: 1.0,
            amplitude: 0.5,
        }),
    )
    .unwrap();
    let r = fundamental_solution(&Operator::Hyperbolic(mu), &DivisionConfig::default()).unwrap();
    for x in &r.report.residuals {
        eprintln!("{} {} {:e}", x.route, x.test, x.value);
    }
    assert!(r.report.passed);
}

#[test]
fn two_dimensional_laplacian() {
    let mu = PointMassDistribution::laplacian_of_delta(2)
        .add(&PointMassDistribution::delta(vec![0.0, 0.0]).scale(C64::new(-0.25, 0.0)))
        .unwrap();
    let r = fundamental_solution(&Operator::Euclidean(mu), &DivisionConfig::default()).unwrap();
    for x in &r.report.residuals {
        eprintln!("{} {} {:e}", x.route, x.test, x.value);
    }
    assert!(r.report.passed);
}

#[test]
fn gate_refuses_super_decaying_symbol() {
    for dim in [1, 2] {
        let op = SymbolSpec::SuperDecaying { dimension: dim }
            .operator()
            .unwrap();
        match fundamental_solution(&op, &DivisionConfig::default()) {
            Err(Error::Refused(msg)) => assert!(msg.contains("violated"), "{msg}"),
            other => panic!("expected refusal, got {:?}", other.map(|r| r.report)),
        }
    }
}

#[test]
fn gate_accepts_exponential_polynomial_with_real_zeros() {
    let mu = PointMassDistribution::new(
        1,
        vec![
            Atom {
                coeff: C64::new(0.5, 0.0),
                deriv: vec![0],
                point: vec![0.0],
            },
            Atom {
                coeff: C64::new(0.5, 0.0),
                deriv: vec![0],
                point: vec![1.0],
            },
        ],
    )
    .unwrap();
    let a = gate(&Operator::Euclidean(mu), &GateConfig::default()).unwrap();
    assert!(a <= 8.0);
}

#[test]
fn quotient_binary_round_trip() {
    let op = Operator::Euclidean(PointMassDistribution::laplacian_of_delta(1));
    let cfg = DivisionConfig {
        points: Some(256),
        epsilon: 1e-3,
        tolerance: 1.0,
        ..Default::default()
    };
    let r = fundamental_solution(&op, &cfg).unwrap();
    let mut buf = Vec::new();
    r.quotient
        .to_gridded()
        .unwrap()
        .write_binary(&mut buf)
        .unwrap();
    assert_eq!(buf.len(), 8 + 8 + 16 + 256 * 16);
    let back = invlab_core::distributions::GriddedDensity::read_binary(&buf[..]).unwrap();
    assert_eq!(back.samples(), &r.quotient.values[..]);
}
