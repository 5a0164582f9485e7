use invlab_core::rank_one::*;
use num_complex::Complex64 as C64;

fn bump_mu() -> RadialDistribution {
    RadialDistribution::from_density(RadialProfile::Bump {
        radius: 1.0,
        amplitude: 1.0,
    })
    .unwrap()
}

fn test_matrix_functions() -> [LineBump; 3] {
    [
        LineBump {
            width: 1.0,
            amplitude: 1.0,
            freq: 0.0,
        },
        LineBump {
            width: 1.5,
            amplitude: 1.0,
            freq: 2.0,
        },
        LineBump {
            width: 0.7,
            amplitude: 2.0,
            freq: 0.0,
        },
    ]
}

#[test]
fn legendre_values_at_zero_frequency() {
    // P_{-1/2}(cosh r), from an arbitrary-precision hypergeometric evaluation
    let oracle = [
        (0.5, 0.984_595_195_695_833_2),
        (1.0, 0.940_862_159_249_349_8),
        (2.0, 0.795_651_695_605_974),
    ];
    for (r, want) in oracle {
        let got = spherical_function(C64::new(0.0, 0.0), r).unwrap();
        assert!((got.re - want).abs() < 1e-12, "r={r}: {got} vs {want}");
        assert!(got.im.abs() < 1e-14);
    }
}

#[test]
fn spherical_function_at_complex_frequency() {
    let cases = [
        (
            C64::new(2.0, 0.0),
            1.0,
            C64::new(0.217_193_207_806_578_5, 0.0),
        ),
        (
            C64::new(5.0, 0.0),
            0.5,
            C64::new(-0.045_383_123_974_937_79, 0.0),
        ),
        (
            C64::new(1.0, 0.3),
            1.5,
            C64::new(0.468_851_745_891_157_35, -0.220_928_714_351_789_76),
        ),
    ];
    for (lambda, r, want) in cases {
        let got = spherical_function(lambda, r).unwrap();
        assert!((got - want).norm() < 1e-10, "{lambda} {r}: {got}");
        let mirrored = spherical_function(-lambda, r).unwrap();
        assert!((got - mirrored).norm() < 1e-10);
    }
}

#[test]
fn busemann_bounded_by_distance() {
    for i in 0..64 {
        for k in 0..64 {
            let x = disk_point(3.0 * i as f64 / 63.0, 0.37 * i as f64);
            let b = std::f64::consts::TAU * k as f64 / 64.0;
            let a = busemann(x, b).unwrap();
            assert!(a.abs() <= distance_from_origin(x) + 1e-12);
        }
    }
    assert!(busemann([1.0, 0.0], 0.3).is_err());
}

#[test]
fn abel_of_bump_matches_weyl_integral() {
    // √2 ∫_{|t|}^1 f(r) sinh r / √(cosh r − cosh t) dr for f = exp(−1/(1−r²))
    let oracle = [
        (0.0, 0.452_830_482_852_766_7),
        (0.3, 0.383_440_966_565_469_4),
        (0.7, 0.104_309_474_311_859_12),
    ];
    let f = RadialBump {
        radius: 1.0,
        amplitude: 1.0,
    };
    for (t, want) in oracle {
        for s in [t, -t] {
            let got = f.abel(s).unwrap();
            assert!((got - want).abs() < 1e-10, "t={s}: {got} vs {want}");
        }
    }
}

#[test]
fn spherical_transform_of_bump() {
    let oracle = [
        (0.0, 0.479_283_078_636_008_1),
        (1.0, 0.448_450_301_822_739_6),
        (5.0, 0.043_914_099_817_155_48),
    ];
    let mu = bump_mu();
    for (lambda, want) in oracle {
        let got = spherical_ft(&mu, C64::new(lambda, 0.0)).unwrap();
        assert!((got.re - want).abs() < 1e-10, "λ={lambda}: {got}");
    }
}

#[test]
fn laplacian_symbol() {
    let mu = RadialDistribution::laplacian_delta();
    let at_zero = spherical_ft(&mu, C64::new(0.0, 0.0)).unwrap();
    assert!((at_zero.re + 0.25).abs() < 1e-15);
    // Δ applied to φ_λ at o by differences in geodesic polar coordinates
    for lambda in [0.5, 2.0, 4.0] {
        let phi = |r: f64| Ok(spherical_function(C64::new(lambda, 0.0), r)?.re);
        let fd = radial_laplacian_fd(phi, 0.0, 1e-2).unwrap();
        let symbol = spherical_ft(&mu, C64::new(lambda, 0.0)).unwrap().re;
        assert!((fd - symbol).abs() < 1e-6, "λ={lambda}: {fd} vs {symbol}");
    }
}

#[test]
fn projection_slice_on_test_distributions() {
    let lambdas: Vec<f64> = (0..200)
        .map(|i| -20.0 + 40.0 * (i as f64 + 0.5) / 200.0)
        .collect();
    for mu in [
        RadialDistribution::delta(),
        RadialDistribution::laplacian_delta(),
        bump_mu(),
    ] {
        let rows = projection_slice(&mu, &lambdas).unwrap();
        let worst = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
        assert!(worst <= 1e-7, "{worst}");
    }
}

#[test]
fn abel_transform_is_even_and_supported() {
    let a = abel_transform(&bump_mu()).unwrap();
    assert!(a.evenness_defect() <= 1e-9);
    let (lo, hi) = a.support();
    assert!(lo >= -1.0 && hi <= 1.0);
}

#[test]
fn diagram_commutes_on_test_matrix() {
    let radii = [0.0, 0.4, 1.1, 2.0];
    for mu in [
        RadialDistribution::delta(),
        RadialDistribution::laplacian_delta(),
        bump_mu(),
    ] {
        for f in test_matrix_functions() {
            let report = check_diagram(&f, &mu, &radii).unwrap();
            assert!(report.residual <= 1e-6, "{f:?}: {}", report.residual);
        }
    }
}

#[test]
fn radon_transform_independent_of_boundary_point() {
    let angles: Vec<f64> = (0..8)
        .map(|k| std::f64::consts::TAU * k as f64 / 8.0)
        .collect();
    assert!(radon_b_spread(&bump_mu(), &angles).unwrap() <= 1e-8);
}

#[test]
fn t_adjoint_is_abel_transform() {
    let (lhs, rhs) = check_duality(
        &bump_mu(),
        &LineBump {
            width: 1.5,
            amplitude: 1.0,
            freq: 2.0,
        },
    )
    .unwrap();
    assert!((lhs - rhs).abs() <= 1e-7);
}

fn two_atom() -> RadialDistribution {
    RadialDistribution::new(
        vec![
            RadialAtom {
                coeff: C64::new(1.0, 0.0),
                power: 0,
            },
            RadialAtom {
                coeff: C64::new(0.5, 0.0),
                power: 1,
            },
        ],
        None,
    )
    .unwrap()
}

#[test]
fn convolution_routes_agree() {
    let f = CoshGaussian { a: 2.0 };
    let radii = [0.0, 0.3, 0.8, 1.5, 2.5];
    let fourier = radial_convolve(&f, &two_atom(), &radii, InversionConfig::default()).unwrap();
    for (r, v) in radii.iter().zip(fourier) {
        let geo = geometric_convolve(&f, &two_atom(), *r).unwrap();
        assert!((v - geo).abs() <= 1e-6, "r={r}: {v} vs {geo}");
    }
}

#[test]
fn radon_intertwines_convolution() {
    let ts: Vec<f64> = (0..21).map(|i| -2.0 + 0.2 * i as f64).collect();
    let report = radon_intertwining(
        &RadialBump {
            radius: 1.5,
            amplitude: 1.0,
        },
        &two_atom(),
        &ts,
    )
    .unwrap();
    assert!(report.radon_kernel_error <= 1e-6);
    assert!(report.weighted_error <= 1e-6);
    // pairing the unweighted transform with the Abel kernel does not intertwine
    assert!(report.abel_kernel_error > 1e-2);
}

#[test]
fn dual_transform_diagram() {
    assert!((dual_transform(|_, _| 1.0, [0.0, 0.0]).unwrap() - 1.0).abs() < 1e-14);
    let psi = LineBump {
        width: 1.5,
        amplitude: 1.0,
        freq: 1.0,
    };
    assert!(
        (dual_transform(|_, t| psi.value(t), [0.0, 0.0]).unwrap() - psi.value(0.0)).abs() < 1e-14
    );
    let phi = move |b: f64, t: f64, k: u32| psi.derivative(t, k as usize) * (1.0 + 0.3 * b.cos());
    let points = [[0.0, 0.0], [0.3, 0.1], [-0.2, 0.4], [0.0, -0.5]];
    assert!(check_dual_diagram(&phi, &two_atom(), &points).unwrap() <= 1e-6);
}

#[test]
fn radial_json_round_trip() {
    let mu = RadialDistribution::new(
        vec![RadialAtom {
            coeff: C64::new(2.0, 0.0),
            power: 1,
        }],
        Some(RadialProfile::Bump {
            radius: 0.8,
            amplitude: 3.0,
        }),
    )
    .unwrap();
    let back = RadialDistribution::from_json(&mu.to_json().unwrap()).unwrap();
    assert_eq!(mu, back);
    assert!(RadialDistribution::from_json(r#"{"radial": false}"#).is_err());
    assert!(RadialDistribution::from_json(r#"{"radial": true, "atom": []}"#).is_err());
}
