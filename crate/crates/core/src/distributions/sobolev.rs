use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::gridded::GriddedDensity;
use crate::error::{Error, Result};
use crate::quadrature::CompositeRule;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SobolevNorm {
    pub index: f64,
    pub value: f64,
}

/// `‖u‖_(s)² = (2π)^{-n} ∫ (1+|ξ|²)^s |u*(ξ)|² dξ`, summed over the FFT
/// frequency lattice of the grid.
pub fn sobolev_norm(u: &GriddedDensity, s: f64) -> SobolevNorm {
    let n = u.dim();
    let freqs: Vec<Vec<f64>> = (0..n).map(|k| u.frequencies(k)).collect();
    let dxi: f64 = (0..n)
        .map(|k| TAU / (u.sizes()[k] as f64 * u.spacing(k)))
        .product();
    let spec = u.fourier_samples();
    let sum: f64 = spec
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let r2: f64 = u
                .index_of(i)
                .iter()
                .enumerate()
                .map(|(k, &j)| freqs[k][j].powi(2))
                .sum();
            (1.0 + r2).powf(s) * v.norm_sqr()
        })
        .sum();
    let value = (sum * dxi / TAU.powi(n as i32)).sqrt();
    SobolevNorm { index: s, value }
}

fn sphere_area(n: usize) -> Result<f64> {
    match n {
        1 => Ok(2.0),
        2 => Ok(TAU),
        3 => Ok(4.0 * PI),
        _ => Err(Error::InvalidInput(format!("dimension {n} not supported"))),
    }
}

/// `C = (2π)^{-n/2} (∫ (1+|ξ|²)^{-n} dξ)^{1/2}`, the integral taken in polar
/// form with `r = tan θ`.
pub fn sup_norm_constant(n: usize) -> Result<f64> {
    let area = sphere_area(n)?;
    let rule = CompositeRule::new(0.0, PI / 2.0, 8, 16);
    let e = (n - 1) as i32;
    let radial = rule.integrate(|t| (t.sin() * t.cos()).powi(e));
    Ok(TAU.powf(-(n as f64) / 2.0) * (area * radial).sqrt())
}

/// `sup |L^k u|` with `L` the Laplacian, applied spectrally.
pub fn sup_laplacian_power(u: &GriddedDensity, k: u32) -> f64 {
    if k == 0 {
        return u.max_abs();
    }
    u.apply_multiplier(|xi| {
        let r2: f64 = xi.iter().map(|x| x * x).sum();
        (-r2).powi(k as i32).into()
    })
    .max_abs()
}

#[derive(Debug, Clone, Serialize)]
pub struct SupBoundCheck {
    pub k: u32,
    pub n_index: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Checks `sup|L^k u| ≤ C ‖u‖_(2N+n)` for every `k ≤ N`.
pub fn check_sup_bound(u: &GriddedDensity, big_n: u32) -> Result<Vec<SupBoundCheck>> {
    let n = u.dim();
    let c = sup_norm_constant(n)?;
    let norm = sobolev_norm(u, (2 * big_n as usize + n) as f64).value;
    Ok((0..=big_n)
        .map(|k| {
            let lhs = sup_laplacian_power(u, k);
            let rhs = c * norm;
            SupBoundCheck {
                k,
                n_index: big_n,
                lhs,
                rhs,
                holds: lhs <= rhs,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    #[test]
    fn constant_matches_closed_form() {
        // ∫(1+|ξ|²)^{-n} = π for n = 1, 2
        assert!((sup_norm_constant(1).unwrap() - (PI / TAU).sqrt()).abs() < 1e-14);
        assert!((sup_norm_constant(2).unwrap() - PI.sqrt() / TAU).abs() < 1e-14);
    }

    #[test]
    fn zero_function_has_zero_norm() {
        let u =
            GriddedDensity::from_fn(vec![64], vec![(-4.0, 4.0)], |_| C64::new(0.0, 0.0)).unwrap();
        assert_eq!(sobolev_norm(&u, 3.0).value, 0.0);
    }

    #[test]
    fn parseval() {
        let u = GriddedDensity::from_fn(vec![64, 64], vec![(-4.0, 4.0), (-4.0, 4.0)], |x| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            if r2 < 4.0 {
                C64::new((-1.0 / (1.0 - r2 / 4.0)).exp(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .unwrap();
        let rel = (sobolev_norm(&u, 0.0).value - u.l2_norm()).abs() / u.l2_norm();
        assert!(rel < 1e-12, "{rel}");
    }
}
