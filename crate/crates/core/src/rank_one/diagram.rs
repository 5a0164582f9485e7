//! Numerical checks of the transform identities on the disk.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use super::convolve::{geometric_convolve, AtomicConvolution};
use super::distribution::{LineDistribution, RadialDistribution};
use super::functions::{abel_by_horocycle, LineFunction, RadialFunction};
use super::model::RHO;
use super::transforms::{
    abel_transform, dual_transform, pair_with_t, radon_transform, spherical_ft, t_map, t_map_with,
    tabulate,
};
use crate::error::{Error, Result};

const FD_STEP: f64 = 2.5e-3;

#[derive(Debug, Clone, Serialize)]
pub struct ProjectionSliceRow {
    pub lambda: f64,
    pub spherical: C64,
    pub abel_fourier: C64,
    /// `|μ̃ − (𝒜μ)^*| / (1 + |μ̃|)`
    pub rel_err: f64,
}

/// Compares `μ̃(λ)` with the line Fourier transform of `𝒜μ`.
pub fn projection_slice(
    mu: &RadialDistribution,
    lambdas: &[f64],
) -> Result<Vec<ProjectionSliceRow>> {
    let abel = abel_transform(mu)?;
    lambdas
        .iter()
        .map(|&lambda| {
            let spherical = spherical_ft(mu, C64::new(lambda, 0.0))?;
            let abel_fourier = abel.fourier(lambda);
            let rel_err = (spherical - abel_fourier).norm() / (1.0 + spherical.norm());
            Ok(ProjectionSliceRow {
                lambda,
                spherical,
                abel_fourier,
                rel_err,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagramSample {
    pub r: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagramReport {
    pub samples: Vec<DiagramSample>,
    pub residual: f64,
}

impl DiagramReport {
    fn from_samples(samples: Vec<DiagramSample>) -> Self {
        let residual = samples
            .iter()
            .map(|s| (s.lhs - s.rhs).abs())
            .fold(0.0, f64::max);
        Self { samples, residual }
    }
}

/// `T(F * 𝒜μ)` against `(TF) * μ` at the given distances from `o`. The left
/// side convolves on the line and applies `T`; the right side applies `T`
/// and convolves on the disk by direct quadrature.
pub fn check_diagram(
    f: &dyn LineFunction,
    mu: &RadialDistribution,
    radii: &[f64],
) -> Result<DiagramReport> {
    let abel = abel_transform(mu)?;
    let max_d = radii.iter().copied().fold(0.0, f64::max) + mu.support_radius() + 0.5;
    let tf = tabulate(|d| t_map(f, d), max_d, (max_d * 1000.0) as usize + 1)?;
    let samples = radii
        .par_iter()
        .map(|&r| {
            let lhs = t_map_with(|a| Ok(abel.convolve_at(f, a)), r)?;
            let rhs = geometric_convolve(&tf, mu, r)?;
            Ok(DiagramSample { r, lhs, rhs })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagramReport::from_samples(samples))
}

/// `⟨μ, TF⟩` against `⟨𝒜μ, F⟩`.
pub fn check_duality(mu: &RadialDistribution, f: &dyn LineFunction) -> Result<(f64, f64)> {
    Ok((pair_with_t(mu, f)?, abel_transform(mu)?.pair(f)))
}

/// Largest difference between `R_b μ` over the given boundary angles.
pub fn radon_b_spread(mu: &RadialDistribution, angles: &[f64]) -> Result<f64> {
    let transforms: Vec<LineDistribution> = angles
        .iter()
        .map(|&b| radon_transform(mu, b))
        .collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for a in &transforms {
        for b in &transforms {
            for (x, y) in a.atoms.iter().zip(&b.atoms) {
                worst = worst.max((x.coeff - y.coeff).norm());
            }
            if let (Some(da), Some(db)) = (&a.density, &b.density) {
                for (x, y) in da.values.iter().zip(&db.values) {
                    worst = worst.max((x - y).abs());
                }
            }
        }
    }
    Ok(worst)
}

/// Sixth-order central differences.
fn fd_derivative(g: &impl Fn(f64) -> Result<f64>, t: f64, k: u32, h: f64) -> Result<f64> {
    const D1: [f64; 7] = [-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0];
    const D2: [f64; 7] = [2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0];
    let (w, scale) = match k {
        0 => return g(t),
        1 => (&D1, 60.0 * h),
        2 => (&D2, 180.0 * h * h),
        _ => {
            return Err(Error::InvalidInput(format!(
                "derivative order {k} not supported"
            )))
        }
    };
    let mut s = 0.0;
    for (i, c) in w.iter().enumerate() {
        if *c != 0.0 {
            s += c * g(t + (i as f64 - 3.0) * h)?;
        }
    }
    Ok(s / scale)
}

fn convolve_fd(line: &LineDistribution, g: &impl Fn(f64) -> Result<f64>, t: f64) -> Result<f64> {
    let mut s = 0.0;
    for a in &line.atoms {
        let sign = if a.order % 2 == 1 { -1.0 } else { 1.0 };
        s += sign * a.coeff.re * fd_derivative(g, t - a.point, a.order, FD_STEP)?;
    }
    Ok(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct RadonRow {
    pub t: f64,
    /// `R(f*μ)(t)`
    pub radon_of_convolution: f64,
    /// `(Rf * R_{b₀}μ)(t)`
    pub with_radon_kernel: f64,
    /// `(Rf * 𝒜μ)(t)`
    pub with_abel_kernel: f64,
    /// `e^{ρt} R(f*μ)(t)`
    pub weighted_lhs: f64,
    /// `(𝒜f * 𝒜μ)(t)`
    pub weighted_rhs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RadonReport {
    pub rows: Vec<RadonRow>,
    /// sup |R(f*μ) − Rf * R_{b₀}μ|
    pub radon_kernel_error: f64,
    /// sup |e^ρ R(f*μ) − 𝒜f * 𝒜μ|
    pub weighted_error: f64,
    /// sup |R(f*μ) − Rf * 𝒜μ|, the unweighted pairing with the Abel kernel
    pub abel_kernel_error: f64,
}

/// Intertwining of the horocycle transform with convolution by an atomic `μ`.
pub fn radon_intertwining(
    f: &dyn RadialFunction,
    mu: &RadialDistribution,
    ts: &[f64],
) -> Result<RadonReport> {
    if mu.density().is_some() {
        return Err(Error::InvalidInput(
            "intertwining check takes atomic μ".into(),
        ));
    }
    let conv = AtomicConvolution { f, mu };
    let radon_mu = radon_transform(mu, 0.0)?;
    let abel_mu = abel_transform(mu)?;
    let rf = |t: f64| Ok(abel_by_horocycle(f, t, 0.0)? * (-RHO * t).exp());
    let af = |t: f64| f.abel(t);
    let rows = ts
        .par_iter()
        .map(|&t| {
            let lhs = abel_by_horocycle(&conv, t, 0.0)? * (-RHO * t).exp();
            Ok(RadonRow {
                t,
                radon_of_convolution: lhs,
                with_radon_kernel: convolve_fd(&radon_mu, &rf, t)?,
                with_abel_kernel: convolve_fd(&abel_mu, &rf, t)?,
                weighted_lhs: (RHO * t).exp() * lhs,
                weighted_rhs: convolve_fd(&abel_mu, &af, t)?,
            })
        })
        .collect::<Result<Vec<RadonRow>>>()?;
    let sup = |g: fn(&RadonRow) -> f64| rows.iter().map(g).fold(0.0, f64::max);
    Ok(RadonReport {
        radon_kernel_error: sup(|r| (r.radon_of_convolution - r.with_radon_kernel).abs()),
        weighted_error: sup(|r| (r.weighted_lhs - r.weighted_rhs).abs()),
        abel_kernel_error: sup(|r| (r.radon_of_convolution - r.with_abel_kernel).abs()),
        rows,
    })
}

/// `R^*(φ * R_{b₀}μ)` and `(R^*φ) * μ` for atomic `μ`, at points of the
/// disk. `phi(b, t, k)` is the `k`-th `t`-derivative of `φ(b, t)`.
pub fn dual_diagram_samples(
    phi: &(dyn Fn(f64, f64, u32) -> f64 + Sync),
    mu: &RadialDistribution,
    points: &[[f64; 2]],
) -> Result<Vec<(f64, f64)>> {
    if mu.density().is_some() {
        return Err(Error::InvalidInput(
            "dual diagram check takes atomic μ".into(),
        ));
    }
    let kernel = radon_transform(mu, 0.0)?;
    points
        .par_iter()
        .map(|&x| {
            let lhs = dual_transform(
                |b, t| {
                    kernel
                        .atoms
                        .iter()
                        .map(|a| {
                            let sign = if a.order % 2 == 1 { -1.0 } else { 1.0 };
                            sign * a.coeff.re * phi(b, t - a.point, a.order)
                        })
                        .sum()
                },
                x,
            )?;
            let dual = |p: [f64; 2]| dual_transform(|b, t| phi(b, t, 0), p);
            let mut rhs = 0.0;
            for a in mu.atoms() {
                rhs += a.coeff.re
                    * match a.power {
                        0 => dual(x)?,
                        1 => {
                            let mut lap = 0.0;
                            for axis in 0..2 {
                                let along = |s: f64| {
                                    let mut p = x;
                                    p[axis] += s;
                                    dual(p)
                                };
                                lap += fd_derivative(&along, 0.0, 2, FD_STEP)?;
                            }
                            let r2 = x[0] * x[0] + x[1] * x[1];
                            (1.0 - r2).powi(2) / 4.0 * lap
                        }
                        p => {
                            return Err(Error::InvalidInput(format!(
                                "Δ^{p} not supported in the dual diagram"
                            )))
                        }
                    };
            }
            Ok((lhs, rhs))
        })
        .collect()
}

/// Largest `|lhs − rhs|` of [`dual_diagram_samples`].
pub fn check_dual_diagram(
    phi: &(dyn Fn(f64, f64, u32) -> f64 + Sync),
    mu: &RadialDistribution,
    points: &[[f64; 2]],
) -> Result<f64> {
    let samples = dual_diagram_samples(phi, mu, points)?;
    Ok(samples
        .iter()
        .map(|(l, r)| (l - r).abs())
        .fold(0.0, f64::max))
}
