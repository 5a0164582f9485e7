//! Fundamental solutions by regularized division on the Fourier side,
//! verified weakly against test functions.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{fft_nd, GriddedDensity, PointMassDistribution};
use crate::entire_fn::EntireFn;
use crate::error::{Error, Result};
use crate::group::FiniteOrthogonalGroup;
use crate::quadrature::CompositeRule;
use crate::rank_one::{
    plancherel_density, spherical_function, CoshGaussian, RadialBump, RadialDistribution,
    RadialFunction, SphericalTransform,
};
use crate::slow_decrease::{check_slow_decrease, minimal_a_search, SearchParams, Verdict};
use crate::symbols::{Geometry, Operator};

/// `|den|` at or below this fraction of `max |den|` counts as zero.
pub const DEGENERATE_REL: f64 = 1e-14;

/// Cell-centered grid `ξ_k = −E + (k + ½)h`, `h = 2E/points`, on every axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralGrid {
    pub dim: usize,
    pub points: usize,
    pub extent: f64,
}

impl SpectralGrid {
    pub fn new(dim: usize, points: usize, extent: f64) -> Result<Self> {
        if dim == 0 || dim > 3 {
            return Err(Error::InvalidInput(format!(
                "spectral grid dimension {dim} not in 1..=3"
            )));
        }
        if points < 8 || !points.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "grid points {points} must be a power of two >= 8"
            )));
        }
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "grid extent {extent} must be positive"
            )));
        }
        Ok(Self {
            dim,
            points,
            extent,
        })
    }

    /// `|ξ| ≤ 64` with 4096 points per axis in 1-D, 512 in 2-D, 128 in 3-D.
    pub fn default_for(dim: usize) -> Result<Self> {
        let points = match dim {
            1 => 4096,
            2 => 512,
            _ => 128,
        };
        Self::new(dim, points, 64.0)
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.extent / self.points as f64
    }

    pub fn axis(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.points)
            .map(|k| -self.extent + (k as f64 + 0.5) * h)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        let h = self.spacing();
        let mut rem = flat;
        let mut xi = vec![0.0; self.dim];
        for k in (0..self.dim).rev() {
            xi[k] = -self.extent + ((rem % self.points) as f64 + 0.5) * h;
            rem /= self.points;
        }
        xi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Quotient {
    pub grid: SpectralGrid,
    pub epsilon: f64,
    /// Row-major over the grid, last axis fastest.
    pub values: Vec<C64>,
}

impl Quotient {
    pub fn to_gridded(&self) -> Result<GriddedDensity> {
        let g = self.grid;
        GriddedDensity::new(
            vec![g.points; g.dim],
            vec![(-g.extent, g.extent); g.dim],
            self.values.clone(),
        )
    }

    /// Largest `|Q(σξ) − Q(ξ)|` over the group and the grid.
    pub fn asymmetry(&self, group: &FiniteOrthogonalGroup) -> Result<f64> {
        group.grid_asymmetry(&self.to_gridded()?)
    }

    /// Inverse transform `S(x) = (2π)^{-n} ∫ Q(ξ) e^{i<x,ξ>} dξ` by midpoint
    /// rule, sampled at `x_m = m Δx` with `Δx = 2π/(points·h)` in FFT order.
    pub fn synthesize(&self) -> (Vec<f64>, Vec<C64>) {
        let g = self.grid;
        let n = g.points;
        let h = g.spacing();
        let dx = TAU / (n as f64 * h);
        let xs: Vec<f64> = (0..n).map(|m| if m < n / 2 { m as f64 } else { m as f64 - n as f64 } * dx).collect();
        let mut data = self.values.clone();
        fft_nd(&mut data, &vec![n; g.dim], true);
        let xi0 = -g.extent + 0.5 * h;
        let scale = (h / TAU).powi(g.dim as i32);
        for (flat, v) in data.iter_mut().enumerate() {
            let mut rem = flat;
            let mut phase = 0.0;
            for _ in 0..g.dim {
                phase += xs[rem % n] * xi0;
                rem /= n;
            }
            *v *= scale * C64::from_polar(1.0, phase);
        }
        (xs, data)
    }
}

/// `num · conj(den) / (|den|² + ε²)` on the grid. `ε = 0` is allowed and then
/// exact zeros of `den` give 0.
pub fn divide(
    num: &dyn EntireFn,
    den: &dyn EntireFn,
    grid: &SpectralGrid,
    epsilon: f64,
) -> Result<Quotient> {
    if num.dim() != grid.dim || den.dim() != grid.dim {
        return Err(Error::DimensionMismatch {
            expected: grid.dim,
            got: den.dim(),
        });
    }
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "regularization {epsilon} must be nonnegative"
        )));
    }
    let pairs: Vec<(C64, C64)> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let xi = grid.point(i);
            (num.eval_real(&xi), den.eval_real(&xi))
        })
        .collect();
    if let Some((i, _)) = pairs
        .iter()
        .enumerate()
        .find(|(_, (a, b))| !(a.is_finite() && b.is_finite()))
    {
        let point = grid.point(i).into_iter().map(|x| (x, 0.0)).collect();
        return Err(Error::NonFinite { point });
    }
    let dmax = pairs.iter().map(|(_, d)| d.norm()).fold(0.0, f64::max);
    let zeros = pairs
        .iter()
        .filter(|(_, d)| d.norm() <= DEGENERATE_REL * dmax)
        .count();
    if dmax == 0.0 || 2 * zeros > pairs.len() {
        return Err(Error::DegenerateDenominator {
            zeros,
            total: pairs.len(),
        });
    }
    let e2 = epsilon * epsilon;
    let values = pairs
        .into_iter()
        .map(|(a, d)| {
            let q = d.norm_sqr() + e2;
            if q == 0.0 {
                C64::new(0.0, 0.0)
            } else {
                a * d.conj() / q
            }
        })
        .collect();
    Ok(Quotient {
        grid: *grid,
        epsilon,
        values,
    })
}

/// Test function with a known transform `φ̂(ξ) = ∫ φ(x) e^{-i<x,ξ>} dx`.
pub trait SpectralTest: Send + Sync {
    fn id(&self) -> String;
    fn hat(&self, xi: &[f64]) -> C64;
    fn at_zero(&self) -> f64;
}

/// `φ(x) = exp(−‖x − c‖² / (2w²))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussianTest {
    pub center: Vec<f64>,
    pub width: f64,
}

impl GaussianTest {
    pub fn value(&self, x: &[f64]) -> f64 {
        let d2: f64 = x
            .iter()
            .zip(&self.center)
            .map(|(a, b)| (a - b).powi(2))
            .sum();
        (-d2 / (2.0 * self.width * self.width)).exp()
    }

    /// `k`-th derivative in 1-D, `k ≤ 2`.
    fn derivative_1d(&self, x: f64, k: u32) -> f64 {
        let w2 = self.width * self.width;
        let y = x - self.center[0];
        let g = (-y * y / (2.0 * w2)).exp();
        match k {
            0 => g,
            1 => -y / w2 * g,
            _ => (y * y / (w2 * w2) - 1.0 / w2) * g,
        }
    }
}

impl SpectralTest for GaussianTest {
    fn id(&self) -> String {
        format!("gaussian(c={:?},w={})", self.center, self.width)
    }
    fn hat(&self, xi: &[f64]) -> C64 {
        let n = xi.len() as i32;
        let w2 = self.width * self.width;
        let r2: f64 = xi.iter().map(|v| v * v).sum();
        let phase: f64 = xi.iter().zip(&self.center).map(|(a, b)| a * b).sum();
        (TAU * w2).powf(n as f64 / 2.0) * (-w2 * r2 / 2.0).exp() * C64::from_polar(1.0, -phase)
    }
    fn at_zero(&self) -> f64 {
        self.value(&vec![0.0; self.center.len()])
    }
}

/// Band-limited test function: `φ̂(ξ) = Π_k exp(−1/(1 − (ξ_k/b)²))` on `|ξ_k| < b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandLimitedTest {
    pub dim: usize,
    pub band: f64,
}

fn unit_bump(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

impl SpectralTest for BandLimitedTest {
    fn id(&self) -> String {
        format!("band-limited(b={})", self.band)
    }
    fn hat(&self, xi: &[f64]) -> C64 {
        C64::new(xi.iter().map(|v| unit_bump(v / self.band)).product(), 0.0)
    }
    fn at_zero(&self) -> f64 {
        let one = CompositeRule::new(-self.band, self.band, 32, 16)
            .integrate(|v| unit_bump(v / self.band))
            / TAU;
        one.powi(self.dim as i32)
    }
}

/// Three Gaussians of different widths and centers.
pub fn default_gaussians(dim: usize) -> Vec<GaussianTest> {
    let shift = |s: f64| {
        (0..dim)
            .map(|k| s * (1.0 - 0.5 * k as f64))
            .collect::<Vec<_>>()
    };
    vec![
        GaussianTest {
            center: vec![0.0; dim],
            width: 1.0,
        },
        GaussianTest {
            center: shift(0.3),
            width: 0.7,
        },
        GaussianTest {
            center: shift(-0.5),
            width: 1.5,
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub test: String,
    pub route: String,
    pub value: f64,
}

/// `|⟨S*μ, φ⟩ − φ(0)|` with `⟨S*μ, φ⟩ = (2π)^{-n} ∫ Q(ξ) μ̂(ξ) φ̂(−ξ) dξ`.
pub fn spectral_residual(
    q: &Quotient,
    symbol: &dyn EntireFn,
    test: &dyn SpectralTest,
) -> Result<Residual> {
    let g = q.grid;
    let vol = (g.spacing() / TAU).powi(g.dim as i32);
    let parts: Vec<C64> = (0..g.len())
        .into_par_iter()
        .map(|i| {
            let xi = g.point(i);
            let neg: Vec<f64> = xi.iter().map(|v| -v).collect();
            q.values[i] * symbol.eval_real(&xi) * test.hat(&neg)
        })
        .collect();
    let pairing: C64 = parts.into_iter().sum::<C64>() * vol;
    Ok(Residual {
        test: test.id(),
        route: "spectral".into(),
        value: (pairing - test.at_zero()).norm(),
    })
}

/// 1-D physical-space route: synthesize `S`, then
/// `⟨S*μ, φ⟩ = ⟨S, Σ c φ^{(k)}(· + p)⟩` by quadrature on the synthesis grid.
/// For `μ = ∂δ_0` this is `∫ S φ'`, which the Heaviside solution `S = −H`
/// pairs to exactly `φ(0)`.
pub fn physical_residual(
    q: &Quotient,
    mu: &PointMassDistribution,
    test: &GaussianTest,
) -> Result<Residual> {
    if q.grid.dim != 1 || mu.dim() != 1 {
        return Err(Error::InvalidInput(
            "physical-space pairing is implemented in one dimension".into(),
        ));
    }
    if mu.atoms().iter().any(|a| a.order() > 2) {
        return Err(Error::InvalidInput(
            "physical-space pairing supports derivative order <= 2".into(),
        ));
    }
    let (xs, s) = q.synthesize();
    let dx = xs[1] - xs[0];
    let mut pairing = C64::new(0.0, 0.0);
    for (x, v) in xs.iter().zip(&s) {
        let psi: C64 = mu
            .atoms()
            .iter()
            .map(|a| a.coeff * test.derivative_1d(x + a.point[0], a.deriv[0]))
            .sum();
        pairing += v * psi;
    }
    pairing *= dx;
    Ok(Residual {
        test: test.id(),
        route: "physical".into(),
        value: (pairing - test.at_zero()).norm(),
    })
}

/// Radial test function on the disk with its spherical transform tabulated.
pub struct RadialTest {
    pub id: String,
    pub at_origin: f64,
    transform: SphericalTransform,
}

impl RadialTest {
    pub fn new(id: impl Into<String>, f: &dyn RadialFunction) -> Result<Self> {
        Ok(Self {
            id: id.into(),
            at_origin: f.value(0.0),
            transform: SphericalTransform::new(f)?,
        })
    }

    pub fn spherical_ft(&self, lambda: f64) -> f64 {
        self.transform.eval(lambda)
    }
}

/// Compact bumps of radii 2, 2.5 and 3, then cosh-Gaussians `a = 1, 2, 4`.
pub fn default_radial_tests() -> Result<Vec<RadialTest>> {
    let mut out = Vec::new();
    for radius in [2.0, 2.5, 3.0] {
        out.push(RadialTest::new(
            format!("bump(R={radius})"),
            &RadialBump {
                radius,
                amplitude: 1.0,
            },
        )?);
    }
    for a in [1.0, 2.0, 4.0] {
        out.push(RadialTest::new(
            format!("cosh-gaussian(a={a})"),
            &CoshGaussian { a },
        )?);
    }
    Ok(out)
}

/// Hyperbolic spectral route:
/// `⟨S*μ, g⟩ = ∫_0^∞ Q(λ) μ̃(λ) g̃(λ) dν(λ)` against `g(o)`.
pub fn hyperbolic_residual(
    q: &Quotient,
    symbol: &dyn EntireFn,
    g: &RadialTest,
) -> Result<Residual> {
    let pairing = hyperbolic_synthesis(q, |l| symbol.eval_real(&[l]).re * g.spherical_ft(l), 0.0)?;
    Ok(Residual {
        test: g.id.clone(),
        route: "spectral".into(),
        value: (pairing - g.at_origin).abs(),
    })
}

/// `∫_0^∞ Q(λ) m(λ) φ_λ(r) dν(λ)` by the midpoint rule on the positive half
/// of the grid (the integrand is even and analytic in `λ`).
fn hyperbolic_synthesis(q: &Quotient, m: impl Fn(f64) -> f64 + Sync, r: f64) -> Result<f64> {
    let g = q.grid;
    let h = g.spacing();
    let parts = (g.points / 2..g.points)
        .into_par_iter()
        .map(|k| {
            let l = g.point(k)[0];
            let w = q.values[k].re * m(l);
            if w == 0.0 {
                return Ok(0.0);
            }
            let phi = if r == 0.0 {
                1.0
            } else {
                spherical_function(C64::new(l, 0.0), r)?.re
            };
            Ok(h * w * plancherel_density(l) * phi)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(parts.into_iter().sum())
}

/// Radius step for the finite-difference Laplacian at `o`.
const LAPLACIAN_STEP: f64 = 1e-2;

/// Direct route for atomic `μ` with powers at most 1: synthesize
/// `v = S * g` near `o`, apply `μ` as `Σ c Δ^m` with `Δv(o) = 2v''(0)` by
/// differences, and compare with `g(o)`.
pub fn hyperbolic_direct_residual(
    q: &Quotient,
    mu: &RadialDistribution,
    g: &RadialTest,
) -> Result<Residual> {
    if mu.density().is_some() || mu.atoms().iter().any(|a| a.power > 1) {
        return Err(Error::InvalidInput(
            "direct route needs atoms Δ^m δ_o with m <= 1".into(),
        ));
    }
    let h = LAPLACIAN_STEP;
    let v: Vec<f64> = (0..4)
        .map(|k| hyperbolic_synthesis(q, |l| g.spherical_ft(l), k as f64 * h))
        .collect::<Result<_>>()?;
    // even function: v(−kh) = v(kh)
    let second = (2.0 * 2.0 * v[3] - 27.0 * 2.0 * v[2] + 270.0 * 2.0 * v[1] - 490.0 * v[0])
        / (180.0 * h * h);
    let applied: f64 = mu
        .atoms()
        .iter()
        .map(|a| a.coeff.re * if a.power == 0 { v[0] } else { 2.0 * second })
        .sum();
    Ok(Residual {
        test: g.id.clone(),
        route: "direct".into(),
        value: (applied - g.at_origin).abs(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateConfig {
    pub a_grid: Vec<f64>,
    pub horizon: f64,
    #[serde(skip)]
    pub search: SearchParams,
}

impl Default for GateConfig {
    fn default() -> Self {
        Self {
            a_grid: vec![1.0, 2.0, 4.0, 8.0],
            horizon: 1e3,
            search: SearchParams::default(),
        }
    }
}

/// Smallest grid `A` at which the operator's symbol is slowly decreasing;
/// refuses with a diagnostic otherwise.
pub fn gate(op: &Operator, cfg: &GateConfig) -> Result<f64> {
    let symbol = op.symbol()?;
    if let Some(a) = minimal_a_search(symbol.as_ref(), cfg.horizon, &cfg.a_grid, &cfg.search)? {
        return Ok(a);
    }
    let a_max = cfg.a_grid.last().copied().unwrap_or(1.0);
    let v = check_slow_decrease(symbol.as_ref(), a_max, cfg.horizon, &cfg.search)?;
    let verdict = match v.verdict {
        Verdict::Violated => "violated",
        Verdict::Inconclusive => "inconclusive",
        Verdict::SatisfiedAt { .. } => "satisfied",
    };
    let first = v.failures().next().map(|r| r.xi_norm).unwrap_or(f64::NAN);
    Err(Error::Refused(format!(
        "symbol is not slowly decreasing for A in {:?} up to horizon {}: verdict {verdict} at A = {a_max}, {} failing balls, first at |xi| = {first:.3}",
        cfg.a_grid,
        cfg.horizon,
        v.failures().count()
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivisionConfig {
    pub epsilon: f64,
    pub points: Option<usize>,
    pub extent: f64,
    pub tolerance: f64,
    pub gate: GateConfig,
}

impl Default for DivisionConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-6,
            points: None,
            extent: 64.0,
            tolerance: 1e-5,
            gate: GateConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivisionReport {
    pub geometry: Geometry,
    pub dim: usize,
    pub epsilon: f64,
    pub gate_a: f64,
    pub tolerance: f64,
    pub residuals: Vec<Residual>,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct DivisionResult {
    pub quotient: Quotient,
    pub report: DivisionReport,
}

/// `S̃ = 1/μ̃` by regularized division, gated on slow decrease and verified
/// against test functions.
pub fn fundamental_solution(op: &Operator, cfg: &DivisionConfig) -> Result<DivisionResult> {
    let gate_a = gate(op, &cfg.gate)?;
    let dim = op.dim();
    let grid = match cfg.points {
        Some(p) => SpectralGrid::new(dim, p, cfg.extent)?,
        None => SpectralGrid::new(dim, SpectralGrid::default_for(dim)?.points, cfg.extent)?,
    };
    let symbol = op.symbol()?;
    let one = crate::entire_fn::FnEvaluator::new(dim, |_: &[C64]| C64::new(1.0, 0.0));
    let quotient = divide(&one, symbol.as_ref(), &grid, cfg.epsilon)?;
    let mut residuals = Vec::new();
    match op.geometry() {
        Geometry::Euclidean => {
            for t in default_gaussians(dim) {
                residuals.push(spectral_residual(&quotient, symbol.as_ref(), &t)?);
            }
            if let Operator::Euclidean(mu) = op {
                if dim == 1 && mu.atoms().iter().all(|a| a.order() <= 2) {
                    for t in default_gaussians(1) {
                        residuals.push(physical_residual(&quotient, mu, &t)?);
                    }
                }
            }
        }
        Geometry::Hyperbolic => {
            for g in default_radial_tests()? {
                residuals.push(hyperbolic_residual(&quotient, symbol.as_ref(), &g)?);
                if let Operator::Hyperbolic(mu) = op {
                    if mu.density().is_none() && mu.atoms().iter().all(|x| x.power <= 1) {
                        residuals.push(hyperbolic_direct_residual(&quotient, mu, &g)?);
                    }
                }
            }
        }
    }
    let passed = residuals.iter().all(|r| r.value <= cfg.tolerance);
    let report = DivisionReport {
        geometry: op.geometry(),
        dim,
        epsilon: cfg.epsilon,
        gate_a,
        tolerance: cfg.tolerance,
        residuals,
        passed,
    };
    Ok(DivisionResult { quotient, report })
}

/// Residuals of band-limited tests for a sequence of regularizations.
pub fn epsilon_sweep(
    symbol: &dyn EntireFn,
    grid: &SpectralGrid,
    epsilons: &[f64],
    test: &dyn SpectralTest,
) -> Result<Vec<(f64, f64)>> {
    let one = crate::entire_fn::FnEvaluator::new(grid.dim, |_: &[C64]| C64::new(1.0, 0.0));
    epsilons
        .iter()
        .map(|&e| {
            Ok((
                e,
                spectral_residual(&divide(&one, symbol, grid, e)?, symbol, test)?.value,
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Atom;
    use crate::entire_fn::FnEvaluator;

    fn constant(dim: usize, c: f64) -> impl EntireFn {
        FnEvaluator::new(dim, move |_: &[C64]| C64::new(c, 0.0))
    }

    #[test]
    fn unit_quotient() {
        let g = SpectralGrid::new(1, 64, 8.0).unwrap();
        let q = divide(&constant(1, 1.0), &constant(1, 1.0), &g, 1e-3).unwrap();
        assert!(q
            .values
            .iter()
            .all(|v| (v - 1.0 / (1.0 + 1e-6)).norm() < 1e-15));
    }

    #[test]
    fn derivative_symbol_quotient() {
        let g = SpectralGrid::new(1, 256, 16.0).unwrap();
        let den = FnEvaluator::new(1, |z: &[C64]| -C64::i() * z[0]);
        let q = divide(&constant(1, 1.0), &den, &g, 1e-6).unwrap();
        for (k, v) in q.values.iter().enumerate() {
            let xi = g.point(k)[0];
            assert!((v - C64::new(0.0, 1.0 / xi)).norm() <= 1e-9 * (1.0 / xi).abs());
        }
    }

    #[test]
    fn degenerate_denominator() {
        let g = SpectralGrid::new(1, 64, 8.0).unwrap();
        let den = FnEvaluator::new(1, |z: &[C64]| {
            if z[0].re.abs() < 4.0 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        assert!(divide(&constant(1, 1.0), &den, &g, 1e-3).is_ok());
        let den = FnEvaluator::new(1, |z: &[C64]| {
            if z[0].re.abs() < 3.0 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        assert!(matches!(
            divide(&constant(1, 1.0), &den, &g, 1e-3),
            Err(Error::DegenerateDenominator { .. })
        ));
        assert!(divide(&constant(1, 1.0), &constant(1, 0.0), &g, 1e-3).is_err());
    }

    #[test]
    fn linearity_and_symmetry() {
        let g = SpectralGrid::new(2, 32, 6.0).unwrap();
        let den = FnEvaluator::new(2, |z: &[C64]| (z[0] * z[0]).cos() + z[1] * z[1] * 0.3);
        let q1 = divide(&constant(2, 1.0), &den, &g, 1e-2).unwrap();
        let q3 = divide(&constant(2, 3.0), &den, &g, 1e-2).unwrap();
        for (a, b) in q1.values.iter().zip(&q3.values) {
            assert!((3.0 * a - b).norm() <= 1e-14 * b.norm().max(1.0));
            assert!(a.im == 0.0);
        }
        assert!(
            q1.asymmetry(&FiniteOrthogonalGroup::signs(2).unwrap())
                .unwrap()
                <= 1e-12
        );
    }

    #[test]
    fn epsilon_consistency_hyperbolic_laplacian() {
        let g = SpectralGrid::new(1, 1024, 64.0).unwrap();
        let den = FnEvaluator::new(1, |z: &[C64]| -(z[0] * z[0] + 0.25));
        let q0 = divide(&constant(1, 1.0), &den, &g, 0.0).unwrap();
        let q8 = divide(&constant(1, 1.0), &den, &g, 1e-8).unwrap();
        let worst = q0
            .values
            .iter()
            .zip(&q8.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-7);
        // |den| ≥ 1/4: ε and ε/10 differ by at most (ε/δ₀)² relative
        let e = 1e-2;
        let qa = divide(&constant(1, 1.0), &den, &g, e).unwrap();
        let qb = divide(&constant(1, 1.0), &den, &g, e / 10.0).unwrap();
        for (a, b) in qa.values.iter().zip(&qb.values) {
            assert!((a - b).norm() / b.norm() <= (e / 0.25).powi(2));
        }
    }

    #[test]
    fn synthesis_of_gaussian() {
        let g = SpectralGrid::new(1, 1024, 32.0).unwrap();
        let t = GaussianTest {
            center: vec![0.0],
            width: 1.0,
        };
        let q = Quotient {
            grid: g,
            epsilon: 0.0,
            values: (0..g.len()).map(|k| t.hat(&g.point(k))).collect(),
        };
        let (xs, s) = q.synthesize();
        for (x, v) in xs.iter().zip(&s) {
            assert!((v - t.value(&[*x])).norm() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn delta_residuals() {
        let op = Operator::Euclidean(PointMassDistribution::delta(vec![0.0]));
        let cfg = DivisionConfig {
            tolerance: 1e-10,
            ..Default::default()
        };
        let r = fundamental_solution(&op, &cfg).unwrap();
        assert_eq!(r.report.gate_a, 1.0);
        assert!(r.report.passed, "{:?}", r.report.residuals);
    }

    #[test]
    fn heaviside_weak_residual() {
        let mu = PointMassDistribution::new(
            1,
            vec![Atom {
                coeff: C64::new(1.0, 0.0),
                deriv: vec![1],
                point: vec![0.0],
            }],
        )
        .unwrap();
        let cfg = DivisionConfig {
            tolerance: 1e-4,
            ..Default::default()
        };
        let r = fundamental_solution(&Operator::Euclidean(mu), &cfg).unwrap();
        assert!(r.report.passed, "{:?}", r.report.residuals);
        assert!(r.report.residuals.iter().any(|x| x.route == "physical"));
    }

    #[test]
    fn band_limited_residual_decreases() {
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
        let symbol = mu.fourier_transform();
        let g = SpectralGrid::default_for(1).unwrap();
        let sweep = epsilon_sweep(
            &symbol,
            &g,
            &[1e-2, 1e-3, 1e-4],
            &BandLimitedTest { dim: 1, band: 3.0 },
        )
        .unwrap();
        assert!(sweep.windows(2).all(|w| w[1].1 < w[0].1), "{sweep:?}");
    }
}
