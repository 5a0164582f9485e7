use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::distribution::RadialDistribution;
use super::functions::RadialFunction;
use super::jet::Jet;
use super::model::{boundary_control, plancherel_density, spherical_function};
use super::transforms::{radial_rule, spherical_ft, SphericalTransform};
use crate::error::{Error, Result};
use crate::quadrature::{periodic_mean, CompositeRule};

/// Truncation and resolution of the spherical inversion integral over `λ ≥ 0`.
#[derive(Debug, Clone, Copy)]
pub struct InversionConfig {
    pub lambda_max: f64,
    pub panels: usize,
    pub order: usize,
}

impl Default for InversionConfig {
    fn default() -> Self {
        Self {
            lambda_max: 40.0,
            panels: 80,
            order: 16,
        }
    }
}

impl InversionConfig {
    pub fn rule(&self) -> CompositeRule {
        CompositeRule::new(0.0, self.lambda_max, self.panels, self.order)
    }
}

/// `∫_0^Λ F(λ) φ_λ(r) dν(λ)` with the Plancherel density `dν`.
pub fn spherical_inverse(values: &[f64], rule: &CompositeRule, r: f64) -> Result<f64> {
    let parts = rule
        .nodes
        .par_iter()
        .zip(&rule.weights)
        .zip(values)
        .map(|((&l, &w), &v)| {
            Ok(w * v * plancherel_density(l) * spherical_function(C64::new(l, 0.0), r)?.re)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(parts.into_iter().sum())
}

/// `f * μ` at the given radii by the Fourier route: `(f*μ)~ = f̃ μ̃`, inverted
/// with the Plancherel density. Intended for rapidly decaying `f̃`.
pub fn radial_convolve(
    f: &dyn RadialFunction,
    mu: &RadialDistribution,
    radii: &[f64],
    cfg: InversionConfig,
) -> Result<Vec<f64>> {
    if radii.iter().any(|r| !(*r >= 0.0)) {
        return Err(Error::InvalidInput("radii must be nonnegative".into()));
    }
    let ft = SphericalTransform::new(f)?;
    let rule = cfg.rule();
    let product = rule
        .nodes
        .par_iter()
        .map(|&l| Ok(ft.eval(l) * spherical_ft(mu, C64::new(l, 0.0))?.re))
        .collect::<Result<Vec<f64>>>()?;
    radii
        .iter()
        .map(|&r| spherical_inverse(&product, &rule, r))
        .collect()
}

/// `(f * μ)(s)` by direct quadrature on the disk: atoms act by powers of the
/// Laplacian, the density by `∫∫ f(d) μ(r) sinh r dθ dr` with
/// `cosh d = cosh s cosh r − sinh s sinh r cos θ`.
pub fn geometric_convolve(f: &dyn RadialFunction, mu: &RadialDistribution, s: f64) -> Result<f64> {
    let mut out = 0.0;
    for a in mu.atoms() {
        let v = match a.power {
            0 => f.value(s),
            1 => f.laplacian(s),
            p => {
                return Err(Error::InvalidInput(format!(
                    "geometric route supports Δ^p δ_o for p <= 1, got {p}"
                )))
            }
        };
        out += a.coeff.re * v;
    }
    if let Some(p) = mu.density() {
        let rule = radial_rule(p.support());
        let (cs, ss) = (s.cosh(), s.sinh());
        let parts = rule
            .nodes
            .par_iter()
            .zip(&rule.weights)
            .map(|(&r, &w)| {
                let (cr, sr) = (r.cosh(), r.sinh());
                let inner = periodic_mean(
                    |t| C64::new(f.value((cs * cr - ss * sr * t.cos()).max(1.0).acosh()), 0.0),
                    boundary_control(),
                    "geometric convolution",
                )?;
                Ok(w * p.value(r) * sr * inner.value.re)
            })
            .collect::<Result<Vec<f64>>>()?;
        out += TAU * parts.into_iter().sum::<f64>();
    }
    Ok(out)
}

/// `Σ coeff · Δ^power f` for an atomic `μ`, as a radial function.
pub struct AtomicConvolution<'a> {
    pub f: &'a dyn RadialFunction,
    pub mu: &'a RadialDistribution,
}

impl RadialFunction for AtomicConvolution<'_> {
    fn value(&self, r: f64) -> f64 {
        self.mu
            .atoms()
            .iter()
            .map(|a| {
                a.coeff.re
                    * match a.power {
                        0 => self.f.value(r),
                        1 => self.f.laplacian(r),
                        _ => f64::NAN,
                    }
            })
            .sum()
    }
    fn jet(&self, r0: f64, order: usize) -> Jet {
        // differences of the closed-form values; only used for low orders
        let h = 1e-3;
        let v = |x: f64| self.value(x.abs());
        let mut j = Jet::constant(v(r0), order);
        if order >= 1 {
            j.0[1] = (v(r0 - 2.0 * h) - 8.0 * v(r0 - h) + 8.0 * v(r0 + h) - v(r0 + 2.0 * h))
                / (12.0 * h);
        }
        if order >= 2 {
            j.0[2] = (-v(r0 - 2.0 * h) + 16.0 * v(r0 - h) - 30.0 * v(r0) + 16.0 * v(r0 + h)
                - v(r0 + 2.0 * h))
                / (24.0 * h * h);
        }
        j
    }
    fn support(&self) -> f64 {
        self.f.support() + self.mu.support_radius()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank_one::functions::CoshGaussian;

    #[test]
    fn inversion_round_trip() {
        let f = CoshGaussian { a: 1.5 };
        let ft = SphericalTransform::new(&f).unwrap();
        let rule = InversionConfig::default().rule();
        let values: Vec<f64> = rule.nodes.iter().map(|&l| ft.eval(l)).collect();
        for r in [0.0, 0.4, 1.2, 2.0] {
            let back = spherical_inverse(&values, &rule, r).unwrap();
            assert!(
                (back - f.value(r)).abs() < 1e-6,
                "r = {r}: {back} vs {}",
                f.value(r)
            );
        }
    }
}
