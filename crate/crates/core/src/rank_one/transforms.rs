use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::distribution::{LineDistribution, RadialDistribution};
use super::functions::{LineFunction, RadialFunction, SampledRadial};
use super::model::{boundary_control, busemann, busemann_radial, spherical_function, RHO};
use crate::error::{Error, Result};
use crate::quadrature::{periodic_mean, CompositeRule};

/// Spectral parameters are accepted in the strip `|Im λ| ≤ STRIP`.
pub const STRIP: f64 = 8.0;

pub(crate) fn radial_rule(support: f64) -> CompositeRule {
    CompositeRule::new(0.0, support, 24, 16)
}

/// `μ̃(λ) = ∫ φ_{−λ} dμ`: closed form on atoms, `2π ∫ φ_{−λ}(r) f(r) sinh r dr`
/// on the density.
pub fn spherical_ft(mu: &RadialDistribution, lambda: C64) -> Result<C64> {
    if lambda.im.abs() > STRIP {
        return Err(Error::Domain(format!(
            "|Im λ| = {} exceeds the strip {STRIP}",
            lambda.im.abs()
        )));
    }
    let mut s = mu.atomic_symbol(lambda);
    if let Some(p) = mu.density() {
        let rule = radial_rule(p.support());
        let parts = rule
            .nodes
            .par_iter()
            .zip(&rule.weights)
            .map(|(&r, &w)| Ok(spherical_function(-lambda, r)? * (w * p.value(r) * r.sinh())))
            .collect::<Result<Vec<C64>>>()?;
        s += parts.into_iter().sum::<C64>() * TAU;
    }
    Ok(s)
}

/// Spherical transform of a radial test function by projection-slice:
/// `f̃(λ) = 2 ∫_0^S 𝒜f(t) cos(λt) dt`, with `𝒜f` tabulated once.
pub struct SphericalTransform {
    rule: CompositeRule,
    abel: Vec<f64>,
}

impl SphericalTransform {
    pub fn new(f: &dyn RadialFunction) -> Result<Self> {
        let rule = CompositeRule::new(0.0, f.support(), 64, 16);
        let abel = rule
            .nodes
            .par_iter()
            .map(|&t| f.abel(t))
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self { rule, abel })
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        2.0 * self
            .rule
            .nodes
            .iter()
            .zip(&self.rule.weights)
            .zip(&self.abel)
            .map(|((t, w), a)| w * a * (lambda * t).cos())
            .sum::<f64>()
    }
}

/// `R_b μ`, the push-forward of `μ` under `x ↦ A(x, b)`.
pub fn radon_transform(mu: &RadialDistribution, b: f64) -> Result<LineDistribution> {
    LineDistribution::from_radial(mu, 0.0, b)
}

/// `𝒜μ = e^{ρt} R_{b₀} μ`.
pub fn abel_transform(mu: &RadialDistribution) -> Result<LineDistribution> {
    LineDistribution::from_radial(mu, RHO, 0.0)
}

/// `TF(x) = ∫_B e^{ρA(x,b)} F(A(x,b)) db` for `x` at distance `r` from `o`.
pub fn t_map(f: &dyn LineFunction, r: f64) -> Result<f64> {
    t_map_with(|a| Ok(f.value(a)), r)
}

pub fn t_map_with(g: impl Fn(f64) -> Result<f64>, r: f64) -> Result<f64> {
    if r == 0.0 {
        return g(0.0);
    }
    let err = std::cell::Cell::new(None);
    let out = periodic_mean(
        |theta| {
            let a = busemann_radial(r, theta);
            match g(a) {
                Ok(v) => C64::new((RHO * a).exp() * v, 0.0),
                Err(e) => {
                    err.set(Some(e));
                    C64::new(0.0, 0.0)
                }
            }
        },
        boundary_control(),
        "T map",
    )?;
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(out.value.re),
    }
}

/// Tabulates a radial function on `[0, max_r]` for repeated evaluation.
pub fn tabulate(
    g: impl Fn(f64) -> Result<f64> + Sync,
    max_r: f64,
    points: usize,
) -> Result<SampledRadial> {
    let values = (0..points)
        .into_par_iter()
        .map(|i| g(max_r * i as f64 / (points - 1) as f64))
        .collect::<Result<Vec<f64>>>()?;
    Ok(SampledRadial {
        support: max_r * (1.0 + 1e-12),
        values,
    })
}

/// `(R^*φ)(x) = ∫_B φ(b, A(x,b)) e^{2ρA(x,b)} db`.
pub fn dual_transform(phi: impl Fn(f64, f64) -> f64, x: [f64; 2]) -> Result<f64> {
    let r2 = x[0] * x[0] + x[1] * x[1];
    if !(r2 < 1.0) {
        return Err(Error::Domain(format!(
            "point {x:?} is not inside the unit disk"
        )));
    }
    let out = periodic_mean(
        |b| {
            let a = busemann(x, b).unwrap_or(f64::NAN);
            C64::new(phi(b, a) * (2.0 * RHO * a).exp(), 0.0)
        },
        boundary_control(),
        "dual transform",
    )?;
    Ok(out.value.re)
}

/// Radial Laplacian `g'' + coth(r) g'` by fourth-order differences of an even function.
pub fn radial_laplacian_fd(g: impl Fn(f64) -> Result<f64>, r: f64, h: f64) -> Result<f64> {
    let r = r.abs();
    let v = |x: f64| g(x.abs());
    let (m2, m1, c, p1, p2) = (
        v(r - 2.0 * h)?,
        v(r - h)?,
        v(r)?,
        v(r + h)?,
        v(r + 2.0 * h)?,
    );
    let d2 = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
    if r < 1e-9 {
        return Ok(2.0 * d2);
    }
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    Ok(d2 + d1 / r.tanh())
}

/// `⟨μ, TF⟩`, which equals `⟨T^*μ, F⟩`.
pub fn pair_with_t(mu: &RadialDistribution, f: &dyn LineFunction) -> Result<f64> {
    let mut s = 0.0;
    for a in mu.atoms() {
        let v = match a.power {
            0 => f.value(0.0),
            1 => radial_laplacian_fd(|r| t_map(f, r), 0.0, 1e-2)?,
            p => {
                return Err(Error::InvalidInput(format!(
                    "pairing with Δ^{p} δ_o is not supported"
                )))
            }
        };
        s += a.coeff.re * v;
    }
    if let Some(p) = mu.density() {
        let rule = radial_rule(p.support());
        let parts = rule
            .nodes
            .par_iter()
            .zip(&rule.weights)
            .map(|(&r, &w)| Ok(w * p.value(r) * r.sinh() * t_map(f, r)?))
            .collect::<Result<Vec<f64>>>()?;
        s += TAU * parts.into_iter().sum::<f64>();
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank_one::functions::{CoshGaussian, Cosine, RadialProfile};

    #[test]
    fn t_of_cosine_is_spherical_function() {
        for lambda in [0.0, 0.7, 3.0] {
            for r in [0.0, 0.5, 1.3] {
                let tf = t_map(&Cosine { lambda }, r).unwrap();
                let phi = spherical_function(C64::new(lambda, 0.0), r).unwrap();
                assert!((tf - phi.re).abs() < 1e-12 && phi.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn atoms_of_abel_and_radon() {
        let a = abel_transform(&RadialDistribution::laplacian_delta()).unwrap();
        let orders: Vec<(u32, f64)> = a.atoms.iter().map(|x| (x.order, x.coeff.re)).collect();
        assert_eq!(orders, vec![(0, -0.25), (2, 1.0)]);
        let r = radon_transform(&RadialDistribution::laplacian_delta(), 0.3).unwrap();
        let orders: Vec<(u32, f64)> = r.atoms.iter().map(|x| (x.order, x.coeff.re)).collect();
        assert_eq!(orders, vec![(1, -1.0), (2, 1.0)]);
    }

    #[test]
    fn radon_support_within_radius() {
        let mu = RadialDistribution::from_density(RadialProfile::Bump {
            radius: 1.2,
            amplitude: 1.0,
        })
        .unwrap();
        let (lo, hi) = radon_transform(&mu, 0.0).unwrap().support();
        assert!(lo >= -1.2 && hi <= 1.2);
    }

    #[test]
    fn spherical_transform_of_cosh_gaussian() {
        let f = CoshGaussian { a: 2.0 };
        let st = SphericalTransform::new(&f).unwrap();
        let mu = |lambda: f64| {
            let rule = radial_rule(f.support());
            TAU * rule.integrate(|r| {
                f.value(r) * r.sinh() * spherical_function(C64::new(-lambda, 0.0), r).unwrap().re
            })
        };
        for lambda in [0.0, 1.0, 4.5] {
            assert!((st.eval(lambda) - f.spherical_ft(lambda)).abs() < 1e-12);
            assert!((st.eval(lambda) - mu(lambda)).abs() < 1e-10);
        }
    }
}
