//! Radial functions on the disk and even functions on the line with
//! closed-form values and derivatives.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::jet::Jet;
use super::model::{boundary_control, Horocycle, RHO};
use crate::error::{Error, Result};
use crate::quadrature::periodic_mean;

/// Level below which rapidly decaying test functions are treated as zero.
const NEGLIGIBLE_EXPONENT: f64 = 45.0;

pub trait RadialFunction: Send + Sync {
    fn value(&self, r: f64) -> f64;

    /// Taylor jet in `r` at `r0`.
    fn jet(&self, r0: f64, order: usize) -> Jet;

    /// The function vanishes (or is negligible) for `r` beyond this radius.
    fn support(&self) -> f64;

    /// Radial part of the Laplace-Beltrami operator, `f'' + coth(r) f'`.
    fn laplacian(&self, r: f64) -> f64 {
        let r = r.abs();
        let j = self.jet(r, 2);
        if r < 1e-6 {
            2.0 * j.derivative(2)
        } else {
            j.derivative(2) + j.derivative(1) / r.tanh()
        }
    }

    /// `𝒜f(t) = e^{ρt} ∫ f` over the horocycle `{A(·,b) = t}`.
    fn abel(&self, t: f64) -> Result<f64> {
        abel_by_horocycle(self, t, 0.0)
    }
}

/// Horocycle integral `∫_{A(·,b)=t} f ds` weighted by `e^{ρt}`.
pub fn abel_by_horocycle<F: RadialFunction + ?Sized>(f: &F, t: f64, b: f64) -> Result<f64> {
    if t.abs() >= f.support() {
        return Ok(0.0);
    }
    let h = Horocycle { b, t };
    let out = periodic_mean(
        |theta| {
            let (d, w) = h.distance_and_weight(theta);
            C64::new(f.value(d) * w, 0.0)
        },
        boundary_control(),
        "horocycle integral",
    )?;
    Ok((RHO * t).exp() * TAU * out.value.re)
}

fn bump_jet(x0: f64, width: f64, amplitude: f64, order: usize) -> Jet {
    if x0.abs() >= width {
        return Jet::constant(0.0, order);
    }
    let s = Jet::variable(x0, order).scale(1.0 / width);
    let q = s.mul(&s).scale(-1.0).add_const(1.0);
    q.recip().scale(-1.0).exp().scale(amplitude)
}

fn bump_value(x: f64, width: f64, amplitude: f64) -> f64 {
    let s = x / width;
    if s.abs() >= 1.0 {
        0.0
    } else {
        amplitude * (-1.0 / (1.0 - s * s)).exp()
    }
}

/// `amplitude · exp(−1/(1−(r/radius)²))` on `r < radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialBump {
    pub radius: f64,
    pub amplitude: f64,
}

impl RadialFunction for RadialBump {
    fn value(&self, r: f64) -> f64 {
        bump_value(r, self.radius, self.amplitude)
    }
    fn jet(&self, r0: f64, order: usize) -> Jet {
        bump_jet(r0, self.radius, self.amplitude, order)
    }
    fn support(&self) -> f64 {
        self.radius
    }
}

/// `exp(−a (cosh r − 1))`. Its Abel transform is `√(2π/a) e^{−a(cosh t − 1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoshGaussian {
    pub a: f64,
}

impl CoshGaussian {
    /// `f̃(λ) = (𝒜f)^*(λ) = 2√(2π/a) ∫_0^∞ e^{−a(cosh t − 1)} cos(λt) dt`.
    pub fn spherical_ft(&self, lambda: f64) -> f64 {
        let rule = crate::quadrature::CompositeRule::new(0.0, self.support(), 96, 16);
        let c = 2.0 * (TAU / self.a).sqrt();
        c * rule.integrate(|t| (-self.a * (t.cosh() - 1.0)).exp() * (lambda * t).cos())
    }
}

impl RadialFunction for CoshGaussian {
    fn value(&self, r: f64) -> f64 {
        (-self.a * (r.cosh() - 1.0)).exp()
    }
    fn jet(&self, r0: f64, order: usize) -> Jet {
        Jet::variable(r0, order)
            .cosh()
            .add_const(-1.0)
            .scale(-self.a)
            .exp()
    }
    fn support(&self) -> f64 {
        (1.0 + NEGLIGIBLE_EXPONENT / self.a).acosh()
    }
    fn abel(&self, t: f64) -> Result<f64> {
        Ok((TAU / self.a).sqrt() * self.value(t))
    }
}

/// Samples `values[i]` at `r_i = i · support / (len − 1)`, interpolated by
/// 6-point Lagrange polynomials and extended evenly across `r = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledRadial {
    pub support: f64,
    pub values: Vec<f64>,
}

impl SampledRadial {
    fn sample(&self, i: isize) -> f64 {
        let i = i.unsigned_abs();
        self.values.get(i).copied().unwrap_or(0.0)
    }

    fn lagrange(&self, r: f64, deriv: usize) -> f64 {
        let h = self.support / (self.values.len() - 1) as f64;
        let s = r.abs() / h;
        let base = s.floor() as isize - 2;
        let nodes: Vec<f64> = (0..6).map(|k| (base + k) as f64).collect();
        let mut acc = 0.0;
        for (k, &xk) in nodes.iter().enumerate() {
            let others: Vec<f64> = nodes
                .iter()
                .enumerate()
                .filter(|&(m, _)| m != k)
                .map(|(_, &x)| x)
                .collect();
            let denom: f64 = others.iter().map(|x| xk - x).product();
            let num = match deriv {
                0 => others.iter().map(|x| s - x).product::<f64>(),
                1 => (0..5)
                    .map(|a| {
                        (0..5)
                            .filter(|&b| b != a)
                            .map(|b| s - others[b])
                            .product::<f64>()
                    })
                    .sum(),
                _ => (0..5)
                    .flat_map(|a| (0..5).filter(move |&b| b != a).map(move |b| (a, b)))
                    .map(|(a, b)| {
                        (0..5)
                            .filter(|&c| c != a && c != b)
                            .map(|c| s - others[c])
                            .product::<f64>()
                    })
                    .sum(),
            };
            acc += self.sample(base + k as isize) * num / denom;
        }
        acc / h.powi(deriv as i32)
    }
}

impl RadialFunction for SampledRadial {
    fn value(&self, r: f64) -> f64 {
        if r.abs() >= self.support {
            0.0
        } else {
            self.lagrange(r, 0)
        }
    }
    fn jet(&self, r0: f64, order: usize) -> Jet {
        let mut j = Jet::constant(self.value(r0), order);
        for k in 1..=order.min(2) {
            let fact = if k == 2 { 2.0 } else { 1.0 };
            j.0[k] = if r0.abs() >= self.support {
                0.0
            } else {
                self.lagrange(r0, k) / fact
            };
        }
        j
    }
    fn support(&self) -> f64 {
        self.support
    }
}

/// Serializable radial profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RadialProfile {
    Bump { radius: f64, amplitude: f64 },
    Sampled { support: f64, values: Vec<f64> },
}

impl RadialProfile {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Bump { radius, amplitude } => {
                if !(*radius > 0.0) || !amplitude.is_finite() {
                    return Err(Error::InvalidInput(
                        "bump needs positive radius and finite amplitude".into(),
                    ));
                }
            }
            Self::Sampled { support, values } => {
                if !(*support > 0.0) || values.len() < 8 || values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidInput(
                        "sampled profile needs positive support and >= 8 finite values".into(),
                    ));
                }
                if values.last().copied().unwrap_or(0.0).abs() > 0.0 {
                    return Err(Error::InvalidInput(
                        "sampled profile must vanish at its support radius".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

impl RadialFunction for RadialProfile {
    fn value(&self, r: f64) -> f64 {
        match self {
            Self::Bump { radius, amplitude } => bump_value(r, *radius, *amplitude),
            Self::Sampled { support, values } => SampledRadial {
                support: *support,
                values: values.clone(),
            }
            .value(r),
        }
    }
    fn jet(&self, r0: f64, order: usize) -> Jet {
        match self {
            Self::Bump { radius, amplitude } => bump_jet(r0, *radius, *amplitude, order),
            Self::Sampled { support, values } => SampledRadial {
                support: *support,
                values: values.clone(),
            }
            .jet(r0, order),
        }
    }
    fn support(&self) -> f64 {
        match self {
            Self::Bump { radius, .. } => *radius,
            Self::Sampled { support, .. } => *support,
        }
    }
}

/// Even function on the line with derivatives.
pub trait LineFunction: Send + Sync {
    fn value(&self, t: f64) -> f64 {
        self.derivative(t, 0)
    }
    fn derivative(&self, t: f64, k: usize) -> f64;
    fn support(&self) -> f64;
}

/// `amplitude · exp(−1/(1−(t/width)²)) · cos(freq · t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineBump {
    pub width: f64,
    pub amplitude: f64,
    pub freq: f64,
}

impl LineFunction for LineBump {
    fn derivative(&self, t: f64, k: usize) -> f64 {
        let b = bump_jet(t, self.width, self.amplitude, k);
        if self.freq == 0.0 {
            return b.derivative(k);
        }
        let (s, c) = (self.freq * t).sin_cos();
        let mut cj = Jet::constant(0.0, k);
        for (i, v) in cj.0.iter_mut().enumerate() {
            // i-th Taylor coefficient of cos(freq (t + h))
            let d = match i % 4 {
                0 => c,
                1 => -s,
                2 => -c,
                _ => s,
            };
            let fact: f64 = (1..=i).map(|m| m as f64).product();
            *v = d * self.freq.powi(i as i32) / fact;
        }
        b.mul(&cj).derivative(k)
    }
    fn support(&self) -> f64 {
        self.width
    }
}

/// `cos(λt)`, the line function that `T` maps to `φ_λ`.
#[derive(Debug, Clone, Copy)]
pub struct Cosine {
    pub lambda: f64,
}

impl LineFunction for Cosine {
    fn derivative(&self, t: f64, k: usize) -> f64 {
        let (s, c) = (self.lambda * t).sin_cos();
        let v = match k % 4 {
            0 => c,
            1 => -s,
            2 => -c,
            _ => s,
        };
        v * self.lambda.powi(k as i32)
    }
    fn support(&self) -> f64 {
        f64::INFINITY
    }
}
