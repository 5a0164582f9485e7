use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::functions::{abel_by_horocycle, LineFunction, RadialFunction, RadialProfile};
use crate::error::{Error, Result};
use crate::quadrature::CompositeRule;

/// `coeff · Δ^power δ_o`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadialAtom {
    pub coeff: C64,
    pub power: u32,
}

/// K-invariant compactly supported distribution: radial-Laplacian powers of
/// `δ_o` plus an optional radial density (integrated against `dx = sinh r dr dθ`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RadialJson", into = "RadialJson")]
pub struct RadialDistribution {
    atoms: Vec<RadialAtom>,
    density: Option<RadialProfile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RadialJson {
    radial: bool,
    #[serde(default)]
    atoms: Vec<RadialAtom>,
    #[serde(default)]
    density: Option<RadialProfile>,
}

impl TryFrom<RadialJson> for RadialDistribution {
    type Error = Error;
    fn try_from(j: RadialJson) -> Result<Self> {
        if !j.radial {
            return Err(Error::InvalidInput(
                "radial distributions need \"radial\": true".into(),
            ));
        }
        Self::new(j.atoms, j.density)
    }
}

impl From<RadialDistribution> for RadialJson {
    fn from(d: RadialDistribution) -> Self {
        Self {
            radial: true,
            atoms: d.atoms,
            density: d.density,
        }
    }
}

impl RadialDistribution {
    pub fn new(mut atoms: Vec<RadialAtom>, density: Option<RadialProfile>) -> Result<Self> {
        if let Some(p) = &density {
            p.validate()?;
        }
        if atoms
            .iter()
            .any(|a| !a.coeff.re.is_finite() || !a.coeff.im.is_finite())
        {
            return Err(Error::InvalidInput(
                "atom coefficients must be finite".into(),
            ));
        }
        atoms.sort_by_key(|a| a.power);
        let mut merged: Vec<RadialAtom> = Vec::new();
        for a in atoms {
            match merged.last_mut() {
                Some(m) if m.power == a.power => m.coeff += a.coeff,
                _ => merged.push(a),
            }
        }
        merged.retain(|a| a.coeff != C64::new(0.0, 0.0));
        Ok(Self {
            atoms: merged,
            density,
        })
    }

    pub fn delta() -> Self {
        Self {
            atoms: vec![RadialAtom {
                coeff: C64::new(1.0, 0.0),
                power: 0,
            }],
            density: None,
        }
    }

    pub fn laplacian_delta() -> Self {
        Self {
            atoms: vec![RadialAtom {
                coeff: C64::new(1.0, 0.0),
                power: 1,
            }],
            density: None,
        }
    }

    pub fn from_density(profile: RadialProfile) -> Result<Self> {
        Self::new(Vec::new(), Some(profile))
    }

    pub fn atoms(&self) -> &[RadialAtom] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&RadialProfile> {
        self.density.as_ref()
    }

    pub fn support_radius(&self) -> f64 {
        self.density.as_ref().map_or(0.0, |d| d.support())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// `Σ coeff · (−(λ² + 1/4))^power`, the transform of the atomic part.
    pub fn atomic_symbol(&self, lambda: C64) -> C64 {
        let base = -(lambda * lambda + 0.25);
        self.atoms
            .iter()
            .map(|a| a.coeff * base.powu(a.power))
            .sum()
    }
}

/// `coeff · F^{(order)}(point)` as a functional of `F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineAtom {
    pub coeff: C64,
    pub order: u32,
    pub point: f64,
}

/// Density on the line tabulated on Gauss-Legendre nodes, with the
/// radial profile it came from for pointwise evaluation.
#[derive(Debug, Clone)]
pub struct LineDensity {
    pub rule: CompositeRule,
    pub values: Vec<f64>,
    profile: RadialProfile,
    /// `ρ` for the Abel transform, `0` for the plain horocycle transform.
    weight_exponent: f64,
    b: f64,
}

impl LineDensity {
    pub fn value_at(&self, t: f64) -> Result<f64> {
        let raw = abel_by_horocycle(&self.profile, t, self.b)?;
        // abel_by_horocycle includes e^{ρt}; strip or keep it
        Ok(raw * ((self.weight_exponent - super::model::RHO) * t).exp())
    }
}

/// Compactly supported distribution on the line: derivative atoms plus a density.
#[derive(Debug, Clone)]
pub struct LineDistribution {
    pub atoms: Vec<LineAtom>,
    pub density: Option<LineDensity>,
}

/// Coefficients of `(x² + c1 x + c0)^m`, lowest degree first.
fn quadratic_power(c1: f64, c0: f64, m: u32) -> Vec<f64> {
    let mut p = vec![1.0];
    for _ in 0..m {
        let mut q = vec![0.0; p.len() + 2];
        for (i, &v) in p.iter().enumerate() {
            q[i] += c0 * v;
            q[i + 1] += c1 * v;
            q[i + 2] += v;
        }
        p = q;
    }
    p
}

pub(crate) const LINE_PANELS: usize = 24;
pub(crate) const LINE_ORDER: usize = 16;

impl LineDistribution {
    /// Pushes radial atoms and density to the line. `weight_exponent` is `ρ`
    /// for the Abel transform and `0` for `R_b`; `Δ` becomes `d² − 1/4` or
    /// `d² − d` respectively.
    pub(crate) fn from_radial(
        mu: &RadialDistribution,
        weight_exponent: f64,
        b: f64,
    ) -> Result<Self> {
        let (c1, c0) = if weight_exponent == 0.0 {
            (-1.0, 0.0)
        } else {
            (0.0, -0.25)
        };
        let mut atoms = Vec::new();
        for a in mu.atoms() {
            for (order, c) in quadratic_power(c1, c0, a.power).into_iter().enumerate() {
                if c != 0.0 {
                    atoms.push(LineAtom {
                        coeff: a.coeff * c,
                        order: order as u32,
                        point: 0.0,
                    });
                }
            }
        }
        let density = match mu.density() {
            None => None,
            Some(p) => {
                let r = p.support();
                let rule = CompositeRule::new(-r, r, LINE_PANELS, LINE_ORDER);
                let tmp = LineDensity {
                    rule: rule.clone(),
                    values: Vec::new(),
                    profile: p.clone(),
                    weight_exponent,
                    b,
                };
                use rayon::prelude::*;
                let values = rule
                    .nodes
                    .par_iter()
                    .map(|&t| tmp.value_at(t))
                    .collect::<Result<Vec<f64>>>()?;
                Some(LineDensity { values, ..tmp })
            }
        };
        Ok(Self { atoms, density })
    }

    /// Support interval of the density together with the atom points.
    pub fn support(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for a in &self.atoms {
            lo = lo.min(a.point);
            hi = hi.max(a.point);
        }
        if let Some(d) = &self.density {
            for (t, v) in d.rule.nodes.iter().zip(&d.values) {
                if *v != 0.0 {
                    lo = lo.min(*t);
                    hi = hi.max(*t);
                }
            }
        }
        (lo, hi)
    }

    /// `T^*(λ) = T(e^{-iλt})`.
    pub fn fourier(&self, lambda: f64) -> C64 {
        let mut s: C64 = self
            .atoms
            .iter()
            .map(|a| {
                a.coeff
                    * C64::new(0.0, -lambda).powu(a.order)
                    * C64::from_polar(1.0, -lambda * a.point)
            })
            .sum();
        if let Some(d) = &self.density {
            s += d
                .rule
                .nodes
                .iter()
                .zip(&d.rule.weights)
                .zip(&d.values)
                .map(|((t, w), v)| C64::from_polar(w * v, -lambda * t))
                .sum::<C64>();
        }
        s
    }

    /// `⟨T, F⟩`.
    pub fn pair(&self, f: &dyn LineFunction) -> f64 {
        let mut s: f64 = self
            .atoms
            .iter()
            .map(|a| a.coeff.re * f.derivative(a.point, a.order as usize))
            .sum();
        if let Some(d) = &self.density {
            s += d
                .rule
                .nodes
                .iter()
                .zip(&d.rule.weights)
                .zip(&d.values)
                .map(|((t, w), v)| w * v * f.value(*t))
                .sum::<f64>();
        }
        s
    }

    /// `(F * T)(t) = T(F(t − ·))`.
    pub fn convolve_at(&self, f: &dyn LineFunction, t: f64) -> f64 {
        let mut s: f64 = self
            .atoms
            .iter()
            .map(|a| {
                let sign = if a.order % 2 == 1 { -1.0 } else { 1.0 };
                sign * a.coeff.re * f.derivative(t - a.point, a.order as usize)
            })
            .sum();
        if let Some(d) = &self.density {
            s += d
                .rule
                .nodes
                .iter()
                .zip(&d.rule.weights)
                .zip(&d.values)
                .map(|((u, w), v)| w * v * f.value(t - u))
                .sum::<f64>();
        }
        s
    }

    /// `(G * T)(t)` for `G` given by its value and first two derivatives.
    pub fn convolve_jet_at(&self, g: impl Fn(f64, usize) -> Result<f64>, t: f64) -> Result<f64> {
        let mut s = 0.0;
        for a in &self.atoms {
            let sign = if a.order % 2 == 1 { -1.0 } else { 1.0 };
            s += sign * a.coeff.re * g(t - a.point, a.order as usize)?;
        }
        if let Some(d) = &self.density {
            for ((u, w), v) in d.rule.nodes.iter().zip(&d.rule.weights).zip(&d.values) {
                s += w * v * g(t - u, 0)?;
            }
        }
        Ok(s)
    }

    /// `max |T(t) − T(−t)|` over the density nodes plus atom asymmetry.
    pub fn evenness_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.atoms {
            let sign = if a.order % 2 == 1 { -1.0 } else { 1.0 };
            let mirror = self
                .atoms
                .iter()
                .find(|b| b.order == a.order && (b.point + a.point).abs() < 1e-15)
                .map_or(C64::new(0.0, 0.0), |b| b.coeff);
            worst = worst.max((a.coeff - sign * mirror).norm());
        }
        if let Some(d) = &self.density {
            let n = d.values.len();
            for i in 0..n {
                worst = worst.max((d.values[i] - d.values[n - 1 - i]).abs());
            }
        }
        worst
    }
}
