//! Entire functions of exponential type: closed-form Fourier transforms of
//! atomic distributions and Paley-Wiener metadata.

use std::cmp::Ordering;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};

/// Anything that can be evaluated on `C^n`.
pub trait EntireFn: Send + Sync {
    fn dim(&self) -> usize;

    fn eval(&self, z: &[C64]) -> C64;

    fn eval_real(&self, x: &[f64]) -> C64 {
        let z: Vec<C64> = x.iter().map(|&v| C64::new(v, 0.0)).collect();
        self.eval(&z)
    }
}

impl<T: EntireFn + ?Sized> EntireFn for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, z: &[C64]) -> C64 {
        (**self).eval(z)
    }
    fn eval_real(&self, x: &[f64]) -> C64 {
        (**self).eval_real(x)
    }
}

impl<T: EntireFn + ?Sized> EntireFn for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, z: &[C64]) -> C64 {
        (**self).eval(z)
    }
    fn eval_real(&self, x: &[f64]) -> C64 {
        (**self).eval_real(x)
    }
}

/// Adapter turning a closure into an [`EntireFn`].
pub struct FnEvaluator<F> {
    dim: usize,
    f: F,
}

impl<F> FnEvaluator<F>
where
    F: Fn(&[C64]) -> C64 + Send + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> EntireFn for FnEvaluator<F>
where
    F: Fn(&[C64]) -> C64 + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, z: &[C64]) -> C64 {
        (self.f)(z)
    }
}

/// One term `coeff * poly(z) * exp(-i <anchor, z>)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpTerm {
    pub coeff: C64,
    pub poly: Polynomial,
    pub anchor: Vec<f64>,
}

impl ExpTerm {
    fn eval(&self, z: &[C64]) -> C64 {
        let phase: C64 = self.anchor.iter().zip(z).map(|(a, zi)| zi * *a).sum();
        self.coeff * self.poly.eval(z) * (-C64::i() * phase).exp()
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialPolynomial {
    dim: usize,
    terms: Vec<ExpTerm>,
}

impl ExponentialPolynomial {
    pub fn new(dim: usize, mut terms: Vec<ExpTerm>) -> Result<Self> {
        for t in &terms {
            if t.anchor.len() != dim || t.poly.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: t.anchor.len(),
                });
            }
            if t.anchor.iter().any(|a| !a.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "non-finite anchor {:?}",
                    t.anchor
                )));
            }
        }
        terms.sort_by(|a, b| {
            lex_cmp(&a.anchor, &b.anchor).then(a.poly.degree().cmp(&b.poly.degree()))
        });
        Ok(Self { dim, terms })
    }

    pub fn one(dim: usize) -> Self {
        Self {
            dim,
            terms: vec![ExpTerm {
                coeff: C64::new(1.0, 0.0),
                poly: Polynomial::one(dim),
                anchor: vec![0.0; dim],
            }],
        }
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    /// Exponential type: the largest anchor norm.
    pub fn type_radius(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| norm(&t.anchor))
            .fold(0.0, f64::max)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.poly.degree())
            .max()
            .unwrap_or(0)
    }

    /// Merges terms with bit-identical anchors and drops zero terms.
    pub fn canonicalize(self) -> Self {
        let dim = self.dim;
        let mut merged: Vec<ExpTerm> = Vec::new();
        for t in self.terms {
            let folded = t.poly.scale(t.coeff);
            if let Some(m) = merged.iter_mut().find(|m| m.anchor == t.anchor) {
                m.poly = m.poly.add(&folded);
            } else {
                merged.push(ExpTerm {
                    coeff: C64::new(1.0, 0.0),
                    poly: folded,
                    anchor: t.anchor,
                });
            }
        }
        merged.retain(|t| !t.poly.is_zero());
        Self::new(dim, merged).expect("dimensions already validated")
    }

    /// Pointwise product; corresponds to convolution of the underlying distributions.
    pub fn product(&self, other: &Self) -> Result<Self> {
        crate::error::check_dim(self.dim, other.dim)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(ExpTerm {
                    coeff: a.coeff * b.coeff,
                    poly: a.poly.mul(&b.poly),
                    anchor: a.anchor.iter().zip(&b.anchor).map(|(x, y)| x + y).collect(),
                });
            }
        }
        Ok(Self::new(self.dim, terms)?.canonicalize())
    }

    /// The zero function is written as one zero term so the dimension survives.
    pub fn to_json(&self) -> Result<String> {
        let mut doc: Vec<ExpTermJson> = self
            .terms
            .iter()
            .map(|t| ExpTermJson {
                coeff: t.coeff,
                poly: t.poly.monomials(),
                anchor: t.anchor.clone(),
            })
            .collect();
        if doc.is_empty() {
            doc.push(ExpTermJson {
                coeff: C64::new(0.0, 0.0),
                poly: Vec::new(),
                anchor: vec![0.0; self.dim],
            });
        }
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: Vec<ExpTermJson> = serde_json::from_str(s)?;
        Self::from_json_terms(doc)
    }

    pub fn from_json_terms(doc: Vec<ExpTermJson>) -> Result<Self> {
        let dim = doc
            .first()
            .map(|t| t.anchor.len())
            .ok_or_else(|| Error::InvalidInput("exponential polynomial has no terms".into()))?;
        let terms = doc
            .into_iter()
            .map(|t| {
                Ok(ExpTerm {
                    coeff: t.coeff,
                    poly: Polynomial::from_monomials(dim, &t.poly)?,
                    anchor: t.anchor,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, terms)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpTermJson {
    pub coeff: C64,
    pub poly: Vec<Monomial>,
    pub anchor: Vec<f64>,
}

impl EntireFn for ExponentialPolynomial {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, z: &[C64]) -> C64 {
        debug_assert_eq!(z.len(), self.dim);
        self.terms.iter().map(|t| t.eval(z)).sum()
    }
}

/// Euclidean norm.
pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn cnorm(z: &[C64]) -> f64 {
    z.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Constants of the estimate `|F(z)| <= C (1+|z|)^N exp(R |Im z|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaleyWienerFit {
    pub type_radius: f64,
    pub poly_degree: u32,
    pub constant: f64,
}

impl PaleyWienerFit {
    pub fn envelope(&self, z: &[C64]) -> f64 {
        let im: f64 = z.iter().map(|x| x.im * x.im).sum::<f64>().sqrt();
        self.constant
            * (1.0 + cnorm(z)).powi(self.poly_degree as i32)
            * (self.type_radius * im).exp()
    }

    /// Whether the estimate holds at `z` within relative tolerance 1e-9.
    pub fn holds_at(&self, f: &dyn EntireFn, z: &[C64]) -> bool {
        f.eval(z).norm() <= self.envelope(z) * (1.0 + 1e-9)
    }
}

/// Where to sample when fitting the Paley-Wiener constant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PwSampleSpec {
    /// Real grid covers `[-half_width, half_width]^n`.
    pub real_half_width: f64,
    pub real_points_per_axis: usize,
    /// Imaginary rays `x + i t d` are attached to every real grid point `x`.
    pub imag_directions: Vec<Vec<f64>>,
    pub imag_lengths: Vec<f64>,
}

impl PwSampleSpec {
    pub fn standard(dim: usize) -> Self {
        let mut dirs = Vec::new();
        for k in 0..dim {
            let mut d = vec![0.0; dim];
            d[k] = 1.0;
            dirs.push(d.clone());
            d[k] = -1.0;
            dirs.push(d);
        }
        Self {
            real_half_width: 10.0,
            real_points_per_axis: if dim == 1 { 81 } else { 21 },
            imag_directions: dirs,
            imag_lengths: vec![0.5, 1.0, 2.0, 4.0],
        }
    }

    pub fn samples(&self, dim: usize) -> Result<Vec<Vec<C64>>> {
        if self.real_points_per_axis == 0
            || self.imag_directions.is_empty()
            || self.imag_lengths.is_empty()
        {
            return Err(Error::InvalidInput(
                "sample set must contain a real grid and at least one imaginary ray".into(),
            ));
        }
        for d in &self.imag_directions {
            crate::error::check_dim(dim, d.len())?;
        }
        let m = self.real_points_per_axis;
        let axis: Vec<f64> = if m == 1 {
            vec![0.0]
        } else {
            (0..m)
                .map(|i| {
                    -self.real_half_width + 2.0 * self.real_half_width * i as f64 / (m - 1) as f64
                })
                .collect()
        };
        let total = m.pow(dim as u32);
        let mut out =
            Vec::with_capacity(total * (1 + self.imag_directions.len() * self.imag_lengths.len()));
        for flat in 0..total {
            let mut rem = flat;
            let mut x = vec![0.0; dim];
            for k in (0..dim).rev() {
                x[k] = axis[rem % m];
                rem /= m;
            }
            out.push(x.iter().map(|&v| C64::new(v, 0.0)).collect());
            for d in &self.imag_directions {
                let dn = norm(d).max(f64::MIN_POSITIVE);
                for &t in &self.imag_lengths {
                    out.push(
                        x.iter()
                            .zip(d)
                            .map(|(&xr, &di)| C64::new(xr, t * di / dn))
                            .collect(),
                    );
                }
            }
        }
        Ok(out)
    }
}

/// Fits `(R, N, C)`: `R` and `N` exactly from the terms, `C` as the sampled
/// maximum of `|F| / ((1+|z|)^N e^{R|Im z|})` with 10% headroom.
pub fn fit_paley_wiener(f: &ExponentialPolynomial, spec: &PwSampleSpec) -> Result<PaleyWienerFit> {
    let samples = spec.samples(f.dim())?;
    if samples.is_empty() {
        return Err(Error::InvalidInput("empty sample set".into()));
    }
    let r = f.type_radius();
    let n = f.max_degree();
    let unit = PaleyWienerFit {
        type_radius: r,
        poly_degree: n,
        constant: 1.0,
    };
    let worst = samples
        .iter()
        .map(|z| f.eval(z).norm() / unit.envelope(z))
        .fold(0.0, f64::max);
    Ok(PaleyWienerFit {
        type_radius: r,
        poly_degree: n,
        constant: (1.1 * worst).max(f64::MIN_POSITIVE),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::PointMassDistribution;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn delta_at_origin_is_one() {
        let f = PointMassDistribution::delta(vec![0.0, 0.0]).fourier_transform();
        let z = [C64::new(3.0, -1.5), C64::new(-0.2, 7.0)];
        assert_eq!(f.eval(&z), re(1.0));
    }

    #[test]
    fn shifted_delta_phase() {
        let f = PointMassDistribution::delta(vec![1.0, 0.0]).fourier_transform();
        let v = f.eval_real(&[std::f64::consts::PI, 0.0]);
        assert!((v - re(-1.0)).norm() < 1e-15);
    }

    #[test]
    fn laplacian_of_delta() {
        // delta''(phi) = phi''(0) applied to exp(-i<x, xi>) gives -(xi1^2 + xi2^2)
        let f = PointMassDistribution::laplacian_of_delta(2).fourier_transform();
        assert!((f.eval_real(&[1.0, 1.0]) - re(-2.0)).norm() < 1e-14);
        let xi = [0.3, -2.5];
        assert!((f.eval_real(&xi) - re(-(xi[0] * xi[0] + xi[1] * xi[1]))).norm() < 1e-13);
    }

    #[test]
    fn fit_constant_function() {
        let f = ExponentialPolynomial::one(1);
        let fit = fit_paley_wiener(&f, &PwSampleSpec::standard(1)).unwrap();
        assert_eq!(fit.type_radius, 0.0);
        assert_eq!(fit.poly_degree, 0);
        assert!((fit.constant - 1.1).abs() < 1e-12);
    }

    #[test]
    fn fit_shifted_delta_radius() {
        let f =
            PointMassDistribution::delta(vec![2.0f64.sqrt(), 2.0f64.sqrt()]).fourier_transform();
        let fit = fit_paley_wiener(&f, &PwSampleSpec::standard(2)).unwrap();
        assert!((fit.type_radius - 2.0).abs() < 1e-12);
        assert_eq!(fit.poly_degree, 0);
    }

    #[test]
    fn fit_laplacian_against_analytic_bound() {
        // |z1^2 + z2^2| <= |z|^2 <= (1+|z|)^2, so the fitted C stays below 1.1.
        let f = PointMassDistribution::laplacian_of_delta(2).fourier_transform();
        let spec = PwSampleSpec::standard(2);
        let fit = fit_paley_wiener(&f, &spec).unwrap();
        assert_eq!(fit.type_radius, 0.0);
        assert_eq!(fit.poly_degree, 2);
        assert!(fit.constant <= 1.1 + 1e-12);
        for z in spec.samples(2).unwrap() {
            assert!(fit.holds_at(&f, &z));
        }
    }

    #[test]
    fn empty_samples_rejected() {
        let mut spec = PwSampleSpec::standard(1);
        spec.imag_directions.clear();
        assert!(fit_paley_wiener(&ExponentialPolynomial::one(1), &spec).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = PointMassDistribution::laplacian_of_delta(2).fourier_transform();
        let g = ExponentialPolynomial::from_json(&f.to_json().unwrap()).unwrap();
        assert_eq!(f, g);
    }
}
