//! Regular-grid samples of compactly supported functions on a box.
//!
//! Samples sit at cell centres `lo + (i + 1/2) h` with `h = (hi - lo) / N`,
//! so boxes symmetric about the origin give grids that are closed under
//! negation (and under coordinate swaps when the box is a cube).

use std::io::{Read, Write};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use super::point_mass::PointMassDistribution;
use crate::error::{check_dim, Error, Result};

/// Relative level below which samples count as outside the support.
pub const SUPPORT_TOL: f64 = 1e-12;

const INTERP_POINTS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct GriddedDensity {
    sizes: Vec<usize>,
    bounds: Vec<(f64, f64)>,
    samples: Vec<C64>,
}

impl GriddedDensity {
    pub fn new(sizes: Vec<usize>, bounds: Vec<(f64, f64)>, samples: Vec<C64>) -> Result<Self> {
        if sizes.is_empty() || sizes.len() != bounds.len() {
            return Err(Error::InvalidInput(
                "sizes and bounds must be non-empty and agree".into(),
            ));
        }
        for (&n, &(lo, hi)) in sizes.iter().zip(&bounds) {
            if !n.is_power_of_two() || n < 8 {
                return Err(Error::InvalidInput(format!(
                    "axis size {n} is not a power of two >= 8"
                )));
            }
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidInput(format!("bad axis bounds ({lo}, {hi})")));
            }
        }
        let total: usize = sizes.iter().product();
        if samples.len() != total {
            return Err(Error::InvalidInput(format!(
                "expected {total} samples, got {}",
                samples.len()
            )));
        }
        Ok(Self {
            sizes,
            bounds,
            samples,
        })
    }

    pub fn from_fn<F>(sizes: Vec<usize>, bounds: Vec<(f64, f64)>, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> C64 + Sync,
    {
        let probe = Self::new(
            sizes.clone(),
            bounds.clone(),
            vec![C64::new(0.0, 0.0); sizes.iter().product()],
        )?;
        let samples = (0..probe.len())
            .into_par_iter()
            .map(|i| f(&probe.coords(i)))
            .collect();
        Self::new(sizes, bounds, samples)
    }

    pub fn zeros_like(&self) -> Self {
        Self {
            samples: vec![C64::new(0.0, 0.0); self.samples.len()],
            ..self.clone()
        }
    }

    pub fn dim(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [C64] {
        &mut self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        let (lo, hi) = self.bounds[axis];
        (hi - lo) / self.sizes[axis] as f64
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|k| self.spacing(k)).product()
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dim()];
        for k in (0..self.dim().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.sizes[k + 1];
        }
        s
    }

    pub fn index_of(&self, flat: usize) -> Vec<usize> {
        let mut rem = flat;
        let mut idx = vec![0; self.dim()];
        for k in (0..self.dim()).rev() {
            idx[k] = rem % self.sizes[k];
            rem /= self.sizes[k];
        }
        idx
    }

    pub fn coords(&self, flat: usize) -> Vec<f64> {
        self.index_of(flat)
            .iter()
            .enumerate()
            .map(|(k, &i)| self.bounds[k].0 + (i as f64 + 0.5) * self.spacing(k))
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus on the outermost layer of cells.
    pub fn boundary_max(&self) -> f64 {
        (0..self.len())
            .filter(|&i| {
                self.index_of(i)
                    .iter()
                    .zip(&self.sizes)
                    .any(|(&j, &n)| j == 0 || j + 1 == n)
            })
            .map(|i| self.samples[i].norm())
            .fold(0.0, f64::max)
    }

    /// Trapezoid (cell-centre) integral of `|u|`.
    pub fn l1_norm(&self) -> f64 {
        self.samples.iter().map(|v| v.norm()).sum::<f64>() * self.cell_volume()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.samples.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.cell_volume()).sqrt()
    }

    /// Axis-aligned bounding box of the cells above `SUPPORT_TOL * max|u|`,
    /// or `None` for the zero function.
    pub fn support_box(&self) -> Option<Vec<(f64, f64)>> {
        let thresh = SUPPORT_TOL * self.max_abs();
        if self.max_abs() == 0.0 {
            return None;
        }
        let n = self.dim();
        let mut lo = vec![usize::MAX; n];
        let mut hi = vec![0usize; n];
        for (i, v) in self.samples.iter().enumerate() {
            if v.norm() > thresh {
                for (k, &j) in self.index_of(i).iter().enumerate() {
                    lo[k] = lo[k].min(j);
                    hi[k] = hi[k].max(j);
                }
            }
        }
        Some(
            (0..n)
                .map(|k| {
                    let h = self.spacing(k);
                    let b = self.bounds[k].0;
                    (b + lo[k] as f64 * h, b + (hi[k] + 1) as f64 * h)
                })
                .collect(),
        )
    }

    /// Value at an arbitrary point by tensor-product Lagrange interpolation
    /// (6 nodes per axis); the function is taken to vanish outside the box.
    pub fn interpolate(&self, x: &[f64]) -> C64 {
        let n = self.dim();
        let mut idx0 = vec![0isize; n];
        let mut w = vec![[0.0f64; INTERP_POINTS]; n];
        for k in 0..n {
            let s = (x[k] - self.bounds[k].0) / self.spacing(k) - 0.5;
            let base = s.floor() as isize - (INTERP_POINTS as isize / 2 - 1);
            idx0[k] = base;
            for (i, wi) in w[k].iter_mut().enumerate() {
                let xi = (base + i as isize) as f64;
                let mut l = 1.0;
                for j in 0..INTERP_POINTS {
                    if j != i {
                        let xj = (base + j as isize) as f64;
                        l *= (s - xj) / (xi - xj);
                    }
                }
                *wi = l;
            }
        }
        let strides = self.strides();
        let combos = INTERP_POINTS.pow(n as u32);
        let mut acc = C64::new(0.0, 0.0);
        'outer: for c in 0..combos {
            let mut rem = c;
            let mut flat = 0usize;
            let mut weight = 1.0;
            for k in (0..n).rev() {
                let i = rem % INTERP_POINTS;
                rem /= INTERP_POINTS;
                let j = idx0[k] + i as isize;
                if j < 0 || j >= self.sizes[k] as isize {
                    continue 'outer;
                }
                flat += j as usize * strides[k];
                weight *= w[k][i];
            }
            if weight != 0.0 {
                acc += self.samples[flat] * weight;
            }
        }
        acc
    }

    /// Partial derivative `∂^alpha` by fourth-order central differences,
    /// with zero extension outside the box.
    pub fn derivative(&self, alpha: &[u32]) -> Result<Self> {
        check_dim(self.dim(), alpha.len())?;
        let mut out = self.clone();
        for (axis, &order) in alpha.iter().enumerate() {
            for _ in 0..order / 2 {
                out = out.axis_stencil(axis, 2);
            }
            if order % 2 == 1 {
                out = out.axis_stencil(axis, 1);
            }
        }
        Ok(out)
    }

    fn axis_stencil(&self, axis: usize, order: u32) -> Self {
        let h = self.spacing(axis);
        let (coeffs, scale): ([f64; 5], f64) = match order {
            1 => ([1.0, -8.0, 0.0, 8.0, -1.0], 1.0 / (12.0 * h)),
            _ => ([-1.0, 16.0, -30.0, 16.0, -1.0], 1.0 / (12.0 * h * h)),
        };
        let stride = self.strides()[axis];
        let n = self.sizes[axis] as isize;
        let samples = (0..self.len())
            .into_par_iter()
            .map(|flat| {
                let j = self.index_of(flat)[axis] as isize;
                let mut acc = C64::new(0.0, 0.0);
                for (o, c) in (-2isize..=2).zip(coeffs) {
                    let jj = j + o;
                    if c != 0.0 && jj >= 0 && jj < n {
                        let f = (flat as isize + o * stride as isize) as usize;
                        acc += self.samples[f] * c;
                    }
                }
                acc * scale
            })
            .collect();
        Self {
            samples,
            ..self.clone()
        }
    }

    /// `f * T` for atomic `T`. With atoms acting as `φ ↦ c ∂^α φ(p)`, each atom
    /// contributes `c (-1)^{|α|} (∂^α f)(x - p)`, matching `FT(f*T) = FT(f) FT(T)`.
    pub fn convolve_point_masses(&self, t: &PointMassDistribution) -> Result<Self> {
        check_dim(self.dim(), t.dim())?;
        let n = self.dim();
        let mut out = self.zeros_like();
        let Some(support) = self.support_box() else {
            return Ok(out);
        };
        for atom in t.atoms() {
            let margin: Vec<f64> = (0..n)
                .map(|k| {
                    (2 * atom.deriv[k] as usize + INTERP_POINTS / 2 + 1) as f64 * self.spacing(k)
                })
                .collect();
            let needed: Vec<(f64, f64)> = (0..n)
                .map(|k| {
                    (
                        support[k].0 + atom.point[k] - margin[k],
                        support[k].1 + atom.point[k] + margin[k],
                    )
                })
                .collect();
            let fits = needed
                .iter()
                .zip(&self.bounds)
                .all(|(&(a, b), &(lo, hi))| a >= lo && b <= hi);
            if !fits {
                let needed = needed
                    .iter()
                    .zip(&self.bounds)
                    .map(|(&(a, b), &(lo, hi))| (a.min(lo), b.max(hi)))
                    .collect();
                return Err(Error::GridTooSmall { needed });
            }
            let d = self.derivative(&atom.deriv)?;
            let c = if atom.order() % 2 == 1 {
                -atom.coeff
            } else {
                atom.coeff
            };
            let shifted: Vec<C64> = (0..self.len())
                .into_par_iter()
                .map(|i| {
                    let x: Vec<f64> = self
                        .coords(i)
                        .iter()
                        .zip(&atom.point)
                        .map(|(a, p)| a - p)
                        .collect();
                    d.interpolate(&x) * c
                })
                .collect();
            for (o, s) in out.samples.iter_mut().zip(shifted) {
                *o += s;
            }
        }
        Ok(out)
    }

    /// Angular frequencies of each axis in FFT order.
    pub fn frequencies(&self, axis: usize) -> Vec<f64> {
        let n = self.sizes[axis];
        let dk = std::f64::consts::TAU / (n as f64 * self.spacing(axis));
        (0..n)
            .map(|k| {
                let kk = if k < n / 2 {
                    k as f64
                } else {
                    k as f64 - n as f64
                };
                kk * dk
            })
            .collect()
    }

    pub(crate) fn dft(&self, inverse: bool) -> Vec<C64> {
        let mut data = self.samples.clone();
        fft_nd(&mut data, &self.sizes, inverse);
        data
    }

    /// Samples of the continuous transform `u*(ξ) = ∫ u(x) e^{-i<x,ξ>} dx` on
    /// the FFT frequency grid (FFT order, row-major).
    pub fn fourier_samples(&self) -> Vec<C64> {
        let spec = self.dft(false);
        let vol = self.cell_volume();
        let freqs: Vec<Vec<f64>> = (0..self.dim()).map(|k| self.frequencies(k)).collect();
        let x0: Vec<f64> = (0..self.dim())
            .map(|k| self.bounds[k].0 + 0.5 * self.spacing(k))
            .collect();
        spec.iter()
            .enumerate()
            .map(|(i, v)| {
                let idx = self.index_of(i);
                let phase: f64 = idx
                    .iter()
                    .enumerate()
                    .map(|(k, &j)| x0[k] * freqs[k][j])
                    .sum();
                v * vol * C64::from_polar(1.0, -phase)
            })
            .collect()
    }

    /// Applies a Fourier multiplier `m(ξ)` spectrally.
    pub fn apply_multiplier<M: Fn(&[f64]) -> C64>(&self, m: M) -> Self {
        let mut spec = self.dft(false);
        let freqs: Vec<Vec<f64>> = (0..self.dim()).map(|k| self.frequencies(k)).collect();
        for (i, v) in spec.iter_mut().enumerate() {
            let xi: Vec<f64> = self
                .index_of(i)
                .iter()
                .enumerate()
                .map(|(k, &j)| freqs[k][j])
                .collect();
            *v *= m(&xi);
        }
        fft_nd(&mut spec, &self.sizes, true);
        let norm = self.len() as f64;
        Self {
            samples: spec.into_iter().map(|v| v / norm).collect(),
            ..self.clone()
        }
    }

    /// Byte layout (all little-endian): `u64 n`, `n × u64` axis sizes,
    /// `n × (f64 lo, f64 hi)` box bounds, then the samples in row-major order
    /// (last axis fastest) as `(f64 re, f64 im)` pairs.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&(self.dim() as u64).to_le_bytes())?;
        for &s in &self.sizes {
            w.write_all(&(s as u64).to_le_bytes())?;
        }
        for &(lo, hi) in &self.bounds {
            w.write_all(&lo.to_le_bytes())?;
            w.write_all(&hi.to_le_bytes())?;
        }
        for v in &self.samples {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut b8 = [0u8; 8];
        let mut read_u64 = |r: &mut R| -> Result<u64> {
            r.read_exact(&mut b8)?;
            Ok(u64::from_le_bytes(b8))
        };
        let n = read_u64(&mut r)? as usize;
        if n == 0 || n > 8 {
            return Err(Error::InvalidInput(format!(
                "implausible grid dimension {n}"
            )));
        }
        let mut sizes = Vec::with_capacity(n);
        for _ in 0..n {
            sizes.push(read_u64(&mut r)? as usize);
        }
        let mut bounds = Vec::with_capacity(n);
        for _ in 0..n {
            let lo = f64::from_bits(read_u64(&mut r)?);
            let hi = f64::from_bits(read_u64(&mut r)?);
            bounds.push((lo, hi));
        }
        let total: usize = sizes.iter().product();
        let mut samples = Vec::with_capacity(total);
        for _ in 0..total {
            let re = f64::from_bits(read_u64(&mut r)?);
            let im = f64::from_bits(read_u64(&mut r)?);
            samples.push(C64::new(re, im));
        }
        Self::new(sizes, bounds, samples)
    }
}

pub(crate) fn fft_nd(data: &mut [C64], sizes: &[usize], inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let n = sizes.len();
    let total: usize = sizes.iter().product();
    for axis in 0..n {
        let len = sizes[axis];
        let stride: usize = sizes[axis + 1..].iter().product();
        let fft = if inverse {
            planner.plan_fft_inverse(len)
        } else {
            planner.plan_fft_forward(len)
        };
        let mut line = vec![C64::new(0.0, 0.0); len];
        let outer = total / (len * stride);
        for o in 0..outer {
            for s in 0..stride {
                let base = o * len * stride + s;
                for (j, l) in line.iter_mut().enumerate() {
                    *l = data[base + j * stride];
                }
                fft.process(&mut line);
                for (j, l) in line.iter().enumerate() {
                    data[base + j * stride] = *l;
                }
            }
        }
    }
}
