//! Multivariate polynomials with complex coefficients.
//!
//! Used both as the polynomial factor of exponential-polynomial terms and as
//! the symbol of a constant-coefficient differential operator sitting on an
//! atom of a point-mass distribution.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub coeff: C64,
}

/// Sparse polynomial, monomials keyed by exponent vector (lexicographic order).
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Vec<u32>, C64>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: C64) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, C64::new(1.0, 0.0))
    }

    pub fn monomial(exponents: Vec<u32>, c: C64) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    pub fn from_monomials(dim: usize, monomials: &[Monomial]) -> Result<Self> {
        let mut p = Self::zero(dim);
        for m in monomials {
            if m.exponents.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "monomial exponents {:?} do not match dimension {dim}",
                    m.exponents
                )));
            }
            p.add_term(m.exponents.clone(), m.coeff);
        }
        Ok(p)
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        self.terms
            .iter()
            .map(|(e, c)| Monomial {
                exponents: e.clone(),
                coeff: *c,
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C64)> {
        self.terms.iter()
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, exponents: Vec<u32>, c: C64) {
        if c == C64::new(0.0, 0.0) {
            return;
        }
        let slot = self.terms.entry(exponents).or_insert(C64::new(0.0, 0.0));
        *slot += c;
        if *slot == C64::new(0.0, 0.0) {
            // exact cancellation only
            self.terms.retain(|_, v| *v != C64::new(0.0, 0.0));
        }
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        debug_assert_eq!(z.len(), self.dim);
        let mut acc = C64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut m = *c;
            for (zi, &ei) in z.iter().zip(e) {
                if ei > 0 {
                    m *= zi.powu(ei);
                }
            }
            acc += m;
        }
        acc
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut p = Self::zero(self.dim);
        for (e, v) in &self.terms {
            p.add_term(e.clone(), v * c);
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let mut p = self.clone();
        for (e, v) in &other.terms {
            p.add_term(e.clone(), *v);
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let mut p = Self::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                p.add_term(e, ca * cb);
            }
        }
        p
    }

    /// The polynomial `z ↦ p(M z)` for a real square matrix `M` (rows).
    pub fn compose_linear(&self, m: &[Vec<f64>]) -> Self {
        let n = self.dim;
        let forms: Vec<Polynomial> = (0..n)
            .map(|i| {
                let mut f = Polynomial::zero(n);
                for j in 0..n {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    f.add_term(e, C64::new(m[i][j], 0.0));
                }
                f
            })
            .collect();
        let mut out = Polynomial::zero(n);
        for (e, c) in &self.terms {
            let mut prod = Polynomial::constant(n, *c);
            for (i, &ei) in e.iter().enumerate() {
                for _ in 0..ei {
                    prod = prod.mul(&forms[i]);
                }
            }
            out = out.add(&prod);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn product_and_degree() {
        // (z1 + z2)(z1 - z2) = z1^2 - z2^2
        let a =
            Polynomial::monomial(vec![1, 0], c(1.0)).add(&Polynomial::monomial(vec![0, 1], c(1.0)));
        let b = Polynomial::monomial(vec![1, 0], c(1.0))
            .add(&Polynomial::monomial(vec![0, 1], c(-1.0)));
        let p = a.mul(&b);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.monomials().len(), 2);
        let z = [C64::new(2.0, 1.0), C64::new(-0.5, 3.0)];
        let direct = z[0] * z[0] - z[1] * z[1];
        assert!((p.eval(&z) - direct).norm() < 1e-14);
    }

    #[test]
    fn linear_composition_matches_pointwise() {
        let p = Polynomial::monomial(vec![2, 1], c(1.5))
            .add(&Polynomial::monomial(vec![0, 3], c(-2.0)));
        let (s, co) = (0.3f64.sin(), 0.3f64.cos());
        let m = vec![vec![co, -s], vec![s, co]];
        let q = p.compose_linear(&m);
        let z = [C64::new(0.7, -0.2), C64::new(1.1, 0.4)];
        let mz = [
            z[0] * m[0][0] + z[1] * m[0][1],
            z[0] * m[1][0] + z[1] * m[1][1],
        ];
        assert!((q.eval(&z) - p.eval(&mz)).norm() < 1e-12);
    }
}
