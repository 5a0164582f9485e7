use std::cmp::Ordering;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::hull::ConvexHull;
use crate::entire_fn::{ExpTerm, ExponentialPolynomial};
use crate::error::{check_dim, Error, Result};
use crate::poly::Polynomial;

/// One atom: the functional `φ ↦ coeff · (∂^deriv φ)(point)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atom {
    pub coeff: C64,
    pub deriv: Vec<u32>,
    pub point: Vec<f64>,
}

impl Atom {
    pub fn order(&self) -> u32 {
        self.deriv.iter().sum()
    }
}

/// Finite sum of derivatives of point masses on `R^n`.
///
/// Atoms are kept in canonical order (lexicographic on point, then on the
/// multi-index) with bit-identical `(point, deriv)` pairs merged, so sums over
/// atoms are reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PointMassJson", into = "PointMassJson")]
pub struct PointMassDistribution {
    dim: usize,
    atoms: Vec<Atom>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointMassJson {
    dimension: usize,
    atoms: Vec<Atom>,
}

impl TryFrom<PointMassJson> for PointMassDistribution {
    type Error = Error;
    fn try_from(j: PointMassJson) -> Result<Self> {
        Self::new(j.dimension, j.atoms)
    }
}

impl From<PointMassDistribution> for PointMassJson {
    fn from(d: PointMassDistribution) -> Self {
        PointMassJson {
            dimension: d.dim,
            atoms: d.atoms,
        }
    }
}

fn atom_cmp(a: &Atom, b: &Atom) -> Ordering {
    for (x, y) in a.point.iter().zip(&b.point) {
        match x.total_cmp(y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    a.deriv.cmp(&b.deriv)
}

impl PointMassDistribution {
    pub fn new(dim: usize, atoms: Vec<Atom>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        for a in &atoms {
            check_dim(dim, a.point.len())?;
            check_dim(dim, a.deriv.len())?;
            if a.point.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "non-finite atom point {:?}",
                    a.point
                )));
            }
        }
        Ok(Self::canonical(dim, atoms))
    }

    fn canonical(dim: usize, mut atoms: Vec<Atom>) -> Self {
        atoms.sort_by(atom_cmp);
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if last.point == a.point && last.deriv == a.deriv => {
                    last.coeff += a.coeff
                }
                _ => merged.push(a),
            }
        }
        merged.retain(|a| a.coeff != C64::new(0.0, 0.0));
        Self { dim, atoms: merged }
    }

    pub fn delta(point: Vec<f64>) -> Self {
        let dim = point.len();
        Self::canonical(
            dim,
            vec![Atom {
                coeff: C64::new(1.0, 0.0),
                deriv: vec![0; dim],
                point,
            }],
        )
    }

    pub fn derivative_of_delta(deriv: Vec<u32>, point: Vec<f64>) -> Self {
        let dim = point.len();
        assert_eq!(deriv.len(), dim);
        Self::canonical(
            dim,
            vec![Atom {
                coeff: C64::new(1.0, 0.0),
                deriv,
                point,
            }],
        )
    }

    /// `Δ δ_0` in dimension `dim`.
    pub fn laplacian_of_delta(dim: usize) -> Self {
        let atoms = (0..dim)
            .map(|k| {
                let mut d = vec![0; dim];
                d[k] = 2;
                Atom {
                    coeff: C64::new(1.0, 0.0),
                    deriv: d,
                    point: vec![0.0; dim],
                }
            })
            .collect();
        Self::canonical(dim, atoms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn scale(&self, c: C64) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                coeff: a.coeff * c,
                ..a.clone()
            })
            .collect();
        Self::canonical(self.dim, atoms)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let atoms = self.atoms.iter().chain(&other.atoms).cloned().collect();
        Ok(Self::canonical(self.dim, atoms))
    }

    /// Fourier transform `ζ ↦ S(e^{-i<x,ζ>})`; an atom contributes
    /// `coeff · (-iζ)^deriv · e^{-i<point,ζ>}`.
    pub fn fourier_transform(&self) -> ExponentialPolynomial {
        let terms = self
            .atoms
            .iter()
            .map(|a| {
                let c = (-C64::i()).powu(a.order());
                ExpTerm {
                    coeff: a.coeff,
                    poly: Polynomial::monomial(a.deriv.clone(), c),
                    anchor: a.point.clone(),
                }
            })
            .collect();
        ExponentialPolynomial::new(self.dim, terms)
            .expect("atoms validated")
            .canonicalize()
    }

    /// Pairwise atom products: coefficients multiply, multi-indices and points add.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut atoms = Vec::with_capacity(self.atoms.len() * other.atoms.len());
        for a in &self.atoms {
            for b in &other.atoms {
                atoms.push(Atom {
                    coeff: a.coeff * b.coeff,
                    deriv: a.deriv.iter().zip(&b.deriv).map(|(x, y)| x + y).collect(),
                    point: a.point.iter().zip(&b.point).map(|(x, y)| x + y).collect(),
                });
            }
        }
        Ok(Self::canonical(self.dim, atoms))
    }

    /// `Š(φ) = S(φ(-·))`.
    pub fn reflect(&self) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                coeff: if a.order() % 2 == 1 {
                    -a.coeff
                } else {
                    a.coeff
                },
                deriv: a.deriv.clone(),
                point: a.point.iter().map(|x| -x).collect(),
            })
            .collect();
        Self::canonical(self.dim, atoms)
    }

    /// Push-forward under an orthogonal (or any linear) map: `(M·S)(φ) = S(φ∘M)`.
    ///
    /// Derivatives transform by the chain rule, so one atom may expand into
    /// several.
    pub fn push_forward(&self, m: &[Vec<f64>]) -> Result<Self> {
        check_dim(self.dim, m.len())?;
        let n = self.dim;
        let mt: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m[j][i]).collect()).collect();
        let mut atoms = Vec::new();
        for a in &self.atoms {
            let point: Vec<f64> = (0..n)
                .map(|i| (0..n).map(|j| m[i][j] * a.point[j]).sum())
                .collect();
            let symbol = Polynomial::monomial(a.deriv.clone(), a.coeff).compose_linear(&mt);
            for (e, c) in symbol.terms() {
                atoms.push(Atom {
                    coeff: *c,
                    deriv: e.clone(),
                    point: point.clone(),
                });
            }
        }
        Ok(Self::canonical(n, atoms))
    }

    pub fn support_hull(&self) -> Result<ConvexHull> {
        if self.atoms.is_empty() {
            return Err(Error::InvalidInput(
                "support hull of the zero distribution".into(),
            ));
        }
        let pts: Vec<Vec<f64>> = self.atoms.iter().map(|a| a.point.clone()).collect();
        ConvexHull::of_points(self.dim, &pts)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
