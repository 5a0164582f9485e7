//! JSON specifications of Fourier-side symbols and the operators behind them.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::distributions::PointMassDistribution;
use crate::entire_fn::{EntireFn, ExpTermJson, ExponentialPolynomial};
use crate::error::{Error, Result};
use crate::rank_one::{abel_transform, spherical_ft, LineDistribution, RadialDistribution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    Euclidean,
    Hyperbolic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolSpec {
    Constant {
        dimension: usize,
        value: C64,
    },
    /// `−ζ·ζ − 1/4`; with dimension 1 this is the hyperbolic Laplacian symbol.
    LaplacianSymbol {
        dimension: usize,
    },
    /// `exp(−√(1 + ζ·ζ))`, principal branch.
    SuperDecaying {
        dimension: usize,
    },
    ExpPoly {
        terms: Vec<ExpTermJson>,
    },
    PointMass {
        distribution: PointMassDistribution,
    },
    Radial {
        distribution: RadialDistribution,
    },
}

/// A convolution operator, or a bare symbol standing in for one.
#[derive(Clone)]
pub enum Operator {
    Euclidean(PointMassDistribution),
    Hyperbolic(RadialDistribution),
    Symbol {
        symbol: Arc<dyn EntireFn>,
        geometry: Geometry,
    },
}

impl std::fmt::Debug for Operator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Euclidean(d) => f.debug_tuple("Euclidean").field(d).finish(),
            Self::Hyperbolic(d) => f.debug_tuple("Hyperbolic").field(d).finish(),
            Self::Symbol { geometry, symbol } => f
                .debug_struct("Symbol")
                .field("geometry", geometry)
                .field("dim", &symbol.dim())
                .finish(),
        }
    }
}

fn check_dimension(dimension: usize) -> Result<()> {
    if (1..=3).contains(&dimension) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "dimension must be 1, 2 or 3, got {dimension}"
        )))
    }
}

struct Closure<F>(usize, F);

impl<F: Fn(&[C64]) -> C64 + Send + Sync> EntireFn for Closure<F> {
    fn dim(&self) -> usize {
        self.0
    }
    fn eval(&self, z: &[C64]) -> C64 {
        (self.1)(z)
    }
}

impl SymbolSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn operator(&self) -> Result<Operator> {
        let symbol: Arc<dyn EntireFn> = match self {
            Self::PointMass { distribution } => {
                return Ok(Operator::Euclidean(distribution.clone()))
            }
            Self::Radial { distribution } => return Ok(Operator::Hyperbolic(distribution.clone())),
            Self::Constant { dimension, value } => {
                check_dimension(*dimension)?;
                let v = *value;
                Arc::new(Closure(*dimension, move |_: &[C64]| v))
            }
            Self::LaplacianSymbol { dimension } => {
                check_dimension(*dimension)?;
                Arc::new(Closure(*dimension, |z: &[C64]| {
                    -z.iter().map(|c| c * c).sum::<C64>() - 0.25
                }))
            }
            Self::SuperDecaying { dimension } => {
                check_dimension(*dimension)?;
                Arc::new(Closure(*dimension, |z: &[C64]| {
                    (-(z.iter().map(|c| c * c).sum::<C64>() + 1.0).sqrt()).exp()
                }))
            }
            Self::ExpPoly { terms } => {
                Arc::new(ExponentialPolynomial::from_json_terms(terms.clone())?)
            }
        };
        let geometry = Geometry::Euclidean;
        Ok(Operator::Symbol { symbol, geometry })
    }
}

/// `λ ↦ μ̃(λ)` for a radial distribution. Real `λ` go through the Abel
/// transform; complex `λ` through direct quadrature (NaN outside the strip).
pub struct SphericalSymbol {
    mu: RadialDistribution,
    abel: LineDistribution,
}

impl SphericalSymbol {
    pub fn new(mu: RadialDistribution) -> Result<Self> {
        let abel = abel_transform(&mu)?;
        Ok(Self { mu, abel })
    }
}

impl EntireFn for SphericalSymbol {
    fn dim(&self) -> usize {
        1
    }
    fn eval(&self, z: &[C64]) -> C64 {
        let l = z[0];
        if self.mu.density().is_none() {
            self.mu.atomic_symbol(l)
        } else if l.im == 0.0 {
            self.abel.fourier(l.re)
        } else {
            spherical_ft(&self.mu, l).unwrap_or(C64::new(f64::NAN, f64::NAN))
        }
    }
}

impl Operator {
    pub fn geometry(&self) -> Geometry {
        match self {
            Self::Euclidean(_) => Geometry::Euclidean,
            Self::Hyperbolic(_) => Geometry::Hyperbolic,
            Self::Symbol { geometry, .. } => *geometry,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Euclidean(d) => d.dim(),
            Self::Hyperbolic(_) => 1,
            Self::Symbol { symbol, .. } => symbol.dim(),
        }
    }

    /// The Fourier-side symbol: `FT(μ)` on `R^n`, `μ̃` on the disk.
    pub fn symbol(&self) -> Result<Arc<dyn EntireFn>> {
        Ok(match self {
            Self::Euclidean(d) => Arc::new(d.fourier_transform()),
            Self::Hyperbolic(mu) => Arc::new(SphericalSymbol::new(mu.clone())?),
            Self::Symbol { symbol, .. } => symbol.clone(),
        })
    }
}
