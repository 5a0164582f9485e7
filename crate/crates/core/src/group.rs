//! Finite subgroups of O(n) stored as explicit element lists.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::distributions::{GriddedDensity, PointMassDistribution};
use crate::entire_fn::EntireFn;
use crate::error::{check_dim, Error, Result};

pub type Matrix = Vec<Vec<f64>>;

pub const DEFAULT_ORDER_CAP: usize = 1024;
pub const DEFAULT_SEED: u64 = 0x5EED;
pub const ORTHOGONALITY_TOL: f64 = 1e-12;
pub const DUPLICATE_TOL: f64 = 1e-9;
const MAX_DRAWS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteOrthogonalGroup {
    dim: usize,
    elements: Vec<Matrix>,
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

pub fn apply(m: &Matrix, x: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn apply_c(m: &Matrix, z: &[C64]) -> Vec<C64> {
    m.iter()
        .map(|row| row.iter().zip(z).map(|(a, b)| b * a).sum())
        .collect()
}

fn max_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn orthogonality_defect(m: &Matrix) -> f64 {
    let mtm = mat_mul(&transpose(m), m);
    let id = identity(m.len());
    mtm.iter()
        .flatten()
        .zip(id.iter().flatten())
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn rotation(theta: f64) -> Matrix {
    let (s, c) = theta.sin_cos();
    vec![vec![c, -s], vec![s, c]]
}

impl FiniteOrthogonalGroup {
    pub fn generate(dim: usize, generators: &[Matrix]) -> Result<Self> {
        Self::generate_with_cap(dim, generators, DEFAULT_ORDER_CAP)
    }

    /// Closes the generator set under multiplication.
    pub fn generate_with_cap(dim: usize, generators: &[Matrix], cap: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        for (index, g) in generators.iter().enumerate() {
            if g.len() != dim || g.iter().any(|r| r.len() != dim) {
                return Err(Error::InvalidInput(format!(
                    "generator {index} is not {dim}x{dim}"
                )));
            }
            let defect = orthogonality_defect(g);
            if !(defect <= ORTHOGONALITY_TOL) {
                return Err(Error::NonOrthogonal { index, defect });
            }
        }
        let mut elements = vec![identity(dim)];
        let mut frontier = 0;
        while frontier < elements.len() {
            let current = elements[frontier].clone();
            frontier += 1;
            for g in generators {
                let p = mat_mul(g, &current);
                if !elements.iter().any(|e| max_diff(e, &p) <= DUPLICATE_TOL) {
                    if elements.len() == cap {
                        return Err(Error::OrderCapExceeded { cap });
                    }
                    elements.push(p);
                }
            }
        }
        Ok(Self { dim, elements })
    }

    pub fn trivial(dim: usize) -> Self {
        Self {
            dim,
            elements: vec![identity(dim)],
        }
    }

    /// All diagonal sign changes, order `2^n`.
    pub fn signs(dim: usize) -> Result<Self> {
        let gens: Vec<Matrix> = (0..dim)
            .map(|i| {
                let mut m = identity(dim);
                m[i][i] = -1.0;
                m
            })
            .collect();
        Self::generate(dim, &gens)
    }

    /// Symmetries of the regular m-gon in the plane, order `2m`.
    pub fn dihedral(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput(
                "dihedral order must be positive".into(),
            ));
        }
        let mirror = vec![vec![1.0, 0.0], vec![0.0, -1.0]];
        Self::generate(2, &[rotation(TAU / m as f64), mirror])
    }

    /// Built-in groups: `signs`, `dihedral:m`, `A2`, `B2`, `G2`, `trivial`.
    pub fn named(name: &str, dim: usize) -> Result<Self> {
        let planar = |g: Result<Self>| {
            if dim == 2 {
                g
            } else {
                Err(Error::InvalidInput(format!(
                    "group {name} acts on R^2, not R^{dim}"
                )))
            }
        };
        match name {
            "trivial" => Ok(Self::trivial(dim)),
            "signs" => Self::signs(dim),
            "A2" => planar(Self::dihedral(3)),
            "B2" => planar(Self::dihedral(4)),
            "G2" => planar(Self::dihedral(6)),
            _ => match name.strip_prefix("dihedral:") {
                Some(m) => {
                    let m: usize = m.parse().map_err(|_| {
                        Error::InvalidInput(format!("bad dihedral order in {name:?}"))
                    })?;
                    planar(Self::dihedral(m))
                }
                None => Err(Error::InvalidInput(format!("unknown group {name:?}"))),
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn orbit(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        for g in &self.elements {
            let y = apply(g, x);
            let dup = out.iter().any(|p| {
                p.iter()
                    .zip(&y)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
                    <= DUPLICATE_TOL
            });
            if !dup {
                out.push(y);
            }
        }
        out
    }

    /// Smallest `‖σx − x‖` over non-identity elements (infinite for the trivial group).
    pub fn stabilizer_gap(&self, x: &[f64]) -> f64 {
        self.elements[1..]
            .iter()
            .map(|g| {
                apply(g, x)
                    .iter()
                    .zip(x)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn generic_point(&self, scale: f64) -> Result<Vec<f64>> {
        self.generic_point_seeded(scale, DEFAULT_SEED)
    }

    /// A point of norm `scale` moved by every non-identity element by at
    /// least `1e-6 * scale`, found by seeded rejection sampling.
    pub fn generic_point_seeded(&self, scale: f64, seed: u64) -> Result<Vec<f64>> {
        if !(scale > 0.0) {
            return Err(Error::InvalidInput("scale must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..MAX_DRAWS {
            let v: Vec<f64> = (0..self.dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let r = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if !(1e-3..=1.0).contains(&r) {
                continue;
            }
            let x: Vec<f64> = v.iter().map(|a| a * scale / r).collect();
            if self.stabilizer_gap(&x) >= 1e-6 * scale {
                return Ok(x);
            }
        }
        Err(Error::NoGenericPoint { draws: MAX_DRAWS })
    }

    pub fn symmetrize_distribution(
        &self,
        s: &PointMassDistribution,
    ) -> Result<PointMassDistribution> {
        check_dim(self.dim, s.dim())?;
        let w = 1.0 / self.order() as f64;
        let mut acc = PointMassDistribution::new(self.dim, Vec::new())?;
        for g in &self.elements {
            acc = acc.add(&s.push_forward(g)?.scale(w.into()))?;
        }
        Ok(acc)
    }

    /// Average of `u(σx)` over the group. Signed permutations on a box that
    /// is symmetric about the origin permute samples exactly; other elements
    /// go through interpolation.
    pub fn symmetrize_density(&self, u: &GriddedDensity) -> Result<GriddedDensity> {
        check_dim(self.dim, u.dim())?;
        let w = 1.0 / self.order() as f64;
        let mut out = u.zeros_like();
        for g in &self.elements {
            let perm = lattice_permutation(g, u);
            for i in 0..u.len() {
                let v = match &perm {
                    Some(p) => u.samples()[p(i)],
                    None => u.interpolate(&apply(g, &u.coords(i))),
                };
                out.samples_mut()[i] += v * w;
            }
        }
        Ok(out)
    }

    /// Largest `|u(σx) − u(x)|` over the group and the grid, with the same
    /// exact-or-interpolated lookup as [`Self::symmetrize_density`].
    pub fn grid_asymmetry(&self, u: &GriddedDensity) -> Result<f64> {
        check_dim(self.dim, u.dim())?;
        let mut worst: f64 = 0.0;
        for g in &self.elements {
            let perm = lattice_permutation(g, u);
            for i in 0..u.len() {
                let v = match &perm {
                    Some(p) => u.samples()[p(i)],
                    None => u.interpolate(&apply(g, &u.coords(i))),
                };
                worst = worst.max((v - u.samples()[i]).norm());
            }
        }
        Ok(worst)
    }

    pub fn symmetrize_fn<F: EntireFn>(&self, f: F) -> Result<Symmetrized<F>> {
        check_dim(self.dim, f.dim())?;
        Ok(Symmetrized {
            group: self.clone(),
            inner: f,
        })
    }

    /// Largest `|f(σz) − f(z)|` over the group and the given points.
    pub fn invariance_defect(&self, f: &dyn EntireFn, points: &[Vec<C64>]) -> f64 {
        points
            .iter()
            .flat_map(|z| {
                let base = f.eval(z);
                self.elements
                    .iter()
                    .map(move |g| (f.eval(&apply_c(g, z)) - base).norm())
            })
            .fold(0.0, f64::max)
    }
}

/// For a signed permutation matrix acting on a grid whose box is the same
/// symmetric interval on every permuted axis, the induced index map.
fn lattice_permutation<'a>(
    g: &Matrix,
    u: &'a GriddedDensity,
) -> Option<impl Fn(usize) -> usize + 'a> {
    let n = g.len();
    let mut target = vec![(0usize, 1.0f64); n];
    for (i, row) in g.iter().enumerate() {
        let nz: Vec<usize> = (0..n).filter(|&j| row[j].abs() > DUPLICATE_TOL).collect();
        if nz.len() != 1 || (row[nz[0]].abs() - 1.0).abs() > DUPLICATE_TOL {
            return None;
        }
        target[i] = (nz[0], row[nz[0]].signum());
    }
    for (i, &(j, _)) in target.iter().enumerate() {
        let (lo, hi) = u.bounds()[i];
        if u.sizes()[i] != u.sizes()[j] || u.bounds()[j] != (lo, hi) || (lo + hi).abs() > 0.0 {
            return None;
        }
    }
    let sizes = u.sizes().to_vec();
    Some(move |flat: usize| {
        // (σx)_i = s_i x_{j_i}
        let idx = u.index_of(flat);
        let mut out = 0usize;
        for (i, &(j, s)) in target.iter().enumerate() {
            let k = if s > 0.0 {
                idx[j]
            } else {
                sizes[j] - 1 - idx[j]
            };
            out = out * sizes[i] + k;
        }
        out
    })
}

/// `z ↦ (1/|W|) Σ_σ f(σz)`.
pub struct Symmetrized<F> {
    group: FiniteOrthogonalGroup,
    inner: F,
}

impl<F: EntireFn> EntireFn for Symmetrized<F> {
    fn dim(&self) -> usize {
        self.group.dim
    }

    fn eval(&self, z: &[C64]) -> C64 {
        let s: C64 = self
            .group
            .elements
            .iter()
            .map(|g| self.inner.eval(&apply_c(g, z)))
            .sum();
        s / self.group.order() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_orders() {
        assert_eq!(FiniteOrthogonalGroup::signs(1).unwrap().order(), 2);
        assert_eq!(FiniteOrthogonalGroup::named("A2", 2).unwrap().order(), 6);
        assert_eq!(FiniteOrthogonalGroup::named("B2", 2).unwrap().order(), 8);
        assert_eq!(FiniteOrthogonalGroup::named("G2", 2).unwrap().order(), 12);
        assert_eq!(
            FiniteOrthogonalGroup::named("dihedral:5", 2)
                .unwrap()
                .order(),
            10
        );
        assert!(FiniteOrthogonalGroup::named("A2", 3).is_err());
        assert!(FiniteOrthogonalGroup::named("E8", 2).is_err());
    }

    #[test]
    fn rejects_non_orthogonal() {
        let g = vec![vec![2.0]];
        assert!(matches!(
            FiniteOrthogonalGroup::generate(1, &[g]),
            Err(Error::NonOrthogonal { index: 0, .. })
        ));
    }

    #[test]
    fn irrational_rotation_hits_cap() {
        let r = rotation(1.0);
        assert!(matches!(
            FiniteOrthogonalGroup::generate_with_cap(2, &[r], 50),
            Err(Error::OrderCapExceeded { cap: 50 })
        ));
    }

    #[test]
    fn trivial_group_generic_point_is_first_draw() {
        let g = FiniteOrthogonalGroup::trivial(3);
        let x = g.generic_point(2.0).unwrap();
        assert!((x.iter().map(|a| a * a).sum::<f64>().sqrt() - 2.0).abs() < 1e-12);
    }
}
