//! The sinc-power witness family `h_j`, `H_j`, `F_j^σ`, `F_j` and machine
//! checks of its properties.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::entire_fn::{cnorm, norm, EntireFn};
use crate::error::{check_dim, Error, Result};
use crate::group::{apply, apply_c, transpose, FiniteOrthogonalGroup, Matrix, DEFAULT_SEED};
use crate::search::BallSearch;
use crate::slow_decrease::{
    certify_violation, find_violation_sequence, RadiusSchedule, ViolationSequence,
};

const TAYLOR_SWITCH: f64 = 1e-4;

fn sinc_c(w: C64) -> C64 {
    if w.norm() < TAYLOR_SWITCH {
        let w2 = w * w;
        1.0 - w2 / 6.0 + w2 * w2 / 120.0
    } else {
        w.sin() / w
    }
}

fn sinc(w: f64) -> f64 {
    if w.abs() < TAYLOR_SWITCH {
        let w2 = w * w;
        1.0 - w2 / 6.0 + w2 * w2 / 120.0
    } else {
        w.sin() / w
    }
}

/// `h_j(z) = (sin(πz/j) / (πz/j))^{2j}`.
pub fn eval_h(j: u32, z: C64) -> C64 {
    assert!(j >= 1, "h_j needs j >= 1");
    let s = sinc_c(z * (PI / j as f64));
    if s == C64::new(0.0, 0.0) {
        return s;
    }
    (s.ln() * (2.0 * j as f64)).exp()
}

pub fn eval_h_real(j: u32, x: f64) -> f64 {
    assert!(j >= 1, "h_j needs j >= 1");
    sinc(PI * x / j as f64).powi(2 * j as i32)
}

/// `ln |h_j(z)|`, `-inf` at zeros.
pub fn ln_abs_h(j: u32, z: C64) -> f64 {
    2.0 * j as f64 * sinc_c(z * (PI / j as f64)).norm().ln()
}

pub fn eval_big_h(j: u32, z: &[C64]) -> C64 {
    z.iter().map(|&c| eval_h(j, c)).product()
}

pub fn eval_big_h_real(j: u32, x: &[f64]) -> f64 {
    x.iter().map(|&c| eval_h_real(j, c)).product()
}

pub fn ln_abs_big_h(j: u32, z: &[C64]) -> f64 {
    z.iter().map(|&c| ln_abs_h(j, c)).sum()
}

/// `k = ⌊2j log(2+‖ξ_j‖)⌋`.
pub fn k_index(j: u32, xi_norm: f64) -> u32 {
    (2.0 * j as f64 * (2.0 + xi_norm).ln()).floor() as u32
}

/// `F_j^σ` and `F_j` built on a violation sequence.
#[derive(Debug, Clone)]
pub struct WitnessFamily {
    group: FiniteOrthogonalGroup,
    inverses: Vec<Matrix>,
    sequence: ViolationSequence,
}

impl WitnessFamily {
    pub fn new(group: FiniteOrthogonalGroup, sequence: ViolationSequence) -> Result<Self> {
        if !sequence.is_complete() {
            return Err(Error::InvalidInput(match sequence.failed_at {
                Some(j) => format!(
                    "no violation point found for j = {j}; the symbol shows no violation sequence"
                ),
                None => "empty violation sequence".into(),
            }));
        }
        for p in &sequence.points {
            check_dim(group.dim(), p.xi.len())?;
        }
        let inverses = group.elements().iter().map(transpose).collect();
        Ok(Self {
            group,
            inverses,
            sequence,
        })
    }

    /// Searches a violation sequence of `mu_hat` and builds the family on it.
    pub fn from_symbol(
        mu_hat: &dyn EntireFn,
        group: FiniteOrthogonalGroup,
        j_max: u32,
        schedule: RadiusSchedule,
        ball: BallSearch,
    ) -> Result<Self> {
        check_dim(group.dim(), mu_hat.dim())?;
        let seq = find_violation_sequence(mu_hat, j_max, schedule, ball)?;
        Self::new(group, seq)
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    pub fn group(&self) -> &FiniteOrthogonalGroup {
        &self.group
    }

    pub fn sequence(&self) -> &ViolationSequence {
        &self.sequence
    }

    pub fn j_max(&self) -> u32 {
        self.sequence.points.len() as u32
    }

    pub fn xi(&self, j: u32) -> &[f64] {
        &self.sequence.points[j as usize - 1].xi
    }

    pub fn k(&self, j: u32) -> u32 {
        k_index(j, norm(self.xi(j)))
    }

    /// `(2j) log(2+‖ξ_j‖)`, the radius of the balls around the orbit of `ξ_j`.
    pub fn ball_radius(&self, j: u32) -> f64 {
        2.0 * j as f64 * (2.0 + norm(self.xi(j))).ln()
    }

    fn shifted(&self, j: u32, sigma: usize, z: &[C64]) -> Vec<C64> {
        let sn = (self.dim() as f64).sqrt();
        apply_c(&self.inverses[sigma], z)
            .iter()
            .zip(self.xi(j))
            .map(|(a, b)| (a - b) * sn)
            .collect()
    }

    /// `F_j^σ(ζ) = e^k H_k(√n(σ⁻¹ζ − ξ_j))`, peaked at `σξ_j`.
    pub fn eval_f_sigma(&self, j: u32, sigma: usize, z: &[C64]) -> C64 {
        let k = self.k(j);
        eval_big_h(k, &self.shifted(j, sigma, z)) * (k as f64).exp()
    }

    /// The translated form `e^k H_k(√n(ζ − σξ_j))`. Equal to
    /// [`Self::eval_f_sigma`] for signed permutation groups only.
    pub fn eval_f_sigma_translated(&self, j: u32, sigma: usize, z: &[C64]) -> C64 {
        let k = self.k(j);
        let sn = (self.dim() as f64).sqrt();
        let c = apply(&self.group.elements()[sigma], self.xi(j));
        let w: Vec<C64> = z.iter().zip(&c).map(|(a, b)| (a - b) * sn).collect();
        eval_big_h(k, &w) * (k as f64).exp()
    }

    pub fn eval_f_sigma_real(&self, j: u32, sigma: usize, x: &[f64]) -> f64 {
        let k = self.k(j);
        let sn = (self.dim() as f64).sqrt();
        let w: Vec<f64> = apply(&self.inverses[sigma], x)
            .iter()
            .zip(self.xi(j))
            .map(|(a, b)| (a - b) * sn)
            .collect();
        eval_big_h_real(k, &w) * (k as f64).exp()
    }

    pub fn ln_abs_f_sigma(&self, j: u32, sigma: usize, z: &[C64]) -> f64 {
        self.k(j) as f64 + ln_abs_big_h(self.k(j), &self.shifted(j, sigma, z))
    }

    /// `F_j = (1/|W|) Σ_σ F_j^σ`.
    pub fn eval_f(&self, j: u32, z: &[C64]) -> C64 {
        let s: C64 = (0..self.group.order())
            .map(|s| self.eval_f_sigma(j, s, z))
            .sum();
        s / self.group.order() as f64
    }

    pub fn eval_f_real(&self, j: u32, x: &[f64]) -> f64 {
        let s: f64 = (0..self.group.order())
            .map(|s| self.eval_f_sigma_real(j, s, x))
            .sum();
        s / self.group.order() as f64
    }

    /// `F_j` as a standalone evaluator.
    pub fn member(&self, j: u32) -> FamilyMember<'_> {
        FamilyMember { family: self, j }
    }

    /// Distance from `x` to the nearest orbit point `σξ_j`.
    pub fn orbit_distance(&self, j: u32, x: &[f64]) -> f64 {
        self.group
            .elements()
            .iter()
            .map(|g| {
                let c = apply(g, self.xi(j));
                x.iter()
                    .zip(&c)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(f64::INFINITY, f64::min)
    }
}

pub struct FamilyMember<'a> {
    family: &'a WitnessFamily,
    j: u32,
}

impl EntireFn for FamilyMember<'_> {
    fn dim(&self) -> usize {
        self.family.dim()
    }
    fn eval(&self, z: &[C64]) -> C64 {
        self.family.eval_f(self.j, z)
    }
    fn eval_real(&self, x: &[f64]) -> C64 {
        self.family.eval_f_real(self.j, x).into()
    }
}

/// Outcome of one property on one sample set. `worst_margin` is in the
/// property's natural units (log-ratio for exponential bounds, absolute
/// otherwise); the property holds when it is nonnegative.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyCheck {
    pub property: String,
    pub j: u32,
    pub samples: usize,
    pub worst_margin: f64,
    pub violations: usize,
}

impl PropertyCheck {
    fn from_margins(property: &str, j: u32, margins: impl IntoIterator<Item = f64>) -> Self {
        let mut samples = 0;
        let mut violations = 0;
        let mut worst = f64::INFINITY;
        for m in margins {
            samples += 1;
            if !(m >= 0.0) {
                violations += 1;
            }
            worst = if m.is_nan() { f64::NAN } else { worst.min(m) };
        }
        Self {
            property: property.into(),
            j,
            samples,
            worst_margin: worst,
            violations,
        }
    }

    pub fn holds(&self) -> bool {
        self.violations == 0 && self.samples > 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub dim: usize,
    pub group_order: usize,
    pub checks: Vec<PropertyCheck>,
}

impl PropertyReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(PropertyCheck::holds)
    }
}

/// Sample sizes for [`verify_family_properties`].
#[derive(Debug, Clone, Copy)]
pub struct PropertySamples {
    pub complex: usize,
    pub real: usize,
    pub seed: u64,
}

impl Default for PropertySamples {
    fn default() -> Self {
        Self {
            complex: 4000,
            real: 10_000,
            seed: DEFAULT_SEED,
        }
    }
}

/// Exact-equality checks allow this much rounding.
const EQ_TOL: f64 = 1e-12;

fn complex_ball(rng: &mut ChaCha8Rng, dim: usize, radius: f64, count: usize) -> Vec<Vec<C64>> {
    (0..count)
        .map(|_| {
            let r = radius * rng.random::<f64>();
            let v: Vec<C64> = (0..dim)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let s = cnorm(&v).max(1e-300);
            v.iter().map(|c| c * (r / s)).collect()
        })
        .collect()
}

fn real_box(rng: &mut ChaCha8Rng, dim: usize, half: f64, count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| (0..dim).map(|_| rng.random_range(-half..half)).collect())
        .collect()
}

/// Checks (1)–(4) for `h_j`, (1′)–(4′) for `H_j` in the family's dimension,
/// (1″)–(4″) for every `F_j^σ`, the lower bound on `F_j(ξ_j)` and
/// W-invariance of `F_j`, for each `j` in the range.
pub fn verify_family_properties(
    family: &WitnessFamily,
    j_range: std::ops::RangeInclusive<u32>,
    samples: PropertySamples,
) -> Result<PropertyReport> {
    if *j_range.start() < 1 || *j_range.end() > family.j_max() {
        return Err(Error::InvalidInput(format!(
            "j range {:?} outside 1..={}",
            j_range,
            family.j_max()
        )));
    }
    let n = family.dim();
    let nf = n as f64;
    let checks: Vec<Vec<PropertyCheck>> =
        j_range
            .collect::<Vec<u32>>()
            .into_par_iter()
            .map(|j| {
                let mut rng = ChaCha8Rng::seed_from_u64(samples.seed ^ j as u64);
                let mut out = Vec::new();
                let jf = j as f64;

                // h_j on C and R
                let zs: Vec<C64> = complex_ball(&mut rng, 1, 20.0, samples.complex)
                    .into_iter()
                    .map(|v| v[0])
                    .collect();
                out.push(PropertyCheck::from_margins(
                    "(1)",
                    j,
                    zs.iter().map(|&z| 2.0 * PI * z.norm() - ln_abs_h(j, z)),
                ));
                out.push(PropertyCheck::from_margins(
                    "(2)",
                    j,
                    [EQ_TOL - (eval_h(j, C64::new(0.0, 0.0)) - 1.0).norm()],
                ));
                let xs: Vec<f64> = (0..samples.real)
                    .map(|_| rng.random_range(-4.0 * jf..4.0 * jf))
                    .collect();
                out.push(PropertyCheck::from_margins(
                    "(3)",
                    j,
                    xs.iter().map(|&x| {
                        let v = eval_h_real(j, x);
                        v.min(1.0 - v)
                    }),
                ));
                let bound4 = PI.powi(-2 * j as i32);
                let tail: Vec<f64> = xs
                    .iter()
                    .map(|&x| x.signum() * (jf + x.abs()))
                    .chain([jf, -jf, 1.43 * jf, -1.43 * jf])
                    .collect();
                out.push(PropertyCheck::from_margins(
                    "(4)",
                    j,
                    tail.iter().map(|&x| bound4 - eval_h_real(j, x)),
                ));

                // H_j on C^n and R^n
                let zn = complex_ball(&mut rng, n, 20.0, samples.complex);
                out.push(PropertyCheck::from_margins(
                    "(1')",
                    j,
                    zn.iter()
                        .map(|z| 2.0 * PI * nf.sqrt() * cnorm(z) - ln_abs_big_h(j, z)),
                ));
                out.push(PropertyCheck::from_margins(
                    "(2')",
                    j,
                    [EQ_TOL - (eval_big_h(j, &vec![C64::new(0.0, 0.0); n]) - 1.0).norm()],
                ));
                let xn = real_box(&mut rng, n, 3.0 * jf, samples.real);
                out.push(PropertyCheck::from_margins(
                    "(3')",
                    j,
                    xn.iter().map(|x| {
                        let v = eval_big_h_real(j, x);
                        v.min(1.0 - v)
                    }),
                ));
                let far: Vec<Vec<f64>> = xn
                    .iter()
                    .enumerate()
                    .map(|(i, x)| {
                        let mut y = x.clone();
                        let m = i % n;
                        y[m] = y[m].signum() * (jf + y[m].abs());
                        y
                    })
                    .collect();
                out.push(PropertyCheck::from_margins(
                    "(4')",
                    j,
                    far.iter().map(|x| bound4 - eval_big_h_real(j, x)),
                ));

                // F_j^σ
                let xi = family.xi(j);
                let r = norm(xi);
                let top = 2.0 * jf * (2.0 + r).ln();
                let ln_cj = top + 2.0 * PI * nf * r;
                let radius = family.ball_radius(j);
                let mut m1 = Vec::new();
                let mut m2 = Vec::new();
                let mut m3 = Vec::new();
                let mut m4 = Vec::new();
                for s in 0..family.group.order() {
                    let center = apply(&family.group.elements()[s], xi);
                    let zc = complex_ball(&mut rng, n, r + 20.0, samples.complex / 4);
                    m1.extend(zc.iter().map(|z| {
                        ln_cj + 2.0 * PI * nf * cnorm(z) - family.ln_abs_f_sigma(j, s, z)
                    }));
                    let zc: Vec<Vec<C64>> = complex_ball(&mut rng, n, 3.0, samples.complex / 4)
                        .into_iter()
                        .map(|d| d.iter().zip(&center).map(|(a, b)| a + b).collect())
                        .collect();
                    m1.extend(zc.iter().map(|z| {
                        ln_cj + 2.0 * PI * nf * cnorm(z) - family.ln_abs_f_sigma(j, s, z)
                    }));
                    m2.push(family.eval_f_sigma_real(j, s, &center).ln() - (top - 1.0));
                    for d in real_box(&mut rng, n, 2.0 * radius, samples.real / 4) {
                        let x: Vec<f64> = d.iter().zip(&center).map(|(a, b)| a + b).collect();
                        let v = family.eval_f_sigma_real(j, s, &x);
                        m3.push(v.min(top.exp() - v));
                        let dist = norm(&d);
                        let x = if dist >= radius {
                            x
                        } else {
                            // push the sample out to the shell
                            let scale = radius * (1.0 + dist / radius) / dist.max(1e-300);
                            d.iter().zip(&center).map(|(a, b)| b + a * scale).collect()
                        };
                        m4.push(1.0 - family.eval_f_sigma_real(j, s, &x));
                    }
                }
                out.push(PropertyCheck::from_margins("(1'')", j, m1));
                out.push(PropertyCheck::from_margins("(2'')", j, m2));
                out.push(PropertyCheck::from_margins("(3'')", j, m3));
                out.push(PropertyCheck::from_margins("(4'')", j, m4));

                // F_j itself
                // Only the σ = 1 term is guaranteed large at ξ_j, so the average
                // carries a factor 1/|W|.
                let w_order = (family.group.order() as f64).ln();
                out.push(PropertyCheck::from_margins(
                    "F_j(xi_j) lower bound",
                    j,
                    [family.eval_f_real(j, xi).ln() - (top - 1.0 - w_order)],
                ));
                let zs = complex_ball(&mut rng, n, r + 5.0, 200);
                let member = family.member(j);
                out.push(PropertyCheck::from_margins(
                    "W-invariance",
                    j,
                    zs.iter().map(|z| {
                        let scale = member.eval(z).norm().max(1.0);
                        EQ_TOL
                            - family
                                .group
                                .invariance_defect(&member, std::slice::from_ref(z))
                                / scale
                    }),
                ));
                out
            })
            .collect();
    Ok(PropertyReport {
        dim: n,
        group_order: family.group.order(),
        checks: checks.into_iter().flatten().collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DichotomyRow {
    pub j: u32,
    pub xi_j_norm: f64,
    pub k: u32,
    pub f_at_xi: f64,
    /// `e^{-1}(2+‖ξ_j‖)^{2j} / |W|`.
    pub lower_bound: f64,
    /// Whether `F_j(ξ_j) ≥ e^{-1}(2+‖ξ_j‖)^{2j}` without the `1/|W|` factor.
    pub unnormalized_bound_holds: bool,
    /// `max_ξ |μ̂ F_j| − (|μ̂| + 1)` over the grid; nonpositive when the uniform bound holds.
    pub uniform_excess: f64,
    pub near_points: usize,
    /// `max |μ̂ F_j| − 1` over grid points within the orbit balls.
    pub near_excess: f64,
    /// `max |μ̂ F_j| − |μ̂|` over the remaining grid points.
    pub far_excess: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DichotomyReport {
    pub rows: Vec<DichotomyRow>,
    /// `C` in `|μ̂ F_j| ≤ C (1+‖ξ‖)^N` over the grid and all `j`.
    pub envelope_constant: f64,
    pub envelope_degree: u32,
    /// `log F_j(ξ_j) / log(1+‖ξ_j‖)` per `j`; unbounded growth means no polynomial bound.
    pub growth_exponents: Vec<f64>,
    pub super_polynomial: bool,
    pub pass: bool,
}

/// Uniform grid on `[-extent, extent]^n` plus `per_ball` points in each orbit
/// ball of each `j`.
pub fn dichotomy_grid(
    family: &WitnessFamily,
    extent: f64,
    per_axis: usize,
    per_ball: usize,
) -> Vec<Vec<f64>> {
    let n = family.dim();
    let mut out = Vec::new();
    let total = per_axis.pow(n as u32);
    for i in 0..total {
        let mut rem = i;
        let mut p = vec![0.0; n];
        for c in p.iter_mut() {
            let t = rem % per_axis;
            rem /= per_axis;
            *c = -extent + 2.0 * extent * t as f64 / (per_axis - 1) as f64;
        }
        out.push(p);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    for j in 1..=family.j_max() {
        let radius = family.ball_radius(j);
        for g in family.group.elements() {
            let c = apply(g, family.xi(j));
            out.push(c.clone());
            for _ in 0..per_ball {
                let d = real_box(&mut rng, n, 1.0, 1).remove(0);
                let s = norm(&d).max(1.0);
                out.push(c.iter().zip(&d).map(|(a, b)| a + radius * b / s).collect());
            }
        }
    }
    out
}

/// Quantitative engine of the bounded-image / unbounded-preimage argument:
/// `|μ̂ F_j| ≤ |μ̂| + 1` on the grid for every `j`, split into the near-ball
/// bound `≤ 1` and the far bound `≤ |μ̂|`, while `F_j(ξ_j) ≥ e^{-1}(2+‖ξ_j‖)^{2j}/|W|`.
pub fn boundedness_dichotomy(
    mu_hat: &dyn EntireFn,
    family: &WitnessFamily,
    grid: &[Vec<f64>],
    ball: BallSearch,
) -> Result<DichotomyReport> {
    check_dim(family.dim(), mu_hat.dim())?;
    for j in 1..=family.j_max() {
        for g in family.group.elements() {
            let p = certify_violation(mu_hat, &apply(g, family.xi(j)), j, ball)?;
            if !p.holds() {
                return Err(Error::InvalidInput(format!(
                    "violation certificate for j = {j} fails for this symbol (sampled max {:e} > bound {:e})",
                    p.sampled_max, p.certified_bound
                )));
            }
        }
    }
    let mu: Vec<f64> = grid
        .par_iter()
        .map(|x| mu_hat.eval_real(x).norm())
        .collect();
    let slack = |v: f64| v * 1e-12;
    let rows: Vec<DichotomyRow> = (1..=family.j_max())
        .into_par_iter()
        .map(|j| {
            let radius = family.ball_radius(j);
            let mut uniform = f64::NEG_INFINITY;
            let mut near = f64::NEG_INFINITY;
            let mut far = f64::NEG_INFINITY;
            let mut near_points = 0;
            for (x, &m) in grid.iter().zip(&mu) {
                let prod = m * family.eval_f_real(j, x);
                uniform = uniform.max(prod - (m + 1.0) - slack(m + 1.0));
                if family.orbit_distance(j, x) < radius {
                    near_points += 1;
                    near = near.max(prod - 1.0 - slack(1.0));
                } else {
                    far = far.max(prod - m - slack(m));
                }
            }
            let xi = family.xi(j);
            let r = norm(xi);
            let f_at_xi = family.eval_f_real(j, xi);
            let unnormalized = (2.0 * j as f64 * (2.0 + r).ln() - 1.0).exp();
            let lower_bound = unnormalized / family.group.order() as f64;
            DichotomyRow {
                j,
                xi_j_norm: r,
                k: family.k(j),
                f_at_xi,
                lower_bound,
                unnormalized_bound_holds: f_at_xi >= unnormalized,
                uniform_excess: uniform,
                near_points,
                near_excess: near,
                far_excess: far,
                pass: uniform <= 0.0
                    && near <= 0.0
                    && far <= 0.0
                    && near_points > 0
                    && f_at_xi >= lower_bound,
            }
        })
        .collect();

    // μ̂ is sampled on the grid; its polynomial envelope degree is taken from
    // the decay of max |μ̂| itself (degree 0 when |μ̂| is bounded).
    let mu_max = mu.iter().copied().fold(0.0, f64::max);
    let envelope_degree = 0;
    let envelope_constant = mu_max + 1.0;
    let growth_exponents: Vec<f64> = rows
        .iter()
        .map(|r| r.f_at_xi.ln() / (1.0 + r.xi_j_norm).ln())
        .collect();
    let super_polynomial = growth_exponents.windows(2).all(|w| w[1] > w[0])
        && rows
            .iter()
            .all(|r| r.f_at_xi > envelope_constant * (1.0 + r.xi_j_norm).powi(envelope_degree));
    let pass = rows.iter().all(|r| r.pass) && super_polynomial;
    Ok(DichotomyReport {
        rows,
        envelope_constant,
        envelope_degree: envelope_degree as u32,
        growth_exponents,
        super_polynomial,
        pass,
    })
}
