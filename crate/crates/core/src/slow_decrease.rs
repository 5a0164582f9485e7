//! Finite-horizon evidence for the slow-decrease condition: near every real
//! ξ some ζ with `‖ζ−ξ‖ < A log(2+‖ξ‖)` has `|F(ζ)| > (A+‖ξ‖)^{-A}`.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::entire_fn::{norm, EntireFn};
use crate::error::{Error, Result};
use crate::search::{ball_max, BallMax, BallSearch};

/// Relative slack applied to every threshold comparison.
pub const REL_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchParams {
    pub ball: BallSearch,
    pub points_per_log_unit: usize,
    /// Search complex ζ (the ball in `C^n`) instead of real points.
    pub complex_search: bool,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            ball: BallSearch::default(),
            points_per_log_unit: 8,
            complex_search: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    SatisfiedAt { a: f64 },
    Violated,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallRecord {
    pub xi: Vec<f64>,
    pub xi_norm: f64,
    pub ball_radius: f64,
    /// Best point found: real parts, then imaginary parts under complex search.
    pub best_zeta: Vec<f64>,
    pub best_abs_f: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlowDecreaseVerdict {
    pub verdict: Verdict,
    pub a: f64,
    pub horizon: f64,
    pub records: Vec<BallRecord>,
}

impl SlowDecreaseVerdict {
    pub fn failures(&self) -> impl Iterator<Item = &BallRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn is_satisfied(&self) -> bool {
        matches!(self.verdict, Verdict::SatisfiedAt { .. })
    }
}

pub fn threshold(a: f64, xi_norm: f64) -> f64 {
    (a + xi_norm).powf(-a)
}

pub fn passes(value: f64, threshold: f64) -> bool {
    value >= threshold * (1.0 - REL_SLACK)
}

/// Unit directions: `±1` in 1-D, 8 equally spaced angles in 2-D, the 6
/// axis directions and 8 cube diagonals in 3-D.
pub fn sphere_design(dim: usize) -> Result<Vec<Vec<f64>>> {
    match dim {
        1 => Ok(vec![vec![1.0], vec![-1.0]]),
        2 => Ok((0..8)
            .map(|k| {
                let t = k as f64 * std::f64::consts::TAU / 8.0;
                vec![t.cos(), t.sin()]
            })
            .collect()),
        3 => {
            let mut v = Vec::new();
            for i in 0..3 {
                for s in [1.0, -1.0] {
                    let mut e = vec![0.0; 3];
                    e[i] = s;
                    v.push(e);
                }
            }
            let c = 1.0 / 3f64.sqrt();
            for m in 0..8 {
                v.push(
                    (0..3)
                        .map(|i| if m >> i & 1 == 1 { -c } else { c })
                        .collect(),
                );
            }
            Ok(v)
        }
        _ => Err(Error::InvalidInput(format!(
            "no direction set for dimension {dim}"
        ))),
    }
}

/// Radii `e^t − 2` for `t` evenly spaced on `[ln 2, ln(2+horizon)]`, so the
/// first shell is the origin and the last is the horizon.
pub fn radial_grid(horizon: f64, per_unit: usize) -> Vec<f64> {
    let (t0, t1) = (2f64.ln(), (2.0 + horizon).ln());
    let steps = (((t1 - t0) * per_unit as f64).ceil() as usize).max(1);
    (0..=steps)
        .map(|i| {
            let t = t0 + (t1 - t0) * i as f64 / steps as f64;
            if i == 0 {
                0.0
            } else if i == steps {
                horizon
            } else {
                t.exp() - 2.0
            }
        })
        .collect()
}

fn non_finite(z: &[C64]) -> Error {
    Error::NonFinite {
        point: z.iter().map(|c| (c.re, c.im)).collect(),
    }
}

/// Largest `|F|` found in the ball of the given radius around real `xi`.
pub fn ball_abs_max(
    f: &dyn EntireFn,
    xi: &[f64],
    radius: f64,
    params: &SearchParams,
    stop_at: f64,
) -> Result<BallMax> {
    let n = xi.len();
    if params.complex_search {
        let mut center = xi.to_vec();
        center.extend(std::iter::repeat_n(0.0, n));
        ball_max(
            |p: &[f64]| {
                let z: Vec<C64> = (0..n).map(|k| C64::new(p[k], p[n + k])).collect();
                let v = f.eval(&z).norm();
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(non_finite(&z))
                }
            },
            &center,
            radius,
            params.ball,
            stop_at,
        )
    } else {
        ball_max(
            |p: &[f64]| {
                let v = f.eval_real(p).norm();
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(non_finite(
                        &p.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>(),
                    ))
                }
            },
            xi,
            radius,
            params.ball,
            stop_at,
        )
    }
}

fn examine(f: &dyn EntireFn, a: f64, xi: Vec<f64>, params: &SearchParams) -> Result<BallRecord> {
    let xi_norm = norm(&xi);
    let ball_radius = a * (2.0 + xi_norm).ln();
    let thr = threshold(a, xi_norm);
    let stop = thr * (1.0 - REL_SLACK);
    let best = ball_abs_max(f, &xi, ball_radius, params, stop)?;
    Ok(BallRecord {
        xi,
        xi_norm,
        ball_radius,
        best_zeta: best.point,
        best_abs_f: best.value,
        threshold: thr,
        pass: passes(best.value, thr),
    })
}

fn sweep(f: &dyn EntireFn, a: f64, horizon: f64, params: &SearchParams) -> Result<Vec<BallRecord>> {
    let dirs = sphere_design(f.dim())?;
    let mut points = Vec::new();
    for r in radial_grid(horizon, params.points_per_log_unit) {
        if r == 0.0 {
            points.push(vec![0.0; f.dim()]);
        } else {
            points.extend(
                dirs.iter()
                    .map(|d| d.iter().map(|c| c * r).collect::<Vec<f64>>()),
            );
        }
    }
    points
        .into_par_iter()
        .map(|xi| examine(f, a, xi, params))
        .collect()
}

/// Runs the ball search on a log-spaced radial grid up to `horizon`.
///
/// The verdict is `violated` when the outermost shell contains failures and
/// they persist when those balls are resampled at twice the density;
/// failures confined to inner shells give `inconclusive`.
pub fn check_slow_decrease(
    f: &dyn EntireFn,
    a: f64,
    horizon: f64,
    params: &SearchParams,
) -> Result<SlowDecreaseVerdict> {
    if !(a > 0.0) || !(horizon > 0.0) {
        return Err(Error::InvalidInput("A and horizon must be positive".into()));
    }
    let records = sweep(f, a, horizon, params)?;
    let outer = records.iter().map(|r| r.xi_norm).fold(0.0, f64::max);
    let outer_failures: Vec<&BallRecord> = records
        .iter()
        .filter(|r| !r.pass && r.xi_norm == outer)
        .collect();
    let verdict = if records.iter().all(|r| r.pass) {
        Verdict::SatisfiedAt { a }
    } else if outer_failures.is_empty() {
        Verdict::Inconclusive
    } else {
        let dense = SearchParams {
            ball: params.ball.doubled(),
            ..*params
        };
        let stable = outer_failures
            .par_iter()
            .map(|r| examine(f, a, r.xi.clone(), &dense).map(|e| !e.pass))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|still_failing| still_failing);
        if stable {
            Verdict::Violated
        } else {
            Verdict::Inconclusive
        }
    };
    Ok(SlowDecreaseVerdict {
        verdict,
        a,
        horizon,
        records,
    })
}

/// Smallest `A` in the ascending grid whose verdict is `satisfied`, found by
/// bisection on the grid (larger `A` weakens the condition).
pub fn minimal_a_search(
    f: &dyn EntireFn,
    horizon: f64,
    a_grid: &[f64],
    params: &SearchParams,
) -> Result<Option<f64>> {
    if a_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidInput(
            "A grid must be strictly ascending".into(),
        ));
    }
    let (mut lo, mut hi) = (0usize, a_grid.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if check_slow_decrease(f, a_grid[mid], horizon, params)?.is_satisfied() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(a_grid.get(lo).copied())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusSchedule {
    pub start: f64,
    pub growth: f64,
    pub max_radius: f64,
}

impl Default for RadiusSchedule {
    fn default() -> Self {
        Self {
            start: 1.0,
            growth: 1.02,
            max_radius: 1e4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationPoint {
    pub j: u32,
    pub xi: Vec<f64>,
    pub certified_radius: f64,
    pub certified_bound: f64,
    pub sampled_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationSequence {
    pub points: Vec<ViolationPoint>,
    /// First `j` for which no violation was found within the schedule.
    pub failed_at: Option<u32>,
}

impl ViolationSequence {
    pub fn is_complete(&self) -> bool {
        self.failed_at.is_none() && !self.points.is_empty()
    }
}

/// Sampled check of `max_{‖ξ'−ξ‖ ≤ 2j log(2+‖ξ‖)} |F(ξ')| ≤ (2j+‖ξ‖)^{-2j}`.
pub fn certify_violation(
    f: &dyn EntireFn,
    xi: &[f64],
    j: u32,
    ball: BallSearch,
) -> Result<ViolationPoint> {
    let r = norm(xi);
    let radius = 2.0 * j as f64 * (2.0 + r).ln();
    let bound = (2.0 * j as f64 + r).powf(-2.0 * j as f64);
    let params = SearchParams {
        ball,
        ..Default::default()
    };
    let best = ball_abs_max(f, xi, radius, &params, f64::INFINITY)?;
    Ok(ViolationPoint {
        j,
        xi: xi.to_vec(),
        certified_radius: radius,
        certified_bound: bound,
        sampled_max: best.value,
    })
}

impl ViolationPoint {
    pub fn holds(&self) -> bool {
        self.sampled_max <= self.certified_bound
    }
}

/// Walks outward along each direction of the sphere design for `j = 1..=j_max`,
/// keeping `‖ξ_j‖` strictly increasing.
pub fn find_violation_sequence(
    f: &dyn EntireFn,
    j_max: u32,
    schedule: RadiusSchedule,
    ball: BallSearch,
) -> Result<ViolationSequence> {
    if j_max == 0 {
        return Err(Error::InvalidInput("j_max must be at least 1".into()));
    }
    if !(schedule.growth > 1.0) || !(schedule.start > 0.0) {
        return Err(Error::InvalidInput(
            "radius schedule must start positive and grow".into(),
        ));
    }
    let dirs = sphere_design(f.dim())?;
    let mut points = Vec::new();
    let mut r = schedule.start;
    for j in 1..=j_max {
        let mut found = None;
        while r <= schedule.max_radius && found.is_none() {
            let candidates: Vec<ViolationPoint> = dirs
                .par_iter()
                .map(|d| {
                    certify_violation(f, &d.iter().map(|c| c * r).collect::<Vec<_>>(), j, ball)
                })
                .collect::<Result<_>>()?;
            found = candidates.into_iter().find(ViolationPoint::holds);
            r *= schedule.growth;
        }
        match found {
            Some(p) => points.push(p),
            None => {
                return Ok(ViolationSequence {
                    points,
                    failed_at: Some(j),
                })
            }
        }
    }
    Ok(ViolationSequence {
        points,
        failed_at: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entire_fn::FnEvaluator;

    #[test]
    fn radial_grid_endpoints() {
        let g = radial_grid(1000.0, 8);
        assert_eq!(g[0], 0.0);
        assert_eq!(*g.last().unwrap(), 1000.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g.len(), 51);
    }

    #[test]
    fn constant_one_is_satisfied_at_one() {
        let f = FnEvaluator::new(1, |_| C64::new(1.0, 0.0));
        let v = check_slow_decrease(&f, 1.0, 100.0, &SearchParams::default()).unwrap();
        assert_eq!(v.verdict, Verdict::SatisfiedAt { a: 1.0 });
    }

    #[test]
    fn non_finite_output_is_reported() {
        let f = FnEvaluator::new(1, |z: &[C64]| {
            if z[0].re > 5.0 {
                C64::new(f64::NAN, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        match check_slow_decrease(&f, 1.0, 100.0, &SearchParams::default()) {
            Err(Error::NonFinite { point }) => assert!(point[0].0 > 5.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constant_one_has_no_violation() {
        let f = FnEvaluator::new(1, |_| C64::new(1.0, 0.0));
        let s = find_violation_sequence(
            &f,
            3,
            RadiusSchedule {
                max_radius: 100.0,
                ..Default::default()
            },
            BallSearch::default(),
        )
        .unwrap();
        assert_eq!(s.failed_at, Some(1));
        assert!(s.points.is_empty());
    }
}
