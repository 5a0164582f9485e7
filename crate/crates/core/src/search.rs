//! Derivative-free maximization over Euclidean balls: Halton sampling
//! followed by Nelder-Mead refinement.

const PRIMES: [u32; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Radical inverse of `index` in the given base.
pub fn radical_inverse(mut index: u64, base: u32) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while index > 0 {
        r += (index % b) as f64 * f;
        index /= b;
        f *= inv;
    }
    r
}

/// The first `count` Halton points that land in the unit ball of `R^dim`
/// (points of `[-1,1]^dim` outside the ball are skipped). Deterministic.
pub fn halton_ball(dim: usize, count: usize, skip: u64) -> Vec<Vec<f64>> {
    assert!(
        dim <= PRIMES.len(),
        "Halton sequence supports at most {} dimensions",
        PRIMES.len()
    );
    let mut out = Vec::with_capacity(count);
    let mut i = skip + 1;
    while out.len() < count {
        let p: Vec<f64> = (0..dim)
            .map(|k| 2.0 * radical_inverse(i, PRIMES[k]) - 1.0)
            .collect();
        if p.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
            out.push(p);
        }
        i += 1;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSearch {
    pub samples: usize,
    pub refine_iters: usize,
}

impl Default for BallSearch {
    fn default() -> Self {
        Self {
            samples: 48,
            refine_iters: 80,
        }
    }
}

impl BallSearch {
    pub fn doubled(self) -> Self {
        Self {
            samples: 2 * self.samples,
            refine_iters: 2 * self.refine_iters,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallMax {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

fn project(center: &[f64], radius: f64, p: &mut [f64]) {
    let d: f64 = p
        .iter()
        .zip(center)
        .map(|(a, c)| (a - c).powi(2))
        .sum::<f64>()
        .sqrt();
    if d > radius {
        let s = radius / d;
        for (a, c) in p.iter_mut().zip(center) {
            *a = c + (*a - c) * s;
        }
    }
}

/// Maximizes `f` over the closed ball. Stops as soon as a value `>= stop_at`
/// is seen; pass `f64::INFINITY` to always run the full search. `f` must
/// return a finite value or an error carrying the offending point.
pub fn ball_max<E, F>(
    f: F,
    center: &[f64],
    radius: f64,
    params: BallSearch,
    stop_at: f64,
) -> Result<BallMax, E>
where
    F: Fn(&[f64]) -> Result<f64, E>,
{
    let dim = center.len();
    let mut evaluations = 1;
    let mut best = BallMax {
        point: center.to_vec(),
        value: f(center)?,
        evaluations: 1,
    };
    if best.value >= stop_at || radius <= 0.0 {
        return Ok(best);
    }
    let mut seen: Vec<(f64, Vec<f64>)> = Vec::with_capacity(params.samples);
    for u in halton_ball(dim, params.samples, 0) {
        let p: Vec<f64> = center.iter().zip(&u).map(|(c, v)| c + radius * v).collect();
        let v = f(&p)?;
        evaluations += 1;
        if v > best.value {
            best = BallMax {
                point: p.clone(),
                value: v,
                evaluations,
            };
            if v >= stop_at {
                best.evaluations = evaluations;
                return Ok(best);
            }
        }
        seen.push((v, p));
    }
    if params.refine_iters == 0 {
        best.evaluations = evaluations;
        return Ok(best);
    }

    // Nelder-Mead on -f from the best sample, simplex scaled to the ball.
    let step = 0.15 * radius;
    let mut simplex: Vec<(f64, Vec<f64>)> = vec![(best.value, best.point.clone())];
    for k in 0..dim {
        let mut p = best.point.clone();
        p[k] += if p[k] - center[k] > 0.0 { -step } else { step };
        project(center, radius, &mut p);
        let v = f(&p)?;
        evaluations += 1;
        simplex.push((v, p));
    }
    let by_value_desc = |a: &(f64, Vec<f64>), b: &(f64, Vec<f64>)| b.0.total_cmp(&a.0);
    for _ in 0..params.refine_iters {
        simplex.sort_by(by_value_desc);
        if simplex[0].0 >= stop_at {
            break;
        }
        let worst = simplex[dim].clone();
        let centroid: Vec<f64> = (0..dim)
            .map(|k| simplex[..dim].iter().map(|s| s.1[k]).sum::<f64>() / dim as f64)
            .collect();
        let along = |t: f64| {
            let mut p: Vec<f64> = (0..dim)
                .map(|k| centroid[k] + t * (centroid[k] - worst.1[k]))
                .collect();
            project(center, radius, &mut p);
            p
        };
        let r = along(1.0);
        let fr = f(&r)?;
        evaluations += 1;
        if fr > simplex[0].0 {
            let e = along(2.0);
            let fe = f(&e)?;
            evaluations += 1;
            simplex[dim] = if fe > fr { (fe, e) } else { (fr, r) };
        } else if fr > simplex[dim - 1].0 {
            simplex[dim] = (fr, r);
        } else {
            let c = along(if fr > worst.0 { 0.5 } else { -0.5 });
            let fc = f(&c)?;
            evaluations += 1;
            if fc > worst.0.max(fr) {
                simplex[dim] = (fc, c);
            } else {
                let top = simplex[0].1.clone();
                for s in simplex.iter_mut().skip(1) {
                    let p: Vec<f64> =
                        s.1.iter()
                            .zip(&top)
                            .map(|(a, t)| t + 0.5 * (a - t))
                            .collect();
                    *s = (f(&p)?, p);
                    evaluations += 1;
                }
            }
        }
    }
    simplex.sort_by(by_value_desc);
    if simplex[0].0 > best.value {
        best = BallMax {
            point: simplex[0].1.clone(),
            value: simplex[0].0,
            evaluations,
        };
    }
    best.evaluations = evaluations;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    #[test]
    fn radical_inverse_base_two() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert_eq!(radical_inverse(5, 3), 2.0 / 3.0 + 1.0 / 9.0);
    }

    #[test]
    fn halton_points_in_ball() {
        let pts = halton_ball(3, 200, 0);
        assert_eq!(pts.len(), 200);
        assert!(pts
            .iter()
            .all(|p| p.iter().map(|v| v * v).sum::<f64>() <= 1.0));
    }

    #[test]
    fn finds_boundary_maximum() {
        // max of x + y over the disk of radius 2 at the origin is 2√2
        let r = ball_max::<Infallible, _>(
            |p| Ok(p[0] + p[1]),
            &[0.0, 0.0],
            2.0,
            BallSearch::default(),
            f64::INFINITY,
        )
        .unwrap();
        assert!((r.value - 8f64.sqrt()).abs() < 1e-6, "{}", r.value);
    }

    #[test]
    fn finds_interior_peak() {
        let f = |p: &[f64]| Ok::<_, Infallible>(-(p[0] - 0.3).powi(2) - (p[1] + 0.2).powi(2));
        let r = ball_max(f, &[0.0, 0.0], 1.0, BallSearch::default(), f64::INFINITY).unwrap();
        assert!(r.value > -1e-8);
    }
}
