//! Poincaré disk of curvature −1, base point `o = 0`, boundary circle with
//! normalized measure, `ρ = 1/2`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::quadrature::{periodic_mean, DoublingControl};

pub const RHO: f64 = 0.5;

pub fn boundary_point(b: f64) -> [f64; 2] {
    [b.cos(), b.sin()]
}

/// Point at geodesic distance `r` from `o` in direction `theta`.
pub fn disk_point(r: f64, theta: f64) -> [f64; 2] {
    let u = (r / 2.0).tanh();
    [u * theta.cos(), u * theta.sin()]
}

pub fn distance_from_origin(x: [f64; 2]) -> f64 {
    2.0 * (x[0] * x[0] + x[1] * x[1]).sqrt().atanh()
}

/// `A(x,b) = log((1−|x|²)/|x−b|²)`.
pub fn busemann(x: [f64; 2], b: f64) -> Result<f64> {
    let r2 = x[0] * x[0] + x[1] * x[1];
    if !(r2 < 1.0) {
        return Err(Error::Domain(format!(
            "point {x:?} is not inside the unit disk"
        )));
    }
    let p = boundary_point(b);
    let d2 = (x[0] - p[0]).powi(2) + (x[1] - p[1]).powi(2);
    Ok(((1.0 - r2) / d2).ln())
}

/// `A` for `x` at distance `r` on the positive real axis and `b` at angle `theta`,
/// written as `−log(cosh r − sinh r cos θ)` to stay accurate for large `r`.
pub fn busemann_radial(r: f64, theta: f64) -> f64 {
    -(r.cosh() - r.sinh() * theta.cos()).ln()
}

/// Boundary quadrature settings shared by the rank-one transforms.
pub fn boundary_control() -> DoublingControl {
    DoublingControl {
        initial_nodes: 128,
        ..DoublingControl::default()
    }
}

/// `φ_λ(r) = ∫_B e^{(iλ+ρ) A(x,b)} db` for `x` at distance `r` from `o`.
pub fn spherical_function(lambda: C64, r: f64) -> Result<C64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("radius {r} out of range")));
    }
    if r == 0.0 {
        return Ok(C64::new(1.0, 0.0));
    }
    let s = C64::new(RHO, 0.0) + C64::i() * lambda;
    let out = periodic_mean(
        |t| (s * busemann_radial(r, t)).exp(),
        boundary_control(),
        "spherical function",
    )?;
    Ok(out.value)
}

/// Density of the spherical inversion formula with respect to `dλ` on `λ ≥ 0`:
/// `f(x) = ∫_0^∞ f̃(λ) φ_λ(x) plancherel_density(λ) dλ`.
pub fn plancherel_density(lambda: f64) -> f64 {
    lambda * (std::f64::consts::PI * lambda).tanh() / std::f64::consts::TAU
}

/// The horocycle `{A(·,b) = t}`: Euclidean circle with centre `b/(1+e^{-t})`
/// and radius `1/(1+e^t)`, tangent to the boundary at `b`.
#[derive(Debug, Clone, Copy)]
pub struct Horocycle {
    pub b: f64,
    pub t: f64,
}

impl Horocycle {
    pub fn radius(&self) -> f64 {
        1.0 / (1.0 + self.t.exp())
    }

    /// Point at parameter `theta`, measured from the direction `−b`, so
    /// `theta = 0` is the point closest to `o`.
    pub fn point(&self, theta: f64) -> [f64; 2] {
        let c = 1.0 / (1.0 + (-self.t).exp());
        let rc = self.radius();
        let (sb, cb) = self.b.sin_cos();
        let (st, ct) = theta.sin_cos();
        // local frame: −b and its rotation by +90°
        let lx = -ct * rc;
        let ly = st * rc;
        [c * cb + lx * cb - ly * sb, c * sb + lx * sb + ly * cb]
    }

    /// Geodesic distance from `o` to `point(theta)` together with the
    /// hyperbolic arclength density `2 r_c / (1 − |x|²)`.
    pub fn distance_and_weight(&self, theta: f64) -> (f64, f64) {
        let x = self.point(theta);
        let r2 = (x[0] * x[0] + x[1] * x[1]).min(1.0 - f64::EPSILON);
        (2.0 * r2.sqrt().atanh(), 2.0 * self.radius() / (1.0 - r2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn busemann_at_origin_vanishes() {
        for k in 0..16 {
            assert!(busemann([0.0, 0.0], k as f64 * 0.4).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn busemann_along_geodesic_is_distance() {
        for t in [0.5, 1.0, 2.0] {
            let b = 0.7;
            let x = disk_point(t, b);
            assert!((busemann(x, b).unwrap() - t).abs() < 1e-13);
        }
    }

    #[test]
    fn boundary_is_out_of_domain() {
        assert!(matches!(busemann([1.0, 0.0], 0.3), Err(Error::Domain(_))));
    }

    #[test]
    fn horocycle_level_set() {
        let h = Horocycle { b: 1.1, t: -0.4 };
        for k in 0..7 {
            let x = h.point(0.3 + k as f64 * 0.8);
            assert!((busemann(x, h.b).unwrap() - h.t).abs() < 1e-12);
        }
        assert!((distance_from_origin(h.point(0.0)) - 0.4).abs() < 1e-12);
    }
}
