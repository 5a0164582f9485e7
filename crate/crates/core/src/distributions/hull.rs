//! Exact convex hulls of finite point sets in dimensions 1 to 3.

use std::cmp::Ordering;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexHull {
    dim: usize,
    /// 1-D: `[min, max]` (one point if degenerate). 2-D: counter-clockwise
    /// from the lexicographically smallest vertex. 3-D: lexicographic.
    vertices: Vec<Vec<f64>>,
}

fn lex(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

fn cross(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn scale_of(points: &[Vec<f64>]) -> f64 {
    points
        .iter()
        .flat_map(|p| p.iter())
        .fold(1.0f64, |m, x| m.max(x.abs()))
}

fn hull_2d(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = points.to_vec();
    pts.sort_by(|a, b| lex(a, b));
    pts.dedup_by(|a, b| a == b);
    if pts.len() <= 2 {
        return pts;
    }
    let s = scale_of(&pts);
    let eps = 1e-12 * s * s;
    let mut lower: Vec<Vec<f64>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= eps
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<f64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= eps
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn sub(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Projects points of a plane with unit normal `n` to 2-D coordinates.
fn plane_coords(points: &[Vec<f64>], origin: &[f64], n: [f64; 3]) -> Vec<Vec<f64>> {
    let helper = if n[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let u = cross3(n, helper);
    let un = dot3(u, u).sqrt();
    let u = [u[0] / un, u[1] / un, u[2] / un];
    let v = cross3(n, u);
    points
        .iter()
        .map(|p| {
            let d = sub(p, origin);
            vec![dot3(d, u), dot3(d, v)]
        })
        .collect()
}

fn hull_3d(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = points.to_vec();
    pts.sort_by(|a, b| lex(a, b));
    pts.dedup_by(|a, b| a == b);
    let m = pts.len();
    if m <= 2 {
        return pts;
    }
    let s = scale_of(&pts);
    let tol = 1e-10 * s;
    let mut is_vertex = vec![false; m];
    let mut any_plane = false;
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let nrm = cross3(sub(&pts[j], &pts[i]), sub(&pts[k], &pts[i]));
                let len = dot3(nrm, nrm).sqrt();
                if len <= 1e-12 * s * s {
                    continue;
                }
                let nu = [nrm[0] / len, nrm[1] / len, nrm[2] / len];
                let dists: Vec<f64> = pts.iter().map(|p| dot3(sub(p, &pts[i]), nu)).collect();
                let pos = dists.iter().any(|&d| d > tol);
                let neg = dists.iter().any(|&d| d < -tol);
                if pos && neg {
                    continue;
                }
                any_plane = true;
                let on: Vec<usize> = (0..m).filter(|&q| dists[q].abs() <= tol).collect();
                let face_pts: Vec<Vec<f64>> = on.iter().map(|&q| pts[q].clone()).collect();
                let coords = plane_coords(&face_pts, &pts[i], nu);
                let face_hull = hull_2d(&coords);
                for (q, c) in on.iter().zip(&coords) {
                    if face_hull.iter().any(|h| h == c) {
                        is_vertex[*q] = true;
                    }
                }
                if !pos && !neg {
                    // every point is coplanar: the face is the whole hull
                    return (0..m)
                        .filter(|&q| is_vertex[q])
                        .map(|q| pts[q].clone())
                        .collect();
                }
            }
        }
    }
    if !any_plane {
        // collinear set: keep the two extreme points
        return vec![pts[0].clone(), pts[m - 1].clone()];
    }
    (0..m)
        .filter(|&q| is_vertex[q])
        .map(|q| pts[q].clone())
        .collect()
}

impl ConvexHull {
    pub fn of_points(dim: usize, points: &[Vec<f64>]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput(
                "convex hull of an empty point set".into(),
            ));
        }
        for p in points {
            crate::error::check_dim(dim, p.len())?;
        }
        let vertices = match dim {
            1 => {
                let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
                let hi = points
                    .iter()
                    .map(|p| p[0])
                    .fold(f64::NEG_INFINITY, f64::max);
                if lo == hi {
                    vec![vec![lo]]
                } else {
                    vec![vec![lo], vec![hi]]
                }
            }
            2 => hull_2d(points),
            3 => hull_3d(points),
            _ => {
                return Err(Error::InvalidInput(format!(
                    "convex hulls are implemented for dimensions 1..=3, got {dim}"
                )))
            }
        };
        Ok(Self { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// Hull of the Minkowski sum `self ⊕ other`.
    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        crate::error::check_dim(self.dim, other.dim)?;
        let mut sums = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                sums.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        Self::of_points(self.dim, &sums)
    }

    /// Same vertex set up to `tol` (max-norm), irrespective of order.
    pub fn same_vertices(&self, other: &Self, tol: f64) -> bool {
        if self.dim != other.dim || self.vertices.len() != other.vertices.len() {
            return false;
        }
        let mut a = self.vertices.clone();
        let mut b = other.vertices.clone();
        a.sort_by(|x, y| lex(x, y));
        b.sort_by(|x, y| lex(x, y));
        let mut used = vec![false; b.len()];
        a.iter().all(|va| {
            let hit = b.iter().enumerate().position(|(i, vb)| {
                !used[i] && va.iter().zip(vb).all(|(x, y)| (x - y).abs() <= tol)
            });
            match hit {
                Some(i) => {
                    used[i] = true;
                    true
                }
                None => false,
            }
        })
    }
}
