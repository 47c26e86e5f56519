//! Triangle quadrature rules and the centroid-fan integration scheme for
//! polygonal cells.

use crate::geom::{cross, vertex_mean, Vec2};
use crate::{Error, Result};

/// Points in barycentric coordinates with weights summing to one (fractions
/// of the triangle area).
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleRule {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl TriangleRule {
    /// Supported sizes: 1, 3, 7 (symmetric rules of degree 1, 2, 5) and 25
    /// (5 x 5 Gauss-Legendre collapsed onto the triangle).
    pub fn new(n_points: usize) -> Result<Self> {
        match n_points {
            1 => Ok(TriangleRule { points: vec![[1.0 / 3.0; 3]], weights: vec![1.0] }),
            3 => {
                let (a, b) = (2.0 / 3.0, 1.0 / 6.0);
                Ok(TriangleRule { points: vec![[a, b, b], [b, a, b], [b, b, a]], weights: vec![1.0 / 3.0; 3] })
            }
            7 => {
                let (a1, b1, w1) = (0.059715871789770, 0.470142064105115, 0.132394152788506);
                let (a2, b2, w2) = (0.797426985353087, 0.101286507323456, 0.125939180544827);
                let mut points = vec![[1.0 / 3.0; 3]];
                let mut weights = vec![0.225];
                for (a, b, w) in [(a1, b1, w1), (a2, b2, w2)] {
                    points.extend([[a, b, b], [b, a, b], [b, b, a]]);
                    weights.extend([w; 3]);
                }
                Ok(TriangleRule { points, weights })
            }
            25 => Ok(collapsed_gauss(5)),
            n => Err(Error::InvalidArgument(format!("unsupported triangle rule with {n} points"))),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn gauss_legendre_01(n: usize) -> (Vec<f64>, Vec<f64>) {
    // Newton iteration on P_n, mapped from [-1, 1] to [0, 1]
    let mut x = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x.push(0.5 * (1.0 - z));
        w.push(1.0 / ((1.0 - z * z) * dp * dp));
    }
    (x, w)
}

fn collapsed_gauss(n: usize) -> TriangleRule {
    let (x, w) = gauss_legendre_01(n);
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let s = x[i];
            let t = x[j] * (1.0 - x[i]);
            points.push([1.0 - s - t, s, t]);
            // reference triangle area is 1/2
            weights.push(2.0 * w[i] * w[j] * (1.0 - x[i]));
        }
    }
    TriangleRule { points, weights }
}

/// A physical quadrature point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadPoint {
    pub x: Vec2,
    pub weight: f64,
    /// Index of the fan triangle the point lies in.
    pub triangle: usize,
}

/// Split the polygon into triangles `(centroid, v_k, v_k+1)` and place the
/// rule in each. Weights are the signed triangle area times the rule weight.
pub fn fan_quadrature(poly: &[Vec2], rule: &TriangleRule) -> Vec<QuadPoint> {
    let c = vertex_mean(poly);
    let n = poly.len();
    let mut out = Vec::with_capacity(n * rule.len());
    for k in 0..n {
        let (a, b) = (poly[k], poly[(k + 1) % n]);
        let area = 0.5 * cross(&(a - c), &(b - c));
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            out.push(QuadPoint { x: c * p[0] + a * p[1] + b * p[2], weight: area * w, triangle: k });
        }
    }
    out
}
