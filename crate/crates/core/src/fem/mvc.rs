//! Mean value coordinates on arbitrary simple polygons (convex or concave),
//! with analytic gradients.
//!
//! Weights use signed angles, `w_i = (tan(a_{i-1}/2) + tan(a_i/2)) / r_i`,
//! where `a_i` is the angle at `x` subtended by edge `(v_i, v_{i+1})`. The
//! half-angle tangent is evaluated as `(r_i r_{i+1} - d_i.d_{i+1}) / (d_i x d_{i+1})`.

use crate::geom::{cross, Vec2};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MvcShape {
    pub values: Vec<f64>,
    /// `None` when the point lies on the polygon boundary, where the
    /// coordinates are only C0.
    pub gradients: Option<Vec<Vec2>>,
}

fn check_polygon(poly: &[Vec2]) -> Result<f64> {
    let n = poly.len();
    if n < 3 {
        return Err(Error::DegeneratePolygon(format!("{n} vertices")));
    }
    let diam = poly
        .iter()
        .flat_map(|p| poly.iter().map(move |q| (p - q).norm()))
        .fold(0.0, f64::max);
    if !(diam > 0.0) {
        return Err(Error::DegeneratePolygon("zero extent".into()));
    }
    for i in 0..n {
        if (poly[(i + 1) % n] - poly[i]).norm() <= 1e-14 * diam {
            return Err(Error::DegeneratePolygon(format!("repeated vertex {i}")));
        }
    }
    if crate::geom::signed_area(poly).abs() <= 1e-14 * diam * diam {
        return Err(Error::DegeneratePolygon("collapsed (zero area)".into()));
    }
    Ok(diam)
}

/// Shape function values and gradients of the polygon's mean value
/// coordinates at `x`.
pub fn mvc_shape(poly: &[Vec2], x: &Vec2) -> Result<MvcShape> {
    let diam = check_polygon(poly)?;
    let n = poly.len();
    let tol = 1e-12 * diam;
    let d: Vec<Vec2> = poly.iter().map(|v| v - x).collect();
    let r: Vec<f64> = d.iter().map(|v| v.norm()).collect();

    // vertex: Kronecker delta
    if let Some(k) = r.iter().position(|&ri| ri <= tol) {
        let mut values = vec![0.0; n];
        values[k] = 1.0;
        return Ok(MvcShape { values, gradients: None });
    }
    // edge: linear interpolation between its end points
    for i in 0..n {
        let j = (i + 1) % n;
        let area2 = cross(&d[i], &d[j]);
        let len = (poly[j] - poly[i]).norm();
        if area2.abs() <= tol * len && d[i].dot(&d[j]) < 0.0 {
            let mut values = vec![0.0; n];
            values[i] = r[j] / (r[i] + r[j]);
            values[j] = r[i] / (r[i] + r[j]);
            return Ok(MvcShape { values, gradients: None });
        }
    }

    // half-angle tangents and their gradients
    let mut t = vec![0.0; n];
    let mut grad_t = vec![Vec2::zeros(); n];
    // gradient of the polar angle of d_i with respect to x
    let grad_phi: Vec<Vec2> = d.iter().zip(&r).map(|(v, ri)| Vec2::new(v.y, -v.x) / (ri * ri)).collect();
    for i in 0..n {
        let j = (i + 1) % n;
        let c = cross(&d[i], &d[j]);
        let dot = d[i].dot(&d[j]);
        t[i] = (r[i] * r[j] - dot) / c;
        grad_t[i] = 0.5 * (1.0 + t[i] * t[i]) * (grad_phi[j] - grad_phi[i]);
    }
    let mut w = vec![0.0; n];
    let mut grad_w = vec![Vec2::zeros(); n];
    for i in 0..n {
        let p = (i + n - 1) % n;
        let s = t[p] + t[i];
        w[i] = s / r[i];
        grad_w[i] = (grad_t[p] + grad_t[i]) / r[i] + s * d[i] / (r[i] * r[i] * r[i]);
    }
    let total: f64 = w.iter().sum();
    if !(total.abs() > 0.0) || !total.is_finite() {
        return Err(Error::DegeneratePolygon("vanishing weight sum".into()));
    }
    let grad_total = grad_w.iter().fold(Vec2::zeros(), |a, g| a + g);
    let values: Vec<f64> = w.iter().map(|wi| wi / total).collect();
    let gradients = (0..n).map(|i| (grad_w[i] - values[i] * grad_total) / total).collect();
    Ok(MvcShape { values, gradients: Some(gradients) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn regular_hexagon() -> Vec<Vec2> {
        (0..6)
            .map(|k| {
                let t = std::f64::consts::PI / 3.0 * k as f64;
                Vec2::new(t.cos(), t.sin())
            })
            .collect()
    }

    fn concave_hexagon() -> Vec<Vec2> {
        vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(2.0, 2.0),
            Vec2::new(1.2, 0.8),
            Vec2::new(0.3, 2.1),
            Vec2::new(-0.4, 1.0),
        ]
    }

    #[test]
    fn kronecker_at_vertices() {
        let poly = concave_hexagon();
        for k in 0..6 {
            let s = mvc_shape(&poly, &poly[k]).unwrap();
            for (i, v) in s.values.iter().enumerate() {
                assert_eq!(*v, if i == k { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn edge_midpoint_interpolates_linearly() {
        let poly = regular_hexagon();
        let x = (poly[1] + poly[2]) / 2.0;
        let s = mvc_shape(&poly, &x).unwrap();
        assert!((s.values[1] - 0.5).abs() < 1e-12 && (s.values[2] - 0.5).abs() < 1e-12);
        assert!(s.gradients.is_none());
    }

    #[test]
    fn centroid_of_regular_hexagon() {
        let s = mvc_shape(&regular_hexagon(), &Vec2::zeros()).unwrap();
        for v in s.values {
            assert!((v - 1.0 / 6.0).abs() < 1e-15);
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let poly = concave_hexagon();
        let diam = 2.9;
        let h = 1e-6 * diam;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut tested = 0;
        while tested < 50 {
            let x = Vec2::new(rng.gen_range(-0.4..2.0), rng.gen_range(0.0..2.1));
            if !crate::geom::point_in_polygon(&x, &poly) {
                continue;
            }
            let g = mvc_shape(&poly, &x).unwrap().gradients.unwrap();
            for axis in 0..2 {
                let mut e = Vec2::zeros();
                e[axis] = h;
                let fp = mvc_shape(&poly, &(x + e)).unwrap().values;
                let fm = mvc_shape(&poly, &(x - e)).unwrap().values;
                for i in 0..6 {
                    let fd = (fp[i] - fm[i]) / (2.0 * h);
                    let scale = g[i][axis].abs().max(1.0);
                    assert!((fd - g[i][axis]).abs() <= 1e-5 * scale, "{fd} vs {}", g[i][axis]);
                }
            }
            tested += 1;
        }
    }

    #[test]
    fn convex_values_are_nonnegative() {
        let poly = regular_hexagon();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..1000 {
            let x = Vec2::new(rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8));
            if !crate::geom::point_in_polygon(&x, &poly) {
                continue;
            }
            assert!(mvc_shape(&poly, &x).unwrap().values.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn degenerate_polygons_are_rejected() {
        let p = Vec2::new(1.0, 1.0);
        assert!(mvc_shape(&[p, p, Vec2::zeros()], &Vec2::new(0.5, 0.5)).is_err());
        let flat = [Vec2::zeros(), Vec2::new(1.0, 0.0), Vec2::new(2.0, 0.0)];
        assert!(mvc_shape(&flat, &Vec2::new(0.5, 0.1)).is_err());
        assert!(mvc_shape(&[Vec2::zeros(), p], &Vec2::zeros()).is_err());
    }
}
