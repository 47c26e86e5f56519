//! Small planar geometry helpers shared by the mesh, smoothing, contact and
//! path modules.

pub type Vec2 = nalgebra::Vector2<f64>;

#[inline]
pub fn cross(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Outward normal of a directed edge whose material lies on its left.
#[inline]
pub fn right_normal(a: &Vec2) -> Vec2 {
    Vec2::new(a.y, -a.x)
}

/// Signed area (positive for counter-clockwise vertex order).
pub fn signed_area(poly: &[Vec2]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        s += cross(&poly[i], &poly[(i + 1) % n]);
    }
    0.5 * s
}

pub fn vertex_mean(poly: &[Vec2]) -> Vec2 {
    let mut c = Vec2::zeros();
    for p in poly {
        c += p;
    }
    c / poly.len() as f64
}

/// Parameter t in [0, 1] and foot point of the projection of `p` onto the
/// segment `a`-`b`.
pub fn project_onto_segment(p: &Vec2, a: &Vec2, b: &Vec2) -> (f64, Vec2) {
    let d = b - a;
    let len2 = d.norm_squared();
    if len2 == 0.0 {
        return (0.0, *a);
    }
    let t = ((p - a).dot(&d) / len2).clamp(0.0, 1.0);
    (t, a + d * t)
}

pub fn point_segment_distance(p: &Vec2, a: &Vec2, b: &Vec2) -> f64 {
    (p - project_onto_segment(p, a, b).1).norm()
}

fn orient(a: &Vec2, b: &Vec2, c: &Vec2) -> f64 {
    cross(&(b - a), &(c - a))
}

fn on_segment(a: &Vec2, b: &Vec2, p: &Vec2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection test, including touching and collinear
/// overlap.
pub fn segments_intersect(p1: &Vec2, p2: &Vec2, q1: &Vec2, q2: &Vec2) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// Even-odd point-in-polygon test.
pub fn point_in_polygon(p: &Vec2, poly: &[Vec2]) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (&poly[i], &poly[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Whether a closed polygon and an open disk share interior area.
pub fn polygon_intersects_disk(poly: &[Vec2], center: &Vec2, radius: f64) -> bool {
    if point_in_polygon(center, poly) {
        return true;
    }
    let n = poly.len();
    (0..n).any(|i| point_segment_distance(center, &poly[i], &poly[(i + 1) % n]) < radius)
}

/// Wrap an angle into (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut x = a % two_pi;
    if x <= -std::f64::consts::PI {
        x += two_pi;
    } else if x > std::f64::consts::PI {
        x -= two_pi;
    }
    x
}
