//! Fourier shape descriptors of paths and the path-matching objective.
//!
//! An open path is closed clockwise without self-intersection, then
//! described by the Fourier coefficients of its normalized tangent-angle
//! function (angular deviation from uniform turning, as a function of
//! normalized arc length `t in [0, 2 pi)`). For a polygon the turning is
//! concentrated at the vertices, so the coefficients have closed forms:
//! `A_n = -1/(n pi) sum_k dphi_k sin(n t_k)` and
//! `B_n = 1/(n pi) sum_k dphi_k cos(n t_k)`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::geom::{cross, segments_intersect, signed_area, wrap_angle, Vec2};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PathPolyline {
    pub points: Vec<Vec2>,
    pub closed: bool,
    /// The first `n_open` points are the original open path; later points
    /// belong to the closure.
    pub n_open: usize,
}

impl PathPolyline {
    pub fn open(points: Vec<Vec2>) -> Self {
        let n_open = points.len();
        PathPolyline { points, closed: false, n_open }
    }

    /// Length of the original open path.
    pub fn open_length(&self) -> f64 {
        self.points[..self.n_open].windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathDescriptor {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// Length of the open path (mm).
    pub length: f64,
    /// Angle of the first open segment from the +x axis (rad).
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveWeights {
    pub w_a: f64,
    pub w_b: f64,
    pub w_l: f64,
    pub w_theta: f64,
    /// Volume penalty parameter, applied when `V >= V*`.
    pub lambda_v: f64,
    /// Permitted volume fraction.
    pub v_star: f64,
}

impl Default for ObjectiveWeights {
    fn default() -> Self {
        ObjectiveWeights { w_a: 100.0, w_b: 100.0, w_l: 1.0, w_theta: 0.1, lambda_v: 20.0, v_star: 0.30 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveBreakdown {
    pub a_err: f64,
    pub b_err: f64,
    pub l_err: f64,
    pub theta_err: f64,
    pub penalty: f64,
    pub total: f64,
}

/// Drop consecutive duplicates (relative to the path extent).
fn dedup(points: &[Vec2]) -> Vec<Vec2> {
    let extent = bbox_diag(points);
    let tol = 1e-12 * extent.max(f64::MIN_POSITIVE);
    let mut out: Vec<Vec2> = Vec::with_capacity(points.len());
    for p in points {
        if out.last().map_or(true, |q| (p - q).norm() > tol) {
            out.push(*p);
        }
    }
    out
}

fn bbox(points: &[Vec2]) -> (Vec2, Vec2) {
    let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    (lo, hi)
}

fn bbox_diag(points: &[Vec2]) -> f64 {
    let (lo, hi) = bbox(points);
    (hi - lo).norm()
}

/// Intersection test that ignores the touching of segments at a shared end
/// point.
fn crosses(p1: &Vec2, p2: &Vec2, q1: &Vec2, q2: &Vec2) -> bool {
    let shrink = |a: &Vec2, b: &Vec2, other: [&Vec2; 2]| {
        let d = b - a;
        let s = 1e-9;
        let a2 = if other.iter().any(|o| *o == a) { a + s * d } else { *a };
        let b2 = if other.iter().any(|o| *o == b) { b - s * d } else { *b };
        (a2, b2)
    };
    let (a1, a2) = shrink(p1, p2, [q1, q2]);
    let (b1, b2) = shrink(q1, q2, [p1, p2]);
    segments_intersect(&a1, &a2, &b1, &b2)
}

fn path_self_intersects(p: &[Vec2]) -> bool {
    let n = p.len();
    for i in 0..n.saturating_sub(1) {
        for j in i + 1..n - 1 {
            if crosses(&p[i], &p[i + 1], &p[j], &p[j + 1]) {
                return true;
            }
        }
    }
    false
}

fn polyline_crosses(closure: &[Vec2], path: &[Vec2]) -> bool {
    for c in closure.windows(2) {
        for s in path.windows(2) {
            if crosses(&c[0], &c[1], &s[0], &s[1]) {
                return true;
            }
        }
    }
    false
}

fn is_collinear(p: &[Vec2]) -> bool {
    let d = p[p.len() - 1] - p[0];
    let scale = bbox_diag(p).powi(2);
    d.norm() > 0.0 && p.iter().all(|q| cross(&d, &(q - p[0])).abs() <= 1e-12 * scale)
}

/// Close an open path clockwise without self-intersection. The chord from
/// end to start is used when it works; otherwise the closure leaves the end
/// point along an axis ray, follows an enlarged bounding box and returns to
/// the start along another axis ray, taking the shortest valid option.
pub fn close_path(path: &PathPolyline) -> Result<PathPolyline> {
    let pts = dedup(&path.points[..path.n_open]);
    if pts.len() < 2 {
        return Err(Error::DegeneratePath("fewer than two distinct points".into()));
    }
    if path_self_intersects(&pts) {
        return Err(Error::SelfIntersectingInput);
    }
    let n_open = pts.len();
    if pts.len() == 2 || is_collinear(&pts) {
        return Ok(PathPolyline { points: pts, closed: true, n_open });
    }
    let (s, e) = (pts[0], pts[n_open - 1]);
    let valid = |closure: &[Vec2]| {
        let mut poly = pts.clone();
        poly.extend_from_slice(&closure[1..closure.len() - 1]);
        !polyline_crosses(closure, &pts) && signed_area(&poly) < 0.0
    };
    if valid(&[e, s]) {
        return Ok(PathPolyline { points: pts, closed: true, n_open });
    }

    let (lo, hi) = bbox(&pts);
    let margin = 0.1 * (hi - lo).norm();
    let lo = lo - Vec2::new(margin, margin);
    let hi = hi + Vec2::new(margin, margin);
    let corners = [lo, Vec2::new(hi.x, lo.y), hi, Vec2::new(lo.x, hi.y)];
    let w = hi.x - lo.x;
    let h = hi.y - lo.y;
    let perimeter = 2.0 * (w + h);
    // counter-clockwise perimeter coordinate of a point on the box
    let coord = |p: &Vec2| {
        if p.y == lo.y {
            p.x - lo.x
        } else if p.x == hi.x {
            w + p.y - lo.y
        } else if p.y == hi.y {
            w + h + hi.x - p.x
        } else {
            2.0 * w + h + hi.y - p.y
        }
    };
    let corner_coord = [0.0, w, w + h, 2.0 * w + h];
    let exits = |p: &Vec2| {
        [Vec2::new(p.x, lo.y), Vec2::new(hi.x, p.y), Vec2::new(p.x, hi.y), Vec2::new(lo.x, p.y)]
    };
    let mut best: Option<(f64, Vec<Vec2>)> = None;
    for xe in exits(&e) {
        for xs in exits(&s) {
            let (ce, cs) = (coord(&xe), coord(&xs));
            for ccw in [true, false] {
                let mut closure = vec![e, xe];
                let span = if ccw { (cs - ce).rem_euclid(perimeter) } else { (ce - cs).rem_euclid(perimeter) };
                let mut walk: Vec<(f64, Vec2)> = (0..4)
                    .filter_map(|k| {
                        let d = if ccw {
                            (corner_coord[k] - ce).rem_euclid(perimeter)
                        } else {
                            (ce - corner_coord[k]).rem_euclid(perimeter)
                        };
                        (d > 0.0 && d < span).then_some((d, corners[k]))
                    })
                    .collect();
                walk.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
                closure.extend(walk.into_iter().map(|(_, c)| c));
                closure.push(xs);
                closure.push(s);
                let closure = dedup(&closure);
                if closure.len() < 3 || !valid(&closure) {
                    continue;
                }
                let len: f64 = closure.windows(2).map(|c| (c[1] - c[0]).norm()).sum();
                if best.as_ref().map_or(true, |b| len < b.0 * (1.0 - 1e-9)) {
                    best = Some((len, closure));
                }
            }
        }
    }
    let (_, closure) = best.ok_or(Error::ClosureFailed)?;
    let mut points = pts;
    points.extend_from_slice(&closure[1..closure.len() - 1]);
    Ok(PathPolyline { points, closed: true, n_open })
}

/// Turning angles at each vertex of a closed polygon (vertex 0 turns from
/// the closing edge onto the first edge) and the normalized arc-length
/// position of each vertex.
fn turning(points: &[Vec2]) -> (Vec<f64>, Vec<f64>, f64) {
    let m = points.len();
    let edges: Vec<Vec2> = (0..m).map(|k| points[(k + 1) % m] - points[k]).collect();
    let total: f64 = edges.iter().map(|e| e.norm()).sum();
    let mut dphi = Vec::with_capacity(m);
    let mut t = Vec::with_capacity(m);
    let mut s = 0.0;
    for k in 0..m {
        let prev = edges[(k + m - 1) % m];
        let cur = edges[k];
        let mut a = cross(&prev, &cur).atan2(prev.dot(&cur));
        // a full reversal counts as a clockwise turn
        if a.abs() > PI - 1e-9 {
            a = -PI;
        }
        dphi.push(a);
        t.push(2.0 * PI * s / total);
        s += cur.norm();
    }
    (dphi, t, total)
}

/// Descriptor of a closed, clockwise path with `n` harmonics.
pub fn descriptor(path: &PathPolyline, n: usize) -> Result<PathDescriptor> {
    if !path.closed {
        return Err(Error::DegeneratePath("path must be closed".into()));
    }
    let pts = &path.points;
    if pts.len() < 2 || path.n_open < 2 {
        return Err(Error::DegeneratePath("fewer than two points".into()));
    }
    let length = path.open_length();
    if !(length > 0.0) {
        return Err(Error::DegeneratePath("zero length".into()));
    }
    let (dphi, t, _) = turning(pts);
    let net: f64 = dphi.iter().sum();
    if (net + 2.0 * PI).abs() > 1e-6 {
        return Err(Error::DegeneratePath(format!("closed path is not a simple clockwise loop (net turning {net})")));
    }
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for h in 1..=n {
        let hf = h as f64;
        let (mut sa, mut sb) = (0.0, 0.0);
        for (d, tk) in dphi.iter().zip(&t) {
            let (sn, cs) = (hf * tk).sin_cos();
            sa += d * sn;
            sb += d * cs;
        }
        a.push(-sa / (hf * PI));
        b.push(sb / (hf * PI));
    }
    let first = pts[1] - pts[0];
    Ok(PathDescriptor { a, b, length, theta: first.y.atan2(first.x) })
}

/// Close an open point sequence and describe it.
pub fn describe_open(points: &[Vec2], n: usize) -> Result<PathDescriptor> {
    descriptor(&close_path(&PathPolyline::open(points.to_vec()))?, n)
}

/// Weighted shape, size and orientation errors plus the volume penalty.
/// The orientation difference is wrapped into `(-pi, pi]`.
pub fn objective(
    actual: &PathDescriptor,
    specified: &PathDescriptor,
    w: &ObjectiveWeights,
    volume_fraction: f64,
) -> Result<ObjectiveBreakdown> {
    if actual.a.len() != specified.a.len() || actual.b.len() != specified.b.len() {
        return Err(Error::MismatchedHarmonics(actual.a.len(), specified.a.len()));
    }
    let sq = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| (p - q).powi(2)).sum::<f64>();
    let a_err = sq(&specified.a, &actual.a);
    let b_err = sq(&specified.b, &actual.b);
    let l_err = (specified.length - actual.length).powi(2);
    let theta_err = wrap_angle(specified.theta - actual.theta).powi(2);
    let penalty = if volume_fraction >= w.v_star { w.lambda_v * (volume_fraction - w.v_star) } else { 0.0 };
    let total = w.w_a * a_err + w.w_b * b_err + w.w_l * l_err + w.w_theta * theta_err + penalty;
    Ok(ObjectiveBreakdown { a_err, b_err, l_err, theta_err, penalty, total })
}

/// Relative length deviation in percent.
pub fn length_deviation(l_s: f64, l_a: f64) -> f64 {
    (l_s - l_a).abs() / l_s * 100.0
}

/// Parse `x,y` lines (mm). Blank lines, `#` comments and a non-numeric
/// header line are skipped.
pub fn read_path_csv(text: &str, file: &str) -> Result<Vec<Vec2>> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Option<Vec<f64>> = fields.iter().map(|f| f.parse::<f64>().ok()).collect();
        match parsed {
            Some(v) if v.len() == 2 => out.push(Vec2::new(v[0], v[1])),
            None if out.is_empty() && ln == 0 => continue,
            _ => {
                return Err(Error::Parse { file: file.into(), line: ln + 1, msg: format!("expected `x,y`, got `{line}`") })
            }
        }
    }
    Ok(out)
}

pub fn write_path_csv(points: &[Vec2]) -> String {
    let mut s = String::from("x,y\n");
    for p in points {
        let _ = writeln!(s, "{:?},{:?}", p.x, p.y);
    }
    s
}

/// `m,A,B` rows followed by `L` and `theta`.
pub fn descriptor_csv(d: &PathDescriptor) -> String {
    let mut s = String::from("m,A,B\n");
    for (m, (a, b)) in d.a.iter().zip(&d.b).enumerate() {
        let _ = writeln!(s, "{},{:e},{:e}", m + 1, a, b);
    }
    let _ = writeln!(s, "L,{:?}\ntheta,{:?}", d.length, d.theta);
    s
}
