//! Plain SVG output for topologies and deformed configurations.

use std::fmt::Write as _;

use crate::design::Mask;
use crate::fem::FeModel;
use crate::geom::Vec2;
use crate::smoothing::Continuum;

const WIDTH: f64 = 640.0;

/// Maps model coordinates (y up) to picture coordinates (y down).
struct Frame {
    min: Vec2,
    max: Vec2,
    scale: f64,
}

impl Frame {
    fn new(points: impl Iterator<Item = Vec2>) -> Self {
        let mut min = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut max = -min;
        for p in points {
            min = min.inf(&p);
            max = max.sup(&p);
        }
        if !min.x.is_finite() {
            min = Vec2::zeros();
            max = Vec2::new(1.0, 1.0);
        }
        let pad = 0.05 * (max - min).norm().max(1e-9);
        min -= Vec2::new(pad, pad);
        max += Vec2::new(pad, pad);
        Frame { min, max, scale: WIDTH / (max.x - min.x) }
    }

    fn map(&self, p: &Vec2) -> (f64, f64) {
        ((p.x - self.min.x) * self.scale, (self.max.y - p.y) * self.scale)
    }

    fn height(&self) -> f64 {
        (self.max.y - self.min.y) * self.scale
    }

    fn points(&self, pts: &[Vec2]) -> String {
        let mut s = String::new();
        for p in pts {
            let (x, y) = self.map(p);
            let _ = write!(s, "{x:.2},{y:.2} ");
        }
        s.trim_end().to_string()
    }

    fn open(&self, title: &str) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.2} {h:.2}\">\n<title>{title}</title>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
            w = WIDTH,
            h = self.height()
        )
    }
}

fn circle(fr: &Frame, c: &Vec2, r: f64, style: &str) -> String {
    let (x, y) = fr.map(c);
    format!("<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{:.2}\" {style}/>\n", r * fr.scale)
}

fn marker(fr: &Frame, p: &Vec2, color: &str) -> String {
    circle(fr, p, 0.0, "").replace("r=\"0.00\" ", &format!("r=\"4\" fill=\"{color}\" "))
}

/// Retained cells, boundary loops, masks and their contact surfaces, ports.
pub fn topology_svg(c: &Continuum, masks: &[Mask], title: &str) -> String {
    let mesh = c.mesh;
    let (lx, ly) = mesh.domain_size;
    let fr = Frame::new([Vec2::zeros(), Vec2::new(lx, ly)].into_iter());
    let mut s = fr.open(title);
    let _ = writeln!(s, "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>", fr.map(&Vec2::new(0.0, ly)).0, fr.map(&Vec2::new(0.0, ly)).1, lx * fr.scale, ly * fr.scale);
    s.push_str("<g fill=\"#9ab\" stroke=\"#567\" stroke-width=\"0.4\">\n");
    for cell in c.retained_cells() {
        let _ = writeln!(s, "<polygon points=\"{}\"/>", fr.points(&c.cell_polygon(cell)));
    }
    s.push_str("</g>\n<g fill=\"none\" stroke=\"#123\" stroke-width=\"1.5\">\n");
    for lp in &c.boundary.loops {
        let pts: Vec<Vec2> = lp.nodes.iter().map(|&n| c.coords[n]).collect();
        let _ = writeln!(s, "<polygon points=\"{}\"/>", fr.points(&pts));
    }
    s.push_str("</g>\n");
    for m in masks {
        s.push_str(&circle(&fr, &m.center(), m.r, "fill=\"none\" stroke=\"#c33\" stroke-dasharray=\"3 2\""));
    }
    for r in &c.rigid {
        s.push_str(&circle(&fr, &r.center, r.radius, "fill=\"#444\""));
    }
    let a = &c.attachments;
    for &n in &a.fixed {
        s.push_str(&marker(&fr, &mesh.nodes[n], "#2a2"));
    }
    s.push_str(&marker(&fr, &mesh.nodes[a.input], "#d70"));
    s.push_str(&marker(&fr, &mesh.nodes[a.output], "#07d"));
    s.push_str("</svg>\n");
    s
}

/// Deformed elements at displacement `u`, the rigid surfaces, the path traced
/// so far and the specified path (anchored at the undeformed output node).
pub fn deformation_svg(model: &FeModel, u: &[f64], traced: &[Vec2], specified: &[Vec2], title: &str) -> String {
    let x = model.positions(u);
    let anchor = model.x0[model.output];
    let spec: Vec<Vec2> = match specified.first() {
        Some(p0) => specified.iter().map(|p| anchor + (p - p0)).collect(),
        None => Vec::new(),
    };
    let rigid_pts = model.contact.rigid.iter().flatten().copied();
    let fr = Frame::new(model.x0.iter().chain(x.iter()).copied().chain(rigid_pts).chain(spec.iter().copied()));
    let mut s = fr.open(title);
    s.push_str("<g fill=\"none\" stroke=\"#ccc\" stroke-width=\"0.4\">\n");
    for e in &model.elements {
        let pts: Vec<Vec2> = e.nodes.iter().map(|&n| model.x0[n]).collect();
        let _ = writeln!(s, "<polygon points=\"{}\"/>", fr.points(&pts));
    }
    s.push_str("</g>\n<g fill=\"#9ab\" stroke=\"#345\" stroke-width=\"0.4\">\n");
    for e in &model.elements {
        let pts: Vec<Vec2> = e.nodes.iter().map(|&n| x[n]).collect();
        let _ = writeln!(s, "<polygon points=\"{}\"/>", fr.points(&pts));
    }
    s.push_str("</g>\n<g fill=\"#444\">\n");
    for poly in &model.contact.rigid {
        let _ = writeln!(s, "<polygon points=\"{}\"/>", fr.points(poly));
    }
    s.push_str("</g>\n");
    if spec.len() > 1 {
        let _ = writeln!(s, "<polyline points=\"{}\" fill=\"none\" stroke=\"#2a2\" stroke-dasharray=\"4 2\"/>", fr.points(&spec));
    }
    if traced.len() > 1 {
        let _ = writeln!(s, "<polyline points=\"{}\" fill=\"none\" stroke=\"#c33\" stroke-width=\"1.5\"/>", fr.points(traced));
    }
    s.push_str(&marker(&fr, &x[model.input], "#d70"));
    s.push_str(&marker(&fr, &x[model.output], "#07d"));
    s.push_str("</svg>\n");
    s
}
