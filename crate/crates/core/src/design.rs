//! Negative circular masks, the design vector and rigid contact surfaces.

use std::fmt::Write as _;

use crate::geom::Vec2;
use crate::mesh::{cell_centroid, HexMesh};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mask {
    pub x: f64,
    pub y: f64,
    pub r: f64,
    /// Contact surface flag, 0 or 1.
    pub s: u8,
    /// Contact surface radius as a fraction of `r`.
    pub f: f64,
}

impl Mask {
    pub fn center(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    /// Strict containment: a point exactly on the circle is outside.
    pub fn contains(&self, p: &Vec2) -> bool {
        (p - self.center()).norm() < self.r
    }
}

/// Box constraints on the design variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignBounds {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub r: (f64, f64),
    pub f_max: f64,
    pub force: (f64, f64),
}

impl DesignBounds {
    pub fn for_domain(lx: f64, ly: f64) -> Self {
        DesignBounds { x: (0.0, lx), y: (0.0, ly), r: (0.1, 8.0), f_max: 0.9, force: (-500.0, 500.0) }
    }

    pub fn contains(&self, v: &DesignVector) -> bool {
        let within = |val: f64, (lo, hi): (f64, f64)| val >= lo && val <= hi;
        v.masks.iter().all(|m| {
            within(m.x, self.x)
                && within(m.y, self.y)
                && within(m.r, self.r)
                && m.s <= 1
                && within(m.f, (0.0, self.f_max))
        }) && within(v.force, self.force)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignVector {
    pub masks: Vec<Mask>,
    /// Signed input force magnitude along the prescribed direction (N).
    pub force: f64,
}

impl DesignVector {
    /// Masks on an `nx` x `ny` grid of cell-centred positions over the domain.
    pub fn grid(nx: usize, ny: usize, lx: f64, ly: f64, r: f64, s: u8, f: f64, force: f64) -> Self {
        let mut masks = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                masks.push(Mask {
                    x: lx * (i as f64 + 0.5) / nx as f64,
                    y: ly * (j as f64 + 0.5) / ny as f64,
                    r,
                    s,
                    f,
                });
            }
        }
        DesignVector { masks, force }
    }

    /// One line per mask `x y r s f`, then `F <force>`. Floats use the
    /// shortest representation that parses back to the same bits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for m in &self.masks {
            let _ = writeln!(out, "{:?} {:?} {:?} {} {:?}", m.x, m.y, m.r, m.s, m.f);
        }
        let _ = writeln!(out, "F {:?}", self.force);
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let err = |line: usize, msg: String| Error::Parse { file: "design".into(), line, msg };
        let mut masks = Vec::new();
        let mut force = None;
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks[0] == "F" {
                if toks.len() != 2 {
                    return Err(err(ln + 1, "expected `F <value>`".into()));
                }
                force = Some(toks[1].parse::<f64>().map_err(|e| err(ln + 1, e.to_string()))?);
                continue;
            }
            if force.is_some() {
                return Err(err(ln + 1, "mask line after force line".into()));
            }
            if toks.len() != 5 {
                return Err(err(ln + 1, format!("expected 5 fields `x y r s f`, got {}", toks.len())));
            }
            let num = |i: usize| toks[i].parse::<f64>().map_err(|e| err(ln + 1, e.to_string()));
            let s: u8 = toks[3].parse().map_err(|e: std::num::ParseIntError| err(ln + 1, e.to_string()))?;
            if s > 1 {
                return Err(err(ln + 1, format!("contact flag must be 0 or 1, got {s}")));
            }
            masks.push(Mask { x: num(0)?, y: num(1)?, r: num(2)?, s, f: num(4)? });
        }
        let force = force.ok_or_else(|| err(text.lines().count(), "missing `F <value>` line".into()))?;
        Ok(DesignVector { masks, force })
    }
}

/// A motionless rigid circular contact surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidSurface {
    pub center: Vec2,
    pub radius: f64,
}

impl RigidSurface {
    /// Counter-clockwise polygon with `max(16, ceil(2 pi R / h))` sides.
    pub fn polygon(&self, h: f64) -> Vec<Vec2> {
        let by_len = if h > 0.0 { (std::f64::consts::TAU * self.radius / h).ceil() as usize } else { 0 };
        let n = by_len.max(16);
        (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                self.center + self.radius * Vec2::new(t.cos(), t.sin())
            })
            .collect()
    }
}

/// Per-cell material state: `true` (rho = 1) unless the cell centroid lies
/// strictly inside some mask.
pub fn material_state(mesh: &HexMesh, masks: &[Mask]) -> Vec<bool> {
    (0..mesh.num_cells())
        .map(|c| {
            let p = cell_centroid(mesh, c).expect("index in range");
            !masks.iter().any(|m| m.contains(&p))
        })
        .collect()
}

pub fn rigid_surfaces(masks: &[Mask]) -> Vec<RigidSurface> {
    masks
        .iter()
        .filter(|m| m.s == 1 && m.f * m.r > 0.0)
        .map(|m| RigidSurface { center: m.center(), radius: m.f * m.r })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_honeycomb;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn no_masks_keeps_everything() {
        let m = generate_honeycomb(5, 5, 1.0).unwrap();
        assert!(material_state(&m, &[]).iter().all(|&r| r));
    }

    #[test]
    fn huge_mask_removes_everything() {
        let m = generate_honeycomb(5, 5, 1.0).unwrap();
        let big = Mask { x: 4.0, y: 4.0, r: 1e3, s: 0, f: 0.0 };
        assert!(material_state(&m, &[big]).iter().all(|&r| !r));
    }

    #[test]
    fn centroid_distance_rule() {
        let mask = Mask { x: 0.0, y: 0.0, r: 1.0, s: 0, f: 0.0 };
        assert!(mask.contains(&Vec2::new(0.5, 0.0)));
        assert!(!mask.contains(&Vec2::new(2.0, 0.0)));
        assert!(!mask.contains(&Vec2::new(1.0, 0.0)), "boundary counts as outside");

        let mesh = generate_honeycomb(8, 8, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let masks: Vec<Mask> = (0..6)
            .map(|_| Mask { x: rng.gen_range(0.0..12.0), y: rng.gen_range(0.0..14.0), r: rng.gen_range(0.5..3.0), s: 0, f: 0.0 })
            .collect();
        let rho = material_state(&mesh, &masks);
        for c in 0..mesh.num_cells() {
            let poly = mesh.cell_polygon(c);
            let cx = poly.iter().map(|p| p.x).sum::<f64>() / 6.0;
            let cy = poly.iter().map(|p| p.y).sum::<f64>() / 6.0;
            let inside = masks.iter().any(|m| ((cx - m.x).powi(2) + (cy - m.y).powi(2)).sqrt() < m.r);
            assert_eq!(rho[c], !inside);
        }
    }

    #[test]
    fn rigid_surface_generation() {
        let off = Mask { x: 1.0, y: 1.0, r: 2.0, s: 0, f: 0.5 };
        assert!(rigid_surfaces(&[off, off]).is_empty());
        let on = Mask { x: 5.0, y: 5.0, r: 2.0, s: 1, f: 0.5 };
        let rs = rigid_surfaces(&[on]);
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].center, Vec2::new(5.0, 5.0));
        assert!((rs[0].radius - 1.0).abs() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let masks: Vec<Mask> = (0..64)
            .map(|_| Mask { x: 0.0, y: 0.0, r: 1.0, s: rng.gen_range(0..2), f: 0.5 })
            .collect();
        let expected: usize = masks.iter().map(|m| m.s as usize).sum();
        assert_eq!(rigid_surfaces(&masks).len(), expected);
    }

    #[test]
    fn rigid_polygon_resolution() {
        let s = RigidSurface { center: Vec2::zeros(), radius: 1.0 };
        assert_eq!(s.polygon(1.0).len(), 16);
        assert_eq!(s.polygon(0.1).len(), 63);
        assert!(crate::geom::signed_area(&s.polygon(0.1)) > 0.0);
    }

    #[test]
    fn design_text_errors() {
        assert!(DesignVector::from_text("1 2 3 0 0.5\n").is_err());
        assert!(DesignVector::from_text("1 2 3 2 0.5\nF 1\n").is_err());
        assert!(DesignVector::from_text("1 2 3 0\nF 1\n").is_err());
    }

    proptest! {
        #[test]
        fn design_text_round_trip_is_bit_exact(
            vals in proptest::collection::vec((any::<f64>(), any::<f64>(), any::<f64>(), 0u8..2, any::<f64>()), 0..10),
            force in any::<f64>(),
        ) {
            prop_assume!(vals.iter().all(|v| v.0.is_finite() && v.1.is_finite() && v.2.is_finite() && v.4.is_finite()));
            prop_assume!(force.is_finite());
            let v = DesignVector {
                masks: vals.iter().map(|&(x, y, r, s, f)| Mask { x, y, r, s, f }).collect(),
                force,
            };
            let back = DesignVector::from_text(&v.to_text()).unwrap();
            prop_assert_eq!(back.masks.len(), v.masks.len());
            for (a, b) in back.masks.iter().zip(&v.masks) {
                prop_assert_eq!(a.x.to_bits(), b.x.to_bits());
                prop_assert_eq!(a.y.to_bits(), b.y.to_bits());
                prop_assert_eq!(a.r.to_bits(), b.r.to_bits());
                prop_assert_eq!(a.f.to_bits(), b.f.to_bits());
                prop_assert_eq!(a.s, b.s);
            }
            prop_assert_eq!(back.force.to_bits(), v.force.to_bits());
        }

        #[test]
        fn adding_a_mask_never_adds_material(x in 0.0..12.0f64, y in 0.0..14.0f64, r in 0.1..8.0f64) {
            let mesh = generate_honeycomb(8, 8, 1.0).unwrap();
            let base = vec![Mask { x: 3.0, y: 3.0, r: 2.0, s: 0, f: 0.0 }];
            let before = material_state(&mesh, &base).iter().filter(|&&b| b).count();
            let mut more = base.clone();
            more.push(Mask { x, y, r, s: 1, f: 0.9 });
            let after = material_state(&mesh, &more).iter().filter(|&&b| b).count();
            prop_assert!(after <= before);
            let rs = rigid_surfaces(&more);
            prop_assert_eq!(rs.len(), 1);
            prop_assert!(rs[0].radius < r);
            prop_assert!((rs[0].center - Vec2::new(x, y)).norm() + rs[0].radius < r + 1e-12);
        }
    }
}
