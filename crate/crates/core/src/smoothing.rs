//! Candidate continua: retained cells, boundary smoothing and the two-stage
//! cell removal.
//!
//! Smoothing moves each boundary node to the foot of its perpendicular on the
//! chord joining the midpoints of its two incident boundary edges. All nodes
//! of one step are projected from the same snapshot. Interior nodes and the
//! cell connectivity never change.

use crate::design::{Mask, RigidSurface};
use crate::geom::{point_segment_distance, polygon_intersects_disk, project_onto_segment, signed_area, Vec2};
use crate::mesh::{extract_boundary_with, BoundaryChain, HexMesh};
use crate::{Error, Result};

/// Input/output ports and supports, as parent-mesh node indices.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Attachments {
    pub input: usize,
    pub output: usize,
    pub fixed: Vec<usize>,
}

/// Which retained cells the second removal stage deletes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondStage {
    /// Remove cells whose regular hexagon overlaps any mask disk.
    MaskIntersection,
    /// Keep the first-stage set.
    Off,
}

#[derive(Debug, Clone)]
pub struct Continuum<'m> {
    pub mesh: &'m HexMesh,
    pub retained: Vec<bool>,
    /// Working coordinates for every parent node (only nodes of retained
    /// cells are meaningful).
    pub coords: Vec<Vec2>,
    pub boundary: BoundaryChain,
    pub rigid: Vec<RigidSurface>,
    pub attachments: Attachments,
}

impl<'m> Continuum<'m> {
    /// Regular (unsmoothed) continuum over the retained cells.
    pub fn new(mesh: &'m HexMesh, retained: Vec<bool>, rigid: Vec<RigidSurface>, attachments: Attachments) -> Self {
        let boundary = extract_boundary_with(mesh, &retained, &mesh.nodes);
        Continuum { mesh, retained, coords: mesh.nodes.clone(), boundary, rigid, attachments }
    }

    pub fn retained_cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.retained.iter().enumerate().filter(|(_, &r)| r).map(|(c, _)| c)
    }

    pub fn num_retained(&self) -> usize {
        self.retained.iter().filter(|&&r| r).count()
    }

    pub fn cell_polygon(&self, cell: usize) -> [Vec2; 6] {
        let c = &self.mesh.cells[cell];
        std::array::from_fn(|k| self.coords[c[k]])
    }

    /// Nodes used by at least one retained cell.
    pub fn node_in_use(&self) -> Vec<bool> {
        let mut used = vec![false; self.mesh.num_nodes()];
        for c in self.retained_cells() {
            for &n in &self.mesh.cells[c] {
                used[n] = true;
            }
        }
        used
    }

    pub fn boundary_node_mask(&self) -> Vec<bool> {
        let mut b = vec![false; self.mesh.num_nodes()];
        for lp in &self.boundary.loops {
            for &n in &lp.nodes {
                b[n] = true;
            }
        }
        b
    }

    /// Area of the working geometry.
    pub fn area(&self) -> f64 {
        self.retained_cells().map(|c| signed_area(&self.cell_polygon(c))).sum()
    }

    /// Volume fraction relative to the full parent domain.
    pub fn volume_fraction(&self) -> f64 {
        self.area() / (self.mesh.cell_area() * self.mesh.num_cells() as f64)
    }

    pub fn mean_boundary_edge(&self) -> f64 {
        self.boundary.mean_edge_length(&self.coords)
    }

    /// Continuum restricted to a subset of its cells, restored to regular
    /// geometry.
    pub fn restricted(&self, retained: Vec<bool>) -> Continuum<'m> {
        Continuum::new(self.mesh, retained, self.rigid.clone(), self.attachments.clone())
    }
}

/// Signed areas of the six centroid-fan triangles of a polygon, ordered like
/// its edges. The centroid is the vertex mean.
pub fn fan_areas(poly: &[Vec2]) -> Vec<f64> {
    let c = crate::geom::vertex_mean(poly);
    let n = poly.len();
    (0..n)
        .map(|k| 0.5 * crate::geom::cross(&(poly[k] - c), &(poly[(k + 1) % n] - c)))
        .collect()
}

fn first_flipped(c: &Continuum) -> Option<usize> {
    c.retained_cells().find(|&cell| fan_areas(&c.cell_polygon(cell)).iter().any(|&a| a <= 0.0))
}

/// Perpendicular distance of a boundary node to its midpoint chord, and the
/// projected position.
fn chord_projection(prev: &Vec2, p: &Vec2, next: &Vec2) -> (f64, Vec2) {
    let m1 = 0.5 * (prev + p);
    let m2 = 0.5 * (p + next);
    let (_, foot) = project_onto_segment(p, &m1, &m2);
    ((p - foot).norm(), foot)
}

fn loop_neighbours(chain: &BoundaryChain, n_nodes: usize) -> Vec<Option<(usize, usize)>> {
    let mut seen = vec![0u8; n_nodes];
    let mut nb = vec![None; n_nodes];
    for lp in &chain.loops {
        let len = lp.len();
        for i in 0..len {
            let n = lp.nodes[i];
            seen[n] = seen[n].saturating_add(1);
            nb[n] = Some((lp.nodes[(i + len - 1) % len], lp.nodes[(i + 1) % len]));
        }
    }
    // pinch points (more than two incident boundary edges) are left alone
    for (n, s) in seen.iter().enumerate() {
        if *s > 1 {
            nb[n] = None;
        }
    }
    nb
}

/// Largest distance of a boundary node to its midpoint chord.
pub fn max_notch_depth(c: &Continuum) -> f64 {
    let nb = loop_neighbours(&c.boundary, c.mesh.num_nodes());
    nb.iter()
        .enumerate()
        .filter_map(|(n, x)| x.map(|(a, b)| chord_projection(&c.coords[a], &c.coords[n], &c.coords[b]).0))
        .fold(0.0, f64::max)
}

/// Apply `beta` smoothing steps in place. Fails with
/// [`Error::FlippedElement`] as soon as any fan triangle of a retained cell
/// has non-positive area.
pub fn smooth_boundary(c: &mut Continuum, beta: usize) -> Result<()> {
    let nb = loop_neighbours(&c.boundary, c.mesh.num_nodes());
    for step in 1..=beta {
        let snapshot = c.coords.clone();
        for (n, x) in nb.iter().enumerate() {
            if let Some((a, b)) = x {
                c.coords[n] = chord_projection(&snapshot[*a], &snapshot[n], &snapshot[*b]).1;
            }
        }
        if let Some(cell) = first_flipped(c) {
            return Err(Error::FlippedElement { cell, step });
        }
    }
    Ok(())
}

/// Smooth for at most `beta` steps, stopping before the first step that
/// would leave some fan triangle with `floor` or less of its regular area.
/// Returns the number of steps applied.
pub fn smooth_boundary_guarded(c: &mut Continuum, beta: usize, floor: f64) -> usize {
    let nb = loop_neighbours(&c.boundary, c.mesh.num_nodes());
    for step in 0..beta {
        let snapshot = c.coords.clone();
        for (n, x) in nb.iter().enumerate() {
            if let Some((a, b)) = x {
                c.coords[n] = chord_projection(&snapshot[*a], &snapshot[n], &snapshot[*b]).1;
            }
        }
        if !jacobian_ok(c, floor) {
            c.coords = snapshot;
            return step;
        }
    }
    beta
}

/// `true` iff every fan triangle keeps more than `floor` of its regular
/// (parent mesh) area.
pub fn jacobian_ok(c: &Continuum, floor: f64) -> bool {
    min_jacobian_ratio(c) > floor
}

pub fn min_jacobian_ratio(c: &Continuum) -> f64 {
    let mut worst = f64::INFINITY;
    for cell in c.retained_cells() {
        let cur = fan_areas(&c.cell_polygon(cell));
        let reg = fan_areas(&c.mesh.cell_polygon(cell));
        for (a, r) in cur.iter().zip(&reg) {
            worst = worst.min(a / r);
        }
    }
    worst
}

/// Cells removed by the second stage: retained cells whose regular hexagon
/// overlaps some mask disk.
pub fn second_stage_cells(mesh: &HexMesh, retained: &[bool], masks: &[Mask]) -> Vec<usize> {
    (0..mesh.num_cells())
        .filter(|&c| retained[c])
        .filter(|&c| {
            let poly = mesh.cell_polygon(c);
            masks.iter().any(|m| polygon_intersects_disk(&poly, &m.center(), m.r))
        })
        .collect()
}

/// Two-stage removal: centroid-in-mask cells go first and the remainder is
/// smoothed; then the second-stage cells go, the remnant is reset to regular
/// geometry and smoothed again.
pub fn two_stage_removal<'m>(
    mesh: &'m HexMesh,
    masks: &[Mask],
    beta: usize,
    rule: SecondStage,
    rigid: Vec<RigidSurface>,
    attachments: Attachments,
) -> Result<Continuum<'m>> {
    removal(mesh, masks, beta, None, rule, rigid, attachments)
}

/// Two-stage removal where each smoothing pass stops at the Jacobian floor
/// instead of failing.
pub fn two_stage_removal_guarded<'m>(
    mesh: &'m HexMesh,
    masks: &[Mask],
    beta: usize,
    floor: f64,
    rule: SecondStage,
    rigid: Vec<RigidSurface>,
    attachments: Attachments,
) -> Result<Continuum<'m>> {
    removal(mesh, masks, beta, Some(floor.max(0.0)), rule, rigid, attachments)
}

fn removal<'m>(
    mesh: &'m HexMesh,
    masks: &[Mask],
    beta: usize,
    floor: Option<f64>,
    rule: SecondStage,
    rigid: Vec<RigidSurface>,
    attachments: Attachments,
) -> Result<Continuum<'m>> {
    let smooth = |c: &mut Continuum, beta: usize| -> Result<()> {
        match floor {
            Some(f) => {
                smooth_boundary_guarded(c, beta, f);
                Ok(())
            }
            None => smooth_boundary(c, beta),
        }
    };
    let first = crate::design::material_state(mesh, masks);
    if !first.iter().any(|&r| r) {
        return Err(Error::EmptyContinuum);
    }
    let mut stage1 = Continuum::new(mesh, first.clone(), rigid, attachments);
    smooth(&mut stage1, beta)?;

    let mut second = first;
    if rule == SecondStage::MaskIntersection {
        for c in second_stage_cells(mesh, &second, masks) {
            second[c] = false;
        }
    }
    if !second.iter().any(|&r| r) {
        return Err(Error::EmptyContinuum);
    }
    let mut stage2 = stage1.restricted(second);
    smooth(&mut stage2, beta)?;
    Ok(stage2)
}

/// Independent check used by tests: distance from `p` to the chord.
#[doc(hidden)]
pub fn chord_distance(prev: &Vec2, p: &Vec2, next: &Vec2) -> f64 {
    point_segment_distance(p, &(0.5 * (prev + p)), &(0.5 * (p + next)))
}
