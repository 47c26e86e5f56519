//! Honeycomb parent tessellation of the rectangular design domain.
//!
//! Hexagons are flat-topped and laid out in columns; odd columns are shifted
//! up by half a cell height. Cell `(i, j)` (column `i`, row `j`) has index
//! `j * nx + i`. Node coordinates are generated on an integer lattice
//! (`x` in units of a/2, `y` in units of sqrt(3)a/2), so shared corners are
//! merged exactly.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::geom::{signed_area, vertex_mean, Vec2};
use crate::{Error, Result};

/// Corner offsets of a flat-top hexagon on the integer lattice, counter-clockwise
/// starting from the rightmost corner.
const CORNER_DX: [i64; 6] = [2, 1, -1, -2, -1, 1];
const CORNER_DY: [i64; 6] = [0, 1, 1, 0, -1, -1];

#[derive(Debug, Clone)]
pub struct HexMesh {
    pub nodes: Vec<Vec2>,
    pub cells: Vec<[usize; 6]>,
    pub nx: usize,
    pub ny: usize,
    pub circumradius: f64,
    /// Nominal domain extent `(L_x, L_y)` in mm.
    pub domain_size: (f64, f64),
    /// `neighbors[c][k]` is the cell across edge `(k, k+1)` of cell `c`.
    pub neighbors: Vec<[Option<usize>; 6]>,
}

impl HexMesh {
    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn cell_polygon(&self, cell: usize) -> [Vec2; 6] {
        let c = &self.cells[cell];
        std::array::from_fn(|k| self.nodes[c[k]])
    }

    /// Area of one regular cell.
    pub fn cell_area(&self) -> f64 {
        1.5 * 3f64.sqrt() * self.circumradius * self.circumradius
    }

    /// Characteristic length `max(L_x, L_y)`.
    pub fn characteristic_length(&self) -> f64 {
        self.domain_size.0.max(self.domain_size.1)
    }

    pub fn nearest_node(&self, p: &Vec2) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, n) in self.nodes.iter().enumerate() {
            let d = (n - p).norm_squared();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }

    /// Plain-text listing: `id x y` per node, then `id n1..n6` per cell.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# nodes {}", self.nodes.len());
        for (i, p) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "{} {} {}", i, p.x, p.y);
        }
        let _ = writeln!(s, "# cells {}", self.cells.len());
        for (i, c) in self.cells.iter().enumerate() {
            let _ = writeln!(s, "{} {} {} {} {} {} {}", i, c[0], c[1], c[2], c[3], c[4], c[5]);
        }
        s
    }
}

pub fn generate_honeycomb(nx: usize, ny: usize, circumradius: f64) -> Result<HexMesh> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidArgument(format!("cell counts must be positive, got {nx}x{ny}")));
    }
    if !(circumradius > 0.0) || !circumradius.is_finite() {
        return Err(Error::InvalidArgument(format!("circumradius must be positive, got {circumradius}")));
    }
    let a = circumradius;
    let hy = 3f64.sqrt() * a / 2.0;
    let mut index: HashMap<(i64, i64), usize> = HashMap::new();
    let mut nodes = Vec::new();
    let mut cells = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let cx = 2 + 3 * i as i64;
            let cy = 2 * j as i64 + 1 + (i % 2) as i64;
            let cell: [usize; 6] = std::array::from_fn(|k| {
                let key = (cx + CORNER_DX[k], cy + CORNER_DY[k]);
                *index.entry(key).or_insert_with(|| {
                    nodes.push(Vec2::new(key.0 as f64 * a / 2.0, key.1 as f64 * hy));
                    nodes.len() - 1
                })
            });
            cells.push(cell);
        }
    }

    let mut edge_owner: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    let mut neighbors = vec![[None; 6]; cells.len()];
    for (c, cell) in cells.iter().enumerate() {
        for k in 0..6 {
            let (p, q) = (cell[k], cell[(k + 1) % 6]);
            let key = (p.min(q), p.max(q));
            if let Some(&(other, ok)) = edge_owner.get(&key) {
                neighbors[c][k] = Some(other);
                neighbors[other][ok] = Some(c);
            } else {
                edge_owner.insert(key, (c, k));
            }
        }
    }

    let lx = a * (1.5 * nx as f64 + 0.5);
    let ly = 2.0 * hy * ny as f64;
    Ok(HexMesh { nodes, cells, nx, ny, circumradius: a, domain_size: (lx, ly), neighbors })
}

pub fn cell_centroid(mesh: &HexMesh, cell: usize) -> Result<Vec2> {
    if cell >= mesh.cells.len() {
        return Err(Error::OutOfRange { index: cell, len: mesh.cells.len() });
    }
    Ok(vertex_mean(&mesh.cell_polygon(cell)))
}

/// One closed boundary loop. Edge `i` runs from `nodes[i]` to
/// `nodes[(i + 1) % len]` and belongs to `cells[i]`; material lies on the
/// left of every edge, so exterior loops run counter-clockwise and holes
/// clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLoop {
    pub nodes: Vec<usize>,
    pub cells: Vec<usize>,
    pub exterior: bool,
}

impl BoundaryLoop {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge(&self, i: usize) -> (usize, usize) {
        (self.nodes[i], self.nodes[(i + 1) % self.nodes.len()])
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundaryChain {
    pub loops: Vec<BoundaryLoop>,
}

impl BoundaryChain {
    pub fn num_edges(&self) -> usize {
        self.loops.iter().map(|l| l.len()).sum()
    }

    /// Mean edge length for the given node coordinates.
    pub fn mean_edge_length(&self, coords: &[Vec2]) -> f64 {
        let mut total = 0.0;
        let mut n = 0usize;
        for lp in &self.loops {
            for i in 0..lp.len() {
                let (a, b) = lp.edge(i);
                total += (coords[b] - coords[a]).norm();
                n += 1;
            }
        }
        if n == 0 {
            0.0
        } else {
            total / n as f64
        }
    }
}

/// Walk the edges used by exactly one retained cell into closed loops.
pub fn extract_boundary(mesh: &HexMesh, retained: &[bool]) -> BoundaryChain {
    extract_boundary_with(mesh, retained, &mesh.nodes)
}

/// As [`extract_boundary`], classifying loop orientation with the given
/// (possibly smoothed) coordinates.
pub fn extract_boundary_with(mesh: &HexMesh, retained: &[bool], coords: &[Vec2]) -> BoundaryChain {
    // directed boundary edges; outgoing[node] lists edge ids starting there
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); mesh.nodes.len()];
    for (c, cell) in mesh.cells.iter().enumerate() {
        if !retained[c] {
            continue;
        }
        for k in 0..6 {
            let open = match mesh.neighbors[c][k] {
                Some(nb) => !retained[nb],
                None => true,
            };
            if open {
                let e = (cell[k], cell[(k + 1) % 6], c);
                outgoing[e.0].push(edges.len());
                edges.push(e);
            }
        }
    }
    let mut used = vec![false; edges.len()];
    let mut loops = Vec::new();
    for start in 0..edges.len() {
        if used[start] {
            continue;
        }
        let mut nodes = Vec::new();
        let mut cells = Vec::new();
        let mut e = start;
        loop {
            used[e] = true;
            let (from, to, cell) = edges[e];
            nodes.push(from);
            cells.push(cell);
            if to == edges[start].0 {
                break;
            }
            // honeycomb boundaries have one outgoing edge per node; fall back
            // to the first unused one otherwise
            match outgoing[to].iter().copied().find(|&x| !used[x]) {
                Some(next) => e = next,
                None => break,
            }
        }
        let poly: Vec<Vec2> = nodes.iter().map(|&n| coords[n]).collect();
        let exterior = signed_area(&poly) > 0.0;
        loops.push(BoundaryLoop { nodes, cells, exterior });
    }
    BoundaryChain { loops }
}

/// Cells grouped into edge-connected components (labels per cell, `usize::MAX`
/// for cells not retained).
pub fn connected_components(mesh: &HexMesh, retained: &[bool]) -> Vec<usize> {
    let mut label = vec![usize::MAX; mesh.cells.len()];
    let mut next = 0;
    let mut stack = Vec::new();
    for s in 0..mesh.cells.len() {
        if !retained[s] || label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        stack.push(s);
        while let Some(c) = stack.pop() {
            for nb in mesh.neighbors[c].iter().flatten() {
                if retained[*nb] && label[*nb] == usize::MAX {
                    label[*nb] = next;
                    stack.push(*nb);
                }
            }
        }
        next += 1;
    }
    label
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_bad_arguments() {
        assert!(generate_honeycomb(0, 3, 1.0).is_err());
        assert!(generate_honeycomb(3, 0, 1.0).is_err());
        assert!(generate_honeycomb(3, 3, 0.0).is_err());
        assert!(generate_honeycomb(3, 3, -1.0).is_err());
    }

    #[test]
    fn default_size_has_625_cells() {
        let m = generate_honeycomb(25, 25, 1.0).unwrap();
        assert_eq!(m.num_cells(), 625);
        assert!((m.characteristic_length() - 25.0 * 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn single_cell() {
        let m = generate_honeycomb(1, 1, 1.0).unwrap();
        assert_eq!(m.num_cells(), 1);
        assert_eq!(m.num_nodes(), 6);
        let area = signed_area(&m.cell_polygon(0));
        assert!((area - 1.5 * 3f64.sqrt()).abs() < 1e-12);
        assert!((area - 2.598).abs() < 1e-3);
    }

    #[test]
    fn node_count_matches_brute_force_dedup() {
        let a = 1.0;
        let m = generate_honeycomb(2, 2, a).unwrap();
        // oracle: every corner of every cell from trigonometry, merged within 1e-9
        let mut pts: Vec<Vec2> = Vec::new();
        for j in 0..2 {
            for i in 0..2 {
                let c = Vec2::new(a + 1.5 * a * i as f64, 3f64.sqrt() * a * (j as f64 + 0.5 + 0.5 * (i % 2) as f64));
                for k in 0..6 {
                    let t = std::f64::consts::PI / 3.0 * k as f64;
                    let p = c + a * Vec2::new(t.cos(), t.sin());
                    if !pts.iter().any(|q| (q - p).norm() < 1e-9) {
                        pts.push(p);
                    }
                }
            }
        }
        assert_eq!(m.num_nodes(), pts.len());
        for p in &pts {
            assert!(m.nodes.iter().any(|q| (q - p).norm() < 1e-9));
        }
    }

    #[test]
    fn cells_are_ccw_and_edge_connected() {
        let m = generate_honeycomb(6, 5, 0.7).unwrap();
        for c in 0..m.num_cells() {
            assert!(signed_area(&m.cell_polygon(c)) > 0.0);
            let mut ids = m.cells[c].to_vec();
            ids.sort();
            ids.dedup();
            assert_eq!(ids.len(), 6);
        }
        for a in 0..m.num_cells() {
            for b in (a + 1)..m.num_cells() {
                let shared = m.cells[a].iter().filter(|n| m.cells[b].contains(n)).count();
                assert!(shared == 0 || shared == 2, "cells {a},{b} share {shared} nodes");
                if shared == 2 {
                    assert!(m.neighbors[a].contains(&Some(b)));
                }
            }
        }
        for i in 0..m.num_nodes() {
            for j in (i + 1)..m.num_nodes() {
                assert!((m.nodes[i] - m.nodes[j]).norm() > 1e-9);
            }
        }
    }

    #[test]
    fn centroids() {
        let m = generate_honeycomb(3, 3, 1.0).unwrap();
        let c = cell_centroid(&m, 4).unwrap();
        let oracle = m.cells[4].iter().fold(Vec2::zeros(), |acc, &n| acc + m.nodes[n]) / 6.0;
        assert!((c - oracle).norm() < 1e-14);
        assert!(matches!(cell_centroid(&m, 9), Err(Error::OutOfRange { .. })));

        // regular hexagon about the origin, then translated
        let hex: Vec<Vec2> = (0..6)
            .map(|k| {
                let t = std::f64::consts::PI / 3.0 * k as f64;
                Vec2::new(t.cos(), t.sin())
            })
            .collect();
        assert!(vertex_mean(&hex).norm() < 1e-15);
        let moved: Vec<Vec2> = hex.iter().map(|p| p + Vec2::new(3.0, 4.0)).collect();
        assert!((vertex_mean(&moved) - Vec2::new(3.0, 4.0)).norm() < 1e-14);
        // distorted 6-gon: direct summation
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let poly: Vec<Vec2> = (0..6).map(|_| Vec2::new(rng.gen(), rng.gen())).collect();
        let sum = poly.iter().fold(Vec2::zeros(), |a, p| a + p);
        assert!((vertex_mean(&poly) - sum / 6.0).norm() < 1e-15);
    }

    fn turning(loop_: &BoundaryLoop, m: &HexMesh) -> f64 {
        let n = loop_.len();
        let mut total = 0.0;
        for i in 0..n {
            let a = m.nodes[loop_.nodes[(i + n - 1) % n]];
            let b = m.nodes[loop_.nodes[i]];
            let c = m.nodes[loop_.nodes[(i + 1) % n]];
            let d1 = b - a;
            let d2 = c - b;
            total += crate::geom::cross(&d1, &d2).atan2(d1.dot(&d2));
        }
        total
    }

    #[test]
    fn full_domain_has_one_exterior_loop() {
        let m = generate_honeycomb(25, 25, 1.0).unwrap();
        let b = extract_boundary(&m, &vec![true; 625]);
        assert_eq!(b.loops.len(), 1);
        assert!(b.loops[0].exterior);
        assert!((turning(&b.loops[0], &m) - std::f64::consts::TAU).abs() < 1e-9);
    }

    #[test]
    fn single_cell_loop() {
        let m = generate_honeycomb(3, 3, 1.0).unwrap();
        let mut r = vec![false; 9];
        r[4] = true;
        let b = extract_boundary(&m, &r);
        assert_eq!(b.loops.len(), 1);
        assert_eq!(b.loops[0].len(), 6);
    }

    #[test]
    fn ring_has_hole() {
        let m = generate_honeycomb(5, 5, 1.0).unwrap();
        let mut r = vec![true; 25];
        let center = 2 * 5 + 2;
        r[center] = false;
        let b = extract_boundary(&m, &r);
        assert_eq!(b.loops.len(), 2);
        assert_eq!(b.loops.iter().filter(|l| l.exterior).count(), 1);
        let hole = b.loops.iter().find(|l| !l.exterior).unwrap();
        assert_eq!(hole.len(), 6);
        assert!((turning(hole, &m) + std::f64::consts::TAU).abs() < 1e-9);
        // incidence oracle: edges used by exactly one retained cell
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for c in 0..25 {
            if !r[c] {
                continue;
            }
            for k in 0..6 {
                let (p, q) = (m.cells[c][k], m.cells[c][(k + 1) % 6]);
                *count.entry((p.min(q), p.max(q))).or_default() += 1;
            }
        }
        let single = count.values().filter(|&&v| v == 1).count();
        assert_eq!(single, b.num_edges());
    }

    #[test]
    fn random_retained_sets_close_loops() {
        let m = generate_honeycomb(8, 8, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let r: Vec<bool> = (0..64).map(|_| rng.gen_bool(0.6)).collect();
            if !r.iter().any(|&x| x) {
                continue;
            }
            // no two retained cells share a single node
            for a in 0..64 {
                for b in (a + 1)..64 {
                    if r[a] && r[b] {
                        let s = m.cells[a].iter().filter(|n| m.cells[b].contains(n)).count();
                        assert_ne!(s, 1);
                    }
                }
            }
            let chain = extract_boundary(&m, &r);
            for lp in &chain.loops {
                let t = turning(lp, &m);
                let expect = if lp.exterior { std::f64::consts::TAU } else { -std::f64::consts::TAU };
                assert!((t - expect).abs() < 1e-9);
                for (i, &c) in lp.cells.iter().enumerate() {
                    let (p, q) = lp.edge(i);
                    assert!(r[c]);
                    let cell = &m.cells[c];
                    let k = cell.iter().position(|&n| n == p).unwrap();
                    assert_eq!(cell[(k + 1) % 6], q);
                }
            }
        }
    }

    #[test]
    fn text_export_lists_everything() {
        let m = generate_honeycomb(2, 1, 1.0).unwrap();
        let t = m.to_text();
        assert_eq!(t.lines().count(), 2 + m.num_nodes() + m.num_cells());
        assert!(t.lines().any(|l| l.starts_with("0 ") && l.split_whitespace().count() == 3));
    }
}
