//! Finite element model of a continuum and assembly of the internal force
//! vector and consistent tangent.
//!
//! The formulation is total Lagrangian: shape function gradients are taken
//! once on the (smoothed) reference cells, and every fan quadrature point
//! evaluates the first Piola stress and its tangent.

use faer::sparse::SparseColMat;
use nalgebra::{Matrix2, SMatrix, SVector};
use rayon::prelude::*;

use super::material::{fidx, piola_and_tangent, strain_energy, MaterialParams};
use super::mvc::mvc_shape;
use super::quadrature::{fan_quadrature, TriangleRule};
use crate::contact::ContactGeometry;
use crate::geom::Vec2;
use crate::smoothing::Continuum;
use crate::{Error, Result};

/// One quadrature point: weight (reference area times thickness) and the
/// reference gradients of the six shape functions.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementPoint {
    pub weight: f64,
    pub grads: [Vec2; 6],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    /// Parent mesh cell id.
    pub cell: usize,
    /// Model node indices, counter-clockwise.
    pub nodes: [usize; 6],
    pub points: Vec<ElementPoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeModel {
    /// Model node -> parent mesh node.
    pub parent_nodes: Vec<usize>,
    /// Parent mesh node -> model node.
    pub local_of: Vec<Option<usize>>,
    /// Reference coordinates (mm).
    pub x0: Vec<Vec2>,
    pub elements: Vec<Element>,
    /// Per degree of freedom, `true` if prescribed to zero.
    pub fixed: Vec<bool>,
    pub material: MaterialParams,
    pub thickness: f64,
    pub input: usize,
    pub output: usize,
    /// Unit direction of the input force.
    pub force_dir: Vec2,
    pub contact: ContactGeometry,
    /// Characteristic length `L0` of the design domain (mm).
    pub char_length: f64,
}

/// Internal force vector and tangent, with dense per-element blocks kept
/// for sparse assembly.
pub struct Assembly {
    pub f_int: Vec<f64>,
    pub triplets: Vec<(usize, usize, f64)>,
}

type ElemVec = SVector<f64, 12>;
type ElemMat = SMatrix<f64, 12, 12>;

impl FeModel {
    /// Build the model from a smoothed continuum. Rigid surfaces are
    /// discretized with the mean boundary edge length.
    pub fn from_continuum(
        c: &Continuum,
        material: MaterialParams,
        rule: &TriangleRule,
        thickness: f64,
        force_dir: Vec2,
    ) -> Result<Self> {
        let mesh = c.mesh;
        let used = c.node_in_use();
        let mut local_of = vec![None; mesh.num_nodes()];
        let mut parent_nodes = Vec::new();
        for (n, &u) in used.iter().enumerate() {
            if u {
                local_of[n] = Some(parent_nodes.len());
                parent_nodes.push(n);
            }
        }
        if parent_nodes.is_empty() {
            return Err(Error::EmptyContinuum);
        }
        let x0: Vec<Vec2> = parent_nodes.iter().map(|&n| c.coords[n]).collect();
        let cells: Vec<usize> = c.retained_cells().collect();
        let elements = cells
            .par_iter()
            .map(|&cell| {
                let nodes: [usize; 6] = std::array::from_fn(|k| local_of[mesh.cells[cell][k]].expect("node in use"));
                let poly = c.cell_polygon(cell);
                let mut points = Vec::with_capacity(6 * rule.len());
                for q in fan_quadrature(&poly, rule) {
                    if !(q.weight > 0.0) {
                        return Err(Error::NonPositiveJacobian { cell, det: q.weight });
                    }
                    let shape = mvc_shape(&poly, &q.x)?;
                    let g = shape
                        .gradients
                        .ok_or_else(|| Error::DegeneratePolygon(format!("quadrature point on the boundary of cell {cell}")))?;
                    points.push(ElementPoint { weight: q.weight * thickness, grads: std::array::from_fn(|k| g[k]) });
                }
                Ok(Element { cell, nodes, points })
            })
            .collect::<Result<Vec<_>>>()?;

        let at = &c.attachments;
        let local = |n: usize, what: &str| {
            local_of
                .get(n)
                .copied()
                .flatten()
                .ok_or_else(|| Error::InvalidArgument(format!("{what} node {n} is not part of the continuum")))
        };
        let input = local(at.input, "input")?;
        let output = local(at.output, "output")?;
        let mut fixed = vec![false; 2 * parent_nodes.len()];
        for &f in &at.fixed {
            if let Some(l) = local_of.get(f).copied().flatten() {
                fixed[2 * l] = true;
                fixed[2 * l + 1] = true;
            }
        }
        let h = c.mean_boundary_edge();
        let contact = ContactGeometry {
            loops: c
                .boundary
                .loops
                .iter()
                .map(|lp| lp.nodes.iter().map(|&n| local_of[n].expect("boundary node in use")).collect())
                .collect(),
            rigid: c.rigid.iter().map(|r| r.polygon(h)).collect(),
            thickness,
            reference: x0.clone(),
        };
        let norm = force_dir.norm();
        if !(norm > 0.0) {
            return Err(Error::InvalidArgument("force direction must be nonzero".into()));
        }
        Ok(FeModel {
            parent_nodes,
            local_of,
            x0,
            elements,
            fixed,
            material,
            thickness,
            input,
            output,
            force_dir: force_dir / norm,
            contact,
            char_length: mesh.characteristic_length(),
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.x0.len()
    }

    pub fn num_dofs(&self) -> usize {
        2 * self.x0.len()
    }

    /// Current nodal positions `x0 + u`.
    pub fn positions(&self, u: &[f64]) -> Vec<Vec2> {
        self.x0.iter().enumerate().map(|(i, x)| x + Vec2::new(u[2 * i], u[2 * i + 1])).collect()
    }

    fn element_gradient(el: &Element, u: &[f64], p: &ElementPoint) -> Matrix2<f64> {
        let mut f = Matrix2::identity();
        for k in 0..6 {
            let n = el.nodes[k];
            let (ux, uy) = (u[2 * n], u[2 * n + 1]);
            let g = p.grads[k];
            f[(0, 0)] += ux * g.x;
            f[(0, 1)] += ux * g.y;
            f[(1, 0)] += uy * g.x;
            f[(1, 1)] += uy * g.y;
        }
        f
    }

    fn element_force_tangent(&self, el: &Element, u: &[f64], tangent: bool) -> Result<(ElemVec, ElemMat)> {
        let mut fe = ElemVec::zeros();
        let mut ke = ElemMat::zeros();
        for p in &el.points {
            let f = Self::element_gradient(el, u, p);
            let (pk, a) = piola_and_tangent(&f, &self.material).map_err(|e| match e {
                Error::NonPositiveJacobian { det, .. } => Error::NonPositiveJacobian { cell: el.cell, det },
                other => other,
            })?;
            // dF_iJ / du_(K,k) = delta_ik G_KJ
            let mut b = SMatrix::<f64, 4, 12>::zeros();
            for k in 0..6 {
                for i in 0..2 {
                    for jj in 0..2 {
                        b[(fidx(i, jj), 2 * k + i)] = p.grads[k][jj];
                    }
                }
            }
            let pv = SVector::<f64, 4>::new(pk[(0, 0)], pk[(0, 1)], pk[(1, 0)], pk[(1, 1)]);
            fe += p.weight * b.transpose() * pv;
            if tangent {
                ke += p.weight * b.transpose() * a * b;
            }
        }
        Ok((fe, ke))
    }

    /// Internal force vector only.
    pub fn internal_force(&self, u: &[f64]) -> Result<Vec<f64>> {
        Ok(self.assemble_impl(u, false)?.f_int)
    }

    /// Internal force vector and tangent triplets over all degrees of
    /// freedom (fixed ones included).
    pub fn assemble(&self, u: &[f64]) -> Result<Assembly> {
        self.assemble_impl(u, true)
    }

    fn assemble_impl(&self, u: &[f64], tangent: bool) -> Result<Assembly> {
        let blocks = self
            .elements
            .par_iter()
            .map(|el| self.element_force_tangent(el, u, tangent))
            .collect::<Result<Vec<_>>>()?;
        let mut f_int = vec![0.0; self.num_dofs()];
        let mut triplets = Vec::with_capacity(if tangent { 144 * blocks.len() } else { 0 });
        for (el, (fe, ke)) in self.elements.iter().zip(&blocks) {
            let dofs: [usize; 12] = std::array::from_fn(|k| 2 * el.nodes[k / 2] + k % 2);
            for r in 0..12 {
                f_int[dofs[r]] += fe[r];
            }
            if tangent {
                for c in 0..12 {
                    for r in 0..12 {
                        triplets.push((dofs[r], dofs[c], ke[(r, c)]));
                    }
                }
            }
        }
        Ok(Assembly { f_int, triplets })
    }

    /// Total stored energy.
    pub fn energy(&self, u: &[f64]) -> Result<f64> {
        let mut w = 0.0;
        for el in &self.elements {
            for p in &el.points {
                let f = Self::element_gradient(el, u, p);
                w += p.weight * strain_energy(&f, &self.material)?;
            }
        }
        Ok(w)
    }

    /// Dense tangent (for tests and small problems).
    pub fn dense_tangent(&self, u: &[f64]) -> Result<nalgebra::DMatrix<f64>> {
        let a = self.assemble(u)?;
        let n = self.num_dofs();
        let mut k = nalgebra::DMatrix::zeros(n, n);
        for (r, c, v) in a.triplets {
            k[(r, c)] += v;
        }
        Ok(k)
    }

    /// Free degrees of freedom and the map dof -> free index.
    pub fn free_map(&self) -> (Vec<usize>, Vec<Option<usize>>) {
        let mut free = Vec::new();
        let mut map = vec![None; self.num_dofs()];
        for (d, &fx) in self.fixed.iter().enumerate() {
            if !fx {
                map[d] = Some(free.len());
                free.push(d);
            }
        }
        (free, map)
    }

    /// Build the reduced sparse matrix over free dofs.
    pub fn reduced_matrix(
        &self,
        triplets: &[(usize, usize, f64)],
        map: &[Option<usize>],
        n_free: usize,
    ) -> Result<SparseColMat<usize, f64>> {
        let reduced: Vec<(usize, usize, f64)> = triplets
            .iter()
            .filter_map(|&(r, c, v)| Some((map[r]?, map[c]?, v)))
            .collect();
        SparseColMat::try_new_from_triplets(n_free, n_free, &reduced).map_err(|_| Error::SingularMatrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_honeycomb;
    use crate::smoothing::{smooth_boundary, Attachments};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn strip_model(rule: usize) -> FeModel {
        let mesh = Box::leak(Box::new(generate_honeycomb(4, 2, 1.0).unwrap()));
        let mut c = Continuum::new(mesh, vec![true; 8], vec![], Attachments { input: 0, output: 0, fixed: vec![] });
        smooth_boundary(&mut c, 3).unwrap();
        let mat = MaterialParams::new(2100.0, 0.33).unwrap();
        FeModel::from_continuum(&c, mat, &TriangleRule::new(rule).unwrap(), 1.0, Vec2::new(0.0, 1.0)).unwrap()
    }

    #[test]
    fn zero_displacement_is_stress_free() {
        let m = strip_model(7);
        let f = m.internal_force(&vec![0.0; m.num_dofs()]).unwrap();
        assert!(f.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn rigid_translation_is_force_free() {
        let m = strip_model(7);
        let u: Vec<f64> = (0..m.num_dofs()).map(|d| if d % 2 == 0 { 0.37 } else { -1.2 }).collect();
        let f = m.internal_force(&u).unwrap();
        let k = m.dense_tangent(&vec![0.0; m.num_dofs()]).unwrap();
        assert!(f.iter().map(|v| v.abs()).fold(0.0, f64::max) <= 1e-10 * k.norm());
    }

    #[test]
    fn tangent_matches_finite_differences() {
        let m = strip_model(3);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let u: Vec<f64> = (0..m.num_dofs()).map(|_| rng.gen_range(-0.05..0.05)).collect();
        let k = m.dense_tangent(&u).unwrap();
        let h = 1e-6;
        let mut fd = nalgebra::DMatrix::zeros(m.num_dofs(), m.num_dofs());
        for d in 0..m.num_dofs() {
            let mut up = u.clone();
            up[d] += h;
            let mut um = u.clone();
            um[d] -= h;
            let fp = m.internal_force(&up).unwrap();
            let fm = m.internal_force(&um).unwrap();
            for r in 0..m.num_dofs() {
                fd[(r, d)] = (fp[r] - fm[r]) / (2.0 * h);
            }
        }
        assert!((&k - &fd).norm() <= 1e-5 * k.norm());
    }

    #[test]
    fn internal_force_is_energy_gradient() {
        let m = strip_model(3);
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let u: Vec<f64> = (0..m.num_dofs()).map(|_| rng.gen_range(-0.05..0.05)).collect();
        let f = m.internal_force(&u).unwrap();
        let h = 1e-6;
        let mut err: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for d in 0..m.num_dofs() {
            let mut up = u.clone();
            up[d] += h;
            let mut um = u.clone();
            um[d] -= h;
            let g = (m.energy(&up).unwrap() - m.energy(&um).unwrap()) / (2.0 * h);
            err = err.max((g - f[d]).abs());
            scale = scale.max(f[d].abs());
        }
        assert!(err <= 1e-5 * scale, "{err} vs {scale}");
    }

    #[test]
    fn quadrature_weights_cover_the_area() {
        let m = strip_model(25);
        let total: f64 = m.elements.iter().flat_map(|e| e.points.iter()).map(|p| p.weight).sum();
        let area: f64 = m
            .elements
            .iter()
            .map(|e| crate::geom::signed_area(&e.nodes.iter().map(|&n| m.x0[n]).collect::<Vec<_>>()))
            .sum();
        assert!((total - area).abs() < 1e-10);
    }

    #[test]
    fn missing_port_is_reported() {
        let mesh = generate_honeycomb(2, 1, 1.0).unwrap();
        let lone = *mesh.cells[1].iter().find(|n| !mesh.cells[0].contains(n)).unwrap();
        let c = Continuum::new(&mesh, vec![true, false], vec![], Attachments { input: 0, output: lone, fixed: vec![] });
        let mat = MaterialParams::new(1.0, 0.3).unwrap();
        let r = FeModel::from_continuum(&c, mat, &TriangleRule::new(1).unwrap(), 1.0, Vec2::new(1.0, 0.0));
        assert!(r.is_err());
    }
}
