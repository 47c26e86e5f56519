//! Frictionless segment-to-segment contact with augmented Lagrange
//! multipliers.
//!
//! Slave points are the Gauss points of every deformable boundary segment.
//! Masters are rigid surface segments (mutual contact) or other deformable
//! boundary segments (self contact). Boundary loops keep material on their
//! left, so the outward normal of a segment `a -> b` is the right normal of
//! `b - a`.

use nalgebra::{SMatrix, SVector};
use rayon::prelude::*;

use crate::geom::{cross, right_normal, Vec2};

/// Gauss points on a slave segment, in `[-1, 1]`.
pub const SLAVE_GAUSS: [f64; 2] = [-0.577_350_269_189_625_8, 0.577_350_269_189_625_8];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContactMode {
    Mutual,
    SelfContact,
}

impl ContactMode {
    pub fn label(&self) -> &'static str {
        match self {
            ContactMode::Mutual => "mutual",
            ContactMode::SelfContact => "self",
        }
    }

    fn slot(&self) -> usize {
        match self {
            ContactMode::Mutual => 0,
            ContactMode::SelfContact => 1,
        }
    }
}

/// Closest point of `x_s` on segment `a -> b`: the coordinate
/// `xi in [-1, 1]` (clamped), the point itself and the outward unit normal.
pub fn closest_point(x_s: &Vec2, a: &Vec2, b: &Vec2) -> (f64, Vec2, Vec2) {
    let tau = b - a;
    let m2 = tau.norm_squared();
    let zeta = ((x_s - a).dot(&tau) / m2).clamp(0.0, 1.0);
    let x_p = a + zeta * tau;
    (2.0 * zeta - 1.0, x_p, right_normal(&tau) / m2.sqrt())
}

/// Signed normal gap; negative means penetration.
pub fn normal_gap(x_s: &Vec2, x_p: &Vec2, n_p: &Vec2) -> f64 {
    (x_s - x_p).dot(n_p)
}

/// Static description of the contact boundaries.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ContactGeometry {
    /// Deformable boundary loops as node indices into the displacement field.
    pub loops: Vec<Vec<usize>>,
    /// Rigid, motionless surfaces as closed counter-clockwise polygons.
    pub rigid: Vec<Vec<Vec2>>,
    /// Out-of-plane thickness (mm).
    pub thickness: f64,
    /// Contact-free reference positions; empty to skip the reference test.
    pub reference: Vec<Vec2>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct DefSegment {
    a: usize,
    b: usize,
    lp: usize,
    pos: usize,
}

impl ContactGeometry {
    fn segments(&self) -> Vec<DefSegment> {
        let mut out = Vec::new();
        for (lp, nodes) in self.loops.iter().enumerate() {
            let n = nodes.len();
            for pos in 0..n {
                out.push(DefSegment { a: nodes[pos], b: nodes[(pos + 1) % n], lp, pos });
            }
        }
        out
    }

    /// The reference configuration is contact free, so a slave point that
    /// already lies behind the master segment there faces it across material.
    fn open_in_reference(&self, s: &DefSegment, eta: f64, m: &DefSegment) -> bool {
        if self.reference.is_empty() {
            return true;
        }
        let x = &self.reference;
        let x_s = x[s.a] * (1.0 - eta) / 2.0 + x[s.b] * (1.0 + eta) / 2.0;
        let (_, x_p, n_p) = closest_point(&x_s, &x[m.a], &x[m.b]);
        normal_gap(&x_s, &x_p, &n_p) > 0.0
    }

    /// Number of slave Gauss points.
    pub fn num_slave_points(&self) -> usize {
        SLAVE_GAUSS.len() * self.loops.iter().map(|l| l.len()).sum::<usize>()
    }

    /// Mean deformable segment length at positions `x`.
    pub fn mean_edge_length(&self, x: &[Vec2]) -> f64 {
        let segs = self.segments();
        if segs.is_empty() {
            return 0.0;
        }
        segs.iter().map(|s| (x[s.b] - x[s.a]).norm()).sum::<f64>() / segs.len() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Master {
    Rigid { surface: usize, segment: usize },
    /// Deformable boundary segment with end nodes `p -> q`.
    Deformable { p: usize, q: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactPair {
    /// Slave point id, `2 * segment + gauss`.
    pub id: usize,
    /// Slave segment end nodes.
    pub slave: (usize, usize),
    /// Gauss coordinate of the slave point on its segment.
    pub eta: f64,
    pub mode: ContactMode,
    pub master: Master,
    pub x_s: Vec2,
    pub xi_p: f64,
    pub x_p: Vec2,
    pub n_p: Vec2,
    pub g_n: f64,
    /// Augmented multiplier `lambda_old - eps g_n` (MPa).
    pub lambda: f64,
    pub active: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactParams {
    /// Penalty for mutual contact (N/mm^3).
    pub eps_n: f64,
    /// Penalty for self contact (N/mm^3).
    pub eps_s: f64,
    /// Self pairs deeper than this are treated as spurious (mm).
    pub self_band: f64,
}

impl ContactParams {
    /// `eps_n = 50 E0 / L0`, `eps_s = 4 E0 / L0`.
    pub fn from_modulus(e0: f64, l0: f64, self_band: f64) -> Self {
        ContactParams { eps_n: 50.0 * e0 / l0, eps_s: 4.0 * e0 / l0, self_band }
    }

    fn eps(&self, mode: ContactMode) -> f64 {
        match mode {
            ContactMode::Mutual => self.eps_n,
            ContactMode::SelfContact => self.eps_s,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContactState {
    /// Candidate pairs from the last detection, active or not.
    pub pairs: Vec<ContactPair>,
    pub mutual_pairs_exist: bool,
    pub self_pairs_exist: bool,
    pub params: ContactParams,
    /// Converged multipliers per slave point and mode.
    pub lambda_old: Vec<[f64; 2]>,
}

impl ContactState {
    pub fn new(geom: &ContactGeometry, params: ContactParams) -> Self {
        ContactState {
            pairs: Vec::new(),
            mutual_pairs_exist: false,
            self_pairs_exist: false,
            params,
            lambda_old: vec![[0.0; 2]; geom.num_slave_points()],
        }
    }

    pub fn active(&self) -> impl Iterator<Item = &ContactPair> {
        self.pairs.iter().filter(|p| p.active)
    }

    pub fn num_active(&self) -> usize {
        self.active().count()
    }

    /// Largest penetration `-g_n` over active pairs (0 if none).
    pub fn max_penetration(&self) -> f64 {
        self.active().map(|p| -p.g_n).fold(0.0, f64::max)
    }

    /// `lambda_old <- lambda` for active pairs, zero elsewhere.
    pub fn augment(&mut self) {
        for l in self.lambda_old.iter_mut() {
            *l = [0.0; 2];
        }
        for p in self.pairs.iter().filter(|p| p.active) {
            self.lambda_old[p.id][p.mode.slot()] = p.lambda.max(0.0);
        }
    }

    /// Multiplier vector snapshot, for restoring after a failed increment.
    pub fn multipliers(&self) -> Vec<[f64; 2]> {
        self.lambda_old.clone()
    }

    pub fn restore_multipliers(&mut self, saved: Vec<[f64; 2]>) {
        self.lambda_old = saved;
    }
}

fn nearest_rigid(x_s: &Vec2, rigid: &[Vec<Vec2>]) -> Option<(Master, f64, Vec2, Vec2, f64)> {
    let mut best: Option<(Master, f64, Vec2, Vec2, f64)> = None;
    for (si, poly) in rigid.iter().enumerate() {
        let n = poly.len();
        for k in 0..n {
            let (xi, x_p, n_p) = closest_point(x_s, &poly[k], &poly[(k + 1) % n]);
            let d = (x_s - x_p).norm();
            if best.as_ref().map_or(true, |b| d < b.4) {
                best = Some((Master::Rigid { surface: si, segment: k }, xi, x_p, n_p, d));
            }
        }
    }
    best
}

/// Re-detect all candidate pairs at nodal positions `x` with a global
/// nearest-neighbour search and apply the activation rules:
/// mutual pairs are active iff `lambda >= 0`, self pairs iff `lambda > 0` and
/// the slave and master normals oppose.
pub fn detect_pairs(geom: &ContactGeometry, x: &[Vec2], state: &ContactState) -> ContactState {
    let segs = geom.segments();
    let params = state.params;
    let slaves: Vec<(usize, usize)> = (0..segs.len()).flat_map(|s| (0..SLAVE_GAUSS.len()).map(move |g| (s, g))).collect();
    let found: Vec<Vec<ContactPair>> = slaves
        .par_iter()
        .map(|&(si, gi)| {
            let seg = segs[si];
            let eta = SLAVE_GAUSS[gi];
            let id = SLAVE_GAUSS.len() * si + gi;
            let (xa, xb) = (x[seg.a], x[seg.b]);
            let x_s = xa * (1.0 - eta) / 2.0 + xb * (1.0 + eta) / 2.0;
            let mut out = Vec::new();

            if let Some((master, xi_p, x_p, n_p, _)) = nearest_rigid(&x_s, &geom.rigid) {
                let g_n = normal_gap(&x_s, &x_p, &n_p);
                let lambda = state.lambda_old[id][0] - params.eps_n * g_n;
                out.push(ContactPair {
                    id,
                    slave: (seg.a, seg.b),
                    eta,
                    mode: ContactMode::Mutual,
                    master,
                    x_s,
                    xi_p,
                    x_p,
                    n_p,
                    g_n,
                    lambda,
                    active: lambda >= 0.0,
                });
            }

            // self contact: nearest non-adjacent deformable segment
            let ring = geom.loops[seg.lp].len();
            let mut best: Option<(usize, f64, Vec2, Vec2, f64)> = None;
            for (mi, m) in segs.iter().enumerate() {
                if m.lp == seg.lp {
                    let diff = (m.pos + ring - seg.pos) % ring;
                    if diff == 0 || diff == 1 || diff == ring - 1 {
                        continue;
                    }
                }
                let (xi, x_p, n_p) = closest_point(&x_s, &x[m.a], &x[m.b]);
                let d = (x_s - x_p).norm();
                if best.as_ref().map_or(true, |b| d < b.4) {
                    best = Some((mi, xi, x_p, n_p, d));
                }
            }
            if let Some((mi, xi_p, x_p, n_p, _)) = best {
                let m = segs[mi];
                let n_s = right_normal(&(xb - xa)).normalize();
                let g_n = normal_gap(&x_s, &x_p, &n_p);
                let lambda = state.lambda_old[id][1] - params.eps_s * g_n;
                let active = lambda > 0.0
                    && n_s.dot(&n_p) < 0.0
                    && -g_n <= params.self_band
                    && geom.open_in_reference(&seg, eta, &m);
                out.push(ContactPair {
                    id,
                    slave: (seg.a, seg.b),
                    eta,
                    mode: ContactMode::SelfContact,
                    master: Master::Deformable { p: m.a, q: m.b },
                    x_s,
                    xi_p,
                    x_p,
                    n_p,
                    g_n,
                    lambda,
                    active,
                });
            }
            out
        })
        .collect();
    let pairs: Vec<ContactPair> = found.into_iter().flatten().collect();
    ContactState {
        mutual_pairs_exist: pairs.iter().any(|p| p.active && p.mode == ContactMode::Mutual),
        self_pairs_exist: pairs.iter().any(|p| p.active && p.mode == ContactMode::SelfContact),
        pairs,
        params,
        lambda_old: state.lambda_old.clone(),
    }
}

/// Nodal force and stiffness contribution of one pair. Entries are ordered
/// `[a, b, p, q]` (x, y per node); `nodes` holds the node indices, `None` for
/// rigid master points that carry no unknowns.
#[derive(Debug, Clone, PartialEq)]
pub struct PairContribution {
    pub nodes: [Option<usize>; 4],
    pub force: SVector<f64, 8>,
    pub stiffness: SMatrix<f64, 8, 8>,
}

/// Full-pass contact force `f_c` (the residual term, equal and opposite on
/// slave and master) and its consistent linearization with respect to all
/// nodal positions of the pair, for the current multiplier `lambda_old`.
pub fn contact_force_and_stiffness(
    pair: &ContactPair,
    geom: &ContactGeometry,
    x: &[Vec2],
    lambda_old: f64,
    eps: f64,
) -> PairContribution {
    let (sa, sb) = pair.slave;
    let (p, q, master_nodes) = match pair.master {
        Master::Rigid { surface, segment } => {
            let poly = &geom.rigid[surface];
            (poly[segment], poly[(segment + 1) % poly.len()], [None, None])
        }
        Master::Deformable { p, q } => (x[p], x[q], [Some(p), Some(q)]),
    };
    let nodes = [Some(sa), Some(sb), master_nodes[0], master_nodes[1]];
    let mut out = PairContribution { nodes, force: SVector::zeros(), stiffness: SMatrix::zeros() };
    if !pair.active {
        return out;
    }
    let (a, b) = (x[sa], x[sb]);
    let s1 = (1.0 - pair.eta) / 2.0;
    let s2 = (1.0 + pair.eta) / 2.0;
    let x_s = s1 * a + s2 * b;
    let tau = q - p;
    let m = tau.norm();
    let t_hat = tau / m;
    let n = right_normal(&t_hat);
    let raw = (x_s - p).dot(&tau) / (m * m);
    let clamped = !(0.0..=1.0).contains(&raw);
    let zeta = raw.clamp(0.0, 1.0);
    let x_p = p + zeta * tau;
    let g = (x_s - x_p).dot(&n);
    let lambda = lambda_old - eps * g;
    let e = b - a;
    let ell = e.norm();
    let e_hat = e / ell;
    // slave Gauss weight 1 on [-1, 1], Jacobian ell / 2
    let c = geom.thickness * 0.5;
    let force = c * ell * lambda;

    let shape = [-s1, -s2, 1.0 - zeta, zeta];
    for k in 0..4 {
        out.force[2 * k] = shape[k] * force * n.x;
        out.force[2 * k + 1] = shape[k] * force * n.y;
    }

    // derivatives with respect to y = [a, b, p, q]
    let mut d_xs = SMatrix::<f64, 2, 8>::zeros();
    let mut d_p = SMatrix::<f64, 2, 8>::zeros();
    let mut d_tau = SMatrix::<f64, 2, 8>::zeros();
    for i in 0..2 {
        d_xs[(i, i)] = s1;
        d_xs[(i, 2 + i)] = s2;
        if master_nodes[0].is_some() {
            d_p[(i, 4 + i)] = 1.0;
            d_tau[(i, 4 + i)] = -1.0;
            d_tau[(i, 6 + i)] = 1.0;
        }
    }
    // dn = -t_hat (n . dtau) / m
    let n_dtau = n.transpose() * d_tau;
    let d_n = -(t_hat * n_dtau) / m;
    let grad_zeta = if clamped {
        SMatrix::<f64, 1, 8>::zeros()
    } else {
        ((x_s - p).transpose() * d_tau + tau.transpose() * (d_xs - d_p)) / (m * m)
            - 2.0 * zeta * (tau.transpose() * d_tau) / (m * m)
    };
    let d_xp = d_p + tau * grad_zeta + zeta * d_tau;
    let grad_g = n.transpose() * (d_xs - d_xp) + (x_s - x_p).transpose() * d_n;
    let mut grad_ell = SMatrix::<f64, 1, 8>::zeros();
    for i in 0..2 {
        grad_ell[2 + i] = e_hat[i];
        grad_ell[i] = -e_hat[i];
    }
    let grad_force = c * (lambda * grad_ell - eps * ell * grad_g);
    let dfn = n * grad_force + force * d_n;
    for k in 0..4 {
        let mut rows = shape[k] * dfn;
        if k >= 2 {
            let sign = if k == 2 { -1.0 } else { 1.0 };
            rows += sign * force * n * grad_zeta;
        }
        for i in 0..2 {
            for j in 0..8 {
                out.stiffness[(2 * k + i, j)] = rows[(i, j)];
            }
        }
    }
    if master_nodes[0].is_none() {
        for i in 4..8 {
            out.force[i] = 0.0;
            for j in 0..8 {
                out.stiffness[(i, j)] = 0.0;
                out.stiffness[(j, i)] = 0.0;
            }
        }
    }
    out
}

/// Penalty that applies to a pair.
pub fn penalty_for(pair: &ContactPair, params: &ContactParams) -> f64 {
    params.eps(pair.mode)
}

/// Multiplier `lambda_old` the pair was evaluated with.
pub fn lambda_old_for(pair: &ContactPair, state: &ContactState) -> f64 {
    state.lambda_old[pair.id][pair.mode.slot()]
}

/// Sum of the nodal forces of all active pairs on deformable nodes.
pub fn total_force(state: &ContactState, geom: &ContactGeometry, x: &[Vec2]) -> Vec2 {
    let mut sum = Vec2::zeros();
    for p in state.active() {
        let c = contact_force_and_stiffness(p, geom, x, lambda_old_for(p, state), penalty_for(p, &state.params));
        for k in 0..4 {
            if c.nodes[k].is_some() {
                sum += Vec2::new(c.force[2 * k], c.force[2 * k + 1]);
            }
        }
    }
    sum
}

/// One CSV row per active pair: `step,pair,mode,g_n,lambda`.
pub fn report_rows(step: usize, state: &ContactState) -> Vec<String> {
    state
        .active()
        .map(|p| format!("{step},{},{},{:e},{:e}", p.id, p.mode.label(), p.g_n, p.lambda))
        .collect()
}

/// `true` if the polygon winds counter-clockwise.
pub fn is_ccw(poly: &[Vec2]) -> bool {
    let n = poly.len();
    (0..n).map(|i| cross(&poly[i], &poly[(i + 1) % n])).sum::<f64>() > 0.0
}
