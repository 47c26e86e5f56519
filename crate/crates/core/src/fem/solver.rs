//! Incremental Newton-Raphson solution with load-step halving and an outer
//! augmented Lagrange loop for contact.

use faer::prelude::*;
use faer::Mat;

use super::model::FeModel;
use crate::contact::{
    contact_force_and_stiffness, detect_pairs, lambda_old_for, penalty_for, report_rows, ContactParams, ContactState,
};
use crate::geom::Vec2;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub n_steps: usize,
    pub max_halvings: usize,
    pub max_iterations: usize,
    /// Relative residual tolerance.
    pub tol_r: f64,
    /// Displacement increments below `stagnation * L0` count as converged.
    pub stagnation: f64,
    pub max_augmentations: usize,
    /// Penetration tolerance as a fraction of the mean boundary edge length.
    pub g_tol_factor: f64,
    /// `None` disables contact.
    pub contact: Option<ContactParams>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            n_steps: 20,
            max_halvings: 4,
            max_iterations: 30,
            tol_r: 1e-8,
            stagnation: 1e-10,
            max_augmentations: 10,
            g_tol_factor: 1e-3,
            contact: None,
        }
    }
}

/// Converged state at the end of one nominal load step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub load_factor: f64,
    pub u: Vec<f64>,
    pub output: Vec2,
    /// Augmentations used by the last increment of the step.
    pub augmentations: usize,
    /// Penetration history over the augmentations of the last increment.
    pub penetrations: Vec<f64>,
    pub active_pairs: usize,
    pub self_pairs_exist: bool,
    pub mutual_pairs_exist: bool,
    /// Contact report rows `step,pair,mode,g_n,lambda`.
    pub contact_rows: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveState {
    pub u: Vec<f64>,
    /// Last completed nominal load step.
    pub step: usize,
    pub converged: bool,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    /// Step 0 is the undeformed state.
    pub steps: Vec<StepRecord>,
    /// Penetration tolerance used (mm).
    pub g_tol: f64,
}

impl SolveState {
    /// Output node positions, undeformed first, then one per load step.
    pub fn path(&self) -> Vec<Vec2> {
        self.steps.iter().map(|s| s.output).collect()
    }

    pub fn contact_occurred(&self) -> bool {
        self.steps.iter().any(|s| s.active_pairs > 0)
    }
}

struct Increment {
    augmentations: usize,
    penetrations: Vec<f64>,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn newton(
    model: &FeModel,
    u: &mut [f64],
    f_ext: &[f64],
    load_factor: f64,
    contact: &mut Option<ContactState>,
    opts: &SolveOptions,
    free: &[usize],
    map: &[Option<usize>],
    history: &mut Vec<f64>,
) -> Result<usize> {
    let ext_norm = norm(f_ext);
    let reference = if ext_norm > 0.0 { load_factor * ext_norm } else { 1.0 };
    let mut residual = f64::INFINITY;
    for it in 0..opts.max_iterations {
        let asm = model.assemble(u)?;
        let mut r: Vec<f64> = asm.f_int.iter().zip(f_ext).map(|(fi, fe)| fi - load_factor * fe).collect();
        let mut triplets = asm.triplets;
        if let Some(state) = contact.as_mut() {
            let x = model.positions(u);
            *state = detect_pairs(&model.contact, &x, state);
            for pair in state.active() {
                let c = contact_force_and_stiffness(pair, &model.contact, &x, lambda_old_for(pair, state), penalty_for(pair, &state.params));
                let dofs: Vec<Option<usize>> = (0..8).map(|k| c.nodes[k / 2].map(|n| 2 * n + k % 2)).collect();
                for a in 0..8 {
                    let Some(da) = dofs[a] else { continue };
                    r[da] += c.force[a];
                    for b in 0..8 {
                        if let Some(db) = dofs[b] {
                            triplets.push((da, db, c.stiffness[(a, b)]));
                        }
                    }
                }
            }
        }
        let rf: Vec<f64> = free.iter().map(|&d| r[d]).collect();
        residual = norm(&rf);
        history.push(residual);
        if !residual.is_finite() {
            break;
        }
        if residual <= opts.tol_r * reference {
            return Ok(it + 1);
        }
        let k = model.reduced_matrix(&triplets, map, free.len())?;
        let lu = k.sp_lu().map_err(|_| Error::SingularMatrix)?;
        let rhs = Mat::<f64>::from_fn(free.len(), 1, |i, _| -rf[i]);
        let du = lu.solve(&rhs);
        let mut step_norm = 0.0;
        for (i, &d) in free.iter().enumerate() {
            let v = du.read(i, 0);
            if !v.is_finite() {
                return Err(Error::SingularMatrix);
            }
            u[d] += v;
            step_norm += v * v;
        }
        if step_norm.sqrt() < opts.stagnation * model.char_length {
            return Ok(it + 1);
        }
    }
    Err(Error::NonConvergence { load_factor, residual })
}

#[allow(clippy::too_many_arguments)]
fn increment(
    model: &FeModel,
    u: &mut [f64],
    f_ext: &[f64],
    load_factor: f64,
    contact: &mut Option<ContactState>,
    opts: &SolveOptions,
    free: &[usize],
    map: &[Option<usize>],
    g_tol: f64,
    history: &mut Vec<f64>,
    iterations: &mut usize,
) -> Result<Increment> {
    let mut penetrations = Vec::new();
    for aug in 0..=opts.max_augmentations {
        *iterations += newton(model, u, f_ext, load_factor, contact, opts, free, map, history)?;
        let Some(state) = contact.as_mut() else {
            return Ok(Increment { augmentations: 0, penetrations });
        };
        let pen = state.max_penetration();
        penetrations.push(pen);
        if pen <= g_tol {
            return Ok(Increment { augmentations: aug, penetrations });
        }
        if aug == opts.max_augmentations {
            return Err(Error::AugmentationStall { penetration: pen, augmentations: aug });
        }
        state.augment();
    }
    unreachable!("augmentation loop returns")
}

/// Apply the input force `force` (N) along the model's force direction at
/// its input node in `opts.n_steps` equal increments.
pub fn solve(model: &FeModel, force: f64, opts: &SolveOptions) -> Result<SolveState> {
    faer::set_global_parallelism(faer::Parallelism::None);
    if opts.n_steps == 0 {
        return Err(Error::InvalidArgument("at least one load step is required".into()));
    }
    let n = model.num_dofs();
    let mut f_ext = vec![0.0; n];
    f_ext[2 * model.input] = force * model.force_dir.x;
    f_ext[2 * model.input + 1] = force * model.force_dir.y;
    let (free, map) = model.free_map();
    if free.is_empty() {
        return Err(Error::InvalidArgument("every degree of freedom is fixed".into()));
    }
    let mut contact = opts.contact.map(|p| ContactState::new(&model.contact, p));
    let h = model.contact.mean_edge_length(&model.x0);
    let g_tol = opts.g_tol_factor * if h > 0.0 { h } else { model.char_length };

    let mut u = vec![0.0; n];
    let mut state = SolveState {
        u: u.clone(),
        step: 0,
        converged: false,
        iterations: 0,
        residual_history: Vec::new(),
        steps: Vec::with_capacity(opts.n_steps + 1),
        g_tol,
    };
    let record = |step: usize, lf: f64, u: &[f64], inc: &Increment, contact: &Option<ContactState>| {
        let x = model.x0[model.output] + Vec2::new(u[2 * model.output], u[2 * model.output + 1]);
        StepRecord {
            step,
            load_factor: lf,
            u: u.to_vec(),
            output: x,
            augmentations: inc.augmentations,
            penetrations: inc.penetrations.clone(),
            active_pairs: contact.as_ref().map_or(0, |c| c.num_active()),
            self_pairs_exist: contact.as_ref().map_or(false, |c| c.self_pairs_exist),
            mutual_pairs_exist: contact.as_ref().map_or(false, |c| c.mutual_pairs_exist),
            contact_rows: contact.as_ref().map_or_else(Vec::new, |c| report_rows(step, c)),
        }
    };
    state.steps.push(record(0, 0.0, &u, &Increment { augmentations: 0, penetrations: vec![] }, &None));

    if force == 0.0 {
        // the unloaded reference configuration is the solution
        let inc = increment(model, &mut u, &f_ext, 1.0, &mut contact, opts, &free, &map, g_tol, &mut state.residual_history, &mut state.iterations)?;
        for step in 1..=opts.n_steps {
            state.steps.push(record(step, step as f64 / opts.n_steps as f64, &u, &inc, &contact));
        }
        state.u = u;
        state.step = opts.n_steps;
        state.converged = true;
        return Ok(state);
    }

    let nominal = 1.0 / opts.n_steps as f64;
    let mut lf = 0.0;
    for step in 1..=opts.n_steps {
        let target = if step == opts.n_steps { 1.0 } else { step as f64 * nominal };
        let mut dl = nominal;
        let mut halvings = 0;
        let mut last = Increment { augmentations: 0, penetrations: vec![] };
        while lf < target - 1e-12 * nominal {
            let trial = if lf + dl > target - 1e-12 * nominal { target } else { lf + dl };
            let saved_u = u.clone();
            let saved_mult = contact.as_ref().map(|c| c.multipliers());
            match increment(model, &mut u, &f_ext, trial, &mut contact, opts, &free, &map, g_tol, &mut state.residual_history, &mut state.iterations) {
                Ok(inc) => {
                    lf = trial;
                    last = inc;
                }
                Err(e) => {
                    u = saved_u;
                    if let (Some(c), Some(m)) = (contact.as_mut(), saved_mult) {
                        c.restore_multipliers(m);
                    }
                    if halvings == opts.max_halvings {
                        state.u = u;
                        return Err(e);
                    }
                    halvings += 1;
                    dl *= 0.5;
                }
            }
        }
        state.steps.push(record(step, lf, &u, &last, &contact));
        state.step = step;
    }
    state.u = u;
    state.converged = true;
    Ok(state)
}
