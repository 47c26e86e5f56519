//! Stochastic hill-climber over the design vector.
//!
//! Every iteration mutates the whole vector once (each variable is tested
//! against `pr` independently), evaluates the candidate through the full
//! analysis pipeline and accepts it only on strict improvement. Candidates
//! that are infeasible or whose analysis fails score the penalty value.

use std::fmt::{self, Write as _};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contact::ContactParams;
use crate::design::{rigid_surfaces, DesignBounds, DesignVector};
use crate::fem::{solve, FeModel, SolveOptions, SolveState};
use crate::fsd::{close_path, descriptor, objective, ObjectiveBreakdown, PathDescriptor, PathPolyline};
use crate::geom::Vec2;
use crate::mesh::{connected_components, extract_boundary_with};
use crate::problem::{Problem, ProblemSpec};
use crate::smoothing::{two_stage_removal_guarded, Continuum};
use crate::{Error, Result};

/// Fixed nodes needed to suppress rigid-body motion in the plane.
pub const MIN_FIXED_NODES: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub pr: f64,
    pub m_max: f64,
    pub max_evals: usize,
    pub seed: u64,
    pub penalty: f64,
    /// Iterations between checkpoints (0 disables them).
    pub checkpoint_every: usize,
}

impl SearchConfig {
    pub fn from_spec(s: &ProblemSpec) -> Self {
        SearchConfig {
            pr: s.pr,
            m_max: s.m_max,
            max_evals: s.max_evals,
            seed: s.seed,
            penalty: s.penalty,
            checkpoint_every: s.checkpoint_every,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.pr > 0.0 && self.pr < 1.0) || !(self.m_max > 0.0) {
            return Err(Error::InvalidArgument("need 0 < pr < 1 and m_max > 0".into()));
        }
        if self.max_evals == 0 {
            return Err(Error::InvalidArgument("evaluation budget must be positive".into()));
        }
        Ok(())
    }
}

fn perturb(p: f64, step: f64, (lo, hi): (f64, f64), rng: &mut ChaCha8Rng) -> f64 {
    let c: f64 = rng.gen();
    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    (p + sign * c * step).clamp(lo, hi)
}

/// One mutation pass. Variables are visited as `x y r s f` per mask, then
/// the force. `pr` is read from the argument so `pr = 0` is allowed here.
pub fn mutate(v: &DesignVector, bounds: &DesignBounds, pr: f64, m_max: f64, rng: &mut ChaCha8Rng) -> DesignVector {
    let mut out = v.clone();
    for m in &mut out.masks {
        if rng.gen::<f64>() < pr {
            m.x = perturb(m.x, m_max, bounds.x, rng);
        }
        if rng.gen::<f64>() < pr {
            m.y = perturb(m.y, m_max, bounds.y, rng);
        }
        if rng.gen::<f64>() < pr {
            m.r = perturb(m.r, m_max, bounds.r, rng);
        }
        if rng.gen::<f64>() < pr {
            m.s = u8::from(rng.gen::<f64>() > 0.5);
        }
        if rng.gen::<f64>() < pr {
            m.f = perturb(m.f, bounds.f_max, (0.0, bounds.f_max), rng);
        }
    }
    if rng.gen::<f64>() < pr {
        out.force = perturb(out.force, m_max, bounds.force, rng);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Infeasible {
    NoInputPort,
    NoOutputPort,
    NoFixedNodes,
    Disconnected,
}

impl Infeasible {
    pub fn code(&self) -> &'static str {
        match self {
            Infeasible::NoInputPort => "no-input-port",
            Infeasible::NoOutputPort => "no-output-port",
            Infeasible::NoFixedNodes => "no-fixed-nodes",
            Infeasible::Disconnected => "disconnected",
        }
    }
}

impl fmt::Display for Infeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Keep the connected component holding the input node and check that the
/// output node and enough fixed nodes belong to it. Returns the pruned
/// retained set.
pub fn feasibility(c: &Continuum) -> std::result::Result<Vec<bool>, Infeasible> {
    let mesh = c.mesh;
    let labels = connected_components(mesh, &c.retained);
    let label_of = |node: usize| -> Option<usize> {
        (0..mesh.num_cells()).find(|&cell| c.retained[cell] && mesh.cells[cell].contains(&node)).map(|cell| labels[cell])
    };
    let a = &c.attachments;
    let main = label_of(a.input).ok_or(Infeasible::NoInputPort)?;
    let keep: Vec<bool> = labels.iter().map(|&l| l == main).collect();
    let in_main = |node: usize| (0..mesh.num_cells()).any(|cell| keep[cell] && mesh.cells[cell].contains(&node));
    if !in_main(a.output) {
        return Err(if label_of(a.output).is_some() { Infeasible::Disconnected } else { Infeasible::NoOutputPort });
    }
    let fixed_main = a.fixed.iter().filter(|&&n| in_main(n)).count();
    if fixed_main < MIN_FIXED_NODES {
        let anywhere = a.fixed.iter().filter(|&&n| label_of(n).is_some()).count();
        return Err(if anywhere >= MIN_FIXED_NODES { Infeasible::Disconnected } else { Infeasible::NoFixedNodes });
    }
    Ok(keep)
}

/// Drop cells outside `keep`. Removed components share no node with the
/// kept one, so the smoothed coordinates stay valid.
pub fn prune(c: &mut Continuum, keep: Vec<bool>) {
    c.retained = keep;
    c.boundary = extract_boundary_with(c.mesh, &c.retained, &c.coords);
}

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Infeasible(Infeasible),
    Analysis(Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Infeasible(r) => write!(f, "infeasible: {r}"),
            Failure::Analysis(e) => write!(f, "analysis failed: {e}"),
        }
    }
}

/// Everything computed for one candidate.
#[derive(Debug, Clone)]
pub struct Analysis<'m> {
    pub design: DesignVector,
    pub continuum: Option<Continuum<'m>>,
    pub model: Option<FeModel>,
    pub solve: Option<SolveState>,
    pub actual_path: Vec<Vec2>,
    pub closed_path: Option<PathPolyline>,
    pub descriptor: Option<PathDescriptor>,
    pub breakdown: Option<ObjectiveBreakdown>,
    pub volume_fraction: f64,
    pub objective: f64,
    pub failure: Option<Failure>,
}

impl Analysis<'_> {
    pub fn feasible(&self) -> bool {
        self.failure.is_none()
    }

    pub fn contact_occurred(&self) -> bool {
        self.solve.as_ref().is_some_and(|s| s.contact_occurred())
    }
}

/// Solver options derived from the problem and a built continuum.
pub fn solve_options(problem: &Problem, c: &Continuum) -> SolveOptions {
    let s = &problem.spec;
    let l0 = problem.mesh.characteristic_length();
    let e = s.youngs_modulus;
    let contact = s.contact.then(|| ContactParams {
        eps_n: s.eps_n_factor * e / l0,
        eps_s: s.eps_s_factor * e / l0,
        self_band: s.self_band * c.mean_boundary_edge(),
    });
    SolveOptions {
        n_steps: s.load_steps,
        max_augmentations: s.max_augmentations,
        g_tol_factor: s.g_tol_factor,
        contact,
        ..SolveOptions::default()
    }
}

/// Run the full pipeline on one candidate, keeping every intermediate.
pub fn analyze<'m>(problem: &'m Problem, v: &DesignVector) -> Analysis<'m> {
    let s = &problem.spec;
    let mut a = Analysis {
        design: v.clone(),
        continuum: None,
        model: None,
        solve: None,
        actual_path: Vec::new(),
        closed_path: None,
        descriptor: None,
        breakdown: None,
        volume_fraction: 0.0,
        objective: s.penalty,
        failure: None,
    };
    let rigid = rigid_surfaces(&v.masks);
    let removal = two_stage_removal_guarded(&problem.mesh, &v.masks, s.beta, s.jacobian_floor, s.second_stage, rigid, problem.attachments.clone());
    let mut c = match removal {
        Ok(c) => c,
        Err(e) => {
            a.failure = Some(Failure::Analysis(e));
            return a;
        }
    };
    match feasibility(&c) {
        Ok(keep) => prune(&mut c, keep),
        Err(r) => {
            a.volume_fraction = c.volume_fraction();
            a.continuum = Some(c);
            a.failure = Some(Failure::Infeasible(r));
            return a;
        }
    }
    a.volume_fraction = c.volume_fraction();
    let dir = s.direction / s.direction.norm();
    let opts = solve_options(problem, &c);
    let model = match FeModel::from_continuum(&c, problem.material, &problem.rule, s.thickness, dir) {
        Ok(m) => m,
        Err(e) => {
            a.failure = Some(Failure::Analysis(e));
            a.continuum = Some(c);
            return a;
        }
    };
    a.continuum = Some(c);
    let state = match solve(&model, v.force, &opts) {
        Ok(st) => st,
        Err(e) => {
            a.model = Some(model);
            a.failure = Some(Failure::Analysis(e));
            return a;
        }
    };
    a.model = Some(model);
    a.actual_path = state.path();
    a.solve = Some(state);
    let scored = close_path(&PathPolyline::open(a.actual_path.clone())).and_then(|closed| {
        let d = descriptor(&closed, s.harmonics)?;
        let b = objective(&d, &problem.specified, &s.weights, a.volume_fraction)?;
        Ok((closed, d, b))
    });
    match scored {
        Ok((closed, d, b)) => {
            a.closed_path = Some(closed);
            a.descriptor = Some(d);
            a.objective = b.total;
            a.breakdown = Some(b);
        }
        Err(e) => a.failure = Some(Failure::Analysis(e)),
    }
    a
}

/// Scalar summary of one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub objective: f64,
    pub feasible: bool,
    pub contact: bool,
}

pub fn evaluate(problem: &Problem, v: &DesignVector) -> Evaluation {
    let a = analyze(problem, v);
    Evaluation { objective: a.objective, feasible: a.feasible(), contact: a.contact_occurred() }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub iter: usize,
    pub feasible: bool,
    pub objective: f64,
    pub best: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SearchTrace {
    pub records: Vec<TraceRecord>,
}

impl SearchTrace {
    pub fn csv_header() -> &'static str {
        "iter,feasible,objective,best\n"
    }

    pub fn csv_row(r: &TraceRecord) -> String {
        format!("{},{},{:?},{:?}\n", r.iter, u8::from(r.feasible), r.objective, r.best)
    }

    pub fn to_csv(&self) -> String {
        let mut s = Self::csv_header().to_string();
        for r in &self.records {
            s.push_str(&Self::csv_row(r));
        }
        s
    }
}

/// Search state at the end of an iteration. The current design is also
/// the best so far, since only strict improvements are accepted.
#[derive(Debug, Clone)]
pub struct SearchState {
    pub iter: usize,
    pub current: DesignVector,
    pub current_f: f64,
    pub current_contact: bool,
    pub rng: ChaCha8Rng,
    pub trace: SearchTrace,
}

/// Restart point: state plus the last few trace records.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub iter: usize,
    pub current: DesignVector,
    pub current_f: f64,
    pub current_contact: bool,
    pub seed: [u8; 32],
    pub stream: u64,
    pub word_pos: u128,
    pub tail: Vec<TraceRecord>,
}

const TAIL: usize = 20;

impl Checkpoint {
    pub fn from_state(s: &SearchState) -> Self {
        let n = s.trace.records.len();
        Checkpoint {
            iter: s.iter,
            current: s.current.clone(),
            current_f: s.current_f,
            current_contact: s.current_contact,
            seed: s.rng.get_seed(),
            stream: s.rng.get_stream(),
            word_pos: s.rng.get_word_pos(),
            tail: s.trace.records[n.saturating_sub(TAIL)..].to_vec(),
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::from_seed(self.seed);
        r.set_stream(self.stream);
        r.set_word_pos(self.word_pos);
        r
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let seed: String = self.seed.iter().map(|b| format!("{b:02x}")).collect();
        let _ = writeln!(s, "iter {}", self.iter);
        let _ = writeln!(s, "objective {:?}", self.current_f);
        let _ = writeln!(s, "contact {}", u8::from(self.current_contact));
        let _ = writeln!(s, "rng {seed} {} {}", self.stream, self.word_pos);
        let _ = writeln!(s, "trace {}", self.tail.len());
        for r in &self.tail {
            let _ = writeln!(s, "{} {} {:?} {:?} {}", r.iter, u8::from(r.feasible), r.objective, r.best, u8::from(r.accepted));
        }
        let _ = writeln!(s, "design");
        s.push_str(&self.current.to_text());
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let err = |line: usize, msg: &str| Error::Parse { file: "checkpoint".into(), line, msg: msg.into() };
        let lines: Vec<&str> = text.lines().collect();
        let field = |i: usize, key: &str| -> Result<Vec<&str>> {
            let toks: Vec<&str> = lines.get(i).ok_or_else(|| err(i + 1, "truncated"))?.split_whitespace().collect();
            if toks.first() != Some(&key) {
                return Err(err(i + 1, &format!("expected `{key}`")));
            }
            Ok(toks[1..].to_vec())
        };
        let num = |i: usize, t: Option<&&str>| -> Result<f64> { t.and_then(|t| t.parse().ok()).ok_or_else(|| err(i + 1, "bad number")) };
        let int = |i: usize, t: Option<&&str>| -> Result<u128> { t.and_then(|t| t.parse().ok()).ok_or_else(|| err(i + 1, "bad integer")) };
        let iter = int(0, field(0, "iter")?.first())? as usize;
        let current_f = num(1, field(1, "objective")?.first())?;
        let current_contact = int(2, field(2, "contact")?.first())? == 1;
        let rng = field(3, "rng")?;
        let hex = rng.first().ok_or_else(|| err(4, "missing seed"))?;
        if hex.len() != 64 {
            return Err(err(4, "seed must be 64 hex digits"));
        }
        let mut seed = [0u8; 32];
        for (k, b) in seed.iter_mut().enumerate() {
            *b = u8::from_str_radix(&hex[2 * k..2 * k + 2], 16).map_err(|_| err(4, "bad seed"))?;
        }
        let stream = int(3, rng.get(1))? as u64;
        let word_pos = int(3, rng.get(2))?;
        let n = int(4, field(4, "trace")?.first())? as usize;
        let mut tail = Vec::with_capacity(n);
        for i in 5..5 + n {
            let t: Vec<&str> = lines.get(i).ok_or_else(|| err(i + 1, "truncated trace"))?.split_whitespace().collect();
            tail.push(TraceRecord {
                iter: int(i, t.first())? as usize,
                feasible: int(i, t.get(1))? == 1,
                objective: num(i, t.get(2))?,
                best: num(i, t.get(3))?,
                accepted: int(i, t.get(4))? == 1,
            });
        }
        field(5 + n, "design")?;
        let current = DesignVector::from_text(&lines[6 + n..].join("\n"))?;
        Ok(Checkpoint { iter, current, current_f, current_contact, seed, stream, word_pos, tail })
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub best: DesignVector,
    pub best_f: f64,
    pub best_contact: bool,
    pub trace: SearchTrace,
}

/// Observer hooks for long runs.
pub trait SearchObserver {
    fn record(&mut self, _r: &TraceRecord) {}
    fn checkpoint(&mut self, _c: &Checkpoint) {}
}

impl SearchObserver for () {}

/// Evaluate `v0` and climb for the remaining budget.
pub fn hill_climb(problem: &Problem, v0: &DesignVector, cfg: &SearchConfig, obs: &mut dyn SearchObserver) -> Result<SearchOutcome> {
    cfg.validate()?;
    let e0 = evaluate(problem, v0);
    let r0 = TraceRecord { iter: 0, feasible: e0.feasible, objective: e0.objective, best: e0.objective, accepted: true };
    obs.record(&r0);
    let state = SearchState {
        iter: 0,
        current: v0.clone(),
        current_f: e0.objective,
        current_contact: e0.contact,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        trace: SearchTrace { records: vec![r0] },
    };
    climb(problem, state, cfg, obs)
}

/// Continue a search from a checkpoint. The returned trace holds only the
/// iterations after it.
pub fn resume(problem: &Problem, ck: &Checkpoint, cfg: &SearchConfig, obs: &mut dyn SearchObserver) -> Result<SearchOutcome> {
    cfg.validate()?;
    let state = SearchState {
        iter: ck.iter,
        current: ck.current.clone(),
        current_f: ck.current_f,
        current_contact: ck.current_contact,
        rng: ck.rng(),
        trace: SearchTrace::default(),
    };
    climb(problem, state, cfg, obs)
}

fn climb(problem: &Problem, mut st: SearchState, cfg: &SearchConfig, obs: &mut dyn SearchObserver) -> Result<SearchOutcome> {
    for iter in st.iter + 1..cfg.max_evals {
        let cand = mutate(&st.current, &problem.bounds, cfg.pr, cfg.m_max, &mut st.rng);
        let e = evaluate(problem, &cand);
        let accepted = e.objective < st.current_f;
        if accepted {
            st.current = cand;
            st.current_f = e.objective;
            st.current_contact = e.contact;
        }
        let r = TraceRecord { iter, feasible: e.feasible, objective: e.objective, best: st.current_f, accepted };
        st.trace.records.push(r);
        st.iter = iter;
        obs.record(&r);
        if cfg.checkpoint_every > 0 && iter % cfg.checkpoint_every == 0 {
            obs.checkpoint(&Checkpoint::from_state(&st));
        }
    }
    Ok(SearchOutcome { best: st.current, best_f: st.current_f, best_contact: st.current_contact, trace: st.trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_honeycomb, HexMesh};
    use crate::smoothing::Attachments;
    use proptest::prelude::*;
    use rand::Rng;
    use std::collections::VecDeque;

    fn bounds() -> DesignBounds {
        DesignBounds::for_domain(16.0, 17.0)
    }

    #[test]
    fn zero_rate_is_identity() {
        let v = DesignVector::grid(3, 3, 16.0, 17.0, 1.5, 0, 0.4, 100.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            assert_eq!(mutate(&v, &bounds(), 0.0, 6.0, &mut rng), v);
        }
    }

    #[test]
    fn mutation_is_seeded() {
        let v = DesignVector::grid(3, 3, 16.0, 17.0, 1.5, 0, 0.4, 100.0);
        let run = || {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            (0..50).fold(v.clone(), |acc, _| mutate(&acc, &bounds(), 0.08, 6.0, &mut rng))
        };
        assert_eq!(run().to_text(), run().to_text());
    }

    #[test]
    fn empirical_mutation_rate() {
        let v = DesignVector { masks: vec![], force: 0.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let changed = (0..100_000).filter(|_| mutate(&v, &bounds(), 0.08, 6.0, &mut rng).force != 0.0).count();
        let rate = changed as f64 / 1e5;
        assert!((rate - 0.08).abs() <= 0.005, "rate {rate}");
    }

    #[test]
    fn contact_flag_resample() {
        let v = DesignVector::grid(1, 1, 16.0, 17.0, 1.5, 0, 0.4, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut ones = 0;
        for _ in 0..20_000 {
            ones += usize::from(mutate(&v, &bounds(), 0.5, 6.0, &mut rng).masks[0].s);
        }
        // 0.5 (rate) x 0.5 (c > 0.5)
        assert!((ones as f64 / 20_000.0 - 0.25).abs() < 0.02);
    }

    proptest! {
        #[test]
        fn mutation_respects_bounds(seed in 0u64..1000, r in 0.1f64..8.0, f in 0.0f64..0.9, force in -500.0f64..500.0) {
            let b = bounds();
            let mut v = DesignVector::grid(3, 3, 16.0, 17.0, r, 1, f, force);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..40 {
                v = mutate(&v, &b, 0.5, 6.0, &mut rng);
                prop_assert!(b.contains(&v));
            }
        }
    }

    fn attachments(mesh: &HexMesh) -> Attachments {
        let (lx, ly) = mesh.domain_size;
        let fixed: Vec<usize> = (0..mesh.num_nodes()).filter(|&n| mesh.nodes[n].y < 1e-9).collect();
        Attachments {
            input: mesh.nearest_node(&Vec2::new(0.0, ly / 2.0)),
            output: mesh.nearest_node(&Vec2::new(lx, ly / 2.0)),
            fixed,
        }
    }

    #[test]
    fn full_domain_is_feasible() {
        let m = generate_honeycomb(6, 5, 1.0).unwrap();
        let c = Continuum::new(&m, vec![true; 30], vec![], attachments(&m));
        assert_eq!(feasibility(&c), Ok(vec![true; 30]));
    }

    #[test]
    fn severed_output_region() {
        let m = generate_honeycomb(6, 5, 1.0).unwrap();
        let a = attachments(&m);
        let retained: Vec<bool> = (0..m.num_cells()).map(|c| !m.cells[c].contains(&a.output)).collect();
        let c = Continuum::new(&m, retained, vec![], a);
        assert_eq!(feasibility(&c), Err(Infeasible::NoOutputPort));
    }

    #[test]
    fn dangling_island_is_removed() {
        let m = generate_honeycomb(6, 5, 1.0).unwrap();
        let a = attachments(&m);
        // isolate the top-right corner cell from the rest
        let corner = m.num_cells() - 1;
        let mut retained = vec![true; m.num_cells()];
        for nb in m.neighbors[corner].iter().flatten() {
            retained[*nb] = false;
        }
        let c = Continuum::new(&m, retained.clone(), vec![], a);
        let keep = feasibility(&c).unwrap();
        assert!(!keep[corner]);
        let mut expect = retained;
        expect[corner] = false;
        assert_eq!(keep, expect);
    }

    /// Brute-force verdict: breadth-first search over cells sharing two
    /// nodes, seeded from every cell touching the input.
    fn oracle(m: &HexMesh, retained: &[bool], a: &Attachments) -> std::result::Result<Vec<bool>, Infeasible> {
        let n = m.num_cells();
        let touches = |cell: usize, node: usize| retained[cell] && m.cells[cell].contains(&node);
        let seeds: Vec<usize> = (0..n).filter(|&c| touches(c, a.input)).collect();
        if seeds.is_empty() {
            return Err(Infeasible::NoInputPort);
        }
        let mut seen = vec![false; n];
        let mut q: VecDeque<usize> = seeds.into_iter().collect();
        for &s in &q {
            seen[s] = true;
        }
        while let Some(c) = q.pop_front() {
            for d in 0..n {
                let shared = m.cells[c].iter().filter(|x| m.cells[d].contains(x)).count();
                if retained[d] && !seen[d] && shared >= 2 {
                    seen[d] = true;
                    q.push_back(d);
                }
            }
        }
        let reach = |node: usize| (0..n).any(|c| seen[c] && m.cells[c].contains(&node));
        let exists = |node: usize| (0..n).any(|c| touches(c, node));
        if !reach(a.output) {
            return Err(if exists(a.output) { Infeasible::Disconnected } else { Infeasible::NoOutputPort });
        }
        if a.fixed.iter().filter(|&&f| reach(f)).count() < MIN_FIXED_NODES {
            let any = a.fixed.iter().filter(|&&f| exists(f)).count();
            return Err(if any >= MIN_FIXED_NODES { Infeasible::Disconnected } else { Infeasible::NoFixedNodes });
        }
        Ok(seen)
    }

    #[test]
    fn feasibility_matches_flood_fill_oracle() {
        let m = generate_honeycomb(7, 6, 1.0).unwrap();
        let a = attachments(&m);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut verdicts = [0usize; 2];
        for trial in 0..300 {
            let p = 0.45 + 0.5 * (trial as f64 / 300.0);
            let retained: Vec<bool> = (0..m.num_cells()).map(|_| rng.gen::<f64>() < p).collect();
            let c = Continuum::new(&m, retained.clone(), vec![], a.clone());
            let got = feasibility(&c);
            assert_eq!(got, oracle(&m, &retained, &a), "trial {trial}");
            verdicts[usize::from(got.is_ok())] += 1;
        }
        assert!(verdicts[0] > 20 && verdicts[1] > 20, "{verdicts:?}");
    }

    #[test]
    fn checkpoint_text_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let _: f64 = rng.gen();
        let st = SearchState {
            iter: 7,
            current: DesignVector::grid(2, 2, 10.0, 10.0, 0.1 + 0.2, 1, 0.3, -12.5),
            current_f: 1.0 / 3.0,
            current_contact: true,
            rng: rng.clone(),
            trace: SearchTrace {
                records: vec![TraceRecord { iter: 7, feasible: false, objective: 1e6, best: 1.0 / 3.0, accepted: false }],
            },
        };
        let ck = Checkpoint::from_state(&st);
        let back = Checkpoint::from_text(&ck.to_text()).unwrap();
        assert_eq!(back, ck);
        let mut r2 = back.rng();
        assert_eq!(r2.gen::<u64>(), rng.gen::<u64>());
    }
}
