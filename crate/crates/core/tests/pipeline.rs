use std::path::Path;

use ccm::design::{rigid_surfaces, DesignVector, Mask};
use ccm::fem::{solve, FeModel};
use ccm::fsd::{close_path, descriptor, objective, PathPolyline};
use ccm::optimizer::{
    analyze, evaluate, feasibility, hill_climb, prune, resume, solve_options, Checkpoint, SearchConfig, SearchObserver, TraceRecord,
};
use ccm::problem::Problem;
use ccm::smoothing::two_stage_removal_guarded;

fn data(name: &str) -> String {
    format!("{}/data/mini/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn mini() -> Problem {
    Problem::load(Path::new(&data("spec.txt"))).unwrap()
}

fn demo() -> DesignVector {
    DesignVector::from_text(&std::fs::read_to_string(data("demo_design.txt")).unwrap()).unwrap()
}

#[test]
fn evaluation_equals_composed_stages() {
    let p = mini();
    let v = demo();
    let s = &p.spec;
    let mut c = two_stage_removal_guarded(
        &p.mesh,
        &v.masks,
        s.beta,
        s.jacobian_floor,
        s.second_stage,
        rigid_surfaces(&v.masks),
        p.attachments.clone(),
    )
    .unwrap();
    let keep = feasibility(&c).unwrap();
    prune(&mut c, keep);
    let model = FeModel::from_continuum(&c, p.material, &p.rule, s.thickness, s.direction / s.direction.norm()).unwrap();
    let state = solve(&model, v.force, &solve_options(&p, &c)).unwrap();
    let closed = close_path(&PathPolyline::open(state.path())).unwrap();
    let d = descriptor(&closed, s.harmonics).unwrap();
    let f = objective(&d, &p.specified, &s.weights, c.volume_fraction()).unwrap();
    let e = evaluate(&p, &v);
    assert!(e.feasible);
    assert_eq!(e.objective, f.total);
}

#[test]
fn infeasible_candidate_scores_penalty() {
    let p = mini();
    let mut v = demo();
    // a large mask over the output port
    let out = p.mesh.nodes[p.attachments.output];
    v.masks[0] = Mask { x: out.x, y: out.y, r: 3.0, s: 0, f: 0.5 };
    let a = analyze(&p, &v);
    assert!(!a.feasible());
    assert_eq!(a.objective, 1e6);
}

#[test]
fn traced_path_as_specification_scores_zero() {
    let p = mini();
    let v = demo();
    let a = analyze(&p, &v);
    assert!(a.feasible());
    let mut spec = p.spec.clone();
    spec.weights.v_star = 1.0;
    let q = Problem::new(spec, a.actual_path.clone()).unwrap();
    let e = evaluate(&q, &v);
    assert!(a.volume_fraction < 1.0);
    assert_eq!(e.objective, 0.0);
}

#[derive(Default)]
struct Collect {
    records: Vec<TraceRecord>,
    checkpoints: Vec<Checkpoint>,
}

impl SearchObserver for Collect {
    fn record(&mut self, r: &TraceRecord) {
        self.records.push(*r);
    }

    fn checkpoint(&mut self, c: &Checkpoint) {
        self.checkpoints.push(c.clone());
    }
}

#[test]
fn budget_of_one_returns_initial_design() {
    let p = mini();
    let v0 = p.initial_design();
    let cfg = SearchConfig { max_evals: 1, ..SearchConfig::from_spec(&p.spec) };
    let out = hill_climb(&p, &v0, &cfg, &mut ()).unwrap();
    assert_eq!(out.best, v0);
    assert_eq!(out.trace.records.len(), 1);
    assert_eq!(out.best_f, evaluate(&p, &v0).objective);
}

#[test]
fn resumed_search_matches_uninterrupted_run() {
    let p = mini();
    let v0 = p.initial_design();
    let cfg = SearchConfig { max_evals: 24, checkpoint_every: 8, seed: 3, ..SearchConfig::from_spec(&p.spec) };
    let mut obs = Collect::default();
    let full = hill_climb(&p, &v0, &cfg, &mut obs).unwrap();
    assert_eq!(obs.records, full.trace.records);
    assert_eq!(obs.checkpoints.len(), 2);
    let ck = Checkpoint::from_text(&obs.checkpoints[0].to_text()).unwrap();
    assert_eq!(ck, obs.checkpoints[0]);
    let rest = resume(&p, &ck, &cfg, &mut ()).unwrap();
    assert_eq!(rest.trace.records, full.trace.records[9..]);
    assert_eq!(rest.best, full.best);
    assert_eq!(rest.best_f, full.best_f);
}

#[test]
fn best_is_monotone_and_penalty_dominates() {
    let p = mini();
    let v0 = p.initial_design();
    let cfg = SearchConfig { max_evals: 40, seed: 9, ..SearchConfig::from_spec(&p.spec) };
    let out = hill_climb(&p, &v0, &cfg, &mut ()).unwrap();
    let r = &out.trace.records;
    assert!(r.windows(2).all(|w| w[1].best <= w[0].best));
    for x in r {
        assert_eq!(x.accepted && x.iter > 0, x.iter > 0 && x.objective < r[x.iter - 1].best);
    }
    let worst = r.iter().filter(|x| x.feasible).map(|x| x.objective).fold(0.0, f64::max);
    assert!(worst > 0.0);
    assert!(cfg.penalty > 10.0 * worst, "worst feasible {worst}");
    assert!(r.iter().all(|x| x.feasible || x.objective == cfg.penalty));
    for x in r.iter().filter(|x| x.accepted) {
        assert!(x.objective <= r[0].objective);
    }
}

#[test]
fn visited_designs_respect_bounds() {
    let p = mini();
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
    let mut v = p.initial_design();
    for _ in 0..500 {
        v = ccm::optimizer::mutate(&v, &p.bounds, 0.3, p.spec.m_max, &mut rng);
        assert!(p.bounds.contains(&v));
    }
}
