//! Synthesis and single-candidate analysis runs with their on-disk artifacts.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::design::{material_state, rigid_surfaces, DesignVector};
use crate::fsd::{length_deviation, write_path_csv, ObjectiveBreakdown};
use crate::geom::Vec2;
use crate::optimizer::{analyze, hill_climb, Analysis, Checkpoint, SearchConfig, SearchObserver, SearchOutcome, SearchTrace, TraceRecord};
use crate::problem::{resolve, Problem, ProblemSpec};
use crate::smoothing::{two_stage_removal_guarded, Continuum};
use crate::svg::{deformation_svg, topology_svg};
use crate::{Error, Result};

pub const FAILED_MARKER: &str = "FAILED";

/// Command-line overrides applied on top of a specification.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub max_evals: Option<usize>,
    /// Mesh refinement factors; the first drives synthesis.
    pub mesh_scales: Vec<usize>,
    /// Quadrature sizes; empty means the specification's value.
    pub gauss_points: Vec<usize>,
    pub beta: Option<usize>,
    pub dry_run: bool,
    pub out_dir: PathBuf,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: None,
            max_evals: None,
            mesh_scales: vec![1],
            gauss_points: Vec::new(),
            beta: None,
            dry_run: false,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl RunOptions {
    fn combos(&self, spec: &ProblemSpec) -> Vec<(usize, usize)> {
        let scales = if self.mesh_scales.is_empty() { vec![1] } else { self.mesh_scales.clone() };
        let gps = if self.gauss_points.is_empty() { vec![spec.gauss_points] } else { self.gauss_points.clone() };
        scales.iter().flat_map(|&s| gps.iter().map(move |&g| (s, g))).collect()
    }

    fn apply(&self, spec: &ProblemSpec, scale: usize, gauss_points: usize) -> ProblemSpec {
        let mut s = spec.with_mesh_scale(scale);
        s.gauss_points = gauss_points;
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        if let Some(n) = self.max_evals {
            s.max_evals = n;
        }
        if let Some(b) = self.beta {
            s.beta = b;
        }
        s
    }
}

/// Read a specification and make its path reference absolute.
pub fn load_spec(spec_file: &Path) -> Result<ProblemSpec> {
    let text = fs::read_to_string(spec_file).map_err(|e| Error::Io(format!("{}: {e}", spec_file.display())))?;
    let mut spec = ProblemSpec::parse(&text, &spec_file.display().to_string())?;
    let path = resolve(spec_file, &spec.path_file);
    let path = fs::canonicalize(&path).map_err(|e| Error::Io(format!("path file {}: {e}", path.display())))?;
    spec.path_file = path.display().to_string();
    Ok(spec)
}

fn load_problem(spec: ProblemSpec) -> Result<Problem> {
    let file = PathBuf::from(&spec.path_file);
    let text = fs::read_to_string(&file).map_err(|e| Error::Io(format!("path file {}: {e}", file.display())))?;
    let points = crate::fsd::read_path_csv(&text, &spec.path_file)?;
    Problem::new(spec, points)
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::write(dir.join(name), contents).map_err(|e| Error::Io(format!("{}: {e}", dir.join(name).display())))
}

fn mark_failed(dir: &Path, reason: &str) {
    let _ = fs::write(dir.join(FAILED_MARKER), format!("{reason}\n"));
}

/// Topology of `v` after both removal stages, or the plain first-stage
/// cells when smoothing fails.
fn topology_of<'m>(problem: &'m Problem, v: &DesignVector) -> Continuum<'m> {
    let s = &problem.spec;
    let rigid = rigid_surfaces(&v.masks);
    two_stage_removal_guarded(&problem.mesh, &v.masks, s.beta, s.jacobian_floor, s.second_stage, rigid.clone(), problem.attachments.clone())
        .unwrap_or_else(|_| Continuum::new(&problem.mesh, material_state(&problem.mesh, &v.masks), rigid, problem.attachments.clone()))
}

/// Load steps drawn as deformation frames.
pub fn frame_steps(n_steps: usize) -> Vec<usize> {
    let mut steps: Vec<usize> = (1..=4).map(|k| (k * n_steps).div_ceil(4)).collect();
    steps.dedup();
    steps
}

fn breakdown_text(a: &Analysis) -> String {
    let mut s = String::new();
    let line = |s: &mut String, k: &str, v: String| s.push_str(&format!("{k} = {v}\n"));
    line(&mut s, "objective", format!("{:?}", a.objective));
    line(&mut s, "feasible", a.feasible().to_string());
    if let Some(f) = &a.failure {
        line(&mut s, "failure", f.to_string());
    }
    line(&mut s, "volume_fraction", format!("{:?}", a.volume_fraction));
    if let Some(ObjectiveBreakdown { a_err, b_err, l_err, theta_err, penalty, .. }) = a.breakdown {
        line(&mut s, "a_err", format!("{a_err:?}"));
        line(&mut s, "b_err", format!("{b_err:?}"));
        line(&mut s, "l_err", format!("{l_err:?}"));
        line(&mut s, "theta_err", format!("{theta_err:?}"));
        line(&mut s, "volume_penalty", format!("{penalty:?}"));
    }
    if let Some(d) = &a.descriptor {
        line(&mut s, "path_length", format!("{:?}", d.length));
        line(&mut s, "path_orientation", format!("{:?}", d.theta));
    }
    if let Some(st) = &a.solve {
        line(&mut s, "newton_iterations", st.iterations.to_string());
        line(&mut s, "contact", st.contact_occurred().to_string());
    }
    s
}

/// Write the per-candidate artifacts. Returns the failure reason, if any.
fn write_candidate(dir: &Path, problem: &Problem, a: &Analysis) -> Result<Option<String>> {
    write(dir, "best_design.txt", &a.design.to_text())?;
    write(dir, "analysis.txt", &breakdown_text(a))?;
    let topo = match &a.continuum {
        Some(c) => topology_svg(c, &a.design.masks, "topology"),
        None => topology_svg(&topology_of(problem, &a.design), &a.design.masks, "topology"),
    };
    write(dir, "topology.svg", &topo)?;
    if let (Some(model), Some(st)) = (&a.model, &a.solve) {
        write(dir, "path_actual.csv", &write_path_csv(&a.actual_path))?;
        let mut report = String::from("step,id,mode,g_n,lambda\n");
        for rec in &st.steps {
            for row in &rec.contact_rows {
                report.push_str(row);
                report.push('\n');
            }
        }
        write(dir, "contact_report.csv", &report)?;
        for k in frame_steps(st.steps.len() - 1) {
            let rec = &st.steps[k];
            let svg = deformation_svg(model, &rec.u, &a.actual_path[..=k], &problem.specified_path, &format!("step {k}"));
            write(dir, &format!("deform_step_{k:02}.svg"), &svg)?;
        }
    }
    Ok(a.failure.as_ref().map(|f| f.to_string()))
}

#[derive(Debug, Clone)]
pub struct SynthesisReport {
    pub outcome: Option<SearchOutcome>,
    /// Reason the artifact set is incomplete.
    pub failure: Option<String>,
    pub out_dir: PathBuf,
}

struct Streamer {
    csv: fs::File,
    dir: PathBuf,
    error: Option<String>,
}

impl SearchObserver for Streamer {
    fn record(&mut self, r: &TraceRecord) {
        if let Err(e) = self.csv.write_all(SearchTrace::csv_row(r).as_bytes()) {
            self.error.get_or_insert(e.to_string());
        }
    }

    fn checkpoint(&mut self, c: &Checkpoint) {
        let _ = self.csv.flush();
        if let Err(e) = fs::write(self.dir.join("checkpoint.txt"), c.to_text()) {
            self.error.get_or_insert(e.to_string());
        }
    }
}

/// Run the search and write the artifact set. Specification errors are
/// returned; failures after the output directory exists leave a marker.
pub fn run_synthesis(spec_file: &Path, opts: &RunOptions) -> Result<SynthesisReport> {
    let base = load_spec(spec_file)?;
    let (scale, gp) = opts.combos(&base)[0];
    let spec = opts.apply(&base, scale, gp);
    spec.validate(&spec_file.display().to_string())?;
    let problem = load_problem(spec)?;
    let dir = opts.out_dir.clone();
    fs::create_dir_all(&dir)?;
    let _ = fs::remove_file(dir.join(FAILED_MARKER));
    write(&dir, "effective_config.txt", &problem.spec.to_text())?;
    let v0 = problem.initial_design();
    if opts.dry_run {
        let c = topology_of(&problem, &v0);
        write(&dir, "topology.svg", &topology_svg(&c, &v0.masks, "initial guess"))?;
        return Ok(SynthesisReport { outcome: None, failure: None, out_dir: dir });
    }
    match synthesize(&problem, &v0, &dir) {
        Ok(report) => {
            if let Some(reason) = &report.failure {
                mark_failed(&dir, reason);
            }
            Ok(report)
        }
        Err(e) => {
            mark_failed(&dir, &e.to_string());
            Err(e)
        }
    }
}

fn synthesize(problem: &Problem, v0: &DesignVector, dir: &Path) -> Result<SynthesisReport> {
    let cfg = SearchConfig::from_spec(&problem.spec);
    let mut csv = fs::File::create(dir.join("convergence.csv"))?;
    csv.write_all(SearchTrace::csv_header().as_bytes())?;
    let mut obs = Streamer { csv, dir: dir.to_path_buf(), error: None };
    let outcome = hill_climb(problem, v0, &cfg, &mut obs)?;
    obs.csv.flush()?;
    if let Some(e) = obs.error {
        return Err(Error::Io(e));
    }
    let best = analyze(problem, &outcome.best);
    let failure = write_candidate(dir, problem, &best)?;
    Ok(SynthesisReport { outcome: Some(outcome), failure, out_dir: dir.to_path_buf() })
}

/// One row of an analysis comparison.
#[derive(Debug, Clone)]
pub struct ComparisonRow {
    pub mesh_scale: usize,
    pub gauss_points: usize,
    pub feasible: bool,
    pub objective: f64,
    pub breakdown: Option<ObjectiveBreakdown>,
    pub length: f64,
    /// Relative length deviation from the specified path, in percent.
    pub zeta_l: f64,
    pub path: Vec<Vec2>,
    /// Largest pointwise distance from the first row's path, relative to
    /// that path's length.
    pub path_deviation: f64,
    pub seconds: f64,
    pub contact: bool,
    pub failure: Option<String>,
}

#[derive(Debug, Clone)]
pub struct AnalyzeReport {
    pub rows: Vec<ComparisonRow>,
    pub out_dir: PathBuf,
}

fn open_length(p: &[Vec2]) -> f64 {
    p.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
}

fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut s = String::from("mesh_scale,gauss_points,feasible,objective,a_err,b_err,l_err,theta_err,path_length,zeta_l,path_deviation,seconds,contact\n");
    for r in rows {
        let (a, b, l, t) = r.breakdown.map_or((f64::NAN, f64::NAN, f64::NAN, f64::NAN), |b| (b.a_err, b.b_err, b.l_err, b.theta_err));
        s.push_str(&format!(
            "{},{},{},{:?},{a:?},{b:?},{l:?},{t:?},{:?},{:?},{:?},{:.3},{}\n",
            r.mesh_scale,
            r.gauss_points,
            u8::from(r.feasible),
            r.objective,
            r.length,
            r.zeta_l,
            r.path_deviation,
            r.seconds,
            u8::from(r.contact)
        ));
    }
    s
}

/// Analyze a design for every requested (mesh scale, quadrature) pair. The
/// first pair writes the full artifact set; all pairs go to
/// `comparison.csv`.
pub fn analyze_candidate(spec_file: &Path, design_file: &Path, opts: &RunOptions) -> Result<AnalyzeReport> {
    let base = load_spec(spec_file)?;
    let text = fs::read_to_string(design_file).map_err(|e| Error::Io(format!("{}: {e}", design_file.display())))?;
    let design = DesignVector::from_text(&text)?;
    let combos = opts.combos(&base);
    let dir = opts.out_dir.clone();
    fs::create_dir_all(&dir)?;
    let _ = fs::remove_file(dir.join(FAILED_MARKER));
    let mut rows: Vec<ComparisonRow> = Vec::new();
    for (k, &(scale, gp)) in combos.iter().enumerate() {
        let spec = opts.apply(&base, scale, gp);
        spec.validate(&spec_file.display().to_string())?;
        if design.masks.len() != spec.masks_nx * spec.masks_ny {
            return Err(Error::InvalidArgument(format!(
                "design has {} masks, specification expects {}",
                design.masks.len(),
                spec.masks_nx * spec.masks_ny
            )));
        }
        let problem = load_problem(spec)?;
        let t0 = Instant::now();
        let a = analyze(&problem, &design);
        let seconds = t0.elapsed().as_secs_f64();
        if k == 0 {
            write(&dir, "effective_config.txt", &problem.spec.to_text())?;
            if let Some(reason) = write_candidate(&dir, &problem, &a)? {
                mark_failed(&dir, &reason);
            }
        }
        let length = open_length(&a.actual_path);
        let path_deviation = match rows.first() {
            Some(r0) if r0.path.len() == a.actual_path.len() && r0.length > 0.0 => {
                r0.path.iter().zip(&a.actual_path).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max) / r0.length
            }
            Some(_) => f64::NAN,
            None => 0.0,
        };
        rows.push(ComparisonRow {
            mesh_scale: scale,
            gauss_points: gp,
            feasible: a.feasible(),
            objective: a.objective,
            breakdown: a.breakdown,
            length: a.descriptor.as_ref().map_or(length, |d| d.length),
            zeta_l: a.descriptor.as_ref().map_or(f64::NAN, |d| length_deviation(problem.specified.length, d.length)),
            path: a.actual_path.clone(),
            path_deviation,
            seconds,
            contact: a.contact_occurred(),
            failure: a.failure.as_ref().map(|f| f.to_string()),
        });
    }
    write(&dir, "comparison.csv", &comparison_csv(&rows))?;
    Ok(AnalyzeReport { rows, out_dir: dir })
}
