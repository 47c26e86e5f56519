//! Problem specification: a line-oriented `key = value` format with
//! `[section]` headers, and its resolution against a mesh.
//!
//! ```text
//! [mesh]
//! nx = 10
//! ny = 10
//! [load]
//! input = 0.5, 8.66
//! direction = 1, 0
//! [ports]
//! output = 15.5, 8.66
//! fixed = 0, 0, 16, 0.9
//! ```
//!
//! Points are given in mm and snap to the nearest mesh node. Each `fixed`
//! line is a box `x0, y0, x1, y1`; every mesh node inside a box is clamped.
//! `#` starts a comment.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::design::{DesignBounds, DesignVector};
use crate::fem::{Kinematics, MaterialParams, TriangleRule};
use crate::fsd::{describe_open, read_path_csv, ObjectiveWeights, PathDescriptor};
use crate::geom::Vec2;
use crate::mesh::{generate_honeycomb, HexMesh};
use crate::smoothing::{Attachments, SecondStage};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    // [mesh]
    pub mesh_nx: usize,
    pub mesh_ny: usize,
    pub circumradius: f64,
    // [masks]
    pub masks_nx: usize,
    pub masks_ny: usize,
    /// Initial radius; half the mask pitch when absent.
    pub mask_radius: Option<f64>,
    pub mask_s: u8,
    pub mask_f: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub f_max: f64,
    // [material]
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    pub thickness: f64,
    pub kinematics: Kinematics,
    // [load]
    pub input: Vec2,
    pub direction: Vec2,
    pub force: f64,
    pub force_min: f64,
    pub force_max: f64,
    pub load_steps: usize,
    // [ports]
    pub output: Vec2,
    pub fixed: Vec<[f64; 4]>,
    // [path]
    pub path_file: String,
    pub harmonics: usize,
    // [objective]
    pub weights: ObjectiveWeights,
    // [analysis]
    pub beta: usize,
    pub gauss_points: usize,
    pub jacobian_floor: f64,
    pub second_stage: SecondStage,
    pub eps_n_factor: f64,
    pub eps_s_factor: f64,
    pub self_band: f64,
    pub g_tol_factor: f64,
    pub max_augmentations: usize,
    pub contact: bool,
    // [search]
    pub seed: u64,
    pub max_evals: usize,
    pub pr: f64,
    pub m_max: f64,
    pub penalty: f64,
    pub checkpoint_every: usize,
}

impl Default for ProblemSpec {
    fn default() -> Self {
        let a = 1.0;
        let ly = 25.0 * 3f64.sqrt() * a;
        ProblemSpec {
            mesh_nx: 25,
            mesh_ny: 25,
            circumradius: a,
            masks_nx: 8,
            masks_ny: 8,
            mask_radius: None,
            mask_s: 0,
            mask_f: 0.5,
            r_min: 0.1,
            r_max: 8.0,
            f_max: 0.9,
            youngs_modulus: 2100.0,
            poisson_ratio: 0.33,
            thickness: 1.0,
            kinematics: Kinematics::PlaneStrain,
            input: Vec2::new(0.0, ly / 2.0),
            direction: Vec2::new(1.0, 0.0),
            force: 100.0,
            force_min: -500.0,
            force_max: 500.0,
            load_steps: 20,
            output: Vec2::new(38.0, ly / 2.0),
            fixed: vec![[0.0, -0.1, 38.0, 0.1]],
            path_file: "path.csv".into(),
            harmonics: 50,
            weights: ObjectiveWeights::default(),
            beta: 10,
            gauss_points: 25,
            jacobian_floor: 0.05,
            second_stage: SecondStage::MaskIntersection,
            eps_n_factor: 50.0,
            eps_s_factor: 4.0,
            self_band: 0.5,
            g_tol_factor: 1e-3,
            max_augmentations: 10,
            contact: true,
            seed: 1,
            max_evals: 20000,
            pr: 0.08,
            m_max: 6.0,
            penalty: 1e6,
            checkpoint_every: 100,
        }
    }
}

fn kinematics_name(k: Kinematics) -> &'static str {
    match k {
        Kinematics::PlaneStrain => "plane_strain",
        Kinematics::PlaneStress => "plane_stress",
    }
}

fn second_stage_name(s: SecondStage) -> &'static str {
    match s {
        SecondStage::MaskIntersection => "mask_intersection",
        SecondStage::Off => "off",
    }
}

const SECTIONS: [&str; 9] = ["mesh", "masks", "material", "load", "ports", "path", "objective", "analysis", "search"];

struct Line<'a> {
    file: &'a str,
    line: usize,
    key: &'a str,
    value: &'a str,
}

impl Line<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { file: self.file.into(), line: self.line, msg: msg.into() }
    }

    fn f64(&self) -> Result<f64> {
        let v: f64 = self.value.parse().map_err(|_| self.err(format!("`{}` expects a number, got `{}`", self.key, self.value)))?;
        if !v.is_finite() {
            return Err(self.err(format!("`{}` must be finite", self.key)));
        }
        Ok(v)
    }

    fn usize(&self) -> Result<usize> {
        self.value.parse().map_err(|_| self.err(format!("`{}` expects a non-negative integer, got `{}`", self.key, self.value)))
    }

    fn u64(&self) -> Result<u64> {
        self.value.parse().map_err(|_| self.err(format!("`{}` expects a non-negative integer, got `{}`", self.key, self.value)))
    }

    fn bool(&self) -> Result<bool> {
        match self.value {
            "true" | "on" | "yes" => Ok(true),
            "false" | "off" | "no" => Ok(false),
            v => Err(self.err(format!("`{}` expects true or false, got `{v}`", self.key))),
        }
    }

    fn list(&self, n: usize) -> Result<Vec<f64>> {
        let parts: Vec<&str> = self.value.split(',').map(str::trim).collect();
        if parts.len() != n {
            return Err(self.err(format!("`{}` expects {n} comma-separated numbers", self.key)));
        }
        parts
            .iter()
            .map(|p| p.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| self.err(format!("bad number `{p}` in `{}`", self.key))))
            .collect()
    }

    fn point(&self) -> Result<Vec2> {
        let v = self.list(2)?;
        Ok(Vec2::new(v[0], v[1]))
    }
}

impl ProblemSpec {
    /// Parse a specification. Keys that are absent keep their defaults;
    /// unknown sections or keys are errors naming the key and line.
    pub fn parse(text: &str, file: &str) -> Result<Self> {
        let mut spec = ProblemSpec::default();
        let mut section: Option<&str> = None;
        let mut seen: Vec<(String, String)> = Vec::new();
        let mut fixed_given = false;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let name = name.trim();
                if !SECTIONS.contains(&name) {
                    return Err(Error::Parse { file: file.into(), line: line_no, msg: format!("unknown section `[{name}]`") });
                }
                section = Some(SECTIONS.iter().find(|s| **s == name).copied().expect("listed"));
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(Error::Parse { file: file.into(), line: line_no, msg: format!("expected `key = value`, got `{content}`") });
            };
            let l = Line { file, line: line_no, key: key.trim(), value: value.trim() };
            let Some(sec) = section else {
                return Err(l.err(format!("key `{}` appears before any [section]", l.key)));
            };
            if l.key != "fixed" {
                let id = (sec.to_string(), l.key.to_string());
                if seen.contains(&id) {
                    return Err(l.err(format!("duplicate key `{}` in [{sec}]", l.key)));
                }
                seen.push(id);
            }
            let s = &mut spec;
            match (sec, l.key) {
                ("mesh", "nx") => s.mesh_nx = l.usize()?,
                ("mesh", "ny") => s.mesh_ny = l.usize()?,
                ("mesh", "circumradius") => s.circumradius = l.f64()?,
                ("masks", "nx") => s.masks_nx = l.usize()?,
                ("masks", "ny") => s.masks_ny = l.usize()?,
                ("masks", "initial_radius") => s.mask_radius = Some(l.f64()?),
                ("masks", "initial_s") => {
                    s.mask_s = match l.usize()? {
                        v @ (0 | 1) => v as u8,
                        _ => return Err(l.err("`initial_s` must be 0 or 1")),
                    }
                }
                ("masks", "initial_f") => s.mask_f = l.f64()?,
                ("masks", "r_min") => s.r_min = l.f64()?,
                ("masks", "r_max") => s.r_max = l.f64()?,
                ("masks", "f_max") => s.f_max = l.f64()?,
                ("material", "youngs_modulus") => s.youngs_modulus = l.f64()?,
                ("material", "poisson_ratio") => s.poisson_ratio = l.f64()?,
                ("material", "thickness") => s.thickness = l.f64()?,
                ("material", "kinematics") => {
                    s.kinematics = match l.value {
                        "plane_strain" => Kinematics::PlaneStrain,
                        "plane_stress" => Kinematics::PlaneStress,
                        v => return Err(l.err(format!("unknown kinematics `{v}`"))),
                    }
                }
                ("load", "input") => s.input = l.point()?,
                ("load", "direction") => s.direction = l.point()?,
                ("load", "force") => s.force = l.f64()?,
                ("load", "force_min") => s.force_min = l.f64()?,
                ("load", "force_max") => s.force_max = l.f64()?,
                ("load", "steps") => s.load_steps = l.usize()?,
                ("ports", "output") => s.output = l.point()?,
                ("ports", "fixed") => {
                    if !fixed_given {
                        s.fixed.clear();
                        fixed_given = true;
                    }
                    let v = l.list(4)?;
                    s.fixed.push([v[0], v[1], v[2], v[3]]);
                }
                ("path", "file") => s.path_file = l.value.to_string(),
                ("path", "harmonics") => s.harmonics = l.usize()?,
                ("objective", "w_a") => s.weights.w_a = l.f64()?,
                ("objective", "w_b") => s.weights.w_b = l.f64()?,
                ("objective", "w_l") => s.weights.w_l = l.f64()?,
                ("objective", "w_theta") => s.weights.w_theta = l.f64()?,
                ("objective", "lambda_v") => s.weights.lambda_v = l.f64()?,
                ("objective", "volume_fraction") => s.weights.v_star = l.f64()?,
                ("analysis", "beta") => s.beta = l.usize()?,
                ("analysis", "gauss_points") => s.gauss_points = l.usize()?,
                ("analysis", "jacobian_floor") => s.jacobian_floor = l.f64()?,
                ("analysis", "second_stage") => {
                    s.second_stage = match l.value {
                        "mask_intersection" => SecondStage::MaskIntersection,
                        "off" => SecondStage::Off,
                        v => return Err(l.err(format!("unknown second_stage rule `{v}`"))),
                    }
                }
                ("analysis", "eps_n_factor") => s.eps_n_factor = l.f64()?,
                ("analysis", "eps_s_factor") => s.eps_s_factor = l.f64()?,
                ("analysis", "self_band") => s.self_band = l.f64()?,
                ("analysis", "g_tol_factor") => s.g_tol_factor = l.f64()?,
                ("analysis", "max_augmentations") => s.max_augmentations = l.usize()?,
                ("analysis", "contact") => s.contact = l.bool()?,
                ("search", "seed") => s.seed = l.u64()?,
                ("search", "max_evals") => s.max_evals = l.usize()?,
                ("search", "pr") => s.pr = l.f64()?,
                ("search", "m_max") => s.m_max = l.f64()?,
                ("search", "penalty") => s.penalty = l.f64()?,
                ("search", "checkpoint_every") => s.checkpoint_every = l.usize()?,
                (sec, key) => return Err(l.err(format!("unknown key `{key}` in [{sec}]"))),
            }
        }
        spec.validate(file)?;
        Ok(spec)
    }

    /// Range checks on the parsed values.
    pub fn validate(&self, file: &str) -> Result<()> {
        let bad = |msg: String| Err(Error::Parse { file: file.into(), line: 0, msg });
        if self.mesh_nx == 0 || self.mesh_ny == 0 || !(self.circumradius > 0.0) {
            return bad("mesh needs nx, ny >= 1 and circumradius > 0".into());
        }
        if self.masks_nx == 0 || self.masks_ny == 0 {
            return bad("mask grid needs nx, ny >= 1".into());
        }
        if !(self.r_min > 0.0 && self.r_min <= self.r_max) || !(0.0..1.0).contains(&self.f_max) {
            return bad("need 0 < r_min <= r_max and 0 <= f_max < 1".into());
        }
        if !(0.0..=self.f_max).contains(&self.mask_f) {
            return bad(format!("initial_f must lie in [0, {}]", self.f_max));
        }
        if let Some(r) = self.mask_radius {
            if r < self.r_min || r > self.r_max {
                return bad(format!("initial_radius must lie in [{}, {}]", self.r_min, self.r_max));
            }
        }
        if MaterialParams::new(self.youngs_modulus, self.poisson_ratio).is_err() || !(self.thickness > 0.0) {
            return bad("need E > 0, 0 <= nu < 0.5 and thickness > 0".into());
        }
        if !(self.direction.norm() > 0.0) {
            return bad("force direction must be nonzero".into());
        }
        if !(self.force_min <= self.force && self.force <= self.force_max) {
            return bad("force must lie in [force_min, force_max]".into());
        }
        if self.load_steps == 0 {
            return bad("steps must be at least 1".into());
        }
        if self.fixed.is_empty() {
            return bad("at least one `fixed` box is required".into());
        }
        if self.harmonics == 0 {
            return bad("harmonics must be at least 1".into());
        }
        if TriangleRule::new(self.gauss_points).is_err() {
            return bad(format!("gauss_points must be 1, 3, 7 or 25, got {}", self.gauss_points)).map(|_| ());
        }
        let w = &self.weights;
        if [w.w_a, w.w_b, w.w_l, w.w_theta, w.lambda_v].iter().any(|x| *x < 0.0) || !(0.0..=1.0).contains(&w.v_star) {
            return bad("weights must be non-negative and volume_fraction in [0, 1]".into());
        }
        if !(self.pr > 0.0 && self.pr < 1.0) || !(self.m_max > 0.0) || !(self.penalty > 0.0) {
            return bad("need 0 < pr < 1, m_max > 0 and penalty > 0".into());
        }
        if !(self.jacobian_floor >= 0.0 && self.jacobian_floor < 1.0) {
            return bad("jacobian_floor must lie in [0, 1)".into());
        }
        Ok(())
    }

    /// Effective configuration; parses back to an identical spec.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let p = |v: &Vec2| format!("{:?}, {:?}", v.x, v.y);
        let _ = writeln!(s, "[mesh]\nnx = {}\nny = {}\ncircumradius = {:?}", self.mesh_nx, self.mesh_ny, self.circumradius);
        let _ = writeln!(s, "\n[masks]\nnx = {}\nny = {}", self.masks_nx, self.masks_ny);
        if let Some(r) = self.mask_radius {
            let _ = writeln!(s, "initial_radius = {r:?}");
        }
        let _ = writeln!(
            s,
            "initial_s = {}\ninitial_f = {:?}\nr_min = {:?}\nr_max = {:?}\nf_max = {:?}",
            self.mask_s, self.mask_f, self.r_min, self.r_max, self.f_max
        );
        let _ = writeln!(
            s,
            "\n[material]\nyoungs_modulus = {:?}\npoisson_ratio = {:?}\nthickness = {:?}\nkinematics = {}",
            self.youngs_modulus,
            self.poisson_ratio,
            self.thickness,
            kinematics_name(self.kinematics)
        );
        let _ = writeln!(
            s,
            "\n[load]\ninput = {}\ndirection = {}\nforce = {:?}\nforce_min = {:?}\nforce_max = {:?}\nsteps = {}",
            p(&self.input),
            p(&self.direction),
            self.force,
            self.force_min,
            self.force_max,
            self.load_steps
        );
        let _ = writeln!(s, "\n[ports]\noutput = {}", p(&self.output));
        for b in &self.fixed {
            let _ = writeln!(s, "fixed = {:?}, {:?}, {:?}, {:?}", b[0], b[1], b[2], b[3]);
        }
        let _ = writeln!(s, "\n[path]\nfile = {}\nharmonics = {}", self.path_file, self.harmonics);
        let w = &self.weights;
        let _ = writeln!(
            s,
            "\n[objective]\nw_a = {:?}\nw_b = {:?}\nw_l = {:?}\nw_theta = {:?}\nlambda_v = {:?}\nvolume_fraction = {:?}",
            w.w_a, w.w_b, w.w_l, w.w_theta, w.lambda_v, w.v_star
        );
        let _ = writeln!(
            s,
            "\n[analysis]\nbeta = {}\ngauss_points = {}\njacobian_floor = {:?}\nsecond_stage = {}\neps_n_factor = {:?}\neps_s_factor = {:?}\nself_band = {:?}\ng_tol_factor = {:?}\nmax_augmentations = {}\ncontact = {}",
            self.beta,
            self.gauss_points,
            self.jacobian_floor,
            second_stage_name(self.second_stage),
            self.eps_n_factor,
            self.eps_s_factor,
            self.self_band,
            self.g_tol_factor,
            self.max_augmentations,
            self.contact
        );
        let _ = writeln!(
            s,
            "\n[search]\nseed = {}\nmax_evals = {}\npr = {:?}\nm_max = {:?}\npenalty = {:?}\ncheckpoint_every = {}",
            self.seed, self.max_evals, self.pr, self.m_max, self.penalty, self.checkpoint_every
        );
        s
    }

    /// Refine the analysis mesh by an integer factor over the same domain.
    pub fn with_mesh_scale(&self, scale: usize) -> Self {
        let mut s = self.clone();
        s.mesh_nx *= scale.max(1);
        s.mesh_ny *= scale.max(1);
        s.circumradius /= scale.max(1) as f64;
        s
    }
}

/// A specification resolved against its mesh and specified path.
#[derive(Debug, Clone)]
pub struct Problem {
    pub spec: ProblemSpec,
    pub mesh: HexMesh,
    pub attachments: Attachments,
    pub specified_path: Vec<Vec2>,
    pub specified: PathDescriptor,
    pub bounds: DesignBounds,
    pub material: MaterialParams,
    pub rule: TriangleRule,
}

impl Problem {
    pub fn new(spec: ProblemSpec, specified_path: Vec<Vec2>) -> Result<Self> {
        spec.validate("spec")?;
        let mesh = generate_honeycomb(spec.mesh_nx, spec.mesh_ny, spec.circumradius)?;
        let input = mesh.nearest_node(&spec.input);
        let output = mesh.nearest_node(&spec.output);
        let fixed: Vec<usize> = (0..mesh.num_nodes())
            .filter(|&n| {
                let p = mesh.nodes[n];
                spec.fixed.iter().any(|b| p.x >= b[0] && p.x <= b[2] && p.y >= b[1] && p.y <= b[3])
            })
            .collect();
        if fixed.is_empty() {
            return Err(Error::InvalidArgument("no mesh node lies inside the fixed boxes".into()));
        }
        if input == output {
            return Err(Error::InvalidArgument("input and output snap to the same node".into()));
        }
        let specified = describe_open(&specified_path, spec.harmonics)?;
        let (lx, ly) = mesh.domain_size;
        let bounds = DesignBounds {
            x: (0.0, lx),
            y: (0.0, ly),
            r: (spec.r_min, spec.r_max),
            f_max: spec.f_max,
            force: (spec.force_min, spec.force_max),
        };
        let material = MaterialParams::new(spec.youngs_modulus, spec.poisson_ratio)?.with_kinematics(spec.kinematics);
        let rule = TriangleRule::new(spec.gauss_points)?;
        Ok(Problem {
            attachments: Attachments { input, output, fixed },
            spec,
            mesh,
            specified_path,
            specified,
            bounds,
            material,
            rule,
        })
    }

    /// Read a specification file and the path file it references (relative
    /// to the specification's directory).
    pub fn load(spec_file: &Path) -> Result<Self> {
        let spec = ProblemSpec::parse(&std::fs::read_to_string(spec_file)?, &spec_file.display().to_string())?;
        let path = resolve(spec_file, &spec.path_file);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("path file {}: {e}", path.display())))?;
        let points = read_path_csv(&text, &path.display().to_string())?;
        Problem::new(spec, points)
    }

    /// The initial design: masks on the configured grid.
    pub fn initial_design(&self) -> DesignVector {
        let s = &self.spec;
        let (lx, ly) = self.mesh.domain_size;
        let pitch = (lx / s.masks_nx as f64).min(ly / s.masks_ny as f64);
        let r = s.mask_radius.unwrap_or(0.5 * pitch).clamp(s.r_min, s.r_max);
        DesignVector::grid(s.masks_nx, s.masks_ny, lx, ly, r, s.mask_s, s.mask_f, s.force)
    }

    /// Rebuild with a different spec (same specified path).
    pub fn with_spec(&self, spec: ProblemSpec) -> Result<Self> {
        Problem::new(spec, self.specified_path.clone())
    }
}

pub fn resolve(spec_file: &Path, relative: &str) -> PathBuf {
    let p = Path::new(relative);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        spec_file.parent().unwrap_or(Path::new(".")).join(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# demo
[mesh]
nx = 6
ny = 4
[load]
input = 0.5, 3.4
direction = 0, 1
force = 20
[ports]
output = 9.0, 3.4
fixed = 0, -0.1, 9.5, 0.1
fixed = 0, 6.8, 1, 7.0
[analysis]
gauss_points = 7
second_stage = off
[search]
seed = 42
";

    #[test]
    fn parses_sections_and_defaults() {
        let s = ProblemSpec::parse(SAMPLE, "t").unwrap();
        assert_eq!((s.mesh_nx, s.mesh_ny), (6, 4));
        assert_eq!(s.direction, Vec2::new(0.0, 1.0));
        assert_eq!(s.fixed.len(), 2);
        assert_eq!(s.gauss_points, 7);
        assert_eq!(s.second_stage, SecondStage::Off);
        assert_eq!(s.seed, 42);
        assert_eq!(s.pr, 0.08);
        assert_eq!(s.m_max, 6.0);
    }

    #[test]
    fn unknown_key_names_key_and_line() {
        let text = "[mesh]\nnx = 3\nbogus = 1\n";
        match ProblemSpec::parse(text, "t") {
            Err(Error::Parse { line, msg, .. }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("bogus"));
            }
            other => panic!("{other:?}"),
        }
        assert!(ProblemSpec::parse("[nope]\n", "t").is_err());
        assert!(ProblemSpec::parse("nx = 3\n", "t").is_err());
        assert!(ProblemSpec::parse("[mesh]\nnx = 3\nnx = 4\n", "t").is_err());
        assert!(ProblemSpec::parse("[analysis]\ngauss_points = 4\n", "t").is_err());
    }

    #[test]
    fn effective_config_round_trips() {
        let mut s = ProblemSpec::parse(SAMPLE, "t").unwrap();
        s.mask_radius = Some(1.25);
        s.weights.w_theta = 0.1 + 0.2;
        let back = ProblemSpec::parse(&s.to_text(), "t").unwrap();
        assert_eq!(back, s);
        let d = ProblemSpec::default();
        assert_eq!(ProblemSpec::parse(&d.to_text(), "t").unwrap(), d);
    }

    #[test]
    fn resolves_ports() {
        let s = ProblemSpec::parse(SAMPLE, "t").unwrap();
        let path = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.5), Vec2::new(2.0, 0.0)];
        let p = Problem::new(s, path).unwrap();
        assert!(p.attachments.fixed.len() >= 6);
        assert!(p.attachments.fixed.iter().all(|&n| p.mesh.nodes[n].y < 0.1 || p.mesh.nodes[n].y > 6.8));
        assert!((p.mesh.nodes[p.attachments.output] - Vec2::new(9.0, 3.4)).norm() < 1.0);
        let v = p.initial_design();
        assert_eq!(v.masks.len(), 64);
        assert!(p.bounds.contains(&v));
    }
}
