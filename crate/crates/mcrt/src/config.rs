//! Run configuration: flat key=value files with flag overrides, validated
//! against the module preconditions at parse time, plus the pipeline
//! commands the CLI dispatches to.

use crate::brownian::{
    sample_disk_excursion, sample_plane, sample_sphere_excursion, BrownianPath, Topology,
};
use crate::embed::{embed_disk, embed_plane, embed_sphere, EmbedOptions, TutteEmbedding};
use crate::error::Error;
use crate::harmonic::SolveOptions;
use crate::map::{build_map, brute_force_adjacency, MatedCrtMap};
use crate::rotation::rotation_system_and_faces;
use crate::walk::{exit_law_vs_harmonic_measure, StopRule};
use crate::Result;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub gamma: f64,
    /// Number of grid cells.
    pub n: usize,
    pub topology: Topology,
    pub seed: u64,
    /// Plane embedding horizon (time half-width of the embedded window).
    pub horizon: f64,
    /// Sphere window margin.
    pub delta: f64,
    /// Disk duration and boundary-length parameters.
    pub area: f64,
    pub boundary_length: f64,
    pub tol: f64,
    pub max_iter: Option<usize>,
    pub walks: u64,
    pub out: PathBuf,
    pub export_csv: bool,
    pub export_svg: bool,
    pub export_map: bool,
    /// Run the quadratic adjacency oracle after building (n <= 500).
    pub verify: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            gamma: std::f64::consts::SQRT_2,
            n: 1000,
            topology: Topology::Disk,
            seed: 1,
            horizon: 1.0,
            delta: 0.05,
            area: 1.0,
            boundary_length: 1.0,
            tol: 1e-10,
            max_iter: None,
            walks: 10_000,
            out: PathBuf::from("out"),
            export_csv: true,
            export_svg: true,
            export_map: true,
            verify: false,
        }
    }
}

impl Topology {
    pub fn parse(s: &str) -> Result<Topology> {
        match s.to_ascii_lowercase().as_str() {
            "plane" => Ok(Topology::Plane),
            "sphere" => Ok(Topology::Sphere),
            "disk" => Ok(Topology::Disk),
            other => Err(Error::Domain(format!(
                "topology must be one of disk, plane, sphere; got {other}"
            ))),
        }
    }
}

impl RunConfig {
    /// Validate every numeric field against the module preconditions.
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma < 2.0) {
            return Err(Error::Domain(format!(
                "gamma must lie in the open interval (0, 2), got {}",
                self.gamma
            )));
        }
        if self.n < 2 {
            return Err(Error::Domain(format!("n must be at least 2, got {}", self.n)));
        }
        if !(self.horizon > 0.0) {
            return Err(Error::Domain(format!("horizon must be positive, got {}", self.horizon)));
        }
        if !(self.delta > 0.0 && self.delta < 0.25) {
            return Err(Error::Domain(format!(
                "delta must lie in (0, 1/4), got {}",
                self.delta
            )));
        }
        if !(self.area > 0.0) {
            return Err(Error::Domain(format!("area must be positive, got {}", self.area)));
        }
        if !(self.boundary_length > 0.0) {
            return Err(Error::Domain(format!(
                "boundary length must be positive, got {}",
                self.boundary_length
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Domain(format!("tol must be positive, got {}", self.tol)));
        }
        if self.walks == 0 {
            return Err(Error::Domain("walks must be positive".into()));
        }
        if self.topology == Topology::Sphere && 1.0 / self.n as f64 >= self.delta {
            return Err(Error::Domain(format!(
                "sphere windows need 1/n < delta; n = {} is too coarse for delta = {}",
                self.n, self.delta
            )));
        }
        Ok(())
    }

    /// Grid step implied by `n` for the configured topology. Plane windows
    /// span twice the horizon on each side.
    pub fn step(&self) -> f64 {
        match self.topology {
            Topology::Disk => self.area / self.n as f64,
            Topology::Sphere => 1.0 / self.n as f64,
            Topology::Plane => 4.0 * self.horizon / self.n as f64,
        }
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions { tol: self.tol, max_iter: self.max_iter, ..Default::default() }
    }

    pub fn embed_options(&self) -> EmbedOptions {
        EmbedOptions { solve: self.solve_options(), ..Default::default() }
    }

    /// Sample the configured path.
    pub fn sample(&self) -> Result<BrownianPath> {
        self.validate()?;
        match self.topology {
            Topology::Disk => sample_disk_excursion(
                self.gamma,
                self.step(),
                self.area,
                self.boundary_length,
                self.seed,
            ),
            Topology::Sphere => sample_sphere_excursion(self.gamma, self.step(), self.seed),
            Topology::Plane => sample_plane(
                self.gamma,
                self.step(),
                (-2.0 * self.horizon, 2.0 * self.horizon),
                self.seed,
            ),
        }
    }

    /// Embed a built map per the configured topology.
    pub fn embed(&self, map: &MatedCrtMap, path: &BrownianPath) -> Result<TutteEmbedding> {
        match self.topology {
            Topology::Disk => embed_disk(map, path, self.seed, &self.embed_options()),
            Topology::Plane => embed_plane(map, path, self.horizon, self.seed, &self.embed_options()),
            Topology::Sphere => embed_sphere(map, path, self.delta, self.seed, &self.embed_options()),
        }
    }

    /// Deterministic run directory for a subcommand.
    pub fn run_dir(&self, cmd: &str) -> PathBuf {
        self.out.join(format!(
            "{cmd}-{}-n{}-g{:.4}-s{}",
            self.topology, self.n, self.gamma, self.seed
        ))
    }

    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let parse_f64 = |v: &str| -> Result<f64> {
            v.parse::<f64>().map_err(|_| Error::Domain(format!("{key}: not a number: {v}")))
        };
        match key {
            "gamma" => self.gamma = parse_f64(value)?,
            "n" => {
                self.n = value
                    .parse()
                    .map_err(|_| Error::Domain(format!("n: not an integer: {value}")))?
            }
            "topology" => self.topology = Topology::parse(value)?,
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| Error::Domain(format!("seed: not an integer: {value}")))?
            }
            "horizon" => self.horizon = parse_f64(value)?,
            "delta" => self.delta = parse_f64(value)?,
            "area" => self.area = parse_f64(value)?,
            "boundary_length" => self.boundary_length = parse_f64(value)?,
            "tol" => self.tol = parse_f64(value)?,
            "max_iter" => {
                self.max_iter = Some(
                    value
                        .parse()
                        .map_err(|_| Error::Domain(format!("max_iter: not an integer: {value}")))?,
                )
            }
            "walks" => {
                self.walks = value
                    .parse()
                    .map_err(|_| Error::Domain(format!("walks: not an integer: {value}")))?
            }
            "out" => self.out = PathBuf::from(value),
            "csv" => self.export_csv = parse_bool(key, value)?,
            "svg" => self.export_svg = parse_bool(key, value)?,
            "map_binary" => self.export_map = parse_bool(key, value)?,
            "verify" => self.verify = parse_bool(key, value)?,
            other => return Err(Error::Domain(format!("unknown config key: {other}"))),
        }
        Ok(())
    }

    /// Load a flat key=value config file ('#' starts a comment).
    pub fn apply_file(&mut self, file: &Path) -> Result<()> {
        let text = std::fs::read_to_string(file)?;
        for (k, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Format(format!("{}:{}: expected key = value", file.display(), k + 1))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        other => Err(Error::Domain(format!("{key}: not a boolean: {other}"))),
    }
}

/// Summary written by the pipeline commands.
#[derive(Debug, Clone, Serialize)]
pub struct CommandReport {
    pub command: String,
    pub n: usize,
    pub gamma: f64,
    pub topology: String,
    pub seed: u64,
    pub artifacts: BTreeMap<String, String>,
    pub metrics: BTreeMap<String, f64>,
    /// Wall-clock seconds; excluded from determinism comparisons, like any
    /// timestamp.
    pub runtime_seconds: f64,
}

impl CommandReport {
    fn new(cfg: &RunConfig, command: &str) -> Self {
        Self {
            command: command.to_string(),
            n: cfg.n,
            gamma: cfg.gamma,
            topology: cfg.topology.to_string(),
            seed: cfg.seed,
            artifacts: BTreeMap::new(),
            metrics: BTreeMap::new(),
            runtime_seconds: 0.0,
        }
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let p = dir.join(name);
    std::fs::write(&p, text)?;
    Ok(p)
}

fn finish(
    mut report: CommandReport,
    dir: &Path,
    started: std::time::Instant,
) -> Result<CommandReport> {
    report.runtime_seconds = started.elapsed().as_secs_f64();
    write_text(dir, "report.json", &report.json())?;
    Ok(report)
}

/// `sample`: write the path binary and CSV.
pub fn cmd_sample(cfg: &RunConfig) -> Result<CommandReport> {
    let started = std::time::Instant::now();
    cfg.validate()?;
    let dir = cfg.run_dir("sample");
    std::fs::create_dir_all(&dir)?;
    let path = cfg.sample()?;
    let mut report = CommandReport::new(cfg, "sample");
    let bin = dir.join("path.bin");
    crate::io::write_path(&path, &bin)?;
    report.artifacts.insert("path_bin".into(), bin.display().to_string());
    if cfg.export_csv {
        let p = write_text(&dir, "path.csv", &crate::io::path_csv(&path))?;
        report.artifacts.insert("path_csv".into(), p.display().to_string());
    }
    report.metrics.insert("cells".into(), path.n_cells() as f64);
    report.metrics.insert("step".into(), path.step);
    finish(report, &dir, started)
}

/// `build`: sample, build the map, trace faces, optionally verify against
/// the quadratic oracle.
pub fn cmd_build(cfg: &RunConfig) -> Result<CommandReport> {
    let started = std::time::Instant::now();
    cfg.validate()?;
    let dir = cfg.run_dir("build");
    std::fs::create_dir_all(&dir)?;
    let path = cfg.sample()?;
    let map = build_map(&path)?;
    let faces = rotation_system_and_faces(&map)?;
    let mut report = CommandReport::new(cfg, "build");
    if cfg.export_map {
        let p = dir.join("map.bin");
        crate::io::write_map(&map, &p)?;
        report.artifacts.insert("map_bin".into(), p.display().to_string());
    }
    if cfg.export_csv {
        let p = write_text(&dir, "edges.csv", &crate::io::edge_list_csv(&map))?;
        report.artifacts.insert("edges_csv".into(), p.display().to_string());
        let p = write_text(&dir, "degree_histogram.csv", &crate::io::degree_histogram_csv(&map))?;
        report.artifacts.insert("degree_histogram_csv".into(), p.display().to_string());
    }
    if cfg.verify {
        if cfg.n <= 500 {
            let brute = brute_force_adjacency(&path)?;
            if brute != map.edge_records() {
                return Err(Error::Internal("sweep disagrees with the quadratic oracle".into()));
            }
            report.metrics.insert("oracle_verified".into(), 1.0);
        } else {
            return Err(Error::Domain(format!(
                "--verify needs n <= 500 for the quadratic oracle, got {}",
                cfg.n
            )));
        }
    }
    report.metrics.insert("edges".into(), map.edge_count() as f64);
    report.metrics.insert("boundary".into(), map.boundary_order.len() as f64);
    report
        .metrics
        .insert("euler_characteristic".into(), faces.euler_characteristic as f64);
    finish(report, &dir, started)
}

/// `embed`: full pipeline to the Tutte embedding with CSV/SVG artifacts.
pub fn cmd_embed(cfg: &RunConfig) -> Result<CommandReport> {
    let started = std::time::Instant::now();
    cfg.validate()?;
    let dir = cfg.run_dir("embed");
    std::fs::create_dir_all(&dir)?;
    let path = cfg.sample()?;
    let map = build_map(&path)?;
    let emb = cfg.embed(&map, &path)?;
    let mut report = CommandReport::new(cfg, "embed");
    if cfg.export_csv {
        let p = write_text(&dir, "embedding.csv", &crate::io::embedding_csv(&map, &emb))?;
        report.artifacts.insert("embedding_csv".into(), p.display().to_string());
    }
    if cfg.export_svg {
        let opts = crate::io::SvgOptions { color_by_time: true, draw_edges: cfg.n <= 50_000, ..Default::default() };
        let p = write_text(&dir, "embedding.svg", &crate::io::embedding_svg(&map, &emb, &opts))?;
        report.artifacts.insert("embedding_svg".into(), p.display().to_string());
        let curve = crate::embed::space_filling_polyline(&emb);
        let p = write_text(&dir, "space_filling.svg", &crate::io::curve_svg(&curve, 1000))?;
        report.artifacts.insert("space_filling_svg".into(), p.display().to_string());
    }
    report.metrics.insert("embedded".into(), emb.n_embedded() as f64);
    report.metrics.insert("residual".into(), emb.residual);
    report.metrics.insert("mean_value_residual".into(), emb.mean_value_residual);
    finish(report, &dir, started)
}

/// `walk`: exit-law experiment from the embedding root.
pub fn cmd_walk(cfg: &RunConfig) -> Result<CommandReport> {
    let started = std::time::Instant::now();
    cfg.validate()?;
    if cfg.topology != Topology::Disk {
        return Err(Error::Domain(
            "the walk experiment needs topology = disk (absorbing boundary)".into(),
        ));
    }
    let dir = cfg.run_dir("walk");
    std::fs::create_dir_all(&dir)?;
    let path = cfg.sample()?;
    let map = build_map(&path)?;
    let emb = cfg.embed(&map, &path)?;
    let rep = exit_law_vs_harmonic_measure(&map, &emb, emb.root, cfg.walks, cfg.seed ^ 0x9e3779b9)?;
    let mut report = CommandReport::new(cfg, "walk");
    if cfg.export_csv {
        let walk = crate::walk::simulate_walk(&map, emb.root, &StopRule::Boundary, cfg.seed)?;
        let curve = crate::walk::embed_walk(&walk, &emb)?;
        let p = write_text(&dir, "walk.csv", &crate::io::curve_csv(&curve))?;
        report.artifacts.insert("walk_csv".into(), p.display().to_string());
        if cfg.export_svg {
            let p = write_text(&dir, "walk.svg", &crate::io::curve_svg(&curve, 1000))?;
            report.artifacts.insert("walk_svg".into(), p.display().to_string());
        }
    }
    report.metrics.insert("walks".into(), rep.walks as f64);
    report.metrics.insert("ks".into(), rep.ks);
    report.metrics.insert("mean_steps".into(), rep.mean_steps);
    finish(report, &dir, started)
}

/// `diag`: diagnostics report; `Ok(false)` inside the report's pass flags
/// maps to a nonzero exit code in the CLI.
pub fn cmd_diag(cfg: &RunConfig) -> Result<(CommandReport, bool)> {
    let started = std::time::Instant::now();
    cfg.validate()?;
    let dir = cfg.run_dir("diag");
    std::fs::create_dir_all(&dir)?;
    let path = cfg.sample()?;
    let map = build_map(&path)?;
    let emb = cfg.embed(&map, &path)?;
    let faces = rotation_system_and_faces(&map)?;
    let diag = crate::diag::diagnostics_report(&map, &emb, &faces)?;
    write_text(&dir, "diagnostics.json", &serde_json::to_string_pretty(&diag).unwrap())?;
    let text = format!(
        "n = {}\nedges = {}\nboundary = {}\neuler = {}\ninterior faces all triangles = {}\n\
         mean interior degree = {:.4}\nembedding energy = {:.6}\nmean value residual = {:.3e}\n\
         max face diameter = {:.6}\npass = {}\n",
        diag.n,
        diag.edges,
        diag.boundary_size,
        diag.euler_characteristic,
        diag.interior_faces_all_triangles,
        diag.mean_interior_degree,
        diag.embedding_energy,
        diag.mean_value_residual,
        diag.max_face_diameter,
        diag.pass.all
    );
    write_text(&dir, "diagnostics.txt", &text)?;
    let mut report = CommandReport::new(cfg, "diag");
    report.metrics.insert("pass".into(), diag.pass.all as u8 as f64);
    report.metrics.insert("mean_interior_degree".into(), diag.mean_interior_degree);
    let all = diag.pass.all;
    Ok((finish(report, &dir, started)?, all))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_names_the_precondition() {
        let mut cfg = RunConfig { gamma: 2.5, ..Default::default() };
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("(0, 2)"), "{err}");
        cfg.gamma = 1.0;
        cfg.delta = 0.3;
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("(0, 1/4)"), "{err}");
    }

    #[test]
    fn config_file_and_overrides() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("run.cfg");
        std::fs::write(&file, "gamma = 1.25\nn = 64\ntopology = sphere # comment\n").unwrap();
        let mut cfg = RunConfig::default();
        cfg.apply_file(&file).unwrap();
        assert_eq!(cfg.gamma, 1.25);
        assert_eq!(cfg.n, 64);
        assert_eq!(cfg.topology, Topology::Sphere);
        cfg.set("gamma", "0.9").unwrap();
        assert_eq!(cfg.gamma, 0.9);
        assert!(cfg.set("bogus", "1").is_err());
        assert!(cfg.set("gamma", "abc").is_err());
    }

    #[test]
    fn pipeline_commands_are_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig {
            n: 300,
            seed: 5,
            out: dir.path().join("a"),
            walks: 500,
            ..Default::default()
        };
        cmd_sample(&cfg).unwrap();
        cmd_build(&cfg).unwrap();
        cmd_embed(&cfg).unwrap();
        let cfg_b = RunConfig { out: dir.path().join("b"), ..cfg.clone() };
        cmd_sample(&cfg_b).unwrap();
        cmd_build(&cfg_b).unwrap();
        cmd_embed(&cfg_b).unwrap();
        for rel in [
            "sample-disk-n300-g1.4142-s5/path.bin",
            "build-disk-n300-g1.4142-s5/map.bin",
            "build-disk-n300-g1.4142-s5/edges.csv",
            "embed-disk-n300-g1.4142-s5/embedding.csv",
            "embed-disk-n300-g1.4142-s5/embedding.svg",
        ] {
            let a = std::fs::read(dir.path().join("a").join(rel)).unwrap();
            let b = std::fs::read(dir.path().join("b").join(rel)).unwrap();
            assert_eq!(a, b, "artifact differs: {rel}");
        }
    }

    #[test]
    fn build_verify_mode() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig {
            n: 200,
            seed: 3,
            verify: true,
            out: dir.path().to_path_buf(),
            ..Default::default()
        };
        let rep = cmd_build(&cfg).unwrap();
        assert_eq!(rep.metrics["oracle_verified"], 1.0);
        let cfg_big = RunConfig { n: 1000, ..cfg };
        assert!(cmd_build(&cfg_big).is_err());
    }

    #[test]
    fn path_roundtrip_through_sample_cmd() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig { n: 128, out: dir.path().to_path_buf(), ..Default::default() };
        let rep = cmd_sample(&cfg).unwrap();
        let file = PathBuf::from(&rep.artifacts["path_bin"]);
        let back = crate::io::read_path(&file).unwrap();
        let orig = cfg.sample().unwrap();
        assert_eq!(back.l, orig.l);
        assert_eq!(back.r, orig.r);
    }
}
